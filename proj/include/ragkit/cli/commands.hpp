#pragma once
// The CLI commands, stream-parameterized so tests can drive them directly.
// Exit codes: 0 success, 1 partial failure (some inputs failed, work done
// for the rest), 2 hard failure (nothing accomplished).

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ragkit/eval/runner.hpp"
#include "ragkit/index/retrieval.hpp"
#include "ragkit/pipeline/config.hpp"
#include "ragkit/pipeline/ingest.hpp"

namespace ragkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitFailure = 2;

namespace detail {

inline std::filesystem::path index_file(const pipeline::PipelineConfig& cfg) {
    return cfg.output_dir / (cfg.ns + ".index.jsonl");
}

// Loads the persisted namespace; a missing file is an EmptyIndex telling the
// user what to run, not a bare IO error.
inline index::VectorStore load_store(const pipeline::PipelineConfig& cfg) {
    index::VectorStore store(cfg.metadata_limit_bytes);
    auto path = index_file(cfg);
    if (!std::filesystem::exists(path)) {
        raise(ErrorCode::EmptyIndex, "no index for namespace '" + cfg.ns + "' at " +
                                         path.string() + "; run `ragkit ingest` first");
    }
    store.load_namespace(cfg.ns, cfg.output_dir);
    return store;
}

inline std::string one_line(const std::string& text, std::size_t max_chars) {
    std::string out;
    for (char c : text) {
        out += (c == '\n' || c == '\r' || c == '\t') ? ' ' : c;
        if (out.size() >= max_chars) {
            out += "...";
            break;
        }
    }
    return out;
}

// Page markdowns of every previously ingested document, keyed by doc id.
inline std::map<std::string, std::vector<std::string>> ingested_page_markdowns(
    const std::filesystem::path& output_dir) {
    std::map<std::string, std::vector<std::string>> docs;
    if (!std::filesystem::is_directory(output_dir)) return docs;
    for (const auto& entry : std::filesystem::directory_iterator(output_dir)) {
        if (!entry.is_directory() ||
            !std::filesystem::exists(entry.path() / "document.md")) {
            continue;
        }
        std::vector<std::string> pages;
        for (int n = 0;; ++n) {
            auto page_path = entry.path() / ("page_" + std::to_string(n) + ".md");
            if (!std::filesystem::exists(page_path)) break;
            pages.push_back(parse::read_file_bytes(page_path.string()));
        }
        if (!pages.empty()) docs[entry.path().filename().string()] = std::move(pages);
    }
    return docs;
}

inline void print_hits(const std::vector<index::QueryHit>& hits, std::ostream& out) {
    out << std::fixed << std::setprecision(4);
    for (std::size_t i = 0; i < hits.size(); ++i) {
        const auto& h = hits[i];
        out << (i + 1) << ". [" << h.metadata.value("kind", "?") << "] score=" << h.score
            << " doc=" << h.metadata.value("doc_id", "?");
        if (h.metadata.contains("page_index")) {
            out << " page=" << h.metadata["page_index"].get<int>();
        }
        out << " " << h.node_id << " :: " << one_line(h.source_text, 96) << "\n";
    }
}

}  // namespace detail

inline int cmd_ingest(const std::vector<std::filesystem::path>& inputs,
                      const pipeline::PipelineConfig& cfg, std::ostream& out,
                      std::ostream& err) {
    try {
        auto backends = pipeline::make_backends(cfg);
        index::VectorStore store(cfg.metadata_limit_bytes);
        if (std::filesystem::exists(detail::index_file(cfg))) {
            store.load_namespace(cfg.ns, cfg.output_dir);  // extend, don't clobber
        }
        auto summary = pipeline::ingest_paths(inputs, cfg, backends, store);
        if (summary.documents.empty() && summary.failures.empty()) {
            err << "error: no input documents found\n";
            return kExitFailure;
        }
        for (const auto& doc : summary.documents) {
            out << "ingested " << doc.source.doc_id << " (" << doc.pages.size() << " pages, "
                << doc.records_written << " records)\n";
            out << "  nodes:";
            for (const char* kind : {"header", "text", "table", "image", "page", "document",
                                     "qa"}) {
                auto it = doc.node_counts.find(kind);
                if (it != doc.node_counts.end()) out << " " << kind << "=" << it->second;
            }
            out << "\n";
            for (const auto& w : doc.warnings) err << "warning: " << doc.source.doc_id << ": "
                                                   << w << "\n";
        }
        for (const auto& f : summary.failures) {
            err << "failed: " << f.path.string() << ": " << f.error << "\n";
        }
        out << summary.documents.size() << " document(s) ingested, " << summary.total_records
            << " records in namespace '" << cfg.ns << "'\n";
        if (summary.documents.empty()) return kExitFailure;
        return summary.failures.empty() ? kExitOk : kExitPartial;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

inline int cmd_query(const std::string& text, bool prefilter,
                     const pipeline::PipelineConfig& cfg, std::ostream& out,
                     std::ostream& err) {
    try {
        auto backends = pipeline::make_backends(cfg);
        auto store = detail::load_store(cfg);
        std::optional<std::set<std::string>> allowed;
        if (prefilter) {
            auto docs = index::prefilter_documents(store, cfg.ns, *backends.embedder, text,
                                                   cfg.prefilter_m);
            if (!docs.empty()) allowed = std::move(docs);
        }
        auto hits = index::retrieve(store, cfg.ns, *backends.embedder, text, cfg.k, allowed);
        detail::print_hits(hits, out);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

inline int cmd_eval(const std::optional<std::filesystem::path>& dataset_path, bool generate,
                    bool prefilter, const pipeline::PipelineConfig& cfg, std::ostream& out,
                    std::ostream& err) {
    try {
        auto backends = pipeline::make_backends(cfg);
        auto store = detail::load_store(cfg);

        std::vector<eval::EvalItem> items;
        if (generate) {
            auto docs = detail::ingested_page_markdowns(cfg.output_dir);
            for (const auto& [doc_id, pages] : docs) {
                auto generated = eval::generate_dataset(*backends.agent, doc_id, pages);
                items.insert(items.end(), generated.begin(), generated.end());
            }
            if (items.empty()) {
                err << "error: no ingested documents under " << cfg.output_dir.string()
                    << " to generate a dataset from\n";
                return kExitFailure;
            }
            eval::save_dataset(items, cfg.output_dir / "dataset.jsonl");
            out << "generated dataset of " << items.size() << " items\n";
        } else {
            auto path = dataset_path ? *dataset_path : cfg.output_dir / "dataset.jsonl";
            items = eval::load_dataset(path);
            if (items.empty()) {
                err << "error: dataset " << path.string() << " holds no items\n";
                return kExitFailure;
            }
        }

        eval::EvalRunConfig run_cfg;
        run_cfg.k = cfg.k;
        run_cfg.prefilter = prefilter;
        run_cfg.prefilter_m = cfg.prefilter_m;
        run_cfg.jobs = cfg.jobs;
        auto report = eval::run_evaluation(items, store, cfg.ns, *backends.embedder,
                                           *backends.answerer, *backends.judge, run_cfg);

        pipeline::detail::write_text_file(cfg.output_dir / "eval_report.json",
                                          eval::report_to_json(report).dump(2) + "\n");
        auto text = eval::render_text_report(report);
        pipeline::detail::write_text_file(cfg.output_dir / "eval_report.txt", text);
        out << text;
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

inline int cmd_inspect(const std::string& node_id, const pipeline::PipelineConfig& cfg,
                       std::ostream& out, std::ostream& err) {
    try {
        auto slash = node_id.find('/');
        if (slash == std::string::npos) {
            err << "error: node ids look like <doc>/<kind>/<n>\n";
            return kExitFailure;
        }
        auto graph_path = cfg.output_dir / node_id.substr(0, slash) / "graph.json";
        if (!std::filesystem::exists(graph_path)) {
            err << "error: no graph at " << graph_path.string() << "\n";
            return kExitFailure;
        }
        auto g = NodeGraph::from_json(
            nlohmann::json::parse(parse::read_file_bytes(graph_path.string())));
        if (!g.has_node(node_id)) {
            err << "error: node " << node_id << " not in " << graph_path.string() << "\n";
            return kExitFailure;
        }
        const auto& n = g.node(node_id);
        out << node_id << "\n";
        out << "  kind: " << kind_name(n.kind) << "\n";
        if (n.page_index) out << "  page: " << *n.page_index << "\n";
        if (n.level) out << "  level: " << *n.level << "\n";
        if (!n.content.empty()) out << "  content: " << detail::one_line(n.content, 160) << "\n";
        if (n.summary) out << "  summary: " << detail::one_line(*n.summary, 160) << "\n";
        if (n.questions) {
            for (const auto& q : *n.questions) out << "  question: " << q << "\n";
        }
        for (const auto& e : g.edges()) {
            if (e.from != node_id) continue;
            out << "  " << relation_name(e.kind) << " -> " << e.to << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

inline int cmd_export(const std::string& what, const std::string& doc_id,
                      const pipeline::PipelineConfig& cfg, std::ostream& out,
                      std::ostream& err) {
    try {
        std::filesystem::path path;
        if (what == "graph") {
            if (doc_id.empty()) {
                err << "error: export graph needs --doc <doc_id>\n";
                return kExitFailure;
            }
            path = cfg.output_dir / doc_id / "graph.json";
        } else if (what == "index") {
            path = detail::index_file(cfg);
        } else {
            err << "error: export target must be 'graph' or 'index'\n";
            return kExitFailure;
        }
        if (!std::filesystem::exists(path)) {
            err << "error: nothing to export at " << path.string() << "\n";
            return kExitFailure;
        }
        out << parse::read_file_bytes(path.string());
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace ragkit::cli
