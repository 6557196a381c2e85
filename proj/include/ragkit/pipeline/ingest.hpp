#pragma once
// End-to-end ingestion of one document: parse -> assemble -> split ->
// chunk -> hierarchy -> contextualize -> index, plus the on-disk artifacts
// (per-page markdown, document markdown, metadata, graph JSON, image assets).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "ragkit/assemble/assembler.hpp"
#include "ragkit/common/error.hpp"
#include "ragkit/common/parallel.hpp"
#include "ragkit/graphbuild/chunk.hpp"
#include "ragkit/graphbuild/contextualize.hpp"
#include "ragkit/graphbuild/hierarchy.hpp"
#include "ragkit/graphbuild/split.hpp"
#include "ragkit/index/retrieval.hpp"
#include "ragkit/parse/orchestrator.hpp"
#include "ragkit/parse/readers.hpp"
#include "ragkit/pipeline/config.hpp"

namespace ragkit::pipeline {

// Document ids come from the file stem; anything outside [A-Za-z0-9_-] is
// flattened so ids stay safe inside node ids, asset ids, and directory names.
inline std::string doc_id_for(const std::filesystem::path& path) {
    std::string id;
    for (char c : path.stem().string()) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '-';
        id += ok ? c : '_';
    }
    if (id.empty()) id = "doc";
    return id;
}

struct DocumentIngestion {
    DocumentSource source;
    std::vector<assemble::PageMarkdown> pages;
    assemble::DocumentMarkdown document;
    DocumentMetadata metadata;
    NodeGraph graph;
    std::vector<parse::EmbeddedImage> assets;
    std::vector<std::string> warnings;
    std::map<std::string, std::size_t> node_counts;  // kind name -> count
    std::size_t records_written = 0;
};

inline DocumentIngestion ingest_document(const std::filesystem::path& path,
                                         const PipelineConfig& cfg, const Backends& backends,
                                         index::VectorStore& store) {
    auto format = parse::format_from_path(path.string());
    if (!format) {
        raise(ErrorCode::UnsupportedFormat,
              path.string() + ": expected a .pdf, .docx, or .pptx file");
    }
    DocumentSource source;
    source.doc_id = doc_id_for(path);
    source.origin_path = path.string();
    source.format = *format;

    parse::OrchestratorConfig orch_cfg;
    orch_cfg.dpi = cfg.dpi;
    orch_cfg.jobs = cfg.jobs;
    parse::Orchestrator orchestrator(backends.llm_parse, backends.ocr, backends.vision,
                                     orch_cfg);
    auto parsed = orchestrator.parse_document(source);

    DocumentIngestion out;
    out.source = parsed.source;
    out.warnings = parsed.warnings;
    for (const auto& bundle : parsed.pages) {
        for (const auto& img : bundle.fast.images) out.assets.push_back(img);
    }

    out.pages = util::parallel_map(parsed.pages, cfg.jobs, [&](const parse::PageBundle& bundle) {
        return assemble::assemble_page(bundle, *backends.agent);
    });
    out.document = assemble::concatenate_document(out.pages);
    out.metadata =
        assemble::extract_metadata(out.document, out.source.native_metadata, *backends.agent);

    std::vector<std::string> page_markdowns;
    page_markdowns.reserve(out.pages.size());
    for (const auto& p : out.pages) page_markdowns.push_back(p.markdown);

    graphbuild::IdAllocator ids(out.source.doc_id);
    std::vector<graphbuild::GraphFragment> fragments;
    fragments.reserve(out.pages.size());
    for (std::size_t i = 0; i < out.pages.size(); ++i) {
        auto frag = graphbuild::split_markdown(page_markdowns[i], int(i), ids);
        graphbuild::apply_chunking(frag, cfg.split, ids, backends.embedder.get());
        fragments.push_back(std::move(frag));
    }
    out.graph = graphbuild::build_hierarchy(out.source, fragments, page_markdowns, ids);

    // the metadata summary doubles as the document summary; contextualization
    // fills everything else
    if (!out.metadata.summary.empty()) {
        out.graph.node_mut(out.graph.root()).summary = out.metadata.summary;
    }
    graphbuild::contextualize_graph(out.graph, *backends.agent, out.document.markdown,
                                    cfg.question_count, cfg.jobs);

    out.records_written =
        index::build_index(out.graph, out.source.doc_id, store, cfg.ns, *backends.embedder);
    for (const auto& [id, node] : out.graph.nodes()) {
        ++out.node_counts[std::string(kind_name(node.kind))];
    }
    return out;
}

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
}

inline std::string asset_basename(const parse::EmbeddedImage& img) {
    auto slash = img.asset_id.rfind('/');
    std::string stem =
        slash == std::string::npos ? img.asset_id : img.asset_id.substr(slash + 1);
    return stem + "." + img.extension;
}

}  // namespace detail

// Layout under <output_dir>/<doc_id>/: page_<n>.md, document.md,
// metadata.json, graph.json, and assets/<name>.<ext> for embedded images.
inline void write_document_artifacts(const DocumentIngestion& doc,
                                     const std::filesystem::path& output_dir) {
    auto dir = output_dir / doc.source.doc_id;
    std::filesystem::create_directories(dir);
    for (const auto& page : doc.pages) {
        detail::write_text_file(dir / ("page_" + std::to_string(page.page_index) + ".md"),
                                page.markdown);
    }
    detail::write_text_file(dir / "document.md", doc.document.markdown);
    detail::write_text_file(dir / "metadata.json",
                            assemble::metadata_to_json(doc.metadata).dump(2) + "\n");
    detail::write_text_file(dir / "graph.json", doc.graph.to_json().dump(2) + "\n");
    if (!doc.assets.empty()) {
        std::filesystem::create_directories(dir / "assets");
        for (const auto& img : doc.assets) {
            std::ofstream out(dir / "assets" / detail::asset_basename(img), std::ios::binary);
            if (!out) raise(ErrorCode::IoError, "cannot write asset " + img.asset_id);
            out.write(reinterpret_cast<const char*>(img.bytes.data()),
                      std::streamsize(img.bytes.size()));
        }
    }
}

struct FileFailure {
    std::filesystem::path path;
    std::string error;
};

struct IngestSummary {
    std::vector<DocumentIngestion> documents;
    std::vector<FileFailure> failures;
    std::size_t total_records = 0;
};

// Directory arguments expand to their supported files (recursively, sorted);
// explicit file arguments are always attempted so unsupported ones surface
// as per-file errors.
inline std::vector<std::filesystem::path> expand_inputs(
    const std::vector<std::filesystem::path>& paths) {
    std::vector<std::filesystem::path> files;
    for (const auto& p : paths) {
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> found;
            for (const auto& entry : std::filesystem::recursive_directory_iterator(p)) {
                if (entry.is_regular_file() &&
                    parse::format_from_path(entry.path().string())) {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

// One file failing never aborts the batch; the failure is recorded and the
// rest proceed. The namespace is saved once at the end.
inline IngestSummary ingest_paths(const std::vector<std::filesystem::path>& paths,
                                  const PipelineConfig& cfg, const Backends& backends,
                                  index::VectorStore& store) {
    IngestSummary summary;
    for (const auto& file : expand_inputs(paths)) {
        try {
            auto doc = ingest_document(file, cfg, backends, store);
            write_document_artifacts(doc, cfg.output_dir);
            summary.total_records += doc.records_written;
            summary.documents.push_back(std::move(doc));
        } catch (const std::exception& e) {
            summary.failures.push_back({file, e.what()});
        }
    }
    if (!summary.documents.empty()) {
        store.save_namespace(cfg.ns, cfg.output_dir);
    }
    return summary;
}

}  // namespace ragkit::pipeline
