#pragma once
// Full evaluation run: retrieve for every dataset item, generate an answer
// from the retrieved contexts, grade with the judge, aggregate.

#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragkit/assemble/agent.hpp"
#include "ragkit/common/parallel.hpp"
#include "ragkit/eval/dataset.hpp"
#include "ragkit/eval/metrics.hpp"
#include "ragkit/index/retrieval.hpp"

namespace ragkit::eval {

struct EvalRunConfig {
    int k = 5;
    bool prefilter = false;
    int prefilter_m = 3;
    int jobs = 1;
    MetricConfig metrics;
};

struct ItemResult {
    EvalItem item;
    std::vector<index::QueryHit> hits;
    std::string generated_answer;
    MetricScores scores;
};

struct EvalReport {
    std::string ns;
    EvalRunConfig config;
    std::vector<ItemResult> items;
    MetricScores means;
    std::map<std::string, std::size_t> retrieved_kinds;
};

inline EvalReport run_evaluation(const std::vector<EvalItem>& items,
                                 const index::VectorStore& store, const std::string& ns,
                                 index::EmbeddingBackend& embedder, assemble::Agent& answerer,
                                 Judge& judge, const EvalRunConfig& cfg = {}) {
    EvalReport report;
    report.ns = ns;
    report.config = cfg;
    report.items = util::parallel_map(items, cfg.jobs, [&](const EvalItem& item) -> ItemResult {
        ItemResult r;
        r.item = item;
        std::optional<std::set<std::string>> allowed;
        if (cfg.prefilter) {
            auto docs = index::prefilter_documents(store, ns, embedder, item.query,
                                                   cfg.prefilter_m);
            if (!docs.empty()) allowed = std::move(docs);
        }
        r.hits = index::retrieve(store, ns, embedder, item.query, cfg.k, allowed);

        std::vector<std::string> contexts;
        contexts.reserve(r.hits.size());
        for (const auto& h : r.hits) contexts.push_back(h.source_text);

        assemble::AgentRequest req;
        req.role = assemble::AgentRole::Answer;
        req.payload = {{"query", item.query}, {"contexts", contexts}};
        auto reply = assemble::agent_json_call(answerer, req, {"answer"});
        r.generated_answer = reply["answer"].get<std::string>();

        r.scores = evaluate_item(judge, item.query, r.generated_answer, item.expected_answer,
                                 contexts, cfg.metrics);
        return r;
    });

    for (const auto& r : report.items) {
        report.means.answer_correctness += r.scores.answer_correctness;
        report.means.answer_relevance += r.scores.answer_relevance;
        report.means.faithfulness += r.scores.faithfulness;
        report.means.context_relevance += r.scores.context_relevance;
        report.means.context_recall += r.scores.context_recall;
        for (const auto& h : r.hits) {
            ++report.retrieved_kinds[h.metadata.value("kind", "?")];
        }
    }
    if (!report.items.empty()) {
        double n = double(report.items.size());
        report.means.answer_correctness /= n;
        report.means.answer_relevance /= n;
        report.means.faithfulness /= n;
        report.means.context_relevance /= n;
        report.means.context_recall /= n;
    }
    return report;
}

inline nlohmann::json scores_to_json(const MetricScores& s) {
    return {{"answer_correctness", s.answer_correctness},
            {"answer_relevance", s.answer_relevance},
            {"faithfulness", s.faithfulness},
            {"context_relevance", s.context_relevance},
            {"context_recall", s.context_recall}};
}

inline nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& r : report.items) {
        nlohmann::json hits = nlohmann::json::array();
        for (const auto& h : r.hits) {
            hits.push_back({{"node_id", h.node_id},
                            {"score", h.score},
                            {"source_text", h.source_text},
                            {"metadata", h.metadata}});
        }
        items.push_back({{"item", item_to_json(r.item)},
                         {"hits", hits},
                         {"generated_answer", r.generated_answer},
                         {"scores", scores_to_json(r.scores)}});
    }
    return {{"namespace", report.ns},
            {"k", report.config.k},
            {"prefilter", report.config.prefilter},
            {"items", items},
            {"means", scores_to_json(report.means)},
            {"retrieved_kinds", report.retrieved_kinds}};
}

inline std::string render_text_report(const EvalReport& report) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "evaluation over " << report.items.size() << " items (namespace '" << report.ns
        << "', k=" << report.config.k << (report.config.prefilter ? ", prefilter on" : "")
        << ")\n\n";
    out << "  answer correctness : " << report.means.answer_correctness << "\n";
    out << "  answer relevance   : " << report.means.answer_relevance << "\n";
    out << "  faithfulness       : " << report.means.faithfulness << "\n";
    out << "  context relevance  : " << report.means.context_relevance << "\n";
    out << "  context recall     : " << report.means.context_recall << "\n\n";
    out << "retrieved node kinds:\n";
    for (const auto& [kind, count] : report.retrieved_kinds) {
        out << "  " << std::setw(10) << std::left << kind << " " << count << "\n";
    }
    return out.str();
}

}  // namespace ragkit::eval
