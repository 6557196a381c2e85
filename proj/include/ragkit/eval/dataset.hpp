#pragma once
// Evaluation dataset generation: one item per ingested page, produced by the
// dataset agent from the assembled page markdown.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragkit/assemble/agent.hpp"
#include "ragkit/common/error.hpp"

namespace ragkit::eval {

struct EvalItem {
    std::string item_id;
    std::string doc_id;
    int page_index = 0;
    std::string query;
    std::string expected_answer;
    std::string ground_truth_context;
};

inline nlohmann::json item_to_json(const EvalItem& it) {
    return {{"item_id", it.item_id},
            {"doc_id", it.doc_id},
            {"page_index", it.page_index},
            {"query", it.query},
            {"expected_answer", it.expected_answer},
            {"ground_truth_context", it.ground_truth_context}};
}

inline EvalItem item_from_json(const nlohmann::json& j) {
    EvalItem it;
    it.item_id = j.at("item_id").get<std::string>();
    it.doc_id = j.at("doc_id").get<std::string>();
    it.page_index = j.at("page_index").get<int>();
    it.query = j.at("query").get<std::string>();
    it.expected_answer = j.at("expected_answer").get<std::string>();
    it.ground_truth_context = j.value("ground_truth_context", "");
    return it;
}

// One item per page of one document.
inline std::vector<EvalItem> generate_dataset(assemble::Agent& agent, const std::string& doc_id,
                                              const std::vector<std::string>& page_markdowns) {
    std::vector<EvalItem> items;
    items.reserve(page_markdowns.size());
    for (std::size_t i = 0; i < page_markdowns.size(); ++i) {
        assemble::AgentRequest req;
        req.role = assemble::AgentRole::Dataset;
        req.payload = {{"doc_id", doc_id},
                       {"page_index", int(i)},
                       {"page_markdown", page_markdowns[i]}};
        auto reply = assemble::agent_json_call(agent, req,
                                               {"query", "expected_answer",
                                                "ground_truth_context"});
        EvalItem it;
        it.item_id = doc_id + "#p" + std::to_string(i);
        it.doc_id = doc_id;
        it.page_index = int(i);
        it.query = reply["query"].get<std::string>();
        it.expected_answer = reply["expected_answer"].get<std::string>();
        it.ground_truth_context = reply["ground_truth_context"].get<std::string>();
        if (it.query.empty() || it.expected_answer.empty()) {
            raise(ErrorCode::AgentMalformedOutput,
                  "dataset agent returned an empty query or answer for " + it.item_id);
        }
        items.push_back(std::move(it));
    }
    return items;
}

inline void save_dataset(const std::vector<EvalItem>& items, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
    for (const auto& it : items) out << item_to_json(it).dump() << "\n";
}

inline std::vector<EvalItem> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot read " + path.string());
    std::vector<EvalItem> items;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            items.push_back(item_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::IoError, path.string() + ": bad dataset record: " + e.what());
        }
    }
    return items;
}

}  // namespace ragkit::eval
