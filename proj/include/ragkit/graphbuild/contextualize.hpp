#pragma once
// Contextualization: headers and tables get retrieval probe questions plus a
// summary; pages and the document get a summary. The text handed to the
// agent is the element itself for tables/pages, and the aggregated subtree
// text for headers.

#include <optional>
#include <string>
#include <vector>

#include "ragkit/assemble/agent.hpp"
#include "ragkit/common/error.hpp"
#include "ragkit/common/parallel.hpp"
#include "ragkit/core/graph.hpp"

namespace ragkit::graphbuild {

// Concatenated content of a header's subtree (the header line itself plus
// everything below it, in document order), capped so agent payloads stay
// bounded.
inline std::string aggregate_section_text(const NodeGraph& g, const std::string& header_id,
                                          std::size_t max_chars = 4000) {
    std::string out;
    std::vector<std::string> stack{header_id};
    while (!stack.empty() && out.size() < max_chars) {
        std::string id = stack.back();
        stack.pop_back();
        const Node& n = g.node(id);
        if (!n.content.empty()) {
            if (!out.empty()) out += "\n\n";
            out += n.content;
        }
        const auto& kids = g.children_of(id);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    if (out.size() > max_chars) out.resize(max_chars);
    return out;
}

namespace detail {

inline std::string agent_kind(NodeKind k) {
    switch (k) {
        case NodeKind::Header: return "header";
        case NodeKind::Table: return "table";
        case NodeKind::Page: return "page";
        case NodeKind::Document: return "document";
        default: return "";
    }
}

}  // namespace detail

// Fills node.questions for a Header or Table node.
inline void generate_questions(NodeGraph& g, const std::string& node_id,
                               assemble::Agent& agent, int count = 3) {
    Node& n = g.node_mut(node_id);
    if (n.kind != NodeKind::Header && n.kind != NodeKind::Table) {
        raise(ErrorCode::WrongNodeKind,
              "questions apply to header/table nodes, got " + std::string(kind_name(n.kind)) +
                  " " + node_id);
    }
    std::string content =
        n.kind == NodeKind::Header ? aggregate_section_text(g, node_id) : n.content;
    assemble::AgentRequest req;
    req.role = assemble::AgentRole::Questions;
    req.payload = {{"kind", detail::agent_kind(n.kind)},
                   {"title", n.kind == NodeKind::Header ? n.content : ""},
                   {"content", content},
                   {"count", count}};
    auto reply = assemble::agent_json_call(agent, req, {"questions"});
    std::vector<std::string> questions;
    for (const auto& q : reply["questions"]) {
        if (q.is_string() && !q.get<std::string>().empty()) questions.push_back(q.get<std::string>());
    }
    if (questions.empty()) {
        raise(ErrorCode::AgentMalformedOutput, "questions agent returned none for " + node_id);
    }
    n.questions = std::move(questions);
}

// Fills node.summary for a Header, Table, Page or Document node. For the
// Document node the caller supplies the text to summarize (the document
// markdown); other kinds derive it from the graph.
inline void summarize(NodeGraph& g, const std::string& node_id, assemble::Agent& agent,
                      const std::string& document_text = "") {
    Node& n = g.node_mut(node_id);
    std::string kind = detail::agent_kind(n.kind);
    if (kind.empty()) {
        raise(ErrorCode::WrongNodeKind,
              "summaries apply to header/table/page/document nodes, got " +
                  std::string(kind_name(n.kind)) + " " + node_id);
    }
    std::string content;
    switch (n.kind) {
        case NodeKind::Header: content = aggregate_section_text(g, node_id); break;
        case NodeKind::Document: content = document_text; break;
        default: content = n.content; break;
    }
    assemble::AgentRequest req;
    req.role = assemble::AgentRole::Summary;
    req.payload = {{"kind", kind},
                   {"title", n.kind == NodeKind::Header ? n.content : ""},
                   {"content", content}};
    if (n.kind == NodeKind::Page && n.page_index) req.payload["page_index"] = *n.page_index;
    auto reply = assemble::agent_json_call(agent, req, {"summary"});
    std::string s = reply["summary"].get<std::string>();
    if (s.empty()) {
        raise(ErrorCode::AgentMalformedOutput, "summary agent returned empty for " + node_id);
    }
    n.summary = std::move(s);
}

// Contextualizes every eligible node in the graph. The document summary is
// only generated when metadata extraction has not provided one already.
// Agent calls fan out over `jobs` threads; results are applied in a stable
// order.
inline void contextualize_graph(NodeGraph& g, assemble::Agent& agent,
                                const std::string& document_markdown, int question_count = 3,
                                int jobs = 1) {
    struct Task {
        std::string node_id;
        bool questions = false;
    };
    std::vector<Task> tasks;
    for (const auto& [id, node] : g.nodes()) {
        switch (node.kind) {
            case NodeKind::Header:
            case NodeKind::Table: tasks.push_back({id, true}); break;
            case NodeKind::Page: tasks.push_back({id, false}); break;
            case NodeKind::Document:
                if (!node.summary) tasks.push_back({id, false});
                break;
            default: break;
        }
    }
    struct Result {
        std::optional<std::vector<std::string>> questions;
        std::string summary;
    };
    // The graph is read (never written) by the workers; results are applied
    // single-threaded afterwards.
    auto results = util::parallel_map(tasks, jobs, [&](const Task& t) -> Result {
        Result r;
        const Node& n = g.node(t.node_id);
        std::string content;
        switch (n.kind) {
            case NodeKind::Header: content = aggregate_section_text(g, t.node_id); break;
            case NodeKind::Document: content = document_markdown; break;
            default: content = n.content; break;
        }
        if (t.questions) {
            assemble::AgentRequest req;
            req.role = assemble::AgentRole::Questions;
            req.payload = {{"kind", detail::agent_kind(n.kind)},
                           {"title", n.kind == NodeKind::Header ? n.content : ""},
                           {"content", content},
                           {"count", question_count}};
            auto reply = assemble::agent_json_call(agent, req, {"questions"});
            std::vector<std::string> qs;
            for (const auto& q : reply["questions"]) {
                if (q.is_string() && !q.get<std::string>().empty()) {
                    qs.push_back(q.get<std::string>());
                }
            }
            if (qs.empty()) {
                raise(ErrorCode::AgentMalformedOutput,
                      "questions agent returned none for " + t.node_id);
            }
            r.questions = std::move(qs);
        }
        assemble::AgentRequest req;
        req.role = assemble::AgentRole::Summary;
        req.payload = {{"kind", detail::agent_kind(n.kind)},
                       {"title", n.kind == NodeKind::Header ? n.content : ""},
                       {"content", content}};
        if (n.kind == NodeKind::Page && n.page_index) req.payload["page_index"] = *n.page_index;
        auto reply = assemble::agent_json_call(agent, req, {"summary"});
        r.summary = reply["summary"].get<std::string>();
        if (r.summary.empty()) {
            raise(ErrorCode::AgentMalformedOutput, "summary agent returned empty for " + t.node_id);
        }
        return r;
    });
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        Node& n = g.node_mut(tasks[i].node_id);
        if (results[i].questions) n.questions = std::move(results[i].questions);
        n.summary = std::move(results[i].summary);
    }
}

}  // namespace ragkit::graphbuild
