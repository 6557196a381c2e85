#pragma once
// NodeGraph: the in-process graph of typed nodes plus relationship edges,
// with structural validation and JSON persistence.
//
// Construction is single-writer; once built the graph is immutable in
// practice and safe for concurrent reads.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "ragkit/core/node.hpp"

namespace ragkit::core {

enum class ViolationRule {
    UnknownNodeRef,
    MissingInverse,
    IllegalChildOrigin,
    SelfLoop,
    CycleDetected,
    Unreachable,
    BadRoot,
    FieldInvariant,
};

inline std::string_view violation_name(ViolationRule r) {
    switch (r) {
        case ViolationRule::UnknownNodeRef: return "UnknownNodeRef";
        case ViolationRule::MissingInverse: return "MissingInverse";
        case ViolationRule::IllegalChildOrigin: return "IllegalChildOrigin";
        case ViolationRule::SelfLoop: return "SelfLoop";
        case ViolationRule::CycleDetected: return "CycleDetected";
        case ViolationRule::Unreachable: return "Unreachable";
        case ViolationRule::BadRoot: return "BadRoot";
        case ViolationRule::FieldInvariant: return "FieldInvariant";
    }
    return "?";
}

struct Violation {
    ViolationRule rule;
    std::string detail;
};

// Header, Page and Document nodes may own children; content nodes may not.
inline bool can_own_children(NodeKind kind) {
    return kind == NodeKind::Header || kind == NodeKind::Page || kind == NodeKind::Document;
}

class NodeGraph {
public:
    NodeGraph() = default;

    void add_node(Node node) {
        nodes_[node.node_id] = std::move(node);
    }

    bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }

    const Node& node(const std::string& id) const {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) raise(ErrorCode::UnknownNode, id);
        return it->second;
    }

    Node& node_mut(const std::string& id) {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) raise(ErrorCode::UnknownNode, id);
        return it->second;
    }

    const std::map<std::string, Node>& nodes() const { return nodes_; }
    const std::vector<Relationship>& edges() const { return edges_; }

    const std::string& root() const { return root_; }
    void set_root(std::string id) { root_ = std::move(id); }

    // Adds `a -(kind)-> b` and its inverse. Idempotent.
    void link(const std::string& a, const std::string& b, RelationKind kind) {
        if (!has_node(a)) raise(ErrorCode::UnknownNode, a);
        if (!has_node(b)) raise(ErrorCode::UnknownNode, b);
        if (a == b) raise(ErrorCode::GraphInvariantViolation, "self-loop on " + a);
        std::string child_origin;
        if (kind == RelationKind::Child) child_origin = a;
        if (kind == RelationKind::Parent) child_origin = b;
        if (!child_origin.empty() && !can_own_children(node(child_origin).kind)) {
            raise(ErrorCode::IllegalChildOrigin,
                  "child edge from " + std::string(kind_name(node(child_origin).kind)) +
                      " node " + child_origin);
        }
        add_edge({a, b, kind});
        add_edge({b, a, inverse_relation(kind)});
    }

    std::vector<std::string> neighbors(const std::string& id, RelationKind kind) const {
        std::vector<std::string> out;
        for (const auto& e : edges_)
            if (e.kind == kind && e.from == id) out.push_back(e.to);
        return out;
    }

    const std::vector<std::string>& children_of(const std::string& id) const {
        static const std::vector<std::string> empty;
        auto it = child_adj_.find(id);
        return it == child_adj_.end() ? empty : it->second;
    }

    std::optional<std::string> parent_of(const std::string& id) const {
        auto p = neighbors(id, RelationKind::Parent);
        if (p.empty()) return std::nullopt;
        return p.front();
    }

    std::vector<std::string> node_ids_of_kind(NodeKind kind) const {
        std::vector<std::string> out;
        for (const auto& [id, n] : nodes_)
            if (n.kind == kind) out.push_back(id);
        return out;
    }

    size_t count_kind(NodeKind kind) const {
        size_t n = 0;
        for (const auto& [id, node] : nodes_)
            if (node.kind == kind) ++n;
        return n;
    }

    std::vector<Violation> validate() const;

    nlohmann::json to_json() const;
    static NodeGraph from_json(const nlohmann::json& j);

private:
    void add_edge(Relationship r) {
        std::string key = r.from + '\x1f' + std::string(relation_name(r.kind)) + '\x1f' + r.to;
        if (!edge_keys_.insert(std::move(key)).second) return;
        if (r.kind == RelationKind::Child) child_adj_[r.from].push_back(r.to);
        edges_.push_back(std::move(r));
    }

    std::map<std::string, Node> nodes_;
    std::vector<Relationship> edges_;
    std::unordered_set<std::string> edge_keys_;
    std::unordered_map<std::string, std::vector<std::string>> child_adj_;
    std::string root_;
};

// Structural validation. Violations are data, not failures: builders assert
// the result is empty, diagnostics print the details.
inline std::vector<Violation> NodeGraph::validate() const {
    std::vector<Violation> out;
    auto fail = [&](ViolationRule rule, std::string detail) {
        out.push_back({rule, std::move(detail)});
    };

    std::set<std::string> edge_set;
    for (const auto& e : edges_)
        edge_set.insert(e.from + '\x1f' + std::string(relation_name(e.kind)) + '\x1f' + e.to);
    auto has_edge = [&](const std::string& from, RelationKind k, const std::string& to) {
        return edge_set.count(from + '\x1f' + std::string(relation_name(k)) + '\x1f' + to) != 0;
    };

    for (const auto& e : edges_) {
        if (!has_node(e.from) || !has_node(e.to)) {
            fail(ViolationRule::UnknownNodeRef,
                 e.from + " -" + std::string(relation_name(e.kind)) + "-> " + e.to);
            continue;
        }
        if (e.from == e.to) {
            fail(ViolationRule::SelfLoop, e.from);
            continue;
        }
        if (!has_edge(e.to, inverse_relation(e.kind), e.from)) {
            fail(ViolationRule::MissingInverse,
                 e.from + " -" + std::string(relation_name(e.kind)) + "-> " + e.to);
        }
        std::string child_origin;
        if (e.kind == RelationKind::Child) child_origin = e.from;
        if (e.kind == RelationKind::Parent) child_origin = e.to;
        if (!child_origin.empty() && !can_own_children(node(child_origin).kind)) {
            fail(ViolationRule::IllegalChildOrigin,
                 "child edge from " + std::string(kind_name(node(child_origin).kind)) +
                     " node " + child_origin);
        }
    }

    // parent/child acyclicity: DFS over child edges with colors
    std::unordered_map<std::string, int> color;  // 0 white, 1 gray, 2 black
    bool cycle_reported = false;
    std::vector<std::pair<std::string, size_t>> stack;
    for (const auto& [id, n] : nodes_) {
        if (color[id] != 0) continue;
        stack.clear();
        stack.push_back({id, 0});
        color[id] = 1;
        while (!stack.empty()) {
            auto& [cur, idx] = stack.back();
            const auto& kids = children_of(cur);
            if (idx < kids.size()) {
                std::string next = kids[idx++];
                if (color[next] == 1) {
                    if (!cycle_reported) {
                        fail(ViolationRule::CycleDetected, "parent/child cycle through " + next);
                        cycle_reported = true;
                    }
                } else if (color[next] == 0) {
                    color[next] = 1;
                    stack.push_back({std::move(next), 0});
                }
            } else {
                color[cur] = 2;
                stack.pop_back();
            }
        }
    }

    // root + reachability by child edges
    if (root_.empty() || !has_node(root_)) {
        fail(ViolationRule::BadRoot, root_.empty() ? "(unset)" : root_);
    } else {
        if (node(root_).kind != NodeKind::Document)
            fail(ViolationRule::BadRoot, root_ + " is not a Document node");
        if (!cycle_reported) {
            std::set<std::string> seen{root_};
            std::vector<std::string> frontier{root_};
            while (!frontier.empty()) {
                auto cur = std::move(frontier.back());
                frontier.pop_back();
                for (auto& kid : children_of(cur))
                    if (seen.insert(kid).second) frontier.push_back(kid);
            }
            for (const auto& [id, n] : nodes_)
                if (!seen.count(id)) fail(ViolationRule::Unreachable, id);
        }
    }

    // per-node field invariants
    for (const auto& [id, n] : nodes_) {
        if ((n.kind == NodeKind::Header) != n.level.has_value())
            fail(ViolationRule::FieldInvariant, id + ": level present iff Header");
        else if (n.level && *n.level < 1)
            fail(ViolationRule::FieldInvariant, id + ": header level must be >= 1");
        if ((n.kind == NodeKind::Image) != n.image_ref.has_value())
            fail(ViolationRule::FieldInvariant, id + ": image_ref present iff Image");
        bool contextualizable = n.kind == NodeKind::Header || n.kind == NodeKind::Table ||
                                n.kind == NodeKind::Page || n.kind == NodeKind::Document;
        if ((n.summary || n.questions) && !contextualizable)
            fail(ViolationRule::FieldInvariant,
                 id + ": questions/summary only on Header, Table, Page, Document nodes");
        if (n.content.empty() && n.kind != NodeKind::Document)
            fail(ViolationRule::FieldInvariant, id + ": empty content");
    }

    return out;
}

inline nlohmann::json node_to_json(const Node& n) {
    nlohmann::json j{{"node_id", n.node_id},
                     {"kind", std::string(kind_name(n.kind))},
                     {"content", n.content}};
    if (n.summary) j["summary"] = *n.summary;
    if (n.questions) j["questions"] = *n.questions;
    if (n.level) j["level"] = *n.level;
    if (n.image_ref) j["image_ref"] = *n.image_ref;
    if (n.page_index) j["page_index"] = *n.page_index;
    if (n.char_span) j["char_span"] = {n.char_span->begin, n.char_span->end};
    return j;
}

inline Node node_from_json(const nlohmann::json& j) {
    Node n;
    n.node_id = j.at("node_id").get<std::string>();
    n.kind = kind_from_name(j.at("kind").get<std::string>());
    n.content = j.at("content").get<std::string>();
    if (j.contains("summary")) n.summary = j["summary"].get<std::string>();
    if (j.contains("questions")) n.questions = j["questions"].get<std::vector<std::string>>();
    if (j.contains("level")) n.level = j["level"].get<int>();
    if (j.contains("image_ref")) n.image_ref = j["image_ref"].get<std::string>();
    if (j.contains("page_index")) n.page_index = j["page_index"].get<int>();
    if (j.contains("char_span"))
        n.char_span = CharSpan{j["char_span"][0].get<size_t>(), j["char_span"][1].get<size_t>()};
    return n;
}

// Canonical form: nodes sorted by id, edges sorted by (from, kind, to).
inline nlohmann::json NodeGraph::to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [id, n] : nodes_) nodes.push_back(node_to_json(n));
    std::vector<Relationship> sorted = edges_;
    std::sort(sorted.begin(), sorted.end(), [](const Relationship& a, const Relationship& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.kind != b.kind) return relation_name(a.kind) < relation_name(b.kind);
        return a.to < b.to;
    });
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : sorted)
        edges.push_back({{"from", e.from},
                         {"to", e.to},
                         {"kind", std::string(relation_name(e.kind))}});
    return {{"nodes", nodes}, {"edges", edges}, {"root", root_}};
}

inline NodeGraph NodeGraph::from_json(const nlohmann::json& j) {
    NodeGraph g;
    for (const auto& jn : j.at("nodes")) g.add_node(node_from_json(jn));
    for (const auto& je : j.at("edges")) {
        Relationship r{je.at("from").get<std::string>(), je.at("to").get<std::string>(),
                       relation_from_name(je.at("kind").get<std::string>())};
        g.add_edge(std::move(r));
    }
    g.set_root(j.at("root").get<std::string>());
    return g;
}

}  // namespace ragkit::core

namespace ragkit {
using core::can_own_children;
using core::NodeGraph;
using core::Violation;
using core::violation_name;
using core::ViolationRule;
}  // namespace ragkit
