#pragma once
// Assembles per-page fragments into the full document graph: one Page node
// per page (content = assembled page markdown) owning that page's top-level
// elements, chained next/previous, all owned by a single Document root.

#include <string>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/core/graph.hpp"
#include "ragkit/graphbuild/split.hpp"

namespace ragkit::graphbuild {

// `fragments[i]` and `page_markdowns[i]` describe page i; fragments must be
// contiguous from page 0. Raises GraphInvariantViolation if the finished
// graph fails validation (which would indicate a builder bug).
inline NodeGraph build_hierarchy(const DocumentSource& source,
                                 const std::vector<GraphFragment>& fragments,
                                 const std::vector<std::string>& page_markdowns,
                                 IdAllocator& ids) {
    if (fragments.size() != page_markdowns.size()) {
        raise(ErrorCode::InvalidConfig, "fragment/page count mismatch for " + source.doc_id);
    }
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        if (fragments[i].page_index != int(i)) {
            raise(ErrorCode::NonContiguousPages,
                  source.doc_id + ": fragment " + std::to_string(i) + " claims page " +
                      std::to_string(fragments[i].page_index));
        }
    }

    NodeGraph g;
    Node doc;
    doc.node_id = ids.next(NodeKind::Document);
    doc.kind = NodeKind::Document;
    g.add_node(doc);
    g.set_root(doc.node_id);

    std::string previous_page;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        const auto& frag = fragments[i];
        Node page;
        page.node_id = ids.next(NodeKind::Page);
        page.kind = NodeKind::Page;
        page.content = page_markdowns[i].empty() ? "(blank page)" : page_markdowns[i];
        page.page_index = int(i);
        g.add_node(page);

        for (const auto& n : frag.nodes) g.add_node(n);
        for (const auto& e : frag.edges) g.link(e.from, e.to, e.kind);

        g.link(doc.node_id, page.node_id, RelationKind::Child);
        for (const auto& top : frag.top_level) {
            g.link(page.node_id, top, RelationKind::Child);
        }
        if (!previous_page.empty()) g.link(previous_page, page.node_id, RelationKind::Next);
        previous_page = page.node_id;
    }

    auto violations = g.validate();
    if (!violations.empty()) {
        raise(ErrorCode::GraphInvariantViolation,
              source.doc_id + ": " + std::string(violation_name(violations.front().rule)) +
                  ": " + violations.front().detail);
    }
    return g;
}

}  // namespace ragkit::graphbuild
