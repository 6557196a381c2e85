#pragma once
// Splitting: page markdown -> typed content nodes with parent/child and
// sibling links. Header nesting follows heading depth; content nodes hang
// off the nearest enclosing header, or stay top-level for the page.

#include <string>
#include <string_view>
#include <vector>

#include "ragkit/core/graph.hpp"
#include "ragkit/md/blocks.hpp"

namespace ragkit::graphbuild {

using core::CharSpan;
using core::Node;
using core::NodeKind;
using core::RelationKind;
using core::Relationship;

// Hands out document-scoped ordinals per node kind, so ids stay unique and
// deterministic across all pages of one document.
class IdAllocator {
public:
    explicit IdAllocator(std::string doc_id) : doc_id_(std::move(doc_id)) {}

    std::string next(NodeKind kind) {
        return core::new_node_id(doc_id_, kind, counters_[static_cast<size_t>(kind)]++);
    }

    const std::string& doc_id() const { return doc_id_; }

private:
    std::string doc_id_;
    int counters_[7] = {0, 0, 0, 0, 0, 0, 0};
};

// Per-page slice of the eventual document graph. Edges reference only
// fragment nodes; `top_level` nodes become children of the Page node later.
struct GraphFragment {
    int page_index = 0;
    std::vector<Node> nodes;  // document order
    std::vector<Relationship> edges;
    std::vector<std::string> top_level;
};

namespace detail {

inline void pair_edges(std::vector<Relationship>& edges, const std::string& a,
                       const std::string& b, RelationKind kind) {
    edges.push_back({a, b, kind});
    edges.push_back({b, a, core::inverse_relation(kind)});
}

inline void pair_edges(GraphFragment& frag, const std::string& a, const std::string& b,
                       RelationKind kind) {
    pair_edges(frag.edges, a, b, kind);
}

}  // namespace detail

inline GraphFragment split_markdown(std::string_view page_md, int page_index,
                                    IdAllocator& ids) {
    auto blocks = md::scan_blocks(page_md);

    GraphFragment frag;
    frag.page_index = page_index;

    struct HeaderFrame {
        int level;
        std::string id;
        std::string last_child;
    };
    std::vector<HeaderFrame> stack;
    std::string last_top_level;

    auto attach = [&](const std::string& id) {
        if (stack.empty()) {
            if (!last_top_level.empty())
                detail::pair_edges(frag, last_top_level, id, RelationKind::Next);
            last_top_level = id;
            frag.top_level.push_back(id);
        } else {
            auto& frame = stack.back();
            detail::pair_edges(frag, frame.id, id, RelationKind::Child);
            if (!frame.last_child.empty())
                detail::pair_edges(frag, frame.last_child, id, RelationKind::Next);
            frame.last_child = id;
        }
    };

    for (const auto& block : blocks) {
        Node node;
        node.page_index = page_index;
        node.char_span = CharSpan{block.begin, block.end};

        switch (block.kind) {
            case md::BlockKind::ThematicBreak:
                continue;  // structural syntax, no node
            case md::BlockKind::Heading: {
                node.kind = NodeKind::Header;
                node.level = block.level;
                node.content = block.text.empty() ? "(untitled)" : block.text;
                node.node_id = ids.next(NodeKind::Header);
                // a header closes every header of equal or deeper level
                while (!stack.empty() && stack.back().level >= block.level) stack.pop_back();
                attach(node.node_id);
                stack.push_back({block.level, node.node_id, ""});
                frag.nodes.push_back(std::move(node));
                continue;
            }
            case md::BlockKind::Table:
                node.kind = NodeKind::Table;
                node.content = block.text;
                node.node_id = ids.next(NodeKind::Table);
                break;
            case md::BlockKind::Image:
                node.kind = NodeKind::Image;
                node.content = block.image_alt.empty() ? "image " + block.image_src
                                                       : block.image_alt;
                node.image_ref = block.image_src;
                node.node_id = ids.next(NodeKind::Image);
                break;
            case md::BlockKind::Paragraph:
            case md::BlockKind::BulletList:
            case md::BlockKind::OrderedList:
            case md::BlockKind::CodeFence:
                node.kind = NodeKind::Text;
                node.content = block.text;
                node.node_id = ids.next(NodeKind::Text);
                break;
        }
        attach(node.node_id);
        frag.nodes.push_back(std::move(node));
    }

    return frag;
}

// Checks the losslessness contract of split_markdown: every character of
// the page markdown falls inside exactly one node span or is structural
// syntax (newlines, blank lines, thematic breaks). Returns problems found.
inline std::vector<std::string> check_span_coverage(std::string_view page_md,
                                                    const GraphFragment& frag) {
    std::vector<std::string> problems;
    std::vector<int> cover(page_md.size(), 0);
    for (const auto& n : frag.nodes) {
        if (!n.char_span) {
            problems.push_back(n.node_id + ": missing char_span");
            continue;
        }
        if (n.char_span->end > page_md.size() || n.char_span->begin > n.char_span->end) {
            problems.push_back(n.node_id + ": span out of range");
            continue;
        }
        for (size_t i = n.char_span->begin; i < n.char_span->end; ++i) ++cover[i];
    }

    // line classification for the uncovered remainder
    size_t line_start = 0;
    for (size_t i = 0; i <= page_md.size(); ++i) {
        if (i != page_md.size() && page_md[i] != '\n') continue;
        auto line = page_md.substr(line_start, i - line_start);
        bool syntax_line = md::detail::is_blank(line) || md::detail::is_thematic_break(line);
        for (size_t p = line_start; p < i; ++p) {
            if (cover[p] == 0 && !syntax_line)
                problems.push_back("uncovered char at offset " + std::to_string(p));
            if (cover[p] > 1)
                problems.push_back("char covered " + std::to_string(cover[p]) +
                                   " times at offset " + std::to_string(p));
        }
        line_start = i + 1;
    }
    return problems;
}

}  // namespace ragkit::graphbuild
