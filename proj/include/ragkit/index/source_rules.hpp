#pragma once
// What text represents each node in the vector index. Literal content for
// Text nodes and QA questions, the vision description for Image nodes, and
// the contextualization summary for structural nodes (Header, Table, Page,
// Document) - raw table markdown or a bare heading line would embed poorly.

#include <string>

#include "ragkit/common/error.hpp"
#include "ragkit/core/node.hpp"

namespace ragkit::index {

inline std::string embedding_source(const Node& n) {
    switch (n.kind) {
        case NodeKind::Text:
        case NodeKind::QA:
            return n.content;
        case NodeKind::Image:
            if (n.content.empty()) {
                raise(ErrorCode::MissingDescription, n.node_id + " has no image description");
            }
            return n.content;
        case NodeKind::Header:
        case NodeKind::Table:
        case NodeKind::Page:
        case NodeKind::Document:
            if (!n.summary || n.summary->empty()) {
                raise(ErrorCode::MissingContextualization,
                      n.node_id + " (" + std::string(kind_name(n.kind)) +
                          ") has no summary to embed");
            }
            return *n.summary;
    }
    raise(ErrorCode::WrongNodeKind, n.node_id);
}

}  // namespace ragkit::index
