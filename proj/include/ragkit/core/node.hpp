#pragma once
// Document and node data model shared by every stage of the pipeline.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ragkit/common/error.hpp"

namespace ragkit::core {

enum class DocFormat { Pdf, Docx, Pptx };

inline std::string_view format_name(DocFormat f) {
    switch (f) {
        case DocFormat::Pdf: return "pdf";
        case DocFormat::Docx: return "docx";
        case DocFormat::Pptx: return "pptx";
    }
    return "?";
}

// Source descriptor for one ingested file.
struct DocumentSource {
    std::string doc_id;
    std::string origin_path;
    DocFormat format = DocFormat::Pdf;
    std::map<std::string, std::string> native_metadata;  // title, author, dates
};

enum class NodeKind { Header, Text, Table, Image, Page, Document, QA };

inline std::string_view kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Header: return "header";
        case NodeKind::Text: return "text";
        case NodeKind::Table: return "table";
        case NodeKind::Image: return "image";
        case NodeKind::Page: return "page";
        case NodeKind::Document: return "document";
        case NodeKind::QA: return "qa";
    }
    return "?";
}

inline NodeKind kind_from_name(std::string_view name) {
    if (name == "header") return NodeKind::Header;
    if (name == "text") return NodeKind::Text;
    if (name == "table") return NodeKind::Table;
    if (name == "image") return NodeKind::Image;
    if (name == "page") return NodeKind::Page;
    if (name == "document") return NodeKind::Document;
    if (name == "qa") return NodeKind::QA;
    raise(ErrorCode::InvalidConfig, "unknown node kind '" + std::string(name) + "'");
}

// Half-open character range into the owning page markdown.
struct CharSpan {
    size_t begin = 0;
    size_t end = 0;

    size_t length() const { return end - begin; }
    bool operator==(const CharSpan&) const = default;
};

struct Node {
    std::string node_id;
    NodeKind kind = NodeKind::Text;
    std::string content;  // Image: description; Table: markdown source; Page/Document: full markdown
    std::optional<std::string> summary;
    std::optional<std::vector<std::string>> questions;
    std::optional<int> level;                  // Header only, >= 1
    std::optional<std::string> image_ref;      // Image only, asset id + extension
    std::optional<int> page_index;             // 0-based page ordinal
    std::optional<CharSpan> char_span;         // offsets into the owning page markdown
};

enum class RelationKind { Next, Previous, Parent, Child };

inline std::string_view relation_name(RelationKind k) {
    switch (k) {
        case RelationKind::Next: return "next";
        case RelationKind::Previous: return "previous";
        case RelationKind::Parent: return "parent";
        case RelationKind::Child: return "child";
    }
    return "?";
}

inline RelationKind relation_from_name(std::string_view name) {
    if (name == "next") return RelationKind::Next;
    if (name == "previous") return RelationKind::Previous;
    if (name == "parent") return RelationKind::Parent;
    if (name == "child") return RelationKind::Child;
    raise(ErrorCode::InvalidConfig, "unknown relation kind '" + std::string(name) + "'");
}

inline RelationKind inverse_relation(RelationKind k) {
    switch (k) {
        case RelationKind::Next: return RelationKind::Previous;
        case RelationKind::Previous: return RelationKind::Next;
        case RelationKind::Parent: return RelationKind::Child;
        case RelationKind::Child: return RelationKind::Parent;
    }
    return k;
}

struct Relationship {
    std::string from;
    std::string to;
    RelationKind kind = RelationKind::Next;

    bool operator==(const Relationship&) const = default;
};

// Document-level metadata produced by the metadata extractor.
struct DocumentMetadata {
    std::string topic;
    std::vector<std::string> keywords;
    std::string summary;
    std::map<std::string, std::string> native;
};

// Deterministic node identifier: same (doc, kind, ordinal) always maps to
// the same id, so re-ingestion is byte-stable and diffable.
inline std::string new_node_id(std::string_view doc_id, NodeKind kind, int ordinal) {
    if (ordinal < 0) raise(ErrorCode::InvalidConfig, "node ordinal must be >= 0");
    std::string id(doc_id);
    id += '/';
    id += kind_name(kind);
    id += '/';
    id += std::to_string(ordinal);
    return id;
}

}  // namespace ragkit::core

// The node vocabulary is used by every module; lift it to the library
// namespace.
namespace ragkit {
using core::CharSpan;
using core::DocFormat;
using core::DocumentMetadata;
using core::DocumentSource;
using core::format_name;
using core::inverse_relation;
using core::kind_from_name;
using core::kind_name;
using core::new_node_id;
using core::Node;
using core::NodeKind;
using core::relation_from_name;
using core::relation_name;
using core::RelationKind;
using core::Relationship;
}  // namespace ragkit
