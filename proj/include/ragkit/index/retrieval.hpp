#pragma once
// Indexing a node graph into the vector store and querying it back. Each
// node contributes one record whose source text follows the per-kind
// embedding rules; QA records additionally carry their answer in metadata.
// Document-level prefiltering queries only the Document summaries first and
// then restricts retrieval to the best-matching documents.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/core/graph.hpp"
#include "ragkit/graphbuild/split.hpp"
#include "ragkit/index/embedding.hpp"
#include "ragkit/index/source_rules.hpp"
#include "ragkit/index/store.hpp"

namespace ragkit::index {

struct QAPair {
    std::string question;
    std::string answer;
};

// Adds QA nodes (content = the question, children of the document root) to
// the graph. Returns node_id -> answer for build_index to place into record
// metadata.
inline std::map<std::string, std::string> attach_qa_pairs(NodeGraph& g,
                                                          graphbuild::IdAllocator& ids,
                                                          const std::vector<QAPair>& pairs) {
    if (g.root().empty()) raise(ErrorCode::GraphInvariantViolation, "graph has no root");
    std::map<std::string, std::string> answers;
    for (const auto& qa : pairs) {
        if (qa.question.empty()) raise(ErrorCode::InvalidConfig, "QA pair without question");
        Node n;
        n.node_id = ids.next(NodeKind::QA);
        n.kind = NodeKind::QA;
        n.content = qa.question;
        g.add_node(n);
        g.link(g.root(), n.node_id, RelationKind::Child);
        answers[n.node_id] = qa.answer;
    }
    return answers;
}

// Embeds every node of the graph into `ns`. Returns the number of records
// written.
inline std::size_t build_index(const NodeGraph& g, const std::string& doc_id, VectorStore& store,
                               const std::string& ns, EmbeddingBackend& embedder,
                               const std::map<std::string, std::string>& qa_answers = {}) {
    std::size_t written = 0;
    for (const auto& [id, node] : g.nodes()) {
        VectorRecord rec;
        rec.node_id = id;
        rec.source_text = embedding_source(node);
        rec.vector = embedder.embed(rec.source_text);
        rec.metadata = {{"doc_id", doc_id}, {"kind", std::string(kind_name(node.kind))}};
        if (node.page_index) rec.metadata["page_index"] = *node.page_index;
        if (node.kind == NodeKind::QA) {
            auto it = qa_answers.find(id);
            if (it != qa_answers.end()) rec.metadata["answer"] = it->second;
        }
        store.upsert(ns, std::move(rec));
        ++written;
    }
    return written;
}

// Top-k retrieval for a text query, optionally restricted to a document set.
inline std::vector<QueryHit> retrieve(const VectorStore& store, const std::string& ns,
                                      EmbeddingBackend& embedder, const std::string& query,
                                      int k,
                                      const std::optional<std::set<std::string>>& allowed_docs =
                                          std::nullopt) {
    VectorStore::Filter filter;
    if (allowed_docs) {
        filter = [&allowed_docs](const VectorRecord& rec) {
            return allowed_docs->count(rec.metadata.value("doc_id", "")) != 0;
        };
    }
    return store.query(ns, embedder.embed(query), k, filter);
}

// The m documents whose summaries best match the query. An index without
// Document records yields an empty set (callers then skip filtering).
inline std::set<std::string> prefilter_documents(const VectorStore& store, const std::string& ns,
                                                 EmbeddingBackend& embedder,
                                                 const std::string& query, int m) {
    if (m <= 0) raise(ErrorCode::InvalidConfig, "prefilter size must be positive");
    auto hits = store.query(ns, embedder.embed(query), m, [](const VectorRecord& rec) {
        return rec.metadata.value("kind", "") == "document";
    });
    std::set<std::string> docs;
    for (const auto& h : hits) docs.insert(h.metadata.value("doc_id", ""));
    docs.erase("");
    return docs;
}

}  // namespace ragkit::index
