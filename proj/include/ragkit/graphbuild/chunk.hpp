#pragma once
// Oversized Text nodes are split into chunks. The recursive splitter cuts at
// the best boundary available inside the size budget (blank line, then line
// break, then sentence end, then word boundary, then a hard cut); consecutive
// chunks share a configurable overlap so context straddling a cut is not
// lost. The semantic splitter cuts at sentence boundaries whose neighbouring
// sentences embed far apart, falling back to the recursive strategy for any
// piece still over the threshold.
//
// Chunk contents overlap, but their char_spans record the true source ranges,
// so the original text remains reconstructible: concatenate chunk 0 with each
// later chunk minus its overlap prefix (the overlap length is exactly the
// overhang between consecutive spans).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/common/log.hpp"
#include "ragkit/graphbuild/split.hpp"
#include "ragkit/index/embedding.hpp"

namespace ragkit::graphbuild {

struct SplitConfig {
    std::size_t text_threshold_chars = 1500;
    std::size_t chunk_overlap_chars = 150;
    enum class Splitter { Recursive, Semantic };
    Splitter splitter = Splitter::Recursive;
    double semantic_breakpoint_percentile = 90.0;
};

inline void validate_split_config(const SplitConfig& cfg) {
    if (cfg.text_threshold_chars == 0) {
        raise(ErrorCode::InvalidConfig, "text_threshold_chars must be positive");
    }
    if (cfg.chunk_overlap_chars >= cfg.text_threshold_chars) {
        raise(ErrorCode::InvalidConfig, "chunk_overlap_chars must be below the threshold");
    }
    if (cfg.semantic_breakpoint_percentile <= 0.0 ||
        cfg.semantic_breakpoint_percentile >= 100.0) {
        raise(ErrorCode::InvalidConfig, "semantic_breakpoint_percentile must be in (0, 100)");
    }
}

namespace detail {

// A cut position c splits text into [..c) and [c..). Quality levels, best
// first: after a blank line, after a line break, after a sentence end, after
// a space. Hard cuts (no level) are the last resort.
inline bool cut_has_level(const std::string& text, std::size_t c, int level) {
    switch (level) {
        case 0: return c >= 2 && text[c - 1] == '\n' && text[c - 2] == '\n';
        case 1: return text[c - 1] == '\n';
        case 2:
            return c >= 2 && (text[c - 1] == ' ' || text[c - 1] == '\n') &&
                   (text[c - 2] == '.' || text[c - 2] == '!' || text[c - 2] == '?');
        case 3: return text[c - 1] == ' ';
        default: return false;
    }
}

// Farthest cut of the best available quality within (s, s+budget].
inline std::size_t find_cut(const std::string& text, std::size_t s, std::size_t budget) {
    std::size_t hi = s + budget;
    std::size_t best[4] = {0, 0, 0, 0};
    for (std::size_t c = s + 1; c <= hi; ++c) {
        for (int level = 0; level < 4; ++level) {
            if (cut_has_level(text, c, level)) best[level] = c;
        }
    }
    for (int level = 0; level < 4; ++level) {
        if (best[level] != 0) return best[level];
    }
    return hi;
}

// Disjoint [begin,end) partition of the source plus the overlap each chunk
// borrows from its predecessor; chunk content is [begin-overlap, end).
struct PiecePlan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t overlap = 0;
};

// Overlap taken from the tail of `prev`, moved forward to the nearest word
// boundary inside the window so chunks do not start mid-word. Always at
// least one character.
inline std::size_t overlap_len(const std::string& text, const PiecePlan& prev,
                               std::size_t max_overlap) {
    std::size_t avail = prev.end - prev.begin;
    std::size_t window = std::min(max_overlap, avail);
    std::size_t window_start = prev.end - window;
    for (std::size_t i = window_start; i + 1 < prev.end; ++i) {
        if (text[i] == ' ' || text[i] == '\n') return prev.end - (i + 1);
    }
    return window;
}

inline std::vector<PiecePlan> plan_recursive(const std::string& text, std::size_t from,
                                             std::size_t to, const SplitConfig& cfg) {
    std::vector<PiecePlan> out;
    std::size_t s = from;
    while (s < to) {
        std::size_t ov = 0;
        if (!out.empty() && cfg.chunk_overlap_chars > 0) {
            ov = overlap_len(text, out.back(), cfg.chunk_overlap_chars);
        }
        std::size_t budget = cfg.text_threshold_chars - ov;
        std::size_t e = (to - s <= budget) ? to : find_cut(text, s, budget);
        out.push_back({s, e, ov});
        s = e;
    }
    return out;
}

inline std::vector<std::size_t> sentence_cuts(const std::string& text, std::size_t from,
                                              std::size_t to) {
    std::vector<std::size_t> cuts;
    for (std::size_t c = from + 1; c < to; ++c) {
        if (cut_has_level(text, c, 1) || cut_has_level(text, c, 2)) cuts.push_back(c);
    }
    return cuts;
}

// Nearest-rank percentile of an unsorted sample.
inline double percentile_value(std::vector<double> values, double pct) {
    std::sort(values.begin(), values.end());
    std::size_t rank = std::size_t(std::ceil(pct / 100.0 * double(values.size())));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

inline std::vector<PiecePlan> plan_semantic(const std::string& text, std::size_t from,
                                            std::size_t to, const SplitConfig& cfg,
                                            index::EmbeddingBackend& backend) {
    auto cuts = sentence_cuts(text, from, to);
    if (cuts.empty()) return plan_recursive(text, from, to, cfg);

    std::vector<std::size_t> bounds;
    bounds.push_back(from);
    bounds.insert(bounds.end(), cuts.begin(), cuts.end());
    bounds.push_back(to);

    std::vector<std::vector<double>> vecs;
    vecs.reserve(bounds.size() - 1);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        vecs.push_back(backend.embed(text.substr(bounds[i], bounds[i + 1] - bounds[i])));
    }
    std::vector<double> dist;
    dist.reserve(vecs.size() - 1);
    for (std::size_t i = 0; i + 1 < vecs.size(); ++i) {
        dist.push_back(1.0 - index::cosine_similarity(vecs[i], vecs[i + 1]));
    }
    double breakpoint = percentile_value(dist, cfg.semantic_breakpoint_percentile);

    std::vector<std::size_t> piece_bounds{from};
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] > breakpoint) piece_bounds.push_back(cuts[i]);
    }
    piece_bounds.push_back(to);

    std::vector<PiecePlan> out;
    for (std::size_t i = 0; i + 1 < piece_bounds.size(); ++i) {
        std::size_t b = piece_bounds[i], e = piece_bounds[i + 1];
        if (e - b <= cfg.text_threshold_chars) {
            out.push_back({b, e, 0});
        } else {
            auto sub = plan_recursive(text, b, e, cfg);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    }
    return out;
}

}  // namespace detail

// Splits one Text node whose content exceeds the threshold. Nodes at or
// under the threshold come back unchanged (as a single-element vector).
inline std::vector<Node> chunk_text(const Node& node, const SplitConfig& cfg, IdAllocator& ids,
                                    index::EmbeddingBackend* embedder = nullptr) {
    validate_split_config(cfg);
    if (node.kind != NodeKind::Text) {
        raise(ErrorCode::WrongNodeKind, "chunking applies to text nodes, got " +
                                            std::string(kind_name(node.kind)) + " " + node.node_id);
    }
    const std::string& text = node.content;
    if (text.size() <= cfg.text_threshold_chars) return {node};

    std::vector<detail::PiecePlan> plan;
    if (cfg.splitter == SplitConfig::Splitter::Semantic) {
        if (embedder == nullptr) {
            util::warn("semantic splitter has no embedding backend; falling back to recursive "
                       "for " + node.node_id);
            plan = detail::plan_recursive(text, 0, text.size(), cfg);
        } else {
            plan = detail::plan_semantic(text, 0, text.size(), cfg, *embedder);
        }
    } else {
        plan = detail::plan_recursive(text, 0, text.size(), cfg);
    }

    std::size_t base = node.char_span ? node.char_span->begin : 0;
    std::vector<Node> chunks;
    chunks.reserve(plan.size());
    for (const auto& p : plan) {
        Node c;
        c.node_id = ids.next(NodeKind::Text);
        c.kind = NodeKind::Text;
        std::size_t content_begin = p.begin - p.overlap;
        c.content = text.substr(content_begin, p.end - content_begin);
        c.char_span = CharSpan{base + content_begin, base + p.end};
        c.page_index = node.page_index;
        chunks.push_back(std::move(c));
    }
    return chunks;
}

// Applies chunk_text across a page fragment, splicing each oversized Text
// node out of the sibling chain and parent membership: every chunk becomes a
// child of the original parent, chunks are chained next/previous in order,
// and the neighbours' links are redirected to the first and last chunk.
inline void apply_chunking(GraphFragment& frag, const SplitConfig& cfg, IdAllocator& ids,
                           index::EmbeddingBackend* embedder = nullptr) {
    validate_split_config(cfg);
    for (std::size_t pos = 0; pos < frag.nodes.size(); ++pos) {
        const Node& original = frag.nodes[pos];
        if (original.kind != NodeKind::Text ||
            original.content.size() <= cfg.text_threshold_chars) {
            continue;
        }
        const std::string old_id = original.node_id;
        auto chunks = chunk_text(original, cfg, ids, embedder);

        // What the old node was connected to.
        std::string parent, prev_sibling, next_sibling;
        for (const auto& e : frag.edges) {
            if (e.from != old_id) continue;
            if (e.kind == RelationKind::Parent) parent = e.to;
            if (e.kind == RelationKind::Previous) prev_sibling = e.to;
            if (e.kind == RelationKind::Next) next_sibling = e.to;
        }
        std::erase_if(frag.edges, [&](const Relationship& e) {
            return e.from == old_id || e.to == old_id;
        });

        for (const auto& c : chunks) {
            if (!parent.empty()) detail::pair_edges(frag.edges, parent, c.node_id,
                                                    RelationKind::Child);
        }
        for (std::size_t i = 0; i + 1 < chunks.size(); ++i) {
            detail::pair_edges(frag.edges, chunks[i].node_id, chunks[i + 1].node_id,
                               RelationKind::Next);
        }
        if (!prev_sibling.empty()) {
            detail::pair_edges(frag.edges, prev_sibling, chunks.front().node_id,
                               RelationKind::Next);
        }
        if (!next_sibling.empty()) {
            detail::pair_edges(frag.edges, chunks.back().node_id, next_sibling,
                               RelationKind::Next);
        }

        if (auto it = std::find(frag.top_level.begin(), frag.top_level.end(), old_id);
            it != frag.top_level.end()) {
            it = frag.top_level.erase(it);
            for (const auto& c : chunks) it = std::next(frag.top_level.insert(it, c.node_id));
        }

        frag.nodes.erase(frag.nodes.begin() + long(pos));
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            frag.nodes.insert(frag.nodes.begin() + long(pos + i), chunks[i]);
        }
        pos += chunks.size() - 1;
    }
}

}  // namespace ragkit::graphbuild
