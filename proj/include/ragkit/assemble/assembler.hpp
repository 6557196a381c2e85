#pragma once
// Page assembly: merges one PageBundle into a synthesized page markdown via
// the assembler agent, concatenates pages into the document markdown, and
// extracts document metadata via the metadata agent.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ragkit/assemble/agent.hpp"
#include "ragkit/common/error.hpp"
#include "ragkit/common/strutil.hpp"
#include "ragkit/core/node.hpp"
#include "ragkit/parse/types.hpp"

namespace ragkit::assemble {

struct ImageRef {
    std::string src;          // asset id + extension, e.g. "d1/img_0.png"
    std::string description;  // the alt text
};

struct PageMarkdown {
    int page_index = 0;
    std::string markdown;
    std::vector<ImageRef> image_manifest;
};

struct DocumentMarkdown {
    std::string markdown;
    std::vector<std::size_t> page_offsets;  // where each page begins
};

// Separator between page markdowns: a thematic break flanked by blank lines,
// so the join is recoverable and stays valid CommonMark.
inline constexpr std::string_view kPageSeparator = "\n\n---\n\n";

namespace detail {

inline nlohmann::json strategy_to_json(const parse::StrategyResult& result,
                                       bool with_confidence) {
    nlohmann::json out;
    out["succeeded"] = result.succeeded;
    out["text_blocks"] = nlohmann::json::array();
    for (const auto& tb : result.text_blocks) {
        nlohmann::json b{{"text", tb.text},
                         {"order", tb.order},
                         {"heading", tb.heading},
                         {"heading_level", tb.heading_level}};
        if (with_confidence) b["confidence"] = tb.confidence;
        out["text_blocks"].push_back(std::move(b));
    }
    out["tables"] = nlohmann::json::array();
    for (const auto& t : result.tables) {
        out["tables"].push_back({{"markdown", t.markdown}, {"order", t.order}});
    }
    return out;
}

// Every inline image reference `![alt](src)` in the markdown, in order.
inline std::vector<ImageRef> image_refs(const std::string& markdown) {
    std::vector<ImageRef> refs;
    std::size_t at = 0;
    while ((at = markdown.find("![", at)) != std::string::npos) {
        std::size_t alt_end = markdown.find("](", at + 2);
        if (alt_end == std::string::npos) break;
        std::size_t src_end = markdown.find(')', alt_end + 2);
        if (src_end == std::string::npos) break;
        ImageRef ref;
        ref.description = markdown.substr(at + 2, alt_end - at - 2);
        ref.src = markdown.substr(alt_end + 2, src_end - alt_end - 2);
        // A title after the path is not part of the src.
        if (auto space = ref.src.find(' '); space != std::string::npos) {
            ref.src = ref.src.substr(0, space);
        }
        refs.push_back(std::move(ref));
        at = src_end + 1;
    }
    return refs;
}

inline std::string validate_page_markdown(const std::string& text) {
    if (util::trim(text).empty()) return "empty markdown reply";
    int fences = 0;
    for (const auto& line : util::split_lines(text)) {
        auto t = util::trim(line);
        if (t.rfind("```", 0) == 0 || t.rfind("~~~", 0) == 0) ++fences;
    }
    if (fences % 2 != 0) return "unbalanced code fence";
    return "";
}

}  // namespace detail

// The JSON the assembler agent sees: all three strategy results plus the
// described images (asset id, extension, description).
inline nlohmann::json assemble_payload(const parse::PageBundle& bundle) {
    nlohmann::json payload;
    payload["page_index"] = bundle.page_index;
    payload["fast"] = detail::strategy_to_json(bundle.fast, /*with_confidence=*/false);
    payload["llm"] = detail::strategy_to_json(bundle.llm, /*with_confidence=*/false);
    payload["ocr"] = detail::strategy_to_json(bundle.ocr, /*with_confidence=*/true);
    payload["images"] = nlohmann::json::array();
    for (const auto& img : bundle.fast.images) {
        // Pair each extracted asset with its description when one exists.
        nlohmann::json entry{{"asset_id", img.asset_id}, {"extension", img.extension}};
        for (const auto& described : bundle.described_images) {
            if (described.asset_id == img.asset_id) {
                entry["description"] = described.description;
                entry["content_type"] = described.content_type;
                if (!described.transcription.empty()) {
                    entry["transcription"] = described.transcription;
                }
                break;
            }
        }
        payload["images"].push_back(std::move(entry));
    }
    return payload;
}

inline PageMarkdown assemble_page(const parse::PageBundle& bundle, Agent& agent) {
    AgentRequest request;
    request.role = AgentRole::Assembler;
    request.payload = assemble_payload(bundle);
    std::string markdown = agent_text_call(agent, request, detail::validate_page_markdown);

    PageMarkdown page;
    page.page_index = bundle.page_index;
    page.markdown = std::move(markdown);
    page.image_manifest = detail::image_refs(page.markdown);
    return page;
}

// Joins pages with the separator; offsets point at each page's first byte, so
// slicing the document markdown reproduces every page exactly.
inline DocumentMarkdown concatenate_document(const std::vector<PageMarkdown>& pages) {
    for (std::size_t i = 0; i < pages.size(); ++i) {
        if (pages[i].page_index != static_cast<int>(i)) {
            raise(ErrorCode::NonContiguousPages,
                  "expected page " + std::to_string(i) + ", got " +
                      std::to_string(pages[i].page_index));
        }
    }
    DocumentMarkdown doc;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        if (i > 0) doc.markdown += kPageSeparator;
        doc.page_offsets.push_back(doc.markdown.size());
        doc.markdown += pages[i].markdown;
    }
    return doc;
}

inline DocumentMetadata extract_metadata(const DocumentMarkdown& doc,
                                         const std::map<std::string, std::string>& native,
                                         Agent& agent) {
    if (util::trim(doc.markdown).empty()) {
        raise(ErrorCode::InvalidConfig, "cannot extract metadata from empty markdown");
    }
    AgentRequest request;
    request.role = AgentRole::Metadata;
    request.payload = nlohmann::json{{"markdown", doc.markdown}};
    auto reply = agent_json_call(agent, request, {"topic", "keywords", "summary"});

    DocumentMetadata meta;
    meta.topic = reply.value("topic", "");
    for (const auto& k : reply.value("keywords", nlohmann::json::array())) {
        if (k.is_string()) meta.keywords.push_back(k.get<std::string>());
    }
    meta.summary = reply.value("summary", "");
    meta.native = native;  // passed through untouched
    return meta;
}

inline nlohmann::json metadata_to_json(const DocumentMetadata& meta) {
    nlohmann::json j;
    j["topic"] = meta.topic;
    j["keywords"] = meta.keywords;
    j["summary"] = meta.summary;
    j["native"] = meta.native;
    return j;
}

}  // namespace ragkit::assemble
