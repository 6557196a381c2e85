#pragma once
// Text agents: assembler, metadata extractor, question generator, summarizer,
// dataset generator and answer generator share one request/response interface.
// Requests carry a structured JSON payload; replies are plain text (markdown
// for the assembler, a JSON object for everything else). A reply that fails
// validation is retried once with a repair request before the caller gives up
// with AgentMalformedOutput.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragkit/common/error.hpp"
#include "ragkit/common/fixtures.hpp"
#include "ragkit/common/hash.hpp"
#include "ragkit/common/strutil.hpp"

namespace ragkit::assemble {

enum class AgentRole { Assembler, Metadata, Questions, Summary, Dataset, Answer };

inline const char* role_name(AgentRole r) {
    switch (r) {
        case AgentRole::Assembler: return "assembler";
        case AgentRole::Metadata: return "metadata";
        case AgentRole::Questions: return "questions";
        case AgentRole::Summary: return "summary";
        case AgentRole::Dataset: return "dataset";
        case AgentRole::Answer: return "answer";
    }
    return "?";
}

struct AgentRequest {
    AgentRole role = AgentRole::Assembler;
    nlohmann::json payload;
};

struct AgentResponse {
    std::string text;
};

class Agent {
public:
    virtual ~Agent() = default;
    virtual AgentResponse respond(const AgentRequest& request) = 0;
};

namespace detail {

// Flattens markdown to plain prose: heading markers and emphasis dropped,
// image elements replaced by their alt text, table rows de-piped, code fences
// and thematic breaks skipped. With include_headings=false, heading lines
// vanish entirely (useful when only body prose should survive).
inline std::string plain_text(const std::string& markdown, bool include_headings = true) {
    std::string out;
    bool in_fence = false;
    for (auto& line : util::split_lines(markdown)) {
        std::string t = util::trim(line);
        if (t.rfind("```", 0) == 0 || t.rfind("~~~", 0) == 0) {
            in_fence = !in_fence;
            continue;
        }
        if (in_fence || t.empty()) continue;
        bool break_line = t.size() >= 3 && t.find_first_not_of("-*_ ") == std::string::npos;
        if (break_line) continue;
        std::size_t h = 0;
        while (h < t.size() && t[h] == '#') ++h;
        if (h > 0 && h <= 6 && h < t.size() && t[h] == ' ') {
            if (!include_headings) continue;
            t = t.substr(h + 1);
        }
        if (t.rfind("![", 0) == 0) {
            auto close = t.find(']');
            if (close != std::string::npos) t = t.substr(2, close - 2);
        }
        // Delimiter rows of tables carry no words once pipes/dashes go away.
        std::string cleaned;
        cleaned.reserve(t.size());
        for (char c : t) {
            if (c == '|' || c == '*' || c == '`') {
                cleaned.push_back(' ');
            } else {
                cleaned.push_back(c);
            }
        }
        cleaned = util::trim(cleaned);
        if (cleaned.find_first_not_of("-: ") == std::string::npos) continue;
        if (!out.empty()) out.push_back(' ');
        out += cleaned;
    }
    // Collapse runs of spaces left behind by the pipe replacement.
    std::string collapsed;
    collapsed.reserve(out.size());
    for (char c : out) {
        if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
        collapsed.push_back(c);
    }
    return collapsed;
}

inline std::string first_sentence(const std::string& text, std::size_t max_chars = 240) {
    auto sentences = util::split_sentences(text);
    std::string s = sentences.empty() ? std::string() : sentences.front();
    if (s.size() > max_chars) {
        s = util::trim(s.substr(0, max_chars));
        s += "...";
    }
    return s;
}

inline std::string first_heading_title(const std::string& markdown) {
    for (auto& line : util::split_lines(markdown)) {
        std::string t = util::trim(line);
        std::size_t h = 0;
        while (h < t.size() && t[h] == '#') ++h;
        if (h > 0 && h <= 6 && h < t.size() && t[h] == ' ') return util::trim(t.substr(h + 1));
    }
    return "";
}

// Header cells of the first row of a markdown table, pipes stripped.
inline std::vector<std::string> table_header_cells(const std::string& table_md) {
    auto lines = util::split_lines(table_md);
    if (lines.empty()) return {};
    std::vector<std::string> cells;
    for (auto& raw : util::split(lines.front(), '|')) {
        auto c = util::trim(raw);
        if (!c.empty()) cells.push_back(c);
    }
    return cells;
}

inline int table_body_rows(const std::string& table_md) {
    auto lines = util::split_lines(table_md);
    int rows = 0;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (!util::trim(lines[i]).empty()) ++rows;
    }
    return rows;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Deterministic mock agent. Output depends only on the request payload; a
// fixture directory can override any response by payload hash (role
// "agent_<role>", key sha256 of the payload dump).

class MockAgent : public Agent {
public:
    explicit MockAgent(util::FixtureStore fixtures = {}) : fixtures_(std::move(fixtures)) {}

    AgentResponse respond(const AgentRequest& request) override {
        if (request.payload.is_object() && request.payload.value("repair", false)) {
            AgentRequest inner{request.role, request.payload.value("original", nlohmann::json())};
            return respond(inner);
        }
        std::string role = std::string("agent_") + role_name(request.role);
        if (auto fx = fixtures_.lookup(role, util::sha256_hex(request.payload.dump()))) {
            return {fx->value("text", "")};
        }
        switch (request.role) {
            case AgentRole::Assembler: return {assemble(request.payload)};
            case AgentRole::Metadata: return {metadata(request.payload)};
            case AgentRole::Questions: return {questions(request.payload)};
            case AgentRole::Summary: return {summary(request.payload)};
            case AgentRole::Dataset: return {dataset(request.payload)};
            case AgentRole::Answer: return {answer(request.payload)};
        }
        raise(ErrorCode::AgentMalformedOutput, "unknown agent role");
    }

private:
    struct MergeBlock {
        std::string text;
        int order = 0;
        bool heading = false;
        int level = 0;
    };

    static std::vector<MergeBlock> blocks_of(const nlohmann::json& strategy) {
        std::vector<MergeBlock> out;
        for (const auto& b : strategy.value("text_blocks", nlohmann::json::array())) {
            MergeBlock mb;
            mb.text = b.value("text", "");
            mb.order = b.value("order", int(out.size()));
            mb.heading = b.value("heading", false);
            mb.level = b.value("heading_level", 0);
            if (!util::trim(mb.text).empty()) out.push_back(std::move(mb));
        }
        std::stable_sort(out.begin(), out.end(),
                         [](const MergeBlock& a, const MergeBlock& b) { return a.order < b.order; });
        return out;
    }

    // Merge policy: the OCR transcription wins when present (it reflects what
    // is actually visible), then the layout-aware LLM text, then the embedded
    // text layer. When both OCR and LLM text exist, OCR blocks are re-ordered
    // to follow the LLM reading order by greedy token overlap.
    static std::string assemble(const nlohmann::json& p) {
        auto fast = blocks_of(p.value("fast", nlohmann::json::object()));
        auto llm = blocks_of(p.value("llm", nlohmann::json::object()));
        auto ocr = blocks_of(p.value("ocr", nlohmann::json::object()));

        std::vector<MergeBlock> chosen;
        if (!ocr.empty() && !llm.empty()) {
            std::vector<bool> used(ocr.size(), false);
            for (const auto& guide : llm) {
                int best = -1;
                double best_score = -1.0;
                for (std::size_t i = 0; i < ocr.size(); ++i) {
                    if (used[i]) continue;
                    double score = util::token_overlap(ocr[i].text, guide.text);
                    if (score > best_score) {
                        best_score = score;
                        best = int(i);
                    }
                }
                if (best >= 0) {
                    used[std::size_t(best)] = true;
                    MergeBlock mb = ocr[std::size_t(best)];
                    mb.heading = guide.heading;
                    mb.level = guide.level;
                    chosen.push_back(std::move(mb));
                }
            }
            for (std::size_t i = 0; i < ocr.size(); ++i) {
                if (!used[i]) chosen.push_back(ocr[i]);
            }
        } else if (!ocr.empty()) {
            chosen = ocr;
        } else if (!llm.empty()) {
            chosen = llm;
        } else {
            chosen = fast;
        }

        std::vector<std::string> parts;
        for (const auto& b : chosen) {
            if (b.heading) {
                int level = std::clamp(b.level, 1, 6);
                parts.push_back(std::string(std::size_t(level), '#') + " " + util::trim(b.text));
            } else {
                parts.push_back(util::trim(b.text));
            }
        }

        const auto& llm_tables = p.value("llm", nlohmann::json::object())
                                     .value("tables", nlohmann::json::array());
        const auto& fast_tables = p.value("fast", nlohmann::json::object())
                                      .value("tables", nlohmann::json::array());
        const auto& tables = llm_tables.empty() ? fast_tables : llm_tables;
        for (const auto& t : tables) {
            auto md = util::trim(t.value("markdown", ""));
            if (!md.empty()) parts.push_back(md);
        }

        for (const auto& img : p.value("images", nlohmann::json::array())) {
            std::string desc = img.value("description", "");
            if (desc.empty()) desc = "image";
            parts.push_back("![" + desc + "](" + img.value("asset_id", "") + "." +
                            img.value("extension", "png") + ")");
        }

        if (parts.empty()) parts.push_back("(blank page)");
        return util::join(parts, "\n\n") + "\n";
    }

    static std::string metadata(const nlohmann::json& p) {
        std::string markdown = p.value("markdown", "");
        std::string text = detail::plain_text(markdown);
        std::string topic = detail::first_heading_title(markdown);
        if (topic.empty()) {
            auto words = util::word_tokens(text);
            std::size_t n = std::min<std::size_t>(6, words.size());
            topic = util::join(std::vector<std::string>(words.begin(), words.begin() + long(n)), " ");
        }
        topic = util::to_lower(topic);
        if (topic.empty()) topic = "untitled document";

        std::map<std::string, int> counts;
        for (auto& w : util::word_tokens(text)) {
            if (w.size() >= 4) ++counts[w];
        }
        std::vector<std::pair<std::string, int>> freq(counts.begin(), counts.end());
        std::sort(freq.begin(), freq.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        nlohmann::json keywords = nlohmann::json::array();
        for (std::size_t i = 0; i < freq.size() && i < 5; ++i) keywords.push_back(freq[i].first);

        std::string summary = detail::first_sentence(text, 300);
        if (summary.empty()) summary = "Document without extractable text.";
        return nlohmann::json{{"topic", topic}, {"keywords", keywords}, {"summary", summary}}
            .dump();
    }

    static std::string questions(const nlohmann::json& p) {
        std::string kind = p.value("kind", "header");
        std::string title = p.value("title", "");
        std::string content = p.value("content", "");
        int count = std::max(1, p.value("count", 3));
        std::vector<std::string> qs;
        if (kind == "table") {
            for (auto& cell : detail::table_header_cells(content)) {
                qs.push_back("What does the " + cell + " column of the table report?");
            }
            qs.push_back("How many rows does the table contain?");
            qs.push_back("What conclusion does the table support?");
        } else {
            std::string t = title.empty() ? "this section" : "'" + title + "'";
            qs.push_back("What does the section " + t + " cover?");
            qs.push_back("Which details does " + t + " provide?");
            qs.push_back("Why is " + t + " relevant to the document?");
        }
        if (int(qs.size()) > count) qs.resize(std::size_t(count));
        return nlohmann::json{{"questions", qs}}.dump();
    }

    static std::string summary(const nlohmann::json& p) {
        std::string kind = p.value("kind", "header");
        std::string title = p.value("title", "");
        std::string content = p.value("content", "");
        std::string s;
        if (kind == "table") {
            auto cells = detail::table_header_cells(content);
            int rows = detail::table_body_rows(content);
            if (cells.empty()) {
                s = "Table with " + std::to_string(rows) + " data rows.";
            } else {
                s = "Table with columns " + util::join(cells, ", ") + " and " +
                    std::to_string(rows) + " data rows.";
            }
        } else if (kind == "page") {
            int page = p.value("page_index", 0);
            std::string body = detail::first_sentence(detail::plain_text(content));
            s = "Page " + std::to_string(page + 1) +
                (body.empty() ? " contains no extractable text." : ": " + body);
        } else if (kind == "document") {
            std::string heading = detail::first_heading_title(content);
            std::string body = detail::first_sentence(detail::plain_text(content));
            s = heading.empty() ? "Document summary: " + body
                                : "Document about " + heading + ": " + body;
            if (body.empty()) s = "Document without extractable text.";
        } else {  // header
            std::string t = title.empty() ? "(untitled)" : title;
            std::string body = detail::first_sentence(detail::plain_text(content), 200);
            s = body.empty() ? "Section '" + t + "'." : "Section '" + t + "': " + body;
        }
        return nlohmann::json{{"summary", s}}.dump();
    }

    static std::string dataset(const nlohmann::json& p) {
        std::string doc_id = p.value("doc_id", "");
        int page_index = p.value("page_index", 0);
        std::string markdown = p.value("page_markdown", "");
        std::string heading = detail::first_heading_title(markdown);
        // body prose only: the heading already appears in the query
        std::string text = detail::plain_text(markdown, /*include_headings=*/false);
        std::string page_label = std::to_string(page_index + 1);

        std::string query;
        if (!heading.empty()) {
            query = "What does page " + page_label + " of " + doc_id + " say about " + heading + "?";
        } else {
            query = "What is the main content of page " + page_label + " of " + doc_id + "?";
        }
        std::string expected = detail::first_sentence(text, 300);
        if (expected.empty()) {
            expected = "Page " + page_label + " of " + doc_id + " has no textual content.";
        }
        std::string ground = text.substr(0, std::min<std::size_t>(text.size(), 400));
        if (ground.empty()) ground = expected;
        return nlohmann::json{{"query", query},
                              {"expected_answer", expected},
                              {"ground_truth_context", ground}}
            .dump();
    }

    static std::string answer(const nlohmann::json& p) {
        const auto& contexts = p.value("contexts", nlohmann::json::array());
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < contexts.size() && i < 2; ++i) {
            auto s = detail::first_sentence(contexts[i].get<std::string>(), 300);
            if (!s.empty()) parts.push_back(s);
        }
        std::string a = parts.empty() ? "No supporting context was retrieved."
                                      : util::join(parts, " ");
        return nlohmann::json{{"answer", a}}.dump();
    }

    util::FixtureStore fixtures_;
};

// ---------------------------------------------------------------------------
// Validation helpers shared by every agent call site.

// Asks the agent for a JSON object containing `required_keys`. One repair
// round-trip is attempted before AgentMalformedOutput.
inline nlohmann::json agent_json_call(Agent& agent, const AgentRequest& request,
                                      const std::vector<std::string>& required_keys) {
    AgentRequest current = request;
    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto reply = agent.respond(current);
        nlohmann::json parsed;
        last_error.clear();
        try {
            parsed = nlohmann::json::parse(reply.text);
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("not valid JSON: ") + e.what();
        }
        if (last_error.empty() && !parsed.is_object()) last_error = "reply is not a JSON object";
        if (last_error.empty()) {
            for (const auto& key : required_keys) {
                if (!parsed.contains(key)) {
                    last_error = "missing key '" + key + "'";
                    break;
                }
            }
        }
        if (last_error.empty()) return parsed;
        current.payload = nlohmann::json{{"repair", true},
                                         {"original", request.payload},
                                         {"previous_reply", reply.text},
                                         {"error", last_error}};
    }
    raise(ErrorCode::AgentMalformedOutput,
          std::string(role_name(request.role)) + " agent reply invalid: " + last_error);
}

// Same repair protocol for plain-text replies; `validate` returns an error
// message, or the empty string to accept.
template <typename Validator>
std::string agent_text_call(Agent& agent, const AgentRequest& request, Validator&& validate) {
    AgentRequest current = request;
    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto reply = agent.respond(current);
        last_error = validate(reply.text);
        if (last_error.empty()) return reply.text;
        current.payload = nlohmann::json{{"repair", true},
                                         {"original", request.payload},
                                         {"previous_reply", reply.text},
                                         {"error", last_error}};
    }
    raise(ErrorCode::AgentMalformedOutput,
          std::string(role_name(request.role)) + " agent reply invalid: " + last_error);
}

}  // namespace ragkit::assemble
