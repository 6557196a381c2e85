#pragma once
// Small string helpers used throughout the pipeline.

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ragkit::util {

inline std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::vector<std::string> split_lines(std::string_view s) {
    return split(s, '\n');
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    if (from.empty()) return s;
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

// Lowercased alphanumeric word tokens; the shared vocabulary for the mock
// embedding backend and the lexical-overlap judge.
inline std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Fraction of tokens in `text` that also occur in `reference`. Returns 1.0
// for an empty token list (nothing to contradict).
inline double token_overlap(std::string_view text, std::string_view reference) {
    auto toks = word_tokens(text);
    if (toks.empty()) return 1.0;
    auto ref = word_tokens(reference);
    std::set<std::string> ref_set(ref.begin(), ref.end());
    size_t hit = 0;
    for (const auto& t : toks)
        if (ref_set.count(t)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(toks.size());
}

// Naive sentence segmentation: break after . ! ? when followed by
// whitespace or end of text. Never returns an empty list for non-blank
// input; falls back to the whole text as one sentence.
inline std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool boundary = (c == '.' || c == '!' || c == '?') &&
                        (i + 1 == text.size() ||
                         std::isspace(static_cast<unsigned char>(text[i + 1])));
        if (boundary) {
            auto sentence = trim(text.substr(start, i + 1 - start));
            if (!sentence.empty()) out.push_back(sentence);
            start = i + 1;
        }
    }
    auto tail = trim(text.substr(start));
    if (!tail.empty()) out.push_back(tail);
    if (out.empty()) {
        auto whole = trim(text);
        if (!whole.empty()) out.push_back(whole);
    }
    return out;
}

}  // namespace ragkit::util
