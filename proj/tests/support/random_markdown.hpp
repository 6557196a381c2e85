#pragma once
// Seeded random markdown pages for property tests: a mix of headings,
// paragraphs, lists, tables, images, code fences and thematic breaks joined
// by blank lines, the same texture the page assembler emits.

#include <cctype>
#include <string>
#include <vector>

#include "ragkit/common/rng.hpp"
#include "ragkit/common/strutil.hpp"

namespace testsupport {

inline const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> words = {
        "signal",  "filter",  "engine",   "module",  "vector",  "sample",  "window",
        "graph",   "stream",  "buffer",   "metric",  "index",   "corpus",  "layout",
        "anchor",  "margin",  "kernel",   "tensor",  "lattice", "payload", "channel",
        "segment", "cluster", "pipeline", "schema",  "ledger",  "beacon",  "carrier",
        "domain",  "echo",    "fabric",   "gateway", "harbor",  "impulse", "junction"};
    return words;
}

inline std::string random_word(ragkit::util::SplitMix64& rng) {
    const auto& v = vocabulary();
    return v[rng.next_below(v.size())];
}

inline std::string random_sentence(ragkit::util::SplitMix64& rng, int min_words = 4,
                                   int max_words = 12) {
    int n = min_words + int(rng.next_below(std::uint64_t(max_words - min_words + 1)));
    std::vector<std::string> words;
    for (int i = 0; i < n; ++i) words.push_back(random_word(rng));
    words[0][0] = char(std::toupper(static_cast<unsigned char>(words[0][0])));
    return ragkit::util::join(words, " ") + ".";
}

inline std::string random_paragraph(ragkit::util::SplitMix64& rng, int min_sentences = 1,
                                    int max_sentences = 4) {
    int n = min_sentences + int(rng.next_below(std::uint64_t(max_sentences - min_sentences + 1)));
    std::vector<std::string> sentences;
    for (int i = 0; i < n; ++i) sentences.push_back(random_sentence(rng));
    return ragkit::util::join(sentences, " ");
}

inline std::string random_heading(ragkit::util::SplitMix64& rng, int level) {
    std::string title = random_word(rng) + " " + random_word(rng);
    title[0] = char(std::toupper(static_cast<unsigned char>(title[0])));
    return std::string(std::size_t(level), '#') + " " + title;
}

inline std::string random_list(ragkit::util::SplitMix64& rng, bool ordered) {
    int n = 2 + int(rng.next_below(4));
    std::vector<std::string> items;
    for (int i = 0; i < n; ++i) {
        std::string marker = ordered ? std::to_string(i + 1) + ". " : "- ";
        items.push_back(marker + random_sentence(rng, 3, 7));
    }
    return ragkit::util::join(items, "\n");
}

inline std::string random_table(ragkit::util::SplitMix64& rng) {
    int cols = 2 + int(rng.next_below(3));
    int rows = 1 + int(rng.next_below(4));
    std::vector<std::string> lines;
    std::string header = "|", delim = "|";
    for (int c = 0; c < cols; ++c) {
        header += " " + random_word(rng) + " |";
        delim += " --- |";
    }
    lines.push_back(header);
    lines.push_back(delim);
    for (int r = 0; r < rows; ++r) {
        std::string row = "|";
        for (int c = 0; c < cols; ++c) row += " " + random_word(rng) + " |";
        lines.push_back(row);
    }
    return ragkit::util::join(lines, "\n");
}

inline std::string random_image(ragkit::util::SplitMix64& rng) {
    return "![" + random_sentence(rng, 3, 6) + "](" + random_word(rng) +
           std::to_string(rng.next_below(1000)) + ".png)";
}

inline std::string random_code_fence(ragkit::util::SplitMix64& rng) {
    std::vector<std::string> lines{"```"};
    int n = 1 + int(rng.next_below(3));
    for (int i = 0; i < n; ++i) lines.push_back(random_word(rng) + " = " + random_word(rng));
    lines.push_back("```");
    return ragkit::util::join(lines, "\n");
}

// A page with `blocks` top-level blocks. Heading levels walk up and down so
// nesting varies.
inline std::string random_page(std::uint64_t seed, int blocks = 8) {
    ragkit::util::SplitMix64 rng(seed);
    std::vector<std::string> parts;
    int heading_level = 1;
    for (int b = 0; b < blocks; ++b) {
        switch (rng.next_below(10)) {
            case 0:
            case 1: {
                heading_level = 1 + int(rng.next_below(std::uint64_t(heading_level < 4 ? heading_level + 1 : 4)));
                parts.push_back(random_heading(rng, heading_level));
                break;
            }
            case 2: parts.push_back(random_list(rng, false)); break;
            case 3: parts.push_back(random_list(rng, true)); break;
            case 4: parts.push_back(random_table(rng)); break;
            case 5: parts.push_back(random_image(rng)); break;
            case 6: parts.push_back(random_code_fence(rng)); break;
            case 7: parts.push_back("---"); break;
            default: parts.push_back(random_paragraph(rng)); break;
        }
    }
    if (parts.empty()) parts.push_back(random_paragraph(rng));
    return ragkit::util::join(parts, "\n\n") + "\n";
}

// Prose-only text of at least `min_chars` characters, for chunking tests.
inline std::string random_long_text(std::uint64_t seed, std::size_t min_chars) {
    ragkit::util::SplitMix64 rng(seed);
    std::string out;
    while (out.size() < min_chars) {
        if (!out.empty()) out += rng.next_below(4) == 0 ? "\n\n" : " ";
        out += random_sentence(rng, 5, 14);
    }
    return out;
}

}  // namespace testsupport
