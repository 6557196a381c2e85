#pragma once
// Block-level markdown scanner. Produces a flat list of typed blocks, each
// carrying its exact character span in the input, so downstream node
// construction keeps a lossless source mapping. The grammar covers the constructs
// the assembler emits: ATX and setext headings, paragraphs, bullet and
// ordered lists, pipe tables, standalone image elements, fenced code and
// thematic breaks.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/common/strutil.hpp"

namespace ragkit::md {

enum class BlockKind {
    Heading,
    Paragraph,
    BulletList,
    OrderedList,
    Table,
    Image,
    CodeFence,
    ThematicBreak,
};

struct Block {
    BlockKind kind;
    size_t begin = 0;  // [begin, end) into the scanned text, markers included
    size_t end = 0;
    int level = 0;          // Heading only
    std::string text;       // Heading: title; Image: unused; others: raw slice
    std::string image_alt;  // Image only
    std::string image_src;  // Image only
};

namespace detail {

struct LineRef {
    size_t begin;  // first char of the line
    size_t end;    // one past the last char, excluding '\n'
};

inline std::vector<LineRef> scan_lines(std::string_view text) {
    std::vector<LineRef> lines;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            lines.push_back({start, i});
            start = i + 1;
        }
    }
    // a trailing '\n' produces a phantom empty line; drop it
    if (text.size() > 0 && text.back() == '\n') lines.pop_back();
    return lines;
}

inline bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

inline std::string_view after_indent(std::string_view line) {
    size_t i = 0;
    while (i < line.size() && i < 3 && line[i] == ' ') ++i;
    return line.substr(i);
}

// 1..6 when the line is an ATX heading, else 0
inline int atx_level(std::string_view line) {
    auto s = after_indent(line);
    size_t hashes = 0;
    while (hashes < s.size() && s[hashes] == '#') ++hashes;
    if (hashes < 1 || hashes > 6) return 0;
    if (hashes < s.size() && s[hashes] != ' ' && s[hashes] != '\t') return 0;
    return static_cast<int>(hashes);
}

inline std::string atx_title(std::string_view line) {
    auto s = after_indent(line);
    size_t hashes = 0;
    while (hashes < s.size() && s[hashes] == '#') ++hashes;
    auto rest = util::trim(s.substr(hashes));
    // strip a trailing closing run of #'s when separated by a space
    size_t tail = rest.size();
    while (tail > 0 && rest[tail - 1] == '#') --tail;
    if (tail < rest.size() && (tail == 0 || rest[tail - 1] == ' '))
        rest = util::trim(rest.substr(0, tail));
    return rest;
}

inline bool is_thematic_break(std::string_view line) {
    auto s = util::trim(line);
    if (s.size() < 3) return false;
    char mark = s[0];
    if (mark != '-' && mark != '*' && mark != '_') return false;
    for (char c : s)
        if (c != mark && c != ' ') return false;
    return true;
}

// all '=' (level 1) or all '-' (level 2); used only after an open paragraph
inline int setext_level(std::string_view line) {
    auto s = util::trim(line);
    if (s.empty()) return 0;
    char mark = s[0];
    if (mark != '=' && mark != '-') return 0;
    for (char c : s)
        if (c != mark) return 0;
    return mark == '=' ? 1 : 2;
}

inline bool is_bullet_item(std::string_view line) {
    auto s = after_indent(line);
    return s.size() >= 2 && (s[0] == '-' || s[0] == '*' || s[0] == '+') &&
           (s[1] == ' ' || s[1] == '\t');
}

inline bool is_ordered_item(std::string_view line) {
    auto s = after_indent(line);
    size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == 0 || i > 9 || i + 1 >= s.size()) return false;
    return (s[i] == '.' || s[i] == ')') && (s[i + 1] == ' ' || s[i + 1] == '\t');
}

inline bool is_indented_continuation(std::string_view line) {
    return !is_blank(line) && line.size() >= 2 && line[0] == ' ' && line[1] == ' ';
}

inline bool is_table_row(std::string_view line) {
    auto s = after_indent(line);
    return !s.empty() && s[0] == '|';
}

inline bool is_table_delimiter(std::string_view line) {
    auto s = util::trim(line);
    if (s.find('-') == std::string::npos || s.find('|') == std::string::npos) return false;
    for (char c : s)
        if (c != '|' && c != '-' && c != ':' && c != ' ') return false;
    return true;
}

inline bool is_fence_open(std::string_view line) {
    auto s = after_indent(line);
    return util::starts_with(s, "```") || util::starts_with(s, "~~~");
}

// `![alt](src)` alone on its line
inline bool parse_image_line(std::string_view line, std::string& alt, std::string& src) {
    auto s = util::trim(line);
    if (!util::starts_with(s, "![")) return false;
    auto mid = s.find("](");
    if (mid == std::string::npos) return false;
    if (s.back() != ')') return false;
    alt = std::string(s.substr(2, mid - 2));
    src = std::string(util::trim(s.substr(mid + 2, s.size() - mid - 3)));
    return !src.empty();
}

}  // namespace detail

// Scans markdown into blocks. Raises MalformedMarkdown on embedded NUL
// bytes (binary data is never valid page markdown).
inline std::vector<Block> scan_blocks(std::string_view text) {
    using namespace detail;
    if (text.find('\0') != std::string_view::npos)
        raise(ErrorCode::MalformedMarkdown, "input contains NUL bytes");

    auto lines = scan_lines(text);
    auto line_view = [&](size_t i) {
        return std::string_view(text.substr(lines[i].begin, lines[i].end - lines[i].begin));
    };

    std::vector<Block> blocks;
    size_t i = 0;
    const size_t n = lines.size();

    auto slice = [&](size_t begin, size_t end) { return std::string(text.substr(begin, end - begin)); };

    while (i < n) {
        auto line = line_view(i);

        if (is_blank(line)) {
            ++i;
            continue;
        }

        if (is_fence_open(line)) {
            std::string fence(util::trim(line).substr(0, 3));
            size_t j = i + 1;
            while (j < n && !util::starts_with(util::trim(line_view(j)), fence)) ++j;
            size_t end_line = j < n ? j : n - 1;
            Block b{BlockKind::CodeFence, lines[i].begin, lines[end_line].end};
            b.text = slice(b.begin, b.end);
            blocks.push_back(std::move(b));
            i = end_line + 1;
            continue;
        }

        if (int lvl = atx_level(line); lvl > 0) {
            Block b{BlockKind::Heading, lines[i].begin, lines[i].end};
            b.level = lvl;
            b.text = atx_title(line);
            blocks.push_back(std::move(b));
            ++i;
            continue;
        }

        // bare --- / *** lines: thematic break unless consumed as a setext
        // underline by the paragraph branch below
        if (is_thematic_break(line) && !is_bullet_item(line)) {
            blocks.push_back({BlockKind::ThematicBreak, lines[i].begin, lines[i].end});
            ++i;
            continue;
        }

        if (is_table_row(line) && i + 1 < n && is_table_delimiter(line_view(i + 1))) {
            size_t j = i + 2;  // header + delimiter rows
            while (j < n && is_table_row(line_view(j))) ++j;
            Block b{BlockKind::Table, lines[i].begin, lines[j - 1].end};
            b.text = slice(b.begin, b.end);
            blocks.push_back(std::move(b));
            i = j;
            continue;
        }

        {
            std::string alt, src;
            if (parse_image_line(line, alt, src)) {
                Block b{BlockKind::Image, lines[i].begin, lines[i].end};
                b.image_alt = std::move(alt);
                b.image_src = std::move(src);
                blocks.push_back(std::move(b));
                ++i;
                continue;
            }
        }

        if (is_bullet_item(line) || is_ordered_item(line)) {
            bool ordered = is_ordered_item(line);
            auto same_type = [&](std::string_view l) {
                return ordered ? is_ordered_item(l) : is_bullet_item(l);
            };
            size_t j = i + 1;
            size_t last_content = i;
            while (j < n) {
                auto l = line_view(j);
                if (same_type(l) || is_indented_continuation(l)) {
                    last_content = j;
                    ++j;
                } else if (is_blank(l) && j + 1 < n && same_type(line_view(j + 1))) {
                    ++j;  // single blank inside a loose list
                } else {
                    break;
                }
            }
            Block b{ordered ? BlockKind::OrderedList : BlockKind::BulletList,
                    lines[i].begin, lines[last_content].end};
            b.text = slice(b.begin, b.end);
            blocks.push_back(std::move(b));
            i = last_content + 1;
            continue;
        }

        // paragraph: accumulate until a blank line or another block start;
        // a setext underline immediately after converts it to a heading
        {
            size_t start_line = i;
            size_t j = i;
            while (j < n) {
                auto l = line_view(j);
                if (is_blank(l) || atx_level(l) > 0 || is_fence_open(l) ||
                    is_bullet_item(l) || is_ordered_item(l) ||
                    (is_table_row(l) && j + 1 < n && is_table_delimiter(line_view(j + 1))))
                    break;
                if (j > start_line) {
                    if (int lvl = setext_level(l); lvl > 0) {
                        Block b{BlockKind::Heading, lines[start_line].begin, lines[j].end};
                        b.level = lvl;
                        std::vector<std::string> parts;
                        for (size_t t = start_line; t < j; ++t)
                            parts.push_back(util::trim(line_view(t)));
                        b.text = util::join(parts, " ");
                        blocks.push_back(std::move(b));
                        j += 1;
                        start_line = n;  // mark consumed
                        break;
                    }
                    if (is_thematic_break(l)) break;
                }
                ++j;
            }
            if (start_line == n) {  // setext heading emitted
                i = j;
                continue;
            }
            if (j > start_line) {
                Block b{BlockKind::Paragraph, lines[start_line].begin, lines[j - 1].end};
                b.text = slice(b.begin, b.end);
                blocks.push_back(std::move(b));
            }
            i = j > start_line ? j : j + 1;
        }
    }

    return blocks;
}

}  // namespace ragkit::md
