#pragma once
// Reader for the born-digital PDF subset the pipeline ingests: sequentially
// scanned objects (the xref table is ignored), Flate-compressed content
// streams, text via Tj/TJ show operators, and image XObjects (DCT passed
// through as JPEG, Flate RGB repacked as PNG).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/common/flate.hpp"
#include "ragkit/common/png.hpp"
#include "ragkit/parse/types.hpp"

namespace ragkit::parse {

// A document decoded to the page level, before any strategy runs.
struct NativeDocument {
    std::vector<NativePage> pages;
    double page_width_in = 8.5;
    double page_height_in = 11.0;
    std::map<std::string, std::string> metadata;  // title, author when present
};

namespace pdfdetail {

inline bool is_delim(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '/' || c == '[' ||
           c == ']' || c == '<' || c == '>' || c == '(' || c == '\0';
}

// Position just past `key` when the dictionary contains it as a whole token.
inline std::optional<std::size_t> find_key(std::string_view dict, std::string_view key) {
    std::size_t at = 0;
    while ((at = dict.find(key, at)) != std::string_view::npos) {
        std::size_t after = at + key.size();
        if (after == dict.size() || is_delim(dict[after])) return after;
        at = after;
    }
    return std::nullopt;
}

inline std::size_t skip_ws(std::string_view s, std::size_t at) {
    while (at < s.size() && (s[at] == ' ' || s[at] == '\t' || s[at] == '\r' || s[at] == '\n')) {
        ++at;
    }
    return at;
}

inline std::optional<std::pair<long, std::size_t>> read_int(std::string_view s, std::size_t at) {
    at = skip_ws(s, at);
    std::size_t end = at;
    if (end < s.size() && (s[end] == '-' || s[end] == '+')) ++end;
    std::size_t digits_from = end;
    while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
    if (end == digits_from) return std::nullopt;
    return std::make_pair(std::stol(std::string(s.substr(at, end - at))), end);
}

// `/Key 42` — plain integer values only; indirect references do not match.
inline std::optional<long> dict_int(std::string_view dict, std::string_view key) {
    auto after = find_key(dict, key);
    if (!after) return std::nullopt;
    auto first = read_int(dict, *after);
    if (!first) return std::nullopt;
    auto second = read_int(dict, first->second);
    if (second) {
        std::size_t rest = skip_ws(dict, second->second);
        if (rest < dict.size() && dict[rest] == 'R') return std::nullopt;
    }
    return first->first;
}

// `/Key 7 0 R` — indirect reference target.
inline std::optional<int> dict_ref(std::string_view dict, std::string_view key) {
    auto after = find_key(dict, key);
    if (!after) return std::nullopt;
    auto num = read_int(dict, *after);
    if (!num) return std::nullopt;
    auto gen = read_int(dict, num->second);
    if (!gen) return std::nullopt;
    std::size_t rest = skip_ws(dict, gen->second);
    if (rest < dict.size() && dict[rest] == 'R') return static_cast<int>(num->first);
    return std::nullopt;
}

// `/Key [1 0 R 2 0 R]` — also tolerates a single bare reference.
inline std::vector<int> dict_ref_array(std::string_view dict, std::string_view key) {
    std::vector<int> out;
    auto after = find_key(dict, key);
    if (!after) return out;
    std::size_t at = skip_ws(dict, *after);
    if (at < dict.size() && dict[at] != '[') {
        if (auto single = dict_ref(dict, key)) out.push_back(*single);
        return out;
    }
    ++at;
    while (at < dict.size() && dict[at] != ']') {
        auto num = read_int(dict, at);
        if (!num) break;
        auto gen = read_int(dict, num->second);
        if (!gen) break;
        std::size_t rest = skip_ws(dict, gen->second);
        if (rest >= dict.size() || dict[rest] != 'R') break;
        out.push_back(static_cast<int>(num->first));
        at = rest + 1;
        at = skip_ws(dict, at);
    }
    return out;
}

inline std::optional<std::string> dict_name(std::string_view dict, std::string_view key) {
    auto after = find_key(dict, key);
    if (!after) return std::nullopt;
    std::size_t at = skip_ws(dict, *after);
    if (at >= dict.size() || dict[at] != '/') return std::nullopt;
    std::size_t end = at + 1;
    while (end < dict.size() && !is_delim(dict[end])) ++end;
    return std::string(dict.substr(at + 1, end - at - 1));
}

// Reads a `(...)`` string starting at the opening paren; returns the decoded
// text and the position just past the closing paren.
inline std::pair<std::string, std::size_t> read_string(std::string_view s, std::size_t at) {
    std::string out;
    int depth = 1;
    ++at;
    while (at < s.size() && depth > 0) {
        char c = s[at];
        if (c == '\\' && at + 1 < s.size()) {
            char e = s[at + 1];
            at += 2;
            switch (e) {
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 't': out += '\t'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case '(': out += '('; break;
                case ')': out += ')'; break;
                case '\\': out += '\\'; break;
                default:
                    if (e >= '0' && e <= '7') {
                        int code = e - '0';
                        for (int i = 0; i < 2 && at < s.size() && s[at] >= '0' && s[at] <= '7';
                             ++i) {
                            code = code * 8 + (s[at] - '0');
                            ++at;
                        }
                        out += static_cast<char>(code);
                    } else {
                        out += e;
                    }
            }
            continue;
        }
        if (c == '(') ++depth;
        if (c == ')') {
            --depth;
            if (depth == 0) {
                ++at;
                break;
            }
        }
        out += c;
        ++at;
    }
    return {std::move(out), at};
}

inline std::optional<std::string> dict_string(std::string_view dict, std::string_view key) {
    auto after = find_key(dict, key);
    if (!after) return std::nullopt;
    std::size_t at = skip_ws(dict, *after);
    if (at >= dict.size() || dict[at] != '(') return std::nullopt;
    return read_string(dict, at).first;
}

// Sequentially collects `N G obj ... endobj` bodies. Stream payloads are
// skipped via /Length so compressed bytes cannot masquerade as keywords.
inline std::map<int, std::string> scan_objects(std::string_view bytes) {
    std::map<int, std::string> objects;
    std::size_t at = 0;
    while ((at = bytes.find("obj", at)) != std::string_view::npos) {
        // Walk back across "N G " to confirm this is an object header.
        std::size_t back = at;
        auto eat_ws_back = [&](std::size_t p) {
            while (p > 0 && (bytes[p - 1] == ' ' || bytes[p - 1] == '\r' || bytes[p - 1] == '\n'))
                --p;
            return p;
        };
        auto eat_digits_back = [&](std::size_t p) {
            std::size_t q = p;
            while (q > 0 && bytes[q - 1] >= '0' && bytes[q - 1] <= '9') --q;
            return q;
        };
        back = eat_ws_back(back);
        std::size_t gen_from = eat_digits_back(back);
        if (gen_from == back) {
            at += 3;
            continue;
        }
        std::size_t num_to = eat_ws_back(gen_from);
        std::size_t num_from = eat_digits_back(num_to);
        if (num_from == num_to || num_to == gen_from) {
            at += 3;
            continue;
        }
        int number = std::stoi(std::string(bytes.substr(num_from, num_to - num_from)));

        std::size_t body_from = at + 3;
        // If the object carries a stream, jump past its payload first.
        std::size_t stream_kw = bytes.find("stream", body_from);
        while (stream_kw != std::string_view::npos && stream_kw >= 3 &&
               bytes.compare(stream_kw - 3, 3, "end") == 0) {
            stream_kw = bytes.find("stream", stream_kw + 6);
        }
        std::size_t endobj_kw = bytes.find("endobj", body_from);
        if (stream_kw != std::string_view::npos &&
            (endobj_kw == std::string_view::npos || stream_kw < endobj_kw)) {
            std::size_t data_from = stream_kw + 6;
            if (data_from < bytes.size() && bytes[data_from] == '\r') ++data_from;
            if (data_from < bytes.size() && bytes[data_from] == '\n') ++data_from;
            std::string_view dict = bytes.substr(body_from, stream_kw - body_from);
            std::size_t endstream;
            if (auto len = dict_int(dict, "/Length"); len && data_from + *len <= bytes.size()) {
                endstream = bytes.find("endstream", data_from + *len);
            } else {
                endstream = bytes.find("endstream", data_from);
            }
            if (endstream == std::string_view::npos) {
                raise(ErrorCode::CorruptFile, "pdf: unterminated stream");
            }
            endobj_kw = bytes.find("endobj", endstream);
        }
        if (endobj_kw == std::string_view::npos) {
            raise(ErrorCode::CorruptFile, "pdf: unterminated object");
        }
        objects[number] = std::string(bytes.substr(body_from, endobj_kw - body_from));
        at = endobj_kw + 6;
    }
    return objects;
}

// Raw stream payload of an object body (already /Length-delimited).
inline std::optional<std::string> stream_data(std::string_view body) {
    std::size_t kw = body.find("stream");
    while (kw != std::string_view::npos && kw >= 3 && body.compare(kw - 3, 3, "end") == 0) {
        kw = body.find("stream", kw + 6);
    }
    if (kw == std::string_view::npos) return std::nullopt;
    std::size_t from = kw + 6;
    if (from < body.size() && body[from] == '\r') ++from;
    if (from < body.size() && body[from] == '\n') ++from;
    std::size_t to;
    std::string_view dict = body.substr(0, kw);
    if (auto len = dict_int(dict, "/Length"); len && from + *len <= body.size()) {
        to = from + static_cast<std::size_t>(*len);
    } else {
        to = body.find("endstream", from);
        if (to == std::string_view::npos) return std::nullopt;
        if (to > from && body[to - 1] == '\n') --to;
        if (to > from && body[to - 1] == '\r') --to;
    }
    return std::string(body.substr(from, to - from));
}

inline std::string decoded_stream(std::string_view body) {
    auto data = stream_data(body);
    if (!data) return "";
    if (auto filter = dict_name(body.substr(0, body.find("stream")), "/Filter");
        filter && *filter == "FlateDecode") {
        return util::flate_decompress(*data);
    }
    return *data;
}

struct ShownText {
    std::string text;
    double font_size = 0;
};

// Walks a content stream and groups shown strings per BT..ET block. The font
// size active at the first show operator tags the block.
inline std::vector<ShownText> extract_text(std::string_view content) {
    std::vector<ShownText> blocks;
    std::size_t at = 0;
    bool in_block = false;
    ShownText current;
    double font_size = 0;
    double last_number = 0;
    std::string pending;       // last (..) string seen
    std::string array_buffer;  // concatenated strings inside [ .. ]
    bool in_array = false;

    auto show = [&](const std::string& text) {
        if (!in_block || text.empty()) return;
        if (current.text.empty()) current.font_size = font_size;
        if (!current.text.empty() && current.text.back() != ' ') current.text += ' ';
        current.text += text;
    };

    while (at < content.size()) {
        char c = content[at];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++at;
            continue;
        }
        if (c == '(') {
            auto [text, next] = read_string(content, at);
            if (in_array) {
                array_buffer += text;
            } else {
                pending = std::move(text);
            }
            at = next;
            continue;
        }
        if (c == '[') {
            in_array = true;
            array_buffer.clear();
            ++at;
            continue;
        }
        if (c == ']') {
            in_array = false;
            ++at;
            continue;
        }
        if (c == '/') {
            std::size_t end = at + 1;
            while (end < content.size() && !is_delim(content[end])) ++end;
            at = end;
            continue;
        }
        if ((c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.') {
            std::size_t end = at;
            while (end < content.size() &&
                   ((content[end] >= '0' && content[end] <= '9') || content[end] == '-' ||
                    content[end] == '+' || content[end] == '.')) {
                ++end;
            }
            last_number = std::stod(std::string(content.substr(at, end - at)));
            at = end;
            continue;
        }
        if (c == '\'' || c == '"') {
            show(pending);
            pending.clear();
            ++at;
            continue;
        }
        std::size_t end = at;
        while (end < content.size() && !is_delim(content[end]) && content[end] != '\'' &&
               content[end] != '"') {
            ++end;
        }
        std::string_view op = content.substr(at, end - at);
        at = end;
        if (op == "BT") {
            in_block = true;
            current = {};
        } else if (op == "ET") {
            if (in_block && !current.text.empty()) blocks.push_back(std::move(current));
            in_block = false;
            current = {};
        } else if (op == "Tf") {
            font_size = last_number;
        } else if (op == "Tj") {
            show(pending);
            pending.clear();
        } else if (op == "TJ") {
            show(array_buffer);
            array_buffer.clear();
        }
    }
    return blocks;
}

// XObject names in the order the content stream paints them.
inline std::vector<std::string> xobject_uses(std::string_view content) {
    std::vector<std::string> uses;
    std::size_t at = 0;
    std::string last_name;
    while (at < content.size()) {
        char c = content[at];
        if (c == '(') {
            at = read_string(content, at).second;
            continue;
        }
        if (c == '/') {
            std::size_t end = at + 1;
            while (end < content.size() && !is_delim(content[end])) ++end;
            last_name = std::string(content.substr(at + 1, end - at - 1));
            at = end;
            continue;
        }
        if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) {
            std::size_t end = at;
            while (end < content.size() && !is_delim(content[end])) ++end;
            if (content.substr(at, end - at) == "Do" && !last_name.empty()) {
                uses.push_back(last_name);
            }
            at = end;
            continue;
        }
        ++at;
    }
    return uses;
}

// `/XObject << /Im1 5 0 R >>` inside a page's resources.
inline std::map<std::string, int> xobject_map(std::string_view page_body) {
    std::map<std::string, int> out;
    auto after = find_key(page_body, "/XObject");
    if (!after) return out;
    std::size_t at = skip_ws(page_body, *after);
    if (page_body.compare(at, 2, "<<") != 0) return out;
    std::size_t close = page_body.find(">>", at);
    if (close == std::string_view::npos) return out;
    std::string_view inner = page_body.substr(at + 2, close - at - 2);
    std::size_t p = 0;
    while (p < inner.size()) {
        std::size_t slash = inner.find('/', p);
        if (slash == std::string_view::npos) break;
        std::size_t name_end = slash + 1;
        while (name_end < inner.size() && !is_delim(inner[name_end])) ++name_end;
        std::string name(inner.substr(slash + 1, name_end - slash - 1));
        auto num = read_int(inner, name_end);
        if (!num) break;
        auto gen = read_int(inner, num->second);
        if (!gen) break;
        std::size_t rest = skip_ws(inner, gen->second);
        if (rest < inner.size() && inner[rest] == 'R') {
            out[name] = static_cast<int>(num->first);
            p = rest + 1;
        } else {
            p = name_end;
        }
    }
    return out;
}

inline int heading_level_for_size(double font_size) {
    if (font_size >= 20) return 1;
    if (font_size >= 16) return 2;
    if (font_size >= 14) return 3;
    return 0;
}

}  // namespace pdfdetail

// Decodes a PDF byte buffer into per-page text blocks and image assets.
// Asset ids are "<doc_id>/img_<n>" in paint order across the document.
inline NativeDocument read_pdf(std::string_view bytes, const std::string& doc_id) {
    namespace pd = pdfdetail;
    if (bytes.substr(0, 5) != "%PDF-") raise(ErrorCode::CorruptFile, "pdf: missing header");
    auto objects = pd::scan_objects(bytes);
    if (objects.empty()) raise(ErrorCode::CorruptFile, "pdf: no objects");

    // Page order: the page-tree /Kids array when present, else object order.
    std::vector<int> page_order;
    for (const auto& [num, body] : objects) {
        if (pd::find_key(body, "/Pages") && pd::find_key(body, "/Kids")) {
            page_order = pd::dict_ref_array(body, "/Kids");
            break;
        }
    }
    if (page_order.empty()) {
        for (const auto& [num, body] : objects) {
            auto type = pd::dict_name(body, "/Type");
            if (type && *type == "Page") page_order.push_back(num);
        }
    }

    NativeDocument doc;
    for (const auto& [num, body] : objects) {
        if (auto title = pd::dict_string(body, "/Title")) doc.metadata["title"] = *title;
        if (auto author = pd::dict_string(body, "/Author")) doc.metadata["author"] = *author;
    }

    int asset_counter = 0;
    int page_index = 0;
    for (int page_num : page_order) {
        auto it = objects.find(page_num);
        if (it == objects.end()) raise(ErrorCode::CorruptFile, "pdf: dangling page reference");
        const std::string& page_body = it->second;

        if (page_index == 0) {
            if (auto media = pd::find_key(page_body, "/MediaBox")) {
                std::size_t at = pd::skip_ws(page_body, *media);
                if (at < page_body.size() && page_body[at] == '[') {
                    double vals[4] = {0, 0, 612, 792};
                    ++at;
                    for (double& v : vals) {
                        auto n = pd::read_int(page_body, at);
                        if (!n) break;
                        v = static_cast<double>(n->first);
                        at = n->second;
                    }
                    if (vals[2] > vals[0] && vals[3] > vals[1]) {
                        doc.page_width_in = (vals[2] - vals[0]) / 72.0;
                        doc.page_height_in = (vals[3] - vals[1]) / 72.0;
                    }
                }
            }
        }

        std::string content;
        std::vector<int> content_refs = pd::dict_ref_array(page_body, "/Contents");
        if (content_refs.empty()) {
            if (auto single = pd::dict_ref(page_body, "/Contents")) content_refs = {*single};
        }
        for (int ref : content_refs) {
            auto cit = objects.find(ref);
            if (cit == objects.end()) continue;
            if (!content.empty()) content += '\n';
            content += pd::decoded_stream(cit->second);
        }

        NativePage page;
        page.page_index = page_index;
        int order = 0;
        for (auto& shown : pd::extract_text(content)) {
            TextBlock tb;
            tb.text = std::move(shown.text);
            tb.order = order++;
            tb.heading_level = pd::heading_level_for_size(shown.font_size);
            tb.heading = tb.heading_level > 0;
            page.text_blocks.push_back(std::move(tb));
        }

        auto xmap = pd::xobject_map(page_body);
        for (const auto& name : pd::xobject_uses(content)) {
            auto xit = xmap.find(name);
            if (xit == xmap.end()) continue;
            auto oit = objects.find(xit->second);
            if (oit == objects.end()) continue;
            const std::string& xbody = oit->second;
            auto subtype = pd::dict_name(xbody, "/Subtype");
            if (!subtype || *subtype != "Image") continue;

            EmbeddedImage img;
            img.asset_id = doc_id + "/img_" + std::to_string(asset_counter++);
            img.order = static_cast<int>(page.images.size());
            auto filter = pd::dict_name(xbody, "/Filter");
            auto raw = pd::stream_data(xbody);
            if (!raw) continue;
            if (filter && *filter == "DCTDecode") {
                img.extension = "jpg";
                img.bytes.assign(raw->begin(), raw->end());
            } else if (filter && *filter == "FlateDecode") {
                long width = pd::dict_int(xbody, "/Width").value_or(0);
                long height = pd::dict_int(xbody, "/Height").value_or(0);
                std::string pixels = util::flate_decompress(*raw);
                if (width > 0 && height > 0 &&
                    pixels.size() == static_cast<std::size_t>(width) * height * 3) {
                    util::Canvas canvas(static_cast<int>(width), static_cast<int>(height));
                    std::copy(pixels.begin(), pixels.end(), canvas.rgb.begin());
                    std::string png = util::png_encode(canvas);
                    img.extension = "png";
                    img.bytes.assign(png.begin(), png.end());
                } else {
                    img.extension = "bin";
                    img.bytes.assign(raw->begin(), raw->end());
                }
            } else {
                img.extension = "bin";
                img.bytes.assign(raw->begin(), raw->end());
            }
            page.images.push_back(std::move(img));
        }

        doc.pages.push_back(std::move(page));
        ++page_index;
    }
    return doc;
}

}  // namespace ragkit::parse
