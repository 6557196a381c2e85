#pragma once
// Readers for the OOXML containers: DOCX (word/document.xml, explicit page
// breaks) and PPTX (one slide per page). Both pull embedded pictures through
// the relationship part and render native tables as markdown.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/common/strutil.hpp"
#include "ragkit/common/xmlscan.hpp"
#include "ragkit/common/zip.hpp"
#include "ragkit/parse/pdf_reader.hpp"  // NativeDocument
#include "ragkit/parse/types.hpp"

namespace ragkit::parse {

namespace ooxdetail {

// rId -> target path from a .rels part, e.g. "rId4" -> "media/image1.png".
inline std::map<std::string, std::string> relationships(const std::string* rels_xml) {
    std::map<std::string, std::string> out;
    if (!rels_xml) return out;
    util::XmlScanner scanner(*rels_xml);
    util::XmlToken tok;
    while (scanner.next(tok)) {
        if (tok.kind == util::XmlToken::Kind::Text || tok.name != "Relationship") continue;
        auto id = util::xml_attr(tok.body, "Id");
        auto target = util::xml_attr(tok.body, "Target");
        if (id && target) out[std::string(*id)] = std::string(*target);
    }
    return out;
}

// docProps/core.xml: Dublin Core title/creator plus free-form keywords.
inline std::map<std::string, std::string> core_properties(const std::vector<util::ZipEntry>& zip) {
    std::map<std::string, std::string> out;
    const auto* core = util::zip_find(zip, "docProps/core.xml");
    if (!core) return out;
    util::XmlScanner scanner(core->bytes);
    util::XmlToken tok;
    std::string pending_key;
    while (scanner.next(tok)) {
        if (tok.kind == util::XmlToken::Kind::Open) {
            if (tok.name == "dc:title") pending_key = "title";
            else if (tok.name == "dc:creator") pending_key = "author";
            else if (tok.name == "cp:keywords") pending_key = "keywords";
            else pending_key.clear();
        } else if (tok.kind == util::XmlToken::Kind::Text && !pending_key.empty()) {
            out[pending_key] = util::xml_unescape(tok.body);
            pending_key.clear();
        } else if (tok.kind == util::XmlToken::Kind::Close) {
            pending_key.clear();
        }
    }
    return out;
}

inline std::string table_to_markdown(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return "";
    std::size_t columns = 0;
    for (const auto& row : rows) columns = std::max(columns, row.size());
    if (columns == 0) return "";
    auto render_row = [&](const std::vector<std::string>& row) {
        std::string out = "|";
        for (std::size_t c = 0; c < columns; ++c) {
            out += ' ';
            out += c < row.size() ? row[c] : "";
            out += " |";
        }
        return out;
    };
    std::string md = render_row(rows[0]);
    md += '\n';
    md += "|";
    for (std::size_t c = 0; c < columns; ++c) md += " --- |";
    for (std::size_t r = 1; r < rows.size(); ++r) {
        md += '\n';
        md += render_row(rows[r]);
    }
    return md;
}

inline std::string extension_of(std::string_view path) {
    std::size_t dot = path.rfind('.');
    if (dot == std::string_view::npos) return "bin";
    std::string ext(path.substr(dot + 1));
    if (ext == "jpeg") ext = "jpg";
    return ext;
}

}  // namespace ooxdetail

// DOCX: one page until an explicit page break; headings via paragraph styles.
inline NativeDocument read_docx(std::string_view bytes, const std::string& doc_id) {
    auto zip = util::zip_read(bytes);
    const auto* document = util::zip_find(zip, "word/document.xml");
    if (!document) raise(ErrorCode::CorruptFile, "docx: missing word/document.xml");
    auto rels = ooxdetail::relationships(
        util::zip_find(zip, "word/_rels/document.xml.rels")
            ? &util::zip_find(zip, "word/_rels/document.xml.rels")->bytes
            : nullptr);

    NativeDocument doc;
    doc.metadata = ooxdetail::core_properties(zip);
    doc.pages.emplace_back();
    doc.pages.back().page_index = 0;

    int asset_counter = 0;
    int order = 0;
    std::string paragraph;
    int heading_level = 0;
    bool in_text_run = false;
    bool page_break_pending = false;

    std::vector<std::vector<std::string>> table_rows;
    bool in_table = false;
    std::string cell;
    std::vector<std::string> row;

    auto flush_paragraph = [&] {
        std::string text = util::trim(paragraph);
        paragraph.clear();
        if (!text.empty()) {
            TextBlock tb;
            tb.text = std::move(text);
            tb.order = order++;
            tb.heading_level = heading_level;
            tb.heading = heading_level > 0;
            doc.pages.back().text_blocks.push_back(std::move(tb));
        }
        heading_level = 0;
    };
    auto advance_page = [&] {
        doc.pages.emplace_back();
        doc.pages.back().page_index = static_cast<int>(doc.pages.size()) - 1;
        order = 0;
    };

    util::XmlScanner scanner(document->bytes);
    util::XmlToken tok;
    while (scanner.next(tok)) {
        using Kind = util::XmlToken::Kind;
        if (tok.kind == Kind::Text) {
            if (in_text_run) {
                std::string text = util::xml_unescape(tok.body);
                if (in_table) cell += text;
                else paragraph += text;
            }
            continue;
        }
        if (tok.kind == Kind::Open && tok.name == "w:t") {
            in_text_run = true;
            continue;
        }
        if (tok.kind == Kind::Close && tok.name == "w:t") {
            in_text_run = false;
            continue;
        }
        if (tok.name == "w:pStyle" && !in_table) {
            if (auto val = util::xml_attr(tok.body, "w:val");
                val && val->rfind("Heading", 0) == 0 && val->size() == 8) {
                heading_level = (*val)[7] - '0';
                if (heading_level < 1 || heading_level > 6) heading_level = 0;
            }
            continue;
        }
        if (tok.name == "w:br") {
            if (auto type = util::xml_attr(tok.body, "w:type"); type && *type == "page") {
                page_break_pending = true;
            }
            continue;
        }
        if (tok.kind == Kind::Open && tok.name == "w:tbl") {
            in_table = true;
            table_rows.clear();
            continue;
        }
        if (tok.kind == Kind::Close && tok.name == "w:tbl") {
            in_table = false;
            std::string md = ooxdetail::table_to_markdown(table_rows);
            if (!md.empty()) {
                TableFragment tf;
                tf.markdown = std::move(md);
                tf.order = order++;
                doc.pages.back().tables.push_back(std::move(tf));
            }
            continue;
        }
        if (in_table) {
            if (tok.kind == Kind::Open && tok.name == "w:tr") row.clear();
            if (tok.kind == Kind::Close && tok.name == "w:tr") table_rows.push_back(row);
            if (tok.kind == Kind::Open && tok.name == "w:tc") cell.clear();
            if (tok.kind == Kind::Close && tok.name == "w:tc") row.push_back(util::trim(cell));
            continue;
        }
        if (tok.name == "a:blip") {
            if (auto embed = util::xml_attr(tok.body, "r:embed")) {
                auto rel = rels.find(std::string(*embed));
                if (rel != rels.end()) {
                    const auto* media = util::zip_find(zip, "word/" + rel->second);
                    if (media) {
                        EmbeddedImage img;
                        img.asset_id = doc_id + "/img_" + std::to_string(asset_counter++);
                        img.extension = ooxdetail::extension_of(rel->second);
                        img.bytes.assign(media->bytes.begin(), media->bytes.end());
                        img.order = static_cast<int>(doc.pages.back().images.size());
                        doc.pages.back().images.push_back(std::move(img));
                    }
                }
            }
            continue;
        }
        if (tok.kind == Kind::Close && tok.name == "w:p") {
            flush_paragraph();
            if (page_break_pending) {
                page_break_pending = false;
                advance_page();
            }
        }
    }
    flush_paragraph();
    return doc;
}

// PPTX: every slide is a page; title placeholders become level-1 headings.
inline NativeDocument read_pptx(std::string_view bytes, const std::string& doc_id) {
    auto zip = util::zip_read(bytes);
    if (!util::zip_find(zip, "ppt/presentation.xml")) {
        raise(ErrorCode::CorruptFile, "pptx: missing ppt/presentation.xml");
    }

    NativeDocument doc;
    doc.metadata = ooxdetail::core_properties(zip);
    doc.page_width_in = 13.333;
    doc.page_height_in = 7.5;
    if (const auto* pres = util::zip_find(zip, "ppt/presentation.xml")) {
        util::XmlScanner scanner(pres->bytes);
        util::XmlToken tok;
        while (scanner.next(tok)) {
            if (tok.kind != util::XmlToken::Kind::Text && tok.name == "p:sldSz") {
                auto cx = util::xml_attr(tok.body, "cx");
                auto cy = util::xml_attr(tok.body, "cy");
                if (cx && cy) {
                    // EMU: 914400 per inch.
                    doc.page_width_in = std::stod(std::string(*cx)) / 914400.0;
                    doc.page_height_in = std::stod(std::string(*cy)) / 914400.0;
                }
            }
        }
    }

    // Slides in numeric order.
    std::vector<std::pair<int, const util::ZipEntry*>> slides;
    for (const auto& entry : zip) {
        std::string_view name = entry.name;
        if (name.rfind("ppt/slides/slide", 0) != 0 || name.size() < 21) continue;
        if (name.substr(name.size() - 4) != ".xml") continue;
        std::string_view digits = name.substr(16, name.size() - 20);
        if (digits.empty()) continue;
        slides.emplace_back(std::stoi(std::string(digits)), &entry);
    }
    std::sort(slides.begin(), slides.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    int asset_counter = 0;
    for (std::size_t s = 0; s < slides.size(); ++s) {
        const auto* slide = slides[s].second;
        std::string rels_name = "ppt/slides/_rels/slide" + std::to_string(slides[s].first) +
                                ".xml.rels";
        auto rels = ooxdetail::relationships(
            util::zip_find(zip, rels_name) ? &util::zip_find(zip, rels_name)->bytes : nullptr);

        NativePage page;
        page.page_index = static_cast<int>(s);
        int order = 0;

        bool shape_is_title = false;
        bool in_text_run = false;
        std::string paragraph;
        bool in_table = false;
        std::vector<std::vector<std::string>> table_rows;
        std::vector<std::string> row;
        std::string cell;

        auto flush_paragraph = [&] {
            std::string text = util::trim(paragraph);
            paragraph.clear();
            if (text.empty()) return;
            TextBlock tb;
            tb.text = std::move(text);
            tb.order = order++;
            tb.heading = shape_is_title;
            tb.heading_level = shape_is_title ? 1 : 0;
            page.text_blocks.push_back(std::move(tb));
        };

        util::XmlScanner scanner(slide->bytes);
        util::XmlToken tok;
        while (scanner.next(tok)) {
            using Kind = util::XmlToken::Kind;
            if (tok.kind == Kind::Text) {
                if (in_text_run) {
                    std::string text = util::xml_unescape(tok.body);
                    if (in_table) cell += text;
                    else paragraph += text;
                }
                continue;
            }
            if (tok.kind == Kind::Open && tok.name == "a:t") {
                in_text_run = true;
                continue;
            }
            if (tok.kind == Kind::Close && tok.name == "a:t") {
                in_text_run = false;
                continue;
            }
            if (tok.name == "p:ph") {
                if (auto type = util::xml_attr(tok.body, "type")) {
                    shape_is_title = *type == "title" || *type == "ctrTitle";
                }
                continue;
            }
            if (tok.kind == Kind::Open && tok.name == "p:sp") {
                shape_is_title = false;
                continue;
            }
            if (tok.kind == Kind::Close && tok.name == "a:p" && !in_table) {
                flush_paragraph();
                continue;
            }
            if (tok.kind == Kind::Open && tok.name == "a:tbl") {
                in_table = true;
                table_rows.clear();
                continue;
            }
            if (tok.kind == Kind::Close && tok.name == "a:tbl") {
                in_table = false;
                std::string md = ooxdetail::table_to_markdown(table_rows);
                if (!md.empty()) {
                    TableFragment tf;
                    tf.markdown = std::move(md);
                    tf.order = order++;
                    page.tables.push_back(std::move(tf));
                }
                continue;
            }
            if (in_table) {
                if (tok.kind == Kind::Open && tok.name == "a:tr") row.clear();
                if (tok.kind == Kind::Close && tok.name == "a:tr") table_rows.push_back(row);
                if (tok.kind == Kind::Open && tok.name == "a:tc") cell.clear();
                if (tok.kind == Kind::Close && tok.name == "a:tc") row.push_back(util::trim(cell));
                continue;
            }
            if (tok.name == "a:blip") {
                if (auto embed = util::xml_attr(tok.body, "r:embed")) {
                    auto rel = rels.find(std::string(*embed));
                    if (rel != rels.end()) {
                        // Targets are relative to ppt/slides/, e.g. "../media/image1.png".
                        std::string target = rel->second;
                        if (target.rfind("../", 0) == 0) target = "ppt/" + target.substr(3);
                        const auto* media = util::zip_find(zip, target);
                        if (media) {
                            EmbeddedImage img;
                            img.asset_id = doc_id + "/img_" + std::to_string(asset_counter++);
                            img.extension = ooxdetail::extension_of(target);
                            img.bytes.assign(media->bytes.begin(), media->bytes.end());
                            img.order = static_cast<int>(page.images.size());
                            page.images.push_back(std::move(img));
                        }
                    }
                }
                continue;
            }
        }
        flush_paragraph();
        doc.pages.push_back(std::move(page));
    }
    if (doc.pages.empty()) raise(ErrorCode::CorruptFile, "pptx: no slides");
    return doc;
}

}  // namespace ragkit::parse
