#pragma once
// Builders that write synthetic pdf/docx/pptx files byte-by-byte from the
// format specifications. They are the oracle side of the reader tests: the
// readers must recover exactly the content described by a DocSpec.

#include <cstdint>
#include <string>
#include <vector>

#include "ragkit/common/flate.hpp"
#include "ragkit/common/png.hpp"
#include "ragkit/common/xmlscan.hpp"
#include "ragkit/common/zip.hpp"

namespace testsupport {

struct DocImage {
    std::string bytes;
    std::string extension;  // "png" or "jpg"
};

struct DocBlock {
    enum class Kind { Paragraph, Heading, Table, Image };
    Kind kind = Kind::Paragraph;
    std::string text;
    int level = 1;                                // headings
    std::vector<std::vector<std::string>> rows;   // tables
    DocImage image;                               // images
};

struct DocPageSpec {
    std::vector<DocBlock> blocks;
};

struct DocSpec {
    std::string title;
    std::string author;
    std::vector<DocPageSpec> pages;
};

inline DocBlock paragraph(std::string text) {
    DocBlock b;
    b.kind = DocBlock::Kind::Paragraph;
    b.text = std::move(text);
    return b;
}

inline DocBlock heading(std::string text, int level) {
    DocBlock b;
    b.kind = DocBlock::Kind::Heading;
    b.text = std::move(text);
    b.level = level;
    return b;
}

inline DocBlock table(std::vector<std::vector<std::string>> rows) {
    DocBlock b;
    b.kind = DocBlock::Kind::Table;
    b.rows = std::move(rows);
    return b;
}

inline DocBlock image(DocImage img) {
    DocBlock b;
    b.kind = DocBlock::Kind::Image;
    b.image = std::move(img);
    return b;
}

// Small solid-color PNG via the library encoder (the PNG format itself is
// covered by the decoder-oracle test in test_parse).
inline DocImage solid_png(int w, int h, std::uint8_t shade) {
    ragkit::util::Canvas canvas(w, h, shade);
    return {ragkit::util::png_encode(canvas), "png"};
}

// Header-only JPEG: SOI + SOF0 carrying the dimensions + EOI. Enough for any
// header sniffer; no scan data.
inline DocImage stub_jpeg(int w, int h) {
    std::string out;
    out += '\xff';
    out += '\xd8';  // SOI
    out += '\xff';
    out += '\xc0';  // SOF0
    std::uint16_t seg_len = 8 + 3 * 3;
    out += static_cast<char>(seg_len >> 8);
    out += static_cast<char>(seg_len & 0xff);
    out += '\x08';  // precision
    out += static_cast<char>(h >> 8);
    out += static_cast<char>(h & 0xff);
    out += static_cast<char>(w >> 8);
    out += static_cast<char>(w & 0xff);
    out += '\x03';  // components
    for (int c = 1; c <= 3; ++c) {
        out += static_cast<char>(c);
        out += '\x11';
        out += '\0';
    }
    out += '\xff';
    out += '\xd9';  // EOI
    return {out, "jpg"};
}

// ---------------------------------------------------------------------------
// PDF

namespace pdfbuild {

inline std::string escape_string(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '(' || c == ')' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline double font_size_for(const DocBlock& block) {
    if (block.kind != DocBlock::Kind::Heading) return 11;
    if (block.level <= 1) return 24;
    if (block.level == 2) return 18;
    return 14;
}

}  // namespace pdfbuild

// Emits a PDF whose objects are laid out sequentially: catalog, page tree,
// font, info, then per page a page object, a Flate-compressed content stream,
// and any image XObjects. Tables are flattened to one text line per row.
inline std::string build_pdf(const DocSpec& spec) {
    struct PdfObject {
        int number;
        std::string body;
    };
    std::vector<PdfObject> objects;
    int next_number = 1;
    auto reserve_number = [&] { return next_number++; };

    int catalog = reserve_number();
    int pages_obj = reserve_number();
    int font = reserve_number();
    int info = reserve_number();

    std::vector<int> page_numbers;
    std::string pages_kids;
    struct PageParts {
        int page_obj;
        int content_obj;
        std::vector<std::pair<std::string, int>> xobjects;  // name -> object
        std::string content;
    };
    std::vector<PageParts> pages;

    for (const auto& page_spec : spec.pages) {
        PageParts parts;
        parts.page_obj = reserve_number();
        parts.content_obj = reserve_number();
        page_numbers.push_back(parts.page_obj);

        int y = 720;
        int image_index = 0;
        for (const auto& block : page_spec.blocks) {
            if (block.kind == DocBlock::Kind::Paragraph ||
                block.kind == DocBlock::Kind::Heading) {
                double size = pdfbuild::font_size_for(block);
                parts.content += "BT /F1 " + std::to_string(static_cast<int>(size)) + " Tf 72 " +
                                 std::to_string(y) + " Td (" +
                                 pdfbuild::escape_string(block.text) + ") Tj ET\n";
                y -= static_cast<int>(size) + 10;
            } else if (block.kind == DocBlock::Kind::Table) {
                for (const auto& row : block.rows) {
                    std::string line;
                    for (const auto& cell : row) {
                        if (!line.empty()) line += "  ";
                        line += cell;
                    }
                    parts.content += "BT /F1 11 Tf 72 " + std::to_string(y) + " Td (" +
                                     pdfbuild::escape_string(line) + ") Tj ET\n";
                    y -= 16;
                }
            } else {
                std::string name = "Im" + std::to_string(image_index++);
                int xobj = reserve_number();
                parts.xobjects.emplace_back(name, xobj);
                parts.content += "q 200 0 0 150 72 " + std::to_string(y - 150) + " cm /" + name +
                                 " Do Q\n";
                y -= 170;

                std::string dict;
                std::string payload;
                if (block.image.extension == "jpg") {
                    payload = block.image.bytes;
                    dict = "<< /Type /XObject /Subtype /Image /Width 200 /Height 150 "
                           "/ColorSpace /DeviceRGB /BitsPerComponent 8 /Filter /DCTDecode "
                           "/Length " +
                           std::to_string(payload.size()) + " >>";
                } else {
                    // Repack the PNG's pixels as a Flate RGB image: 4x3 gray.
                    int w = 4, h = 3;
                    std::string pixels(static_cast<std::size_t>(w) * h * 3, '\x55');
                    payload = ragkit::util::flate_compress(pixels);
                    dict = "<< /Type /XObject /Subtype /Image /Width " + std::to_string(w) +
                           " /Height " + std::to_string(h) +
                           " /ColorSpace /DeviceRGB /BitsPerComponent 8 /Filter /FlateDecode "
                           "/Length " +
                           std::to_string(payload.size()) + " >>";
                }
                objects.push_back({xobj, dict + "\nstream\n" + payload + "\nendstream\n"});
            }
        }
        pages.push_back(std::move(parts));
    }

    for (std::size_t i = 0; i < pages.size(); ++i) {
        auto& parts = pages[i];
        std::string packed = ragkit::util::flate_compress(parts.content);
        objects.push_back({parts.content_obj,
                           "<< /Length " + std::to_string(packed.size()) +
                               " /Filter /FlateDecode >>\nstream\n" + packed +
                               "\nendstream\n"});
        std::string resources = "/Resources << /Font << /F1 " + std::to_string(font) +
                                " 0 R >>";
        if (!parts.xobjects.empty()) {
            resources += " /XObject <<";
            for (const auto& [name, obj] : parts.xobjects) {
                resources += " /" + name + " " + std::to_string(obj) + " 0 R";
            }
            resources += " >>";
        }
        resources += " >>";
        objects.push_back({parts.page_obj,
                           "<< /Type /Page /Parent " + std::to_string(pages_obj) +
                               " 0 R /MediaBox [0 0 612 792] " + resources + " /Contents " +
                               std::to_string(parts.content_obj) + " 0 R >>\n"});
        pages_kids += (i ? " " : "") + std::to_string(parts.page_obj) + " 0 R";
    }

    objects.push_back({catalog, "<< /Type /Catalog /Pages " + std::to_string(pages_obj) +
                                    " 0 R >>\n"});
    objects.push_back({pages_obj, "<< /Type /Pages /Kids [" + pages_kids + "] /Count " +
                                      std::to_string(pages.size()) + " >>\n"});
    objects.push_back({font, "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>\n"});
    objects.push_back({info, "<< /Title (" + pdfbuild::escape_string(spec.title) +
                                 ") /Author (" + pdfbuild::escape_string(spec.author) +
                                 ") >>\n"});

    std::string out = "%PDF-1.4\n";
    for (const auto& obj : objects) {
        out += std::to_string(obj.number) + " 0 obj\n" + obj.body + "endobj\n";
    }
    out += "trailer\n<< /Root " + std::to_string(catalog) + " 0 R /Info " +
           std::to_string(info) + " 0 R /Size " + std::to_string(next_number) + " >>\n%%EOF\n";
    return out;
}

// ---------------------------------------------------------------------------
// DOCX

inline std::string build_docx(const DocSpec& spec) {
    using ragkit::util::xml_escape;
    std::string body;
    std::vector<std::pair<std::string, std::string>> media;  // name, bytes
    std::string rels =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/"
        "relationships\">\n";
    int rel_counter = 1;

    for (std::size_t p = 0; p < spec.pages.size(); ++p) {
        if (p > 0) {
            body += "<w:p><w:r><w:br w:type=\"page\"/></w:r></w:p>\n";
        }
        for (const auto& block : spec.pages[p].blocks) {
            switch (block.kind) {
                case DocBlock::Kind::Heading:
                    body += "<w:p><w:pPr><w:pStyle w:val=\"Heading" +
                            std::to_string(block.level) +
                            "\"/></w:pPr><w:r><w:t xml:space=\"preserve\">" +
                            xml_escape(block.text) + "</w:t></w:r></w:p>\n";
                    break;
                case DocBlock::Kind::Paragraph:
                    body += "<w:p><w:r><w:t xml:space=\"preserve\">" + xml_escape(block.text) +
                            "</w:t></w:r></w:p>\n";
                    break;
                case DocBlock::Kind::Table: {
                    body += "<w:tbl>";
                    for (const auto& row : block.rows) {
                        body += "<w:tr>";
                        for (const auto& cell : row) {
                            body += "<w:tc><w:p><w:r><w:t>" + xml_escape(cell) +
                                    "</w:t></w:r></w:p></w:tc>";
                        }
                        body += "</w:tr>";
                    }
                    body += "</w:tbl>\n";
                    break;
                }
                case DocBlock::Kind::Image: {
                    std::string rid = "rId" + std::to_string(100 + rel_counter);
                    std::string name = "image" + std::to_string(rel_counter) + "." +
                                       block.image.extension;
                    ++rel_counter;
                    media.emplace_back("word/media/" + name, block.image.bytes);
                    rels += "<Relationship Id=\"" + rid +
                            "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/"
                            "relationships/image\" Target=\"media/" +
                            name + "\"/>\n";
                    body += "<w:p><w:r><w:drawing><wp:inline><a:graphic><a:graphicData>"
                            "<pic:pic><pic:blipFill><a:blip r:embed=\"" +
                            rid +
                            "\"/></pic:blipFill></pic:pic>"
                            "</a:graphicData></a:graphic></wp:inline></w:drawing></w:r></w:p>\n";
                    break;
                }
            }
        }
    }
    rels += "</Relationships>\n";

    std::string document =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
        "<w:document xmlns:w=\"http://schemas.openxmlformats.org/wordprocessingml/2006/main\">"
        "<w:body>\n" +
        body + "</w:body></w:document>\n";

    std::string core =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<cp:coreProperties xmlns:cp=\"http://schemas.openxmlformats.org/package/2006/"
        "metadata/core-properties\" xmlns:dc=\"http://purl.org/dc/elements/1.1/\">"
        "<dc:title>" +
        xml_escape(spec.title) + "</dc:title><dc:creator>" + xml_escape(spec.author) +
        "</dc:creator></cp:coreProperties>\n";

    std::vector<ragkit::util::ZipEntry> entries;
    entries.push_back({"[Content_Types].xml",
                       "<?xml version=\"1.0\"?><Types "
                       "xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
                       "<Default Extension=\"xml\" ContentType=\"application/xml\"/></Types>"});
    entries.push_back({"_rels/.rels",
                       "<?xml version=\"1.0\"?><Relationships/>"});
    entries.push_back({"word/document.xml", document});
    entries.push_back({"word/_rels/document.xml.rels", rels});
    entries.push_back({"docProps/core.xml", core});
    for (auto& [name, bytes] : media) entries.push_back({name, bytes});
    return ragkit::util::zip_write(entries);
}

// ---------------------------------------------------------------------------
// PPTX

inline std::string build_pptx(const DocSpec& spec) {
    using ragkit::util::xml_escape;
    std::vector<ragkit::util::ZipEntry> entries;
    entries.push_back({"[Content_Types].xml",
                       "<?xml version=\"1.0\"?><Types "
                       "xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
                       "<Default Extension=\"xml\" ContentType=\"application/xml\"/></Types>"});
    entries.push_back({"_rels/.rels", "<?xml version=\"1.0\"?><Relationships/>"});
    entries.push_back(
        {"ppt/presentation.xml",
         "<?xml version=\"1.0\"?>"
         "<p:presentation xmlns:p=\"http://schemas.openxmlformats.org/presentationml/2006/"
         "main\"><p:sldSz cx=\"12192000\" cy=\"6858000\"/></p:presentation>"});
    entries.push_back({"docProps/core.xml",
                       "<?xml version=\"1.0\"?>"
                       "<cp:coreProperties xmlns:cp=\"http://schemas.openxmlformats.org/package/"
                       "2006/metadata/core-properties\" "
                       "xmlns:dc=\"http://purl.org/dc/elements/1.1/\"><dc:title>" +
                           xml_escape(spec.title) + "</dc:title><dc:creator>" +
                           xml_escape(spec.author) + "</dc:creator></cp:coreProperties>"});

    int media_counter = 1;
    for (std::size_t s = 0; s < spec.pages.size(); ++s) {
        std::string shapes;
        std::string rels =
            "<?xml version=\"1.0\"?><Relationships "
            "xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">";
        for (const auto& block : spec.pages[s].blocks) {
            switch (block.kind) {
                case DocBlock::Kind::Heading:
                    shapes += "<p:sp><p:nvSpPr><p:nvPr><p:ph type=\"title\"/></p:nvPr>"
                              "</p:nvSpPr><p:txBody><a:p><a:r><a:t>" +
                              xml_escape(block.text) +
                              "</a:t></a:r></a:p></p:txBody></p:sp>";
                    break;
                case DocBlock::Kind::Paragraph:
                    shapes += "<p:sp><p:nvSpPr><p:nvPr/></p:nvSpPr><p:txBody><a:p><a:r><a:t>" +
                              xml_escape(block.text) + "</a:t></a:r></a:p></p:txBody></p:sp>";
                    break;
                case DocBlock::Kind::Table: {
                    shapes += "<p:graphicFrame><a:tbl>";
                    for (const auto& row : block.rows) {
                        shapes += "<a:tr>";
                        for (const auto& cell : row) {
                            shapes += "<a:tc><a:txBody><a:p><a:r><a:t>" + xml_escape(cell) +
                                      "</a:t></a:r></a:p></a:txBody></a:tc>";
                        }
                        shapes += "</a:tr>";
                    }
                    shapes += "</a:tbl></p:graphicFrame>";
                    break;
                }
                case DocBlock::Kind::Image: {
                    std::string rid = "rId" + std::to_string(10 + media_counter);
                    std::string name = "image" + std::to_string(media_counter) + "." +
                                       block.image.extension;
                    ++media_counter;
                    entries.push_back({"ppt/media/" + name, block.image.bytes});
                    rels += "<Relationship Id=\"" + rid +
                            "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/"
                            "relationships/image\" Target=\"../media/" +
                            name + "\"/>";
                    shapes += "<p:pic><p:blipFill><a:blip r:embed=\"" + rid +
                              "\"/></p:blipFill></p:pic>";
                    break;
                }
            }
        }
        rels += "</Relationships>";
        std::string slide =
            "<?xml version=\"1.0\"?>"
            "<p:sld xmlns:p=\"http://schemas.openxmlformats.org/presentationml/2006/main\" "
            "xmlns:a=\"http://schemas.openxmlformats.org/drawingml/2006/main\">"
            "<p:cSld><p:spTree>" +
            shapes + "</p:spTree></p:cSld></p:sld>";
        entries.push_back({"ppt/slides/slide" + std::to_string(s + 1) + ".xml", slide});
        entries.push_back(
            {"ppt/slides/_rels/slide" + std::to_string(s + 1) + ".xml.rels", rels});
    }
    return ragkit::util::zip_write(entries);
}

}  // namespace testsupport
