#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "ragkit/common/base64.hpp"
#include "ragkit/common/flate.hpp"
#include "ragkit/common/hash.hpp"
#include "ragkit/common/png.hpp"
#include "ragkit/common/xmlscan.hpp"
#include "ragkit/common/zip.hpp"
#include "ragkit/parse/http.hpp"
#include "ragkit/parse/orchestrator.hpp"
#include "ragkit/parse/readers.hpp"
#include "support/docbuild.hpp"

using namespace ragkit;
using namespace ragkit::parse;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("ragkit_parse_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return path.string();
}

DocumentSource source_for(const fs::path& path, const std::string& doc_id, DocFormat format) {
    DocumentSource src;
    src.doc_id = doc_id;
    src.origin_path = path.string();
    src.format = format;
    return src;
}

std::string to_string_bytes(const std::vector<std::uint8_t>& v) {
    return std::string(v.begin(), v.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// ZIP container

TEST(Zip, RoundTripAndForeignArchive) {
    std::vector<util::ZipEntry> entries{
        {"a.txt", "alpha"},
        {"dir/b.bin", std::string(5000, 'z')},
        {"empty", ""},
    };
    auto bytes = util::zip_write(entries);
    auto back = util::zip_read(bytes);
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        EXPECT_EQ(back[i].name, entries[i].name);
        EXPECT_EQ(back[i].bytes, entries[i].bytes);
    }

    // Archive produced by an independent implementation (Python zipfile):
    // one stored entry, one deflated entry.
    static const char* kPythonZip =
        "UEsDBBQAAAAAAAAAIQAbcwYMEAAAABAAAAAJAAAAaGVsbG8udHh0aGVsbG8gemlwIG9yYWNsZVBLAwQUAAAA"
        "CAAAACEAnwnXwz0AAADgBgAADAAAAGRhdGEvYmlnLmJpbivJSFUoLM1MzlZIKsovz1NIy69QyCrNLShWyC9L"
        "LVIoAUrnJFZVKqTkp4M5o2pH1Y6qHVU7qnZU7VBQCwBQSwECFAMUAAAAAAAAACEAG3MGDBAAAAAQAAAACQAA"
        "AAAAAAAAAAAAgAEAAAAAaGVsbG8udHh0UEsBAhQDFAAAAAgAAAAhAJ8J18M9AAAA4AYAAAwAAAAAAAAAAAAA"
        "AIABNwAAAGRhdGEvYmlnLmJpblBLBQYAAAAAAgACAHEAAACeAAAAAAA=";
    auto foreign = util::zip_read(to_string_bytes(util::base64_decode(kPythonZip)));
    ASSERT_EQ(foreign.size(), 2u);
    EXPECT_EQ(foreign[0].name, "hello.txt");
    EXPECT_EQ(foreign[0].bytes, "hello zip oracle");
    EXPECT_EQ(foreign[1].name, "data/big.bin");
    EXPECT_EQ(foreign[1].bytes.size(), 1760u);
    EXPECT_EQ(foreign[1].bytes.substr(0, 9), "the quick");
}

TEST(Zip, RejectsCorruptArchives) {
    try {
        util::zip_read("definitely not a zip archive at all......");
        FAIL() << "expected CorruptFile";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CorruptFile);
    }

    auto good = util::zip_write({{"a.txt", std::string(400, 'q')}});
    EXPECT_THROW(util::zip_read(good.substr(0, good.size() / 2)), Error);
}

// ---------------------------------------------------------------------------
// PNG encode/sniff

// Independent decode of the library's PNG output: walk chunks, verify CRCs,
// inflate IDAT, strip per-row filters, compare against the source canvas.
TEST(Png, EncodedImageDecodesToSamePixels) {
    util::Canvas canvas(17, 9);
    for (int y = 0; y < canvas.height; ++y) {
        for (int x = 0; x < canvas.width; ++x) {
            std::size_t at = (static_cast<std::size_t>(y) * canvas.width + x) * 3;
            canvas.rgb[at] = static_cast<std::uint8_t>(x * 13);
            canvas.rgb[at + 1] = static_cast<std::uint8_t>(y * 29);
            canvas.rgb[at + 2] = static_cast<std::uint8_t>((x + y) * 7);
        }
    }
    std::string png = util::png_encode(canvas);

    ASSERT_GE(png.size(), 8u);
    EXPECT_EQ(png.substr(0, 8), std::string("\x89PNG\r\n\x1a\n", 8));
    std::size_t at = 8;
    std::string idat;
    bool saw_ihdr = false, saw_iend = false;
    auto be32 = [&](std::size_t p) {
        return static_cast<std::uint32_t>(static_cast<unsigned char>(png[p])) << 24 |
               static_cast<std::uint32_t>(static_cast<unsigned char>(png[p + 1])) << 16 |
               static_cast<std::uint32_t>(static_cast<unsigned char>(png[p + 2])) << 8 |
               static_cast<std::uint32_t>(static_cast<unsigned char>(png[p + 3]));
    };
    while (at + 12 <= png.size()) {
        std::uint32_t len = be32(at);
        std::string type = png.substr(at + 4, 4);
        std::string data = png.substr(at + 8, len);
        std::uint32_t want_crc = be32(at + 8 + len);
        std::uint32_t got_crc = static_cast<std::uint32_t>(
            crc32(crc32(0, reinterpret_cast<const Bytef*>(type.data()), 4),
                  reinterpret_cast<const Bytef*>(data.data()), len));
        EXPECT_EQ(want_crc, got_crc) << "chunk " << type;
        if (type == "IHDR") {
            saw_ihdr = true;
            EXPECT_EQ(be32(at + 8), 17u);
            EXPECT_EQ(be32(at + 12), 9u);
            EXPECT_EQ(data[8], 8);   // bit depth
            EXPECT_EQ(data[9], 2);   // truecolor
        } else if (type == "IDAT") {
            idat += data;
        } else if (type == "IEND") {
            saw_iend = true;
        }
        at += 12 + len;
    }
    ASSERT_TRUE(saw_ihdr);
    ASSERT_TRUE(saw_iend);

    std::string raw = util::flate_decompress(idat);
    ASSERT_EQ(raw.size(), static_cast<std::size_t>(9) * (17 * 3 + 1));
    for (int y = 0; y < 9; ++y) {
        std::size_t row = static_cast<std::size_t>(y) * (17 * 3 + 1);
        ASSERT_EQ(raw[row], 0) << "filter byte, row " << y;
        for (int i = 0; i < 17 * 3; ++i) {
            EXPECT_EQ(static_cast<std::uint8_t>(raw[row + 1 + i]),
                      canvas.rgb[static_cast<std::size_t>(y) * 17 * 3 + i]);
        }
    }
}

TEST(Png, SniffReadsHeaders) {
    // PNG written byte-by-byte by an independent implementation (3x2 RGB).
    static const char* kForeignPng =
        "iVBORw0KGgoAAAANSUhEUgAAAAMAAAACCAIAAAASFvFNAAAAF0lEQVR4nGP4z8DAAMFcInIaRjZuAVEAM1kE"
        "wOQkmMsAAAAASUVORK5CYII=";
    auto png_info = util::sniff_image(util::base64_decode(kForeignPng));
    ASSERT_TRUE(png_info.has_value());
    EXPECT_EQ(png_info->format, "png");
    EXPECT_EQ(png_info->width, 3);
    EXPECT_EQ(png_info->height, 2);

    auto jpeg = testsupport::stub_jpeg(640, 480);
    auto jpg_info = util::sniff_image(jpeg.bytes);
    ASSERT_TRUE(jpg_info.has_value());
    EXPECT_EQ(jpg_info->format, "jpg");
    EXPECT_EQ(jpg_info->width, 640);
    EXPECT_EQ(jpg_info->height, 480);

    EXPECT_FALSE(util::sniff_image(std::string_view("GIF89a not supported")).has_value());
    EXPECT_FALSE(util::sniff_image(std::string_view("\x89PNG truncated")).has_value());
    EXPECT_FALSE(util::sniff_image(std::string_view("")).has_value());
}

// ---------------------------------------------------------------------------
// XML scanner

TEST(XmlScan, TokenizesTagsTextAndAttributes) {
    std::string xml =
        "<?xml version=\"1.0\"?><!-- note -->"
        "<root a=\"1\"><w:t xml:space=\"preserve\">A &amp; B</w:t><br/></root>";
    util::XmlScanner scanner(xml);
    util::XmlToken tok;

    ASSERT_TRUE(scanner.next(tok));
    EXPECT_EQ(tok.kind, util::XmlToken::Kind::Open);
    EXPECT_EQ(tok.name, "root");
    EXPECT_EQ(util::xml_attr(tok.body, "a").value_or(""), "1");

    ASSERT_TRUE(scanner.next(tok));
    EXPECT_EQ(tok.name, "w:t");
    EXPECT_EQ(util::xml_attr(tok.body, "xml:space").value_or(""), "preserve");
    EXPECT_FALSE(util::xml_attr(tok.body, "space").has_value());  // suffix is not a token

    ASSERT_TRUE(scanner.next(tok));
    EXPECT_EQ(tok.kind, util::XmlToken::Kind::Text);
    EXPECT_EQ(util::xml_unescape(tok.body), "A & B");

    ASSERT_TRUE(scanner.next(tok));
    EXPECT_EQ(tok.kind, util::XmlToken::Kind::Close);
    EXPECT_EQ(tok.name, "w:t");

    ASSERT_TRUE(scanner.next(tok));
    EXPECT_EQ(tok.kind, util::XmlToken::Kind::SelfClose);
    EXPECT_EQ(tok.name, "br");

    ASSERT_TRUE(scanner.next(tok));
    EXPECT_EQ(tok.kind, util::XmlToken::Kind::Close);
    EXPECT_EQ(tok.name, "root");
    EXPECT_FALSE(scanner.next(tok));
}

TEST(XmlScan, UnescapesEntities) {
    EXPECT_EQ(util::xml_unescape("&lt;a&gt; &quot;x&quot; &apos;y&apos; &#65;&#x42;"),
              "<a> \"x\" 'y' AB");
    EXPECT_EQ(util::xml_unescape(util::xml_escape("5 < 6 & \"q\"")), "5 < 6 & \"q\"");
}

// ---------------------------------------------------------------------------
// PDF reader

TEST(PdfReader, RecoversTextHeadingsAndMetadata) {
    testsupport::DocSpec spec;
    spec.title = "Annual Report (draft)";
    spec.author = "Jordan \\ Writer";
    spec.pages.resize(2);
    spec.pages[0].blocks = {
        testsupport::heading("Annual Report", 1),
        testsupport::paragraph("Revenue grew twelve percent (net of returns)."),
    };
    spec.pages[1].blocks = {
        testsupport::heading("Methods", 2),
        testsupport::paragraph("We sampled forty sites."),
        testsupport::paragraph("Each site was visited twice."),
    };

    auto doc = read_pdf(testsupport::build_pdf(spec), "rep");
    ASSERT_EQ(doc.pages.size(), 2u);
    EXPECT_NEAR(doc.page_width_in, 8.5, 1e-9);
    EXPECT_NEAR(doc.page_height_in, 11.0, 1e-9);
    EXPECT_EQ(doc.metadata.at("title"), "Annual Report (draft)");
    EXPECT_EQ(doc.metadata.at("author"), "Jordan \\ Writer");

    ASSERT_EQ(doc.pages[0].text_blocks.size(), 2u);
    EXPECT_EQ(doc.pages[0].text_blocks[0].text, "Annual Report");
    EXPECT_TRUE(doc.pages[0].text_blocks[0].heading);
    EXPECT_EQ(doc.pages[0].text_blocks[0].heading_level, 1);
    EXPECT_EQ(doc.pages[0].text_blocks[1].text, "Revenue grew twelve percent (net of returns).");
    EXPECT_FALSE(doc.pages[0].text_blocks[1].heading);

    ASSERT_EQ(doc.pages[1].text_blocks.size(), 3u);
    EXPECT_EQ(doc.pages[1].text_blocks[0].heading_level, 2);
    EXPECT_EQ(doc.pages[1].text_blocks[2].text, "Each site was visited twice.");
    EXPECT_TRUE(doc.pages[1].tables.empty());
}

TEST(PdfReader, ExtractsEmbeddedImages) {
    testsupport::DocSpec spec;
    spec.pages.resize(1);
    spec.pages[0].blocks = {
        testsupport::paragraph("See figure."),
        testsupport::image(testsupport::stub_jpeg(320, 200)),
        testsupport::image(testsupport::solid_png(6, 6, 0x40)),
    };

    auto doc = read_pdf(testsupport::build_pdf(spec), "figs");
    ASSERT_EQ(doc.pages.size(), 1u);
    ASSERT_EQ(doc.pages[0].images.size(), 2u);

    const auto& jpg = doc.pages[0].images[0];
    EXPECT_EQ(jpg.asset_id, "figs/img_0");
    EXPECT_EQ(jpg.extension, "jpg");
    EXPECT_EQ(to_string_bytes(jpg.bytes), testsupport::stub_jpeg(320, 200).bytes);

    // Flate RGB XObjects come back repacked as PNG (the builder embeds 4x3).
    const auto& png = doc.pages[0].images[1];
    EXPECT_EQ(png.asset_id, "figs/img_1");
    EXPECT_EQ(png.extension, "png");
    auto info = util::sniff_image(png.bytes);
    ASSERT_TRUE(info.has_value());
    EXPECT_EQ(info->format, "png");
    EXPECT_EQ(info->width, 4);
    EXPECT_EQ(info->height, 3);
}

TEST(PdfReader, ScannedPageHasEmptyTextLayer) {
    testsupport::DocSpec spec;
    spec.pages.resize(1);
    spec.pages[0].blocks = {testsupport::image(testsupport::stub_jpeg(1200, 1600))};

    auto doc = read_pdf(testsupport::build_pdf(spec), "scan");
    ASSERT_EQ(doc.pages.size(), 1u);
    EXPECT_TRUE(doc.pages[0].text_blocks.empty());
    ASSERT_EQ(doc.pages[0].images.size(), 1u);
}

TEST(PdfReader, RejectsCorruptFiles) {
    try {
        read_pdf("just some text, no header", "x");
        FAIL() << "expected CorruptFile";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CorruptFile);
    }
    try {
        read_pdf("%PDF-1.4\nnothing else here\n", "x");
        FAIL() << "expected CorruptFile";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CorruptFile);
    }
}

// ---------------------------------------------------------------------------
// DOCX reader

TEST(DocxReader, SplitsPagesOnExplicitBreaks) {
    testsupport::DocSpec spec;
    spec.title = "Field Notes";
    spec.author = "Sam Ito";
    spec.pages.resize(3);
    spec.pages[0].blocks = {testsupport::heading("Field Notes", 1),
                            testsupport::paragraph("Day one was dry & windy.")};
    spec.pages[1].blocks = {testsupport::heading("Observations", 2),
                            testsupport::paragraph("We counted 19 birds.")};
    spec.pages[2].blocks = {testsupport::paragraph("Closing remarks.")};

    auto doc = read_docx(testsupport::build_docx(spec), "notes");
    ASSERT_EQ(doc.pages.size(), 3u);
    EXPECT_EQ(doc.metadata.at("title"), "Field Notes");
    EXPECT_EQ(doc.metadata.at("author"), "Sam Ito");

    ASSERT_EQ(doc.pages[0].text_blocks.size(), 2u);
    EXPECT_EQ(doc.pages[0].text_blocks[0].text, "Field Notes");
    EXPECT_EQ(doc.pages[0].text_blocks[0].heading_level, 1);
    EXPECT_EQ(doc.pages[0].text_blocks[1].text, "Day one was dry & windy.");

    ASSERT_EQ(doc.pages[1].text_blocks.size(), 2u);
    EXPECT_EQ(doc.pages[1].text_blocks[0].heading_level, 2);
    ASSERT_EQ(doc.pages[2].text_blocks.size(), 1u);
    EXPECT_EQ(doc.pages[2].text_blocks[0].text, "Closing remarks.");
    EXPECT_EQ(doc.pages[2].page_index, 2);
}

TEST(DocxReader, RendersTablesAsMarkdown) {
    testsupport::DocSpec spec;
    spec.pages.resize(1);
    spec.pages[0].blocks = {
        testsupport::paragraph("Results follow."),
        testsupport::table({{"metric", "value"}, {"latency", "12ms"}, {"errors", "0"}}),
    };

    auto doc = read_docx(testsupport::build_docx(spec), "tbl");
    ASSERT_EQ(doc.pages.size(), 1u);
    ASSERT_EQ(doc.pages[0].tables.size(), 1u);
    EXPECT_EQ(doc.pages[0].tables[0].markdown,
              "| metric | value |\n"
              "| --- | --- |\n"
              "| latency | 12ms |\n"
              "| errors | 0 |");
    // The table comes after the paragraph in document order.
    EXPECT_GT(doc.pages[0].tables[0].order, doc.pages[0].text_blocks[0].order);
}

TEST(DocxReader, PullsEmbeddedMedia) {
    auto png = testsupport::solid_png(10, 4, 0x99);
    testsupport::DocSpec spec;
    spec.pages.resize(1);
    spec.pages[0].blocks = {testsupport::paragraph("Logo below."), testsupport::image(png)};

    auto doc = read_docx(testsupport::build_docx(spec), "media");
    ASSERT_EQ(doc.pages[0].images.size(), 1u);
    EXPECT_EQ(doc.pages[0].images[0].asset_id, "media/img_0");
    EXPECT_EQ(doc.pages[0].images[0].extension, "png");
    EXPECT_EQ(to_string_bytes(doc.pages[0].images[0].bytes), png.bytes);
}

TEST(DocxReader, RejectsNonContainers) {
    EXPECT_THROW(read_docx("plain text file", "x"), Error);
    // A valid zip that is not a DOCX.
    auto zip = util::zip_write({{"readme.txt", "hi"}});
    try {
        read_docx(zip, "x");
        FAIL() << "expected CorruptFile";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CorruptFile);
    }
}

// ---------------------------------------------------------------------------
// PPTX reader

TEST(PptxReader, OneSlidePerPageWithTitleHeadings) {
    testsupport::DocSpec spec;
    spec.title = "Kickoff";
    spec.pages.resize(2);
    spec.pages[0].blocks = {testsupport::heading("Kickoff", 1),
                            testsupport::paragraph("Welcome, everyone!")};
    spec.pages[1].blocks = {testsupport::heading("Timeline", 1),
                            testsupport::paragraph("Q1: discovery"),
                            testsupport::paragraph("Q2: delivery")};

    auto doc = read_pptx(testsupport::build_pptx(spec), "deck");
    ASSERT_EQ(doc.pages.size(), 2u);
    EXPECT_NEAR(doc.page_width_in, 13.333, 1e-3);
    EXPECT_NEAR(doc.page_height_in, 7.5, 1e-9);
    EXPECT_EQ(doc.metadata.at("title"), "Kickoff");

    ASSERT_EQ(doc.pages[0].text_blocks.size(), 2u);
    EXPECT_TRUE(doc.pages[0].text_blocks[0].heading);
    EXPECT_EQ(doc.pages[0].text_blocks[0].heading_level, 1);
    EXPECT_EQ(doc.pages[0].text_blocks[1].text, "Welcome, everyone!");
    EXPECT_FALSE(doc.pages[0].text_blocks[1].heading);

    ASSERT_EQ(doc.pages[1].text_blocks.size(), 3u);
    EXPECT_EQ(doc.pages[1].text_blocks[0].text, "Timeline");
}

TEST(PptxReader, ReadsTablesAndPictures) {
    auto png = testsupport::solid_png(8, 8, 0x22);
    testsupport::DocSpec spec;
    spec.pages.resize(1);
    spec.pages[0].blocks = {
        testsupport::table({{"phase", "owner"}, {"alpha", "dana"}}),
        testsupport::image(png),
    };

    auto doc = read_pptx(testsupport::build_pptx(spec), "deck");
    ASSERT_EQ(doc.pages.size(), 1u);
    ASSERT_EQ(doc.pages[0].tables.size(), 1u);
    EXPECT_EQ(doc.pages[0].tables[0].markdown,
              "| phase | owner |\n| --- | --- |\n| alpha | dana |");
    ASSERT_EQ(doc.pages[0].images.size(), 1u);
    EXPECT_EQ(doc.pages[0].images[0].asset_id, "deck/img_0");
    EXPECT_EQ(to_string_bytes(doc.pages[0].images[0].bytes), png.bytes);
}

// ---------------------------------------------------------------------------
// Orchestrator

namespace {

testsupport::DocSpec small_report() {
    testsupport::DocSpec spec;
    spec.title = "Quarterly";
    spec.author = "Ops";
    spec.pages.resize(2);
    spec.pages[0].blocks = {testsupport::heading("Quarterly Summary", 1),
                            testsupport::paragraph("Throughput has been stable all quarter.")};
    spec.pages[1].blocks = {testsupport::heading("Risks", 2),
                            testsupport::paragraph("Two vendors remain single-sourced."),
                            testsupport::image(testsupport::solid_png(12, 8, 0x66))};
    return spec;
}

Orchestrator mock_orchestrator(OrchestratorConfig cfg = {.dpi = 72, .jobs = 1}) {
    return Orchestrator(std::make_shared<MockLlmParseBackend>(),
                        std::make_shared<MockOcrBackend>(),
                        std::make_shared<MockVisionBackend>(), cfg);
}

}  // namespace

TEST(Orchestrator, RasterizesOneSnapshotPerPageDeterministically) {
    auto dir = make_temp_dir("raster");
    auto path = write_file(dir / "report.pdf", testsupport::build_pdf(small_report()));
    auto source = source_for(path, "report", DocFormat::Pdf);
    auto orch = mock_orchestrator();

    auto snaps = orch.rasterize_pages(source, 72);
    ASSERT_EQ(snaps.size(), 2u);
    EXPECT_EQ(snaps[0].page_index, 0);
    EXPECT_EQ(snaps[1].page_index, 1);
    EXPECT_EQ(snaps[0].width_px, 612);   // 8.5in at 72 dpi
    EXPECT_EQ(snaps[0].height_px, 792);
    EXPECT_EQ(snaps[0].dpi, 72);
    ASSERT_TRUE(util::sniff_image(std::string_view(snaps[0].image_png)).has_value());

    auto again = orch.rasterize_pages(source, 72);
    ASSERT_EQ(again.size(), snaps.size());
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        EXPECT_EQ(util::sha256_hex(again[i].image_png), util::sha256_hex(snaps[i].image_png));
    }
    // Pages with different content render differently.
    EXPECT_NE(util::sha256_hex(snaps[0].image_png), util::sha256_hex(snaps[1].image_png));

    EXPECT_THROW(orch.rasterize_pages(source, 60), Error);
    EXPECT_THROW(orch.rasterize_pages(source, 700), Error);
    EXPECT_NO_THROW(orch.rasterize_pages(source, 600));
}

TEST(Orchestrator, ZeroPageDocumentIsCorrupt) {
    auto dir = make_temp_dir("zero");
    testsupport::DocSpec empty;
    auto path = write_file(dir / "empty.pdf", testsupport::build_pdf(empty));
    auto source = source_for(path, "empty", DocFormat::Pdf);
    auto orch = mock_orchestrator();
    try {
        orch.rasterize_pages(source, 96);
        FAIL() << "expected CorruptFile";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CorruptFile);
    }
    EXPECT_THROW(orch.parse_document(source), Error);
}

TEST(Orchestrator, FastStrategyReturnsNativeLayer) {
    auto dir = make_temp_dir("fast");
    auto path = write_file(dir / "report.pdf", testsupport::build_pdf(small_report()));
    auto source = source_for(path, "report", DocFormat::Pdf);
    auto orch = mock_orchestrator();

    auto fast = orch.parse_fast(source, 0);
    EXPECT_EQ(fast.strategy, Strategy::Fast);
    EXPECT_TRUE(fast.attempted);
    EXPECT_TRUE(fast.succeeded);
    ASSERT_EQ(fast.text_blocks.size(), 2u);
    EXPECT_EQ(fast.text_blocks[0].text, "Quarterly Summary");

    // Scanned-style page: image only, no text layer — still not an error.
    testsupport::DocSpec scanned;
    scanned.pages.resize(1);
    scanned.pages[0].blocks = {testsupport::image(testsupport::stub_jpeg(900, 1200))};
    auto scanned_path = write_file(dir / "scan.pdf", testsupport::build_pdf(scanned));
    auto scan_fast = orch.parse_fast(source_for(scanned_path, "scan", DocFormat::Pdf), 0);
    EXPECT_TRUE(scan_fast.succeeded);
    EXPECT_TRUE(scan_fast.text_blocks.empty());
    ASSERT_EQ(scan_fast.images.size(), 1u);

    EXPECT_THROW(orch.parse_fast(source, 7), Error);
}

TEST(Orchestrator, ParseDocumentBundlesAllThreeStrategies) {
    auto dir = make_temp_dir("bundle");
    auto path = write_file(dir / "report.docx", testsupport::build_docx(small_report()));
    auto source = source_for(path, "report", DocFormat::Docx);
    auto orch = mock_orchestrator({.dpi = 72, .jobs = 2});

    auto parsed = orch.parse_document(source);
    ASSERT_EQ(parsed.pages.size(), 2u);
    EXPECT_TRUE(parsed.warnings.empty());
    for (const auto& bundle : parsed.pages) {
        EXPECT_EQ(bundle.fast.strategy, Strategy::Fast);
        EXPECT_EQ(bundle.llm.strategy, Strategy::Llm);
        EXPECT_EQ(bundle.ocr.strategy, Strategy::Ocr);
        EXPECT_TRUE(bundle.fast.attempted && bundle.fast.succeeded);
        EXPECT_TRUE(bundle.llm.attempted && bundle.llm.succeeded);
        EXPECT_TRUE(bundle.ocr.attempted && bundle.ocr.succeeded);
        EXPECT_TRUE(bundle.llm.images.empty());
        EXPECT_TRUE(bundle.ocr.images.empty());
        EXPECT_FALSE(bundle.snapshot.image_png.empty());
    }
    EXPECT_EQ(parsed.pages[0].fast.text_blocks.size(), 2u);

    // The second page's picture got a deterministic mock description.
    ASSERT_EQ(parsed.pages[1].described_images.size(), 1u);
    const auto& described = parsed.pages[1].described_images[0];
    EXPECT_EQ(described.asset_id, "report/img_0");
    EXPECT_EQ(described.content_type, "other");
    EXPECT_EQ(described.description.rfind("Image asset ", 0), 0u);
}

TEST(Orchestrator, FixtureDrivenLlmResultsFlowIntoBundle) {
    auto dir = make_temp_dir("fixture");
    auto path = write_file(dir / "report.pdf", testsupport::build_pdf(small_report()));
    auto source = source_for(path, "report", DocFormat::Pdf);

    // Rasterize first to learn the snapshot hash the mock will be keyed by.
    auto probe = mock_orchestrator();
    auto snaps = probe.rasterize_pages(source, 72);
    util::FixtureStore fixtures(dir / "fixtures");
    nlohmann::json fx;
    fx["text_blocks"] = nlohmann::json::array();
    fx["text_blocks"].push_back(
        {{"text", "Quarterly Summary"}, {"heading", true}, {"heading_level", 1}});
    fx["text_blocks"].push_back({{"text", "Throughput has been stable all quarter."}});
    fx["tables"] = nlohmann::json::array();
    fx["tables"].push_back({{"markdown", "| a |\n| --- |\n| 1 |"}});
    fixtures.write("llm_parse", util::sha256_hex(snaps[0].image_png), fx);

    Orchestrator orch(std::make_shared<MockLlmParseBackend>(fixtures),
                      std::make_shared<MockOcrBackend>(),
                      std::make_shared<MockVisionBackend>(),
                      OrchestratorConfig{.dpi = 72, .jobs = 1});
    auto parsed = orch.parse_document(source);
    ASSERT_EQ(parsed.pages.size(), 2u);
    ASSERT_EQ(parsed.pages[0].llm.text_blocks.size(), 2u);
    EXPECT_EQ(parsed.pages[0].llm.text_blocks[0].text, "Quarterly Summary");
    EXPECT_TRUE(parsed.pages[0].llm.text_blocks[0].heading);
    ASSERT_EQ(parsed.pages[0].llm.tables.size(), 1u);
    // Page 1 has no fixture: the mock returns an empty success.
    EXPECT_TRUE(parsed.pages[1].llm.succeeded);
    EXPECT_TRUE(parsed.pages[1].llm.text_blocks.empty());
}

namespace {

// Fails for selected pages; used to verify degrade-not-abort behavior.
class FlakyLlmBackend : public LlmParseBackend {
public:
    explicit FlakyLlmBackend(int bad_page) : bad_page_(bad_page) {}
    StrategyResult parse(const PageSnapshot& snapshot) override {
        if (snapshot.page_index == bad_page_) {
            raise(ErrorCode::BackendUnavailable, "llm endpoint timed out");
        }
        StrategyResult out;
        out.strategy = Strategy::Llm;
        out.attempted = true;
        out.succeeded = true;
        return out;
    }

private:
    int bad_page_;
};

}  // namespace

TEST(Orchestrator, StrategyFailureDegradesToAnnotatedEmptyResult) {
    auto dir = make_temp_dir("flaky");
    auto path = write_file(dir / "report.docx", testsupport::build_docx(small_report()));
    auto source = source_for(path, "report", DocFormat::Docx);

    Orchestrator orch(std::make_shared<FlakyLlmBackend>(0), std::make_shared<MockOcrBackend>(),
                      std::make_shared<MockVisionBackend>(),
                      OrchestratorConfig{.dpi = 72, .jobs = 2});
    auto parsed = orch.parse_document(source);

    ASSERT_EQ(parsed.pages.size(), 2u);
    EXPECT_TRUE(parsed.pages[0].llm.attempted);
    EXPECT_FALSE(parsed.pages[0].llm.succeeded);
    EXPECT_NE(parsed.pages[0].llm.error.find("BackendUnavailable"), std::string::npos);
    EXPECT_TRUE(parsed.pages[0].llm.text_blocks.empty());
    EXPECT_TRUE(parsed.pages[1].llm.succeeded);
    // FAST and OCR are untouched on the failing page.
    EXPECT_TRUE(parsed.pages[0].fast.succeeded);
    EXPECT_TRUE(parsed.pages[0].ocr.succeeded);

    ASSERT_EQ(parsed.warnings.size(), 1u);
    EXPECT_NE(parsed.warnings[0].find("page 0"), std::string::npos);
    EXPECT_NE(parsed.warnings[0].find("llm"), std::string::npos);
}

TEST(Orchestrator, UndecodableImageIsWarnedAndSkipped) {
    auto dir = make_temp_dir("badimg");
    testsupport::DocSpec spec;
    spec.pages.resize(1);
    spec.pages[0].blocks = {testsupport::paragraph("Broken asset ahead."),
                            testsupport::image({"not an image at all", "png"})};
    auto path = write_file(dir / "bad.docx", testsupport::build_docx(spec));
    auto source = source_for(path, "bad", DocFormat::Docx);

    auto orch = mock_orchestrator();
    auto parsed = orch.parse_document(source);
    ASSERT_EQ(parsed.pages.size(), 1u);
    EXPECT_TRUE(parsed.pages[0].described_images.empty());
    ASSERT_EQ(parsed.warnings.size(), 1u);
    EXPECT_NE(parsed.warnings[0].find("UndecodableImage"), std::string::npos);
    EXPECT_NE(parsed.warnings[0].find("bad/img_0"), std::string::npos);
}

TEST(Orchestrator, DescribeImageUsesFixturesAndValidatesBytes) {
    auto dir = make_temp_dir("describe");
    auto plot = testsupport::solid_png(16, 16, 0x10);
    std::vector<std::uint8_t> plot_bytes(plot.bytes.begin(), plot.bytes.end());

    util::FixtureStore fixtures(dir / "fixtures");
    fixtures.write("describe", util::sha256_hex(plot_bytes),
                   {{"content_type", "plot"},
                    {"description", "Bar chart; x axis months, y axis visits, legend north."}});

    Orchestrator orch(std::make_shared<MockLlmParseBackend>(), std::make_shared<MockOcrBackend>(),
                      std::make_shared<MockVisionBackend>(fixtures), OrchestratorConfig{});
    auto described = orch.describe_image("d/img_0", "png", plot_bytes);
    EXPECT_EQ(described.content_type, "plot");
    EXPECT_NE(described.description.find("x axis months"), std::string::npos);

    std::vector<std::uint8_t> junk{'j', 'u', 'n', 'k'};
    try {
        orch.describe_image("d/img_1", "png", junk);
        FAIL() << "expected UndecodableImage";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UndecodableImage);
    }
}

TEST(Orchestrator, FullParseIsDeterministicAcrossRuns) {
    auto dir = make_temp_dir("determinism");
    auto path = write_file(dir / "deck.pptx", testsupport::build_pptx(small_report()));
    auto source = source_for(path, "deck", DocFormat::Pptx);
    auto orch = mock_orchestrator({.dpi = 72, .jobs = 2});

    auto digest = [](const ParsedDocument& doc) {
        std::string acc;
        for (const auto& bundle : doc.pages) {
            acc += util::sha256_hex(bundle.snapshot.image_png);
            for (const auto& tb : bundle.fast.text_blocks) acc += tb.text;
            for (const auto& d : bundle.described_images) acc += d.asset_id + d.description;
        }
        for (const auto& w : doc.warnings) acc += w;
        return util::sha256_hex(acc);
    };
    EXPECT_EQ(digest(orch.parse_document(source)), digest(orch.parse_document(source)));
}

// ---------------------------------------------------------------------------
// HTTP backends against an in-process server

TEST(HttpBackends, RoundTripRejectionAndTransportFailure) {
    httplib::Server server;
    server.Post("/v1/parse", [](const httplib::Request& req, httplib::Response& res) {
        auto body = nlohmann::json::parse(req.body);
        EXPECT_TRUE(body.contains("image_b64"));
        nlohmann::json reply;
        reply["text_blocks"] = nlohmann::json::array();
        reply["text_blocks"].push_back(
            {{"text", "from server"}, {"order", 0}, {"heading", false}});
        reply["tables"] = nlohmann::json::array();
        res.set_content(reply.dump(), "application/json");
    });
    server.Post("/v1/ocr", [](const httplib::Request&, httplib::Response& res) {
        res.status = 422;
        res.set_content("{\"error\":\"image too large\"}", "application/json");
    });
    server.Post("/v1/describe", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("this is not json", "application/json");
    });

    int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpBackendConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.timeout_seconds = 5;
    cfg.retry_backoff_ms = 1;

    PageSnapshot snap;
    snap.page_index = 0;
    snap.image_png = "fake-raster-bytes";

    HttpLlmParseBackend llm(cfg);
    auto result = llm.parse(snap);
    EXPECT_EQ(result.strategy, Strategy::Llm);
    ASSERT_EQ(result.text_blocks.size(), 1u);
    EXPECT_EQ(result.text_blocks[0].text, "from server");

    HttpOcrBackend ocr(cfg);
    try {
        ocr.parse(snap);
        FAIL() << "expected BackendRejectedInput";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendRejectedInput);
    }

    HttpVisionBackend vision(cfg);
    try {
        vision.describe("a/img_0", "png", {1, 2, 3});
        FAIL() << "expected BackendRejectedInput for malformed JSON";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendRejectedInput);
    }

    server.stop();
    runner.join();

    HttpBackendConfig dead = cfg;
    dead.base_url = "http://127.0.0.1:" + std::to_string(port);
    dead.timeout_seconds = 1;
    HttpLlmParseBackend unreachable(dead);
    try {
        unreachable.parse(snap);
        FAIL() << "expected BackendUnavailable";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
    }
}
