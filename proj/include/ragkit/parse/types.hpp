#pragma once
// Data carried between the parsing stages: page snapshots rendered from the
// source document, per-strategy extraction results, and the merged per-page
// bundle handed to the assembler.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ragkit/core/node.hpp"

namespace ragkit::parse {

// The three extraction strategies run against every page.
enum class Strategy { Fast, Llm, Ocr };

inline std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Fast: return "fast";
        case Strategy::Llm: return "llm";
        case Strategy::Ocr: return "ocr";
    }
    return "fast";
}

// A rasterized page image plus whatever the native file format exposes
// directly (embedded text runs, embedded images).
struct PageSnapshot {
    int page_index = 0;
    std::string image_png;  // raster bytes (PNG)
    int width_px = 0;
    int height_px = 0;
    int dpi = 150;
};

// One extracted block of text. `order` is the emitting strategy's reading
// order; bbox fields are in page pixels when the strategy knows them.
struct TextBlock {
    std::string text;
    int order = 0;
    bool heading = false;
    int heading_level = 0;  // meaningful only when heading is true
    double confidence = 1.0;
};

// A table already rendered as GitHub-flavored markdown.
struct TableFragment {
    std::string markdown;
    int order = 0;
};

// An image embedded in (or cropped from) the page. `bytes` plus `extension`
// ("png", "jpg") describe the asset as stored on disk; `asset_id` is the
// content hash used as the file stem.
struct EmbeddedImage {
    std::string asset_id;
    std::string extension;
    std::vector<std::uint8_t> bytes;
    int order = 0;
};

// What a vision model said about one embedded image.
struct ImageDescription {
    std::string asset_id;
    std::string extension;
    std::string content_type;  // "plot", "flowchart", "photo", "text_image", "other"
    std::string description;
    std::string transcription;  // populated when content_type is "text_image"
};

// Output of one parsing strategy for one page.
struct StrategyResult {
    Strategy strategy = Strategy::Fast;
    std::vector<TextBlock> text_blocks;
    std::vector<TableFragment> tables;
    std::vector<EmbeddedImage> images;  // only the FAST strategy extracts assets
    bool attempted = false;
    bool succeeded = false;
    std::string error;  // populated when attempted && !succeeded
};

// Everything known about a page before assembly.
struct PageBundle {
    int page_index = 0;
    PageSnapshot snapshot;
    StrategyResult fast;
    StrategyResult llm;
    StrategyResult ocr;
    std::vector<ImageDescription> described_images;
};

// Raw per-page extraction straight out of a document reader (text in native
// order, embedded assets, native heading hints).
struct NativePage {
    int page_index = 0;
    std::vector<TextBlock> text_blocks;
    std::vector<TableFragment> tables;
    std::vector<EmbeddedImage> images;
};

struct ParsedDocument {
    DocumentSource source;
    std::vector<PageBundle> pages;
    std::vector<std::string> warnings;  // degraded strategies, undecodable assets
};

}  // namespace ragkit::parse
