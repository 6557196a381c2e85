#pragma once
// Runs the three extraction strategies per page, rasterizes page snapshots,
// and gathers image descriptions into one PageBundle per page. Strategy
// failures degrade to annotated empty results; only an unreadable document
// aborts the run.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/common/hash.hpp"
#include "ragkit/common/parallel.hpp"
#include "ragkit/common/png.hpp"
#include "ragkit/parse/backends.hpp"
#include "ragkit/parse/readers.hpp"
#include "ragkit/parse/types.hpp"

namespace ragkit::parse {

struct OrchestratorConfig {
    int dpi = 150;
    int jobs = 1;  // concurrent pages in parse_document
};

namespace detail {

// Deterministic wireframe rendering of a native page: grayscale boxes whose
// geometry depends only on the page content and dpi, so snapshots are
// byte-stable across runs and machines.
inline util::Canvas render_wireframe(const NativeDocument& doc, const NativePage& page,
                                     int dpi) {
    int width = static_cast<int>(doc.page_width_in * dpi + 0.5);
    int height = static_cast<int>(doc.page_height_in * dpi + 0.5);
    util::Canvas canvas(width, height);

    int margin = dpi / 2;
    int usable = width - 2 * margin;
    if (usable < dpi) usable = width > dpi ? width - 2 : width;
    int y = margin;
    int line_height = dpi * 18 / 100;
    int gap = dpi / 10;
    double char_width = dpi * 0.08;

    struct Box {
        int order;
        int kind;  // 0 text, 1 table, 2 image
        std::size_t item;
    };
    std::vector<Box> boxes;
    for (std::size_t i = 0; i < page.text_blocks.size(); ++i) {
        boxes.push_back({page.text_blocks[i].order, 0, i});
    }
    for (std::size_t i = 0; i < page.tables.size(); ++i) {
        boxes.push_back({page.tables[i].order, 1, i});
    }
    for (std::size_t i = 0; i < page.images.size(); ++i) {
        boxes.push_back({page.images[i].order + 1000, 2, i});
    }
    std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
        if (a.order != b.order) return a.order < b.order;
        return a.kind < b.kind;
    });

    for (const auto& box : boxes) {
        if (y >= height - margin) break;
        if (box.kind == 0) {
            const TextBlock& tb = page.text_blocks[box.item];
            int chars_per_line = static_cast<int>(usable / char_width);
            if (chars_per_line < 8) chars_per_line = 8;
            int lines = static_cast<int>((tb.text.size() + chars_per_line - 1) / chars_per_line);
            if (lines < 1) lines = 1;
            std::uint8_t shade = tb.heading ? 0x90 : 0xc8;
            int block_height = tb.heading ? dpi * 2 / 5 : lines * line_height;
            int block_width = lines > 1 || tb.heading
                                  ? usable
                                  : static_cast<int>(tb.text.size() * char_width);
            if (block_width > usable) block_width = usable;
            if (block_width < dpi / 4) block_width = dpi / 4;
            canvas.fill_rect(margin, y, block_width, block_height, shade, shade, shade);
            y += block_height + gap;
        } else if (box.kind == 1) {
            const TableFragment& tf = page.tables[box.item];
            int rows = 1;
            for (char c : tf.markdown) rows += c == '\n' ? 1 : 0;
            int block_height = rows * line_height;
            canvas.fill_rect(margin, y, usable, block_height, 0xb0, 0xb0, 0xb0);
            canvas.fill_rect(margin, y, usable, line_height, 0x88, 0x88, 0x88);
            y += block_height + gap;
        } else {
            int block_height = dpi;
            canvas.fill_rect(margin, y, usable * 3 / 4, block_height, 0x70, 0x70, 0x70);
            y += block_height + gap;
        }
    }
    return canvas;
}

inline PageSnapshot snapshot_of(const NativeDocument& doc, const NativePage& page, int dpi) {
    util::Canvas canvas = render_wireframe(doc, page, dpi);
    PageSnapshot snap;
    snap.page_index = page.page_index;
    snap.width_px = canvas.width;
    snap.height_px = canvas.height;
    snap.dpi = dpi;
    snap.image_png = util::png_encode(canvas);
    return snap;
}

}  // namespace detail

class Orchestrator {
public:
    Orchestrator(std::shared_ptr<LlmParseBackend> llm, std::shared_ptr<OcrBackend> ocr,
                 std::shared_ptr<VisionBackend> vision, OrchestratorConfig config = {})
        : llm_(std::move(llm)), ocr_(std::move(ocr)), vision_(std::move(vision)),
          config_(config) {}

    std::vector<PageSnapshot> rasterize_pages(const DocumentSource& source, int dpi) const {
        if (dpi < 72 || dpi > 600) {
            raise(ErrorCode::InvalidConfig, "dpi out of range: " + std::to_string(dpi));
        }
        NativeDocument native = read_native(source);
        if (native.pages.empty()) raise(ErrorCode::CorruptFile, "document has no pages");
        std::vector<PageSnapshot> snapshots;
        snapshots.reserve(native.pages.size());
        for (const auto& page : native.pages) {
            snapshots.push_back(detail::snapshot_of(native, page, dpi));
        }
        return snapshots;
    }

    StrategyResult parse_fast(const DocumentSource& source, int page_index) const {
        NativeDocument native = read_native(source);
        if (page_index < 0 || page_index >= static_cast<int>(native.pages.size())) {
            raise(ErrorCode::InvalidConfig, "page out of range: " + std::to_string(page_index));
        }
        return fast_result(native.pages[static_cast<std::size_t>(page_index)]);
    }

    StrategyResult parse_llm(const PageSnapshot& snapshot) const {
        StrategyResult out = llm_->parse(snapshot);
        out.strategy = Strategy::Llm;
        out.images.clear();  // only FAST carries extracted assets
        return out;
    }

    StrategyResult parse_ocr(const PageSnapshot& snapshot) const {
        StrategyResult out = ocr_->parse(snapshot);
        out.strategy = Strategy::Ocr;
        out.images.clear();
        return out;
    }

    ImageDescription describe_image(const std::string& asset_id, const std::string& extension,
                                    const std::vector<std::uint8_t>& bytes) const {
        auto info = util::sniff_image(bytes);
        if (!info) {
            raise(ErrorCode::UndecodableImage, asset_id + ": unrecognized image bytes");
        }
        return vision_->describe(asset_id, extension, bytes);
    }

    // Full parse: every strategy attempted on every page, failures recorded
    // in the bundle and the warning list instead of aborting.
    ParsedDocument parse_document(const DocumentSource& source) const {
        NativeDocument native = read_native(source);
        if (native.pages.empty()) raise(ErrorCode::CorruptFile, "document has no pages");

        struct PageOutcome {
            PageBundle bundle;
            std::vector<std::string> warnings;
        };
        std::vector<int> indexes(native.pages.size());
        for (std::size_t i = 0; i < indexes.size(); ++i) indexes[i] = static_cast<int>(i);

        auto outcomes = util::parallel_map(indexes, config_.jobs, [&](int page_index) {
            const NativePage& page = native.pages[static_cast<std::size_t>(page_index)];
            PageOutcome out;
            out.bundle.page_index = page_index;
            out.bundle.snapshot = detail::snapshot_of(native, page, config_.dpi);
            out.bundle.fast = fast_result(page);

            auto attempt = [&](Strategy strategy, auto&& call) {
                StrategyResult result;
                try {
                    result = call();
                } catch (const Error& e) {
                    result = StrategyResult{};
                    result.strategy = strategy;
                    result.attempted = true;
                    result.succeeded = false;
                    result.error = e.what();
                    out.warnings.push_back("page " + std::to_string(page_index) + ": " +
                                           std::string(strategy_name(strategy)) + ": " +
                                           e.what());
                }
                return result;
            };
            out.bundle.llm =
                attempt(Strategy::Llm, [&] { return parse_llm(out.bundle.snapshot); });
            out.bundle.ocr =
                attempt(Strategy::Ocr, [&] { return parse_ocr(out.bundle.snapshot); });

            for (const auto& img : page.images) {
                try {
                    out.bundle.described_images.push_back(
                        describe_image(img.asset_id, img.extension, img.bytes));
                } catch (const Error& e) {
                    out.warnings.push_back("page " + std::to_string(page_index) + ": image " +
                                           img.asset_id + ": " + e.what());
                }
            }
            return out;
        });

        ParsedDocument doc;
        doc.source = source;
        // surface what the file itself declares (title, author, ...)
        for (const auto& [key, value] : native.metadata) {
            doc.source.native_metadata.emplace(key, value);
        }
        for (auto& outcome : outcomes) {
            doc.pages.push_back(std::move(outcome.bundle));
            for (auto& w : outcome.warnings) doc.warnings.push_back(std::move(w));
        }
        return doc;
    }

    const OrchestratorConfig& config() const { return config_; }

private:
    static StrategyResult fast_result(const NativePage& page) {
        StrategyResult out;
        out.strategy = Strategy::Fast;
        out.attempted = true;
        out.succeeded = true;
        out.text_blocks = page.text_blocks;
        out.tables = page.tables;
        out.images = page.images;
        return out;
    }

    std::shared_ptr<LlmParseBackend> llm_;
    std::shared_ptr<OcrBackend> ocr_;
    std::shared_ptr<VisionBackend> vision_;
    OrchestratorConfig config_;
};

}  // namespace ragkit::parse
