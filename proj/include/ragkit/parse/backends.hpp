#pragma once
// Model-backed extraction services behind small interfaces. Every backend has
// a deterministic mock (fixture lookup by content hash, with a neutral
// fallback) and an HTTP client speaking a JSON wire format.

#include <chrono>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ragkit/common/base64.hpp"
#include "ragkit/common/error.hpp"
#include "ragkit/common/fixtures.hpp"
#include "ragkit/common/hash.hpp"
#include "ragkit/common/log.hpp"
#include "ragkit/parse/types.hpp"

namespace ragkit::parse {

class LlmParseBackend {
public:
    virtual ~LlmParseBackend() = default;
    // Reads a rendered page image and returns layout-aware text and tables.
    virtual StrategyResult parse(const PageSnapshot& snapshot) = 0;
};

class OcrBackend {
public:
    virtual ~OcrBackend() = default;
    virtual StrategyResult parse(const PageSnapshot& snapshot) = 0;
};

class VisionBackend {
public:
    virtual ~VisionBackend() = default;
    virtual ImageDescription describe(const std::string& asset_id, const std::string& extension,
                                      const std::vector<std::uint8_t>& bytes) = 0;
};

namespace detail {

inline StrategyResult strategy_result_from_json(const nlohmann::json& j, Strategy strategy,
                                                bool with_confidence) {
    StrategyResult out;
    out.strategy = strategy;
    out.attempted = true;
    out.succeeded = true;
    for (const auto& b : j.value("text_blocks", nlohmann::json::array())) {
        TextBlock tb;
        tb.text = b.value("text", "");
        tb.order = b.value("order", int(out.text_blocks.size()));
        tb.heading = b.value("heading", false);
        tb.heading_level = b.value("heading_level", 0);
        if (with_confidence) tb.confidence = b.value("confidence", 1.0);
        out.text_blocks.push_back(std::move(tb));
    }
    for (const auto& t : j.value("tables", nlohmann::json::array())) {
        TableFragment tf;
        tf.markdown = t.value("markdown", "");
        tf.order = t.value("order", int(out.tables.size()));
        out.tables.push_back(std::move(tf));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Mocks. Keyed by the SHA-256 of the page raster / image bytes so responses
// depend only on content. Without a matching fixture the LLM and OCR mocks
// return an empty (but successful) result: the embedded text layer extracted
// by the FAST strategy remains the content floor.

class MockLlmParseBackend : public LlmParseBackend {
public:
    explicit MockLlmParseBackend(util::FixtureStore fixtures = {})
        : fixtures_(std::move(fixtures)) {}

    StrategyResult parse(const PageSnapshot& snapshot) override {
        auto key = util::sha256_hex(snapshot.image_png);
        if (auto fx = fixtures_.lookup("llm_parse", key)) {
            return detail::strategy_result_from_json(*fx, Strategy::Llm,
                                                     /*with_confidence=*/false);
        }
        StrategyResult out;
        out.strategy = Strategy::Llm;
        out.attempted = true;
        out.succeeded = true;
        return out;
    }

private:
    util::FixtureStore fixtures_;
};

class MockOcrBackend : public OcrBackend {
public:
    explicit MockOcrBackend(util::FixtureStore fixtures = {}) : fixtures_(std::move(fixtures)) {}

    StrategyResult parse(const PageSnapshot& snapshot) override {
        auto key = util::sha256_hex(snapshot.image_png);
        if (auto fx = fixtures_.lookup("ocr", key)) {
            return detail::strategy_result_from_json(*fx, Strategy::Ocr, /*with_confidence=*/true);
        }
        StrategyResult out;
        out.strategy = Strategy::Ocr;
        out.attempted = true;
        out.succeeded = true;
        return out;
    }

private:
    util::FixtureStore fixtures_;
};

class MockVisionBackend : public VisionBackend {
public:
    explicit MockVisionBackend(util::FixtureStore fixtures = {})
        : fixtures_(std::move(fixtures)) {}

    ImageDescription describe(const std::string& asset_id, const std::string& extension,
                              const std::vector<std::uint8_t>& bytes) override {
        ImageDescription d;
        d.asset_id = asset_id;
        d.extension = extension;
        auto key = util::sha256_hex(bytes);
        if (auto fx = fixtures_.lookup("describe", key)) {
            d.content_type = fx->value("content_type", "other");
            d.description = fx->value("description", "");
            d.transcription = fx->value("transcription", "");
            return d;
        }
        d.content_type = "other";
        d.description = "Image asset " + key.substr(0, 12);
        d.transcription = "";
        return d;
    }

private:
    util::FixtureStore fixtures_;
};

// Settings shared by the HTTP backend clients (see parse/http.hpp for the
// clients themselves and the wire format).
struct HttpBackendConfig {
    std::string base_url;       // e.g. "http://127.0.0.1:8801"
    std::string api_key;        // sent as a bearer token when non-empty
    int timeout_seconds = 60;   // per attempt, connection + read
    int retry_backoff_ms = 250; // sleep before the single retry
};

}  // namespace ragkit::parse
