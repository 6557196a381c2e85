#pragma once
// Remote backends over HTTP. Wire format (all POST, JSON bodies, images as
// base64):
//   /v1/parse    {page_index, image_b64} -> {text_blocks:[{text,order,heading,
//                heading_level}], tables:[{markdown,order}]}
//   /v1/ocr      {page_index, image_b64} -> {text_blocks:[{text,order,confidence}]}
//   /v1/describe {asset_id, extension, image_b64} -> {content_type, description,
//                transcription}
// A failed request is retried once after a short backoff; persistent failure
// raises BackendUnavailable, a non-2xx reply raises BackendRejectedInput.
// Kept separate from backends.hpp so that only translation units which
// actually talk to a server pay for compiling cpp-httplib.

#include <chrono>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ragkit/common/error.hpp"
#include "ragkit/common/log.hpp"
#include "ragkit/parse/backends.hpp"

namespace ragkit::parse {

inline nlohmann::json http_post_json(const HttpBackendConfig& cfg, const std::string& path,
                                     const nlohmann::json& body) {
    if (cfg.base_url.empty()) {
        raise(ErrorCode::BackendUnavailable, "no endpoint configured for " + path);
    }
    std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt > 0 && cfg.retry_backoff_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(cfg.retry_backoff_ms));
        }
        httplib::Client client(cfg.base_url);
        client.set_connection_timeout(cfg.timeout_seconds, 0);
        client.set_read_timeout(cfg.timeout_seconds, 0);
        client.set_write_timeout(cfg.timeout_seconds, 0);
        if (!cfg.api_key.empty()) client.set_bearer_token_auth(cfg.api_key);
        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_error = "transport error (" + httplib::to_string(res.error()) + ")";
            util::warn("backend " + cfg.base_url + path + " attempt " +
                       std::to_string(attempt + 1) + " failed: " + last_error);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            raise(ErrorCode::BackendRejectedInput,
                  cfg.base_url + path + " returned HTTP " + std::to_string(res->status));
        }
        try {
            return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::BackendRejectedInput,
                  cfg.base_url + path + " returned malformed JSON: " + std::string(e.what()));
        }
    }
    raise(ErrorCode::BackendUnavailable, cfg.base_url + path + ": " + last_error);
}

class HttpLlmParseBackend : public LlmParseBackend {
public:
    explicit HttpLlmParseBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {}

    StrategyResult parse(const PageSnapshot& snapshot) override {
        nlohmann::json body{{"page_index", snapshot.page_index},
                            {"image_b64", util::base64_encode(snapshot.image_png)}};
        return detail::strategy_result_from_json(http_post_json(cfg_, "/v1/parse", body),
                                                 Strategy::Llm, /*with_confidence=*/false);
    }

private:
    HttpBackendConfig cfg_;
};

class HttpOcrBackend : public OcrBackend {
public:
    explicit HttpOcrBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {}

    StrategyResult parse(const PageSnapshot& snapshot) override {
        nlohmann::json body{{"page_index", snapshot.page_index},
                            {"image_b64", util::base64_encode(snapshot.image_png)}};
        return detail::strategy_result_from_json(http_post_json(cfg_, "/v1/ocr", body),
                                                 Strategy::Ocr, /*with_confidence=*/true);
    }

private:
    HttpBackendConfig cfg_;
};

class HttpVisionBackend : public VisionBackend {
public:
    explicit HttpVisionBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {}

    ImageDescription describe(const std::string& asset_id, const std::string& extension,
                              const std::vector<std::uint8_t>& bytes) override {
        nlohmann::json body{{"asset_id", asset_id},
                            {"extension", extension},
                            {"image_b64", util::base64_encode(bytes)}};
        auto j = http_post_json(cfg_, "/v1/describe", body);
        ImageDescription d;
        d.asset_id = asset_id;
        d.extension = extension;
        d.content_type = j.value("content_type", "other");
        d.description = j.value("description", "");
        d.transcription = j.value("transcription", "");
        return d;
    }

private:
    HttpBackendConfig cfg_;
};

}  // namespace ragkit::parse
