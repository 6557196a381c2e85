#pragma once
// Embedding service client: POST /v1/embed {"texts": [...]} returns
// {"vectors": [[...], ...]}.

#include <string>
#include <vector>

#include "ragkit/index/embedding.hpp"
#include "ragkit/parse/http.hpp"

namespace ragkit::index {

class HttpEmbeddingBackend : public EmbeddingBackend {
public:
    HttpEmbeddingBackend(parse::HttpBackendConfig cfg, int dim)
        : cfg_(std::move(cfg)), dim_(dim) {
        if (dim <= 0) raise(ErrorCode::InvalidConfig, "embedding dim must be positive");
    }

    std::vector<double> embed(const std::string& text) override {
        check_input(text);
        nlohmann::json body{{"texts", nlohmann::json::array({text})}};
        auto j = parse::http_post_json(cfg_, "/v1/embed", body);
        auto vectors = j.value("vectors", nlohmann::json::array());
        if (vectors.size() != 1 || !vectors[0].is_array()) {
            raise(ErrorCode::BackendRejectedInput, "embed service returned no vector");
        }
        std::vector<double> v = vectors[0].get<std::vector<double>>();
        if (int(v.size()) != dim_) {
            raise(ErrorCode::DimensionMismatch,
                  "embed service returned dim " + std::to_string(v.size()) + ", expected " +
                      std::to_string(dim_));
        }
        return v;
    }

    int dim() const override { return dim_; }

private:
    parse::HttpBackendConfig cfg_;
    int dim_;
};

}  // namespace ragkit::index
