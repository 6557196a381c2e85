#pragma once
// Embedding backends. The mock derives a unit vector from a bag-of-words over
// the input: every token seeds a deterministic gaussian draw, so texts that
// share vocabulary land close together under cosine similarity - enough
// structure for retrieval tests while staying fully reproducible.

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragkit/common/error.hpp"
#include "ragkit/common/hash.hpp"
#include "ragkit/common/rng.hpp"
#include "ragkit/common/strutil.hpp"

namespace ragkit::index {

// Inputs longer than this are rejected with InputTooLong rather than being
// silently truncated.
inline constexpr std::size_t kMaxEmbedInputChars = 32768;

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::vector<double> embed(const std::string& text) = 0;
    virtual int dim() const = 0;

protected:
    static void check_input(const std::string& text) {
        if (text.size() > kMaxEmbedInputChars) {
            raise(ErrorCode::InputTooLong,
                  "embedding input of " + std::to_string(text.size()) + " chars exceeds " +
                      std::to_string(kMaxEmbedInputChars));
        }
    }
};

class MockEmbeddingBackend : public EmbeddingBackend {
public:
    explicit MockEmbeddingBackend(int dim = 64) : dim_(dim) {
        if (dim <= 0) raise(ErrorCode::InvalidConfig, "embedding dim must be positive");
    }

    std::vector<double> embed(const std::string& text) override {
        check_input(text);
        std::vector<double> acc(std::size_t(dim_), 0.0);
        auto tokens = util::word_tokens(text);
        if (tokens.empty()) {
            // No words at all (empty string, punctuation-only): hash the raw
            // text so distinct inputs still embed apart.
            add_token_vector(acc, util::fnv1a64(text) ^ 0x9e3779b97f4a7c15ull);
        } else {
            for (const auto& t : tokens) add_token_vector(acc, util::fnv1a64(t));
        }
        double norm = 0.0;
        for (double v : acc) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            acc[0] = 1.0;
            return acc;
        }
        for (double& v : acc) v /= norm;
        return acc;
    }

    int dim() const override { return dim_; }

private:
    void add_token_vector(std::vector<double>& acc, std::uint64_t seed) {
        util::SplitMix64 rng(seed);
        for (auto& v : acc) v += rng.next_gaussian();
    }

    int dim_;
};

inline double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        raise(ErrorCode::DimensionMismatch,
              "cosine over dims " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace ragkit::index
