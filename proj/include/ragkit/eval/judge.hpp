#pragma once
// LLM-as-judge interface. Raw verdicts land anywhere in [0,1]; every score
// is snapped onto the six-point scale {0, 0.2, 0.4, 0.6, 0.8, 1} so that
// metric aggregates stay comparable across judge backends. The mock judge
// grades by lexical overlap, which is a deliberately crude but deterministic
// stand-in for a model.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragkit/common/error.hpp"
#include "ragkit/common/fixtures.hpp"
#include "ragkit/common/hash.hpp"
#include "ragkit/common/strutil.hpp"

namespace ragkit::eval {

inline constexpr std::array<double, 6> kJudgeScale = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

// Clamp into [0,1], then snap to the nearest scale member; exact midpoints
// round down (a judge must earn the higher grade). Scale members map to
// themselves.
inline double snap_judge_score(double raw) {
    if (std::isnan(raw)) raise(ErrorCode::UnparseableVerdict, "judge score is NaN");
    raw = std::clamp(raw, 0.0, 1.0);
    double scaled = raw * 5.0;
    double k = std::floor(scaled);
    if (scaled - k > 0.5) k += 1.0;
    return k / 5.0;
}

// Criteria passed through to the judge prompt.
namespace criteria {
inline constexpr const char* kCorrectness = "is the statement supported by the reference answer";
inline constexpr const char* kRelevance = "is the statement relevant to the question";
inline constexpr const char* kGroundedness = "is the statement supported by the context";
inline constexpr const char* kContextRelevance = "does the context help answer the question";
inline constexpr const char* kRecall = "is the statement attested in the context";
}  // namespace criteria

class Judge {
public:
    virtual ~Judge() = default;
    // Splits text into atomic factual statements.
    virtual std::vector<std::string> decompose(const std::string& text) = 0;
    // Returns a snapped score for `statement` graded against `reference`.
    virtual double score(const std::string& statement, const std::string& reference,
                         const std::string& criterion) = 0;
};

// Deterministic judge: decomposition is sentence splitting, grading is token
// overlap (what fraction of the statement's words appear in the reference).
// Fixtures (role "judge", key = sha256 of statement/reference/criterion) can
// pin individual verdicts.
class MockJudge : public Judge {
public:
    explicit MockJudge(util::FixtureStore fixtures = {}) : fixtures_(std::move(fixtures)) {}

    std::vector<std::string> decompose(const std::string& text) override {
        return util::split_sentences(text);
    }

    double score(const std::string& statement, const std::string& reference,
                 const std::string& criterion) override {
        auto key = util::sha256_hex(statement + "\x1f" + reference + "\x1f" + criterion);
        if (auto fx = fixtures_.lookup("judge", key)) {
            return snap_judge_score(fx->value("score", 0.0));
        }
        return snap_judge_score(util::token_overlap(statement, reference));
    }

private:
    util::FixtureStore fixtures_;
};

}  // namespace ragkit::eval
