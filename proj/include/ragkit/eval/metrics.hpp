#pragma once
// The five evaluation metrics, in two layers. The pure layer operates on
// score vectors/matrices and is exact arithmetic over its inputs; the driven
// layer obtains those scores from a judge for one evaluation item:
//
//   answer correctness  - mean grade of the generated answer's statements
//                         against the expected answer
//   answer relevance    - mean grade of the generated answer's statements
//                         against the question
//   faithfulness        - per statement, the best grade against any retrieved
//                         context; mean over statements
//   context relevance   - rank-discounted precision over binary per-context
//                         relevance verdicts: (1/R(C)) * sum_k (R(k)/k) * r_k
//                         where R(k) counts relevant contexts in the top k
//   context recall      - per expected-answer statement, the best grade
//                         against any retrieved context; mean over statements

#include <string>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/eval/judge.hpp"

namespace ragkit::eval {

// Mean of per-statement scores. No statements means nothing was asserted:
// the score is 0, not an error (an empty answer earns nothing).
inline double answer_correctness(const std::vector<double>& statement_scores) {
    if (statement_scores.empty()) return 0.0;
    double sum = 0.0;
    for (double s : statement_scores) sum += s;
    return sum / double(statement_scores.size());
}

inline double answer_relevance(const std::vector<double>& statement_scores) {
    return answer_correctness(statement_scores);
}

// `scores[i][j]` grades statement i against context j.
inline double faithfulness(const std::vector<std::vector<double>>& scores) {
    if (scores.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& row : scores) {
        double best = 0.0;
        for (double s : row) best = std::max(best, s);
        sum += best;
    }
    return sum / double(scores.size());
}

// `relevant[k]` is the binary relevance of the context at rank k+1.
inline double context_relevance(const std::vector<int>& relevant) {
    double acc = 0.0;
    int running = 0;
    for (std::size_t k = 0; k < relevant.size(); ++k) {
        int r = relevant[k] != 0 ? 1 : 0;
        running += r;
        if (r != 0) acc += double(running) / double(k + 1);
    }
    if (running == 0) return 0.0;
    return acc / double(running);
}

inline double context_recall(const std::vector<std::vector<double>>& scores) {
    return faithfulness(scores);
}

// ---------------------------------------------------------------------------
// Judge-driven evaluation of one item.

struct MetricConfig {
    // A context counts as relevant for context_relevance when its judged
    // score reaches this threshold.
    double relevance_binarize_threshold = 0.6;
};

struct MetricScores {
    double answer_correctness = 0.0;
    double answer_relevance = 0.0;
    double faithfulness = 0.0;
    double context_relevance = 0.0;
    double context_recall = 0.0;
};

inline MetricScores evaluate_item(Judge& judge, const std::string& query,
                                  const std::string& generated_answer,
                                  const std::string& expected_answer,
                                  const std::vector<std::string>& contexts,
                                  const MetricConfig& cfg = {}) {
    if (contexts.empty()) {
        raise(ErrorCode::EmptyContexts, "no retrieved contexts for query: " + query);
    }
    if (expected_answer.empty()) {
        raise(ErrorCode::MissingExpectedAnswer, "no expected answer for query: " + query);
    }

    MetricScores out;
    auto answer_statements = judge.decompose(generated_answer);

    std::vector<double> correctness, relevance;
    std::vector<std::vector<double>> grounding;
    for (const auto& st : answer_statements) {
        correctness.push_back(judge.score(st, expected_answer, criteria::kCorrectness));
        relevance.push_back(judge.score(st, query, criteria::kRelevance));
        std::vector<double> row;
        row.reserve(contexts.size());
        for (const auto& ctx : contexts) {
            row.push_back(judge.score(st, ctx, criteria::kGroundedness));
        }
        grounding.push_back(std::move(row));
    }
    out.answer_correctness = answer_correctness(correctness);
    out.answer_relevance = answer_relevance(relevance);
    out.faithfulness = faithfulness(grounding);

    std::vector<int> relevant;
    relevant.reserve(contexts.size());
    for (const auto& ctx : contexts) {
        double s = judge.score(ctx, query, criteria::kContextRelevance);
        relevant.push_back(s >= cfg.relevance_binarize_threshold ? 1 : 0);
    }
    out.context_relevance = context_relevance(relevant);

    std::vector<std::vector<double>> recall_rows;
    for (const auto& st : judge.decompose(expected_answer)) {
        std::vector<double> row;
        row.reserve(contexts.size());
        for (const auto& ctx : contexts) {
            row.push_back(judge.score(st, ctx, criteria::kRecall));
        }
        recall_rows.push_back(std::move(row));
    }
    out.context_recall = context_recall(recall_rows);
    return out;
}

}  // namespace ragkit::eval
