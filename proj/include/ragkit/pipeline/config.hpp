#pragma once
// Pipeline configuration: one TOML file selects the backend for every slot
// (each either "mock" or an HTTP endpoint), plus splitting, retrieval, and
// output settings. The RAGKIT_API_KEY environment variable overrides the
// file-supplied credential so secrets can stay out of checked-in configs.

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <set>
#include <string>

#include "ragkit/assemble/agent.hpp"
#include "ragkit/assemble/agent_http.hpp"
#include "ragkit/common/error.hpp"
#include "ragkit/common/fixtures.hpp"
#include "ragkit/common/strutil.hpp"
#include "ragkit/common/toml.hpp"
#include "ragkit/eval/judge.hpp"
#include "ragkit/eval/judge_http.hpp"
#include "ragkit/graphbuild/chunk.hpp"
#include "ragkit/index/embedding.hpp"
#include "ragkit/index/embedding_http.hpp"
#include "ragkit/index/store.hpp"
#include "ragkit/parse/backends.hpp"
#include "ragkit/parse/http.hpp"

namespace ragkit::pipeline {

struct PipelineConfig {
    std::string ns = "default";
    std::filesystem::path output_dir = "out";
    int k = 5;
    int jobs = 1;
    int dpi = 150;
    int question_count = 3;

    // backend slots: "mock" or an http(s) endpoint
    std::string llm = "mock";        // page parsing, vision, and all agents
    std::string ocr = "mock";
    std::string embedding = "mock";
    std::string judge = "mock";
    std::string answer = "mock";     // answer generation during evaluation
    std::string api_key;             // bearer token for the HTTP slots
    std::filesystem::path prompts_dir = "prompts";
    int timeout_seconds = 60;

    graphbuild::SplitConfig split;
    std::size_t metadata_limit_bytes = index::kMaxMetadataBytes;
    int embedding_dim = 64;
    int prefilter_m = 3;

    std::filesystem::path fixtures_dir;  // empty: mocks use built-in fallbacks
};

inline bool is_mock_slot(const std::string& slot) { return slot == "mock"; }

inline void validate_config(const PipelineConfig& cfg) {
    if (cfg.ns.empty()) raise(ErrorCode::InvalidConfig, "namespace must not be empty");
    if (cfg.k < 1) raise(ErrorCode::InvalidConfig, "k must be >= 1");
    if (cfg.jobs < 1) raise(ErrorCode::InvalidConfig, "jobs must be >= 1");
    if (cfg.prefilter_m < 1) raise(ErrorCode::InvalidConfig, "prefilter_m must be >= 1");
    if (cfg.embedding_dim < 1) raise(ErrorCode::InvalidConfig, "embedding_dim must be >= 1");
    if (cfg.question_count < 1) raise(ErrorCode::InvalidConfig, "question_count must be >= 1");
    if (cfg.metadata_limit_bytes == 0) {
        raise(ErrorCode::InvalidConfig, "metadata_limit_bytes must be positive");
    }
    graphbuild::validate_split_config(cfg.split);
    for (const auto& [name, slot] :
         {std::pair<const char*, const std::string*>{"llm", &cfg.llm},
          {"ocr", &cfg.ocr},
          {"embedding", &cfg.embedding},
          {"judge", &cfg.judge},
          {"answer", &cfg.answer}}) {
        if (is_mock_slot(*slot) || util::starts_with(*slot, "http://") ||
            util::starts_with(*slot, "https://")) {
            continue;
        }
        raise(ErrorCode::InvalidConfig,
              "backend slot '" + std::string(name) + "' must be \"mock\" or an http(s) URL, got \"" +
                  *slot + "\"");
    }
}

inline PipelineConfig config_from_toml(const util::TomlFile& toml) {
    static const std::set<std::string> known{
        "namespace",        "output_dir",
        "k",                "jobs",
        "dpi",              "question_count",
        "backends.llm",     "backends.ocr",
        "backends.embedding", "backends.judge",
        "backends.answer",  "backends.api_key",
        "backends.prompts_dir", "backends.timeout_seconds",
        "split.threshold_chars", "split.overlap_chars",
        "split.splitter",   "split.breakpoint_percentile",
        "index.metadata_limit_bytes", "index.embedding_dim", "index.prefilter_m",
        "fixtures.dir"};
    for (const auto& key : toml.keys()) {
        if (!known.count(key)) raise(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }

    PipelineConfig cfg;
    cfg.ns = toml.get_string("namespace", cfg.ns);
    cfg.output_dir = toml.get_string("output_dir", cfg.output_dir.string());
    cfg.k = int(toml.get_int("k", cfg.k));
    cfg.jobs = int(toml.get_int("jobs", cfg.jobs));
    cfg.dpi = int(toml.get_int("dpi", cfg.dpi));
    cfg.question_count = int(toml.get_int("question_count", cfg.question_count));

    cfg.llm = toml.get_string("backends.llm", cfg.llm);
    cfg.ocr = toml.get_string("backends.ocr", cfg.ocr);
    cfg.embedding = toml.get_string("backends.embedding", cfg.embedding);
    cfg.judge = toml.get_string("backends.judge", cfg.judge);
    cfg.answer = toml.get_string("backends.answer", cfg.answer);
    cfg.api_key = toml.get_string("backends.api_key", cfg.api_key);
    cfg.prompts_dir = toml.get_string("backends.prompts_dir", cfg.prompts_dir.string());
    cfg.timeout_seconds = int(toml.get_int("backends.timeout_seconds", cfg.timeout_seconds));

    cfg.split.text_threshold_chars =
        std::size_t(toml.get_int("split.threshold_chars", std::int64_t(cfg.split.text_threshold_chars)));
    cfg.split.chunk_overlap_chars =
        std::size_t(toml.get_int("split.overlap_chars", std::int64_t(cfg.split.chunk_overlap_chars)));
    std::string splitter = toml.get_string("split.splitter", "recursive");
    if (splitter == "recursive") {
        cfg.split.splitter = graphbuild::SplitConfig::Splitter::Recursive;
    } else if (splitter == "semantic") {
        cfg.split.splitter = graphbuild::SplitConfig::Splitter::Semantic;
    } else {
        raise(ErrorCode::InvalidConfig, "split.splitter must be \"recursive\" or \"semantic\"");
    }
    cfg.split.semantic_breakpoint_percentile =
        toml.get_double("split.breakpoint_percentile", cfg.split.semantic_breakpoint_percentile);

    cfg.metadata_limit_bytes = std::size_t(
        toml.get_int("index.metadata_limit_bytes", std::int64_t(cfg.metadata_limit_bytes)));
    cfg.embedding_dim = int(toml.get_int("index.embedding_dim", cfg.embedding_dim));
    cfg.prefilter_m = int(toml.get_int("index.prefilter_m", cfg.prefilter_m));

    cfg.fixtures_dir = toml.get_string("fixtures.dir", "");
    return cfg;
}

// Credentials may come from the environment instead of the file.
inline void apply_env_overrides(PipelineConfig& cfg) {
    if (const char* key = std::getenv("RAGKIT_API_KEY"); key && *key) cfg.api_key = key;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    auto cfg = config_from_toml(util::TomlFile::load(path));
    apply_env_overrides(cfg);
    return cfg;
}

// --mock-all: every slot becomes the deterministic mock.
inline void force_mocks(PipelineConfig& cfg) {
    cfg.llm = cfg.ocr = cfg.embedding = cfg.judge = cfg.answer = "mock";
}

// Everything the pipeline talks to, resolved per slot.
struct Backends {
    std::shared_ptr<parse::LlmParseBackend> llm_parse;
    std::shared_ptr<parse::OcrBackend> ocr;
    std::shared_ptr<parse::VisionBackend> vision;
    std::shared_ptr<assemble::Agent> agent;     // assembly, metadata, contextualization, dataset
    std::shared_ptr<assemble::Agent> answerer;  // evaluation answer generation
    std::shared_ptr<index::EmbeddingBackend> embedder;
    std::shared_ptr<eval::Judge> judge;
};

inline Backends make_backends(const PipelineConfig& cfg) {
    validate_config(cfg);
    auto fixtures = [&] {
        return cfg.fixtures_dir.empty() ? util::FixtureStore{}
                                        : util::FixtureStore{cfg.fixtures_dir};
    };
    auto http = [&](const std::string& url) {
        parse::HttpBackendConfig h;
        h.base_url = url;
        h.api_key = cfg.api_key;
        h.timeout_seconds = cfg.timeout_seconds;
        return h;
    };

    Backends b;
    if (is_mock_slot(cfg.llm)) {
        b.llm_parse = std::make_shared<parse::MockLlmParseBackend>(fixtures());
        b.vision = std::make_shared<parse::MockVisionBackend>(fixtures());
        b.agent = std::make_shared<assemble::MockAgent>(fixtures());
    } else {
        b.llm_parse = std::make_shared<parse::HttpLlmParseBackend>(http(cfg.llm));
        b.vision = std::make_shared<parse::HttpVisionBackend>(http(cfg.llm));
        b.agent = std::make_shared<assemble::HttpAgent>(http(cfg.llm), cfg.prompts_dir);
    }
    b.ocr = is_mock_slot(cfg.ocr)
                ? std::shared_ptr<parse::OcrBackend>(std::make_shared<parse::MockOcrBackend>(fixtures()))
                : std::make_shared<parse::HttpOcrBackend>(http(cfg.ocr));
    b.embedder = is_mock_slot(cfg.embedding)
                     ? std::shared_ptr<index::EmbeddingBackend>(
                           std::make_shared<index::MockEmbeddingBackend>(cfg.embedding_dim))
                     : std::make_shared<index::HttpEmbeddingBackend>(http(cfg.embedding),
                                                                     cfg.embedding_dim);
    b.judge = is_mock_slot(cfg.judge)
                  ? std::shared_ptr<eval::Judge>(std::make_shared<eval::MockJudge>(fixtures()))
                  : std::make_shared<eval::HttpJudge>(http(cfg.judge), cfg.prompts_dir);
    b.answerer = is_mock_slot(cfg.answer)
                     ? std::shared_ptr<assemble::Agent>(
                           std::make_shared<assemble::MockAgent>(fixtures()))
                     : std::make_shared<assemble::HttpAgent>(http(cfg.answer), cfg.prompts_dir);
    return b;
}

}  // namespace ragkit::pipeline
