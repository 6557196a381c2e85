#pragma once
// Judge backed by the agent service. Uses the shared /v1/agent endpoint with
// role "judge" and a two-mode prompt (decompose / score); replies must be
// JSON. A malformed reply is retried once; a reply that still cannot be read
// raises UnparseableVerdict, transport failure raises JudgeUnavailable.

#include <filesystem>
#include <string>
#include <vector>

#include "ragkit/assemble/agent_http.hpp"
#include "ragkit/eval/judge.hpp"

namespace ragkit::eval {

class HttpJudge : public Judge {
public:
    HttpJudge(parse::HttpBackendConfig cfg, std::filesystem::path prompts_dir)
        : cfg_(std::move(cfg)), prompts_dir_(std::move(prompts_dir)) {}

    std::vector<std::string> decompose(const std::string& text) override {
        nlohmann::json payload{{"mode", "decompose"}, {"text", text}};
        auto reply = call(payload, "statements");
        std::vector<std::string> out;
        for (const auto& s : reply["statements"]) {
            if (s.is_string() && !s.get<std::string>().empty()) out.push_back(s.get<std::string>());
        }
        return out;
    }

    double score(const std::string& statement, const std::string& reference,
                 const std::string& criterion) override {
        nlohmann::json payload{{"mode", "score"},
                               {"statement", statement},
                               {"reference", reference},
                               {"criterion", criterion}};
        auto reply = call(payload, "score");
        if (!reply["score"].is_number()) {
            raise(ErrorCode::UnparseableVerdict, "judge returned a non-numeric score");
        }
        return snap_judge_score(reply["score"].get<double>());
    }

private:
    nlohmann::json call(const nlohmann::json& payload, const std::string& required_key) {
        auto prompt_template = load_judge_template();
        nlohmann::json current = payload;
        std::string last_error;
        for (int attempt = 0; attempt < 2; ++attempt) {
            std::string prompt = assemble::render_prompt(prompt_template, current);
            nlohmann::json body{{"role", "judge"}, {"prompt", prompt}};
            nlohmann::json envelope;
            try {
                envelope = parse::http_post_json(cfg_, "/v1/agent", body);
            } catch (const Error& e) {
                raise(ErrorCode::JudgeUnavailable, e.what());
            }
            std::string text = envelope.value("text", "");
            last_error.clear();
            nlohmann::json parsed;
            try {
                parsed = nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("not valid JSON: ") + e.what();
            }
            if (last_error.empty() && !parsed.contains(required_key)) {
                last_error = "missing key '" + required_key + "'";
            }
            if (last_error.empty()) return parsed;
            current = nlohmann::json{{"repair", true},
                                     {"original", payload},
                                     {"previous_reply", text},
                                     {"error", last_error}};
        }
        raise(ErrorCode::UnparseableVerdict, "judge reply invalid: " + last_error);
    }

    std::string load_judge_template() {
        if (template_.empty()) {
            auto path = prompts_dir_ / "judge.txt";
            std::ifstream in(path);
            if (!in) raise(ErrorCode::IoError, "missing prompt template " + path.string());
            std::ostringstream buf;
            buf << in.rdbuf();
            template_ = buf.str();
        }
        return template_;
    }

    parse::HttpBackendConfig cfg_;
    std::filesystem::path prompts_dir_;
    std::string template_;
};

}  // namespace ragkit::eval
