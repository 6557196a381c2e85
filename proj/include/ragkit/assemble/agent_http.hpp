#pragma once
// HTTP-backed agent. The prompt for each role lives in a template file
// (prompts/<role>.txt) whose "{{input}}" marker is replaced with the request
// payload; the rendered prompt goes to POST /v1/agent as
// {"role": ..., "prompt": ...} and the reply body is {"text": ...}.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ragkit/assemble/agent.hpp"
#include "ragkit/common/error.hpp"
#include "ragkit/parse/http.hpp"

namespace ragkit::assemble {

inline std::string load_prompt_template(const std::filesystem::path& prompts_dir, AgentRole role) {
    auto path = prompts_dir / (std::string(role_name(role)) + ".txt");
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "missing prompt template " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string render_prompt(const std::string& template_text, const nlohmann::json& payload) {
    return util::replace_all(template_text, "{{input}}", payload.dump(2));
}

class HttpAgent : public Agent {
public:
    HttpAgent(parse::HttpBackendConfig cfg, std::filesystem::path prompts_dir)
        : cfg_(std::move(cfg)), prompts_dir_(std::move(prompts_dir)) {}

    AgentResponse respond(const AgentRequest& request) override {
        auto prompt = render_prompt(load_prompt_template(prompts_dir_, request.role),
                                    request.payload);
        nlohmann::json body{{"role", role_name(request.role)}, {"prompt", prompt}};
        try {
            auto j = parse::http_post_json(cfg_, "/v1/agent", body);
            return {j.value("text", "")};
        } catch (const Error& e) {
            if (e.code() == ErrorCode::IoError) throw;
            raise(ErrorCode::AgentUnavailable, e.what());
        }
    }

private:
    parse::HttpBackendConfig cfg_;
    std::filesystem::path prompts_dir_;
};

}  // namespace ragkit::assemble
