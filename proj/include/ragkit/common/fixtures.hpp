#pragma once
// Content-addressed fixture lookup for mock backends: fixtures/<role>/<sha256>.json.
// A mock first consults the store; on a miss it falls back to its built-in
// deterministic behavior, so corpora without fixtures still ingest.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "ragkit/common/error.hpp"
#include "ragkit/common/hash.hpp"

namespace ragkit::util {

class FixtureStore {
public:
    FixtureStore() = default;
    explicit FixtureStore(std::filesystem::path root) : root_(std::move(root)) {}

    bool configured() const { return !root_.empty(); }
    const std::filesystem::path& root() const { return root_; }

    std::optional<nlohmann::json> lookup(const std::string& role,
                                         const std::string& content_hash) const {
        if (root_.empty()) return std::nullopt;
        auto path = root_ / role / (content_hash + ".json");
        std::ifstream in(path);
        if (!in) return std::nullopt;
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::IoError, "unreadable fixture " + path.string() + ": " + e.what());
        }
        return j;
    }

    void write(const std::string& role, const std::string& content_hash,
               const nlohmann::json& value) const {
        if (root_.empty()) raise(ErrorCode::InvalidConfig, "fixture store has no root");
        auto dir = root_ / role;
        std::filesystem::create_directories(dir);
        std::ofstream out(dir / (content_hash + ".json"));
        out << value.dump(2) << "\n";
        if (!out) raise(ErrorCode::IoError, "cannot write fixture under " + dir.string());
    }

private:
    std::filesystem::path root_;
};

}  // namespace ragkit::util
