#pragma once
// In-memory vector store with exhaustive cosine scan - at the corpus sizes
// this engine targets (thousands of records), a linear scan beats any index
// structure and is trivially exact. Vectors are L2-normalized at upsert so a
// query is a single dot product per record.
//
// Persistence is one JSONL file per namespace (<namespace>.index.jsonl),
// records sorted by node_id.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragkit/common/error.hpp"

namespace ragkit::index {

// Serialized metadata above this limit is rejected: oversized payloads are a
// symptom of whole documents being stuffed into record metadata.
inline constexpr std::size_t kMaxMetadataBytes = 40960;

struct VectorRecord {
    std::string node_id;
    std::vector<double> vector;
    std::string source_text;
    nlohmann::json metadata = nlohmann::json::object();
};

struct QueryHit {
    std::string node_id;
    double score = 0.0;
    std::string source_text;
    nlohmann::json metadata = nlohmann::json::object();
};

class VectorStore {
public:
    using Filter = std::function<bool(const VectorRecord&)>;

    struct NamespaceStats {
        std::size_t records = 0;
        int dim = 0;
    };

    explicit VectorStore(std::size_t metadata_limit_bytes = kMaxMetadataBytes)
        : metadata_limit_(metadata_limit_bytes) {
        if (metadata_limit_ == 0) {
            raise(ErrorCode::InvalidConfig, "metadata limit must be positive");
        }
    }

    // Inserts or replaces by node_id. The stored vector is L2-normalized.
    void upsert(const std::string& ns, VectorRecord record) {
        if (record.node_id.empty()) raise(ErrorCode::InvalidConfig, "record without node_id");
        if (record.vector.empty()) {
            raise(ErrorCode::DimensionMismatch, record.node_id + ": empty vector");
        }
        std::size_t metadata_bytes = record.metadata.dump().size();
        if (metadata_bytes > metadata_limit_) {
            raise(ErrorCode::MetadataTooLarge,
                  record.node_id + ": metadata is " + std::to_string(metadata_bytes) +
                      " bytes, limit " + std::to_string(metadata_limit_));
        }
        auto& space = spaces_[ns];
        if (!space.empty()) {
            std::size_t dim = space.begin()->second.vector.size();
            if (record.vector.size() != dim) {
                raise(ErrorCode::DimensionMismatch,
                      record.node_id + ": dim " + std::to_string(record.vector.size()) +
                          ", namespace '" + ns + "' holds dim " + std::to_string(dim));
            }
        }
        normalize(record.vector);
        space[record.node_id] = std::move(record);
    }

    std::vector<QueryHit> query(const std::string& ns, std::vector<double> vec, int k,
                                const Filter& filter = {}) const {
        if (k <= 0) raise(ErrorCode::InvalidConfig, "k must be positive");
        auto it = spaces_.find(ns);
        if (it == spaces_.end() || it->second.empty()) {
            raise(ErrorCode::EmptyIndex, "namespace '" + ns + "' holds no records");
        }
        const auto& space = it->second;
        std::size_t dim = space.begin()->second.vector.size();
        if (vec.size() != dim) {
            raise(ErrorCode::DimensionMismatch,
                  "query dim " + std::to_string(vec.size()) + ", namespace '" + ns +
                      "' holds dim " + std::to_string(dim));
        }
        normalize(vec);
        std::vector<QueryHit> hits;
        for (const auto& [id, rec] : space) {
            if (filter && !filter(rec)) continue;
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += vec[i] * rec.vector[i];
            hits.push_back({id, dot, rec.source_text, rec.metadata});
        }
        std::sort(hits.begin(), hits.end(), [](const QueryHit& a, const QueryHit& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.node_id < b.node_id;
        });
        if (hits.size() > std::size_t(k)) hits.resize(std::size_t(k));
        return hits;
    }

    bool remove(const std::string& ns, const std::string& node_id) {
        auto it = spaces_.find(ns);
        if (it == spaces_.end()) return false;
        bool erased = it->second.erase(node_id) > 0;
        if (it->second.empty()) spaces_.erase(it);
        return erased;
    }

    NamespaceStats stats(const std::string& ns) const {
        auto it = spaces_.find(ns);
        if (it == spaces_.end() || it->second.empty()) return {};
        return {it->second.size(), int(it->second.begin()->second.vector.size())};
    }

    std::vector<std::string> namespaces() const {
        std::vector<std::string> out;
        for (const auto& [ns, space] : spaces_) {
            if (!space.empty()) out.push_back(ns);
        }
        return out;
    }

    // Iteration in node_id order, for persistence and diagnostics.
    const std::map<std::string, VectorRecord>* records(const std::string& ns) const {
        auto it = spaces_.find(ns);
        return it == spaces_.end() ? nullptr : &it->second;
    }

    void save_namespace(const std::string& ns, const std::filesystem::path& dir) const {
        auto it = spaces_.find(ns);
        if (it == spaces_.end()) raise(ErrorCode::EmptyIndex, "namespace '" + ns + "' is empty");
        std::filesystem::create_directories(dir);
        auto path = dir / (ns + ".index.jsonl");
        std::ofstream out(path);
        if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
        for (const auto& [id, rec] : it->second) {
            nlohmann::json line{{"node_id", rec.node_id},
                                {"vector", rec.vector},
                                {"source_text", rec.source_text},
                                {"metadata", rec.metadata},
                                {"namespace", ns}};
            out << line.dump() << "\n";
        }
    }

    void load_namespace(const std::string& ns, const std::filesystem::path& dir) {
        auto path = dir / (ns + ".index.jsonl");
        std::ifstream in(path);
        if (!in) raise(ErrorCode::IoError, "cannot read " + path.string());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                raise(ErrorCode::IoError, path.string() + ": bad record: " + e.what());
            }
            VectorRecord rec;
            rec.node_id = j.at("node_id").get<std::string>();
            rec.vector = j.at("vector").get<std::vector<double>>();
            rec.source_text = j.at("source_text").get<std::string>();
            rec.metadata = j.value("metadata", nlohmann::json::object());
            upsert(j.value("namespace", ns), std::move(rec));
        }
    }

private:
    static void normalize(std::vector<double>& v) {
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return;
        for (double& x : v) x /= norm;
    }

    std::size_t metadata_limit_ = kMaxMetadataBytes;
    std::map<std::string, std::map<std::string, VectorRecord>> spaces_;
};

}  // namespace ragkit::index
