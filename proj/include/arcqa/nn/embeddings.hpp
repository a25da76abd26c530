#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "arcqa/nn/params.hpp"

namespace arcqa::io {
class BinaryWriter;
class BinaryReader;
}  // namespace arcqa::io

namespace arcqa::nn {

/// Frozen lookup table keyed by string (word or entity id) with one shared
/// fallback vector for unknown keys.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(Eigen::Index dim, Vec fallback);

    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return keys_.size(); }
    [[nodiscard]] bool contains(std::string_view key) const;
    [[nodiscard]] const Vec& fallback() const { return fallback_; }

    /// Row for key, or the fallback vector.
    [[nodiscard]] const Vec& lookup(std::string_view key) const;

    void insert(std::string key, Vec vector);
    void set_fallback(Vec fallback);

    /// Reads `key v1 ... vd` lines. An optional word2vec-style "count dim"
    /// header line is skipped. Throws ConfigError when a row's width differs
    /// from the first row or from expected_dim.
    /// The fallback starts as zeros; callers set it explicitly.
    static EmbeddingTable load_text(const std::filesystem::path& path,
                                    std::optional<Eigen::Index> expected_dim = std::nullopt);

    void write(io::BinaryWriter& w) const;
    static EmbeddingTable read(io::BinaryReader& r);

    friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b);

private:
    Eigen::Index dim_ = 0;
    std::unordered_map<std::string, std::size_t> ids_;
    std::vector<std::string> keys_;
    std::vector<Vec> rows_;
    Vec fallback_;
};

}  // namespace arcqa::nn
