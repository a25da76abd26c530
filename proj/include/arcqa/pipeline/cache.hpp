#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arcqa/index/inverted_index.hpp"

namespace arcqa::pipeline {

/// On-disk memo of search results keyed by (index fingerprint, query string,
/// depth). One file per key; writes go through a temp file and rename, so
/// concurrent writers of the same key are safe.
///
/// A cache hit returns exactly what search() returned when the entry was
/// written. Unreadable or mismatching entries count as misses and are
/// overwritten by the caller's store().
class RetrievalCache {
public:
    RetrievalCache(std::filesystem::path dir, std::uint64_t index_fingerprint);

    [[nodiscard]] std::optional<std::vector<index::RetrievalResult>> lookup(const std::string& query,
                                                                            std::size_t k) const;
    void store(const std::string& query, std::size_t k,
               const std::vector<index::RetrievalResult>& results) const;

    /// Cached search: lookup, else compute with index.search and store.
    [[nodiscard]] std::vector<index::RetrievalResult> search(const index::Index& index,
                                                             const std::string& query, std::size_t k) const;

    [[nodiscard]] std::filesystem::path entry_path(const std::string& query, std::size_t k) const;

    [[nodiscard]] std::size_t hits() const { return hits_.load(); }
    [[nodiscard]] std::size_t misses() const { return misses_.load(); }
    [[nodiscard]] std::size_t corrupt() const { return corrupt_.load(); }

private:
    std::filesystem::path dir_;
    std::uint64_t fingerprint_;
    mutable std::atomic<std::size_t> hits_{0};
    mutable std::atomic<std::size_t> misses_{0};
    mutable std::atomic<std::size_t> corrupt_{0};
};

}  // namespace arcqa::pipeline
