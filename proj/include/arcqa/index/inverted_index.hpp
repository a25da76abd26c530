#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "arcqa/index/bm25.hpp"

namespace arcqa::index {

using DocId = std::uint32_t;

struct Posting {
    DocId doc_id = 0;
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct RetrievalResult {
    DocId doc_id = 0;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based

    friend bool operator==(const RetrievalResult&, const RetrievalResult&) = default;
};

struct BuildOptions {
    // Number of contiguous input shards tokenized independently; 0 picks the
    // OpenMP thread count. The result never depends on this value.
    std::size_t shards = 0;
};

struct BuildReport {
    std::size_t indexed = 0;
    std::size_t skipped_empty = 0;
};

/// Immutable sentence-level inverted index with BM25 ranking.
///
/// Thread-safety: all const member functions may be called concurrently.
class Index {
public:
    Index() = default;

    [[nodiscard]] std::size_t doc_count() const { return doc_lengths_.size(); }
    [[nodiscard]] double avg_doc_len() const { return avg_doc_len_; }
    [[nodiscard]] const Bm25Params& params() const { return params_; }
    [[nodiscard]] std::span<const std::uint32_t> doc_lengths() const { return doc_lengths_; }
    [[nodiscard]] const std::string& doc_text(DocId id) const;
    [[nodiscard]] std::size_t vocabulary_size() const { return postings_.size(); }

    /// Empty span for unknown terms.
    [[nodiscard]] std::span<const Posting> postings(std::string_view term) const;

    /// Content hash of the index; changes whenever any scored quantity does.
    [[nodiscard]] std::uint64_t fingerprint() const { return fingerprint_; }

    /// BM25 score of one document against distinct query terms (duplicates
    /// count once). Throws InvalidArgument for doc_id >= doc_count().
    [[nodiscard]] double score(std::span<const std::string> query_terms, DocId doc_id) const;

    /// Top-k documents sharing at least one term with the query, ordered by
    /// (score desc, doc_id asc).
    [[nodiscard]] std::vector<RetrievalResult> search(std::string_view query, std::size_t k) const;
    [[nodiscard]] std::vector<RetrievalResult> search_terms(std::span<const std::string> terms,
                                                            std::size_t k) const;

    /// Sorted term list; used for persistence and tests.
    [[nodiscard]] std::vector<std::string> terms() const;

    friend bool operator==(const Index&, const Index&) = default;

private:
    friend class IndexBuilder;
    friend Index load_index(const std::filesystem::path&);

    void finalize();

    Bm25Params params_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> doc_lengths_;
    std::vector<std::string> doc_store_;
    double avg_doc_len_ = 0.0;
    std::uint64_t fingerprint_ = 0;
};

/// Builds in parallel: documents are tokenized per shard under OpenMP and the
/// shard-local postings are merged in shard order.
Index build_index(std::span<const std::string> docs, const Bm25Params& params,
                  const BuildOptions& options = {}, BuildReport* report = nullptr);

/// Single-threaded reference build. Produces an Index equal to build_index.
Index build_index_serial(std::span<const std::string> docs, const Bm25Params& params,
                         BuildReport* report = nullptr);

/// One sentence per line; trailing '\r' stripped.
std::vector<std::string> read_corpus(const std::filesystem::path& path);

/// Writes `dir/index.bin`, creating dir if needed.
void save_index(const Index& index, const std::filesystem::path& dir);
Index load_index(const std::filesystem::path& dir);

}  // namespace arcqa::index
