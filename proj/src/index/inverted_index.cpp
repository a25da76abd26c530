#include "arcqa/index/inverted_index.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "arcqa/error.hpp"
#include "arcqa/io/binary.hpp"
#include "arcqa/text/tokenize.hpp"

namespace arcqa::index {

namespace {

constexpr std::string_view kMagic = "ARCQAIDX";
constexpr std::uint32_t kFormatVersion = 1;
constexpr const char* kIndexFile = "index.bin";

// Distinct terms in first-occurrence order. Scoring sums in this order so
// score() and search() agree to the last bit.
std::vector<std::string> distinct_terms(std::span<const std::string> terms) {
    std::vector<std::string> out;
    for (const auto& t : terms) {
        if (std::find(out.begin(), out.end(), t) == out.end()) {
            out.push_back(t);
        }
    }
    return out;
}

struct ShardResult {
    std::vector<std::string> texts;
    std::vector<std::uint32_t> lengths;
    std::unordered_map<std::string, std::vector<Posting>> postings;  // local doc ids
    std::size_t skipped = 0;
};

void index_documents(std::span<const std::string> docs, ShardResult& shard) {
    std::map<std::string, std::uint32_t> counts;
    for (const auto& doc : docs) {
        auto tokens = text::normalize(doc);
        if (tokens.empty()) {
            ++shard.skipped;
            continue;
        }
        const auto local_id = static_cast<DocId>(shard.texts.size());
        counts.clear();
        for (auto& t : tokens) {
            ++counts[t];
        }
        for (const auto& [term, tf] : counts) {
            shard.postings[term].push_back({local_id, tf});
        }
        shard.texts.push_back(doc);
        shard.lengths.push_back(static_cast<std::uint32_t>(tokens.size()));
    }
}

}  // namespace

void Bm25Params::validate() const {
    if (!(k1 >= 0.0) || !std::isfinite(k1)) {
        throw ConfigError("bm25: k1 must be finite and >= 0");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw ConfigError("bm25: b must lie in [0, 1]");
    }
}

class IndexBuilder {
public:
    static Index merge(std::vector<ShardResult>& shards, const Bm25Params& params,
                       BuildReport* report) {
        Index index;
        index.params_ = params;
        std::size_t skipped = 0;
        DocId offset = 0;
        for (auto& shard : shards) {
            for (auto& [term, list] : shard.postings) {
                auto& dst = index.postings_[term];
                for (const auto& p : list) {
                    dst.push_back({p.doc_id + offset, p.tf});
                }
            }
            offset += static_cast<DocId>(shard.texts.size());
            skipped += shard.skipped;
            std::move(shard.texts.begin(), shard.texts.end(), std::back_inserter(index.doc_store_));
            index.doc_lengths_.insert(index.doc_lengths_.end(), shard.lengths.begin(),
                                      shard.lengths.end());
        }
        if (index.doc_lengths_.empty()) {
            throw InvalidArgument("build_index: corpus has no non-empty documents");
        }
        index.finalize();
        if (report != nullptr) {
            report->indexed = index.doc_count();
            report->skipped_empty = skipped;
        }
        return index;
    }
};

void Index::finalize() {
    const std::uint64_t total =
        std::accumulate(doc_lengths_.begin(), doc_lengths_.end(), std::uint64_t{0});
    avg_doc_len_ = static_cast<double>(total) / static_cast<double>(doc_lengths_.size());

    io::Fnv1a h;
    h.update_value(params_.k1);
    h.update_value(params_.b);
    for (auto len : doc_lengths_) {
        h.update_value(len);
    }
    for (const auto& term : terms()) {
        h.update(term);
        for (const auto& p : postings_.at(term)) {
            h.update_value(p.doc_id);
            h.update_value(p.tf);
        }
    }
    for (const auto& text : doc_store_) {
        h.update(text);
    }
    fingerprint_ = h.digest();
}

const std::string& Index::doc_text(DocId id) const {
    if (id >= doc_store_.size()) {
        throw InvalidArgument("unknown doc_id " + std::to_string(id));
    }
    return doc_store_[id];
}

std::span<const Posting> Index::postings(std::string_view term) const {
    auto it = postings_.find(std::string(term));
    if (it == postings_.end()) {
        return {};
    }
    return it->second;
}

std::vector<std::string> Index::terms() const {
    std::vector<std::string> out;
    out.reserve(postings_.size());
    for (const auto& [term, _] : postings_) {
        out.push_back(term);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double Index::score(std::span<const std::string> query_terms, DocId doc_id) const {
    if (doc_id >= doc_count()) {
        throw InvalidArgument("bm25_score: unknown doc_id " + std::to_string(doc_id));
    }
    const double doc_len = doc_lengths_[doc_id];
    double total = 0.0;
    for (const auto& term : distinct_terms(query_terms)) {
        auto list = postings(term);
        auto it = std::lower_bound(list.begin(), list.end(), doc_id,
                                   [](const Posting& p, DocId id) { return p.doc_id < id; });
        if (it == list.end() || it->doc_id != doc_id) {
            continue;
        }
        const double idf = bm25_idf(doc_count(), list.size());
        total += idf * bm25_tf_part(params_, it->tf, doc_len, avg_doc_len_);
    }
    return total;
}

std::vector<RetrievalResult> Index::search(std::string_view query, std::size_t k) const {
    const auto terms = text::normalize(query);
    return search_terms(terms, k);
}

std::vector<RetrievalResult> Index::search_terms(std::span<const std::string> terms,
                                                 std::size_t k) const {
    if (k == 0) {
        throw InvalidArgument("search: k must be >= 1");
    }
    std::unordered_map<DocId, double> acc;
    for (const auto& term : distinct_terms(terms)) {
        auto list = postings(term);
        if (list.empty()) {
            continue;
        }
        const double idf = bm25_idf(doc_count(), list.size());
        for (const auto& p : list) {
            acc[p.doc_id] += idf * bm25_tf_part(params_, p.tf, doc_lengths_[p.doc_id], avg_doc_len_);
        }
    }
    std::vector<RetrievalResult> results;
    results.reserve(acc.size());
    for (const auto& [doc, s] : acc) {
        results.push_back({doc, s, 0});
    }
    const auto better = [](const RetrievalResult& a, const RetrievalResult& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.doc_id < b.doc_id;
    };
    const auto keep = std::min(k, results.size());
    std::partial_sort(results.begin(), results.begin() + static_cast<std::ptrdiff_t>(keep),
                      results.end(), better);
    results.resize(keep);
    for (std::size_t i = 0; i < results.size(); ++i) {
        results[i].rank = i + 1;
    }
    return results;
}

Index build_index(std::span<const std::string> docs, const Bm25Params& params,
                  const BuildOptions& options, BuildReport* report) {
    params.validate();
    std::size_t shard_count = options.shards;
    if (shard_count == 0) {
#ifdef _OPENMP
        shard_count = static_cast<std::size_t>(omp_get_max_threads());
#else
        shard_count = 1;
#endif
    }
    shard_count = std::max<std::size_t>(1, std::min(shard_count, docs.size()));
    std::vector<ShardResult> shards(shard_count);
    const std::size_t per = docs.size() / shard_count;
    const std::size_t extra = docs.size() % shard_count;

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(shard_count); ++s) {
        const auto su = static_cast<std::size_t>(s);
        const std::size_t begin = su * per + std::min(su, extra);
        const std::size_t len = per + (su < extra ? 1 : 0);
        index_documents(docs.subspan(begin, len), shards[su]);
    }
    return IndexBuilder::merge(shards, params, report);
}

Index build_index_serial(std::span<const std::string> docs, const Bm25Params& params,
                         BuildReport* report) {
    params.validate();
    std::vector<ShardResult> shards(1);
    index_documents(docs, shards[0]);
    return IndexBuilder::merge(shards, params, report);
}

std::vector<std::string> read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open corpus " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

// Layout of index.bin (version 1, native endianness):
//   magic "ARCQAIDX" | u32 version | f64 k1 | f64 b | u64 fingerprint
//   u64 N | u32[N] doc_lengths | string[N] doc texts
//   u64 V | V x (string term | u64 n | n x (u32 doc_id, u32 tf))
// Terms are written in sorted order.
void save_index(const Index& index, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto path = dir / kIndexFile;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    io::BinaryWriter w(out);
    w.put_magic(kMagic, kFormatVersion);
    w.put(index.params().k1);
    w.put(index.params().b);
    w.put(index.fingerprint());
    w.put<std::uint64_t>(index.doc_count());
    for (auto len : index.doc_lengths()) {
        w.put(len);
    }
    for (DocId d = 0; d < index.doc_count(); ++d) {
        w.put_string(index.doc_text(d));
    }
    const auto terms = index.terms();
    w.put<std::uint64_t>(terms.size());
    for (const auto& term : terms) {
        w.put_string(term);
        auto list = index.postings(term);
        w.put<std::uint64_t>(list.size());
        for (const auto& p : list) {
            w.put(p.doc_id);
            w.put(p.tf);
        }
    }
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

Index load_index(const std::filesystem::path& dir) {
    const auto path = dir / kIndexFile;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open index " + path.string() + " (missing file)");
    }
    io::BinaryReader r(in, path.string());
    const auto version = r.expect_magic(kMagic);
    if (version != kFormatVersion) {
        r.fail("unsupported index format version " + std::to_string(version));
    }
    Index index;
    index.params_.k1 = r.get<double>();
    index.params_.b = r.get<double>();
    const auto stored_fingerprint = r.get<std::uint64_t>();
    const auto n = r.get_size(sizeof(std::uint32_t));
    if (n == 0) {
        r.fail("index has no documents");
    }
    index.doc_lengths_.resize(n);
    for (auto& len : index.doc_lengths_) {
        len = r.get<std::uint32_t>();
        if (len == 0) {
            r.fail("zero-length document");
        }
    }
    index.doc_store_.resize(n);
    for (auto& text : index.doc_store_) {
        text = r.get_string();
    }
    const auto vocab = r.get_size(1);
    for (std::uint64_t t = 0; t < vocab; ++t) {
        auto term = r.get_string();
        const auto count = r.get_size(sizeof(Posting));
        std::vector<Posting> list(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            list[i].doc_id = r.get<DocId>();
            list[i].tf = r.get<std::uint32_t>();
            if (list[i].doc_id >= n || list[i].tf == 0 ||
                (i > 0 && list[i].doc_id <= list[i - 1].doc_id)) {
                r.fail("corrupt postings for term '" + term + "'");
            }
        }
        index.postings_.emplace(std::move(term), std::move(list));
    }
    r.expect_eof();
    index.finalize();
    if (index.fingerprint_ != stored_fingerprint) {
        r.fail("fingerprint mismatch (corrupt payload)");
    }
    return index;
}

}  // namespace arcqa::index
