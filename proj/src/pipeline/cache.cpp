#include "arcqa/pipeline/cache.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "arcqa/error.hpp"
#include "arcqa/io/binary.hpp"

namespace arcqa::pipeline {

namespace {

constexpr std::string_view kHeader = "arcqa-retrieval-cache 1";

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

RetrievalCache::RetrievalCache(std::filesystem::path dir, std::uint64_t index_fingerprint)
    : dir_(std::move(dir)), fingerprint_(index_fingerprint) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
        throw IoError("cannot create cache dir " + dir_.string() + ": " + ec.message());
    }
}

std::filesystem::path RetrievalCache::entry_path(const std::string& query, std::size_t k) const {
    io::Fnv1a h;
    h.update_value(fingerprint_);
    h.update(query);
    h.update_value(static_cast<std::uint64_t>(k));
    return dir_ / (hex64(h.digest()) + ".rc");
}

// Entry layout (text):
//   arcqa-retrieval-cache 1
//   <fingerprint hex> <k> <query byte length>
//   <query bytes>
//   <n>
//   n lines: <doc_id> <score as raw 64-bit pattern in hex>
std::optional<std::vector<index::RetrievalResult>> RetrievalCache::lookup(const std::string& query,
                                                                          std::size_t k) const {
    const auto path = entry_path(query, k);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        misses_.fetch_add(1);
        return std::nullopt;
    }
    const auto reject = [&]() -> std::optional<std::vector<index::RetrievalResult>> {
        corrupt_.fetch_add(1);
        misses_.fetch_add(1);
        std::cerr << "warning: ignoring corrupt retrieval cache entry " << path.string() << '\n';
        return std::nullopt;
    };
    std::string header;
    if (!std::getline(in, header) || header != kHeader) {
        return reject();
    }
    std::string fp_hex;
    std::size_t stored_k = 0;
    std::size_t qlen = 0;
    if (!(in >> fp_hex >> stored_k >> qlen) || in.get() != '\n') {
        return reject();
    }
    if (fp_hex != hex64(fingerprint_) || stored_k != k || qlen != query.size()) {
        return reject();
    }
    std::string stored_query(qlen, '\0');
    in.read(stored_query.data(), static_cast<std::streamsize>(qlen));
    if (!in || stored_query != query || in.get() != '\n') {
        return reject();
    }
    std::size_t n = 0;
    if (!(in >> n) || n > k) {
        return reject();
    }
    std::vector<index::RetrievalResult> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t doc = 0;
        std::string bits;
        if (!(in >> doc >> bits) || bits.size() != 16) {
            return reject();
        }
        std::uint64_t raw = 0;
        try {
            std::size_t used = 0;
            raw = std::stoull(bits, &used, 16);
            if (used != bits.size()) {
                return reject();
            }
        } catch (const std::exception&) {
            return reject();
        }
        out.push_back({doc, std::bit_cast<double>(raw), i + 1});
    }
    std::string trailing;
    if (in >> trailing) {
        return reject();
    }
    hits_.fetch_add(1);
    return out;
}

void RetrievalCache::store(const std::string& query, std::size_t k,
                           const std::vector<index::RetrievalResult>& results) const {
    const auto path = entry_path(query, k);
    std::ostringstream body;
    body << kHeader << '\n' << hex64(fingerprint_) << ' ' << k << ' ' << query.size() << '\n'
         << query << '\n' << results.size() << '\n';
    for (const auto& r : results) {
        body << r.doc_id << ' ' << hex64(std::bit_cast<std::uint64_t>(r.score)) << '\n';
    }
    thread_local std::mt19937_64 rng(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    auto tmp = path;
    tmp += ".tmp" + hex64(rng());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << body.str();
        if (!out) {
            std::cerr << "warning: could not write retrieval cache entry " << tmp.string() << '\n';
            return;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
    }
}

std::vector<index::RetrievalResult> RetrievalCache::search(const index::Index& index, const std::string& query,
                                                           std::size_t k) const {
    if (auto hit = lookup(query, k)) {
        return std::move(*hit);
    }
    auto results = index.search(query, k);
    store(query, k, results);
    return results;
}

}  // namespace arcqa::pipeline
