#include "arcqa/nn/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "arcqa/error.hpp"
#include "arcqa/io/binary.hpp"

namespace arcqa::nn {

EmbeddingTable::EmbeddingTable(Eigen::Index dim, Vec fallback) : dim_(dim), fallback_(std::move(fallback)) {
    if (fallback_.size() != dim_) {
        throw ConfigError("embedding fallback vector has wrong dimension");
    }
}

bool EmbeddingTable::contains(std::string_view key) const {
    return ids_.find(std::string(key)) != ids_.end();
}

const Vec& EmbeddingTable::lookup(std::string_view key) const {
    auto it = ids_.find(std::string(key));
    return it == ids_.end() ? fallback_ : rows_[it->second];
}

void EmbeddingTable::insert(std::string key, Vec vector) {
    if (vector.size() != dim_) {
        throw ConfigError("embedding for '" + key + "' has dim " + std::to_string(vector.size()) +
                          ", table dim is " + std::to_string(dim_));
    }
    auto [it, inserted] = ids_.emplace(key, rows_.size());
    if (!inserted) {
        rows_[it->second] = std::move(vector);
        return;
    }
    keys_.push_back(std::move(key));
    rows_.push_back(std::move(vector));
}

void EmbeddingTable::set_fallback(Vec fallback) {
    if (fallback.size() != dim_) {
        throw ConfigError("embedding fallback vector has wrong dimension");
    }
    fallback_ = std::move(fallback);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    // from_chars for double is available in libstdc++ 11.
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool is_integer(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

EmbeddingTable EmbeddingTable::load_text(const std::filesystem::path& path,
                                         std::optional<Eigen::Index> expected_dim) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open embedding file " + path.string());
    }
    EmbeddingTable table;
    bool have_dim = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto fields = split_ws(line);
        if (fields.empty()) {
            continue;
        }
        if (line_no == 1 && fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) {
            continue;
        }
        const auto dim = static_cast<Eigen::Index>(fields.size() - 1);
        if (dim == 0) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": entry has no vector");
        }
        if (!have_dim) {
            if (expected_dim && *expected_dim != dim) {
                throw ConfigError(path.string() + ": embedding dim " + std::to_string(dim) +
                                  " does not match configured dim " + std::to_string(*expected_dim));
            }
            table.dim_ = dim;
            table.fallback_ = Vec::Zero(dim);
            have_dim = true;
        } else if (dim != table.dim_) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": row has dim " +
                              std::to_string(dim) + ", expected " + std::to_string(table.dim_));
        }
        Vec v(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            if (!parse_double(fields[static_cast<std::size_t>(k) + 1], v[k])) {
                throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                                 std::string(fields[static_cast<std::size_t>(k) + 1]) + "'");
            }
        }
        table.insert(std::string(fields[0]), std::move(v));
    }
    if (!have_dim) {
        throw ParseError(path.string() + ": embedding file is empty");
    }
    return table;
}

void EmbeddingTable::write(io::BinaryWriter& w) const {
    w.put<std::int64_t>(dim_);
    w.put<std::uint64_t>(keys_.size());
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        w.put_string(keys_[i]);
        for (Eigen::Index k = 0; k < dim_; ++k) {
            w.put(rows_[i][k]);
        }
    }
    for (Eigen::Index k = 0; k < dim_; ++k) {
        w.put(fallback_[k]);
    }
}

EmbeddingTable EmbeddingTable::read(io::BinaryReader& r) {
    EmbeddingTable table;
    const auto dim = r.get<std::int64_t>();
    if (dim < 0 || dim > (1 << 20)) {
        r.fail("implausible embedding dim");
    }
    table.dim_ = dim;
    const auto n = r.get_size(static_cast<std::size_t>(dim) * sizeof(double) + 8);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto key = r.get_string();
        Vec v(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            v[k] = r.get<double>();
        }
        table.insert(std::move(key), std::move(v));
    }
    table.fallback_ = Vec(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        table.fallback_[k] = r.get<double>();
    }
    return table;
}

bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    if (a.dim_ != b.dim_ || a.keys_ != b.keys_ || a.fallback_.size() != b.fallback_.size()) {
        return false;
    }
    return a.rows_ == b.rows_ && a.fallback_ == b.fallback_;
}

}  // namespace arcqa::nn
