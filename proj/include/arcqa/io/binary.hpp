#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "arcqa/error.hpp"

namespace arcqa::io {

// Native-endian binary streams for the on-disk artifacts. Files are only
// required to round-trip on the build that wrote them.

class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    template <typename T>
        requires std::is_arithmetic_v<T>
    void put(T value) {
        out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
    }

    void put_string(std::string_view s) {
        put<std::uint64_t>(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

    template <typename T>
        requires std::is_arithmetic_v<T>
    void put_vector(const std::vector<T>& v) {
        put<std::uint64_t>(v.size());
        out_.write(reinterpret_cast<const char*>(v.data()),
                   static_cast<std::streamsize>(v.size() * sizeof(T)));
    }

    void put_magic(std::string_view magic, std::uint32_t version) {
        out_.write(magic.data(), static_cast<std::streamsize>(magic.size()));
        put(version);
    }

private:
    std::ostream& out_;
};

class BinaryReader {
public:
    BinaryReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    template <typename T>
        requires std::is_arithmetic_v<T>
    T get() {
        T value{};
        in_.read(reinterpret_cast<char*>(&value), sizeof(T));
        check("value");
        return value;
    }

    std::string get_string() {
        const auto n = get_size(1);
        std::string s(n, '\0');
        in_.read(s.data(), static_cast<std::streamsize>(n));
        check("string");
        return s;
    }

    template <typename T>
        requires std::is_arithmetic_v<T>
    std::vector<T> get_vector() {
        const auto n = get_size(sizeof(T));
        std::vector<T> v(n);
        in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
        check("array");
        return v;
    }

    /// Reads a length prefix and rejects values that cannot fit in the file.
    std::uint64_t get_size(std::size_t elem_bytes) {
        const auto n = get<std::uint64_t>();
        if (elem_bytes > 0 && n > kMaxBytes / elem_bytes) {
            fail("implausible length " + std::to_string(n));
        }
        return n;
    }

    std::uint32_t expect_magic(std::string_view magic) {
        std::string got(magic.size(), '\0');
        in_.read(got.data(), static_cast<std::streamsize>(got.size()));
        if (!in_ || got != magic) {
            fail("bad magic header (expected " + std::string(magic) + ")");
        }
        return get<std::uint32_t>();
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw IoError(source_ + ": " + what);
    }

    void expect_eof() {
        if (in_.peek() != std::char_traits<char>::eof()) {
            fail("trailing bytes after payload");
        }
    }

private:
    static constexpr std::uint64_t kMaxBytes = std::uint64_t{1} << 40;

    void check(const char* what) {
        if (!in_) {
            fail(std::string("truncated while reading ") + what);
        }
    }

    std::istream& in_;
    std::string source_;
};

/// 64-bit FNV-1a, stable across runs and platforms.
class Fnv1a {
public:
    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001b3ULL;
        }
    }
    void update(std::string_view s) {
        const std::uint64_t n = s.size();
        update(&n, sizeof n);
        update(s.data(), s.size());
    }
    template <typename T>
        requires std::is_arithmetic_v<T>
    void update_value(T v) {
        update(&v, sizeof v);
    }
    [[nodiscard]] std::uint64_t digest() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace arcqa::io
