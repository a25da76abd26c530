#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace arcqa::text {

struct Token {
    std::string surface;
    std::string norm;
    // Byte offsets [start, end) into the source text.
    std::size_t start = 0;
    std::size_t end = 0;
};

/// Splits on whitespace and on every ASCII character that is not a letter or
/// digit, then lowercases. Bytes >= 0x80 are treated as word characters so
/// UTF-8 sequences are never cut.
std::vector<Token> tokenize(std::string_view text);

/// Convenience: only the normalized forms.
std::vector<std::string> normalize(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep = " ");

}  // namespace arcqa::text
