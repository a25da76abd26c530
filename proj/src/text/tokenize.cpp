#include "arcqa/text/tokenize.hpp"

namespace arcqa::text {

namespace {

bool is_word_byte(unsigned char c) {
    if (c >= 0x80) {
        return true;
    }
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) {
            ++j;
        }
        Token tok;
        tok.surface = std::string(text.substr(i, j - i));
        tok.norm.reserve(tok.surface.size());
        for (char c : tok.surface) {
            tok.norm.push_back(ascii_lower(c));
        }
        tok.start = i;
        tok.end = j;
        tokens.push_back(std::move(tok));
        i = j;
    }
    return tokens;
}

std::vector<std::string> normalize(std::string_view text) {
    std::vector<std::string> out;
    for (auto& tok : tokenize(text)) {
        out.push_back(std::move(tok.norm));
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out.append(sep);
        }
        out.append(parts[i]);
    }
    return out;
}

}  // namespace arcqa::text
