#include "arcqa/rewriter/kg.hpp"

#include <fstream>

#include "arcqa/error.hpp"
#include "arcqa/text/tokenize.hpp"

namespace arcqa::rewriter {

void KgLexicon::add(const std::string& surface, std::string entity_id) {
    const auto tokens = text::normalize(surface);
    if (tokens.empty() || tokens.size() > kMaxPhraseTokens) {
        throw InvalidArgument("kg lexicon: surface form '" + surface + "' must have 1-3 tokens");
    }
    entries_[text::join(tokens)] = std::move(entity_id);
}

KgLexicon KgLexicon::load_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open kg lexicon " + path.string());
    }
    KgLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab + 1 >= line.size()) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected surface_form<TAB>entity_id");
        }
        try {
            lex.add(line.substr(0, tab), line.substr(tab + 1));
        } catch (const InvalidArgument& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return lex;
}

const std::string* KgLexicon::find(const std::string& phrase) const {
    auto it = entries_.find(phrase);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<LinkSpan> link_entities(const std::vector<std::string>& tokens, const KgLexicon& lexicon) {
    std::vector<LinkSpan> spans;
    if (lexicon.empty()) {
        return spans;
    }
    std::size_t pos = 0;
    while (pos < tokens.size()) {
        bool matched = false;
        const std::size_t longest = std::min(KgLexicon::kMaxPhraseTokens, tokens.size() - pos);
        for (std::size_t len = longest; len >= 1; --len) {
            std::string phrase = tokens[pos];
            for (std::size_t k = 1; k < len; ++k) {
                phrase += ' ';
                phrase += tokens[pos + k];
            }
            if (const auto* id = lexicon.find(phrase)) {
                spans.push_back({pos, pos + len, *id});
                pos += len;
                matched = true;
                break;
            }
        }
        if (!matched) {
            ++pos;
        }
    }
    return spans;
}

}  // namespace arcqa::rewriter
