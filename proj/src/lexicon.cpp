#include "debsum/lexicon.hpp"

#include <fstream>

#include "debsum/corpus.hpp"
#include "debsum/error.hpp"

namespace debsum {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> read_lexicon_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

std::string normalize_term(std::string_view text) {
    std::string out;
    for (const auto& token : tokenize(text)) {
        if (!out.empty()) out.push_back(' ');
        out += token;
    }
    return out;
}

std::vector<std::string> split_term(const std::string& term) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= term.size()) {
        const auto space = term.find(' ', start);
        const auto end = space == std::string::npos ? term.size() : space;
        if (end > start) parts.push_back(term.substr(start, end - start));
        if (space == std::string::npos) break;
        start = space + 1;
    }
    return parts;
}

std::set<std::string> load_token_set(const std::filesystem::path& path) {
    std::set<std::string> entries;
    for (const auto& line : read_lexicon_lines(path)) {
        auto term = normalize_term(line);
        if (!term.empty()) entries.insert(std::move(term));
    }
    return entries;
}

}  // namespace debsum
