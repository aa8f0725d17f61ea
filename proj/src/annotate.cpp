#include "debsum/annotate.hpp"

#include <fstream>
#include <functional>
#include <numeric>

#include "debsum/error.hpp"
#include "debsum/lexicon.hpp"

namespace debsum {

Gazetteer::Gazetteer(const std::vector<std::string>& raw_terms) {
    for (const auto& raw : raw_terms) {
        auto term = normalize_term(raw);
        if (term.empty()) continue;
        const std::size_t length = split_term(term).size();
        if (length > kMaxTermTokens) {
            throw ValidationError("gazetteer term '" + raw + "' has " + std::to_string(length) +
                                  " tokens (max " + std::to_string(kMaxTermTokens) + ")");
        }
        longest_ = std::max(longest_, length);
        terms_.insert(std::move(term));
    }
}

Gazetteer load_gazetteer(const std::filesystem::path& path) {
    Gazetteer gazetteer(read_lexicon_lines(path));
    if (gazetteer.size() == 0) throw ValidationError(path.string() + ": gazetteer has no terms");
    return gazetteer;
}

std::vector<TermAnnotation> annotate_sentence(const Sentence& sentence, const Gazetteer& gazetteer) {
    std::vector<TermAnnotation> out;
    const auto& tokens = sentence.tokens;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t matched = 0;
        std::string candidate;
        const std::size_t limit = std::min(gazetteer.longest_term(), tokens.size() - i);
        for (std::size_t len = 1; len <= limit; ++len) {
            if (len > 1) candidate.push_back(' ');
            candidate += tokens[i + len - 1];
            if (gazetteer.contains(candidate)) matched = len;
        }
        if (matched == 0) {
            ++i;
            continue;
        }
        std::string term = tokens[i];
        for (std::size_t k = 1; k < matched; ++k) term += ' ' + tokens[i + k];
        out.push_back({sentence.id, std::move(term), i, i + matched});
        i += matched;
    }
    return out;
}

void SynonymTable::add_group(const std::vector<std::string>& terms) { add_groups({terms}); }

void SynonymTable::add_groups(const std::vector<std::vector<std::string>>& groups) {
    for (const auto& terms : groups) {
        for (const auto& a : terms) {
            auto& entry = graph_[a];
            for (const auto& b : terms) {
                if (a != b) entry.insert(b);
            }
        }
    }
    rebuild_canonical();
}

const std::set<std::string>& SynonymTable::synonyms(const std::string& term) const {
    static const std::set<std::string> none;
    const auto it = graph_.find(term);
    return it == graph_.end() ? none : it->second;
}

std::set<std::string> SynonymTable::equivalence_class(const std::string& term) const {
    std::set<std::string> seen{term};
    std::vector<std::string> stack{term};
    while (!stack.empty()) {
        const std::string current = std::move(stack.back());
        stack.pop_back();
        for (const auto& next : synonyms(current)) {
            if (seen.insert(next).second) stack.push_back(next);
        }
    }
    return seen;
}

const std::string& SynonymTable::canonical(const std::string& term) const {
    const auto it = canonical_.find(term);
    return it == canonical_.end() ? term : it->second;
}

void SynonymTable::rebuild_canonical() {
    // Union-find over the term graph; the representative is the smallest term.
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    for (const auto& [term, _] : graph_) {
        index.emplace(term, names.size());
        names.push_back(term);
    }
    std::vector<std::size_t> parent(names.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [term, syns] : graph_) {
        for (const auto& s : syns) {
            auto a = find(index.at(term)), b = find(index.at(s));
            // names is sorted, so the smaller index is the smaller term.
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    canonical_.clear();
    for (std::size_t i = 0; i < names.size(); ++i) canonical_[names[i]] = names[find(i)];
}

SynonymTable load_synonyms(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<std::vector<std::string>> groups;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line[line.find_first_not_of(" \t")] == '#') continue;

        std::vector<std::string> group;
        std::size_t start = 0;
        while (true) {
            const auto tab = line.find('\t', start);
            const auto column = line.substr(start, tab == std::string::npos ? std::string::npos : tab - start);
            auto term = normalize_term(column);
            if (term.empty()) {
                throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": empty column");
            }
            group.push_back(std::move(term));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (group.size() < 2) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected a term and at least one tab-separated synonym");
        }
        groups.push_back(std::move(group));
    }
    SynonymTable table;
    table.add_groups(groups);
    return table;
}

std::string canonical_label(const std::string& term, const SynonymTable& table) {
    return table.canonical(term);
}

}  // namespace debsum
