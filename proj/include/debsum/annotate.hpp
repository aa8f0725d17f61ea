#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "debsum/corpus.hpp"

namespace debsum {

/// Flat list of ontology terms, each a normalized token sequence of 1..5
/// tokens stored space-joined.
class Gazetteer {
public:
    static constexpr std::size_t kMaxTermTokens = 5;

    Gazetteer() = default;
    explicit Gazetteer(const std::vector<std::string>& raw_terms);

    bool contains(const std::string& term) const { return terms_.contains(term); }
    std::size_t size() const { return terms_.size(); }
    const std::set<std::string>& terms() const { return terms_; }
    std::size_t longest_term() const { return longest_; }

private:
    std::set<std::string> terms_;
    std::size_t longest_ = 0;
};

Gazetteer load_gazetteer(const std::filesystem::path& path);

struct TermAnnotation {
    std::string sentence_id;
    std::string term;       // space-joined tokens
    std::size_t start = 0;  // token index
    std::size_t end = 0;    // exclusive

    bool operator==(const TermAnnotation&) const = default;
};

/// Greedy left-to-right longest match over the sentence tokens.
std::vector<TermAnnotation> annotate_sentence(const Sentence& sentence, const Gazetteer& gazetteer);

class SynonymTable {
public:
    SynonymTable() = default;

    /// Adds one synonym group: every member becomes a synonym of every other.
    void add_group(const std::vector<std::string>& terms);
    void add_groups(const std::vector<std::vector<std::string>>& groups);

    /// Direct synonyms of a term (symmetric), empty if unknown.
    const std::set<std::string>& synonyms(const std::string& term) const;

    /// Every term connected to `term` in the synonym graph, including itself.
    std::set<std::string> equivalence_class(const std::string& term) const;

    /// Lexicographically smallest member of the equivalence class.
    const std::string& canonical(const std::string& term) const;

    bool empty() const { return graph_.empty(); }
    const std::map<std::string, std::set<std::string>>& graph() const { return graph_; }

private:
    void rebuild_canonical();

    std::map<std::string, std::set<std::string>> graph_;
    std::map<std::string, std::string> canonical_;
};

/// TSV: first column a term, remaining columns its synonyms. Blank and '#'
/// lines are skipped; a line with fewer than two non-empty columns is an error.
SynonymTable load_synonyms(const std::filesystem::path& path);

std::string canonical_label(const std::string& term, const SynonymTable& table);

}  // namespace debsum
