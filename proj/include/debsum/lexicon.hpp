#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace debsum {

/// Lines of a UTF-8 list file with surrounding whitespace trimmed; blank
/// lines and lines starting with '#' are skipped.
std::vector<std::string> read_lexicon_lines(const std::filesystem::path& path);

/// Each entry normalized through tokenize() and joined by single spaces.
std::set<std::string> load_token_set(const std::filesystem::path& path);

/// Normalized form of a multiword term: tokenize, then join with spaces.
std::string normalize_term(std::string_view text);

std::vector<std::string> split_term(const std::string& term);

}  // namespace debsum
