#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace debsum {

enum class Side { Agree, Disagree };

std::string_view to_string(Side side);
Side side_from_string(std::string_view text);  // throws ValidationError

struct Sentence {
    std::string id;
    int position = 0;  // 1-based within the comment
    std::string text;
    std::vector<std::string> tokens;

    bool operator==(const Sentence&) const = default;
};

struct Comment {
    std::string id;
    Side side = Side::Agree;
    std::vector<Sentence> sentences;

    bool operator==(const Comment&) const = default;
};

struct DebateTopic {
    std::string id;
    std::string title;
    std::vector<Comment> comments;

    bool operator==(const DebateTopic&) const = default;
};

struct GoldAnnotation {
    std::string annotator_id;
    std::string comment_id;
    std::set<std::string> selected_sentence_ids;
};

struct GoldSet {
    std::vector<GoldAnnotation> annotations;  // grouped by comment (corpus order), then annotator
    std::vector<std::string> warnings;
};

/// Lowercased Unicode-alphanumeric runs; a hyphen is kept only when both of
/// its neighbours are alphanumeric.
std::vector<std::string> tokenize(std::string_view text);

struct TokenSpan {
    std::string token;
    std::size_t begin = 0;  // byte offsets into the source text
    std::size_t end = 0;
};

std::vector<TokenSpan> tokenize_with_offsets(std::string_view text);

/// Number of sentences a ratio-based selection keeps: ceil(ratio * n), at least 1.
std::size_t selection_count(std::size_t sentence_count, double ratio = 0.2);

std::vector<DebateTopic> parse_corpus(const nlohmann::json& doc);
std::vector<DebateTopic> load_corpus(const std::filesystem::path& path);
nlohmann::json corpus_to_json(const std::vector<DebateTopic>& topics);

GoldSet parse_gold(const nlohmann::json& doc, const std::vector<DebateTopic>& corpus);
GoldSet load_gold(const std::filesystem::path& path, const std::vector<DebateTopic>& corpus);
nlohmann::json gold_to_json(const GoldSet& gold);

/// Reads a whole file as JSON; ConfigError if unreadable, ValidationError if
/// not parseable.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace debsum
