#include "debsum/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "debsum/error.hpp"

namespace debsum {

using nlohmann::json;

namespace {

struct CodePoint {
    char32_t value;
    std::size_t length;  // bytes consumed
};

// Invalid sequences decode as U+FFFD one byte at a time.
CodePoint decode_utf8(std::string_view text, std::size_t pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
    const unsigned char lead = byte(pos);
    if (lead < 0x80) return {lead, 1};
    std::size_t length = 0;
    char32_t value = 0;
    if ((lead & 0xE0) == 0xC0) {
        length = 2;
        value = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        length = 3;
        value = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        length = 4;
        value = lead & 0x07;
    } else {
        return {0xFFFD, 1};
    }
    if (pos + length > text.size()) return {0xFFFD, 1};
    for (std::size_t i = 1; i < length; ++i) {
        const unsigned char cont = byte(pos + i);
        if ((cont & 0xC0) != 0x80) return {0xFFFD, 1};
        value = (value << 6) | (cont & 0x3F);
    }
    return {value, length};
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Letter and digit blocks for the scripts we expect to meet; everything else
// (punctuation, symbols such as the degree sign) separates tokens.
bool is_alnum(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
    if (cp >= 0x370 && cp <= 0x3FF) return cp != 0x37E && cp != 0x387;
    if (cp >= 0x400 && cp <= 0x52F) return true;
    if (cp >= 0x5D0 && cp <= 0x5EA) return true;
    if (cp >= 0x620 && cp <= 0x64A) return true;
    if (cp >= 0x660 && cp <= 0x669) return true;
    if (cp >= 0x3040 && cp <= 0x30FF) return true;
    if (cp >= 0x4E00 && cp <= 0x9FFF) return true;
    if (cp >= 0xAC00 && cp <= 0xD7A3) return true;
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    if (cp >= 0x100 && cp <= 0x17F && cp != 0x130 && cp != 0x131 && cp != 0x138 && cp != 0x149 &&
        cp != 0x17F) {
        // Latin Extended-A alternates upper/lower, with a parity flip at U+0139..U+0148.
        const bool flipped = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
        const bool upper = flipped ? (cp % 2 == 1) : (cp % 2 == 0);
        return upper ? cp + 1 : cp;
    }
    return cp;
}

const json& require(const json& node, const char* key, const std::string& where) {
    if (!node.is_object() || !node.contains(key)) {
        throw ValidationError(where + ": missing field '" + key + "'");
    }
    return node.at(key);
}

std::string require_string(const json& node, const char* key, const std::string& where) {
    const json& value = require(node, key, where);
    if (!value.is_string()) throw ValidationError(where + ": field '" + key + "' must be a string");
    std::string s = value.get<std::string>();
    return s;
}

const json& require_array(const json& node, const char* key, const std::string& where) {
    const json& value = require(node, key, where);
    if (!value.is_array()) throw ValidationError(where + ": field '" + key + "' must be an array");
    return value;
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::Agree ? "agree" : "disagree"; }

Side side_from_string(std::string_view text) {
    if (text == "agree") return Side::Agree;
    if (text == "disagree") return Side::Disagree;
    throw ValidationError("unknown side '" + std::string(text) + "' (expected agree|disagree)");
}

std::vector<TokenSpan> tokenize_with_offsets(std::string_view text) {
    std::vector<TokenSpan> out;
    std::string current;
    std::size_t begin = 0;
    std::size_t pos = 0;
    // A hyphen seen inside a token is held back until we know an
    // alphanumeric follows it.
    bool pending_hyphen = false;
    std::size_t hyphen_pos = 0;

    auto flush = [&](std::size_t end) {
        if (!current.empty()) out.push_back({current, begin, end});
        current.clear();
    };

    while (pos < text.size()) {
        const CodePoint cp = decode_utf8(text, pos);
        if (is_alnum(cp.value)) {
            if (current.empty()) begin = pos;
            if (pending_hyphen) {
                current.push_back('-');
                pending_hyphen = false;
            }
            append_utf8(current, to_lower(cp.value));
        } else if (cp.value == '-' && !current.empty() && !pending_hyphen) {
            pending_hyphen = true;
            hyphen_pos = pos;
        } else {
            flush(pending_hyphen ? hyphen_pos : pos);
            pending_hyphen = false;
        }
        pos += cp.length;
    }
    flush(pending_hyphen ? hyphen_pos : pos);
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    for (auto& span : tokenize_with_offsets(text)) tokens.push_back(std::move(span.token));
    return tokens;
}

std::size_t selection_count(std::size_t sentence_count, double ratio) {
    if (sentence_count == 0) return 0;
    // Guard against 0.2 * 10 evaluating to 2.0000000000000004.
    const double raw = ratio * static_cast<double>(sentence_count);
    auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    if (count < 1) count = 1;
    if (count > sentence_count) count = sentence_count;
    return count;
}

std::vector<DebateTopic> parse_corpus(const json& doc) {
    const json& topics_node = require_array(doc, "topics", "corpus");
    std::vector<DebateTopic> topics;
    std::unordered_set<std::string> topic_ids, comment_ids, sentence_ids;

    for (std::size_t t = 0; t < topics_node.size(); ++t) {
        const json& tnode = topics_node[t];
        const std::string twhere = "topic[" + std::to_string(t) + "]";
        DebateTopic topic;
        topic.id = require_string(tnode, "id", twhere);
        if (topic.id.empty()) throw ValidationError(twhere + ": empty id");
        const std::string tname = "topic '" + topic.id + "'";
        if (!topic_ids.insert(topic.id).second) throw ValidationError("duplicate " + tname);
        topic.title = require_string(tnode, "title", tname);

        const json& comments_node = require_array(tnode, "comments", tname);
        if (comments_node.empty()) throw ValidationError(tname + ": no comments");
        for (std::size_t c = 0; c < comments_node.size(); ++c) {
            const json& cnode = comments_node[c];
            const std::string cwhere = tname + " comment[" + std::to_string(c) + "]";
            Comment comment;
            comment.id = require_string(cnode, "id", cwhere);
            if (comment.id.empty()) throw ValidationError(cwhere + ": empty id");
            const std::string cname = "comment '" + comment.id + "'";
            if (!comment_ids.insert(comment.id).second) throw ValidationError("duplicate " + cname);
            try {
                comment.side = side_from_string(require_string(cnode, "side", cname));
            } catch (const ValidationError& e) {
                throw ValidationError(cname + ": " + e.what());
            }

            const json& sentences_node = require_array(cnode, "sentences", cname);
            if (sentences_node.empty()) throw ValidationError(cname + ": no sentences");
            for (std::size_t s = 0; s < sentences_node.size(); ++s) {
                const json& snode = sentences_node[s];
                const std::string swhere = cname + " sentence[" + std::to_string(s) + "]";
                Sentence sentence;
                sentence.id = require_string(snode, "id", swhere);
                if (sentence.id.empty()) throw ValidationError(swhere + ": empty id");
                const std::string sname = "sentence '" + sentence.id + "'";
                if (!sentence_ids.insert(sentence.id).second) throw ValidationError("duplicate " + sname);
                const json& pos = require(snode, "position", sname);
                if (!pos.is_number_integer()) throw ValidationError(sname + ": position must be an integer");
                sentence.position = pos.get<int>();
                if (sentence.position != static_cast<int>(s) + 1) {
                    throw ValidationError(sname + ": position " + std::to_string(sentence.position) +
                                          " breaks the contiguous 1..n numbering of " + cname);
                }
                sentence.text = require_string(snode, "text", sname);
                sentence.tokens = tokenize(sentence.text);
                comment.sentences.push_back(std::move(sentence));
            }
            topic.comments.push_back(std::move(comment));
        }
        topics.push_back(std::move(topic));
    }
    return topics;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::vector<DebateTopic> load_corpus(const std::filesystem::path& path) {
    return parse_corpus(read_json_file(path));
}

json corpus_to_json(const std::vector<DebateTopic>& topics) {
    json tarr = json::array();
    for (const auto& topic : topics) {
        json carr = json::array();
        for (const auto& comment : topic.comments) {
            json sarr = json::array();
            for (const auto& s : comment.sentences) {
                sarr.push_back({{"id", s.id}, {"position", s.position}, {"text", s.text}});
            }
            carr.push_back({{"id", comment.id}, {"side", to_string(comment.side)}, {"sentences", sarr}});
        }
        tarr.push_back({{"id", topic.id}, {"title", topic.title}, {"comments", carr}});
    }
    return json{{"topics", tarr}};
}

GoldSet parse_gold(const json& doc, const std::vector<DebateTopic>& corpus) {
    std::map<std::string, const Comment*> comments;
    std::vector<std::string> comment_order;
    for (const auto& topic : corpus) {
        for (const auto& comment : topic.comments) {
            comments.emplace(comment.id, &comment);
            comment_order.push_back(comment.id);
        }
    }

    const json& anns = require_array(doc, "annotations", "gold");
    std::map<std::string, std::map<std::string, GoldAnnotation>> grouped;
    GoldSet gold;
    for (std::size_t i = 0; i < anns.size(); ++i) {
        const json& node = anns[i];
        const std::string where = "annotation[" + std::to_string(i) + "]";
        GoldAnnotation ann;
        ann.annotator_id = require_string(node, "annotator_id", where);
        ann.comment_id = require_string(node, "comment_id", where);
        const auto it = comments.find(ann.comment_id);
        if (it == comments.end()) {
            throw ValidationError(where + ": unknown comment '" + ann.comment_id + "'");
        }
        const Comment& comment = *it->second;
        for (const auto& sid : require_array(node, "selected", where)) {
            if (!sid.is_string()) throw ValidationError(where + ": selected ids must be strings");
            const auto id = sid.get<std::string>();
            const bool known = std::any_of(comment.sentences.begin(), comment.sentences.end(),
                                           [&](const Sentence& s) { return s.id == id; });
            if (!known) {
                throw ValidationError(where + ": sentence '" + id + "' is not in comment '" +
                                      ann.comment_id + "'");
            }
            ann.selected_sentence_ids.insert(id);
        }
        const std::size_t expected = selection_count(comment.sentences.size());
        if (ann.selected_sentence_ids.size() != expected) {
            gold.warnings.push_back("annotator '" + ann.annotator_id + "' selected " +
                                    std::to_string(ann.selected_sentence_ids.size()) +
                                    " sentences of comment '" + ann.comment_id + "' (expected " +
                                    std::to_string(expected) + ")");
        }
        auto& slot = grouped[ann.comment_id];
        if (slot.contains(ann.annotator_id)) {
            throw ValidationError(where + ": duplicate annotation by '" + ann.annotator_id +
                                  "' for comment '" + ann.comment_id + "'");
        }
        slot.emplace(ann.annotator_id, std::move(ann));
    }
    for (const auto& cid : comment_order) {
        const auto it = grouped.find(cid);
        if (it == grouped.end()) continue;
        for (auto& [annotator, ann] : it->second) gold.annotations.push_back(std::move(ann));
    }
    return gold;
}

GoldSet load_gold(const std::filesystem::path& path, const std::vector<DebateTopic>& corpus) {
    return parse_gold(read_json_file(path), corpus);
}

json gold_to_json(const GoldSet& gold) {
    json arr = json::array();
    for (const auto& ann : gold.annotations) {
        arr.push_back({{"annotator_id", ann.annotator_id},
                       {"comment_id", ann.comment_id},
                       {"selected", ann.selected_sentence_ids}});
    }
    return json{{"annotations", arr}};
}

}  // namespace debsum
