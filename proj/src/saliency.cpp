#include "debsum/saliency.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "debsum/error.hpp"
#include "debsum/lexicon.hpp"

namespace debsum {

namespace {

constexpr std::size_t index_of(Feature f) { return static_cast<std::size_t>(f); }

// k*log(p) with the 0*log(0) = 0 convention.
double xlogy(double k, double p) { return k == 0.0 ? 0.0 : k * std::log(p); }

double binomial_log_likelihood(double k, double n, double p) {
    return xlogy(k, p) + xlogy(n - k, 1.0 - p);
}

// Cosine between a term-frequency vector and the indicator vector of `set`.
double cosine_to_set(const std::map<std::string, double>& tf, const std::set<std::string>& set) {
    if (tf.empty() || set.empty()) return 0.0;
    double dot = 0.0, norm2 = 0.0;
    for (const auto& [token, count] : tf) {
        norm2 += count * count;
        if (set.contains(token)) dot += count;
    }
    if (dot == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(norm2) * std::sqrt(static_cast<double>(set.size()))), 0.0, 1.0);
}

std::set<std::string> flatten_terms(const std::set<std::string>& terms) {
    std::set<std::string> tokens;
    for (const auto& term : terms) {
        for (auto& t : split_term(term)) tokens.insert(std::move(t));
    }
    return tokens;
}

std::optional<Eigen::VectorXd> mean_embedding(const std::vector<std::string>& tokens,
                                              const Embeddings& embeddings) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(embeddings.dim);
    int hits = 0;
    for (const auto& token : tokens) {
        const auto it = embeddings.vectors.find(token);
        if (it == embeddings.vectors.end()) continue;
        sum += it->second;
        ++hits;
    }
    if (hits == 0) return std::nullopt;
    return sum / hits;
}

}  // namespace

std::string_view to_string(Feature feature) {
    switch (feature) {
        case Feature::SP: return "SP";
        case Feature::SL: return "SL";
        case Feature::TT: return "TT";
        case Feature::CJ: return "CJ";
        case Feature::CosTps: return "COS_TPS";
        case Feature::CosCcts: return "COS_CCTS";
        case Feature::CosTts: return "COS_TTS";
        case Feature::CosStt: return "COS_STT";
        case Feature::CB: return "CB";
    }
    return "?";
}

Feature feature_from_string(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (Feature f : kAllFeatures) {
        if (to_string(f) == upper) return f;
    }
    throw ConfigError("unknown selection feature '" + std::string(text) + "'");
}

double FeatureVector::raw_value(Feature feature) const {
    return feature == Feature::CB ? cb : raw[index_of(feature)];
}

Embeddings load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    Embeddings emb;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::vector<std::string> parts;
        for (std::string f; fields >> f;) parts.push_back(f);
        if (parts.empty()) continue;
        if (line_no == 1 && parts.size() == 2 &&
            std::all_of(parts[0].begin(), parts[0].end(), ::isdigit) &&
            std::all_of(parts[1].begin(), parts[1].end(), ::isdigit)) {
            emb.dim = std::stoi(parts[1]);
            continue;
        }
        const int dim = static_cast<int>(parts.size()) - 1;
        if (dim < 1) throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": no vector values");
        if (emb.dim == 0) emb.dim = dim;
        if (dim != emb.dim) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(emb.dim) + " values, found " + std::to_string(dim));
        }
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) {
            try {
                std::size_t used = 0;
                v[i] = std::stod(parts[i + 1], &used);
                if (used != parts[i + 1].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                                      parts[i + 1] + "'");
            }
        }
        emb.vectors[normalize_term(parts[0])] = std::move(v);
    }
    if (emb.vectors.empty()) throw ValidationError(path.string() + ": no embedding vectors");
    return emb;
}

TokenCounts count_tokens(const std::vector<std::vector<std::string>>& documents,
                         const std::set<std::string>& stopwords) {
    TokenCounts counts;
    for (const auto& doc : documents) {
        for (const auto& token : doc) {
            if (!stopwords.contains(token)) ++counts[token];
        }
    }
    return counts;
}

double log_likelihood_ratio(long long fg_count, long long fg_total, long long bg_count,
                            long long bg_total) {
    const double k1 = static_cast<double>(fg_count), n1 = static_cast<double>(fg_total);
    const double k2 = static_cast<double>(bg_count), n2 = static_cast<double>(bg_total);
    const double p = (k1 + k2) / (n1 + n2);
    const double p1 = k1 / n1, p2 = k2 / n2;
    const double stat = 2.0 * (binomial_log_likelihood(k1, n1, p1) + binomial_log_likelihood(k2, n2, p2) -
                               binomial_log_likelihood(k1, n1, p) - binomial_log_likelihood(k2, n2, p));
    return std::max(stat, 0.0);
}

std::vector<TopicSignature> extract_topic_signatures(const TokenCounts& foreground,
                                                     const TokenCounts& background,
                                                     double threshold) {
    const auto total = [](const TokenCounts& counts) {
        return std::accumulate(counts.begin(), counts.end(), 0LL,
                               [](long long acc, const auto& kv) { return acc + kv.second; });
    };
    const long long fg_total = total(foreground), bg_total = total(background);
    if (fg_total == 0) throw ComputationError("topic signatures: empty foreground corpus");
    if (bg_total == 0) throw ComputationError("topic signatures: empty background corpus");
    if (!(threshold > 0.0)) throw ComputationError("topic signatures: threshold must be positive");

    std::vector<TopicSignature> out;
    for (const auto& [term, count] : foreground) {
        const auto it = background.find(term);
        const long long bg = it == background.end() ? 0 : it->second;
        // Only terms over-represented in the foreground signal the topic.
        if (static_cast<double>(count) / fg_total <= static_cast<double>(bg) / bg_total) continue;
        const double llr = log_likelihood_ratio(count, fg_total, bg, bg_total);
        if (llr >= threshold) out.push_back({term, llr});
    }
    std::sort(out.begin(), out.end(), [](const TopicSignature& a, const TopicSignature& b) {
        return a.llr != b.llr ? a.llr > b.llr : a.term < b.term;
    });
    return out;
}

FeatureVector score_features(const Sentence& sentence, const Comment& comment,
                             const DebateTopic& topic, const Lexicons& lexicons,
                             const std::vector<TopicSignature>& signatures) {
    FeatureVector fv;
    const double n = static_cast<double>(comment.sentences.size());
    fv.raw[index_of(Feature::SP)] = 1.0 - (sentence.position - 1) / n;
    fv.raw[index_of(Feature::SL)] = static_cast<double>(sentence.tokens.size());

    const auto title_tokens_vec = tokenize(topic.title);
    const std::set<std::string> title_tokens(title_tokens_vec.begin(), title_tokens_vec.end());
    const std::set<std::string> sentence_set(sentence.tokens.begin(), sentence.tokens.end());
    if (!title_tokens.empty()) {
        std::size_t shared = 0;
        for (const auto& t : title_tokens) shared += sentence_set.contains(t) ? 1 : 0;
        fv.raw[index_of(Feature::TT)] = static_cast<double>(shared) / title_tokens.size();
    }

    fv.raw[index_of(Feature::CJ)] =
        !sentence.tokens.empty() && lexicons.conjunctive_adverbs.contains(sentence.tokens.front()) ? 1.0 : 0.0;

    std::map<std::string, double> tf;
    for (const auto& t : sentence.tokens) tf[t] += 1.0;

    std::set<std::string> signature_terms;
    for (const auto& sig : signatures) signature_terms.insert(sig.term);
    fv.raw[index_of(Feature::CosTps)] = cosine_to_set(tf, signature_terms);
    fv.raw[index_of(Feature::CosCcts)] = cosine_to_set(tf, flatten_terms(lexicons.climate_terms));
    fv.raw[index_of(Feature::CosTts)] = cosine_to_set(tf, title_tokens);

    if (lexicons.embeddings) {
        fv.stt_available = true;
        const auto s = mean_embedding(sentence.tokens, *lexicons.embeddings);
        const auto t = mean_embedding(title_tokens_vec, *lexicons.embeddings);
        if (s && t && s->norm() > 0.0 && t->norm() > 0.0) {
            fv.raw[index_of(Feature::CosStt)] = std::clamp(s->dot(*t) / (s->norm() * t->norm()), -1.0, 1.0);
        }
    }
    return fv;
}

std::vector<FeatureVector> score_comment(const Comment& comment, const DebateTopic& topic,
                                         const Lexicons& lexicons,
                                         const std::vector<TopicSignature>& signatures) {
    std::vector<FeatureVector> scores;
    scores.reserve(comment.sentences.size());
    for (const auto& s : comment.sentences) {
        scores.push_back(score_features(s, comment, topic, lexicons, signatures));
    }
    for (std::size_t f = 0; f < kRawFeatureCount; ++f) {
        double lo = scores.front().raw[f], hi = lo;
        for (const auto& fv : scores) {
            lo = std::min(lo, fv.raw[f]);
            hi = std::max(hi, fv.raw[f]);
        }
        // A constant feature carries no ranking information within the comment.
        for (auto& fv : scores) fv.normalized[f] = hi > lo ? (fv.raw[f] - lo) / (hi - lo) : 0.0;
    }
    for (auto& fv : scores) {
        double sum = 0.0;
        int used = 0;
        for (std::size_t f = 0; f < kRawFeatureCount; ++f) {
            if (f == index_of(Feature::CosStt) && !fv.stt_available) continue;
            sum += fv.normalized[f];
            ++used;
        }
        fv.cb = used > 0 ? sum / used : 0.0;
    }
    return scores;
}

std::vector<std::string> select_salient(const Comment& comment,
                                        const std::vector<FeatureVector>& scores, Feature feature,
                                        double ratio) {
    if (scores.size() != comment.sentences.size()) {
        throw ComputationError("select_salient: expected one score per sentence of comment '" +
                               comment.id + "'");
    }
    if (!(ratio > 0.0 && ratio <= 1.0)) throw ComputationError("select_salient: ratio must be in (0, 1]");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a].raw_value(feature) > scores[b].raw_value(feature);
    });
    order.resize(selection_count(order.size(), ratio));
    std::sort(order.begin(), order.end());
    std::vector<std::string> ids;
    for (auto i : order) ids.push_back(comment.sentences[i].id);
    return ids;
}

}  // namespace debsum
