// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "debsum/alignment.hpp"
#include "debsum/chart.hpp"
#include "debsum/kmeans.hpp"
#include "debsum/labeling.hpp"
#include "debsum/linalg.hpp"
#include "debsum/pca.hpp"
#include "debsum/pipeline.hpp"
#include "debsum/rouge.hpp"
#include "debsum/stats.hpp"
#include "debsum/xmeans.hpp"

using namespace debsum;
using Eigen::MatrixXd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

// ---- 1. mutual information ------------------------------------------------------

double eq2_direct(double n11, double n10, double n01, double n00) {
    const double n = n11 + n10 + n01 + n00;
    double total = 0.0;
    const double cells[4][3] = {{n11, n11 + n10, n11 + n01},
                                {n10, n11 + n10, n10 + n00},
                                {n01, n01 + n00, n11 + n01},
                                {n00, n01 + n00, n10 + n00}};
    for (const auto& c : cells) {
        if (c[0] == 0) continue;
        total += (c[0] / n) * std::log2((n * c[0]) / (c[1] * c[2]));
    }
    return total;
}

Outcome mi_oracle() {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        ContingencyCounts c;
        const std::uint64_t scale = 2 + rng() % 1000;
        do {
            c = {rng() % scale, rng() % scale, rng() % scale, rng() % scale};
        } while (c.total() == 0);
        worst = std::max(worst, std::abs(mutual_information(c) - eq2_direct(c.n11, c.n10, c.n01, c.n00)));
    }
    const double e0 = mutual_information({25, 25, 25, 25});
    const double e1 = mutual_information({2, 0, 0, 2});
    const double e2 = mutual_information({3, 1, 2, 4});
    const bool examples = e0 == 0.0 && std::abs(e1 - 1.0) < 1e-12 && std::abs(e2 - 0.1245) < 1e-4;
    char buf[200];
    std::snprintf(buf, sizeof buf, "max |diff| over 10000 tables = %.3g bits; examples %.6f %.6f %.6f", worst, e0, e1,
                  e2);
    return {worst <= 1e-10 && examples, buf};
}

// ---- 2. x-means planted structure ----------------------------------------------

MatrixXd three_blobs(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const double centres[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {5.0, 10.0}};
    MatrixXd x(150, 2);
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 50; ++i) x.row(c * 50 + i) << centres[c][0] + g(rng), centres[c][1] + g(rng);
    }
    return x;
}

// BIC written out directly from a partition, independent of the library's scorer.
double direct_bic(const MatrixXd& x, const std::vector<Index>& labels, int k) {
    const double n = static_cast<double>(x.rows()), d = static_cast<double>(x.cols());
    std::vector<Eigen::RowVectorXd> sums(k, Eigen::RowVectorXd::Zero(x.cols()));
    std::vector<double> counts(k, 0.0);
    for (Index i = 0; i < x.rows(); ++i) {
        sums[labels[i]] += x.row(i);
        counts[labels[i]] += 1;
    }
    double sse = 0.0;
    for (Index i = 0; i < x.rows(); ++i) sse += (x.row(i) - sums[labels[i]] / counts[labels[i]]).squaredNorm();
    const double var = sse / (n - k);
    if (!(var > 0)) return -std::numeric_limits<double>::infinity();
    double ll = -(n * d / 2.0) * std::log(2 * M_PI * var) - sse / (2 * var);
    for (double c : counts) {
        if (c > 0) ll += c * std::log(c / n);
    }
    return ll - (k * (d + 1) / 2.0) * std::log(n);
}

Outcome xmeans_recovery() {
    int hits = 0, agree = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto x = three_blobs(seed * 7919);
        const auto r = xmeans(x, 1, 10, seed);
        if (r.k == 3) ++hits;

        int best_k = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 10; ++k) {
            double best_k_bic = -std::numeric_limits<double>::infinity();
            for (std::uint64_t restart = 0; restart < 5; ++restart) {
                const auto km = kmeans(x, k, seed * 100 + restart);
                best_k_bic = std::max(best_k_bic, direct_bic(x, km.assignments, k));
            }
            if (best_k_bic > best) {
                best = best_k_bic;
                best_k = k;
            }
        }
        const double own = direct_bic(x, r.assignments, static_cast<int>(r.k));
        if (best_k == r.k && std::abs(own - best) <= 1e-6 * std::abs(best) && std::abs(own - r.bic) <= 1e-6 * std::abs(own)) {
            ++agree;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "k = 3 in %d/100 seeds; BIC argmax agreement with exhaustive oracle in %d/100", hits,
                  agree);
    return {hits >= 95 && agree >= hits, buf};
}

// ---- 3. silhouette contrast ---------------------------------------------------

// Sentences over a 10-term vocabulary. 70% carry one term; the remaining 30%
// carry four terms drawn from a few fixed co-occurrence patterns, so their
// terms overlap with each other and with the single-term sentences.
PipelineState contrast_corpus(std::uint64_t seed, std::vector<std::string>& vocabulary) {
    std::mt19937_64 rng(seed);
    vocabulary.clear();
    for (int t = 0; t < 10; ++t) vocabulary.push_back("term" + std::to_string(t));
    const std::vector<std::vector<int>> patterns{{0, 1, 2, 3}, {2, 3, 4, 5}, {5, 6, 7, 8}, {8, 9, 0, 1}};

    PipelineState state;
    state.stage = "select";
    state.seed = seed;
    TopicState topic;
    topic.id = "synthetic";
    const int n = 300;
    for (int i = 0; i < n; ++i) {
        AnnotatedSentence s;
        s.id = "s" + std::to_string(i);
        s.comment_id = "c" + std::to_string(i / 5);
        std::vector<int> terms;
        if (static_cast<double>(i) < 0.3 * n) terms = patterns[rng() % patterns.size()];
        else terms = {static_cast<int>(rng() % 10)};
        for (std::size_t k = 0; k < terms.size(); ++k) {
            s.tokens.push_back(vocabulary[terms[k]]);
            s.terms.push_back({s.id, vocabulary[terms[k]], k, k + 1});
        }
        s.side = i % 2 ? Side::Disagree : Side::Agree;
        topic.salient[i % 2].push_back(std::move(s));
    }
    state.topics.push_back(std::move(topic));
    return state;
}

Outcome silhouette_contrast() {
    double term_sum = 0.0, x_sum = 0.0;
    int runs = 0, multi = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::vector<std::string> vocab;
        const auto state = contrast_corpus(seed, vocab);
        for (const auto& side : state.topics[0].salient) {
            for (const auto& s : side) {
                ++total;
                if (s.terms.size() >= 2) ++multi;
            }
        }
        Resources r;
        r.vocabulary = vocab;
        PipelineConfig c;
        c.k_min = 2;
        c.k_max = 25;
        const auto report = silhouette_report(state, r, c).at("pooled");
        if (report.at("term").at("silhouette").is_null() || report.at("xmeans").at("silhouette").is_null()) {
            return {false, "silhouette undefined on generated corpus"};
        }
        term_sum += report["term"]["silhouette"].get<double>();
        x_sum += report["xmeans"]["silhouette"].get<double>();
        ++runs;
    }
    const double term = term_sum / runs, xm = x_sum / runs;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d corpora, %.0f%% multi-term sentences: term %.4f, x-means %.4f, gap %.4f", runs,
                  100.0 * multi / total, term, xm, xm - term);
    return {xm - term >= 0.5 && term >= -0.15 && term <= 0.15, buf};
}

// ---- 4. rouge --------------------------------------------------------------------

// Multiset n-gram overlap by sorting and merging, without maps.
std::vector<std::string> grams_list(const std::vector<std::string>& t, RougeVariant v) {
    std::vector<std::string> out;
    const std::size_t n = t.size();
    if (v != RougeVariant::R2) {
        for (const auto& w : t) out.push_back(w);
    }
    for (std::size_t i = 0; v != RougeVariant::R1 && i < n; ++i) {
        const std::size_t max_gap = v == RougeVariant::RSU4 ? 5 : 1;
        for (std::size_t j = i + 1; j < n && j - i <= max_gap; ++j) out.push_back(t[i] + "\x1f" + t[j]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::array<double, 3> brute_rouge(const std::vector<std::string>& sys, const std::vector<std::string>& ref,
                                  RougeVariant v) {
    const auto a = grams_list(sys, v), b = grams_list(ref, v);
    std::size_t i = 0, j = 0, hit = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) ++hit, ++i, ++j;
        else if (a[i] < b[j]) ++i;
        else ++j;
    }
    const double r = b.empty() ? 0.0 : static_cast<double>(hit) / b.size();
    const double p = a.empty() ? 0.0 : static_cast<double>(hit) / a.size();
    const double f = r + p > 0 ? 2 * r * p / (r + p) : 0.0;
    return {r, p, f};
}

Outcome rouge_check() {
    const char* corpus = std::getenv("DEBSUM_SSSD_CORPUS");
    const char* gold = std::getenv("DEBSUM_SSSD_GOLD");
    if (corpus && gold) {
        auto c = default_config();
        c.corpus_path = corpus;
        c.gold_path = fs::path(gold);
        validate_config(c);
        const auto r = load_resources(c);
        const auto table = rouge_report(r, c).at("features");
        bool dominates = true;
        for (const char* v : {"R1", "R2", "RSU4"}) {
            const double sp = table["SP"][v]["recall"].get<double>();
            for (const auto& [f, row] : table.items()) {
                if (f != "SP" && f != "CB" && row[v]["recall"].get<double>() > sp) dominates = false;
            }
        }
        const double r1 = table["SP"]["R1"]["recall"].get<double>();
        char buf[160];
        std::snprintf(buf, sizeof buf, "supplied corpus: SP R-1 recall %.4f (reference 0.6124), SP dominates: %s", r1,
                      dominates ? "yes" : "no");
        return {dominates && std::abs(r1 - 0.6124) <= 0.05, buf};
    }

    std::mt19937_64 rng(77);
    const std::vector<std::string> words{"a", "b", "c", "d", "e", "f"};
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::string> sys(rng() % 12), ref(1 + rng() % 12);
        for (auto& w : sys) w = words[rng() % words.size()];
        for (auto& w : ref) w = words[rng() % words.size()];
        for (auto v : {RougeVariant::R1, RougeVariant::R2, RougeVariant::RSU4}) {
            const auto got = rouge(sys, {ref}, v);
            const auto want = brute_rouge(sys, ref, v);
            worst = std::max({worst, std::abs(got.recall - want[0]), std::abs(got.precision - want[1]),
                              std::abs(got.f1 - want[2])});
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "no evaluation corpus supplied; brute-force n-gram oracle on 1000 pairs x 3 variants: max |diff| %.3g",
                  worst);
    return {worst <= 1e-12, buf};
}

// ---- 5. labeler recovery ----------------------------------------------------------

Outcome labeler_recovery() {
    int clusters_total = 0, mi_hits = 0, tfidf_hits = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int k = 4 + static_cast<int>(rng() % 5);
        std::vector<LabelingCluster> clusters;
        std::vector<std::pair<std::string, int>> sentences;  // id, cluster
        for (int c = 0; c < k; ++c) {
            LabelingCluster lc{"c" + std::to_string(c), std::nullopt, {}};
            const int size = 20 + static_cast<int>(rng() % 21);
            for (int i = 0; i < size; ++i) {
                const auto id = "c" + std::to_string(c) + "s" + std::to_string(i);
                lc.members.push_back(id);
                sentences.emplace_back(id, c);
            }
            clusters.push_back(std::move(lc));
        }
        SentenceTerms terms;
        for (const auto& [id, home] : sentences) {
            auto& bag = terms[id];
            for (int c = 0; c < k; ++c) {
                const double p = c == home ? 0.9 : 0.05;
                if (u(rng) < p) bag.push_back("planted" + std::to_string(c));
            }
            for (int j = 0; j < 2; ++j) bag.push_back("noise" + std::to_string(rng() % 30));
        }
        const auto tfidf = tfidf_labels(clusters, terms);
        for (int c = 0; c < k; ++c) {
            ++clusters_total;
            const auto planted = "planted" + std::to_string(c);
            if (mi_label(clusters[c], clusters, terms).term == planted) ++mi_hits;
            if (tfidf[c].term == planted) ++tfidf_hits;
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "50 corpora, %d clusters: MI %d/%d (%.1f%%), tf-idf %d/%d (%.1f%%)", clusters_total,
                  mi_hits, clusters_total, 100.0 * mi_hits / clusters_total, tfidf_hits, clusters_total,
                  100.0 * tfidf_hits / clusters_total);
    return {mi_hits == clusters_total && tfidf_hits >= 0.9 * clusters_total, buf};
}

// ---- 6. invariants ----------------------------------------------------------------

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        files[e.path().filename().string()] = {std::istreambuf_iterator<char>(in), {}};
    }
    return files;
}

Outcome invariants() {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const char* what) {
        if (!ok && std::find(failed.begin(), failed.end(), what) == failed.end()) failed.push_back(what);
    };

    for (int round = 0; round < 50; ++round) {
        const Index n = 5 + static_cast<Index>(rng() % 40), d = 2 + static_cast<Index>(rng() % 8);
        MatrixXd x(n, d);
        for (Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);

        const auto fit = pca_fit_transform(x, 1.0);
        const MatrixXd gram = fit.model.components * fit.model.components.transpose();
        expect((gram - MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-9,
               "PCA orthonormality");
        const MatrixXd centered = x.rowwise() - x.colwise().mean();
        const double projected = fit.points.squaredNorm() / static_cast<double>(n - 1);
        expect(std::abs(projected - centered.squaredNorm() / static_cast<double>(n - 1)) < 1e-9 * (1 + projected),
               "PCA variance conservation");
        expect(std::abs(fit.model.eigenvalues.sum() - fit.model.total_variance) < 1e-9 * (1 + projected),
               "PCA variance conservation");

        const Index k = 1 + static_cast<Index>(rng() % std::min<Index>(n, 6));
        const auto km = kmeans(x, k, rng());
        for (std::size_t i = 1; i < km.distortion_trace.size(); ++i) {
            expect(km.distortion_trace[i] <= km.distortion_trace[i - 1] * (1 + 1e-12) + 1e-12,
                   "k-means monotone descent");
        }

        const MatrixXd pos = x.cwiseAbs().array() + 0.01;
        const auto s = similarity_matrix(pos);
        expect(s == s.transpose(), "similarity symmetry");
        for (Index i = 0; i < s.rows(); ++i) expect(s(i, i) == 1.0, "similarity symmetry");

        std::vector<double> a(1 + rng() % 15), b(1 + rng() % 15);
        for (auto& v : a) v = static_cast<double>(rng() % 5);
        for (auto& v : b) v = static_cast<double>(rng() % 5);
        double wins = 0.0;
        for (double p : a) {
            for (double q : b) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
        }
        const auto mw = mann_whitney_u(a, b);
        expect(std::abs(mw.u_a - wins) < 1e-9 && std::abs(mw.u_a + mw.u_b - double(a.size() * b.size())) < 1e-9,
               "Mann-Whitney pair-count identity");

        RatingMatrix ratings(2 + rng() % 4, std::vector<std::optional<double>>(3 + rng() % 6));
        for (std::size_t item = 0; item < ratings[0].size(); ++item) {
            const double v = static_cast<double>(rng() % 5);
            for (auto& coder : ratings) coder[item] = (rng() % 5 == 0 && &coder != &ratings[0] && &coder != &ratings[1])
                                                          ? std::nullopt
                                                          : std::optional(v);
        }
        for (auto m : {AlphaMetric::Nominal, AlphaMetric::Ordinal, AlphaMetric::Interval}) {
            expect(krippendorff_alpha(ratings, m) == 1.0, "Krippendorff unanimity");
        }

        std::vector<LabeledCluster> agree, disagree;
        const std::vector<std::string> words{"ice", "sea", "co2", "coal", "heat"};
        for (int i = 0; i < 1 + static_cast<int>(rng() % 5); ++i) {
            agree.push_back({"a" + std::to_string(i), words[rng() % 5] + (rng() % 2 ? " " + words[rng() % 5] : "")});
        }
        for (int i = 0; i < 1 + static_cast<int>(rng() % 5); ++i) {
            disagree.push_back({"d" + std::to_string(i), words[rng() % 5] + (rng() % 2 ? " " + words[rng() % 5] : "")});
        }
        const auto al = align_clusters(agree, disagree, SynonymTable{}, 0.5);
        std::set<std::string> ua, ud;
        for (const auto& p : al.pairs) {
            expect(ua.insert(p.agree_cluster_id).second && ud.insert(p.disagree_cluster_id).second,
                   "alignment one-to-one");
        }

        ChartSummary chart{"t" + std::to_string(round), {}, rng()};
        for (int i = 0; i < static_cast<int>(rng() % 6); ++i) {
            chart.bars.push_back({"label " + std::to_string(i), static_cast<long long>(rng() % 50),
                                  static_cast<long long>(rng() % 50), static_cast<double>(rng() % 1000) / 999.0});
        }
        expect(chart_from_json(nlohmann::json::parse(render_chart(chart, ChartFormat::Json))) == chart,
               "chart JSON round-trip");
    }

    const fs::path data = DEBSUM_TEST_DATA_DIR;
    const auto scratch = fs::temp_directory_path() / ("debsum_acceptance_" + std::to_string(rng()));
    for (auto method : {ClusteringMethod::Term, ClusteringMethod::XMeans}) {
        auto c = config_from_json(read_json_file(data / "fixtures" / "config.json"), data / "fixtures");
        c.clustering_method = method;
        c.output_dir = scratch / "one";
        run_pipeline(c);
        c.output_dir = scratch / "two";
        c.jobs = 2;
        run_pipeline(c);
        expect(read_dir(scratch / "one") == read_dir(scratch / "two"), "end-to-end byte determinism");
        fs::remove_all(scratch);
    }

    if (failed.empty()) {
        return {true, "PCA, k-means, similarity, alignment, Mann-Whitney, Krippendorff, chart round-trip, "
                      "end-to-end determinism: all hold over 50 randomized rounds"};
    }
    std::string detail = "violated:";
    for (const auto& f : failed) detail += " [" + f + "]";
    return {false, detail};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const std::vector<Criterion> criteria{
        {1, "MI oracle equivalence", 5.0, mi_oracle},
        {2, "X-means planted-structure recovery", 30.0, xmeans_recovery},
        {3, "Silhouette contrast term vs X-means", 60.0, silhouette_contrast},
        {4, "ROUGE replication", 60.0, rouge_check},
        {5, "MI labeler recovery", 30.0, labeler_recovery},
        {6, "Invariant suites", 120.0, invariants},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.contains(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = out.pass && secs < c.budget_seconds;
        if (!ok) ++failures;
        std::printf("[%s] %d. %s: %s (%.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    out.detail.c_str(), secs, c.budget_seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
