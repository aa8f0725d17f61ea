#include "debsum/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "debsum/error.hpp"
#include "debsum/silhouette.hpp"

namespace debsum {

std::string_view to_string(DistanceMetric metric) {
    return metric == DistanceMetric::Euclidean ? "euclidean" : "cosine_distance";
}

DistanceMetric metric_from_string(std::string_view text) {
    if (text == "euclidean") return DistanceMetric::Euclidean;
    if (text == "cosine_distance" || text == "cosine") return DistanceMetric::CosineDistance;
    throw ConfigError("unknown distance metric '" + std::string(text) + "'");
}

MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw ComputationError("Mann-Whitney U needs two nonempty samples");
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;

    std::vector<std::pair<double, bool>> pooled;  // (value, from a)
    pooled.reserve(n);
    for (double v : a) pooled.emplace_back(v, true);
    for (double v : b) pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    double rank_sum_a = 0.0;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second) rank_sum_a += midrank;
        }
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }

    MannWhitneyResult r;
    const double dna = static_cast<double>(na), dnb = static_cast<double>(nb), dn = static_cast<double>(n);
    r.u_a = rank_sum_a - dna * (dna + 1.0) / 2.0;
    r.u_b = dna * dnb - r.u_a;
    const double mean = dna * dnb / 2.0;
    const double variance = dn > 1.0 ? dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0))) : 0.0;
    if (variance > 0.0) {
        r.z = (r.u_a - mean) / std::sqrt(variance);
        r.p_two_sided = std::min(1.0, std::erfc(std::abs(r.z) / std::sqrt(2.0)));
    }
    r.effect_r = std::abs(r.z) / std::sqrt(dn);
    return r;
}

AlphaMetric alpha_metric_from_string(std::string_view text) {
    if (text == "nominal") return AlphaMetric::Nominal;
    if (text == "ordinal") return AlphaMetric::Ordinal;
    if (text == "interval") return AlphaMetric::Interval;
    throw ConfigError("unknown alpha metric '" + std::string(text) + "'");
}

double krippendorff_alpha(const RatingMatrix& ratings, AlphaMetric metric) {
    if (ratings.size() < 2) throw ComputationError("Krippendorff's alpha needs at least 2 coders");
    std::size_t items = 0;
    for (const auto& row : ratings) items = std::max(items, row.size());

    // Distinct values index the coincidence matrix.
    std::map<double, std::size_t> value_index;
    for (const auto& row : ratings) {
        for (const auto& v : row) {
            if (v) value_index.emplace(*v, 0);
        }
    }
    std::vector<double> values;
    for (auto& [v, idx] : value_index) {
        idx = values.size();
        values.push_back(v);
    }
    const std::size_t m = values.size();
    std::vector<std::vector<double>> coincidence(m, std::vector<double>(m, 0.0));

    bool pairable = false;
    for (std::size_t item = 0; item < items; ++item) {
        std::vector<std::size_t> unit;
        for (const auto& row : ratings) {
            if (item < row.size() && row[item]) unit.push_back(value_index.at(*row[item]));
        }
        if (unit.size() < 2) continue;
        pairable = true;
        const double weight = 1.0 / static_cast<double>(unit.size() - 1);
        for (std::size_t x = 0; x < unit.size(); ++x) {
            for (std::size_t y = 0; y < unit.size(); ++y) {
                if (x != y) coincidence[unit[x]][unit[y]] += weight;
            }
        }
    }
    if (!pairable) throw ComputationError("Krippendorff's alpha: no item has two or more ratings");

    std::vector<double> marginal(m, 0.0);
    for (std::size_t c = 0; c < m; ++c) marginal[c] = std::accumulate(coincidence[c].begin(), coincidence[c].end(), 0.0);
    const double n = std::accumulate(marginal.begin(), marginal.end(), 0.0);

    const auto delta2 = [&](std::size_t c, std::size_t k) -> double {
        switch (metric) {
            case AlphaMetric::Nominal: return c == k ? 0.0 : 1.0;
            case AlphaMetric::Interval: return (values[c] - values[k]) * (values[c] - values[k]);
            case AlphaMetric::Ordinal: {
                const auto [lo, hi] = std::minmax(c, k);
                double sum = 0.0;
                for (std::size_t g = lo; g <= hi; ++g) sum += marginal[g];
                sum -= (marginal[lo] + marginal[hi]) / 2.0;
                return sum * sum;
            }
        }
        return 0.0;
    };

    double observed = 0.0, expected = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t k = 0; k < m; ++k) {
            const double d = delta2(c, k);
            observed += coincidence[c][k] * d;
            expected += marginal[c] * marginal[k] * d;
        }
    }
    observed /= n;
    expected /= n * (n - 1.0);
    if (expected == 0.0) return 1.0;
    return 1.0 - observed / expected;
}

}  // namespace debsum
