#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace debsum {

struct MannWhitneyResult {
    double u_a = 0.0;  // pairs where a beats b, ties counted half
    double u_b = 0.0;
    double z = 0.0;
    double p_two_sided = 1.0;
    double effect_r = 0.0;  // |z| / sqrt(n_a + n_b)
};

/// Rank-sum test with midranks and the tie-corrected normal approximation.
MannWhitneyResult mann_whitney_u(const std::vector<double>& sample_a, const std::vector<double>& sample_b);

enum class AlphaMetric { Nominal, Ordinal, Interval };

AlphaMetric alpha_metric_from_string(std::string_view text);

/// ratings[coder][item]; std::nullopt marks a missing rating.
using RatingMatrix = std::vector<std::vector<std::optional<double>>>;

/// Krippendorff's alpha from the coincidence matrix of pairable values.
/// Items with fewer than two ratings are ignored.
double krippendorff_alpha(const RatingMatrix& ratings, AlphaMetric metric);

}  // namespace debsum
