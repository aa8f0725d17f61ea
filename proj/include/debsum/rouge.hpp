#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace debsum {

enum class RougeVariant { R1, R2, RSU4 };

std::string_view to_string(RougeVariant variant);

/// How per-reference scores are combined when several references exist.
enum class RougeAggregate { Mean, Max };

struct RougeScore {
    RougeVariant variant = RougeVariant::R1;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

using GramCounts = std::map<std::string, long long>;

/// Unigrams (R1), contiguous bigrams (R2), or unigrams plus skip-bigrams with
/// at most four tokens between the pair (RSU4).
GramCounts rouge_grams(const std::vector<std::string>& tokens, RougeVariant variant);

/// Clipped n-gram overlap against each reference. Recall and precision are
/// combined across references (mean, or the per-field maximum) and f1 is the
/// harmonic mean of the combined pair.
RougeScore rouge(const std::vector<std::string>& system, const std::vector<std::vector<std::string>>& references,
                 RougeVariant variant, RougeAggregate aggregate = RougeAggregate::Mean);

}  // namespace debsum
