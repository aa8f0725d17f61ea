#include "debsum/rouge.hpp"

#include <algorithm>

#include "debsum/error.hpp"

namespace debsum {

namespace {

constexpr char kSep = '\x1f';
constexpr std::size_t kMaxSkip = 4;

double harmonic_mean(double r, double p) { return r + p > 0.0 ? 2.0 * r * p / (r + p) : 0.0; }

long long total(const GramCounts& grams) {
    long long sum = 0;
    for (const auto& [_, c] : grams) sum += c;
    return sum;
}

RougeScore score_one(const GramCounts& sys, const GramCounts& ref, RougeVariant variant) {
    long long overlap = 0;
    for (const auto& [gram, count] : sys) {
        const auto it = ref.find(gram);
        if (it != ref.end()) overlap += std::min(count, it->second);
    }
    const long long ref_total = total(ref), sys_total = total(sys);
    RougeScore s;
    s.variant = variant;
    s.recall = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
    s.precision = sys_total > 0 ? static_cast<double>(overlap) / sys_total : 0.0;
    s.f1 = harmonic_mean(s.recall, s.precision);
    return s;
}

}  // namespace

std::string_view to_string(RougeVariant variant) {
    switch (variant) {
        case RougeVariant::R1: return "R1";
        case RougeVariant::R2: return "R2";
        case RougeVariant::RSU4: return "RSU4";
    }
    return "?";
}

GramCounts rouge_grams(const std::vector<std::string>& tokens, RougeVariant variant) {
    GramCounts grams;
    const std::size_t n = tokens.size();
    switch (variant) {
        case RougeVariant::R1:
            for (const auto& t : tokens) ++grams[t];
            break;
        case RougeVariant::R2:
            for (std::size_t i = 0; i + 1 < n; ++i) ++grams[tokens[i] + kSep + tokens[i + 1]];
            break;
        case RougeVariant::RSU4:
            for (std::size_t i = 0; i < n; ++i) {
                ++grams[std::string(1, 'u') + kSep + tokens[i]];
                for (std::size_t j = i + 1; j < n && j - i <= kMaxSkip + 1; ++j) {
                    ++grams[std::string(1, 's') + kSep + tokens[i] + kSep + tokens[j]];
                }
            }
            break;
    }
    return grams;
}

RougeScore rouge(const std::vector<std::string>& system, const std::vector<std::vector<std::string>>& references,
                 RougeVariant variant, RougeAggregate aggregate) {
    if (references.empty()) throw ComputationError("ROUGE needs at least one reference summary");
    const GramCounts sys = rouge_grams(system, variant);
    RougeScore combined;
    combined.variant = variant;
    for (const auto& ref : references) {
        const RougeScore s = score_one(sys, rouge_grams(ref, variant), variant);
        if (aggregate == RougeAggregate::Mean) {
            combined.recall += s.recall;
            combined.precision += s.precision;
        } else {
            combined.recall = std::max(combined.recall, s.recall);
            combined.precision = std::max(combined.precision, s.precision);
        }
    }
    if (aggregate == RougeAggregate::Mean) {
        const double m = static_cast<double>(references.size());
        combined.recall /= m;
        combined.precision /= m;
    }
    combined.f1 = harmonic_mean(combined.recall, combined.precision);
    return combined;
}

}  // namespace debsum
