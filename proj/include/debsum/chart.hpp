#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "debsum/alignment.hpp"

namespace debsum {

struct ChartBar {
    std::string label;
    long long agree_count = 0;
    long long disagree_count = 0;
    double similarity = 0.0;

    bool operator==(const ChartBar&) const = default;
};

struct ChartSummary {
    std::string topic_id;
    std::vector<ChartBar> bars;
    std::optional<std::uint64_t> seed;  // echoed into rendered artifacts when set

    bool operator==(const ChartSummary&) const = default;
};

/// One bar per aligned pair, sized by each cluster's salient-sentence count;
/// sorted by total count descending, then label. Repeated display labels get
/// the disagree label appended so bar labels stay unique.
ChartSummary build_chart(const std::string& topic_id, const std::vector<AlignedPair>& pairs,
                         const std::map<std::string, long long>& cluster_sizes);

enum class ChartFormat { Json, Html };

nlohmann::json chart_to_json(const ChartSummary& chart);
ChartSummary chart_from_json(const nlohmann::json& doc);

/// JSON (sorted keys) or a single self-contained HTML page with an inline SVG
/// grouped bar chart and a table of the same numbers.
std::string render_chart(const ChartSummary& chart, ChartFormat format);

/// Plot geometry shared by the renderer and its tests.
struct ChartGeometry {
    static constexpr double kPlotHeight = 300.0;
    static constexpr double kPlotTop = 40.0;
    static constexpr double kBarWidth = 28.0;
    static constexpr double kGroupGap = 24.0;
    static constexpr double kLeftMargin = 60.0;
    static constexpr double kBottomMargin = 110.0;
};

}  // namespace debsum
