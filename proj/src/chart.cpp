#include "debsum/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "debsum/error.hpp"

namespace debsum {

using nlohmann::json;

namespace {

std::string escape_xml(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

constexpr const char* kAgreeColour = "#1f77b4";
constexpr const char* kDisagreeColour = "#d62728";

// Round y-axis maximum: the smallest of 1, 2, 5 x 10^k not below `value`.
long long nice_ceiling(long long value) {
    if (value <= 1) return 1;
    long long base = 1;
    while (true) {
        for (long long step : {1LL, 2LL, 5LL}) {
            if (step * base >= value) return step * base;
        }
        base *= 10;
    }
}

void render_svg(std::ostringstream& out, const ChartSummary& chart) {
    using G = ChartGeometry;
    const double group_width = 2 * G::kBarWidth + G::kGroupGap;
    const double width = G::kLeftMargin + group_width * static_cast<double>(chart.bars.size()) + 40.0;
    const double height = G::kPlotTop + G::kPlotHeight + G::kBottomMargin;
    const double baseline = G::kPlotTop + G::kPlotHeight;

    long long max_count = 0;
    for (const auto& bar : chart.bars) max_count = std::max({max_count, bar.agree_count, bar.disagree_count});
    const long long axis_max = nice_ceiling(max_count);
    const double scale = G::kPlotHeight / static_cast<double>(axis_max);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\" role=\"img\" aria-label=\"Chart Summary for "
        << escape_xml(chart.topic_id) << "\">\n";

    // Axes and ticks.
    out << "<g class=\"axes\" stroke=\"#333\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << fmt(G::kLeftMargin) << "\" y1=\"" << fmt(G::kPlotTop) << "\" x2=\"" << fmt(G::kLeftMargin)
        << "\" y2=\"" << fmt(baseline) << "\"/>\n";
    out << "<line x1=\"" << fmt(G::kLeftMargin) << "\" y1=\"" << fmt(baseline) << "\" x2=\"" << fmt(width - 20.0)
        << "\" y2=\"" << fmt(baseline) << "\"/>\n";
    out << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">\n";
    for (int t = 0; t <= 4; ++t) {
        const double value = static_cast<double>(axis_max) * t / 4.0;
        const double y = baseline - value * scale;
        out << "<text x=\"" << fmt(G::kLeftMargin - 6.0) << "\" y=\"" << fmt(y + 4.0) << "\">" << fmt(value)
            << "</text>\n";
    }
    out << "</g>\n";
    out << "<text class=\"axis-label\" x=\"16\" y=\"" << fmt(G::kPlotTop + G::kPlotHeight / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fmt(G::kPlotTop + G::kPlotHeight / 2) << ")\">Salient sentences</text>\n";
    out << "<text class=\"axis-label\" x=\"" << fmt(G::kLeftMargin + (width - G::kLeftMargin) / 2) << "\" y=\""
        << fmt(height - 8.0) << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">Cluster label</text>\n";

    // Legend.
    out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect x=\"" << fmt(G::kLeftMargin) << "\" y=\"10\" width=\"12\" height=\"12\" fill=\"" << kAgreeColour
        << "\"/><text x=\"" << fmt(G::kLeftMargin + 16) << "\" y=\"20\">Agree</text>\n";
    out << "<rect x=\"" << fmt(G::kLeftMargin + 80) << "\" y=\"10\" width=\"12\" height=\"12\" fill=\""
        << kDisagreeColour << "\"/><text x=\"" << fmt(G::kLeftMargin + 96) << "\" y=\"20\">Disagree</text>\n";
    out << "</g>\n";

    out << "<g class=\"bars\">\n";
    for (std::size_t i = 0; i < chart.bars.size(); ++i) {
        const auto& bar = chart.bars[i];
        const double x0 = G::kLeftMargin + G::kGroupGap / 2 + group_width * static_cast<double>(i);
        const double ha = static_cast<double>(bar.agree_count) * scale;
        const double hd = static_cast<double>(bar.disagree_count) * scale;
        out << "<rect class=\"agree\" x=\"" << fmt(x0) << "\" y=\"" << fmt(baseline - ha) << "\" width=\""
            << fmt(G::kBarWidth) << "\" height=\"" << fmt(ha) << "\" fill=\"" << kAgreeColour << "\"><title>"
            << escape_xml(bar.label) << " (agree): " << bar.agree_count << "</title></rect>\n";
        out << "<rect class=\"disagree\" x=\"" << fmt(x0 + G::kBarWidth) << "\" y=\"" << fmt(baseline - hd)
            << "\" width=\"" << fmt(G::kBarWidth) << "\" height=\"" << fmt(hd) << "\" fill=\"" << kDisagreeColour
            << "\"><title>" << escape_xml(bar.label) << " (disagree): " << bar.disagree_count << "</title></rect>\n";
    }
    out << "</g>\n<g class=\"labels\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">\n";
    for (std::size_t i = 0; i < chart.bars.size(); ++i) {
        const double cx = G::kLeftMargin + G::kGroupGap / 2 + group_width * static_cast<double>(i) + G::kBarWidth;
        const double ty = baseline + 14.0;
        out << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(ty) << "\" transform=\"rotate(-40 " << fmt(cx) << " "
            << fmt(ty) << ")\">" << escape_xml(chart.bars[i].label) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
}

std::string render_html(const ChartSummary& chart) {
    std::ostringstream out;
    const std::string title = "Chart Summary: " + escape_xml(chart.topic_id);
    out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n<title>" << title
        << "</title>\n";
    if (chart.seed) out << "<meta name=\"seed\" content=\"" << *chart.seed << "\"/>\n";
    out << "<style>body{font-family:sans-serif;margin:2em}table{border-collapse:collapse;margin-top:1.5em}"
           "td,th{border:1px solid #ccc;padding:4px 10px;text-align:right}td:first-child,th:first-child"
           "{text-align:left}.empty{color:#666;font-style:italic}</style>\n</head>\n<body>\n";
    out << "<h1>" << title << "</h1>\n";
    if (chart.bars.empty()) {
        out << "<p class=\"empty\">No aligned clusters: nothing to chart for this topic.</p>\n";
    } else {
        render_svg(out, chart);
        out << "<table>\n<thead><tr><th>Label</th><th>Agree</th><th>Disagree</th><th>Similarity</th></tr></thead>\n"
               "<tbody>\n";
        for (const auto& bar : chart.bars) {
            out << "<tr><td>" << escape_xml(bar.label) << "</td><td>" << bar.agree_count << "</td><td>"
                << bar.disagree_count << "</td><td>" << fmt(bar.similarity) << "</td></tr>\n";
        }
        out << "</tbody>\n</table>\n";
    }
    out << "</body>\n</html>\n";
    return out.str();
}

}  // namespace

ChartSummary build_chart(const std::string& topic_id, const std::vector<AlignedPair>& pairs,
                         const std::map<std::string, long long>& cluster_sizes) {
    const auto size_of = [&](const std::string& id) {
        const auto it = cluster_sizes.find(id);
        if (it == cluster_sizes.end()) throw ValidationError("chart: aligned pair references unknown cluster '" + id + "'");
        return it->second;
    };
    ChartSummary chart;
    chart.topic_id = topic_id;
    for (const auto& pair : pairs) {
        chart.bars.push_back({pair.label, size_of(pair.agree_cluster_id), size_of(pair.disagree_cluster_id),
                              pair.similarity});
    }
    std::sort(chart.bars.begin(), chart.bars.end(), [](const ChartBar& a, const ChartBar& b) {
        const long long ta = a.agree_count + a.disagree_count, tb = b.agree_count + b.disagree_count;
        return ta != tb ? ta > tb : a.label < b.label;
    });

    // Disambiguate repeated display labels, keeping the first occurrence as is.
    std::map<std::string, int> seen;
    std::set<std::string> taken;
    for (const auto& bar : chart.bars) taken.insert(bar.label);
    for (std::size_t i = 0; i < chart.bars.size(); ++i) {
        auto& bar = chart.bars[i];
        if (seen[bar.label]++ == 0) continue;
        std::string candidate;
        int n = seen[bar.label];
        do {
            candidate = bar.label + " (" + std::to_string(n++) + ")";
        } while (taken.contains(candidate));
        taken.insert(candidate);
        bar.label = candidate;
    }
    return chart;
}

json chart_to_json(const ChartSummary& chart) {
    json bars = json::array();
    for (const auto& bar : chart.bars) {
        bars.push_back({{"label", bar.label},
                        {"agree_count", bar.agree_count},
                        {"disagree_count", bar.disagree_count},
                        {"similarity", bar.similarity}});
    }
    json doc{{"topic_id", chart.topic_id}, {"bars", bars}};
    if (chart.seed) doc["seed"] = *chart.seed;
    return doc;
}

ChartSummary chart_from_json(const json& doc) {
    try {
        ChartSummary chart;
        chart.topic_id = doc.at("topic_id").get<std::string>();
        for (const auto& b : doc.at("bars")) {
            chart.bars.push_back({b.at("label").get<std::string>(), b.at("agree_count").get<long long>(),
                                  b.at("disagree_count").get<long long>(), b.at("similarity").get<double>()});
        }
        if (doc.contains("seed")) chart.seed = doc.at("seed").get<std::uint64_t>();
        return chart;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("chart JSON: ") + e.what());
    }
}

std::string render_chart(const ChartSummary& chart, ChartFormat format) {
    if (format == ChartFormat::Json) return chart_to_json(chart).dump(2) + "\n";
    return render_html(chart);
}

}  // namespace debsum
