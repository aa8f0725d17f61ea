#include <doctest.h>

#include <regex>
#include <string>
#include <vector>

#include "debsum/chart.hpp"
#include "debsum/error.hpp"

using namespace debsum;

namespace {

// Minimal XML reader: checks tag balance and collects the element path of
// every start tag, so tests can count nodes without trusting the renderer.
struct XmlScan {
    bool well_formed = true;
    std::vector<std::vector<std::string>> paths;  // ancestors + element, with class attr appended as name.class
};

XmlScan scan_xml(const std::string& doc) {
    XmlScan out;
    std::vector<std::string> stack;
    std::size_t i = 0;
    const std::regex class_re(R"re(class="([^"]*)")re");
    while ((i = doc.find('<', i)) != std::string::npos) {
        const auto close = doc.find('>', i);
        if (close == std::string::npos) {
            out.well_formed = false;
            break;
        }
        std::string tag = doc.substr(i + 1, close - i - 1);
        i = close + 1;
        if (tag.empty() || tag[0] == '!' || tag[0] == '?') continue;
        if (tag[0] == '/') {
            const auto name = tag.substr(1);
            if (stack.empty() || stack.back().substr(0, stack.back().find('.')) != name) {
                out.well_formed = false;
                break;
            }
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        const auto name = tag.substr(0, tag.find_first_of(" /"));
        std::string entry = name;
        std::smatch m;
        if (std::regex_search(tag, m, class_re)) entry += "." + m[1].str();
        auto path = stack;
        path.push_back(entry);
        out.paths.push_back(path);
        if (!self_closing && name != "meta") stack.push_back(entry);
    }
    if (!stack.empty()) out.well_formed = false;
    return out;
}

std::size_t count_in(const XmlScan& scan, const std::string& parent, const std::string& element) {
    std::size_t n = 0;
    for (const auto& p : scan.paths) {
        if (p.size() >= 2 && p[p.size() - 2] == parent && p.back().substr(0, p.back().find('.')) == element) ++n;
    }
    return n;
}

std::string svg_of(const std::string& html) {
    const auto a = html.find("<svg"), b = html.find("</svg>");
    return html.substr(a, b + 6 - a);
}

}  // namespace

TEST_CASE("bars from aligned pairs") {
    const std::map<std::string, long long> sizes{{"a1", 5}, {"d1", 3}, {"a2", 1}, {"d2", 1}};
    const auto chart = build_chart("t", {{"co2", "a1", "d1", 1.0}, {"ice", "a2", "d2", 0.8}}, sizes);
    REQUIRE(chart.bars.size() == 2);
    CHECK(chart.bars[0] == ChartBar{"co2", 5, 3, 1.0});
    CHECK(build_chart("t", {}, sizes).bars.empty());
    CHECK_THROWS_AS(build_chart("t", {{"x", "zz", "d1", 1.0}}, sizes), ValidationError);

    const auto dup = build_chart("t", {{"ice", "a1", "d1", 1.0}, {"ice", "a2", "d2", 1.0}}, sizes);
    CHECK(dup.bars[0].label == "ice");
    CHECK(dup.bars[1].label == "ice (2)");
}

TEST_CASE("json round trip and determinism") {
    ChartSummary chart{"topic", {{"co2", 5, 3, 1.0}, {"ice & snow", 2, 2, 0.75}}, 42};
    CHECK(chart_from_json(chart_to_json(chart)) == chart);
    CHECK(render_chart(chart, ChartFormat::Json) == render_chart(chart, ChartFormat::Json));
    CHECK(render_chart(chart, ChartFormat::Html) == render_chart(chart, ChartFormat::Html));
    CHECK_THROWS_AS(chart_from_json(nlohmann::json{{"bars", 1}}), ValidationError);
}

TEST_CASE("svg structure") {
    const ChartSummary chart{"t<1>", {{"a", 4, 2, 1.0}, {"b", 3, 0, 0.9}, {"c \"q\"", 1, 1, 0.7}}, 1};
    const auto html = render_chart(chart, ChartFormat::Html);
    const auto svg = scan_xml(svg_of(html));
    CHECK(svg.well_formed);
    CHECK(count_in(svg, "g.bars", "rect") == 6);
    CHECK(scan_xml(html).well_formed);
    CHECK(html.find("<meta name=\"seed\" content=\"1\"/>") != std::string::npos);
    CHECK(html.find("t&lt;1&gt;") != std::string::npos);

    const auto empty = render_chart(ChartSummary{"t", {}, 1}, ChartFormat::Html);
    CHECK(scan_xml(empty).well_formed);
    CHECK(empty.find("class=\"empty\"") != std::string::npos);
    CHECK(empty.find("<svg") == std::string::npos);
}

TEST_CASE("bar heights scale with counts") {
    const ChartSummary chart{"t", {{"a", 10, 5, 1.0}}, std::nullopt};
    const auto html = render_chart(chart, ChartFormat::Html);
    CHECK(html.find("height=\"300.00\" fill=\"#1f77b4\"") != std::string::npos);
    CHECK(html.find("height=\"150.00\" fill=\"#d62728\"") != std::string::npos);
}
