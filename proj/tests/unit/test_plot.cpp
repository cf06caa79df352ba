#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "modalshift/csv.hpp"
#include "modalshift/nsga2.hpp"
#include "modalshift/plot.hpp"
#include "modalshift/sweep.hpp"

using namespace modalshift;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    std::size_t at = text.find(needle);
    while (at != std::string::npos) {
        ++count;
        at = text.find(needle, at + needle.size());
    }
    return count;
}

/// One synthetic sweep row; columns we do not exercise stay zero.
std::vector<std::string> sweep_row(const std::string& beta_c, const std::string& beta_tau,
                                   const std::string& capacity, const std::string& interval,
                                   const std::string& travel_mean,
                                   const std::string& other_mean) {
    std::vector<std::string> cells(5 + 2 * kSweepIndicatorCount, "0");
    cells[0] = beta_c;
    cells[1] = beta_tau;
    cells[2] = capacity;
    cells[3] = interval;
    cells[4] = "10";
    cells[5] = travel_mean;  // avg_travel_time_mean
    cells[19] = other_mean;  // avg_congestion_other_mean
    return cells;
}

std::vector<std::vector<std::string>> front_table() {
    std::vector<std::vector<std::string>> rows;
    rows.push_back(split_csv_line(front_csv_header()));
    rows.push_back({"-1", "2", "0.1", "0.8", "0", "inf"});
    rows.push_back({"0", "1", "0.2", "0.5", "0", "1.25"});
    rows.push_back({"1", "0", "0.4", "0.3", "0", "0.75"});
    rows.push_back({"2", "-1", "0.7", "0.1", "0", "inf"});
    return rows;
}

} // namespace

TEST_CASE("the plot kind is read off the header") {
    CHECK(detect_plot_kind(split_csv_line(front_csv_header())) == "front");
    CHECK(detect_plot_kind(split_csv_line(sweep_csv_header())) == "sweep");
    CHECK_THROWS_AS(detect_plot_kind(split_csv_line(result_csv_header())),
                    std::runtime_error);
    CHECK_THROWS_AS(detect_plot_kind(split_csv_line(trace_csv_header())),
                    std::runtime_error);
}

TEST_CASE("the front scatter draws one circle per row") {
    const std::string svg = render_front_svg(front_table());
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count_occurrences(svg, "<circle") == 4);
    CHECK(svg.find("rer_congestion") != std::string::npos);
    CHECK(svg.find("other_congestion") != std::string::npos);
    CHECK(svg.find("pareto front") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("front rendering rejects empty or mislabelled input") {
    std::vector<std::vector<std::string>> header_only;
    header_only.push_back(split_csv_line(front_csv_header()));
    CHECK_THROWS_AS(render_front_svg(header_only), std::runtime_error);

    std::vector<std::vector<std::string>> wrong = front_table();
    wrong[0][2] = "first_objective";
    try {
        render_front_svg(wrong);
        FAIL("expected a runtime_error");
    } catch (const std::runtime_error& error) {
        CHECK(std::string(error.what()).find("missing column 'rer_congestion'") !=
              std::string::npos);
    }
}

TEST_CASE("the sweep chart draws a line per facet, panel, and series") {
    std::vector<std::vector<std::string>> rows;
    rows.push_back(split_csv_line(sweep_csv_header()));
    for (const char* beta_tau : {"-1", "1"})
        for (const char* beta_c : {"0", "1", "2"})
            rows.push_back(sweep_row(beta_c, beta_tau, "500", "5", "12.5", "0.4"));

    const std::string one_facet = render_sweep_svg(rows);
    // 1 facet x 2 indicator panels x 2 beta_tau series
    CHECK(count_occurrences(one_facet, "<polyline") == 4);
    CHECK(one_facet.find("avg_travel_time (C=500 I=5)") != std::string::npos);
    CHECK(one_facet.find("avg_congestion_other (C=500 I=5)") != std::string::npos);
    CHECK(one_facet.find("beta_tau") != std::string::npos);

    for (const char* beta_tau : {"-1", "1"})
        for (const char* beta_c : {"0", "1", "2"})
            rows.push_back(sweep_row(beta_c, beta_tau, "1000", "5", "9.5", "0.2"));
    const std::string two_facets = render_sweep_svg(rows);
    CHECK(count_occurrences(two_facets, "<polyline") == 8);
    CHECK(two_facets.find("avg_travel_time (C=1000 I=5)") != std::string::npos);
}

TEST_CASE("nan cells drop points without breaking the line") {
    std::vector<std::vector<std::string>> rows;
    rows.push_back(split_csv_line(sweep_csv_header()));
    rows.push_back(sweep_row("0", "1", "500", "5", "nan", "0.4"));
    rows.push_back(sweep_row("1", "1", "500", "5", "11.0", "0.5"));
    rows.push_back(sweep_row("2", "1", "500", "5", "12.0", "0.6"));
    const std::string svg = render_sweep_svg(rows);
    CHECK(count_occurrences(svg, "<polyline") == 2);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("a real sweep renders end to end") {
    SweepSpec spec;
    spec.base = default_config();
    spec.base.horizon = 20;
    spec.beta_c_values = {-1.0, 1.0};
    spec.beta_tau_values = {0.0};
    spec.capacity_values = {800, 1600};
    spec.interval_values = {5};
    spec.replications = 2;
    std::ostringstream csv;
    write_sweep_csv(csv, run_sweep(spec, 1));
    std::istringstream in(csv.str());
    const std::vector<std::vector<std::string>> rows = read_csv(in);
    CHECK(detect_plot_kind(rows[0]) == "sweep");
    const std::string svg = render_sweep_svg(rows);
    CHECK(svg.rfind("<svg", 0) == 0);
    // 2 facets x 2 panels x 1 series
    CHECK(count_occurrences(svg, "<polyline") == 4);
}

TEST_CASE("a real front renders end to end") {
    OptimizeSpec spec;
    spec.base = congested_config();
    spec.base.horizon = 20;
    spec.population = 8;
    spec.generations = 2;
    spec.replications = 1;
    std::ostringstream csv;
    write_front_csv(csv, nsga2(spec, make_simulator_objective(spec)));
    std::istringstream in(csv.str());
    const std::vector<std::vector<std::string>> rows = read_csv(in);
    CHECK(detect_plot_kind(rows[0]) == "front");
    const std::string svg = render_front_svg(rows);
    CHECK(count_occurrences(svg, "<circle") == rows.size() - 1);
}
