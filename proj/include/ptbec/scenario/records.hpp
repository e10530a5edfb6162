#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ptbec/scenario/config.hpp"

namespace ptbec::scenario {

struct TimeSeriesRecord {
    double t = 0.0;
    std::array<double, 4> n{};
    /// j01, j12, j23
    std::array<double, 3> j{};
    /// Values for TimeSeries::control_names, in order.
    std::vector<double> controls;
    double gamma = 0.0;
    bool breakdown = false;
};

struct TimeSeries {
    std::vector<std::string> control_names;
    std::vector<TimeSeriesRecord> records;

    /// t, n0..n3, j01, j12, j23, controls..., gamma, breakdown
    std::vector<std::string> columns() const;
    /// Column by name (t, n0, ..., any control, gamma). Throws InvalidArgument.
    std::vector<double> column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

/// Header line plus one row per record, values printed with 17 significant digits.
std::string to_csv(const TimeSeries& series);
/// Inverse of to_csv. Throws ParseError on a malformed table.
TimeSeries parse_csv(std::string_view text);
TimeSeries read_csv(const std::filesystem::path& path);

/// A density snapshot |psi(0, 0, z)|^2 for the wave-function figure.
struct Profile {
    double t = 0.0;
    std::vector<double> z;
    std::vector<double> density;
};

struct ScenarioOutput {
    /// Written as timeseries.csv unless the scenario is a comparison.
    TimeSeries series;
    /// Additional tables written as <name>.csv (the two inputs of a comparison).
    std::vector<std::pair<std::string, TimeSeries>> extra_series;
    nlohmann::json summary;
    std::vector<Profile> profiles;
};

/// Writes timeseries.csv, summary.json and, if requested, one gnuplot script
/// per figure panel (plus density.csv for variational runs). Throws IoError.
std::vector<std::filesystem::path> write_outputs(const ScenarioOutput& out, ScenarioKind kind,
                                                 const std::filesystem::path& dir, bool emit_plots);

/// File name and text of each plot script for a scenario.
std::vector<std::pair<std::string, std::string>> plot_scripts(ScenarioKind kind, bool with_profiles);

}  // namespace ptbec::scenario
