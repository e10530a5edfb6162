#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ptbec/scenario/records.hpp"

namespace ptbec::scenario {

struct Deviation {
    std::string quantity;
    double max_abs = 0.0;
    double rms = 0.0;
    /// max_abs relative to the largest |value| of run a in the overlap; NaN
    /// when a is identically zero and b is not.
    double max_rel = 0.0;
};

struct DeviationReport {
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t points = 0;
    std::vector<Deviation> deviations;

    /// Throws InvalidArgument for a quantity that was not compared.
    const Deviation& at(std::string_view quantity) const;
    nlohmann::json to_json() const;
};

/// Deviation of b from a at the sample times of a inside the common time
/// range, with b linearly interpolated. Compares n0..n3, j01, j12, j23 and
/// every control column present in both. Throws NoOverlap.
DeviationReport compare_runs(const TimeSeries& a, const TimeSeries& b);

}  // namespace ptbec::scenario
