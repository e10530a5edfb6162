#include "ptbec/scenario/compare.hpp"

#include <algorithm>
#include <cmath>

#include "ptbec/errors.hpp"

namespace ptbec::scenario {

const Deviation& DeviationReport::at(std::string_view quantity) const {
    for (const auto& d : deviations)
        if (d.quantity == quantity) return d;
    throw InvalidArgument("quantity '" + std::string(quantity) + "' was not compared");
}

nlohmann::json DeviationReport::to_json() const {
    nlohmann::json j;
    j["t_start"] = t_start;
    j["t_end"] = t_end;
    j["points"] = points;
    for (const auto& d : deviations) j["deviations"][d.quantity] = {{"max_abs", d.max_abs}, {"rms", d.rms}, {"max_rel", d.max_rel}};
    return j;
}

DeviationReport compare_runs(const TimeSeries& a, const TimeSeries& b) {
    if (a.records.empty() || b.records.empty()) throw NoOverlap("cannot compare an empty run");
    const std::vector<double> ta = a.column("t"), tb = b.column("t");
    for (std::size_t i = 1; i < tb.size(); ++i)
        if (!(tb[i] > tb[i - 1])) throw InvalidArgument("run b times are not strictly increasing");
    const double lo = std::max(ta.front(), tb.front()), hi = std::min(ta.back(), tb.back());
    if (!(hi >= lo)) throw NoOverlap("runs do not overlap in time");

    std::vector<std::string> names{"n0", "n1", "n2", "n3", "j01", "j12", "j23"};
    for (const auto& c : a.control_names)
        if (b.has_column(c)) names.push_back(c);

    DeviationReport rep;
    rep.t_start = lo;
    rep.t_end = hi;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ta.size(); ++i)
        if (ta[i] >= lo && ta[i] <= hi) idx.push_back(i);
    rep.points = idx.size();
    if (idx.empty()) throw NoOverlap("no sample of run a lies in the common time range");

    for (const auto& name : names) {
        const std::vector<double> ya = a.column(name), yb = b.column(name);
        Deviation d;
        d.quantity = name;
        double peak = 0.0, sq = 0.0;
        for (std::size_t i : idx) {
            const double t = ta[i];
            auto it = std::lower_bound(tb.begin(), tb.end(), t);
            double vb;
            if (it == tb.end()) {
                vb = yb.back();
            } else if (*it == t || it == tb.begin()) {
                vb = yb[static_cast<std::size_t>(it - tb.begin())];
            } else {
                const auto k = static_cast<std::size_t>(it - tb.begin());
                const double w = (t - tb[k - 1]) / (tb[k] - tb[k - 1]);
                vb = (1.0 - w) * yb[k - 1] + w * yb[k];
            }
            const double dev = std::abs(vb - ya[i]);
            d.max_abs = std::max(d.max_abs, dev);
            sq += dev * dev;
            peak = std::max(peak, std::abs(ya[i]));
        }
        d.rms = std::sqrt(sq / static_cast<double>(idx.size()));
        d.max_rel = peak > 0.0 ? d.max_abs / peak : (d.max_abs > 0.0 ? std::nan("") : 0.0);
        rep.deviations.push_back(d);
    }
    return rep;
}

}  // namespace ptbec::scenario
