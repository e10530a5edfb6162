#include "ptbec/scenario/run.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "ptbec/embedding/runner.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/scenario/compare.hpp"
#include "ptbec/variational/control.hpp"
#include "ptbec/variational/observables.hpp"

namespace ptbec::scenario {

namespace {

using nlohmann::json;

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json breakdown_json(bool occurred, double t, const std::string& reason) {
    json j{{"occurred", occurred}};
    if (occurred) {
        j["time"] = t;
        j["reason"] = reason;
    }
    return j;
}

// occupation statistics shared by every run
json occupation_summary(const TimeSeries& s) {
    const auto t = s.column("t");
    json j;
    double drift = 0.0;
    double norm0 = 0.0;
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        const auto& n = s.records[i].n;
        const double norm = n[0] + n[1] + n[2] + n[3];
        if (i == 0) norm0 = norm;
        drift = std::max(drift, std::abs(norm / norm0 - 1.0));
    }
    j["max_relative_norm_drift"] = drift;
    j["t_final"] = t.empty() ? 0.0 : t.back();
    j["samples"] = s.records.size();
    for (int k = 0; k < 4; ++k) {
        const auto n = s.column("n" + std::to_string(k));
        double dev = 0.0;
        for (double v : n) dev = std::max(dev, std::abs(v - n.front()));
        j["n" + std::to_string(k)] = {{"initial", n.front()}, {"final", n.back()}, {"max_deviation", dev},
                                      {"slope", ls_slope(t, n)}};
    }
    return j;
}

// drift of the middle wells once the ramp has ended
json post_ramp_summary(const TimeSeries& s, double t_f) {
    const auto t = s.column("t");
    std::size_t start = t.size();
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= t_f - 1e-9) {
            start = i;
            break;
        }
    if (start == t.size()) return nullptr;
    json j{{"t_start", t[start]}};
    for (int k : {1, 2}) {
        const auto n = s.column("n" + std::to_string(k));
        double dev = 0.0;
        for (std::size_t i = start; i < n.size(); ++i) dev = std::max(dev, std::abs(n[i] - n[start]));
        j["n" + std::to_string(k) + "_relative_drift"] = dev / n[start];
    }
    const auto& last = s.records.back();
    j["final_middle_asymmetry"] = std::abs(last.n[1] - last.n[2]) / last.n[1];
    return j;
}

TimeSeriesRecord fewmode_record(const embedding::EmbeddingSample& s, const embedding::EmbeddingModel& model) {
    const auto obs = fewmode::observables(s.state, embedding::four_mode_model(s.controls, model));
    TimeSeriesRecord r;
    r.t = s.t;
    for (int k = 0; k < 4; ++k) r.n[k] = obs.n(k);
    for (int k = 0; k < 3; ++k) r.j[k] = obs.j(k);
    r.gamma = s.controls.gamma;
    r.controls = {s.controls.E0, s.controls.E3, s.controls.J01, s.controls.J23};
    return r;
}

ScenarioResult run_abstract(const ScenarioConfig& c) {
    const embedding::EmbeddingModel model{1.0, Eigen::Vector4d::Constant(c.c), c.d};
    fewmode::cplx psi1;
    if (c.psi1) {
        psi1 = *c.psi1;
    } else {
        if (!(std::abs(c.gamma) < model.J12))
            throw InvalidArgument("the PT eigenstate needs |gamma| < J12; give run.psi1 explicitly");
        const double nu = std::sqrt(model.J12 * model.J12 - c.gamma * c.gamma);
        psi1 = fewmode::cplx(nu, -c.gamma) / (model.J12 * std::sqrt(2.0));
    }
    psi1 *= 1.0 + c.perturbation;
    const auto initial = embedding::build_initial_state(psi1, c.psi2, c.psi0_real, c.psi3_real, c.gamma, c.d);

    embedding::RunOptions opt;
    opt.t_end = c.t_end;
    opt.sample_dt = c.stride;
    opt.integrator = c.integrator;
    opt.max_condition = c.max_condition;
    const auto run = embedding::run_controlled(initial, embedding::GammaSchedule::constant(c.gamma), model, opt);

    ScenarioResult res;
    TimeSeries& s = res.output.series;
    s.control_names = {"E0", "E3", "J01", "J23"};
    Eigen::Vector4d max_cond = Eigen::Vector4d::Zero();
    for (const auto& smp : run.samples) {
        s.records.push_back(fewmode_record(smp, model));
        max_cond = max_cond.cwiseMax(embedding::check_conditions(smp.state, smp.controls).cwiseAbs());
    }
    if (run.breakdown) s.records.back().breakdown = true;

    json& j = res.output.summary;
    j["scenario"] = std::string(to_string(c.scenario));
    j["model"] = {{"J12", model.J12}, {"gamma", c.gamma}, {"d", c.d}, {"c", c.c}};
    j["breakdown"] = breakdown_json(run.breakdown, run.breakdown_time, run.breakdown_reason);
    j["occupations"] = occupation_summary(s);
    j["max_condition_residuals"] = vec_json(max_cond);

    const auto t = s.column("t");
    const auto n1 = s.column("n1");
    bool monotone = true;
    std::vector<double> logn;
    for (std::size_t i = 0; i < n1.size(); ++i) {
        if (i > 0 && n1[i] < n1[i - 1]) monotone = false;
        logn.push_back(std::log(n1[i]));
    }
    j["n1_growth"] = {{"factor", *std::max_element(n1.begin(), n1.end()) / n1.front()},
                      {"monotone", monotone},
                      {"log_slope", ls_slope(t, logn)}};
    j["exit_status"] = run.breakdown ? breakdown : completed;
    res.exit_status = run.breakdown ? breakdown : completed;
    return res;
}

json trap_units_json(const TrapModel& tm) {
    const double e0_hz = tm.units.E0() / gauss::UnitSystem::planck;
    return {{"w_z_m", tm.units.w_z}, {"mass_kg", tm.units.mass},   {"N", tm.units.N},
            {"a_scat_m", tm.units.a_scat}, {"E0_Hz", e0_hz}, {"t0_ms", tm.units.t0() * 1e3},
            {"g", tm.g}};
}

ScenarioResult run_adiabatic_fewmode(const ScenarioConfig& c) {
    const TrapModel tm = prepare_trap(c);
    const auto& em = tm.model;
    const double e_mid = 0.5 * (em.onsite(1) + em.onsite(2));
    if (std::abs(em.onsite(1) - em.onsite(2)) > 1e-8 * std::max(1.0, std::abs(e_mid)))
        throw InvalidArgument("adiabatic_fewmode needs degenerate inner wells");

    fewmode::TridiagonalComplexModel hm;
    hm.onsite = (em.onsite.array() - e_mid).matrix().cast<fewmode::cplx>();
    hm.coupling = em.tunneling;
    hm.nonlinear = em.interaction;
    const auto gs = fewmode::ground_state(hm);
    const auto obs0 = fewmode::observables(gs.state, hm);
    const double d = em.tunneling(0) / obs0.C(1, 3);
    const embedding::EmbeddingModel model{em.tunneling(1), em.interaction, d};

    embedding::RunOptions opt;
    opt.t_end = c.t_end;
    opt.sample_dt = c.stride;
    opt.integrator = c.integrator;
    opt.max_condition = c.max_condition;
    const double gamma_f = c.gamma * em.tunneling(1);
    auto run = embedding::run_controlled(gs.state, embedding::GammaSchedule::ramp({gamma_f, c.t_f}), model, opt);

    ScenarioResult res;
    TimeSeries& s = res.output.series;
    s.control_names = {"E0", "E3", "J01", "J23", "V0", "V3", "delta0", "delta1", "delta2", "delta3"};
    gauss::WellPotentialSpec wells = tm.wells;
    gauss::GaussianBasisSet basis = tm.fit.basis;
    double max_shift = 0.0;
    for (const auto& smp : run.samples) {
        TimeSeriesRecord r = fewmode_record(smp, model);
        gauss::EffectiveModel target = em;
        target.onsite(0) = smp.controls.E0 + e_mid;
        target.onsite(3) = smp.controls.E3 + e_mid;
        target.tunneling(0) = smp.controls.J01;
        target.tunneling(2) = smp.controls.J23;
        try {
            auto inv = gauss::invert_to_potential(target, wells, basis, tm.g, {}, tm.transform);
            wells = inv.wells;
            basis = inv.basis;
        } catch (const Error& e) {
            run.breakdown = true;
            run.breakdown_time = smp.t;
            run.breakdown_reason = std::string("trap inversion failed: ") + e.what();
            break;
        }
        const Eigen::VectorXd delta = wells.positions - tm.wells.positions;
        max_shift = std::max(max_shift, delta.cwiseAbs().maxCoeff());
        r.controls.insert(r.controls.end(), {wells.depths(0), wells.depths(3), delta(0), delta(1), delta(2), delta(3)});
        s.records.push_back(std::move(r));
    }
    if (s.records.empty()) throw Error("no sample could be mapped to a trap");
    if (run.breakdown) s.records.back().breakdown = true;

    json& j = res.output.summary;
    j["scenario"] = std::string(to_string(c.scenario));
    j["trap"] = describe_trap(tm);
    j["ground_state"] = {{"n", vec_json(obs0.n)}, {"mu", gs.mu + e_mid}, {"energy", gs.energy}};
    j["embedding"] = {{"energy_reference", e_mid}, {"d", d}, {"J12", model.J12}};
    j["ramp"] = {{"gamma_f", gamma_f}, {"gamma_over_J12", c.gamma}, {"t_f", c.t_f}};
    j["breakdown"] = breakdown_json(run.breakdown, run.breakdown_time, run.breakdown_reason);
    j["occupations"] = occupation_summary(s);
    j["post_ramp"] = post_ramp_summary(s, c.t_f);
    j["max_well_displacement"] = max_shift;
    res.exit_status = run.breakdown ? breakdown : completed;
    j["exit_status"] = res.exit_status;
    return res;
}

ScenarioResult run_adiabatic_variational(const ScenarioConfig& c) {
    const TrapModel tm = prepare_trap(c);
    const variational::GpeModel gm{tm.wells, tm.g, false};
    const auto fp =
        variational::relax_to_fixed_point(variational::VariationalState::from_basis(tm.fit.basis, tm.fit.d), gm);
    const double gamma_f = c.gamma * tm.model.tunneling(1);

    variational::VariationalScenario sc;
    sc.model = gm;
    sc.initial = fp.state;
    sc.mu = fp.mu;
    sc.schedule = embedding::GammaSchedule::ramp({gamma_f, c.t_f});
    sc.t_end = c.t_end;
    sc.controller = c.controller;
    for (double ts : {0.0, 0.5 * c.t_f, c.t_f, c.t_end})
        if (ts <= c.t_end && (sc.snapshot_times.empty() || ts > sc.snapshot_times.back())) sc.snapshot_times.push_back(ts);
    const auto run = variational::run_variational_scenario(sc);

    ScenarioResult res;
    TimeSeries& s = res.output.series;
    s.control_names = {"V0", "V3", "delta0", "delta1", "delta2", "delta3"};
    const auto every = static_cast<std::size_t>(std::llround(c.stride / c.controller.dt));
    double max_target = 0.0;
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
        const auto& smp = run.samples[i];
        const double target01 = 2.0 * smp.gamma * smp.observables.n(1);
        const double target23 = 2.0 * smp.gamma * smp.observables.n(2);
        if (i > 0)
            max_target = std::max({max_target, std::abs(smp.observables.j(0) - target01),
                                   std::abs(smp.observables.j(2) - target23)});
        if (i % every != 0 && i + 1 != run.samples.size()) continue;
        TimeSeriesRecord r;
        r.t = smp.t;
        for (int k = 0; k < 4; ++k) r.n[k] = smp.observables.n(k);
        for (int k = 0; k < 3; ++k) r.j[k] = smp.observables.j(k);
        r.gamma = smp.gamma;
        r.controls = {smp.V0, smp.V3, smp.delta(0), smp.delta(1), smp.delta(2), smp.delta(3)};
        s.records.push_back(std::move(r));
    }
    if (run.breakdown) s.records.back().breakdown = true;

    const double zlo = tm.wells.positions(0) - 3.0 * tm.wells.wz;
    const double zhi = tm.wells.positions(tm.wells.size() - 1) + 3.0 * tm.wells.wz;
    const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(401, zlo, zhi);
    for (const auto& snap : run.snapshots) {
        const Eigen::VectorXd rho = variational::density_profile(snap.state, z);
        res.output.profiles.push_back({snap.t, std::vector<double>(z.data(), z.data() + z.size()),
                                       std::vector<double>(rho.data(), rho.data() + rho.size())});
    }

    const auto box0 = run.samples.front().observables;
    const auto amp = gauss::effective_amplitudes(tm.fit.d, tm.fit.basis, tm.transform);
    double rel = 0.0;
    for (int k = 0; k < 4; ++k) rel = std::max(rel, std::abs(box0.n(k) - amp.n(k)) / amp.n(k));

    json& j = res.output.summary;
    j["scenario"] = std::string(to_string(c.scenario));
    j["trap"] = describe_trap(tm);
    j["fixed_point"] = {{"mu", fp.mu}, {"residual", fp.residual}, {"iterations", fp.iterations},
                        {"energy", variational::total_energy(fp.state, gm)}};
    j["initial_occupations"] = {{"box", vec_json(box0.n)}, {"few_mode", vec_json(amp.n)}, {"max_relative_gap", rel}};
    j["ramp"] = {{"gamma_f", gamma_f}, {"gamma_over_J12", c.gamma}, {"t_f", c.t_f}, {"dt", c.controller.dt}};
    j["breakdown"] = breakdown_json(run.breakdown, run.breakdown_time, run.breakdown_reason);
    j["occupations"] = occupation_summary(s);
    j["post_ramp"] = post_ramp_summary(s, c.t_f);
    j["max_target_residual"] = max_target;
    double drift = 0.0;
    for (const auto& smp : run.samples) drift = std::max(drift, std::abs(smp.norm / run.samples.front().norm - 1.0));
    j["max_relative_norm_drift"] = drift;
    res.exit_status = run.breakdown ? breakdown : completed;
    j["exit_status"] = res.exit_status;
    return res;
}

ScenarioResult run_compare(const ScenarioConfig& c) {
    ScenarioResult res;
    TimeSeries a = read_csv(c.compare_a);
    TimeSeries b = read_csv(c.compare_b);
    const auto rep = compare_runs(a, b);
    res.output.summary = {{"scenario", "compare"},
                          {"a", c.compare_a.string()},
                          {"b", c.compare_b.string()},
                          {"comparison", rep.to_json()},
                          {"exit_status", completed}};
    res.output.extra_series.emplace_back("a", std::move(a));
    res.output.extra_series.emplace_back("b", std::move(b));
    return res;
}

}  // namespace

TrapModel prepare_trap(const ScenarioConfig& config) {
    if (!is_physical(config.scenario))
        throw InvalidArgument(fmt::format("scenario '{}' has no trap", to_string(config.scenario)));
    TrapModel tm;
    tm.wells = config.trap;
    tm.wells.validate();
    tm.units = config.units;
    tm.g = tm.units.g();
    tm.transform = config.transform;
    tm.fit = gauss::fit_ground_state(tm.wells, tm.g, gauss::GaussianBasisSet::harmonic_guess(tm.wells));
    tm.model = gauss::effective_model(tm.fit.basis, tm.wells, tm.g, tm.transform);
    return tm;
}

nlohmann::json describe_trap(const TrapModel& tm) {
    const double hz = tm.units.E0() / gauss::UnitSystem::planck;
    const auto amp = gauss::effective_amplitudes(tm.fit.d, tm.fit.basis, tm.transform);
    json j;
    j["units"] = trap_units_json(tm);
    j["wells"] = {{"depths", vec_json(tm.wells.depths)}, {"positions", vec_json(tm.wells.positions)},
                  {"wx", tm.wells.wx}, {"wy", tm.wells.wy}, {"wz", tm.wells.wz}};
    j["fit"] = {{"energy", tm.fit.energy},
                {"stationarity", tm.fit.stationarity},
                {"iterations", tm.fit.iterations},
                {"centres", vec_json(tm.fit.basis.q)},
                {"az", vec_json(tm.fit.basis.az.real())},
                {"n", vec_json(amp.n)}};
    j["effective"] = {{"transform", tm.transform == gauss::AmplitudeTransform::exact ? "exact" : "nearest_neighbor"},
                      {"onsite", vec_json(tm.model.onsite)},
                      {"tunneling", vec_json(tm.model.tunneling)},
                      {"interaction", vec_json(tm.model.interaction)},
                      {"onsite_Hz", vec_json(tm.model.onsite * hz)},
                      {"tunneling_Hz", vec_json(tm.model.tunneling * hz)},
                      {"interaction_Hz", vec_json(tm.model.interaction * hz)}};
    return j;
}

std::string parameter_table(const TrapModel& tm) {
    const double hz = tm.units.E0() / gauss::UnitSystem::planck;
    std::string out = fmt::format("E0 = {:.6g} Hz * h, t0 = {:.6g} ms, g = {:.6g}, fit energy = {:.10g} E0\n", hz,
                                  tm.units.t0() * 1e3, tm.g, tm.fit.energy);
    out += fmt::format("{:>4} {:>16} {:>16} {:>14} {:>14}\n", "k", "E_k [E0]", "c_k [E0]", "E_k [Hz]", "c_k [Hz]");
    for (Eigen::Index k = 0; k < tm.model.onsite.size(); ++k)
        out += fmt::format("{:>4} {:>16.10g} {:>16.10g} {:>14.6g} {:>14.6g}\n", k, tm.model.onsite(k),
                           tm.model.interaction(k), tm.model.onsite(k) * hz, tm.model.interaction(k) * hz);
    out += fmt::format("{:>4} {:>16} {:>14}\n", "k", "J_k,k+1 [E0]", "J [Hz]");
    for (Eigen::Index k = 0; k < tm.model.tunneling.size(); ++k)
        out += fmt::format("{:>4} {:>16.10g} {:>14.6g}\n", fmt::format("{}{}", k, k + 1), tm.model.tunneling(k),
                           tm.model.tunneling(k) * hz);
    return out;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    switch (config.scenario) {
        case ScenarioKind::stationary:
        case ScenarioKind::oscillatory:
        case ScenarioKind::collapse:
            return run_abstract(config);
        case ScenarioKind::adiabatic_fewmode:
            return run_adiabatic_fewmode(config);
        case ScenarioKind::adiabatic_variational:
            return run_adiabatic_variational(config);
        case ScenarioKind::compare:
            return run_compare(config);
    }
    throw InvalidArgument("unknown scenario");
}

}  // namespace ptbec::scenario
