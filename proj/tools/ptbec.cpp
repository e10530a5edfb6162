#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "ptbec/errors.hpp"
#include "ptbec/scenario/compare.hpp"
#include "ptbec/scenario/run.hpp"

namespace {

using namespace ptbec::scenario;

int cmd_run(const std::string& config_path, const std::string& out, bool emit_plots) {
    ScenarioConfig c = load_config(config_path);
    if (!out.empty()) c.output_dir = out;
    if (emit_plots) c.emit_plots = true;
    const ScenarioResult res = run_scenario(c);
    const auto files = write_outputs(res.output, c.scenario, c.output_dir, c.emit_plots);
    std::string state = "completed";
    if (res.exit_status == breakdown) {
        const auto& b = res.output.summary["breakdown"];
        state = "breakdown at t = " + b["time"].dump() + " (" + b["reason"].get<std::string>() + ")";
    }
    std::cout << to_string(c.scenario) << ": " << state << "; wrote " << files.size() << " files to "
              << c.output_dir.string() << "\n";
    return res.exit_status;
}

int cmd_compare(const std::string& a, const std::string& b) {
    const TimeSeries ta = read_csv(a);
    const TimeSeries tb = read_csv(b);
    const auto rep = compare_runs(ta, tb);
    std::cout << rep.to_json().dump(2) << "\n";
    return completed;
}

int cmd_fit(const std::string& config_path) {
    const TrapModel tm = prepare_trap(load_config(config_path));
    const auto j = describe_trap(tm);
    std::cout << nlohmann::json{{"units", j["units"]}, {"wells", j["wells"]}, {"fit", j["fit"]}}.dump(2) << "\n";
    return completed;
}

int cmd_params(const std::string& config_path) {
    std::cout << parameter_table(prepare_trap(load_config(config_path)));
    return completed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PT-symmetric four-well BEC scenarios"};
    app.require_subcommand(1);

    std::string config, out, a, b;
    bool emit_plots = false;
    auto* run = app.add_subcommand("run", "run a scenario config and write its outputs");
    run->add_option("--config", config, "scenario config file")->required();
    run->add_option("--out", out, "output directory (overrides output.dir)");
    run->add_flag("--emit-plots", emit_plots, "also write gnuplot scripts");

    auto* compare = app.add_subcommand("compare", "deviation between two timeseries.csv files");
    compare->add_option("--a", a, "reference run")->required();
    compare->add_option("--b", b, "compared run")->required();

    auto* fit = app.add_subcommand("fit", "fit the trap ground state and print it");
    fit->add_option("--config", config, "scenario config file")->required();
    auto* params = app.add_subcommand("params", "print the effective few-mode parameters");
    params->add_option("--config", config, "scenario config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : failed;
    }

    try {
        if (*run) return cmd_run(config, out, emit_plots);
        if (*compare) return cmd_compare(a, b);
        if (*fit) return cmd_fit(config);
        if (*params) return cmd_params(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failed;
    }
    return failed;
}
