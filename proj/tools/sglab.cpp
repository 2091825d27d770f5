#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "sglab_app.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sglab: sine-Gordon / Thirring numerical laboratory"};
    app.set_version_flag("--version", std::string(SGLAB_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out, action;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<long long> samples;
    bool print_config = false;

    app.add_option("-c,--config", config_path, "JSON config file, merged over defaults");
    app.add_option("-o,--out", out, "output directory (default $SGLAB_OUT or ./sglab_out)");
    app.add_option("-s,--set", sets, "override, e.g. --set smatrix.k=1")->take_all();
    app.add_option("--seed", seed, "quadrature.seed");
    app.add_option("--samples", samples, "quadrature.samples");
    app.add_flag("--print-config", print_config, "print the merged config and exit");

    // flag -> dotted config key, per subcommand
    const std::map<std::string, std::vector<std::pair<std::string, std::string>>> flags{
        {"propagator", {{"kernel", "propagator.kernel"}, {"dt", "propagator.dt"}, {"dx", "propagator.dx"},
                        {"mu", "propagator.mu"}, {"eps", "propagator.eps"}, {"pairs", "propagator.pairs"}}},
        {"state", {{"pairs", "state.pairs"}, {"width", "psi.width"}, {"r", "model.r"}}},
        {"smatrix", {{"k", "smatrix.k"}, {"n-max", "smatrix.n_max"}, {"pairs", "smatrix.pairs"},
                     {"order", "smatrix.order"}, {"seeds", "smatrix.seeds"}, {"a", "model.a"}, {"hbar", "model.hbar"}}},
        {"bogoliubov", {{"k", "bogoliubov.k"}, {"a", "model.a"}, {"hbar", "model.hbar"}}},
        {"quasiequiv", {{"ell", "quasiequiv.ell"}, {"m", "quasiequiv.m"}, {"r", "model.r"},
                        {"doublings", "quasiequiv.doublings"}, {"trials", "quasiequiv.trials"}}},
        {"thirring", {{"configs", "thirring.configs"}, {"s0", "thirring.s0"}, {"steps", "thirring.steps"}}},
        {"report", {}},
    };
    std::map<std::string, std::string> flag_values;
    for (const auto& c : sglab::commands()) {
        auto* sub = app.add_subcommand(c);
        if (c != "report" && c != "bogoliubov") sub->add_option("action", action, "sub-action");
        for (const auto& [f, key] : flags.at(c)) sub->add_option("--" + f, flag_values[key], key);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : sglab::kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    sglab::json cfg;
    try {
        const sglab::json file = config_path.empty() ? sglab::json() : sglab::load_config_file(config_path);
        if (seed) sets.push_back("quadrature.seed=" + std::to_string(*seed));
        if (samples) sets.push_back("quadrature.samples=" + std::to_string(*samples));
        for (const auto& [key, v] : flag_values)
            if (!v.empty()) sets.push_back(key + "=" + v);
        if (!action.empty()) sets.push_back(command + ".action=\"" + action + "\"");
        cfg = sglab::merged_config(file, sets);
    } catch (const std::exception& e) {
        std::cerr << "sglab: " << e.what() << "\n";
        return sglab::kExitConfig;
    }
    if (print_config) {
        std::cout << cfg.dump(2) << "\n";
        return 0;
    }

    const std::string dir = sglab::out_dir(out);
    sglab::Record r;
    const int rc = sglab::run(command, cfg, dir, &r);
    std::cout << command << " " << r.action << ": " << (r.pass() ? "PASS" : "FAIL");
    if (const std::string v = r.values.dump(); v.size() <= 400) std::cout << "\n  " << v;
    for (const auto& [k, v] : r.verdicts) std::cout << "\n  " << (v ? "ok   " : "FAIL ") << k;
    if (!r.error.empty()) std::cout << "\n  error: " << r.error;
    std::cout << "\n  -> " << (std::filesystem::path(dir) / (command + ".json")).string() << "\n";
    return rc;
}
