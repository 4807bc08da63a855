// qwire: scattering off a point impurity in a hard-wall quantum wire.
//
//   qwire sweep --epsilon 0.3 --rho0 0.01 --omega-grid 1.1pi2:8.9pi2:200
//   qwire field --field-mode threshold --mode-n 1 --threshold-m 2 --epsilon 0.25
//   qwire universality --threshold-m 2 --oracle
//   qwire oned --alpha 1 --omega-grid 0,0.25,2.5
//   qwire oracle-compare --omega 41.45 --epsilon 0.3 --rho0 0.01

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwire/cli.hpp"

int main(int argc, char** argv) {
    using namespace qwire::cli;

    CLI::App app{"Point-impurity scattering in a quantum wire"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::vector<std::string> sets;

    auto flag = [&overrides](CLI::App* sub, const std::string& name, const std::string& help) {
        sub->add_option_function<std::string>(
            "--" + name, [&overrides, name](const std::string& v) { overrides.emplace_back(name, v); }, help);
    };

    const std::pair<const char*, const char*> subcommands[] = {
        {"sweep", "transmission/reflection matrices over an energy grid"},
        {"field", "density (and components) on an (x, y) grid"},
        {"universality", "threshold coefficient across rho0 values"},
        {"oned", "1D delta and square-barrier reflection"},
        {"oracle-compare", "finite-difference lattice against the analytic amplitudes"},
    };
    for (const auto& [name, description] : subcommands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "key=value configuration file");
        flag(sub, "out", "output path (default stdout)");
        flag(sub, "format", "csv or json (JSON lines)");
        flag(sub, "epsilon", "impurity position in (0, 1)");
        flag(sub, "rho0", "impurity length scale");
        flag(sub, "mode-n", "incident mode");
        flag(sub, "threshold-m", "threshold index");
        flag(sub, "omega", "energy");
        flag(sub, "offset", "energy above (m pi)^2 when omega is not given");
        flag(sub, "omega-grid", "start:stop:count or a,b,c (suffix pi2 multiplies by pi^2)");
        flag(sub, "field-mode", "clean, defect or threshold");
        flag(sub, "rho0-list", "comma-separated rho0 values");
        flag(sub, "rho-ladder", "comma-separated oracle widths");
        flag(sub, "alpha", "delta-barrier strength");
        sub->add_flag_function(
            "--oracle", [&overrides](std::int64_t) { overrides.emplace_back("oracle", "true"); },
            "also run the finite-difference oracle");
        sub->add_option("--set", sets, "any configuration key as key=value");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        config.subcommand = app.get_subcommands().front()->get_name();
        for (const auto& [k, v] : overrides) set_option(config, k, v);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
            set_option(config, s.substr(0, eq), s.substr(eq + 1));
        }
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    }
    return run(config, std::cout, std::cerr);
}
