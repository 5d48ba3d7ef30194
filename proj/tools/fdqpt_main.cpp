#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fdqpt/commands.hpp"
#include "fdqpt/errors.hpp"
#include "fdqpt/run_config.hpp"

namespace {

struct cli_state {
    std::string config_path;
    std::vector<std::string> set_entries;
    std::map<std::string, std::string> values;                       // textual field overrides
    std::vector<std::pair<std::string, CLI::Option*>> bound;         // config key -> option
    std::vector<std::pair<std::string, CLI::Option*>> bound_flags;   // config key -> flag
};

void attach_common_options(CLI::App* sub, cli_state& st) {
    sub->add_option("--config", st.config_path, "configuration file (key=value lines, # comments)");
    sub->add_option("--set", st.set_entries, "override a single key=value entry (repeatable)")
        ->take_all();

    auto bind = [&](const std::string& flag, const std::string& key, const std::string& help) {
        st.bound.emplace_back(key, sub->add_option(flag, st.values[key], help));
    };
    bind("--jx-over-pi", "jx_over_pi", "first-half quench amplitude, units of pi");
    bind("--jy-over-pi", "jy_over_pi", "second-half quench amplitude, units of pi");
    bind("--band-v", "band_v", "Floquet band sign, +1 or -1");
    bind("--k-count", "k_count", "momentum samples");
    bind("--s-count", "s_count", "time samples per driving period");
    bind("--periods", "periods", "driving periods covered by time grids");
    bind("--dtop-range", "dtop_range", "winding range: reduced or full");
    bind("--dtop-k-count", "dtop_k_count", "base winding channel resolution");
    bind("--theta-cusp", "theta_cusp", "curvature outlier threshold");
    bind("--out-dir", "out_dir", "output directory");
    bind("--workers", "workers", "sweep worker threads (0 = automatic)");
    bind("--sweep-jx-min", "sweep_jx_min_over_pi", "sweep: first jx/pi value");
    bind("--sweep-jx-max", "sweep_jx_max_over_pi", "sweep: last jx/pi value");
    bind("--sweep-jx-step", "sweep_jx_step_over_pi", "sweep: jx/pi increment");
    bind("--sweep-jy-min", "sweep_jy_min_over_pi", "sweep: first jy/pi value");
    bind("--sweep-jy-max", "sweep_jy_max_over_pi", "sweep: last jy/pi value");
    bind("--sweep-jy-step", "sweep_jy_step_over_pi", "sweep: jy/pi increment");

    st.bound_flags.emplace_back("export_g",
                                sub->add_flag("--export-g", "also write the probability matrix"));
    st.bound_flags.emplace_back(
        "export_phase", sub->add_flag("--export-phase", "also write the phase decomposition"));
}

fdqpt::run_config build_config(const cli_state& st) {
    fdqpt::run_config cfg;
    if (!st.config_path.empty()) cfg = fdqpt::parse_config_file(st.config_path);
    for (const std::string& entry : st.set_entries) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw fdqpt::config_error("--set expects key=value, got '" + entry + "'");
        }
        fdqpt::apply_override(cfg, entry.substr(0, eq), entry.substr(eq + 1));
    }
    for (const auto& [key, option] : st.bound) {
        if (option->count() > 0) fdqpt::apply_override(cfg, key, st.values.at(key));
    }
    for (const auto& [key, flag] : st.bound_flags) {
        if (flag->count() > 0) fdqpt::apply_override(cfg, key, "true");
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodically quenched two-band simulator: quasienergy spectra, return-rate "
                 "functions with cusp detection, critical-point enumeration and "
                 "geometric-phase windings"};
    app.require_subcommand(1);

    cli_state st;
    std::function<void(const fdqpt::run_config&)> action;

    struct command_def {
        const char* name;
        const char* help;
        void (*fn)(const fdqpt::run_config&);
    };
    const command_def defs[] = {
        {"spectrum", "quasienergy and unit vector over the momentum grid", fdqpt::cmd_spectrum},
        {"rate", "rate function over one period with cusp detection", fdqpt::cmd_rate},
        {"dtop", "geometric-phase winding over the configured periods", fdqpt::cmd_dtop},
        {"critical", "closed-form critical points, touchings, boundary check", fdqpt::cmd_critical},
        {"phase-diagram", "boundary/touching/critical counts over a (jx, jy) sweep",
         fdqpt::cmd_phase_diagram},
        {"sweep", "rate + cusp run for every sweep point, bounded worker pool", fdqpt::cmd_sweep},
    };
    for (const auto& def : defs) {
        CLI::App* sub = app.add_subcommand(def.name, def.help);
        attach_common_options(sub, st);
        sub->callback([&action, fn = def.fn] { action = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        action(build_config(st));
    } catch (const fdqpt::degeneracy_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const fdqpt::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const fdqpt::parameter_error& e) {  // includes config_error
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const fdqpt::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
    return 0;
}
