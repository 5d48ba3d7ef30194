#include "fdqpt/run_config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "fdqpt/errors.hpp"
#include "fdqpt/grids.hpp"

namespace fdqpt {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

double parse_double(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double parsed = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(parsed)) {
        throw config_error("configuration key '" + key + "' expects a finite number, got '" +
                           value + "'");
    }
    return parsed;
}

int parse_int(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const long parsed = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || parsed < -2147483647L || parsed > 2147483647L) {
        throw config_error("configuration key '" + key + "' expects an integer, got '" + value +
                           "'");
    }
    return static_cast<int>(parsed);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw config_error("configuration key '" + key + "' expects true or false, got '" + value +
                       "'");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace

void apply_override(run_config& cfg, const std::string& key, const std::string& value) {
    if (key == "protocol") {
        cfg.protocol = value;
    } else if (key == "jx_over_pi") {
        cfg.jx_over_pi = parse_double(key, value);
    } else if (key == "jy_over_pi") {
        cfg.jy_over_pi = parse_double(key, value);
    } else if (key == "band_v") {
        cfg.band_v = parse_int(key, value);
    } else if (key == "k_count") {
        cfg.k_count = parse_int(key, value);
    } else if (key == "s_count") {
        cfg.s_count = parse_int(key, value);
    } else if (key == "periods") {
        cfg.periods = parse_int(key, value);
    } else if (key == "dtop_range") {
        cfg.dtop_range = value;
    } else if (key == "dtop_k_count") {
        cfg.dtop_k_count = parse_int(key, value);
    } else if (key == "theta_cusp") {
        cfg.theta_cusp = parse_double(key, value);
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else if (key == "export_g") {
        cfg.export_g = parse_bool(key, value);
    } else if (key == "export_phase") {
        cfg.export_phase = parse_bool(key, value);
    } else if (key == "workers") {
        cfg.workers = parse_int(key, value);
    } else if (key == "sweep_jx_min_over_pi") {
        cfg.sweep_jx_min_over_pi = parse_double(key, value);
    } else if (key == "sweep_jx_max_over_pi") {
        cfg.sweep_jx_max_over_pi = parse_double(key, value);
    } else if (key == "sweep_jx_step_over_pi") {
        cfg.sweep_jx_step_over_pi = parse_double(key, value);
    } else if (key == "sweep_jy_min_over_pi") {
        cfg.sweep_jy_min_over_pi = parse_double(key, value);
    } else if (key == "sweep_jy_max_over_pi") {
        cfg.sweep_jy_max_over_pi = parse_double(key, value);
    } else if (key == "sweep_jy_step_over_pi") {
        cfg.sweep_jy_step_over_pi = parse_double(key, value);
    } else {
        throw config_error("unknown configuration key '" + key + "'");
    }
}

run_config parse_config_text(const std::string& text) {
    run_config cfg;
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("configuration line " + std::to_string(line_no) +
                               " is not of the form key=value");
        }
        apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

run_config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read configuration file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void validate(const run_config& cfg) {
    if (cfg.protocol != "pql") {
        throw config_error("unsupported protocol '" + cfg.protocol + "' (expected pql)");
    }
    if (!(cfg.jx_over_pi > 0.0) || !(cfg.jy_over_pi > 0.0)) {
        throw config_error("quench amplitudes must be positive");
    }
    if (cfg.band_v != -1 && cfg.band_v != 1) {
        throw config_error("band_v must be +1 or -1");
    }
    if (cfg.k_count < 2) throw config_error("k_count must be at least 2");
    if (cfg.s_count < 2) throw config_error("s_count must be at least 2");
    if (cfg.periods < 1) throw config_error("periods must be at least 1");
    parse_dtop_range(cfg.dtop_range);
    if (cfg.dtop_k_count < 2) throw config_error("dtop_k_count must be at least 2");
    if (!(cfg.theta_cusp > 0.0)) throw config_error("theta_cusp must be positive");
    if (cfg.workers < 0) throw config_error("workers must be non-negative");
}

std::string serialize_config(const run_config& cfg) {
    std::ostringstream out;
    out << "protocol = " << cfg.protocol << '\n';
    out << "jx_over_pi = " << format_double(cfg.jx_over_pi) << '\n';
    out << "jy_over_pi = " << format_double(cfg.jy_over_pi) << '\n';
    out << "band_v = " << cfg.band_v << '\n';
    out << "k_count = " << cfg.k_count << '\n';
    out << "s_count = " << cfg.s_count << '\n';
    out << "periods = " << cfg.periods << '\n';
    out << "dtop_range = " << cfg.dtop_range << '\n';
    out << "dtop_k_count = " << cfg.dtop_k_count << '\n';
    out << "theta_cusp = " << format_double(cfg.theta_cusp) << '\n';
    out << "out_dir = " << cfg.out_dir << '\n';
    out << "export_g = " << (cfg.export_g ? "true" : "false") << '\n';
    out << "export_phase = " << (cfg.export_phase ? "true" : "false") << '\n';
    out << "workers = " << cfg.workers << '\n';
    out << "sweep_jx_min_over_pi = " << format_double(cfg.sweep_jx_min_over_pi) << '\n';
    out << "sweep_jx_max_over_pi = " << format_double(cfg.sweep_jx_max_over_pi) << '\n';
    out << "sweep_jx_step_over_pi = " << format_double(cfg.sweep_jx_step_over_pi) << '\n';
    out << "sweep_jy_min_over_pi = " << format_double(cfg.sweep_jy_min_over_pi) << '\n';
    out << "sweep_jy_max_over_pi = " << format_double(cfg.sweep_jy_max_over_pi) << '\n';
    out << "sweep_jy_step_over_pi = " << format_double(cfg.sweep_jy_step_over_pi) << '\n';
    return out.str();
}

quench_protocol make_protocol(const run_config& cfg) {
    validate(cfg);
    return make_pql(cfg.jx_over_pi * k_pi, cfg.jy_over_pi * k_pi);
}

std::vector<double> make_time_grid(const run_config& cfg) {
    return uniform_grid(0.0, driving_period * cfg.periods, cfg.s_count * cfg.periods);
}

std::vector<double> single_period_grid(const run_config& cfg) {
    return uniform_grid(0.0, driving_period, cfg.s_count);
}

dtop_range parse_dtop_range(const std::string& name) {
    if (name == "reduced") return dtop_range::reduced;
    if (name == "full") return dtop_range::full;
    throw config_error("dtop_range must be 'reduced' or 'full', got '" + name + "'");
}

std::vector<double> sweep_values(double min_value, double max_value, double step) {
    if (!(step > 0.0)) throw config_error("sweep step must be positive");
    if (max_value < min_value) throw config_error("sweep range is empty");
    std::vector<double> values;
    for (int i = 0;; ++i) {
        const double v = min_value + i * step;
        if (v > max_value + 1e-9 * step) break;
        values.push_back(v);
    }
    return values;
}

}  // namespace fdqpt
