#include "fdqpt/commands.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fdqpt/criticality.hpp"
#include "fdqpt/errors.hpp"
#include "fdqpt/floquet.hpp"
#include "fdqpt/geometry.hpp"
#include "fdqpt/grids.hpp"
#include "fdqpt/observables.hpp"

namespace fdqpt {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr double boundary_tolerance = 1e-9;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw io_error("failed while writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const ordered_json& doc) {
    write_file(path, doc.dump(2) + "\n");
}

ordered_json config_json(const run_config& cfg) {
    ordered_json j;
    j["protocol"] = cfg.protocol;
    j["jx_over_pi"] = cfg.jx_over_pi;
    j["jy_over_pi"] = cfg.jy_over_pi;
    j["band_v"] = cfg.band_v;
    j["k_count"] = cfg.k_count;
    j["s_count"] = cfg.s_count;
    j["periods"] = cfg.periods;
    j["dtop_range"] = cfg.dtop_range;
    j["dtop_k_count"] = cfg.dtop_k_count;
    j["theta_cusp"] = cfg.theta_cusp;
    j["out_dir"] = cfg.out_dir;
    j["export_g"] = cfg.export_g;
    j["export_phase"] = cfg.export_phase;
    j["workers"] = cfg.workers;
    j["sweep_jx_min_over_pi"] = cfg.sweep_jx_min_over_pi;
    j["sweep_jx_max_over_pi"] = cfg.sweep_jx_max_over_pi;
    j["sweep_jx_step_over_pi"] = cfg.sweep_jx_step_over_pi;
    j["sweep_jy_min_over_pi"] = cfg.sweep_jy_min_over_pi;
    j["sweep_jy_max_over_pi"] = cfg.sweep_jy_max_over_pi;
    j["sweep_jy_step_over_pi"] = cfg.sweep_jy_step_over_pi;
    return j;
}

ordered_json meta_json(const char* command, const quench_protocol& p, const run_config& cfg) {
    ordered_json j;
    j["command"] = command;
    j["protocol"] = describe(p);
    j["config"] = config_json(cfg);
    return j;
}

ordered_json cusp_report_json(const cusp_report& report) {
    ordered_json j;
    j["grid_spacing"] = report.grid_spacing;
    j["flagged_count"] = report.flagged_indices.size();
    j["detections"] = ordered_json::array();
    for (const auto& d : report.detections) {
        j["detections"].push_back({{"s", d.s},
                                   {"residual", d.residual},
                                   {"sharpness", d.sharpness},
                                   {"grid_index", d.grid_index}});
    }
    j["predicted_times"] = report.predicted_times;
    j["matches"] = ordered_json::array();
    for (const auto& m : report.matches) {
        j["matches"].push_back(
            {{"predicted", m.predicted}, {"detected", m.detected}, {"distance", m.distance}});
    }
    j["unmatched_predictions"] = report.unmatched_predictions;
    j["unmatched_detections"] = report.unmatched_detections;
    return j;
}

/// Rate trace, cusp report and files for one parameter point; shared between
/// the rate command and sweep points.
cusp_report run_rate_point(const run_config& cfg, const fs::path& dir) {
    const quench_protocol p = make_protocol(cfg);
    const auto s_grid = single_period_grid(cfg);
    const return_trace trace = rate_function(p, static_cast<std::size_t>(cfg.k_count), s_grid);
    const auto points = critical_points_pql(cfg.jx_over_pi * k_pi, cfg.jy_over_pi * k_pi);
    const auto predicted = distinct_critical_times(points);
    cusp_report report = detect_cusps(trace, predicted, cfg.theta_cusp);

    std::ostringstream csv;
    csv << "s,f\n";
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        csv << num(s_grid[j]) << ',' << num(trace.f[j]) << '\n';
    }
    write_file(dir / "rate.csv", csv.str());
    write_json(dir / "cusps.json", cusp_report_json(report));

    if (cfg.export_g) {
        std::ostringstream gcsv;
        gcsv << "k";
        for (double s : s_grid) gcsv << ',' << num(s);
        gcsv << '\n';
        for (std::size_t i = 0; i < trace.k_grid.size(); ++i) {
            gcsv << num(trace.k_grid[i]);
            for (std::size_t j = 0; j < s_grid.size(); ++j) gcsv << ',' << num(trace.g_at(i, j));
            gcsv << '\n';
        }
        write_file(dir / "g.csv", gcsv.str());
    }
    return report;
}

}  // namespace

void cmd_spectrum(const run_config& cfg) {
    const quench_protocol p = make_protocol(cfg);
    ensure_dir(cfg.out_dir);
    const auto k_grid = brillouin_k_grid(cfg.k_count);

    std::ostringstream csv;
    csv << "k,e,n_x,n_y,n_z,gapless\n";
    for (double k : k_grid) {
        const spectrum_sample s = spectrum_at(p, k);
        csv << num(k) << ',' << num(s.e) << ',' << num(s.n[0]) << ',' << num(s.n[1]) << ','
            << num(s.n[2]) << ',' << (s.gapless ? 1 : 0) << '\n';
    }
    write_file(fs::path(cfg.out_dir) / "spectrum.csv", csv.str());
    write_json(fs::path(cfg.out_dir) / "spectrum_meta.json", meta_json("spectrum", p, cfg));
}

void cmd_rate(const run_config& cfg) {
    const quench_protocol p = make_protocol(cfg);
    ensure_dir(cfg.out_dir);
    run_rate_point(cfg, cfg.out_dir);
    write_json(fs::path(cfg.out_dir) / "rate_meta.json", meta_json("rate", p, cfg));
}

void cmd_dtop(const run_config& cfg) {
    const quench_protocol p = make_protocol(cfg);
    ensure_dir(cfg.out_dir);

    const auto t_grid = make_time_grid(cfg);
    const auto points = critical_points_pql(cfg.jx_over_pi * k_pi, cfg.jy_over_pi * k_pi);
    const auto predicted = distinct_critical_times(points);
    const dtop_trace trace = dtop(p, cfg.band_v, t_grid, parse_dtop_range(cfg.dtop_range),
                                  static_cast<std::size_t>(cfg.dtop_k_count), predicted);

    std::ostringstream csv;
    csv << "t,w\n";
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        csv << num(t_grid[j]) << ',' << num(trace.w[j]) << '\n';
    }
    write_file(fs::path(cfg.out_dir) / "dtop.csv", csv.str());

    ordered_json ann;
    ann["critical_markers"] = trace.critical_markers;
    ann["jumps"] = ordered_json::array();
    for (const auto& jmp : trace.jumps) {
        ann["jumps"].push_back({{"t_c", jmp.t_c},
                                {"delta", jmp.delta},
                                {"before", jmp.before},
                                {"after", jmp.after}});
    }
    ann["plateaus"] = ordered_json::array();
    for (const auto& pl : trace.plateaus) {
        ann["plateaus"].push_back(
            {{"t_begin", pl.t_begin}, {"t_end", pl.t_end}, {"level", pl.level}});
    }
    ann["nonquantized"] = ordered_json::array();
    for (const auto& win : trace.nonquantized) {
        ann["nonquantized"].push_back({{"t_begin", win.t_begin}, {"t_end", win.t_end}});
    }
    write_json(fs::path(cfg.out_dir) / "dtop_annotations.json", ann);

    if (cfg.export_phase) {
        const phase_trace phases =
            compute_phase_trace(p, cfg.band_v, static_cast<std::size_t>(cfg.k_count),
                                single_period_grid(cfg));
        std::ostringstream pcsv;
        pcsv << "k,s,total,dynamical,geometric,valid\n";
        for (std::size_t i = 0; i < phases.k_grid.size(); ++i) {
            for (std::size_t j = 0; j < phases.s_grid.size(); ++j) {
                const std::size_t idx = phases.index(i, j);
                pcsv << num(phases.k_grid[i]) << ',' << num(phases.s_grid[j]) << ','
                     << num(phases.total[idx]) << ',' << num(phases.dynamical[idx]) << ','
                     << num(phases.geometric[idx]) << ',' << int(phases.valid[idx]) << '\n';
            }
        }
        write_file(fs::path(cfg.out_dir) / "phase.csv", pcsv.str());
    }
    write_json(fs::path(cfg.out_dir) / "dtop_meta.json", meta_json("dtop", p, cfg));
}

void cmd_critical(const run_config& cfg) {
    const quench_protocol p = make_protocol(cfg);
    ensure_dir(cfg.out_dir);

    const double jx = cfg.jx_over_pi * k_pi;
    const double jy = cfg.jy_over_pi * k_pi;
    const auto points = critical_points_pql(jx, jy);

    ordered_json arr = ordered_json::array();
    for (const auto& cp : points) {
        arr.push_back({{"k_c", cp.k_c},
                       {"s_c", cp.s_c},
                       {"branch", to_string(cp.branch)},
                       {"indices", cp.indices}});
    }
    write_json(fs::path(cfg.out_dir) / "critical_points.json", arr);

    ordered_json meta = meta_json("critical", p, cfg);
    meta["distinct_times"] = distinct_critical_times(points);
    const gapless_set touchings = gapless_momenta(p);
    meta["gapless_momenta"] = ordered_json::array();
    for (const auto& g : touchings.points) {
        meta["gapless_momenta"].push_back({{"k", g.k0}, {"m", g.m}, {"n", g.n}});
    }
    const boundary_check boundary = on_phase_boundary(jx, jy, boundary_tolerance);
    meta["on_boundary"] = boundary.on_boundary;
    meta["boundary_witness"] = {{"m", boundary.m}, {"n", boundary.n}};
    write_json(fs::path(cfg.out_dir) / "critical_meta.json", meta);
}

void cmd_phase_diagram(const run_config& cfg) {
    validate(cfg);
    ensure_dir(cfg.out_dir);
    const auto jx_values =
        sweep_values(cfg.sweep_jx_min_over_pi, cfg.sweep_jx_max_over_pi, cfg.sweep_jx_step_over_pi);
    const auto jy_values =
        sweep_values(cfg.sweep_jy_min_over_pi, cfg.sweep_jy_max_over_pi, cfg.sweep_jy_step_over_pi);
    for (double v : jx_values) {
        if (!(v > 0.0)) throw config_error("sweep amplitudes must be positive");
    }
    for (double v : jy_values) {
        if (!(v > 0.0)) throw config_error("sweep amplitudes must be positive");
    }

    std::ostringstream csv;
    csv << "jx_over_pi,jy_over_pi,on_boundary,witness_m,witness_n,gapless_count,"
           "critical_time_count\n";
    for (double jx_pi : jx_values) {
        for (double jy_pi : jy_values) {
            const double jx = jx_pi * k_pi;
            const double jy = jy_pi * k_pi;
            const boundary_check boundary = on_phase_boundary(jx, jy, boundary_tolerance);
            const gapless_set touchings = gapless_momenta(make_pql(jx, jy));
            const auto times = distinct_critical_times(critical_points_pql(jx, jy));
            csv << num(jx_pi) << ',' << num(jy_pi) << ',' << (boundary.on_boundary ? 1 : 0) << ','
                << boundary.m << ',' << boundary.n << ',' << touchings.points.size() << ','
                << times.size() << '\n';
        }
    }
    write_file(fs::path(cfg.out_dir) / "phase_diagram.csv", csv.str());

    const quench_protocol p = make_protocol(cfg);
    write_json(fs::path(cfg.out_dir) / "phase_diagram_meta.json",
               meta_json("phase-diagram", p, cfg));
}

void cmd_sweep(const run_config& cfg) {
    validate(cfg);
    ensure_dir(cfg.out_dir);
    const auto jx_values =
        sweep_values(cfg.sweep_jx_min_over_pi, cfg.sweep_jx_max_over_pi, cfg.sweep_jx_step_over_pi);
    const auto jy_values =
        sweep_values(cfg.sweep_jy_min_over_pi, cfg.sweep_jy_max_over_pi, cfg.sweep_jy_step_over_pi);

    struct sweep_point {
        double jx_over_pi;
        double jy_over_pi;
    };
    std::vector<sweep_point> grid;
    for (double jx : jx_values) {
        for (double jy : jy_values) grid.push_back({jx, jy});
    }

    std::vector<ordered_json> entries(grid.size());
    std::atomic<std::size_t> cursor{0};
    auto process = [&](std::size_t i) {
        char name[32];
        std::snprintf(name, sizeof(name), "point_%04zu", i);
        const fs::path dir = fs::path(cfg.out_dir) / name;

        ordered_json entry;
        entry["index"] = i;
        entry["jx_over_pi"] = grid[i].jx_over_pi;
        entry["jy_over_pi"] = grid[i].jy_over_pi;
        entry["dir"] = std::string(name);
        try {
            run_config point_cfg = cfg;
            point_cfg.jx_over_pi = grid[i].jx_over_pi;
            point_cfg.jy_over_pi = grid[i].jy_over_pi;
            point_cfg.out_dir = dir.string();
            ensure_dir(dir);
            write_file(dir / "config.txt", serialize_config(point_cfg));
            const cusp_report report = run_rate_point(point_cfg, dir);
            entry["status"] = "ok";
            entry["detections"] = report.detections.size();
            entry["matched"] = report.matches.size();
            entry["missing"] = report.unmatched_predictions.size();
            entry["extra"] = report.unmatched_detections.size();
        } catch (const std::exception& err) {
            entry["status"] = "error";
            entry["error"] = err.what();
        }
        entries[i] = std::move(entry);
    };

    unsigned hardware = std::thread::hardware_concurrency();
    if (hardware == 0) hardware = 1;
    const std::size_t pool = cfg.workers > 0
                                 ? static_cast<std::size_t>(cfg.workers)
                                 : std::min<std::size_t>(4, hardware);
    const std::size_t n_workers = std::min(pool, grid.size());
    auto drain = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= grid.size()) return;
            process(i);
        }
    };
    if (n_workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(drain);
        for (auto& t : workers) t.join();
    }

    ordered_json summary;
    summary["config"] = config_json(cfg);
    summary["points"] = ordered_json::array();
    for (auto& entry : entries) summary["points"].push_back(std::move(entry));
    write_json(fs::path(cfg.out_dir) / "sweep_summary.json", summary);
}

}  // namespace fdqpt
