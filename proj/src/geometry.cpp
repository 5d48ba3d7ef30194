#include "fdqpt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdqpt/errors.hpp"
#include "fdqpt/floquet.hpp"
#include "fdqpt/grids.hpp"

namespace fdqpt {

namespace {

constexpr double pi = k_pi;

void check_band_sign(int v) {
    if (v != 1 && v != -1) throw parameter_error("band sign v must be +1 or -1");
}

/// Fold a phase difference into (-pi, pi].
double fold_step(double x) {
    double y = std::remainder(x, 2.0 * pi);
    if (y <= -pi) y += 2.0 * pi;
    return y;
}

struct phase_sample {
    double total = 0.0;
    double dynamical = 0.0;
    double geometric = 0.0;
    bool valid = false;
};

/// Full return amplitude e^{-i l E_v} G_v and the phase decomposition at one
/// band point; invalid at touchings and where the amplitude loses its phase.
phase_sample phase_at(const band_point& b, long long cycles, double s, int v) {
    phase_sample out;
    if (b.gapless) return out;

    cplx amp;
    double in_period;  // accumulated -<H>/(-v) within the current period
    if (s < 1.0) {
        amp = cplx(std::cos(s * b.hx), -std::sin(s * b.hx) * v * b.nx);
        in_period = s * b.hx * b.nx;
    } else {
        const double sp = driving_period - s;
        amp = std::polar(1.0, -v * b.e) * cplx(std::cos(sp * b.hy), std::sin(sp * b.hy) * v * b.ny);
        in_period = (b.hx * b.nx + b.hy * b.ny) - sp * b.hy * b.ny;
    }
    amp *= std::polar(1.0, -static_cast<double>(cycles) * v * b.e);
    if (!(std::abs(amp) >= phase_amplitude_floor) || !std::isfinite(std::abs(amp))) return out;

    double phi = std::arg(amp);
    if (phi <= -pi) phi = pi;
    const double h_dot_n = b.hx * b.nx + b.hy * b.ny;
    out.total = phi;
    out.dynamical = -v * (static_cast<double>(cycles) * h_dot_n + in_period);
    out.geometric = out.total - out.dynamical;
    out.valid = true;
    return out;
}

}  // namespace

double total_phase(const quench_protocol& p, double k, int v, double t) {
    check_band_sign(v);
    const band_point b = band_at(p, k);
    if (b.gapless) throw degenerate_band_error(k);
    const auto [cycles, s] = reduce_time(t);
    const phase_sample sample = phase_at(b, cycles, s, v);
    if (!sample.valid) {
        throw undefined_phase_error("return amplitude vanishes; its phase is undefined");
    }
    return sample.total;
}

double dynamical_phase(const quench_protocol& p, double k, int v, double t) {
    check_band_sign(v);
    const band_point b = band_at(p, k);
    if (b.gapless) throw degenerate_band_error(k);
    const auto [cycles, s] = reduce_time(t);
    const double h_dot_n = b.hx * b.nx + b.hy * b.ny;
    const double in_period = (s < 1.0)
                                 ? s * b.hx * b.nx
                                 : h_dot_n - (driving_period - s) * b.hy * b.ny;
    return -v * (static_cast<double>(cycles) * h_dot_n + in_period);
}

double geometric_phase(const quench_protocol& p, double k, int v, double t) {
    return total_phase(p, k, v, t) - dynamical_phase(p, k, v, t);
}

double dynamical_phase_quadrature(const quench_protocol& p, double k, int v, double t,
                                  std::size_t steps_per_period) {
    check_band_sign(v);
    if (steps_per_period == 0) throw parameter_error("quadrature needs at least one step");
    if (band_at(p, k).gapless) throw degenerate_band_error(k);

    const double a = std::min(0.0, t);
    const double b = std::max(0.0, t);
    const double orientation = (t >= 0.0) ? 1.0 : -1.0;

    // segment boundaries at the quench switch times (every integer)
    std::vector<double> cuts{a};
    for (double m = std::floor(a) + 1.0; m < b; m += 1.0) {
        if (m > a) cuts.push_back(m);
    }
    cuts.push_back(b);

    double integral = 0.0;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double x0 = cuts[seg];
        const double x1 = cuts[seg + 1];
        if (!(x1 > x0)) continue;
        const auto steps = static_cast<std::size_t>(std::max(
            1.0, std::ceil((x1 - x0) * static_cast<double>(steps_per_period) / driving_period)));
        const double h = (x1 - x0) / static_cast<double>(steps);
        for (std::size_t i = 0; i < steps; ++i) {
            const double tm = x0 + (static_cast<double>(i) + 0.5) * h;
            const state_vector psi = evolve_eigenstate(p, k, v, tm);
            const pauli_operator ham = hamiltonian_at(p, k, tm);
            integral += std::real(inner(psi, ham.apply(psi))) * h;
        }
    }
    return -orientation * integral;
}

// ---- sampled phases ----------------------------------------------------------

phase_trace compute_phase_trace(const quench_protocol& p, int v, std::size_t k_count,
                                const std::vector<double>& s_grid) {
    check_band_sign(v);
    if (k_count < 2) throw parameter_error("phase trace needs at least 2 momenta");
    if (s_grid.empty()) throw parameter_error("phase trace needs a non-empty time grid");
    for (double t : s_grid) {
        if (!std::isfinite(t)) throw domain_error("phase trace times must be finite");
    }

    phase_trace trace;
    trace.protocol_id = describe(p);
    trace.v = v;
    trace.k_grid = brillouin_k_grid(static_cast<int>(k_count));
    trace.s_grid = s_grid;

    const std::size_t n = k_count;
    const std::size_t m = s_grid.size();
    trace.total.assign(n * m, std::numeric_limits<double>::quiet_NaN());
    trace.dynamical.assign(n * m, std::numeric_limits<double>::quiet_NaN());
    trace.geometric.assign(n * m, std::numeric_limits<double>::quiet_NaN());
    trace.valid.assign(n * m, 0);

    std::vector<long long> cycles(m);
    std::vector<double> in_period(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto reduced = reduce_time(s_grid[j]);
        cycles[j] = reduced.cycles;
        in_period[j] = reduced.s;
    }

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const band_point b = band_at(p, trace.k_grid[i]);
            for (std::size_t j = 0; j < m; ++j) {
                const phase_sample sample = phase_at(b, cycles[j], in_period[j], v);
                if (!sample.valid) continue;
                const std::size_t idx = i * m + j;
                trace.total[idx] = sample.total;
                trace.dynamical[idx] = sample.dynamical;
                trace.geometric[idx] = sample.geometric;
                trace.valid[idx] = 1;
            }
        }
    });
    return trace;
}

// ---- winding of the geometric phase ------------------------------------------

namespace {

/// One winding evaluation at fixed time over nk channel samples; reports
/// whether any folded step exceeded pi/2 (the refinement trigger).
double winding_pass(const quench_protocol& p, int v, long long cycles, double s, dtop_range range,
                    std::size_t nk, bool& coarse) {
    const bool full = (range == dtop_range::full);
    coarse = false;

    double sum = 0.0;
    double first = 0.0, prev = 0.0;
    bool any_valid = false;
    for (std::size_t i = 0; i < nk; ++i) {
        const double k = full ? (-pi + (static_cast<double>(i) + 0.5) * 2.0 * pi /
                                           static_cast<double>(nk))
                              : (static_cast<double>(i) + 0.5) * (pi / 2.0) /
                                    static_cast<double>(nk);
        const phase_sample sample = phase_at(band_at(p, k), cycles, s, v);
        if (!sample.valid) continue;  // bridged: next step spans the gap
        if (!any_valid) {
            first = sample.geometric;
            any_valid = true;
        } else {
            const double step = fold_step(sample.geometric - prev);
            if (std::abs(step) > pi / 2.0) coarse = true;
            sum += step;
        }
        prev = sample.geometric;
    }
    if (full && any_valid) {
        const double step = fold_step(first - prev);  // close the loop
        if (std::abs(step) > pi / 2.0) coarse = true;
        sum += step;
    }
    return sum / (2.0 * pi);
}

double winding_at(const quench_protocol& p, int v, double t, dtop_range range,
                  std::size_t base_k_count) {
    const auto [cycles, s] = reduce_time(t);
    std::size_t nk = base_k_count;
    double w = 0.0;
    for (int refinement = 0;; ++refinement) {
        bool coarse = false;
        w = winding_pass(p, v, cycles, s, range, nk, coarse);
        if (!coarse || refinement == 4) break;
        nk *= 2;
    }
    return w;
}

}  // namespace

dtop_trace dtop(const quench_protocol& p, int v, const std::vector<double>& t_grid,
                dtop_range range, std::size_t k_count, const std::vector<double>& critical_times) {
    check_band_sign(v);
    if (k_count < 2) throw parameter_error("dtop needs at least 2 momenta");
    if (t_grid.size() < 2) throw parameter_error("dtop needs at least 2 time samples");
    if (range == dtop_range::reduced) {
        const auto& sym = p.symmetries();
        if (!sym.translation_by_pi || !sym.reflection) {
            throw config_error(
                "reduced-zone winding requires the half-zone translation and reflection "
                "symmetries");
        }
    }

    const std::size_t n = t_grid.size();
    const double dt = (t_grid.back() - t_grid.front()) / static_cast<double>(n - 1);
    if (!(dt > 0.0)) throw domain_error("dtop requires an increasing uniform time grid");
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs((t_grid[j] - t_grid[j - 1]) - dt) > 1e-9 * dt) {
            throw domain_error("dtop requires an increasing uniform time grid");
        }
    }
    if (t_grid.front() < 0.0) throw domain_error("dtop times must be non-negative");

    dtop_trace trace;
    trace.protocol_id = describe(p);
    trace.v = v;
    trace.range = range;
    trace.k_count = k_count;
    trace.t_grid = t_grid;

    // reference critical times, repeated once per driving period across the span
    for (double c : critical_times) {
        for (double marker = c; marker <= t_grid.back() + dt + 1e-12; marker += driving_period) {
            if (marker >= t_grid.front() - dt - 1e-12) trace.critical_markers.push_back(marker);
        }
    }
    std::sort(trace.critical_markers.begin(), trace.critical_markers.end());
    trace.critical_markers.erase(std::unique(trace.critical_markers.begin(),
                                             trace.critical_markers.end(),
                                             [](double a, double b) { return b - a < 1e-9; }),
                                 trace.critical_markers.end());

    trace.w.resize(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            double t = t_grid[j];
            for (double marker : trace.critical_markers) {
                if (std::abs(t - marker) < 1e-9) {
                    t = t_grid[j] + dt;  // take the right limit across the jump
                    break;
                }
            }
            trace.w[j] = winding_at(p, v, t, range, k_count);
        }
    });

    // jumps: rounded winding change across each marker, one grid step out
    for (double c : trace.critical_markers) {
        long before = -1, after = -1;
        for (std::size_t j = 0; j < n; ++j) {
            if (t_grid[j] <= c - dt + 1e-12) before = static_cast<long>(j);
            if (after < 0 && t_grid[j] >= c + dt - 1e-12) after = static_cast<long>(j);
        }
        if (before < 0 || after < 0) continue;
        dtop_jump jump;
        jump.t_c = c;
        jump.before = trace.w[before];
        jump.after = trace.w[after];
        jump.delta = static_cast<int>(std::lround(jump.after) - std::lround(jump.before));
        trace.jumps.push_back(jump);
    }

    // plateaus: segments between consecutive markers whose samples all sit on
    // one quantized level (samples at a marker were evaluated on the right)
    std::vector<std::size_t> segment_starts{0};
    for (double c : trace.critical_markers) {
        if (c <= t_grid.front() + 1e-12 || c >= t_grid.back() - 1e-12) continue;
        std::size_t idx = 0;
        while (idx < n && t_grid[idx] < c - 1e-12) ++idx;
        if (idx > 0 && idx < n) segment_starts.push_back(idx);
    }
    segment_starts.push_back(n);
    for (std::size_t seg = 0; seg + 1 < segment_starts.size(); ++seg) {
        const std::size_t lo = segment_starts[seg];
        const std::size_t hi = segment_starts[seg + 1];
        if (lo >= hi) continue;
        bool quantized = true;
        const long level = std::lround(trace.w[lo]);
        for (std::size_t j = lo; j < hi; ++j) {
            if (std::abs(trace.w[j] - std::lround(trace.w[j])) >= 1e-2 ||
                std::lround(trace.w[j]) != level) {
                quantized = false;
                break;
            }
        }
        if (quantized) {
            trace.plateaus.push_back({t_grid[lo], t_grid[hi - 1], static_cast<int>(level)});
        }
    }

    // maximal non-quantized runs, ignoring samples within one step of a marker
    auto near_marker = [&](double t) {
        for (double c : trace.critical_markers) {
            if (std::abs(t - c) <= dt + 1e-12) return true;
        }
        return false;
    };
    std::size_t run_start = n;
    for (std::size_t j = 0; j <= n; ++j) {
        const bool bad = j < n && std::abs(trace.w[j] - std::lround(trace.w[j])) > 0.1 &&
                         !near_marker(t_grid[j]);
        if (bad && run_start == n) run_start = j;
        if (!bad && run_start != n) {
            trace.nonquantized.push_back({t_grid[run_start], t_grid[j - 1]});
            run_start = n;
        }
    }
    return trace;
}

}  // namespace fdqpt
