#include "fdqpt/observables.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fdqpt/errors.hpp"
#include "fdqpt/floquet.hpp"
#include "fdqpt/grids.hpp"

namespace fdqpt {

namespace {

constexpr double degeneracy_nudge = 1e-6;  // momentum shift past a band touching

void check_in_period(double s) {
    if (!(s >= 0.0 && s < driving_period)) {
        throw domain_error("in-period time must lie in [0, 2)");
    }
}

/// Band data used by the probability formula; evaluated a nudge away in k
/// when the bands touch, where the closed form is continuous but the unit
/// vector itself is undefined.
band_point effective_band(const quench_protocol& p, double k) {
    band_point b = band_at(p, k);
    if (b.gapless) b = band_at(p, k + degeneracy_nudge);
    return b;
}

double probability_from_band(const band_point& b, double s) {
    if (s < 1.0) {
        const double c = std::cos(s * b.hx);
        const double sn = std::sin(s * b.hx);
        return c * c + sn * sn * b.nx * b.nx;
    }
    const double sp = driving_period - s;
    const double c = std::cos(sp * b.hy);
    const double sn = std::sin(sp * b.hy);
    return c * c + sn * sn * b.ny * b.ny;
}

}  // namespace

cplx return_amplitude(const quench_protocol& p, double k, double s, int v) {
    if (v != 1 && v != -1) {
        throw parameter_error("band sign v must be +1 or -1");
    }
    check_in_period(s);
    const band_point b = band_at(p, k);
    if (b.gapless) {
        throw degenerate_band_error(k);
    }
    if (s < 1.0) {
        return cplx(std::cos(s * b.hx), -std::sin(s * b.hx) * v * b.nx);
    }
    const double sp = driving_period - s;
    const cplx bracket(std::cos(sp * b.hy), std::sin(sp * b.hy) * v * b.ny);
    return std::polar(1.0, -v * b.e) * bracket;
}

double return_probability(const quench_protocol& p, double k, double s) {
    check_in_period(s);
    return probability_from_band(effective_band(p, k), s);
}

// ---- rate function ---------------------------------------------------------

return_trace rate_function(const quench_protocol& p, std::size_t k_count,
                           const std::vector<double>& s_grid) {
    if (k_count < 2) throw parameter_error("rate function needs at least 2 momenta");
    if (s_grid.empty()) throw parameter_error("rate function needs a non-empty time grid");
    for (double s : s_grid) check_in_period(s);

    return_trace trace(p);
    trace.k_grid = brillouin_k_grid(k_count);
    trace.s_grid = s_grid;

    const std::size_t n = k_count;
    const std::size_t m = s_grid.size();
    trace.g.resize(n * m);

    parallel_for(n, [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t i = row_begin; i < row_end; ++i) {
            const band_point b = effective_band(p, trace.k_grid[i]);
            double* row = trace.g.data() + i * m;
            for (std::size_t j = 0; j < m; ++j) row[j] = probability_from_band(b, s_grid[j]);
        }
    });

    trace.f.resize(m);
    parallel_for(m, [&](std::size_t col_begin, std::size_t col_end) {
        std::vector<double> logs(n);
        for (std::size_t j = col_begin; j < col_end; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                logs[i] = std::log(std::max(trace.g[i * m + j], g_floor));
            }
            trace.f[j] = -pairwise_sum(logs.data(), n) / static_cast<double>(n);
        }
    });
    return trace;
}

// ---- cusp detection ----------------------------------------------------------

namespace {

double clipped_probability(const quench_protocol& p, double k, double s) {
    const double v = return_probability(p, k, s);
    return std::isfinite(v) ? v : 1e9;
}

struct line_minimum {
    double value;
    double at;
};

/// Golden-section minimum of the return probability along k at fixed s.
line_minimum golden_k(const quench_protocol& p, double s, double a, double b) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double tol = 1e-6;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = clipped_probability(p, c, s);
    double fd = clipped_probability(p, d, s);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = clipped_probability(p, c, s);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = clipped_probability(p, d, s);
        }
    }
    return fc < fd ? line_minimum{fc, c} : line_minimum{fd, d};
}

/// Nested golden-section minimum over a small (s, k) box: the outer search
/// runs over s, the inner over k, both to 1e-6 bracket width.
line_minimum refine_valley(const quench_protocol& p, double s_lo, double s_hi, double k_lo,
                           double k_hi) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double tol = 1e-6;
    auto line = [&](double s) { return golden_k(p, s, k_lo, k_hi).value; };
    double a = s_lo, b = s_hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = line(c);
    double fd = line(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = line(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = line(d);
        }
    }
    return fc < fd ? line_minimum{fc, c} : line_minimum{fd, d};
}

double median_of(std::vector<double> values) {
    const std::size_t n = values.size();
    auto mid = values.begin() + n / 2;
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    double hi = *mid;
    double lo = *std::max_element(values.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace

cusp_report detect_cusps(const return_trace& trace, const std::vector<double>& predicted_times,
                         double theta) {
    const auto& s = trace.s_grid;
    const auto& f = trace.f;
    const std::size_t n = s.size();
    const std::size_t nk = trace.k_grid.size();

    if (n < 2) throw domain_error("cusp detection requires a uniform time grid");
    const double ds = (s.back() - s.front()) / static_cast<double>(n - 1);
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs((s[j] - s[j - 1]) - ds) > 1e-9 * ds) {
            throw domain_error("cusp detection requires a uniform time grid");
        }
    }
    if (driving_period / ds < 500.0 * (1.0 - 1e-9)) {
        throw domain_error("cusp detection requires at least 500 time samples per period");
    }

    cusp_report report;
    report.grid_spacing = ds;

    // curvature outliers of f against the median interior second difference
    std::vector<double> score(n, 0.0);
    if (n >= 3) {
        std::vector<double> d2(n - 2);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            d2[j - 1] = std::abs(f[j + 1] - 2.0 * f[j] + f[j - 1]);
        }
        const double med = median_of(d2);
        if (med > 0.0) {
            for (std::size_t j = 1; j + 1 < n; ++j) {
                score[j] = d2[j - 1] / med;
                if (score[j] > theta) report.flagged_indices.push_back(j);
            }
        }
    }

    // signed sub-grid valley depth of g per time column
    std::vector<double> depth(n);
    std::vector<std::size_t> valley_row(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t i = 0;
        for (std::size_t r = 1; r < nk; ++r) {
            if (trace.g[r * n + j] < trace.g[i * n + j]) i = r;
        }
        valley_row[j] = i;
        const double ym = trace.g[((i + nk - 1) % nk) * n + j];
        const double y0 = trace.g[i * n + j];
        const double yp = trace.g[((i + 1) % nk) * n + j];
        const double denom = ym - 2.0 * y0 + yp;
        if (denom <= 1e-18) {
            depth[j] = y0;
            continue;
        }
        const double delta = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
        depth[j] = y0 - 0.25 * (ym - yp) * delta;
    }

    // grid columns closest to the half-period switch and the period ends
    std::vector<long> switch_columns;
    for (double t : {0.0, 1.0, 2.0}) {
        long idx = std::lround((t - s.front()) / ds);
        switch_columns.push_back(std::clamp(idx, 0L, static_cast<long>(n - 1)));
    }

    const double dk = trace.k_grid[1] - trace.k_grid[0];
    std::vector<cusp_detection> accepted;
    for (std::size_t j = 0; j < n; ++j) {
        if (depth[j] >= 5e-2) continue;
        const std::size_t lo = (j >= 10) ? j - 10 : 0;
        const std::size_t hi = std::min(n, j + 11);
        std::size_t best = lo;
        for (std::size_t w = lo; w < hi; ++w) {
            if (depth[w] < depth[best]) best = w;
        }
        if (best != j) continue;
        bool near_switch = false;
        for (long idx : switch_columns) {
            if (std::abs(static_cast<long>(j) - idx) <= 5) near_switch = true;
        }
        if (near_switch) continue;
        bool near_flag = false;
        for (std::size_t flag : report.flagged_indices) {
            if (std::abs(static_cast<long>(flag) - static_cast<long>(j)) <= 10) near_flag = true;
        }
        if (!near_flag) continue;

        const double k0 = trace.k_grid[valley_row[j]];
        const line_minimum refined = refine_valley(trace.protocol, s[j] - 3.0 * ds,
                                                   s[j] + 3.0 * ds, k0 - 1.5 * dk, k0 + 1.5 * dk);
        if (refined.value >= 1e-8) continue;

        cusp_detection det;
        det.s = refined.at;
        det.residual = refined.value;
        det.grid_index = j;
        for (std::size_t w = lo; w < hi; ++w) det.sharpness = std::max(det.sharpness, score[w]);
        accepted.push_back(det);
    }

    std::sort(accepted.begin(), accepted.end(),
              [](const cusp_detection& a, const cusp_detection& b) { return a.s < b.s; });
    for (const auto& det : accepted) {
        if (!report.detections.empty() && std::abs(det.s - report.detections.back().s) < 12.0 * ds) {
            if (det.residual < report.detections.back().residual) report.detections.back() = det;
        } else {
            report.detections.push_back(det);
        }
    }

    // distinct sorted reference times
    std::vector<double> predicted(predicted_times);
    std::sort(predicted.begin(), predicted.end());
    for (double t : predicted) {
        if (report.predicted_times.empty() || t - report.predicted_times.back() >= 1e-9) {
            report.predicted_times.push_back(t);
        }
    }

    // nearest-first greedy pairing within 2 grid steps
    struct pair_candidate {
        double dist;
        std::size_t di, ei;
    };
    std::vector<pair_candidate> candidates;
    for (std::size_t di = 0; di < report.detections.size(); ++di) {
        for (std::size_t ei = 0; ei < report.predicted_times.size(); ++ei) {
            candidates.push_back(
                {std::abs(report.detections[di].s - report.predicted_times[ei]), di, ei});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const pair_candidate& a,
                                                       const pair_candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.di != b.di) return a.di < b.di;
        return a.ei < b.ei;
    });
    std::vector<bool> used_d(report.detections.size(), false);
    std::vector<bool> used_e(report.predicted_times.size(), false);
    for (const auto& cand : candidates) {
        if (used_d[cand.di] || used_e[cand.ei]) continue;
        if (cand.dist > 2.0 * ds + 1e-12) break;  // sorted: nothing closer remains
        used_d[cand.di] = true;
        used_e[cand.ei] = true;
        report.matches.push_back(
            {report.predicted_times[cand.ei], report.detections[cand.di].s, cand.dist});
    }
    std::sort(report.matches.begin(), report.matches.end(),
              [](const cusp_match& a, const cusp_match& b) { return a.predicted < b.predicted; });
    for (std::size_t ei = 0; ei < report.predicted_times.size(); ++ei) {
        if (!used_e[ei]) report.unmatched_predictions.push_back(report.predicted_times[ei]);
    }
    for (std::size_t di = 0; di < report.detections.size(); ++di) {
        if (!used_d[di]) report.unmatched_detections.push_back(report.detections[di].s);
    }
    return report;
}

}  // namespace fdqpt
