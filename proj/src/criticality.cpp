#include "fdqpt/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "fdqpt/errors.hpp"
#include "fdqpt/grids.hpp"

namespace fdqpt {

namespace {

constexpr double pi = k_pi;
constexpr double merge_tol = 1e-9;        // duplicate merging for (k, s) pairs
constexpr double companion_tol = 1e-12;   // dropped half-integer denominators (closed form)
constexpr double level_value_tol = 1e-9;  // accepted residual |h - level| at a numeric root

/// Wrap k into [-pi, pi); +pi maps to -pi.
double normalize_momentum(double k) {
    double r = std::remainder(k, 2.0 * pi);
    if (r >= pi) r -= 2.0 * pi;
    return r;
}

double cyclic_distance(double a, double b) {
    double d = std::abs(std::remainder(a - b, 2.0 * pi));
    return d;
}

/// Distinct zone images of a principal momentum of an even function
/// (h(-k) = h(k)): {k_p, -k_p}.
std::vector<double> even_images(double k_p) {
    std::vector<double> out{normalize_momentum(k_p)};
    double mirrored = normalize_momentum(-k_p);
    if (cyclic_distance(mirrored, out[0]) > 1e-12) out.push_back(mirrored);
    return out;
}

/// Distinct zone images of a principal momentum of sin-like symmetry
/// (h(pi - k) = h(k)): {k_p, pi - k_p}.
std::vector<double> sin_images(double k_p) {
    std::vector<double> out{normalize_momentum(k_p)};
    double mirrored = normalize_momentum(pi - k_p);
    if (cyclic_distance(mirrored, out[0]) > 1e-12) out.push_back(mirrored);
    return out;
}

/// In-half time to full-period critical time: first half keeps s, second
/// half counts backwards from the period end (s_c = 2 - s').
double to_period_time(double s, bool second_half) {
    return second_half ? driving_period - s : s;
}

/// Zeros with an integer level m != 0: in-half time s = (2p-1)/(2m) in (0, 1).
void emit_integer_times(double k_img, double k_p, int m, critical_branch branch,
                        bool second_half, std::vector<critical_point>& out) {
    int p_lo = (m > 0) ? 1 : m + 1;
    int p_hi = (m > 0) ? m : 0;
    for (int p = p_lo; p <= p_hi; ++p) {
        double s = (2.0 * p - 1.0) / (2.0 * m);
        if (!(s > 0.0 && s < 1.0)) continue;
        out.push_back({k_img, to_period_time(s, second_half), branch, {m, p}, k_p});
    }
}

/// Zeros whose in-half time is s = (2p-1) pi / (2 h_companion) in (0, 1);
/// p runs through successive values matching the sign of the denominator.
void emit_half_integer_times(double k_img, double k_p, int level_index, double h_companion,
                             critical_branch branch, bool second_half,
                             std::vector<critical_point>& out) {
    int p = (h_companion > 0.0) ? 1 : 0;
    int step = (h_companion > 0.0) ? 1 : -1;
    for (;; p += step) {
        double s = (2.0 * p - 1.0) * pi / (2.0 * h_companion);
        if (!(s > 0.0 && s < 1.0)) break;
        out.push_back({k_img, to_period_time(s, second_half), branch, {level_index, p}, k_p});
    }
}

/// Keep-first duplicate merge within (merge_tol, merge_tol), then sort by
/// (s_c, k_c).
std::vector<critical_point> finalize(std::vector<critical_point> points) {
    std::vector<critical_point> unique;
    unique.reserve(points.size());
    for (const auto& cand : points) {
        bool seen = false;
        for (const auto& kept : unique) {
            if (std::abs(cand.k_c - kept.k_c) < merge_tol &&
                std::abs(cand.s_c - kept.s_c) < merge_tol) {
                seen = true;
                break;
            }
        }
        if (!seen) unique.push_back(cand);
    }
    std::sort(unique.begin(), unique.end(),
              [](const critical_point& a, const critical_point& b) { return a.s_c < b.s_c; });
    // Members of one critical time reach the same s_c through different
    // floating-point paths; chain times agreeing within merge_tol and order
    // each chain by momentum so ties sort deterministically.
    std::size_t begin = 0;
    while (begin < unique.size()) {
        std::size_t end = begin + 1;
        while (end < unique.size() && unique[end].s_c - unique[end - 1].s_c < merge_tol) ++end;
        std::sort(unique.begin() + static_cast<std::ptrdiff_t>(begin),
                  unique.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const critical_point& a, const critical_point& b) { return a.k_c < b.k_c; });
        begin = end;
    }
    return unique;
}

// ---- numeric level sets -------------------------------------------------

/// All k in [-pi, pi) with f(k) = level, to high accuracy.  A uniform scan
/// over a zone extended by two steps on either side feeds sign-change
/// bisection; tangential touchings (no sign change) are located by parabolic
/// extremum refinement and accepted when the residual drops below
/// level_value_tol.  Near-tangent double crossings inside one scan cell are
/// split by bisecting against the refined extremum.
std::vector<double> level_set_roots(const std::function<double(double)>& f, double level) {
    const int n_scan = 8192;
    const double step = 2.0 * pi / n_scan;
    const int n_samples = n_scan + 5;  // covers [-pi - 2*step, pi + 2*step]
    const double lo = -pi - 2.0 * step;

    std::vector<double> ks(n_samples), gs(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        ks[i] = lo + i * step;
        gs[i] = f(ks[i]) - level;
    }

    std::vector<double> roots;
    auto add_root = [&](double k) {
        double r = normalize_momentum(k);
        for (double existing : roots)
            if (cyclic_distance(existing, r) < merge_tol) return;
        roots.push_back(r);
    };

    auto bisect = [&](double a, double b, double ga, double gb) {
        if (ga == 0.0) return a;
        if (gb == 0.0) return b;
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            double mid = 0.5 * (a + b);
            double gm = f(mid) - level;
            if (gm == 0.0) return mid;
            if ((gm < 0.0) == (ga < 0.0)) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
                gb = gm;
            }
        }
        return 0.5 * (a + b);
    };

    // Parabolic refinement of an extremum of g near k0.
    auto refine_extremum = [&](double k0) {
        double h = step;
        for (int pass = 0; pass < 4; ++pass) {
            double gm = f(k0 - h) - level;
            double g0 = f(k0) - level;
            double gp = f(k0 + h) - level;
            double denom = gm - 2.0 * g0 + gp;
            if (denom == 0.0) break;
            double shift = 0.5 * h * (gm - gp) / denom;
            shift = std::clamp(shift, -h, h);
            k0 += shift;
            h = std::max(std::abs(shift), h / 64.0);
            if (h < 1e-12) break;
        }
        return k0;
    };

    for (int i = 1; i < n_samples; ++i) {
        if ((gs[i - 1] < 0.0) != (gs[i] < 0.0) || gs[i - 1] == 0.0 || gs[i] == 0.0) {
            add_root(bisect(ks[i - 1], ks[i], gs[i - 1], gs[i]));
        }
    }
    for (int i = 1; i + 1 < n_samples; ++i) {
        bool local_min = std::abs(gs[i]) <= std::abs(gs[i - 1]) &&
                         std::abs(gs[i]) <= std::abs(gs[i + 1]);
        bool uniform_sign = (gs[i - 1] < 0.0) == (gs[i] < 0.0) &&
                            (gs[i] < 0.0) == (gs[i + 1] < 0.0);
        if (!local_min || !uniform_sign || std::abs(gs[i]) >= 1e-3) continue;
        double k_ext = refine_extremum(ks[i]);
        double g_ext = f(k_ext) - level;
        if (std::abs(g_ext) < level_value_tol) {
            add_root(k_ext);
        } else if ((g_ext < 0.0) != (gs[i - 1] < 0.0)) {
            // The dip crosses the level twice between the neighbouring samples.
            add_root(bisect(ks[i - 1], k_ext, gs[i - 1], g_ext));
            add_root(bisect(k_ext, ks[i + 1], g_ext, gs[i + 1]));
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

double scan_amplitude(const std::function<double(double)>& f) {
    const int n_scan = 8192;
    double peak = 0.0;
    for (int i = 0; i <= n_scan; ++i) {
        double k = -pi + i * (2.0 * pi / n_scan);
        peak = std::max(peak, std::abs(f(k)));
    }
    return peak;
}

}  // namespace

const char* to_string(critical_branch b) {
    switch (b) {
        case critical_branch::first_half_hx_integer: return "first_half_hx_integer";
        case critical_branch::first_half_hy_half_integer: return "first_half_hy_half_integer";
        case critical_branch::second_half_hy_integer: return "second_half_hy_integer";
        case critical_branch::second_half_hx_half_integer: return "second_half_hx_half_integer";
    }
    return "unknown";
}

// ---- closed-form enumeration ---------------------------------------------

std::vector<critical_point> critical_points_pql(double j_x, double j_y) {
    if (!(j_x > 0.0) || !(j_y > 0.0))
        throw parameter_error("pql quench amplitudes must be positive");

    const double eps = 1e-9;
    std::vector<critical_point> out;

    // first half, h_x(k_c) = m pi (m != 0): k_c = arccos(m pi / J_x)
    {
        int m_max = static_cast<int>(std::floor(j_x / pi + eps));
        for (int am = 1; am <= m_max; ++am)
            for (int sign : {+1, -1}) {
                int m = sign * am;
                double k_p = std::acos(std::clamp(m * pi / j_x, -1.0, 1.0));
                for (double k_img : even_images(k_p))
                    emit_integer_times(k_img, k_p, m, critical_branch::first_half_hx_integer,
                                       false, out);
            }
    }

    // first half, h_y(k_c) = (2m-1) pi / 2: k_c = arcsin((2m-1) pi / (2 J_y)),
    // with s set by the h_x value of each image separately.
    {
        int odd_max = static_cast<int>(std::floor(2.0 * j_y / pi + eps));
        for (int o = 1; o <= odd_max; o += 2)
            for (int sign : {+1, -1}) {
                int om = sign * o;       // odd level index 2m - 1
                int m = (om + 1) / 2;
                double k_p = std::asin(std::clamp(om * pi / (2.0 * j_y), -1.0, 1.0));
                for (double k_img : sin_images(k_p)) {
                    double c = std::cos(k_img);
                    if (std::abs(c) < companion_tol) continue;
                    emit_half_integer_times(k_img, k_p, m, j_x * c,
                                            critical_branch::first_half_hy_half_integer,
                                            false, out);
                }
            }
    }

    // second half, h_y(k_c) = n pi (n != 0): k_c = arcsin(n pi / J_y), s = 2 - s'
    {
        int n_max = static_cast<int>(std::floor(j_y / pi + eps));
        for (int an = 1; an <= n_max; ++an)
            for (int sign : {+1, -1}) {
                int n = sign * an;
                double k_p = std::asin(std::clamp(n * pi / j_y, -1.0, 1.0));
                for (double k_img : sin_images(k_p))
                    emit_integer_times(k_img, k_p, n, critical_branch::second_half_hy_integer,
                                       true, out);
            }
    }

    // second half, h_x(k_c) = (2n-1) pi / 2: k_c = arccos((2n-1) pi / (2 J_x))
    {
        int odd_max = static_cast<int>(std::floor(2.0 * j_x / pi + eps));
        for (int o = 1; o <= odd_max; o += 2)
            for (int sign : {+1, -1}) {
                int on = sign * o;
                int n = (on + 1) / 2;
                double k_p = std::acos(std::clamp(on * pi / (2.0 * j_x), -1.0, 1.0));
                for (double k_img : even_images(k_p)) {
                    double sn = std::sin(k_img);
                    if (std::abs(sn) < companion_tol) continue;
                    emit_half_integer_times(k_img, k_p, n, j_y * sn,
                                            critical_branch::second_half_hx_half_integer,
                                            true, out);
                }
            }
    }

    return finalize(std::move(out));
}

// ---- numeric enumeration ---------------------------------------------------

std::vector<critical_point> critical_points_general(const quench_protocol& p) {
    auto hx = [&p](double k) { return p.h_x(k); };
    auto hy = [&p](double k) { return p.h_y(k); };
    const double ax = scan_amplitude(hx);
    const double ay = scan_amplitude(hy);
    const double margin = 1e-6;

    std::vector<critical_point> out;

    // first half, h_x = m pi
    {
        int m_max = static_cast<int>(std::floor(ax / pi + margin));
        for (int am = 1; am <= m_max; ++am)
            for (int sign : {+1, -1}) {
                int m = sign * am;
                for (double k0 : level_set_roots(hx, m * pi))
                    emit_integer_times(k0, k0, m, critical_branch::first_half_hx_integer,
                                       false, out);
            }
    }

    // first half, h_y = (2m-1) pi / 2; companion h_x(k0) must not vanish
    {
        int odd_max = static_cast<int>(std::floor(2.0 * ay / pi + margin));
        for (int o = 1; o <= odd_max; o += 2)
            for (int sign : {+1, -1}) {
                int om = sign * o;
                int m = (om + 1) / 2;
                for (double k0 : level_set_roots(hy, om * pi / 2.0)) {
                    double companion = p.h_x(k0);
                    if (std::abs(companion) < level_value_tol) continue;
                    emit_half_integer_times(k0, k0, m, companion,
                                            critical_branch::first_half_hy_half_integer,
                                            false, out);
                }
            }
    }

    // second half, h_y = n pi
    {
        int n_max = static_cast<int>(std::floor(ay / pi + margin));
        for (int an = 1; an <= n_max; ++an)
            for (int sign : {+1, -1}) {
                int n = sign * an;
                for (double k0 : level_set_roots(hy, n * pi))
                    emit_integer_times(k0, k0, n, critical_branch::second_half_hy_integer,
                                       true, out);
            }
    }

    // second half, h_x = (2n-1) pi / 2; companion h_y(k0) must not vanish
    {
        int odd_max = static_cast<int>(std::floor(2.0 * ax / pi + margin));
        for (int o = 1; o <= odd_max; o += 2)
            for (int sign : {+1, -1}) {
                int on = sign * o;
                int n = (on + 1) / 2;
                for (double k0 : level_set_roots(hx, on * pi / 2.0)) {
                    double companion = p.h_y(k0);
                    if (std::abs(companion) < level_value_tol) continue;
                    emit_half_integer_times(k0, k0, n, companion,
                                            critical_branch::second_half_hx_half_integer,
                                            true, out);
                }
            }
    }

    return finalize(std::move(out));
}

std::vector<double> distinct_critical_times(const std::vector<critical_point>& points) {
    std::vector<double> times;
    times.reserve(points.size());
    for (const auto& cp : points) times.push_back(cp.s_c);
    std::sort(times.begin(), times.end());
    std::vector<double> distinct;
    for (double t : times)
        if (distinct.empty() || t - distinct.back() >= merge_tol) distinct.push_back(t);
    return distinct;
}

// ---- band touchings --------------------------------------------------------

gapless_set gapless_momenta(const quench_protocol& p) {
    auto hx = [&p](double k) { return p.h_x(k); };
    auto hy = [&p](double k) { return p.h_y(k); };
    const double ax = scan_amplitude(hx);
    const double ay = scan_amplitude(hy);
    const double margin = 1e-6;

    // level sets h_x = m pi for every integer m reachable (including 0)
    struct labelled_root {
        double k;
        int index;
    };
    std::vector<labelled_root> roots_x, roots_y;
    int m_max = static_cast<int>(std::floor(ax / pi + margin));
    for (int m = -m_max; m <= m_max; ++m)
        for (double k0 : level_set_roots(hx, m * pi)) roots_x.push_back({k0, m});
    int n_max = static_cast<int>(std::floor(ay / pi + margin));
    for (int n = -n_max; n <= n_max; ++n)
        for (double k0 : level_set_roots(hy, n * pi)) roots_y.push_back({k0, n});

    gapless_set set;
    for (const auto& rx : roots_x)
        for (const auto& ry : roots_y) {
            if (cyclic_distance(rx.k, ry.k) >= merge_tol) continue;
            bool seen = false;
            for (const auto& g : set.points)
                if (cyclic_distance(g.k0, rx.k) < merge_tol) seen = true;
            if (!seen) set.points.push_back({rx.k, rx.index, ry.index});
        }
    std::sort(set.points.begin(), set.points.end(),
              [](const gapless_momentum& a, const gapless_momentum& b) { return a.k0 < b.k0; });
    return set;
}

// ---- phase-boundary membership ----------------------------------------------

boundary_check on_phase_boundary(double j_x, double j_y, double tolerance) {
    if (!(j_x > 0.0) || !(j_y > 0.0))
        throw parameter_error("pql quench amplitudes must be positive");
    if (!(tolerance > 0.0)) throw parameter_error("boundary tolerance must be positive");

    int m_max = static_cast<int>(std::floor(j_x / pi)) + 1;
    int n_max = static_cast<int>(std::floor(j_y / pi)) + 1;
    for (int m = 0; m <= m_max; ++m)
        for (int n = 0; n <= n_max; ++n) {
            double lhs = (m * m * pi * pi) / (j_x * j_x) + (n * n * pi * pi) / (j_y * j_y);
            if (std::abs(lhs - 1.0) < tolerance) return {true, m, n};
        }
    return {false, 0, 0};
}

}  // namespace fdqpt
