#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "fdqpt/errors.hpp"
#include "fdqpt/floquet.hpp"
#include "fdqpt/geometry.hpp"
#include "fdqpt/grids.hpp"
#include "fdqpt/protocols.hpp"
#include "oracles.hpp"

using fdqpt::cplx;
using fdqpt::k_pi;

namespace {

const double sample_k[] = {-2.71, -1.93, -0.77, 0.33, 1.21, 2.49};
const double sample_t[] = {0.2, 0.55, 0.999, 1.0, 1.31, 1.86, 2.0, 2.7, 4.45};

}  // namespace

// ---- total phase ------------------------------------------------------------------

TEST_CASE("total phase vanishes at the start and stays principal") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    for (double k : sample_k) {
        for (int v : {+1, -1}) {
            CHECK(fdqpt::total_phase(p, k, v, 0.0) == 0.0);
            for (double t : sample_t) {
                const double phi = fdqpt::total_phase(p, k, v, t);
                CHECK(phi > -k_pi);
                CHECK(phi <= k_pi);
            }
        }
    }
}

TEST_CASE("total phase equals the argument of the dense overlap") {
    for (double jy_pi : {1.1, 3.1}) {
        const auto p = fdqpt::make_pql(0.5 * k_pi, jy_pi * k_pi);
        for (double k : sample_k) {
            for (int v : {+1, -1}) {
                for (double t : sample_t) {
                    const double phi = fdqpt::total_phase(p, k, v, t);
                    const cplx dense = oracle::brute_return_amplitude(p, k, t, v);
                    // compare on the unit circle: both sides carry the same
                    // principal convention but may sit next to the fold
                    const cplx lhs = std::polar(1.0, phi);
                    const cplx rhs = dense / std::abs(dense);
                    CHECK(std::abs(lhs - rhs) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("in-period phase obeys the arctangent form of both quench halves") {
    const auto p = fdqpt::make_pql(0.9 * k_pi, 0.9 * k_pi);
    for (double k : sample_k) {
        const auto b = fdqpt::band_at(p, k);
        REQUIRE(!b.gapless);
        for (int v : {+1, -1}) {
            for (double s = 0.05; s < 1.0; s += 0.1) {
                if (std::abs(std::cos(s * b.hx)) < 0.2) continue;
                const double phi = fdqpt::total_phase(p, k, v, s);
                const double ref = std::atan(-v * b.nx * std::tan(s * b.hx));
                CHECK(std::abs(std::sin(phi - ref)) <= 1e-10);
            }
            for (double s = 1.05; s < 2.0; s += 0.1) {
                const double sp = 2.0 - s;
                if (std::abs(std::cos(sp * b.hy)) < 0.2) continue;
                const double phi = fdqpt::total_phase(p, k, v, s);
                const double ref = std::atan(v * b.ny * std::tan(sp * b.hy));
                CHECK(std::abs(std::sin(phi + v * b.e - ref)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("phases refuse touchings and vanishing amplitudes") {
    const auto touching = fdqpt::make_pql(k_pi, k_pi);
    CHECK_THROWS_AS(fdqpt::total_phase(touching, 0.0, -1, 0.7), fdqpt::degenerate_band_error);
    CHECK_THROWS_AS(fdqpt::dynamical_phase(touching, 0.0, -1, 0.7),
                    fdqpt::degenerate_band_error);

    // the amplitude zero of the cusp at s = 3/2 sits at sin k = 1/1.1
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    const double k_zero = std::asin(1.0 / 1.1);
    CHECK_THROWS_AS(fdqpt::total_phase(p, k_zero, -1, 1.5), fdqpt::undefined_phase_error);
    CHECK_THROWS_AS(fdqpt::geometric_phase(p, k_zero, -1, 1.5), fdqpt::undefined_phase_error);
    // the dynamical part alone stays defined there
    CHECK(std::isfinite(fdqpt::dynamical_phase(p, k_zero, -1, 1.5)));
}

// ---- dynamical phase ------------------------------------------------------------------

TEST_CASE("dynamical phase is piecewise linear with the expectation slopes") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    for (double k : sample_k) {
        const auto b = fdqpt::band_at(p, k);
        for (int v : {+1, -1}) {
            CHECK(fdqpt::dynamical_phase(p, k, v, 0.0) == 0.0);

            // first half: slope -v hx nx from zero
            CHECK(std::abs(fdqpt::dynamical_phase(p, k, v, 0.4) + v * 0.4 * b.hx * b.nx) <=
                  1e-12);
            CHECK(std::abs(fdqpt::dynamical_phase(p, k, v, 0.6) -
                           2.0 * fdqpt::dynamical_phase(p, k, v, 0.3)) <= 1e-12);

            // second half: slope -v hy ny on top of the finished first half
            const double at_switch = fdqpt::dynamical_phase(p, k, v, 1.0);
            CHECK(std::abs(at_switch + v * b.hx * b.nx) <= 1e-12);
            CHECK(std::abs(fdqpt::dynamical_phase(p, k, v, 1.7) - at_switch +
                           v * 0.7 * b.hy * b.ny) <= 1e-12);

            // whole periods accumulate additively
            const double per_period = -v * (b.hx * b.nx + b.hy * b.ny);
            for (double t : {0.3, 1.2}) {
                CHECK(std::abs(fdqpt::dynamical_phase(p, k, v, t + 2.0) -
                               fdqpt::dynamical_phase(p, k, v, t) - per_period) <= 1e-12);
            }
        }
    }
}

TEST_CASE("closed-form dynamical phase agrees with midpoint quadrature") {
    for (double jy_pi : {1.1, 2.1}) {
        const auto p = fdqpt::make_pql(0.5 * k_pi, jy_pi * k_pi);
        for (double k : {-2.3, -0.9, 0.45, 1.8}) {
            for (int v : {+1, -1}) {
                for (double t : {0.7, 1.0, 1.6, 2.0, 3.3, -0.8}) {
                    const double closed = fdqpt::dynamical_phase(p, k, v, t);
                    const double quad = fdqpt::dynamical_phase_quadrature(p, k, v, t);
                    CHECK(std::abs(closed - quad) <= 1e-8);
                }
            }
        }
    }
}

// ---- geometric phase ---------------------------------------------------------------------

TEST_CASE("geometric phase inherits both quench symmetries exactly") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    for (double k : sample_k) {
        for (int v : {+1, -1}) {
            for (double t : {0.35, 0.8, 1.25, 1.9, 3.1}) {
                const double base_total = fdqpt::total_phase(p, k, v, t);
                if (k_pi - std::abs(base_total) < 1e-3) continue;  // stay off the fold
                const double base = fdqpt::geometric_phase(p, k, v, t);
                CHECK(std::abs(fdqpt::geometric_phase(p, k + k_pi, v, t) - base) <= 1e-10);
                CHECK(std::abs(fdqpt::geometric_phase(p, -k, v, t) - base) <= 1e-10);
            }
        }
    }
}

TEST_CASE("sampled phase decomposition is consistent and fully valid off the zeros") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    const auto s_grid = fdqpt::uniform_grid(0.0, 2.0, 30);
    const auto trace = fdqpt::compute_phase_trace(p, -1, 24, s_grid);

    REQUIRE(trace.k_grid.size() == 24);
    REQUIRE(trace.s_grid.size() == 30);
    REQUIRE(trace.total.size() == 24 * 30);
    CHECK(trace.v == -1);

    for (std::size_t i = 0; i < trace.k_grid.size(); ++i) {
        for (std::size_t j = 0; j < trace.s_grid.size(); ++j) {
            const std::size_t idx = trace.index(i, j);
            REQUIRE(trace.valid[idx] == 1);
            CHECK(std::abs(trace.geometric[idx] - (trace.total[idx] - trace.dynamical[idx])) <=
                  1e-15);
            CHECK(trace.total[idx] ==
                  fdqpt::total_phase(p, trace.k_grid[i], -1, trace.s_grid[j]));
            CHECK(trace.dynamical[idx] ==
                  fdqpt::dynamical_phase(p, trace.k_grid[i], -1, trace.s_grid[j]));
        }
    }
}

TEST_CASE("a gap closed everywhere invalidates the whole phase trace") {
    const auto flat = fdqpt::make_custom(
        "flat", [](double) { return k_pi; }, [](double) { return 0.0; },
        fdqpt::protocol_symmetries{});
    const auto trace = fdqpt::compute_phase_trace(flat, -1, 8, fdqpt::uniform_grid(0.0, 2.0, 6));
    for (char flag : trace.valid) CHECK(flag == 0);
}

// ---- winding of the geometric phase ---------------------------------------------------------

TEST_CASE("winding jumps by one across the single critical time") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    const auto t_grid = fdqpt::uniform_grid(0.0, 2.0, 1000);

    const auto trace = fdqpt::dtop(p, -1, t_grid, fdqpt::dtop_range::reduced, 400, {1.5});
    REQUIRE(trace.w.size() == t_grid.size());
    CHECK(trace.critical_markers == std::vector<double>{1.5});

    REQUIRE(trace.jumps.size() == 1);
    CHECK(trace.jumps[0].t_c == 1.5);
    CHECK(trace.jumps[0].delta == 1);
    CHECK(std::abs(trace.jumps[0].before) <= 1e-2);
    CHECK(std::abs(trace.jumps[0].after - 1.0) <= 1e-2);

    REQUIRE(trace.plateaus.size() == 2);
    CHECK(trace.plateaus[0].level == 0);
    CHECK(trace.plateaus[0].t_begin == 0.0);
    CHECK(trace.plateaus[1].level == 1);
    CHECK(trace.plateaus[1].t_end == doctest::Approx(1.998));
    CHECK(trace.nonquantized.empty());

    // the opposite band winds the opposite way
    const auto mirror = fdqpt::dtop(p, +1, t_grid, fdqpt::dtop_range::reduced, 400, {1.5});
    REQUIRE(mirror.jumps.size() == 1);
    CHECK(mirror.jumps[0].delta == -1);
}

TEST_CASE("windings accumulate across repeated periods") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    const auto trace = fdqpt::dtop(p, -1, fdqpt::uniform_grid(0.0, 4.0, 800),
                                   fdqpt::dtop_range::reduced, 400, {1.5});
    // the in-period marker extends to every covered period
    REQUIRE(trace.critical_markers.size() == 2);
    CHECK(trace.critical_markers[0] == doctest::Approx(1.5));
    CHECK(trace.critical_markers[1] == doctest::Approx(3.5));

    REQUIRE(trace.jumps.size() == 2);
    CHECK(trace.jumps[0].delta == 1);
    CHECK(trace.jumps[1].delta == 1);

    REQUIRE(trace.plateaus.size() == 3);
    CHECK(trace.plateaus[0].level == 0);
    CHECK(trace.plateaus[1].level == 1);
    CHECK(trace.plateaus[2].level == 2);
    CHECK(trace.nonquantized.empty());
}

TEST_CASE("a marker on the grid is evaluated from the right") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    const auto t_grid = fdqpt::uniform_grid(0.0, 2.0, 1000);  // t[750] == 1.5 exactly
    REQUIRE(t_grid[750] == 1.5);
    const auto trace = fdqpt::dtop(p, -1, t_grid, fdqpt::dtop_range::reduced, 200, {1.5});
    CHECK(trace.w[750] == trace.w[751]);
    CHECK(std::lround(trace.w[750]) == 1);
}

TEST_CASE("full-zone winding closes to an integer") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    const auto trace = fdqpt::dtop(p, -1, fdqpt::uniform_grid(0.0, 2.0, 500),
                                   fdqpt::dtop_range::full, 400, {1.5});
    for (double w : trace.w) {
        CHECK(std::abs(w - std::lround(w)) <= 1e-9);
    }
}

TEST_CASE("winding input validation") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    const auto grid = fdqpt::uniform_grid(0.0, 2.0, 600);

    CHECK_THROWS_AS(fdqpt::dtop(p, 0, grid, fdqpt::dtop_range::reduced, 200, {}),
                    fdqpt::parameter_error);
    CHECK_THROWS_AS(fdqpt::dtop(p, -1, grid, fdqpt::dtop_range::reduced, 1, {}),
                    fdqpt::parameter_error);
    CHECK_THROWS_AS(fdqpt::dtop(p, -1, {1.0}, fdqpt::dtop_range::reduced, 200, {}),
                    fdqpt::parameter_error);

    auto warped = grid;
    warped[300] += 1e-4;
    CHECK_THROWS_AS(fdqpt::dtop(p, -1, warped, fdqpt::dtop_range::reduced, 200, {}),
                    fdqpt::domain_error);
    CHECK_THROWS_AS(fdqpt::dtop(p, -1, fdqpt::uniform_grid(-1.0, 1.0, 100),
                                fdqpt::dtop_range::reduced, 200, {}),
                    fdqpt::domain_error);
    CHECK_THROWS_AS(fdqpt::dtop(p, -1, fdqpt::uniform_grid(2.0, 0.0, 100),
                                fdqpt::dtop_range::reduced, 200, {}),
                    fdqpt::domain_error);

    // the reduced channel leans on both symmetries; an asymmetric protocol
    // must be rejected for it but pass on the full zone
    const auto asym = fdqpt::make_custom(
        "asym", [](double k) { return 1.3 + 0.2 * std::cos(k); },
        [](double k) { return 1.9 * std::sin(k); }, fdqpt::protocol_symmetries{});
    CHECK_THROWS_AS(fdqpt::dtop(asym, -1, grid, fdqpt::dtop_range::reduced, 200, {}),
                    fdqpt::config_error);
    const auto full = fdqpt::dtop(asym, -1, fdqpt::uniform_grid(0.0, 2.0, 600),
                                  fdqpt::dtop_range::full, 200, {});
    CHECK(full.w.size() == 600);
}
