#pragma once

#include <array>
#include <string>
#include <vector>

#include "fdqpt/protocols.hpp"

namespace fdqpt {

// ---------------------------------------------------------------------------
// analytic critical structure
//
// The return probability vanishes exactly when either quench angle hits a
// quarter turn while the matching unit-vector component is zero.  Four
// families result; the names record which half-period hosts the zero and
// which quench function satisfies an integer or half-integer condition.
// ---------------------------------------------------------------------------
enum class critical_branch {
    first_half_hx_integer,        // h_x(k_c) = m pi,          s_c = (2p-1)/(2m)
    first_half_hy_half_integer,   // h_y(k_c) = (2m-1) pi/2,   s_c = (2p-1) pi / (2 h_x(k_c))
    second_half_hy_integer,       // h_y(k_c) = n pi,          s'_c = (2q-1)/(2n)
    second_half_hx_half_integer,  // h_x(k_c) = (2n-1) pi/2,   s'_c = (2q-1) pi / (2 h_y(k_c))
};
const char* to_string(critical_branch b);

struct critical_point {
    double k_c = 0.0;      // in [-pi, pi); may be a symmetry image of k_principal
    double s_c = 0.0;      // in (0,1) for first-half branches, (1,2) for second-half
    critical_branch branch = critical_branch::first_half_hx_integer;
    std::array<int, 2> indices{0, 0};  // (m, p) or (n, q)
    double k_principal = 0.0;          // principal arccos/arcsin value of the family
};

// Exhaustive closed-form enumeration for h_x = J_x cos k, h_y = J_y sin k.
// Every principal momentum is expanded to the symmetry images in [-pi, pi)
// that satisfy the same defining condition; candidates whose companion
// denominator vanishes are dropped; duplicates merge within 1e-9.  The result
// is sorted by (s_c, k_c).  An empty list is a valid outcome.
std::vector<critical_point> critical_points_pql(double j_x, double j_y);

// Same four conditions solved numerically (level-set roots of h_x, h_y over
// the zone, including tangential touchings); identical output contract.
std::vector<critical_point> critical_points_general(const quench_protocol& p);

// Distinct critical times of a point set, merged within 1e-9 and sorted.
std::vector<double> distinct_critical_times(const std::vector<critical_point>& points);

// ---------------------------------------------------------------------------
// band touchings
// ---------------------------------------------------------------------------
struct gapless_momentum {
    double k0 = 0.0;
    int m = 0;  // h_x(k0) = m pi
    int n = 0;  // h_y(k0) = n pi
};

struct gapless_set {
    std::vector<gapless_momentum> points;
    bool empty() const { return points.empty(); }
};

// All k0 in [-pi, pi) where both quench angles are simultaneously integer
// multiples of pi (the eigenphase gap closes at 0 or pi there), found by
// intersecting numerically solved level sets; labels (m, n) attached.
gapless_set gapless_momenta(const quench_protocol& p);

// ---------------------------------------------------------------------------
// phase-boundary membership
// ---------------------------------------------------------------------------
struct boundary_check {
    bool on_boundary = false;
    int m = 0, n = 0;  // witness when on_boundary
};

// True iff integers (m, n) with |m| <= J_x/pi, |n| <= J_y/pi satisfy
// | m^2 pi^2 / J_x^2 + n^2 pi^2 / J_y^2 - 1 | < tolerance.
boundary_check on_phase_boundary(double j_x, double j_y, double tolerance);

}  // namespace fdqpt
