#pragma once

#include <functional>
#include <string>

#include "fdqpt/errors.hpp"
#include "fdqpt/pauli.hpp"

namespace fdqpt {

// Dimensionless driving period (hbar = 1); the two quench halves are
// [2l, 2l+1) and [2l+1, 2l+2).
inline constexpr double driving_period = 2.0;

enum class protocol_kind { pql, custom };

// Declared k-space symmetries of the quench pair (h_x, h_y):
//   translation_by_pi : h_j(k + pi) = -h_j(k) for j in {x, y}
//   reflection        : h_x even in k, h_y odd in k
struct protocol_symmetries {
    bool translation_by_pi = false;
    bool reflection = false;
};

// ---------------------------------------------------------------------------
// quench_protocol
//
// Immutable description of one periodically quenched two-band protocol:
//   H(k, t) = h_x(k) sigma_x  for the first half of every period,
//   H(k, t) = h_y(k) sigma_y  for the second half.
// Instances are safe to copy and to evaluate concurrently from any thread.
// ---------------------------------------------------------------------------
class quench_protocol {
  public:
    protocol_kind kind() const { return kind_; }
    const std::string& label() const { return label_; }

    double h_x(double k) const { return hx_(k); }
    double h_y(double k) const { return hy_(k); }
    const protocol_symmetries& symmetries() const { return symmetries_; }

    // Quench amplitudes; meaningful for kind() == pql only.
    double amplitude_x() const { return jx_; }
    double amplitude_y() const { return jy_; }

    friend quench_protocol make_pql(double j_x, double j_y);
    friend quench_protocol make_custom(std::string label, std::function<double(double)> h_x,
                                       std::function<double(double)> h_y,
                                       protocol_symmetries declared);

  private:
    quench_protocol() = default;

    protocol_kind kind_ = protocol_kind::custom;
    std::string label_;
    std::function<double(double)> hx_;
    std::function<double(double)> hy_;
    protocol_symmetries symmetries_;
    double jx_ = 0.0;
    double jy_ = 0.0;
};

// h_x(k) = J_x cos k, h_y(k) = J_y sin k with J_x, J_y > 0;
// both symmetry flags hold and are set.
quench_protocol make_pql(double j_x, double j_y);

// Arbitrary quench pair with explicitly declared symmetries.  The declared
// flags are verified on random quasimomentum samples at construction, so the
// symmetry reductions downstream can never be silently wrong; a violated
// declaration raises parameter_error.  The callables must accept any real k
// (2 pi periodic continuation of the Brillouin zone).
quench_protocol make_custom(std::string label, std::function<double(double)> h_x,
                            std::function<double(double)> h_y, protocol_symmetries declared);

// One-line identifier with parameters, used in trace metadata.
std::string describe(const quench_protocol& p);

// t = s + 2*cycles with s in [0, 2), cycles integer (floor division);
// negative t reduces the same way.
struct reduced_time {
    long long cycles;
    double s;
};
reduced_time reduce_time(double t);

// Piecewise Hamiltonian at arbitrary real time, as a Hermitian operator.
pauli_operator hamiltonian_at(const quench_protocol& p, double k, double t);

}  // namespace fdqpt
