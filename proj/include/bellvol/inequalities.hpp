#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string_view>

#include "bellvol/quantum.hpp"

namespace bellvol {

enum class InequalityId { Bell1964, CHSH };

/// Placement of the minus sign in the CHSH combination.
///   fixed: S = E(a,b) + E(a,b') + E(a',b) - E(a',b').
///   max_over_sign_position: the largest |S_k| - 2 over the four placements.
enum class ChshMode { fixed, max_over_sign_position };

constexpr std::string_view to_string(InequalityId id) {
  return id == InequalityId::Bell1964 ? "bell1" : "chsh";
}
constexpr std::string_view to_string(ChshMode m) {
  return m == ChshMode::fixed ? "fixed" : "max";
}

/// Descriptor of a Bell inequality written as I <= classical_bound.
///
/// Bell-1964 is I = |E(a,b) - E(a,c)| - E(b,c) <= 1 with the direction b shared
/// by both parties. It only certifies nonlocality under the perfect
/// anticorrelation premise it was derived from: a product state such as
/// r = s = z can "violate" it (b = z, c = -z). The violating volume is still
/// well defined for every state, but only singlet-like states make it a
/// nonlocality statement.
struct BellFunctional {
  InequalityId id;
  int n_settings_a;
  int n_settings_b;
  double classical_bound;
  double quantum_bound;

  /// Number of distinct directions drawn per configuration.
  int n_directions() const { return id == InequalityId::Bell1964 ? 3 : 4; }

  static BellFunctional bell1964() { return {InequalityId::Bell1964, 2, 2, 1.0, 1.5}; }
  static BellFunctional chsh() {
    return {InequalityId::CHSH, 2, 2, 2.0, 2.0 * std::numbers::sqrt2};
  }
};

/// Sign-normalized violation indicator: positive value means violation.
template <typename Scalar>
struct MarginT {
  Scalar value;
  bool violated;

  static MarginT from_value(Scalar value, Scalar tolerance = Scalar(0)) {
    return {value, value > tolerance};
  }
};
using Margin = MarginT<double>;

/// |E(a,b) - E(a,c)| - 1 - E(b,c).
template <typename Scalar>
MarginT<Scalar> bell1_margin(const TwoQubitStateT<Scalar>& state, const DirectionT<Scalar>& a,
                             const DirectionT<Scalar>& b, const DirectionT<Scalar>& c,
                             Scalar tolerance = Scalar(0)) {
  const Scalar value = std::abs(correlation(state, a, b) - correlation(state, a, c)) - Scalar(1) -
                       correlation(state, b, c);
  return MarginT<Scalar>::from_value(value, tolerance);
}

/// Singlet Bell-1964 margin with a = (0, 0, 1), in terms of the polar angles of
/// b and c and their azimuth difference phi.
template <typename Scalar>
MarginT<Scalar> bell1_margin_angles(Scalar theta_b, Scalar theta_c, Scalar phi,
                                    Scalar tolerance = Scalar(0)) {
  const Scalar cb = std::cos(theta_b), sb = std::sin(theta_b);
  const Scalar cc = std::cos(theta_c), sc = std::sin(theta_c);
  const Scalar value = std::abs(cc - cb) - (Scalar(1) - sc * sb * std::cos(phi) - cc * cb);
  return MarginT<Scalar>::from_value(value, tolerance);
}

/// S = E(a,b) + E(a,b') + E(a',b) - E(a',b').
template <typename Scalar>
Scalar chsh_value(const TwoQubitStateT<Scalar>& state, const DirectionT<Scalar>& a,
                  const DirectionT<Scalar>& a2, const DirectionT<Scalar>& b,
                  const DirectionT<Scalar>& b2) {
  return correlation(state, a, b) + correlation(state, a, b2) + correlation(state, a2, b) -
         correlation(state, a2, b2);
}

template <typename Scalar>
MarginT<Scalar> chsh_margin(const TwoQubitStateT<Scalar>& state, const DirectionT<Scalar>& a,
                            const DirectionT<Scalar>& a2, const DirectionT<Scalar>& b,
                            const DirectionT<Scalar>& b2, ChshMode mode = ChshMode::fixed,
                            Scalar tolerance = Scalar(0)) {
  const Scalar e_ab = correlation(state, a, b);
  const Scalar e_ab2 = correlation(state, a, b2);
  const Scalar e_a2b = correlation(state, a2, b);
  const Scalar e_a2b2 = correlation(state, a2, b2);
  const Scalar total = e_ab + e_ab2 + e_a2b + e_a2b2;
  if (mode == ChshMode::fixed) {
    return MarginT<Scalar>::from_value(std::abs(total - 2 * e_a2b2) - Scalar(2), tolerance);
  }
  const std::array<Scalar, 4> s = {total - 2 * e_ab, total - 2 * e_ab2, total - 2 * e_a2b,
                                   total - 2 * e_a2b2};
  Scalar best = std::abs(s[0]);
  for (Scalar v : s) best = std::max(best, std::abs(v));
  return MarginT<Scalar>::from_value(best - Scalar(2), tolerance);
}

}  // namespace bellvol
