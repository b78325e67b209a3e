#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace bellvol {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

/// Unit vector on the sphere, used for every measurement axis.
///
/// Construction from raw components re-normalizes inputs whose norm is within
/// `kNormSlack` of one and rejects everything else, so values read from text
/// files with a few digits of rounding are accepted.
template <typename Scalar>
class DirectionT {
 public:
  static constexpr Scalar kNormSlack = Scalar(1e-6);

  /// North pole (0, 0, 1).
  DirectionT() : v_(0, 0, 1) {}

  static DirectionT from_components(Scalar ux, Scalar uy, Scalar uz) {
    return from_vector(Vec3<Scalar>(ux, uy, uz));
  }

  static DirectionT from_vector(const Vec3<Scalar>& v) {
    if (!v.allFinite()) {
      throw std::invalid_argument("direction has non-finite components");
    }
    const Scalar n = v.norm();
    if (std::abs(n - Scalar(1)) > kNormSlack) {
      throw std::domain_error("direction is not a unit vector (norm " + std::to_string(n) + ")");
    }
    DirectionT d;
    d.v_ = v / n;
    return d;
  }

  Scalar ux() const { return v_.x(); }
  Scalar uy() const { return v_.y(); }
  Scalar uz() const { return v_.z(); }
  const Vec3<Scalar>& vector() const { return v_; }

  /// Polar angle in [0, pi].
  Scalar theta() const { return std::acos(std::clamp(v_.z(), Scalar(-1), Scalar(1))); }
  /// Azimuth in [0, 2 pi).
  Scalar phi() const {
    Scalar p = std::atan2(v_.y(), v_.x());
    if (p < 0) p += 2 * std::numbers::pi_v<Scalar>;
    return p;
  }

  Scalar dot(const DirectionT& other) const { return v_.dot(other.v_); }

 private:
  Vec3<Scalar> v_;
};

/// Spherical chart (sin t cos p, sin t sin p, cos t).
///
/// `theta` is clamped to [0, pi] and `phi` is taken mod 2 pi. NaN or infinite
/// angles throw `std::invalid_argument`.
template <typename Scalar>
DirectionT<Scalar> direction_from_spherical(Scalar theta, Scalar phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw std::invalid_argument("spherical angles must be finite");
  }
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  theta = std::clamp(theta, Scalar(0), pi);
  phi = std::fmod(phi, 2 * pi);
  if (phi < 0) phi += 2 * pi;
  const Scalar st = std::sin(theta);
  return DirectionT<Scalar>::from_components(st * std::cos(phi), st * std::sin(phi),
                                             std::cos(theta));
}

/// Angles of b and c measured from a = (0, 0, 1).
template <typename Scalar>
struct AngleSettingsT {
  Scalar theta_b = 0;
  Scalar theta_c = 0;
  Scalar phi_b = 0;
  Scalar phi_c = 0;

  /// Azimuth difference phi_c - phi_b, in [-2 pi, 2 pi].
  Scalar phi() const { return phi_c - phi_b; }
  /// phi_c + phi_b, in [0, 4 pi]. Never enters the Bell-1964 margin.
  Scalar lambda() const { return phi_c + phi_b; }

  std::pair<DirectionT<Scalar>, DirectionT<Scalar>> to_directions() const {
    return {direction_from_spherical(theta_b, phi_b), direction_from_spherical(theta_c, phi_c)};
  }

  static AngleSettingsT from_directions(const DirectionT<Scalar>& b, const DirectionT<Scalar>& c) {
    return {b.theta(), c.theta(), b.phi(), c.phi()};
  }
};

namespace detail {

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> pauli(int i) {
  using C = std::complex<Scalar>;
  Eigen::Matrix<C, 2, 2> m;
  switch (i) {
    case 0: m << C(0), C(1), C(1), C(0); break;
    case 1: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 2: m << C(1), C(0), C(0), C(-1); break;
    default: m.setIdentity(); break;
  }
  return m;
}

template <typename Scalar>
Mat4c<Scalar> kron(const Eigen::Matrix<std::complex<Scalar>, 2, 2>& a,
                   const Eigen::Matrix<std::complex<Scalar>, 2, 2>& b) {
  Mat4c<Scalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace detail

/// Two-qubit density operator in Bloch form,
///   rho = (I x I + r.sigma x I + I x s.sigma + sum_ij T_ij sigma_i x sigma_j) / 4.
///
/// Only the correlation tensor enters the Bell functionals; the 4x4 matrix is
/// rebuilt solely to check positivity when a state is created.
template <typename Scalar>
class TwoQubitStateT {
 public:
  static constexpr Scalar kPsdTolerance = Scalar(1e-9);

  /// Validating constructor. Throws `std::domain_error` when the reconstructed
  /// operator has an eigenvalue below -kPsdTolerance.
  static TwoQubitStateT make(const Vec3<Scalar>& r, const Vec3<Scalar>& s, const Mat3<Scalar>& t,
                             std::string label) {
    if (!r.allFinite() || !s.allFinite() || !t.allFinite()) {
      throw std::invalid_argument("state components must be finite");
    }
    TwoQubitStateT st(r, s, t, std::move(label));
    const Scalar lo = st.min_eigenvalue();
    if (lo < -kPsdTolerance) {
      throw std::domain_error("state '" + st.label_ + "' is not positive semidefinite (min eigenvalue " +
                              std::to_string(lo) + ")");
    }
    return st;
  }

  const Vec3<Scalar>& r() const { return r_; }
  const Vec3<Scalar>& s() const { return s_; }
  const Mat3<Scalar>& T() const { return t_; }
  const std::string& label() const { return label_; }

  Mat4c<Scalar> density_matrix() const {
    using detail::kron;
    using detail::pauli;
    using C = std::complex<Scalar>;
    const auto id = pauli<Scalar>(3);
    Mat4c<Scalar> rho = kron<Scalar>(id, id);
    for (int i = 0; i < 3; ++i) {
      rho += C(r_(i)) * kron<Scalar>(pauli<Scalar>(i), id);
      rho += C(s_(i)) * kron<Scalar>(id, pauli<Scalar>(i));
      for (int j = 0; j < 3; ++j) rho += C(t_(i, j)) * kron<Scalar>(pauli<Scalar>(i), pauli<Scalar>(j));
    }
    return rho / C(4);
  }

  Scalar min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat4c<Scalar>> es(density_matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// r = s = 0 and T proportional to the identity, i.e. invariant under a
  /// common rotation of both parties' axes.
  bool is_rotationally_invariant(Scalar tol = Scalar(1e-12)) const {
    if (r_.cwiseAbs().maxCoeff() > tol || s_.cwiseAbs().maxCoeff() > tol) return false;
    const Scalar diag = t_.trace() / 3;
    return (t_ - diag * Mat3<Scalar>::Identity()).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  TwoQubitStateT(const Vec3<Scalar>& r, const Vec3<Scalar>& s, const Mat3<Scalar>& t, std::string label)
      : r_(r), s_(s), t_(t), label_(std::move(label)) {}

  Vec3<Scalar> r_;
  Vec3<Scalar> s_;
  Mat3<Scalar> t_;
  std::string label_;
};

template <typename Scalar = double>
TwoQubitStateT<Scalar> singlet() {
  return TwoQubitStateT<Scalar>::make(Vec3<Scalar>::Zero(), Vec3<Scalar>::Zero(),
                                      -Mat3<Scalar>::Identity(), "singlet");
}

/// p |psi_s><psi_s| + (1 - p) I / 4. Throws `std::domain_error` for p outside [0, 1].
template <typename Scalar = double>
TwoQubitStateT<Scalar> werner(Scalar p) {
  if (!(p >= 0 && p <= 1)) {
    throw std::domain_error("werner weight must lie in [0, 1], got " + std::to_string(p));
  }
  std::ostringstream label;
  label << "werner(" << p << ")";
  return TwoQubitStateT<Scalar>::make(Vec3<Scalar>::Zero(), Vec3<Scalar>::Zero(),
                                      -p * Mat3<Scalar>::Identity(), label.str());
}

/// E(a, b) = a^T T b.
template <typename Scalar>
Scalar correlation(const TwoQubitStateT<Scalar>& state, const DirectionT<Scalar>& a,
                   const DirectionT<Scalar>& b) {
  return a.vector().dot(state.T() * b.vector());
}

using Direction = DirectionT<double>;
using AngleSettings = AngleSettingsT<double>;
using TwoQubitState = TwoQubitStateT<double>;

/// Parses the state-file JSON object `{"r": [..3], "s": [..3], "T": [[..3] x3], "label": ".."}`.
/// Errors name the offending field.
TwoQubitState state_from_json_text(const std::string& text);
TwoQubitState load_state_file(const std::string& path);
std::string state_to_json_text(const TwoQubitState& state);

}  // namespace bellvol
