#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bellvol {

/// Chart used for the singlet under Bell-1964 settings with a = (0, 0, 1):
/// x = cos(theta_b), y = cos(theta_c), z = cos^2(phi_c - phi_b).
///
/// On each of the four phi-intervals [-2pi,-3pi/2], [-pi/2,0], [0,pi/2] and
/// [3pi/2,2pi] the map phi -> z is one-to-one and cos(phi) >= 0. Outside them
/// cos(phi) <= 0 and the inequality cannot be violated.
struct ReducedCoordinates {
  double x;
  double y;
  double z;

  /// Throws `std::domain_error` unless x, y in [-1, 1] and z in [0, 1].
  static ReducedCoordinates make(double x, double y, double z);
  static ReducedCoordinates from_angles(double theta_b, double theta_c, double phi);

  /// Strict violation of the Bell-1964 inequality in the y > x half,
  /// (1 + x)(1 - y) < z (1 - x)(1 + y). Only meaningful where cos(phi) >= 0.
  bool violates_upper_half() const;
};

enum class VolumeMethod { closed_form, quadrature, series, monte_carlo };

std::string_view to_string(VolumeMethod m);

/// Absolute and relative volume of the violating subset of setting space.
struct VolumeResult {
  double volume = 0;
  double total = 0;
  double relative = 0;
  VolumeMethod method = VolumeMethod::closed_form;
  std::map<std::string, double> diagnostics;
};

/// Total Bell-1964 setting volume, the product of two solid angles: 16 pi^2.
double bell1964_total_volume();

/// Boundary curve y(x) = [(1+x) - z(1-x)] / [(1+x) + z(1-x)] of the violating
/// region at fixed z. Throws `std::domain_error` at the indeterminate point
/// (x, z) = (-1, 0) or outside x in [-1, 1], z in [0, 1].
double y_boundary(double x, double z);

/// Area between y_boundary(., z) and y = 1 over x in [-1, 1] from the
/// logarithmic closed form 2 - 2/(1-z)^2 [2 z ln z + (1 - z^2)].
/// A(0) = 0 and A(1) = 2 are taken as limits.
double area_closed(double z);

/// Same area from 4 z sum_{n>=0} (1-z)^n / (n+2).
///
/// Summation stops once the geometric bound on the remaining tail,
/// t_n / z, drops below rel_tol times the running sum. Throws
/// `std::domain_error` for z outside [0, 1] or rel_tol <= 0 and
/// `std::runtime_error` past kAreaSeriesMaxTerms terms.
double area_series(double z, double rel_tol = 1e-15);

inline constexpr std::size_t kAreaSeriesMaxTerms = 100'000'000;

/// Closed form for z <= 0.9, series above (the closed form loses digits to
/// cancellation as z -> 1).
double area(double z);

inline constexpr double kAreaDispatchCrossover = 0.9;

/// V = 4 pi int_0^1 A(z) / sqrt(z (1-z)) dz, evaluated as
/// 8 pi int_0^{pi/2} A(sin^2 u) du with composite Gauss-Legendre panels,
/// doubling the panel count until successive estimates differ by < abs_tol.
///
/// Throws `std::invalid_argument` for abs_tol below kQuadratureTolFloor.
VolumeResult volume_quadrature(double abs_tol);
/// Same, with the area function replaced (test hook).
VolumeResult volume_quadrature(double abs_tol, const std::function<double(double)>& area_fn);

inline constexpr double kQuadratureTolFloor = 1e-13;

/// Partial sum 8 pi^{3/2} sum_{n<N} Gamma(n+1/2)/Gamma(n+3). The gamma ratio
/// is advanced by its recurrence, never evaluated directly.
double volume_series_partial(std::size_t n_terms);

/// All partial sums S_1..S_N, same recurrence.
std::vector<double> volume_series_partials(std::size_t n_terms);

/// Gauss's summation theorem, 2F1(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b)).
/// Requires c - a - b > 0.
double hypergeometric_2f1_at_one(double a, double b, double c);

/// V = 16 pi^2 / 3, v = 1/3.
VolumeResult exact_volume();

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

}  // namespace bellvol
