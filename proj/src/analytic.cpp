#include "bellvol/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellvol {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre order per panel for the folded volume integral.
constexpr int kPanelOrder = 20;
constexpr int kMaxPanelDoublings = 24;

}  // namespace

ReducedCoordinates ReducedCoordinates::make(double x, double y, double z) {
  if (!(x >= -1 && x <= 1) || !(y >= -1 && y <= 1) || !(z >= 0 && z <= 1)) {
    throw std::domain_error("reduced coordinates outside [-1,1]x[-1,1]x[0,1]");
  }
  return {x, y, z};
}

ReducedCoordinates ReducedCoordinates::from_angles(double theta_b, double theta_c, double phi) {
  const double c = std::cos(phi);
  return make(std::cos(theta_b), std::cos(theta_c), std::min(1.0, c * c));
}

bool ReducedCoordinates::violates_upper_half() const {
  return (1 + x) * (1 - y) < z * (1 - x) * (1 + y);
}

std::string_view to_string(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::closed_form: return "closed_form";
    case VolumeMethod::quadrature: return "quadrature";
    case VolumeMethod::series: return "series";
    case VolumeMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

double bell1964_total_volume() { return 16 * kPi * kPi; }

double y_boundary(double x, double z) {
  if (!(x >= -1 && x <= 1) || !(z >= 0 && z <= 1)) {
    throw std::domain_error("y_boundary: need x in [-1, 1] and z in [0, 1]");
  }
  if (x == -1 && z == 0) {
    throw std::domain_error("y_boundary: (x, z) = (-1, 0) is indeterminate (0/0)");
  }
  const double p = 1 + x;
  const double m = z * (1 - x);
  return (p - m) / (p + m);
}

double area_closed(double z) {
  if (!(z >= 0 && z <= 1)) throw std::domain_error("area_closed: z outside [0, 1]");
  if (z == 0) return 0;
  if (z == 1) return 2;
  // With w = 1 - z: 1 - z^2 = w (2 - w) and ln z = log1p(-w); both keep full
  // relative precision as w -> 0, leaving only the cancellation of the sum.
  const double w = 1 - z;
  const double log_z = z < 0.5 ? std::log(z) : std::log1p(-w);
  return 2 - 2 / (w * w) * (2 * z * log_z + w * (2 - w));
}

double area_series(double z, double rel_tol) {
  if (!(z >= 0 && z <= 1)) throw std::domain_error("area_series: z outside [0, 1]");
  if (!(rel_tol > 0)) throw std::domain_error("area_series: rel_tol must be positive");
  if (z == 0) return 0;
  const double q = 1 - z;
  double power = 1;  // q^n
  double sum = 0;
  for (std::size_t n = 0; n < kAreaSeriesMaxTerms; ++n) {
    sum += power / static_cast<double>(n + 2);
    power *= q;
    // sum_{k>n} q^k/(k+2) <= q^{n+1} / ((n+3) (1-q))
    const double tail = power / (static_cast<double>(n + 3) * z);
    if (tail <= rel_tol * sum) return 4 * z * sum;
  }
  throw std::runtime_error("area_series: no convergence within " +
                           std::to_string(kAreaSeriesMaxTerms) + " terms at z = " +
                           std::to_string(z));
}

double area(double z) {
  if (!(z >= 0 && z <= 1)) throw std::domain_error("area: z outside [0, 1]");
  return z <= kAreaDispatchCrossover ? area_closed(z) : area_series(z);
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // P_n = p1, P_{n-1} = p0
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2 / ((1 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

namespace {

// int_lo^hi f over `panels` equal panels; panels summed left to right.
double composite_gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                                std::size_t panels, const GaussLegendreRule& rule) {
  const double width = (hi - lo) / static_cast<double>(panels);
  double total = 0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    const double mid = a + width / 2;
    double panel = 0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * f(mid + width / 2 * rule.nodes[k]);
    }
    total += panel * width / 2;
  }
  return total;
}

}  // namespace

VolumeResult volume_quadrature(double abs_tol) { return volume_quadrature(abs_tol, area); }

VolumeResult volume_quadrature(double abs_tol, const std::function<double(double)>& area_fn) {
  if (!(abs_tol >= kQuadratureTolFloor)) {
    throw std::invalid_argument("volume_quadrature: tolerance " + std::to_string(abs_tol) +
                                " is below the achievable floor 1e-13");
  }
  static const GaussLegendreRule rule = gauss_legendre(kPanelOrder);
  // z = sin^2 u turns dz / sqrt(z (1-z)) into 2 du.
  const auto integrand = [&area_fn](double u) {
    const double s = std::sin(u);
    return area_fn(std::min(1.0, s * s));
  };
  const double prefactor = 8 * kPi;
  std::size_t panels = 1;
  double previous = prefactor * composite_gauss_legendre(integrand, 0, kPi / 2, panels, rule);
  double current = previous;
  double difference = 0;
  int doublings = 0;
  bool converged = false;
  for (; doublings < kMaxPanelDoublings; ++doublings) {
    panels *= 2;
    current = prefactor * composite_gauss_legendre(integrand, 0, kPi / 2, panels, rule);
    difference = std::abs(current - previous);
    if (difference < abs_tol) {
      converged = true;
      break;
    }
    previous = current;
  }
  if (!converged) {
    throw std::runtime_error("volume_quadrature: panel doubling did not reach tolerance " +
                             std::to_string(abs_tol));
  }
  VolumeResult out;
  out.volume = current;
  out.total = bell1964_total_volume();
  out.relative = out.volume / out.total;
  out.method = VolumeMethod::quadrature;
  out.diagnostics["panels"] = static_cast<double>(panels);
  out.diagnostics["nodes_per_panel"] = kPanelOrder;
  out.diagnostics["function_evaluations"] = static_cast<double>(panels * kPanelOrder);
  out.diagnostics["last_difference"] = difference;
  return out;
}

std::vector<double> volume_series_partials(std::size_t n_terms) {
  if (n_terms < 1) throw std::invalid_argument("volume_series: need at least one term");
  std::vector<double> partials;
  partials.reserve(n_terms);
  // 8 pi^{3/2} * Gamma(1/2)/Gamma(3) = 4 pi^2; ratio holds Gamma(n+1/2)/Gamma(n+3) in units of
  // its n = 0 value.
  const double prefactor = 4 * kPi * kPi;
  double ratio = 1;
  double sum = 0;
  for (std::size_t n = 0; n < n_terms; ++n) {
    sum += ratio;
    partials.push_back(prefactor * sum);
    const double nn = static_cast<double>(n);
    ratio *= (nn + 0.5) / (nn + 3);
  }
  return partials;
}

double volume_series_partial(std::size_t n_terms) {
  if (n_terms < 1) throw std::invalid_argument("volume_series: need at least one term");
  const double prefactor = 4 * kPi * kPi;
  double ratio = 1;
  double sum = 0;
  for (std::size_t n = 0; n < n_terms; ++n) {
    sum += ratio;
    const double nn = static_cast<double>(n);
    ratio *= (nn + 0.5) / (nn + 3);
  }
  return prefactor * sum;
}

double hypergeometric_2f1_at_one(double a, double b, double c) {
  if (!(c - a - b > 0)) {
    throw std::domain_error("2F1(a, b; c; 1) diverges unless c - a - b > 0");
  }
  return std::exp(std::lgamma(c) + std::lgamma(c - a - b) - std::lgamma(c - a) - std::lgamma(c - b));
}

VolumeResult exact_volume() {
  VolumeResult out;
  out.total = bell1964_total_volume();
  out.volume = out.total / 3;
  out.relative = 1.0 / 3.0;
  out.method = VolumeMethod::closed_form;
  // sum Gamma(n+1/2)/Gamma(n+3) = Gamma(1/2)/2 * 2F1(1/2, 1; 3; 1) = 2 sqrt(pi) / 3
  const double f21 = hypergeometric_2f1_at_one(0.5, 1.0, 3.0);
  out.diagnostics["hypergeometric_2f1"] = f21;
  out.diagnostics["gamma_series_sum"] = std::sqrt(kPi) / 2 * f21;
  out.diagnostics["volume_via_hypergeometric"] = 8 * std::pow(kPi, 1.5) * std::sqrt(kPi) / 2 * f21;
  return out;
}

}  // namespace bellvol
