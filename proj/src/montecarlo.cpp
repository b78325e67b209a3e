#include "bellvol/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace bellvol {

void SamplingPlan::validate() const {
  if (n_samples == 0) throw std::invalid_argument("sampling plan: n_samples must be >= 1");
  if (chunk_size == 0) throw std::invalid_argument("sampling plan: chunk_size must be >= 1");
  if (!(confidence_level > 0 && confidence_level < 1)) {
    throw std::invalid_argument("sampling plan: confidence level must lie in (0, 1)");
  }
}

Direction sample_direction(PhiloxStream& stream) {
  const double cos_theta = 2 * stream.uniform() - 1;
  const double phi = 2 * std::numbers::pi * stream.uniform();
  const double sin_theta = std::sqrt(std::max(0.0, 1 - cos_theta * cos_theta));
  return Direction::from_vector(
      Vec3<double>(sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta));
}

Configuration draw_configuration(PhiloxStream& stream, const BellFunctional& functional,
                                 bool fix_first) {
  Configuration config;
  const int n = functional.n_directions();
  config[0] = fix_first ? Direction() : sample_direction(stream);
  for (int i = 1; i < n; ++i) config[i] = sample_direction(stream);
  return config;
}

bool violates(const TwoQubitState& state, const BellFunctional& functional,
              const Configuration& config, ChshMode mode) {
  if (functional.id == InequalityId::Bell1964) {
    return bell1_margin(state, config[0], config[1], config[2]).violated;
  }
  return chsh_margin(state, config[0], config[1], config[2], config[3], mode).violated;
}

// Acklam's rational approximation refined by one Halley step against erfc.
double normal_critical_value(double confidence_level) {
  if (!(confidence_level > 0 && confidence_level < 1)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  const double p = 1 - (1 - confidence_level) / 2;  // upper quantile
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double confidence_level) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  if (successes > trials) throw std::invalid_argument("wilson_interval: successes > trials");
  const double z = normal_critical_value(confidence_level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double center = (p + z2n / 2) / (1 + z2n);
  const double half = z / (1 + z2n) * std::sqrt(p * (1 - p) / n + z2n / (4 * n));
  WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  ci.low = std::min(ci.low, p);
  ci.high = std::max(ci.high, p);
  if (successes == 0) ci.low = 0;
  if (successes == trials) ci.high = 1;
  return ci;
}

namespace {

std::uint64_t count_chunk(const TwoQubitState& state, const BellFunctional& functional,
                          const SamplingPlan& plan, ChshMode mode, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * plan.chunk_size;
  const std::uint64_t end = std::min(plan.n_samples, begin + plan.chunk_size);
  PhiloxStream stream = chunk_stream(plan.seed, chunk);
  std::uint64_t hits = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    const Configuration config = draw_configuration(stream, functional, plan.fix_first_direction);
    hits += violates(state, functional, config, mode) ? 1 : 0;
  }
  return hits;
}

}  // namespace

ViolationEstimate estimate_volume(const TwoQubitState& state, const BellFunctional& functional,
                                  const SamplingPlan& plan, ChshMode mode, ExecutionOptions exec) {
  plan.validate();
  if (plan.fix_first_direction && !state.is_rotationally_invariant()) {
    throw std::domain_error(
        "fixing the first direction to (0,0,1) assumes no privileged direction: the state must "
        "have r = s = 0 and T proportional to the identity, which '" +
        state.label() + "' does not");
  }

  const std::uint64_t n_chunks = (plan.n_samples + plan.chunk_size - 1) / plan.chunk_size;
  unsigned workers = exec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : exec.threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chunks));

  std::vector<std::uint64_t> per_chunk(n_chunks, 0);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    try {
      for (std::uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
        per_chunk[c] = count_chunk(state, functional, plan, mode, c);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::uint64_t hits = 0;
  for (std::uint64_t h : per_chunk) hits += h;

  ViolationEstimate est;
  est.n_violating = hits;
  est.n_samples = plan.n_samples;
  est.fraction = static_cast<double>(hits) / static_cast<double>(plan.n_samples);
  est.std_error =
      std::sqrt(est.fraction * (1 - est.fraction) / static_cast<double>(plan.n_samples));
  const WilsonInterval ci = wilson_interval(hits, plan.n_samples, plan.confidence_level);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.confidence_level = plan.confidence_level;
  est.inequality_id = functional.id;
  est.state_label = state.label();
  est.mode = mode;
  est.seed = plan.seed;
  est.fix_first_direction = plan.fix_first_direction;
  return est;
}

std::vector<ViolationEstimate> sweep(const std::vector<TwoQubitState>& states,
                                     const BellFunctional& functional, const SamplingPlan& plan,
                                     ChshMode mode, ExecutionOptions exec) {
  if (states.empty()) throw std::invalid_argument("sweep: empty state list");
  std::vector<ViolationEstimate> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    SamplingPlan derived = plan;
    derived.seed = plan.seed ^ static_cast<std::uint64_t>(i);
    try {
      out.push_back(estimate_volume(states[i], functional, derived, mode, exec));
    } catch (const std::exception& e) {
      throw SweepError(i, e.what());
    }
  }
  return out;
}

}  // namespace bellvol
