#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellvol/inequalities.hpp"
#include "bellvol/quantum.hpp"
#include "bellvol/rng.hpp"

namespace bellvol {

struct SamplingPlan {
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = std::uint64_t{1} << 16;
  /// Pin a = (0, 0, 1). Only allowed for rotationally invariant states.
  bool fix_first_direction = false;
  double confidence_level = 0.99;

  /// Throws `std::invalid_argument` on n_samples == 0, chunk_size == 0 or a
  /// confidence level outside (0, 1).
  void validate() const;
};

struct ViolationEstimate {
  double fraction = 0;
  std::uint64_t n_violating = 0;
  std::uint64_t n_samples = 0;
  double std_error = 0;  // binomial sqrt(p (1 - p) / n)
  double ci_low = 0;
  double ci_high = 0;
  double confidence_level = 0;
  InequalityId inequality_id = InequalityId::Bell1964;
  std::string state_label;
  ChshMode mode = ChshMode::fixed;
  std::uint64_t seed = 0;
  bool fix_first_direction = false;
};

/// Execution knobs that never change results.
struct ExecutionOptions {
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Uniform point on the sphere: cos(theta) ~ U[-1, 1), phi ~ U[0, 2 pi).
Direction sample_direction(PhiloxStream& stream);

/// One sampled configuration. Bell-1964 fills {a, b, c}; CHSH fills
/// {a, a', b, b'}. With `fix_first` the first slot is (0, 0, 1) and is not drawn.
using Configuration = std::array<Direction, 4>;
Configuration draw_configuration(PhiloxStream& stream, const BellFunctional& functional,
                                 bool fix_first);

/// Violation test for one configuration with the strict margin (> 0).
bool violates(const TwoQubitState& state, const BellFunctional& functional,
              const Configuration& config, ChshMode mode = ChshMode::fixed);

/// Substream used for chunk `index` of a plan.
inline PhiloxStream chunk_stream(std::uint64_t seed, std::uint64_t index) {
  return PhiloxStream(seed, index);
}

/// Two-sided standard normal quantile for a central confidence level,
/// e.g. 0.95 -> 1.959963984540054.
double normal_critical_value(double confidence_level);

struct WilsonInterval {
  double low;
  double high;
};
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double confidence_level);

/// Fraction of uniformly drawn direction tuples that strictly violate the
/// functional for `state`.
///
/// Samples are split into chunks of plan.chunk_size; chunk i always draws
/// from substream (plan.seed, i), so the result does not depend on how many
/// workers run the chunks. Throws `std::domain_error` when
/// fix_first_direction is requested for a state that is not rotationally
/// invariant.
ViolationEstimate estimate_volume(const TwoQubitState& state, const BellFunctional& functional,
                                  const SamplingPlan& plan, ChshMode mode = ChshMode::fixed,
                                  ExecutionOptions exec = {});

class SweepError : public std::runtime_error {
 public:
  SweepError(std::size_t index, const std::string& what)
      : std::runtime_error("sweep entry " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// One estimate per state, in order; entry i uses seed plan.seed ^ i.
std::vector<ViolationEstimate> sweep(const std::vector<TwoQubitState>& states,
                                     const BellFunctional& functional, const SamplingPlan& plan,
                                     ChshMode mode = ChshMode::fixed, ExecutionOptions exec = {});

}  // namespace bellvol
