#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bellvol/inequalities.hpp"

using namespace bellvol;

namespace {

constexpr double kPi = std::numbers::pi;

// Direction in the x-z plane at `deg` degrees from +z.
Direction planar(double deg) { return direction_from_spherical(std::abs(deg) * kPi / 180, deg < 0 ? kPi : 0.0); }

Direction random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Direction::from_vector(Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized());
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

TwoQubitState random_product_state(std::mt19937_64& rng) {
  const Eigen::Vector3d r = random_direction(rng).vector();
  const Eigen::Vector3d s = random_direction(rng).vector();
  return TwoQubitState::make(r, s, r * s.transpose(), "product");
}

}  // namespace

TEST(BellFunctional, Descriptors) {
  const auto b = BellFunctional::bell1964();
  EXPECT_EQ(b.n_settings_a, 2);
  EXPECT_EQ(b.n_settings_b, 2);
  EXPECT_EQ(b.n_directions(), 3);
  const auto c = BellFunctional::chsh();
  EXPECT_EQ(c.n_directions(), 4);
  EXPECT_DOUBLE_EQ(c.classical_bound, 2.0);
  EXPECT_DOUBLE_EQ(c.quantum_bound, 2 * std::sqrt(2.0));
}

TEST(Margin, StrictWithOptionalTolerance) {
  EXPECT_FALSE(Margin::from_value(0.0).violated);
  EXPECT_TRUE(Margin::from_value(1e-300).violated);
  EXPECT_FALSE(Margin::from_value(0.05, 0.1).violated);
}

TEST(Bell1Margin, CoplanarSixtyDegreeSteps) {
  const auto m = bell1_margin(singlet(), planar(0), planar(60), planar(120));
  EXPECT_NEAR(m.value, 0.5, 1e-15);
  EXPECT_TRUE(m.violated);
}

TEST(Bell1Margin, DegenerateAndOrthogonal) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_direction(rng), b = random_direction(rng);
    const auto m = bell1_margin(singlet(), a, b, b);
    EXPECT_NEAR(m.value, 0.0, 1e-15);
  }
  const auto x = Direction::from_components(1, 0, 0);
  const auto y = Direction::from_components(0, 1, 0);
  const auto z = Direction::from_components(0, 0, 1);
  const auto m = bell1_margin(singlet(), x, y, z);
  EXPECT_DOUBLE_EQ(m.value, -1.0);
  EXPECT_FALSE(m.violated);
}

TEST(Bell1Margin, ProductStateCanFormallyViolate) {
  // The Bell-1964 form presumes perfect anticorrelation; a product state
  // breaks the premise and registers a formal violation.
  const Eigen::Vector3d up(0, 0, 1);
  const auto product = TwoQubitState::make(up, up, up * up.transpose(), "up-up");
  const auto z = Direction::from_components(0, 0, 1);
  const auto minus_z = Direction::from_components(0, 0, -1);
  const auto m = bell1_margin(product, z, z, minus_z);
  EXPECT_DOUBLE_EQ(m.value, 2.0);
  EXPECT_TRUE(m.violated);
}

TEST(Bell1Margin, SwapOfBAndCIsExact) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_direction(rng), b = random_direction(rng), c = random_direction(rng);
    EXPECT_EQ(bell1_margin(singlet(), a, b, c).value, bell1_margin(singlet(), a, c, b).value);
  }
}

TEST(Bell1Margin, CommonRotationInvariance) {
  std::mt19937_64 rng(3);
  const auto st = singlet();
  for (int r = 0; r < 100; ++r) {
    const Eigen::Matrix3d rot = random_rotation(rng);
    for (int i = 0; i < 100; ++i) {
      const auto a = random_direction(rng), b = random_direction(rng), c = random_direction(rng);
      const auto m = bell1_margin(st, a, b, c);
      const auto mr = bell1_margin(st, Direction::from_vector(rot * a.vector()),
                                   Direction::from_vector(rot * b.vector()),
                                   Direction::from_vector(rot * c.vector()));
      ASSERT_NEAR(m.value, mr.value, 1e-12);
    }
  }
}

TEST(Bell1MarginAngles, Examples) {
  const auto m = bell1_margin_angles(kPi / 3, 2 * kPi / 3, 0.0);
  EXPECT_NEAR(m.value, 0.5, 1e-15);
  EXPECT_TRUE(m.violated);
  for (double t : {0.0, 0.4, 1.5, 3.0, kPi}) {
    EXPECT_NEAR(bell1_margin_angles(t, t, 0.0).value, 0.0, 1e-15);
  }
}

TEST(Bell1MarginAngles, NonPositiveCosPhiNeverViolates) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> theta(0, kPi), phi(kPi / 2, 3 * kPi / 2), sign(0, 1);
  for (int i = 0; i < 100000; ++i) {
    const double p = phi(rng) * (sign(rng) < 0.5 ? 1 : -1);
    EXPECT_FALSE(bell1_margin_angles(theta(rng), theta(rng), p).violated);
  }
}

TEST(Bell1MarginAngles, MatchesDirectionForm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> theta(0, kPi), phi(0, 2 * kPi);
  const Direction a;
  const auto st = singlet();
  for (int i = 0; i < 10000; ++i) {
    const AngleSettings s{theta(rng), theta(rng), phi(rng), phi(rng)};
    const auto [b, c] = s.to_directions();
    ASSERT_NEAR(bell1_margin_angles(s.theta_b, s.theta_c, s.phi()).value,
                bell1_margin(st, a, b, c).value, 1e-12);
  }
}

TEST(Chsh, OptimalAnglesReachTsirelson) {
  // Fixed placement (minus on E(a',b')): A at 0, 90 degrees; B at 45, -45.
  const double s = chsh_value(singlet(), planar(0), planar(90), planar(45), planar(-45));
  EXPECT_NEAR(std::abs(s), 2 * std::sqrt(2.0), 1e-12);
  const auto fixed = chsh_margin(singlet(), planar(0), planar(90), planar(45), planar(-45));
  const auto best = chsh_margin(singlet(), planar(0), planar(90), planar(45), planar(-45),
                                ChshMode::max_over_sign_position);
  EXPECT_NEAR(fixed.value, 2 * std::sqrt(2.0) - 2, 1e-12);
  EXPECT_NEAR(best.value, 2 * std::sqrt(2.0) - 2, 1e-12);
}

TEST(Chsh, BAtFortyFiveAndOneThirtyFiveNeedsAnotherSignPlacement) {
  // With B at 45 and 135 degrees the maximal combination puts the minus sign
  // on E(a,b'); the fixed functional cancels to zero there.
  const auto st = singlet();
  EXPECT_NEAR(chsh_value(st, planar(0), planar(90), planar(45), planar(135)), 0.0, 1e-12);
  const auto best = chsh_margin(st, planar(0), planar(90), planar(45), planar(135),
                                ChshMode::max_over_sign_position);
  EXPECT_NEAR(best.value, 2 * std::sqrt(2.0) - 2, 1e-12);
}

TEST(Chsh, TrivialConfigurations) {
  std::mt19937_64 rng(6);
  const auto st = singlet();
  for (int i = 0; i < 100; ++i) {
    const auto n = random_direction(rng), m = random_direction(rng);
    EXPECT_NEAR(chsh_value(st, n, n, n, n), -2.0, 1e-12);
    EXPECT_DOUBLE_EQ(chsh_value(werner(0.0), n, m, m, n), 0.0);
    const auto mg = chsh_margin(st, n, n, m, m);
    EXPECT_NEAR(mg.value, 2 * std::abs(correlation(st, n, m)) - 2, 1e-12);
    EXPECT_LE(mg.value, 1e-12);
  }
}

TEST(Chsh, ProductStatesNeverViolate) {
  // Oracle: brute force over random settings; a product state is an LHV model.
  std::mt19937_64 rng(7);
  for (int s = 0; s < 10; ++s) {
    const auto st = random_product_state(rng);
    double worst = -10;
    for (int i = 0; i < 10000; ++i) {
      const auto a = random_direction(rng), a2 = random_direction(rng);
      const auto b = random_direction(rng), b2 = random_direction(rng);
      worst = std::max(worst, chsh_margin(st, a, a2, b, b2, ChshMode::max_over_sign_position).value);
      EXPECT_LE(chsh_margin(st, a, a2, b, b2).value, 1e-12);
    }
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(Chsh, FixedModeNeverExceedsMaxMode) {
  std::mt19937_64 rng(8);
  std::vector<TwoQubitState> states = {singlet(), werner(0.8)};
  for (const auto& st : states) {
    for (int i = 0; i < 20000; ++i) {
      const auto a = random_direction(rng), a2 = random_direction(rng);
      const auto b = random_direction(rng), b2 = random_direction(rng);
      EXPECT_LE(chsh_margin(st, a, a2, b, b2).value,
                chsh_margin(st, a, a2, b, b2, ChshMode::max_over_sign_position).value);
    }
  }
}

TEST(Chsh, TsirelsonNeverExceeded) {
  std::mt19937_64 rng(9);
  double worst = 0;
  for (int i = 0; i < 100000; ++i) {
    worst = std::max(worst, std::abs(chsh_value(singlet(), random_direction(rng), random_direction(rng),
                                                random_direction(rng), random_direction(rng))));
  }
  EXPECT_LE(worst, 2 * std::sqrt(2.0) + 1e-9);
}
