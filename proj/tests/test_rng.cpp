#include <set>

#include <gtest/gtest.h>

#include "bellvol/rng.hpp"

using bellvol::PhiloxStream;

// Known-answer vectors published with the reference Random123 implementation.
TEST(Philox, KnownAnswers) {
  using Block = PhiloxStream::Block;
  EXPECT_EQ(PhiloxStream::philox({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(PhiloxStream::philox({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                 {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(PhiloxStream::philox({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                 {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreReproducible) {
  PhiloxStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.uniform(), b.uniform());
  EXPECT_EQ(a.blocks_used(), 500u);
}

TEST(Philox, SubstreamsAndSeedsDiffer) {
  std::set<double> firsts;
  for (std::uint64_t sub = 0; sub < 100; ++sub) firsts.insert(PhiloxStream(1, sub).uniform());
  for (std::uint64_t seed = 2; seed < 102; ++seed) firsts.insert(PhiloxStream(seed, 0).uniform());
  // High bits of the seed feed the second key word.
  firsts.insert(PhiloxStream(std::uint64_t{1} << 40, 0).uniform());
  EXPECT_EQ(firsts.size(), 201u);
}

TEST(Philox, UniformsInUnitInterval) {
  PhiloxStream s(0, 0);
  double sum = 0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // mean 1/2, sd of the mean sqrt(1/12/n)
  EXPECT_NEAR(sum / n, 0.5, 5 * 0.2887 / 1000);
}
