#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shapebias/correlation.hpp"
#include "shapebias/error.hpp"

namespace shapebias {
namespace {

ActivationPairSet columns_to_set(const std::vector<std::vector<double>>& a_cols,
                                 const std::vector<std::vector<double>>& b_cols,
                                 Factor factor = Factor::Shape) {
  const std::size_t n = a_cols.size(), p = a_cols[0].size();
  std::vector<double> a(p * n), b(p * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < p; ++r) {
      a[r * n + i] = a_cols[i][r];
      b[r * n + i] = b_cols[i][r];
    }
  }
  return ActivationPairSet(factor, p, n, std::move(a), std::move(b));
}

TEST(FactorCorrelation, SelfCorrelationIsOne) {
  std::mt19937_64 rng(1);
  const auto base = testing::random_pairs(rng, Factor::Shape, 30, 12);
  const std::vector<double> a(base.matrix_a().begin(), base.matrix_a().end());
  const ActivationPairSet same(Factor::Shape, 30, 12, a, a);
  const auto result = factor_correlation(same);
  EXPECT_NEAR(result.rho, 1.0, 1e-14);
  EXPECT_EQ(result.valid_neurons, 12u);
}

TEST(FactorCorrelation, PlusAndMinusOneAverageToZero) {
  const auto set = columns_to_set({{1, 2, 3}, {1, 2, 3}}, {{1, 2, 3}, {3, 2, 1}});
  const auto neurons = neuron_correlations(set);
  EXPECT_DOUBLE_EQ(neurons.r[0], 1.0);
  EXPECT_DOUBLE_EQ(neurons.r[1], -1.0);
  EXPECT_DOUBLE_EQ(factor_correlation(set).rho, 0.0);
}

TEST(FactorCorrelation, MatchesTwoPassOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto set = testing::random_pairs(rng, Factor::Texture, 50, 20);
    const auto oracle = testing::factor_correlation_two_pass(set);
    const auto result = factor_correlation(set);
    EXPECT_NEAR(result.rho, oracle.rho, 1e-10);
    EXPECT_EQ(result.valid_neurons, oracle.valid);
  }
}

TEST(FactorCorrelation, StableUnderLargeOffsets) {
  std::mt19937_64 rng(12);
  auto set = testing::random_pairs(rng, Factor::Shape, 200, 8);
  std::vector<double> a(set.matrix_a().begin(), set.matrix_a().end());
  std::vector<double> b(set.matrix_b().begin(), set.matrix_b().end());
  for (auto& v : a) v += 1e4;
  for (auto& v : b) v = v * 1e-3 + 50.0;
  const ActivationPairSet shifted(Factor::Shape, 200, 8, a, b);
  EXPECT_NEAR(factor_correlation(shifted).rho, testing::factor_correlation_two_pass(shifted).rho,
              1e-10);
}

TEST(FactorCorrelation, SerialAndOpenMPAgreeBitForBit) {
  std::mt19937_64 rng(8);
  for (std::size_t neurons : {1u, 63u, 64u, 65u, 300u}) {
    const auto set = testing::random_pairs(rng, Factor::Shape, 17, neurons);
    const auto serial = neuron_correlations(set, Backend::Serial);
    const auto parallel = neuron_correlations(set, Backend::OpenMP);
    EXPECT_EQ(serial.r, parallel.r);
    EXPECT_EQ(serial.valid, parallel.valid);
  }
}

TEST(FactorCorrelation, DeadNeuronsAreExcludedNotZeroed) {
  // neuron 0 correlates perfectly, neuron 1 is constant in matrix_b
  const auto set = columns_to_set({{1, 2, 3, 4}, {5, 1, 2, 9}}, {{2, 4, 6, 8}, {0.1, 0.1, 0.1, 0.1}});
  const auto result = factor_correlation(set);
  EXPECT_DOUBLE_EQ(result.rho, 1.0);
  EXPECT_EQ(result.valid_neurons, 1u);
}

TEST(FactorCorrelation, AllDeadIsDegenerate) {
  const auto set = columns_to_set({{1, 1, 1}}, {{1, 2, 3}});
  try {
    factor_correlation(set);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateActivations);
  }
}

TEST(FactorCorrelation, SinglePairIsInsufficient) {
  const ActivationPairSet set(Factor::Shape, 1, 2, {1, 2}, {3, 4});
  try {
    factor_correlation(set);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientPairs);
  }
}

TEST(FactorCorrelation, InvariantUnderRowPermutation) {
  std::mt19937_64 rng(5);
  const auto set = testing::random_pairs(rng, Factor::Shape, 40, 10);
  std::vector<std::size_t> order(40);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> a, b;
  for (std::size_t r : order) {
    for (std::size_t i = 0; i < 10; ++i) {
      a.push_back(set.a(r, i));
      b.push_back(set.b(r, i));
    }
  }
  const ActivationPairSet permuted(Factor::Shape, 40, 10, a, b);
  EXPECT_NEAR(factor_correlation(permuted).rho, factor_correlation(set).rho, 1e-12);
}

TEST(FactorCorrelation, InvariantUnderPositiveAffineMaps) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-5.0, 5.0);
  const auto set = testing::random_pairs(rng, Factor::Shape, 40, 10);
  std::vector<double> a(set.matrix_a().begin(), set.matrix_a().end());
  std::vector<double> b(set.matrix_b().begin(), set.matrix_b().end());
  for (std::size_t i = 0; i < 10; ++i) {
    const double sa = scale(rng), ta = shift(rng), sb = scale(rng), tb = shift(rng);
    for (std::size_t r = 0; r < 40; ++r) {
      a[r * 10 + i] = sa * a[r * 10 + i] + ta;
      b[r * 10 + i] = sb * b[r * 10 + i] + tb;
    }
  }
  const ActivationPairSet mapped(Factor::Shape, 40, 10, a, b);
  EXPECT_NEAR(factor_correlation(mapped).rho, factor_correlation(set).rho, 1e-12);
}

}  // namespace
}  // namespace shapebias
