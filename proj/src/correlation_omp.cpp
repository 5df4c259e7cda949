#include <array>
#include <cstdint>

#include "correlation_detail.hpp"
#include "shapebias/correlation.hpp"

namespace shapebias::kernels {

namespace {
constexpr std::size_t kBlock = 64;
}

// Neuron blocks are independent; within a block rows stream contiguously.
void neuron_correlations_omp(const ActivationPairSet& pairs, std::span<double> r,
                             std::span<unsigned char> valid) {
  const std::size_t rows = pairs.pair_count();
  const std::size_t neurons = pairs.neuron_count();
  const auto a = pairs.matrix_a();
  const auto b = pairs.matrix_b();
  const auto blocks = static_cast<std::int64_t>((neurons + kBlock - 1) / kBlock);

#pragma omp parallel for schedule(static)
  for (std::int64_t block = 0; block < blocks; ++block) {
    const std::size_t begin = static_cast<std::size_t>(block) * kBlock;
    const std::size_t width = std::min(kBlock, neurons - begin);
    std::array<detail::ShiftedSums, kBlock> sums{};
    const double* a0 = a.data() + begin;
    const double* b0 = b.data() + begin;
    for (std::size_t p = 0; p < rows; ++p) {
      const double* arow = a.data() + p * neurons + begin;
      const double* brow = b.data() + p * neurons + begin;
      for (std::size_t j = 0; j < width; ++j) sums[j].add(arow[j] - a0[j], brow[j] - b0[j]);
    }
    for (std::size_t j = 0; j < width; ++j) {
      detail::finish(sums[j], static_cast<double>(rows), r[begin + j], valid[begin + j]);
    }
  }
}

}  // namespace shapebias::kernels
