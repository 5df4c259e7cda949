#include <algorithm>
#include <cmath>

#include "correlation_detail.hpp"
#include "shapebias/correlation.hpp"

namespace shapebias::kernels {

void neuron_correlations_serial(const ActivationPairSet& pairs, std::span<double> r,
                                std::span<unsigned char> valid) {
  const std::size_t rows = pairs.pair_count();
  const std::size_t neurons = pairs.neuron_count();
  for (std::size_t i = 0; i < neurons; ++i) {
    detail::ShiftedSums s;
    const double kx = pairs.a(0, i);
    const double ky = pairs.b(0, i);
    for (std::size_t p = 0; p < rows; ++p) {
      s.add(pairs.a(p, i) - kx, pairs.b(p, i) - ky);
    }
    detail::finish(s, static_cast<double>(rows), r[i], valid[i]);
  }
}

}  // namespace shapebias::kernels
