#include "shapebias/correlation.hpp"

#include <string>

#include "shapebias/error.hpp"

namespace shapebias {

NeuronCorrelations neuron_correlations(const ActivationPairSet& pairs, Backend backend) {
  if (pairs.pair_count() < 2) {
    throw Error(ErrorKind::InsufficientPairs,
                "need at least 2 pairs, got " + std::to_string(pairs.pair_count()));
  }
  NeuronCorrelations out{std::vector<double>(pairs.neuron_count()),
                         std::vector<unsigned char>(pairs.neuron_count())};
  if (backend == Backend::Serial) {
    kernels::neuron_correlations_serial(pairs, out.r, out.valid);
  } else {
    kernels::neuron_correlations_omp(pairs, out.r, out.valid);
  }
  return out;
}

FactorCorrelation factor_correlation(const ActivationPairSet& pairs, Backend backend) {
  const auto neurons = neuron_correlations(pairs, backend);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < neurons.r.size(); ++i) {
    if (neurons.valid[i]) {
      sum += neurons.r[i];
      ++count;
    }
  }
  if (count == 0) {
    throw Error(ErrorKind::DegenerateActivations,
                "all " + std::to_string(neurons.r.size()) + " neurons have zero variance");
  }
  return {sum / static_cast<double>(count), count};
}

}  // namespace shapebias
