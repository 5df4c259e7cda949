#pragma once

// Neuron-wise Pearson correlation between paired activations.
//
// Both kernels make one streaming pass over the P rows, keeping 64-bit running
// sums of x, y, x^2, y^2 and xy per neuron. Sums are taken about the first
// row's value of each column, which keeps the pass numerically stable and
// makes a constant column produce an exactly zero variance. The OpenMP kernel
// splits neurons into blocks; every neuron's sums are accumulated in row order
// in both kernels, so their outputs are bit-identical.

#include <cstddef>
#include <span>
#include <vector>

#include "shapebias/records.hpp"

namespace shapebias {

struct NeuronCorrelations {
  std::vector<double> r;            // 0 where invalid
  std::vector<unsigned char> valid; // nonzero variance in both columns
};

namespace kernels {

void neuron_correlations_serial(const ActivationPairSet& pairs, std::span<double> r,
                                std::span<unsigned char> valid);
void neuron_correlations_omp(const ActivationPairSet& pairs, std::span<double> r,
                             std::span<unsigned char> valid);

}  // namespace kernels

enum class Backend { Serial, OpenMP };

NeuronCorrelations neuron_correlations(const ActivationPairSet& pairs,
                                       Backend backend = Backend::OpenMP);

struct FactorCorrelation {
  double rho = 0.0;
  std::size_t valid_neurons = 0;
};

// Mean correlation over neurons with nonzero variance in both matrices,
// summed in neuron-index order. Dead neurons are excluded, not counted as 0.
// Throws Error(InsufficientPairs) for P < 2 and Error(DegenerateActivations)
// when no neuron is valid.
FactorCorrelation factor_correlation(const ActivationPairSet& pairs,
                                     Backend backend = Backend::OpenMP);

}  // namespace shapebias
