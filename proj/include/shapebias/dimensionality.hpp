#pragma once

#include <cstddef>

#include "shapebias/correlation.hpp"
#include "shapebias/records.hpp"

namespace shapebias {

// The residual factor's correlation is fixed at one.
inline constexpr double kResidualCorrelation = 1.0;

struct DimensionalityResult {
  double shape_dim_fraction = 0.0;
  double texture_dim_fraction = 0.0;
  double residual_dim_fraction = 0.0;
  double shape_dim_count = 0.0;
  double texture_dim_count = 0.0;
  double residual_dim_count = 0.0;
  std::size_t neuron_count = 0;
  double shape_dim_ratio = 0.0;

  // Filled by model_dimensionality; zero when computed from bare rho values.
  double rho_shape = 0.0;
  double rho_texture = 0.0;
  std::size_t valid_neurons_shape = 0;
  std::size_t valid_neurons_texture = 0;
};

// Softmax over (rho_shape, rho_texture, 1) scaled by the neuron count, and
// shape_dim / (shape_dim + texture_dim). Throws Error(Data) for non-finite or
// out-of-range rho and Error(Input) for neuron_count == 0.
DimensionalityResult estimate_dimensionality(double rho_shape, double rho_texture,
                                             std::size_t neuron_count);

// Factor correlation on each set, then the softmax allocation. The sets must
// be tagged shape and texture respectively and share N.
DimensionalityResult model_dimensionality(const ActivationPairSet& shape_pairs,
                                          const ActivationPairSet& texture_pairs,
                                          Backend backend = Backend::OpenMP);

}  // namespace shapebias
