#include "shapebias/dimensionality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shapebias/error.hpp"

namespace shapebias {

DimensionalityResult estimate_dimensionality(double rho_shape, double rho_texture,
                                             std::size_t neuron_count) {
  for (double rho : {rho_shape, rho_texture}) {
    if (!std::isfinite(rho) || rho < -1.0 || rho > 1.0) {
      throw Error(ErrorKind::Data, "factor correlation " + std::to_string(rho) + " outside [-1,1]");
    }
  }
  if (neuron_count == 0) throw Error(ErrorKind::Input, "neuron count must be positive");

  const double top = std::max({rho_shape, rho_texture, kResidualCorrelation});
  const double es = std::exp(rho_shape - top);
  const double et = std::exp(rho_texture - top);
  const double er = std::exp(kResidualCorrelation - top);
  const double z = es + et + er;

  DimensionalityResult out;
  out.shape_dim_fraction = es / z;
  out.texture_dim_fraction = et / z;
  out.residual_dim_fraction = er / z;
  const auto n = static_cast<double>(neuron_count);
  out.shape_dim_count = out.shape_dim_fraction * n;
  out.texture_dim_count = out.texture_dim_fraction * n;
  out.residual_dim_count = out.residual_dim_fraction * n;
  out.neuron_count = neuron_count;
  out.shape_dim_ratio = es / (es + et);
  out.rho_shape = rho_shape;
  out.rho_texture = rho_texture;
  return out;
}

DimensionalityResult model_dimensionality(const ActivationPairSet& shape_pairs,
                                          const ActivationPairSet& texture_pairs,
                                          Backend backend) {
  if (shape_pairs.factor() != Factor::Shape || texture_pairs.factor() != Factor::Texture) {
    throw Error(ErrorKind::Input, "expected a shape-tagged and a texture-tagged pair set, got " +
                                      std::string(to_string(shape_pairs.factor())) + " and " +
                                      std::string(to_string(texture_pairs.factor())));
  }
  if (shape_pairs.neuron_count() != texture_pairs.neuron_count()) {
    throw Error(ErrorKind::Dimension,
                "neuron counts differ: " + std::to_string(shape_pairs.neuron_count()) + " vs " +
                    std::to_string(texture_pairs.neuron_count()));
  }
  const auto shape = factor_correlation(shape_pairs, backend);
  const auto texture = factor_correlation(texture_pairs, backend);
  auto out = estimate_dimensionality(shape.rho, texture.rho, shape_pairs.neuron_count());
  out.valid_neurons_shape = shape.valid_neurons;
  out.valid_neurons_texture = texture.valid_neurons;
  return out;
}

}  // namespace shapebias
