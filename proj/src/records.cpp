#include "shapebias/records.hpp"

#include <cmath>

#include "shapebias/error.hpp"

namespace shapebias {

std::string_view to_string(Factor factor) {
  return factor == Factor::Shape ? "shape" : "texture";
}

Factor parse_factor(std::string_view text) {
  if (text == "shape") return Factor::Shape;
  if (text == "texture") return Factor::Texture;
  throw Error(ErrorKind::Input, "unknown factor '" + std::string(text) + "' (expected shape|texture)");
}

ActivationPairSet::ActivationPairSet(Factor factor, std::size_t pair_count, std::size_t neuron_count,
                                     std::vector<double> matrix_a, std::vector<double> matrix_b)
    : factor_(factor), pairs_(pair_count), neurons_(neuron_count),
      a_(std::move(matrix_a)), b_(std::move(matrix_b)) {
  if (pairs_ == 0 || neurons_ == 0) {
    throw Error(ErrorKind::Dimension, "pair and neuron counts must be positive");
  }
  const std::size_t expected = pairs_ * neurons_;
  if (a_.size() != expected || b_.size() != expected) {
    throw Error(ErrorKind::Dimension, "activation matrices must both be " + std::to_string(pairs_) +
                                          "x" + std::to_string(neurons_));
  }
  for (std::size_t i = 0; i < expected; ++i) {
    if (!std::isfinite(a_[i]) || !std::isfinite(b_[i])) {
      throw Error(ErrorKind::Data, "non-finite activation at pair " + std::to_string(i / neurons_) +
                                       ", neuron " + std::to_string(i % neurons_));
    }
  }
}

namespace {

void check_fraction(const std::optional<double>& value, const char* name, const std::string& id) {
  if (value && !(std::isfinite(*value) && *value >= 0.0 && *value <= 1.0)) {
    throw Error(ErrorKind::Range, std::string(name) + " of model '" + id + "' outside [0,1]");
  }
}

}  // namespace

void validate(const ModelRecord& record) {
  if (!(std::isfinite(record.top1_accuracy) && record.top1_accuracy >= 0.0 &&
        record.top1_accuracy <= 1.0)) {
    throw Error(ErrorKind::Range, "top1_accuracy of model '" + record.model_id + "' outside [0,1]");
  }
  check_fraction(record.shape_bias, "shape_bias", record.model_id);
  check_fraction(record.shape_dim, "shape_dim", record.model_id);
  check_fraction(record.texture_dim, "texture_dim", record.model_id);
  check_fraction(record.residual_dim, "residual_dim", record.model_id);
  check_fraction(record.shape_dim_ratio, "shape_dim_ratio", record.model_id);
  if (record.shape_dim && record.texture_dim && record.residual_dim) {
    const double total = *record.shape_dim + *record.texture_dim + *record.residual_dim;
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorKind::Integrity,
                  "dimensionality fractions of model '" + record.model_id + "' do not sum to 1");
    }
  }
}

}  // namespace shapebias
