// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "erc/lexicon.hpp"
#include "erc/nn/layers.hpp"

namespace erc {

enum class ClassifierKind { mlp, lstm };

/// Utterance features, one column per utterance: encoder vectors (d rows)
/// and lexicon affect vectors (4 rows, possibly empty when unused).
template <typename Scalar>
struct FeatureTable {
  nn::Mat<Scalar> encoder;
  nn::Mat<Scalar> affect;
};

/// Feature-table columns of a context window, oldest first, target last.
struct WindowSample {
  std::vector<std::uint32_t> turns;
  std::size_t label = 0;
};

/// MLP (K = 0) or LSTM (K > 0) classifier plus the optional 4 -> d lexicon
/// projection used by blend fusion.
template <typename Scalar>
struct ModelParams {
  ClassifierKind kind = ClassifierKind::mlp;
  nn::MlpParams<Scalar> mlp;
  nn::LstmParams<Scalar> lstm;
  nn::Mat<Scalar> projection;  // d x 4, empty unless blend

  static ModelParams init(ClassifierKind kind, std::size_t encoder_dim, const FusionSpec& fusion,
                          std::size_t hidden, std::size_t classes, double dropout, nn::Rng& rng);
  ModelParams zeros_like() const;

  std::vector<nn::TensorRef<Scalar>> tensors();
  std::vector<nn::TensorRef<const Scalar>> tensors() const;
};

template <typename Scalar>
struct ModelForward {
  nn::Mat<Scalar> logits;
  nn::MlpCache<Scalar> mlp_cache;
  nn::LstmCache<Scalar> lstm_cache;
  std::vector<const WindowSample*> samples;
};

template <typename Scalar>
ModelForward<Scalar> model_forward(const ModelParams<Scalar>& params, const FeatureTable<Scalar>& table,
                                   std::span<const WindowSample* const> batch,
                                   const FusionSpec& fusion, bool train, nn::Rng* rng);

template <typename Scalar>
ModelParams<Scalar> model_backward(const ModelParams<Scalar>& params,
                                   const FeatureTable<Scalar>& table,
                                   const ModelForward<Scalar>& forward, const FusionSpec& fusion,
                                   const nn::Mat<Scalar>& dlogits);

}  // namespace erc
