// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "erc/nn/rng.hpp"
#include "erc/nn/tensor.hpp"

namespace erc::nn {

// Inputs and logits are column-major batches: one column per sample.

template <typename Scalar>
struct MlpParams {
  Mat<Scalar> w1;  // hidden x d_in
  Vec<Scalar> b1;
  Mat<Scalar> w2;  // classes x hidden
  Vec<Scalar> b2;
  double dropout_rate = 0.0;

  /// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
  static MlpParams init(std::size_t d_in, std::size_t hidden, std::size_t classes,
                        double dropout_rate, Rng& rng);
  /// Same shapes, all zero (gradient accumulator).
  MlpParams zeros_like() const;

  std::size_t input_dim() const { return std::size_t(w1.cols()); }
  std::size_t hidden_dim() const { return std::size_t(w1.rows()); }
  std::size_t class_count() const { return std::size_t(w2.rows()); }

  std::vector<TensorRef<Scalar>> tensors();
  std::vector<TensorRef<const Scalar>> tensors() const;
};

template <typename Scalar>
struct MlpCache {
  Mat<Scalar> input;       // d_in x B
  Mat<Scalar> pre;         // hidden pre-activation
  Mat<Scalar> dropout;     // inverted-dropout multipliers; empty in eval mode
  Mat<Scalar> activation;  // relu(pre) after dropout
};

template <typename Scalar>
struct MlpOutput {
  Mat<Scalar> logits;
  MlpCache<Scalar> cache;
};

/// logits = W2 drop(relu(W1 x + b1)) + b2. Dropout only when `train` is set
/// and the rate is positive; it then needs `rng`.
template <typename Scalar>
MlpOutput<Scalar> mlp_forward(const MlpParams<Scalar>& params, const Mat<Scalar>& input,
                              bool train, Rng* rng);

/// Gradients of sum_b L_b given dL/dlogits. Writes dL/dinput when asked.
template <typename Scalar>
MlpParams<Scalar> mlp_backward(const MlpParams<Scalar>& params, const MlpCache<Scalar>& cache,
                               const Mat<Scalar>& dlogits, Mat<Scalar>* dinput = nullptr);

/// Gate blocks are stacked in the order input, forget, cell, output.
template <typename Scalar>
struct LstmParams {
  Mat<Scalar> wx;  // 4h x d_in
  Mat<Scalar> wh;  // 4h x h
  Vec<Scalar> b;   // 4h
  Mat<Scalar> wo;  // classes x h
  Vec<Scalar> bo;
  double dropout_rate = 0.0;

  /// Uniform fan-in init; biases zero except the forget block, which is 1.
  static LstmParams init(std::size_t d_in, std::size_t hidden, std::size_t classes,
                         double dropout_rate, Rng& rng);
  LstmParams zeros_like() const;

  std::size_t input_dim() const { return std::size_t(wx.cols()); }
  std::size_t hidden_dim() const { return std::size_t(wh.cols()); }
  std::size_t class_count() const { return std::size_t(wo.rows()); }

  std::vector<TensorRef<Scalar>> tensors();
  std::vector<TensorRef<const Scalar>> tensors() const;
};

/// Variable-length sequences aligned at their last step: column b is live at
/// steps t >= steps.size() - lengths[b]. Earlier steps are padding and hold
/// the state at zero, so every sample sees exactly its own sequence.
template <typename Scalar>
struct SequenceBatch {
  std::vector<Mat<Scalar>> steps;  // T entries of d_in x B
  std::vector<std::size_t> lengths;

  std::size_t batch_size() const { return lengths.size(); }
  std::size_t max_length() const { return steps.size(); }
  bool live(std::size_t t, std::size_t b) const { return t + lengths[b] >= steps.size(); }

  /// Packs sequences (each a list of d_in vectors, oldest first).
  static SequenceBatch pack(const std::vector<std::vector<Vec<Scalar>>>& sequences);
};

template <typename Scalar>
struct LstmCache {
  std::vector<Mat<Scalar>> input;    // post-dropout inputs per step
  std::vector<Mat<Scalar>> dropout;  // input dropout multipliers (train only)
  std::vector<Mat<Scalar>> gates;    // activated gates, 4h x B
  std::vector<Mat<Scalar>> cell;     // c_t after masking
  std::vector<Mat<Scalar>> hidden;   // h_t after masking
  std::vector<Eigen::Array<Scalar, 1, Eigen::Dynamic>> mask;  // 1 live, 0 pad
};

template <typename Scalar>
struct LstmOutput {
  Mat<Scalar> logits;
  LstmCache<Scalar> cache;
};

/// Unidirectional single-layer LSTM; logits from the final hidden state.
/// Throws EmptySequenceError for an empty batch or a zero-length sequence.
template <typename Scalar>
LstmOutput<Scalar> lstm_forward(const LstmParams<Scalar>& params, const SequenceBatch<Scalar>& batch,
                                bool train, Rng* rng);

/// Backpropagation through time. `dinputs`, when given, receives dL/dx per
/// step (zero at padding).
template <typename Scalar>
LstmParams<Scalar> lstm_backward(const LstmParams<Scalar>& params, const LstmCache<Scalar>& cache,
                                 const Mat<Scalar>& dlogits,
                                 std::vector<Mat<Scalar>>* dinputs = nullptr);

}  // namespace erc::nn
