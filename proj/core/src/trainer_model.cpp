// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "erc/error.hpp"
#include "erc/model.hpp"

namespace erc {
namespace {

using nn::Mat;

/// Encoder and affect columns for the turn at `step` of each sample, with
/// samples right-aligned on `steps` steps. Padding columns stay zero.
template <typename Scalar>
void gather_step(const FeatureTable<Scalar>& table, std::span<const WindowSample* const> batch,
                 std::size_t steps, std::size_t step, bool with_affect, Mat<Scalar>& enc,
                 Mat<Scalar>& aff) {
  const auto B = Eigen::Index(batch.size());
  enc = Mat<Scalar>::Zero(table.encoder.rows(), B);
  if (with_affect) aff = Mat<Scalar>::Zero(4, B);
  for (Eigen::Index b = 0; b < B; ++b) {
    const auto& turns = batch[std::size_t(b)]->turns;
    const std::size_t pad = steps - turns.size();
    if (step < pad) continue;
    const auto col = Eigen::Index(turns[step - pad]);
    if (col >= table.encoder.cols()) throw IndexError("feature column out of range");
    enc.col(b) = table.encoder.col(col);
    if (with_affect) aff.col(b) = table.affect.col(col);
  }
}

template <typename Scalar>
Mat<Scalar> fuse_batch(const ModelParams<Scalar>& params, const FusionSpec& fusion,
                       const Mat<Scalar>& enc, const Mat<Scalar>& aff) {
  switch (fusion.kind) {
    case FusionKind::none: return enc;
    case FusionKind::concat: {
      Mat<Scalar> out(enc.rows() + 4, enc.cols());
      out.topRows(enc.rows()) = enc;
      out.bottomRows(4) = aff;
      return out;
    }
    case FusionKind::blend: {
      const auto a = static_cast<Scalar>(fusion.alpha.value_or(0.0));
      return (Scalar(1) - a) * enc + a * (params.projection * aff);
    }
  }
  return enc;
}

bool needs_affect(const FusionSpec& fusion) { return fusion.kind != FusionKind::none; }

std::size_t max_turns(std::span<const WindowSample* const> batch) {
  std::size_t n = 0;
  for (const auto* s : batch) {
    if (s->turns.empty()) throw EmptySequenceError("window without turns");
    n = std::max(n, s->turns.size());
  }
  return n;
}

}  // namespace

template <typename Scalar>
ModelParams<Scalar> ModelParams<Scalar>::init(ClassifierKind kind, std::size_t encoder_dim,
                                              const FusionSpec& fusion, std::size_t hidden,
                                              std::size_t classes, double dropout, nn::Rng& rng) {
  ModelParams p;
  p.kind = kind;
  const std::size_t d_in = fusion.output_dim(encoder_dim);
  if (kind == ClassifierKind::mlp)
    p.mlp = nn::MlpParams<Scalar>::init(d_in, hidden, classes, dropout, rng);
  else
    p.lstm = nn::LstmParams<Scalar>::init(d_in, hidden, classes, dropout, rng);
  if (fusion.kind == FusionKind::blend) {
    p.projection.resize(Eigen::Index(encoder_dim), 4);
    for (Eigen::Index j = 0; j < 4; ++j)
      for (Eigen::Index i = 0; i < p.projection.rows(); ++i)
        p.projection(i, j) = static_cast<Scalar>(rng.uniform(-0.5, 0.5));
  }
  return p;
}

template <typename Scalar>
ModelParams<Scalar> ModelParams<Scalar>::zeros_like() const {
  ModelParams p;
  p.kind = kind;
  if (kind == ClassifierKind::mlp) p.mlp = mlp.zeros_like();
  else p.lstm = lstm.zeros_like();
  p.projection = Mat<Scalar>::Zero(projection.rows(), projection.cols());
  return p;
}

template <typename Scalar>
std::vector<nn::TensorRef<Scalar>> ModelParams<Scalar>::tensors() {
  auto out = kind == ClassifierKind::mlp ? mlp.tensors() : lstm.tensors();
  if (projection.size() > 0) out.push_back(nn::tensor_ref<Scalar>("projection", projection));
  return out;
}

template <typename Scalar>
std::vector<nn::TensorRef<const Scalar>> ModelParams<Scalar>::tensors() const {
  auto out = kind == ClassifierKind::mlp ? mlp.tensors() : lstm.tensors();
  if (projection.size() > 0) out.push_back(nn::tensor_ref<Scalar>("projection", projection));
  return out;
}

template <typename Scalar>
ModelForward<Scalar> model_forward(const ModelParams<Scalar>& params, const FeatureTable<Scalar>& table,
                                   std::span<const WindowSample* const> batch,
                                   const FusionSpec& fusion, bool train, nn::Rng* rng) {
  if (batch.empty()) throw EmptySequenceError("empty batch");
  if (fusion.kind == FusionKind::blend &&
      (params.projection.rows() != table.encoder.rows() || params.projection.cols() != 4))
    throw ShapeError("blend projection does not match the encoder width");
  const bool with_affect = needs_affect(fusion);
  if (with_affect && table.affect.cols() != table.encoder.cols())
    throw ShapeError("fusion needs an affect column per utterance");

  ModelForward<Scalar> out;
  out.samples.assign(batch.begin(), batch.end());
  Mat<Scalar> enc, aff;
  if (params.kind == ClassifierKind::mlp) {
    // The MLP sees the target utterance only.
    std::vector<WindowSample> targets;
    std::vector<const WindowSample*> ptrs;
    targets.reserve(batch.size());
    for (const auto* s : batch) {
      if (s->turns.empty()) throw EmptySequenceError("window without turns");
      targets.push_back({{s->turns.back()}, s->label});
    }
    for (const auto& t : targets) ptrs.push_back(&t);
    gather_step(table, std::span<const WindowSample* const>(ptrs), 1, 0, with_affect, enc, aff);
    auto res = nn::mlp_forward(params.mlp, fuse_batch(params, fusion, enc, aff), train, rng);
    out.logits = std::move(res.logits);
    out.mlp_cache = std::move(res.cache);
    return out;
  }
  const std::size_t T = max_turns(batch);
  nn::SequenceBatch<Scalar> seq;
  seq.lengths.reserve(batch.size());
  for (const auto* s : batch) seq.lengths.push_back(s->turns.size());
  seq.steps.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    gather_step(table, batch, T, t, with_affect, enc, aff);
    Mat<Scalar> x = fuse_batch(params, fusion, enc, aff);
    // Padding columns must stay exactly zero after fusion.
    for (std::size_t b = 0; b < batch.size(); ++b)
      if (!seq.live(t, b)) x.col(Eigen::Index(b)).setZero();
    seq.steps.push_back(std::move(x));
  }
  auto res = nn::lstm_forward(params.lstm, seq, train, rng);
  out.logits = std::move(res.logits);
  out.lstm_cache = std::move(res.cache);
  return out;
}

template <typename Scalar>
ModelParams<Scalar> model_backward(const ModelParams<Scalar>& params, const FeatureTable<Scalar>& table,
                                   const ModelForward<Scalar>& forward, const FusionSpec& fusion,
                                   const Mat<Scalar>& dlogits) {
  ModelParams<Scalar> grads;
  grads.kind = params.kind;
  grads.projection = Mat<Scalar>::Zero(params.projection.rows(), params.projection.cols());
  const bool blend = fusion.kind == FusionKind::blend;
  const auto alpha = static_cast<Scalar>(fusion.alpha.value_or(0.0));
  std::span<const WindowSample* const> batch(forward.samples);
  Mat<Scalar> enc, aff;

  if (params.kind == ClassifierKind::mlp) {
    Mat<Scalar> dinput;
    grads.mlp = nn::mlp_backward(params.mlp, forward.mlp_cache, dlogits, blend ? &dinput : nullptr);
    if (blend) {
      std::vector<WindowSample> targets;
      std::vector<const WindowSample*> ptrs;
      for (const auto* s : batch) targets.push_back({{s->turns.back()}, s->label});
      for (const auto& t : targets) ptrs.push_back(&t);
      gather_step(table, std::span<const WindowSample* const>(ptrs), 1, 0, true, enc, aff);
      grads.projection = alpha * dinput * aff.transpose();
    }
    return grads;
  }
  std::vector<Mat<Scalar>> dinputs;
  grads.lstm = nn::lstm_backward(params.lstm, forward.lstm_cache, dlogits, blend ? &dinputs : nullptr);
  if (blend) {
    const std::size_t T = forward.lstm_cache.input.size();
    for (std::size_t t = 0; t < T; ++t) {
      gather_step(table, batch, T, t, true, enc, aff);
      grads.projection.noalias() += alpha * dinputs[t] * aff.transpose();
    }
  }
  return grads;
}

#define ERC_INSTANTIATE_MODEL(S)                                                                   \
  template struct ModelParams<S>;                                                                  \
  template ModelForward<S> model_forward<S>(const ModelParams<S>&, const FeatureTable<S>&,         \
                                            std::span<const WindowSample* const>,                  \
                                            const FusionSpec&, bool, nn::Rng*);                    \
  template ModelParams<S> model_backward<S>(const ModelParams<S>&, const FeatureTable<S>&,         \
                                            const ModelForward<S>&, const FusionSpec&,             \
                                            const Mat<S>&);

ERC_INSTANTIATE_MODEL(float)
ERC_INSTANTIATE_MODEL(double)

#undef ERC_INSTANTIATE_MODEL

}  // namespace erc
