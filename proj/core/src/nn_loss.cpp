// SPDX-License-Identifier: Apache-2.0
#include "erc/nn/loss.hpp"

#include <cmath>

#include "erc/error.hpp"

namespace erc::nn {

template <typename Scalar>
Vec<Scalar> softmax(const Vec<Scalar>& logits) {
  if (logits.size() == 0) throw ShapeError("softmax of an empty vector");
  const Scalar shift = logits.maxCoeff();
  Vec<Scalar> e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

template <typename Scalar>
double cross_entropy(const Vec<Scalar>& logits, std::size_t label) {
  if (label >= std::size_t(logits.size()))
    throw IndexError("label " + std::to_string(label) + " out of range for " +
                     std::to_string(logits.size()) + " classes");
  const double shift = double(logits.maxCoeff());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) sum += std::exp(double(logits(i)) - shift);
  return std::log(sum) - (double(logits(Eigen::Index(label))) - shift);
}

template <typename Scalar>
LossAndGrad<Scalar> softmax_cross_entropy(const Mat<Scalar>& logits, std::span<const std::size_t> labels,
                                          double scale) {
  if (std::size_t(logits.cols()) != labels.size())
    throw ShapeError("label count does not match logits batch");
  LossAndGrad<Scalar> out;
  out.dlogits.resize(logits.rows(), logits.cols());
  for (Eigen::Index b = 0; b < logits.cols(); ++b) {
    const Vec<Scalar> col = logits.col(b);
    out.loss += cross_entropy<Scalar>(col, labels[std::size_t(b)]);
    Vec<Scalar> p = softmax<Scalar>(col);
    p(Eigen::Index(labels[std::size_t(b)])) -= Scalar(1);
    out.dlogits.col(b) = p * static_cast<Scalar>(scale);
  }
  return out;
}

template <typename Scalar>
std::vector<std::size_t> argmax_columns(const Mat<Scalar>& logits) {
  std::vector<std::size_t> out(std::size_t(logits.cols()));
  for (Eigen::Index b = 0; b < logits.cols(); ++b) {
    Eigen::Index best = 0;
    logits.col(b).maxCoeff(&best);
    out[std::size_t(b)] = std::size_t(best);
  }
  return out;
}

#define ERC_INSTANTIATE_LOSS(S)                                                                  \
  template Vec<S> softmax<S>(const Vec<S>&);                                                     \
  template double cross_entropy<S>(const Vec<S>&, std::size_t);                                  \
  template LossAndGrad<S> softmax_cross_entropy<S>(const Mat<S>&, std::span<const std::size_t>, \
                                                   double);                                      \
  template std::vector<std::size_t> argmax_columns<S>(const Mat<S>&);

ERC_INSTANTIATE_LOSS(float)
ERC_INSTANTIATE_LOSS(double)

#undef ERC_INSTANTIATE_LOSS

}  // namespace erc::nn
