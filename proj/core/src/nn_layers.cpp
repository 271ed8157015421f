// SPDX-License-Identifier: Apache-2.0
#include "erc/nn/layers.hpp"

#include <cmath>

#include "erc/error.hpp"

namespace erc::nn {
namespace {

template <typename Scalar>
Mat<Scalar> uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(double(fan_in));
  Mat<Scalar> m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = static_cast<Scalar>(rng.uniform(-bound, bound));
  return m;
}

template <typename Scalar>
Mat<Scalar> dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
  const auto keep = static_cast<Scalar>(1.0 / (1.0 - rate));
  Mat<Scalar> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform() < rate ? Scalar(0) : keep;
  return m;
}

void check_shapes(bool ok, const char* what) {
  if (!ok) throw ShapeError(what);
}

template <typename Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  return (Scalar(1) + (-z.array()).exp()).inverse().matrix();
}

}  // namespace

// MLP ------------------------------------------------------------------------

template <typename Scalar>
MlpParams<Scalar> MlpParams<Scalar>::init(std::size_t d_in, std::size_t hidden, std::size_t classes,
                                          double dropout_rate, Rng& rng) {
  if (d_in == 0 || hidden == 0 || classes == 0) throw ShapeError("MLP dimensions must be positive");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) throw DomainError("dropout rate must be in [0, 1)");
  MlpParams p;
  p.w1 = uniform_matrix<Scalar>(Eigen::Index(hidden), Eigen::Index(d_in), d_in, rng);
  p.b1 = Vec<Scalar>::Zero(Eigen::Index(hidden));
  p.w2 = uniform_matrix<Scalar>(Eigen::Index(classes), Eigen::Index(hidden), hidden, rng);
  p.b2 = Vec<Scalar>::Zero(Eigen::Index(classes));
  p.dropout_rate = dropout_rate;
  return p;
}

template <typename Scalar>
MlpParams<Scalar> MlpParams<Scalar>::zeros_like() const {
  MlpParams p;
  p.w1 = Mat<Scalar>::Zero(w1.rows(), w1.cols());
  p.b1 = Vec<Scalar>::Zero(b1.size());
  p.w2 = Mat<Scalar>::Zero(w2.rows(), w2.cols());
  p.b2 = Vec<Scalar>::Zero(b2.size());
  p.dropout_rate = dropout_rate;
  return p;
}

template <typename Scalar>
std::vector<TensorRef<Scalar>> MlpParams<Scalar>::tensors() {
  return {tensor_ref<Scalar>("mlp.w1", w1), tensor_ref<Scalar>("mlp.b1", b1),
          tensor_ref<Scalar>("mlp.w2", w2), tensor_ref<Scalar>("mlp.b2", b2)};
}

template <typename Scalar>
std::vector<TensorRef<const Scalar>> MlpParams<Scalar>::tensors() const {
  return {tensor_ref<Scalar>("mlp.w1", w1), tensor_ref<Scalar>("mlp.b1", b1),
          tensor_ref<Scalar>("mlp.w2", w2), tensor_ref<Scalar>("mlp.b2", b2)};
}

template <typename Scalar>
MlpOutput<Scalar> mlp_forward(const MlpParams<Scalar>& params, const Mat<Scalar>& input, bool train,
                              Rng* rng) {
  check_shapes(input.rows() == params.w1.cols(), "MLP input width does not match W1");
  check_shapes(params.b1.size() == params.w1.rows() && params.w2.cols() == params.w1.rows() &&
                   params.b2.size() == params.w2.rows(),
               "inconsistent MLP parameter shapes");
  MlpOutput<Scalar> out;
  auto& c = out.cache;
  c.input = input;
  c.pre = (params.w1 * input).colwise() + params.b1;
  c.activation = c.pre.cwiseMax(Scalar(0));
  if (train && params.dropout_rate > 0.0) {
    if (!rng) throw DomainError("dropout in train mode needs an Rng");
    c.dropout = dropout_mask<Scalar>(c.activation.rows(), c.activation.cols(), params.dropout_rate, *rng);
    c.activation = c.activation.cwiseProduct(c.dropout);
  }
  out.logits = (params.w2 * c.activation).colwise() + params.b2;
  return out;
}

template <typename Scalar>
MlpParams<Scalar> mlp_backward(const MlpParams<Scalar>& params, const MlpCache<Scalar>& cache,
                               const Mat<Scalar>& dlogits, Mat<Scalar>* dinput) {
  check_shapes(dlogits.rows() == params.w2.rows() && dlogits.cols() == cache.input.cols(),
               "dlogits shape does not match the forward pass");
  MlpParams<Scalar> g;
  g.dropout_rate = params.dropout_rate;
  g.w2 = dlogits * cache.activation.transpose();
  g.b2 = dlogits.rowwise().sum();
  Mat<Scalar> dact = params.w2.transpose() * dlogits;
  if (cache.dropout.size() > 0) dact = dact.cwiseProduct(cache.dropout);
  const Mat<Scalar> dpre =
      dact.cwiseProduct((cache.pre.array() > Scalar(0)).template cast<Scalar>().matrix());
  g.w1 = dpre * cache.input.transpose();
  g.b1 = dpre.rowwise().sum();
  if (dinput) *dinput = params.w1.transpose() * dpre;
  return g;
}

// LSTM -----------------------------------------------------------------------

template <typename Scalar>
LstmParams<Scalar> LstmParams<Scalar>::init(std::size_t d_in, std::size_t hidden, std::size_t classes,
                                            double dropout_rate, Rng& rng) {
  if (d_in == 0 || hidden == 0 || classes == 0) throw ShapeError("LSTM dimensions must be positive");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) throw DomainError("dropout rate must be in [0, 1)");
  const auto h = Eigen::Index(hidden);
  LstmParams p;
  p.wx = uniform_matrix<Scalar>(4 * h, Eigen::Index(d_in), d_in, rng);
  p.wh = uniform_matrix<Scalar>(4 * h, h, hidden, rng);
  p.b = Vec<Scalar>::Zero(4 * h);
  p.b.segment(h, h).setOnes();
  p.wo = uniform_matrix<Scalar>(Eigen::Index(classes), h, hidden, rng);
  p.bo = Vec<Scalar>::Zero(Eigen::Index(classes));
  p.dropout_rate = dropout_rate;
  return p;
}

template <typename Scalar>
LstmParams<Scalar> LstmParams<Scalar>::zeros_like() const {
  LstmParams p;
  p.wx = Mat<Scalar>::Zero(wx.rows(), wx.cols());
  p.wh = Mat<Scalar>::Zero(wh.rows(), wh.cols());
  p.b = Vec<Scalar>::Zero(b.size());
  p.wo = Mat<Scalar>::Zero(wo.rows(), wo.cols());
  p.bo = Vec<Scalar>::Zero(bo.size());
  p.dropout_rate = dropout_rate;
  return p;
}

template <typename Scalar>
std::vector<TensorRef<Scalar>> LstmParams<Scalar>::tensors() {
  return {tensor_ref<Scalar>("lstm.wx", wx), tensor_ref<Scalar>("lstm.wh", wh),
          tensor_ref<Scalar>("lstm.b", b), tensor_ref<Scalar>("lstm.wo", wo),
          tensor_ref<Scalar>("lstm.bo", bo)};
}

template <typename Scalar>
std::vector<TensorRef<const Scalar>> LstmParams<Scalar>::tensors() const {
  return {tensor_ref<Scalar>("lstm.wx", wx), tensor_ref<Scalar>("lstm.wh", wh),
          tensor_ref<Scalar>("lstm.b", b), tensor_ref<Scalar>("lstm.wo", wo),
          tensor_ref<Scalar>("lstm.bo", bo)};
}

template <typename Scalar>
SequenceBatch<Scalar> SequenceBatch<Scalar>::pack(const std::vector<std::vector<Vec<Scalar>>>& sequences) {
  SequenceBatch batch;
  if (sequences.empty()) return batch;
  std::size_t max_len = 0;
  Eigen::Index width = -1;
  for (const auto& s : sequences) {
    if (s.empty()) throw EmptySequenceError("sequence of length 0 in batch");
    max_len = std::max(max_len, s.size());
    for (const auto& v : s) {
      if (width < 0) width = v.size();
      if (v.size() != width) throw ShapeError("sequence vectors differ in width");
    }
  }
  const auto B = Eigen::Index(sequences.size());
  batch.steps.assign(max_len, Mat<Scalar>::Zero(width, B));
  for (std::size_t b = 0; b < sequences.size(); ++b) {
    const auto& s = sequences[b];
    batch.lengths.push_back(s.size());
    const std::size_t offset = max_len - s.size();
    for (std::size_t t = 0; t < s.size(); ++t) batch.steps[offset + t].col(Eigen::Index(b)) = s[t];
  }
  return batch;
}

template <typename Scalar>
LstmOutput<Scalar> lstm_forward(const LstmParams<Scalar>& params, const SequenceBatch<Scalar>& batch,
                                bool train, Rng* rng) {
  if (batch.steps.empty() || batch.lengths.empty()) throw EmptySequenceError("LSTM input has no steps");
  for (auto len : batch.lengths)
    if (len == 0) throw EmptySequenceError("LSTM sequence of length 0");
  const Eigen::Index h = params.wh.cols();
  const auto B = Eigen::Index(batch.batch_size());
  check_shapes(params.wx.rows() == 4 * h && params.wh.rows() == 4 * h && params.b.size() == 4 * h &&
                   params.wo.cols() == h && params.bo.size() == params.wo.rows(),
               "inconsistent LSTM parameter shapes");
  const bool use_dropout = train && params.dropout_rate > 0.0;
  if (use_dropout && !rng) throw DomainError("dropout in train mode needs an Rng");

  LstmOutput<Scalar> out;
  auto& c = out.cache;
  const std::size_t T = batch.max_length();
  Mat<Scalar> h_prev = Mat<Scalar>::Zero(h, B);
  Mat<Scalar> c_prev = Mat<Scalar>::Zero(h, B);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& x_raw = batch.steps[t];
    check_shapes(x_raw.rows() == params.wx.cols() && x_raw.cols() == B, "LSTM input width mismatch");
    Eigen::Array<Scalar, 1, Eigen::Dynamic> mask(B);
    for (Eigen::Index b = 0; b < B; ++b) mask(b) = batch.live(t, std::size_t(b)) ? Scalar(1) : Scalar(0);

    Mat<Scalar> x = x_raw;
    if (use_dropout) {
      c.dropout.push_back(dropout_mask<Scalar>(x.rows(), x.cols(), params.dropout_rate, *rng));
      x = x.cwiseProduct(c.dropout.back());
    }
    Mat<Scalar> z = (params.wx * x + params.wh * h_prev).colwise() + params.b;
    Mat<Scalar> gates(4 * h, B);
    gates.topRows(2 * h) = sigmoid(z.topRows(2 * h));
    gates.middleRows(2 * h, h) = z.middleRows(2 * h, h).array().tanh().matrix();
    gates.bottomRows(h) = sigmoid(z.bottomRows(h));

    Mat<Scalar> cell = gates.middleRows(h, h).cwiseProduct(c_prev) +
                       gates.topRows(h).cwiseProduct(gates.middleRows(2 * h, h));
    Mat<Scalar> hidden = gates.bottomRows(h).cwiseProduct(cell.array().tanh().matrix());
    cell.array().rowwise() *= mask;
    hidden.array().rowwise() *= mask;

    c.input.push_back(std::move(x));
    c.gates.push_back(std::move(gates));
    c.cell.push_back(cell);
    c.hidden.push_back(hidden);
    c.mask.push_back(mask);
    h_prev = std::move(hidden);
    c_prev = std::move(cell);
  }
  out.logits = (params.wo * h_prev).colwise() + params.bo;
  return out;
}

template <typename Scalar>
LstmParams<Scalar> lstm_backward(const LstmParams<Scalar>& params, const LstmCache<Scalar>& cache,
                                 const Mat<Scalar>& dlogits, std::vector<Mat<Scalar>>* dinputs) {
  const std::size_t T = cache.hidden.size();
  if (T == 0) throw EmptySequenceError("LSTM cache is empty");
  const Eigen::Index h = params.wh.cols();
  const Eigen::Index B = cache.hidden.back().cols();
  check_shapes(dlogits.rows() == params.wo.rows() && dlogits.cols() == B,
               "dlogits shape does not match the forward pass");

  LstmParams<Scalar> g = params.zeros_like();
  g.wo = dlogits * cache.hidden.back().transpose();
  g.bo = dlogits.rowwise().sum();
  Mat<Scalar> dh = params.wo.transpose() * dlogits;
  Mat<Scalar> dc = Mat<Scalar>::Zero(h, B);
  if (dinputs) dinputs->assign(T, Mat<Scalar>());

  const Mat<Scalar> zeros = Mat<Scalar>::Zero(h, B);
  for (std::size_t step = T; step-- > 0;) {
    const auto& gates = cache.gates[step];
    const auto i = gates.topRows(h).array();
    const auto f = gates.middleRows(h, h).array();
    const auto gg = gates.middleRows(2 * h, h).array();
    const auto o = gates.bottomRows(h).array();
    const Mat<Scalar>& c_prev = step > 0 ? cache.cell[step - 1] : zeros;
    const Mat<Scalar>& h_prev = step > 0 ? cache.hidden[step - 1] : zeros;

    dh.array().rowwise() *= cache.mask[step];
    dc.array().rowwise() *= cache.mask[step];
    const auto tc = cache.cell[step].array().tanh();
    dc.array() += dh.array() * o * (Scalar(1) - tc.square());

    Mat<Scalar> dz(4 * h, B);
    dz.topRows(h).array() = dc.array() * gg * i * (Scalar(1) - i);
    dz.middleRows(h, h).array() = dc.array() * c_prev.array() * f * (Scalar(1) - f);
    dz.middleRows(2 * h, h).array() = dc.array() * i * (Scalar(1) - gg.square());
    dz.bottomRows(h).array() = dh.array() * tc * o * (Scalar(1) - o);

    g.wx.noalias() += dz * cache.input[step].transpose();
    g.wh.noalias() += dz * h_prev.transpose();
    g.b += dz.rowwise().sum();
    if (dinputs) {
      Mat<Scalar> dx = params.wx.transpose() * dz;
      if (!cache.dropout.empty()) dx = dx.cwiseProduct(cache.dropout[step]);
      (*dinputs)[step] = std::move(dx);
    }
    dh = params.wh.transpose() * dz;
    dc = (dc.array() * f).matrix();
  }
  return g;
}

#define ERC_INSTANTIATE_LAYERS(S)                                                                  \
  template struct MlpParams<S>;                                                                    \
  template struct LstmParams<S>;                                                                   \
  template struct SequenceBatch<S>;                                                                \
  template MlpOutput<S> mlp_forward<S>(const MlpParams<S>&, const Mat<S>&, bool, Rng*);            \
  template MlpParams<S> mlp_backward<S>(const MlpParams<S>&, const MlpCache<S>&, const Mat<S>&,    \
                                        Mat<S>*);                                                  \
  template LstmOutput<S> lstm_forward<S>(const LstmParams<S>&, const SequenceBatch<S>&, bool, Rng*); \
  template LstmParams<S> lstm_backward<S>(const LstmParams<S>&, const LstmCache<S>&, const Mat<S>&, \
                                          std::vector<Mat<S>>*);

ERC_INSTANTIATE_LAYERS(float)
ERC_INSTANTIATE_LAYERS(double)

#undef ERC_INSTANTIATE_LAYERS

}  // namespace erc::nn
