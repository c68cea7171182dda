#include "mmf/wnn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mmf/log.hpp"

namespace mmf::wnn {

namespace {

void validate_layer(const WnnLayer& layer, int n) {
  if (layer.in_channels < 1 || layer.out_channels < 1)
    throw std::invalid_argument("WnnLayer: channel counts must be >= 1");
  if (static_cast<int>(layer.filters.size()) != layer.in_channels)
    throw std::invalid_argument("WnnLayer: filter grid must be in x out");
  for (const auto& row : layer.filters) {
    if (static_cast<int>(row.size()) != layer.out_channels)
      throw std::invalid_argument("WnnLayer: filter grid must be in x out");
    for (const Vector& g : row) {
      if (g.size() != n)
        throw std::invalid_argument("WnnLayer: filters must hold n values");
      if (!g.allFinite())
        throw std::invalid_argument("WnnLayer: filters must be finite");
    }
  }
}

void validate_labels(const LabeledNodes& labels, int n) {
  if (labels.num_classes < 1)
    throw std::invalid_argument("LabeledNodes: num_classes must be >= 1");
  for (const auto& [v, c] : labels.entries) {
    if (v < 0 || v >= n)
      throw std::invalid_argument("LabeledNodes: vertex out of range");
    if (c < 0 || c >= labels.num_classes)
      throw std::invalid_argument("LabeledNodes: class out of range");
  }
}

Matrix softmax_rows(const Matrix& z) {
  Matrix p(z.rows(), z.cols());
  for (int v = 0; v < z.rows(); ++v) {
    const double m = z.row(v).maxCoeff();
    double sum = 0.0;
    for (int c = 0; c < z.cols(); ++c) {
      p(v, c) = std::exp(z(v, c) - m);
      sum += p(v, c);
    }
    p.row(v) /= sum;
  }
  return p;
}

// Pre-activation map of a layer: Z[:, j] = W^T sum_i g_ij o (W f_in[:, i]).
Matrix layer_preactivation(const WnnLayer& layer, const WaveletBasis& w,
                           const Matrix& f_in) {
  const int n = w.n;
  const Matrix coeffs = w.matrix * f_in;  // hat(x)_i per column
  Matrix filtered = Matrix::Zero(n, layer.out_channels);
  for (int j = 0; j < layer.out_channels; ++j)
    for (int i = 0; i < layer.in_channels; ++i)
      filtered.col(j) +=
          layer.filters[i][j].cwiseProduct(coeffs.col(i));
  return w.matrix.transpose() * filtered;
}

Matrix apply_activation(const WnnLayer& layer, const Matrix& z) {
  switch (layer.activation) {
    case Activation::identity:
      return z;
    case Activation::relu:
      return z.cwiseMax(0.0);
    case Activation::softmax:
      return softmax_rows(z);
  }
  throw std::logic_error("unknown activation");
}

}  // namespace

WnnLayer WnnLayer::ones(int n, int in_channels, int out_channels,
                        Activation activation) {
  WnnLayer layer;
  layer.in_channels = in_channels;
  layer.out_channels = out_channels;
  layer.activation = activation;
  layer.filters.assign(in_channels,
                       std::vector<Vector>(out_channels, Vector::Ones(n)));
  return layer;
}

Matrix layer_forward(const WnnLayer& layer, const WaveletBasis& w,
                     const Matrix& f_in) {
  validate_layer(layer, w.n);
  if (f_in.rows() != w.n || f_in.cols() != layer.in_channels)
    throw std::invalid_argument("layer_forward: input must be n x in_channels");
  return apply_activation(layer, layer_preactivation(layer, w, f_in));
}

Matrix network_forward(const WnnNetwork& net, const WaveletBasis& w,
                       const Matrix& f0) {
  Matrix f = f0;
  for (const WnnLayer& layer : net.layers) f = layer_forward(layer, w, f);
  return f;
}

double loss(const Matrix& f_out, const LabeledNodes& labels) {
  validate_labels(labels, static_cast<int>(f_out.rows()));
  if (labels.num_classes != f_out.cols())
    throw std::invalid_argument("loss: class count mismatch");
  for (const auto& [v, c] : labels.entries) {
    const double row_sum = f_out.row(v).sum();
    if (std::abs(row_sum - 1.0) > 1e-9)
      throw std::invalid_argument(
          "loss: rows must sum to 1 on labeled vertices (got " +
          std::to_string(row_sum) + ")");
  }
  double total = 0.0;
  bool clamped = false;
  for (const auto& [v, c] : labels.entries) {
    double p = f_out(v, c);
    if (p < 1e-12) {
      p = 1e-12;
      clamped = true;
    }
    total -= std::log(p);
  }
  if (clamped)
    log::warn("loss: zero probability at a true label clamped to 1e-12");
  return total;
}

FilterGradients gradients(const WnnNetwork& net, const WaveletBasis& w,
                          const Matrix& f0, const LabeledNodes& labels) {
  if (net.layers.empty())
    throw std::invalid_argument("gradients: network has no layers");
  if (net.layers.back().activation != Activation::softmax)
    throw std::invalid_argument("gradients: top layer must use softmax");
  validate_labels(labels, w.n);

  const int depth = static_cast<int>(net.layers.size());
  std::vector<Matrix> inputs(depth);        // f^{(l-1)}
  std::vector<Matrix> preactivations(depth);
  Matrix f = f0;
  for (int l = 0; l < depth; ++l) {
    validate_layer(net.layers[l], w.n);
    if (f.rows() != w.n || f.cols() != net.layers[l].in_channels)
      throw std::invalid_argument("gradients: channel chain mismatch");
    inputs[l] = f;
    preactivations[l] = layer_preactivation(net.layers[l], w, f);
    f = apply_activation(net.layers[l], preactivations[l]);
  }

  // softmax + cross-entropy shortcut: dL/dZ = p - y on labeled rows
  Matrix delta = Matrix::Zero(w.n, net.layers.back().out_channels);
  for (const auto& [v, c] : labels.entries) {
    delta.row(v) += f.row(v);
    delta(v, c) -= 1.0;
  }

  FilterGradients grads(depth);
  for (int l = depth - 1; l >= 0; --l) {
    const WnnLayer& layer = net.layers[l];
    if (l < depth - 1) {
      // elementwise activations differentiate in place
      if (layer.activation == Activation::relu) {
        delta = (preactivations[l].array() > 0.0)
                    .select(delta, Matrix::Zero(delta.rows(), delta.cols()));
      } else if (layer.activation == Activation::softmax) {
        throw std::invalid_argument(
            "gradients: softmax is only supported on the top layer");
      }
    }
    const Matrix delta_hat = w.matrix * delta;         // coefficient domain
    const Matrix input_hat = w.matrix * inputs[l];
    grads[l].assign(layer.in_channels,
                    std::vector<Vector>(layer.out_channels));
    for (int i = 0; i < layer.in_channels; ++i)
      for (int j = 0; j < layer.out_channels; ++j)
        grads[l][i][j] = delta_hat.col(j).cwiseProduct(input_hat.col(i));
    if (l > 0) {
      Matrix back_hat = Matrix::Zero(w.n, layer.in_channels);
      for (int i = 0; i < layer.in_channels; ++i)
        for (int j = 0; j < layer.out_channels; ++j)
          back_hat.col(i) +=
              layer.filters[i][j].cwiseProduct(delta_hat.col(j));
      delta = w.matrix.transpose() * back_hat;
    }
  }
  return grads;
}

TrainResult train(WnnNetwork network, const WaveletBasis& w, const Matrix& f0,
                  const LabeledNodes& labels, double lr, int epochs) {
  if (lr < 0) throw std::invalid_argument("train: lr must be >= 0");
  TrainResult result;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const Matrix out = network_forward(network, w, f0);
    const double l = loss(out, labels);
    result.loss_trace.push_back(l);
    if (l > 1e6) {
      result.diverged = true;
      break;
    }
    const FilterGradients grads = gradients(network, w, f0, labels);
    for (std::size_t layer = 0; layer < network.layers.size(); ++layer)
      for (int i = 0; i < network.layers[layer].in_channels; ++i)
        for (int j = 0; j < network.layers[layer].out_channels; ++j)
          network.layers[layer].filters[i][j] -= lr * grads[layer][i][j];
  }
  result.network = std::move(network);
  return result;
}

double accuracy(const Matrix& f_out, const LabeledNodes& eval) {
  if (eval.entries.empty()) return 0.0;
  int correct = 0;
  for (const auto& [v, c] : eval.entries) {
    int argmax = 0;
    f_out.row(v).maxCoeff(&argmax);
    if (argmax == c) ++correct;
  }
  return static_cast<double>(correct) / eval.entries.size();
}

}  // namespace mmf::wnn
