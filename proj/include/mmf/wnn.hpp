#pragma once

#include <vector>

#include "mmf/core.hpp"
#include "mmf/wavelets.hpp"

namespace mmf::wnn {

enum class Activation { identity, relu, softmax };

/// Spectral convolution layer: every (input, output) channel pair carries a
/// diagonal filter of n values acting on wavelet coefficients.
struct WnnLayer {
  int in_channels = 0;
  int out_channels = 0;
  std::vector<std::vector<Vector>> filters;  // [in][out], each of size n
  Activation activation = Activation::relu;

  static WnnLayer ones(int n, int in_channels, int out_channels,
                       Activation activation);
};

struct WnnNetwork {
  std::vector<WnnLayer> layers;
};

struct LabeledNodes {
  std::vector<std::pair<int, int>> entries;  // (vertex, class)
  int num_classes = 0;
};

/// out[:, j] = sigma( sum_i W^T diag(g[i][j]) W f_in[:, i] ) where W f is the
/// wavelet transform; softmax is applied row-wise.
Matrix layer_forward(const WnnLayer& layer, const WaveletBasis& w,
                     const Matrix& f_in);

Matrix network_forward(const WnnNetwork& net, const WaveletBasis& w,
                       const Matrix& f0);

/// Cross-entropy over labeled vertices; probabilities clamped at 1e-12 with
/// a warning. Rows of f_out must sum to 1 within 1e-9 on labeled vertices.
double loss(const Matrix& f_out, const LabeledNodes& labels);

using FilterGradients = std::vector<std::vector<std::vector<Vector>>>;

/// Reverse-mode gradients of the cross-entropy loss with respect to every
/// filter diagonal. The top layer must use the softmax activation.
FilterGradients gradients(const WnnNetwork& net, const WaveletBasis& w,
                          const Matrix& f0, const LabeledNodes& labels);

struct TrainResult {
  WnnNetwork network;
  std::vector<double> loss_trace;  // one entry per epoch
  bool diverged = false;
};

/// Full-batch gradient descent; stops early when the loss exceeds 1e6.
TrainResult train(WnnNetwork network, const WaveletBasis& w, const Matrix& f0,
                  const LabeledNodes& labels, double lr, int epochs);

/// Fraction of vertices in `eval` whose argmax prediction matches the class.
double accuracy(const Matrix& f_out, const LabeledNodes& eval);

}  // namespace mmf::wnn
