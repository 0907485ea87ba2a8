// Copyright 2026 The dprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dprl/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "dprl/errors.hpp"
#include "dprl/parallel.hpp"

namespace dprl {
namespace {

// Canonical working shape for spatial layers: rank-2 inputs get a leading
// unit channel.
std::vector<std::size_t> as_chw(const std::vector<std::size_t>& shape,
                                const char* layer_name) {
  if (shape.size() == 3) {
    return shape;
  }
  if (shape.size() == 2) {
    return {1, shape[0], shape[1]};
  }
  throw DimensionError(std::string(layer_name) +
                       ": needs a (channels, height, width) input");
}

struct ShapeWalker {
  std::vector<std::size_t> shape;

  void apply(const DenseSpec& d) {
    if (d.in == 0 || d.out == 0) {
      throw DomainError("dense: extents must be positive");
    }
    if (shape_count(shape) != d.in) {
      throw DimensionError("dense: input count " +
                           std::to_string(shape_count(shape)) +
                           " does not match layer in=" + std::to_string(d.in));
    }
    shape = {d.out};
  }

  void apply(const Conv2dSpec& c) {
    if (c.kernel != 3 && c.kernel != 5) {
      throw DomainError("conv2d: kernel must be 3 or 5");
    }
    if (c.in_channels == 0 || c.out_channels == 0) {
      throw DomainError("conv2d: channel counts must be positive");
    }
    const auto chw = as_chw(shape, "conv2d");
    if (chw[0] != c.in_channels) {
      throw DimensionError("conv2d: expected " + std::to_string(c.in_channels) +
                           " input channels, got " + std::to_string(chw[0]));
    }
    if (chw[1] < c.kernel || chw[2] < c.kernel) {
      throw DimensionError("conv2d: input smaller than kernel");
    }
    shape = {c.out_channels, chw[1] - c.kernel + 1, chw[2] - c.kernel + 1};
  }

  void apply(const MaxPoolSpec&) {
    const auto chw = as_chw(shape, "maxpool");
    if (chw[1] < 2 || chw[2] < 2) {
      throw DimensionError("maxpool: input smaller than 2x2 window");
    }
    shape = {chw[0], chw[1] / 2, chw[2] / 2};
  }

  void apply(const ReluSpec&) {}
};

// Shapes entering each layer; back() is the output shape.
std::vector<std::vector<std::size_t>> layer_shapes(const NetworkSpec& spec) {
  if (spec.input_shape.empty() || shape_count(spec.input_shape) == 0) {
    throw DimensionError("network: input shape must be non-empty");
  }
  if (spec.class_count == 0) {
    throw DomainError("network: class count must be positive");
  }
  ShapeWalker walker{spec.input_shape};
  std::vector<std::vector<std::size_t>> shapes;
  shapes.reserve(spec.layers.size() + 1);
  shapes.push_back(walker.shape);
  for (const LayerSpec& layer : spec.layers) {
    std::visit([&](const auto& l) { walker.apply(l); }, layer);
    shapes.push_back(walker.shape);
  }
  return shapes;
}

struct ForwardTrace {
  // inputs[i] is the activation entering layer i, in canonical shape.
  std::vector<Tensor> inputs;
  // For maxpool layers: source flat index chosen for each output element.
  std::vector<std::vector<std::uint32_t>> pool_src;
};

Tensor dense_forward(const DenseSpec& d, std::span<const float> w,
                     std::span<const float> b, const Tensor& in) {
  Tensor out({d.out});
  for (std::size_t o = 0; o < d.out; ++o) {
    double acc = b[o];
    const float* wrow = w.data() + o * d.in;
    const float* xin = in.data();
    for (std::size_t i = 0; i < d.in; ++i) {
      acc += static_cast<double>(wrow[i]) * static_cast<double>(xin[i]);
    }
    out[o] = static_cast<float>(acc);
  }
  return out;
}

Tensor conv_forward(const Conv2dSpec& c, std::span<const float> w,
                    std::span<const float> b, const Tensor& in) {
  const auto& s = in.shape();  // canonical {C, H, W}
  const std::size_t ic = s[0], h = s[1], wd = s[2];
  const std::size_t k = c.kernel;
  const std::size_t oh = h - k + 1, ow = wd - k + 1;
  Tensor out({c.out_channels, oh, ow});
  const float* pin = in.data();
  float* pout = out.data();
  for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        double acc = b[oc];
        for (std::size_t ch = 0; ch < ic; ++ch) {
          for (std::size_t ki = 0; ki < k; ++ki) {
            const float* row = pin + (ch * h + y + ki) * wd + x;
            const float* wrow = w.data() + ((oc * ic + ch) * k + ki) * k;
            for (std::size_t kj = 0; kj < k; ++kj) {
              acc += static_cast<double>(wrow[kj]) * static_cast<double>(row[kj]);
            }
          }
        }
        pout[(oc * oh + y) * ow + x] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Tensor pool_forward(const Tensor& in, std::vector<std::uint32_t>* src) {
  const auto& s = in.shape();
  const std::size_t c = s[0], h = s[1], w = s[2];
  const std::size_t oh = h / 2, ow = w / 2;
  Tensor out({c, oh, ow});
  if (src != nullptr) {
    src->assign(out.size(), 0);
  }
  const float* pin = in.data();
  float* pout = out.data();
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        // First row-major maximum wins ties.
        std::size_t best = (ch * h + 2 * y) * w + 2 * x;
        float best_v = pin[best];
        for (std::size_t dy = 0; dy < 2; ++dy) {
          for (std::size_t dx = 0; dx < 2; ++dx) {
            const std::size_t idx = (ch * h + 2 * y + dy) * w + 2 * x + dx;
            if (pin[idx] > best_v) {
              best_v = pin[idx];
              best = idx;
            }
          }
        }
        const std::size_t out_idx = (ch * oh + y) * ow + x;
        pout[out_idx] = best_v;
        if (src != nullptr) {
          (*src)[out_idx] = static_cast<std::uint32_t>(best);
        }
      }
    }
  }
  return out;
}

Tensor relu_forward(const Tensor& in) {
  Tensor out(in.shape());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = in[i] > 0.0f ? in[i] : 0.0f;
  }
  return out;
}

Tensor run_forward(const NetworkSpec& spec, const Parameters& params,
                   const Tensor& x, ForwardTrace* trace) {
  const auto shapes = layer_shapes(spec);
  if (x.size() != shape_count(spec.input_shape)) {
    throw DimensionError("forward: input has " + std::to_string(x.size()) +
                         " elements, network expects " +
                         std::to_string(shape_count(spec.input_shape)));
  }
  Tensor current = x.reshaped(shapes[0]);
  if (trace != nullptr) {
    trace->inputs.clear();
    trace->pool_src.assign(spec.layers.size(), {});
  }
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    // Spatial layers work on {C, H, W}; promote rank-2 activations once.
    if (std::holds_alternative<Conv2dSpec>(spec.layers[i]) ||
        std::holds_alternative<MaxPoolSpec>(spec.layers[i])) {
      current = current.reshaped(as_chw(current.shape(), "forward"));
    }
    if (trace != nullptr) {
      trace->inputs.push_back(current);
    }
    const LayerSlice& slice = params.slices()[i];
    current = std::visit(
        [&](const auto& layer) -> Tensor {
          using T = std::decay_t<decltype(layer)>;
          if constexpr (std::is_same_v<T, DenseSpec>) {
            Tensor flat = current.reshaped({current.size()});
            return dense_forward(layer, params.flat().subspan(slice.weight_offset, slice.weight_count),
                                 params.flat().subspan(slice.bias_offset, slice.bias_count), flat);
          } else if constexpr (std::is_same_v<T, Conv2dSpec>) {
            return conv_forward(layer, params.flat().subspan(slice.weight_offset, slice.weight_count),
                                params.flat().subspan(slice.bias_offset, slice.bias_count), current);
          } else if constexpr (std::is_same_v<T, MaxPoolSpec>) {
            return pool_forward(current,
                                trace != nullptr ? &trace->pool_src[i] : nullptr);
          } else {
            return relu_forward(current);
          }
        },
        spec.layers[i]);
  }
  return current;
}

void dense_backward(const DenseSpec& d, std::span<const float> w,
                    const Tensor& in, const Tensor& delta_out,
                    std::span<float> dw, std::span<float> db, Tensor& delta_in) {
  const float* xin = in.data();
  const float* dout = delta_out.data();
  if (!dw.empty()) {
    for (std::size_t o = 0; o < d.out; ++o) {
      float* dwrow = dw.data() + o * d.in;
      for (std::size_t i = 0; i < d.in; ++i) {
        dwrow[i] = dout[o] * xin[i];
      }
      db[o] = dout[o];
    }
  }
  delta_in = Tensor({d.in});
  for (std::size_t i = 0; i < d.in; ++i) {
    double acc = 0.0;
    for (std::size_t o = 0; o < d.out; ++o) {
      acc += static_cast<double>(dout[o]) * static_cast<double>(w[o * d.in + i]);
    }
    delta_in[i] = static_cast<float>(acc);
  }
}

void conv_backward(const Conv2dSpec& c, std::span<const float> w,
                   const Tensor& in, const Tensor& delta_out,
                   std::span<float> dw, std::span<float> db, Tensor& delta_in) {
  const auto& s = in.shape();
  const std::size_t ic = s[0], h = s[1], wd = s[2];
  const std::size_t k = c.kernel;
  const std::size_t oh = h - k + 1, ow = wd - k + 1;
  const float* pin = in.data();
  const float* dout = delta_out.data();

  if (!dw.empty()) {
    for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
      double bacc = 0.0;
      for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
          bacc += dout[(oc * oh + y) * ow + x];
        }
      }
      db[oc] = static_cast<float>(bacc);
      for (std::size_t ch = 0; ch < ic; ++ch) {
        for (std::size_t ki = 0; ki < k; ++ki) {
          for (std::size_t kj = 0; kj < k; ++kj) {
            double acc = 0.0;
            for (std::size_t y = 0; y < oh; ++y) {
              const float* drow = dout + (oc * oh + y) * ow;
              const float* irow = pin + (ch * h + y + ki) * wd + kj;
              for (std::size_t x = 0; x < ow; ++x) {
                acc += static_cast<double>(drow[x]) * static_cast<double>(irow[x]);
              }
            }
            dw[((oc * ic + ch) * k + ki) * k + kj] = static_cast<float>(acc);
          }
        }
      }
    }
  }

  delta_in = Tensor({ic, h, wd});
  for (std::size_t ch = 0; ch < ic; ++ch) {
    for (std::size_t iy = 0; iy < h; ++iy) {
      for (std::size_t ix = 0; ix < wd; ++ix) {
        double acc = 0.0;
        for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
          const std::size_t ki_lo = iy >= oh ? iy - oh + 1 : 0;
          const std::size_t ki_hi = std::min(k - 1, iy);
          const std::size_t kj_lo = ix >= ow ? ix - ow + 1 : 0;
          const std::size_t kj_hi = std::min(k - 1, ix);
          for (std::size_t ki = ki_lo; ki <= ki_hi; ++ki) {
            for (std::size_t kj = kj_lo; kj <= kj_hi; ++kj) {
              acc += static_cast<double>(dout[(oc * oh + iy - ki) * ow + ix - kj]) *
                     static_cast<double>(w[((oc * ic + ch) * k + ki) * k + kj]);
            }
          }
        }
        delta_in[(ch * h + iy) * wd + ix] = static_cast<float>(acc);
      }
    }
  }
}

// Backpropagates delta at the logits down to (optionally) parameter
// gradients and the input gradient.
void run_backward(const NetworkSpec& spec, const Parameters& params,
                  const ForwardTrace& trace, const Tensor& dlogits,
                  std::span<float> grad_row, Tensor* dinput) {
  Tensor delta = dlogits;
  for (std::size_t li = spec.layers.size(); li-- > 0;) {
    const Tensor& in = trace.inputs[li];
    const LayerSlice& slice = params.slices()[li];
    std::span<float> dw, db;
    if (!grad_row.empty() && slice.weight_count > 0) {
      dw = grad_row.subspan(slice.weight_offset, slice.weight_count);
      db = grad_row.subspan(slice.bias_offset, slice.bias_count);
    }
    Tensor delta_in;
    std::visit(
        [&](const auto& layer) {
          using T = std::decay_t<decltype(layer)>;
          if constexpr (std::is_same_v<T, DenseSpec>) {
            Tensor flat_in = in.reshaped({in.size()});
            dense_backward(layer,
                           params.flat().subspan(slice.weight_offset, slice.weight_count),
                           flat_in, delta, dw, db, delta_in);
            delta_in = delta_in.reshaped(in.shape());
          } else if constexpr (std::is_same_v<T, Conv2dSpec>) {
            conv_backward(layer,
                          params.flat().subspan(slice.weight_offset, slice.weight_count),
                          in, delta, dw, db, delta_in);
          } else if constexpr (std::is_same_v<T, MaxPoolSpec>) {
            delta_in = Tensor(in.shape());
            const auto& src = trace.pool_src[li];
            for (std::size_t e = 0; e < delta.size(); ++e) {
              delta_in[src[e]] = delta[e];
            }
          } else {
            delta_in = Tensor(in.shape());
            for (std::size_t e = 0; e < in.size(); ++e) {
              delta_in[e] = in[e] > 0.0f ? delta[e] : 0.0f;
            }
          }
        },
        spec.layers[li]);
    delta = std::move(delta_in);
  }
  if (dinput != nullptr) {
    *dinput = std::move(delta);
  }
}

// softmax(logits) - onehot(y), computed from a stable log-sum-exp.
Tensor loss_logit_gradient(const Tensor& logits, std::size_t y) {
  double max_logit = logits[0];
  for (std::size_t i = 1; i < logits.size(); ++i) {
    max_logit = std::max(max_logit, static_cast<double>(logits[i]));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    sum += std::exp(static_cast<double>(logits[i]) - max_logit);
  }
  Tensor grad({logits.size()});
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double p = std::exp(static_cast<double>(logits[i]) - max_logit) / sum;
    grad[i] = static_cast<float>(p - (i == y ? 1.0 : 0.0));
  }
  return grad;
}

void check_label(const NetworkSpec& spec, std::size_t y) {
  if (y >= spec.class_count) {
    throw DomainError("label " + std::to_string(y) + " out of range for " +
                      std::to_string(spec.class_count) + " classes");
  }
}

}  // namespace

void validate(const NetworkSpec& spec) {
  const auto shapes = layer_shapes(spec);
  if (shape_count(shapes.back()) != spec.class_count) {
    throw DimensionError("network: final layer produces " +
                         std::to_string(shape_count(shapes.back())) +
                         " outputs, expected class_count=" +
                         std::to_string(spec.class_count));
  }
}

std::size_t parameter_count(const NetworkSpec& spec) {
  return Parameters(spec).size();
}

Parameters::Parameters(const NetworkSpec& spec) {
  layer_shapes(spec);  // shape validation
  std::size_t offset = 0;
  slices_.reserve(spec.layers.size());
  for (const LayerSpec& layer : spec.layers) {
    LayerSlice slice;
    if (const auto* d = std::get_if<DenseSpec>(&layer)) {
      slice.weight_offset = offset;
      slice.weight_count = d->in * d->out;
      slice.bias_offset = offset + slice.weight_count;
      slice.bias_count = d->out;
    } else if (const auto* c = std::get_if<Conv2dSpec>(&layer)) {
      slice.weight_offset = offset;
      slice.weight_count = c->out_channels * c->in_channels * c->kernel * c->kernel;
      slice.bias_offset = offset + slice.weight_count;
      slice.bias_count = c->out_channels;
    }
    offset += slice.weight_count + slice.bias_count;
    slices_.push_back(slice);
  }
  flat_.assign(offset, 0.0f);
}

std::span<float> Parameters::weights(std::size_t layer) {
  const LayerSlice& s = slices_.at(layer);
  return std::span<float>(flat_).subspan(s.weight_offset, s.weight_count);
}

std::span<const float> Parameters::weights(std::size_t layer) const {
  const LayerSlice& s = slices_.at(layer);
  return std::span<const float>(flat_).subspan(s.weight_offset, s.weight_count);
}

std::span<float> Parameters::bias(std::size_t layer) {
  const LayerSlice& s = slices_.at(layer);
  return std::span<float>(flat_).subspan(s.bias_offset, s.bias_count);
}

std::span<const float> Parameters::bias(std::size_t layer) const {
  const LayerSlice& s = slices_.at(layer);
  return std::span<const float>(flat_).subspan(s.bias_offset, s.bias_count);
}

Parameters init_parameters(const NetworkSpec& spec, SeededRng& rng) {
  validate(spec);
  Parameters params(spec);
  for (std::size_t li = 0; li < spec.layers.size(); ++li) {
    std::size_t fan_in = 0;
    if (const auto* d = std::get_if<DenseSpec>(&spec.layers[li])) {
      fan_in = d->in;
    } else if (const auto* c = std::get_if<Conv2dSpec>(&spec.layers[li])) {
      fan_in = c->in_channels * c->kernel * c->kernel;
    } else {
      continue;
    }
    auto w = params.weights(li);
    const Tensor draws =
        gaussian_sample(rng, w.size(), std::sqrt(2.0 / static_cast<double>(fan_in)));
    std::copy(draws.data(), draws.data() + w.size(), w.begin());
    // biases stay zero
  }
  return params;
}

std::size_t argmax_class(const Tensor& logits) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) {
      best = i;
    }
  }
  return best;
}

Tensor forward_logits(const NetworkSpec& spec, const Parameters& params,
                      const Tensor& x) {
  return run_forward(spec, params, x, nullptr);
}

std::size_t predict_class(const NetworkSpec& spec, const Parameters& params,
                          const Tensor& x) {
  return argmax_class(forward_logits(spec, params, x));
}

double loss(const NetworkSpec& spec, const Parameters& params, const Tensor& x,
            std::size_t y) {
  check_label(spec, y);
  const Tensor logits = forward_logits(spec, params, x);
  double max_logit = logits[0];
  for (std::size_t i = 1; i < logits.size(); ++i) {
    max_logit = std::max(max_logit, static_cast<double>(logits[i]));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    sum += std::exp(static_cast<double>(logits[i]) - max_logit);
  }
  return max_logit + std::log(sum) - static_cast<double>(logits[y]);
}

PerExampleGradients backward_params(const NetworkSpec& spec,
                                    const Parameters& params,
                                    std::span<const Tensor> xs,
                                    std::span<const std::size_t> ys) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw DimensionError("backward_params: batch must be non-empty and aligned");
  }
  PerExampleGradients grads;
  grads.rows = xs.size();
  grads.cols = params.size();
  grads.data.assign(grads.rows * grads.cols, 0.0f);
  grads.row_norms.assign(grads.rows, 0.0);
  grads.losses.assign(grads.rows, 0.0);

  parallel_for(grads.rows, [&](std::size_t i) {
    check_label(spec, ys[i]);
    ForwardTrace trace;
    const Tensor logits = run_forward(spec, params, xs[i], &trace);
    const Tensor dlogits = loss_logit_gradient(logits, ys[i]);
    run_backward(spec, params, trace, dlogits, grads.row(i), nullptr);
    grads.row_norms[i] = l2_norm(grads.row(i));
    double max_logit = logits[0];
    for (std::size_t c = 1; c < logits.size(); ++c) {
      max_logit = std::max(max_logit, static_cast<double>(logits[c]));
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.size(); ++c) {
      sum += std::exp(static_cast<double>(logits[c]) - max_logit);
    }
    grads.losses[i] = max_logit + std::log(sum) - static_cast<double>(logits[ys[i]]);
  });
  return grads;
}

Tensor backward_input(const NetworkSpec& spec, const Parameters& params,
                      const Tensor& x, std::size_t y) {
  check_label(spec, y);
  ForwardTrace trace;
  const Tensor logits = run_forward(spec, params, x, &trace);
  const Tensor dlogits = loss_logit_gradient(logits, y);
  Tensor dinput;
  run_backward(spec, params, trace, dlogits, {}, &dinput);
  return dinput.reshaped(x.shape());
}

Tensor logit_input_gradient(const NetworkSpec& spec, const Parameters& params,
                            const Tensor& x, std::size_t k) {
  if (k >= spec.class_count) {
    throw DomainError("logit_input_gradient: class index out of range");
  }
  ForwardTrace trace;
  run_forward(spec, params, x, &trace);
  Tensor dlogits({spec.class_count});
  dlogits[k] = 1.0f;
  Tensor dinput;
  run_backward(spec, params, trace, dlogits, {}, &dinput);
  return dinput.reshaped(x.shape());
}

NetworkSpec preset(std::string_view name) {
  NetworkSpec spec;
  if (name == "mlp_mnist") {
    spec.input_shape = {784};
    spec.layers = {DenseSpec{784, 200}, ReluSpec{}, DenseSpec{200, 200},
                   ReluSpec{}, DenseSpec{200, 10}};
  } else if (name == "mlp_synth") {
    spec.input_shape = {64};
    spec.layers = {DenseSpec{64, 64}, ReluSpec{}, DenseSpec{64, 10}};
  } else if (name == "lenet_small") {
    spec.input_shape = {1, 28, 28};
    spec.layers = {Conv2dSpec{5, 1, 8},  ReluSpec{}, MaxPoolSpec{},
                   Conv2dSpec{5, 8, 16}, ReluSpec{}, MaxPoolSpec{},
                   DenseSpec{256, 128},  ReluSpec{}, DenseSpec{128, 10}};
  } else if (name == "lenet_paper") {
    spec.input_shape = {1, 28, 28};
    spec.layers = {Conv2dSpec{5, 1, 20},  ReluSpec{}, MaxPoolSpec{},
                   Conv2dSpec{5, 20, 50}, ReluSpec{}, MaxPoolSpec{},
                   DenseSpec{800, 500},   ReluSpec{}, DenseSpec{500, 500},
                   ReluSpec{},            DenseSpec{500, 10}};
  } else {
    throw ConfigError("unknown architecture preset: " + std::string(name));
  }
  validate(spec);
  return spec;
}

std::vector<std::string> preset_names() {
  return {"mlp_mnist", "mlp_synth", "lenet_small", "lenet_paper"};
}

}  // namespace dprl
