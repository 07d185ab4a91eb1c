// Copyright 2026 The quinr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reverse-mode building blocks for the classical half of the models: the
// flat parameter store, the sinusoidal linear layer, activations and the MSE
// loss. Each model saves its forward intermediates in a per-sample tape and
// replays them in exact reverse order in backward().

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quinr/errors.hpp"

namespace quinr {

struct ParamSlice {
    std::string name;
    size_t offset = 0;
    size_t size = 0;
};

/// All trainable parameters of a model as one flat array with named slices,
/// plus a gradient slot per value. Slices are laid out back to back, so they
/// are disjoint and cover the whole array by construction.
class ParamStore {
  public:
    ParamStore() = default;

    /// Takes (name, size) pairs; offsets are assigned sequentially.
    explicit ParamStore(std::vector<std::pair<std::string, size_t>> layout) {
        size_t offset = 0;
        slices_.reserve(layout.size());
        for (auto &[name, size] : layout) {
            slices_.push_back(ParamSlice{std::move(name), offset, size});
            offset += size;
        }
        values_.assign(offset, 0.0);
        grads_.assign(offset, 0.0);
    }

    size_t size() const { return values_.size(); }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::span<double> grads() { return grads_; }
    std::span<const double> grads() const { return grads_; }

    const std::vector<ParamSlice> &slices() const { return slices_; }

    const ParamSlice &slice(std::string_view name) const {
        for (const ParamSlice &s : slices_) {
            if (s.name == name) {
                return s;
            }
        }
        throw DimensionError("no parameter slice named '" + std::string(name) + "'");
    }

    std::span<double> slice_values(std::string_view name) {
        const ParamSlice &s = slice(name);
        return std::span<double>(values_).subspan(s.offset, s.size);
    }
    std::span<const double> slice_values(std::string_view name) const {
        const ParamSlice &s = slice(name);
        return std::span<const double>(values_).subspan(s.offset, s.size);
    }
    std::span<double> slice_grads(std::string_view name) {
        const ParamSlice &s = slice(name);
        return std::span<double>(grads_).subspan(s.offset, s.size);
    }

    /// Name of the slice containing a flat index (for error messages).
    const std::string &slice_containing(size_t index) const {
        for (const ParamSlice &s : slices_) {
            if (index >= s.offset && index < s.offset + s.size) {
                return s.name;
            }
        }
        throw DimensionError("parameter index " + std::to_string(index) + " out of range");
    }

    void zero_grads() {
        std::fill(grads_.begin(), grads_.end(), 0.0);
    }

  private:
    std::vector<ParamSlice> slices_;
    std::vector<double> values_;
    std::vector<double> grads_;
};

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

enum class Activation : uint16_t { QRelu = 0, Relu = 1, LeakyRelu = 2, Identity = 3 };

inline double activate(Activation act, double x) {
    switch (act) {
        case Activation::QRelu:
            return x > 0.0 ? x : 0.01 * x - x;
        case Activation::Relu:
            return x > 0.0 ? x : 0.0;
        case Activation::LeakyRelu:
            return x > 0.0 ? x : 0.01 * x;
        case Activation::Identity:
            return x;
    }
    return x;
}

/// The subgradient at 0 is the negative-branch slope.
inline double activate_slope(Activation act, double x) {
    switch (act) {
        case Activation::QRelu:
            return x > 0.0 ? 1.0 : -0.99;
        case Activation::Relu:
            return x > 0.0 ? 1.0 : 0.0;
        case Activation::LeakyRelu:
            return x > 0.0 ? 1.0 : 0.01;
        case Activation::Identity:
            return 1.0;
    }
    return 1.0;
}

/// Elementwise QReLU: x for x > 0, 0.01 x - x otherwise. Continuous at 0.
inline std::vector<double> qrelu(std::span<const double> x) {
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        y[i] = activate(Activation::QRelu, x[i]);
    }
    return y;
}

// ---------------------------------------------------------------------------
// Sinusoidal linear layer
// ---------------------------------------------------------------------------

/// Where the frequency scale applies in the input layer:
///   OmegaWx:  h = sin(w0 * (W x) + b)
///   OmegaWxB: h = sin(w0 * (W x + b))    (classic SIREN layers)
enum class SineForm : uint16_t { OmegaWx = 0, OmegaWxB = 1 };

namespace ad_detail {

inline void check_linear_dims(std::span<const double> w, std::span<const double> b,
                              std::span<const double> x) {
    if (x.empty() || b.empty()) {
        throw DimensionError("linear layer with empty input or output");
    }
    if (w.size() != b.size() * x.size()) {
        throw DimensionError("weight matrix size " + std::to_string(w.size()) +
                             " does not match " + std::to_string(b.size()) + "x" +
                             std::to_string(x.size()));
    }
}

}  // namespace ad_detail

/// Writes pre-activations and h = sin(pre) into the given buffers.
inline void linear_sine_forward(std::span<const double> w, std::span<const double> b,
                                std::span<const double> x, double omega0, SineForm form,
                                std::vector<double> &pre, std::vector<double> &h) {
    ad_detail::check_linear_dims(w, b, x);
    const size_t rows = b.size();
    const size_t cols = x.size();
    pre.resize(rows);
    h.resize(rows);
    for (size_t r = 0; r < rows; ++r) {
        double dot = 0.0;
        for (size_t c = 0; c < cols; ++c) {
            dot += w[r * cols + c] * x[c];
        }
        pre[r] = form == SineForm::OmegaWx ? omega0 * dot + b[r] : omega0 * (dot + b[r]);
        h[r] = std::sin(pre[r]);
    }
}

inline std::vector<double> linear_sine_forward(std::span<const double> w, std::span<const double> b,
                                               std::span<const double> x, double omega0,
                                               SineForm form = SineForm::OmegaWx) {
    std::vector<double> pre, h;
    linear_sine_forward(w, b, x, omega0, form, pre, h);
    return h;
}

/// Accumulates into g_w / g_b / g_x; pass an empty span to skip an output.
inline void linear_sine_backward(std::span<const double> x, std::span<const double> pre,
                                 std::span<const double> w, double omega0, SineForm form,
                                 std::span<const double> g_h, std::span<double> g_w,
                                 std::span<double> g_b, std::span<double> g_x) {
    const size_t rows = pre.size();
    const size_t cols = x.size();
    if (g_h.size() != rows) {
        throw DimensionError("upstream gradient size does not match layer output");
    }
    for (size_t r = 0; r < rows; ++r) {
        const double g_pre = g_h[r] * std::cos(pre[r]);
        if (!g_b.empty()) {
            g_b[r] += form == SineForm::OmegaWx ? g_pre : g_pre * omega0;
        }
        const double g_dot = g_pre * omega0;
        if (!g_w.empty()) {
            for (size_t c = 0; c < cols; ++c) {
                g_w[r * cols + c] += g_dot * x[c];
            }
        }
        if (!g_x.empty()) {
            for (size_t c = 0; c < cols; ++c) {
                g_x[c] += g_dot * w[r * cols + c];
            }
        }
    }
}

// Plain affine layer, used as the SIREN output head.

inline std::vector<double> linear_forward(std::span<const double> w, std::span<const double> b,
                                          std::span<const double> x) {
    ad_detail::check_linear_dims(w, b, x);
    const size_t rows = b.size();
    const size_t cols = x.size();
    std::vector<double> y(rows);
    for (size_t r = 0; r < rows; ++r) {
        double dot = b[r];
        for (size_t c = 0; c < cols; ++c) {
            dot += w[r * cols + c] * x[c];
        }
        y[r] = dot;
    }
    return y;
}

inline void linear_backward(std::span<const double> x, std::span<const double> w,
                            std::span<const double> g_y, std::span<double> g_w,
                            std::span<double> g_b, std::span<double> g_x) {
    const size_t rows = g_y.size();
    const size_t cols = x.size();
    for (size_t r = 0; r < rows; ++r) {
        if (!g_b.empty()) {
            g_b[r] += g_y[r];
        }
        if (!g_w.empty()) {
            for (size_t c = 0; c < cols; ++c) {
                g_w[r * cols + c] += g_y[r] * x[c];
            }
        }
        if (!g_x.empty()) {
            for (size_t c = 0; c < cols; ++c) {
                g_x[c] += g_y[r] * w[r * cols + c];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// MSE loss
// ---------------------------------------------------------------------------

inline double mse_loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.empty()) {
        throw DimensionError("mse_loss on empty vectors");
    }
    if (pred.size() != target.size()) {
        throw DimensionError("mse_loss length mismatch: " + std::to_string(pred.size()) +
                             " vs " + std::to_string(target.size()));
    }
    double acc = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

/// d(mse)/d(pred_i) = 2 (pred_i - target_i) / len, written into grad_out.
inline void mse_loss_grad(std::span<const double> pred, std::span<const double> target,
                          std::span<double> grad_out) {
    if (pred.empty() || pred.size() != target.size() || grad_out.size() != pred.size()) {
        throw DimensionError("mse_loss_grad size mismatch");
    }
    const double scale = 2.0 / static_cast<double>(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) {
        grad_out[i] = scale * (pred[i] - target[i]);
    }
}

}  // namespace quinr
