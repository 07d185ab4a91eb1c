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

// The hybrid coordinate network: a sinusoidal linear embedding feeding a
// parameterised circuit built from folded-angle embedding rounds and
// all-pair CRZ entangling layers, re-uploading a shuffled copy of the
// embedding in every block, read out as the last n_out basis-state
// probabilities. A classical sine MLP of the same calling convention serves
// as the baseline.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quinr/adam.hpp"
#include "quinr/autodiff.hpp"
#include "quinr/errors.hpp"
#include "quinr/qsim.hpp"
#include "quinr/rng.hpp"

namespace quinr {

struct ModelConfig {
    int n_in = 2;
    int n_out = 1;
    int n_qubits = 4;
    int folds = 3;
    int embed_size = 12;  // must equal n_qubits * folds
    int entangling_layers = 2;
    int blocks = 2;
    double omega0 = 30.0;
    uint64_t shuffle_seed = 1;
    uint64_t init_seed = 0;
    Activation activation = Activation::QRelu;
    SineForm sine_form = SineForm::OmegaWx;
    bool head_affine = true;

    void validate() const {
        if (n_in < 1) {
            throw ConfigError("n_in must be >= 1");
        }
        if (n_out < 1) {
            throw ConfigError("n_out must be >= 1");
        }
        if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits) {
            throw ConfigError("n_qubits must be in 1..." + std::to_string(Statevector::kMaxQubits));
        }
        if (folds < 1 || entangling_layers < 1 || blocks < 1) {
            throw ConfigError("folds, entangling_layers and blocks must all be >= 1");
        }
        if (embed_size != n_qubits * folds) {
            throw ConfigError("embed_size (" + std::to_string(embed_size) +
                              ") must equal n_qubits*folds (" + std::to_string(n_qubits * folds) + ")");
        }
        if ((size_t{1} << n_qubits) < static_cast<size_t>(n_out)) {
            throw ConfigError("n_out (" + std::to_string(n_out) + ") exceeds 2^n_qubits");
        }
        if (!std::isfinite(omega0) || omega0 <= 0.0) {
            throw ConfigError("omega0 must be finite and positive");
        }
    }
};

/// Angles consumed by one entangling layer: a rotation pair per qubit before
/// and after the CRZ stage plus one CRZ per ordered qubit pair.
inline int entangling_angle_count(int n_qubits) {
    return 4 * n_qubits + n_qubits * (n_qubits - 1);
}

/// Folding rounds of per-qubit rotations, RX on even rounds and RZ on odd
/// ones; round r consumes angle indices [r*n_qubits, (r+1)*n_qubits).
inline std::vector<GateOp> build_folded_embedding(int n_qubits, int folds) {
    if (n_qubits < 1 || folds < 1) {
        throw ConfigError("folded embedding needs n_qubits >= 1 and folds >= 1");
    }
    std::vector<GateOp> ops;
    ops.reserve(static_cast<size_t>(n_qubits) * folds);
    for (int round = 0; round < folds; ++round) {
        for (int q = 0; q < n_qubits; ++q) {
            const int idx = round * n_qubits + q;
            ops.push_back(round % 2 == 0 ? GateOp::rx(q, idx) : GateOp::rz(q, idx));
        }
    }
    return ops;
}

namespace model_detail {

/// Entangling layer body, valid for any n_qubits >= 1 (the CRZ stage is
/// empty on a single qubit, which the angle-count formula also reflects).
inline std::vector<GateOp> entangling_ops(int n_qubits) {
    std::vector<GateOp> ops;
    ops.reserve(static_cast<size_t>(entangling_angle_count(n_qubits)));
    int idx = 0;
    for (int q = 0; q < n_qubits; ++q) {
        ops.push_back(GateOp::rz(q, idx++));
        ops.push_back(GateOp::rx(q, idx++));
    }
    // one CRZ per ordered pair, control-major then target ascending
    for (int c = 0; c < n_qubits; ++c) {
        for (int t = 0; t < n_qubits; ++t) {
            if (t != c) {
                ops.push_back(GateOp::crz(c, t, idx++));
            }
        }
    }
    for (int q = 0; q < n_qubits; ++q) {
        ops.push_back(GateOp::rz(q, idx++));
        ops.push_back(GateOp::rx(q, idx++));
    }
    return ops;
}

}  // namespace model_detail

/// RZ+RX per qubit, CRZ on every ordered pair, RZ+RX per qubit again;
/// consumes entangling_angle_count(n_qubits) angle indices starting at 0.
inline std::vector<GateOp> build_entangling_layer(int n_qubits) {
    if (n_qubits < 2) {
        throw ConfigError("entangling layer needs n_qubits >= 2");
    }
    return model_detail::entangling_ops(n_qubits);
}

inline size_t param_count(const ModelConfig &cfg) {
    cfg.validate();
    const size_t m = static_cast<size_t>(cfg.embed_size);
    size_t count = m * cfg.n_in + m;  // W and b
    count += static_cast<size_t>(cfg.blocks) * cfg.entangling_layers *
             entangling_angle_count(cfg.n_qubits);
    if (cfg.head_affine) {
        count += 2 * static_cast<size_t>(cfg.n_out);
    }
    return count;
}

class QuinrModel {
  public:
    /// Per-sample forward record, consumed in reverse by backward().
    struct Tape {
        std::vector<double> x;
        std::vector<double> pre;
        std::vector<double> h;
        std::vector<double> angles;
        Statevector state{1};
        std::vector<double> probs;
        std::vector<double> tail;
        std::vector<double> act_in;
        std::vector<double> y;
        std::vector<double> scratch_upstream;
        std::vector<double> scratch_gh;
    };

    explicit QuinrModel(ModelConfig cfg) : QuinrModel(std::move(cfg), {}, true) {}

    QuinrModel(ModelConfig cfg, std::span<const double> values)
        : QuinrModel(std::move(cfg), values, false) {}

    const ModelConfig &config() const { return cfg_; }
    const CircuitProgram &circuit() const { return circuit_; }
    const std::vector<std::vector<int>> &block_permutations() const { return perms_; }
    ParamStore &params() { return params_; }
    const ParamStore &params() const { return params_; }

    std::span<const double> forward(std::span<const double> x, Tape &tape) const {
        if (static_cast<int>(x.size()) != cfg_.n_in) {
            throw DimensionError("input size " + std::to_string(x.size()) +
                                 " does not match n_in " + std::to_string(cfg_.n_in));
        }
        tape.x.assign(x.begin(), x.end());
        linear_sine_forward(params_.slice_values("W"), params_.slice_values("b"), x,
                            cfg_.omega0, cfg_.sine_form, tape.pre, tape.h);

        tape.angles.resize(static_cast<size_t>(circuit_.n_angles));
        fill_angles(tape.h, tape.angles);
        tape.state = run_circuit(circuit_, tape.angles);
        tape.probs = tape.state.probabilities();

        const size_t n_out = static_cast<size_t>(cfg_.n_out);
        tape.tail.assign(tape.probs.end() - n_out, tape.probs.end());

        if (cfg_.head_affine) {
            const auto scale = params_.slice_values("out_scale");
            const auto bias = params_.slice_values("out_bias");
            tape.act_in.resize(n_out);
            for (size_t c = 0; c < n_out; ++c) {
                tape.act_in[c] = scale[c] * tape.tail[c] + bias[c];
            }
        } else {
            tape.act_in = tape.tail;
        }

        tape.y.resize(n_out);
        for (size_t c = 0; c < n_out; ++c) {
            tape.y[c] = activate(cfg_.activation, tape.act_in[c]);
        }
        return tape.y;
    }

    /// Accumulates d(loss)/d(params) into params().grads() given d(loss)/dy.
    void backward(std::span<const double> g_y, Tape &tape) {
        const size_t n_out = static_cast<size_t>(cfg_.n_out);
        if (g_y.size() != n_out) {
            throw DimensionError("output gradient size does not match n_out");
        }

        std::vector<double> g_tail(n_out);
        if (cfg_.head_affine) {
            const auto scale = params_.slice_values("out_scale");
            auto g_scale = params_.slice_grads("out_scale");
            auto g_bias = params_.slice_grads("out_bias");
            for (size_t c = 0; c < n_out; ++c) {
                const double g_act = g_y[c] * activate_slope(cfg_.activation, tape.act_in[c]);
                g_scale[c] += g_act * tape.tail[c];
                g_bias[c] += g_act;
                g_tail[c] = g_act * scale[c];
            }
        } else {
            for (size_t c = 0; c < n_out; ++c) {
                g_tail[c] = g_y[c] * activate_slope(cfg_.activation, tape.act_in[c]);
            }
        }

        auto &upstream = tape.scratch_upstream;
        upstream.assign(tape.probs.size(), 0.0);
        for (size_t c = 0; c < n_out; ++c) {
            upstream[tape.probs.size() - n_out + c] = g_tail[c];
        }

        const std::vector<double> g_angles =
            circuit_gradient_from_state(circuit_, tape.angles, upstream, tape.state);

        auto &g_h = tape.scratch_gh;
        g_h.assign(static_cast<size_t>(cfg_.embed_size), 0.0);
        auto g_quantum = params_.slice_grads("quantum_angles");
        const size_t m = static_cast<size_t>(cfg_.embed_size);
        const size_t e = static_cast<size_t>(entangling_angle_count(cfg_.n_qubits));
        const size_t per_block = static_cast<size_t>(cfg_.entangling_layers) * e;
        for (int blk = 0; blk < cfg_.blocks; ++blk) {
            const size_t base = static_cast<size_t>(blk) * (m + per_block);
            const auto &perm = perms_[static_cast<size_t>(blk)];
            for (size_t j = 0; j < m; ++j) {
                g_h[static_cast<size_t>(perm[j])] += g_angles[base + j];
            }
            for (size_t s = 0; s < per_block; ++s) {
                g_quantum[static_cast<size_t>(blk) * per_block + s] += g_angles[base + m + s];
            }
        }

        linear_sine_backward(tape.x, tape.pre, params_.slice_values("W"), cfg_.omega0,
                             cfg_.sine_form, g_h, params_.slice_grads("W"),
                             params_.slice_grads("b"), {});
    }

  private:
    QuinrModel(ModelConfig cfg, std::span<const double> values, bool random_init) : cfg_(std::move(cfg)) {
        cfg_.validate();
        const size_t m = static_cast<size_t>(cfg_.embed_size);
        const size_t e = static_cast<size_t>(entangling_angle_count(cfg_.n_qubits));
        const size_t quantum = static_cast<size_t>(cfg_.blocks) * cfg_.entangling_layers * e;
        const size_t head = cfg_.head_affine ? static_cast<size_t>(cfg_.n_out) : 0;

        params_ = ParamStore({
            {"W", m * cfg_.n_in},
            {"b", m},
            {"quantum_angles", quantum},
            {"out_scale", head},
            {"out_bias", head},
        });

        build_circuit();
        build_permutations();

        if (random_init) {
            init_params();
        } else {
            if (values.size() != params_.size()) {
                throw DimensionError("parameter payload has " + std::to_string(values.size()) +
                                     " values, model needs " + std::to_string(params_.size()));
            }
            std::copy(values.begin(), values.end(), params_.values().begin());
        }
    }

    void build_circuit() {
        const int m = cfg_.embed_size;
        const int e = entangling_angle_count(cfg_.n_qubits);
        const int per_block = m + cfg_.entangling_layers * e;

        circuit_.n_qubits = cfg_.n_qubits;
        circuit_.n_angles = cfg_.blocks * per_block;
        const std::vector<GateOp> embedding = build_folded_embedding(cfg_.n_qubits, cfg_.folds);
        const std::vector<GateOp> layer = model_detail::entangling_ops(cfg_.n_qubits);
        for (int blk = 0; blk < cfg_.blocks; ++blk) {
            const int base = blk * per_block;
            for (const GateOp &op : embedding) {
                circuit_.ops.push_back(op.with_offset(base));
            }
            for (int l = 0; l < cfg_.entangling_layers; ++l) {
                const int layer_base = base + m + l * e;
                for (const GateOp &op : layer) {
                    circuit_.ops.push_back(op.with_offset(layer_base));
                }
            }
        }
        circuit_.validate();
    }

    void build_permutations() {
        const size_t m = static_cast<size_t>(cfg_.embed_size);
        perms_.resize(static_cast<size_t>(cfg_.blocks));
        for (int blk = 0; blk < cfg_.blocks; ++blk) {
            auto &perm = perms_[static_cast<size_t>(blk)];
            perm.resize(m);
            for (size_t j = 0; j < m; ++j) {
                perm[j] = static_cast<int>(j);
            }
            if (blk > 0) {  // block 0 keeps the identity so blocks=1 is plain embedding
                SplitMix64 rng(cfg_.shuffle_seed ^
                               (0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(blk)));
                fisher_yates(perm, rng);
            }
        }
    }

    void init_params() {
        SplitMix64 rng(cfg_.init_seed);
        // embedding angles enter rotations directly; without the 1/omega0
        // factor the initial features oscillate several periods across the
        // signal and short training budgets stall
        const double w_bound = 1.0 / (static_cast<double>(cfg_.n_in) * cfg_.omega0);
        for (double &w : params_.slice_values("W")) {
            w = rng.uniform(-w_bound, w_bound);
        }
        // b stays zero
        constexpr double kTwoPi = 6.283185307179586;
        for (double &a : params_.slice_values("quantum_angles")) {
            a = rng.uniform(0.0, kTwoPi);
        }
        if (cfg_.head_affine) {
            // raw tail probabilities concentrate near 2^-n_qubits; the affine
            // head rescales them to span the signal range
            const double scale0 = static_cast<double>(size_t{1} << cfg_.n_qubits) /
                                  static_cast<double>(cfg_.n_out);
            for (double &s : params_.slice_values("out_scale")) {
                s = scale0;
            }
        }
    }

    void fill_angles(std::span<const double> h, std::span<double> angles) const {
        const size_t m = static_cast<size_t>(cfg_.embed_size);
        const size_t e = static_cast<size_t>(entangling_angle_count(cfg_.n_qubits));
        const size_t per_block = static_cast<size_t>(cfg_.entangling_layers) * e;
        const auto quantum = params_.slice_values("quantum_angles");
        for (int blk = 0; blk < cfg_.blocks; ++blk) {
            const size_t base = static_cast<size_t>(blk) * (m + per_block);
            const auto &perm = perms_[static_cast<size_t>(blk)];
            for (size_t j = 0; j < m; ++j) {
                angles[base + j] = h[static_cast<size_t>(perm[j])];
            }
            for (size_t s = 0; s < per_block; ++s) {
                angles[base + m + s] = quantum[static_cast<size_t>(blk) * per_block + s];
            }
        }
    }

    ModelConfig cfg_;
    CircuitProgram circuit_;
    std::vector<std::vector<int>> perms_;
    ParamStore params_;
};

// ---------------------------------------------------------------------------
// Classical baseline: sine MLP with a linear output layer
// ---------------------------------------------------------------------------

struct SirenConfig {
    int n_in = 2;
    int n_out = 1;
    int hidden_layers = 2;
    int hidden_width = 16;
    double omega0 = 30.0;
    uint64_t init_seed = 0;

    void validate() const {
        if (n_in < 1 || n_out < 1) {
            throw ConfigError("siren n_in and n_out must be >= 1");
        }
        if (hidden_layers < 1 || hidden_width < 1) {
            throw ConfigError("siren hidden_layers and hidden_width must be >= 1");
        }
        if (!std::isfinite(omega0)) {
            throw ConfigError("omega0 must be finite");
        }
    }

    /// [n_in, hidden_width x hidden_layers, n_out]
    std::vector<int> layer_dims() const {
        std::vector<int> dims(static_cast<size_t>(hidden_layers) + 2, hidden_width);
        dims.front() = n_in;
        dims.back() = n_out;
        return dims;
    }
};

inline size_t param_count(const SirenConfig &cfg) {
    cfg.validate();
    const std::vector<int> dims = cfg.layer_dims();
    size_t count = 0;
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        count += static_cast<size_t>(dims[l]) * dims[l + 1] + dims[l + 1];
    }
    return count;
}

class SirenModel {
  public:
    struct Tape {
        struct Layer {
            std::vector<double> x;
            std::vector<double> pre;
        };
        std::vector<Layer> layers;
        std::vector<double> y;
    };

    explicit SirenModel(SirenConfig cfg) : SirenModel(std::move(cfg), {}, true) {}

    SirenModel(SirenConfig cfg, std::span<const double> values)
        : SirenModel(std::move(cfg), values, false) {}

    const SirenConfig &config() const { return cfg_; }
    ParamStore &params() { return params_; }
    const ParamStore &params() const { return params_; }

    std::span<const double> forward(std::span<const double> x, Tape &tape) const {
        if (static_cast<int>(x.size()) != cfg_.n_in) {
            throw DimensionError("input size does not match n_in");
        }
        const size_t n_layers = dims_.size() - 1;
        tape.layers.resize(n_layers);
        std::vector<double> cur(x.begin(), x.end());
        for (size_t l = 0; l + 1 < n_layers; ++l) {
            auto &rec = tape.layers[l];
            rec.x = std::move(cur);
            std::vector<double> h;
            linear_sine_forward(params_.slice_values(w_name(l)), params_.slice_values(b_name(l)),
                                rec.x, cfg_.omega0, SineForm::OmegaWxB, rec.pre, h);
            cur = std::move(h);
        }
        auto &last = tape.layers[n_layers - 1];
        last.x = std::move(cur);
        last.pre.clear();
        tape.y = linear_forward(params_.slice_values(w_name(n_layers - 1)),
                                params_.slice_values(b_name(n_layers - 1)), last.x);
        return tape.y;
    }

    void backward(std::span<const double> g_y, const Tape &tape) {
        const size_t n_layers = dims_.size() - 1;
        std::vector<double> g(g_y.begin(), g_y.end());
        {
            const auto &last = tape.layers[n_layers - 1];
            std::vector<double> g_x(last.x.size(), 0.0);
            linear_backward(last.x, params_.slice_values(w_name(n_layers - 1)), g,
                            params_.slice_grads(w_name(n_layers - 1)),
                            params_.slice_grads(b_name(n_layers - 1)), g_x);
            g = std::move(g_x);
        }
        for (size_t l = n_layers - 1; l-- > 0;) {
            const auto &rec = tape.layers[l];
            std::vector<double> g_x(rec.x.size(), 0.0);
            linear_sine_backward(rec.x, rec.pre, params_.slice_values(w_name(l)), cfg_.omega0,
                                 SineForm::OmegaWxB, g, params_.slice_grads(w_name(l)),
                                 params_.slice_grads(b_name(l)), g_x);
            g = std::move(g_x);
        }
    }

  private:
    SirenModel(SirenConfig cfg, std::span<const double> values, bool random_init)
        : cfg_(std::move(cfg)) {
        cfg_.validate();
        dims_ = cfg_.layer_dims();
        std::vector<std::pair<std::string, size_t>> layout;
        for (size_t l = 0; l + 1 < dims_.size(); ++l) {
            layout.emplace_back(w_name(l), static_cast<size_t>(dims_[l]) * dims_[l + 1]);
            layout.emplace_back(b_name(l), static_cast<size_t>(dims_[l + 1]));
        }
        params_ = ParamStore(std::move(layout));

        if (random_init) {
            init_params();
        } else {
            if (values.size() != params_.size()) {
                throw DimensionError("parameter payload has " + std::to_string(values.size()) +
                                     " values, model needs " + std::to_string(params_.size()));
            }
            std::copy(values.begin(), values.end(), params_.values().begin());
        }
    }

    static std::string w_name(size_t layer) { return "W" + std::to_string(layer); }
    static std::string b_name(size_t layer) { return "b" + std::to_string(layer); }

    void init_params() {
        // SIREN-style init: first layer U(+-1/fan_in), later layers
        // U(+-sqrt(6/fan_in)/omega0), biases U(+-1/sqrt(fan_in)).
        SplitMix64 rng(cfg_.init_seed);
        const size_t n_layers = dims_.size() - 1;
        for (size_t l = 0; l < n_layers; ++l) {
            const double fan_in = static_cast<double>(dims_[l]);
            const double w_bound =
                l == 0 ? 1.0 / fan_in : std::sqrt(6.0 / fan_in) / cfg_.omega0;
            for (double &w : params_.slice_values(w_name(l))) {
                w = rng.uniform(-w_bound, w_bound);
            }
            const double b_bound = 1.0 / std::sqrt(fan_in);
            for (double &b : params_.slice_values(b_name(l))) {
                b = rng.uniform(-b_bound, b_bound);
            }
        }
    }

    SirenConfig cfg_;
    std::vector<int> dims_;
    ParamStore params_;
};

}  // namespace quinr
