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

// Central finite differences as an independent gradient oracle. These
// helpers only ever evaluate forward passes, so they stay decoupled from the
// adjoint sweep and the analytic layer backwards they are used to validate.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "quinr/autodiff.hpp"
#include "quinr/model.hpp"
#include "quinr/qsim.hpp"
#include "quinr/rng.hpp"

namespace quinr {

struct FdOptions {
    double eps = 1e-5;
    double rel_tol = 1e-4;
    double abs_floor = 1e-8;
};

struct FdReport {
    bool pass = true;
    double max_scaled_err = 0.0;  // err / max(magnitude, abs_floor/rel_tol); passes while <= rel_tol
    size_t worst_index = 0;
    size_t count = 0;
};

/// Compares an analytic gradient against (f(x+eps) - f(x-eps)) / 2 eps per
/// coordinate. `loss` is re-evaluated with mutated values; the vector is
/// restored after every probe.
template <typename LossFn>
FdReport compare_gradient(LossFn &&loss, std::span<double> values,
                          std::span<const double> analytic, FdOptions opts = {}) {
    FdReport report;
    report.count = values.size();
    const double floor_mag = opts.abs_floor / opts.rel_tol;
    for (size_t i = 0; i < values.size(); ++i) {
        const double saved = values[i];
        values[i] = saved + opts.eps;
        const double up = loss();
        values[i] = saved - opts.eps;
        const double down = loss();
        values[i] = saved;
        const double fd = (up - down) / (2.0 * opts.eps);
        const double err = std::abs(analytic[i] - fd);
        const double mag = std::max({std::abs(analytic[i]), std::abs(fd), floor_mag});
        const double scaled = err / mag;
        if (scaled > report.max_scaled_err) {
            report.max_scaled_err = scaled;
            report.worst_index = i;
        }
    }
    report.pass = report.max_scaled_err <= opts.rel_tol;
    return report;
}

/// End-to-end check of d(mse)/d(params) for one (coordinate, target) pair.
template <typename Model>
FdReport check_model_gradients(Model &model, std::span<const double> x,
                               std::span<const double> target, FdOptions opts = {}) {
    ParamStore &params = model.params();
    params.zero_grads();
    typename Model::Tape tape;
    const auto y = model.forward(x, tape);
    std::vector<double> g_y(y.size());
    mse_loss_grad(y, target, g_y);
    model.backward(g_y, tape);
    const std::vector<double> analytic(params.grads().begin(), params.grads().end());
    params.zero_grads();

    typename Model::Tape probe_tape;
    auto loss = [&] { return mse_loss(model.forward(x, probe_tape), target); };
    return compare_gradient(loss, params.values(), analytic, opts);
}

struct GradCheckResult {
    std::string name;
    double max_scaled_err = 0.0;
    bool pass = false;
};

namespace gradcheck_detail {

inline CircuitProgram random_circuit(SplitMix64 &rng, int n_qubits, int n_gates) {
    CircuitProgram prog;
    prog.n_qubits = n_qubits;
    prog.n_angles = n_gates;
    for (int i = 0; i < n_gates; ++i) {
        const int kind = static_cast<int>(rng.next_below(n_qubits >= 2 ? 3 : 2));
        const int target = static_cast<int>(rng.next_below(static_cast<uint64_t>(n_qubits)));
        if (kind == 2) {
            int control = static_cast<int>(rng.next_below(static_cast<uint64_t>(n_qubits)));
            if (control == target) {
                control = (control + 1) % n_qubits;
            }
            prog.ops.push_back(GateOp::crz(control, target, i));
        } else if (kind == 1) {
            prog.ops.push_back(GateOp::rz(target, i));
        } else {
            prog.ops.push_back(GateOp::rx(target, i));
        }
    }
    prog.validate();
    return prog;
}

inline GradCheckResult result_of(const std::string &name, const FdReport &report) {
    return GradCheckResult{name, report.max_scaled_err, report.pass};
}

}  // namespace gradcheck_detail

/// The full finite-difference suite: layer primitives, circuit gradients,
/// both end-to-end models and adjoint/parameter-shift agreement.
inline std::vector<GradCheckResult> run_gradcheck(uint64_t seed) {
    std::vector<GradCheckResult> results;
    SplitMix64 rng(seed);
    const FdOptions opts;

    // sinusoidal linear layer, both frequency conventions, wrt W, b and x
    for (const SineForm form : {SineForm::OmegaWx, SineForm::OmegaWxB}) {
        const size_t rows = 8, cols = 2;
        std::vector<double> all(rows * cols + rows + cols);
        for (double &v : all) {
            v = rng.uniform(-0.6, 0.6);
        }
        std::span<double> w(all.data(), rows * cols);
        std::span<double> b(all.data() + rows * cols, rows);
        std::span<double> x(all.data() + rows * cols + rows, cols);
        std::vector<double> upstream(rows);
        for (double &v : upstream) {
            v = rng.uniform(-1.0, 1.0);
        }

        std::vector<double> pre, h;
        linear_sine_forward(w, b, x, 30.0, form, pre, h);
        std::vector<double> analytic(all.size(), 0.0);
        linear_sine_backward(x, pre, w, 30.0, form, upstream,
                             std::span<double>(analytic.data(), rows * cols),
                             std::span<double>(analytic.data() + rows * cols, rows),
                             std::span<double>(analytic.data() + rows * cols + rows, cols));
        auto loss = [&] {
            const auto out = linear_sine_forward(w, b, x, 30.0, form);
            double acc = 0.0;
            for (size_t i = 0; i < out.size(); ++i) {
                acc += upstream[i] * out[i];
            }
            return acc;
        };
        const auto report = compare_gradient(loss, all, analytic, opts);
        results.push_back(gradcheck_detail::result_of(
            form == SineForm::OmegaWx ? "linear_sine(omega*Wx+b)" : "linear_sine(omega*(Wx+b))",
            report));
    }

    // mse loss wrt predictions
    {
        std::vector<double> pred(6), target(6);
        for (size_t i = 0; i < pred.size(); ++i) {
            pred[i] = rng.uniform(-1.0, 1.0);
            target[i] = rng.uniform(-1.0, 1.0);
        }
        std::vector<double> analytic(pred.size());
        mse_loss_grad(pred, target, analytic);
        auto loss = [&] { return mse_loss(pred, target); };
        results.push_back(gradcheck_detail::result_of(
            "mse_loss", compare_gradient(loss, pred, analytic, opts)));
    }

    // activations away from the kink
    {
        std::vector<double> x(8);
        for (double &v : x) {
            v = rng.uniform(0.05, 1.0) * (rng.next_below(2) ? 1.0 : -1.0);
        }
        double worst = 0.0;
        for (const Activation act :
             {Activation::QRelu, Activation::Relu, Activation::LeakyRelu, Activation::Identity}) {
            for (double v : x) {
                const double eps = 1e-6;
                const double fd = (activate(act, v + eps) - activate(act, v - eps)) / (2.0 * eps);
                worst = std::max(worst, std::abs(fd - activate_slope(act, v)));
            }
        }
        results.push_back(GradCheckResult{"activation_slopes", worst, worst < 1e-6});
    }

    // circuit gradient (adjoint) vs finite differences on the probabilities
    {
        const CircuitProgram prog = gradcheck_detail::random_circuit(rng, 4, 20);
        std::vector<double> angles(static_cast<size_t>(prog.n_angles));
        for (double &a : angles) {
            a = rng.uniform(0.0, 6.283185307179586);
        }
        std::vector<double> upstream(size_t{1} << prog.n_qubits);
        for (double &u : upstream) {
            u = rng.uniform(-1.0, 1.0);
        }
        const std::vector<double> analytic = circuit_gradient(prog, angles, upstream);
        auto loss = [&] {
            const auto probs = run_circuit(prog, angles).probabilities();
            double acc = 0.0;
            for (size_t k = 0; k < probs.size(); ++k) {
                acc += upstream[k] * probs[k];
            }
            return acc;
        };
        results.push_back(gradcheck_detail::result_of(
            "circuit_gradient(adjoint)", compare_gradient(loss, angles, analytic, opts)));

        // the parameter-shift route must agree with the adjoint sweep
        const std::vector<double> shifted =
            circuit_gradient(prog, angles, upstream, GradientMethod::ParameterShift);
        double worst = 0.0;
        for (size_t i = 0; i < analytic.size(); ++i) {
            worst = std::max(worst, std::abs(shifted[i] - analytic[i]));
        }
        results.push_back(GradCheckResult{"adjoint_vs_parameter_shift", worst, worst < 1e-10});
    }

    // end-to-end hybrid model
    {
        ModelConfig cfg;
        cfg.n_qubits = 3;
        cfg.folds = 2;
        cfg.embed_size = 6;
        cfg.entangling_layers = 1;
        cfg.blocks = 2;
        cfg.init_seed = rng.next_u64();
        cfg.shuffle_seed = rng.next_u64();
        QuinrModel model(cfg);
        double worst = 0.0;
        bool pass = true;
        for (int rep = 0; rep < 3; ++rep) {
            const double x[2] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            const double target[1] = {rng.uniform(0.0, 1.0)};
            const auto report = check_model_gradients(model, x, target, opts);
            worst = std::max(worst, report.max_scaled_err);
            pass = pass && report.pass;
        }
        results.push_back(GradCheckResult{"quinr_end_to_end", worst, pass});
    }

    // end-to-end baseline model
    {
        SirenConfig cfg;
        cfg.hidden_layers = 2;
        cfg.hidden_width = 8;
        cfg.init_seed = rng.next_u64();
        SirenModel model(cfg);
        double worst = 0.0;
        bool pass = true;
        for (int rep = 0; rep < 3; ++rep) {
            const double x[2] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            const double target[1] = {rng.uniform(0.0, 1.0)};
            const auto report = check_model_gradients(model, x, target, opts);
            worst = std::max(worst, report.max_scaled_err);
            pass = pass && report.pass;
        }
        results.push_back(GradCheckResult{"siren_end_to_end", worst, pass});
    }

    return results;
}

inline bool all_passed(const std::vector<GradCheckResult> &results) {
    for (const GradCheckResult &r : results) {
        if (!r.pass) {
            return false;
        }
    }
    return true;
}

}  // namespace quinr
