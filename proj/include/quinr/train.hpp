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

// Coordinate dataset construction and the encoding loop: minibatch Adam on
// the MSE between predicted and normalized signal values. Fully
// deterministic for a given seed; the best full-grid checkpoint is returned
// rather than the last step.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quinr/adam.hpp"
#include "quinr/autodiff.hpp"
#include "quinr/errors.hpp"
#include "quinr/model.hpp"
#include "quinr/rng.hpp"
#include "quinr/signal.hpp"

namespace quinr {

/// The full pixel grid as (coordinate, value) rows in row-major pixel order.
/// Coordinates live in [-1,1]^2 as (x=column, y=row); values are per-channel
/// min-max normalized to [0,1].
struct CoordinateDataset {
    int h = 0;
    int w = 0;
    int c = 1;
    ValueDomain domain = ValueDomain::U8Image;
    std::vector<double> coords;  // size() * 2
    std::vector<double> values;  // size() * c
    std::vector<ChannelNorm> norms;

    size_t size() const { return static_cast<size_t>(h) * w; }

    std::span<const double> coord(size_t i) const {
        return std::span<const double>(coords).subspan(i * 2, 2);
    }
    std::span<const double> value(size_t i) const {
        return std::span<const double>(values).subspan(i * c, static_cast<size_t>(c));
    }
};

inline CoordinateDataset build_dataset(const SignalTensor &signal) {
    signal.validate();
    CoordinateDataset ds;
    ds.h = signal.h;
    ds.w = signal.w;
    ds.c = signal.c;
    ds.domain = signal.domain;
    ds.norms.resize(static_cast<size_t>(signal.c));

    for (int chan = 0; chan < signal.c; ++chan) {
        double lo = signal.at(0, 0, chan);
        double hi = lo;
        for (int r = 0; r < signal.h; ++r) {
            for (int col = 0; col < signal.w; ++col) {
                const double v = signal.at(r, col, chan);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        // constant channel: clamp the span to 1 so normalization stays defined
        const double peak = hi > lo ? hi - lo : 1.0;
        ds.norms[static_cast<size_t>(chan)] = ChannelNorm{lo, peak};
    }

    ds.coords.resize(ds.size() * 2);
    ds.values.resize(ds.size() * signal.c);
    size_t i = 0;
    for (int r = 0; r < signal.h; ++r) {
        for (int col = 0; col < signal.w; ++col, ++i) {
            ds.coords[i * 2 + 0] = axis_coord(col, signal.w);
            ds.coords[i * 2 + 1] = axis_coord(r, signal.h);
            for (int chan = 0; chan < signal.c; ++chan) {
                const ChannelNorm &n = ds.norms[static_cast<size_t>(chan)];
                ds.values[i * signal.c + chan] = (signal.at(r, col, chan) - n.vmin) / n.peak;
            }
        }
    }
    return ds;
}

/// Denormalizes the dataset back to a signal; exact inverse of build_dataset.
inline SignalTensor reconstruct_signal(const CoordinateDataset &ds) {
    SignalTensor out;
    out.h = ds.h;
    out.w = ds.w;
    out.c = ds.c;
    out.domain = ds.domain;
    out.data.resize(ds.size() * ds.c);
    for (size_t i = 0; i < ds.size(); ++i) {
        for (int chan = 0; chan < ds.c; ++chan) {
            const ChannelNorm &n = ds.norms[static_cast<size_t>(chan)];
            out.data[i * ds.c + chan] = ds.values[i * ds.c + chan] * n.peak + n.vmin;
        }
    }
    return out;
}

struct TrainOptions {
    int steps = 10000;
    double lr = 1e-3;
    int batch_size = 1024;
    uint64_t seed = 0;
    /// Full-grid evaluation / checkpoint / progress cadence; the final step
    /// is always evaluated. <= 0 disables intermediate reporting.
    int report_interval = 100;
    bool verbose = false;
};

struct TrainReport {
    struct Point {
        int step;
        double loss;  // minibatch loss at the step
        double mse;   // full-grid MSE
        double psnr;  // dB, +inf for exact reconstruction
    };
    std::vector<Point> curve;
    double final_mse = 0.0;
    double final_psnr = 0.0;
    int steps = 0;
    double wall_seconds = 0.0;
    uint64_t seed = 0;
};

/// Full-grid (MSE, PSNR) in the normalized domain (peak = 1).
template <typename Model>
std::pair<double, double> evaluate(const Model &model, const CoordinateDataset &ds) {
    typename Model::Tape tape;
    double acc = 0.0;
    for (size_t i = 0; i < ds.size(); ++i) {
        const auto y = model.forward(ds.coord(i), tape);
        const auto target = ds.value(i);
        for (size_t chan = 0; chan < y.size(); ++chan) {
            const double d = y[chan] - target[chan];
            acc += d * d;
        }
    }
    const double mse = acc / (static_cast<double>(ds.size()) * ds.c);
    const double psnr = mse > 0.0 ? 10.0 * std::log10(1.0 / mse)
                                  : std::numeric_limits<double>::infinity();
    return {mse, psnr};
}

template <typename Model>
TrainReport train_model(Model &model, const CoordinateDataset &ds, const TrainOptions &opts) {
    if (opts.steps < 1) {
        throw ConfigError("steps must be >= 1");
    }
    if (opts.batch_size < 1) {
        throw ConfigError("batch_size must be >= 1");
    }
    const size_t n = ds.size();
    const size_t batch = std::min<size_t>(static_cast<size_t>(opts.batch_size), n);

    ParamStore &params = model.params();
    AdamOptimizer opt(params.size(), AdamOptions{.lr = opts.lr});
    SplitMix64 rng(opts.seed);
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    size_t pos = n;  // forces a shuffle before the first batch

    typename Model::Tape tape;
    std::vector<double> g_y(static_cast<size_t>(ds.c));

    TrainReport report;
    report.seed = opts.seed;
    report.steps = opts.steps;
    double best_mse = std::numeric_limits<double>::infinity();
    double best_psnr = 0.0;
    std::vector<double> best_values(params.values().begin(), params.values().end());
    bool have_checkpoint = false;

    const auto t0 = std::chrono::steady_clock::now();
    for (int step = 1; step <= opts.steps; ++step) {
        if (pos + batch > n) {
            fisher_yates(order, rng);
            pos = 0;
        }
        double batch_loss = 0.0;
        for (size_t k = pos; k < pos + batch; ++k) {
            const size_t i = order[k];
            const auto y = model.forward(ds.coord(i), tape);
            const auto target = ds.value(i);
            batch_loss += mse_loss(y, target);
            const double scale = 2.0 / (static_cast<double>(ds.c) * static_cast<double>(batch));
            for (size_t chan = 0; chan < y.size(); ++chan) {
                g_y[chan] = scale * (y[chan] - target[chan]);
            }
            model.backward(g_y, tape);
        }
        pos += batch;
        batch_loss /= static_cast<double>(batch);
        if (!std::isfinite(batch_loss)) {
            throw NumericalError("non-finite loss at step " + std::to_string(step));
        }
        opt.step(params);

        const bool report_now =
            (opts.report_interval > 0 && step % opts.report_interval == 0) || step == opts.steps;
        if (report_now) {
            const auto [mse, psnr] = evaluate(model, ds);
            if (!have_checkpoint || mse < best_mse) {
                best_mse = mse;
                best_psnr = psnr;
                best_values.assign(params.values().begin(), params.values().end());
                have_checkpoint = true;
            }
            report.curve.push_back(TrainReport::Point{step, batch_loss, mse, psnr});
            if (opts.verbose) {
                std::fprintf(stderr, "step=%d loss=%.8g psnr=%.4f\n", step, batch_loss, psnr);
            }
        }
    }
    const auto t1 = std::chrono::steady_clock::now();

    std::copy(best_values.begin(), best_values.end(), params.values().begin());
    report.final_mse = best_mse;
    report.final_psnr = best_psnr;
    report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return report;
}

inline std::pair<QuinrModel, TrainReport> encode(const SignalTensor &signal,
                                                 const ModelConfig &cfg,
                                                 const TrainOptions &opts) {
    const CoordinateDataset ds = build_dataset(signal);
    if (cfg.n_in != 2) {
        throw ConfigError("image encoding requires n_in = 2");
    }
    if (cfg.n_out != ds.c) {
        throw ConfigError("n_out (" + std::to_string(cfg.n_out) +
                          ") must match signal channels (" + std::to_string(ds.c) + ")");
    }
    QuinrModel model(cfg);
    TrainReport report = train_model(model, ds, opts);
    return {std::move(model), std::move(report)};
}

inline std::pair<SirenModel, TrainReport> encode_siren(const SignalTensor &signal,
                                                       const SirenConfig &cfg,
                                                       const TrainOptions &opts) {
    const CoordinateDataset ds = build_dataset(signal);
    if (cfg.n_in != 2) {
        throw ConfigError("image encoding requires n_in = 2");
    }
    if (cfg.n_out != ds.c) {
        throw ConfigError("n_out must match signal channels");
    }
    SirenModel model(cfg);
    TrainReport report = train_model(model, ds, opts);
    return {std::move(model), std::move(report)};
}

}  // namespace quinr
