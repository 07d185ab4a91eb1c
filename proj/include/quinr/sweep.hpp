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

// Rate-distortion sweep: trains one model per grid point, serializes it with
// every requested dtype and records whole-file bpp against the PSNR of the
// decoded reconstruction. Emits CSV rows sorted by bpp with a Pareto flag.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "quinr/codec.hpp"
#include "quinr/metrics.hpp"
#include "quinr/quantize.hpp"
#include "quinr/signal.hpp"
#include "quinr/train.hpp"

namespace quinr {

struct GridPoint {
    ModelKind kind = ModelKind::Quinr;
    ModelConfig qconfig;
    SirenConfig sconfig;
};

struct SweepOptions {
    TrainOptions train;
    std::vector<ParamDtype> dtypes{ParamDtype::F32};
    int jobs = 1;
    /// When false the seconds column is written as 0 so that CSV output is
    /// byte-stable across runs (timing is the only nondeterministic field).
    bool timings = true;
    /// Quantization-aware refinement sweeps for fp16 rows; 0 disables.
    int refine_sweeps = 2;
};

struct RdRow {
    ModelKind kind = ModelKind::Quinr;
    int n_qubits = 0;
    int folds = 0;
    int m = 0;  // embed size (quinr) or hidden width (siren)
    int layers = 0;
    int blocks = 0;
    ParamDtype dtype = ParamDtype::F32;
    size_t params = 0;
    size_t bytes = 0;
    double bpp = 0.0;
    double psnr_db = 0.0;
    int steps = 0;
    double seconds = 0.0;
    bool pareto = false;
    std::string error;
};

namespace sweep_detail {

inline RdRow row_shell(const GridPoint &p, const TrainOptions &train) {
    RdRow row;
    row.kind = p.kind;
    if (p.kind == ModelKind::Quinr) {
        row.n_qubits = p.qconfig.n_qubits;
        row.folds = p.qconfig.folds;
        row.m = p.qconfig.embed_size;
        row.layers = p.qconfig.entangling_layers;
        row.blocks = p.qconfig.blocks;
    } else {
        row.m = p.sconfig.hidden_width;
        row.layers = p.sconfig.hidden_layers;
    }
    row.steps = train.steps;
    return row;
}

/// Serializes a trained model once per dtype, refining a copy for fp16.
template <typename Model>
std::vector<std::vector<uint8_t>> encode_streams(const Model &model, const CoordinateDataset &ds,
                                                 const SignalMeta &meta, const SweepOptions &opts) {
    std::vector<std::vector<uint8_t>> streams;
    for (ParamDtype dt : opts.dtypes) {
        if (dt == ParamDtype::F16 && opts.refine_sweeps > 0) {
            Model refined = model;
            refine_for_dtype(refined, ds, dt, opts.refine_sweeps);
            streams.push_back(serialize(refined, meta, ds.norms, dt));
        } else {
            streams.push_back(serialize(model, meta, ds.norms, dt));
        }
    }
    return streams;
}

/// Trains one grid point and expands it into one row per dtype.
inline std::vector<RdRow> run_point(const SignalTensor &signal, const GridPoint &p,
                                    const SweepOptions &opts) {
    std::vector<RdRow> rows;
    RdRow shell = row_shell(p, opts.train);
    try {
        const CoordinateDataset ds = build_dataset(signal);
        const SignalMeta meta{ds.h, ds.w, ds.c, ds.domain};
        double seconds = 0.0;

        std::vector<std::vector<uint8_t>> streams;
        if (p.kind == ModelKind::Quinr) {
            auto [model, report] = encode(signal, p.qconfig, opts.train);
            seconds = report.wall_seconds;
            shell.params = model.params().size();
            streams = encode_streams(model, ds, meta, opts);
        } else {
            auto [model, report] = encode_siren(signal, p.sconfig, opts.train);
            seconds = report.wall_seconds;
            shell.params = model.params().size();
            streams = encode_streams(model, ds, meta, opts);
        }

        for (size_t d = 0; d < opts.dtypes.size(); ++d) {
            RdRow row = shell;
            row.dtype = opts.dtypes[d];
            row.bytes = streams[d].size();
            row.bpp = bpp(row.bytes, signal.pixels());
            row.psnr_db = std::min(psnr(signal, decode(streams[d])), kPsnrSentinel);
            row.seconds = opts.timings ? seconds : 0.0;
            rows.push_back(std::move(row));
        }
    } catch (const Error &e) {
        RdRow row = shell;
        row.dtype = opts.dtypes.empty() ? ParamDtype::F32 : opts.dtypes.front();
        row.psnr_db = std::nan("");
        row.error = e.what();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace sweep_detail

inline std::vector<RdRow> rd_sweep(const SignalTensor &signal, const std::vector<GridPoint> &grid,
                                   const SweepOptions &opts) {
    if (grid.empty()) {
        throw ConfigError("sweep grid is empty");
    }
    std::vector<std::vector<RdRow>> per_point(grid.size());

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < grid.size(); ++i) {
            per_point[i] = sweep_detail::run_point(signal, grid[i], opts);
        }
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
                per_point[i] = sweep_detail::run_point(signal, grid[i], opts);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    std::vector<RdRow> rows;  // grid order first, then sorted by bpp
    for (auto &chunk : per_point) {
        for (auto &row : chunk) {
            rows.push_back(std::move(row));
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const RdRow &a, const RdRow &b) {
        const double ba = a.error.empty() ? a.bpp : std::numeric_limits<double>::max();
        const double bb = b.error.empty() ? b.bpp : std::numeric_limits<double>::max();
        return ba < bb;
    });

    // a row is on the frontier iff no other row has <= bpp and > PSNR
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].error.empty()) {
            continue;
        }
        bool dominated = false;
        for (size_t j = 0; j < rows.size() && !dominated; ++j) {
            if (j == i || !rows[j].error.empty()) {
                continue;
            }
            dominated = rows[j].bpp <= rows[i].bpp && rows[j].psnr_db > rows[i].psnr_db;
        }
        rows[i].pareto = !dominated;
    }
    return rows;
}

inline void write_sweep_csv(std::ostream &out, const SignalTensor &source,
                            const std::string &source_label, const std::vector<RdRow> &rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "# source=%s h=%d w=%d c=%d domain=%s psnr_peak=%.6g\n",
                  source_label.c_str(), source.h, source.w, source.c, to_string(source.domain),
                  psnr_peak(source));
    out << "# quinr rd-sweep v1\n" << buf;
    out << "kind,n_qubits,folds,M,L,B,dtype,params,bytes,bpp,psnr_db,steps,seconds,pareto\n";
    for (const RdRow &row : rows) {
        std::string psnr_text;
        if (std::isnan(row.psnr_db)) {
            psnr_text = "nan";
        } else {
            std::snprintf(buf, sizeof(buf), "%.4f", row.psnr_db);
            psnr_text = buf;
        }
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%d,%d,%s,%zu,%zu,%.6f,%s,%d,%.3f,%d\n",
                      to_string(row.kind), row.n_qubits, row.folds, row.m, row.layers, row.blocks,
                      to_string(row.dtype), row.params, row.bytes, row.bpp, psnr_text.c_str(),
                      row.steps, row.seconds, row.pareto ? 1 : 0);
        out << buf;
        if (!row.error.empty()) {
            out << "# error: " << row.error << "\n";
        }
    }
}

}  // namespace quinr
