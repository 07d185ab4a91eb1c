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

#include <cmath>
#include <vector>

#include "quinr/model.hpp"
#include "quinr/qsim.hpp"
#include "quinr/rng.hpp"
#include "quinr/signal.hpp"

namespace quinr::testing {

inline CircuitProgram random_circuit(SplitMix64 &rng, int n_qubits, int n_gates,
                                     bool allow_literals = false) {
    CircuitProgram prog;
    prog.n_qubits = n_qubits;
    prog.n_angles = n_gates;
    for (int i = 0; i < n_gates; ++i) {
        const int kind = static_cast<int>(rng.next_below(n_qubits >= 2 ? 3 : 2));
        const int target = static_cast<int>(rng.next_below(static_cast<uint64_t>(n_qubits)));
        const bool literal = allow_literals && rng.next_below(4) == 0;
        const double angle = rng.uniform(0.0, 6.283185307179586);
        if (kind == 2) {
            int control = static_cast<int>(rng.next_below(static_cast<uint64_t>(n_qubits)));
            if (control == target) {
                control = (control + 1) % n_qubits;
            }
            prog.ops.push_back(literal ? GateOp::crz_literal(control, target, angle)
                                       : GateOp::crz(control, target, i));
        } else if (kind == 1) {
            prog.ops.push_back(literal ? GateOp::rz_literal(target, angle) : GateOp::rz(target, i));
        } else {
            prog.ops.push_back(literal ? GateOp::rx_literal(target, angle) : GateOp::rx(target, i));
        }
    }
    prog.validate();
    return prog;
}

inline std::vector<double> random_angles(SplitMix64 &rng, size_t n) {
    std::vector<double> angles(n);
    for (double &a : angles) {
        a = rng.uniform(0.0, 6.283185307179586);
    }
    return angles;
}

/// Random valid hybrid-model config with small circuit sizes.
inline ModelConfig random_config(SplitMix64 &rng) {
    ModelConfig cfg;
    cfg.n_qubits = 1 + static_cast<int>(rng.next_below(4));  // 1..4
    cfg.folds = 1 + static_cast<int>(rng.next_below(3));
    cfg.embed_size = cfg.n_qubits * cfg.folds;
    cfg.entangling_layers = 1 + static_cast<int>(rng.next_below(2));
    cfg.blocks = 1 + static_cast<int>(rng.next_below(3));
    const int max_out = std::min(3, 1 << cfg.n_qubits);
    cfg.n_out = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(max_out)));
    if (cfg.n_out == 2) {
        cfg.n_out = 1;  // signals carry 1 or 3 channels
    }
    cfg.head_affine = rng.next_below(2) == 0;
    cfg.shuffle_seed = rng.next_u64();
    cfg.init_seed = rng.next_u64();
    return cfg;
}

/// 16x16 grayscale ramp, values (r + c) / 30 spanning [0, 1].
inline SignalTensor gradient_image(int h = 16, int w = 16) {
    SignalTensor t;
    t.h = h;
    t.w = w;
    t.c = 1;
    t.domain = ValueDomain::U8Image;
    t.data.resize(static_cast<size_t>(h) * w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            t.data[static_cast<size_t>(r) * w + c] =
                static_cast<double>(r + c) / static_cast<double>(h + w - 2);
        }
    }
    return t;
}

inline SignalTensor random_image(SplitMix64 &rng, int h, int w, int c,
                                 ValueDomain domain = ValueDomain::U8Image) {
    SignalTensor t;
    t.h = h;
    t.w = w;
    t.c = c;
    t.domain = domain;
    t.data.resize(static_cast<size_t>(h) * w * c);
    for (double &v : t.data) {
        if (domain == ValueDomain::U8Image) {
            v = static_cast<double>(rng.next_below(256)) / 255.0;
        } else {
            v = rng.uniform(0.5, 80.0);
        }
    }
    return t;
}

}  // namespace quinr::testing
