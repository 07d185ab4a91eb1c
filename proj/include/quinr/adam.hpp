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
#include <cstdint>
#include <string>
#include <vector>

#include "quinr/autodiff.hpp"
#include "quinr/errors.hpp"

namespace quinr {

struct AdamOptions {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adam with bias correction. Moment buffers persist across steps; gradients
/// are consumed (zeroed) by each step.
class AdamOptimizer {
  public:
    AdamOptimizer(size_t n_params, AdamOptions opts = {})
        : opts_(opts), m_(n_params, 0.0), v_(n_params, 0.0) {}

    int64_t step_count() const { return t_; }

    void step(ParamStore &params) {
        if (params.size() != m_.size()) {
            throw DimensionError("optimizer state sized for " + std::to_string(m_.size()) +
                                 " parameters, store has " + std::to_string(params.size()));
        }
        ++t_;
        const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
        auto values = params.values();
        auto grads = params.grads();
        for (size_t i = 0; i < values.size(); ++i) {
            const double g = grads[i];
            if (!std::isfinite(g)) {
                throw NumericalError("non-finite gradient in parameter slice '" +
                                     params.slice_containing(i) + "' at step " +
                                     std::to_string(t_));
            }
            m_[i] = opts_.beta1 * m_[i] + (1.0 - opts_.beta1) * g;
            v_[i] = opts_.beta2 * v_[i] + (1.0 - opts_.beta2) * g * g;
            values[i] -= opts_.lr * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + opts_.eps);
            grads[i] = 0.0;
        }
    }

  private:
    AdamOptions opts_;
    std::vector<double> m_, v_;
    int64_t t_ = 0;
};

}  // namespace quinr
