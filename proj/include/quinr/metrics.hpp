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
#include <string>

#include "quinr/errors.hpp"
#include "quinr/signal.hpp"

namespace quinr {

/// PSNR value reported when the reconstruction is exact.
inline constexpr double kPsnrSentinel = 99.0;

inline void check_same_shape(const SignalTensor &a, const SignalTensor &b) {
    if (a.h != b.h || a.w != b.w || a.c != b.c) {
        throw DimensionError("signal dims differ: " + std::to_string(a.h) + "x" +
                             std::to_string(a.w) + "x" + std::to_string(a.c) + " vs " +
                             std::to_string(b.h) + "x" + std::to_string(b.w) + "x" +
                             std::to_string(b.c));
    }
    if (a.domain != b.domain) {
        throw DimensionError("signal value domains differ");
    }
}

inline double mse(const SignalTensor &a, const SignalTensor &b) {
    check_same_shape(a, b);
    double acc = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.data.size());
}

/// PSNR peak of the reference signal: 1 for u8 images (normalized domain),
/// the observed dynamic range for floating-point range images.
inline double psnr_peak(const SignalTensor &reference) {
    if (reference.domain == ValueDomain::U8Image) {
        return 1.0;
    }
    double lo = reference.data[0];
    double hi = lo;
    for (double v : reference.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // constant reference: fall back to a unit peak so PSNR stays defined
    return hi > lo ? hi - lo : 1.0;
}

/// 10 log10(peak^2 / MSE) against reference `a`; 99.0 sentinel when exact.
inline double psnr(const SignalTensor &a, const SignalTensor &b) {
    const double err = mse(a, b);
    if (err <= 0.0) {
        return kPsnrSentinel;
    }
    const double peak = psnr_peak(a);
    return 10.0 * std::log10(peak * peak / err);
}

}  // namespace quinr
