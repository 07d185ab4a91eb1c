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

#include "quinr/errors.hpp"

namespace quinr {

enum class ValueDomain : uint16_t {
    U8Image = 0,     // 8-bit image scaled to [0,1]; PSNR peak is 1
    FloatRange = 1,  // raw floating-point samples (e.g. LiDAR ranges)
};

inline const char *to_string(ValueDomain d) {
    return d == ValueDomain::U8Image ? "u8_image" : "float_range";
}

/// H x W x C signal, row-major and channel-interleaved.
struct SignalTensor {
    int h = 0;
    int w = 0;
    int c = 1;
    ValueDomain domain = ValueDomain::U8Image;
    std::vector<double> data;

    size_t pixels() const { return static_cast<size_t>(h) * w; }

    double &at(int row, int col, int chan) {
        return data[(static_cast<size_t>(row) * w + col) * c + chan];
    }
    double at(int row, int col, int chan) const {
        return data[(static_cast<size_t>(row) * w + col) * c + chan];
    }

    void validate() const {
        if (h < 1 || w < 1 || (c != 1 && c != 3)) {
            throw DimensionError("signal dims must have H,W >= 1 and C in {1,3}");
        }
        if (data.size() != pixels() * c) {
            throw DimensionError("signal data length " + std::to_string(data.size()) +
                                 " does not match dims");
        }
        for (double v : data) {
            if (!std::isfinite(v)) {
                throw NumericalError("signal contains non-finite values");
            }
        }
    }
};

/// Per-channel min-max normalization record: raw = normalized*peak + vmin.
struct ChannelNorm {
    double vmin = 0.0;
    double peak = 1.0;
};

/// Normalized grid coordinate along one axis; a degenerate axis maps to 0.
inline double axis_coord(int index, int extent) {
    return extent > 1 ? 2.0 * index / (extent - 1) - 1.0 : 0.0;
}

}  // namespace quinr
