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

#include <bit>
#include <cstdint>

namespace quinr {

// IEEE 754 binary16 conversions. Round-to-nearest-even on encode; decode is
// exact. Overflow encodes as infinity, NaN payloads are preserved coarsely.

inline uint16_t float_to_half(float value) {
    const uint32_t bits = std::bit_cast<uint32_t>(value);
    const uint32_t sign = (bits >> 16) & 0x8000u;
    const uint32_t exp_field = (bits >> 23) & 0xFFu;
    uint32_t mant = bits & 0x007FFFFFu;

    if (exp_field == 0xFFu) {  // inf or NaN
        uint32_t payload = mant ? (0x0200u | (mant >> 13)) : 0u;
        return static_cast<uint16_t>(sign | 0x7C00u | payload);
    }

    const int32_t exp = static_cast<int32_t>(exp_field) - 127 + 15;
    if (exp >= 31) {
        return static_cast<uint16_t>(sign | 0x7C00u);
    }
    if (exp <= 0) {
        if (exp < -10) {
            return static_cast<uint16_t>(sign);  // underflows to signed zero
        }
        mant |= 0x00800000u;
        const uint32_t shift = static_cast<uint32_t>(14 - exp);
        uint32_t half_mant = mant >> shift;
        const uint32_t round_bit = 1u << (shift - 1);
        if ((mant & round_bit) && ((mant & (round_bit - 1)) || (half_mant & 1u))) {
            ++half_mant;
        }
        return static_cast<uint16_t>(sign | half_mant);
    }

    uint32_t half = sign | (static_cast<uint32_t>(exp) << 10) | (mant >> 13);
    const uint32_t round_bit = 0x00001000u;
    if ((mant & round_bit) && ((mant & (round_bit - 1)) || (half & 1u))) {
        ++half;  // a mantissa carry bumps the exponent; 0x7BFF + 1 encodes inf
    }
    return static_cast<uint16_t>(half);
}

inline float half_to_float(uint16_t value) {
    const uint32_t sign = static_cast<uint32_t>(value & 0x8000u) << 16;
    const uint32_t exp = (value >> 10) & 0x1Fu;
    const uint32_t mant = value & 0x03FFu;

    uint32_t bits;
    if (exp == 0) {
        if (mant == 0) {
            bits = sign;
        } else {
            uint32_t m = mant;
            int e = -1;
            do {
                m <<= 1;
                ++e;
            } while (!(m & 0x0400u));
            bits = sign | (static_cast<uint32_t>(127 - 15 - e) << 23) | ((m & 0x03FFu) << 13);
        }
    } else if (exp == 31) {
        bits = sign | 0x7F800000u | (mant << 13);
    } else {
        bits = sign | ((exp - 15 + 127) << 23) | (mant << 13);
    }
    return std::bit_cast<float>(bits);
}

}  // namespace quinr
