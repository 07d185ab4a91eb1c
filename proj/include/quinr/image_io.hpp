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

// Signal ingestion: 8-bit grayscale/RGB PNG via libpng, and raw `.f32` range
// images (little-endian fp32, row-major, one channel).

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "quinr/errors.hpp"
#include "quinr/signal.hpp"

namespace quinr {

namespace io_detail {

struct FileCloser {
    void operator()(std::FILE *f) const {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace io_detail

/// Loads an 8-bit grayscale or RGB PNG, values scaled to [0,1] by /255.
inline SignalTensor load_image(const std::string &path) {
    io_detail::FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) {
        throw IoError("cannot open image '" + path + "'");
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng initialization failed");
    }

    std::vector<uint8_t> pixels;
    std::vector<png_bytep> rows;
    // volatile: these live across the setjmp below
    volatile int width = 0, height = 0, channels = 0;
    std::string error;

    // No C++ objects are constructed between setjmp and a potential longjmp.
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode PNG '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth != 8) {
        error = "unsupported PNG bit depth " + std::to_string(bit_depth) +
                " in '" + path + "' (only 8-bit is supported)";
    } else if (color_type == PNG_COLOR_TYPE_GRAY) {
        channels = 1;
    } else if (color_type == PNG_COLOR_TYPE_RGB) {
        channels = 3;
    } else {
        error = "unsupported PNG color type in '" + path +
                "' (only 8-bit grayscale or RGB, no palette/alpha)";
    }
    if (!error.empty()) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(error);
    }

    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    pixels.resize(static_cast<size_t>(height) * width * channels);
    rows.resize(static_cast<size_t>(height));
    for (int r = 0; r < height; ++r) {
        rows[static_cast<size_t>(r)] = pixels.data() + static_cast<size_t>(r) * width * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    SignalTensor t;
    t.h = height;
    t.w = width;
    t.c = channels;
    t.domain = ValueDomain::U8Image;
    t.data.resize(pixels.size());
    for (size_t i = 0; i < pixels.size(); ++i) {
        t.data[i] = static_cast<double>(pixels[i]) / 255.0;
    }
    return t;
}

/// Writes an 8-bit PNG; values are clamped to [0,1] and rounded to bytes.
inline void save_image(const std::string &path, const SignalTensor &signal) {
    signal.validate();

    std::vector<uint8_t> pixels(signal.data.size());
    for (size_t i = 0; i < signal.data.size(); ++i) {
        const double v = std::min(1.0, std::max(0.0, signal.data[i]));
        pixels[i] = static_cast<uint8_t>(std::lround(v * 255.0));
    }
    std::vector<png_bytep> rows(static_cast<size_t>(signal.h));
    for (int r = 0; r < signal.h; ++r) {
        rows[static_cast<size_t>(r)] =
            pixels.data() + static_cast<size_t>(r) * signal.w * signal.c;
    }

    io_detail::FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) {
        throw IoError("cannot write image '" + path + "'");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode PNG '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(signal.w),
                 static_cast<png_uint_32>(signal.h), 8,
                 signal.c == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// Loads a raw fp32 little-endian row-major range image. No rescaling here;
/// normalization happens when the dataset is built.
inline SignalTensor load_range_image(const std::string &path, int h, int w) {
    if (h < 1 || w < 1) {
        throw DimensionError("range image dims must be >= 1");
    }
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw IoError("cannot open range image '" + path + "'");
    }
    const auto file_size = static_cast<size_t>(in.tellg());
    const size_t expected = static_cast<size_t>(h) * w * 4;
    if (file_size != expected) {
        throw IoError("range image '" + path + "': expected " + std::to_string(expected) +
                      " bytes for " + std::to_string(h) + "x" + std::to_string(w) +
                      ", got " + std::to_string(file_size));
    }
    in.seekg(0);
    std::vector<uint8_t> raw(file_size);
    in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(file_size));
    if (!in) {
        throw IoError("short read on range image '" + path + "'");
    }

    SignalTensor t;
    t.h = h;
    t.w = w;
    t.c = 1;
    t.domain = ValueDomain::FloatRange;
    t.data.resize(static_cast<size_t>(h) * w);
    for (size_t i = 0; i < t.data.size(); ++i) {
        uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) {
            bits |= static_cast<uint32_t>(raw[i * 4 + b]) << (8 * b);
        }
        float v;
        std::memcpy(&v, &bits, 4);
        if (!std::isfinite(v)) {
            throw IoError("range image '" + path + "' contains a non-finite value at index " +
                          std::to_string(i));
        }
        t.data[i] = static_cast<double>(v);
    }
    return t;
}

inline void save_range_image(const std::string &path, const SignalTensor &signal) {
    signal.validate();
    if (signal.c != 1) {
        throw DimensionError("range images are single-channel");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write range image '" + path + "'");
    }
    for (double d : signal.data) {
        const float v = static_cast<float>(d);
        uint32_t bits;
        std::memcpy(&bits, &v, 4);
        uint8_t le[4];
        for (int b = 0; b < 4; ++b) {
            le[b] = static_cast<uint8_t>(bits >> (8 * b));
        }
        out.write(reinterpret_cast<const char *>(le), 4);
    }
    if (!out) {
        throw IoError("short write on range image '" + path + "'");
    }
}

}  // namespace quinr
