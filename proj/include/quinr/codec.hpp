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

// The `.qinr` bitstream. Little-endian throughout:
//
//   offset  size  field
//   0       4     magic "QINR"
//   4       1     version (= 1)
//   5       1     model kind (0 = quinr, 1 = siren)
//   6       1     parameter dtype (0 = fp32, 1 = fp16)
//   7       1     reserved (= 0)
//   8       32    16 x u16 config fields: n_in, n_out, n_qubits, folds,
//                 embed_size, entangling_layers, blocks, activation,
//                 sine_form, head_affine, hidden_layers, hidden_width,
//                 height, width, channels, value_domain
//   40      16    2 x u64 seeds: shuffle_seed, init_seed
//   56      4     fp32 omega0
//   60      8*C   per-channel fp32 (vmin, peak) pairs
//   60+8C   4     u32 param_count
//   64+8C   ...   parameter payload, param_count values in dtype
//
// Fields that do not apply to a model kind are written as zero. See
// docs/format.md for the same table.

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "quinr/errors.hpp"
#include "quinr/half.hpp"
#include "quinr/model.hpp"
#include "quinr/signal.hpp"

namespace quinr {

enum class ModelKind : uint8_t { Quinr = 0, Siren = 1 };
enum class ParamDtype : uint8_t { F32 = 0, F16 = 1 };

inline const char *to_string(ModelKind k) {
    return k == ModelKind::Quinr ? "quinr" : "siren";
}
inline const char *to_string(ParamDtype d) {
    return d == ParamDtype::F32 ? "fp32" : "fp16";
}
inline size_t dtype_bytes(ParamDtype d) {
    return d == ParamDtype::F32 ? 4 : 2;
}

struct SignalMeta {
    int h = 0;
    int w = 0;
    int c = 1;
    ValueDomain domain = ValueDomain::U8Image;
};

/// In-memory form of the compressed artifact.
struct EncodedModel {
    ModelKind kind = ModelKind::Quinr;
    ParamDtype dtype = ParamDtype::F32;
    ModelConfig qconfig;   // meaningful when kind == Quinr
    SirenConfig sconfig;   // meaningful when kind == Siren
    SignalMeta meta;
    std::vector<ChannelNorm> norms;
    std::vector<double> params;

    size_t expected_param_count() const {
        return kind == ModelKind::Quinr ? param_count(qconfig) : param_count(sconfig);
    }
};

namespace codec_detail {

constexpr uint8_t kVersion = 1;
constexpr char kMagic[4] = {'Q', 'I', 'N', 'R'};

struct Writer {
    std::vector<uint8_t> bytes;

    void u8(uint8_t v) { bytes.push_back(v); }
    void u16(uint16_t v) {
        bytes.push_back(static_cast<uint8_t>(v & 0xFF));
        bytes.push_back(static_cast<uint8_t>(v >> 8));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
        }
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
        }
    }
    void f32(float v) {
        uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32(bits);
    }
};

struct Reader {
    std::span<const uint8_t> bytes;
    size_t pos = 0;

    void need(size_t n, const char *what) {
        if (pos + n > bytes.size()) {
            throw TruncatedStreamError(std::string("truncated stream reading ") + what +
                                       ": expected " + std::to_string(pos + n) +
                                       " bytes, got " + std::to_string(bytes.size()));
        }
    }
    uint8_t u8(const char *what) {
        need(1, what);
        return bytes[pos++];
    }
    uint16_t u16(const char *what) {
        need(2, what);
        uint16_t v = static_cast<uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        return v;
    }
    uint32_t u32(const char *what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<uint32_t>(bytes[pos + i]) << (8 * i);
        }
        pos += 4;
        return v;
    }
    uint64_t u64(const char *what) {
        need(8, what);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<uint64_t>(bytes[pos + i]) << (8 * i);
        }
        pos += 8;
        return v;
    }
    float f32(const char *what) {
        const uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
};

inline uint16_t checked_u16(int v, const char *what) {
    if (v < 0 || v > 0xFFFF) {
        throw DimensionError(std::string(what) + " does not fit the stream's u16 field");
    }
    return static_cast<uint16_t>(v);
}

}  // namespace codec_detail

inline std::vector<uint8_t> to_bytes(const EncodedModel &em) {
    if (em.params.size() != em.expected_param_count()) {
        throw ParamCountError("parameter vector has " + std::to_string(em.params.size()) +
                              " values, config implies " +
                              std::to_string(em.expected_param_count()));
    }
    if (em.norms.size() != static_cast<size_t>(em.meta.c)) {
        throw DimensionError("norm_meta entries must match channel count");
    }
    const int model_n_out = em.kind == ModelKind::Quinr ? em.qconfig.n_out : em.sconfig.n_out;
    if (model_n_out != em.meta.c) {
        throw DimensionError("model n_out must match channel count");
    }
    using codec_detail::checked_u16;
    codec_detail::Writer w;
    for (char ch : codec_detail::kMagic) {
        w.u8(static_cast<uint8_t>(ch));
    }
    w.u8(codec_detail::kVersion);
    w.u8(static_cast<uint8_t>(em.kind));
    w.u8(static_cast<uint8_t>(em.dtype));
    w.u8(0);  // reserved

    const bool quinr = em.kind == ModelKind::Quinr;
    const ModelConfig &qc = em.qconfig;
    const SirenConfig &sc = em.sconfig;
    w.u16(checked_u16(quinr ? qc.n_in : sc.n_in, "n_in"));
    w.u16(checked_u16(quinr ? qc.n_out : sc.n_out, "n_out"));
    w.u16(checked_u16(quinr ? qc.n_qubits : 0, "n_qubits"));
    w.u16(checked_u16(quinr ? qc.folds : 0, "folds"));
    w.u16(checked_u16(quinr ? qc.embed_size : 0, "embed_size"));
    w.u16(checked_u16(quinr ? qc.entangling_layers : 0, "entangling_layers"));
    w.u16(checked_u16(quinr ? qc.blocks : 0, "blocks"));
    w.u16(quinr ? static_cast<uint16_t>(qc.activation) : 0);
    w.u16(quinr ? static_cast<uint16_t>(qc.sine_form) : 0);
    w.u16(quinr && qc.head_affine ? 1 : 0);
    w.u16(checked_u16(quinr ? 0 : sc.hidden_layers, "hidden_layers"));
    w.u16(checked_u16(quinr ? 0 : sc.hidden_width, "hidden_width"));
    w.u16(checked_u16(em.meta.h, "height"));
    w.u16(checked_u16(em.meta.w, "width"));
    w.u16(checked_u16(em.meta.c, "channels"));
    w.u16(static_cast<uint16_t>(em.meta.domain));

    w.u64(quinr ? qc.shuffle_seed : 0);
    w.u64(quinr ? qc.init_seed : sc.init_seed);
    w.f32(static_cast<float>(quinr ? qc.omega0 : sc.omega0));

    for (const ChannelNorm &n : em.norms) {
        w.f32(static_cast<float>(n.vmin));
        w.f32(static_cast<float>(n.peak));
    }

    w.u32(static_cast<uint32_t>(em.params.size()));
    if (em.dtype == ParamDtype::F32) {
        for (double v : em.params) {
            w.f32(static_cast<float>(v));
        }
    } else {
        for (double v : em.params) {
            w.u16(float_to_half(static_cast<float>(v)));
        }
    }
    return w.bytes;
}

inline EncodedModel from_bytes(std::span<const uint8_t> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), codec_detail::kMagic, 4) != 0) {
        throw BadMagicError("not a .qinr stream (bad magic)");
    }
    codec_detail::Reader r{bytes, 4};
    const uint8_t version = r.u8("version");
    if (version != codec_detail::kVersion) {
        throw BadVersionError("unsupported .qinr version " + std::to_string(version) +
                              " (expected " + std::to_string(codec_detail::kVersion) + ")");
    }
    const uint8_t kind_raw = r.u8("model kind");
    if (kind_raw > 1) {
        throw CodecError("unknown model kind " + std::to_string(kind_raw));
    }
    const uint8_t dtype_raw = r.u8("dtype");
    if (dtype_raw > 1) {
        throw CodecError("unknown parameter dtype " + std::to_string(dtype_raw));
    }
    r.u8("reserved byte");

    EncodedModel em;
    em.kind = static_cast<ModelKind>(kind_raw);
    em.dtype = static_cast<ParamDtype>(dtype_raw);

    uint16_t fields[16];
    static const char *kFieldNames[16] = {
        "n_in", "n_out", "n_qubits", "folds", "embed_size", "entangling_layers",
        "blocks", "activation", "sine_form", "head_affine", "hidden_layers",
        "hidden_width", "height", "width", "channels", "value_domain"};
    for (int i = 0; i < 16; ++i) {
        fields[i] = r.u16(kFieldNames[i]);
    }
    const uint64_t shuffle_seed = r.u64("shuffle_seed");
    const uint64_t init_seed = r.u64("init_seed");
    const float omega0 = r.f32("omega0");

    if (fields[7] > 3) {
        throw CodecError("unknown activation id " + std::to_string(fields[7]));
    }
    if (fields[8] > 1) {
        throw CodecError("unknown sine form id " + std::to_string(fields[8]));
    }
    if (fields[15] > 1) {
        throw CodecError("unknown value domain id " + std::to_string(fields[15]));
    }

    if (em.kind == ModelKind::Quinr) {
        em.qconfig.n_in = fields[0];
        em.qconfig.n_out = fields[1];
        em.qconfig.n_qubits = fields[2];
        em.qconfig.folds = fields[3];
        em.qconfig.embed_size = fields[4];
        em.qconfig.entangling_layers = fields[5];
        em.qconfig.blocks = fields[6];
        em.qconfig.activation = static_cast<Activation>(fields[7]);
        em.qconfig.sine_form = static_cast<SineForm>(fields[8]);
        em.qconfig.head_affine = fields[9] != 0;
        em.qconfig.shuffle_seed = shuffle_seed;
        em.qconfig.init_seed = init_seed;
        em.qconfig.omega0 = omega0;
        em.qconfig.validate();
    } else {
        em.sconfig.n_in = fields[0];
        em.sconfig.n_out = fields[1];
        em.sconfig.hidden_layers = fields[10];
        em.sconfig.hidden_width = fields[11];
        em.sconfig.init_seed = init_seed;
        em.sconfig.omega0 = omega0;
        em.sconfig.validate();
    }
    em.meta.h = fields[12];
    em.meta.w = fields[13];
    em.meta.c = fields[14];
    em.meta.domain = static_cast<ValueDomain>(fields[15]);
    if (em.meta.h < 1 || em.meta.w < 1 || (em.meta.c != 1 && em.meta.c != 3)) {
        throw CodecError("invalid signal dims in stream");
    }
    const int n_out = em.kind == ModelKind::Quinr ? em.qconfig.n_out : em.sconfig.n_out;
    if (n_out != em.meta.c) {
        throw CodecError("stream n_out (" + std::to_string(n_out) +
                         ") does not match channel count (" + std::to_string(em.meta.c) + ")");
    }

    em.norms.resize(static_cast<size_t>(em.meta.c));
    for (ChannelNorm &n : em.norms) {
        n.vmin = r.f32("norm vmin");
        n.peak = r.f32("norm peak");
    }

    const uint32_t stored_count = r.u32("param_count");
    const size_t expected = em.expected_param_count();
    if (stored_count != expected) {
        throw ParamCountError("stream declares " + std::to_string(stored_count) +
                              " parameters, config implies " + std::to_string(expected));
    }

    em.params.resize(stored_count);
    if (em.dtype == ParamDtype::F32) {
        for (uint32_t i = 0; i < stored_count; ++i) {
            em.params[i] = static_cast<double>(r.f32("parameter payload"));
        }
    } else {
        for (uint32_t i = 0; i < stored_count; ++i) {
            em.params[i] = static_cast<double>(half_to_float(r.u16("parameter payload")));
        }
    }
    if (r.pos != bytes.size()) {
        throw CodecError("trailing bytes after payload: stream has " +
                         std::to_string(bytes.size()) + " bytes, format needs " +
                         std::to_string(r.pos));
    }
    return em;
}

inline EncodedModel make_encoded(const QuinrModel &model, const SignalMeta &meta,
                                 std::span<const ChannelNorm> norms, ParamDtype dtype) {
    EncodedModel em;
    em.kind = ModelKind::Quinr;
    em.dtype = dtype;
    em.qconfig = model.config();
    em.meta = meta;
    em.norms.assign(norms.begin(), norms.end());
    em.params.assign(model.params().values().begin(), model.params().values().end());
    return em;
}

inline EncodedModel make_encoded(const SirenModel &model, const SignalMeta &meta,
                                 std::span<const ChannelNorm> norms, ParamDtype dtype) {
    EncodedModel em;
    em.kind = ModelKind::Siren;
    em.dtype = dtype;
    em.sconfig = model.config();
    em.meta = meta;
    em.norms.assign(norms.begin(), norms.end());
    em.params.assign(model.params().values().begin(), model.params().values().end());
    return em;
}

template <typename Model>
std::vector<uint8_t> serialize(const Model &model, const SignalMeta &meta,
                               std::span<const ChannelNorm> norms, ParamDtype dtype) {
    return to_bytes(make_encoded(model, meta, norms, dtype));
}

/// Rebuilds the model held by an EncodedModel, fp16 values widened to double.
inline std::variant<QuinrModel, SirenModel> instantiate(const EncodedModel &em) {
    if (em.kind == ModelKind::Quinr) {
        return QuinrModel(em.qconfig, em.params);
    }
    return SirenModel(em.sconfig, em.params);
}

/// Full-grid reconstruction at the stored resolution, denormalized.
inline SignalTensor decode(const EncodedModel &em) {
    SignalTensor out;
    out.h = em.meta.h;
    out.w = em.meta.w;
    out.c = em.meta.c;
    out.domain = em.meta.domain;
    out.data.resize(out.pixels() * out.c);

    auto model = instantiate(em);
    std::visit(
        [&](const auto &m) {
            typename std::decay_t<decltype(m)>::Tape tape;
            double coord[2];
            size_t i = 0;
            for (int r = 0; r < out.h; ++r) {
                for (int col = 0; col < out.w; ++col, ++i) {
                    coord[0] = axis_coord(col, out.w);
                    coord[1] = axis_coord(r, out.h);
                    const auto y = m.forward(std::span<const double>(coord, 2), tape);
                    for (int chan = 0; chan < out.c; ++chan) {
                        const ChannelNorm &n = em.norms[static_cast<size_t>(chan)];
                        out.data[i * out.c + chan] = y[static_cast<size_t>(chan)] * n.peak + n.vmin;
                    }
                }
            }
        },
        model);
    return out;
}

inline SignalTensor decode(std::span<const uint8_t> bytes) {
    return decode(from_bytes(bytes));
}

/// Whole-file bits per pixel, header included.
inline double bpp(size_t encoded_byte_len, size_t pixels) {
    if (pixels == 0) {
        throw DimensionError("bpp with zero pixels");
    }
    return 8.0 * static_cast<double>(encoded_byte_len) / static_cast<double>(pixels);
}

}  // namespace quinr
