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

#include <cmath>
#include <cstring>

#include "doctest.h"
#include "quinr/codec.hpp"
#include "quinr/half.hpp"
#include "quinr/metrics.hpp"
#include "quinr/quantize.hpp"
#include "support/test_helpers.hpp"

using namespace quinr;

namespace {

EncodedModel sample_encoded(SplitMix64 &rng, ParamDtype dtype) {
    const ModelConfig cfg = quinr::testing::random_config(rng);
    QuinrModel model(cfg);
    const SignalMeta meta{6, 5, cfg.n_out, ValueDomain::U8Image};
    std::vector<ChannelNorm> norms(static_cast<size_t>(cfg.n_out), ChannelNorm{0.0, 1.0});
    return make_encoded(model, meta, norms, dtype);
}

}  // namespace

TEST_SUITE_BEGIN("codec");

TEST_CASE("half-precision conversions round-trip exactly representable values") {
    SplitMix64 rng(1);
    for (int rep = 0; rep < 1000; ++rep) {
        const uint16_t h = static_cast<uint16_t>(rng.next_below(0x7C00));  // finite halves
        CHECK(float_to_half(half_to_float(h)) == h);
    }
    CHECK(half_to_float(float_to_half(1.0f)) == 1.0f);
    CHECK(half_to_float(float_to_half(-0.5f)) == -0.5f);
    CHECK(std::abs(half_to_float(float_to_half(0.1f)) - 0.1f) < 1e-4f);
    CHECK(std::isinf(half_to_float(float_to_half(1e9f))));
}

TEST_CASE("header layout: 8 bytes before the config block") {
    SplitMix64 rng(2);
    const auto em = sample_encoded(rng, ParamDtype::F32);
    const auto bytes = to_bytes(em);
    REQUIRE(bytes.size() > 8);
    CHECK(bytes[0] == 'Q');
    CHECK(bytes[1] == 'I');
    CHECK(bytes[2] == 'N');
    CHECK(bytes[3] == 'R');
    CHECK(bytes[4] == 1);  // version
    CHECK(bytes[5] == 0);  // quinr
    CHECK(bytes[6] == 0);  // fp32
    CHECK(bytes[7] == 0);  // reserved
    // first config field (n_in = 2) starts at offset 8, little-endian
    CHECK(bytes[8] == 2);
    CHECK(bytes[9] == 0);
}

TEST_CASE("stream length accounting") {
    SplitMix64 rng(3);
    const auto em32 = sample_encoded(rng, ParamDtype::F32);
    const auto b32 = to_bytes(em32);
    const size_t c = static_cast<size_t>(em32.meta.c);
    CHECK(b32.size() == 8 + 32 + 16 + 4 + 8 * c + 4 + 4 * em32.params.size());

    EncodedModel em16 = em32;
    em16.dtype = ParamDtype::F16;
    const auto b16 = to_bytes(em16);
    CHECK(b16.size() == 8 + 32 + 16 + 4 + 8 * c + 4 + 2 * em16.params.size());
}

TEST_CASE("round trip is bit-identical for random models and both dtypes") {
    SplitMix64 rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        const ParamDtype dtype = rep % 2 ? ParamDtype::F16 : ParamDtype::F32;
        EncodedModel em;
        if (rep % 3 == 0) {
            SirenConfig cfg;
            cfg.hidden_layers = 1 + static_cast<int>(rng.next_below(3));
            cfg.hidden_width = 2 + static_cast<int>(rng.next_below(16));
            cfg.init_seed = rng.next_u64();
            const SirenModel model(cfg);
            const SignalMeta meta{4, 4, 1, ValueDomain::FloatRange};
            const std::vector<ChannelNorm> norms{{1.5, 7.25}};
            em = make_encoded(model, meta, norms, dtype);
        } else {
            em = sample_encoded(rng, dtype);
        }
        const auto bytes = to_bytes(em);
        const EncodedModel back = from_bytes(bytes);
        const auto bytes2 = to_bytes(back);
        REQUIRE(bytes.size() == bytes2.size());
        CHECK(std::memcmp(bytes.data(), bytes2.data(), bytes.size()) == 0);
        CHECK(back.kind == em.kind);
        CHECK(back.dtype == em.dtype);
        CHECK(back.meta.h == em.meta.h);
        CHECK(back.meta.w == em.meta.w);
        CHECK(back.meta.c == em.meta.c);
    }
}

TEST_CASE("fp32 payloads preserve doubles that came from floats exactly") {
    SplitMix64 rng(5);
    EncodedModel em = sample_encoded(rng, ParamDtype::F32);
    const EncodedModel back = from_bytes(to_bytes(em));
    for (size_t i = 0; i < em.params.size(); ++i) {
        CHECK(static_cast<float>(em.params[i]) == static_cast<float>(back.params[i]));
    }
}

TEST_CASE("malformed streams raise the specific error types") {
    SplitMix64 rng(6);
    const auto em = sample_encoded(rng, ParamDtype::F32);
    auto bytes = to_bytes(em);

    SUBCASE("corrupted magic") {
        bytes[0] = 'X';
        CHECK_THROWS_AS(from_bytes(bytes), BadMagicError);
    }
    SUBCASE("short buffer fails the magic check") {
        const std::vector<uint8_t> tiny(bytes.begin(), bytes.begin() + 2);
        CHECK_THROWS_AS(from_bytes(tiny), BadMagicError);
    }
    SUBCASE("unsupported version") {
        bytes[4] = 2;
        CHECK_THROWS_AS(from_bytes(bytes), BadVersionError);
    }
    SUBCASE("truncated payload names expected and actual sizes") {
        const std::vector<uint8_t> cut(bytes.begin(), bytes.end() - 3);
        CHECK_THROWS_WITH_AS(from_bytes(cut), doctest::Contains("expected"),
                             TruncatedStreamError);
    }
    SUBCASE("param count mismatch") {
        // grow the declared count by one; offset = 8 + 32 + 16 + 4 + 8c
        const size_t count_offset = 60 + 8 * static_cast<size_t>(em.meta.c);
        uint32_t count = 0;
        for (int i = 0; i < 4; ++i) {
            count |= static_cast<uint32_t>(bytes[count_offset + i]) << (8 * i);
        }
        ++count;
        for (int i = 0; i < 4; ++i) {
            bytes[count_offset + i] = static_cast<uint8_t>(count >> (8 * i));
        }
        CHECK_THROWS_AS(from_bytes(bytes), ParamCountError);
    }
    SUBCASE("trailing bytes are rejected") {
        bytes.push_back(0);
        CHECK_THROWS_AS(from_bytes(bytes), CodecError);
    }
    SUBCASE("n_out that disagrees with the channel count is rejected") {
        // craft a stream whose config says 3 outputs over a 1-channel signal
        ModelConfig cfg;
        cfg.n_qubits = 2;
        cfg.folds = 1;
        cfg.embed_size = 2;
        cfg.entangling_layers = 1;
        cfg.blocks = 1;
        const QuinrModel model(cfg);
        const std::vector<ChannelNorm> norms{{0.0, 1.0}};
        auto stream = serialize(model, SignalMeta{4, 4, 1, ValueDomain::U8Image}, norms,
                                ParamDtype::F32);
        stream[10] = 3;  // n_out field, u16 at offset 8 + 2
        CHECK_THROWS_WITH_AS(from_bytes(stream), doctest::Contains("channel count"), CodecError);
    }
}

TEST_CASE("decode reproduces the direct forward pass exactly") {
    SplitMix64 rng(7);
    const ModelConfig cfg = quinr::testing::random_config(rng);
    QuinrModel model(cfg);
    const SignalMeta meta{5, 4, cfg.n_out, ValueDomain::U8Image};
    std::vector<ChannelNorm> norms;
    for (int c = 0; c < cfg.n_out; ++c) {
        norms.push_back(ChannelNorm{rng.uniform(0.0, 0.2), rng.uniform(0.5, 1.0)});
    }
    const auto bytes = serialize(model, meta, norms, ParamDtype::F32);

    const SignalTensor decoded = decode(bytes);
    CHECK(decoded.h == meta.h);
    CHECK(decoded.w == meta.w);
    CHECK(decoded.c == meta.c);

    // rebuild from the same stream and evaluate by hand (the stream's fp32
    // norms apply, not the doubles they were rounded from)
    const EncodedModel em = from_bytes(bytes);
    QuinrModel rebuilt(em.qconfig, em.params);
    QuinrModel::Tape tape;
    size_t i = 0;
    for (int r = 0; r < meta.h; ++r) {
        for (int col = 0; col < meta.w; ++col, ++i) {
            const double x[2] = {axis_coord(col, meta.w), axis_coord(r, meta.h)};
            const auto y = rebuilt.forward(x, tape);
            for (int ch = 0; ch < meta.c; ++ch) {
                const double expected =
                    y[static_cast<size_t>(ch)] * em.norms[static_cast<size_t>(ch)].peak +
                    em.norms[static_cast<size_t>(ch)].vmin;
                CHECK(decoded.data[i * meta.c + ch] == expected);
            }
        }
    }

    const SignalTensor again = decode(bytes);
    CHECK(std::memcmp(decoded.data.data(), again.data.data(),
                      decoded.data.size() * sizeof(double)) == 0);
}

TEST_CASE("fp16 refinement never hurts and lands on the fp16 grid") {
    const auto img = quinr::testing::gradient_image(8, 8);
    ModelConfig cfg;
    cfg.n_qubits = 2;
    cfg.folds = 2;
    cfg.embed_size = 4;
    cfg.entangling_layers = 1;
    cfg.blocks = 1;
    TrainOptions opts;
    opts.steps = 150;
    opts.batch_size = 64;
    opts.report_interval = 0;
    auto [model, report] = encode(img, cfg, opts);
    const auto ds = build_dataset(img);
    const SignalMeta meta{ds.h, ds.w, ds.c, ds.domain};

    const double nearest = psnr(img, decode(serialize(model, meta, ds.norms, ParamDtype::F16)));
    QuinrModel refined = model;
    refine_for_dtype(refined, ds, ParamDtype::F16, 2);
    const double after = psnr(img, decode(serialize(refined, meta, ds.norms, ParamDtype::F16)));
    CHECK(after >= nearest);

    for (double v : refined.params().values()) {
        CHECK(static_cast<double>(half_to_float(float_to_half(static_cast<float>(v)))) == v);
    }

    // fp32 requests are untouched
    QuinrModel copy = model;
    CHECK(refine_for_dtype(copy, ds, ParamDtype::F32, 2) == 0);
    CHECK(std::memcmp(copy.params().values().data(), model.params().values().data(),
                      model.params().size() * sizeof(double)) == 0);
}

TEST_CASE("bpp accounting") {
    CHECK(bpp(8192, 1024 * 64) == doctest::Approx(1.0));
    CHECK(bpp(8192, 768 * 512) == doctest::Approx(8.0 * 8192 / 393216.0));
    CHECK_THROWS_AS(bpp(100, 0), DimensionError);

    SplitMix64 rng(8);
    const auto em = sample_encoded(rng, ParamDtype::F32);
    EncodedModel em16 = em;
    em16.dtype = ParamDtype::F16;
    const double full = bpp(to_bytes(em).size(), 64);
    const double half = bpp(to_bytes(em16).size(), 64);
    // halving the payload does not halve the file: the header is shared
    CHECK(half > full / 2.0);
    CHECK(half < full);

    // whole-file bpp never understates the parameter payload alone
    const size_t pixels = 64;
    CHECK(full >= 32.0 * static_cast<double>(em.params.size()) / pixels);
    CHECK(half >= 16.0 * static_cast<double>(em.params.size()) / pixels);
}

TEST_SUITE_END();
