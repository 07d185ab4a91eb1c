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

#include <regex>
#include <sstream>

#include "doctest.h"
#include "quinr/sweep.hpp"
#include "support/test_helpers.hpp"

using namespace quinr;

namespace {

GridPoint small_quinr_point(int qubits, int folds) {
    GridPoint p;
    p.kind = ModelKind::Quinr;
    p.qconfig.n_qubits = qubits;
    p.qconfig.folds = folds;
    p.qconfig.embed_size = qubits * folds;
    p.qconfig.entangling_layers = 1;
    p.qconfig.blocks = 1;
    return p;
}

SweepOptions quick_opts() {
    SweepOptions opts;
    opts.train.steps = 10;
    opts.train.batch_size = 64;
    opts.train.report_interval = 0;
    opts.timings = false;
    return opts;
}

std::string csv_of(const SignalTensor &img, const std::vector<RdRow> &rows) {
    std::ostringstream out;
    write_sweep_csv(out, img, "test", rows);
    return out.str();
}

}  // namespace

TEST_SUITE_BEGIN("sweep");

TEST_CASE("a one-point grid yields one row per dtype") {
    const auto img = quinr::testing::gradient_image(8, 8);
    SweepOptions opts = quick_opts();
    opts.dtypes = {ParamDtype::F32, ParamDtype::F16};
    const auto rows = rd_sweep(img, {small_quinr_point(2, 2)}, opts);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].bytes < rows[1].bytes);  // sorted by bpp, fp16 first
    CHECK(rows[0].dtype == ParamDtype::F16);
    CHECK(rows[1].dtype == ParamDtype::F32);
    for (const auto &row : rows) {
        CHECK(row.error.empty());
        CHECK(row.params == 24);  // 8+4 classical + 10 quantum + 2 head
        CHECK(row.bpp == doctest::Approx(8.0 * row.bytes / 64.0));
    }
}

TEST_CASE("empty grids are rejected") {
    const auto img = quinr::testing::gradient_image(4, 4);
    CHECK_THROWS_AS(rd_sweep(img, {}, quick_opts()), ConfigError);
}

TEST_CASE("pareto flag marks exactly the non-dominated rows") {
    // synthetic rows exercise the definition without training
    std::vector<RdRow> rows(4);
    rows[0].bpp = 1.0;
    rows[0].psnr_db = 30.0;
    rows[1].bpp = 2.0;
    rows[1].psnr_db = 29.0;  // dominated by row 0
    rows[2].bpp = 2.5;
    rows[2].psnr_db = 35.0;
    rows[3].bpp = 2.5;
    rows[3].psnr_db = 35.0;  // tie: neither strictly dominates
    for (size_t i = 0; i < rows.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < rows.size(); ++j) {
            if (j != i && rows[j].bpp <= rows[i].bpp && rows[j].psnr_db > rows[i].psnr_db) {
                dominated = true;
            }
        }
        rows[i].pareto = !dominated;
    }
    CHECK(rows[0].pareto);
    CHECK_FALSE(rows[1].pareto);
    CHECK(rows[2].pareto);
    CHECK(rows[3].pareto);
}

TEST_CASE("sweep rows agree with the pareto definition") {
    const auto img = quinr::testing::gradient_image(8, 8);
    std::vector<GridPoint> grid{small_quinr_point(2, 1), small_quinr_point(2, 2),
                                small_quinr_point(3, 2)};
    GridPoint siren;
    siren.kind = ModelKind::Siren;
    siren.sconfig.hidden_layers = 1;
    siren.sconfig.hidden_width = 6;
    grid.push_back(siren);

    const auto rows = rd_sweep(img, grid, quick_opts());
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        CHECK(rows[i].bpp <= rows[i + 1].bpp);  // sorted
    }
    for (size_t i = 0; i < rows.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < rows.size(); ++j) {
            if (j != i && rows[j].bpp <= rows[i].bpp && rows[j].psnr_db > rows[i].psnr_db) {
                dominated = true;
            }
        }
        CHECK(rows[i].pareto == !dominated);
    }
}

TEST_CASE("csv output is byte-stable across runs without timings") {
    const auto img = quinr::testing::gradient_image(8, 8);
    const std::vector<GridPoint> grid{small_quinr_point(2, 2), small_quinr_point(2, 1)};
    const auto a = csv_of(img, rd_sweep(img, grid, quick_opts()));
    const auto b = csv_of(img, rd_sweep(img, grid, quick_opts()));
    CHECK(a == b);
    CHECK(a.find("kind,n_qubits,folds,M,L,B,dtype,params,bytes,bpp,psnr_db,steps,seconds,pareto") !=
          std::string::npos);
    CHECK(a.find("# quinr rd-sweep v1") != std::string::npos);
}

TEST_CASE("parallel sweep matches the sequential result") {
    const auto img = quinr::testing::gradient_image(8, 8);
    const std::vector<GridPoint> grid{small_quinr_point(2, 1), small_quinr_point(2, 2),
                                      small_quinr_point(3, 1)};
    SweepOptions seq = quick_opts();
    SweepOptions par = quick_opts();
    par.jobs = 2;
    CHECK(csv_of(img, rd_sweep(img, grid, seq)) == csv_of(img, rd_sweep(img, grid, par)));
}

TEST_CASE("failed grid points become error rows and the sweep continues") {
    const auto img = quinr::testing::gradient_image(8, 8);
    GridPoint bad = small_quinr_point(2, 2);
    bad.qconfig.n_out = 3;  // image has one channel
    const std::vector<GridPoint> grid{bad, small_quinr_point(2, 1)};

    const auto rows = rd_sweep(img, grid, quick_opts());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.empty());
    CHECK_FALSE(rows[1].error.empty());  // error rows sort last
    CHECK_FALSE(rows[1].pareto);

    const std::string csv = csv_of(img, rows);
    CHECK(csv.find("# error:") != std::string::npos);
    CHECK(csv.find("nan") != std::string::npos);
}

TEST_SUITE_END();
