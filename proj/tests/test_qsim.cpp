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
#include "quinr/dense_oracle.hpp"
#include "quinr/qsim.hpp"
#include "support/test_helpers.hpp"

using namespace quinr;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_SUITE_BEGIN("qsim");

TEST_CASE("new statevector is the all-zeros basis state") {
    const Statevector one(1);
    CHECK(one.dim() == 2);
    CHECK(one.amps()[0] == cdouble(1.0, 0.0));
    CHECK(one.amps()[1] == cdouble(0.0, 0.0));

    const Statevector two(2);
    CHECK(two.dim() == 4);
    CHECK(two.amps()[0] == cdouble(1.0, 0.0));
    for (size_t k = 1; k < 4; ++k) {
        CHECK(two.amps()[k] == cdouble(0.0, 0.0));
    }
}

TEST_CASE("statevector capacity guard") {
    CHECK_THROWS_AS(Statevector(0), CapacityError);
    CHECK_THROWS_AS(Statevector(-3), CapacityError);
    CHECK_THROWS_AS(Statevector(21), CapacityError);
}

TEST_CASE("RX(pi) flips a qubit up to global phase") {
    Statevector state(1);
    state.apply_rx(0, kPi);
    const auto probs = state.probabilities();
    CHECK(probs[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(probs[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("RX(pi/2) gives the equal-magnitude superposition") {
    Statevector state(1);
    state.apply_rx(0, kPi / 2.0);
    const auto probs = state.probabilities();
    CHECK(probs[0] == doctest::Approx(0.5));
    CHECK(probs[1] == doctest::Approx(0.5));
}

TEST_CASE("RZ leaves computational basis probabilities unchanged") {
    SplitMix64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        Statevector state(3);
        // prepare a random basis state via RX(pi) flips
        for (int q = 0; q < 3; ++q) {
            if (rng.next_below(2)) {
                state.apply_rx(q, kPi);
            }
        }
        const auto before = state.probabilities();
        state.apply_rz(static_cast<int>(rng.next_below(3)), rng.uniform(0.0, 6.28));
        const auto after = state.probabilities();
        for (size_t k = 0; k < before.size(); ++k) {
            CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("CRZ with unset control is the identity") {
    Statevector state(2);  // |00>
    state.apply_crz(0, 1, 1.234);
    CHECK(state.amps()[0] == cdouble(1.0, 0.0));
    CHECK(state.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("qubit 0 is the most significant index bit") {
    Statevector state(2);
    state.apply_rx(0, kPi);  // flip qubit 0 -> |10>
    const auto probs = state.probabilities();
    CHECK(probs[2] == doctest::Approx(1.0));  // index 2 = binary 10
}

TEST_CASE("apply_gate rejects out-of-range qubit indices") {
    Statevector state(2);
    CHECK_THROWS_AS(state.apply_rx(2, 0.1), DimensionError);
    CHECK_THROWS_AS(state.apply_rz(-1, 0.1), DimensionError);
    CHECK_THROWS_AS(state.apply_crz(0, 0, 0.1), DimensionError);
}

TEST_CASE("run_circuit basics") {
    SUBCASE("empty circuit") {
        CircuitProgram prog{2, 0, {}};
        const auto state = run_circuit(prog, {});
        CHECK(state.amps()[0] == cdouble(1.0, 0.0));
    }
    SUBCASE("single indexed RX(pi)") {
        CircuitProgram prog{1, 1, {GateOp::rx(0, 0)}};
        const std::vector<double> angles{kPi};
        const auto probs = run_circuit(prog, angles).probabilities();
        CHECK(probs[0] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(probs[1] == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("angle vector length mismatch") {
        CircuitProgram prog{1, 1, {GateOp::rx(0, 0)}};
        const std::vector<double> wrong{0.1, 0.2};
        CHECK_THROWS_AS(run_circuit(prog, wrong), DimensionError);
    }
    SUBCASE("literal ops ignore the angle vector") {
        CircuitProgram prog{1, 0, {GateOp::rx_literal(0, kPi)}};
        const auto probs = run_circuit(prog, {}).probabilities();
        CHECK(probs[1] == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("circuit validation catches malformed ops") {
    CircuitProgram bad_index{1, 1, {GateOp::rx(0, 1)}};
    CHECK_THROWS_AS(bad_index.validate(), DimensionError);

    CircuitProgram bad_control{2, 1, {GateOp::crz(1, 1, 0)}};
    CHECK_THROWS_AS(bad_control.validate(), DimensionError);

    CircuitProgram bad_target{2, 1, {GateOp::rx(5, 0)}};
    CHECK_THROWS_AS(bad_target.validate(), DimensionError);
}

TEST_CASE("dense oracle: identity and single-gate matrices") {
    SUBCASE("empty circuit is the identity") {
        CircuitProgram prog{2, 0, {}};
        const auto u = dense_matrix_oracle(prog, {});
        for (size_t r = 0; r < 4; ++r) {
            for (size_t c = 0; c < 4; ++c) {
                CHECK(std::abs(u.at(r, c) - (r == c ? cdouble(1, 0) : cdouble(0, 0))) < 1e-15);
            }
        }
    }
    SUBCASE("RX(pi) matrix is [[0,-i],[-i,0]]") {
        CircuitProgram prog{1, 1, {GateOp::rx(0, 0)}};
        const std::vector<double> angles{kPi};
        const auto u = dense_matrix_oracle(prog, angles);
        CHECK(std::abs(u.at(0, 0)) < 1e-15);
        CHECK(std::abs(u.at(0, 1) - cdouble(0, -1)) < 1e-15);
        CHECK(std::abs(u.at(1, 0) - cdouble(0, -1)) < 1e-15);
        CHECK(std::abs(u.at(1, 1)) < 1e-15);
    }
    SUBCASE("capacity guard above 6 qubits") {
        CircuitProgram prog{7, 0, {}};
        CHECK_THROWS_AS(dense_matrix_oracle(prog, {}), CapacityError);
    }
}

TEST_CASE("oracle equivalence and norm preservation on random circuits") {
    SplitMix64 rng(42);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 1 + static_cast<int>(rng.next_below(4));
        const int gates = 1 + static_cast<int>(rng.next_below(30));
        const auto prog = testing::random_circuit(rng, n, gates, true);
        const auto angles = testing::random_angles(rng, static_cast<size_t>(prog.n_angles));

        const auto state = run_circuit(prog, angles);
        CHECK(std::abs(state.norm_sq() - 1.0) < 1e-12);

        const auto expected = apply_to_zero_state(dense_matrix_oracle(prog, angles));
        for (size_t k = 0; k < expected.size(); ++k) {
            CHECK(std::abs(state.amps()[k] - expected[k]) < 1e-12);
        }
    }
}

TEST_CASE("probabilities match the oracle on a random 3-gate circuit") {
    SplitMix64 rng(9);
    const auto prog = testing::random_circuit(rng, 2, 3);
    const auto angles = testing::random_angles(rng, 3);
    const auto probs = run_circuit(prog, angles).probabilities();
    const auto expected = apply_to_zero_state(dense_matrix_oracle(prog, angles));
    double total = 0.0;
    for (size_t k = 0; k < probs.size(); ++k) {
        CHECK(std::abs(probs[k] - std::norm(expected[k])) < 1e-12);
        total += probs[k];
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("appending a diagonal gate never changes probabilities") {
    SplitMix64 rng(1234);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_below(3));
        auto prog = testing::random_circuit(rng, n, 12);
        const auto angles = testing::random_angles(rng, 12);
        const auto before = run_circuit(prog, angles).probabilities();

        const int target = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
        if (rng.next_below(2)) {
            prog.ops.push_back(GateOp::rz_literal(target, rng.uniform(0.0, 6.28)));
        } else {
            const int control = (target + 1) % n;
            prog.ops.push_back(GateOp::crz_literal(control, target, rng.uniform(0.0, 6.28)));
        }
        const auto after = run_circuit(prog, angles).probabilities();
        for (size_t k = 0; k < before.size(); ++k) {
            CHECK(std::abs(after[k] - before[k]) < 1e-12);
        }
    }
}

TEST_CASE("run_circuit is bit-deterministic") {
    SplitMix64 rng(5);
    const auto prog = testing::random_circuit(rng, 4, 25);
    const auto angles = testing::random_angles(rng, 25);
    const auto a = run_circuit(prog, angles);
    const auto b = run_circuit(prog, angles);
    CHECK(std::memcmp(a.amps().data(), b.amps().data(), a.dim() * sizeof(cdouble)) == 0);
}

TEST_CASE("circuit gradient: zero upstream gives zero gradient") {
    SplitMix64 rng(11);
    const auto prog = testing::random_circuit(rng, 3, 10);
    const auto angles = testing::random_angles(rng, 10);
    const std::vector<double> upstream(8, 0.0);
    for (const double g : circuit_gradient(prog, angles, upstream)) {
        CHECK(g == 0.0);
    }
}

TEST_CASE("circuit gradient: single RX analytic derivative") {
    // p1 = sin^2(theta/2), so dp1/dtheta = sin(theta/2)cos(theta/2) = 0 at 0
    CircuitProgram prog{1, 1, {GateOp::rx(0, 0)}};
    const std::vector<double> upstream{0.0, 1.0};

    std::vector<double> angles{0.0};
    auto grads = circuit_gradient(prog, angles, upstream);
    CHECK(grads[0] == doctest::Approx(0.0).epsilon(1e-14));

    angles[0] = 1.1;
    grads = circuit_gradient(prog, angles, upstream);
    CHECK(grads[0] == doctest::Approx(std::sin(0.55) * std::cos(0.55)).epsilon(1e-12));
}

TEST_CASE("circuit gradient matches central finite differences") {
    SplitMix64 rng(77);
    for (int rep = 0; rep < 5; ++rep) {
        const auto prog = testing::random_circuit(rng, 4, 20);
        auto angles = testing::random_angles(rng, 20);
        std::vector<double> upstream(16);
        for (double &u : upstream) {
            u = rng.uniform(-1.0, 1.0);
        }
        const auto grads = circuit_gradient(prog, angles, upstream);

        auto loss = [&] {
            const auto probs = run_circuit(prog, angles).probabilities();
            double acc = 0.0;
            for (size_t k = 0; k < probs.size(); ++k) {
                acc += upstream[k] * probs[k];
            }
            return acc;
        };
        const double eps = 1e-5;
        for (size_t j = 0; j < angles.size(); ++j) {
            const double saved = angles[j];
            angles[j] = saved + eps;
            const double up = loss();
            angles[j] = saved - eps;
            const double down = loss();
            angles[j] = saved;
            const double fd = (up - down) / (2.0 * eps);
            const double err = std::abs(grads[j] - fd);
            CHECK(err <= std::max(1e-8, 1e-4 * std::max(std::abs(grads[j]), std::abs(fd))));
        }
    }
}

TEST_CASE("parameter-shift agrees with the adjoint sweep, CRZ included") {
    SplitMix64 rng(101);
    for (int rep = 0; rep < 8; ++rep) {
        const auto prog = testing::random_circuit(rng, 3, 15, true);
        const auto angles = testing::random_angles(rng, 15);
        std::vector<double> upstream(8);
        for (double &u : upstream) {
            u = rng.uniform(-1.0, 1.0);
        }
        const auto adjoint = circuit_gradient(prog, angles, upstream, GradientMethod::Adjoint);
        const auto shifted =
            circuit_gradient(prog, angles, upstream, GradientMethod::ParameterShift);
        for (size_t j = 0; j < adjoint.size(); ++j) {
            CHECK(std::abs(adjoint[j] - shifted[j]) < 1e-10);
        }
    }
}

TEST_CASE("gradient dimension mismatches are rejected") {
    CircuitProgram prog{2, 1, {GateOp::rx(0, 0)}};
    const std::vector<double> angles{0.3};
    const std::vector<double> bad_upstream{1.0, 0.0};  // needs 4 entries
    CHECK_THROWS_AS(circuit_gradient(prog, angles, bad_upstream), DimensionError);

    const std::vector<double> upstream(4, 0.0);
    const std::vector<double> bad_angles{0.3, 0.4};
    CHECK_THROWS_AS(circuit_gradient(prog, bad_angles, upstream), DimensionError);
}

TEST_SUITE_END();
