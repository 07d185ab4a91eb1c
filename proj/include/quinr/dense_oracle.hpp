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

// Reference construction of the full circuit unitary via explicit Kronecker
// products. Exponential in qubit count and used only to cross-check the
// statevector kernels in tests; it shares no code with the simulation path.

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quinr/errors.hpp"
#include "quinr/qsim.hpp"

namespace quinr {

struct DenseUnitary {
    size_t dim = 0;
    std::vector<cdouble> m;  // row-major dim x dim

    cdouble &at(size_t r, size_t c) { return m[r * dim + c]; }
    const cdouble &at(size_t r, size_t c) const { return m[r * dim + c]; }

    static DenseUnitary identity(size_t dim) {
        DenseUnitary u{dim, std::vector<cdouble>(dim * dim, cdouble(0.0, 0.0))};
        for (size_t i = 0; i < dim; ++i) {
            u.at(i, i) = cdouble(1.0, 0.0);
        }
        return u;
    }
};

namespace oracle_detail {

using Mat2 = std::array<cdouble, 4>;  // row-major 2x2

inline Mat2 rx_matrix(double theta) {
    const double c = std::cos(0.5 * theta);
    const cdouble mis(0.0, -std::sin(0.5 * theta));
    return Mat2{cdouble(c, 0.0), mis, mis, cdouble(c, 0.0)};
}

inline Mat2 rz_matrix(double theta) {
    const cdouble e0(std::cos(0.5 * theta), -std::sin(0.5 * theta));
    return Mat2{e0, cdouble(0.0, 0.0), cdouble(0.0, 0.0), std::conj(e0)};
}

inline constexpr Mat2 kIdentity{cdouble(1, 0), cdouble(0, 0), cdouble(0, 0), cdouble(1, 0)};
inline constexpr Mat2 kProj0{cdouble(1, 0), cdouble(0, 0), cdouble(0, 0), cdouble(0, 0)};
inline constexpr Mat2 kProj1{cdouble(0, 0), cdouble(0, 0), cdouble(0, 0), cdouble(1, 0)};

/// kron(A, B) with A on the more significant subsystem.
inline DenseUnitary kron(const DenseUnitary &a, const Mat2 &b) {
    DenseUnitary out{a.dim * 2, std::vector<cdouble>(a.dim * 2 * a.dim * 2)};
    for (size_t ar = 0; ar < a.dim; ++ar) {
        for (size_t ac = 0; ac < a.dim; ++ac) {
            const cdouble v = a.at(ar, ac);
            out.at(2 * ar + 0, 2 * ac + 0) = v * b[0];
            out.at(2 * ar + 0, 2 * ac + 1) = v * b[1];
            out.at(2 * ar + 1, 2 * ac + 0) = v * b[2];
            out.at(2 * ar + 1, 2 * ac + 1) = v * b[3];
        }
    }
    return out;
}

/// Places per-qubit 2x2 factors (identity elsewhere) and krons them together
/// qubit 0 first, matching the MSB-first index convention.
inline DenseUnitary embed(int n_qubits, std::span<const std::pair<int, Mat2>> factors) {
    DenseUnitary u = DenseUnitary::identity(1);
    for (int q = 0; q < n_qubits; ++q) {
        Mat2 f = kIdentity;
        for (const auto &[fq, fm] : factors) {
            if (fq == q) {
                f = fm;
            }
        }
        u = kron(u, f);
    }
    return u;
}

inline DenseUnitary matmul(const DenseUnitary &a, const DenseUnitary &b) {
    DenseUnitary out{a.dim, std::vector<cdouble>(a.dim * a.dim, cdouble(0.0, 0.0))};
    for (size_t r = 0; r < a.dim; ++r) {
        for (size_t k = 0; k < a.dim; ++k) {
            const cdouble arv = a.at(r, k);
            if (arv == cdouble(0.0, 0.0)) {
                continue;
            }
            for (size_t c = 0; c < a.dim; ++c) {
                out.at(r, c) += arv * b.at(k, c);
            }
        }
    }
    return out;
}

inline DenseUnitary add(DenseUnitary a, const DenseUnitary &b) {
    for (size_t i = 0; i < a.m.size(); ++i) {
        a.m[i] += b.m[i];
    }
    return a;
}

inline DenseUnitary op_matrix(int n_qubits, const GateOp &op, double theta) {
    switch (op.kind) {
        case GateKind::RX: {
            const std::pair<int, Mat2> f{op.target, rx_matrix(theta)};
            return embed(n_qubits, std::span(&f, 1));
        }
        case GateKind::RZ: {
            const std::pair<int, Mat2> f{op.target, rz_matrix(theta)};
            return embed(n_qubits, std::span(&f, 1));
        }
        case GateKind::CRZ: {
            // P0_c (x) I + P1_c (x) RZ_t
            const std::pair<int, Mat2> off{op.control, kProj0};
            const std::array<std::pair<int, Mat2>, 2> on{
                std::pair<int, Mat2>{op.control, kProj1},
                std::pair<int, Mat2>{op.target, rz_matrix(theta)},
            };
            return add(embed(n_qubits, std::span(&off, 1)), embed(n_qubits, std::span(on)));
        }
    }
    throw DimensionError("unknown gate kind");
}

}  // namespace oracle_detail

/// Full 2^n x 2^n unitary of the circuit, ops multiplied in application order.
inline DenseUnitary dense_matrix_oracle(const CircuitProgram &prog, std::span<const double> angles) {
    constexpr int kMaxOracleQubits = 6;
    if (prog.n_qubits < 1 || prog.n_qubits > kMaxOracleQubits) {
        throw CapacityError("dense oracle supports 1..." + std::to_string(kMaxOracleQubits) +
                            " qubits, got " + std::to_string(prog.n_qubits));
    }
    if (static_cast<int>(angles.size()) != prog.n_angles) {
        throw DimensionError("angle vector length does not match circuit");
    }
    DenseUnitary u = DenseUnitary::identity(size_t{1} << prog.n_qubits);
    for (const GateOp &op : prog.ops) {
        u = oracle_detail::matmul(oracle_detail::op_matrix(prog.n_qubits, op, resolve_angle(op, angles)), u);
    }
    return u;
}

/// U |0...0>, i.e. the first column of the oracle unitary.
inline std::vector<cdouble> apply_to_zero_state(const DenseUnitary &u) {
    std::vector<cdouble> out(u.dim);
    for (size_t r = 0; r < u.dim; ++r) {
        out[r] = u.at(r, 0);
    }
    return out;
}

}  // namespace quinr
