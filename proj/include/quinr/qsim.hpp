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
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quinr/errors.hpp"

namespace quinr {

using cdouble = std::complex<double>;

/// Gate matrix conventions (fixed once, validated against the dense oracle):
///
///   RX(t)  = [[cos(t/2), -i sin(t/2)], [-i sin(t/2), cos(t/2)]]
///   RZ(t)  = diag(e^{-it/2}, e^{+it/2})
///   CRZ(t) = diag(1, 1, e^{-it/2}, e^{+it/2})   in (control, target) order
///
/// Qubit 0 is the MOST significant bit of the state index: |b0 b1 .. b_{n-1}>
/// sits at index b0*2^{n-1} + ... + b_{n-1}. "The last k states" therefore
/// means the k largest state indices.
class Statevector {
  public:
    static constexpr int kMaxQubits = 20;

    explicit Statevector(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > kMaxQubits) {
            throw CapacityError(
                "statevector requires 1..." + std::to_string(kMaxQubits) +
                " qubits, got " + std::to_string(n_qubits));
        }
        amps_.assign(size_t{1} << n_qubits, cdouble(0.0, 0.0));
        amps_[0] = cdouble(1.0, 0.0);
    }

    int n_qubits() const { return n_qubits_; }
    size_t dim() const { return amps_.size(); }

    std::span<const cdouble> amps() const { return amps_; }
    std::span<cdouble> amps() { return amps_; }

    /// Index weight of a qubit under the MSB-first convention.
    size_t bit_of(int qubit) const {
        return size_t{1} << (n_qubits_ - 1 - qubit);
    }

    void apply_rx(int target, double theta) {
        check_qubit(target);
        const double c = std::cos(0.5 * theta);
        const cdouble mis(0.0, -std::sin(0.5 * theta));
        const size_t m = bit_of(target);
        for (size_t base = 0; base < amps_.size(); base += 2 * m) {
            for (size_t i = base; i < base + m; ++i) {
                const cdouble a0 = amps_[i];
                const cdouble a1 = amps_[i + m];
                amps_[i] = c * a0 + mis * a1;
                amps_[i + m] = mis * a0 + c * a1;
            }
        }
    }

    void apply_rz(int target, double theta) {
        check_qubit(target);
        const cdouble e0(std::cos(0.5 * theta), -std::sin(0.5 * theta));
        const cdouble e1 = std::conj(e0);
        const size_t m = bit_of(target);
        for (size_t k = 0; k < amps_.size(); ++k) {
            amps_[k] *= (k & m) ? e1 : e0;
        }
    }

    void apply_crz(int control, int target, double theta) {
        check_qubit(control);
        check_qubit(target);
        if (control == target) {
            throw DimensionError("CRZ control equals target: " + std::to_string(control));
        }
        const cdouble e0(std::cos(0.5 * theta), -std::sin(0.5 * theta));
        const cdouble e1 = std::conj(e0);
        const size_t mc = bit_of(control);
        const size_t mt = bit_of(target);
        for (size_t k = 0; k < amps_.size(); ++k) {
            if (k & mc) {
                amps_[k] *= (k & mt) ? e1 : e0;
            }
        }
    }

    /// |amp_k|^2 for every basis state, in index order.
    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (size_t k = 0; k < amps_.size(); ++k) {
            p[k] = std::norm(amps_[k]);
        }
        return p;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const cdouble &a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

  private:
    void check_qubit(int q) const {
        if (q < 0 || q >= n_qubits_) {
            throw DimensionError("qubit index " + std::to_string(q) +
                                 " out of range for " + std::to_string(n_qubits_) + " qubits");
        }
    }

    int n_qubits_;
    std::vector<cdouble> amps_;
};

inline Statevector new_statevector(int n_qubits) {
    return Statevector(n_qubits);
}

enum class GateKind : uint8_t { RX = 0, RZ = 1, CRZ = 2 };

/// One gate in a circuit. The rotation angle either comes from the circuit's
/// angle vector (angle_index >= 0) or is baked in as a literal.
struct GateOp {
    GateKind kind = GateKind::RX;
    int target = 0;
    int control = -1;  // valid only for CRZ
    int angle_index = -1;
    double literal_angle = 0.0;

    bool is_indexed() const { return angle_index >= 0; }

    GateOp with_offset(int offset) const {
        GateOp shifted = *this;
        if (shifted.is_indexed()) {
            shifted.angle_index += offset;
        }
        return shifted;
    }

    static GateOp rx(int target, int angle_index) {
        return GateOp{GateKind::RX, target, -1, angle_index, 0.0};
    }
    static GateOp rz(int target, int angle_index) {
        return GateOp{GateKind::RZ, target, -1, angle_index, 0.0};
    }
    static GateOp crz(int control, int target, int angle_index) {
        return GateOp{GateKind::CRZ, target, control, angle_index, 0.0};
    }
    static GateOp rx_literal(int target, double angle) {
        return GateOp{GateKind::RX, target, -1, -1, angle};
    }
    static GateOp rz_literal(int target, double angle) {
        return GateOp{GateKind::RZ, target, -1, -1, angle};
    }
    static GateOp crz_literal(int control, int target, double angle) {
        return GateOp{GateKind::CRZ, target, control, -1, angle};
    }
};

/// An immutable gate list plus the size of the angle vector it indexes into.
struct CircuitProgram {
    int n_qubits = 0;
    int n_angles = 0;
    std::vector<GateOp> ops;

    void validate() const {
        if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits) {
            throw CapacityError("circuit qubit count out of range: " + std::to_string(n_qubits));
        }
        if (n_angles < 0) {
            throw DimensionError("negative angle count");
        }
        for (const GateOp &op : ops) {
            if (op.target < 0 || op.target >= n_qubits) {
                throw DimensionError("gate target " + std::to_string(op.target) + " out of range");
            }
            const bool has_control = op.control >= 0;
            if (has_control != (op.kind == GateKind::CRZ)) {
                throw DimensionError("control qubit present iff gate is CRZ");
            }
            if (has_control) {
                if (op.control >= n_qubits) {
                    throw DimensionError("gate control " + std::to_string(op.control) + " out of range");
                }
                if (op.control == op.target) {
                    throw DimensionError("CRZ control equals target");
                }
            }
            if (op.is_indexed() && op.angle_index >= n_angles) {
                throw DimensionError("angle index " + std::to_string(op.angle_index) +
                                     " out of range for " + std::to_string(n_angles) + " angles");
            }
        }
    }
};

/// Applies `op` with an explicit angle; the op's own angle source is ignored.
inline void apply_gate(Statevector &state, const GateOp &op, double angle) {
    switch (op.kind) {
        case GateKind::RX:
            state.apply_rx(op.target, angle);
            break;
        case GateKind::RZ:
            state.apply_rz(op.target, angle);
            break;
        case GateKind::CRZ:
            state.apply_crz(op.control, op.target, angle);
            break;
    }
}

inline double resolve_angle(const GateOp &op, std::span<const double> angles) {
    return op.is_indexed() ? angles[static_cast<size_t>(op.angle_index)] : op.literal_angle;
}

inline std::vector<double> probabilities(const Statevector &state) {
    return state.probabilities();
}

inline Statevector run_circuit(const CircuitProgram &prog, std::span<const double> angles) {
    if (static_cast<int>(angles.size()) != prog.n_angles) {
        throw DimensionError("angle vector length " + std::to_string(angles.size()) +
                             " does not match circuit n_angles " + std::to_string(prog.n_angles));
    }
    Statevector state(prog.n_qubits);
    for (const GateOp &op : prog.ops) {
        apply_gate(state, op, resolve_angle(op, angles));
    }
    return state;
}

enum class GradientMethod { Adjoint, ParameterShift };

namespace detail {

/// 2 Re <bra| dU/dtheta |ket> for a single gate, without materialising dU|ket>.
inline double gate_grad_contribution(const Statevector &bra, const Statevector &ket,
                                     const GateOp &op, double theta) {
    const double c2 = 0.5 * std::cos(0.5 * theta);
    const double s2 = 0.5 * std::sin(0.5 * theta);
    cdouble acc(0.0, 0.0);
    const auto b = bra.amps();
    const auto k = ket.amps();

    if (op.kind == GateKind::RX) {
        // dRX/dt = 0.5 * [[-sin(t/2), -i cos(t/2)], [-i cos(t/2), -sin(t/2)]]
        const cdouble d_diag(-s2, 0.0);
        const cdouble d_off(0.0, -c2);
        const size_t m = bra.bit_of(op.target);
        for (size_t base = 0; base < b.size(); base += 2 * m) {
            for (size_t i = base; i < base + m; ++i) {
                const cdouble mu0 = d_diag * k[i] + d_off * k[i + m];
                const cdouble mu1 = d_off * k[i] + d_diag * k[i + m];
                acc += std::conj(b[i]) * mu0 + std::conj(b[i + m]) * mu1;
            }
        }
    } else {
        // dRZ/dt = diag(-i/2 e^{-it/2}, +i/2 e^{+it/2}); CRZ restricts it to
        // the control=1 subspace.
        const cdouble d0(-s2, -c2);
        const cdouble d1(-s2, c2);
        const size_t mt = bra.bit_of(op.target);
        const size_t mc = op.kind == GateKind::CRZ ? bra.bit_of(op.control) : 0;
        for (size_t i = 0; i < b.size(); ++i) {
            if ((i & mc) != mc) {
                continue;
            }
            acc += std::conj(b[i]) * ((i & mt) ? d1 : d0) * k[i];
        }
    }
    return 2.0 * acc.real();
}

inline void check_gradient_inputs(const CircuitProgram &prog, std::span<const double> angles,
                                  std::span<const double> upstream) {
    if (static_cast<int>(angles.size()) != prog.n_angles) {
        throw DimensionError("angle vector length does not match circuit");
    }
    if (upstream.size() != (size_t{1} << prog.n_qubits)) {
        throw DimensionError("upstream length " + std::to_string(upstream.size()) +
                             " does not match 2^n_qubits");
    }
}

/// Loss = sum_k upstream[k] * p_k with op `override_index` run at a shifted angle.
inline double shifted_loss(const CircuitProgram &prog, std::span<const double> angles,
                           std::span<const double> upstream, size_t override_index, double shift) {
    Statevector state(prog.n_qubits);
    for (size_t i = 0; i < prog.ops.size(); ++i) {
        const GateOp &op = prog.ops[i];
        double theta = resolve_angle(op, angles);
        if (i == override_index) {
            theta += shift;
        }
        apply_gate(state, op, theta);
    }
    double loss = 0.0;
    const auto a = state.amps();
    for (size_t k = 0; k < a.size(); ++k) {
        loss += upstream[k] * std::norm(a[k]);
    }
    return loss;
}

}  // namespace detail

/// Reverse adjoint sweep from a precomputed final state. One backward pass
/// per call instead of two circuit executions per parameter.
inline std::vector<double> circuit_gradient_from_state(const CircuitProgram &prog,
                                                       std::span<const double> angles,
                                                       std::span<const double> upstream,
                                                       const Statevector &final_state) {
    detail::check_gradient_inputs(prog, angles, upstream);
    if (final_state.n_qubits() != prog.n_qubits) {
        throw DimensionError("final state does not match circuit width");
    }

    Statevector ket = final_state;
    Statevector bra = final_state;
    {
        auto b = bra.amps();
        for (size_t k = 0; k < b.size(); ++k) {
            b[k] *= upstream[k];
        }
    }

    std::vector<double> grads(static_cast<size_t>(prog.n_angles), 0.0);
    for (auto it = prog.ops.rbegin(); it != prog.ops.rend(); ++it) {
        const double theta = resolve_angle(*it, angles);
        apply_gate(ket, *it, -theta);  // rotation inverses are the negated angle
        if (it->is_indexed()) {
            grads[static_cast<size_t>(it->angle_index)] +=
                detail::gate_grad_contribution(bra, ket, *it, theta);
        }
        apply_gate(bra, *it, -theta);
    }
    return grads;
}

/// Parameter-shift gradients. RX/RZ use the two-term rule; CRZ has three
/// generator eigenvalues and needs the four-term rule.
inline std::vector<double> circuit_gradient_parameter_shift(const CircuitProgram &prog,
                                                            std::span<const double> angles,
                                                            std::span<const double> upstream) {
    detail::check_gradient_inputs(prog, angles, upstream);
    constexpr double kHalfPi = 1.5707963267948966;
    const double sqrt2 = std::sqrt(2.0);
    const double c_plus = (sqrt2 + 1.0) / (4.0 * sqrt2);
    const double c_minus = (sqrt2 - 1.0) / (4.0 * sqrt2);

    std::vector<double> grads(static_cast<size_t>(prog.n_angles), 0.0);
    for (size_t i = 0; i < prog.ops.size(); ++i) {
        const GateOp &op = prog.ops[i];
        if (!op.is_indexed()) {
            continue;
        }
        double g;
        if (op.kind == GateKind::CRZ) {
            const double near = detail::shifted_loss(prog, angles, upstream, i, kHalfPi) -
                                detail::shifted_loss(prog, angles, upstream, i, -kHalfPi);
            const double far = detail::shifted_loss(prog, angles, upstream, i, 3.0 * kHalfPi) -
                               detail::shifted_loss(prog, angles, upstream, i, -3.0 * kHalfPi);
            g = c_plus * near - c_minus * far;
        } else {
            g = 0.5 * (detail::shifted_loss(prog, angles, upstream, i, kHalfPi) -
                       detail::shifted_loss(prog, angles, upstream, i, -kHalfPi));
        }
        grads[static_cast<size_t>(op.angle_index)] += g;
    }
    return grads;
}

/// d(loss)/d(angle_j) for every indexed angle, given d(loss)/d(probability_k).
inline std::vector<double> circuit_gradient(const CircuitProgram &prog,
                                            std::span<const double> angles,
                                            std::span<const double> upstream,
                                            GradientMethod method = GradientMethod::Adjoint) {
    if (method == GradientMethod::ParameterShift) {
        return circuit_gradient_parameter_shift(prog, angles, upstream);
    }
    const Statevector final_state = run_circuit(prog, angles);
    return circuit_gradient_from_state(prog, angles, upstream, final_state);
}

}  // namespace quinr
