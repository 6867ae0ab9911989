// Copyright 2026 The qqvqe Authors
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

// Small dense complex linear algebra for one qubit (dimension 2) and one
// ququart (dimension 4).
//
// Basis convention shared by the whole library:
//   |0> = |aH>, |1> = |aV>, |2> = |bH>, |3> = |bV>
// i.e. index = 2 * path + polarization. Operators are built with the
// standard Kronecker product, so the first (most significant) tensor factor
// acts on the path qubit and the second (least significant) factor acts on
// the polarization qubit.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "qqvqe/errors.hpp"

namespace qqvqe {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Default absolute tolerance for Hermiticity / trace / norm checks.
inline constexpr double kStateTolerance = 1e-10;

template <std::size_t N>
using Ket = std::array<Complex, N>;
using Ket2 = Ket<2>;
using Ket4 = Ket<4>;

template <std::size_t N>
double norm(const Ket<N> &v) {
    double s = 0;
    for (const auto &a : v) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

/// <a|b>
template <std::size_t N>
Complex inner(const Ket<N> &a, const Ket<N> &b) {
    Complex s = 0;
    for (std::size_t i = 0; i < N; i++) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

template <std::size_t N>
Ket<N> normalized(Ket<N> v) {
    double n = norm(v);
    for (auto &a : v) {
        a /= n;
    }
    return v;
}

/// Fidelity |<a|b>| of two normalized kets; equals 1 iff they agree up to a
/// global phase.
template <std::size_t N>
double overlap(const Ket<N> &a, const Ket<N> &b) {
    return std::abs(inner(a, b));
}

/// Row-major dense N x N complex matrix.
template <std::size_t N>
class Matrix {
   public:
    constexpr Matrix() : data_{} {
    }

    static constexpr Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; i++) {
            m(i, i) = 1;
        }
        return m;
    }

    static Matrix diagonal(const std::array<Complex, N> &d) {
        Matrix m;
        for (std::size_t i = 0; i < N; i++) {
            m(i, i) = d[i];
        }
        return m;
    }

    /// |a><b|
    static Matrix outer(const Ket<N> &a, const Ket<N> &b) {
        Matrix m;
        for (std::size_t r = 0; r < N; r++) {
            for (std::size_t c = 0; c < N; c++) {
                m(r, c) = a[r] * std::conj(b[c]);
            }
        }
        return m;
    }

    constexpr Complex &operator()(std::size_t r, std::size_t c) {
        return data_[r * N + c];
    }
    constexpr const Complex &operator()(std::size_t r, std::size_t c) const {
        return data_[r * N + c];
    }

    Matrix adjoint() const {
        Matrix m;
        for (std::size_t r = 0; r < N; r++) {
            for (std::size_t c = 0; c < N; c++) {
                m(c, r) = std::conj((*this)(r, c));
            }
        }
        return m;
    }

    Complex trace() const {
        Complex t = 0;
        for (std::size_t i = 0; i < N; i++) {
            t += (*this)(i, i);
        }
        return t;
    }

    Matrix operator*(const Matrix &o) const {
        Matrix m;
        for (std::size_t r = 0; r < N; r++) {
            for (std::size_t k = 0; k < N; k++) {
                Complex a = (*this)(r, k);
                if (a == Complex{}) {
                    continue;
                }
                for (std::size_t c = 0; c < N; c++) {
                    m(r, c) += a * o(k, c);
                }
            }
        }
        return m;
    }

    Ket<N> operator*(const Ket<N> &v) const {
        Ket<N> out{};
        for (std::size_t r = 0; r < N; r++) {
            for (std::size_t c = 0; c < N; c++) {
                out[r] += (*this)(r, c) * v[c];
            }
        }
        return out;
    }

    Matrix &operator+=(const Matrix &o) {
        for (std::size_t i = 0; i < N * N; i++) {
            data_[i] += o.data_[i];
        }
        return *this;
    }
    Matrix &operator-=(const Matrix &o) {
        for (std::size_t i = 0; i < N * N; i++) {
            data_[i] -= o.data_[i];
        }
        return *this;
    }
    Matrix &operator*=(Complex s) {
        for (auto &a : data_) {
            a *= s;
        }
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix &b) {
        return a += b;
    }
    friend Matrix operator-(Matrix a, const Matrix &b) {
        return a -= b;
    }
    friend Matrix operator*(Complex s, Matrix a) {
        return a *= s;
    }

    /// Largest entrywise modulus of (this - o).
    double max_abs_diff(const Matrix &o) const {
        double d = 0;
        for (std::size_t i = 0; i < N * N; i++) {
            d = std::max(d, std::abs(data_[i] - o.data_[i]));
        }
        return d;
    }

    double hermiticity_defect() const {
        return max_abs_diff(adjoint());
    }

    bool is_hermitian(double tol = kStateTolerance) const {
        return hermiticity_defect() < tol;
    }

    bool is_unitary(double tol = kStateTolerance) const {
        return (adjoint() * (*this)).max_abs_diff(identity()) < tol;
    }

    bool operator==(const Matrix &o) const = default;

   private:
    std::array<Complex, N * N> data_;
};

using Operator2 = Matrix<2>;
using Operator4 = Matrix<4>;

/// Standard Kronecker product: (a (x) b)(2i+k, 2j+l) = a(i,j) b(k,l).
inline Operator4 kron(const Operator2 &a, const Operator2 &b) {
    Operator4 m;
    for (std::size_t i = 0; i < 2; i++) {
        for (std::size_t j = 0; j < 2; j++) {
            for (std::size_t k = 0; k < 2; k++) {
                for (std::size_t l = 0; l < 2; l++) {
                    m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return m;
}

inline Ket4 kron(const Ket2 &a, const Ket2 &b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

enum class PauliLabel : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<PauliLabel, 4> kAllPauliLabels = {PauliLabel::I, PauliLabel::X, PauliLabel::Y,
                                                              PauliLabel::Z};

inline constexpr char pauli_char(PauliLabel p) {
    return "IXYZ"[static_cast<int>(p)];
}

inline PauliLabel pauli_from_char(char c) {
    switch (c) {
        case 'I':
            return PauliLabel::I;
        case 'X':
            return PauliLabel::X;
        case 'Y':
            return PauliLabel::Y;
        case 'Z':
            return PauliLabel::Z;
        default:
            throw ValidationError(std::string("not a Pauli label: '") + c + "'");
    }
}

/// Two-qubit Pauli string written most-significant factor first, so "ZX"
/// is Z on the path qubit and X on the polarization qubit.
struct PauliString {
    PauliLabel first = PauliLabel::I;
    PauliLabel second = PauliLabel::I;

    static PauliString parse(std::string_view s) {
        if (s.size() != 2) {
            throw ValidationError("Pauli string must have two letters: '" + std::string(s) + "'");
        }
        return {pauli_from_char(s[0]), pauli_from_char(s[1])};
    }

    std::string str() const {
        return {pauli_char(first), pauli_char(second)};
    }

    auto operator<=>(const PauliString &) const = default;
};

inline Operator2 pauli_matrix(PauliLabel label) {
    const Complex i{0, 1};
    Operator2 m;
    switch (label) {
        case PauliLabel::I:
            m(0, 0) = 1;
            m(1, 1) = 1;
            break;
        case PauliLabel::X:
            m(0, 1) = 1;
            m(1, 0) = 1;
            break;
        case PauliLabel::Y:
            m(0, 1) = -i;
            m(1, 0) = i;
            break;
        case PauliLabel::Z:
            m(0, 0) = 1;
            m(1, 1) = -1;
            break;
    }
    return m;
}

inline Operator4 pauli_matrix(PauliString p) {
    return kron(pauli_matrix(p.first), pauli_matrix(p.second));
}

/// Ascending eigenvalues with matching orthonormal eigenvectors.
struct Eigensystem {
    std::array<double, 4> values{};
    std::array<Ket4, 4> vectors{};
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot entry with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that zeroes it.
inline Eigensystem eig_hermitian(const Operator4 &op, double hermitian_tol = kStateTolerance) {
    if (!op.is_hermitian(hermitian_tol)) {
        throw NotHermitian("eig_hermitian: defect " + std::to_string(op.hermiticity_defect()));
    }
    constexpr std::size_t n = 4;
    // Symmetrize so rounding in the input cannot leak into the rotations.
    Operator4 a = Complex{0.5} * (op + op.adjoint());
    Operator4 v = Operator4::identity();

    double scale = 0;
    for (std::size_t r = 0; r < n; r++) {
        for (std::size_t c = 0; c < n; c++) {
            scale = std::max(scale, std::abs(a(r, c)));
        }
    }
    if (scale == 0) {
        scale = 1;
    }

    for (int sweep = 0; sweep < 64; sweep++) {
        double off = 0;
        for (std::size_t p = 0; p < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) < 1e-16 * scale) {
            break;
        }
        for (std::size_t p = 0; p < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                double mag = std::abs(a(p, q));
                if (mag < 1e-300) {
                    continue;
                }
                Complex phase = a(p, q) / mag;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2 * mag);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1);
                double s = t * c;
                // u = diag-phase * rotation, acting only on the (p, q) plane.
                Operator4 u = Operator4::identity();
                u(p, p) = c;
                u(p, q) = s;
                u(q, p) = -s * std::conj(phase);
                u(q, q) = c * std::conj(phase);
                a = u.adjoint() * a * u;
                a(p, q) = 0;
                a(q, p) = 0;
                v = v * u;
            }
        }
    }

    std::array<std::size_t, 4> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    Eigensystem out;
    for (std::size_t k = 0; k < n; k++) {
        std::size_t col = order[k];
        out.values[k] = a(col, col).real();
        for (std::size_t r = 0; r < n; r++) {
            out.vectors[k][r] = v(r, col);
        }
    }
    return out;
}

inline double min_eigenvalue(const Operator4 &op) {
    return eig_hermitian(op).values[0];
}

/// A 4x4 density operator. Construction validates Hermiticity, unit trace
/// and positivity.
class DensityMatrix4 {
   public:
    explicit DensityMatrix4(const Operator4 &m, double tol = kStateTolerance) : m_(m) {
        if (!m.is_hermitian(tol)) {
            throw ValidationError("density matrix is not Hermitian");
        }
        if (std::abs(m.trace() - Complex{1}) > tol) {
            throw ValidationError("density matrix trace is not 1");
        }
        if (min_eigenvalue(m) < -1e-8) {
            throw ValidationError("density matrix is not positive semidefinite");
        }
    }

    static DensityMatrix4 from_ket(const Ket4 &psi) {
        return DensityMatrix4(Operator4::outer(psi, psi), Trusted{});
    }

    static DensityMatrix4 maximally_mixed() {
        return DensityMatrix4(Complex{0.25} * Operator4::identity(), Trusted{});
    }

    const Operator4 &matrix() const noexcept {
        return m_;
    }
    Complex operator()(std::size_t r, std::size_t c) const {
        return m_(r, c);
    }

   private:
    struct Trusted {};
    DensityMatrix4(const Operator4 &m, Trusted) : m_(m) {
    }

    template <typename F>
    friend DensityMatrix4 unchecked_density(F &&build);

    Operator4 m_;
};

/// Wraps an operator produced by a trace-preserving, positivity-preserving
/// map of a valid state, skipping the eigenvalue check on hot paths.
template <typename F>
DensityMatrix4 unchecked_density(F &&build) {
    return DensityMatrix4(build(), DensityMatrix4::Trusted{});
}

/// tr(op rho) for Hermitian op.
inline double expectation(const Operator4 &op, const DensityMatrix4 &rho) {
    if (!op.is_hermitian()) {
        throw NotHermitian("expectation: operator is not Hermitian");
    }
    return (op * rho.matrix()).trace().real();
}

/// <psi|op|psi>
inline double expectation(const Operator4 &op, const Ket4 &psi) {
    return inner(psi, op * psi).real();
}

}  // namespace qqvqe
