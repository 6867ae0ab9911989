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

// Simulated quantum processing unit: Pauli-channel noise on the prepared
// ququart, projective measurement in product Z/X eigenbases, detector
// confusion, finite-shot sampling and Pauli-expectation estimation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qqvqe/errors.hpp"
#include "qqvqe/hamiltonian.hpp"
#include "qqvqe/linalg.hpp"
#include "qqvqe/random.hpp"

namespace qqvqe {

using Real4 = std::array<double, 4>;
using Real4x4 = std::array<Real4, 4>;

inline Real4x4 identity4() {
    Real4x4 m{};
    for (std::size_t i = 0; i < 4; i++) {
        m[i][i] = 1;
    }
    return m;
}

inline Real4 matvec(const Real4x4 &m, const Real4 &v) {
    Real4 out{};
    for (std::size_t r = 0; r < 4; r++) {
        for (std::size_t c = 0; c < 4; c++) {
            out[r] += m[r][c] * v[c];
        }
    }
    return out;
}

inline Real4x4 multiply(const Real4x4 &a, const Real4x4 &b) {
    Real4x4 out{};
    for (std::size_t r = 0; r < 4; r++) {
        for (std::size_t k = 0; k < 4; k++) {
            for (std::size_t c = 0; c < 4; c++) {
                out[r][c] += a[r][k] * b[k][c];
            }
        }
    }
    return out;
}

/// Entries in [0, 1] and unit column sums, within tol.
inline bool is_left_stochastic(const Real4x4 &m, double tol) {
    for (std::size_t c = 0; c < 4; c++) {
        double s = 0;
        for (std::size_t r = 0; r < 4; r++) {
            if (m[r][c] < -tol || m[r][c] > 1 + tol) {
                return false;
            }
            s += m[r][c];
        }
        if (std::abs(s - 1) > tol) {
            return false;
        }
    }
    return true;
}

inline bool is_doubly_stochastic(const Real4x4 &m, double tol) {
    if (!is_left_stochastic(m, tol)) {
        return false;
    }
    for (std::size_t r = 0; r < 4; r++) {
        double s = m[r][0] + m[r][1] + m[r][2] + m[r][3];
        if (std::abs(s - 1) > tol) {
            return false;
        }
    }
    return true;
}

/// Correlated two-qubit Pauli channel. probs[j][k] is the probability that
/// sigma_j acts on the polarization qubit and sigma_k on the path qubit.
class PauliChannel {
   public:
    PauliChannel() : probs_{} {
        probs_[0][0] = 1;
    }

    explicit PauliChannel(const Real4x4 &probs) : probs_(probs) {
        double total = 0;
        for (const auto &row : probs) {
            for (double p : row) {
                if (!std::isfinite(p) || p < 0) {
                    throw ValidationError("Pauli channel probabilities must be finite and nonnegative");
                }
                total += p;
            }
        }
        if (std::abs(total - 1) > 1e-12) {
            throw ValidationError("Pauli channel probabilities must sum to 1");
        }
    }

    static PauliChannel identity() {
        return {};
    }

    /// Uncorrelated channel: p[j][k] = polarization[j] * path[k].
    static PauliChannel product(const Real4 &polarization, const Real4 &path) {
        Real4x4 p{};
        for (std::size_t j = 0; j < 4; j++) {
            for (std::size_t k = 0; k < 4; k++) {
                p[j][k] = polarization[j] * path[k];
            }
        }
        return PauliChannel(p);
    }

    /// Every two-qubit Pauli with probability 1/16.
    static PauliChannel fully_depolarizing() {
        Real4x4 p{};
        for (auto &row : p) {
            row.fill(1.0 / 16);
        }
        return PauliChannel(p);
    }

    const Real4x4 &probs() const noexcept {
        return probs_;
    }
    double operator()(std::size_t polarization, std::size_t path) const {
        return probs_[polarization][path];
    }

    bool is_identity() const {
        return probs_[0][0] == 1;
    }

   private:
    Real4x4 probs_;
};

/// rho -> (1 - lambda) rho + lambda I/2 on the polarization qubit.
inline PauliChannel depolarizing_polarization(double lambda) {
    if (!(lambda >= 0 && lambda <= 1)) {
        throw OutOfRange("depolarizing strength must lie in [0, 1]");
    }
    Real4x4 p{};
    p[0][0] = 1 - 0.75 * lambda;
    p[1][0] = p[2][0] = p[3][0] = 0.25 * lambda;
    return PauliChannel(p);
}

/// Kraus operator sigma_path (x) sigma_polarization in the library basis.
inline Operator4 pauli_kraus(std::size_t polarization, std::size_t path) {
    return kron(pauli_matrix(static_cast<PauliLabel>(path)), pauli_matrix(static_cast<PauliLabel>(polarization)));
}

inline DensityMatrix4 apply_channel(const DensityMatrix4 &rho, const PauliChannel &ch) {
    if (ch.is_identity()) {
        return rho;
    }
    return unchecked_density([&] {
        Operator4 out;
        for (std::size_t j = 0; j < 4; j++) {
            for (std::size_t k = 0; k < 4; k++) {
                double p = ch(j, k);
                if (p == 0) {
                    continue;
                }
                Operator4 kraus = pauli_kraus(j, k);
                out += Complex{p} * (kraus * rho.matrix() * kraus.adjoint());
            }
        }
        return out;
    });
}

/// Left-stochastic detector confusion matrix: entries[outcome][true].
class DetectorConfusion {
   public:
    DetectorConfusion() : m_(identity4()) {
    }
    explicit DetectorConfusion(const Real4x4 &m) : m_(m) {
        if (!is_left_stochastic(m, 1e-12)) {
            throw ValidationError("detector confusion matrix must be left stochastic");
        }
    }
    const Real4x4 &matrix() const noexcept {
        return m_;
    }
    bool is_identity() const {
        return m_ == identity4();
    }

   private:
    Real4x4 m_;
};

struct ProbVector {
    Real4 p{};

    bool is_valid(double tol = 1e-12) const {
        double s = 0;
        for (double x : p) {
            if (!(x >= -tol)) {
                return false;
            }
            s += x;
        }
        return std::abs(s - 1) <= tol;
    }

    double operator[](std::size_t i) const {
        return p[i];
    }
};

inline ProbVector apply_detector(const DetectorConfusion &d, const ProbVector &p) {
    return {matvec(d.matrix(), p.p)};
}

struct OutcomeHistogram {
    std::array<std::int64_t, 4> counts{};
    std::int64_t shots = 0;

    ProbVector frequencies() const {
        ProbVector f;
        for (std::size_t i = 0; i < 4; i++) {
            f.p[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
        }
        return f;
    }
};

/// Sign of outcome l for each covered string: eigenvalue of the string on
/// eigenket l.
using SignTable = std::map<PauliString, std::array<int, 4>>;

struct MeasurementSetting {
    PauliString basis;
    std::array<Ket4, 4> eigenkets{};
    SignTable signs;
};

namespace detail {

// +1 eigenstate first.
inline std::array<Ket2, 2> single_qubit_eigenbasis(PauliLabel p) {
    const double h = 1 / std::sqrt(2.0);
    if (p == PauliLabel::Z) {
        return {Ket2{1, 0}, Ket2{0, 1}};
    }
    return {Ket2{h, h}, Ket2{h, -h}};
}

}  // namespace detail

/// Product eigenbasis of a ZZ / ZX / XZ / XX observable. Outcome l =
/// 2 * (first-factor index) + (second-factor index), +1 eigenstate first.
inline MeasurementSetting setting_for_group(PauliString basis) {
    auto ok = [](PauliLabel p) { return p == PauliLabel::Z || p == PauliLabel::X; };
    if (!ok(basis.first) || !ok(basis.second)) {
        throw UnsupportedBasis("measurement basis must be one of ZZ, ZX, XZ, XX; got " + basis.str());
    }
    MeasurementSetting s;
    s.basis = basis;
    auto first = detail::single_qubit_eigenbasis(basis.first);
    auto second = detail::single_qubit_eigenbasis(basis.second);
    for (std::size_t i = 0; i < 2; i++) {
        for (std::size_t k = 0; k < 2; k++) {
            s.eigenkets[2 * i + k] = kron(first[i], second[k]);
        }
    }
    const PauliString covered[] = {
        {PauliLabel::I, basis.second},
        {basis.first, PauliLabel::I},
        basis,
    };
    for (PauliString p : covered) {
        Operator4 m = pauli_matrix(p);
        std::array<int, 4> row{};
        for (std::size_t l = 0; l < 4; l++) {
            row[l] = expectation(m, s.eigenkets[l]) > 0 ? 1 : -1;
        }
        s.signs[p] = row;
    }
    return s;
}

/// Settings for the four He-H+ measurement groups, in group order.
inline const std::array<MeasurementSetting, 4> &standard_settings() {
    static const std::array<MeasurementSetting, 4> settings = {
        setting_for_group(PauliString::parse("ZZ")),
        setting_for_group(PauliString::parse("ZX")),
        setting_for_group(PauliString::parse("XZ")),
        setting_for_group(PauliString::parse("XX")),
    };
    return settings;
}

/// p_l = <phi_l|rho|phi_l>.
inline ProbVector ideal_probs(const DensityMatrix4 &rho, const MeasurementSetting &setting) {
    ProbVector out;
    for (std::size_t l = 0; l < 4; l++) {
        const Ket4 &phi = setting.eigenkets[l];
        out.p[l] = std::max(0.0, inner(phi, rho.matrix() * phi).real());
    }
    return out;
}

/// Multinomial draw by inverse CDF, one uniform per shot.
inline OutcomeHistogram sample_outcomes(const ProbVector &p, std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw OutOfRange("shots must be at least 1");
    }
    Real4 cdf{};
    double acc = 0;
    for (std::size_t i = 0; i < 4; i++) {
        acc += std::max(0.0, p.p[i]);
        cdf[i] = acc;
    }
    OutcomeHistogram h;
    h.shots = shots;
    CounterRng rng(seed);
    for (std::int64_t s = 0; s < shots; s++) {
        double u = rng.uniform() * acc;
        std::size_t l = 0;
        while (l < 3 && !(u < cdf[l])) {
            l++;
        }
        h.counts[l]++;
    }
    return h;
}

/// s_P = sum_l sign_P(l) p_l for every string covered by the setting.
inline PauliEstimates estimate_paulis(const ProbVector &p, const MeasurementSetting &setting) {
    PauliEstimates out;
    for (const auto &[string, signs] : setting.signs) {
        double s = 0;
        for (std::size_t l = 0; l < 4; l++) {
            s += signs[l] * p.p[l];
        }
        out[string] = s;
    }
    return out;
}

inline PauliEstimates estimate_paulis(const OutcomeHistogram &hist, const MeasurementSetting &setting) {
    return estimate_paulis(hist.frequencies(), setting);
}

/// P[|s_hat - s| >= t] <= 2 exp(-M t^2 / 2), clamped to [0, 1].
inline double hoeffding_bound(std::int64_t shots, double t) {
    if (shots < 1 || !(t > 0)) {
        throw OutOfRange("hoeffding_bound needs shots >= 1 and t > 0");
    }
    return std::clamp(2 * std::exp(-static_cast<double>(shots) * t * t / 2), 0.0, 1.0);
}

}  // namespace qqvqe
