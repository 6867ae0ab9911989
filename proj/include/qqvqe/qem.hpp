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

// Error mitigation that treats Pauli-channel evolution noise as readout
// noise. For each measurement setting, the channel acts on eigenstate
// populations as a doubly stochastic matrix Delta; composed with the
// detector confusion Lambda it gives a left-stochastic Gamma = Lambda Delta
// with q = Gamma p. Mitigation inverts Gamma and, when the result is not a
// probability vector, projects it onto the simplex.
//
// Orientation: entries[outcome][prepared], so that q = Gamma p holds
// literally. The relative-frequency table read off a tomography run with
// rows indexed by the prepared state is the transpose of this.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qqvqe/errors.hpp"
#include "qqvqe/linalg.hpp"
#include "qqvqe/qpu.hpp"
#include "qqvqe/random.hpp"

namespace qqvqe {

inline constexpr double kSingularDeterminant = 1e-10;

class GammaMatrix {
   public:
    GammaMatrix(PauliString setting, const Real4x4 &entries) : setting_(setting), entries_(entries) {
        if (!is_left_stochastic(entries, 1e-9)) {
            throw ValidationError("Gamma for " + setting.str() + " is not left stochastic");
        }
    }

    PauliString setting() const noexcept {
        return setting_;
    }
    const Real4x4 &entries() const noexcept {
        return entries_;
    }
    /// P(outcome | prepared eigenstate)
    double operator()(std::size_t outcome, std::size_t prepared) const {
        return entries_[outcome][prepared];
    }

   private:
    PauliString setting_;
    Real4x4 entries_;
};

struct TomographyConfig {
    std::int64_t shots_per_eigenstate = 10000;
    std::uint64_t seed = 0;
    /// Use exact outcome probabilities instead of sampling.
    bool analytic = false;
};

namespace detail {

inline Real4 noisy_outcome_probs(const Ket4 &prepared, const PauliChannel &channel, const DetectorConfusion &detector,
                                 const MeasurementSetting &setting) {
    DensityMatrix4 rho = apply_channel(DensityMatrix4::from_ket(prepared), channel);
    return matvec(detector.matrix(), ideal_probs(rho, setting).p);
}

inline std::uint64_t setting_tag(PauliString s) {
    return static_cast<std::uint64_t>(s.first) * 4 + static_cast<std::uint64_t>(s.second);
}

}  // namespace detail

/// Delta[l][k] = <phi_l| N(|phi_k><phi_k|) |phi_l>.
inline Real4x4 channel_transition_matrix(const PauliChannel &channel, const MeasurementSetting &setting) {
    Real4x4 delta{};
    for (std::size_t k = 0; k < 4; k++) {
        DensityMatrix4 rho = apply_channel(DensityMatrix4::from_ket(setting.eigenkets[k]), channel);
        ProbVector p = ideal_probs(rho, setting);
        for (std::size_t l = 0; l < 4; l++) {
            delta[l][k] = p.p[l];
        }
    }
    if (!is_doubly_stochastic(delta, 1e-10)) {
        throw Error("Pauli channel transition matrix is not doubly stochastic for " + setting.basis.str());
    }
    return delta;
}

inline GammaMatrix analytic_gamma(const PauliChannel &channel, const DetectorConfusion &detector,
                                  const MeasurementSetting &setting) {
    return GammaMatrix(setting.basis, multiply(detector.matrix(), channel_transition_matrix(channel, setting)));
}

/// Prepares each eigenket of the setting, sends it through the noisy
/// pipeline and records outcome frequencies as column k.
inline GammaMatrix tomography(const PauliChannel &channel, const DetectorConfusion &detector,
                              const MeasurementSetting &setting, const TomographyConfig &cfg) {
    if (!cfg.analytic && cfg.shots_per_eigenstate < 1) {
        throw OutOfRange("tomography needs at least one shot per eigenstate");
    }
    Real4x4 gamma{};
    for (std::size_t k = 0; k < 4; k++) {
        ProbVector q{detail::noisy_outcome_probs(setting.eigenkets[k], channel, detector, setting)};
        if (!cfg.analytic) {
            std::uint64_t seed = derive_seed(cfg.seed, {0x746F6D6FULL, detail::setting_tag(setting.basis), k});
            q = sample_outcomes(q, cfg.shots_per_eigenstate, seed).frequencies();
        }
        for (std::size_t l = 0; l < 4; l++) {
            gamma[l][k] = q.p[l];
        }
    }
    return GammaMatrix(setting.basis, gamma);
}

struct Inverse4 {
    Real4x4 inverse{};
    double determinant = 0;
};

/// Gauss-Jordan elimination with partial pivoting. The inverse is only
/// meaningful when the determinant is nonzero.
inline Inverse4 invert(const Real4x4 &m) {
    Real4x4 a = m;
    Real4x4 inv = identity4();
    double det = 1;
    for (std::size_t col = 0; col < 4; col++) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 4; r++) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (a[pivot][col] == 0) {
            return {inv, 0};
        }
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(inv[pivot], inv[col]);
            det = -det;
        }
        double d = a[col][col];
        det *= d;
        for (std::size_t c = 0; c < 4; c++) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < 4; r++) {
            if (r == col) {
                continue;
            }
            double f = a[r][col];
            if (f == 0) {
                continue;
            }
            for (std::size_t c = 0; c < 4; c++) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return {inv, det};
}

/// Euclidean projection onto {p >= 0, sum p = 1} by sorting and
/// thresholding.
inline ProbVector project_simplex(const Real4 &v) {
    Real4 u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0;
    double tau = 0;
    for (std::size_t j = 0; j < 4; j++) {
        cumulative += u[j];
        double t = (cumulative - 1) / static_cast<double>(j + 1);
        if (u[j] - t > 0) {
            tau = t;
        }
    }
    ProbVector out;
    for (std::size_t i = 0; i < 4; i++) {
        out.p[i] = std::max(v[i] - tau, 0.0);
    }
    return out;
}

inline ProbVector mitigate(const GammaMatrix &gamma, const ProbVector &p_exp) {
    Inverse4 inv = invert(gamma.entries());
    if (!(std::abs(inv.determinant) > kSingularDeterminant)) {
        throw SingularGamma("Gamma for " + gamma.setting().str() + " is singular (|det| <= 1e-10)");
    }
    Real4 v = matvec(inv.inverse, p_exp.p);
    double sum = 0;
    bool nonnegative = true;
    for (double x : v) {
        sum += x;
        nonnegative = nonnegative && x >= -1e-12;
    }
    if (nonnegative && std::abs(sum - 1) <= 1e-9) {
        double clipped = 0;
        for (double &x : v) {
            x = std::max(x, 0.0);
            clipped += x;
        }
        for (double &x : v) {
            x /= clipped;
        }
        return {v};
    }
    return project_simplex(v);
}

using GammaSet = std::array<GammaMatrix, 4>;

inline GammaSet analytic_gammas(const PauliChannel &channel, const std::array<DetectorConfusion, 4> &detectors) {
    const auto &s = standard_settings();
    return {analytic_gamma(channel, detectors[0], s[0]), analytic_gamma(channel, detectors[1], s[1]),
            analytic_gamma(channel, detectors[2], s[2]), analytic_gamma(channel, detectors[3], s[3])};
}

inline GammaSet tomography_gammas(const PauliChannel &channel, const std::array<DetectorConfusion, 4> &detectors,
                                  const TomographyConfig &cfg) {
    const auto &s = standard_settings();
    return {tomography(channel, detectors[0], s[0], cfg), tomography(channel, detectors[1], s[1], cfg),
            tomography(channel, detectors[2], s[2], cfg), tomography(channel, detectors[3], s[3], cfg)};
}

// JSON: {"setting": "ZX", "entries": [16 numbers, column-major]}.

inline nlohmann::json gamma_to_json(const GammaMatrix &g) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t c = 0; c < 4; c++) {
        for (std::size_t r = 0; r < 4; r++) {
            entries.push_back(g(r, c));
        }
    }
    return {{"setting", g.setting().str()}, {"entries", entries}};
}

inline GammaMatrix gamma_from_json(const nlohmann::json &j) {
    try {
        PauliString setting = PauliString::parse(j.at("setting").get<std::string>());
        const auto &entries = j.at("entries");
        if (!entries.is_array() || entries.size() != 16) {
            throw ValidationError("Gamma entries must be an array of 16 numbers");
        }
        Real4x4 m{};
        for (std::size_t c = 0; c < 4; c++) {
            for (std::size_t r = 0; r < 4; r++) {
                m[r][c] = entries.at(4 * c + r).get<double>();
            }
        }
        return GammaMatrix(setting, m);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed Gamma JSON: ") + e.what());
    }
}

inline nlohmann::json gammas_to_json(const GammaSet &gammas) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &g : gammas) {
        arr.push_back(gamma_to_json(g));
    }
    return {{"gammas", arr}};
}

/// Reads the four settings in any order and returns them in
/// standard_settings() order.
inline GammaSet gammas_from_json(const nlohmann::json &j) {
    const nlohmann::json *arr = &j;
    if (j.is_object() && j.contains("gammas")) {
        arr = &j.at("gammas");
    }
    if (!arr->is_array()) {
        throw ValidationError("Gamma file must hold an array of Gamma matrices");
    }
    std::vector<GammaMatrix> parsed;
    for (const auto &item : *arr) {
        parsed.push_back(gamma_from_json(item));
    }
    const auto &s = standard_settings();
    auto pick = [&](std::size_t i) {
        for (const auto &g : parsed) {
            if (g.setting() == s[i].basis) {
                return g;
            }
        }
        throw ValidationError("Gamma file has no matrix for setting " + s[i].basis.str());
    };
    return {pick(0), pick(1), pick(2), pick(3)};
}

}  // namespace qqvqe
