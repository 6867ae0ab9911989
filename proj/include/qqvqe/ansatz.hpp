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

// Waveplate-parameterized preparation of a polarization (x) path ququart.
//
// Optical train: |H> -> H1 -> Q1 -> beam displacer (H to path a, V to path
// b) -> H2, Q2 on path a and H3, Q3 on path b. The displaced V component
// enters the path-b waveplates in the H slot.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

#include "qqvqe/linalg.hpp"
#include "qqvqe/random.hpp"

namespace qqvqe {

enum class OpticalElementKind { HalfWaveplate, QuarterWaveplate, BeamDisplacer };

inline constexpr std::size_t kNumAngles = 6;

/// Waveplate angles in radians, ordered (H1, Q1, H2, Q2, H3, Q3).
using WaveplateAngles = std::array<double, kNumAngles>;

/// Jones matrix of a half waveplate with fast axis at theta.
inline Operator2 hwp(double theta) {
    double c = std::cos(2 * theta);
    double s = std::sin(2 * theta);
    Operator2 m;
    m(0, 0) = c;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = -c;
    return m;
}

/// Jones matrix of a quarter waveplate with fast axis at theta.
inline Operator2 qwp(double theta) {
    const Complex i{0, 1};
    const Complex global = std::polar(1.0, -kPi / 4);
    double c = std::cos(theta);
    double s = std::sin(theta);
    Operator2 m;
    m(0, 0) = global * (c * c + i * s * s);
    m(0, 1) = global * (1.0 - i) * s * c;
    m(1, 0) = m(0, 1);
    m(1, 1) = global * (s * s + i * c * c);
    return m;
}

namespace detail {

// Q * H applied to an H-polarized amplitude.
inline Ket2 waveplate_pair(double h_angle, double q_angle, Complex amplitude) {
    Ket2 in{amplitude, 0};
    return qwp(q_angle) * (hwp(h_angle) * in);
}

}  // namespace detail

inline Ket4 prepare_ququart(std::span<const double, kNumAngles> theta) {
    Ket2 split = detail::waveplate_pair(theta[0], theta[1], 1.0);
    Ket2 path_a = detail::waveplate_pair(theta[2], theta[3], split[0]);
    Ket2 path_b = detail::waveplate_pair(theta[4], theta[5], split[1]);
    return {path_a[0], path_a[1], path_b[0], path_b[1]};
}

inline Ket4 prepare_ququart(const WaveplateAngles &theta) {
    return prepare_ququart(std::span<const double, kNumAngles>(theta));
}

/// Six angles i.i.d. uniform on [0, pi).
inline WaveplateAngles random_angles(std::uint64_t seed) {
    CounterRng rng(derive_seed(seed, {0x616E676C6573ULL}));
    WaveplateAngles out{};
    for (auto &a : out) {
        a = kPi * rng.uniform();
    }
    return out;
}

}  // namespace qqvqe
