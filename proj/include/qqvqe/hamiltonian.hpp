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

// He-H+ two-qubit Hamiltonians: Pauli weights per interatomic distance,
// explicit matrices, measurement grouping and the weighted combination of
// Pauli expectations into an energy. Energies are in MJ/mol.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qqvqe/errors.hpp"
#include "qqvqe/linalg.hpp"

namespace qqvqe {

inline constexpr std::string_view kEnergyUnit = "MJ/mol";

/// Reference ground-state energy quoted for R = 0.9 A alongside the
/// coefficient table. It is not the minimum eigenvalue of the tabulated
/// Hamiltonian (that is about -5.725); kept for display only.
inline constexpr double kReferenceEnergyR09 = -2.863;

/// The nine strings of every He-H+ Hamiltonian, in table column order.
inline const std::array<PauliString, 9> &hamiltonian_strings() {
    static const std::array<PauliString, 9> strings = {
        PauliString::parse("II"), PauliString::parse("IZ"), PauliString::parse("ZI"),
        PauliString::parse("ZZ"), PauliString::parse("IX"), PauliString::parse("ZX"),
        PauliString::parse("XI"), PauliString::parse("XZ"), PauliString::parse("XX"),
    };
    return strings;
}

struct PauliTerm {
    PauliString string;
    double weight = 0;
};

using PauliEstimates = std::map<PauliString, double>;

class MolecularHamiltonian {
   public:
    /// Weights in hamiltonian_strings() order.
    MolecularHamiltonian(double distance, const std::array<double, 9> &weights) : distance_(distance) {
        if (!std::isfinite(distance) || distance <= 0) {
            throw ValidationError("interatomic distance must be positive and finite");
        }
        for (std::size_t k = 0; k < 9; k++) {
            if (!std::isfinite(weights[k])) {
                throw ValidationError("non-finite weight for " + hamiltonian_strings()[k].str());
            }
            terms_[k] = {hamiltonian_strings()[k], weights[k]};
        }
    }

    double distance() const noexcept {
        return distance_;
    }
    const std::array<PauliTerm, 9> &terms() const noexcept {
        return terms_;
    }

    double weight(PauliString p) const {
        for (const auto &t : terms_) {
            if (t.string == p) {
                return t.weight;
            }
        }
        throw ValidationError("string " + p.str() + " is not part of the Hamiltonian");
    }

    std::array<double, 9> weights() const {
        std::array<double, 9> w{};
        for (std::size_t k = 0; k < 9; k++) {
            w[k] = terms_[k].weight;
        }
        return w;
    }

   private:
    double distance_;
    std::array<PauliTerm, 9> terms_{};
};

using HamiltonianTable = std::vector<MolecularHamiltonian>;

/// Coefficients for R in {0.05, ..., 2.5} A.
inline HamiltonianTable builtin_table() {
    struct Row {
        double r;
        std::array<double, 9> w;
    };
    // Columns: II, IZ, ZI, ZZ, IX, ZX, XI, XZ, XX.
    static const Row rows[] = {
        {0.05, {33.9557, -2.4784, -2.4784, 0.2746, -0.1515, 0.1515, -0.1515, 0.1515, 0.1412}},
        {0.1, {13.3605, -2.4368, -2.4368, 0.2081, -0.1626, 0.1626, -0.1626, 0.1626, 0.2097}},
        {0.2, {3.633, -2.2899, -2.2899, 0.1176, -0.1405, 0.1405, -0.1405, 0.1405, 0.3027}},
        {0.5, {-2.3275, -1.5236, -1.5236, 0.1115, -0.157, 0.157, -0.157, 0.157, 0.3309}},
        {0.7, {-3.3893, -1.2073, -1.2073, 0.1626, -0.1968, 0.1968, -0.1968, 0.1968, 0.3052}},
        {0.9, {-3.8505, -1.0466, -1.0466, 0.2356, -0.2288, 0.2288, -0.2288, 0.2288, 0.2613}},
        {1.1, {-4.0539, -0.982, -0.982, 0.3225, -0.243, 0.243, -0.243, 0.243, 0.2053}},
        {1.5, {-4.1594, -0.991, -0.991, 0.4945, -0.2086, 0.2086, -0.2086, 0.2086, 0.0948}},
        {2.0, {-4.1347, -1.0605, -1.0605, 0.6342, -0.1119, 0.1119, -0.1119, 0.1119, 0.0212}},
        {2.5, {-4.0918, -1.1128, -1.1128, 0.701, -0.0454, 0.0454, -0.0454, 0.0454, 0.0032}},
    };
    HamiltonianTable table;
    for (const auto &row : rows) {
        table.emplace_back(row.r, row.w);
    }
    return table;
}

inline Operator4 build_matrix(const MolecularHamiltonian &h) {
    Operator4 m;
    for (const auto &t : h.terms()) {
        m += Complex{t.weight} * pauli_matrix(t.string);
    }
    return m;
}

/// Exact ground-state energy of the tabulated Hamiltonian.
inline double oracle_energy(const MolecularHamiltonian &h) {
    return min_eigenvalue(build_matrix(h));
}

struct MeasurementGroup {
    int setting_id = 0;
    std::vector<PauliString> strings;
    /// Nondegenerate joint observable whose eigenbasis diagonalizes every
    /// member of the group.
    PauliString basis_setting;
};

inline std::array<MeasurementGroup, 4> measurement_groups(const MolecularHamiltonian &) {
    auto p = [](std::string_view s) { return PauliString::parse(s); };
    return {{
        {1, {p("II"), p("IZ"), p("ZI"), p("ZZ")}, p("ZZ")},
        {2, {p("IX"), p("ZX")}, p("ZX")},
        {3, {p("XI"), p("XZ")}, p("XZ")},
        {4, {p("XX")}, p("XX")},
    }};
}

/// sum_j w_j <sigma_j>. <II> is fixed at 1 when absent; every other string
/// must be present.
inline double combine_expectations(const MolecularHamiltonian &h, const PauliEstimates &estimates) {
    const PauliString identity{};
    double e = 0;
    for (const auto &t : h.terms()) {
        auto it = estimates.find(t.string);
        if (it == estimates.end()) {
            if (t.string == identity) {
                e += t.weight;
                continue;
            }
            throw MissingEstimate("no estimate for " + t.string.str());
        }
        e += t.weight * it->second;
    }
    return e;
}

inline const MolecularHamiltonian &find_distance(const HamiltonianTable &table, double r) {
    for (const auto &h : table) {
        if (std::abs(h.distance() - r) < 1e-9) {
            return h;
        }
    }
    std::ostringstream msg;
    msg << "distance " << r << " A is not in the Hamiltonian table";
    throw UnknownDistance(msg.str());
}

inline constexpr std::string_view kTableHeader = "R,II,IZ,ZI,ZZ,IX,ZX,XI,XZ,XX";

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    while (true) {
        auto pos = line.find(',');
        cells.push_back(trim(line.substr(0, pos)));
        if (pos == std::string_view::npos) {
            break;
        }
        line.remove_prefix(pos + 1);
    }
    return cells;
}

inline double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("cannot parse '" + std::string(cell) + "' as a number", row, col);
    }
    return v;
}

}  // namespace detail

inline HamiltonianTable sorted_by_distance(HamiltonianTable table) {
    std::stable_sort(table.begin(), table.end(),
                     [](const auto &a, const auto &b) { return a.distance() < b.distance(); });
    return table;
}

/// Parses the CSV coefficient schema. Rows and columns are reported 1-based
/// in errors; the header is row 1.
inline HamiltonianTable parse_table_csv(std::istream &in) {
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    HamiltonianTable table;
    while (std::getline(in, line)) {
        row++;
        std::string_view view = detail::trim(line);
        if (view.empty()) {
            continue;
        }
        auto cells = detail::split_commas(view);
        if (!header_seen) {
            auto expected = detail::split_commas(kTableHeader);
            if (cells != expected) {
                throw ParseError("header must be '" + std::string(kTableHeader) + "'", row, 1);
            }
            header_seen = true;
            continue;
        }
        if (cells.size() != 10) {
            throw ParseError("expected 10 cells, found " + std::to_string(cells.size()), row, cells.size());
        }
        double r = detail::parse_cell(cells[0], row, 1);
        std::array<double, 9> w{};
        for (std::size_t k = 0; k < 9; k++) {
            w[k] = detail::parse_cell(cells[k + 1], row, k + 2);
        }
        if (!std::isfinite(r) || r <= 0) {
            throw ValidationError("row " + std::to_string(row) + ": R must be positive and finite");
        }
        for (std::size_t k = 0; k < 9; k++) {
            if (!std::isfinite(w[k])) {
                throw ValidationError("row " + std::to_string(row) + ": non-finite weight in column " +
                                      std::to_string(k + 2));
            }
        }
        table.emplace_back(r, w);
    }
    if (!header_seen) {
        throw ParseError("empty table file", 1, 1);
    }
    return sorted_by_distance(std::move(table));
}

inline HamiltonianTable load_table_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open table file '" + path + "'");
    }
    return parse_table_csv(in);
}

/// Writes the table in the same schema with round-trip precision.
inline void write_table_csv(std::ostream &out, const HamiltonianTable &table) {
    out << kTableHeader << '\n';
    char buf[32];
    for (const auto &h : table) {
        std::snprintf(buf, sizeof buf, "%.17g", h.distance());
        out << buf;
        for (double w : h.weights()) {
            std::snprintf(buf, sizeof buf, "%.17g", w);
            out << ',' << buf;
        }
        out << '\n';
    }
}

/// Rows of `extra` replace rows of `base` with the same distance; the rest
/// are appended. Result is sorted by distance.
inline HamiltonianTable merge_tables(HamiltonianTable base, const HamiltonianTable &extra) {
    for (const auto &h : extra) {
        auto it = std::find_if(base.begin(), base.end(),
                               [&](const auto &b) { return std::abs(b.distance() - h.distance()) < 1e-9; });
        if (it != base.end()) {
            *it = h;
        } else {
            base.push_back(h);
        }
    }
    return sorted_by_distance(std::move(base));
}

}  // namespace qqvqe
