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

// Derivative-free minimizers: Nelder-Mead, Powell's direction-set method and
// COBYLA (linear models on a simplex inside a shrinking trust region; used
// here without constraints).
//
// Every objective evaluation is one "QPU call" and is recorded in the trace.
// The evaluation budget is enforced by the recorder, so no optimizer can
// exceed max_evals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qqvqe/errors.hpp"

namespace qqvqe {

enum class Method { NelderMead, Powell, Cobyla };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::NelderMead:
            return "nelder-mead";
        case Method::Powell:
            return "powell";
        case Method::Cobyla:
            return "cobyla";
    }
    return "?";
}

inline Method parse_method(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "nelder-mead" || lower == "neldermead" || lower == "nm") {
        return Method::NelderMead;
    }
    if (lower == "powell") {
        return Method::Powell;
    }
    if (lower == "cobyla") {
        return Method::Cobyla;
    }
    throw ValidationError("unknown optimizer '" + std::string(s) + "'");
}

struct OptimizerConfig {
    Method method = Method::Cobyla;
    /// Objective-value tolerance; also the success threshold.
    double ftol = 0.01;
    int max_evals = 300;
    /// Initial simplex edge / direction length / trust radius, in radians.
    double initial_step = 0.3;
    /// COBYLA final trust radius and Nelder-Mead final simplex size. For
    /// COBYLA 0 derives it from ftol and initial_step; for Nelder-Mead 0
    /// disables the size test.
    double final_step = 0;
    /// Extra runs restarted from the best point after a run stops early;
    /// they share the max_evals budget.
    int restarts = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(ftol > 0)) {
            throw ValidationError("ftol must be positive");
        }
        if (max_evals < 1) {
            throw ValidationError("max_evals must be at least 1");
        }
        if (!(initial_step > 0)) {
            throw ValidationError("initial_step must be positive");
        }
        if (!(final_step >= 0)) {
            throw ValidationError("final_step must be nonnegative");
        }
        if (restarts < 0) {
            throw ValidationError("restarts must be nonnegative");
        }
    }
};

struct TracePoint {
    std::vector<double> theta;
    double value = 0;
};

struct OptResult {
    std::vector<double> best_theta;
    double best_value = std::numeric_limits<double>::infinity();
    int n_evals = 0;
    std::vector<TracePoint> trace;
    bool converged = false;
};

/// Objective type accepted by minimize(); the templates accept any callable
/// double(std::span<const double>).
using ObjectiveFn = std::function<double(std::span<const double>)>;

/// |best_value - e0| < tol.
inline bool is_success(const OptResult &result, double e0, double tol = 0.01) {
    return std::abs(result.best_value - e0) < tol;
}

namespace detail {

struct BudgetExhausted {};

/// Counts calls, records the trace and keeps the running best.
template <typename F>
class Recorder {
   public:
    Recorder(F &f, int max_evals) : f_(f), max_evals_(max_evals) {
    }

    double operator()(std::span<const double> x) {
        if (static_cast<int>(result_.trace.size()) >= max_evals_) {
            throw BudgetExhausted{};
        }
        double v = f_(x);
        result_.trace.push_back({std::vector<double>(x.begin(), x.end()), v});
        result_.n_evals++;
        if (v < result_.best_value || result_.best_theta.empty()) {
            result_.best_value = v;
            result_.best_theta.assign(x.begin(), x.end());
        }
        return v;
    }

    OptResult finish(bool converged) {
        result_.converged = converged;
        return std::move(result_);
    }

   private:
    F &f_;
    int max_evals_;
    OptResult result_;
};

using Vec = std::vector<double>;

inline Vec axpy(const Vec &x, double a, const Vec &d) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); i++) {
        out[i] = x[i] + a * d[i];
    }
    return out;
}

inline double dot(const Vec &a, const Vec &b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm2(const Vec &a) {
    return std::sqrt(dot(a, a));
}

template <typename F>
OptResult run_guarded(F &f, int max_evals, auto &&body) {
    Recorder<F> rec(f, max_evals);
    bool converged = false;
    try {
        converged = body(rec);
    } catch (const BudgetExhausted &) {
        converged = false;
    }
    return rec.finish(converged);
}

}  // namespace detail

/// Nelder-Mead simplex with reflection 1, expansion 2, contraction 1/2 and
/// shrink 1/2. Stops when max f - min f over the simplex drops below ftol
/// and, if final_step is set, every vertex lies within final_step of the best
/// one in each coordinate.
template <typename F>
OptResult nelder_mead(F &&f, std::span<const double> x0, const OptimizerConfig &cfg) {
    cfg.validate();
    using detail::Vec;
    return detail::run_guarded(f, cfg.max_evals, [&](auto &eval) {
        const std::size_t n = x0.size();
        std::vector<Vec> xs(n + 1, Vec(x0.begin(), x0.end()));
        Vec fs(n + 1);
        for (std::size_t i = 1; i <= n; i++) {
            xs[i][i - 1] += cfg.initial_step;
        }
        for (std::size_t i = 0; i <= n; i++) {
            fs[i] = eval(xs[i]);
        }
        std::vector<std::size_t> order(n + 1);
        while (true) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
            std::vector<Vec> sx(n + 1);
            Vec sf(n + 1);
            for (std::size_t i = 0; i <= n; i++) {
                sx[i] = xs[order[i]];
                sf[i] = fs[order[i]];
            }
            xs = std::move(sx);
            fs = std::move(sf);

            if (fs[n] - fs[0] < cfg.ftol) {
                double spread = 0;
                for (std::size_t i = 1; i <= n; i++) {
                    for (std::size_t k = 0; k < n; k++) {
                        spread = std::max(spread, std::abs(xs[i][k] - xs[0][k]));
                    }
                }
                if (spread <= cfg.final_step || cfg.final_step == 0) {
                    return true;
                }
            }

            Vec centroid(n, 0.0);
            for (std::size_t i = 0; i < n; i++) {
                for (std::size_t k = 0; k < n; k++) {
                    centroid[k] += xs[i][k] / static_cast<double>(n);
                }
            }
            Vec away(n);
            for (std::size_t k = 0; k < n; k++) {
                away[k] = centroid[k] - xs[n][k];
            }

            Vec xr = detail::axpy(centroid, 1.0, away);
            double fr = eval(xr);
            if (fr < fs[0]) {
                Vec xe = detail::axpy(centroid, 2.0, away);
                double fe = eval(xe);
                if (fe < fr) {
                    xs[n] = std::move(xe);
                    fs[n] = fe;
                } else {
                    xs[n] = std::move(xr);
                    fs[n] = fr;
                }
                continue;
            }
            if (fr < fs[n - 1]) {
                xs[n] = std::move(xr);
                fs[n] = fr;
                continue;
            }
            if (fr < fs[n]) {
                Vec xc = detail::axpy(centroid, 0.5, away);
                double fc = eval(xc);
                if (fc <= fr) {
                    xs[n] = std::move(xc);
                    fs[n] = fc;
                    continue;
                }
            } else {
                Vec xcc = detail::axpy(centroid, -0.5, away);
                double fcc = eval(xcc);
                if (fcc < fs[n]) {
                    xs[n] = std::move(xcc);
                    fs[n] = fcc;
                    continue;
                }
            }
            for (std::size_t i = 1; i <= n; i++) {
                for (std::size_t k = 0; k < n; k++) {
                    xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
                }
                fs[i] = eval(xs[i]);
            }
        }
    });
}

namespace detail {

struct LineMin {
    double alpha = 0;
    double value = 0;
};

/// Minimizes phi(alpha) = f(x + alpha d) starting from phi(0) = f0.
/// Bracketing by golden-ratio expansion, then Brent's parabolic/golden
/// search to relative tolerance `tol` in alpha.
template <typename Phi>
LineMin line_minimize(Phi &&phi, double f0, double tol) {
    constexpr double kGold = 1.618033988749895;
    constexpr double kCGold = 0.3819660112501051;
    constexpr double kGrowLimit = 110.0;
    constexpr double kTiny = 1e-21;

    double a = 0, b = 1;
    double fa = f0, fb = phi(b);
    if (fb > fa) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = b + kGold * (b - a);
    double fc = phi(c);
    while (fb > fc) {
        double r = (b - a) * (fb - fc);
        double q = (b - c) * (fb - fa);
        double denom = 2 * std::copysign(std::max(std::abs(q - r), kTiny), q - r);
        double u = b - ((b - c) * q - (b - a) * r) / denom;
        double ulim = b + kGrowLimit * (c - b);
        double fu;
        if ((b - u) * (u - c) > 0) {
            fu = phi(u);
            if (fu < fc) {
                a = b;
                fa = fb;
                b = u;
                fb = fu;
                break;
            }
            if (fu > fb) {
                c = u;
                fc = fu;
                break;
            }
            u = c + kGold * (c - b);
            fu = phi(u);
        } else if ((c - u) * (u - ulim) > 0) {
            fu = phi(u);
            if (fu < fc) {
                b = c;
                c = u;
                u = c + kGold * (c - b);
                fb = fc;
                fc = fu;
                fu = phi(u);
            }
        } else if ((u - ulim) * (ulim - c) >= 0) {
            u = ulim;
            fu = phi(u);
        } else {
            u = c + kGold * (c - b);
            fu = phi(u);
        }
        a = b;
        b = c;
        c = u;
        fa = fb;
        fb = fc;
        fc = fu;
    }

    // Brent on [min(a,c), max(a,c)] with best point b.
    double lo = std::min(a, c), hi = std::max(a, c);
    double x = b, w = b, v = b;
    double fx = fb, fw = fb, fv = fb;
    double d = 0, e = 0;
    for (int iter = 0; iter < 100; iter++) {
        double mid = 0.5 * (lo + hi);
        double tol1 = tol * std::abs(x) + 1e-11;
        double tol2 = 2 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (hi - lo)) {
            break;
        }
        bool golden = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2 * (q - r);
            if (q > 0) {
                p = -p;
            }
            q = std::abs(q);
            double etemp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (lo - x) && p < q * (hi - x)) {
                d = p / q;
                double u = x + d;
                if (u - lo < tol2 || hi - u < tol2) {
                    d = std::copysign(tol1, mid - x);
                }
                golden = false;
            }
        }
        if (golden) {
            e = (x >= mid) ? lo - x : hi - x;
            d = kCGold * e;
        }
        double u = (std::abs(d) >= tol1) ? x + d : x + std::copysign(tol1, d);
        double fu = phi(u);
        if (fu <= fx) {
            if (u >= x) {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (u < x) {
                lo = u;
            } else {
                hi = u;
            }
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return {x, fx};
}

}  // namespace detail

/// Powell's direction-set method. Each iteration line-minimizes along every
/// direction, then tries the extrapolated point 2x - x_start and, when
/// Powell's test passes, replaces the direction of largest decrease by the
/// net displacement. Stops when one full iteration lowers f by less than
/// ftol.
template <typename F>
OptResult powell(F &&f, std::span<const double> x0, const OptimizerConfig &cfg) {
    cfg.validate();
    using detail::Vec;
    // Near a minimum f changes quadratically with the step, so resolving
    // alpha to a relative sqrt(ftol) resolves f to about ftol.
    const double line_tol = std::sqrt(cfg.ftol);
    return detail::run_guarded(f, cfg.max_evals, [&](auto &eval) {
        const std::size_t n = x0.size();
        Vec x(x0.begin(), x0.end());
        std::vector<Vec> dirs(n, Vec(n, 0.0));
        for (std::size_t i = 0; i < n; i++) {
            dirs[i][i] = cfg.initial_step;
        }
        double fval = eval(x);

        auto search = [&](Vec &point, Vec &dir, double f_start) {
            auto phi = [&](double alpha) { return eval(detail::axpy(point, alpha, dir)); };
            detail::LineMin lm = detail::line_minimize(phi, f_start, line_tol);
            if (lm.value < f_start) {
                point = detail::axpy(point, lm.alpha, dir);
                for (double &c : dir) {
                    c *= lm.alpha;
                }
                return lm.value;
            }
            return f_start;
        };

        while (true) {
            double f_start = fval;
            Vec x_start = x;
            std::size_t biggest = 0;
            double biggest_drop = 0;
            for (std::size_t i = 0; i < n; i++) {
                double before = fval;
                Vec dir = dirs[i];
                fval = search(x, dir, fval);
                if (detail::norm2(dir) > 0) {
                    dirs[i] = dir;
                }
                if (before - fval > biggest_drop) {
                    biggest_drop = before - fval;
                    biggest = i;
                }
            }
            if (f_start - fval < cfg.ftol) {
                return true;
            }
            Vec net(n), extrapolated(n);
            for (std::size_t k = 0; k < n; k++) {
                net[k] = x[k] - x_start[k];
                extrapolated[k] = 2 * x[k] - x_start[k];
            }
            double f_ext = eval(extrapolated);
            if (f_start > f_ext) {
                double t = 2 * (f_start + f_ext - 2 * fval);
                double tmp = f_start - fval - biggest_drop;
                t *= tmp * tmp;
                tmp = f_start - f_ext;
                t -= biggest_drop * tmp * tmp;
                if (t < 0) {
                    fval = search(x, net, fval);
                    dirs[biggest] = dirs[n - 1];
                    dirs[n - 1] = net;
                }
            }
        }
    });
}

/// COBYLA without constraints.
///
/// Keeps n + 1 interpolation points as a pole x0 (lowest f) plus
/// displacements sim[:, j], with simi = sim^{-1}. The linear model gradient
/// is g = simi^T (f_j - f_0). Trial steps go to the trust-region boundary
/// along -g; geometry steps restore an acceptable simplex when an edge is
/// too long or a vertex too close to the opposite face. The radius rho is
/// halved when progress stalls, down to rho_end = ftol * initial_step.
template <typename F>
OptResult cobyla(F &&f, std::span<const double> x_init, const OptimizerConfig &cfg) {
    cfg.validate();
    using detail::Vec;
    constexpr double kAlpha = 0.25;  // vertex-distance acceptability
    constexpr double kBeta = 2.1;    // edge-length acceptability
    constexpr double kGamma = 0.5;   // geometry step length
    constexpr double kDelta = 1.1;   // trial-step vertex replacement

    const double rho_begin = cfg.initial_step;
    const double rho_end =
        std::min(rho_begin, cfg.final_step > 0 ? cfg.final_step : cfg.ftol * cfg.initial_step);

    return detail::run_guarded(f, cfg.max_evals, [&](auto &eval) {
        const std::size_t n = x_init.size();
        double rho = rho_begin;

        Vec x0(x_init.begin(), x_init.end());
        // sim[j] is the displacement of vertex j from the pole; simi[j] is
        // row j of the inverse of the matrix whose columns are sim[j].
        std::vector<Vec> sim(n, Vec(n, 0.0));
        std::vector<Vec> simi(n, Vec(n, 0.0));
        Vec fv(n);
        double f0 = eval(x0);

        for (std::size_t j = 0; j < n; j++) {
            sim[j][j] = rho;
            simi[j][j] = 1 / rho;
        }
        for (std::size_t j = 0; j < n; j++) {
            Vec x = x0;
            x[j] += rho;
            double fj = eval(x);
            if (fj < f0) {
                // New vertex becomes the pole: every displacement built so
                // far gains -rho in component j.
                x0 = x;
                fv[j] = f0;
                f0 = fj;
                for (std::size_t k = 0; k <= j; k++) {
                    sim[k][j] = -rho;
                }
                for (std::size_t k = 0; k <= j; k++) {
                    double s = 0;
                    for (std::size_t i = k; i <= j; i++) {
                        s -= simi[i][k];
                    }
                    simi[j][k] = s;
                }
            } else {
                fv[j] = fj;
            }
        }

        // Replace vertex `drop` by pole + dx and update the inverse.
        auto replace_vertex = [&](std::size_t drop, const Vec &dx) {
            sim[drop] = dx;
            double t = detail::dot(simi[drop], dx);
            for (double &c : simi[drop]) {
                c /= t;
            }
            for (std::size_t j = 0; j < n; j++) {
                if (j == drop) {
                    continue;
                }
                double s = detail::dot(simi[j], dx);
                for (std::size_t i = 0; i < n; i++) {
                    simi[j][i] -= s * simi[drop][i];
                }
            }
        };

        // Moves the lowest vertex into the pole position.
        auto settle_pole = [&]() {
            std::size_t best = n;
            double fbest = f0;
            for (std::size_t j = 0; j < n; j++) {
                if (fv[j] < fbest) {
                    best = j;
                    fbest = fv[j];
                }
            }
            if (best == n) {
                return;
            }
            Vec shift = sim[best];
            std::swap(fv[best], f0);
            for (std::size_t i = 0; i < n; i++) {
                x0[i] += shift[i];
            }
            for (std::size_t j = 0; j < n; j++) {
                for (std::size_t i = 0; i < n; i++) {
                    sim[j][i] -= shift[i];
                }
            }
            for (std::size_t i = 0; i < n; i++) {
                sim[best][i] = -shift[i];
            }
            for (std::size_t i = 0; i < n; i++) {
                double s = 0;
                for (std::size_t k = 0; k < n; k++) {
                    s -= simi[k][i];
                }
                simi[best][i] = s;
            }
        };

        Vec vsig(n), veta(n);
        bool skip_geometry = true;
        while (true) {
            settle_pole();

            bool acceptable = true;
            for (std::size_t j = 0; j < n; j++) {
                vsig[j] = 1 / detail::norm2(simi[j]);
                veta[j] = detail::norm2(sim[j]);
                if (vsig[j] < kAlpha * rho || veta[j] > kBeta * rho) {
                    acceptable = false;
                }
            }

            Vec g(n, 0.0);
            for (std::size_t i = 0; i < n; i++) {
                for (std::size_t j = 0; j < n; j++) {
                    g[i] += (fv[j] - f0) * simi[j][i];
                }
            }

            if (!skip_geometry && !acceptable) {
                std::size_t drop = n;
                double worst = kBeta * rho;
                for (std::size_t j = 0; j < n; j++) {
                    if (veta[j] > worst) {
                        drop = j;
                        worst = veta[j];
                    }
                }
                if (drop == n) {
                    for (std::size_t j = 0; j < n; j++) {
                        if (vsig[j] < worst) {
                            drop = j;
                            worst = vsig[j];
                        }
                    }
                }
                Vec dx(n);
                double scale = kGamma * rho * vsig[drop];
                for (std::size_t i = 0; i < n; i++) {
                    dx[i] = scale * simi[drop][i];
                }
                if (detail::dot(g, dx) > 0) {
                    for (double &c : dx) {
                        c = -c;
                    }
                }
                replace_vertex(drop, dx);
                fv[drop] = eval(detail::axpy(x0, 1.0, dx));
                skip_geometry = false;
                continue;
            }

            // Trial step: minimize the linear model on the ball of radius rho.
            double gnorm = detail::norm2(g);
            bool reduce = false;
            if (gnorm == 0 || !std::isfinite(gnorm)) {
                reduce = true;
            } else {
                Vec dx(n);
                for (std::size_t i = 0; i < n; i++) {
                    dx[i] = -rho * g[i] / gnorm;
                }
                double predicted = rho * gnorm;
                double f_new = eval(detail::axpy(x0, 1.0, dx));
                double actual = f0 - f_new;

                // Choose the vertex to drop: largest |simi_j . dx|, preferring
                // far vertices when the step is accepted.
                std::size_t drop = n;
                double ratio = actual <= 0 ? 1.0 : 0.0;
                Vec sigbar(n);
                for (std::size_t j = 0; j < n; j++) {
                    double t = std::abs(detail::dot(simi[j], dx));
                    if (t > ratio) {
                        drop = j;
                        ratio = t;
                    }
                    sigbar[j] = t * vsig[j];
                }
                double edge_max = kDelta * rho;
                std::size_t far = n;
                for (std::size_t j = 0; j < n; j++) {
                    if (sigbar[j] >= kAlpha * rho || sigbar[j] >= vsig[j]) {
                        double t = veta[j];
                        if (actual > 0) {
                            Vec diff(n);
                            for (std::size_t i = 0; i < n; i++) {
                                diff[i] = dx[i] - sim[j][i];
                            }
                            t = detail::norm2(diff);
                        }
                        if (t > edge_max) {
                            far = j;
                            edge_max = t;
                        }
                    }
                }
                if (far != n) {
                    drop = far;
                }
                if (drop == n) {
                    reduce = true;
                } else {
                    replace_vertex(drop, dx);
                    fv[drop] = f_new;
                    if (actual > 0 && actual >= 0.1 * predicted) {
                        skip_geometry = true;
                        continue;
                    }
                    reduce = true;
                }
            }

            if (reduce) {
                if (!acceptable) {
                    skip_geometry = false;
                    continue;
                }
                if (rho <= rho_end) {
                    return true;
                }
                rho *= 0.5;
                if (rho <= 1.5 * rho_end) {
                    rho = rho_end;
                }
                skip_geometry = true;
            }
        }
    });
}

namespace detail {

template <typename F>
OptResult minimize_once(F &&f, std::span<const double> x0, const OptimizerConfig &cfg) {
    switch (cfg.method) {
        case Method::NelderMead:
            return nelder_mead(f, x0, cfg);
        case Method::Powell:
            return powell(f, x0, cfg);
        case Method::Cobyla:
            return cobyla(f, x0, cfg);
    }
    throw ValidationError("unknown optimizer method");
}

}  // namespace detail

/// Runs the configured method, then up to cfg.restarts more runs from the
/// best point so far while evaluations remain. The trace is concatenated.
template <typename F>
OptResult minimize(F &&f, std::span<const double> x0, const OptimizerConfig &cfg) {
    cfg.validate();
    OptResult total = detail::minimize_once(f, x0, cfg);
    for (int r = 0; r < cfg.restarts && total.n_evals < cfg.max_evals; r++) {
        OptimizerConfig next = cfg;
        next.max_evals = cfg.max_evals - total.n_evals;
        std::vector<double> start = total.best_theta;
        OptResult more = detail::minimize_once(f, std::span<const double>(start), next);
        total.n_evals += more.n_evals;
        total.converged = more.converged;
        for (auto &t : more.trace) {
            total.trace.push_back(std::move(t));
        }
        if (more.best_value < total.best_value) {
            total.best_value = more.best_value;
            total.best_theta = more.best_theta;
        }
    }
    return total;
}

}  // namespace qqvqe
