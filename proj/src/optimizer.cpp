// Copyright 2026 The dqkd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dqkd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "dqkd/errors.hpp"
#include "dqkd/keyrate.hpp"

namespace dqkd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundaryTol = 1e-12;
constexpr double kTieTol = 1e-12;
constexpr int kDims = 8; // t, p1, q1, s0, s1, r1, u0, u1

// Feasible segment of the boundary line, parameterized by q0 so that the
// eliminated p0 is divided by c0^2 >= 1/2.
struct Segment {
    double c0sq;
    double c1sq;
    double x; // 2 c++^2 - 1
    double q_hi;
    double q_lo;

    [[nodiscard]] std::pair<double, double> at(double t) const {
        t = std::clamp(t, 0.0, 1.0);
        const double q0 = q_hi + t * (q_lo - q_hi);
        const double p0 = (x - c1sq * q0) / c0sq;
        return {p0, q0};
    }
};

Segment make_segment(const FidelityConstraint &c) {
    Segment seg{c.c0sq, 1.0 - c.c0sq, 2.0 * c.cppsq - 1.0, 1.0, -1.0};
    if (seg.c1sq > 0.0) {
        seg.q_lo = std::max(-1.0, (seg.x - seg.c0sq) / seg.c1sq);
        seg.q_hi = std::min(1.0, (seg.x + seg.c0sq) / seg.c1sq);
    }
    if (seg.q_lo > seg.q_hi) {
        throw Infeasible("maximize_s_be: no (p0, q0) in [-1, 1]^2 satisfies the boundary identity");
    }
    return seg;
}

AttackParams params_at(const Segment &seg, const std::vector<double> &x) {
    const auto [p0, q0] = seg.at(x[0]);
    AttackParams a;
    a.c00 = a.c11 = std::sqrt(seg.c0sq);
    a.c01 = a.c10 = std::sqrt(seg.c1sq);
    a.p = Complex(p0, x[1]);
    a.q = Complex(q0, x[2]);
    a.s = Complex(x[3], x[4]);
    a.r = Complex(-x[3], x[5]);
    a.u = Complex(x[6], x[7]);
    a.v = -a.u;
    return a;
}

double slice_deviation(const AttackParams &a) {
    return std::max({std::abs(a.r.real()), std::abs(a.s.real()), std::abs(a.q.imag()),
                     std::abs(a.p.imag())});
}

struct Candidate {
    std::vector<double> x;
    double entropy = -kInf;
    double tie_norm = kInf;
};

bool better(const Candidate &a, const Candidate &b) {
    if (a.entropy > b.entropy + kTieTol) {
        return true;
    }
    if (b.entropy > a.entropy + kTieTol) {
        return false;
    }
    return a.tie_norm < b.tie_norm;
}

} // namespace

double entropy_numeric(const AttackParams &params) {
    return von_neumann_entropy(build_rho_abe(params).rho_be);
}

double entropy_objective(const AttackParams &params) {
    if (params.symmetric_amplitudes()) {
        const BeSpectrumClosedForm cf = be_spectrum_closed_form(params);
        Spectrum s;
        s.eigenvalues.assign(cf.lambda.begin(), cf.lambda.end());
        for (double &v : s.eigenvalues) {
            v = std::max(v, 0.0);
        }
        return entropy_bits(s);
    }
    return entropy_numeric(params);
}

namespace detail {

SimplexResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                          std::vector<double> x0, const std::vector<double> &step,
                          int max_evaluations, double ftol) {
    const std::size_t n = x0.size();
    SimplexResult out;
    // Hard cap: once the budget is spent, further probes count as +inf.
    auto eval = [&](const std::vector<double> &x) {
        if (out.evaluations >= max_evaluations) {
            return kInf;
        }
        ++out.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : kInf;
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    vals[0] = eval(x0);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += step[i];
        vals[i + 1] = eval(pts[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    while (out.evaluations < max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];
        if (std::isfinite(vals[worst]) && vals[worst] - vals[best] <= ftol) {
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == worst) {
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) {
                centroid[i] += pts[k][i] / static_cast<double>(n);
            }
        }
        auto along = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = centroid[i] + coef * (pts[worst][i] - centroid[i]);
            }
            return x;
        };

        std::vector<double> xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < vals[best]) {
            std::vector<double> xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = std::move(xe);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = std::move(xr);
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        std::vector<double> xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = std::move(xc);
            vals[worst] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == best) {
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) {
                pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
            }
            vals[k] = eval(pts[k]);
        }
    }
    const auto it = std::min_element(vals.begin(), vals.end());
    out.x = pts[static_cast<std::size_t>(it - vals.begin())];
    out.value = *it;
    return out;
}

} // namespace detail

OptResult maximize_s_be(const FidelityConstraint &constraint, int budget,
                        std::uint64_t seed, const OptimizerSettings &settings) {
    for (double x : {constraint.c0sq, constraint.cppsq}) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw InvalidArgument("maximize_s_be: fidelity " + std::to_string(x) +
                                  " outside [0, 1]");
        }
    }
    const double xi = constraint.cppsq - (1.0 - constraint.c0sq);
    if (xi < 0.5 - kBoundaryTol) {
        throw BoundaryViolation("maximize_s_be: f_{+,-} + f_{0,1} = " +
                                std::to_string(constraint.cppsq + constraint.c0sq) +
                                " < 3/2");
    }
    if (budget < 1) {
        throw InvalidArgument("maximize_s_be: budget must be positive");
    }
    const Segment seg = make_segment(constraint);

    int evaluations = 0;
    auto entropy_at = [&](const std::vector<double> &x) {
        ++evaluations;
        const AttackParams a = params_at(seg, x);
        try {
            return entropy_objective(a);
        } catch (const ValidationError &) {
            return -kInf;
        }
    };
    auto candidate = [&](std::vector<double> x, std::optional<double> known = std::nullopt) {
        Candidate c;
        c.entropy = known ? *known : entropy_at(x);
        c.tie_norm = slice_deviation(params_at(seg, x));
        c.x = std::move(x);
        return c;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    // Evaluations held back for the tie-break stage.
    const int reserve = std::min(12, budget / 4);
    const int search_budget = budget - reserve;

    // Stage 1: grid along the segment, plain slice plus seeded jitter.
    std::vector<Candidate> grid;
    const int g = std::max(2, settings.grid_points);
    for (int k = 0; k < g && evaluations < search_budget; ++k) {
        std::vector<double> x(kDims, 0.0);
        x[0] = static_cast<double>(k) / (g - 1);
        grid.push_back(candidate(x));
        for (int j = 0; j < settings.grid_jitter && evaluations < search_budget; ++j) {
            std::vector<double> xj = x;
            for (int i = 1; i < kDims; ++i) {
                xj[static_cast<std::size_t>(i)] = 0.05 * unif(rng);
            }
            grid.push_back(candidate(xj));
        }
    }
    std::sort(grid.begin(), grid.end(), better);
    Candidate best = grid.front();

    // Stage 2: simplex refinement from the best grid points.
    const int starts = std::min<int>(settings.refine_starts, static_cast<int>(grid.size()));
    for (int k = 0; k < starts && evaluations < search_budget; ++k) {
        const int remaining = search_budget - evaluations;
        const int share = remaining / (starts - k);
        if (share <= kDims + 1) {
            break;
        }
        std::vector<double> step(kDims);
        step[0] = 0.5 / (g - 1);
        for (int i = 1; i < kDims; ++i) {
            step[static_cast<std::size_t>(i)] = (unif(rng) < 0.0 ? -1.0 : 1.0) * 0.02;
        }
        auto neg = [&](const std::vector<double> &x) { return -entropy_at(x); };
        detail::SimplexResult sr = detail::nelder_mead(
            neg, grid[static_cast<std::size_t>(k)].x, step, share, settings.convergence_tol);
        Candidate c = candidate(sr.x, -sr.value);
        if (better(c, best)) {
            best = std::move(c);
        }
    }

    // Tie-break: entropy-neutral shrink of the non-segment coordinates.
    for (double scale = 0.0; scale < 0.999 && evaluations < budget;
         scale = scale == 0.0 ? 0.5 : 0.5 + scale / 2.0) {
        std::vector<double> x = best.x;
        for (int i = 1; i < kDims; ++i) {
            x[static_cast<std::size_t>(i)] *= scale;
        }
        Candidate c = candidate(x);
        if (c.entropy >= best.entropy - kTieTol) {
            if (c.tie_norm <= best.tie_norm) {
                best = std::move(c);
            }
            break;
        }
    }

    OptResult res;
    res.best_params = params_at(seg, best.x);
    res.best_entropy = best.entropy;
    res.closed_form_entropy =
        s_be_max(constraint.c0sq, 1.0 - constraint.c0sq, constraint.cppsq);
    res.gap = res.closed_form_entropy - res.best_entropy;
    res.iterations = evaluations;
    res.slice_deviation = slice_deviation(res.best_params);
    res.counterexample = res.best_entropy > res.closed_form_entropy + 1e-8;
    if (std::isfinite(res.best_entropy)) {
        const ChannelFidelities f = forward_fidelities(res.best_params);
        res.constraint_residual =
            std::max({std::abs(f.f0 - constraint.c0sq), std::abs(f.f1 - constraint.c0sq),
                      std::abs(f.fplus - constraint.cppsq),
                      std::abs(f.fminus - constraint.cppsq)});
    } else {
        throw Infeasible("maximize_s_be: no admissible attack found");
    }
    res.converged = std::abs(res.gap) <= settings.certification_gap &&
                    res.constraint_residual <= constraint.tolerance;
    return res;
}

} // namespace dqkd
