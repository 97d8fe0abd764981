#pragma once

// Action-cascade machinery: region classification, the necessary/sufficient
// start conditions, hazard-ratio diagnostics and time-to-cascade sweeps.

#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "soclearn/belief.hpp"
#include "soclearn/signal_model.hpp"

namespace soclearn {

inline RegionState in_cascade_region(const SignalStructure& s, const BeliefState& b) {
    return classify_region(s, b);
}

enum class CascadeDirection { up, down };

struct CascadeReport {
    CascadeDirection direction = CascadeDirection::up;
    bool condition_holds = false;
    bool strict = false;
    std::optional<double> witness_x;
    double margin = -std::numeric_limits<double>::infinity();
};

inline constexpr double kConditionTol = 1e-9;

namespace detail {

// Evaluate the start-condition gap at one support point.
//   up:   LR(x_lo) - LR(x) * (1-F0(x)) / (1-F1(x))
//   down: LR(x) * F0(x-) / F1(x-) - LR(x_hi)
// The weak inequality is satisfied with equality in the x -> x_lo (resp.
// x_hi) limit for every structure, so only a strictly positive gap is
// informative.
inline double condition_gap(const SignalStructure& s, CascadeDirection dir, double x) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double lr;
    try {
        lr = s.likelihood_ratio(x);
    } catch (const std::domain_error&) {
        return nan;
    }
    if (std::isnan(lr)) return nan;
    if (dir == CascadeDirection::up) {
        const double t0 = 1.0 - s.cdf(0, x);
        const double t1 = 1.0 - s.cdf(1, x);
        if (t1 <= 1e-15) return nan;
        if (std::isinf(lr)) return -std::numeric_limits<double>::infinity();
        return s.lr_at_inf() - lr * t0 / t1;
    }
    const double f0 = s.cdf_left(0, x);
    const double f1 = s.cdf_left(1, x);
    if (f1 <= 1e-15) return nan;
    return (std::isinf(lr) ? std::numeric_limits<double>::infinity()
                           : lr * f0 / f1) -
           s.lr_at_sup();
}

inline CascadeReport cascade_condition(const SignalStructure& s, CascadeDirection dir,
                                       int grid_per_piece = 4096) {
    CascadeReport rep;
    rep.direction = dir;
    double best = -std::numeric_limits<double>::infinity();
    double best_x = s.x_lo();
    auto consider = [&](double x) {
        const double v = condition_gap(s, dir, x);
        if (!std::isnan(v) && v > best) {
            best = v;
            best_x = x;
        }
    };
    for (const auto& a : s.atoms()) consider(a.x);
    for (const auto& p : s.pieces()) {
        for (int k = 0; k <= grid_per_piece; ++k) {
            const double t = static_cast<double>(k) / grid_per_piece;
            consider(p.x0 + t * p.width());
        }
        // golden-section polish of the best grid cell in this piece
        const double cell = p.width() / grid_per_piece;
        double a = std::max(p.x0, best_x - cell), b = std::min(p.x1, best_x + cell);
        if (best_x >= p.x0 && best_x <= p.x1 && b > a) {
            constexpr double phi = 0.6180339887498949;
            double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
            for (int it = 0; it < 60; ++it) {
                const double v1 = condition_gap(s, dir, x1);
                const double v2 = condition_gap(s, dir, x2);
                if (std::isnan(v1) || std::isnan(v2)) break;
                if (v1 < v2) {
                    a = x1;
                    x1 = x2;
                    x2 = a + phi * (b - a);
                } else {
                    b = x2;
                    x2 = x1;
                    x1 = b - phi * (b - a);
                }
            }
            consider(0.5 * (a + b));
        }
    }
    rep.margin = best;
    rep.strict = best > kConditionTol;
    rep.condition_holds = rep.strict;
    if (rep.condition_holds) rep.witness_x = best_x;
    return rep;
}

}  // namespace detail

// Theorem condition for an action up-cascade to start: some support point x
// satisfies LR(x_lo) >= LR(x) * (1-F0(x)) / (1-F1(x)). The inequality always
// holds weakly in the lower-bound limit, so the report flags strict
// satisfaction (margin beyond 1e-9), which is the sufficient direction.
inline CascadeReport up_cascade_condition(const SignalStructure& s) {
    return detail::cascade_condition(s, CascadeDirection::up);
}

// Mirror condition for a down-cascade: LR(x_hi) <= LR(x) * F0(x-) / F1(x-).
inline CascadeReport down_cascade_condition(const SignalStructure& s) {
    return detail::cascade_condition(s, CascadeDirection::down);
}

inline void to_json(nlohmann::json& j, const CascadeReport& r) {
    j = {{"direction", r.direction == CascadeDirection::up ? "up" : "down"},
         {"holds", r.condition_holds},
         {"strict", r.strict},
         {"margin", r.margin}};
    if (r.witness_x)
        j["witness_x"] = *r.witness_x;
    else
        j["witness_x"] = nullptr;
}

// Hazard ratio H(x) = [(1-G0(x)) / (1-G1(x))] * g1(x)/g0(x).
inline double hazard_ratio(const SignalStructure& s, double x) {
    if (!s.in_support(x))
        throw std::domain_error("hazard_ratio: x=" + std::to_string(x) +
                                " lies in a support gap");
    const double g0 = s.pdf_right(0, x) > 0 ? s.pdf_right(0, x) : s.pdf_left(0, x);
    const double g1 = s.pdf_right(0, x) > 0 ? s.pdf_right(1, x) : s.pdf_left(1, x);
    const double t1 = 1.0 - s.cdf(1, x);
    if (g0 <= 0.0 || t1 <= 1e-15)
        throw std::domain_error("hazard_ratio: degenerate tail at x=" + std::to_string(x));
    return (1.0 - s.cdf(0, x)) / t1 * (g1 / g0);
}

struct IhrpResult {
    bool increasing = true;
    std::optional<std::pair<double, double>> witness;  // x < y with H(x) > H(y)
};

// Increasing-hazard-ratio check on a per-piece grid, comparing consecutive
// points where H is defined (so gaps are bridged by the neighbouring
// components).
inline IhrpResult is_ihrp(const SignalStructure& s, int grid_per_piece = 1024) {
    IhrpResult res;
    double prev_x = 0.0, prev_h = 0.0;
    bool have_prev = false;
    for (const auto& p : s.pieces()) {
        for (int k = 0; k <= grid_per_piece; ++k) {
            const double x = p.x0 + p.width() * k / grid_per_piece;
            double h;
            try {
                h = hazard_ratio(s, x);
            } catch (const std::domain_error&) {
                continue;
            }
            if (have_prev && prev_h > h + kConditionTol && prev_x < x) {
                res.increasing = false;
                res.witness = std::make_pair(prev_x, x);
                return res;
            }
            prev_x = x;
            prev_h = h;
            have_prev = true;
        }
    }
    return res;
}

// Number of consecutive identical actions needed before the matching cascade
// region is entered (none if `cap` actions do not suffice). Crossings after
// the first step must clear the region boundary by a small log-odds margin:
// the belief converges geometrically to the boundary when no cascade is
// possible, and in double precision it lands on it after ~55 steps.
inline std::optional<int> time_to_cascade(const SignalStructure& s, double mu0,
                                          int action, int cap) {
    if (cap < 1) throw std::invalid_argument("time_to_cascade: cap must be >= 1");
    BeliefState b = BeliefState::from_mu(mu0);
    const auto want = action == 1 ? CascadeFlag::up : CascadeFlag::down;
    if (classify_region(s, b).direction == want) return 0;
    const double boundary_l =
        action == 1 ? -std::log(s.lr_at_inf()) : -std::log(s.lr_at_sup());
    constexpr double kCrossTol = 1e-9;
    for (int t = 1; t <= cap; ++t) {
        b = step_action(s, b, action).next;
        const double l = b.log_odds();
        if (action == 1 ? l > boundary_l + kCrossTol : l < boundary_l - kCrossTol)
            return t;
    }
    return std::nullopt;
}

struct SweepResult {
    std::vector<double> parameter_grid;
    std::vector<std::optional<int>> steps_to_cascade;
    int cap = 0;
};

// Figure-style sweep over UniformQuality(q_lo, q_hi) with mu0 = q_lo,
// counting consecutive a=1 actions until an up-cascade. Grid points run in
// parallel; results are stored by grid index.
inline SweepResult sweep_time_to_cascade(double q_hi, const std::vector<double>& q_lo_grid,
                                         int cap) {
    SweepResult out;
    out.cap = cap;
    out.parameter_grid = q_lo_grid;
    out.steps_to_cascade.resize(q_lo_grid.size());
    const std::size_t n = q_lo_grid.size();
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n ? n : 1);
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                const auto s = build_structure(uniform_quality(q_lo_grid[i], q_hi));
                out.steps_to_cascade[i] = time_to_cascade(s, q_lo_grid[i], 1, cap);
            }
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace soclearn
