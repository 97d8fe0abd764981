#pragma once

// Public-belief dynamics: threshold types, Bayesian updates after observed
// actions, history evaluation, action probabilities and seeded simulation.
// Beliefs are carried in log-odds and clamped to |log-odds| <= 50.

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "soclearn/signal_model.hpp"

namespace soclearn {

inline constexpr double kLogOddsCap = 50.0;

class BeliefState {
public:
    BeliefState() : log_odds_(0.0) {}

    static BeliefState from_log_odds(double l) {
        BeliefState b;
        b.log_odds_ = l;
        return b;
    }

    static BeliefState from_mu(double mu) {
        if (!(mu > 0.0 && mu < 1.0))
            throw std::invalid_argument("belief must lie strictly inside (0,1)");
        BeliefState b;
        b.log_odds_ = std::log(mu) - std::log1p(-mu);
        return b;
    }

    double log_odds() const { return log_odds_; }
    double mu() const { return 1.0 / (1.0 + std::exp(-log_odds_)); }
    double odds() const { return std::exp(log_odds_); }

private:
    double log_odds_;
};

struct History {
    std::vector<int> actions;
    BeliefState origin = BeliefState::from_mu(0.5);

    static History parse(const std::string& s, BeliefState origin = BeliefState::from_mu(0.5)) {
        History h;
        h.origin = origin;
        h.actions.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("history string must contain only '0'/'1'");
            h.actions.push_back(c - '0');
        }
        return h;
    }

    std::string str() const {
        std::string s;
        for (int a : actions) s.push_back(static_cast<char>('0' + a));
        return s;
    }
};

enum class CascadeFlag { none, up, down };

inline const char* to_string(CascadeFlag f) {
    switch (f) {
        case CascadeFlag::up: return "up";
        case CascadeFlag::down: return "down";
        default: return "none";
    }
}

struct RegionState {
    CascadeFlag direction = CascadeFlag::none;
    bool strict = false;
};

// Cascade-region classification: up iff LR(x_lo) >= (1-mu)/mu, down iff
// LR(x_hi) <= (1-mu)/mu (weak inequalities; strictness reported separately).
// A 1e-12 relative band absorbs representation noise when the belief sits
// exactly on a region boundary.
inline RegionState classify_region(const SignalStructure& s, const BeliefState& b) {
    const double r = std::exp(-b.log_odds());  // (1-mu)/mu
    const double lo = s.lr_at_inf();
    const double hi = s.lr_at_sup();
    constexpr double rel = 1e-12;
    if (!std::isnan(lo) && lo >= r * (1.0 - rel))
        return {CascadeFlag::up, lo > r * (1.0 + rel)};
    if (!std::isnan(hi) && hi <= r * (1.0 + rel))
        return {CascadeFlag::down, hi < r * (1.0 - rel)};
    return {CascadeFlag::none, false};
}

// Threshold type: sup{x in support : LR(x) <= (1-mu)/mu}, clamped to the
// support bounds. Scans support elements from the top; the likelihood ratio
// is monotone within each piece (ratio of linear functions).
inline double threshold(const SignalStructure& s, const BeliefState& b) {
    const double r = std::exp(-b.log_odds());
    const auto& pieces = s.pieces();
    const auto& atoms = s.atoms();
    auto atom_lr_leq = [&](const MassPoint& a) {
        if (a.m0 > 0.0) return a.m1 <= r * a.m0;
        return a.m1 == 0.0;  // 0/0 never; +inf fails
    };
    std::size_t pi = pieces.size(), ai = atoms.size();
    while (pi > 0 || ai > 0) {
        const bool atom_next =
            ai > 0 && (pi == 0 || atoms[ai - 1].x >= pieces[pi - 1].x1);
        if (atom_next) {
            if (atom_lr_leq(atoms[ai - 1])) return atoms[ai - 1].x;
            --ai;
            continue;
        }
        const auto& p = pieces[pi - 1];
        // LR <= r  <=>  g1 - r*g0 <= 0 (g0, g1 linear on the piece)
        const double dr = p.g1r - r * p.g0r;
        const double dl = p.g1l - r * p.g0l;
        if (dr <= 0.0) return p.x1;
        if (dl <= 0.0) {
            // crossing point of the increasing difference
            const double t = dl / (dl - dr);  // in [0,1]
            return p.x0 + t * p.width();
        }
        --pi;
    }
    return s.x_lo();
}

struct StepOutcome {
    BeliefState next;
    CascadeFlag flag = CascadeFlag::none;
    bool clamped = false;
    double threshold_used = 0.0;
};

// One Bayesian update of the public belief after observing `action`.
// Inside a cascade region the action is uninformative and the belief is
// unchanged.
inline StepOutcome step_action(const SignalStructure& s, const BeliefState& b,
                               int action) {
    StepOutcome out{b};
    const auto region = classify_region(s, b);
    out.threshold_used = threshold(s, b);
    if (region.direction != CascadeFlag::none) {
        out.flag = region.direction;
        return out;
    }
    const double xt = out.threshold_used;
    double num, den;
    if (action == 1) {
        num = 1.0 - s.cdf(1, xt);
        den = 1.0 - s.cdf(0, xt);
    } else {
        num = s.cdf(1, xt);
        den = s.cdf(0, xt);
    }
    if (num == 0.0 && den == 0.0) {
        // no mass on this side in either state: the action was certain
        out.flag = action == 1 ? CascadeFlag::up : CascadeFlag::down;
        return out;
    }
    double l = b.log_odds();
    if (num == 0.0) {
        l = -kLogOddsCap;
        out.clamped = true;
    } else if (den == 0.0) {
        l = kLogOddsCap;
        out.clamped = true;
    } else {
        l += std::log(num) - std::log(den);
    }
    if (l > kLogOddsCap) {
        l = kLogOddsCap;
        out.clamped = true;
    } else if (l < -kLogOddsCap) {
        l = -kLogOddsCap;
        out.clamped = true;
    }
    out.next = BeliefState::from_log_odds(l);
    return out;
}

inline BeliefState update_after_action(const SignalStructure& s, const BeliefState& b,
                                       int action) {
    return step_action(s, b, action).next;
}

struct Trajectory {
    std::vector<BeliefState> beliefs;   // length |actions|+1
    std::vector<double> thresholds;     // threshold faced before each action
    std::vector<CascadeFlag> flags;
    bool clamped = false;

    const BeliefState& final_belief() const { return beliefs.back(); }
};

inline Trajectory evaluate_history(const SignalStructure& s, const History& h) {
    Trajectory t;
    t.beliefs.push_back(h.origin);
    for (int a : h.actions) {
        auto out = step_action(s, t.beliefs.back(), a);
        t.thresholds.push_back(out.threshold_used);
        t.flags.push_back(out.flag);
        t.clamped = t.clamped || out.clamped;
        t.beliefs.push_back(out.next);
    }
    return t;
}

enum class Weighting { posterior, fixed };

// Probability that the next agent takes action 1. The state weight is the
// current posterior mu, or a caller-fixed weight (Table 1 uses the prior 1/2).
inline double action_prob(const SignalStructure& s, const BeliefState& b,
                          Weighting weighting, double mu_w = 0.5) {
    const double xt = threshold(s, b);
    const double w = weighting == Weighting::posterior ? b.mu() : mu_w;
    return w * (1.0 - s.cdf(1, xt)) + (1.0 - w) * (1.0 - s.cdf(0, xt));
}

// Simulate one action sequence: each agent draws a type from g_state,
// compares it with the running threshold (ties resolve to action 0), and the
// public belief is updated with the realized action. Inside a cascade region
// the cascade action is emitted deterministically.
inline std::vector<int> simulate_sequence(const SignalStructure& s, int state,
                                          double mu0, int length,
                                          std::mt19937_64& rng) {
    std::vector<int> actions;
    actions.reserve(static_cast<std::size_t>(length));
    BeliefState b = BeliefState::from_mu(mu0);
    for (int t = 0; t < length; ++t) {
        const auto region = classify_region(s, b);
        if (region.direction != CascadeFlag::none) {
            actions.push_back(region.direction == CascadeFlag::up ? 1 : 0);
            continue;
        }
        const double xt = threshold(s, b);
        const double x = s.sample(state, rng);
        const int a = x > xt ? 1 : 0;
        actions.push_back(a);
        b = step_action(s, b, a).next;
    }
    return actions;
}

}  // namespace soclearn
