#pragma once

// Two-step efficient GMM for the upper quality bound of the uniform family
// on [1/2, q_hi], using early-history action moments.

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "soclearn/belief.hpp"
#include "soclearn/signal_model.hpp"

namespace soclearn {

struct SequenceDataset {
    std::vector<std::vector<int>> sequences;

    std::size_t size() const { return sequences.size(); }
};

// CSV of action sequences: one sequence per row, comma-separated 0/1 entries,
// '#' starts a comment.
inline SequenceDataset load_sequences_csv(std::istream& in) {
    SequenceDataset d;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::vector<int> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            const auto e = cell.find_last_not_of(" \t\r");
            const std::string tok = cell.substr(b, e - b + 1);
            if (tok != "0" && tok != "1")
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": expected 0 or 1, got '" + tok + "'");
            row.push_back(tok == "1");
        }
        if (!row.empty()) d.sequences.push_back(std::move(row));
    }
    return d;
}

inline SequenceDataset load_sequences_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return load_sequences_csv(f);
}

inline const std::array<std::string, 4> kMomentHistories = {"00", "01", "10", "11"};

struct MomentSet {
    std::vector<std::string> histories;  // conditioning prefixes with data
    std::vector<std::size_t> counts;     // sequences matching each prefix
    std::vector<double> phi;             // empirical P(a=1 | prefix)
    std::size_t n = 0;                   // total sequences
};

// Model-implied probability that the agent after `history` (public actions
// from the uniform prior) chooses a=1, under U[1/2, q_hi] quality and a
// fair-coin state.
inline double model_moment(double q_hi, const std::string& history) {
    const auto s = build_structure(uniform_quality(0.5, q_hi));
    const auto traj = evaluate_history(s, History::parse(history));
    return action_prob(s, traj.final_belief(), Weighting::posterior);
}

// Empirical moments over the four length-two prefixes: for each prefix h,
// the share of sequences starting with h and the frequency of a3 = 1 among
// them. Sequences must have length >= 3.
inline MomentSet empirical_moments(const SequenceDataset& d) {
    MomentSet m;
    m.n = d.sequences.size();
    for (const auto& h : kMomentHistories) {
        std::size_t cnt = 0, ones = 0;
        for (const auto& seq : d.sequences) {
            if (seq.size() < 3)
                throw std::invalid_argument("sequences must have length >= 3");
            if (seq[0] == h[0] - '0' && seq[1] == h[1] - '0') {
                ++cnt;
                ones += static_cast<std::size_t>(seq[2]);
            }
        }
        if (cnt == 0) continue;  // drop empty cells
        m.histories.push_back(h);
        m.counts.push_back(cnt);
        m.phi.push_back(static_cast<double>(ones) / static_cast<double>(cnt));
    }
    return m;
}

// d/dq of the model moments, central differences (one-sided at the
// parameter bounds).
inline std::vector<double> moment_jacobian(double q, const std::vector<std::string>& hists,
                                           double fd_step = 1e-5) {
    const double hi = std::min(q + fd_step, 1.0);
    const double lo = std::max(q - fd_step, 0.5 + 1e-9);
    std::vector<double> g;
    g.reserve(hists.size());
    for (const auto& h : hists)
        g.push_back((model_moment(hi, h) - model_moment(lo, h)) / (hi - lo));
    return g;
}

namespace detail {

// Brent's bounded scalar minimizer (golden section + parabolic steps).
inline double brent_minimize(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-8, int max_iter = 200) {
    constexpr double cg = 0.3819660112501051;
    double x = a + cg * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol * std::fabs(x) + 1e-12;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) break;
        bool golden = true;
        if (std::fabs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double e_old = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = (x < m ? b : a) - x;
            d = cg * e;
        }
        const double u = std::fabs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x)
                b = x;
            else
                a = x;
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (u < x)
                a = u;
            else
                b = u;
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
    return x;
}

// Gauss-Jordan inverse with partial pivoting; falls back to the diagonal
// inverse if the matrix is numerically singular.
inline std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    const auto orig = a;
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (std::fabs(a[piv][c]) < 1e-14) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    inv[i][j] = (i == j && orig[i][i] > 1e-14) ? 1.0 / orig[i][i] : 0.0;
            return inv;
        }
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        const double s = 1.0 / a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] *= s;
            inv[c][j] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

}  // namespace detail

struct GmmOptions {
    double q_min = 0.5 + 1e-6;
    double q_max = 1.0;
    double tol = 1e-8;
    double fd_step = 1e-5;
};

struct HistoryFit {
    std::string history;
    std::size_t count = 0;
    double empirical = 0.0;
    double fitted = 0.0;
};

struct GmmEstimate {
    double q_hat = 0.0;
    double std_error = 0.0;
    std::pair<double, double> ci99{0.0, 0.0};
    double j_stat = 0.0;
    std::vector<HistoryFit> per_history;
};

// Two-step efficient GMM from pre-tabulated moments. The per-sequence moment
// contribution is 1{prefix = h} * (a3 - P_h(q)), so the centered covariance
// of the contributions is an exact function of the counts and frequencies:
//   S_hh = (c_h/n) [phi_h (1-P_h)^2 + (1-phi_h) P_h^2] - mbar_h^2
//   S_hk = -mbar_h mbar_k   (prefix indicators are disjoint)
inline GmmEstimate gmm_estimate(const MomentSet& m, const GmmOptions& opt = {}) {
    const std::size_t k = m.histories.size();
    if (k == 0 || m.n == 0) throw std::invalid_argument("gmm_estimate: empty moment set");
    const double n = static_cast<double>(m.n);

    auto mbar = [&](double q) {
        std::vector<double> v(k);
        for (std::size_t i = 0; i < k; ++i)
            v[i] = m.counts[i] / n * (m.phi[i] - model_moment(q, m.histories[i]));
        return v;
    };
    auto quad = [&](const std::vector<double>& v, const std::vector<std::vector<double>>& W) {
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) acc += v[i] * W[i][j] * v[j];
        return acc;
    };
    std::vector<std::vector<double>> eye(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) eye[i][i] = 1.0;

    const double q1 = detail::brent_minimize(
        [&](double q) {
            auto v = mbar(q);
            return quad(v, eye);
        },
        opt.q_min, opt.q_max, opt.tol);

    std::vector<std::vector<double>> S(k, std::vector<double>(k, 0.0));
    {
        const auto mb = mbar(q1);
        for (std::size_t i = 0; i < k; ++i) {
            const double p = model_moment(q1, m.histories[i]);
            const double w = m.counts[i] / n;
            S[i][i] = w * (m.phi[i] * (1.0 - p) * (1.0 - p) +
                           (1.0 - m.phi[i]) * p * p);
            for (std::size_t j = 0; j < k; ++j) S[i][j] -= mb[i] * mb[j];
        }
    }
    const auto W = detail::invert(S);

    GmmEstimate est;
    est.q_hat = detail::brent_minimize(
        [&](double q) {
            auto v = mbar(q);
            return quad(v, W);
        },
        opt.q_min, opt.q_max, opt.tol);

    const auto dP = moment_jacobian(est.q_hat, m.histories, opt.fd_step);
    std::vector<double> G(k);
    for (std::size_t i = 0; i < k; ++i) G[i] = -(m.counts[i] / n) * dP[i];
    const double gwg = quad(G, W);
    est.std_error = gwg > 0.0 ? std::sqrt(1.0 / (gwg * n)) : 0.0;
    const double half = 2.576 * est.std_error;
    est.ci99 = {est.q_hat - half, est.q_hat + half};
    est.j_stat = n * quad(mbar(est.q_hat), W);

    est.per_history.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        est.per_history.push_back({m.histories[i], m.counts[i], m.phi[i],
                                   model_moment(est.q_hat, m.histories[i])});
    return est;
}

inline GmmEstimate gmm_estimate(const SequenceDataset& d, const GmmOptions& opt = {}) {
    return gmm_estimate(empirical_moments(d), opt);
}

}  // namespace soclearn
