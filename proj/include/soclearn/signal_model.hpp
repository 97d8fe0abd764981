#pragma once

// State-conditional type distributions induced by privately drawn signal
// qualities. Densities are piecewise linear over explicit breakpoints with
// exact piecewise-quadratic CDFs; point masses are carried in a separate
// atom list so discrete quality draws evaluate exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace soclearn {

inline constexpr double kCdfTol = 1e-9;
inline constexpr double kMlrpTol = 1e-12;

// ---------------------------------------------------------------------------
// Quality specifications

struct UniformQuality {
    double q_lo = 0.5;
    double q_hi = 1.0;
};

struct DiscreteQuality {
    // (quality, weight) pairs; weights sum to one.
    std::vector<std::pair<double, double>> points;
};

// Direct piecewise-linear densities: values of g0/g1 at each breakpoint,
// linear between. A repeated breakpoint encodes a jump discontinuity.
struct DirectDensities {
    std::vector<double> breakpoints;
    std::vector<double> g0;
    std::vector<double> g1;
};

struct QualitySpec;

struct Mixture {
    std::vector<std::pair<double, QualitySpec>> components;
};

struct QualitySpec {
    std::variant<UniformQuality, DiscreteQuality, DirectDensities, Mixture> value;

    QualitySpec() : value(UniformQuality{}) {}
    QualitySpec(UniformQuality u) : value(u) {}
    QualitySpec(DiscreteQuality d) : value(std::move(d)) {}
    QualitySpec(DirectDensities d) : value(std::move(d)) {}
    QualitySpec(Mixture m) : value(std::move(m)) {}
};

inline QualitySpec uniform_quality(double q_lo, double q_hi) {
    return QualitySpec{UniformQuality{q_lo, q_hi}};
}

inline QualitySpec binary_quality(double q) {
    return QualitySpec{DiscreteQuality{{{q, 1.0}}}};
}

// ---------------------------------------------------------------------------
// Signal structure

// Continuous density segment. g* values are one-sided limits at the segment
// ends; cum* is the CDF contribution accumulated strictly before x0
// (continuous pieces and atoms alike).
struct DensityPiece {
    double x0 = 0, x1 = 0;
    double g0l = 0, g0r = 0, g1l = 0, g1r = 0;
    double cum0 = 0, cum1 = 0;

    double width() const { return x1 - x0; }
    double mass0() const { return 0.5 * (g0l + g0r) * width(); }
    double mass1() const { return 0.5 * (g1l + g1r) * width(); }
};

struct MassPoint {
    double x = 0;
    double m0 = 0, m1 = 0;
};

struct SupportInterval {
    double lo = 0, hi = 0;
};

class SignalStructure {
public:
    const std::vector<DensityPiece>& pieces() const { return pieces_; }
    const std::vector<MassPoint>& atoms() const { return atoms_; }
    const std::vector<SupportInterval>& support() const { return support_; }
    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    bool quality_induced() const { return quality_induced_; }
    bool has_atoms() const { return !atoms_.empty(); }

    // Detected MLRP violation, if any (pair x < y with decreasing ratio).
    const std::optional<std::pair<double, double>>& mlrp_witness() const {
        return mlrp_witness_;
    }

    bool in_support(double x) const {
        for (const auto& s : support_)
            if (x >= s.lo - 1e-15 && x <= s.hi + 1e-15) return true;
        for (const auto& a : atoms_)
            if (x == a.x) return true;
        return false;
    }

    // Right-continuous CDF; 0 below the support, 1 above.
    double cdf(int state, double x) const {
        double acc = continuous_cdf(state, x);
        for (const auto& a : atoms_) {
            if (a.x > x) break;
            acc += state == 1 ? a.m1 : a.m0;
        }
        return std::min(acc, 1.0);
    }

    // Left limit F(x-).
    double cdf_left(int state, double x) const {
        double acc = continuous_cdf(state, x);
        for (const auto& a : atoms_) {
            if (a.x >= x) break;
            acc += state == 1 ? a.m1 : a.m0;
        }
        return std::min(acc, 1.0);
    }

    // Density value at x (one-sided from the right; atoms excluded).
    double pdf_right(int state, double x) const {
        for (const auto& p : pieces_) {
            if (x < p.x0 - 1e-15 || x >= p.x1) continue;
            double t = std::clamp((x - p.x0) / p.width(), 0.0, 1.0);
            return state == 1 ? p.g1l + t * (p.g1r - p.g1l)
                              : p.g0l + t * (p.g0r - p.g0l);
        }
        return 0.0;
    }

    double pdf_left(int state, double x) const {
        for (const auto& p : pieces_) {
            if (x <= p.x0 || x > p.x1 + 1e-15) continue;
            double t = std::clamp((x - p.x0) / p.width(), 0.0, 1.0);
            return state == 1 ? p.g1l + t * (p.g1r - p.g1l)
                              : p.g0l + t * (p.g0r - p.g0l);
        }
        return 0.0;
    }

    // g1(x)/g0(x); +infinity where g0 vanishes below g1. x must lie in the
    // support.
    double likelihood_ratio(double x) const {
        if (!in_support(x))
            throw std::domain_error("likelihood_ratio: x=" + std::to_string(x) +
                                    " outside the signal support");
        for (const auto& a : atoms_)
            if (a.x == x) return ratio(a.m1, a.m0);
        double g0 = pdf_right(0, x), g1 = pdf_right(1, x);
        if (g0 == 0.0 && g1 == 0.0) {
            g0 = pdf_left(0, x);
            g1 = pdf_left(1, x);
        }
        return ratio(g1, g0);
    }

    // Likelihood ratio at the support infimum / supremum (one-sided limits;
    // atom mass ratio if the bound is an atom).
    double lr_at_inf() const { return lr_inf_; }
    double lr_at_sup() const { return lr_sup_; }

    // Inverse-CDF draw of a type from g_state.
    double sample(int state, std::mt19937_64& rng) const {
        const double u = unit_draw(rng);
        double acc = 0.0;
        std::size_t pi = 0, ai = 0;
        while (pi < pieces_.size() || ai < atoms_.size()) {
            const bool atom_next =
                ai < atoms_.size() &&
                (pi >= pieces_.size() || atoms_[ai].x <= pieces_[pi].x0);
            if (atom_next) {
                const double m = state == 1 ? atoms_[ai].m1 : atoms_[ai].m0;
                if (u < acc + m) return atoms_[ai].x;
                acc += m;
                ++ai;
            } else {
                const auto& p = pieces_[pi];
                const double m = state == 1 ? p.mass1() : p.mass0();
                if (u < acc + m) return invert_piece(p, state, u - acc);
                acc += m;
                ++pi;
            }
        }
        return x_hi_;
    }

private:
    friend SignalStructure build_structure(const QualitySpec&);

    static double ratio(double num, double den) {
        if (den > 0.0) return num / den;
        if (num > 0.0) return std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }

    static double unit_draw(std::mt19937_64& rng) {
        // 53-bit mantissa draw; bit-stable across standard libraries.
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

    double continuous_cdf(int state, double x) const {
        if (pieces_.empty()) return 0.0;
        double acc = 0.0;
        for (const auto& p : pieces_) {
            if (x <= p.x0) break;
            if (x >= p.x1) {
                acc += state == 1 ? p.mass1() : p.mass0();
                continue;
            }
            const double w = p.width();
            const double t = x - p.x0;
            const double gl = state == 1 ? p.g1l : p.g0l;
            const double gr = state == 1 ? p.g1r : p.g0r;
            acc += gl * t + (gr - gl) * t * t / (2.0 * w);
        }
        return acc;
    }

    double invert_piece(const DensityPiece& p, int state, double m) const {
        const double w = p.width();
        const double gl = state == 1 ? p.g1l : p.g0l;
        const double gr = state == 1 ? p.g1r : p.g0r;
        const double slope = (gr - gl) / w;
        double t;
        if (std::abs(slope) < 1e-14) {
            t = gl > 0 ? m / gl : 0.5 * w;
        } else {
            // Solve gl*t + slope*t^2/2 = m for t in [0, w].
            const double disc = std::max(gl * gl + 2.0 * slope * m, 0.0);
            t = (-gl + std::sqrt(disc)) / slope;
        }
        return p.x0 + std::clamp(t, 0.0, w);
    }

    std::vector<DensityPiece> pieces_;
    std::vector<MassPoint> atoms_;
    std::vector<SupportInterval> support_;
    double x_lo_ = 0, x_hi_ = 1;
    double lr_inf_ = 0, lr_sup_ = 0;
    bool quality_induced_ = true;
    std::optional<std::pair<double, double>> mlrp_witness_;
};

// ---------------------------------------------------------------------------
// Construction

namespace detail {

struct RawStructure {
    std::vector<DensityPiece> pieces;  // cum fields unset
    std::vector<MassPoint> atoms;
    bool quality_induced = true;
};

inline void add_quality_atom(std::vector<MassPoint>& atoms, double q, double w) {
    // A binary signal of quality q puts type mass at q and 1-q.
    auto deposit = [&](double x, double m1, double m0) {
        for (auto& a : atoms) {
            if (std::abs(a.x - x) < 1e-12) {
                a.m0 += m0;
                a.m1 += m1;
                return;
            }
        }
        atoms.push_back({x, m0, m1});
    };
    if (std::abs(q - 0.5) < 1e-12) {
        deposit(0.5, w, w);
        return;
    }
    deposit(q, w * q, w * (1.0 - q));
    deposit(1.0 - q, w * (1.0 - q), w * q);
}

inline RawStructure build_raw(const QualitySpec& spec);

inline RawStructure build_raw_uniform(const UniformQuality& u) {
    if (!(u.q_lo >= 0.5 - 1e-12 && u.q_lo <= u.q_hi && u.q_hi <= 1.0 + 1e-12))
        throw std::invalid_argument("uniform quality bounds must satisfy 1/2 <= q_lo <= q_hi <= 1");
    if (u.q_hi <= 0.5)
        throw std::invalid_argument("uniform quality needs q_hi > 1/2");
    RawStructure raw;
    if (u.q_hi - u.q_lo < 1e-12) {
        add_quality_atom(raw.atoms, u.q_hi, 1.0);
        return raw;
    }
    const double f = 1.0 / (u.q_hi - u.q_lo);
    auto add = [&](double a, double b) {
        raw.pieces.push_back({a, b, (1 - a) * f, (1 - b) * f, a * f, b * f, 0, 0});
    };
    if (u.q_lo <= 0.5 + 1e-12) {
        add(1.0 - u.q_hi, u.q_hi);
    } else {
        add(1.0 - u.q_hi, 1.0 - u.q_lo);
        add(u.q_lo, u.q_hi);
    }
    return raw;
}

inline RawStructure build_raw_discrete(const DiscreteQuality& d) {
    if (d.points.empty())
        throw std::invalid_argument("discrete quality needs at least one point");
    double total = 0.0;
    RawStructure raw;
    for (const auto& [q, w] : d.points) {
        if (q < 0.5 - 1e-12 || q > 1.0 + 1e-12)
            throw std::invalid_argument("discrete quality point outside [1/2, 1]");
        if (w < 0.0)
            throw std::invalid_argument("discrete quality weight negative");
        total += w;
        add_quality_atom(raw.atoms, q, w);
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("discrete quality weights must sum to 1");
    return raw;
}

inline RawStructure build_raw_direct(const DirectDensities& d) {
    const auto n = d.breakpoints.size();
    if (n < 2 || d.g0.size() != n || d.g1.size() != n)
        throw std::invalid_argument("direct densities need matching breakpoint/value arrays");
    RawStructure raw;
    raw.quality_induced = false;
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = d.breakpoints[i], b = d.breakpoints[i + 1];
        if (b < a)
            throw std::invalid_argument("direct density breakpoints must be nondecreasing");
        if (b - a < 1e-14) continue;  // repeated breakpoint = jump
        if (d.g0[i] < 0 || d.g0[i + 1] < 0 || d.g1[i] < 0 || d.g1[i + 1] < 0)
            throw std::invalid_argument("direct density values must be nonnegative");
        if (d.g0[i] == 0 && d.g0[i + 1] == 0 && d.g1[i] == 0 && d.g1[i + 1] == 0)
            continue;
        DensityPiece p{a, b, d.g0[i], d.g0[i + 1], d.g1[i], d.g1[i + 1], 0, 0};
        m0 += p.mass0();
        m1 += p.mass1();
        raw.pieces.push_back(p);
    }
    if (std::abs(m0 - 1.0) > 1e-6 || std::abs(m1 - 1.0) > 1e-6)
        throw std::invalid_argument("direct densities must each integrate to 1");
    return raw;
}

inline double raw_pdf_right(const RawStructure& raw, int state, double x) {
    for (const auto& p : raw.pieces) {
        if (x < p.x0 - 1e-15 || x >= p.x1) continue;
        const double t = std::clamp((x - p.x0) / p.width(), 0.0, 1.0);
        return state == 1 ? p.g1l + t * (p.g1r - p.g1l) : p.g0l + t * (p.g0r - p.g0l);
    }
    return 0.0;
}

inline double raw_pdf_left(const RawStructure& raw, int state, double x) {
    for (const auto& p : raw.pieces) {
        if (x <= p.x0 || x > p.x1 + 1e-15) continue;
        const double t = std::clamp((x - p.x0) / p.width(), 0.0, 1.0);
        return state == 1 ? p.g1l + t * (p.g1r - p.g1l) : p.g0l + t * (p.g0r - p.g0l);
    }
    return 0.0;
}

inline void add_weighted_atom(std::vector<MassPoint>& atoms, double x, double m0,
                              double m1) {
    for (auto& a : atoms) {
        if (std::abs(a.x - x) < 1e-12) {
            a.m0 += m0;
            a.m1 += m1;
            return;
        }
    }
    atoms.push_back({x, m0, m1});
}

inline RawStructure build_raw_mixture(const Mixture& m) {
    if (m.components.empty())
        throw std::invalid_argument("mixture needs at least one component");
    double total = 0.0;
    std::vector<std::pair<double, RawStructure>> parts;
    for (const auto& [w, spec] : m.components) {
        if (w < 0.0) throw std::invalid_argument("mixture weight negative");
        total += w;
        parts.emplace_back(w, build_raw(spec));
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("mixture weights must sum to 1");

    RawStructure out;
    std::vector<double> cuts;
    for (const auto& [w, part] : parts) {
        if (!part.quality_induced) out.quality_induced = false;
        for (const auto& p : part.pieces) {
            cuts.push_back(p.x0);
            cuts.push_back(p.x1);
        }
        for (const auto& a : part.atoms)
            add_weighted_atom(out.atoms, a.x, w * a.m0, w * a.m1);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return b - a < 1e-12; }),
               cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        double g0l = 0, g0r = 0, g1l = 0, g1r = 0;
        for (const auto& [w, part] : parts) {
            g0l += w * raw_pdf_right(part, 0, a);
            g1l += w * raw_pdf_right(part, 1, a);
            g0r += w * raw_pdf_left(part, 0, b);
            g1r += w * raw_pdf_left(part, 1, b);
        }
        if (g0l == 0 && g0r == 0 && g1l == 0 && g1r == 0) continue;
        out.pieces.push_back({a, b, g0l, g0r, g1l, g1r, 0, 0});
    }
    std::sort(out.atoms.begin(), out.atoms.end(),
              [](const MassPoint& a, const MassPoint& b) { return a.x < b.x; });
    return out;
}

inline RawStructure build_raw(const QualitySpec& spec) {
    return std::visit(
        [](const auto& v) -> RawStructure {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformQuality>) return build_raw_uniform(v);
            else if constexpr (std::is_same_v<T, DiscreteQuality>) return build_raw_discrete(v);
            else if constexpr (std::is_same_v<T, DirectDensities>) return build_raw_direct(v);
            else return build_raw_mixture(v);
        },
        spec.value);
}

// Scan the support in order and report the first pair of points whose
// likelihood ratio decreases (beyond tolerance).
inline std::optional<std::pair<double, double>> mlrp_scan(
    const std::vector<DensityPiece>& pieces, const std::vector<MassPoint>& atoms,
    int grid_per_piece = 2048) {
    struct Sample {
        double x, g0, g1;
    };
    std::vector<Sample> samples;
    std::size_t pi = 0, ai = 0;
    auto push_piece = [&](const DensityPiece& p) {
        for (int k = 0; k <= grid_per_piece; ++k) {
            const double t = static_cast<double>(k) / grid_per_piece;
            samples.push_back({p.x0 + t * p.width(),
                               p.g0l + t * (p.g0r - p.g0l),
                               p.g1l + t * (p.g1r - p.g1l)});
        }
    };
    while (pi < pieces.size() || ai < atoms.size()) {
        const bool atom_next = ai < atoms.size() &&
                               (pi >= pieces.size() || atoms[ai].x <= pieces[pi].x0);
        if (atom_next) {
            samples.push_back({atoms[ai].x, atoms[ai].m0, atoms[ai].m1});
            ++ai;
        } else {
            push_piece(pieces[pi]);
            ++pi;
        }
    }
    const Sample* prev = nullptr;
    for (const auto& s : samples) {
        if (s.g0 == 0.0 && s.g1 == 0.0) continue;
        if (prev && prev->g1 * s.g0 > s.g1 * prev->g0 + kMlrpTol)
            return std::make_pair(prev->x, s.x);
        prev = &s;
    }
    return std::nullopt;
}

}  // namespace detail

inline SignalStructure build_structure(const QualitySpec& spec) {
    auto raw = detail::build_raw(spec);
    SignalStructure s;
    s.pieces_ = std::move(raw.pieces);
    s.atoms_ = std::move(raw.atoms);
    s.quality_induced_ = raw.quality_induced;
    std::sort(s.pieces_.begin(), s.pieces_.end(),
              [](const DensityPiece& a, const DensityPiece& b) { return a.x0 < b.x0; });
    std::sort(s.atoms_.begin(), s.atoms_.end(),
              [](const MassPoint& a, const MassPoint& b) { return a.x < b.x; });

    // Split pieces at interior atoms so the element sequence is x-ordered.
    for (const auto& a : s.atoms_) {
        for (std::size_t i = 0; i < s.pieces_.size(); ++i) {
            auto& p = s.pieces_[i];
            if (a.x <= p.x0 + 1e-15 || a.x >= p.x1 - 1e-15) continue;
            const double t = (a.x - p.x0) / p.width();
            DensityPiece upper = p;
            upper.x0 = a.x;
            upper.g0l = p.g0l + t * (p.g0r - p.g0l);
            upper.g1l = p.g1l + t * (p.g1r - p.g1l);
            p.x1 = a.x;
            p.g0r = upper.g0l;
            p.g1r = upper.g1l;
            s.pieces_.insert(s.pieces_.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                             upper);
            break;
        }
    }

    // Cumulative bases (pieces and atoms interleaved in x order).
    double c0 = 0, c1 = 0;
    std::size_t ai = 0;
    for (auto& p : s.pieces_) {
        while (ai < s.atoms_.size() && s.atoms_[ai].x <= p.x0) {
            c0 += s.atoms_[ai].m0;
            c1 += s.atoms_[ai].m1;
            ++ai;
        }
        p.cum0 = c0;
        p.cum1 = c1;
        c0 += p.mass0();
        c1 += p.mass1();
    }
    while (ai < s.atoms_.size()) {
        c0 += s.atoms_[ai].m0;
        c1 += s.atoms_[ai].m1;
        ++ai;
    }
    if (std::abs(c0 - 1.0) > kCdfTol || std::abs(c1 - 1.0) > kCdfTol)
        throw std::invalid_argument("signal structure does not normalize to 1");

    // Support intervals (merge touching pieces; atoms widen or add points).
    for (const auto& p : s.pieces_) {
        if (!s.support_.empty() && p.x0 - s.support_.back().hi < 1e-12)
            s.support_.back().hi = p.x1;
        else
            s.support_.push_back({p.x0, p.x1});
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : s.pieces_) {
        lo = std::min(lo, p.x0);
        hi = std::max(hi, p.x1);
    }
    for (const auto& a : s.atoms_) {
        lo = std::min(lo, a.x);
        hi = std::max(hi, a.x);
    }
    s.x_lo_ = lo;
    s.x_hi_ = hi;

    // Likelihood ratio at the bounds.
    auto bound_lr = [&](double x, bool lower) {
        for (const auto& a : s.atoms_)
            if (a.x == x) return SignalStructure::ratio(a.m1, a.m0);
        double g0 = lower ? s.pdf_right(0, x) : s.pdf_left(0, x);
        double g1 = lower ? s.pdf_right(1, x) : s.pdf_left(1, x);
        if (g0 == 0.0 && g1 == 0.0) {
            // densities vanish at the bound; use the interior limit
            const auto& p = lower ? s.pieces_.front() : s.pieces_.back();
            g0 = lower ? p.g0r - p.g0l : p.g0l - p.g0r;
            g1 = lower ? p.g1r - p.g1l : p.g1l - p.g1r;
            g0 = std::max(g0, 0.0);
            g1 = std::max(g1, 0.0);
        }
        return SignalStructure::ratio(g1, g0);
    };
    s.lr_inf_ = bound_lr(s.x_lo_, true);
    s.lr_sup_ = bound_lr(s.x_hi_, false);

    s.mlrp_witness_ = detail::mlrp_scan(s.pieces_, s.atoms_);
    if (s.mlrp_witness_ && std::holds_alternative<DirectDensities>(spec.value))
        throw std::invalid_argument(
            "direct densities violate the monotone likelihood ratio property between x=" +
            std::to_string(s.mlrp_witness_->first) + " and x=" +
            std::to_string(s.mlrp_witness_->second));
    return s;
}

// ---------------------------------------------------------------------------
// JSON serialization of quality specs

inline void to_json(nlohmann::json& j, const QualitySpec& spec);

inline void to_json(nlohmann::json& j, const UniformQuality& u) {
    j = {{"kind", "uniform"}, {"q_lo", u.q_lo}, {"q_hi", u.q_hi}};
}

inline void to_json(nlohmann::json& j, const DiscreteQuality& d) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [q, w] : d.points) pts.push_back({q, w});
    j = {{"kind", "discrete"}, {"points", pts}};
}

inline void to_json(nlohmann::json& j, const DirectDensities& d) {
    j = {{"kind", "direct"},
         {"breakpoints", d.breakpoints},
         {"g0", d.g0},
         {"g1", d.g1}};
}

inline void to_json(nlohmann::json& j, const Mixture& m) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& [w, spec] : m.components) {
        nlohmann::json s;
        to_json(s, spec);
        comps.push_back({w, s});
    }
    j = {{"kind", "mixture"}, {"components", comps}};
}

inline void to_json(nlohmann::json& j, const QualitySpec& spec) {
    std::visit([&](const auto& v) { to_json(j, v); }, spec.value);
}

inline void from_json(const nlohmann::json& j, QualitySpec& spec) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") {
        spec = QualitySpec{UniformQuality{j.at("q_lo").get<double>(),
                                          j.at("q_hi").get<double>()}};
    } else if (kind == "discrete") {
        DiscreteQuality d;
        for (const auto& p : j.at("points"))
            d.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        spec = QualitySpec{std::move(d)};
    } else if (kind == "direct") {
        DirectDensities d;
        j.at("breakpoints").get_to(d.breakpoints);
        j.at("g0").get_to(d.g0);
        j.at("g1").get_to(d.g1);
        spec = QualitySpec{std::move(d)};
    } else if (kind == "mixture") {
        Mixture m;
        for (const auto& c : j.at("components")) {
            QualitySpec sub;
            from_json(c.at(1), sub);
            m.components.emplace_back(c.at(0).get<double>(), std::move(sub));
        }
        spec = QualitySpec{std::move(m)};
    } else {
        throw std::invalid_argument("unknown quality spec kind: " + kind);
    }
}

}  // namespace soclearn
