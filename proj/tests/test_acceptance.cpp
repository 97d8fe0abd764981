// Acceptance gate: one PASS/FAIL line per criterion on stdout; the Catch2
// assertion makes the binary's exit code reflect the overall result.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "soclearn/belief.hpp"
#include "soclearn/cascade.hpp"
#include "soclearn/gmm.hpp"
#include "soclearn/signal_model.hpp"

using namespace soclearn;

namespace {

void report(int idx, const std::string& desc, bool ok) {
    std::cout << "[ACCEPTANCE " << idx << "] " << (ok ? "PASS" : "FAIL") << " - "
              << desc << std::endl;
    CHECK(ok);
}

QualitySpec slanted_mixture() {
    const double c = 0.56, eps = 0.9999, w = 2.0 * c - 1.0;
    DirectDensities d;
    d.breakpoints = {1.0 - c, 0.5, 0.5, c};
    d.g0 = {1.0 / w, 1.0 / w, 1.0 / w, 1.0 / w};
    d.g1 = {(1.0 - eps) / w, (1.0 - eps) / w, (1.0 + eps) / w, (1.0 + eps) / w};
    Mixture m;
    m.components.emplace_back(0.5, uniform_quality(c, 0.8));
    m.components.emplace_back(0.5, QualitySpec{d});
    return QualitySpec{m};
}

SequenceDataset balanced_dataset(double qh, std::size_t n, std::uint64_t seed) {
    const auto s = build_structure(uniform_quality(0.5, qh));
    std::mt19937_64 rng(seed);
    SequenceDataset d;
    d.sequences.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        d.sequences.push_back(simulate_sequence(s, static_cast<int>(i % 2), 0.5, 3, rng));
    return d;
}

constexpr std::uint64_t kMasterSeed = 20240803;

}  // namespace

TEST_CASE("criterion 1: exact two-up-actions chain") {
    const auto s = build_structure(uniform_quality(0.5, 2.0 / 3.0));
    const auto t = evaluate_history(s, History::parse("11"));
    const bool ok = std::abs(t.beliefs[0].mu() - 0.5) <= 1e-12 &&
                    std::abs(t.beliefs[1].mu() - 7.0 / 12.0) <= 1e-12 &&
                    std::abs(t.beliefs[2].mu() - 91.0 / 146.0) <= 1e-12 &&
                    std::abs(t.thresholds[0] - 0.5) <= 1e-12 &&
                    std::abs(t.thresholds[1] - 5.0 / 12.0) <= 1e-12 &&
                    std::abs(threshold(s, t.beliefs[2]) - 55.0 / 146.0) <= 1e-12;
    report(1, "belief chain 1/2 -> 7/12 -> 91/146 with thresholds 1/2, 5/12, 55/146",
           ok);
}

TEST_CASE("criterion 2: contrary-action table, 32 cells within 2e-3") {
    const std::vector<int> lens = {1, 2, 4, 8};
    const std::vector<double> qbars = {0.55, 0.66, 0.77, 1.0};
    const double printed_pr[4][4] = {{0.25, 0.25, 0.25, 0.25},
                                     {0.125, 0.125, 0.138, 0.167},
                                     {0.032, 0.0374, 0.05, 0.1},
                                     {0.0021, 0.0034, 0.008, 0.0556}};
    const double printed_mu[4][4] = {{0.475, 0.42, 0.365, 0.25},
                                     {0.4625, 0.382, 0.304, 0.167},
                                     {0.454, 0.352, 0.257, 0.1},
                                     {0.450, 0.341, 0.234, 0.0556}};
    int bad = 0;
    for (std::size_t r = 0; r < lens.size(); ++r) {
        for (std::size_t c = 0; c < qbars.size(); ++c) {
            const auto s = build_structure(uniform_quality(0.5, qbars[c]));
            const auto t = evaluate_history(
                s, History::parse(std::string(static_cast<std::size_t>(lens[r]), '0')));
            const double pr = action_prob(s, t.final_belief(), Weighting::fixed);
            const double mu = t.final_belief().mu();
            if (std::abs(pr - printed_pr[r][c]) > 2e-3) {
                ++bad;
                std::printf("  table cell h=%d zeros qbar=%.2f: Pr=%.4f vs printed %.4f\n",
                            lens[r], qbars[c], pr, printed_pr[r][c]);
            }
            if (std::abs(mu - printed_mu[r][c]) > 2e-3) {
                ++bad;
                std::printf("  table cell h=%d zeros qbar=%.2f: mu=%.4f vs printed %.4f\n",
                            lens[r], qbars[c], mu, printed_mu[r][c]);
            }
        }
    }
    report(2, "table of contrary-action probabilities and beliefs (32 cells)", bad == 0);
}

TEST_CASE("criterion 3: cascade-onset sweep at q_hi = 0.8") {
    std::vector<double> grid;
    for (int i = 500; i <= 800; ++i) grid.push_back(i / 1000.0);
    const auto sweep = sweep_time_to_cascade(0.8, grid, 100);
    bool none_below = true;
    int onset_idx = -1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (sweep.steps_to_cascade[i]) {
            onset_idx = static_cast<int>(i);
            break;
        }
    }
    for (std::size_t i = 0; i < grid.size() && grid[i] <= 0.619 + 1e-12; ++i)
        if (sweep.steps_to_cascade[i]) none_below = false;
    const bool ok = none_below && onset_idx >= 0 && grid[onset_idx] >= 0.619 - 1e-12 &&
                    grid[onset_idx] <= 0.622 + 1e-12 &&
                    sweep.steps_to_cascade[static_cast<std::size_t>(onset_idx)] == 1;
    std::printf("  onset at q_lo=%.3f\n", onset_idx >= 0 ? grid[onset_idx] : -1.0);
    report(3, "no cascade for q_lo <= 0.619; onset in [0.619, 0.622] with value 1", ok);
}

TEST_CASE("criterion 4: hazard-ratio spot values and gap") {
    const auto s = build_structure(uniform_quality(0.5, 0.8));
    bool ok = std::abs(hazard_ratio(s, 0.4) - 0.444444) <= 1e-5 &&
              std::abs(hazard_ratio(s, 0.5) - 0.538462) <= 1e-5 &&
              std::abs(hazard_ratio(s, 0.79) - 0.970051) <= 1e-5;
    const auto gap = build_structure(uniform_quality(0.56, 0.8));
    bool gap_undefined = false;
    try {
        hazard_ratio(gap, 0.5);
    } catch (const std::domain_error&) {
        gap_undefined = true;
    }
    report(4, "H(0.4), H(0.5), H(0.79) within 1e-5; H undefined in the 0.56 gap",
           ok && gap_undefined);
}

TEST_CASE("criterion 5: start condition vs dynamics, plus binary grid") {
    bool agree = true;
    for (double ql : {0.50, 0.55, 0.60, 0.62, 0.65, 0.70, 0.75, 0.80}) {
        const auto s = build_structure(uniform_quality(ql, 0.8));
        const bool strict = up_cascade_condition(s).strict;
        const bool finite = time_to_cascade(s, ql, 1, 100).has_value();
        if (strict != finite) {
            agree = false;
            std::printf("  disagreement at q_lo=%.2f: strict=%d finite=%d\n", ql,
                        strict, finite);
        }
    }
    bool binary_ok = true;
    for (int i = 51; i <= 99; ++i) {
        const auto s = build_structure(binary_quality(i / 100.0));
        if (!up_cascade_condition(s).condition_holds) binary_ok = false;
    }
    report(5, "strict start condition <=> finite time-to-cascade (8/8); binary grid",
           agree && binary_ok);
}

TEST_CASE("criterion 6: slanted mixture counterexample") {
    const auto s = build_structure(slanted_mixture());
    const auto ihrp = is_ihrp(s);
    const bool ihrp_ok = !ihrp.increasing && ihrp.witness.has_value();
    const auto up = up_cascade_condition(s);
    const auto down = down_cascade_condition(s);
    const bool conditions_false = !up.condition_holds && !down.condition_holds;
    const bool no_cascade = !time_to_cascade(s, 0.5, 1, 100).has_value() &&
                            !time_to_cascade(s, 0.5, 0, 100).has_value();
    if (ihrp.witness)
        std::printf("  IHRP witness: H(%.4f) > H(%.4f)\n", ihrp.witness->first,
                    ihrp.witness->second);
    std::printf("  up condition margin=%.4f holds=%d; down margin=%.4f holds=%d\n",
                up.margin, up.condition_holds, down.margin, down.condition_holds);
    std::printf("  time-to-cascade up=%d down=%d (-1 = none)\n",
                time_to_cascade(s, 0.5, 1, 100).value_or(-1),
                time_to_cascade(s, 0.5, 0, 100).value_or(-1));
    report(6, "mixture: IHRP false with witness, conditions false, no cascade in 100",
           ihrp_ok && conditions_false && no_cascade);
}

namespace {

bool recovery_within(double* q_out = nullptr) {
    const auto est = gmm_estimate(balanced_dataset(2.0 / 3.0, 10000, kMasterSeed));
    if (q_out) *q_out = est.q_hat;
    return std::abs(est.q_hat - 2.0 / 3.0) <= 0.01;
}

}  // namespace

TEST_CASE("criterion 7: synthetic GMM recovery and CI coverage") {
    double q_hat = 0.0;
    const bool point_ok = recovery_within(&q_hat);
    int covered = 0;
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        const auto est = gmm_estimate(balanced_dataset(2.0 / 3.0, 10000, kMasterSeed + rep));
        if (est.ci99.first <= 2.0 / 3.0 && 2.0 / 3.0 <= est.ci99.second) ++covered;
    }
    std::printf("  fixed-seed q_hat=%.4f (|err|=%.4f); coverage %d/50\n", q_hat,
                std::abs(q_hat - 2.0 / 3.0), covered);
    report(7, "fixed seed |q_hat - 2/3| <= 0.01; 99% CI coverage >= 45/50",
           point_ok && covered >= 45);
}

TEST_CASE("criterion 8: experimental dataset fit or substitute") {
    std::ifstream external("data/anderson_holt.csv");
    if (external) {
        const auto est = gmm_estimate(load_sequences_csv("data/anderson_holt.csv"));
        report(8, "external dataset: q_hat = 0.7171 +- 0.01, se = 0.0208 +- 0.005",
               std::abs(est.q_hat - 0.7171) <= 0.01 &&
                   std::abs(est.std_error - 0.0208) <= 0.005);
        return;
    }
    bool exact_ok = true;
    for (double q : {0.6, 0.7, 0.8}) {
        MomentSet m;
        m.n = 10000;
        for (const auto& h : kMomentHistories) {
            m.histories.push_back(h);
            m.counts.push_back(2500);
            m.phi.push_back(model_moment(q, h));
        }
        if (std::abs(gmm_estimate(m).q_hat - q) > 1e-4) exact_ok = false;
    }
    report(8, "dataset unavailable; substitute: exact-fit inversion + synthetic recovery",
           exact_ok && recovery_within());
}

TEST_CASE("criterion 9: property battery across families") {
    std::vector<QualitySpec> specs = {uniform_quality(0.5, 0.8),
                                      uniform_quality(0.65, 0.8),
                                      uniform_quality(0.5, 1.0),
                                      uniform_quality(0.5, 2.0 / 3.0),
                                      binary_quality(0.7),
                                      QualitySpec{DiscreteQuality{{{0.6, 0.5}, {0.9, 0.5}}}}};
    bool ok = true;
    auto fail = [&](const char* what, double where) {
        ok = false;
        std::printf("  property violated: %s (at %.4f)\n", what, where);
    };
    for (const auto& spec : specs) {
        const auto s = build_structure(spec);
        if (std::abs(s.cdf(0, s.x_hi()) - 1.0) > 1e-9 ||
            std::abs(s.cdf(1, s.x_hi()) - 1.0) > 1e-9)
            fail("normalization", s.x_hi());
        for (int k = 0; k <= 100; ++k) {
            const double x = k / 100.0;
            bool knife_edge = false;  // atom positions 1-q carry rounding dust
            for (const auto& a : s.atoms())
                if (std::abs(a.x - x) < 1e-9 || std::abs(a.x - (1.0 - x)) < 1e-9)
                    knife_edge = true;
            if (knife_edge) continue;
            if (std::abs(s.cdf(1, x) - (1.0 - s.cdf_left(0, 1.0 - x))) > 1e-9)
                fail("symmetry G1(x) = 1 - G0(1-x)", x);
        }
        double prev = -1.0;
        for (int k = 0; k <= 400; ++k) {
            const double x = s.x_lo() + (s.x_hi() - s.x_lo()) * k / 400.0;
            if (!s.in_support(x)) continue;
            const double lr = s.likelihood_ratio(x);
            if (std::isnan(lr) || std::isinf(lr)) continue;
            if (lr < prev - 1e-9) fail("monotone likelihood ratio", x);
            prev = lr;
        }
        for (double mu : {0.3, 0.45, 0.5, 0.55, 0.7}) {
            const auto b = BeliefState::from_mu(mu);
            if (std::abs(BeliefState::from_log_odds(b.log_odds()).mu() - mu) > 1e-12)
                fail("log-odds/probability equivalence", mu);
            if (classify_region(s, b).direction != CascadeFlag::none) continue;
            const double p1 = action_prob(s, b, Weighting::posterior);
            const double m1 = update_after_action(s, b, 1).mu();
            const double m0 = update_after_action(s, b, 0).mu();
            if (std::abs(p1 * m1 + (1.0 - p1) * m0 - mu) > 1e-10)
                fail("martingale identity", mu);
        }
        std::mt19937_64 ra(99), rb(99);
        if (simulate_sequence(s, 1, 0.5, 25, ra) != simulate_sequence(s, 1, 0.5, 25, rb))
            fail("seed determinism", 0.0);
    }
    report(9, "martingale, MLRP, normalization, symmetry, log-odds, determinism", ok);
}
