// slearn: sequential social-learning toolkit.
//
// Subcommands reproduce the library's table/figure data, run seeded
// simulations and estimate the quality bound from action sequences.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "soclearn/belief.hpp"
#include "soclearn/cascade.hpp"
#include "soclearn/gmm.hpp"
#include "soclearn/signal_model.hpp"

namespace {

using nlohmann::json;
using namespace soclearn;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct GridSpec {
    double start = 0.0, stop = 0.0, step = 0.0;

    std::vector<double> points() const {
        if (step <= 0.0) throw std::invalid_argument("grid step must be > 0");
        std::vector<double> xs;
        const long long n = std::llround((stop - start) / step);
        for (long long i = 0; i <= n; ++i) {
            const double x = start + static_cast<double>(i) * step;
            if (x > stop + step * 0.5) break;
            xs.push_back(x);
        }
        return xs;
    }
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> g.start >> c1 >> g.stop >> c2 >> g.step) || c1 != ',' || c2 != ',')
        throw std::invalid_argument("grid must be start,stop,step");
    return g;
}

// Output sink: --out path or stdout.
struct Sink {
    std::ofstream file;
    std::ostream& stream() { return file.is_open() ? file : std::cout; }

    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file " + path);
        }
    }
};

// Small exact rational for the worked-example chain.
struct Frac {
    long long n = 0, d = 1;

    Frac(long long num = 0, long long den = 1) : n(num), d(den) { norm(); }
    void norm() {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const long long g = std::gcd(std::llabs(n), d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
    }
    Frac operator+(Frac o) const { return {n * o.d + o.n * d, d * o.d}; }
    Frac operator-(Frac o) const { return {n * o.d - o.n * d, d * o.d}; }
    Frac operator*(Frac o) const { return {n * o.n, d * o.d}; }
    Frac operator/(Frac o) const { return {n * o.d, d * o.n}; }
    double value() const { return static_cast<double>(n) / static_cast<double>(d); }
    std::string str() const { return std::to_string(n) + "/" + std::to_string(d); }
};

// Config-file defaults: flags override values from --config JSON.
void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    json j = json::parse(f);
    for (auto& [key, val] : j.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt || opt->count() > 0) continue;  // unknown key or flag given
        opt->add_result(val.is_string() ? val.get<std::string>() : val.dump());
        opt->run_callback();
    }
}

QualitySpec load_spec(const std::string& spec_path, double q_lo, double q_hi) {
    if (!spec_path.empty()) {
        std::ifstream f(spec_path);
        if (!f) throw std::runtime_error("cannot open spec file " + spec_path);
        QualitySpec qs;
        try {
            from_json(json::parse(f), qs);
        } catch (const json::exception& e) {
            throw std::invalid_argument("spec file " + spec_path + ": " + e.what());
        }
        return qs;
    }
    return uniform_quality(q_lo, q_hi);
}

std::string fmt(double v, int prec) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

int cmd_table1(const std::string& out, const std::string& weighting_name) {
    Sink sink(out);
    auto& os = sink.stream();
    const Weighting weighting =
        weighting_name == "posterior" ? Weighting::posterior : Weighting::fixed;
    const std::vector<int> row_lens = {1, 2, 4, 8};
    const std::vector<double> q_bars = {0.55, 0.66, 0.77, 1.0};
    os << "history,q_bar,pr_contrary,mu,pr_contrary_full,mu_full\n";
    for (int len : row_lens) {
        const std::string h(static_cast<std::size_t>(len), '0');
        for (double qb : q_bars) {
            const auto s = build_structure(uniform_quality(0.5, qb));
            const auto traj = evaluate_history(s, History::parse(h));
            const auto& b = traj.final_belief();
            const double pr = action_prob(s, b, weighting);
            os << "{" << h << "}," << fmt(qb, 4) << "," << fmt(pr, 4) << ","
               << fmt(b.mu(), 4) << "," << fmt(pr, 12) << "," << fmt(b.mu(), 12)
               << "\n";
        }
    }
    return kExitOk;
}

int cmd_figure1(double q_hi, const GridSpec& grid, int cap, const std::string& out) {
    const auto points = grid.points();
    const auto sweep = sweep_time_to_cascade(q_hi, points, cap);
    Sink sink(out);
    auto& os = sink.stream();
    os << "q_lo,steps_to_cascade\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& t = sweep.steps_to_cascade[i];
        os << fmt(points[i], 10) << "," << (t ? *t : cap) << "\n";
    }
    return kExitOk;
}

int cmd_hazard(double q_lo, double q_hi, const GridSpec& grid, const std::string& out) {
    const auto s = build_structure(uniform_quality(q_lo, q_hi));
    Sink sink(out);
    auto& os = sink.stream();
    os << "x,hazard_ratio\n";
    for (double x : grid.points()) {
        std::string v = "nan";
        try {
            v = fmt(hazard_ratio(s, x), 10);
        } catch (const std::domain_error&) {
        }
        os << fmt(x, 10) << "," << v << "\n";
    }
    return kExitOk;
}

int cmd_check_cascade(const QualitySpec& qs, const std::string& out) {
    const auto s = build_structure(qs);
    json j;
    to_json(j["up"], up_cascade_condition(s));
    to_json(j["down"], down_cascade_condition(s));
    j["ihrp"] = is_ihrp(s).increasing;
    if (const auto& w = s.mlrp_witness())
        j["mlrp_violation"] = {w->first, w->second};
    else
        j["mlrp_violation"] = nullptr;
    Sink sink(out);
    sink.stream() << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_worked_example(const std::string& out) {
    // q ~ U[1/2, 2/3]: G1(x) = 3(x^2 - 1/9), G0(x) = 4/3 - 3(1-x)^2 on
    // [1/3, 2/3]; threshold 1 - mu; two a=1 observations.
    Sink sink(out);
    auto& os = sink.stream();
    auto G1 = [](Frac x) { return Frac(3) * (x * x - Frac(1, 9)); };
    auto G0 = [](Frac x) {
        const Frac y = Frac(1) - x;
        return Frac(4, 3) - Frac(3) * y * y;
    };
    Frac mu(1, 2), odds(1, 1);
    os << "step,belief,belief_decimal,threshold,threshold_decimal\n";
    for (int t = 0; t <= 2; ++t) {
        const Frac xt = Frac(1) - mu;
        os << t << "," << mu.str() << "," << fmt(mu.value(), 12) << "," << xt.str()
           << "," << fmt(xt.value(), 12) << "\n";
        odds = odds * (Frac(1) - G1(xt)) / (Frac(1) - G0(xt));
        mu = odds / (Frac(1) + odds);
    }
    return kExitOk;
}

int cmd_simulate(const QualitySpec& qs, int state, double mu0, int length, int count,
                 std::uint64_t seed, const std::string& out) {
    const auto s = build_structure(qs);
    std::mt19937_64 rng(seed);
    Sink sink(out);
    auto& os = sink.stream();
    for (int i = 0; i < count; ++i) {
        const auto acts = simulate_sequence(s, state, mu0, length, rng);
        for (std::size_t j = 0; j < acts.size(); ++j)
            os << (j ? "," : "") << acts[j];
        os << "\n";
    }
    return kExitOk;
}

int cmd_estimate(const std::string& data_path, const std::string& out,
                 const std::string& format) {
    const auto data = load_sequences_csv(data_path);
    GmmEstimate est;
    try {
        est = gmm_estimate(data);
    } catch (const std::exception& e) {
        std::cerr << "estimation failed: " << e.what() << "\n";
        return kExitRuntime;
    }
    Sink sink(out);
    auto& os = sink.stream();
    if (format == "csv") {
        os << "q_hat,std_error,ci99_lo,ci99_hi,j_stat\n"
           << fmt(est.q_hat, 10) << "," << fmt(est.std_error, 10) << ","
           << fmt(est.ci99.first, 10) << "," << fmt(est.ci99.second, 10) << ","
           << fmt(est.j_stat, 10) << "\n";
        return kExitOk;
    }
    json j = {{"q_hat", est.q_hat},
              {"std_error", est.std_error},
              {"ci99", {est.ci99.first, est.ci99.second}},
              {"j_stat", est.j_stat},
              {"n", data.size()}};
    j["per_history"] = json::array();
    for (const auto& h : est.per_history)
        j["per_history"].push_back({{"history", h.history},
                                    {"count", h.count},
                                    {"empirical", h.empirical},
                                    {"fitted", h.fitted}});
    os << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential social-learning toolkit"};
    app.require_subcommand(1);

    std::string out, config, spec_path, format = "json", weighting = "prior";
    std::string grid_str, history, data_path;
    double q_lo = 0.5, q_hi = 0.8, mu0 = 0.5;
    int cap = 100, state = 1, length = 3, count = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", out, "output file (default: stdout)");
        c->add_option("--config", config, "JSON config file; flags take precedence");
        return c;
    };

    auto* t1 = add_common(app.add_subcommand("table1", "contrary-action table"));
    t1->add_option("--weighting", weighting, "state weighting: prior|posterior")
        ->check(CLI::IsMember({"prior", "posterior"}));

    auto* f1 = add_common(app.add_subcommand("figure1", "time-to-cascade sweep"));
    f1->add_option("--q-hi", q_hi, "upper quality bound");
    f1->add_option("--grid", grid_str, "q_lo grid start,stop,step");
    f1->add_option("--cap", cap, "max actions before giving up");

    auto* hz = add_common(app.add_subcommand("hazard", "hazard-ratio curve"));
    hz->add_option("--q-lo", q_lo, "lower quality bound");
    hz->add_option("--q-hi", q_hi, "upper quality bound");
    hz->add_option("--grid", grid_str, "x grid start,stop,step");

    auto* cc = add_common(app.add_subcommand("check-cascade", "cascade start conditions"));
    cc->add_option("--spec", spec_path, "quality spec JSON file");
    cc->add_option("--q-lo", q_lo, "lower quality bound");
    cc->add_option("--q-hi", q_hi, "upper quality bound");

    add_common(app.add_subcommand("worked-example", "exact two-up-actions chain"));

    auto* sim = add_common(app.add_subcommand("simulate", "simulate action sequences"));
    sim->add_option("--spec", spec_path, "quality spec JSON file");
    sim->add_option("--q-lo", q_lo, "lower quality bound");
    sim->add_option("--q-hi", q_hi, "upper quality bound");
    sim->add_option("--state", state, "true state (0 or 1)")->check(CLI::Range(0, 1));
    sim->add_option("--mu0", mu0, "initial public belief");
    sim->add_option("--length", length, "actions per sequence");
    sim->add_option("--n", count, "number of sequences");
    auto* seed_opt = sim->add_option("--seed", seed, "rng seed (required)");

    auto* es = add_common(app.add_subcommand("estimate", "GMM fit of the quality bound"));
    es->add_option("--data", data_path, "action-sequence CSV")->required();
    es->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        apply_config(active, config);
        seed_given = seed_opt->count() > 0;
        const std::string name = active->get_name();
        if (name == "table1") return cmd_table1(out, weighting);
        if (name == "figure1") {
            GridSpec g = grid_str.empty() ? GridSpec{0.5, q_hi, 0.001} : parse_grid(grid_str);
            return cmd_figure1(q_hi, g, cap, out);
        }
        if (name == "hazard") {
            GridSpec g = grid_str.empty() ? GridSpec{0.0, 1.0, 0.005} : parse_grid(grid_str);
            return cmd_hazard(q_lo, q_hi, g, out);
        }
        if (name == "check-cascade")
            return cmd_check_cascade(load_spec(spec_path, q_lo, q_hi), out);
        if (name == "worked-example") return cmd_worked_example(out);
        if (name == "simulate") {
            if (!seed_given) {
                std::cerr << "simulate: --seed is required\n";
                return kExitUsage;
            }
            return cmd_simulate(load_spec(spec_path, q_lo, q_hi), state, mu0, length,
                                count, seed, out);
        }
        if (name == "estimate") return cmd_estimate(data_path, out, format);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
