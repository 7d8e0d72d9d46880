#pragma once

// Seeded stochastic simulation of the protocol and a strategy profile, used
// as an independent statistical oracle for the exact engine.
//
// Determinism contract: every sample draws from its own splitmix64 stream
// whose initial state is seed + (index + 1) * 0x9e3779b97f4a7c15, so results
// are bit-identical for a fixed (seed, config) regardless of thread count.
// Bernoulli draws compare a raw 64-bit draw against floor(q * 2^64), computed
// exactly from the rational q once per run.

#include "emg/welfare.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace emg {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t x = (state += 0x9e3779b97f4a7c15ULL);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct ExactBernoulli {
    std::uint64_t threshold = 0;
    bool always = false;

    bool draw(std::uint64_t& stream) const { return always || splitmix64(stream) < threshold; }
};

inline ExactBernoulli make_bernoulli(const Rational& q) {
    if (q < 0 || q > 1) throw std::invalid_argument("probability out of [0, 1]");
    if (q == 1) return {0, true};
    // floor(q * 2^64); dyadic probabilities are exact, others carry a bias
    // below 2^-64, far under any statistical tolerance used here.
    const Int units = (numerator(q) << 64) / denominator(q);
    return {units.convert_to<std::uint64_t>(), false};
}

struct SimConfig {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    GameParams params;
    StrategyProfile profile;
    int threads = 1;
    std::uint64_t round_cap = 1'000'000;  // guards pathological eps near 0
};

struct SimResult {
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t aborted = 0;  // samples whose message loop hit the round cap
    std::uint64_t cells[2][2][2] = {};  // counts by (state, a1, a2)

    std::uint64_t effective_samples() const { return samples - aborted; }
    std::uint64_t state_count(State s) const {
        std::uint64_t total = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) total += cells[s == State::b][i][j];
        return total;
    }
    std::uint64_t cell_count(State s, Action a1, Action a2) const {
        return cells[s == State::b][a1 == Action::B][a2 == Action::B];
    }

    Rational frequency(State s, Action a1, Action a2) const {
        return Rational(cell_count(s, a1, a2), effective_samples());
    }
    Rational mean_total_payoff(const GameParams& g) const {
        Rational sum(0);
        for (State s : {State::a, State::b})
            for (Action a1 : {Action::A, Action::B})
                for (Action a2 : {Action::A, Action::B})
                    sum += Rational(cell_count(s, a1, a2)) * total_payoff(s, a1, a2, g);
        return sum / Rational(effective_samples());
    }
    Rational mean_loss(const GameParams& g) const {
        return 2 * g.M - mean_total_payoff(g);
    }
    Rational loss_second_moment(const GameParams& g) const {
        Rational sum(0);
        for (State s : {State::a, State::b})
            for (Action a1 : {Action::A, Action::B})
                for (Action a2 : {Action::A, Action::B}) {
                    const Rational shortfall = 2 * g.M - total_payoff(s, a1, a2, g);
                    sum += Rational(cell_count(s, a1, a2)) * shortfall * shortfall;
                }
        return sum / Rational(effective_samples());
    }
    double se_loss(const GameParams& g) const {
        const Rational var = loss_second_moment(g) - mean_loss(g) * mean_loss(g);
        return std::sqrt(var.convert_to<double>() / static_cast<double>(effective_samples()));
    }
};

inline SimResult simulate(const SimConfig& config) {
    validate_or_throw(config.params);
    if (config.samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (config.threads < 1) throw std::invalid_argument("threads must be >= 1");
    const ExactBernoulli state_b = make_bernoulli(config.params.p);
    const ExactBernoulli first_is_p1 = make_bernoulli(config.params.rho);
    const ExactBernoulli lost = make_bernoulli(config.params.eps);
    const ExactBernoulli overshoot = make_bernoulli(config.params.psi);
    const Strategy& s1 = config.profile.s1;
    const Strategy& s2 = config.profile.s2;

    struct Counters {
        std::uint64_t cells[2][2][2] = {};
        std::uint64_t aborted = 0;
    };
    auto run_chunk = [&](std::uint64_t begin, std::uint64_t end, Counters& out) {
        for (std::uint64_t i = begin; i < end; ++i) {
            std::uint64_t stream = config.seed + (i + 1) * 0x9e3779b97f4a7c15ULL;
            int t1 = 0, t2 = 0;
            State state = State::a;
            bool ok = true;
            if (state_b.draw(stream)) {
                state = State::b;
                const int first = first_is_p1.draw(stream) ? 1 : 2;
                (first == 1 ? t1 : t2) = 1;  // nature's message counts
                int sender = first;
                std::uint64_t rounds = 0;
                while (!lost.draw(stream)) {
                    if (++rounds > config.round_cap) {
                        ok = false;
                        break;
                    }
                    (sender == 1 ? t2 : t1) += 1;
                    sender = sender == 1 ? 2 : 1;
                }
            }
            const int z1 = t2 + (overshoot.draw(stream) ? 1 : 0);
            const int z2 = t1 + (overshoot.draw(stream) ? 1 : 0);
            if (!ok) {
                ++out.aborted;
                continue;
            }
            const Action a1 = s1.action(t1, z1);
            const Action a2 = s2.action(t2, z2);
            ++out.cells[state == State::b][a1 == Action::B][a2 == Action::B];
        }
    };

    std::vector<Counters> partial(config.threads);
    if (config.threads == 1) {
        run_chunk(0, config.samples, partial[0]);
    } else {
        std::vector<std::thread> workers;
        const std::uint64_t chunk = (config.samples + config.threads - 1) / config.threads;
        for (int k = 0; k < config.threads; ++k) {
            const std::uint64_t begin = chunk * k;
            const std::uint64_t end = std::min(config.samples, begin + chunk);
            if (begin >= end) break;
            workers.emplace_back(run_chunk, begin, end, std::ref(partial[k]));
        }
        for (auto& w : workers) w.join();
    }

    SimResult result;
    result.seed = config.seed;
    result.samples = config.samples;
    for (const auto& c : partial) {
        result.aborted += c.aborted;
        for (int s = 0; s < 2; ++s)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) result.cells[s][i][j] += c.cells[s][i][j];
    }
    if (result.effective_samples() == 0) throw std::runtime_error("all samples aborted");
    return result;
}

// ---------------------------------------------------------------------------
// Oracle comparison: each empirical statistic must lie within sigma standard
// errors of its exact counterpart. z^2 values are exact rationals, so the
// pass/fail decision involves no floating point.

struct CheckItem {
    std::string name;
    Rational z_squared;
    bool pass = false;

    double z_abs() const { return std::sqrt(z_squared.convert_to<double>()); }
};

struct ConvergenceReport {
    std::vector<CheckItem> items;
    bool pass = true;
};

namespace detail {

inline CheckItem binomial_check(const std::string& name, std::uint64_t hits, std::uint64_t n,
                                const Rational& exact, int sigma) {
    CheckItem item{name, Rational(0), true};
    const Rational variance = exact * (Rational(1) - exact);
    const Rational diff = Rational(hits, n) - exact;
    if (variance == 0) {
        item.pass = diff == 0;
        item.z_squared = item.pass ? Rational(0) : Rational(sigma) * sigma + 1;
        return item;
    }
    item.z_squared = diff * diff * Rational(n) / variance;
    item.pass = item.z_squared <= Rational(sigma) * sigma;
    return item;
}

}  // namespace detail

inline ConvergenceReport convergence_check(const SimConfig& config, const SimResult& result,
                                           const CellProbabilities& exact_cells,
                                           const Rational& exact_loss,
                                           const Rational& exact_loss_second_moment,
                                           int sigma = 4) {
    ConvergenceReport report;
    const std::uint64_t n = result.effective_samples();
    report.items.push_back(detail::binomial_check("P(state b)", result.state_count(State::b), n,
                                                  config.params.p, sigma));
    const Rational p_bb_given_b =
        exact_cells.at(State::b, Action::B, Action::B) / config.params.p;
    const std::uint64_t n_b = result.state_count(State::b);
    if (n_b > 0)
        report.items.push_back(detail::binomial_check(
            "P(both B | b)", result.cell_count(State::b, Action::B, Action::B), n_b,
            p_bb_given_b, sigma));

    CheckItem loss{"expected loss", Rational(0), true};
    const Rational variance = exact_loss_second_moment - exact_loss * exact_loss;
    const Rational diff = result.mean_loss(config.params) - exact_loss;
    if (variance == 0) {
        loss.pass = diff == 0;
        loss.z_squared = loss.pass ? Rational(0) : Rational(sigma) * sigma + 1;
    } else {
        loss.z_squared = diff * diff * Rational(n) / variance;
        loss.pass = loss.z_squared <= Rational(sigma) * sigma;
    }
    report.items.push_back(std::move(loss));
    for (const auto& item : report.items) report.pass = report.pass && item.pass;
    return report;
}

// Convenience wrapper computing the exact quantities from the config itself.
inline ConvergenceReport convergence_check(const SimConfig& config, const SimResult& result,
                                           int sigma = 4) {
    const auto cells = cell_probabilities(config.params, config.profile);
    const auto welfare = loss_exact_report(config.params, config.profile);
    return convergence_check(config, result, cells, welfare.loss_exact,
                             welfare.loss_second_moment, sigma);
}

inline nlohmann::ordered_json sim_result_to_json(const SimConfig& config,
                                                 const SimResult& result) {
    nlohmann::ordered_json j;
    j["seed"] = result.seed;
    j["samples"] = result.samples;
    j["aborted"] = result.aborted;
    j["threads"] = config.threads;
    j["params"] = params_to_json(config.params);
    j["profile"] = profile_to_json(config.profile);
    nlohmann::ordered_json counts, freqs;
    for (State s : {State::a, State::b})
        for (Action a1 : {Action::A, Action::B})
            for (Action a2 : {Action::A, Action::B}) {
                const std::string key = std::string(1, to_char(s)) + "_" + to_char(a1) + to_char(a2);
                counts[key] = result.cell_count(s, a1, a2);
                freqs[key] = format_rational(result.frequency(s, a1, a2));
            }
    j["counts"] = std::move(counts);
    j["frequencies"] = std::move(freqs);
    j["mean_total_payoff"] = format_rational(result.mean_total_payoff(config.params));
    j["mean_loss"] = format_rational(result.mean_loss(config.params));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", result.se_loss(config.params));
    j["se_loss"] = std::string(buf);
    return j;
}

}  // namespace emg
