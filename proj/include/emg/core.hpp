#pragma once

// Model primitives: parameters, states, actions, payoff tables.

#include "emg/rational.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace emg {

enum class State { a, b };
enum class Action { A, B };

inline char to_char(State s) { return s == State::a ? 'a' : 'b'; }
inline char to_char(Action x) { return x == Action::A ? 'A' : 'B'; }

inline Action action_from_string(const std::string& s) {
    if (s == "A") return Action::A;
    if (s == "B") return Action::B;
    throw std::invalid_argument("unknown action: '" + s + "'");
}

// All model primitives, exact rationals end to end.
struct GameParams {
    Rational p;    // prior probability of state b, 0 < p < 1/2
    Rational eps;  // per-message loss probability, 0 < eps < 1
    Rational psi;  // secondary-signal overshoot probability, 0 <= psi < 1
    Rational L;    // loss from playing B against A, L > M
    Rational M;    // coordination payoff, M > 0
    Rational rho;  // probability that player 1 is informed first in state b

    // Probability that the given player (1 or 2) is the first informed.
    Rational first_informed_prob(int player) const {
        return player == 1 ? rho : Rational(1) - rho;
    }
};

// First violated constraint, or nullopt when all invariants hold.
inline std::optional<std::string> validate(const GameParams& g) {
    if (g.p <= 0) return "p must be positive";
    if (g.p >= Rational(1, 2)) return "p must be < 1/2";
    if (g.M <= 0) return "M must be positive";
    if (g.L <= g.M) return "L must exceed M";
    if (g.eps <= 0 || g.eps >= 1) return "eps must be in (0, 1)";
    if (g.psi < 0 || g.psi >= 1) return "psi must be in [0, 1)";
    if (g.rho < 0 || g.rho > 1) return "rho must be in [0, 1]";
    return std::nullopt;
}

inline void validate_or_throw(const GameParams& g) {
    if (auto err = validate(g)) throw std::invalid_argument(*err);
}

// Payoff pair (u1, u2), straight from the two 2x2 tables:
//   game a: (A,A) -> (M,M)  (A,B) -> (0,-L)  (B,A) -> (-L,0)  (B,B) -> (0,0)
//   game b: (A,A) -> (0,0)  (A,B) -> (0,-L)  (B,A) -> (-L,0)  (B,B) -> (M,M)
inline std::pair<Rational, Rational> payoff(State s, Action a1, Action a2, const GameParams& g) {
    if (a1 == Action::B && a2 == Action::A) return {-g.L, Rational(0)};
    if (a1 == Action::A && a2 == Action::B) return {Rational(0), -g.L};
    const bool coordinated_right =
        (s == State::a && a1 == Action::A) || (s == State::b && a1 == Action::B);
    if (coordinated_right) return {g.M, g.M};
    return {Rational(0), Rational(0)};
}

inline Rational total_payoff(State s, Action a1, Action a2, const GameParams& g) {
    auto [u1, u2] = payoff(s, a1, a2, g);
    return u1 + u2;
}

inline nlohmann::ordered_json params_to_json(const GameParams& g) {
    return nlohmann::ordered_json{
        {"p", format_rational(g.p)},       {"epsilon", format_rational(g.eps)},
        {"psi", format_rational(g.psi)},   {"L", format_rational(g.L)},
        {"M", format_rational(g.M)},       {"rho", format_rational(g.rho)},
    };
}

inline GameParams params_from_json(const nlohmann::json& j) {
    for (const char* key : {"p", "epsilon", "psi", "L", "M", "rho"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("params missing key '") + key + "'");
    auto field = [&](const char* key) { return parse_rational(j.at(key).get<std::string>()); };
    return GameParams{field("p"), field("epsilon"), field("psi"),
                      field("L"), field("M"),       field("rho")};
}

}  // namespace emg
