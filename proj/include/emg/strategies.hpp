#pragma once

// Strategy representation and the named threshold families. A strategy is a
// finite exception table over max(t, z) <= bound plus a constant tail rule,
// so best responses on the infinite signal lattice can be certified exactly.

#include "emg/core.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace emg {

enum class Family { AllA, AllB, AsymT, AsymZ, Sym, SymShifted, Rubinstein, Custom };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::AllA: return "all_a";
        case Family::AllB: return "all_b";
        case Family::AsymT: return "asym_t";
        case Family::AsymZ: return "asym_z";
        case Family::Sym: return "sym";
        case Family::SymShifted: return "sym_shifted";
        case Family::Rubinstein: return "rubinstein";
        case Family::Custom: return "custom";
    }
    return "custom";
}

struct Strategy {
    int player = 1;
    int bound = 0;                  // table covers all (t, z) with max(t, z) <= bound
    std::vector<Action> table;      // (bound+1)^2 entries, indexed t * (bound+1) + z
    Action tail_rule = Action::A;   // applies whenever max(t, z) > bound
    Family family = Family::Custom;
    int n = 0;                      // cutoff for threshold families

    Action action(int t, int z) const {
        if (t < 0 || z < 0) throw std::invalid_argument("signals must be non-negative");
        if (t > bound || z > bound) return tail_rule;
        return table[static_cast<std::size_t>(t) * (bound + 1) + z];
    }

    // Smallest level k such that every cell with min(t, z) >= k that the
    // protocol can ever realize (t - 1 <= z <= t + 2) plays the tail rule.
    int eventually_constant_level() const {
        int level = 0;
        for (int t = 0; t <= bound; ++t)
            for (int z = 0; z <= bound; ++z) {
                if (z < t - 1 || z > t + 2) continue;
                if (action(t, z) != tail_rule) level = std::max(level, std::min(t, z) + 1);
            }
        return level;
    }
};

namespace detail {
inline bool family_plays_b(Family f, int n, int player, int t, int z) {
    switch (f) {
        case Family::AllA: return false;
        case Family::AllB: return true;
        case Family::AsymT: return t >= n + 1 && z >= n;
        case Family::AsymZ: return z >= n + 1 && t >= n;
        case Family::Sym: return t >= n + 1 && z >= n + 1;
        case Family::SymShifted: return t >= n + 1 && z >= n + 2;
        case Family::Rubinstein:
            return player == 1 ? t >= n + 1 : (z >= n + 1 && t >= n);
        case Family::Custom: break;
    }
    throw std::invalid_argument("family has no predicate");
}
}  // namespace detail

inline Strategy make_family(Family f, int n, int player) {
    if (player != 1 && player != 2) throw std::invalid_argument("player must be 1 or 2");
    if (f == Family::Custom) throw std::invalid_argument("custom strategies need a table");
    const bool threshold = f != Family::AllA && f != Family::AllB;
    if (threshold && n < 1) throw std::invalid_argument("threshold cutoff n must be >= 1");
    Strategy s;
    s.player = player;
    s.family = f;
    s.n = threshold ? n : 0;
    s.bound = threshold ? 3 * n + 5 : 0;
    s.tail_rule = f == Family::AllA ? Action::A : Action::B;
    s.table.assign(static_cast<std::size_t>(s.bound + 1) * (s.bound + 1), Action::A);
    for (int t = 0; t <= s.bound; ++t)
        for (int z = 0; z <= s.bound; ++z)
            s.table[static_cast<std::size_t>(t) * (s.bound + 1) + z] =
                detail::family_plays_b(f, s.n, player, t, z) ? Action::B : Action::A;
    return s;
}

struct StrategyProfile {
    Strategy s1, s2;

    const Strategy& of(int player) const { return player == 1 ? s1 : s2; }
};

inline StrategyProfile profile(Strategy s1, Strategy s2) {
    if (s1.player != 1 || s2.player != 2)
        throw std::invalid_argument("profile needs player-1 and player-2 strategies in order");
    return {std::move(s1), std::move(s2)};
}

// Swap player roles; decision rules are unchanged, only labels move.
inline StrategyProfile mirror(const StrategyProfile& p) {
    StrategyProfile m{p.s2, p.s1};
    m.s1.player = 1;
    m.s2.player = 2;
    return m;
}

// The named profile for a family: asymmetric families pair the count-leading
// rule with its signal-leading partner, the rest use the same rule twice.
inline StrategyProfile family_profile(Family f, int n) {
    switch (f) {
        case Family::AllA:
            return profile(make_family(Family::AllA, 0, 1), make_family(Family::AllA, 0, 2));
        case Family::AllB:
            return profile(make_family(Family::AllB, 0, 1), make_family(Family::AllB, 0, 2));
        case Family::AsymT:
            return profile(make_family(Family::AsymT, n, 1), make_family(Family::AsymZ, n, 2));
        case Family::AsymZ:
            return profile(make_family(Family::AsymZ, n, 1), make_family(Family::AsymT, n, 2));
        case Family::Sym:
            return profile(make_family(Family::Sym, n, 1), make_family(Family::Sym, n, 2));
        case Family::SymShifted:
            return profile(make_family(Family::SymShifted, n, 1),
                           make_family(Family::SymShifted, n, 2));
        case Family::Rubinstein:
            return profile(make_family(Family::Rubinstein, n, 1),
                           make_family(Family::Rubinstein, n, 2));
        case Family::Custom: break;
    }
    throw std::invalid_argument("no profile for custom family");
}

inline nlohmann::ordered_json strategy_to_json(const Strategy& s) {
    nlohmann::ordered_json j;
    j["player"] = s.player;
    switch (s.family) {
        case Family::AsymT:
        case Family::AsymZ:
            j["family"] = "asym";
            j["n"] = s.n;
            j["lead"] = s.family == Family::AsymT ? "T" : "Z";
            return j;
        case Family::Custom: {
            j["family"] = "custom";
            j["bound"] = s.bound;
            auto table = nlohmann::ordered_json::array();
            for (int t = 0; t <= s.bound; ++t)
                for (int z = 0; z <= s.bound; ++z)
                    table.push_back({t, z, std::string(1, to_char(s.action(t, z)))});
            j["table"] = std::move(table);
            j["tail"] = std::string(1, to_char(s.tail_rule));
            return j;
        }
        default:
            j["family"] = to_string(s.family);
            if (s.n > 0) j["n"] = s.n;
            return j;
    }
}

inline Strategy strategy_from_json(const nlohmann::json& j) {
    const int player = j.at("player").get<int>();
    const std::string family = j.at("family").get<std::string>();
    if (family == "custom") {
        Strategy s;
        s.player = player;
        s.family = Family::Custom;
        s.bound = j.at("bound").get<int>();
        if (s.bound < 0) throw std::invalid_argument("bound must be >= 0");
        s.tail_rule = action_from_string(j.at("tail").get<std::string>());
        s.table.assign(static_cast<std::size_t>(s.bound + 1) * (s.bound + 1), s.tail_rule);
        for (const auto& row : j.at("table")) {
            const int t = row.at(0).get<int>();
            const int z = row.at(1).get<int>();
            if (t < 0 || z < 0 || t > s.bound || z > s.bound)
                throw std::invalid_argument("table cell outside bound");
            s.table[static_cast<std::size_t>(t) * (s.bound + 1) + z] =
                action_from_string(row.at(2).get<std::string>());
        }
        return s;
    }
    const int n = j.contains("n") ? j.at("n").get<int>() : 0;
    if (family == "asym") {
        const std::string lead = j.at("lead").get<std::string>();
        if (lead != "T" && lead != "Z") throw std::invalid_argument("lead must be T or Z");
        return make_family(lead == "T" ? Family::AsymT : Family::AsymZ, n, player);
    }
    if (family == "all_a") return make_family(Family::AllA, 0, player);
    if (family == "all_b") return make_family(Family::AllB, 0, player);
    if (family == "sym") return make_family(Family::Sym, n, player);
    if (family == "sym_shifted") return make_family(Family::SymShifted, n, player);
    if (family == "rubinstein") return make_family(Family::Rubinstein, n, player);
    throw std::invalid_argument("unknown family: '" + family + "'");
}

inline nlohmann::ordered_json profile_to_json(const StrategyProfile& p) {
    return nlohmann::ordered_json{{"s1", strategy_to_json(p.s1)}, {"s2", strategy_to_json(p.s2)}};
}

inline StrategyProfile profile_from_json(const nlohmann::json& j) {
    return profile(strategy_from_json(j.at("s1")), strategy_from_json(j.at("s2")));
}

}  // namespace emg
