#pragma once

// Exact enumeration of the communication protocol's joint outcome distribution
// over (state, first-informed, T1, T2) and the secondary-signal extension to
// (Z1, Z2).
//
// Counting convention: in state b the first-informed player's count includes
// the message from nature, so T_first >= 1 as soon as the state is learned.
// For each level t >= 1 and first-informed player F (probability rho for
// player 1, 1-rho for player 2) the terminal counts are
//   (T_F = t, T_other = t-1)  with probability  p * P(F) * (1-eps)^(2t-2) * eps
//   (T_F = t, T_other = t)    with probability  p * P(F) * (1-eps)^(2t-1) * eps
// State a contributes the single outcome T1 = T2 = 0 with probability 1-p.
// Truncation keeps levels t <= depth; the omitted mass is exactly
// p * (1-eps)^(2*depth), tracked in tail_mass so total mass is 1 by identity.
//
// Secondary signals: Z_i = T_j with weight 1-psi, T_j + 1 with weight psi,
// independently across players, drawn in state a as well.

#include "emg/core.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace emg {

struct SignalAtom {
    State state = State::a;
    int first = 0;        // first-informed player, 0 when absent (state a)
    int t1 = 0, t2 = 0;   // message counts
    int z1 = -1, z2 = -1; // secondary signals, -1 until attached
    Rational prob;

    int t_of(int player) const { return player == 1 ? t1 : t2; }
    int z_of(int player) const { return player == 1 ? z1 : z2; }
};

struct SignalDistribution {
    GameParams params;
    std::vector<SignalAtom> atoms;
    int depth = 0;
    Rational tail_mass;
    bool has_signals = false;

    Rational atom_mass() const {
        Rational total(0);
        for (const auto& a : atoms) total += a.prob;
        return total;
    }
};

// Canonical atom order: state a first, then state b by (first, t, lagging
// count before equal count), each outcome followed by its z-splits with z1
// varying slower than z2 and the noiseless branch first.
inline SignalDistribution enumerate_outcomes(const GameParams& g, int depth) {
    validate_or_throw(g);
    if (depth < 2) throw std::invalid_argument("depth must be >= 2");
    SignalDistribution dist;
    dist.params = g;
    dist.depth = depth;
    dist.atoms.push_back({State::a, 0, 0, 0, -1, -1, Rational(1) - g.p});
    const Rational keep = Rational(1) - g.eps;
    for (int first = 1; first <= 2; ++first) {
        const Rational rho_f = g.first_informed_prob(first);
        if (rho_f == 0) continue;
        Rational run = g.p * rho_f * g.eps;  // p * P(F) * (1-eps)^0 * eps
        for (int t = 1; t <= depth; ++t) {
            SignalAtom lag{State::b, first, 0, 0, -1, -1, run};
            (first == 1 ? lag.t1 : lag.t2) = t;
            (first == 1 ? lag.t2 : lag.t1) = t - 1;
            dist.atoms.push_back(lag);
            run *= keep;
            dist.atoms.push_back({State::b, first, t, t, -1, -1, run});
            run *= keep;
        }
    }
    dist.tail_mass = g.p * rational_pow(keep, 2L * depth);
    return dist;
}

inline SignalDistribution attach_signals(const SignalDistribution& base, const Rational& psi) {
    if (base.has_signals) throw std::logic_error("signals already attached");
    if (psi < 0 || psi >= 1) throw std::invalid_argument("psi must be in [0, 1)");
    SignalDistribution dist;
    dist.params = base.params;
    dist.params.psi = psi;
    dist.depth = base.depth;
    dist.tail_mass = base.tail_mass;
    dist.has_signals = true;
    const Rational clean = Rational(1) - psi;
    for (const auto& atom : base.atoms) {
        for (int n1 = 0; n1 < 2; ++n1) {
            const Rational w1 = n1 ? psi : clean;
            if (w1 == 0) continue;
            for (int n2 = 0; n2 < 2; ++n2) {
                const Rational w2 = n2 ? psi : clean;
                if (w2 == 0) continue;
                SignalAtom split = atom;
                split.z1 = atom.t2 + n1;  // Z1 observes T2
                split.z2 = atom.t1 + n2;  // Z2 observes T1
                split.prob = atom.prob * w1 * w2;
                dist.atoms.push_back(split);
            }
        }
    }
    return dist;
}

inline SignalDistribution enumerate_with_signals(const GameParams& g, int depth) {
    return attach_signals(enumerate_outcomes(g, depth), g.psi);
}

// Exact feasible set implied by the protocol for a player who observed (t, z),
// valid beyond any truncation depth. In state b the opponent's count lies in a
// contiguous window; the opponent's own signal satisfies z_opp in {t, t+1}.
struct SupportBounds {
    bool feasible = false;
    bool state_a_possible = false;
    bool state_b_possible = false;
    int t_opp_lo = 0, t_opp_hi = -1;  // state-b window, empty when lo > hi
    int z_opp_lo = 0, z_opp_hi = -1;

    // Smallest possible min(t_opp, z_opp) over the state-b support.
    int min_opp_coordinate() const { return std::min(t_opp_lo, z_opp_lo); }
};

inline SupportBounds support_bounds(const GameParams& g, int player, int t, int z) {
    SupportBounds out;
    if (t < 0 || z < 0) return out;
    const bool noisy = g.psi > 0;
    const int opp = player == 1 ? 2 : 1;
    // Own z restricts the opponent's count: z = t_opp (clean) or t_opp + 1
    // (overshoot), so t_opp in {z-1, z}, collapsing to {z} when psi = 0.
    const int z_lo = noisy ? z - 1 : z;
    const int z_hi = z;
    out.z_opp_lo = t;
    out.z_opp_hi = noisy ? t + 1 : t;
    if (t == 0) {
        out.state_a_possible = z <= (noisy ? 1 : 0);
        // With no message received, state b requires the opponent to be the
        // first informed with the opening message lost, hence t_opp = 1.
        const bool opp_first_possible = g.first_informed_prob(opp) > 0;
        out.state_b_possible = opp_first_possible && z_lo <= 1 && 1 <= z_hi;
        if (out.state_b_possible) out.t_opp_lo = out.t_opp_hi = 1;
        out.feasible = out.state_a_possible || out.state_b_possible;
        return out;
    }
    out.state_b_possible = true;
    const int proto_lo = g.first_informed_prob(player) > 0 ? t - 1 : t;
    const int proto_hi = g.first_informed_prob(opp) > 0 ? t + 1 : t;
    out.t_opp_lo = std::max({proto_lo, z_lo, 0});
    out.t_opp_hi = std::min(proto_hi, z_hi);
    if (out.t_opp_lo > out.t_opp_hi) {
        out.state_b_possible = false;
        return out;
    }
    out.feasible = true;
    return out;
}

// Atom dump, byte-stable for fixed inputs. Columns:
// state,first,t1,t2,z1,z2,prob with empty fields for absent values.
inline void write_atoms_csv(std::ostream& os, const SignalDistribution& dist) {
    os << "state,first,t1,t2,z1,z2,prob\n";
    for (const auto& a : dist.atoms) {
        os << to_char(a.state) << ',';
        if (a.first != 0) os << a.first;
        os << ',' << a.t1 << ',' << a.t2 << ',';
        if (a.z1 >= 0) os << a.z1;
        os << ',';
        if (a.z2 >= 0) os << a.z2;
        os << ',' << format_rational(a.prob) << '\n';
    }
    os << "# depth=" << dist.depth << " tail_mass=" << format_rational(dist.tail_mass) << '\n';
}

}  // namespace emg
