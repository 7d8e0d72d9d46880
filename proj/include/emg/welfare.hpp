#pragma once

// Exact expected welfare loss versus the perfect-coordination benchmark of
// 2M total per state, plus two quoted closed-form loss expressions kept for
// side-by-side reporting. Exact enumeration is the ground truth;
// discrepancies between it and the quoted formulas are surfaced, not
// reconciled.

#include "emg/equilibrium.hpp"

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace emg {

// Exact joint probabilities of (state, action pair) under a profile. Atoms
// beyond the enumeration depth all have min(t, z) in the constant region of
// both strategies, so the tail lands on one known action pair.
struct CellProbabilities {
    Rational cell[2][2][2];  // [state][a1][a2]

    const Rational& at(State s, Action a1, Action a2) const {
        return cell[s == State::b][a1 == Action::B][a2 == Action::B];
    }
    Rational& at(State s, Action a1, Action a2) {
        return cell[s == State::b][a1 == Action::B][a2 == Action::B];
    }
};

inline CellProbabilities cell_probabilities(const GameParams& g, const StrategyProfile& prof) {
    validate_or_throw(g);
    const int depth = std::max({prof.s1.eventually_constant_level(),
                                prof.s2.eventually_constant_level(), 1}) + 2;
    const auto dist = enumerate_with_signals(g, depth);
    CellProbabilities cells{};
    for (const auto& atom : dist.atoms)
        cells.at(atom.state, prof.s1.action(atom.t1, atom.z1), prof.s2.action(atom.t2, atom.z2)) +=
            atom.prob;
    // Tail atoms are state b with min(T_i, Z_i) >= depth for both players,
    // inside each strategy's constant region.
    cells.at(State::b, prof.s1.tail_rule, prof.s2.tail_rule) += dist.tail_mass;
    return cells;
}

struct WelfareReport {
    std::string family = "custom";
    int n = 0;
    Rational prob_wrong_coordination;  // P(state b and both play A)
    Rational prob_miscoordination;     // P(actions differ)
    Rational loss_exact;
    Rational loss_second_moment;  // E[loss^2], for statistical cross-checks
    std::optional<Rational> loss_closed_form;
};

inline WelfareReport loss_exact_report(const GameParams& g, const StrategyProfile& prof) {
    const auto cells = cell_probabilities(g, prof);
    WelfareReport report;
    const Rational benchmark = 2 * g.M;
    for (State s : {State::a, State::b})
        for (Action a1 : {Action::A, Action::B})
            for (Action a2 : {Action::A, Action::B}) {
                const Rational mass = cells.at(s, a1, a2);
                if (mass == 0) continue;
                const Rational shortfall = benchmark - total_payoff(s, a1, a2, g);
                report.loss_exact += mass * shortfall;
                report.loss_second_moment += mass * shortfall * shortfall;
                if (a1 != a2) report.prob_miscoordination += mass;
            }
    report.prob_wrong_coordination = cells.at(State::b, Action::A, Action::A);
    return report;
}

// The quoted closed-form losses for the asymmetric and symmetric threshold
// profiles with cutoff n, evaluated literally.
inline Rational loss_closed_form(const GameParams& g, Family family, int n) {
    if (n < 1) throw std::invalid_argument("cutoff n must be >= 1");
    const Rational e = g.eps, psi = g.psi, M = g.M, L = g.L, p = g.p;
    const Rational q = Rational(1) - e;
    if (family == Family::AsymT || family == Family::AsymZ) {
        const Rational bracket = Rational(-1) + e * (1 + (Rational(1) - psi) * q) +
                                 q * q * (Rational(1) - psi) / 2;
        return p * rational_pow(q, 2 * n - 1) * (e * psi * (2 * M + L) + bracket * 2 * M) +
               p * 2 * M;
    }
    if (family == Family::Sym) {
        const Rational bracket = Rational(-1) + e * (Rational(1) - psi);
        return p * rational_pow(q, 2 * (n - 1)) *
                   (e * psi * (2 * M + L) + q * q * bracket * 2 * M) +
               p * 2 * M;
    }
    throw std::invalid_argument("closed-form loss exists for asym and sym families only");
}

inline WelfareReport welfare_report(const GameParams& g, Family family, int n) {
    auto report = loss_exact_report(g, family_profile(family, n));
    report.family = to_string(family);
    report.n = n;
    if (family == Family::AsymT || family == Family::AsymZ || family == Family::Sym)
        report.loss_closed_form = loss_closed_form(g, family, n);
    return report;
}

struct CompareRow {
    int n = 0;
    Rational loss_asym, loss_sym;
    Rational difference;         // loss_asym - loss_sym, exact
    Rational closed_difference;  // verbatim-formula difference
    bool asym_verified = false, sym_verified = false;
    bool dominance_holds = false;  // difference < 0
};

// Exact welfare comparison across cutoffs; each compared profile is verified
// first and rows flag any n where verification or dominance fails.
inline std::vector<CompareRow> compare(const GameParams& g, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("bad cutoff range");
    std::vector<CompareRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        CompareRow row;
        row.n = n;
        row.asym_verified =
            verify(g, family_profile(Family::AsymT, n)).verdict == Verdict::Equilibrium;
        row.sym_verified =
            verify(g, family_profile(Family::Sym, n)).verdict == Verdict::Equilibrium;
        row.loss_asym = loss_exact_report(g, family_profile(Family::AsymT, n)).loss_exact;
        row.loss_sym = loss_exact_report(g, family_profile(Family::Sym, n)).loss_exact;
        row.difference = row.loss_asym - row.loss_sym;
        row.closed_difference =
            loss_closed_form(g, Family::AsymT, n) - loss_closed_form(g, Family::Sym, n);
        row.dominance_holds = row.difference < 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

// CSV writers. Column sets are fixed; rationals print exactly.
inline void write_welfare_csv(std::ostream& os, const GameParams& g,
                              const std::vector<WelfareReport>& reports) {
    os << "# params: p=" << format_rational(g.p) << " epsilon=" << format_rational(g.eps)
       << " psi=" << format_rational(g.psi) << " L=" << format_rational(g.L)
       << " M=" << format_rational(g.M) << " rho=" << format_rational(g.rho) << '\n';
    os << "n,family,prob_wrong,prob_miscoord,loss_exact,loss_paper_formula,diff\n";
    for (const auto& r : reports) {
        os << r.n << ',' << r.family << ',' << format_rational(r.prob_wrong_coordination) << ','
           << format_rational(r.prob_miscoordination) << ',' << format_rational(r.loss_exact)
           << ',';
        if (r.loss_closed_form) {
            os << format_rational(*r.loss_closed_form) << ','
               << format_rational(r.loss_exact - *r.loss_closed_form);
        } else {
            os << ',';
        }
        os << '\n';
    }
}

inline void write_compare_csv(std::ostream& os, const GameParams& g,
                              const std::vector<CompareRow>& rows) {
    os << "# params: p=" << format_rational(g.p) << " epsilon=" << format_rational(g.eps)
       << " psi=" << format_rational(g.psi) << " L=" << format_rational(g.L)
       << " M=" << format_rational(g.M) << " rho=" << format_rational(g.rho) << '\n';
    os << "n,loss_exact_asym,loss_exact_sym,difference,closed_form_difference,flags\n";
    for (const auto& row : rows) {
        std::string flags;
        if (!row.asym_verified) flags += "asym-not-equilibrium;";
        if (!row.sym_verified) flags += "sym-not-equilibrium;";
        if (!row.dominance_holds) flags += "dominance-fails;";
        os << row.n << ',' << format_rational(row.loss_asym) << ','
           << format_rational(row.loss_sym) << ',' << format_rational(row.difference) << ','
           << format_rational(row.closed_difference) << ',' << flags << '\n';
    }
}

}  // namespace emg
