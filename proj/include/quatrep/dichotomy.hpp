#pragma once

// m_B(pi, chi) + m_eps(sigma, chi) = 1 for odd-conductor pi of B^x against every
// admissible kappa of its inducing field, chi in {1, nu_E}. The B side is a
// character average over the image of E^x; the other side is Tunnell's sign.

#include "quatrep/epsilon.hpp"
#include "quatrep/local_division.hpp"

namespace quatrep {

struct DichotomyEntry {
    size_t row = 0;
    RepLabel label = RepLabel::K;
    ExtLabel E = ExtLabel::K;
    bool sign_char = false;
    Rational m_B;
    int m_eps = 0;  // common value over the admissible family
    bool eps_constant = true;
    bool ok = false;
};

struct DichotomyReport {
    int64_t p = 3;
    int conductor = 3;
    std::vector<DichotomyEntry> entries;
    std::map<RepLabel, std::pair<size_t, size_t>> counts;  // label -> (#reps, #kappa orbits)
    size_t violations = 0;
    bool counting_ok = true;
};

/// m_B(pi, chi) for chi in {1, nu_E}: half the sum/difference of the averages over H_E and pi_E H_E.
inline Rational torus_multiplicity(const LocalDivisionQuotient& D, size_t row, ExtLabel E, bool sign_char) {
    const auto& G = D.group();
    const auto& C = D.classes();
    auto H = G.torus(E);
    int32_t pi = G.uniformizer(E);
    std::map<int32_t, int64_t> c0, c1;
    for (int32_t h : H) {
        ++c0[C.class_of[static_cast<size_t>(h)]];
        ++c1[C.class_of[static_cast<size_t>(G.mul(pi, h))]];
    }
    Rational a0 = D.table().average(row, {c0.begin(), c0.end()});
    Rational a1 = D.table().average(row, {c1.begin(), c1.end()});
    Rational m = sign_char ? Rational(a0 - a1) : Rational(a0 + a1);
    return m / 2;
}

/// D must be the quotient G_{c-1}.
inline DichotomyReport dichotomy_check(const LocalDivisionQuotient& D, int c) {
    if (c % 2 == 0 || c < 3) throw Error("dichotomy_check: conductor must be odd and at least 3");
    if (D.group().n() != c - 1) throw Error("dichotomy_check: expected the quotient of level c - 1");
    DichotomyReport rep;
    rep.p = D.group().p();
    rep.conductor = c;
    std::map<RepLabel, std::vector<EUnitCharacter>> kappas;
    for (ExtLabel K : {ExtLabel::K, ExtLabel::L}) kappas[to_rep_label(K)] = admissible_orbits(rep.p, K, c - 1);
    for (auto& [lab, ks] : kappas) rep.counts[lab] = {0, ks.size()};
    // m_eps per (label, E, chi); must not depend on kappa
    std::map<std::tuple<RepLabel, ExtLabel, bool>, std::pair<int, bool>> eps;
    for (auto& [lab, ks] : kappas)
        for (ExtLabel E : kAllLabels)
            for (bool s : {false, true}) {
                if (E == ExtLabel::M && s) continue;
                int m = -1;
                bool constant = true;
                for (const auto& k : ks) {
                    int v = tunnell_multiplicity(k, E, s);
                    if (m >= 0 && v != m) constant = false;
                    m = v;
                }
                eps[{lab, E, s}] = {m, constant};
            }
    for (const auto& r : D.records()) {
        if (r.dim == 1 || r.conductor != c) continue;
        ++rep.counts[r.label].first;
        for (ExtLabel E : kAllLabels)
            for (bool s : {false, true}) {
                // nu_M is nontrivial on F^x, outside the dichotomy
                if (E == ExtLabel::M && s) continue;
                DichotomyEntry e;
                e.row = r.row;
                e.label = r.label;
                e.E = E;
                e.sign_char = s;
                e.m_B = torus_multiplicity(D, r.row, E, s);
                auto it = eps.find({r.label, E, s});
                if (it == eps.end() || it->second.first < 0) {
                    e.m_eps = -1;
                    e.eps_constant = false;
                } else {
                    e.m_eps = it->second.first;
                    e.eps_constant = it->second.second;
                }
                e.ok = e.eps_constant && e.m_B + e.m_eps == 1;
                if (!e.ok) ++rep.violations;
                rep.entries.push_back(e);
            }
    }
    for (auto& [lab, pr] : rep.counts)
        if (pr.first != pr.second) rep.counting_ok = false;
    return rep;
}

}  // namespace quatrep
