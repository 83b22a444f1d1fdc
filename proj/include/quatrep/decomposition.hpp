#pragma once

// The ladder of special orders of p-power level, pullbacks between class sets,
// old and new cusp spaces, Hecke eigensystems as factors of characteristic
// polynomials, classical dimensions for Gamma_0(p^m), and the global checks.

#include "quatrep/classset.hpp"

namespace quatrep {

// ---------------------------------------------------------------- classical side

namespace detail {

inline int kronecker_small(int64_t d, int64_t l) {
    if (l == 2) {
        if (d % 2 == 0) return 0;
        int64_t m = mod(d, 8);
        return (m == 1 || m == 7) ? 1 : -1;
    }
    return legendre(d, l);
}

inline int64_t euler_phi(int64_t n) {
    int64_t r = n;
    for (int64_t l : prime_factors(n)) r = r / l * (l - 1);
    return r;
}

}  // namespace detail

/// dim S_k(Gamma_0(N)) for N = 1 or a prime power, k even >= 2.
inline int64_t cusp_form_dimension(int64_t N, int k) {
    if (k < 2 || k % 2) throw Error("classical_dims: weight must be even and at least 2");
    auto ps = N == 1 ? std::vector<int64_t>{} : prime_factors(N);
    if (ps.size() > 1) throw Error("classical_dims: level must be a prime power");
    Rational mu(N);
    int64_t nu2 = 1, nu3 = 1, cusps = 1;
    if (!ps.empty()) {
        int64_t l = ps[0];
        int m = valuation(N, l);
        mu *= Rational(l + 1, l);
        nu2 = (l == 2 && m >= 2) ? 0 : 1 + detail::kronecker_small(-4, l);
        nu3 = (l == 3 && m >= 2) ? 0 : 1 + detail::kronecker_small(-3, l);
        cusps = 0;
        for (int i = 0; i <= m; ++i) cusps += detail::euler_phi(ipow(l, std::min(i, m - i)));
    }
    // genus of X_0(N)
    Rational g = 1 + mu / 12 - Rational(nu2, 4) - Rational(nu3, 3) - Rational(cusps, 2);
    if (denominator(g) != 1) throw Error("internal: non-integral genus");
    int64_t gi = static_cast<int64_t>(numerator(g));
    if (k == 2) return gi;
    return (k - 1) * (gi - 1) + (k / 2 - 1) * cusps + nu2 * (k / 4) + nu3 * (k / 3);
}

/// (dim S_k(Gamma_0(N)), dim S_k^new(Gamma_0(N))) for N = p^m.
inline std::pair<int64_t, int64_t> classical_dims(int64_t N, int k) {
    int64_t total = cusp_form_dimension(N, k);
    if (N == 1) return {total, total};
    int64_t l = prime_factors(N)[0];
    int m = valuation(N, l);
    // new = sum_{d | N} beta(N/d) dim S(d), beta(l) = -2, beta(l^2) = 1, beta(l^j) = 0 for j >= 3
    int64_t fresh = total;
    if (m >= 1) fresh -= 2 * cusp_form_dimension(ipow(l, m - 1), k);
    if (m >= 2) fresh += cusp_form_dimension(ipow(l, m - 2), k);
    return {total, fresh};
}

// ---------------------------------------------------------------- ladder

struct LadderMember {
    std::vector<std::pair<ExtLabel, int>> labels;  // every (E, r) realising this order; empty for the maximal order only
    bool maximal = false;
    OrderLattice order;
    int level_exp = 1;  // level p^level_exp
    ClassSet cs;
    BrandtData brandt;
    std::vector<size_t> supers;  // proper superorders in the ladder

    std::string name() const {
        std::string s = maximal ? "max" : "";
        for (const auto& [E, r] : labels) {
            if (!s.empty()) s += "=";
            s += std::string(label_name(E)) + std::to_string(r);
        }
        return s;
    }
    bool has_label(ExtLabel E, int r) const {
        return std::find(labels.begin(), labels.end(), std::make_pair(E, r)) != labels.end();
    }
};

struct OrderLadder {
    int64_t p = 3;
    int rmax = 1;
    int64_t hecke_window = 20;
    MaximalOrderData M;
    std::vector<LadderMember> members;
    std::map<std::pair<size_t, size_t>, QMat> pullbacks;  // (sub, sup) -> degeneracy map

    const LadderMember& find(ExtLabel E, int r) const {
        for (const auto& m : members)
            if (m.has_label(E, r)) return m;
        throw Error("ladder: no order " + std::string(label_name(E)) + std::to_string(r));
    }
    size_t index_of(const LadderMember& m) const { return static_cast<size_t>(&m - members.data()); }
};

inline int level_exponent(const BigInt& level, int64_t p) {
    int e = valuation(level, p);
    if (BigInt(ipow(p, e)) != level) throw Error("internal: level is not a power of p");
    return e;
}

inline std::vector<int64_t> hecke_primes(int64_t p, int64_t window) {
    std::vector<int64_t> out;
    for (int64_t l = 2; l <= window; ++l)
        if (is_prime(l) && l != p) out.push_back(l);
    return out;
}

/// Pullback from functions on Cl(sup) to functions on Cl(sub): P[a][b] = 1 iff I_a sup ~ J_b.
inline QMat degeneracy_map(const GlobalAlgebraDesc& B, const ClassSet& sub, const ClassSet& sup) {
    if (!sup.order.L.contains(sub.order.L)) throw Error("degeneracy_map: orders are not nested");
    QMat P(sub.size(), QVec(sup.size(), Rational(0)));
    for (size_t a = 0; a < sub.size(); ++a) {
        Lattice IO = lattice_product(B, sub.ideals[a].L, sup.order.L);
        RightIdeal J{IO, ideal_norm(IO, sup.order.L)};
        P[a][sup.class_of(J)] = 1;
    }
    return P;
}

/// Optional persistence for the expensive per-order data; loads must validate what they return.
class LadderCache {
public:
    virtual ~LadderCache() = default;
    virtual bool load_order(const OrderLadder&, LadderMember&) { return false; }
    virtual void store_order(const OrderLadder&, const LadderMember&) {}
    virtual bool load_pullback(const OrderLadder&, size_t, size_t, QMat&) { return false; }
    virtual void store_pullback(const OrderLadder&, size_t, size_t, const QMat&) {}
};

/// Special orders of level dividing p^rmax, deduplicated as lattices, with class sets and Brandt data.
inline OrderLadder build_ladder(int64_t p, int rmax, int64_t hecke_window = 20, unsigned threads = 1,
                                LadderCache* cache = nullptr) {
    require_odd_prime(p);
    if (rmax < 1) throw Error("build_ladder: level exponent must be at least 1");
    if (hecke_window < 2) throw Error("build_ladder: Hecke window must contain a prime");
    OrderLadder Ld;
    Ld.p = p;
    Ld.rmax = rmax;
    Ld.hecke_window = hecke_window;
    Ld.M = maximal_order_data(p);
    LadderMember top;
    top.maximal = true;
    top.order = maximal_order_lattice(Ld.M);
    top.level_exp = 1;
    Ld.members.push_back(top);
    for (int r = 2; r <= rmax; ++r)
        for (ExtLabel E : kAllLabels) {
            OrderLattice O = special_order(Ld.M, E, r);
            bool merged = false;
            for (auto& m : Ld.members)
                if (m.order.L == O.L) {
                    m.labels.emplace_back(E, r);
                    merged = true;
                    break;
                }
            if (merged) continue;
            LadderMember m;
            m.labels.emplace_back(E, r);
            m.order = O;
            m.level_exp = level_exponent(O.level, p);
            Ld.members.push_back(m);
        }
    for (auto& m : Ld.members) {
        if (cache && cache->load_order(Ld, m)) continue;
        m.cs = right_ideal_classes(Ld.M.B, m.order);
        m.brandt = brandt_data(m.cs, hecke_window, threads);
        if (cache) cache->store_order(Ld, m);
    }
    for (size_t i = 0; i < Ld.members.size(); ++i)
        for (size_t j = 0; j < Ld.members.size(); ++j)
            if (i != j && Ld.members[j].order.L.contains(Ld.members[i].order.L)) Ld.members[i].supers.push_back(j);
    for (size_t i = 0; i < Ld.members.size(); ++i)
        for (size_t j : Ld.members[i].supers) {
            QMat P;
            if (!(cache && cache->load_pullback(Ld, i, j, P))) {
                P = degeneracy_map(Ld.M.B, Ld.members[i].cs, Ld.members[j].cs);
                if (cache) cache->store_pullback(Ld, i, j, P);
            }
            Ld.pullbacks[{i, j}] = std::move(P);
        }
    return Ld;
}

// ---------------------------------------------------------------- spaces

struct Eigensystem {
    ZPoly poly;
    int mult = 1;
    bool operator==(const Eigensystem& o) const { return poly == o.poly && mult == o.mult; }
};

struct SpaceReport {
    std::string name;
    std::vector<std::pair<ExtLabel, int>> labels;
    bool maximal = false;
    int level_exp = 1;
    size_t h = 0;
    int dim_eis = 1;
    size_t dim_cusp = 0, dim_old = 0, dim_new = 0;
    std::vector<Eigensystem> eigensystems;  // on the new space
    bool hecke_stable = true;
};

inline QVec class_weights(const ClassSet& CS) {
    QVec w;
    for (auto e : CS.units) w.push_back(Rational(1, e));
    return w;
}

inline std::vector<QVec> standard_basis(size_t n) {
    std::vector<QVec> out;
    for (size_t i = 0; i < n; ++i) {
        QVec v(n, Rational(0));
        v[i] = 1;
        out.push_back(v);
    }
    return out;
}

inline std::vector<QVec> cusp_space(const ClassSet& CS) {
    return weighted_complement(standard_basis(CS.size()), eisenstein_basis(CS), class_weights(CS));
}

/// Deterministic Hecke combinations sum c_l T_l; variant 0 and 1 give the collision guard.
inline QMat hecke_combination(const BrandtData& D, const std::vector<int64_t>& primes, int variant) {
    QMat H(D.size(), QVec(D.size(), Rational(0)));
    for (size_t k = 0; k < primes.size(); ++k) {
        int64_t c = variant == 0 ? static_cast<int64_t>(k + 1) : static_cast<int64_t>((k + 1) * (k + 1) + 3 * k + 1);
        H = add(H, D.matrix(primes[k]), Rational(c));
    }
    return H;
}

/// Irreducible factors with multiplicity of the characteristic polynomial of H on span(V).
inline std::vector<Eigensystem> eigensystems_of(const QMat& H, const std::vector<QVec>& V) {
    if (V.empty()) return {};
    std::vector<Eigensystem> out;
    for (auto& [g, e] : zp::factor(integer_charpoly(restrict_to(H, V)))) out.push_back({g, e});
    return out;
}

namespace detail {

inline std::vector<std::pair<int, int>> shape(const std::vector<Eigensystem>& es) {
    std::vector<std::pair<int, int>> s;
    for (const auto& e : es) s.emplace_back(zp::deg(e.poly), e.mult);
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace detail

/// Eigensystems of the Hecke algebra on span(V) with the two-combination collision guard.
inline std::vector<Eigensystem> eigensystems(const BrandtData& D, const std::vector<int64_t>& primes, const std::vector<QVec>& V) {
    auto a = eigensystems_of(hecke_combination(D, primes, 0), V);
    auto b = eigensystems_of(hecke_combination(D, primes, 1), V);
    if (detail::shape(a) != detail::shape(b))
        throw Error("eigensystems: Hecke combinations disagree; enlarge the Hecke window");
    return a;
}

struct LadderSpaces {
    std::vector<std::vector<QVec>> cusp, old_space, new_space;
    std::vector<SpaceReport> reports;
};

inline LadderSpaces compute_spaces(const OrderLadder& Ld) {
    LadderSpaces S;
    const size_t n = Ld.members.size();
    S.cusp.resize(n);
    S.old_space.resize(n);
    S.new_space.resize(n);
    auto primes = hecke_primes(Ld.p, Ld.hecke_window);
    for (size_t i = 0; i < n; ++i) S.cusp[i] = cusp_space(Ld.members[i].cs);
    for (size_t i = 0; i < n; ++i) {
        const auto& m = Ld.members[i];
        std::vector<QVec> gens;
        for (size_t j : m.supers) {
            const QMat& P = Ld.pullbacks.at({i, j});
            for (const auto& v : S.cusp[j]) gens.push_back(mat_vec(P, v));
        }
        S.old_space[i] = span_basis(gens);
        S.new_space[i] = weighted_complement(S.cusp[i], S.old_space[i], class_weights(m.cs));
        SpaceReport R;
        R.name = m.name();
        R.labels = m.labels;
        R.maximal = m.maximal;
        R.level_exp = m.level_exp;
        R.h = m.cs.size();
        R.dim_eis = static_cast<int>(eisenstein_basis(m.cs).size());
        R.dim_cusp = S.cusp[i].size();
        R.dim_old = S.old_space[i].size();
        R.dim_new = S.new_space[i].size();
        for (int64_t l : primes) {
            QMat T = m.brandt.matrix(l);
            if (!is_stable(T, S.cusp[i]) || !is_stable(T, S.old_space[i]) || !is_stable(T, S.new_space[i])) R.hecke_stable = false;
        }
        if (!R.hecke_stable) throw Error("internal: Hecke operators do not preserve the spaces of " + R.name);
        R.eigensystems = eigensystems(m.brandt, primes, S.new_space[i]);
        S.reports.push_back(R);
    }
    return S;
}

// ---------------------------------------------------------------- checks

struct TheoremCheck {
    std::string name;
    bool pass = true;
    std::string lhs, rhs;
};

struct DecompositionReport {
    int64_t p = 3;
    int rmax = 1;
    int64_t hecke_window = 20;
    std::vector<SpaceReport> orders;
    std::vector<TheoremCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string eig_str(const std::vector<Eigensystem>& es) {
    std::string s = "{";
    for (size_t i = 0; i < es.size(); ++i) s += (i ? ", " : "") + ("(" + zp::to_string(es[i].poly) + ")^" + std::to_string(es[i].mult));
    return s + "}";
}

inline bool all_even(const std::vector<Eigensystem>& es) {
    for (const auto& e : es)
        if (e.mult % 2) return false;
    return true;
}

inline std::vector<Eigensystem> halved(std::vector<Eigensystem> es) {
    for (auto& e : es) e.mult /= 2;
    return es;
}

}  // namespace detail

inline DecompositionReport verify_theorems(const OrderLadder& Ld, const LadderSpaces& S) {
    DecompositionReport rep;
    rep.p = Ld.p;
    rep.rmax = Ld.rmax;
    rep.hecke_window = Ld.hecke_window;
    rep.orders = S.reports;
    const int64_t p = Ld.p;
    auto report_of = [&](ExtLabel E, int r) -> const SpaceReport& { return S.reports[Ld.index_of(Ld.find(E, r))]; };

    // (a) bottom rung
    {
        auto cl = classical_dims(p, 2);
        TheoremCheck c{"bottom-rung", false, std::to_string(S.reports[0].dim_new), std::to_string(cl.second)};
        c.pass = static_cast<int64_t>(S.reports[0].dim_new) == cl.second;
        rep.checks.push_back(c);
    }
    for (int r = 3; r <= Ld.rmax; r += 2) {
        const auto& K = report_of(ExtLabel::K, r);
        const auto& L = report_of(ExtLabel::L, r);
        const auto& Mo = report_of(ExtLabel::M, r);
        std::string lv = "level p^" + std::to_string(r);
        // (b) evenness on ramified orders
        for (const auto* R : {&K, &L}) {
            TheoremCheck c{"odd-level-evenness " + R->name + " " + lv, detail::all_even(R->eigensystems), detail::eig_str(R->eigensystems), "all multiplicities even"};
            rep.checks.push_back(c);
        }
        // (c) K + L = 2 M, disjointness and union
        {
            TheoremCheck c{"KLM-dimension " + lv, false, std::to_string(K.dim_new) + " + " + std::to_string(L.dim_new), "2 * " + std::to_string(Mo.dim_new)};
            c.pass = K.dim_new + L.dim_new == 2 * Mo.dim_new;
            rep.checks.push_back(c);
        }
        {
            bool disjoint = true;
            for (const auto& a : K.eigensystems)
                for (const auto& b : L.eigensystems)
                    if (a.poly == b.poly) disjoint = false;
            auto u = detail::halved(K.eigensystems);
            auto hl = detail::halved(L.eigensystems);
            u.insert(u.end(), hl.begin(), hl.end());
            std::sort(u.begin(), u.end(), [](const Eigensystem& x, const Eigensystem& y) { return zp::poly_less(x.poly, y.poly); });
            bool uni = detail::all_even(K.eigensystems) && detail::all_even(L.eigensystems) && u == Mo.eigensystems;
            TheoremCheck c{"KLM-eigensystems " + lv, disjoint && uni,
                           "K " + detail::eig_str(K.eigensystems) + " L " + detail::eig_str(L.eigensystems),
                           "M " + detail::eig_str(Mo.eigensystems)};
            rep.checks.push_back(c);
        }
        {
            bool one = true;
            for (const auto& e : Mo.eigensystems) one = one && e.mult == 1;
            rep.checks.push_back({"M-multiplicity-one " + lv, one, detail::eig_str(Mo.eigensystems), "all multiplicities 1"});
        }
    }
    // (d) even levels
    for (int r = 2; r <= Ld.rmax; r += 2) {
        const auto& K = report_of(ExtLabel::K, r);
        const auto& L = report_of(ExtLabel::L, r);
        bool ok = K.eigensystems == L.eigensystems && detail::all_even(K.eigensystems);
        rep.checks.push_back({"even-level-agreement level p^" + std::to_string(r), ok, "K " + detail::eig_str(K.eigensystems),
                              "L " + detail::eig_str(L.eigensystems)});
    }
    // (e) ladder additivity
    for (size_t i = 0; i < Ld.members.size(); ++i) {
        size_t sum = S.reports[i].dim_new;
        std::string terms = std::to_string(S.reports[i].dim_new);
        for (size_t j : Ld.members[i].supers) {
            sum += S.reports[j].dim_new;
            terms += " + " + std::to_string(S.reports[j].dim_new);
        }
        rep.checks.push_back({"ladder-additivity " + S.reports[i].name, sum == S.reports[i].dim_cusp,
                              std::to_string(S.reports[i].dim_cusp), terms});
    }
    return rep;
}

inline DecompositionReport verify_theorems(int64_t p, int rmax, int64_t hecke_window = 20, unsigned threads = 1,
                                           LadderCache* cache = nullptr) {
    OrderLadder Ld = build_ladder(p, rmax, hecke_window, threads, cache);
    return verify_theorems(Ld, compute_spaces(Ld));
}

}  // namespace quatrep
