#pragma once

// Local constants of characters of F^x and of its quadratic extensions as
// exact Gauss sums, the unramified-twist and quadratic-twist rules for
// two-dimensional representations induced from a ramified K, and the
// epsilon-side multiplicity of the trivial and sign characters of a torus.

#include "quatrep/local_quadratic.hpp"

#include <optional>

namespace quatrep {

/// psi_k = psi(p^k x) on F with psi(x) = exp(2 pi i {x}_p), so n(psi_k) = k;
/// on E the character is psi_k o Tr, of conductor d(E/F) + e k.
struct AdditiveCharacterDesc {
    std::optional<ExtLabel> ext;  // empty: the base field
    int k = 0;

    int conductor() const {
        if (!ext) return k;
        return *ext == ExtLabel::M ? k : 1 + 2 * k;
    }
};

/// S / sqrt(N); N > 0.
struct EpsilonValue {
    Cyclotomic S;
    BigInt N = 1;

    EpsilonValue operator*(const EpsilonValue& o) const { return {S * o.S, N * o.N}; }
    /// this / o, assuming |o| = 1.
    EpsilonValue over(const EpsilonValue& o) const { return {S * o.S.conj(), N * o.N}; }
    bool unit_modulus() const { return S * S.conj() == Cyclotomic(Rational(N)); }
    std::complex<double> to_complex() const { return S.to_complex() / std::sqrt(N.convert_to<double>()); }

    /// +1 or -1 when the value is a sign, 0 otherwise.
    int sign() const {
        if (!(S * S == Cyclotomic(Rational(N)))) return 0;
        return S.to_complex().real() > 0 ? 1 : -1;
    }
    bool equals(const EpsilonValue& o) const { return over(o).sign() == 1; }
    std::string str() const { return "(" + S.str() + ")/sqrt(" + N.str() + ")"; }
};

namespace detail {

inline Cyclotomic phase_sum(const std::map<Phase, int64_t>& counts) {
    int64_t L = 1;
    for (const auto& [ph, n] : counts) L = std::lcm(L, ph.den);
    std::vector<std::pair<int64_t, BigInt>> terms;
    for (const auto& [ph, n] : counts)
        if (n) terms.emplace_back(ph.num * (L / ph.den), BigInt(n));
    return Cyclotomic::from_exponents(L, terms);
}

// {c * r / p^t}_p for an integer c and a p-adic unit r = num/den.
inline Phase additive_phase(int64_t c, int64_t rnum, int64_t rden, int64_t p, int t) {
    if (t == 0) return Phase();
    int64_t P = ipow(p, t);
    int64_t v = mod(mod(c, P) * mod(rnum, P) % P * invmod(mod(rden, P), P), P);
    return Phase(v, P);
}

}  // namespace detail

/// epsilon(phi, psi_k) for a character of F^x.
inline EpsilonValue gauss_epsilon(const FCharacter& phi, const AdditiveCharacterDesc& psi) {
    if (psi.ext) throw Error("gauss_epsilon: character and additive character live on different fields");
    int f = phi.conductor();
    int n = psi.conductor();
    // phi^-1(gamma) with gamma = p^-(f+n)
    Phase shift = phi.at_p * (f + n);
    if (f == 0) return {Cyclotomic::root(shift), 1};
    if (f > phi.s()) throw Error("gauss_epsilon: insufficient precision");
    int64_t P = ipow(phi.p, f);
    std::map<Phase, int64_t> counts;
    for (int64_t u = 1; u < P; ++u) {
        if (u % phi.p == 0) continue;
        ++counts[shift - phi.on_unit(u) + Phase(u, P)];
    }
    return {detail::phase_sum(counts), BigInt(P)};
}

/// epsilon(chi, psi_k o Tr) for a character of E^x.
inline EpsilonValue gauss_epsilon(const EUnitCharacter& chi, const AdditiveCharacterDesc& psi) {
    const QuadExtDesc& E = chi.field();
    if (!psi.ext || *psi.ext != E.label) throw Error("gauss_epsilon: character and additive character live on different fields");
    int f = chi.conductor();
    int n = psi.conductor();
    Phase shift = chi.at_pi() * (f + n);
    if (f == 0) return {Cyclotomic::root(shift), 1};
    if (f > chi.precision()) throw Error("gauss_epsilon: insufficient precision");
    const int64_t p = E.p();
    ResidueRing R = E.ring(f);
    std::map<Phase, int64_t> counts;
    if (E.ramified()) {
        // gamma = pi^-(f+1) Delta^-k; p^k Tr(gamma u) = 2 c (-w)^-(t+k) / p^t, c = a (f odd) or b (f even)
        int64_t w = -E.delta / p;
        int t = (f + 1) / 2;
        int64_t rnum = 1, rden = 1;
        int64_t base = mod(-w, ipow(p, t) * p);
        for (int i = 0; i < t + psi.k; ++i) rden = rden * base % (ipow(p, t) * p);
        for (const auto& u : R.units()) {
            int64_t c = (f % 2 == 1) ? u.a : u.b;
            ++counts[shift - chi.on_unit(u) + detail::additive_phase(2 * c, rnum, rden, p, t)];
        }
    } else {
        // gamma = p^-(f+k); p^k Tr(gamma u) = 2 a / p^f
        for (const auto& u : R.units()) ++counts[shift - chi.on_unit(u) + detail::additive_phase(2 * u.a, 1, 1, p, f)];
    }
    int64_t qE = E.ramified() ? p : p * p;
    return {detail::phase_sum(counts), BigInt(ipow(qE, f))};
}

/// chi(varpi)^{a + n dim} for an unramified chi.
inline Phase unramified_twist_factor(const FCharacter& chi, int a, int n_psi, int dim) {
    if (chi.conductor() != 0) throw Error("twist_unramified: character is ramified");
    return chi.at_p * (a + n_psi * dim);
}

inline FCharacter unramified_character(int64_t p, Phase at_p) {
    return f_character(p, 1, [](int64_t) { return Phase(); }, at_p);
}

/// Regular characters kappa of K^x (K ramified) with conductor f and kappa|F^x = w_{K/F}.
inline std::vector<EUnitCharacter> admissible_characters(int64_t p, ExtLabel K, int f) {
    if (K == ExtLabel::M) throw Error("admissible_characters: inducing field must be ramified");
    QuadExtDesc E(p, K, std::max(f, 1));
    auto wK = quadratic_character(E);
    auto U = detail::cached_unit_group(E.ring(std::max(f, 1)));
    const ResidueRing& R = U->ring();
    int64_t w = -E.delta / p;
    std::vector<EUnitCharacter> out;
    for (const auto& c : characters(U->group())) {
        EUnitCharacter base(E, U, c, Phase());
        if (base.conductor() != f) continue;
        bool ok = true;
        for (int64_t a = 1; a < R.mod_a() && ok; ++a)
            if (a % p && !(base.on_unit(R.make(a)) == wK(BigInt(a)))) ok = false;
        if (!ok) continue;
        // p = -pi^2 / w: 2 kappa(pi) = w_K(p) - kappa(-1/w)
        Phase t = wK(BigInt(p)) - base.on_unit(R.make(mod(-invmod(w, R.mod_a()), R.mod_a())));
        Phase half(t.num, 2 * t.den);
        for (Phase ph : {half, half + Phase(1, 2)}) {
            EUnitCharacter kappa(E, U, c, ph);
            if (kappa.regular()) out.push_back(kappa);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Representatives of {kappa, kappa^sigma}.
inline std::vector<EUnitCharacter> admissible_orbits(int64_t p, ExtLabel K, int f) {
    std::vector<EUnitCharacter> out;
    for (const auto& k : admissible_characters(p, K, f)) {
        auto s = k.galois_conjugate();
        if (k < s || k == s) out.push_back(k);
    }
    return out;
}

/// epsilon(sigma (x) w_{E/F}) / epsilon(sigma) for sigma = Ind kappa, computed as
/// epsilon(kappa w~, psi_K) / epsilon(kappa, psi_K) with w~ = w_{E/F} o N.
inline int twist_epsilon_ratio(const EUnitCharacter& kappa, ExtLabel E) {
    if (kappa.conductor() == 0) throw Error("twist_epsilon_ratio: kappa must be ramified");
    const QuadExtDesc& K = kappa.field();
    AdditiveCharacterDesc psi{K.label, 0};
    auto wE = quadratic_character(QuadExtDesc(K.p(), E, 1));
    auto r = gauss_epsilon(kappa.twist(wE), psi).over(gauss_epsilon(kappa, psi));
    int s = r.sign();
    if (s == 0) throw Error("twist_epsilon_ratio: ratio is not a sign");
    return s;
}

/// The rule: 1 if f(kappa) = 1 or E = K, otherwise -1.
inline int expected_twist_ratio(ExtLabel K, int f, ExtLabel E) { return (f == 1 || E == K) ? 1 : -1; }

/// w~(pi_K)^{f + 1} with w~ = w_{E/F} o N unramified on K^x.
inline int twist_ratio_mechanism(int64_t p, ExtLabel K, int f, ExtLabel E) {
    QuadExtDesc KD(p, K, 1);
    auto wE = quadratic_character(QuadExtDesc(p, E, 1));
    Phase v = wE(norm(KD, uniformizer(KD))) * (f + 1);
    return v.is_zero() ? 1 : -1;
}

/// m(sigma, chi) for sigma = Ind_K kappa and chi in {1, nu_E} on E^x: (1 + eta) / 2 with
/// eta = epsilon(sigma (x) Ind chi) w_{E/F}(-1), Ind chi = phi + phi w_{E/F} for chi = phi o N, and
/// epsilon(sigma (x) phi') = lambda(K/F)^2 epsilon(kappa phi'_K) with lambda^2 = w_{K/F}(-1).
inline int tunnell_multiplicity(const EUnitCharacter& kappa, ExtLabel E, bool sign_char) {
    const QuadExtDesc& K = kappa.field();
    const int64_t p = K.p();
    if (E == ExtLabel::M && sign_char) throw Error("tunnell_multiplicity: nu_M is nontrivial on F^x");
    AdditiveCharacterDesc psi{K.label, 0};
    FCharacter phi = sign_char ? unramified_quadratic(p) : unramified_character(p, Phase());
    auto wE = quadratic_character(QuadExtDesc(p, E, 1));
    auto wK = quadratic_character(K);
    EUnitCharacter k1 = kappa.twist(phi);
    EpsilonValue e = gauss_epsilon(k1, psi) * gauss_epsilon(k1.twist(wE), psi);
    int lam2 = wK(BigInt(-1)).is_zero() ? 1 : -1;
    int wEm1 = wE(BigInt(-1)).is_zero() ? 1 : -1;
    int s = e.sign();
    if (s == 0) throw Error("non-self-dual input: epsilon factor is not a sign");
    int eta = s * lam2 * wEm1;
    int m = (1 + eta) / 2;
    if (m != 0 && m != 1) throw Error("tunnell_multiplicity out of range");
    return m;
}

}  // namespace quatrep
