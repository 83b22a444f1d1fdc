#pragma once

// Q_p and its three quadratic extensions K = Q_p(sqrt(-p)), L = Q_p(sqrt(-up))
// and M = Q_p(sqrt(u)), u the least non-residue. Exact elements, norms and
// traces, valuations, and characters of E^x trivial on 1 + p_E^f.

#include "quatrep/finite_abelian.hpp"

#include <array>
#include <set>

namespace quatrep {

enum class ExtLabel { K, L, M };

inline const char* label_name(ExtLabel e) {
    switch (e) {
        case ExtLabel::K: return "K";
        case ExtLabel::L: return "L";
        default: return "M";
    }
}

inline ExtLabel parse_label(const std::string& s) {
    if (s == "K") return ExtLabel::K;
    if (s == "L") return ExtLabel::L;
    if (s == "M") return ExtLabel::M;
    throw Error("unknown extension label '" + s + "' (expected K, L or M)");
}

inline constexpr std::array<ExtLabel, 3> kAllLabels{ExtLabel::K, ExtLabel::L, ExtLabel::M};

struct LocalFieldDesc {
    int64_t p = 3;
    int64_t q = 3;
    int m = 1;  // working precision

    LocalFieldDesc() = default;
    LocalFieldDesc(int64_t p_, int m_) : p(p_), q(p_), m(m_) {
        require_odd_prime(p);
        if (m < 1) throw Error("LocalFieldDesc: precision must be at least 1");
    }
};

struct QuadExtDesc {
    LocalFieldDesc F;
    ExtLabel label = ExtLabel::K;
    int64_t u = 2;      // canonical non-residue
    int64_t delta = 0;  // E = F(sqrt(delta))
    int e = 2;          // ramification index
    int f_res = 1;      // residue degree
    int d = 1;          // different exponent

    QuadExtDesc() = default;
    QuadExtDesc(int64_t p, ExtLabel lab, int m) : F(p, m), label(lab), u(smallest_nonresidue(p)) {
        switch (lab) {
            case ExtLabel::K: delta = -p; break;
            case ExtLabel::L: delta = -u * p; break;
            case ExtLabel::M: delta = u; break;
        }
        bool ram = lab != ExtLabel::M;
        e = ram ? 2 : 1;
        f_res = ram ? 1 : 2;
        d = ram ? 1 : 0;
        // -p / (-up) = 1/u must be a non-square, so K and L are distinct
        if (legendre(u, p) != -1) throw Error("QuadExtDesc: u is a square");
    }

    int64_t p() const { return F.p; }
    bool ramified() const { return e == 2; }
    /// Residue field size of E.
    int64_t qE() const { return f_res == 2 ? F.q * F.q : F.q; }

    ResidueRing ring(int f) const {
        ResidueRing R;
        R.p = F.p;
        R.m = f;
        R.delta = delta;
        R.kind = ramified() ? ResidueRing::Kind::Ramified : ResidueRing::Kind::Unramified;
        return R;
    }
};

/// a + b sqrt(delta) with integral coordinates.
struct EElt {
    BigInt a = 0, b = 0;
    bool operator==(const EElt&) const = default;
};

inline EElt mul(const QuadExtDesc& E, const EElt& x, const EElt& y) {
    return {x.a * y.a + E.delta * x.b * y.b, x.a * y.b + x.b * y.a};
}
inline EElt galois_conj(const EElt& x) { return {x.a, -x.b}; }
inline BigInt norm(const QuadExtDesc& E, const EElt& x) { return x.a * x.a - E.delta * x.b * x.b; }
inline BigInt trace(const QuadExtDesc&, const EElt& x) { return 2 * x.a; }

/// Norm reduced modulo p^s; s may not exceed the working precision.
inline BigInt norm_mod(const QuadExtDesc& E, const EElt& x, int s) {
    if (s > E.F.m) throw Error("norm: insufficient precision");
    BigInt P = BigInt(ipow(E.p(), s));
    BigInt r = norm(E, x) % P;
    return r < 0 ? r + P : r;
}

inline EElt uniformizer(const QuadExtDesc& E) {
    return E.ramified() ? EElt{0, 1} : EElt{E.p(), 0};
}

/// Normalized valuation v_E; v_E(0) is an error.
inline int valuation_E(const QuadExtDesc& E, const EElt& x) {
    if (x.a == 0 && x.b == 0) throw Error("valuation of zero");
    constexpr int inf = 1 << 29;
    int va = x.a == 0 ? inf : valuation(x.a, E.p());
    int vb = x.b == 0 ? inf : valuation(x.b, E.p());
    if (E.ramified()) return std::min(2 * va, 2 * vb + 1);
    return std::min(va, vb);
}

/// Write x = pi_E^k * w with w a unit, returning (k, w mod p_E^f).
inline std::pair<int, ResidueRing::Elt> split_unit(const QuadExtDesc& E, const EElt& x, int f) {
    int k = valuation_E(E, x);
    ResidueRing R = E.ring(std::max(f, 1));
    int64_t p = E.p();
    // work modulo a power of p large enough for both coordinates after division
    int64_t P = ipow(p, R.m + k + 2);
    auto red = [&](const BigInt& v) { BigInt r = v % P; return (r < 0 ? r + P : r).convert_to<int64_t>(); };
    int64_t a = red(x.a), b = red(x.b);
    auto divp = [&](int64_t v, int t) {
        for (int i = 0; i < t; ++i) v /= p;
        return v;
    };
    if (!E.ramified()) return {k, R.make(divp(a, k), divp(b, k))};
    // x / delta^j, then possibly / sqrt(delta); delta = -p w with w a unit
    int j = k / 2;
    int64_t w = mod(-E.delta / p, P);
    int64_t winv = invmod(w, ipow(p, R.m + 2));
    int64_t Pm = ipow(p, R.m + 2);
    int64_t scale = 1;
    for (int i = 0; i < j; ++i) scale = mod(-scale * winv, Pm);
    a = mod(static_cast<int64_t>(static_cast<__int128>(divp(a, j)) * scale % Pm), Pm);
    b = mod(static_cast<int64_t>(static_cast<__int128>(divp(b, j)) * scale % Pm), Pm);
    if (k % 2) {
        // (a + b pi) / pi = b + (a / delta) pi
        int64_t na = b;
        int64_t nb = mod(static_cast<int64_t>(static_cast<__int128>(divp(a, 1)) * mod(-winv, Pm) % Pm), Pm);
        a = na;
        b = nb;
    }
    return {k, R.make(a, b)};
}

/// Norm image of units vs. unit squares modulo p^m.
struct NormImageReport {
    std::set<int64_t> norms;
    std::set<int64_t> squares;
    bool equal = false;
};

inline NormImageReport norm_image_is_squares(const QuadExtDesc& E, int m) {
    if (!E.ramified()) throw Error("norm image lemma applies to ramified extensions only");
    if (m < 1) throw Error("norm_image_is_squares: m must be positive");
    int64_t P = ipow(E.p(), m);
    NormImageReport r;
    for (int64_t a = 0; a < P; ++a) {
        if (a % E.p() == 0) continue;
        r.squares.insert(mod(a * a, P));
        for (int64_t b = 0; b < P; ++b) r.norms.insert(mod(a * a - mod(E.delta, P) * mod(b * b, P), P));
    }
    r.equal = r.norms == r.squares;
    return r;
}

namespace detail {

inline std::shared_ptr<const UnitGroup> cached_unit_group(const ResidueRing& R) {
    static std::mutex mu;
    static std::map<std::tuple<int, int64_t, int, int64_t>, std::shared_ptr<const UnitGroup>> cache;
    auto key = std::make_tuple(static_cast<int>(R.kind), R.p, R.m, R.delta);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto g = std::make_shared<const UnitGroup>(R);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, g).first->second;
}

// Reduce an element of a finer ring of the same kind into R.
inline ResidueRing::Elt reduce_into(const ResidueRing& R, const ResidueRing::Elt& x) { return R.make(x.a, x.b); }

// Character of U from its values on the invariant-factor generators.
inline CharacterVec character_from_values(const UnitGroup& U, const std::function<Phase(const ResidueRing::Elt&)>& val) {
    const auto& G = U.group();
    CharacterVec c{std::vector<int64_t>(G.rank(), 0), G.invariants()};
    for (size_t i = 0; i < G.rank(); ++i) {
        FiniteAbelianGroup::Elem e = G.identity();
        e[i] = 1;
        Phase ph = val(U.exp(e));
        int64_t d = G.invariants()[i];
        if (d % ph.den) throw Error("character_from_values: value order does not divide generator order");
        c.exps[i] = mod(ph.num * (d / ph.den), d);
    }
    return c;
}

// Greedy generators of {x in U : x = 1 mod p_E^r} as group elements.
inline std::vector<FiniteAbelianGroup::Elem> filtration_generators(const UnitGroup& U, int r) {
    const auto& R = U.ring();
    const auto& G = U.group();
    std::vector<char> have(static_cast<size_t>(G.order()), 0);
    std::vector<FiniteAbelianGroup::Elem> members{G.identity()}, gens;
    have[0] = 1;
    auto in_filtration = [&](const ResidueRing::Elt& x) {
        // x - 1 in p_E^r
        ResidueRing::Elt y = R.make(x.a - 1, x.b);
        if (R.kind == ResidueRing::Kind::Ramified) {
            int64_t pa = ipow(R.p, (r + 1) / 2), pb = ipow(R.p, r / 2);
            return y.a % pa == 0 && y.b % pb == 0;
        }
        int64_t pr = ipow(R.p, r);
        return y.a % pr == 0 && y.b % pr == 0;
    };
    for (int64_t k = 0; k < R.size(); ++k) {
        ResidueRing::Elt x = R.from_key(k);
        if (!R.is_unit(x) || !in_filtration(x)) continue;
        auto e = U.dlog(x);
        if (have[static_cast<size_t>(G.index(e))]) continue;
        gens.push_back(e);
        for (size_t i = 0; i < members.size(); ++i) {
            auto y = G.add(members[i], e);
            auto idx = static_cast<size_t>(G.index(y));
            if (!have[idx]) {
                have[idx] = 1;
                members.push_back(y);
            }
        }
    }
    return gens;
}

}  // namespace detail

/// A character of F^x = p^Z x Z_p^x trivial on 1 + p^s.
struct FCharacter {
    int64_t p = 3;
    std::shared_ptr<const UnitGroup> U;  // (Z/p^s)^x
    CharacterVec unit;
    Phase at_p;

    int s() const { return U->ring().m; }
    Phase on_unit(int64_t x) const { return unit(U->dlog(U->ring().make(x))); }
    /// Value on a nonzero integer (or any rational with p-adic unit part representable).
    Phase operator()(const BigInt& x) const {
        int k = valuation(x, p);
        BigInt w = x;
        for (int i = 0; i < k; ++i) w /= p;
        int64_t P = U->ring().mod_a();
        BigInt r = w % P;
        if (r < 0) r += P;
        return at_p * k + on_unit(r.convert_to<int64_t>());
    }
    int conductor() const {
        if (unit.is_trivial()) return 0;
        for (int r = 1; r < s(); ++r) {
            bool triv = true;
            for (const auto& g : detail::filtration_generators(*U, r))
                if (!unit(g).is_zero()) triv = false;
            if (triv) return r;
        }
        return s();
    }
};

inline FCharacter f_character(int64_t p, int s, const std::function<Phase(int64_t)>& on_unit, Phase at_p) {
    ResidueRing R{ResidueRing::Kind::Base, p, std::max(s, 1), 0};
    auto U = detail::cached_unit_group(R);
    auto c = detail::character_from_values(*U, [&](const ResidueRing::Elt& x) { return on_unit(x.a); });
    return FCharacter{p, U, c, at_p};
}

/// The quadratic character w_{E/F} of F^x, x -> (x, delta_E)_p.
inline FCharacter quadratic_character(const QuadExtDesc& E) {
    int64_t p = E.p();
    return f_character(
        p, 1, [&](int64_t x) { return Phase(hilbert_symbol(x, E.delta, p) == 1 ? 0 : 1, 2); },
        Phase(hilbert_symbol(p, E.delta, p) == 1 ? 0 : 1, 2));
}

/// The unramified quadratic character of F^x.
inline FCharacter unramified_quadratic(int64_t p) {
    return f_character(p, 1, [](int64_t) { return Phase(); }, Phase(1, 2));
}

/// A character of E^x trivial on 1 + p_E^f: a character of (o_E/p_E^f)^x
/// together with its value on the fixed uniformizer.
class EUnitCharacter {
public:
    EUnitCharacter() = default;
    EUnitCharacter(QuadExtDesc E, std::shared_ptr<const UnitGroup> U, CharacterVec unit, Phase at_pi)
        : E_(std::move(E)), U_(std::move(U)), unit_(std::move(unit)), at_pi_(at_pi) {
        conductor_ = compute_conductor();
    }

    const QuadExtDesc& field() const { return E_; }
    const UnitGroup& units() const { return *U_; }
    const CharacterVec& unit_part() const { return unit_; }
    Phase at_pi() const { return at_pi_; }
    int conductor() const { return conductor_; }
    int precision() const { return U_->ring().m; }

    /// Value on a unit given modulo some p_E^m with m >= precision.
    Phase on_unit(const ResidueRing::Elt& x) const { return unit_(U_->dlog(detail::reduce_into(U_->ring(), x))); }
    Phase at(int k, const ResidueRing::Elt& w) const { return at_pi_ * k + on_unit(w); }
    Phase operator()(const EElt& x) const {
        auto [k, w] = split_unit(E_, x, precision());
        return at(k, w);
    }

    /// chi o sigma.
    EUnitCharacter galois_conjugate() const {
        const ResidueRing& R = U_->ring();
        auto c = detail::character_from_values(*U_, [&](const ResidueRing::Elt& x) { return on_unit(R.make(x.a, -x.b)); });
        // sigma(pi) = -pi for ramified E, pi for E = M
        Phase ap = at_pi_;
        if (E_.ramified()) ap = ap + on_unit(R.make(-1));
        return EUnitCharacter(E_, U_, c, ap);
    }
    bool regular() const { return !(galois_conjugate() == *this); }

    /// chi * (phi o N).
    EUnitCharacter twist(const FCharacter& phi) const {
        const ResidueRing& R = U_->ring();
        int64_t P = phi.U->ring().mod_a();
        auto c = detail::character_from_values(*U_, [&](const ResidueRing::Elt& x) {
            int64_t n = mod(mod(x.a * x.a, P) - mod(mod(R.delta, P) * mod(x.b * x.b, P), P), P);
            return on_unit(x) + phi.on_unit(n);
        });
        Phase np = E_.ramified() ? phi(norm(E_, uniformizer(E_))) : phi.at_p * 2;
        return EUnitCharacter(E_, U_, c, at_pi_ + np);
    }

    EUnitCharacter operator*(const EUnitCharacter& o) const {
        if (precision() != o.precision()) throw Error("EUnitCharacter: precision mismatch");
        return EUnitCharacter(E_, U_, unit_ * o.unit_, at_pi_ + o.at_pi_);
    }

    /// Value of the restriction to F^x at an integer.
    Phase on_base(const BigInt& x) const {
        EElt y{x, 0};
        return (*this)(y);
    }

    bool operator==(const EUnitCharacter& o) const {
        return E_.label == o.E_.label && precision() == o.precision() && unit_ == o.unit_ && at_pi_ == o.at_pi_;
    }
    bool operator<(const EUnitCharacter& o) const {
        return std::tie(unit_, at_pi_) < std::tie(o.unit_, o.at_pi_);
    }

private:
    int compute_conductor() const {
        if (unit_.is_trivial()) return 0;
        int m = precision();
        for (int r = 1; r < m; ++r) {
            bool triv = true;
            for (const auto& g : generators(r))
                if (!unit_(g).is_zero()) {
                    triv = false;
                    break;
                }
            if (triv) return r;
        }
        return m;
    }
    const std::vector<FiniteAbelianGroup::Elem>& generators(int r) const {
        static std::mutex mu;
        static std::map<std::tuple<int, int64_t, int, int64_t, int>, std::vector<FiniteAbelianGroup::Elem>> cache;
        const auto& R = U_->ring();
        auto key = std::make_tuple(static_cast<int>(R.kind), R.p, R.m, R.delta, r);
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        return cache.emplace(key, detail::filtration_generators(*U_, r)).first->second;
    }

    QuadExtDesc E_;
    std::shared_ptr<const UnitGroup> U_;
    CharacterVec unit_;
    Phase at_pi_;
    int conductor_ = 0;
};

/// nu_E(x) = (-1)^{v_E(x)}.
inline EUnitCharacter sign_character(const QuadExtDesc& E, int precision = 1) {
    auto U = detail::cached_unit_group(E.ring(std::max(precision, 1)));
    return EUnitCharacter(E, U, CharacterVec{U->group().identity(), U->group().invariants()}, Phase(1, 2));
}

enum class CentralCondition { TrivialOnF, Unrestricted };

struct EnumeratedCharacter {
    EUnitCharacter chi;
    bool regular = false;
    bool minimal = false;
};

/// Whether chi has minimal conductor among its twists by characters of F^x.
inline bool is_minimal(const EUnitCharacter& chi) {
    int f = chi.conductor();
    if (f == 0) return true;
    const QuadExtDesc& E = chi.field();
    // phi o N only matters when trivial on 1 + p_E^f, i.e. phi trivial on 1 + p^s
    int s = E.ramified() ? (f + 1) / 2 : f;
    ResidueRing Rf{ResidueRing::Kind::Base, E.p(), s, 0};
    auto Uf = detail::cached_unit_group(Rf);
    for (const auto& c : characters(Uf->group())) {
        FCharacter phi{E.p(), Uf, c, Phase()};
        if (chi.twist(phi).conductor() < f) return false;
    }
    return true;
}

/// All characters of E^x/(1 + p_E^f) with conductor exactly f.
///   TrivialOnF:   chi restricted to F^x is trivial.
///   Unrestricted: the value on the uniformizer is taken in {1, -1}.
inline std::vector<EnumeratedCharacter> enumerate_characters(const QuadExtDesc& E, int f, CentralCondition cond) {
    if (f < 0) throw Error("enumerate_characters: negative conductor");
    if (f > E.F.m) throw Error("enumerate_characters: conductor exceeds working precision");
    int prec = std::max(f, 1);
    auto U = detail::cached_unit_group(E.ring(prec));
    const ResidueRing& R = U->ring();
    std::vector<EnumeratedCharacter> out;
    for (const auto& c : characters(U->group())) {
        EUnitCharacter base(E, U, c, Phase());
        if (base.conductor() != f) continue;
        std::vector<Phase> pis;
        if (cond == CentralCondition::Unrestricted) {
            pis = {Phase(0, 1), Phase(1, 2)};
        } else {
            // trivial on o_F^x
            bool ok = true;
            for (int64_t a = 1; a < R.mod_a() && ok; ++a)
                if (a % E.p() && !base.on_unit(R.make(a)).is_zero()) ok = false;
            if (!ok) continue;
            if (!E.ramified()) {
                pis = {Phase()};  // pi_M = p
            } else {
                // p = -pi^2 / w with delta = -p w, so chi(pi)^2 = chi(-w)^{-1}... solved as 2 x = -chi(-w^{-1})
                int64_t w = -E.delta / E.p();
                Phase t = base.on_unit(R.make(mod(-invmod(w, R.mod_a()), R.mod_a())));
                // x with 2x = -t: two solutions
                Phase half = Phase(-t.num, 2 * t.den);
                pis = {half, half + Phase(1, 2)};
            }
        }
        for (auto ph : pis) {
            EUnitCharacter chi(E, U, c, ph);
            out.push_back({chi, chi.regular(), is_minimal(chi)});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.chi < y.chi; });
    return out;
}

}  // namespace quatrep
