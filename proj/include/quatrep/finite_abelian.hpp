#pragma once

// Finite abelian groups: Smith normal form, unit groups of p-adic residue
// rings with discrete-log tables, characters and subgroup averages.

#include "quatrep/cyclotomic.hpp"

#include <functional>
#include <memory>
#include <unordered_map>

namespace quatrep {

using IntMatrix = std::vector<std::vector<BigInt>>;

inline IntMatrix identity_matrix(size_t n) {
    IntMatrix m(n, std::vector<BigInt>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
    if (a.empty()) return {};
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntMatrix c(n, std::vector<BigInt>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

struct SmithForm {
    IntMatrix U, D, V;  // U * M * V = D
};

/// Smith normal form over Z with unimodular transforms.
inline SmithForm smith_normal_form(const IntMatrix& M) {
    size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    SmithForm s{identity_matrix(rows), M, identity_matrix(cols)};
    auto& D = s.D;
    auto swap_rows = [&](size_t i, size_t j) {
        std::swap(D[i], D[j]);
        std::swap(s.U[i], s.U[j]);
    };
    auto swap_cols = [&](size_t i, size_t j) {
        for (auto& r : D) std::swap(r[i], r[j]);
        for (auto& r : s.V) std::swap(r[i], r[j]);
    };
    // row_j -= f * row_i
    auto row_op = [&](size_t j, size_t i, const BigInt& f) {
        for (size_t c = 0; c < cols; ++c) D[j][c] -= f * D[i][c];
        for (size_t c = 0; c < rows; ++c) s.U[j][c] -= f * s.U[i][c];
    };
    auto col_op = [&](size_t j, size_t i, const BigInt& f) {
        for (size_t r = 0; r < rows; ++r) D[r][j] -= f * D[r][i];
        for (size_t r = 0; r < cols; ++r) s.V[r][j] -= f * s.V[r][i];
    };
    size_t t = 0;
    while (t < rows && t < cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        bool found = false;
        size_t pr = t, pc = t;
        BigInt best = 0;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j)
                if (D[i][j] != 0 && (!found || abs(D[i][j]) < best)) {
                    found = true;
                    best = abs(D[i][j]);
                    pr = i;
                    pc = j;
                }
        if (!found) break;
        swap_rows(t, pr);
        swap_cols(t, pc);
        bool clean = true;
        for (size_t i = t + 1; i < rows; ++i) {
            BigInt q = D[i][t] / D[t][t];
            if (q != 0) row_op(i, t, q);
            if (D[i][t] != 0) clean = false;
        }
        for (size_t j = t + 1; j < cols; ++j) {
            BigInt q = D[t][j] / D[t][t];
            if (q != 0) col_op(j, t, q);
            if (D[t][j] != 0) clean = false;
        }
        if (!clean) continue;
        // divisibility: pivot must divide every remaining entry
        bool divides = true;
        for (size_t i = t + 1; i < rows && divides; ++i)
            for (size_t j = t + 1; j < cols; ++j)
                if (D[i][j] % D[t][t] != 0) {
                    // fold row i into row t and redo this pivot
                    for (size_t c = 0; c < cols; ++c) D[t][c] += D[i][c];
                    for (size_t c = 0; c < rows; ++c) s.U[t][c] += s.U[i][c];
                    divides = false;
                    break;
                }
        if (!divides) continue;
        if (D[t][t] < 0) {
            for (size_t c = 0; c < cols; ++c) D[t][c] = -D[t][c];
            for (size_t c = 0; c < rows; ++c) s.U[t][c] = -s.U[t][c];
        }
        ++t;
    }
    return s;
}

/// Finite abelian group Z/d_1 x ... x Z/d_k with d_i | d_{i+1}, d_i > 1.
class FiniteAbelianGroup {
public:
    using Elem = std::vector<int64_t>;

    FiniteAbelianGroup() = default;
    explicit FiniteAbelianGroup(std::vector<int64_t> invariants) : d_(std::move(invariants)) {
        for (size_t i = 0; i < d_.size(); ++i) {
            if (d_[i] <= 1) throw Error("FiniteAbelianGroup: invariant factors must exceed 1");
            if (i + 1 < d_.size() && d_[i + 1] % d_[i]) throw Error("FiniteAbelianGroup: divisibility violated");
        }
    }

    /// Cokernel of the relation matrix (rows are relations among k generators).
    /// coords[i] gives the image of the i-th original generator.
    static FiniteAbelianGroup from_relations(const IntMatrix& rel, size_t ngens, std::vector<Elem>* coords = nullptr) {
        IntMatrix M = rel;
        for (auto& r : M)
            if (r.size() != ngens) throw Error("from_relations: row length mismatch");
        if (M.size() < ngens) M.resize(ngens, std::vector<BigInt>(ngens, 0));
        auto s = smith_normal_form(M);
        std::vector<int64_t> inv;
        std::vector<size_t> keep;
        for (size_t j = 0; j < ngens; ++j) {
            BigInt d = s.D[j][j];
            if (d == 0) throw Error("from_relations: group is infinite");
            if (d != 1) {
                inv.push_back(d.convert_to<int64_t>());
                keep.push_back(j);
            }
        }
        FiniteAbelianGroup g(inv);
        g.relations_ = rel;
        if (coords) {
            coords->assign(ngens, Elem(keep.size(), 0));
            for (size_t i = 0; i < ngens; ++i)
                for (size_t t = 0; t < keep.size(); ++t) {
                    BigInt v = s.V[i][keep[t]] % inv[t];
                    if (v < 0) v += inv[t];
                    (*coords)[i][t] = v.convert_to<int64_t>();
                }
        }
        return g;
    }

    const std::vector<int64_t>& invariants() const { return d_; }
    const IntMatrix& relations() const { return relations_; }
    size_t rank() const { return d_.size(); }
    int64_t order() const {
        int64_t n = 1;
        for (auto d : d_) n *= d;
        return n;
    }
    int64_t exponent() const { return d_.empty() ? 1 : d_.back(); }

    Elem identity() const { return Elem(d_.size(), 0); }
    Elem add(const Elem& a, const Elem& b) const {
        Elem c(d_.size());
        for (size_t i = 0; i < d_.size(); ++i) c[i] = mod(a[i] + b[i], d_[i]);
        return c;
    }
    Elem neg(const Elem& a) const {
        Elem c(d_.size());
        for (size_t i = 0; i < d_.size(); ++i) c[i] = mod(-a[i], d_[i]);
        return c;
    }
    Elem scale(const Elem& a, int64_t k) const {
        Elem c(d_.size());
        for (size_t i = 0; i < d_.size(); ++i)
            c[i] = static_cast<int64_t>((static_cast<__int128>(a[i]) * mod(k, d_[i])) % d_[i]);
        return c;
    }
    /// Mixed-radix index in [0, order).
    int64_t index(const Elem& a) const {
        int64_t r = 0;
        for (size_t i = d_.size(); i-- > 0;) r = r * d_[i] + a[i];
        return r;
    }
    Elem element(int64_t idx) const {
        Elem e(d_.size());
        for (size_t i = 0; i < d_.size(); ++i) {
            e[i] = idx % d_[i];
            idx /= d_[i];
        }
        return e;
    }
    std::vector<Elem> elements() const {
        std::vector<Elem> out;
        for (int64_t i = 0; i < order(); ++i) out.push_back(element(i));
        return out;
    }

private:
    std::vector<int64_t> d_;
    IntMatrix relations_;
};

/// A character of a FiniteAbelianGroup: chi(e) = exp(2 pi i sum_i c_i e_i / d_i).
struct CharacterVec {
    std::vector<int64_t> exps;
    std::vector<int64_t> mods;

    Phase operator()(const FiniteAbelianGroup::Elem& e) const {
        Phase ph;
        for (size_t i = 0; i < exps.size(); ++i) ph += Phase(exps[i] * e[i] % mods[i], mods[i]);
        return ph;
    }
    Cyclotomic value(const FiniteAbelianGroup::Elem& e) const { return Cyclotomic::root((*this)(e)); }
    int64_t order() const {
        int64_t o = 1;
        for (size_t i = 0; i < exps.size(); ++i) o = std::lcm(o, mods[i] / std::gcd(exps[i], mods[i]));
        return o;
    }
    bool is_trivial() const {
        for (auto c : exps)
            if (c) return false;
        return true;
    }
    CharacterVec operator*(const CharacterVec& o) const {
        CharacterVec r = *this;
        for (size_t i = 0; i < exps.size(); ++i) r.exps[i] = mod(exps[i] + o.exps[i], mods[i]);
        return r;
    }
    CharacterVec inverse() const {
        CharacterVec r = *this;
        for (size_t i = 0; i < exps.size(); ++i) r.exps[i] = mod(-exps[i], mods[i]);
        return r;
    }
    bool operator==(const CharacterVec&) const = default;
    auto operator<=>(const CharacterVec&) const = default;
};

/// All |G| characters of G, in mixed-radix order.
inline std::vector<CharacterVec> characters(const FiniteAbelianGroup& G) {
    std::vector<CharacterVec> out;
    for (int64_t i = 0; i < G.order(); ++i) out.push_back(CharacterVec{G.element(i), G.invariants()});
    return out;
}

/// Finite quotient rings of o_F, or of o_E for a quadratic extension E = F(sqrt(delta)).
///   Base:       Z/p^m.                      key = a
///   Unramified: o_E/p^m, sqrt(u) basis.     key = a + b p^m
///   Ramified:   o_E/p_E^m, pi = sqrt(delta) with v_p(delta) = 1;
///               a mod p^ceil(m/2), b mod p^floor(m/2).  key = a + b p^ceil(m/2)
struct ResidueRing {
    enum class Kind { Base, Unramified, Ramified };
    Kind kind = Kind::Base;
    int64_t p = 3;
    int m = 1;
    int64_t delta = 0;  // u for unramified, -p or -u p for ramified

    struct Elt {
        int64_t a = 0, b = 0;
        bool operator==(const Elt&) const = default;
    };

    int64_t mod_a() const {
        return kind == Kind::Ramified ? ipow(p, (m + 1) / 2) : ipow(p, m);
    }
    int64_t mod_b() const {
        switch (kind) {
            case Kind::Base: return 1;
            case Kind::Unramified: return ipow(p, m);
            default: return ipow(p, m / 2);
        }
    }
    int64_t size() const { return mod_a() * mod_b(); }
    int64_t key(const Elt& x) const { return x.a + x.b * mod_a(); }
    Elt from_key(int64_t k) const { return {k % mod_a(), k / mod_a()}; }
    Elt make(int64_t a, int64_t b = 0) const {
        return {mod(a, mod_a()), kind == Kind::Base ? 0 : mod(b, mod_b())};
    }
    Elt mul(const Elt& x, const Elt& y) const {
        int64_t A = mod_a(), B = mod_b();
        auto mm = [](int64_t s, int64_t t, int64_t n) {
            return static_cast<int64_t>((static_cast<__int128>(s) * t) % n);
        };
        if (kind == Kind::Base) return {mm(x.a, y.a, A), 0};
        // b*d*delta lands mod A: for ramified, b, d are mod p^floor(m/2) and delta carries one p
        int64_t bd = mm(x.b, y.b, kind == Kind::Ramified ? B * p : A);
        int64_t a = mod(mm(x.a, y.a, A) + mm(mod(bd, A), mod(delta, A), A), A);
        int64_t b = mod(mm(x.a, y.b, B) + mm(x.b, y.a, B), B);
        return {a, b};
    }
    bool is_unit(const Elt& x) const {
        if (kind == Kind::Unramified) return x.a % p != 0 || x.b % p != 0;
        return x.a % p != 0;
    }
    std::vector<Elt> units() const {
        std::vector<Elt> out;
        for (int64_t k = 0; k < size(); ++k) {
            Elt e = from_key(k);
            if (is_unit(e)) out.push_back(e);
        }
        return out;
    }
    /// Residue field cardinality.
    int64_t residue_size() const { return kind == Kind::Unramified ? p * p : p; }
    /// (q_E - 1) q_E^(m-1).
    int64_t unit_count() const {
        return (residue_size() - 1) * ipow(residue_size(), m - 1);
    }
};

/// The unit group of a ResidueRing together with a total discrete-log table.
class UnitGroup {
public:
    static constexpr int64_t kMaxSize = int64_t(1) << 24;

    explicit UnitGroup(const ResidueRing& R) : R_(R) {
        if (R.m < 1) throw Error("unit_group: precision must be at least 1");
        if (R.size() > kMaxSize) throw Error("unit_group: ring too large for table discrete logs");
        build();
    }

    const ResidueRing& ring() const { return R_; }
    const FiniteAbelianGroup& group() const { return G_; }

    FiniteAbelianGroup::Elem dlog(const ResidueRing::Elt& x) const {
        if (!R_.is_unit(x)) throw Error("dlog: not a unit");
        return G_.element(table_[static_cast<size_t>(R_.key(x))]);
    }
    int64_t dlog_index(const ResidueRing::Elt& x) const {
        if (!R_.is_unit(x)) throw Error("dlog: not a unit");
        return table_[static_cast<size_t>(R_.key(x))];
    }
    ResidueRing::Elt exp(const FiniteAbelianGroup::Elem& e) const { return units_by_index_[static_cast<size_t>(G_.index(e))]; }

private:
    void build() {
        // Grow a subgroup one generator at a time, recording relations in terms
        // of the chosen generators, then pass to Smith form.
        int64_t N = R_.size();
        std::vector<std::vector<int64_t>> coords(static_cast<size_t>(N));  // exponent vectors w.r.t. raw gens
        std::vector<char> in(static_cast<size_t>(N), 0);
        ResidueRing::Elt one = R_.make(1);
        std::vector<int64_t> members{R_.key(one)};
        in[static_cast<size_t>(R_.key(one))] = 1;
        std::vector<ResidueRing::Elt> gens;
        IntMatrix rel;
        for (int64_t k = 0; k < N; ++k) {
            ResidueRing::Elt g = R_.from_key(k);
            if (!R_.is_unit(g) || in[static_cast<size_t>(k)]) continue;
            size_t gi = gens.size();
            gens.push_back(g);
            for (auto key : members) coords[static_cast<size_t>(key)].push_back(0);
            // smallest t with g^t in the subgroup
            ResidueRing::Elt x = g;
            int64_t t = 1;
            while (!in[static_cast<size_t>(R_.key(x))]) {
                x = R_.mul(x, g);
                ++t;
            }
            std::vector<BigInt> row(gi + 1, 0);
            const auto& cx = coords[static_cast<size_t>(R_.key(x))];
            for (size_t i = 0; i < gi; ++i) row[i] = -cx[i];
            row[gi] = t;
            for (auto& r : rel) r.push_back(0);
            rel.push_back(row);
            // extend by cosets g^s H, 1 <= s < t
            std::vector<int64_t> base = members;
            ResidueRing::Elt gs = one;
            for (int64_t s = 1; s < t; ++s) {
                gs = R_.mul(gs, g);
                for (auto key : base) {
                    ResidueRing::Elt y = R_.mul(R_.from_key(key), gs);
                    int64_t ky = R_.key(y);
                    auto c = coords[static_cast<size_t>(key)];
                    c[gi] = s;
                    coords[static_cast<size_t>(ky)] = std::move(c);
                    in[static_cast<size_t>(ky)] = 1;
                    members.push_back(ky);
                }
            }
        }
        std::vector<FiniteAbelianGroup::Elem> gimg;
        G_ = FiniteAbelianGroup::from_relations(rel, gens.size(), &gimg);
        if (G_.order() != R_.unit_count()) throw Error("unit_group: order mismatch");
        table_.assign(static_cast<size_t>(N), -1);
        units_by_index_.assign(static_cast<size_t>(G_.order()), one);
        for (auto key : members) {
            FiniteAbelianGroup::Elem e = G_.identity();
            const auto& c = coords[static_cast<size_t>(key)];
            for (size_t i = 0; i < gens.size(); ++i) e = G_.add(e, G_.scale(gimg[i], c[i]));
            int64_t idx = G_.index(e);
            table_[static_cast<size_t>(key)] = idx;
            units_by_index_[static_cast<size_t>(idx)] = R_.from_key(key);
        }
    }

    ResidueRing R_;
    FiniteAbelianGroup G_;
    std::vector<int64_t> table_;
    std::vector<ResidueRing::Elt> units_by_index_;
};

inline UnitGroup unit_group(const ResidueRing& R) { return UnitGroup(R); }

/// (1/|H|) sum_{h in H} chi(h) for H given by its element list; must be rational.
template <class Elem>
Rational subgroup_sum(const std::function<Cyclotomic(const Elem&)>& chi, const std::vector<Elem>& H) {
    if (H.empty()) throw Error("subgroup_sum: empty subgroup");
    Cyclotomic s;
    for (const auto& h : H) s += chi(h);
    if (!s.is_rational()) throw Error("subgroup_sum: non-integral multiplicity");
    return s.to_rational() / Rational(static_cast<int64_t>(H.size()));
}

/// Closure of a generating set inside a FiniteAbelianGroup.
inline std::vector<FiniteAbelianGroup::Elem> subgroup_elements(const FiniteAbelianGroup& G,
                                                               const std::vector<FiniteAbelianGroup::Elem>& gens) {
    std::vector<char> seen(static_cast<size_t>(G.order()), 0);
    std::vector<FiniteAbelianGroup::Elem> out{G.identity()};
    seen[0] = 1;
    for (size_t i = 0; i < out.size(); ++i)
        for (const auto& g : gens) {
            auto y = G.add(out[i], g);
            auto k = static_cast<size_t>(G.index(y));
            if (!seen[k]) {
                seen[k] = 1;
                out.push_back(y);
            }
        }
    return out;
}

}  // namespace quatrep
