#pragma once

// Irreducible representations of B^x trivial on F^x U^n, read off the character
// table of G_n: conductor, minimality, inducing extension by character support,
// and dim pi^{o_E^x} as an exact average over the image of o_E^x.

#include "quatrep/character_table.hpp"
#include "quatrep/quotient_group.hpp"

namespace quatrep {

enum class RepLabel { OneDimensional, K, L, M, NonMinimal };

inline const char* rep_label_name(RepLabel r) {
    switch (r) {
        case RepLabel::OneDimensional: return "one-dimensional";
        case RepLabel::K: return "K";
        case RepLabel::L: return "L";
        case RepLabel::M: return "M";
        default: return "non-minimal";
    }
}

inline RepLabel to_rep_label(ExtLabel e) {
    return e == ExtLabel::K ? RepLabel::K : e == ExtLabel::L ? RepLabel::L : RepLabel::M;
}

struct IrreducibleCharacterRecord {
    size_t row = 0;
    int64_t dim = 1;
    int conductor = 1;  // 1 + min{m >= 0 : U^m in the kernel}
    bool minimal = true;
    bool square_unramified = true;  // chi^2 trivial on O_B^x (one-dimensional case)
    RepLabel label = RepLabel::OneDimensional;
};

/// Table value from the summary of known invariant dimensions plus the odd/ramified case.
inline int64_t predicted_dimension(RepLabel label, int conductor, bool minimal, int64_t dim, ExtLabel E, int64_t q,
                                   bool square_unramified = true) {
    bool ramified = E != ExtLabel::M;
    if (dim == 1) return ramified ? (square_unramified ? 1 : 0) : (conductor == 1 ? 1 : 0);
    if (!minimal || label == RepLabel::NonMinimal) return 0;
    if (conductor % 2 == 0) return ramified ? 2 : 1;
    if (!ramified) return 1;
    bool same = label == to_rep_label(E);
    bool q3 = q % 4 == 3;
    return (same == q3) ? 2 : 0;
}

inline int64_t predicted_dimension(const IrreducibleCharacterRecord& r, ExtLabel E, int64_t q) {
    return predicted_dimension(r.label, r.conductor, r.minimal, r.dim, E, q, r.square_unramified);
}

class LocalDivisionQuotient {
public:
    LocalDivisionQuotient(int64_t p, int n, int64_t bound = QuotientGroup::kDefaultBound)
        : G_(p, n, bound), C_(conjugacy_classes(G_)), T_(G_, C_) {
        for (size_t c = 0; c < C_.count(); ++c) depth_.push_back(G_.depth(C_.rep[c]));
        for (size_t i = 0; i < T_.size(); ++i) {
            IrreducibleCharacterRecord r;
            r.row = i;
            r.dim = T_.degree(i);
            r.conductor = conductor_of(i);
            recs_.push_back(r);
        }
        for (auto& r : recs_) classify(r);
    }

    const QuotientGroup& group() const { return G_; }
    const ConjugacyClasses& classes() const { return C_; }
    const CharacterTable& table() const { return T_; }
    const std::vector<IrreducibleCharacterRecord>& records() const { return recs_; }
    int64_t q() const { return G_.p(); }

    /// dim pi^{o_E^x}.
    int64_t invariant_dimension(const IrreducibleCharacterRecord& r, ExtLabel E) const {
        return integral_average(r.row, class_counts(G_.torus(E)));
    }

    /// Same average over g H g^-1 (conjugation invariance check).
    int64_t invariant_dimension_conjugated(const IrreducibleCharacterRecord& r, ExtLabel E, int32_t g) const {
        std::vector<int32_t> H;
        for (int32_t h : G_.torus(E)) H.push_back(G_.conj(g, h));
        return integral_average(r.row, class_counts(H));
    }

    /// Conductor of the row of values v (mod the table prime); v must be a row.
    int conductor_of(size_t row) const {
        for (int m = 0; m <= G_.n(); ++m) {
            bool trivial = true;
            for (size_t c = 0; c < C_.count() && trivial; ++c)
                if (depth_[c] >= m && !T_.in_kernel(row, c)) trivial = false;
            if (trivial) return m + 1;
        }
        throw Error("internal: representation not trivial on U^n");
    }

    /// chi vanishes off the conjugates of S.
    bool supported_on(size_t row, const std::vector<int32_t>& S) const {
        std::vector<char> meets(C_.count(), 0);
        for (int32_t x : S) meets[static_cast<size_t>(C_.class_of[static_cast<size_t>(x)])] = 1;
        for (size_t c = 0; c < C_.count(); ++c)
            if (!meets[c] && !T_.value(row, c).is_zero()) return false;
        return true;
    }

private:
    std::vector<std::pair<int32_t, int64_t>> class_counts(const std::vector<int32_t>& S) const {
        std::map<int32_t, int64_t> cnt;
        for (int32_t x : S) ++cnt[C_.class_of[static_cast<size_t>(x)]];
        return {cnt.begin(), cnt.end()};
    }

    int64_t integral_average(size_t row, const std::vector<std::pair<int32_t, int64_t>>& counts) const {
        Rational a = T_.average(row, counts);
        if (denominator(a) != 1 || a < 0) throw Error("internal: non-integral invariant dimension " + to_string(a));
        return static_cast<int64_t>(numerator(a));
    }

    void classify(IrreducibleCharacterRecord& r) {
        for (const auto& s : recs_) {
            if (s.dim != 1) continue;
            int t = T_.find_row(T_.product_mod(r.row, s.row));
            if (t < 0) throw Error("internal: twist of an irreducible is not in the table");
            if (recs_[static_cast<size_t>(t)].conductor < r.conductor) r.minimal = false;
        }
        if (r.dim == 1) {
            int t = T_.find_row(T_.product_mod(r.row, r.row));
            r.square_unramified = recs_[static_cast<size_t>(t)].conductor == 1;
            r.label = RepLabel::OneDimensional;
            return;
        }
        if (!r.minimal) {
            r.label = RepLabel::NonMinimal;
            return;
        }
        if (r.conductor % 2 == 1) {
            int m = (r.conductor - 1) / 2;
            bool k = supported_on(r.row, support_set(ExtLabel::K, m));
            bool l = supported_on(r.row, support_set(ExtLabel::L, m));
            if (k == l) throw Error("unclassified representation (odd conductor " + std::to_string(r.conductor) + ")");
            r.label = k ? RepLabel::K : RepLabel::L;
        } else {
            if (!supported_on(r.row, support_set(ExtLabel::M, r.conductor / 2 - 1)))
                throw Error("unclassified representation (even conductor " + std::to_string(r.conductor) + ")");
            r.label = RepLabel::M;
        }
    }

    const std::vector<int32_t>& support_set(ExtLabel E, int m) {
        auto key = std::make_pair(static_cast<int>(E), m);
        auto it = jbar_.find(key);
        if (it == jbar_.end()) it = jbar_.emplace(key, G_.torus_times_filtration(E, m)).first;
        return it->second;
    }

    QuotientGroup G_;
    ConjugacyClasses C_;
    CharacterTable T_;
    std::vector<int> depth_;
    std::vector<IrreducibleCharacterRecord> recs_;
    std::map<std::pair<int, int>, std::vector<int32_t>> jbar_;
};

}  // namespace quatrep
