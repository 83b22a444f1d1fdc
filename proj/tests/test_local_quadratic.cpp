#include "quatrep/local_quadratic.hpp"

#include <gtest/gtest.h>

using namespace quatrep;

TEST(LocalField, RejectsTwoAndComposites) {
    EXPECT_THROW(LocalFieldDesc(2, 3), Error);
    EXPECT_THROW(LocalFieldDesc(9, 3), Error);
    EXPECT_THROW(LocalFieldDesc(3, 0), Error);
    EXPECT_THROW(QuadExtDesc(2, ExtLabel::K, 2), Error);
}

TEST(QuadExt, Basics) {
    QuadExtDesc K(3, ExtLabel::K, 4), L(3, ExtLabel::L, 4), M(3, ExtLabel::M, 4);
    EXPECT_EQ(K.delta, -3);
    EXPECT_EQ(L.delta, -6);
    EXPECT_EQ(M.delta, 2);
    for (const auto& E : {K, L, M}) EXPECT_EQ(E.e * E.f_res, 2);
    EXPECT_EQ(norm(K, uniformizer(K)), 3);
    EXPECT_EQ(norm(L, uniformizer(L)), 6);
    EXPECT_EQ(norm(K, EElt{1, 0}), 1);
    EXPECT_EQ(trace(K, EElt{1, 0}), 2);
    EXPECT_EQ(trace(M, EElt{0, 1}), 0);
    EXPECT_EQ(norm_mod(K, EElt{2, 5}, 2), BigInt(mod(4 + 3 * 25, 9)));
    EXPECT_THROW(norm_mod(K, EElt{2, 5}, 5), Error);
}

TEST(QuadExt, ValuationIsAdditive) {
    for (ExtLabel lab : kAllLabels) {
        QuadExtDesc E(5, lab, 3);
        EXPECT_EQ(valuation_E(E, uniformizer(E)), 1);
        std::vector<EElt> xs{{1, 0}, {0, 1}, {5, 0}, {3, 7}, {10, 5}, {25, 15}, {7, 0}};
        for (auto& x : xs)
            for (auto& y : xs) EXPECT_EQ(valuation_E(E, mul(E, x, y)), valuation_E(E, x) + valuation_E(E, y));
        // v_F(N x) = v_E(x) * (2 / e)
        for (auto& x : xs) EXPECT_EQ(valuation(norm(E, x), 5), valuation_E(E, x) * 2 / E.e);
    }
}

TEST(QuadExt, SplitUnitReconstructs) {
    for (ExtLabel lab : kAllLabels) {
        QuadExtDesc E(3, lab, 4);
        std::vector<EElt> xs{{1, 1}, {3, 1}, {9, 6}, {2, 3}, {27, 18}, {6, 9}};
        for (auto& x : xs) {
            auto [k, w] = split_unit(E, x, 3);
            ResidueRing R = E.ring(3);
            ASSERT_TRUE(R.is_unit(w));
            // pi^k * w == x modulo p_E^(k+3)
            EElt pk{1, 0};
            for (int i = 0; i < k; ++i) pk = mul(E, pk, uniformizer(E));
            EElt back = mul(E, pk, EElt{w.a, w.b});
            auto [k2, w2] = split_unit(E, back, 3);
            EXPECT_EQ(k2, k);
            EXPECT_EQ(w2, w);
        }
    }
}

TEST(NormImage, SquaresForRamified) {
    auto r = norm_image_is_squares(QuadExtDesc(3, ExtLabel::K, 2), 2);
    EXPECT_EQ(r.norms, (std::set<int64_t>{1, 4, 7}));
    EXPECT_TRUE(r.equal);
    auto r2 = norm_image_is_squares(QuadExtDesc(5, ExtLabel::L, 1), 1);
    EXPECT_EQ(r2.norms, (std::set<int64_t>{1, 4}));
    EXPECT_TRUE(r2.equal);
    EXPECT_THROW(norm_image_is_squares(QuadExtDesc(3, ExtLabel::M, 2), 2), Error);
    for (int64_t p : {3, 5, 7, 11})
        for (ExtLabel lab : {ExtLabel::K, ExtLabel::L})
            EXPECT_TRUE(norm_image_is_squares(QuadExtDesc(p, lab, 2), 2).equal);
}

TEST(SignCharacter, Definition) {
    for (ExtLabel lab : kAllLabels) {
        QuadExtDesc E(5, lab, 2);
        auto nu = sign_character(E);
        EXPECT_EQ(nu(uniformizer(E)), Phase(1, 2));
        EXPECT_EQ(nu(EElt{2, 1}), Phase());
        EXPECT_EQ(nu.conductor(), 0);
        EXPECT_EQ((nu * nu).at_pi(), Phase());
        if (E.ramified()) {
            // nu_E = nu o N with nu the unramified quadratic character of F^x
            auto nuF = unramified_quadratic(5);
            for (EElt x : std::vector<EElt>{uniformizer(E), {2, 1}, {1, 3}, {10, 1}})
                EXPECT_EQ(nu(x), nuF(norm(E, x)));
        }
    }
}

TEST(QuadraticCharacter, HilbertSymbolValues) {
    QuadExtDesc K(3, ExtLabel::K, 2), L(3, ExtLabel::L, 2), M(3, ExtLabel::M, 2);
    // w_E is trivial exactly on norms
    EXPECT_EQ(quadratic_character(K)(BigInt(3)), Phase());      // 3 = N(sqrt -3)
    EXPECT_EQ(quadratic_character(L)(BigInt(6)), Phase());      // 6 = N(sqrt -6)
    EXPECT_EQ(quadratic_character(L)(BigInt(3)), Phase(1, 2));  // 3 not a norm from L
    EXPECT_EQ(quadratic_character(M)(BigInt(3)), Phase(1, 2));
    EXPECT_EQ(quadratic_character(M)(BigInt(2)), Phase());
    EXPECT_EQ(quadratic_character(K)(BigInt(2)), Phase(1, 2));  // 2 is a non-square unit
}

namespace {

// Brute-force count of characters of (o_E/p_E^2)^x trivial on o_F^x with exact
// conductor 2: |G/H| - |G/(H U^1)|, each with two admissible uniformizer values.
int brute_count_f2(const QuadExtDesc& E) {
    ResidueRing R = E.ring(2);
    auto units = R.units();
    std::set<int64_t> H, HU1;
    for (auto& x : units) {
        if (x.b == 0) H.insert(R.key(x));
    }
    for (auto& x : units) {
        bool in_u1 = E.ramified() ? (mod(x.a - 1, R.mod_a()) % E.p() == 0) : (mod(x.a - 1, E.p()) == 0 && x.b % E.p() == 0);
        if (!in_u1) continue;
        for (int64_t h : H) HU1.insert(R.key(R.mul(x, R.from_key(h))));
    }
    int64_t G = static_cast<int64_t>(units.size());
    int64_t count = G / static_cast<int64_t>(H.size()) - G / static_cast<int64_t>(HU1.size());
    return static_cast<int>(count * (E.ramified() ? 2 : 1));
}

}  // namespace

TEST(EnumerateCharacters, ConductorZero) {
    for (ExtLabel lab : {ExtLabel::K, ExtLabel::L}) {
        QuadExtDesc E(3, lab, 3);
        auto cs = enumerate_characters(E, 0, CentralCondition::TrivialOnF);
        ASSERT_EQ(cs.size(), 2u);
        EXPECT_EQ(cs[0].chi.at_pi(), Phase());
        EXPECT_EQ(cs[1].chi.at_pi(), Phase(1, 2));
    }
}

TEST(EnumerateCharacters, ConductorTwoMatchesBruteForce) {
    for (int64_t p : {3, 5, 7})
        for (ExtLabel lab : kAllLabels) {
            QuadExtDesc E(p, lab, 3);
            auto cs = enumerate_characters(E, 2, CentralCondition::TrivialOnF);
            EXPECT_EQ(static_cast<int>(cs.size()), brute_count_f2(E)) << p << label_name(lab);
            for (auto& c : cs) {
                EXPECT_EQ(c.chi.conductor(), 2);
                EXPECT_EQ(c.chi.galois_conjugate().conductor(), 2);
                // restriction to F^x trivial
                for (int64_t x : std::vector<int64_t>{p, 2 * p, p * p, 2, p - 1, p + 1}) EXPECT_TRUE(c.chi.on_base(x).is_zero());
            }
        }
}

TEST(EnumerateCharacters, ConductorOneIsTrivialOnU1) {
    QuadExtDesc E(5, ExtLabel::K, 3);
    auto cs = enumerate_characters(E, 1, CentralCondition::Unrestricted);
    EXPECT_EQ(cs.size(), 2u * 3u);  // non-trivial characters of F_5^x, two uniformizer values
    for (auto& c : cs) {
        EXPECT_TRUE(c.chi(EElt{1, 1}).is_zero());
        EXPECT_TRUE(c.chi(EElt{6, 3}).is_zero());
    }
    EXPECT_THROW(enumerate_characters(E, 4, CentralCondition::Unrestricted), Error);
}

TEST(EnumerateCharacters, MultiplicativeAndMinimality) {
    QuadExtDesc E(3, ExtLabel::K, 4);
    auto cs = enumerate_characters(E, 3, CentralCondition::Unrestricted);
    std::vector<EElt> xs{{1, 1}, {2, 1}, {4, 5}, {1, 3}, {0, 1}, {3, 1}};
    for (auto& c : cs) {
        for (auto& x : xs)
            for (auto& y : xs) EXPECT_EQ(c.chi(mul(E, x, y)), c.chi(x) + c.chi(y));
        // N maps 1 + p_K^2 onto 1 + p, so phi o N realizes every character of
        // (1 + p_K^2)/(1 + p_K^3): odd conductor 3 is never minimal
        EXPECT_FALSE(c.minimal);
    }
    // N(1 + p_K) lies in 1 + p, so twisting cannot remove conductor 2
    for (auto& c : enumerate_characters(E, 2, CentralCondition::Unrestricted)) EXPECT_TRUE(c.minimal);
}
