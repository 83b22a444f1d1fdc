#include "quatrep/dichotomy.hpp"

#include <gtest/gtest.h>

using namespace quatrep;

namespace {

FCharacter legendre_character(int64_t p, Phase at_p = Phase()) {
    return f_character(p, 1, [p](int64_t x) { return legendre(x, p) == 1 ? Phase() : Phase(1, 2); }, at_p);
}

// All characters of F^x trivial on 1 + p^s with value at_p on p.
std::vector<FCharacter> f_characters(int64_t p, int s, Phase at_p) {
    ResidueRing R{ResidueRing::Kind::Base, p, s, 0};
    auto U = detail::cached_unit_group(R);
    std::vector<FCharacter> out;
    for (const auto& c : characters(U->group())) out.push_back(FCharacter{p, U, c, at_p});
    return out;
}

int sign_of(const Phase& ph) { return ph.is_zero() ? 1 : -1; }

}  // namespace

TEST(GaussEpsilon, QuadraticGaussSumSquares) {
    // direct expansion: (sum_u (u/p) zeta^u)^2 = (-1/p) p
    for (int64_t p : {3, 5, 7, 11, 13}) {
        auto chi = legendre_character(p);
        auto e = gauss_epsilon(chi, {});
        // sqrt(p) / sqrt(p) = 1 when p = 1 mod 4, i sqrt(p) / sqrt(p) otherwise
        EXPECT_EQ(e.sign(), p % 4 == 1 ? 1 : 0);
        auto sq = e * e;
        EXPECT_EQ(sq.sign(), legendre(-1, p)) << p;
    }
}

TEST(GaussEpsilon, UnramifiedIsOneForConductorZeroPsi) {
    auto chi = unramified_character(5, Phase(1, 3));
    auto e = gauss_epsilon(chi, {});
    EXPECT_EQ(e.sign(), 1);
    // chi(varpi)^n for n(psi) = 2
    auto e2 = gauss_epsilon(chi, {std::nullopt, 2});
    EXPECT_EQ(e2.S, Cyclotomic::root(Phase(2, 3)));
}

TEST(GaussEpsilon, UnitModulusAndFunctionalEquation) {
    for (int64_t p : {3, 5, 7})
        for (int s : {1, 2}) {
            for (const auto& chi : f_characters(p, s, Phase(1, 4))) {
                if (chi.conductor() == 0) continue;
                auto e = gauss_epsilon(chi, {});
                EXPECT_TRUE(e.unit_modulus());
                FCharacter inv{p, chi.U, chi.unit.inverse(), Phase() - chi.at_p};
                // epsilon(chi) epsilon(chi^-1) = chi(-1)
                EXPECT_EQ((e * gauss_epsilon(inv, {})).sign(), sign_of(chi(BigInt(-1))));
            }
        }
    for (ExtLabel lab : kAllLabels)
        for (const auto& c : enumerate_characters(QuadExtDesc(3, lab, 2), 2, CentralCondition::Unrestricted))
            EXPECT_TRUE(gauss_epsilon(c.chi, {lab, 0}).unit_modulus());
}

TEST(GaussEpsilon, RejectsMismatchedFields) {
    auto chi = legendre_character(3);
    EXPECT_THROW(gauss_epsilon(chi, {ExtLabel::K, 0}), Error);
    auto c = enumerate_characters(QuadExtDesc(3, ExtLabel::K, 2), 2, CentralCondition::Unrestricted).front().chi;
    EXPECT_THROW(gauss_epsilon(c, {ExtLabel::L, 0}), Error);
    EXPECT_THROW(gauss_epsilon(c, {}), Error);
}

TEST(UnramifiedTwist, ExponentFormula) {
    auto minus = unramified_character(3, Phase(1, 2));
    EXPECT_EQ(sign_of(unramified_twist_factor(minus, 3, 0, 1)), -1);
    EXPECT_EQ(sign_of(unramified_twist_factor(minus, 2, 1, 2)), 1);
    EXPECT_TRUE(unramified_twist_factor(unramified_character(3, Phase()), 5, 1, 2).is_zero());
    EXPECT_THROW(unramified_twist_factor(legendre_character(3), 1, 0, 1), Error);
}

TEST(UnramifiedTwist, MatchesGaussSumsOnCharacters) {
    int instances = 0;
    for (int64_t p : {3, 5, 7})
        for (Phase t : {Phase(1, 2), Phase(1, 3), Phase(3, 4)})
            for (int k : {0, 1, 2}) {
                auto chi = f_characters(p, 2, Phase(1, 6))[1];
                auto tw = unramified_character(p, t);
                FCharacter prod{p, chi.U, chi.unit, chi.at_p + t};
                AdditiveCharacterDesc psi{std::nullopt, k};
                auto lhs = gauss_epsilon(prod, psi);
                auto rhs = gauss_epsilon(chi, psi) * EpsilonValue{Cyclotomic::root(unramified_twist_factor(tw, chi.conductor(), k, 1)), 1};
                EXPECT_TRUE(lhs.equals(rhs)) << p << " " << k;
                ++instances;
            }
    // characters of E^x twisted by phi o N with phi unramified
    for (ExtLabel lab : kAllLabels)
        for (int k : {0, 1}) {
            QuadExtDesc E(5, lab, 2);
            auto chi = enumerate_characters(E, 2, CentralCondition::Unrestricted).front().chi;
            auto phi = unramified_character(5, Phase(1, 3));
            AdditiveCharacterDesc psi{lab, k};
            // phi o N(pi_E) is phi(p)^(2/e)
            Phase t = phi(norm(E, uniformizer(E)));
            auto rhs = gauss_epsilon(chi, psi) * EpsilonValue{Cyclotomic::root(t * (chi.conductor() + psi.conductor())), 1};
            EXPECT_TRUE(gauss_epsilon(chi.twist(phi), psi).equals(rhs));
            ++instances;
        }
    EXPECT_GE(instances, 20);
}

TEST(TwistRatio, RatioRuleAndMechanism) {
    for (int64_t p : {3, 5, 7})
        for (ExtLabel K : {ExtLabel::K, ExtLabel::L})
            for (int f = 1; f <= 4; ++f)
                for (const auto& kappa : admissible_characters(p, K, f))
                    for (ExtLabel E : kAllLabels) {
                        int r = twist_epsilon_ratio(kappa, E);
                        EXPECT_EQ(r, expected_twist_ratio(K, f, E)) << p << label_name(K) << f << label_name(E);
                        EXPECT_EQ(r, twist_ratio_mechanism(p, K, f, E));
                    }
    EXPECT_EQ(expected_twist_ratio(ExtLabel::K, 1, ExtLabel::L), 1);
    EXPECT_EQ(expected_twist_ratio(ExtLabel::K, 2, ExtLabel::K), 1);
    EXPECT_EQ(expected_twist_ratio(ExtLabel::K, 2, ExtLabel::L), -1);
}

TEST(TwistRatio, AdmissibleConductors) {
    // kappa|F^x = w_K forces f = 1 (only when q = 3 mod 4) or f even
    EXPECT_FALSE(admissible_characters(3, ExtLabel::K, 1).empty());
    EXPECT_TRUE(admissible_characters(5, ExtLabel::K, 1).empty());
    EXPECT_TRUE(admissible_characters(3, ExtLabel::K, 3).empty());
    EXPECT_THROW(admissible_characters(3, ExtLabel::M, 2), Error);
    for (const auto& k : admissible_characters(5, ExtLabel::L, 2)) {
        EXPECT_TRUE(k.regular());
        auto wL = quadratic_character(QuadExtDesc(5, ExtLabel::L, 1));
        for (int64_t x : {2, 3, 5, 10, -1}) EXPECT_EQ(k.on_base(x), wL(BigInt(x)));
    }
}

TEST(Tunnell, MultiplicitiesAndSense) {
    for (int64_t p : {3, 5, 7})
        for (ExtLabel K : {ExtLabel::K, ExtLabel::L})
            for (const auto& kappa : admissible_orbits(p, K, 2))
                for (ExtLabel E : kAllLabels)
                    for (bool s : {false, true}) {
                        if (E == ExtLabel::M && s) {
                            EXPECT_THROW(tunnell_multiplicity(kappa, E, s), Error);
                            continue;
                        }
                        int m = tunnell_multiplicity(kappa, E, s);
                        EXPECT_TRUE(m == 0 || m == 1);
                        // the division-algebra side is 1 - m
                        int mB = 1 - m;
                        bool q3 = p % 4 == 3;
                        if (E == ExtLabel::M) EXPECT_EQ(mB, 1);
                        else if (E == K) EXPECT_EQ(mB, q3 ? 1 : 0);
                        else EXPECT_EQ(mB, q3 ? 0 : 1);
                    }
}

TEST(Dichotomy, SmallConductors) {
    for (int64_t p : {3, 5}) {
        LocalDivisionQuotient D(p, 2);
        auto r = dichotomy_check(D, 3);
        EXPECT_EQ(r.violations, 0u);
        EXPECT_TRUE(r.counting_ok);
        EXPECT_FALSE(r.entries.empty());
        for (const auto& e : r.entries)
            if (e.E == ExtLabel::M) EXPECT_EQ(e.m_B, 1);
    }
    LocalDivisionQuotient D(3, 3);
    EXPECT_THROW(dichotomy_check(D, 3), Error);
    EXPECT_THROW(dichotomy_check(D, 4), Error);
}
