#include <loopvert/loop_points.hpp>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace loopvert;
using testutil::Rng;

namespace {

const RingDescriptor kEps2({2});
const RingDescriptor kEps22({2, 2});

// y^2 = 1 + x as a presentation in variables (x, y): f = y^2 - x - 1.
EtalePresentation sqrt_chart() {
    QPolynomial f(2);
    f.add_term({0, 2}, 1);
    f.add_term({1, 0}, -1);
    f.add_term({0, 0}, -1);
    return EtalePresentation(1, 1, {f});
}

NilLaurent eps_tpow(const RingDescriptor &d, int prec, int k, int gen = 0) {
    NilLaurent s(d, prec);
    s.set_coeff(k, RingElem::generator(d, gen));
    return s;
}

TEST(LoopPoints, MembershipExamples) {
    // A^d: no equations, any tuple is a point.
    std::vector<NilLaurent> tuple{NilLaurent::t_power(kEps2, 3, 1)};
    EXPECT_TRUE(is_loop_point(tuple, std::vector<QPolynomial>{}));

    // x(t) = e t^-1, y(t) = 1 + (1/2) e t^-1 lies on y^2 = 1 + x over Q[e]/(e^2).
    auto x = eps_tpow(kEps2, 3, -1);
    auto y = NilLaurent::one(kEps2, 3) + RingElem::constant(kEps2, rat(1, 2)) * eps_tpow(kEps2, 3, -1);
    EXPECT_TRUE(is_loop_point({x, y}, sqrt_chart()));
    // and y(t) = 1 does not.
    EXPECT_FALSE(is_loop_point({x, NilLaurent::one(kEps2, 3)}, sqrt_chart()));

    // A non-nilpotent t^-1 coefficient is rejected at construction.
    NilLaurent bad(kEps2, 3);
    EXPECT_THROW(bad.set_coeff(-1, RingElem::one(kEps2)), std::invalid_argument);
}

TEST(LoopPoints, HenselSquareRootExample) {
    auto pres = sqrt_chart();
    auto x = eps_tpow(kEps2, 3, -1);
    auto seed = NilLaurent::one(kEps2, 3);
    auto lift = hensel_lift(pres, {x}, {seed});
    ASSERT_EQ(lift.size(), 1u);
    auto expect = NilLaurent::one(kEps2, 3) +
                  RingElem::constant(kEps2, rat(1, 2)) * eps_tpow(kEps2, 3, -1);
    EXPECT_TRUE(nl_equal_mod_prec(lift[0], expect));
    // verify by squaring
    EXPECT_TRUE(is_loop_point({x, lift[0]}, pres));
}

TEST(LoopPoints, HenselFixedPointOnExactSeed) {
    auto pres = sqrt_chart();
    auto x = NilLaurent::constant(kEps2, 4, RingElem::constant(kEps2, 3));  // 1 + 3 = 4
    auto seed = NilLaurent::constant(kEps2, 4, RingElem::constant(kEps2, 2));
    auto lift = hensel_lift(pres, {x}, {seed});
    EXPECT_EQ(lift[0], seed);
}

TEST(LoopPoints, HenselTwoGeneratorBase) {
    auto pres = sqrt_chart();
    auto x = eps_tpow(kEps22, 3, -1, 0) + eps_tpow(kEps22, 3, -2, 1);
    auto seed = NilLaurent::one(kEps22, 3);
    auto lift = hensel_lift(pres, {x}, {seed});
    EXPECT_TRUE(is_loop_point({x, lift[0]}, pres));

    // a congruent, perturbed seed gives the identical lift
    auto seed2 = seed + RingElem::constant(kEps22, rat(1, 3)) * eps_tpow(kEps22, 3, 1, 0);
    auto lift2 = hensel_lift(pres, {x}, {seed2});
    EXPECT_EQ(lift[0], lift2[0]);
}

TEST(LoopPoints, HenselRejectsBadSeed) {
    auto pres = sqrt_chart();
    auto x = eps_tpow(kEps2, 3, -1);
    auto seed = NilLaurent::constant(kEps2, 3, RingElem::constant(kEps2, 2));  // 4 != 1
    EXPECT_THROW(hensel_lift(pres, {x}, {seed}), std::invalid_argument);
}

TEST(LoopPoints, HenselRandomSystems) {
    // f_i = y_i - c_i - N_i(x, y) with every monomial of N_i divisible by an
    // x-variable, evaluated on purely nilpotent base series: etale along the
    // lift, with reduced solution y = c.
    Rng rng(4242);
    std::uniform_int_distribution<int> dim(1, 2);
    for (int iter = 0; iter < 50; ++iter) {
        int d = dim(rng), e = dim(rng);
        int nv = d + e;
        std::vector<Rational> cs;
        std::vector<QPolynomial> eqs;
        for (int i = 0; i < e; ++i) {
            Rational c = testutil::random_rational(rng);
            cs.push_back(c);
            QPolynomial f(nv);
            std::vector<int> yi(nv, 0);
            yi[d + i] = 1;
            f.add_term(yi, 1);
            f.add_term(std::vector<int>(nv, 0), -c);
            std::uniform_int_distribution<int> nterms(1, 3);
            int terms = nterms(rng);
            for (int k = 0; k < terms; ++k) {
                std::vector<int> expo(nv, 0);
                std::uniform_int_distribution<int> xv(0, d - 1), deg(0, 1);
                expo[xv(rng)] = 1;  // guarantees an x factor
                for (int v = 0; v < nv; ++v) expo[v] += deg(rng);
                f.add_term(expo, -testutil::random_rational(rng));
            }
            eqs.push_back(f);
        }
        EtalePresentation pres(d, e, eqs);

        std::vector<NilLaurent> base;
        for (int i = 0; i < d; ++i) {
            NilLaurent s(kEps22, 3);
            s.set_coeff(-1, testutil::random_nilpotent(rng, kEps22));
            s.set_coeff(1, testutil::random_nilpotent(rng, kEps22));
            base.push_back(s);
        }
        std::vector<NilLaurent> seed, seed2;
        for (int i = 0; i < e; ++i) {
            seed.push_back(NilLaurent::constant(kEps22, 3, RingElem::constant(kEps22, cs[i])));
            seed2.push_back(seed.back() + eps_tpow(kEps22, 3, 0, 0));
        }
        auto lift = hensel_lift(pres, base, seed);
        std::vector<NilLaurent> full = base;
        full.insert(full.end(), lift.begin(), lift.end());
        EXPECT_TRUE(is_loop_point(full, pres));
        auto lift2 = hensel_lift(pres, base, seed2);
        for (int i = 0; i < e; ++i) EXPECT_EQ(lift[i], lift2[i]);
    }
}

TEST(LoopPoints, ThetaProjection) {
    // On A^d theta takes 0-th coefficients.
    EtalePresentation ad(2, 0, {});
    std::vector<NilLaurent> pt{eps_tpow(kEps2, 3, -1) + NilLaurent::constant(kEps2, 3, RingElem::constant(kEps2, 5)),
                               NilLaurent::t_power(kEps2, 3, 2)};
    auto proj = theta_projection(ad, pt);
    EXPECT_EQ(proj[0], RingElem::constant(kEps2, 5));
    EXPECT_EQ(proj[1], RingElem::zero(kEps2));

    // Identity on a point with only t^0 terms.
    auto pres = sqrt_chart();
    std::vector<NilLaurent> flat{NilLaurent::constant(kEps2, 2, RingElem::constant(kEps2, 3)),
                                 NilLaurent::constant(kEps2, 2, RingElem::constant(kEps2, 2))};
    auto proj2 = theta_projection(pres, flat);
    EXPECT_EQ(proj2[0], RingElem::constant(kEps2, 3));
    EXPECT_EQ(proj2[1], RingElem::constant(kEps2, 2));

    // The square-root example: x -> 0, y -> 1.
    auto x = eps_tpow(kEps2, 3, -1);
    auto y = NilLaurent::one(kEps2, 3) +
             RingElem::constant(kEps2, rat(1, 2)) * eps_tpow(kEps2, 3, -1);
    auto proj3 = theta_projection(pres, {x, y});
    EXPECT_EQ(proj3[0], RingElem::zero(kEps2));
    EXPECT_EQ(proj3[1], RingElem::one(kEps2));
}

TEST(LoopPoints, ThetaCommutesWithTruncation) {
    EtalePresentation ad(1, 0, {});
    Rng rng(17);
    for (int iter = 0; iter < 50; ++iter) {
        auto s = testutil::random_nil_laurent(rng, kEps22, 4);
        auto full = theta_projection(ad, {s});
        auto truncated = theta_projection(ad, {s.truncated(2)});
        EXPECT_EQ(full, truncated);
    }
}

TEST(LoopPoints, EpsilonMembership) {
    EpsilonProfile eps1(std::map<int, int>{{-1, 1}});
    EpsilonProfile eps2(std::map<int, int>{{-1, 2}});

    // no negative terms: in every truncation
    std::vector<NilLaurent> flat{NilLaurent::t_power(kEps2, 3, 1)};
    EXPECT_TRUE(epsilon_membership(flat, EpsilonProfile{}));
    EXPECT_TRUE(epsilon_membership(flat, eps1));

    // x(t) = e t^-1 over Q[e]/(e^3): e^2 != 0, e^3 = 0
    RingDescriptor d3({3});
    NilLaurent x(d3, 3);
    x.set_coeff(-1, RingElem::generator(d3, 0));
    EXPECT_FALSE(epsilon_membership({x}, eps1));
    EXPECT_TRUE(epsilon_membership({x}, eps2));
}

TEST(LoopPoints, EpsilonMonotonicity) {
    Rng rng(88);
    RingDescriptor d3({3, 2});
    EpsilonProfile lo(std::map<int, int>{{-1, 1}});
    EpsilonProfile hi(std::map<int, int>{{-1, 2}, {-2, 1}});
    ASSERT_TRUE(lo.leq(hi));
    for (int iter = 0; iter < 100; ++iter) {
        auto s = testutil::random_nil_laurent(rng, d3, 2);
        if (epsilon_membership({s}, lo)) EXPECT_TRUE(epsilon_membership({s}, hi));
    }
}

TEST(LoopPoints, TruncationSquares) {
    // identity square
    EpsilonProfile e0;
    auto sq0 = truncation_ring_maps(1, e0, e0, 2, 2);
    EXPECT_TRUE(sq0.verify());
    EXPECT_EQ(sq0.eps_n, sq0.epsb_nbig);

    // epsilon = 0: plain polynomial ring on modes 0..n
    EXPECT_EQ(sq0.eps_n.presentation().size(), 3u);
    for (const auto &[g, order] : sq0.eps_n.presentation()) EXPECT_EQ(order, 0);

    // d=1, eps_{-1}: 1 -> 2, n: 0 -> 1
    EpsilonProfile ea(std::map<int, int>{{-1, 1}});
    EpsilonProfile eb(std::map<int, int>{{-1, 2}});
    auto sq = truncation_ring_maps(1, ea, eb, 0, 1);
    EXPECT_TRUE(sq.verify());

    // all small squares: entries <= 2, depth <= 2, n <= n' <= 2
    std::vector<EpsilonProfile> profiles;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) {
            std::map<int, int> m;
            if (a > 0) m[-1] = a;
            if (b > 0) m[-2] = b;
            profiles.push_back(EpsilonProfile(m));
        }
    int checked = 0;
    for (const auto &pa : profiles)
        for (const auto &pb : profiles) {
            if (!pa.leq(pb)) continue;
            for (int n = 0; n <= 2; ++n)
                for (int nb = n; nb <= 2; ++nb)
                    for (int d = 1; d <= 2; ++d) {
                        auto s = truncation_ring_maps(d, pa, pb, n, nb);
                        EXPECT_TRUE(s.verify());
                        ++checked;
                    }
        }
    EXPECT_GT(checked, 100);

    EXPECT_THROW(truncation_ring_maps(1, eb, ea, 0, 1), std::invalid_argument);
    EXPECT_THROW(truncation_ring_maps(1, ea, eb, 1, 0), std::invalid_argument);
}

}  // namespace
