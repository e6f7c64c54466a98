#include <gtest/gtest.h>

#include <random>

#include "foliated/gysin.hpp"
#include "support.hpp"

using namespace foliated;
using namespace foliated::gysin;
using namespace testing_support;

namespace {

ModelPtr base2() { return torus({"1", "sqrt2"}); }

Form dF(const Form& a) { return derham::differential(derham::Component::d_F, a); }
Form d(const Form& a) { return derham::differential(derham::Component::d, a); }

Form sample(const ModelPtr& m, int seed) {
    std::mt19937_64 rng(seed);
    return derham::random_form(m, derham::window_monomials(*m, {1, 0, 0}), rng, 6);
}

}  // namespace

TEST(Gysin, PullbackExamples) {
    auto M = base2();
    auto b = product_bundle(M);
    ASSERT_TRUE(b.realized());
    auto E = b.total;
    EXPECT_EQ(pullback(b, Form::generator(M, "theta")), Form::generator(E, "theta"));
    EXPECT_EQ(pullback(b, form(M, {1, -1}, 0, 1, {"eta1"})), form(E, {1, -1, 0}, 0, 1, {"eta1"}));
    Form f = form(M, {2, 1}, 0, 1, {});
    EXPECT_EQ(dF(pullback(b, f)), pullback(b, dF(f)));
}

TEST(Gysin, FiberIntegrationExamples) {
    auto M = base2();
    auto b = product_bundle(M);
    auto E = b.total;
    EXPECT_EQ(fiber_integrate(b, Form::generator(E, "dphi")), Form::one(M));
    EXPECT_TRUE(fiber_integrate(b, form(E, {1, 0, 0}, 0, 1, {"theta"})).is_zero());
    EXPECT_EQ(fiber_integrate(b, form(E, {1, 0, 0}, 0, 1, {"theta", "dphi"})), form(M, {1, 0}, 0, 1, {"theta"}));
    EXPECT_EQ(fiber_integrate(b, form(E, {}, 0, 1, {"dphi", "eta1"})), -form(M, {}, 0, 1, {"eta1"}));
    // nonzero circle modes integrate to zero
    EXPECT_TRUE(fiber_integrate(b, form(E, {0, 0, 1}, 0, 1, {"dphi"})).is_zero());
}

TEST(Gysin, IntegrationIntertwinesDifferentials) {
    auto M = base2();
    auto b = product_bundle(M);
    auto E = b.total;
    for (int seed = 0; seed < 20; ++seed) {
        Form a = sample(E, seed);
        EXPECT_EQ(dF(fiber_integrate(b, a)), fiber_integrate(b, dF(a))) << a.to_string();
        EXPECT_EQ(d(fiber_integrate(b, a)), fiber_integrate(b, d(a))) << a.to_string();
        Form c = sample(M, seed);
        EXPECT_EQ(dF(pullback(b, c)), pullback(b, dF(c)));
        EXPECT_EQ(d(pullback(b, c)), pullback(b, d(c)));
        EXPECT_TRUE(fiber_integrate(b, pullback(b, c)).is_zero());
        EXPECT_EQ(fiber_integrate(b, splitting(b, c)), c);
    }
}

TEST(Gysin, PullbackToCosphereCommutesWithLeafwiseDifferential) {
    auto M = torus({"1", "sqrt2", "sqrt3"});
    auto C = derive(M, Family::cosphere_circle);
    for (int seed = 0; seed < 10; ++seed) {
        Form c = sample(M, seed);
        EXPECT_EQ(dF(pullback(c, C)), pullback(dF(c), C));
    }
}

TEST(Gysin, SplittingOverT2) {
    auto rep = product_splitting_dims(base2(), 1, 0);
    ASSERT_EQ(rep.rows.size(), 3u);
    std::vector<std::size_t> direct{1, 2, 1}, bk{1, 1, 0}, bkr{0, 1, 1};
    for (int k = 0; k < 3; ++k) {
        auto& row = rep.rows[k];
        ASSERT_TRUE(row.direct.has_value());
        EXPECT_EQ(*row.direct, direct[k]) << k;
        EXPECT_EQ(row.base_k, bk[k]) << k;
        EXPECT_EQ(row.base_k_minus_r, bkr[k]) << k;
        EXPECT_TRUE(row.exact && row.composite_zero && row.splitting_ok) << k;
    }
    EXPECT_TRUE(rep.all_agree);
    EXPECT_TRUE(rep.isomorphism_ranges_hold);
    EXPECT_TRUE(rep.rows[0].pullback_iso);
    EXPECT_TRUE(rep.rows[2].integration_iso);
    EXPECT_FALSE(rep.convention.empty());
}

TEST(Gysin, SplittingOverT3BothTransverseDegrees) {
    auto M = torus({"1", "sqrt2", "sqrt3"});
    for (int h = 0; h <= 2; ++h) {
        auto rep = product_splitting_dims(M, 1, h);
        EXPECT_TRUE(rep.all_agree) << h;
        EXPECT_TRUE(rep.isomorphism_ranges_hold) << h;
        for (auto& row : rep.rows) EXPECT_EQ(*row.direct, binom(2, h) * (binom(1, row.k) + binom(1, row.k - 1)));
    }
}

TEST(Gysin, HigherSpheresPredictOnly) {
    auto M = base2();
    auto rep = product_splitting_dims(M, 3, 0);
    ASSERT_EQ(rep.rows.size(), 5u);
    std::vector<std::size_t> predicted{1, 1, 0, 1, 1};
    for (int k = 0; k < 5; ++k) {
        EXPECT_FALSE(rep.rows[k].direct.has_value());
        EXPECT_EQ(rep.rows[k].predicted, predicted[k]);
    }
    auto b = product_bundle(M, 2);
    EXPECT_FALSE(b.realized());
    EXPECT_THROW(pullback(b, Form::one(M)), CapabilityError);
    EXPECT_THROW(fiber_integrate(b, Form::one(M)), CapabilityError);
}

TEST(Gysin, RejectsNonTorusBase) {
    EXPECT_THROW(product_bundle(heisenberg()), UnsupportedModel);
    auto M = base2();
    EXPECT_THROW(pullback(Form::one(M), M), UnsupportedModel);
}
