#include <gtest/gtest.h>

#include "foliated/hochschild.hpp"
#include "support.hpp"

using namespace foliated;
using namespace foliated::hochschild;
using namespace testing_support;

namespace {

ModelPtr t2() { return torus({"1", "sqrt2"}); }
ModelPtr t3() { return torus({"1", "sqrt2", "sqrt3"}); }

}  // namespace

TEST(Hochschild, E2Table) {
    auto e2 = e2_dims(t2());
    EXPECT_EQ(at(e2, -1, 1), 2u);
    for (int h = 0; h <= 4; ++h) EXPECT_EQ(at(e2, 2, h), 0u);
    std::size_t s = 0;
    for (auto& [key, v] : e2)
        if (key.first + key.second == 1) s += v;
    EXPECT_EQ(s, 6u);
    // each total degree l carries 2 C(3, l)
    for (int l = 0; l <= 3; ++l) {
        std::size_t tot = 0;
        for (auto& [key, v] : e2)
            if (key.first + key.second == l) tot += v;
        EXPECT_EQ(tot, 2 * binom(3, l)) << l;
    }
}

TEST(Hochschild, HHUnderCollapse) {
    auto hh = hh_dims_assuming_collapse(t2());
    ASSERT_EQ(hh.size(), 5u);
    EXPECT_EQ(std::vector<std::size_t>(hh.begin(), hh.begin() + 4), (std::vector<std::size_t>{2, 6, 6, 2}));
    EXPECT_EQ(hh[4], 0u);
    auto hh3 = hh_dims_assuming_collapse(t3());
    ASSERT_EQ(hh3.size(), 6u);
    EXPECT_EQ(std::vector<std::size_t>(hh3.begin(), hh3.begin() + 5), (std::vector<std::size_t>{2, 8, 12, 8, 2}));
    EXPECT_EQ(hh3[5], 0u);
}

TEST(Hochschild, TracesAndTop) {
    auto t = hh0_and_top(t2());
    EXPECT_EQ(t.hh0, 2u);
    EXPECT_EQ(t.hhtop, 1u);
    EXPECT_NE(t.identification.find("not applicable (p = 1)"), std::string::npos);
}

TEST(Hochschild, PeriodicCyclic) {
    auto a = hp_dims(t2());
    EXPECT_EQ(a.hp0, 8u);
    EXPECT_EQ(a.hp1, 8u);
    auto b = hp_dims(t3());
    EXPECT_EQ(b.hp0, 16u);
    EXPECT_EQ(b.hp1, 16u);
    EXPECT_THROW(hp_dims(heisenberg()), UnsupportedModel);
}

TEST(Hochschild, E1ToE2MatchesClosedForm) {
    auto rep = e1_to_e2(t2(), {1, -2, 2});
    EXPECT_TRUE(rep.all_agree);
    EXPECT_TRUE(rep.window_stable);
    bool saw_pp = false;
    for (auto& c : rep.cells) {
        if (c.k == 1 && c.h == 1) {
            EXPECT_EQ(c.e2, 2u);
            saw_pp = true;
        }
        if (c.k + c.h > 3) {
            EXPECT_EQ(c.e2, 0u);
            EXPECT_EQ(c.closed, 0u);
        }
    }
    EXPECT_TRUE(saw_pp);
    EXPECT_THROW(e1_to_e2(t2(), {1, 0, 0}), WindowError);
}

TEST(Hochschild, ReportInvariants) {
    for (auto m : {t2(), t3()}) {
        auto r = hochschild_report(m);
        EXPECT_TRUE(r.vanishing_bound_holds);
        EXPECT_TRUE(r.totals_consistent);
        ASSERT_TRUE(r.certificate.has_value());
    }
}
