#include <gtest/gtest.h>

#include "foliated/form.hpp"
#include "foliated/model.hpp"
#include "support.hpp"

using namespace foliated;
using namespace testing_support;

TEST(Model, ResonanceLattices) {
    auto t2 = torus({"1", "sqrt2"});
    EXPECT_TRUE(t2->resonance.empty());
    EXPECT_EQ(t2->leaf_dim(), 1);
    EXPECT_EQ(t2->codim(), 1);
    auto t3 = torus({"1", "sqrt2", "sqrt2-1"});
    ASSERT_EQ(t3->resonance.size(), 1u);
    EXPECT_EQ(t3->resonance[0], (IntVec{1, -1, 1}));
    EXPECT_TRUE(t3->is_resonant({2, -2, 2}));
    EXPECT_FALSE(t3->is_resonant({1, 0, 0}));
}

TEST(Model, ValidationErrors) {
    EXPECT_THROW(torus({"0", "0"}), ValidationError);
    EXPECT_THROW(make_model(corrupted_spec()), ValidationError);
    // F = span(e1, e2) is not closed in so(3)
    EXPECT_THROW(make_model(lie_spec(3, {{1, 2, 3, 1}, {2, 3, 1, 1}, {3, 1, 2, 1}}, {1, 2})), ValidationError);
    EXPECT_THROW(torus({"1", "i"}), ValidationError);
    ModelOptions bypass;
    bypass.validate = false;
    EXPECT_NO_THROW(make_model(corrupted_spec(), bypass));
}

TEST(Model, FrameNamesAndCounts) {
    auto t = torus({"1", "sqrt2", "sqrt3"});
    EXPECT_EQ(t->generator_count(), 3);
    EXPECT_EQ(t->frame.generators[0].name, "theta");
    EXPECT_EQ(t->frame.generators[2].name, "eta2");
    auto c = torus({"1", "sqrt2"}, Family::conic_dual);
    EXPECT_EQ(c->leaf_dim(), 2);
    EXPECT_EQ(c->components, 2);
    auto s = torus({"1", "sqrt2"}, Family::cosphere_circle);
    EXPECT_EQ(s->leaf_dim(), 2);
    EXPECT_EQ(s->mode_size, 3);
    auto z = torus({"0", "1"});
    EXPECT_EQ(z->pivot, 1);
    EXPECT_EQ(so3()->structure_tensor().size(), 1u);
}

TEST(Form, WedgeExamples) {
    auto t = torus({"1", "sqrt2"});
    Form th = Form::generator(t, "theta");
    Form eta = Form::generator(t, "eta1");
    EXPECT_TRUE(wedge(th, th).is_zero());
    EXPECT_EQ(wedge(th, eta), -wedge(eta, th));
    Form a = form(t, {1, 0}, 0, 1, {"theta"});
    Form b = form(t, {0, 2}, 0, 1, {"eta1"});
    EXPECT_EQ(wedge(a, b), form(t, {1, 2}, 0, 1, {"theta", "eta1"}));
}

TEST(Form, WedgeModelMismatch) {
    auto a = torus({"1", "sqrt2"});
    auto b = torus({"1", "sqrt2"});
    EXPECT_THROW(wedge(Form::generator(a, "theta"), Form::generator(b, "theta")), ModelMismatch);
}

TEST(Form, Projections) {
    auto t = torus({"1", "sqrt2"});
    Form th = Form::generator(t, "theta"), eta = Form::generator(t, "eta1");
    Form te = wedge(th, eta);
    EXPECT_EQ(bidegree_project(te, 1, 1), te);
    EXPECT_TRUE(bidegree_project(te, 2, 0).is_zero());
    EXPECT_EQ(bidegree_project(th + eta, 1, 0), th);
    Form sum(t);
    Form mix = th + eta + te + Form::one(t);
    for (int r = 0; r <= 1; ++r)
        for (int s = 0; s <= 1; ++s) {
            Form p = bidegree_project(mix, r, s);
            EXPECT_EQ(bidegree_project(p, r, s), p);
            sum += p;
        }
    EXPECT_EQ(sum, mix);
}

TEST(Form, Homogeneity) {
    auto c = torus({"1", "sqrt2"}, Family::conic_dual);
    auto h1 = homogeneity_decompose(form(c, {}, 2, 1, {"theta"}));
    ASSERT_EQ(h1.size(), 1u);
    EXPECT_EQ(h1.begin()->first, 2);
    auto h2 = homogeneity_decompose(form(c, {}, 1, 1, {"dxi"}));
    EXPECT_EQ(h2.begin()->first, 2);
    auto h3 = homogeneity_decompose(form(c, {}, 1, 1, {"theta"}) + form(c, {}, 0, 1, {"dxi"}));
    ASSERT_EQ(h3.size(), 1u);
    EXPECT_EQ(h3.begin()->first, 1);
    EXPECT_THROW(homogeneity_decompose(Form::one(torus({"1", "sqrt2"}))), UnsupportedModel);
    // degree of a product is the sum of degrees
    Form x = form(c, {1, 0}, -2, 1, {"dxi"}), y = form(c, {0, 1}, 3, 1, {"theta"});
    auto hp = homogeneity_decompose(wedge(x, y));
    EXPECT_EQ(hp.begin()->first, -1 + 3);
}

TEST(Form, GeneratorsAnticommute) {
    auto c = torus({"1", "sqrt2", "sqrt3"}, Family::cosphere_circle);
    for (auto& g : c->frame.generators)
        for (auto& h : c->frame.generators) {
            Form a = Form::generator(c, g.name), b = Form::generator(c, h.name);
            EXPECT_EQ(wedge(a, b), -wedge(b, a));
        }
    Form odd = Form::generator(c, "theta") + Scalar(3) * Form::generator(c, "eta2") +
               wedge(wedge(Form::generator(c, "theta"), Form::generator(c, "dphi")), Form::generator(c, "eta1"));
    EXPECT_TRUE(wedge(odd, odd).is_zero());
}
