#include <gtest/gtest.h>

#include <map>
#include <random>

#include "foliated/derham.hpp"
#include "support.hpp"

using namespace foliated;
using namespace foliated::derham;
using namespace testing_support;

namespace {

// Independent oracle for d on the torus: rewrite a coframe form in the
// coordinate basis dx_j, differentiate there, and rewrite back.
using CoordForm = std::map<std::pair<std::vector<int>, std::uint32_t>, Scalar>;

CoordForm to_coords(const Form& f) {
    const Model& m = *f.model();
    CoordForm out;
    for (auto& [x, v] : f.terms()) {
        // expand each generator as a combination of dx's
        std::vector<std::pair<std::uint32_t, Scalar>> acc{{0u, v}};
        for (int a = 0; a < m.generator_count(); ++a) {
            if (!(x.mask >> a & 1)) continue;
            std::vector<std::pair<int, Scalar>> g;
            const Generator& gen = m.frame.generators[a];
            if (gen.role == Role::theta) g.push_back({m.pivot, m.alpha[m.pivot].inverse()});
            else {
                g.push_back({gen.index, Scalar(1)});
                g.push_back({m.pivot, -(m.alpha[gen.index] / m.alpha[m.pivot])});
            }
            std::vector<std::pair<std::uint32_t, Scalar>> next;
            for (auto& [mask, c] : acc)
                for (auto& [j, w] : g) {
                    int s = wedge_sign(mask, 1u << j);
                    if (s) next.push_back({mask | (1u << j), Scalar(s) * c * w});
                }
            acc = std::move(next);
        }
        for (auto& [mask, c] : acc) {
            auto& slot = out[{x.mode, mask}];
            slot += c;
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

CoordForm coord_d(const CoordForm& f, int n) {
    CoordForm out;
    for (auto& [key, v] : f) {
        auto& [mode, mask] = key;
        for (int j = 0; j < n; ++j) {
            int s = wedge_sign(1u << j, mask);
            if (!s || mode[j] == 0) continue;
            out[{mode, mask | (1u << j)}] += Scalar(s * mode[j]) * v;
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace

TEST(Differential, ExplicitExamples) {
    auto t = torus({"1", "sqrt2"});
    EXPECT_TRUE(differential(Component::d_F, Form::one(t)).is_zero());
    Form e10 = Form::function(t, {1, 0});
    EXPECT_EQ(differential(Component::d_F, e10), form(t, {1, 0}, 0, 1, {"theta"}));
    Form e01 = Form::function(t, {0, 1});
    EXPECT_EQ(differential(Component::d_F, e01), form(t, {0, 1}, 0, 1, {"theta"}, parse_scalar("sqrt2", t->field)));
    EXPECT_EQ(differential(Component::d_perp, e01), form(t, {0, 1}, 0, 1, {"eta1"}));
    auto g = so3();
    EXPECT_EQ(differential(Component::boundary, Form::generator(g, "e3")), form(g, {}, 0, 1, {"e1", "e2"}, Scalar(-1)));
    EXPECT_THROW(differential("dd", Form::one(t)), ValidationError);
}

TEST(Differential, MatchesCoordinateOracle) {
    for (auto alpha : std::vector<std::vector<std::string>>{{"1", "sqrt2"}, {"2/3", "sqrt2-1", "sqrt3"}, {"0", "sqrt2", "1"}}) {
        auto t = torus(alpha);
        auto pool = window_monomials(*t, {1, 0, 0});
        for (auto& x : pool) {
            Form f = Form::monomial(t, x);
            ASSERT_EQ(to_coords(differential(Component::d, f)), coord_d(to_coords(f), t->n)) << f.to_string();
        }
    }
}

TEST(Differential, BoundaryIsMinusContractionByStructureTensor) {
    for (auto g : {so3(), heisenberg()}) {
        // derivation sending a longitudinal e^k to -sum_{i<j transverse} c^k_ij e^i ^ e^j
        auto tensor = g->structure_tensor();
        for (std::uint32_t mask = 0; mask < (1u << g->generator_count()); ++mask) {
            Form f = Form::monomial(g, {{}, 0, 1, mask});
            Form expected(g);
            int pos = 0;
            for (int a = 0; a < g->generator_count(); ++a) {
                if (!(mask >> a & 1)) continue;
                if (g->frame.generators[a].longitudinal) {
                    std::uint32_t prefix = mask & ((1u << a) - 1), suffix = mask & ~((2u << a) - 1);
                    for (auto& e : tensor) {
                        if (e.k != a) continue;
                        std::uint32_t pm = (1u << e.i) | (1u << e.j);
                        int s1 = wedge_sign(prefix, pm);
                        int s2 = s1 ? wedge_sign(prefix | pm, suffix) : 0;
                        if (s1 && s2) expected.add({{}, 0, 1, prefix | pm | suffix}, Scalar((pos % 2 ? -1 : 1) * -s1 * s2) * e.value);
                    }
                }
                ++pos;
            }
            ASSERT_EQ(differential(Component::boundary, f), expected) << f.to_string();
        }
    }
}

TEST(Differential, LeibnizRule) {
    std::mt19937_64 rng(17);
    for (auto m : {torus({"1", "sqrt2"}), torus({"1", "sqrt2"}, Family::conic_dual), so3(), heisenberg(),
                   torus({"1", "sqrt2", "sqrt3"}, Family::cosphere_circle)}) {
        auto pool = window_monomials(*m, {1, -1, 1});
        for (int k = 0; k < 40; ++k) {
            Form a = random_form(m, pool, rng, 2), b = random_form(m, pool, rng, 2);
            // split a by degree so the sign is well defined
            for (int deg = 0; deg <= m->generator_count(); ++deg) {
                Form ad = degree_project(a, deg);
                for (Component c : {Component::d, Component::d_F, Component::d_perp}) {
                    Form lhs = differential(c, wedge(ad, b));
                    Form rhs = wedge(differential(c, ad), b) + Scalar(deg % 2 ? -1 : 1) * wedge(ad, differential(c, b));
                    ASSERT_EQ(lhs, rhs);
                }
            }
        }
    }
}

TEST(Identities, FlatAndLieModelsPass) {
    auto t = torus({"1", "sqrt2"});
    auto rep = verify_decomposition_identities(t, 20, 1);
    EXPECT_TRUE(rep.all_passed());
    for (auto& x : window_monomials(*t, {1, 0, 0})) EXPECT_TRUE(differential(Component::boundary, Form::monomial(t, x)).is_zero());
    for (auto g : {so3(), heisenberg()}) {
        auto r = verify_decomposition_identities(g, 20, 2);
        for (auto& x : r.results) EXPECT_TRUE(x.passed) << x.name << ": " << x.counterexample;
    }
    bool nonzero = false;
    for (auto& x : window_monomials(*so3(), {0, 0, 0}))
        nonzero = nonzero || !differential(Component::boundary, Form::monomial(so3(), x)).is_zero();
    EXPECT_TRUE(nonzero);
    EXPECT_TRUE(verify_decomposition_identities(torus({"1", "sqrt2"}, Family::conic_dual), 10, 3).all_passed());
    EXPECT_TRUE(verify_decomposition_identities(conic_affine(), 10, 3).all_passed());
}

TEST(Identities, CorruptedJacobiFailsDSquared) {
    ModelOptions bypass;
    bypass.validate = false;
    auto bad = make_model(corrupted_spec(), bypass);
    auto rep = verify_decomposition_identities(bad, 10, 4);
    EXPECT_FALSE(rep.get("d^2 = 0").passed);
    EXPECT_FALSE(rep.get("d^2 = 0").counterexample.empty());
}

TEST(Cohomology, TorusTable) {
    auto t = torus({"1", "sqrt2"});
    auto h = cohomology_dims(t, Component::d_F, {3, 0, 0});
    for (int r = 0; r <= 1; ++r)
        for (int s = 0; s <= 1; ++s) {
            EXPECT_EQ(h.at(r, s), 1u);
            EXPECT_FALSE(h.is_unbounded(r, s));
        }
    EXPECT_TRUE(h.nonresonant_exact);
    EXPECT_FALSE(h.formal);
    EXPECT_TRUE(window_stable(t, Component::d_F, {1, 0, 0}));
}

TEST(Cohomology, CosphereCircleTable) {
    for (auto alpha : std::vector<std::vector<std::string>>{{"1", "sqrt2"}, {"1", "sqrt2", "sqrt3"}}) {
        auto m = torus(alpha, Family::cosphere_circle);
        int q = static_cast<int>(alpha.size()) - 1;
        auto h = cohomology_dims(m, Component::d_F, {1, 0, 0});
        for (int k = 0; k <= 2; ++k)
            for (int s = 0; s <= q; ++s) EXPECT_EQ(h.at(k, s), 2 * binom(2, k) * binom(q, s));
    }
}

TEST(Cohomology, ResonantTorusHasExtraClasses) {
    auto t = torus({"1", "sqrt2", "sqrt2-1"});
    auto h = cohomology_dims(t, Component::d_F, {1, 0, 0});
    EXPECT_GT(h.at(0, 0), 1u);
    EXPECT_EQ(h.at(0, 0), 3u);  // modes 0 and +-(1,-1,1)
    EXPECT_TRUE(h.is_unbounded(0, 0));
    EXPECT_TRUE(h.formal);
    EXPECT_FALSE(window_stable(t, Component::d_F, {1, 0, 0}));
    auto h2 = cohomology_dims(t, Component::d_F, {2, 0, 0});
    EXPECT_EQ(h2.at(0, 0), 5u);
}

TEST(Cohomology, ConicModelPerHomogeneity) {
    auto c = torus({"1", "sqrt2"}, Family::conic_dual);
    auto h0 = cohomology_dims(c, Component::d_F, {1, -2, 2}, 0);
    EXPECT_EQ(h0.at(0, 0), 2u);
    EXPECT_EQ(h0.at(1, 0), 4u);
    EXPECT_EQ(h0.at(2, 0), 2u);
    EXPECT_EQ(h0.at(1, 1), 4u);
    for (int l : {-2, -1, 1, 2}) {
        auto h = cohomology_dims(c, Component::d_F, {1, -2, 2}, l);
        for (auto& [rs, d] : h.dims) EXPECT_EQ(d, 0u) << l;
    }
}

TEST(Cohomology, LieModels) {
    auto h = cohomology_dims(heisenberg(), Component::d_F, {0, 0, 0});
    EXPECT_EQ(h.at(0, 0), 1u);
    EXPECT_EQ(h.at(1, 2), 1u);
    EXPECT_EQ(h.at(0, 1), 2u);
    // d_perp squares to zero on the Heisenberg frame, giving the basic-type table
    auto hp = cohomology_dims(heisenberg(), Component::d_perp, {0, 0, 0});
    EXPECT_EQ(hp.at(0, 0), 1u);
}

TEST(Certificate, Verdicts) {
    auto c = diophantine_certificate({parse_scalar("1", Field(2)), parse_scalar("sqrt2", Field(2))});
    EXPECT_EQ(c.verdict, DiophantineCertificate::Verdict::diophantine);
    EXPECT_EQ(c.N, 1);
    auto r = diophantine_certificate({parse_scalar("1", Field(2)), parse_scalar("sqrt2", Field(2)), parse_scalar("sqrt2-1", Field(2))});
    EXPECT_EQ(r.verdict, DiophantineCertificate::Verdict::resonant);
    EXPECT_EQ(r.witness, (std::vector<long>{1, -1, 1}));
    auto q = diophantine_certificate({Scalar(1), Scalar(2)});
    EXPECT_EQ(q.witness, (std::vector<long>{2, -1}));
    EXPECT_THROW(diophantine_certificate({Scalar(0), Scalar(0)}), ValidationError);
    auto b = diophantine_certificate({parse_scalar("1", Field(2, 3)), parse_scalar("sqrt2", Field(2, 3)), parse_scalar("sqrt3", Field(2, 3))});
    EXPECT_EQ(b.verdict, DiophantineCertificate::Verdict::diophantine);
    EXPECT_EQ(b.N, 3);
}

TEST(Certificate, BoundHoldsOnSampledModes) {
    // |m.alpha|^{-1} <= C |m|_1^N checked numerically with a safety factor
    Field f(2, 3);
    std::vector<Scalar> alpha{parse_scalar("1", f), parse_scalar("sqrt2", f), parse_scalar("1/2*sqrt3", f)};
    auto cert = diophantine_certificate(alpha);
    ASSERT_EQ(cert.verdict, DiophantineCertificate::Verdict::diophantine);
    double C = cert.C.get_d();
    for (int a = -6; a <= 6; ++a)
        for (int b = -6; b <= 6; ++b)
            for (int c = -6; c <= 6; ++c) {
                if (!a && !b && !c) continue;
                double v = std::abs(pair({a, b, c}, alpha).to_complex().real());
                double norm = std::abs(a) + std::abs(b) + std::abs(c);
                ASSERT_LE(1.0 / v, C * std::pow(norm, cert.N) * (1 + 1e-9));
            }
}

TEST(Basic, Dimensions) {
    auto b = basic_cohomology_dims(torus({"1", "sqrt2"}), {2, 0, 0});
    EXPECT_EQ(b.dims, (std::vector<std::size_t>{1, 1}));
    EXPECT_FALSE(b.window_sensitive);
    auto r = basic_cohomology_dims(torus({"1", "0"}), {2, 0, 0});
    EXPECT_EQ(r.dims[0], 1u);
    EXPECT_TRUE(r.window_sensitive);
    auto h = basic_cohomology_dims(heisenberg(), {0, 0, 0});
    EXPECT_EQ(h.dims[0], 1u);
    EXPECT_EQ(h.dims, (std::vector<std::size_t>{1, 2, 1}));
}

TEST(Ordinary, Betti) {
    EXPECT_EQ(ordinary_derham_dims(torus({"1", "sqrt2"})), (std::vector<std::size_t>{1, 2, 1}));
    EXPECT_EQ(ordinary_derham_dims(torus({"1", "sqrt2"}, Family::cosphere_circle)), (std::vector<std::size_t>{2, 6, 6, 2}));
    EXPECT_EQ(ordinary_derham_dims(torus({"1", "sqrt2", "sqrt3"})), (std::vector<std::size_t>{1, 3, 3, 1}));
}
