#pragma once

// Foliated Poisson calculus on the conic model: contraction with
// G = d/dxi ^ T (so that i_G(theta ^ dxi) = -1), the bracket {f,g} = i_G(df ^ dg),
// delta = [i_G, d] and its pieces, the leafwise symplectic star, and
// homogeneous Poisson homology.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "foliated/complex.hpp"
#include "foliated/derham.hpp"
#include "foliated/form.hpp"
#include "foliated/model.hpp"

namespace foliated::poisson {

using derham::IdentityReport;
using derham::IdentityResult;

inline void require_conic(const ModelPtr& m) {
    if (!m || m->family != Family::conic_dual) throw UnsupportedModel("the Poisson calculus needs the conic model");
}

// Leaf generators of the conic model in the order (theta, dxi).
inline std::pair<int, int> leaf_pair(const Model& m) { return {m.theta, m.dxi}; }

struct PoissonTensor {
    ModelPtr model;
    Form omega;              // theta ^ dxi on both components
    int omega_homogeneity = 1;
    int orientation = -1;    // i_G(theta ^ dxi)
};

inline PoissonTensor poisson_tensor(const ModelPtr& m) {
    require_conic(m);
    PoissonTensor p;
    p.model = m;
    p.omega = wedge(Form::generator(m, m->frame.generators[m->theta].name), Form::generator(m, "dxi"));
    for (auto& [x, v] : p.omega.terms())
        if (homogeneity(*m, x) != 1) throw ValidationError("leaf symplectic form is not 1-homogeneous");
    return p;
}

inline Form contract_G(const Form& a) {
    require_conic(a.model());
    const Model& m = *a.model();
    auto [t, x] = leaf_pair(m);
    std::uint32_t pair = (1u << t) | (1u << x);
    int pair_sign = t < x ? 1 : -1;  // g_t ^ g_x = pair_sign * (ordered pair)
    Form out(a.model());
    for (auto& [mono, v] : a.terms()) {
        if ((mono.mask & pair) != pair) continue;
        std::uint32_t rest = mono.mask & ~pair;
        int s = pair_sign * wedge_sign(pair, rest);  // mono = s * g_t ^ g_x ^ rest
        out.add({mono.mode, mono.xi, mono.component, rest}, Scalar(-s) * v);
    }
    return out;
}

inline bool is_scalar(const Form& f) {
    for (auto& [x, v] : f.terms())
        if (x.mask != 0) return false;
    return true;
}

inline Form bracket(const Form& f, const Form& g) {
    require_conic(f.model() ? f.model() : g.model());
    if (!is_scalar(f) || !is_scalar(g)) throw ValidationError("bracket is defined on functions (bidegree (0,0))");
    using derham::Component;
    return contract_G(wedge(derham::differential(Component::d, f), derham::differential(Component::d, g)));
}

enum class Variant { full, F, minus21 };

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::full: return "delta";
        case Variant::F: return "delta_F";
        case Variant::minus21: return "delta_{-2,1}";
    }
    return "?";
}

// Commutator definition: delta = i_G d - d i_G, delta_F = [i_G, d_F], delta_{-2,1} = [i_G, d_perp].
inline Form delta(const Form& a, Variant v = Variant::full) {
    require_conic(a.model());
    using derham::Component;
    Component c = v == Variant::full ? Component::d : v == Variant::F ? Component::d_F : Component::d_perp;
    return contract_G(derham::differential(c, a)) - derham::differential(c, contract_G(a));
}

struct StarConvention {
    int one_form_sign = -1;  // star(theta) = sign * theta; +1 only in negative controls
};

inline Form hodge_star(const Form& a, StarConvention conv = {}) {
    require_conic(a.model());
    const Model& m = *a.model();
    auto [t, x] = leaf_pair(m);
    std::uint32_t pair = (1u << t) | (1u << x);
    int pair_sign = t < x ? 1 : -1;
    std::optional<int> r0;
    Form out(a.model());
    for (auto& [mono, v] : a.terms()) {
        std::uint32_t lam = mono.mask & pair, beta = mono.mask & ~pair;
        int r = __builtin_popcount(mono.mask & m.longitudinal_mask());
        int s = __builtin_popcount(mono.mask) - r;
        int key = r * 64 + s;
        if (r0 && *r0 != key) throw ValidationError("hodge_star needs a form of pure bidegree");
        r0 = key;
        int sign = wedge_sign(lam, beta);  // mono = sign * lam ^ beta
        std::uint32_t image;
        int c;
        if (lam == 0) {
            image = pair;
            c = pair_sign;  // star(1) = g_t ^ g_x
        } else if (lam == pair) {
            image = 0;
            c = pair_sign;  // star(g_t ^ g_x) = 1
        } else {
            image = lam;
            c = conv.one_form_sign;
        }
        int s2 = wedge_sign(image, beta);
        int xi = mono.xi;
        out.add({mono.mode, xi, mono.component, image | beta}, Scalar(sign * c * s2) * v);
    }
    return out;
}

// Star-conjugated route: (-1)^(r+1) star d_F star on each longitudinal degree r.
inline Form delta_F_via_star(const Form& a, StarConvention conv = {}) {
    require_conic(a.model());
    const Model& m = *a.model();
    Form out(a.model());
    for (int r = 0; r <= m.leaf_dim(); ++r)
        for (int s = 0; s <= m.codim(); ++s) {
            Form p = bidegree_project(a, r, s);
            if (p.is_zero()) continue;
            Form v = hodge_star(derham::differential(derham::Component::d_F, hodge_star(p, conv)), conv);
            out += Scalar((r + 1) % 2 ? -1 : 1) * v;
        }
    return out;
}

// Second route for the full delta: star-conjugated delta_F plus the d_perp commutator.
inline Form delta_via_star(const Form& a, StarConvention conv = {}) {
    return delta_F_via_star(a, conv) + delta(a, Variant::minus21);
}

inline IdentityReport verify_star_delta_identity(const ModelPtr& m, const ModeWindow& w, StarConvention conv = {}) {
    require_conic(m);
    w.check();
    struct Check {
        std::string name;
        std::function<std::optional<std::string>(const Form&)> fails;
    };
    auto nonzero = [](const Form& f) -> std::optional<std::string> {
        if (f.is_zero()) return std::nullopt;
        return f.to_string();
    };
    const Model& model = *m;
    std::vector<Check> checks{
        {"delta_F = (-1)^(r+1) star d_F star", [&](const Form& f) { return nonzero(delta(f, Variant::F) - delta_F_via_star(f, conv)); }},
        {"delta = delta_F + delta_{-2,1}",
         [&](const Form& f) { return nonzero(delta(f) - delta(f, Variant::F) - delta(f, Variant::minus21)); }},
        {"delta (commutator) = delta (star route)", [&](const Form& f) { return nonzero(delta(f) - delta_via_star(f, conv)); }},
        {"delta^2 = 0", [&](const Form& f) { return nonzero(delta(delta(f))); }},
        {"delta_F^2 = 0", [&](const Form& f) { return nonzero(delta(delta(f, Variant::F), Variant::F)); }},
        {"delta_{-2,1}^2 = 0", [&](const Form& f) { return nonzero(delta(delta(f, Variant::minus21), Variant::minus21)); }},
        {"delta_F delta_{-2,1} + delta_{-2,1} delta_F = 0",
         [&](const Form& f) {
             return nonzero(delta(delta(f, Variant::minus21), Variant::F) + delta(delta(f, Variant::F), Variant::minus21));
         }},
        {"star^2 = id", [&](const Form& f) { return nonzero(hodge_star(hodge_star(f, conv), conv) - f); }},
        {"star maps homogeneity l to l + p - r",
         [&](const Form& f) -> std::optional<std::string> {
             auto& [x, v] = *f.terms().begin();
             int r = bidegree(model, x.mask).r;
             int want = homogeneity(model, x) + 1 - r;
             Form image = hodge_star(f, conv);
             for (auto& [y, c] : image.terms())
                 if (homogeneity(model, y) != want) return f.to_string();
             return std::nullopt;
         }},
        {"delta maps homogeneity l to l - 1",
         [&](const Form& f) -> std::optional<std::string> {
             int l = homogeneity(model, f.terms().begin()->first);
             Form image = delta(f);
             for (auto& [y, c] : image.terms())
                 if (homogeneity(model, y) != l - 1) return f.to_string();
             return std::nullopt;
         }},
    };
    IdentityReport rep;
    auto pool = derham::window_monomials(model, w);
    for (auto& c : checks) {
        IdentityResult r;
        r.name = c.name;
        for (auto& x : pool) {
            ++r.checked;
            auto bad = c.fails(Form::monomial(m, x));
            if (bad) {
                r.passed = false;
                r.counterexample = monomial_name(model, x) + "  |->  " + *bad;
                break;
            }
        }
        rep.results.push_back(std::move(r));
    }
    return rep;
}

// ----------------------------------------------------------------------------
// Bracket properties and the expansion of delta_F on f0 d_F f1 ^ ... ^ d_F fk

inline Form random_function(const ModelPtr& m, std::mt19937_64& rng, int bound = 1) {
    std::uniform_int_distribution<int> mode(-bound, bound), xi(-2, 2), comp(0, 1);
    Form f(m);
    for (int t = 0; t < 2; ++t) {
        FormMonomial x;
        x.mode.resize(m->mode_size);
        for (auto& v : x.mode) v = mode(rng);
        x.xi = xi(rng);
        x.component = m->components == 2 && comp(rng) ? -1 : 1;
        f.add(x, derham::random_scalar(*m, rng));
    }
    return f;
}

struct ExpansionReport {
    IdentityReport identities;
    int global_sign = 1;  // sign relating the delta_F side to the bracket expansion, if uniform
};

inline ExpansionReport verify_bracket_expansion(const ModelPtr& m, std::size_t samples = 20, std::uint64_t seed = 1) {
    require_conic(m);
    using derham::Component;
    std::mt19937_64 rng(seed);
    auto dF = [](const Form& f) { return derham::differential(Component::d_F, f); };
    IdentityResult anti, jac, one, two;
    anti.name = "{f,g} = -{g,f}";
    jac.name = "Jacobi identity for {,}";
    one.name = "delta_F(f0 d_F f1) = {f0,f1}";
    two.name = "delta_F(f0 d_F f1 ^ d_F f2) = {f0,f1} d_F f2 - {f0,f2} d_F f1 - f0 d_F{f1,f2}";
    int sign_seen = 0;
    bool uniform = true;
    for (std::size_t k = 0; k < samples; ++k) {
        Form f0 = random_function(m, rng), f1 = random_function(m, rng), f2 = random_function(m, rng);
        auto record = [](IdentityResult& r, const Form& residual, const Form& input) {
            ++r.checked;
            if (!residual.is_zero() && r.passed) {
                r.passed = false;
                r.counterexample = input.to_string();
            }
        };
        record(anti, bracket(f0, f1) + bracket(f1, f0), f0);
        record(jac, bracket(f0, bracket(f1, f2)) + bracket(f1, bracket(f2, f0)) + bracket(f2, bracket(f0, f1)), f0);
        Form in1 = wedge(f0, dF(f1));
        record(one, delta(in1, Variant::F) - bracket(f0, f1), in1);
        Form in2 = wedge(f0, wedge(dF(f1), dF(f2)));
        Form lhs = delta(in2, Variant::F);
        Form rhs = wedge(bracket(f0, f1), dF(f2)) - wedge(bracket(f0, f2), dF(f1)) - wedge(f0, dF(bracket(f1, f2)));
        record(two, lhs - rhs, in2);
        if (!rhs.is_zero()) {
            int s = (lhs == rhs) ? 1 : (lhs == -rhs) ? -1 : 0;
            if (s == 0 || (sign_seen && s != sign_seen)) uniform = false;
            if (!sign_seen) sign_seen = s;
        }
    }
    ExpansionReport rep;
    rep.identities.results = {anti, jac, one, two};
    rep.global_sign = uniform && sign_seen ? sign_seen : 0;
    return rep;
}

// ----------------------------------------------------------------------------
// Homogeneous Poisson homology

struct PoissonDims {
    std::size_t total = 0;
    std::size_t plus = 0;
    std::size_t minus = 0;
    std::string note;
};

namespace detail {

inline std::vector<FormMonomial> homogeneous_piece(const Model& m, const Block& b, int k, int l) {
    if (k < 0 || k > m.generator_count()) return {};
    return total_piece(m, b, k, l);
}

}  // namespace detail

// dim ker(delta: Omega^k_l -> Omega^{k-1}_{l-1}) / delta(Omega^{k+1}_{l+1}), per block.
inline PoissonDims homogeneous_poisson_dims(const ModelPtr& m, int k, int l, const ModeWindow& w, Variant v = Variant::full) {
    require_conic(m);
    w.check();
    PoissonDims out;
    if (k < 0 || k > m->generator_count()) {
        out.note = "degree outside 0.." + std::to_string(m->generator_count());
        return out;
    }
    LinearOp d = [v](const Form& f) { return delta(f, v); };
    for (auto& b : enumerate_blocks(*m, w)) {
        Basis lo(detail::homogeneous_piece(*m, b, k - 1, l - 1));
        Basis mid(detail::homogeneous_piece(*m, b, k, l));
        Basis hi(detail::homogeneous_piece(*m, b, k + 1, l + 1));
        std::size_t h = homology_dim(operator_matrix(m, d, mid, lo), operator_matrix(m, d, hi, mid));
        out.total += h;
        (b.component > 0 ? out.plus : out.minus) += h;
    }
    return out;
}

// Bigraded delta_F homology H^{delta_F}_{r,s}(X,F)_l.
inline PoissonDims bigraded_poisson_dims(const ModelPtr& m, int r, int s, int l, const ModeWindow& w) {
    require_conic(m);
    w.check();
    PoissonDims out;
    if (r < 0 || s < 0 || r > m->leaf_dim() || s > m->codim()) {
        out.note = "bidegree outside the leaf and transverse ranges";
        return out;
    }
    LinearOp d = [](const Form& f) { return delta(f, Variant::F); };
    for (auto& b : enumerate_blocks(*m, w)) {
        Basis lo(piece(*m, b, r - 1, s, l - 1));
        Basis mid(piece(*m, b, r, s, l));
        Basis hi(piece(*m, b, r + 1, s, l + 1));
        std::size_t h = homology_dim(operator_matrix(m, d, mid, lo), operator_matrix(m, d, hi, mid));
        out.total += h;
        (b.component > 0 ? out.plus : out.minus) += h;
    }
    return out;
}

struct HomCanRow {
    int k = 0;
    int l = 0;
    std::size_t delta = 0;        // (a) direct delta-homology
    std::size_t delta_F = 0;      // (b) direct delta_F-homology
    std::size_t cosphere = 0;     // (c) d_F-cohomology of the cosphere-circle model at (p - l, k - l - p)
    int index_r = 0;
    int index_s = 0;
    bool agree = true;
};

struct HomCanReport {
    std::vector<HomCanRow> rows;
    bool all_agree = true;
    bool vanishing_holds = true;  // (a) and (b) vanish for |l| > p
    bool formal = false;
    std::optional<DiophantineCertificate> certificate;
};

inline HomCanReport verify_hom_can(const ModelPtr& m, const ModeWindow& w) {
    require_conic(m);
    if (!m->is_torus_based()) throw UnsupportedModel("the three-way comparison needs a conic model over a Kronecker torus");
    w.check();
    ModelPtr torus = m->base;
    ModelPtr cs = derive(torus, Family::cosphere_circle);
    auto csd = derham::cohomology_dims(cs, derham::Component::d_F, w);
    HomCanReport rep;
    rep.certificate = derham::certificate_for(*m);
    rep.formal = rep.certificate && rep.certificate->verdict != DiophantineCertificate::Verdict::diophantine;
    const int p = m->leaf_dim() / 2;
    const int top = m->generator_count();
    for (int l = w.l_min; l <= w.l_max; ++l)
        for (int k = 0; k <= top; ++k) {
            HomCanRow row;
            row.k = k;
            row.l = l;
            row.delta = homogeneous_poisson_dims(m, k, l, w, Variant::full).total;
            row.delta_F = homogeneous_poisson_dims(m, k, l, w, Variant::F).total;
            row.index_r = p - l;
            row.index_s = k - l - p;
            bool in_range = std::abs(l) <= p;
            row.cosphere = in_range ? csd.at(row.index_r, row.index_s) : 0;
            row.agree = row.delta == row.delta_F && row.delta == row.cosphere;
            if (!row.agree) rep.all_agree = false;
            if (!in_range && (row.delta || row.delta_F)) rep.vanishing_holds = false;
            rep.rows.push_back(row);
        }
    return rep;
}

}  // namespace foliated::poisson
