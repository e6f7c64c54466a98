#pragma once

// d = d_F + d_perp + boundary on the model families, and the cohomology of
// the resulting complexes on a finite Fourier window.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "foliated/complex.hpp"
#include "foliated/diophantine.hpp"
#include "foliated/form.hpp"
#include "foliated/linalg.hpp"
#include "foliated/model.hpp"

namespace foliated::derham {

enum class Component { d, d_F, d_perp, boundary };

inline std::string component_name(Component c) {
    switch (c) {
        case Component::d: return "d";
        case Component::d_F: return "d_F";
        case Component::d_perp: return "d_perp";
        case Component::boundary: return "boundary";
    }
    return "?";
}

inline Component component_from_name(const std::string& s) {
    for (Component c : {Component::d, Component::d_F, Component::d_perp, Component::boundary})
        if (component_name(c) == s) return c;
    throw ValidationError("unknown differential component '" + s + "'");
}

namespace detail {

inline bool keep(Component c, int dr, int ds) {
    switch (c) {
        case Component::d: return true;
        case Component::d_F: return dr == 1 && ds == 0;
        case Component::d_perp: return dr == 0 && ds == 1;
        case Component::boundary: return dr == -1 && ds == 2;
    }
    return false;
}

inline void check_shift(int dr, int ds) {
    if ((dr == 1 && ds == 0) || (dr == 0 && ds == 1) || (dr == -1 && ds == 2)) return;
    throw ValidationError("differential has a bidegree (" + std::to_string(dr) + "," + std::to_string(ds) +
                          ") component; the foliation is not involutive");
}

// Derivative of e_mode * xi^xi along the dual frame vector of generator a,
// returned as (coefficient, new xi-degree).
inline std::pair<Scalar, int> frame_derivative(const Model& m, const FormMonomial& x, int a, const Scalar& pairing) {
    const Generator& g = m.frame.generators[a];
    switch (g.role) {
        case Role::theta: return {m.is_torus_based() ? pairing : Scalar(), x.xi};
        case Role::eta: return {Scalar(x.mode[g.index]), x.xi};
        case Role::dphi: return {Scalar(x.mode[m.n]), x.xi};
        case Role::dxi: return {Scalar(x.xi), x.xi - 1};
        case Role::lie: return {Scalar(), x.xi};
    }
    return {Scalar(), x.xi};
}

}  // namespace detail

// Accumulate c * comp(x) into out.
inline void differential_monomial(const Model& m, Component comp, const FormMonomial& x, const Scalar& c, Form& out) {
    Bidegree b0 = bidegree(m, x.mask);
    Scalar pairing = m.is_torus_based() ? m.pairing(x.mode) : Scalar();
    for (int a = 0; a < m.generator_count(); ++a) {
        if (x.mask >> a & 1) continue;
        auto [coef, xi] = detail::frame_derivative(m, x, a, pairing);
        if (coef.is_zero()) continue;
        int sign = wedge_sign(1u << a, x.mask);
        const Generator& g = m.frame.generators[a];
        int dr = g.longitudinal ? 1 : 0;
        if (!detail::keep(comp, dr, 1 - dr)) continue;
        out.add({x.mode, xi, x.component, x.mask | (1u << a)}, Scalar(sign) * coef * c);
    }
    for (auto& [mask, v] : m.mask_d[x.mask]) {
        Bidegree b1 = bidegree(m, mask);
        int dr = b1.r - b0.r, ds = b1.s - b0.s;
        detail::check_shift(dr, ds);
        if (!detail::keep(comp, dr, ds)) continue;
        out.add({x.mode, x.xi, x.component, mask}, v * c);
    }
}

inline Form differential(Component comp, const Form& a) {
    Form out(a.model());
    if (!a.model()) return out;
    for (auto& [x, v] : a.terms()) differential_monomial(*a.model(), comp, x, v, out);
    return out;
}

inline Form differential(const std::string& comp, const Form& a) { return differential(component_from_name(comp), a); }

inline LinearOp op(Component c) {
    return [c](const Form& f) { return differential(c, f); };
}

// ----------------------------------------------------------------------------
// Identity suite

struct IdentityResult {
    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::string counterexample;
};

struct IdentityReport {
    std::vector<IdentityResult> results;
    bool all_passed() const {
        for (auto& r : results)
            if (!r.passed) return false;
        return true;
    }
    const IdentityResult& get(const std::string& name) const {
        for (auto& r : results)
            if (r.name == name) return r;
        throw std::out_of_range("no identity named " + name);
    }
};

// Every basis monomial of the model in the window (all degrees, all homogeneities).
inline std::vector<FormMonomial> window_monomials(const Model& m, const ModeWindow& w) {
    std::vector<FormMonomial> out;
    std::vector<int> ls{0};
    if (m.dxi >= 0) {
        ls.clear();
        for (int l = w.l_min; l <= w.l_max; ++l) ls.push_back(l);
    }
    for (auto& b : enumerate_blocks(m, w))
        for (int l : ls)
            for (std::uint32_t mask = 0; mask < (1u << m.generator_count()); ++mask) {
                int xi = m.dxi >= 0 ? l - static_cast<int>(mask >> m.dxi & 1) : 0;
                out.push_back({b.mode, xi, b.component, mask});
            }
    return out;
}

// Small random scalar drawn from the model's field.
inline Scalar random_scalar(const Model& m, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-3, 3);
    Scalar s(num(rng));
    if (m.field.d1) s += Scalar(num(rng)) * Scalar::sqrt(m.field.d1, m.field);
    if (m.field.d2) s += Scalar(num(rng)) * Scalar::sqrt(m.field.d2, m.field);
    return s;
}

inline Form random_form(const ModelPtr& m, const std::vector<FormMonomial>& pool, std::mt19937_64& rng, int terms = 4) {
    Form f(m);
    if (pool.empty()) return f;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int k = 0; k < terms; ++k) f.add(pool[pick(rng)], random_scalar(*m, rng));
    return f;
}

inline IdentityReport verify_decomposition_identities(const ModelPtr& m, std::size_t samples = 20, std::uint64_t seed = 1,
                                                      ModeWindow w = {1, -1, 1}) {
    using C = Component;
    auto D = [](C c) { return op(c); };
    struct Check {
        std::string name;
        std::function<Form(const Form&)> lhs;
    };
    auto comp = [](LinearOp a, LinearOp b) { return [a, b](const Form& f) { return a(b(f)); }; };
    auto sum = [](std::vector<LinearOp> ops) {
        return [ops](const Form& f) {
            Form r(f.model());
            for (auto& o : ops) r += o(f);
            return r;
        };
    };
    std::vector<Check> checks{
        {"d_F^2 = 0", comp(D(C::d_F), D(C::d_F))},
        {"boundary^2 = 0", comp(D(C::boundary), D(C::boundary))},
        {"d_perp^2 + boundary d_F + d_F boundary = 0",
         sum({comp(D(C::d_perp), D(C::d_perp)), comp(D(C::boundary), D(C::d_F)), comp(D(C::d_F), D(C::boundary))})},
        {"d_F d_perp + d_perp d_F = 0", sum({comp(D(C::d_F), D(C::d_perp)), comp(D(C::d_perp), D(C::d_F))})},
        {"boundary d_perp + d_perp boundary = 0", sum({comp(D(C::boundary), D(C::d_perp)), comp(D(C::d_perp), D(C::boundary))})},
        {"d^2 = 0", comp(D(C::d), D(C::d))},
        {"d = d_F + d_perp + boundary", [&](const Form& f) {
             return differential(C::d, f) - differential(C::d_F, f) - differential(C::d_perp, f) - differential(C::boundary, f);
         }},
    };
    auto pool = window_monomials(*m, w);
    std::vector<Form> inputs;
    for (auto& x : pool) inputs.push_back(Form::monomial(m, x));
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < samples; ++k) inputs.push_back(random_form(m, pool, rng));
    IdentityReport rep;
    for (auto& c : checks) {
        IdentityResult r;
        r.name = c.name;
        for (auto& f : inputs) {
            ++r.checked;
            Form v = c.lhs(f);
            if (!v.is_zero()) {
                r.passed = false;
                r.counterexample = f.to_string() + "  |->  " + v.to_string();
                break;
            }
        }
        rep.results.push_back(std::move(r));
    }
    return rep;
}

// ----------------------------------------------------------------------------
// Cohomology

struct BigradedDims {
    std::map<Bidegree, std::size_t> dims;
    std::map<Bidegree, bool> unbounded;
    std::optional<int> l;
    std::string family;
    std::string op;
    int leaf_dim = 0;
    int codim = 0;
    std::optional<DiophantineCertificate> certificate;
    bool formal = false;             // slope not certified Diophantine
    bool nonresonant_exact = true;   // every non-resonant nonzero mode block was acyclic
    std::size_t blocks = 0;

    std::size_t at(int r, int s) const {
        auto it = dims.find({r, s});
        return it == dims.end() ? 0 : it->second;
    }
    bool is_unbounded(int r, int s) const {
        auto it = unbounded.find({r, s});
        return it != unbounded.end() && it->second;
    }
    std::size_t total(int k) const {
        std::size_t t = 0;
        for (int r = 0; r <= k; ++r) t += at(r, k - r);
        return t;
    }
};

inline Bidegree shift_of(Component c) {
    switch (c) {
        case Component::d_F: return {1, 0};
        case Component::d_perp: return {0, 1};
        case Component::boundary: return {-1, 2};
        default: throw ValidationError("the full differential is not bihomogeneous; use ordinary_derham_dims");
    }
}

// Dimensions of the cohomology of one bihomogeneous operator on a single block and homogeneity.
inline std::map<Bidegree, std::size_t> block_cohomology(const ModelPtr& m, Component c, const Block& b, int l) {
    Bidegree sh = shift_of(c);
    int P = m->leaf_dim(), Q = m->codim();
    std::map<Bidegree, Basis> bases;
    auto basis = [&](int r, int s) -> const Basis& {
        auto it = bases.find({r, s});
        if (it != bases.end()) return it->second;
        return bases.emplace(Bidegree{r, s}, Basis(piece(*m, b, r, s, l))).first->second;
    };
    std::map<Bidegree, SparseMatrix> mats;
    auto matrix = [&](int r, int s) -> const SparseMatrix& {
        auto it = mats.find({r, s});
        if (it != mats.end()) return it->second;
        return mats.emplace(Bidegree{r, s}, operator_matrix(m, op(c), basis(r, s), basis(r + sh.r, s + sh.s))).first->second;
    };
    std::map<Bidegree, std::size_t> out;
    for (int r = 0; r <= P; ++r)
        for (int s = 0; s <= Q; ++s) out[{r, s}] = homology_dim(matrix(r, s), matrix(r - sh.r, s - sh.s));
    return out;
}

inline std::optional<DiophantineCertificate> certificate_for(const Model& m) {
    if (!m.is_torus_based()) return std::nullopt;
    return diophantine_certificate(m.alpha);
}

inline BigradedDims cohomology_dims(const ModelPtr& m, Component c, const ModeWindow& w, std::optional<int> l = std::nullopt) {
    w.check();
    BigradedDims out;
    out.family = family_name(m->family);
    out.op = component_name(c);
    out.leaf_dim = m->leaf_dim();
    out.codim = m->codim();
    out.certificate = certificate_for(*m);
    out.formal = out.certificate && out.certificate->verdict != DiophantineCertificate::Verdict::diophantine;
    std::vector<int> ls{0};
    if (m->dxi >= 0) {
        ls.clear();
        if (l) {
            ls.push_back(*l);
        } else {
            for (int k = w.l_min; k <= w.l_max; ++k) ls.push_back(k);
        }
        out.l = l;
    } else if (l && *l != 0) {
        throw UnsupportedModel("homogeneity index requires the conic model");
    }
    for (int r = 0; r <= out.leaf_dim; ++r)
        for (int s = 0; s <= out.codim; ++s) {
            out.dims[{r, s}] = 0;
            out.unbounded[{r, s}] = false;
        }
    for (auto& b : enumerate_blocks(*m, w)) {
        bool zero_mode = true;
        for (int x : b.mode) zero_mode = zero_mode && x == 0;
        bool resonant = m->has_modes() ? m->is_resonant(b.mode) : true;
        for (int lv : ls) {
            ++out.blocks;
            auto h = block_cohomology(m, c, b, lv);
            for (auto& [rs, d] : h) {
                out.dims[rs] += d;
                if (d == 0 || zero_mode) continue;
                if (resonant)
                    out.unbounded[rs] = true;
                else if (c == Component::d_F)
                    out.nonresonant_exact = false;
            }
        }
    }
    return out;
}

// True when the dims agree at bound B and B + 2.
inline bool window_stable(const ModelPtr& m, Component c, const ModeWindow& w, std::optional<int> l = std::nullopt) {
    ModeWindow wider = w;
    wider.bound += 2;
    return cohomology_dims(m, c, w, l).dims == cohomology_dims(m, c, wider, l).dims;
}

struct BasicDims {
    std::vector<std::size_t> dims;
    bool window_sensitive = false;  // basic forms exist on nonzero modes, so their count grows with the window
};

inline BasicDims basic_cohomology_dims(const ModelPtr& m, const ModeWindow& w) {
    w.check();
    if (m->dxi >= 0) throw UnsupportedModel("basic cohomology is not provided for the conic model");
    int Q = m->codim();
    BasicDims out;
    out.dims.assign(Q + 1, 0);
    for (auto& b : enumerate_blocks(*m, w)) {
        bool zero_mode = true;
        for (int x : b.mode) zero_mode = zero_mode && x == 0;
        // basic forms of degree s: kernel of d_F on bidegree (0, s)
        std::vector<Basis> bases;
        std::vector<std::vector<SparseVec>> kernels;
        for (int s = 0; s <= Q; ++s) {
            bases.emplace_back(piece(*m, b, 0, s));
            Basis target(piece(*m, b, 1, s));
            auto k = rank_kernel(operator_matrix(m, op(Component::d_F), bases.back(), target)).kernel;
            if (!k.empty() && !zero_mode) out.window_sensitive = true;
            kernels.push_back(std::move(k));
        }
        // d_perp restricted to basic forms
        std::vector<std::size_t> ranks(Q + 2, 0);
        for (int s = 0; s < Q; ++s) {
            SparseMatrix dp = operator_matrix(m, op(Component::d_perp), bases[s], bases[s + 1]);
            std::vector<SparseVec> images;
            for (auto& v : kernels[s]) images.push_back(dp.apply(v));
            // images must stay basic
            std::vector<SparseVec> both = kernels[s + 1];
            std::size_t rk = span_rank(both, bases[s + 1].size());
            both.insert(both.end(), images.begin(), images.end());
            if (span_rank(both, bases[s + 1].size()) != rk) throw ComplexViolation("d_perp does not preserve basic forms");
            ranks[s + 1] = span_rank(images, bases[s + 1].size());
        }
        for (int s = 0; s <= Q; ++s) {
            std::size_t next = s < Q ? ranks[s + 1] : 0;
            out.dims[s] += kernels[s].size() - next - ranks[s];
        }
    }
    return out;
}

// Betti numbers from the full differential, per mode; nonzero modes must be acyclic.
inline std::vector<std::size_t> ordinary_derham_dims(const ModelPtr& m, int bound = 1) {
    if (m->dxi >= 0) throw UnsupportedModel("ordinary de Rham numbers are not provided for the conic model");
    int N = m->generator_count();
    std::vector<std::size_t> out(N + 1, 0);
    for (auto& b : enumerate_blocks(*m, {bound, 0, 0})) {
        bool zero_mode = true;
        for (int x : b.mode) zero_mode = zero_mode && x == 0;
        std::vector<Basis> bases;
        for (int k = 0; k <= N; ++k) bases.emplace_back(total_piece(*m, b, k));
        std::vector<SparseMatrix> mats;
        for (int k = 0; k < N; ++k) mats.push_back(operator_matrix(m, op(Component::d), bases[k], bases[k + 1]));
        for (int k = 0; k <= N; ++k) {
            SparseMatrix out_m = k < N ? mats[k] : SparseMatrix(0, bases[k].size());
            SparseMatrix in_m = k > 0 ? mats[k - 1] : SparseMatrix(bases[0].size(), 0);
            std::size_t h = homology_dim(out_m, in_m);
            if (h && !zero_mode && m->has_modes())
                throw ComplexViolation("nonzero Fourier mode carries de Rham cohomology");
            out[k] += h;
        }
    }
    return out;
}

}  // namespace foliated::derham
