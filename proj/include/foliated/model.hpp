#pragma once

// Foliated model families.  Every family is presented by a global coframe
// g_0..g_{N-1}, each generator tagged longitudinal or transverse, together
// with the derivative of the coefficient functions along the dual frame and
// the (constant-coefficient) differential of each generator.
//
//   kronecker_torus   T^n, leaves along T = sum alpha_j d/dx_j.  Coframe
//                     theta = dx_{j0}/alpha_{j0}, eta_i = dx_{j_i} - (alpha_{j_i}/alpha_{j0}) dx_{j0}
//                     where j0 is the first index with alpha_{j0} != 0.
//   conic_dual        (T^n or a Lie frame with a 1-dim foliation) x (R\{0}), coordinate xi,
//                     with d xi longitudinal.  Two components xi > 0, xi < 0.
//   cosphere_circle   T^n x {+,-} x S^1, d phi longitudinal.
//   product_bundle    T^n x S^1 (trivial circle bundle), d phi longitudinal.
//   lie_frame         left-invariant forms on a Lie group, F spanned by a subset of the frame.
//
// Functions are Fourier monomials e_m (times xi^j on the conic model).  The
// factor 2 pi i in d e_m is dropped throughout.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "foliated/diophantine.hpp"
#include "foliated/errors.hpp"
#include "foliated/scalar.hpp"

namespace foliated {

enum class Family { kronecker_torus, conic_dual, cosphere_circle, product_bundle, lie_frame };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::kronecker_torus: return "kronecker_torus";
        case Family::conic_dual: return "conic_dual";
        case Family::cosphere_circle: return "cosphere_circle";
        case Family::product_bundle: return "product_bundle";
        case Family::lie_frame: return "lie_frame";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    for (Family f : {Family::kronecker_torus, Family::conic_dual, Family::cosphere_circle, Family::product_bundle,
                     Family::lie_frame})
        if (family_name(f) == s) return f;
    throw ValidationError("unknown model family '" + s + "'");
}

enum class Role { theta, eta, dxi, dphi, lie };

struct Generator {
    std::string name;
    bool longitudinal = false;
    Role role = Role::lie;
    int index = 0;  // eta: torus axis j_i; lie: frame index k
};

struct FrameSpec {
    std::vector<Generator> generators;
    std::string complement;
    int longitudinal_count() const {
        int c = 0;
        for (auto& g : generators) c += g.longitudinal;
        return c;
    }
    int transverse_count() const { return static_cast<int>(generators.size()) - longitudinal_count(); }
};

struct LieBracket {
    int i = 0;  // 0-based
    int j = 0;
    std::vector<std::pair<int, Scalar>> value;  // [e_i, e_j] = sum value
};

// Model description record.  For conic_dual, a nonzero lie_dim selects a Lie-frame base.
struct ModelSpec {
    Family family = Family::kronecker_torus;
    Field field;
    std::vector<Scalar> alpha;
    int lie_dim = 0;
    std::vector<LieBracket> brackets;
    std::vector<int> foliation;  // 0-based frame indices spanning F
    std::string label;
};

struct ModelOptions {
    bool validate = true;  // false only for negative-control harnesses
};

// A 2-form with constant coefficients, as (mask, coefficient) pairs.
using ConstantForm = std::vector<std::pair<std::uint32_t, Scalar>>;

class Model;
using ModelPtr = std::shared_ptr<const Model>;

class Model {
public:
    Family family = Family::kronecker_torus;
    Field field;
    FrameSpec frame;
    std::string label;

    // torus data (n = 0 for pure Lie models)
    int n = 0;
    std::vector<Scalar> alpha;
    int pivot = -1;
    std::vector<IntVec> resonance;  // basis of {m : m.alpha = 0}

    // Lie data
    int lie_dim = 0;
    std::vector<Scalar> structure;  // c^k_{ij} at (i*lie_dim + j)*lie_dim + k
    std::vector<bool> in_foliation;

    int theta = -1;  // generator index of theta (or of the longitudinal Lie generator)
    int dxi = -1;
    int dphi = -1;
    int mode_size = 0;   // length of the Fourier index (n, or n+1 with a circle)
    int components = 1;  // 2 for conic_dual and cosphere_circle
    bool validated = true;

    std::vector<ConstantForm> generator_d;  // d g_a
    std::vector<ConstantForm> mask_d;       // d of each exterior monomial, indexed by mask

    ModelPtr base;  // underlying torus or Lie model for derived families

    int generator_count() const { return static_cast<int>(frame.generators.size()); }
    int leaf_dim() const { return frame.longitudinal_count(); }
    int codim() const { return frame.transverse_count(); }
    bool has_modes() const { return mode_size > 0; }
    bool is_torus_based() const { return n > 0; }
    bool is_lie_based() const { return lie_dim > 0; }
    std::uint32_t longitudinal_mask() const {
        std::uint32_t m = 0;
        for (int a = 0; a < generator_count(); ++a)
            if (frame.generators[a].longitudinal) m |= 1u << a;
        return m;
    }
    int generator_index(const std::string& name) const {
        for (int a = 0; a < generator_count(); ++a)
            if (frame.generators[a].name == name) return a;
        return -1;
    }
    Scalar c(int i, int j, int k) const { return structure[(i * lie_dim + j) * lie_dim + k]; }

    // m . alpha over the torus part of a mode vector
    Scalar pairing(const std::vector<int>& m) const {
        Scalar s;
        for (int j = 0; j < n; ++j)
            if (m[j] != 0) s += Scalar(m[j]) * alpha[j];
        return s;
    }
    bool is_resonant(const std::vector<int>& m) const {
        if (!pairing(m).is_zero()) return false;
        for (int j = n; j < mode_size; ++j)
            if (m[j] != 0) return false;
        return true;
    }
    // Structure tensor theta(e_i, e_j) = pi_F [e_i, e_j] for transverse i < j,
    // as (i, j, k, c^k_ij) with k longitudinal.
    struct TensorEntry {
        int i, j, k;
        Scalar value;
    };
    std::vector<TensorEntry> structure_tensor() const {
        std::vector<TensorEntry> t;
        for (int i = 0; i < lie_dim; ++i)
            for (int j = i + 1; j < lie_dim; ++j) {
                if (in_foliation[i] || in_foliation[j]) continue;
                for (int k = 0; k < lie_dim; ++k)
                    if (in_foliation[k] && !c(i, j, k).is_zero()) t.push_back({i, j, k, c(i, j, k)});
            }
        return t;
    }
};

// Sign of g_A ^ g_B relative to the ordered monomial of A | B; 0 if they overlap.
inline int wedge_sign(std::uint32_t a, std::uint32_t b) {
    if (a & b) return 0;
    int swaps = 0;
    for (std::uint32_t x = b; x; x &= x - 1) {
        int k = __builtin_ctz(x);
        swaps += __builtin_popcount(a >> (k + 1));
    }
    return swaps % 2 ? -1 : 1;
}

namespace detail {

inline void check_lie(const Model& m, bool validate) {
    int n = m.lie_dim;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (m.c(i, j, k) != -m.c(j, i, k)) throw ValidationError("structure constants are not antisymmetric");
    if (!validate) return;
    // Jacobi: [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int t = 0; t < n; ++t) {
                    Scalar s;
                    for (int u = 0; u < n; ++u) s += m.c(i, j, u) * m.c(u, k, t) + m.c(j, k, u) * m.c(u, i, t) + m.c(k, i, u) * m.c(u, j, t);
                    if (!s.is_zero())
                        throw ValidationError("Jacobi identity fails for (e" + std::to_string(i + 1) + ", e" + std::to_string(j + 1) +
                                              ", e" + std::to_string(k + 1) + ")");
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!m.in_foliation[i] || !m.in_foliation[j]) continue;
            for (int k = 0; k < n; ++k)
                if (!m.in_foliation[k] && !m.c(i, j, k).is_zero())
                    throw ValidationError("foliation is not a subalgebra: [e" + std::to_string(i + 1) + ", e" + std::to_string(j + 1) +
                                          "] leaves F");
        }
}

inline void build_mask_table(Model& m) {
    int N = m.generator_count();
    m.mask_d.assign(std::size_t(1) << N, {});
    for (std::uint32_t mask = 1; mask < (1u << N); ++mask) {
        std::vector<std::pair<std::uint32_t, Scalar>> acc;
        int pos = 0;
        for (int a = 0; a < N; ++a) {
            if (!(mask >> a & 1)) continue;
            std::uint32_t prefix = mask & ((1u << a) - 1);
            std::uint32_t suffix = mask & ~((2u << a) - 1);
            int sign = pos % 2 ? -1 : 1;
            for (auto& [pm, v] : m.generator_d[a]) {
                int s1 = wedge_sign(prefix, pm);
                if (!s1) continue;
                int s2 = wedge_sign(prefix | pm, suffix);
                if (!s2) continue;
                acc.emplace_back(prefix | pm | suffix, Scalar(sign * s1 * s2) * v);
            }
            ++pos;
        }
        ConstantForm merged;
        std::sort(acc.begin(), acc.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [k, v] : acc) {
            if (!merged.empty() && merged.back().first == k)
                merged.back().second += v;
            else
                merged.emplace_back(k, v);
        }
        ConstantForm out;
        for (auto& e : merged)
            if (!e.second.is_zero()) out.push_back(e);
        m.mask_d[mask] = std::move(out);
    }
}

inline void torus_frame(Model& m) {
    m.pivot = -1;
    for (int j = 0; j < m.n; ++j)
        if (!m.alpha[j].is_zero()) {
            m.pivot = j;
            break;
        }
    if (m.pivot < 0) throw ValidationError("slope vector alpha is zero");
    m.frame.generators.push_back({"theta", true, Role::theta, m.pivot});
    m.theta = 0;
    m.frame.complement = "H = span(d/dx_j, j != " + std::to_string(m.pivot + 1) + ")";
}

inline void torus_etas(Model& m) {
    int k = 1;
    for (int j = 0; j < m.n; ++j) {
        if (j == m.pivot) continue;
        m.frame.generators.push_back({"eta" + std::to_string(k++), false, Role::eta, j});
    }
}

inline void finish(Model& m) {
    m.generator_d.resize(m.frame.generators.size());
    if (m.is_lie_based()) {
        // d e^k = - sum_{i<j} c^k_ij e^i ^ e^j
        for (int a = 0; a < m.generator_count(); ++a) {
            const auto& g = m.frame.generators[a];
            if (g.role != Role::lie) continue;
            ConstantForm df;
            for (int i = 0; i < m.lie_dim; ++i)
                for (int j = i + 1; j < m.lie_dim; ++j) {
                    Scalar v = m.c(i, j, g.index);
                    if (!v.is_zero()) df.emplace_back((1u << i) | (1u << j), -v);
                }
            std::sort(df.begin(), df.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
            m.generator_d[a] = std::move(df);
        }
    }
    build_mask_table(m);
    std::vector<std::string> names;
    for (auto& g : m.frame.generators) {
        for (auto& x : names)
            if (x == g.name) throw ValidationError("duplicate generator name " + g.name);
        names.push_back(g.name);
    }
}

inline ModelPtr make_torus(const ModelSpec& spec) {
    auto m = std::make_shared<Model>();
    m->family = Family::kronecker_torus;
    m->field = spec.field;
    m->label = spec.label;
    m->n = static_cast<int>(spec.alpha.size());
    if (m->n < 1) throw ValidationError("torus dimension must be at least 1");
    m->alpha = spec.alpha;
    for (auto& a : m->alpha) {
        Field::unify(a.field(), spec.field);
        a.set_field(spec.field);
    }
    check_real_slopes(m->alpha);
    torus_frame(*m);
    torus_etas(*m);
    m->mode_size = m->n;
    m->resonance = resonance_lattice(m->alpha);
    finish(*m);
    return m;
}

inline ModelPtr make_lie(const ModelSpec& spec, const ModelOptions& opt) {
    auto m = std::make_shared<Model>();
    m->family = Family::lie_frame;
    m->field = spec.field;
    m->label = spec.label;
    int n = spec.lie_dim;
    if (n < 1 || n > 12) throw ValidationError("Lie algebra dimension must be between 1 and 12");
    m->lie_dim = n;
    m->structure.assign(std::size_t(n) * n * n, Scalar());
    for (auto& b : spec.brackets) {
        if (b.i < 0 || b.j < 0 || b.i >= n || b.j >= n) throw ValidationError("bracket index out of range");
        if (b.i == b.j) throw ValidationError("bracket [e_i, e_i] must vanish");
        for (auto& [k, v] : b.value) {
            if (k < 0 || k >= n) throw ValidationError("bracket value index out of range");
            Scalar w = v;
            w.set_field(spec.field);
            m->structure[(b.i * n + b.j) * n + k] += w;
            m->structure[(b.j * n + b.i) * n + k] -= w;
        }
    }
    m->in_foliation.assign(n, false);
    for (int k : spec.foliation) {
        if (k < 0 || k >= n) throw ValidationError("foliation index out of range");
        m->in_foliation[k] = true;
    }
    check_lie(*m, opt.validate);
    m->validated = opt.validate;
    std::string comp = "H = span(";
    bool first = true;
    for (int k = 0; k < n; ++k) {
        m->frame.generators.push_back({"e" + std::to_string(k + 1), m->in_foliation[k], Role::lie, k});
        if (!m->in_foliation[k]) {
            comp += (first ? "e" : ", e") + std::to_string(k + 1);
            first = false;
        }
    }
    m->frame.complement = comp + ")";
    finish(*m);
    return m;
}

}  // namespace detail

inline ModelPtr make_model(const ModelSpec& spec, const ModelOptions& opt = {}) {
    switch (spec.family) {
        case Family::kronecker_torus: return detail::make_torus(spec);
        case Family::lie_frame: return detail::make_lie(spec, opt);
        default: break;
    }
    auto m = std::make_shared<Model>();
    m->family = spec.family;
    m->field = spec.field;
    m->label = spec.label;
    if (spec.family == Family::conic_dual && spec.lie_dim > 0) {
        ModelSpec b = spec;
        b.family = Family::lie_frame;
        auto base = detail::make_lie(b, opt);
        int longitudinal = base->leaf_dim();
        if (longitudinal != 1)
            throw UnsupportedModel("conic extension of a Lie frame needs a one-dimensional foliation");
        m->base = base;
        m->lie_dim = base->lie_dim;
        m->structure = base->structure;
        m->in_foliation = base->in_foliation;
        m->validated = base->validated;
        m->frame = base->frame;
        for (int a = 0; a < base->generator_count(); ++a)
            if (base->frame.generators[a].longitudinal) m->theta = a;
        m->frame.generators.push_back({"dxi", true, Role::dxi, 0});
        m->dxi = m->generator_count() - 1;
        m->components = 2;
        detail::finish(*m);
        return m;
    }
    ModelSpec b = spec;
    b.family = Family::kronecker_torus;
    auto base = detail::make_torus(b);
    m->base = base;
    m->n = base->n;
    m->alpha = base->alpha;
    m->pivot = base->pivot;
    m->resonance = base->resonance;
    m->frame.generators.push_back({"theta", true, Role::theta, m->pivot});
    m->theta = 0;
    m->frame.complement = base->frame.complement;
    switch (spec.family) {
        case Family::conic_dual:
            m->frame.generators.push_back({"dxi", true, Role::dxi, 0});
            m->dxi = 1;
            m->components = 2;
            m->mode_size = m->n;
            break;
        case Family::cosphere_circle:
        case Family::product_bundle:
            m->frame.generators.push_back({"dphi", true, Role::dphi, 0});
            m->dphi = 1;
            m->components = spec.family == Family::cosphere_circle ? 2 : 1;
            m->mode_size = m->n + 1;
            break;
        default: throw UnsupportedModel("unsupported family");
    }
    detail::torus_etas(*m);
    detail::finish(*m);
    return m;
}

// Derived families over a given torus model.
inline ModelPtr derive(const ModelPtr& torus, Family family) {
    if (!torus->is_torus_based() || torus->family != Family::kronecker_torus)
        throw UnsupportedModel("derived families need a Kronecker torus base");
    ModelSpec s;
    s.family = family;
    s.field = torus->field;
    s.alpha = torus->alpha;
    s.label = torus->label;
    auto m = make_model(s);
    auto mm = std::const_pointer_cast<Model>(m);
    mm->base = torus;
    return m;
}

}  // namespace foliated
