#pragma once

// Product sphere bundles E = M x S^r over a Kronecker torus.  Only r = 1 is
// realized as a model (the product_bundle family); larger r is handled by the
// splitting formula alone.
//
// Fiber integration convention: pi_*(beta ^ dphi) = beta with the fiber factor
// written last, circle modes k != 0 integrate to zero, and the circle has unit
// volume.  With this choice d_F pi_* = pi_* d_{F_E} holds with no sign.

#include <optional>
#include <string>
#include <vector>

#include "foliated/complex.hpp"
#include "foliated/derham.hpp"
#include "foliated/form.hpp"
#include "foliated/model.hpp"

namespace foliated::gysin {

inline const char* kIntegrationConvention =
    "pi_*(beta ^ dphi) = beta (fiber factor last); nonzero circle modes integrate to 0; unit circle volume";

struct ProductBundle {
    ModelPtr base;
    int r = 1;
    ModelPtr total;  // realized only for r = 1

    bool realized() const { return total != nullptr; }
};

inline ProductBundle product_bundle(const ModelPtr& base, int r = 1) {
    if (!base || base->family != Family::kronecker_torus) throw UnsupportedModel("product bundles are built over a Kronecker torus");
    if (r < 1) throw ValidationError("sphere dimension must be at least 1");
    ProductBundle b;
    b.base = base;
    b.r = r;
    if (r == 1) b.total = derive(base, Family::product_bundle);
    return b;
}

// Pullback along the projection of a product_bundle or cosphere_circle model onto its base torus.
inline Form pullback(const Form& a, const ModelPtr& target) {
    if (!target || (target->family != Family::product_bundle && target->family != Family::cosphere_circle))
        throw UnsupportedModel("pullback targets are product bundles and cosphere-circle models");
    if (a.model() && a.model() != target->base) throw ModelMismatch("form does not live on the base of the target model");
    const Model& base = *target->base;
    std::vector<int> gen_map(base.generator_count());
    for (int g = 0; g < base.generator_count(); ++g) gen_map[g] = target->generator_index(base.frame.generators[g].name);
    Form out(target);
    for (auto& [x, v] : a.terms()) {
        std::uint32_t mask = 0;
        for (int g = 0; g < base.generator_count(); ++g)
            if (x.mask >> g & 1) mask |= 1u << gen_map[g];
        // generator order is preserved by the embedding, so no sign arises
        std::vector<int> mode = x.mode;
        mode.push_back(0);
        for (int c : {1, -1}) {
            if (c == -1 && target->components == 1) break;
            out.add({mode, 0, c, mask}, v);
        }
    }
    return out;
}

inline Form pullback(const ProductBundle& b, const Form& a) {
    if (!b.realized()) throw CapabilityError("pullback needs a realized fiber (r = 1)");
    return pullback(a, b.total);
}

inline Form fiber_integrate(const ProductBundle& b, const Form& a) {
    if (!b.realized()) throw CapabilityError("fiber integration needs a realized fiber (r = 1)");
    if (a.model() && a.model() != b.total) throw ModelMismatch("form does not live on the bundle");
    const Model& E = *b.total;
    const Model& M = *b.base;
    std::uint32_t dphi = 1u << E.dphi;
    Form out(b.base);
    for (auto& [x, v] : a.terms()) {
        if (!(x.mask & dphi) || x.mode.back() != 0) continue;
        std::uint32_t beta = x.mask & ~dphi;
        int s = wedge_sign(beta, dphi);  // x = s * beta ^ dphi
        std::uint32_t mask = 0;
        for (int g = 0; g < E.generator_count(); ++g) {
            if (!(beta >> g & 1)) continue;
            mask |= 1u << M.generator_index(E.frame.generators[g].name);
        }
        std::vector<int> mode(x.mode.begin(), x.mode.end() - 1);
        out.add({mode, 0, 1, mask}, Scalar(s) * v);
    }
    return out;
}

// Splitting map beta -> pi^* beta ^ dphi, a right inverse of pi_* on forms.
inline Form splitting(const ProductBundle& b, const Form& a) {
    return wedge(pullback(b, a), Form::generator(b.total, "dphi"));
}

struct SplittingRow {
    int k = 0;
    std::optional<std::size_t> direct;  // dim H^{k,h}(E, F_E), realized case only
    std::size_t base_k = 0;             // dim H^{k,h}(M, F)
    std::size_t base_k_minus_r = 0;     // dim H^{k-r,h}(M, F)
    std::size_t predicted = 0;
    std::size_t pullback_rank = 0;      // rank of pi^* on cohomology
    std::size_t integration_rank = 0;   // rank of pi_* on cohomology
    bool composite_zero = true;         // pi_* pi^* = 0 on classes
    bool splitting_ok = true;           // pi_*(pi^* beta ^ dphi) = beta on representatives
    bool exact = true;                  // 0 -> H(M) -> H(E) -> H(M)[-r] -> 0
    bool pullback_iso = false;
    bool integration_iso = false;
};

struct SplittingReport {
    int r = 1;
    int h = 0;
    int p = 1;
    std::vector<SplittingRow> rows;
    bool all_agree = true;
    bool isomorphism_ranges_hold = true;  // pi^* iso for k <= r-1, pi_* iso for k >= p+1
    std::string convention = kIntegrationConvention;
};

namespace detail {

struct CellData {
    Basis basis;
    SparseMatrix out, in;
    std::vector<SparseVec> reps;
};

inline CellData cell(const ModelPtr& m, const Block& b, int r, int s) {
    CellData c;
    c.basis = Basis(piece(*m, b, r, s));
    Basis up(piece(*m, b, r + 1, s)), down(piece(*m, b, r - 1, s));
    auto dF = derham::op(derham::Component::d_F);
    c.out = operator_matrix(m, dF, c.basis, up);
    c.in = operator_matrix(m, dF, down, c.basis);
    c.reps = homology_representatives(c.out, c.in);
    return c;
}

// Rank of a family of cocycles in cohomology.
inline std::size_t class_rank(const CellData& c, const std::vector<SparseVec>& vecs) {
    for (auto& v : vecs)
        if (!c.out.apply(v).empty()) throw ComplexViolation("image of a cocycle is not closed");
    std::vector<SparseVec> all = c.in.columns();
    std::size_t base = span_rank(all, c.basis.size());
    all.insert(all.end(), vecs.begin(), vecs.end());
    return span_rank(all, c.basis.size()) - base;
}

}  // namespace detail

inline SplittingReport product_splitting_dims(const ModelPtr& base, int r, int h, const ModeWindow& w = {1, 0, 0}) {
    ProductBundle bun = product_bundle(base, r);
    SplittingReport rep;
    rep.r = r;
    rep.h = h;
    rep.p = base->leaf_dim();
    auto hb = derham::cohomology_dims(base, derham::Component::d_F, w);
    std::optional<derham::BigradedDims> he;
    if (bun.realized()) he = derham::cohomology_dims(bun.total, derham::Component::d_F, w);
    for (int k = 0; k <= rep.p + r; ++k) {
        SplittingRow row;
        row.k = k;
        row.base_k = hb.at(k, h);
        row.base_k_minus_r = hb.at(k - r, h);
        row.predicted = row.base_k + row.base_k_minus_r;
        if (he) {
            row.direct = he->at(k, h);
            if (*row.direct != row.predicted) rep.all_agree = false;
            for (auto& b : enumerate_blocks(*base, w)) {
                Block eb{b.mode, 1};
                eb.mode.push_back(0);
                auto cm = detail::cell(base, b, k, h);
                auto cm_r = detail::cell(base, b, k - r, h);
                auto ce = detail::cell(bun.total, eb, k, h);
                std::vector<SparseVec> up, down, split;
                for (auto& v : cm.reps) up.push_back(to_vector(pullback(bun, from_vector(base, v, cm.basis)), ce.basis));
                for (auto& v : ce.reps) {
                    Form img = fiber_integrate(bun, from_vector(bun.total, v, ce.basis));
                    down.push_back(to_vector(img, cm_r.basis));
                }
                for (auto& v : cm_r.reps) {
                    Form beta = from_vector(base, v, cm_r.basis);
                    Form s = splitting(bun, beta);
                    if (fiber_integrate(bun, s) != beta) row.splitting_ok = false;
                    split.push_back(to_vector(s, ce.basis));
                }
                row.pullback_rank += detail::class_rank(ce, up);
                row.integration_rank += detail::class_rank(cm_r, down);
                for (auto& v : up) {
                    Form img = fiber_integrate(bun, from_vector(bun.total, v, ce.basis));
                    if (!img.is_zero()) row.composite_zero = false;
                }
                // splitting classes together with pulled-back classes span H(E)
                std::vector<SparseVec> both = up;
                both.insert(both.end(), split.begin(), split.end());
                if (detail::class_rank(ce, both) != ce.reps.size()) row.exact = false;
            }
            if (row.pullback_rank != row.base_k || row.integration_rank != row.base_k_minus_r) row.exact = false;
            row.pullback_iso = row.pullback_rank == row.base_k && row.base_k == *row.direct;
            row.integration_iso = row.integration_rank == row.base_k_minus_r && row.base_k_minus_r == *row.direct;
            if (!row.exact || !row.composite_zero || !row.splitting_ok) rep.all_agree = false;
            if (k <= r - 1 && !row.pullback_iso) rep.isomorphism_ranges_hold = false;
            if (k >= rep.p + 1 && !row.integration_iso) rep.isomorphism_ranges_hold = false;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace foliated::gysin
