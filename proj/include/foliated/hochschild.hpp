#pragma once

// Dimension predictions for Hochschild and periodic cyclic homology of the
// longitudinal symbol algebra of a Kronecker torus, read off the leafwise
// cohomology of the cosphere-circle model, and the E^1 -> E^2 computation
// through homogeneous delta-homology on the conic model.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foliated/derham.hpp"
#include "foliated/model.hpp"
#include "foliated/poisson.hpp"

namespace foliated::hochschild {

inline void require_torus(const ModelPtr& m) {
    if (!m || m->family != Family::kronecker_torus) throw UnsupportedModel("Hochschild predictions are available for Kronecker torus models");
}

using Table = std::map<std::pair<int, int>, std::size_t>;  // (k, h) -> dim

inline std::size_t at(const Table& t, int k, int h) {
    auto it = t.find({k, h});
    return it == t.end() ? 0 : it->second;
}

struct CosphereData {
    ModelPtr cosphere;
    derham::BigradedDims dims;
};

inline CosphereData cosphere_dims(const ModelPtr& torus, const ModeWindow& w) {
    require_torus(torus);
    CosphereData c;
    c.cosphere = derive(torus, Family::cosphere_circle);
    c.dims = derham::cohomology_dims(c.cosphere, derham::Component::d_F, w);
    return c;
}

// E^2_{k,h} = dim H^{p-k, h-p}(cosphere circle), nonzero only for -p <= k <= p and p <= h <= p+q.
inline Table e2_dims(const ModelPtr& torus, const ModeWindow& w = {1, 0, 0}) {
    auto c = cosphere_dims(torus, w);
    int p = torus->leaf_dim(), q = torus->codim();
    Table t;
    for (int k = -p; k <= p; ++k)
        for (int h = p; h <= p + q; ++h) t[{k, h}] = c.dims.at(p - k, h - p);
    return t;
}

// HH_k = sum_{j=0}^{q} dim H^{2p+j-k, j}(cosphere circle).
inline std::vector<std::size_t> hh_dims_assuming_collapse(const ModelPtr& torus, const ModeWindow& w = {1, 0, 0}) {
    auto c = cosphere_dims(torus, w);
    int p = torus->leaf_dim(), q = torus->codim();
    std::vector<std::size_t> out(2 * p + q + 2, 0);
    for (int k = 0; k < static_cast<int>(out.size()); ++k)
        for (int j = 0; j <= q; ++j) out[k] += c.dims.at(2 * p + j - k, j);
    return out;
}

struct TraceDims {
    std::size_t hh0 = 0;
    std::size_t hhtop = 0;
    std::string identification;
};

inline TraceDims hh0_and_top(const ModelPtr& torus, const ModeWindow& w = {1, 0, 0}) {
    auto c = cosphere_dims(torus, w);
    int p = torus->leaf_dim(), q = torus->codim();
    TraceDims t;
    t.hh0 = c.dims.at(2 * p, 0);
    t.hhtop = derham::cohomology_dims(torus, derham::Component::d_F, w).at(0, q);
    t.identification = p >= 2 ? "HH_0 = H^{2p,0}(S*F x S^1, F_1) = H^{p,0}(M,F)"
                              : "HH_0 = H^{2p,0}(S*F x S^1, F_1); simplification not applicable (p = 1)";
    t.identification += "; HH_top = H^{0,q}(M,F)";
    return t;
}

struct PeriodicDims {
    std::size_t hp0 = 0;
    std::size_t hp1 = 0;
    std::vector<std::size_t> betti;  // of the cosphere-circle model
};

inline PeriodicDims hp_dims(const ModelPtr& torus, int bound = 1) {
    require_torus(torus);
    PeriodicDims out;
    out.betti = derham::ordinary_derham_dims(derive(torus, Family::cosphere_circle), bound);
    for (std::size_t k = 0; k < out.betti.size(); ++k) (k % 2 == 0 ? out.hp0 : out.hp1) += out.betti[k];
    return out;
}

struct E1E2Cell {
    int k = 0;
    int h = 0;
    std::size_t e1 = 0;       // dim of Omega^{k+h}_k in the window
    std::size_t e2 = 0;       // homology of d_1 = -i delta
    std::size_t closed = 0;   // e2_dims prediction
    bool agree = true;
};

struct E1E2Report {
    std::vector<E1E2Cell> cells;
    bool all_agree = true;
    bool window_stable = true;
    std::string note = "d_1 = -i delta applied over Q(i); the unit -i does not change ranks";
};

namespace detail {

inline std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> e1_e2(const ModelPtr& X, const ModeWindow& w,
                                                                                 int kmin, int kmax, int hmax) {
    LinearOp d1 = [](const Form& f) { return Scalar(-1) * Scalar::i() * poisson::delta(f); };
    std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> out;
    for (int k = kmin; k <= kmax; ++k)
        for (int h = 0; h <= hmax; ++h) {
            std::size_t e1 = 0, e2 = 0;
            for (auto& b : enumerate_blocks(*X, w)) {
                Basis lo(poisson::detail::homogeneous_piece(*X, b, k + h - 1, k - 1));
                Basis mid(poisson::detail::homogeneous_piece(*X, b, k + h, k));
                Basis hi(poisson::detail::homogeneous_piece(*X, b, k + h + 1, k + 1));
                e1 += mid.size();
                e2 += homology_dim(operator_matrix(X, d1, mid, lo), operator_matrix(X, d1, hi, mid));
            }
            out[{k, h}] = {e1, e2};
        }
    return out;
}

}  // namespace detail

inline E1E2Report e1_to_e2(const ModelPtr& torus, const ModeWindow& w) {
    require_torus(torus);
    w.check();
    int p = torus->leaf_dim(), q = torus->codim();
    if (w.l_min > -p || w.l_max < p) throw WindowError("homogeneity window must contain [-p, p]");
    auto X = derive(torus, Family::conic_dual);
    auto closed = e2_dims(torus, w);
    int hmax = 2 * p + q + 1;
    auto cells = detail::e1_e2(X, w, w.l_min, w.l_max, hmax);
    E1E2Report rep;
    for (auto& [key, v] : cells) {
        E1E2Cell c;
        c.k = key.first;
        c.h = key.second;
        c.e1 = v.first;
        c.e2 = v.second;
        c.closed = at(closed, c.k, c.h);
        c.agree = c.e2 == c.closed;
        if (!c.agree) rep.all_agree = false;
        rep.cells.push_back(c);
    }
    ModeWindow wider = w;
    ++wider.bound;
    auto more = detail::e1_e2(X, wider, w.l_min, w.l_max, hmax);
    for (auto& [key, v] : cells)
        if (more.at(key).second != v.second) rep.window_stable = false;
    return rep;
}

struct HHReport {
    std::string model;
    std::vector<std::size_t> hh;
    Table e2;
    TraceDims traces;
    PeriodicDims periodic;
    std::string collapse_status;
    std::optional<DiophantineCertificate> certificate;
    bool vanishing_bound_holds = true;   // HH_k = 0 for k > 2p + q
    bool totals_consistent = true;       // sum HH_k = sum E^2
};

inline HHReport hochschild_report(const ModelPtr& torus, const ModeWindow& w = {1, 0, 0}) {
    HHReport r;
    r.model = torus->label;
    r.hh = hh_dims_assuming_collapse(torus, w);
    r.e2 = e2_dims(torus, w);
    r.traces = hh0_and_top(torus, w);
    r.periodic = hp_dims(torus, w.bound);
    r.certificate = derham::certificate_for(*torus);
    r.collapse_status = "collapse at E^2 assumed; certified only by the symbol cocycle count";
    int top = 2 * torus->leaf_dim() + torus->codim();
    for (int k = top + 1; k < static_cast<int>(r.hh.size()); ++k)
        if (r.hh[k] != 0) r.vanishing_bound_holds = false;
    std::size_t shh = 0, se2 = 0;
    for (auto v : r.hh) shh += v;
    for (auto& [k, v] : r.e2) se2 += v;
    r.totals_consistent = shh == se2;
    return r;
}

}  // namespace foliated::hochschild
