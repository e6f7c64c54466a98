#pragma once

// Spectral sequence of a finite filtered cochain complex.  The filtration is
// decreasing: F^w is spanned by basis vectors of weight >= w and d never lowers
// weight.  Pages are computed from Z_r^w = {x in F^w : dx in F^{w+r}} by
// E_r^w = Z_r^w / (Z_{r-1}^{w+1} + d Z_{r-1}^{w-r+1}).

#include <algorithm>
#include <map>
#include <set>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "foliated/complex.hpp"
#include "foliated/errors.hpp"
#include "foliated/linalg.hpp"
#include "foliated/poisson.hpp"
#include "foliated/scalar.hpp"

namespace foliated::specseq {

struct BasisItem {
    int degree = 0;
    int weight = 0;
    std::string label;
};

class FilteredComplex {
public:
    FilteredComplex() = default;
    explicit FilteredComplex(Field f) : field_(f) {}

    std::size_t add(int degree, int weight, std::string label = {}) {
        std::size_t local = by_degree_[degree].size();
        by_degree_[degree].push_back(items_.size());
        items_.push_back({degree, weight, std::move(label)});
        local_.push_back(local);
        return local;
    }
    // d from degree t to t+1, in local coordinates of each degree.
    void set_differential(int t, SparseMatrix d) { diff_[t] = std::move(d); }

    const Field& field() const { return field_; }
    const std::vector<BasisItem>& items() const { return items_; }
    std::vector<int> degrees() const {
        std::vector<int> out;
        for (auto& [t, v] : by_degree_) out.push_back(t);
        return out;
    }
    std::size_t dim(int t) const {
        auto it = by_degree_.find(t);
        return it == by_degree_.end() ? 0 : it->second.size();
    }
    const BasisItem& item(int t, std::size_t local) const { return items_[by_degree_.at(t)[local]]; }
    int weight(int t, std::size_t local) const { return item(t, local).weight; }

    SparseMatrix differential(int t) const {
        auto it = diff_.find(t);
        if (it != diff_.end()) return it->second;
        return SparseMatrix(dim(t + 1), dim(t));
    }

    int min_weight() const {
        int w = 0;
        bool first = true;
        for (auto& x : items_) w = first ? (first = false, x.weight) : std::min(w, x.weight);
        return w;
    }
    int max_weight() const {
        int w = 0;
        bool first = true;
        for (auto& x : items_) w = first ? (first = false, x.weight) : std::max(w, x.weight);
        return w;
    }

    void validate() const {
        for (auto& [t, d] : diff_) {
            if (d.rows() != dim(t + 1) || d.cols() != dim(t)) throw ShapeError("differential has the wrong shape in degree " + std::to_string(t));
            for (std::size_t c = 0; c < d.cols(); ++c)
                for (auto& [r, v] : d.column(c))
                    if (weight(t + 1, r) < weight(t, c))
                        throw ComplexViolation("differential lowers filtration weight in degree " + std::to_string(t));
            if (!(differential(t + 1) * d).is_zero()) throw ComplexViolation("d^2 != 0 in degree " + std::to_string(t));
        }
    }

    // Apply an order-preserving relabelling of weights.
    template <class F>
    FilteredComplex reindexed(F map) const {
        FilteredComplex out = *this;
        for (auto& x : out.items_) x.weight = map(x.weight);
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["field"] = {field_.d1, field_.d2};
        j["basis"] = nlohmann::json::array();
        for (auto& x : items_) j["basis"].push_back({{"degree", x.degree}, {"weight", x.weight}, {"label", x.label}});
        j["differentials"] = nlohmann::json::array();
        for (auto& [t, d] : diff_) {
            nlohmann::json e = {{"degree", t}, {"entries", nlohmann::json::array()}};
            for (auto& tr : d.triplets()) e["entries"].push_back({tr.row, tr.col, tr.value.to_string()});
            j["differentials"].push_back(e);
        }
        return j;
    }
    static FilteredComplex from_json(const nlohmann::json& j) {
        FilteredComplex fc(Field(j.at("field").at(0).get<long>(), j.at("field").at(1).get<long>()));
        for (auto& x : j.at("basis")) fc.add(x.at("degree").get<int>(), x.at("weight").get<int>(), x.value("label", ""));
        for (auto& e : j.at("differentials")) {
            int t = e.at("degree").get<int>();
            std::vector<SparseMatrix::Triplet> tr;
            for (auto& x : e.at("entries"))
                tr.push_back({x.at(0).get<std::size_t>(), x.at(1).get<std::size_t>(), parse_scalar(x.at(2).get<std::string>(), fc.field_)});
            fc.set_differential(t, SparseMatrix(fc.dim(t + 1), fc.dim(t), tr));
        }
        return fc;
    }

private:
    Field field_;
    std::vector<BasisItem> items_;
    std::vector<std::size_t> local_;
    std::map<int, std::vector<std::size_t>> by_degree_;
    std::map<int, SparseMatrix> diff_;
};

struct SpectralPage {
    int r = 0;
    std::map<std::pair<int, int>, std::size_t> dims;                // (weight, degree - weight)
    std::map<std::pair<int, int>, SparseMatrix> differentials;      // d_r out of (weight, degree)
    bool stabilized = false;                                        // d_r' = 0 for all r' >= r

    std::size_t at(int w, int comp) const {
        auto it = dims.find({w, comp});
        return it == dims.end() ? 0 : it->second;
    }
    std::size_t total(int t) const {
        std::size_t s = 0;
        for (auto& [k, v] : dims)
            if (k.first + k.second == t) s += v;
        return s;
    }
    bool differentials_vanish() const {
        for (auto& [k, d] : differentials)
            if (!d.is_zero()) return false;
        return true;
    }
    std::vector<int> nonzero_weights() const {
        std::vector<int> out;
        for (auto& [k, v] : dims)
            if (v && std::find(out.begin(), out.end(), k.first) == out.end()) out.push_back(k.first);
        return out;
    }
};

struct SpectralSequence {
    std::vector<SpectralPage> pages;       // r = 0 .. width + 1
    std::map<int, std::size_t> homology;   // dim H^t of the total complex
    bool converged = true;                 // sum of E_infinity in degree t equals dim H^t
    bool pages_consistent = true;          // E_{r+1} = H(E_r, d_r) by dimension
    std::optional<int> collapse_page;      // first r >= 1 with d_r' = 0 for all r' >= r

    const SpectralPage& page(int r) const { return pages.at(std::min<std::size_t>(r, pages.size() - 1)); }
    const SpectralPage& infinity() const { return pages.back(); }
};

namespace detail {

inline SparseVec lift(const std::vector<std::size_t>& coords, const SparseVec& v) {
    SparseVec out;
    for (auto& [k, c] : v) out.emplace_back(coords[k], c);
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
}

struct DegreeData {
    int t = 0;
    std::size_t dim = 0;
    std::vector<int> weights;
    SparseMatrix d;  // to degree t+1
    std::vector<int> next_weights;
};

// Basis of {x in F^w : dx in F^target} in degree t.
inline std::vector<SparseVec> cycles(const DegreeData& g, int w, int target) {
    std::vector<std::size_t> dom, cod;
    for (std::size_t k = 0; k < g.dim; ++k)
        if (g.weights[k] >= w) dom.push_back(k);
    if (dom.empty()) return {};
    for (std::size_t k = 0; k < g.next_weights.size(); ++k)
        if (g.next_weights[k] < target) cod.push_back(k);
    std::vector<SparseVec> out;
    if (cod.empty()) {
        for (auto k : dom) out.push_back({{k, Scalar(1)}});
        return out;
    }
    std::map<std::size_t, std::size_t> row_of;
    for (std::size_t i = 0; i < cod.size(); ++i) row_of[cod[i]] = i;
    std::vector<SparseVec> cols;
    for (auto k : dom) {
        std::map<std::size_t, Scalar> m;
        for (auto& [row, v] : g.d.column(k)) {
            auto it = row_of.find(row);
            if (it != row_of.end()) m[it->second] = v;
        }
        cols.push_back(make_sparse(std::move(m)));
    }
    for (auto& v : rank_kernel(SparseMatrix::from_columns(cod.size(), cols)).kernel) out.push_back(lift(dom, v));
    return out;
}

inline std::vector<SparseVec> image(const SparseMatrix& d, const std::vector<SparseVec>& xs) {
    std::vector<SparseVec> out;
    for (auto& x : xs) out.push_back(d.apply(x));
    return out;
}

struct Quotient {
    std::vector<SparseVec> denominator;  // echelon basis
    std::vector<SparseVec> reps;         // complement inside the numerator
};

inline Quotient quotient(const std::vector<SparseVec>& num, const std::vector<SparseVec>& den, std::size_t width) {
    Quotient q;
    q.denominator = span_basis(den, width);
    std::vector<SparseVec> acc = q.denominator;
    std::size_t rank0 = acc.size();
    for (auto& z : num) {
        acc.push_back(z);
        std::size_t r = span_rank(acc, width);
        if (r > rank0) {
            q.reps.push_back(z);
            rank0 = r;
        } else {
            acc.pop_back();
        }
    }
    if (span_rank(acc, width) != span_rank([&] {
            auto all = num;
            all.insert(all.end(), den.begin(), den.end());
            return all;
        }(), width))
        throw ComplexViolation("page denominator is not inside the cycles");
    return q;
}

}  // namespace detail

inline SpectralSequence pages(const FilteredComplex& fc) {
    fc.validate();
    SpectralSequence ss;
    std::vector<int> degs = fc.degrees();
    if (degs.empty()) {
        ss.pages.push_back({});
        ss.pages.back().stabilized = true;
        ss.collapse_page = 1;
        return ss;
    }
    int wmin = fc.min_weight(), wmax = fc.max_weight();
    int width = wmax - wmin;
    int tmin = degs.front() - 1, tmax = degs.back() + 1;
    std::map<int, detail::DegreeData> data;
    auto weights_of = [&](int t) {
        std::vector<int> w(fc.dim(t));
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = fc.weight(t, k);
        return w;
    };
    for (int t = tmin; t <= tmax; ++t) {
        detail::DegreeData g;
        g.t = t;
        g.dim = fc.dim(t);
        g.weights = weights_of(t);
        g.d = fc.differential(t);
        g.next_weights = weights_of(t + 1);
        data[t] = std::move(g);
    }
    for (int t = tmin + 1; t < tmax; ++t) ss.homology[t] = homology_dim(fc.differential(t), fc.differential(t - 1));

    // Z_r^w with r <= 0 is F^w; F^w for w below the weight range is everything.
    auto Z = [&](int t, int w, int r) -> std::vector<SparseVec> {
        if (w > wmax || fc.dim(t) == 0) return {};
        return detail::cycles(data.at(t), std::max(w, wmin), w + std::max(r, 0));
    };

    for (int r = 0; r <= width + 1; ++r) {
        SpectralPage page;
        page.r = r;
        std::map<std::pair<int, int>, detail::Quotient> quot;
        for (int t = tmin + 1; t < tmax; ++t)
            for (int w = wmin; w <= wmax; ++w) {
                auto num = Z(t, w, r);
                auto den = Z(t, w + 1, r - 1);
                auto bd = detail::image(fc.differential(t - 1), Z(t - 1, w - r + 1, r - 1));
                den.insert(den.end(), bd.begin(), bd.end());
                auto q = detail::quotient(num, den, fc.dim(t));
                page.dims[{w, t - w}] = q.reps.size();
                quot[{w, t}] = std::move(q);
            }
        // d_r : E_r^{w,t} -> E_r^{w+r,t+1}
        for (auto& [key, q] : quot) {
            auto [w, t] = key;
            auto target = quot.find({w + r, t + 1});
            std::size_t rows = target == quot.end() ? 0 : target->second.reps.size();
            SparseMatrix m(rows, q.reps.size());
            if (rows && !q.reps.empty()) {
                const auto& tq = target->second;
                std::vector<SparseVec> span = tq.denominator;
                span.insert(span.end(), tq.reps.begin(), tq.reps.end());
                for (std::size_t c = 0; c < q.reps.size(); ++c) {
                    SparseVec dx = fc.differential(t).apply(q.reps[c]);
                    auto coeffs = solve_in_span(span, dx, fc.dim(t + 1));
                    if (!coeffs) throw ComplexViolation("d of a page cycle leaves the target cycles");
                    std::map<std::size_t, Scalar> col;
                    for (std::size_t k = 0; k < tq.reps.size(); ++k) col[k] = (*coeffs)[tq.denominator.size() + k];
                    m.set_column(c, make_sparse(std::move(col)));
                }
            }
            page.differentials.emplace(key, std::move(m));
        }
        ss.pages.push_back(std::move(page));
    }

    // E_{r+1} = H(E_r, d_r)
    for (std::size_t i = 0; i + 1 < ss.pages.size(); ++i) {
        const auto& P = ss.pages[i];
        int r = P.r;
        for (int t = tmin + 1; t < tmax; ++t)
            for (int w = wmin; w <= wmax; ++w) {
                std::size_t here = P.at(w, t - w);
                std::size_t out_rank = 0, in_rank = 0;
                auto o = P.differentials.find({w, t});
                if (o != P.differentials.end()) out_rank = rank(o->second);
                auto in = P.differentials.find({w - r, t - 1});
                if (in != P.differentials.end()) in_rank = rank(in->second);
                if (here - out_rank - in_rank != ss.pages[i + 1].at(w, t - w)) ss.pages_consistent = false;
            }
    }
    for (auto& [t, h] : ss.homology)
        if (ss.infinity().total(t) != h) ss.converged = false;
    for (int i = static_cast<int>(ss.pages.size()) - 1; i >= 0; --i) {
        if (!ss.pages[i].differentials_vanish()) break;
        ss.pages[i].stabilized = true;
        if (ss.pages[i].r >= 1) ss.collapse_page = ss.pages[i].r;
    }
    return ss;
}

// ----------------------------------------------------------------------------
// Filtration of the delta complex on the conic model.
//
// For fixed k the spaces P_l = Omega^{k+l}_l (homogeneity l) form a cochain
// complex in degree t = -l under delta, filtered by transverse degree s.
// delta_F preserves s and delta_{-2,1} raises it by one.

struct PoissonFiltration {
    FilteredComplex complex;
    int k = 0;
    int l_min = 0;
    int l_max = 0;
    std::vector<int> compared;  // homogeneities where E_infinity is compared to the direct homology
};

inline PoissonFiltration poisson_filtration(const ModelPtr& m, int k, const ModeWindow& w) {
    poisson::require_conic(m);
    w.check();
    PoissonFiltration pf;
    pf.k = k;
    pf.complex = FilteredComplex(m->field);
    int top = m->generator_count();
    pf.l_min = std::max(-k, w.l_min);
    pf.l_max = std::min(top - k, w.l_max);
    if (pf.l_min > pf.l_max) throw WindowError("homogeneity window misses the degree range of the complex");
    std::map<int, Basis> bases;
    for (int l = pf.l_max; l >= pf.l_min; --l) {
        std::vector<FormMonomial> items;
        for (auto& b : enumerate_blocks(*m, w)) {
            auto p = poisson::detail::homogeneous_piece(*m, b, k + l, l);
            items.insert(items.end(), p.begin(), p.end());
        }
        for (auto& x : items) pf.complex.add(-l, bidegree(*m, x.mask).s, monomial_name(*m, x));
        bases.emplace(l, Basis(std::move(items)));
    }
    LinearOp d = [](const Form& f) { return poisson::delta(f); };
    for (int l = pf.l_max; l > pf.l_min; --l) pf.complex.set_differential(-l, operator_matrix(m, d, bases.at(l), bases.at(l - 1)));
    for (int l = pf.l_min; l <= pf.l_max; ++l) {
        bool lower_ok = l - 1 >= pf.l_min || l - 1 < -k;
        bool upper_ok = l + 1 <= pf.l_max || l + 1 > top - k;
        if (lower_ok && upper_ok) pf.compared.push_back(l);
    }
    return pf;
}

struct PoissonSpectralReport {
    int k = 0;
    SpectralSequence ss;
    std::vector<int> compared;          // homogeneities with both neighbours inside the window
    std::vector<int> e1_weights;        // weights carrying nonzero E_1 in the compared degrees
    bool single_row = false;
    bool collapses_at_e1 = false;       // d_r = 0 for all r >= 1
    std::map<int, std::size_t> e_infinity;  // by homogeneity l
    std::map<int, std::size_t> direct;      // homogeneous delta-homology
    bool matches_direct = true;
};

inline PoissonSpectralReport poisson_spectral_check(const ModelPtr& m, int k, const ModeWindow& w) {
    auto pf = poisson_filtration(m, k, w);
    PoissonSpectralReport rep;
    rep.k = k;
    rep.ss = pages(pf.complex);
    // degrees at the window edge lack a neighbour, so their E_1 is not that of the full complex
    rep.compared = pf.compared;
    std::set<int> weights;
    for (auto& [key, v] : rep.ss.page(1).dims) {
        int l = -(key.first + key.second);
        if (v && std::find(pf.compared.begin(), pf.compared.end(), l) != pf.compared.end()) weights.insert(key.first);
    }
    rep.e1_weights.assign(weights.begin(), weights.end());
    rep.single_row = rep.e1_weights.size() <= 1;
    rep.collapses_at_e1 = rep.ss.collapse_page.has_value() && *rep.ss.collapse_page <= 1;
    for (int l : pf.compared) {
        rep.e_infinity[l] = rep.ss.infinity().total(-l);
        rep.direct[l] = poisson::homogeneous_poisson_dims(m, k + l, l, w).total;
        if (rep.e_infinity[l] != rep.direct[l]) rep.matches_direct = false;
    }
    return rep;
}

}  // namespace foliated::specseq
