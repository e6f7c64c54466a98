#pragma once

// Matrices of form-valued linear operators on finite monomial bases.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "foliated/form.hpp"
#include "foliated/linalg.hpp"

namespace foliated {

using LinearOp = std::function<Form(const Form&)>;

struct Basis {
    std::vector<FormMonomial> items;
    std::map<FormMonomial, std::size_t> index;

    Basis() = default;
    explicit Basis(std::vector<FormMonomial> xs) : items(std::move(xs)) {
        for (std::size_t k = 0; k < items.size(); ++k) index.emplace(items[k], k);
    }
    std::size_t size() const { return items.size(); }
    bool contains(const FormMonomial& x) const { return index.count(x) > 0; }
};

inline SparseVec to_vector(const Form& f, const Basis& b) {
    std::map<std::size_t, Scalar> m;
    for (auto& [x, v] : f.terms()) {
        auto it = b.index.find(x);
        if (it == b.index.end())
            throw ComplexViolation("operator output " + monomial_name(*f.model(), x) + " leaves the expected graded piece");
        m[it->second] = v;
    }
    return make_sparse(std::move(m));
}

inline Form from_vector(const ModelPtr& model, const SparseVec& v, const Basis& b) {
    Form f(model);
    for (auto& [k, c] : v) f.add(b.items.at(k), c);
    return f;
}

inline SparseMatrix operator_matrix(const ModelPtr& model, const LinearOp& op, const Basis& dom, const Basis& cod) {
    std::vector<SparseVec> cols;
    cols.reserve(dom.size());
    for (auto& x : dom.items) cols.push_back(to_vector(op(Form::monomial(model, x)), cod));
    return SparseMatrix::from_columns(cod.size(), std::move(cols));
}

// Basis vectors of ker(out) modulo im(in), as representatives in the middle space.
inline std::vector<SparseVec> homology_representatives(const SparseMatrix& out, const SparseMatrix& in) {
    if (!(out * in).is_zero()) throw ComplexViolation("composite of consecutive differentials is nonzero (d^2 != 0)");
    std::size_t width = out.cols();
    auto kernel = rank_kernel(out).kernel;
    std::vector<SparseVec> acc = span_basis(in.columns(), width);
    std::size_t r = acc.size();
    std::vector<SparseVec> reps;
    for (auto& v : kernel) {
        acc.push_back(v);
        std::size_t r2 = span_rank(acc, width);
        if (r2 > r) {
            reps.push_back(v);
            r = r2;
        } else {
            acc.pop_back();
        }
    }
    return reps;
}

}  // namespace foliated
