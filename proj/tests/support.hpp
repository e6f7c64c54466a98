#pragma once

#include <string>
#include <vector>

#include "foliated/form.hpp"
#include "foliated/model.hpp"

namespace testing_support {

using namespace foliated;

inline ModelPtr torus(const std::vector<std::string>& alpha, Family family = Family::kronecker_torus) {
    ModelSpec s;
    s.family = family;
    s.field = infer_field(alpha);
    for (auto& a : alpha) s.alpha.push_back(parse_scalar(a, s.field));
    return make_model(s);
}

inline ModelSpec lie_spec(int n, std::vector<std::tuple<int, int, int, long>> brackets, std::vector<int> foliation) {
    ModelSpec s;
    s.family = Family::lie_frame;
    s.lie_dim = n;
    for (auto& [i, j, k, v] : brackets) s.brackets.push_back({i - 1, j - 1, {{k - 1, Scalar(v)}}});
    for (int f : foliation) s.foliation.push_back(f - 1);
    return s;
}

inline ModelPtr so3() { return make_model(lie_spec(3, {{1, 2, 3, 1}, {2, 3, 1, 1}, {3, 1, 2, 1}}, {3})); }
inline ModelPtr heisenberg() { return make_model(lie_spec(3, {{1, 2, 3, 1}}, {3})); }
// [e1,e2] = e3, [e1,e3] = e1 breaks Jacobi.
inline ModelSpec corrupted_spec() { return lie_spec(3, {{1, 2, 3, 1}, {1, 3, 1, 1}}, {3}); }
// [e1,e2] = e1 with F = span(e1), extended conically.
inline ModelPtr conic_affine() {
    ModelSpec s = lie_spec(2, {{1, 2, 1, 1}}, {1});
    s.family = Family::conic_dual;
    return make_model(s);
}

inline FormMonomial mono(const ModelPtr& m, std::vector<int> mode, int xi, int comp, const std::vector<std::string>& gens) {
    std::uint32_t mask = 0;
    for (auto& g : gens) mask |= 1u << m->generator_index(g);
    if (mode.empty()) mode.assign(m->mode_size, 0);
    return {mode, xi, comp, mask};
}

inline Form form(const ModelPtr& m, std::vector<int> mode, int xi, int comp, const std::vector<std::string>& gens,
                 const Scalar& c = Scalar(1)) {
    return Form::monomial(m, mono(m, std::move(mode), xi, comp, gens), c);
}

inline std::size_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace testing_support
