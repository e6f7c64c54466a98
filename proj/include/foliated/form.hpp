#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "foliated/errors.hpp"
#include "foliated/model.hpp"
#include "foliated/scalar.hpp"

namespace foliated {

// e_mode * xi^xi * (exterior monomial `mask`) on component `component` (+1 / -1).
struct FormMonomial {
    std::vector<int> mode;
    int xi = 0;
    int component = 1;
    std::uint32_t mask = 0;

    auto operator<=>(const FormMonomial&) const = default;
};

struct Bidegree {
    int r = 0;
    int s = 0;
    auto operator<=>(const Bidegree&) const = default;
};

inline Bidegree bidegree(const Model& m, std::uint32_t mask) {
    std::uint32_t lon = m.longitudinal_mask();
    return {__builtin_popcount(mask & lon), __builtin_popcount(mask & ~lon)};
}

inline int homogeneity(const Model& m, const FormMonomial& x) {
    return x.xi + ((m.dxi >= 0 && (x.mask >> m.dxi & 1)) ? 1 : 0);
}

inline std::string mask_name(const Model& m, std::uint32_t mask) {
    if (!mask) return "1";
    std::string s;
    for (int a = 0; a < m.generator_count(); ++a)
        if (mask >> a & 1) s += (s.empty() ? "" : "^") + m.frame.generators[a].name;
    return s;
}

inline std::string monomial_name(const Model& m, const FormMonomial& x) {
    std::string s;
    if (m.has_modes()) {
        s = "e(";
        for (std::size_t j = 0; j < x.mode.size(); ++j) s += (j ? "," : "") + std::to_string(x.mode[j]);
        s += ")";
    }
    if (m.dxi >= 0 && x.xi != 0) s += (s.empty() ? "" : "*") + std::string("xi^") + std::to_string(x.xi);
    if (x.mask) s += (s.empty() ? "" : "*") + mask_name(m, x.mask);
    if (s.empty()) s = "1";
    if (m.components == 2) s += x.component > 0 ? "[+]" : "[-]";
    return s;
}

inline void check_monomial(const Model& m, const FormMonomial& x) {
    if (static_cast<int>(x.mode.size()) != m.mode_size) throw ShapeError("mode vector has wrong length");
    if (m.components == 1 && x.component != 1) throw ShapeError("model has a single component");
    if (x.component != 1 && x.component != -1) throw ShapeError("component label must be +1 or -1");
    if (m.dxi < 0 && x.xi != 0) throw ShapeError("xi-degree on a model without radial coordinate");
    if (x.mask >> m.generator_count()) throw ShapeError("exterior monomial uses unknown generators");
}

class Form {
public:
    Form() = default;
    explicit Form(ModelPtr m) : model_(std::move(m)) {}

    static Form monomial(const ModelPtr& m, const FormMonomial& x, const Scalar& c = Scalar(1)) {
        check_monomial(*m, x);
        Form f(m);
        if (!c.is_zero()) f.terms_[x] = c;
        return f;
    }
    static Form function(const ModelPtr& m, std::vector<int> mode, int xi = 0, int component = 1) {
        if (mode.empty()) mode.assign(m->mode_size, 0);
        return monomial(m, {std::move(mode), xi, component, 0});
    }
    static Form constant(const ModelPtr& m, const Scalar& c, int component = 1) {
        return monomial(m, {std::vector<int>(m->mode_size, 0), 0, component, 0}, c);
    }
    // A coframe generator on one component, or on all components when component == 0.
    static Form generator(const ModelPtr& m, const std::string& name, int component = 0) {
        int a = m->generator_index(name);
        if (a < 0) throw ShapeError("unknown generator " + name);
        Form f(m);
        for (int c : {1, -1}) {
            if (c == -1 && m->components == 1) break;
            if (component != 0 && c != component) continue;
            f.terms_[{std::vector<int>(m->mode_size, 0), 0, c, 1u << a}] = Scalar(1);
        }
        return f;
    }
    static Form one(const ModelPtr& m) {
        Form f(m);
        for (int c : {1, -1}) {
            if (c == -1 && m->components == 1) break;
            f.terms_[{std::vector<int>(m->mode_size, 0), 0, c, 0}] = Scalar(1);
        }
        return f;
    }

    const ModelPtr& model() const { return model_; }
    const std::map<FormMonomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add(const FormMonomial& x, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(x, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    Scalar coeff(const FormMonomial& x) const {
        auto it = terms_.find(x);
        return it == terms_.end() ? Scalar() : it->second;
    }

    Form& operator+=(const Form& o) {
        adopt(o);
        for (auto& [k, v] : o.terms_) add(k, v);
        return *this;
    }
    Form& operator-=(const Form& o) {
        adopt(o);
        for (auto& [k, v] : o.terms_) add(k, -v);
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(const Scalar& c, const Form& a) {
        Form r(a.model_);
        if (c.is_zero()) return r;
        for (auto& [k, v] : a.terms_) r.terms_.emplace(k, c * v);
        return r;
    }
    Form operator-() const { return Scalar(-1) * *this; }

    friend bool operator==(const Form& a, const Form& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        for (; i != a.terms_.end(); ++i, ++j)
            if (i->first != j->first || i->second != j->second) return false;
        return true;
    }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [k, v] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + v.to_string() + ")*" + monomial_name(*model_, k);
        }
        return s;
    }

private:
    ModelPtr model_;
    std::map<FormMonomial, Scalar> terms_;

    void adopt(const Form& o) {
        if (!model_) model_ = o.model_;
        if (o.model_ && o.model_ != model_) throw ModelMismatch("forms belong to different models");
    }
};

inline void same_model(const Form& a, const Form& b) {
    if (a.model() && b.model() && a.model() != b.model()) throw ModelMismatch("forms belong to different models");
}

// Product of monomials: modes and xi-degrees add; distinct components have disjoint support.
inline bool monomial_product(const FormMonomial& a, const FormMonomial& b, FormMonomial& out, int& sign) {
    if (a.component != b.component) return false;
    sign = wedge_sign(a.mask, b.mask);
    if (!sign) return false;
    out.mode = a.mode;
    for (std::size_t j = 0; j < out.mode.size(); ++j) out.mode[j] += b.mode[j];
    out.xi = a.xi + b.xi;
    out.component = a.component;
    out.mask = a.mask | b.mask;
    return true;
}

inline Form wedge(const Form& a, const Form& b) {
    same_model(a, b);
    Form r(a.model() ? a.model() : b.model());
    FormMonomial x;
    int sign = 0;
    for (auto& [ka, va] : a.terms())
        for (auto& [kb, vb] : b.terms())
            if (monomial_product(ka, kb, x, sign)) r.add(x, Scalar(sign) * va * vb);
    return r;
}

inline Form bidegree_project(const Form& a, int r, int s) {
    Form out(a.model());
    for (auto& [k, v] : a.terms()) {
        Bidegree b = bidegree(*a.model(), k.mask);
        if (b.r == r && b.s == s) out.add(k, v);
    }
    return out;
}

inline Form degree_project(const Form& a, int k) {
    Form out(a.model());
    for (auto& [x, v] : a.terms())
        if (__builtin_popcount(x.mask) == k) out.add(x, v);
    return out;
}

inline std::map<int, Form> homogeneity_decompose(const Form& a) {
    if (!a.model() || a.model()->dxi < 0) throw UnsupportedModel("homogeneity is defined on the conic model only");
    std::map<int, Form> out;
    for (auto& [k, v] : a.terms()) {
        int l = homogeneity(*a.model(), k);
        out.try_emplace(l, a.model()).first->second.add(k, v);
    }
    return out;
}

struct ModeWindow {
    int bound = 1;  // |m_j| <= bound
    int l_min = 0;  // homogeneity range on the conic model
    int l_max = 0;

    void check() const {
        if (bound < 0) throw WindowError("mode bound must be nonnegative");
        if (l_min > l_max) throw WindowError("empty homogeneity range");
    }
};

inline std::vector<std::vector<int>> enumerate_modes(int size, int bound) {
    std::vector<std::vector<int>> out;
    std::vector<int> m(size, -bound);
    if (size == 0) return {{}};
    for (;;) {
        out.push_back(m);
        int j = size - 1;
        while (j >= 0 && m[j] == bound) m[j--] = -bound;
        if (j < 0) break;
        ++m[j];
    }
    return out;
}

// A direct summand preserved by every operator: one Fourier mode on one component.
struct Block {
    std::vector<int> mode;
    int component = 1;
};

inline std::vector<Block> enumerate_blocks(const Model& m, const ModeWindow& w) {
    std::vector<Block> out;
    for (auto& mode : enumerate_modes(m.mode_size, w.bound))
        for (int c : {1, -1}) {
            if (c == -1 && m.components == 1) break;
            out.push_back({mode, c});
        }
    return out;
}

// Basis monomials of bidegree (r, s) and homogeneity l in a block.
inline std::vector<FormMonomial> piece(const Model& m, const Block& b, int r, int s, int l = 0) {
    std::vector<FormMonomial> out;
    if (r < 0 || s < 0) return out;
    int N = m.generator_count();
    for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
        Bidegree d = bidegree(m, mask);
        if (d.r != r || d.s != s) continue;
        int xi = 0;
        if (m.dxi >= 0) xi = l - static_cast<int>(mask >> m.dxi & 1);
        else if (l != 0) continue;
        out.push_back({b.mode, xi, b.component, mask});
    }
    return out;
}

// All bidegrees of total degree k.
inline std::vector<FormMonomial> total_piece(const Model& m, const Block& b, int k, int l = 0) {
    std::vector<FormMonomial> out;
    for (int r = 0; r <= k; ++r) {
        auto p = piece(m, b, r, k - r, l);
        out.insert(out.end(), p.begin(), p.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace foliated
