#pragma once

// Truncated longitudinal complete symbols on a Kronecker torus.
//
// A symbol is a finite sum of terms c * |xi|^j * e_m on the component
// sign = +1 (xi > 0) or sign = -1 (xi < 0).  The product is the expansion
//   a o b = sum_{k>=0} (1/k!) d_xi^k a * D_t^k b,   D_t e_m = (m.alpha) e_m,
// cut at depth K.  On the negative component d_xi^k |xi|^j = (-1)^k j^(k) |xi|^(j-k).
// Every symbol carries a watermark: its stored terms are exact at orders >= watermark.

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "foliated/errors.hpp"
#include "foliated/linalg.hpp"
#include "foliated/model.hpp"
#include "foliated/scalar.hpp"

namespace foliated::symbols {

#ifdef FOLIATED_ENABLE_FAULTS
namespace faults {
// Negative control: when set, the k = 2 term of the product is doubled.
inline bool corrupt_composition = false;
}  // namespace faults
#endif

struct SymbolKey {
    int sign = 1;
    int order = 0;
    std::vector<int> mode;
    auto operator<=>(const SymbolKey&) const = default;
};

inline constexpr int kNothingValid = INT_MAX / 2;

class Symbol {
public:
    Symbol() = default;
    explicit Symbol(ModelPtr m, int j_min = -16, int j_max = 16) : model_(std::move(m)), j_min_(j_min), j_max_(j_max) {
        if (!model_ || model_->family != Family::kronecker_torus) throw UnsupportedModel("symbols live on a Kronecker torus");
        if (j_min > j_max) throw WindowError("empty order window");
    }

    static Symbol monomial(const ModelPtr& m, int sign, int order, std::vector<int> mode, const Scalar& c = Scalar(1)) {
        Symbol s(m);
        if (mode.empty()) mode.assign(m->n, 0);
        s.add({sign, order, std::move(mode)}, c);
        return s;
    }
    // c |xi|^j e_m on both components.
    static Symbol both(const ModelPtr& m, int order, std::vector<int> mode = {}, const Scalar& c = Scalar(1)) {
        return monomial(m, 1, order, mode, c) + monomial(m, -1, order, mode, c);
    }

    const ModelPtr& model() const { return model_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    std::optional<int> watermark() const { return watermark_; }
    const std::vector<std::string>& truncations() const { return truncations_; }
    const std::map<SymbolKey, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const SymbolKey& k, const Scalar& c) {
        if (static_cast<int>(k.mode.size()) != model_->n) throw ShapeError("mode vector has wrong length");
        if (k.sign != 1 && k.sign != -1) throw ShapeError("symbol component must be +1 or -1");
        if (c.is_zero()) return;
        if (k.order > j_max_) {
            truncations_.push_back("dropped order " + std::to_string(k.order) + " above window " + std::to_string(j_max_));
            watermark_ = kNothingValid;
            return;
        }
        if (k.order < j_min_) {
            raise_watermark_to(j_min_);
            return;
        }
        if (watermark_ && k.order < *watermark_) return;
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    Scalar coeff(int sign, int order, const std::vector<int>& mode) const {
        auto it = terms_.find({sign, order, mode});
        return it == terms_.end() ? Scalar() : it->second;
    }

    // Raise the watermark (never lowers it) and discard untrusted terms.
    void raise_watermark_to(int w) {
        if (watermark_ && *watermark_ >= w) return;
        watermark_ = w;
        std::erase_if(terms_, [w](auto& kv) { return kv.first.order < w; });
    }
    void merge_metadata(const Symbol& o) {
        if (o.watermark_) raise_watermark_to(*o.watermark_);
        truncations_.insert(truncations_.end(), o.truncations_.begin(), o.truncations_.end());
    }

    bool valid_at(int order) const { return (!watermark_ || order >= *watermark_) && order >= j_min_ && order <= j_max_; }

    std::optional<int> order(int sign = 0) const {
        std::optional<int> o;
        for (auto& [k, v] : terms_)
            if (sign == 0 || k.sign == sign) o = o ? std::max(*o, k.order) : k.order;
        return o;
    }

    Symbol& operator+=(const Symbol& o) {
        check_model(o);
        j_min_ = std::min(j_min_, o.j_min_);
        j_max_ = std::max(j_max_, o.j_max_);
        merge_metadata(o);
        for (auto& [k, v] : o.terms_) add(k, v);
        return *this;
    }
    Symbol& operator-=(const Symbol& o) { return *this += Scalar(-1) * o; }
    friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
    friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
    friend Symbol operator*(const Scalar& c, const Symbol& a) {
        Symbol r = a;
        r.terms_.clear();
        if (!c.is_zero())
            for (auto& [k, v] : a.terms_) r.terms_.emplace(k, c * v);
        return r;
    }

    // Restriction to one component.
    Symbol component(int sign) const {
        Symbol r = *this;
        std::erase_if(r.terms_, [sign](auto& kv) { return kv.first.sign != sign; });
        return r;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [k, v] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + v.to_string() + ")*|xi|^" + std::to_string(k.order) + "*e(";
            for (std::size_t j = 0; j < k.mode.size(); ++j) s += (j ? "," : "") + std::to_string(k.mode[j]);
            s += ")" + std::string(k.sign > 0 ? "[+]" : "[-]");
        }
        return s;
    }

    void check_model(const Symbol& o) const {
        if (model_ != o.model_) throw ModelMismatch("symbols belong to different models");
    }

private:
    ModelPtr model_;
    int j_min_ = -16;
    int j_max_ = 16;
    std::optional<int> watermark_;
    std::vector<std::string> truncations_;
    std::map<SymbolKey, Scalar> terms_;
};

// Coefficientwise equality at every order >= bound (and above both watermarks).
inline bool equal_above(const Symbol& a, const Symbol& b, int bound) {
    int lo = bound;
    if (a.watermark()) lo = std::max(lo, *a.watermark());
    if (b.watermark()) lo = std::max(lo, *b.watermark());
    std::map<SymbolKey, Scalar> diff;
    for (auto& [k, v] : a.terms())
        if (k.order >= lo) diff[k] += v;
    for (auto& [k, v] : b.terms())
        if (k.order >= lo) diff[k] -= v;
    for (auto& [k, v] : diff)
        if (!v.is_zero()) return false;
    return true;
}

namespace detail {

inline Scalar falling(int j, int k) {
    mpz_class r = 1;
    for (int i = 0; i < k; ++i) r *= j - i;
    return Scalar(mpq_class(r));
}

inline Scalar inverse_factorial(int k) {
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return Scalar(mpq_class(mpz_class(1), f));
}

inline std::vector<int> add_modes(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] + b[j];
    return r;
}

inline void max_into(std::optional<int>& w, int v) { w = w ? std::max(*w, v) : v; }

}  // namespace detail

inline Symbol compose(const Symbol& a, const Symbol& b, int depth) {
    a.check_model(b);
    if (depth < 0) throw ValidationError("expansion depth must be nonnegative");
    const Model& M = *a.model();
    Symbol r(a.model(), std::min(a.j_min(), b.j_min()), std::max(a.j_max(), b.j_max()));

    // Orders below which the result is not exact.
    std::optional<int> wm;
    for (int s : {1, -1}) {
        auto ta = a.order(s), tb = b.order(s);
        if (a.watermark() && tb) detail::max_into(wm, *a.watermark() + *tb);
        if (b.watermark() && ta) detail::max_into(wm, *b.watermark() + *ta);
        // terms with k > depth are lost where j^(depth+1) != 0 and D_t b != 0
        std::optional<int> top_nz;
        for (auto& [k, v] : b.terms())
            if (k.sign == s && !M.pairing(k.mode).is_zero()) detail::max_into(top_nz, k.order);
        if (!top_nz) continue;
        for (auto& [k, v] : a.terms())
            if (k.sign == s && !detail::falling(k.order, depth + 1).is_zero()) detail::max_into(wm, k.order + *top_nz - depth);
    }
    if (a.watermark() && *a.watermark() >= kNothingValid) wm = kNothingValid;
    if (b.watermark() && *b.watermark() >= kNothingValid) wm = kNothingValid;
    if (wm) r.raise_watermark_to(*wm);
    r.merge_metadata(a);
    r.merge_metadata(b);

    for (auto& [ka, va] : a.terms())
        for (auto& [kb, vb] : b.terms()) {
            if (ka.sign != kb.sign) continue;
            Scalar mu = M.pairing(kb.mode);
            auto mode = detail::add_modes(ka.mode, kb.mode);
            Scalar base = va * vb;
            Scalar mu_k(1);
            for (int k = 0; k <= depth; ++k) {
                Scalar f = detail::falling(ka.order, k);
                if (f.is_zero()) break;
                if (k > 0 && mu.is_zero()) break;
                Scalar c = base * f * mu_k * detail::inverse_factorial(k);
                if (ka.sign < 0 && k % 2) c = -c;
#ifdef FOLIATED_ENABLE_FAULTS
                if (faults::corrupt_composition && k == 2) c = Scalar(2) * c;
#endif
                r.add({ka.sign, ka.order + kb.order - k, mode}, c);
                mu_k *= mu;
            }
        }
    return r;
}

inline Symbol commutator(const Symbol& a, const Symbol& b, int depth) { return compose(a, b, depth) - compose(b, a, depth); }

// Mode-0 coefficient of the order -1 term on one component.
inline Scalar residue_trace(const Symbol& a, int sign) {
    if (sign != 1 && sign != -1) throw ValidationError("trace sign must be +1 or -1");
    if (!a.valid_at(-1)) throw TruncationError("order -1 is below the validity watermark");
    return a.coeff(sign, -1, std::vector<int>(a.model()->n, 0));
}

// ----------------------------------------------------------------------------
// Derivations

enum class DerivationKind { transverse, leafwise, radial };

struct Derivation {
    DerivationKind kind = DerivationKind::leafwise;
    int index = 0;  // transverse direction 1..n-1

    std::string name() const {
        switch (kind) {
            case DerivationKind::transverse: return "delta_" + std::to_string(index);
            case DerivationKind::leafwise: return "delta";
            case DerivationKind::radial: return "delta_r";
        }
        return "?";
    }
    auto operator<=>(const Derivation&) const = default;
};

// delta_1 .. delta_{n-1}, delta, delta_r.
inline std::vector<Derivation> all_derivations(const Model& m) {
    std::vector<Derivation> out;
    for (int i = 1; i < m.n; ++i) out.push_back({DerivationKind::transverse, i});
    out.push_back({DerivationKind::leafwise, 0});
    out.push_back({DerivationKind::radial, 0});
    return out;
}

inline Derivation derivation_from_name(const Model& m, const std::string& s) {
    for (auto& d : all_derivations(m))
        if (d.name() == s) return d;
    throw ValidationError("unknown derivation " + s);
}

// Torus axis differentiated by the i-th transverse derivation: the dual vector of eta_i.
inline int transverse_axis(const Model& m, int i) {
    int seen = 0;
    for (auto& g : m.frame.generators)
        if (g.role == Role::eta && ++seen == i) return g.index;
    throw ValidationError("no transverse direction " + std::to_string(i));
}

// delta_r(a) = sum_{k>=1} ((-1)^(k-1)/k) xi^(-k) D_t^k a, with xi^(-k) = sign^k |xi|^(-k).
inline Symbol apply_derivation(const Derivation& D, const Symbol& a, int depth) {
    const Model& M = *a.model();
    Symbol r(a.model(), a.j_min(), a.j_max());
    r.merge_metadata(a);
    switch (D.kind) {
        case DerivationKind::transverse: {
            int axis = transverse_axis(M, D.index);
            for (auto& [k, v] : a.terms()) r.add(k, Scalar(k.mode[axis]) * v);
            break;
        }
        case DerivationKind::leafwise:
            for (auto& [k, v] : a.terms()) r.add(k, M.pairing(k.mode) * v);
            break;
        case DerivationKind::radial: {
            if (depth < 1) throw TruncationError("the radial derivation needs depth at least 1");
            std::optional<int> wm;
            for (auto& [k, v] : a.terms())
                if (!M.pairing(k.mode).is_zero()) detail::max_into(wm, k.order - depth);
            if (wm) r.raise_watermark_to(*wm);
            for (auto& [k, v] : a.terms()) {
                Scalar mu = M.pairing(k.mode);
                if (mu.is_zero()) continue;
                Scalar mu_k(1);
                for (int j = 1; j <= depth; ++j) {
                    mu_k *= mu;
                    Scalar c = Scalar(mpq_class(j % 2 ? 1 : -1, j)) * mu_k * v;
                    if (k.sign < 0 && j % 2) c = -c;
                    r.add({k.sign, k.order - j, k.mode}, c);
                }
            }
            break;
        }
    }
    return r;
}

// ----------------------------------------------------------------------------
// Cocycles: (i_{D_1} ... i_{D_l} tau)(a_0, ..., a_l) antisymmetrized over the
// derivation slots, sum_sigma sgn(sigma) tau(a_0 D_sigma1(a_1) ... D_sigmal(a_l)).

inline Scalar cocycle_evaluate(const std::vector<Derivation>& dirs, int sign, const std::vector<Symbol>& args, int depth) {
    if (args.size() != dirs.size() + 1) throw ShapeError("a cocycle with l derivations takes l + 1 arguments");
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
            if (dirs[i] == dirs[j]) throw ValidationError("cocycle derivations must be distinct");
    std::vector<int> perm(dirs.size());
    std::iota(perm.begin(), perm.end(), 0);
    Scalar total;
    do {
        int inv = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) ++inv;
        Symbol prod = args[0];
        for (std::size_t i = 0; i < dirs.size(); ++i) prod = compose(prod, apply_derivation(dirs[perm[i]], args[i + 1], depth), depth);
        Scalar t = residue_trace(prod, sign);
        total += inv % 2 ? -t : t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Hochschild coboundary of the cocycle evaluated on l + 2 arguments.
inline Scalar coboundary_evaluate(const std::vector<Derivation>& dirs, int sign, const std::vector<Symbol>& args, int depth) {
    std::size_t n = args.size();
    if (n != dirs.size() + 2) throw ShapeError("the coboundary takes l + 2 arguments");
    Scalar total;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::vector<Symbol> face;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) face.push_back(compose(args[i], args[i + 1], depth));
            else if (j != i + 1) face.push_back(args[j]);
        }
        Scalar v = cocycle_evaluate(dirs, sign, face, depth);
        total += i % 2 ? -v : v;
    }
    std::vector<Symbol> last{compose(args[n - 1], args[0], depth)};
    for (std::size_t j = 1; j + 1 < n; ++j) last.push_back(args[j]);
    Scalar v = cocycle_evaluate(dirs, sign, last, depth);
    total += (n - 1) % 2 ? -v : v;
    return total;
}

// ----------------------------------------------------------------------------
// Random symbols and the verification report

struct RandomSymbolSpec {
    int bound = 1;      // |m_j| <= bound
    int order_min = -3;
    int order_max = 2;
    int coeff = 3;      // coefficients in [-coeff, coeff]
    int terms = 4;
};

inline Symbol random_symbol(const ModelPtr& m, std::mt19937_64& rng, const RandomSymbolSpec& spec = {}, int sign = 0) {
    std::uniform_int_distribution<int> mode(-spec.bound, spec.bound), ord(spec.order_min, spec.order_max),
        c(-spec.coeff, spec.coeff), sg(0, 1);
    Symbol s(m);
    for (int t = 0; t < spec.terms; ++t) {
        std::vector<int> md(m->n);
        for (auto& x : md) x = mode(rng);
        int o = ord(rng);
        int sgn = sign ? sign : (sg(rng) ? 1 : -1);
        s.add({sgn, o, md}, Scalar(c(rng)));
    }
    return s;
}

struct Check {
    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::size_t skipped = 0;  // instances with the tested order below the watermark
    std::string counterexample;

    void fail(const std::string& why) {
        if (passed) counterexample = why;
        passed = false;
    }
};

struct CocycleCount {
    int l = 0;
    std::size_t cocycles = 0;       // 2 C(n+1, l)
    std::size_t rank = 0;           // rank of the evaluation matrix
    std::size_t tuples = 0;             // tuples evaluated
    std::size_t tuples_available = 0;   // size of the crafted family
    std::size_t predicted_hh = 0;   // filled by the caller from the Hochschild prediction
    bool coboundary_checked = false;
    bool coboundary_vanishes = true;
};

struct SymbolsReport {
    std::uint64_t seed = 0;
    int depth = 0;
    std::size_t trials = 0;
    RandomSymbolSpec generator;
    std::vector<Check> checks;
    std::vector<CocycleCount> cocycles;
    std::size_t trace_space_dim = 0;  // rank of (tau_+, tau_-) on test symbols
    bool collapse_certificate = false;
    std::string independence_scope =
        "linear independence of the cocycles as cochains, by rank of an evaluation matrix; "
        "independence of their Hochschild classes is not established by this computation";
    std::string tuple_family =
        "(|xi|^j e_{-(m_1+...+m_l)}, e_{m_1}, ..., e_{m_l}) on one component, j in {-1,0,1,2}, "
        "m_i among unit vectors and their pairwise sums and differences";

    bool all_passed() const {
        for (auto& c : checks)
            if (!c.passed) return false;
        for (auto& c : cocycles)
            if (!c.coboundary_vanishes) return false;
        return true;
    }
};

namespace detail {

inline std::vector<std::vector<Derivation>> subsets(const std::vector<Derivation>& all, int l) {
    std::vector<std::vector<Derivation>> out;
    int n = static_cast<int>(all.size());
    if (l > n) return out;
    std::vector<int> idx(l);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        std::vector<Derivation> s;
        for (int i : idx) s.push_back(all[i]);
        out.push_back(s);
        int i = l - 1;
        while (i >= 0 && idx[i] == n - l + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < l; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

inline std::vector<std::vector<int>> crafted_modes(int n) {
    std::vector<std::vector<int>> out;
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        out.push_back(e);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<int> s(n, 0), d(n, 0);
            s[i] = s[j] = 1;
            d[i] = 1;
            d[j] = -1;
            out.push_back(s);
            out.push_back(d);
        }
    return out;
}

}  // namespace detail

// Tuples of the crafted family for l derivations.
inline std::vector<std::pair<int, std::vector<Symbol>>> crafted_tuples(const ModelPtr& m, int l) {
    auto modes = detail::crafted_modes(m->n);
    std::vector<std::pair<int, std::vector<Symbol>>> out;
    std::vector<std::size_t> idx(l, 0);
    for (;;) {
        std::vector<int> total(m->n, 0);
        for (int i = 0; i < l; ++i) total = detail::add_modes(total, modes[idx[i]]);
        for (int& x : total) x = -x;
        for (int sign : {1, -1})
            for (int j = -1; j <= 2; ++j) {
                std::vector<Symbol> args{Symbol::monomial(m, sign, j, total)};
                for (int i = 0; i < l; ++i) args.push_back(Symbol::monomial(m, sign, 0, modes[idx[i]]));
                out.push_back({sign, std::move(args)});
            }
        int i = l - 1;
        while (i >= 0 && idx[i] + 1 == modes.size()) idx[i--] = 0;
        if (i < 0) break;
        ++idx[i];
    }
    return out;
}

inline SymbolsReport verify_traces_and_collapse(const ModelPtr& m, std::size_t trials = 100, int depth = 12,
                                                std::uint64_t seed = 1, int max_coboundary_l = 2,
                                                const RandomSymbolSpec& gen = {}) {
    if (!m || m->family != Family::kronecker_torus) throw UnsupportedModel("symbols live on a Kronecker torus");
    if (!m->resonance.empty()) throw UnsupportedModel("the symbol checks need a non-resonant slope");
    SymbolsReport rep;
    rep.seed = seed;
    rep.depth = depth;
    rep.trials = trials;
    rep.generator = gen;
    std::mt19937_64 rng(seed);
    auto derivs = all_derivations(*m);

    auto named = [](const char* n) {
        Check c;
        c.name = n;
        return c;
    };
    Check trace = named("tau_pm([a,b]) = 0"), assoc = named("(a o b) o c = a o (b o c) above the watermark"),
          leib = named("Leibniz rule for every derivation"), comm = named("derivations commute pairwise"),
          split = named("no operation mixes the + and - components"),
          filt = named("order([a,b]) <= order(a) + order(b) - 1");
    for (std::size_t t = 0; t < trials; ++t) {
        Symbol a = random_symbol(m, rng, gen), b = random_symbol(m, rng, gen);
        Symbol c = commutator(a, b, depth);
        for (int s : {1, -1}) {
            if (!c.valid_at(-1)) {
                ++trace.skipped;
                continue;
            }
            ++trace.checked;
            Scalar v = residue_trace(c, s);
            if (!v.is_zero()) trace.fail("a = " + a.to_string() + ", b = " + b.to_string() + ", tau = " + v.to_string());
        }
        for (int s : {1, -1}) {
            auto oa = a.order(s), ob = b.order(s), oc = c.order(s);
            if (!oa || !ob || !oc) continue;
            ++filt.checked;
            if (*oc > *oa + *ob - 1) filt.fail("a = " + a.to_string() + ", b = " + b.to_string());
        }
        // component splitting: products and derivations of one-sided symbols stay one-sided
        Symbol ap = a.component(1), bm = b.component(-1);
        ++split.checked;
        if (!compose(ap, bm, depth).is_zero()) split.fail("a+ o b- is nonzero");
        for (auto& D : derivs)
            if (!apply_derivation(D, ap, depth).component(-1).is_zero()) split.fail(D.name() + " moves a+ to the - side");
        if (t % 4 == 0) {
            Symbol e = random_symbol(m, rng, gen);
            Symbol lhs = compose(compose(a, b, depth), e, depth), rhs = compose(a, compose(b, e, depth), depth);
            ++assoc.checked;
            if (!equal_above(lhs, rhs, INT_MIN / 2)) assoc.fail("a = " + a.to_string() + ", b = " + b.to_string() + ", c = " + e.to_string());
            for (auto& D : derivs) {
                Symbol l = apply_derivation(D, compose(a, b, depth), depth);
                Symbol r = compose(apply_derivation(D, a, depth), b, depth) + compose(a, apply_derivation(D, b, depth), depth);
                ++leib.checked;
                if (!equal_above(l, r, INT_MIN / 2)) leib.fail(D.name() + " on a = " + a.to_string() + ", b = " + b.to_string());
                for (auto& E : derivs) {
                    if (!(D < E)) continue;
                    Symbol x = apply_derivation(D, apply_derivation(E, a, depth), depth);
                    Symbol y = apply_derivation(E, apply_derivation(D, a, depth), depth);
                    ++comm.checked;
                    if (!equal_above(x, y, INT_MIN / 2)) comm.fail(D.name() + ", " + E.name() + " on " + a.to_string());
                }
            }
        }
    }
    rep.checks = {trace, assoc, leib, comm, split, filt};

    // trace space: tau_+ and tau_- on one-sided test symbols
    {
        std::vector<SparseVec> rows;
        for (int s : {1, -1}) {
            std::map<std::size_t, Scalar> row;
            std::size_t col = 0;
            for (int t : {1, -1}) row[col++] = residue_trace(Symbol::monomial(m, t, -1, {}), s);
            rows.push_back(make_sparse(std::move(row)));
        }
        rep.trace_space_dim = span_rank(rows, 2);
    }

    int top = static_cast<int>(derivs.size());
    RandomSymbolSpec small = gen;
    small.terms = 2;
    for (int l = 0; l <= top; ++l) {
        CocycleCount cc;
        cc.l = l;
        auto dirsets = detail::subsets(derivs, l);
        cc.cocycles = 2 * dirsets.size();
        auto tuples = crafted_tuples(m, l);
        cc.tuples_available = tuples.size();
        // Column rank of the evaluation matrix; once it equals the number of
        // cocycles the remaining tuples cannot change it.
        IncrementalSpan span;
        for (auto& [s, args] : tuples) {
            if (span.rank() == cc.cocycles) break;
            ++cc.tuples;
            std::map<std::size_t, Scalar> col;
            for (std::size_t d = 0; d < dirsets.size(); ++d)
                col[2 * d + (s == 1 ? 0 : 1)] = cocycle_evaluate(dirsets[d], s, args, depth);
            span.insert(make_sparse(std::move(col)));
        }
        cc.rank = span.rank();
        if (l <= max_coboundary_l) {
            cc.coboundary_checked = true;
            std::size_t samples = std::max<std::size_t>(1, trials / 20);
            for (auto& dirs : dirsets)
                for (int s : {1, -1})
                    for (std::size_t t = 0; t < samples; ++t) {
                        std::vector<Symbol> args;
                        for (int i = 0; i < l + 2; ++i) args.push_back(random_symbol(m, rng, small));
                        if (!coboundary_evaluate(dirs, s, args, depth).is_zero()) cc.coboundary_vanishes = false;
                    }
        }
        rep.cocycles.push_back(cc);
    }
    return rep;
}

}  // namespace foliated::symbols
