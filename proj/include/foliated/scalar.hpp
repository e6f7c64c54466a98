#pragma once

// Exact scalars in Q(i)(sqrt d1, sqrt d2).
//
// An element is a rational combination of the eight basis monomials
// i^a sqrt(d1)^b sqrt(d2)^c, indexed by the slot a | b<<1 | c<<2.  Only
// nonzero slots are stored, sorted by slot.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <complex>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "foliated/errors.hpp"

namespace foliated {

inline std::int64_t square_free_part(std::int64_t d, std::int64_t* root = nullptr) {
    if (d <= 0) throw FieldError("square root argument must be positive: " + std::to_string(d));
    std::int64_t s = 1, t = 1, n = d;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int k = 0; k < e / 2; ++k) t *= p;
        if (e % 2) s *= p;
    }
    s *= n;
    if (root) *root = t;
    return s;
}

// Coefficient field descriptor.  d1 == 0 means no square roots; d2 == 0 means
// at most one.  The Gaussian unit i is always present.
struct Field {
    std::int64_t d1 = 0;
    std::int64_t d2 = 0;

    Field() = default;
    Field(std::int64_t a, std::int64_t b = 0) : d1(a), d2(b) {
        if (d1 == 0 && d2 != 0) std::swap(d1, d2);
        if (d1 != 0) check(d1);
        if (d2 != 0) {
            check(d2);
            if (d1 == d2) throw FieldError("repeated square root in field descriptor");
            if (d2 < d1) std::swap(d1, d2);
        }
    }

    bool trivial() const { return d1 == 0; }
    int sqrt_count() const { return (d1 != 0) + (d2 != 0); }
    // Degree of the real subfield Q(sqrt d1, sqrt d2) over Q.
    int real_degree() const { return 1 << sqrt_count(); }

    bool operator==(const Field& o) const { return d1 == o.d1 && d2 == o.d2; }
    bool operator!=(const Field& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s = "Q(i)";
        if (d1) s += "(sqrt" + std::to_string(d1);
        if (d2) s += ",sqrt" + std::to_string(d2);
        if (d1) s += ")";
        return s;
    }

    std::string slot_name(int slot) const {
        std::string s;
        auto add = [&](const std::string& f) { s += s.empty() ? f : "*" + f; };
        if (slot & 1) add("i");
        if (slot & 2) add("sqrt" + std::to_string(d1));
        if (slot & 4) add("sqrt" + std::to_string(d2));
        return s;
    }

    // Which field contains this one.  Throws if neither does.
    static Field unify(const Field& a, const Field& b) {
        if (a == b || b.trivial()) return a;
        if (a.trivial()) return b;
        if (a.d2 == 0 && a.d1 == b.d1) return b;
        if (b.d2 == 0 && b.d1 == a.d1) return a;
        throw FieldError("incompatible coefficient fields " + a.to_string() + " and " + b.to_string());
    }

private:
    static void check(std::int64_t d) {
        if (d <= 1) throw FieldError("field square root must be > 1: " + std::to_string(d));
        if (square_free_part(d) != d) throw FieldError("field square root must be square-free: " + std::to_string(d));
    }
};

class Scalar {
public:
    struct Term {
        std::uint8_t slot;
        mpq_class q;
    };

    Scalar() = default;
    Scalar(long v) {
        if (v != 0) terms_.push_back({0, mpq_class(v)});
    }
    Scalar(int v) : Scalar(static_cast<long>(v)) {}
    Scalar(const mpq_class& q) {
        if (q != 0) terms_.push_back({0, q});
    }
    Scalar(long num, long den) : Scalar(make_q(num, den)) {}

    static Scalar i() {
        Scalar s;
        s.terms_.push_back({1, mpq_class(1)});
        return s;
    }
    // sqrt(d) inside field f; d may carry square factors.
    static Scalar sqrt(std::int64_t d, const Field& f) {
        std::int64_t t = 1;
        std::int64_t s = square_free_part(d, &t);
        Scalar r;
        r.field_ = f;
        if (s == 1) return Scalar(static_cast<long>(t));
        if (s == f.d1) {
            r.terms_.push_back({2, mpq_class(t)});
        } else if (s == f.d2) {
            r.terms_.push_back({4, mpq_class(t)});
        } else if (f.d2 != 0) {
            std::int64_t t12 = 1;
            std::int64_t s12 = square_free_part(f.d1 * f.d2, &t12);
            if (s12 != s) throw FieldError("sqrt" + std::to_string(d) + " is not in " + f.to_string());
            r.terms_.push_back({6, mpq_class(t, t12)});
            r.terms_.back().q.canonicalize();
        } else {
            throw FieldError("sqrt" + std::to_string(d) + " is not in " + f.to_string());
        }
        return r;
    }
    static Scalar basis(int slot, const Field& f) {
        if (((slot & 2) && f.d1 == 0) || ((slot & 4) && f.d2 == 0))
            throw FieldError("basis slot outside field " + f.to_string());
        Scalar r;
        r.field_ = f;
        r.terms_.push_back({static_cast<std::uint8_t>(slot), mpq_class(1)});
        return r;
    }

    const Field& field() const { return field_; }
    Scalar& set_field(const Field& f) {
        field_ = Field::unify(field_, f);
        return *this;
    }
    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].slot == 0); }
    bool is_real() const {
        for (auto& t : terms_)
            if (t.slot & 1) return false;
        return true;
    }
    mpq_class coeff(int slot) const {
        for (auto& t : terms_)
            if (t.slot == slot) return t.q;
        return 0;
    }
    mpq_class rational_value() const {
        if (!is_rational()) throw FieldError("scalar is not rational: " + to_string());
        return coeff(0);
    }

    Scalar operator-() const {
        Scalar r = *this;
        for (auto& t : r.terms_) t.q = -t.q;
        return r;
    }

    Scalar& operator+=(const Scalar& o) { return *this = add(*this, o, 1); }
    Scalar& operator-=(const Scalar& o) { return *this = add(*this, o, -1); }
    Scalar& operator*=(const Scalar& o) { return *this = mul(*this, o); }
    Scalar& operator/=(const Scalar& o) { return *this = mul(*this, o.inverse()); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) { return add(a, b, 1); }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return add(a, b, -1); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) { return mul(a, b); }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return mul(a, b.inverse()); }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t k = 0; k < a.terms_.size(); ++k)
            if (a.terms_[k].slot != b.terms_[k].slot || a.terms_[k].q != b.terms_[k].q) return false;
        if (!a.is_rational_or_gaussian() || !b.is_rational_or_gaussian()) Field::unify(a.field_, b.field_);
        return true;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // Flip the sign of every slot containing the given bit (1: i, 2: sqrt d1, 4: sqrt d2).
    Scalar conjugate(int bit) const {
        Scalar r = *this;
        for (auto& t : r.terms_)
            if (t.slot & bit) t.q = -t.q;
        return r;
    }
    Scalar complex_conjugate() const { return conjugate(1); }
    Scalar real_part() const {
        Scalar r;
        r.field_ = field_;
        for (auto& t : terms_)
            if (!(t.slot & 1)) r.terms_.push_back(t);
        return r;
    }
    Scalar imag_part() const {
        Scalar r;
        r.field_ = field_;
        for (auto& t : terms_)
            if (t.slot & 1) r.terms_.push_back({static_cast<std::uint8_t>(t.slot & ~1), t.q});
        return r;
    }

    // Inverse through the tower Q < Q(i) < Q(i,sqrt d1) < Q(i,sqrt d1,sqrt d2):
    // x * s4(x) is fixed by s4, y * s2(y) by s2 and s4, z * s1(z) is rational.
    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("division by zero scalar");
        Scalar x4 = conjugate(4);
        Scalar y = *this * x4;
        Scalar y2 = y.conjugate(2);
        Scalar z = y * y2;
        Scalar z1 = z.conjugate(1);
        Scalar n = z * z1;
        if (!n.is_rational() || n.is_zero()) throw FieldError("norm computation failed for " + to_string());
        Scalar r = x4 * y2 * z1;
        mpq_class inv = 1 / n.coeff(0);
        for (auto& t : r.terms_) t.q *= inv;
        r.field_ = field_;
        return r;
    }

    std::complex<double> to_complex() const {
        double re = 0, im = 0;
        for (auto& t : terms_) {
            double v = t.q.get_d();
            if (t.slot & 2) v *= std::sqrt(static_cast<double>(field_.d1));
            if (t.slot & 4) v *= std::sqrt(static_cast<double>(field_.d2));
            if (t.slot & 1)
                im += v;
            else
                re += v;
        }
        return {re, im};
    }

    // Canonical text form, e.g. "1/2-3*sqrt2+i*sqrt2".  Round-trips through parse_scalar.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const auto& t = terms_[k];
            mpq_class q = t.q;
            bool neg = q < 0;
            if (neg) q = -q;
            if (neg)
                out += "-";
            else if (k > 0)
                out += "+";
            std::string name = field_.slot_name(t.slot);
            if (t.slot == 0) {
                out += q.get_str();
            } else if (q == 1) {
                out += name;
            } else {
                out += q.get_str() + "*" + name;
            }
        }
        return out;
    }

private:
    Field field_;
    std::vector<Term> terms_;

    static mpq_class make_q(long num, long den) {
        if (den == 0) throw std::domain_error("zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }

    bool is_rational_or_gaussian() const {
        for (auto& t : terms_)
            if (t.slot & 6) return false;
        return true;
    }

    static Field result_field(const Scalar& a, const Scalar& b) { return Field::unify(a.field_, b.field_); }

    static Scalar add(const Scalar& a, const Scalar& b, int sign) {
        Scalar r;
        r.field_ = result_field(a, b);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].slot < b.terms_[j].slot)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].slot < a.terms_[i].slot) {
                r.terms_.push_back({b.terms_[j].slot, sign > 0 ? b.terms_[j].q : mpq_class(-b.terms_[j].q)});
                ++j;
            } else {
                mpq_class q = sign > 0 ? mpq_class(a.terms_[i].q + b.terms_[j].q) : mpq_class(a.terms_[i].q - b.terms_[j].q);
                if (q != 0) r.terms_.push_back({a.terms_[i].slot, q});
                ++i;
                ++j;
            }
        }
        return r;
    }

    static Scalar mul(const Scalar& a, const Scalar& b) {
        Scalar r;
        r.field_ = result_field(a, b);
        if (a.terms_.empty() || b.terms_.empty()) return r;
        if (a.terms_.size() == 1 && b.terms_.size() == 1 && a.terms_[0].slot == 0) {
            r.terms_.push_back({b.terms_[0].slot, a.terms_[0].q * b.terms_[0].q});
            return r;
        }
        mpq_class acc[8];
        unsigned used = 0;
        const Field& f = r.field_;
        for (auto& x : a.terms_)
            for (auto& y : b.terms_) {
                int both = x.slot & y.slot;
                mpq_class p = x.q * y.q;
                if (both & 1) p = -p;
                if (both & 2) p *= f.d1;
                if (both & 4) p *= f.d2;
                int s = x.slot ^ y.slot;
                acc[s] += p;
                used |= 1u << s;
            }
        for (int s = 0; s < 8; ++s)
            if ((used >> s & 1) && acc[s] != 0) r.terms_.push_back({static_cast<std::uint8_t>(s), acc[s]});
        return r;
    }
};

inline Scalar pow(const Scalar& x, unsigned e) {
    Scalar r(1);
    r.set_field(x.field());
    Scalar b = x;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

namespace detail {

class ScalarParser {
public:
    ScalarParser(const std::string& s, const Field& f) : s_(s), f_(f) {}

    Scalar parse() {
        skip();
        if (pos_ == s_.size()) fail("empty scalar");
        Scalar v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return v.set_field(f_);
    }

private:
    const std::string& s_;
    Field f_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& m) const {
        throw ParseError("scalar \"" + s_ + "\" at column " + std::to_string(pos_ + 1), m);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Scalar expr() {
        Scalar v;
        bool first = true;
        for (;;) {
            skip();
            int sign = 1;
            if (eat('+')) {
            } else if (eat('-')) {
                sign = -1;
            } else if (!first) {
                break;
            }
            Scalar t = term();
            v = sign > 0 ? v + t : v - t;
            first = false;
        }
        return v;
    }

    Scalar term() {
        Scalar v = factor();
        for (;;) {
            if (eat('*')) {
                v = v * factor();
            } else if (eat('/')) {
                Scalar d = factor();
                if (d.is_zero()) fail("division by zero");
                v = v / d;
            } else {
                return v;
            }
        }
    }

    std::int64_t integer() {
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("expected integer");
        if (pos_ - b > 18) fail("integer too long");
        return std::stoll(s_.substr(b, pos_ - b));
    }

    Scalar factor() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Scalar(mpq_class(s_.substr(b, pos_ - b)));
        }
        if (c == '(') {
            ++pos_;
            Scalar v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (s_.compare(pos_, 4, "sqrt") == 0) {
            pos_ += 4;
            bool paren = eat('(');
            std::int64_t d = integer();
            if (paren && !eat(')')) fail("expected ')'");
            if (d == 0) return Scalar();
            try {
                return Scalar::sqrt(d, f_);
            } catch (const FieldError& e) {
                fail(e.what());
            }
        }
        if (c == 'i' && (pos_ + 1 == s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            return Scalar::i();
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }
};

}  // namespace detail

inline Scalar parse_scalar(const std::string& text, const Field& field = Field()) {
    return detail::ScalarParser(text, field).parse();
}

// Smallest field descriptor containing every sqrt<d> mentioned in the strings.
inline Field infer_field(const std::vector<std::string>& texts) {
    std::set<std::int64_t> roots;
    for (const auto& s : texts) {
        std::size_t p = 0;
        while ((p = s.find("sqrt", p)) != std::string::npos) {
            p += 4;
            while (p < s.size() && (s[p] == '(' || s[p] == ' ')) ++p;
            std::size_t b = p;
            while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
            if (b == p) throw ParseError("scalar \"" + s + "\"", "sqrt without integer argument");
            std::int64_t d = std::stoll(s.substr(b, p - b));
            if (d == 0) continue;
            std::int64_t sf = square_free_part(d);
            if (sf != 1) roots.insert(sf);
        }
    }
    std::vector<std::int64_t> r(roots.begin(), roots.end());
    if (r.empty()) return Field();
    if (r.size() == 1) return Field(r[0]);
    if (r.size() == 2) return Field(r[0], r[1]);
    if (r.size() == 3) {
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                int c = 3 - a - b;
                if (square_free_part(r[a] * r[b]) == r[c]) return Field(r[a], r[b]);
            }
    }
    throw FieldError("square roots do not fit in a biquadratic field");
}

}  // namespace foliated
