#pragma once

// Resonance lattices {m in Z^n : m . alpha = 0} and Diophantine certificates
// for real slope vectors with entries in Q(sqrt d1, sqrt d2).

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "foliated/errors.hpp"
#include "foliated/scalar.hpp"

namespace foliated {

using IntVec = std::vector<mpz_class>;

namespace detail {

// Column operations on `a` (rows x n), mirrored on the unimodular `u`, until
// `a` is column-echelon.  Returns the number of nonzero columns.
inline std::size_t column_echelon(std::vector<IntVec>& a, std::vector<IntVec>& u, std::size_t n) {
    std::size_t k = 0;
    auto colop = [&](std::size_t dst, std::size_t src, const mpz_class& q) {
        for (auto& row : a) row[dst] -= q * row[src];
        for (auto& row : u) row[dst] -= q * row[src];
    };
    auto swapc = [&](std::size_t x, std::size_t y) {
        for (auto& row : a) std::swap(row[x], row[y]);
        for (auto& row : u) std::swap(row[x], row[y]);
    };
    for (std::size_t i = 0; i < a.size() && k < n; ++i) {
        for (;;) {
            std::size_t best = n;
            for (std::size_t j = k; j < n; ++j)
                if (a[i][j] != 0 && (best == n || abs(a[i][j]) < abs(a[i][best]))) best = j;
            if (best == n) break;
            swapc(k, best);
            bool done = true;
            for (std::size_t j = k + 1; j < n; ++j) {
                if (a[i][j] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][j].get_mpz_t(), a[i][k].get_mpz_t());
                colop(j, k, q);
                if (a[i][j] != 0) done = false;
            }
            if (done) {
                ++k;
                break;
            }
        }
    }
    return k;
}

// Row Hermite normal form of a lattice basis given as rows.
inline std::vector<IntVec> row_hnf(std::vector<IntVec> b, std::size_t n) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < b.size(); ++c) {
        for (;;) {
            std::size_t best = b.size();
            for (std::size_t i = r; i < b.size(); ++i)
                if (b[i][c] != 0 && (best == b.size() || abs(b[i][c]) < abs(b[best][c]))) best = i;
            if (best == b.size()) goto next_column;
            std::swap(b[r], b[best]);
            bool done = true;
            for (std::size_t i = r + 1; i < b.size(); ++i) {
                if (b[i][c] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), b[i][c].get_mpz_t(), b[r][c].get_mpz_t());
                for (std::size_t j = 0; j < n; ++j) b[i][j] -= q * b[r][j];
                if (b[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (b[r][c] < 0)
            for (auto& x : b[r]) x = -x;
        for (std::size_t i = 0; i < r; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), b[i][c].get_mpz_t(), b[r][c].get_mpz_t());
            for (std::size_t j = 0; j < n; ++j) b[i][j] -= q * b[r][j];
        }
        ++r;
    next_column:;
    }
    b.resize(r);
    return b;
}

}  // namespace detail

// Basis (in row Hermite normal form) of the integer kernel of an integer matrix.
inline std::vector<IntVec> integer_kernel(const std::vector<IntVec>& rows, std::size_t n) {
    std::vector<IntVec> a = rows;
    std::vector<IntVec> u(n, IntVec(n, 0));
    for (std::size_t j = 0; j < n; ++j) u[j][j] = 1;
    std::size_t k = detail::column_echelon(a, u, n);
    std::vector<IntVec> basis;
    for (std::size_t j = k; j < n; ++j) {
        IntVec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = u[i][j];
        basis.push_back(std::move(v));
    }
    return detail::row_hnf(std::move(basis), n);
}

inline void check_real_slopes(const std::vector<Scalar>& alpha) {
    for (std::size_t j = 0; j < alpha.size(); ++j)
        if (!alpha[j].is_real()) throw ValidationError("slope alpha_" + std::to_string(j + 1) + " is not real");
}

// Integer system whose kernel is the resonance lattice: one row per real
// basis slot of the field, scaled to clear denominators.
inline std::vector<IntVec> resonance_system(const std::vector<Scalar>& alpha) {
    check_real_slopes(alpha);
    std::vector<IntVec> rows;
    for (int slot : {0, 2, 4, 6}) {
        std::vector<mpq_class> q;
        mpz_class den = 1;
        bool any = false;
        for (auto& a : alpha) {
            q.push_back(a.coeff(slot));
            if (q.back() != 0) any = true;
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.back().get_den_mpz_t());
        }
        if (!any) continue;
        IntVec row;
        for (auto& x : q) row.push_back(mpz_class(x.get_num() * (den / x.get_den())));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<IntVec> resonance_lattice(const std::vector<Scalar>& alpha) {
    return integer_kernel(resonance_system(alpha), alpha.size());
}

inline Scalar pair(const std::vector<int>& m, const std::vector<Scalar>& alpha) {
    Scalar s;
    for (std::size_t j = 0; j < alpha.size() && j < m.size(); ++j)
        if (m[j] != 0) s += Scalar(m[j]) * alpha[j];
    return s;
}

struct DiophantineCertificate {
    enum class Verdict { diophantine, resonant, undecided };
    Verdict verdict = Verdict::undecided;
    mpq_class C = 0;  // |m.alpha|^{-1} <= C |m|_1^N for all m != 0
    int N = 0;
    std::vector<long> witness;
    std::vector<std::vector<long>> lattice;
    int degree = 1;  // degree over Q of the field generated by the slopes
    mpq_class conjugate_bound = 0;
    mpz_class denominator = 1;
    std::string method;

    std::string verdict_name() const {
        switch (verdict) {
            case Verdict::diophantine: return "diophantine";
            case Verdict::resonant: return "resonant";
            default: return "undecided";
        }
    }
};

// Rational upper bound for sqrt(d), good to about 1e-6.
inline mpq_class sqrt_upper(std::int64_t d) {
    mpz_class scaled = mpz_class(d) * 1000000;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
    mpq_class q(r + 1, 1000);
    q.canonicalize();
    return q;
}

inline DiophantineCertificate diophantine_certificate(const std::vector<Scalar>& alpha) {
    DiophantineCertificate cert;
    if (alpha.empty()) throw ValidationError("empty slope vector");
    bool nonzero = false;
    for (auto& a : alpha) nonzero = nonzero || !a.is_zero();
    if (!nonzero) throw ValidationError("slope vector is zero");
    auto lat = resonance_lattice(alpha);
    for (auto& v : lat) {
        std::vector<long> w;
        for (auto& x : v) w.push_back(x.get_si());
        cert.lattice.push_back(std::move(w));
    }
    if (!lat.empty()) {
        cert.verdict = DiophantineCertificate::Verdict::resonant;
        cert.witness = cert.lattice.front();
        cert.method = "exact integer kernel of the slope components over the rational basis of the field";
        return cert;
    }
    Field f;
    for (auto& a : alpha) f = Field::unify(f, a.field());
    // Galois elements (sign flips of sqrt d1, sqrt d2) fixing every slope
    std::vector<int> used;
    for (auto& a : alpha)
        for (auto& t : a.terms()) used.push_back(t.slot);
    int stab = 0;
    for (int g : {0, 2, 4, 6}) {
        if ((g & 2) && f.d1 == 0) continue;
        if ((g & 4) && f.d2 == 0) continue;
        bool fixes = true;
        for (int s : used)
            if (__builtin_popcount(s & g) % 2) fixes = false;
        if (fixes) ++stab;
    }
    cert.degree = f.real_degree() / stab;
    mpz_class den = 1;
    mpq_class cbound = 0;
    for (auto& a : alpha) {
        mpq_class b = 0;
        for (auto& t : a.terms()) {
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.q.get_den_mpz_t());
            mpq_class w = abs(t.q);
            if (t.slot & 2) w *= sqrt_upper(f.d1);
            if (t.slot & 4) w *= sqrt_upper(f.d2);
            b += w;
        }
        cbound = std::max(cbound, b);
    }
    cert.denominator = den;
    cert.conjugate_bound = cbound;
    cert.N = cert.degree - 1;
    mpq_class C = 1;
    for (int k = 0; k < cert.degree; ++k) C *= den;
    for (int k = 0; k < cert.N; ++k) C *= cbound;
    cert.C = C;
    cert.verdict = DiophantineCertificate::Verdict::diophantine;
    cert.method =
        "norm bound: den*(m.alpha) is a nonzero algebraic integer of degree D, so |Norm| >= 1 while every "
        "conjugate satisfies |sigma(m.alpha)| <= C'|m|_1; hence |m.alpha|^-1 <= den^D C'^(D-1) |m|_1^(D-1)";
    return cert;
}

}  // namespace foliated
