// Acceptance criteria: one PASS/FAIL line each. Exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "foliated/derham.hpp"
#include "foliated/gysin.hpp"
#include "foliated/hochschild.hpp"
#include "foliated/poisson.hpp"
#include "foliated/specseq.hpp"
#include "foliated/symbols.hpp"

using namespace foliated;
namespace fs = std::filesystem;

namespace {

// Runtime limits in seconds; zero means none.
constexpr double kLimitCohomology = 5.0;
constexpr double kLimitHochschild = 30.0;
constexpr double kLimitIdentities = 10.0;
constexpr double kLimitTraces = 60.0;
constexpr std::size_t kMinTracePairs = 100;

ModelPtr torus(std::vector<std::string> alpha, Family family = Family::kronecker_torus) {
    ModelSpec s;
    s.family = Family::kronecker_torus;
    std::vector<std::string> texts = alpha;
    s.field = infer_field(texts);
    for (auto& a : alpha) s.alpha.push_back(parse_scalar(a, s.field));
    auto t = make_model(s);
    return family == Family::kronecker_torus ? t : derive(t, family);
}

ModelSpec lie(int n, std::vector<std::tuple<int, int, int>> brackets, std::vector<int> foliation) {
    ModelSpec s;
    s.family = Family::lie_frame;
    s.lie_dim = n;
    for (auto& [i, j, k] : brackets) s.brackets.push_back({i, j, {{k, Scalar(1)}}});
    s.foliation = std::move(foliation);
    return s;
}

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit > 0) o.require(secs < limit, "runtime " + std::to_string(secs) + " s over the " + std::to_string(limit) + " s limit");
    std::ostringstream line;
    line << (o.passed ? "PASS" : "FAIL") << "  [" << id << "] " << title << "  (" << std::fixed;
    line.precision(2);
    line << secs << " s)";
    if (!o.passed) line << "  " << o.detail;
    std::cout << line.str() << std::endl;
    if (!o.passed) ++failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool boundary_nonzero(const ModelPtr& m) {
    for (auto& x : derham::window_monomials(*m, {1, 0, 0}))
        if (!derham::differential(derham::Component::boundary, Form::monomial(m, x)).is_zero()) return true;
    return false;
}

}  // namespace

int main() {
    auto t2 = torus({"1", "sqrt2"});
    auto t3 = torus({"1", "sqrt2", "sqrt3"});
    auto conic2 = derive(t2, Family::conic_dual);

    criterion(1, "torus cohomology table, n = 2, B = 3", kLimitCohomology, [&](Outcome& o) {
        auto d = derham::cohomology_dims(t2, derham::Component::d_F, {3, 0, 0});
        o.require(!d.dims.empty(), "empty table");
        for (auto& [b, v] : d.dims) {
            std::size_t expected = (b.r >= 0 && b.r <= 1 && b.s >= 0 && b.s <= 1) ? 1 : 0;
            o.require(v == expected, "H^{" + std::to_string(b.r) + "," + std::to_string(b.s) + "} = " + std::to_string(v));
            o.require(!d.is_unbounded(b.r, b.s), "window-dependent cell");
        }
        for (int r = 0; r <= 1; ++r)
            for (int s = 0; s <= 1; ++s) o.require(d.at(r, s) == 1, "missing cell");
        o.require(d.nonresonant_exact, "non-resonant modes carry cohomology");
    });

    criterion(2, "Hochschild dims (2,6,6,2) and (2,8,12,8,2)", kLimitHochschild, [&](Outcome& o) {
        auto a = hochschild::hh_dims_assuming_collapse(t2);
        auto b = hochschild::hh_dims_assuming_collapse(t3);
        o.require(a == std::vector<std::size_t>({2, 6, 6, 2, 0}), "n = 2 dims");
        o.require(b == std::vector<std::size_t>({2, 8, 12, 8, 2, 0}), "n = 3 dims");
    });

    criterion(3, "identity suites on T2, so(3), Heisenberg; corrupted Jacobi fails", kLimitIdentities, [&](Outcome& o) {
        auto so3 = make_model(lie(3, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {2}));
        auto heis = make_model(lie(3, {{0, 1, 2}}, {2}));
        for (auto& [name, m] : std::vector<std::pair<std::string, ModelPtr>>{{"T2", t2}, {"so3", so3}, {"heisenberg", heis}}) {
            auto rep = derham::verify_decomposition_identities(m, 20, 1);
            o.require(rep.all_passed(), name + " identity failed");
            for (auto& r : rep.results) o.require(r.checked > 0, name + " " + r.name + " unchecked");
        }
        o.require(boundary_nonzero(so3), "so3 boundary vanishes");
        o.require(boundary_nonzero(heis), "heisenberg boundary vanishes");
        ModelOptions bypass;
        bypass.validate = false;
        auto bad = make_model(lie(3, {{0, 1, 2}, {0, 2, 0}}, {2}), bypass);
        o.require(!derham::verify_decomposition_identities(bad, 20, 1).get("d^2 = 0").passed, "negative control passed");
    });

    criterion(4, "star/delta operator identity on the conic dual, B = 2, l in [-2, 2]", 0, [&](Outcome& o) {
        auto rep = poisson::verify_star_delta_identity(conic2, {2, -2, 2});
        o.require(rep.all_passed(), "identity failed");
        for (auto& r : rep.results) o.require(r.checked > 0, r.name + " unchecked");
    });

    criterion(5, "oracle triangle delta = delta_F = shifted cosphere d_F, n = 2", 0, [&](Outcome& o) {
        auto rep = poisson::verify_hom_can(conic2, {1, -2, 2});
        o.require(rep.all_agree, "pipelines disagree");
        o.require(rep.vanishing_holds, "nonzero homology for |l| > 1");
        int top = conic2->generator_count();
        for (int l = -1; l <= 1; ++l)
            for (int k = 0; k <= top; ++k) {
                bool seen = false;
                for (auto& r : rep.rows) seen = seen || (r.k == k && r.l == l);
                o.require(seen, "cell (" + std::to_string(k) + "," + std::to_string(l) + ") not compared");
            }
    });

    criterion(6, "spectral sequence of the Poisson filtration: single row, collapse, E_inf = delta-homology", 0, [&](Outcome& o) {
        for (int k = 0; k <= conic2->generator_count(); ++k) {
            auto rep = specseq::poisson_spectral_check(conic2, k, {1, -2, 2});
            std::string t = " at k = " + std::to_string(k);
            o.require(rep.single_row, "E1 in several rows" + t);
            o.require(rep.collapses_at_e1, "no collapse" + t);
            o.require(rep.matches_direct, "E_inf differs" + t);
            o.require(rep.ss.converged && rep.ss.pages_consistent, "page consistency" + t);
        }
    });

    criterion(7, "Gysin splitting for T2 x S1", 0, [&](Outcome& o) {
        for (int h = 0; h <= t2->codim(); ++h) {
            auto rep = gysin::product_splitting_dims(t2, 1, h);
            std::string t = " at h = " + std::to_string(h);
            o.require(rep.all_agree, "splitting" + t);
            o.require(rep.isomorphism_ranges_hold, "isomorphism ranges" + t);
            for (auto& row : rep.rows) o.require(row.direct.has_value(), "no direct computation" + t);
        }
    });

    criterion(8, "E2 from delta-homology equals the closed form, n = 2", 0, [&](Outcome& o) {
        auto rep = hochschild::e1_to_e2(t2, {1, -2, 2});
        o.require(rep.all_agree, "cell mismatch");
        o.require(!rep.cells.empty(), "no cells");
    });

    symbols::SymbolsReport sym;
    criterion(9, "residue traces vanish on commutators; trace space dimension = HH_0", kLimitTraces, [&](Outcome& o) {
        sym = symbols::verify_traces_and_collapse(t2, kMinTracePairs, 12, 1);
        const auto& trace = sym.checks.at(0);
        o.require(trace.passed, "trace of a commutator: " + trace.counterexample);
        o.require(trace.checked >= kMinTracePairs, "only " + std::to_string(trace.checked) + " pairs");
        o.require(sym.trace_space_dim == 2, "tau_+ and tau_- dependent");
        o.require(sym.trace_space_dim == hochschild::hh0_and_top(t2).hh0, "trace space differs from HH_0");
    });

    criterion(10, "collapse certificate, n = 2", 0, [&](Outcome& o) {
        auto hh = hochschild::hh_dims_assuming_collapse(t2);
        o.require(sym.cocycles.size() == 4, "cocycle levels");
        for (auto& c : sym.cocycles) {
            std::string t = " at l = " + std::to_string(c.l);
            o.require(c.cocycles == 2 * binom(3, c.l), "cocycle count" + t);
            o.require(c.rank == c.cocycles, "rank deficit" + t);
            o.require(c.cocycles == hh.at(c.l), "count differs from HH" + t);
            if (c.l <= 2) o.require(c.coboundary_checked && c.coboundary_vanishes, "coboundary" + t);
        }
    });

    criterion(11, "periodic cyclic dims (8,8) and (16,16)", 0, [&](Outcome& o) {
        auto a = hochschild::hp_dims(t2), b = hochschild::hp_dims(t3);
        o.require(a.hp0 == 8 && a.hp1 == 8, "n = 2");
        o.require(b.hp0 == 16 && b.hp1 == 16, "n = 3");
    });

    criterion(12, "run all with a fixed seed is byte-identical", 0, [&](Outcome& o) {
        fs::path base = fs::temp_directory_path() / "foliated_acceptance";
        fs::remove_all(base);
        std::vector<fs::path> dirs{base / "a", base / "b"};
        for (auto& d : dirs) {
            std::string cmd = std::string(FOLIATED_CLI) + " run all --seed 1 --model " + FOLIATED_MODELS + "/t2_sqrt2.json --out " +
                              d.string() + " > /dev/null 2>&1";
            int raw = std::system(cmd.c_str());
            o.require(WIFEXITED(raw) && WEXITSTATUS(raw) == 0, "run all exit status");
        }
        std::size_t files = 0;
        for (auto& e : fs::directory_iterator(dirs[0])) {
            ++files;
            o.require(slurp(e.path()) == slurp(dirs[1] / e.path().filename()), e.path().filename().string() + " differs");
        }
        o.require(files == 7, "expected 7 report files, found " + std::to_string(files));
    });

    std::cout << (failures ? "FAILED " + std::to_string(failures) + " criteria" : "ALL CRITERIA PASSED") << std::endl;
    return failures ? 1 : 0;
}
