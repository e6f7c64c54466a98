#pragma once

// Analysis drivers and report rendering for the command line front end.
// Every report is a JSON document; markdown and CSV are rendered from it.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "foliated/derham.hpp"
#include "foliated/gysin.hpp"
#include "foliated/hochschild.hpp"
#include "foliated/model.hpp"
#include "foliated/model_json.hpp"
#include "foliated/poisson.hpp"
#include "foliated/specseq.hpp"
#include "foliated/symbols.hpp"

namespace foliated::report {

using nlohmann::json;

inline constexpr const char* kReportSchema = "foliated-report/1";
inline const std::vector<std::string> kAnalyses{"derham", "poisson", "gysin", "specseq", "hochschild", "symbols"};

struct RunConfig {
    int mode_bound = 1;
    int l_min = -2;
    int l_max = 2;
    int depth = 12;
    std::size_t trials = 100;
    std::uint64_t seed = 1;

    ModeWindow window() const { return {mode_bound, l_min, l_max}; }
    json to_json() const {
        return {{"mode_bound", mode_bound}, {"xi_range", {l_min, l_max}}, {"depth", depth}, {"trials", trials}, {"seed", seed}};
    }
};

// ----------------------------------------------------------------------------
// helpers

inline json certificate_json(const std::optional<DiophantineCertificate>& c) {
    if (!c) return nullptr;
    json j{{"verdict", c->verdict_name()}, {"method", c->method}, {"degree", c->degree}};
    if (c->verdict == DiophantineCertificate::Verdict::diophantine) {
        j["C"] = c->C.get_str();
        j["N"] = c->N;
    }
    if (!c->witness.empty()) j["witness"] = c->witness;
    if (!c->lattice.empty()) j["resonance_lattice"] = c->lattice;
    return j;
}

inline bool is_formal(const std::optional<DiophantineCertificate>& c) {
    return c && c->verdict != DiophantineCertificate::Verdict::diophantine;
}

struct Checks {
    json list = json::array();
    bool passed = true;

    void add(const std::string& name, bool ok, const std::string& detail = {}, std::size_t checked = 0) {
        json j{{"name", name}, {"passed", ok}};
        if (checked) j["checked"] = checked;
        if (!detail.empty()) j["detail"] = detail;
        list.push_back(j);
        passed = passed && ok;
    }
    void add(const derham::IdentityReport& r, const std::string& prefix = {}) {
        for (auto& x : r.results) add(prefix + x.name, x.passed, x.counterexample, x.checked);
    }
};

inline ModelPtr torus_of(const ModelPtr& m) {
    if (m->family == Family::kronecker_torus) return m;
    if (m->base && m->base->family == Family::kronecker_torus) return m->base;
    return nullptr;
}

inline ModelPtr conic_of(const ModelPtr& m) {
    if (m->family == Family::conic_dual) return m;
    if (auto t = torus_of(m)) return derive(t, Family::conic_dual);
    return nullptr;
}

inline json dims_json(const derham::BigradedDims& d) {
    json rows = json::array();
    for (auto& [b, v] : d.dims) {
        json r{{"r", b.r}, {"s", b.s}, {"dim", v}};
        if (d.is_unbounded(b.r, b.s)) r["window_dependent"] = true;
        rows.push_back(r);
    }
    return rows;
}

inline json header(const std::string& analysis, const ParsedModel& pm, const RunConfig& cfg, std::vector<std::string> ops) {
    return {{"schema", kReportSchema},
            {"analysis", analysis},
            {"model", pm.document},
            {"config", cfg.to_json()},
            {"operations", ops}};
}

// ----------------------------------------------------------------------------
// analyses

inline json run_derham(const ParsedModel& pm, const RunConfig& cfg) {
    const ModelPtr& m = pm.model;
    ModeWindow w = cfg.window();
    json j = header("derham", pm, cfg,
                    {"derham.verify_decomposition_identities", "derham.cohomology_dims", "derham.window_stable",
                     "derham.basic_cohomology_dims", "derham.ordinary_derham_dims", "diophantine_certificate"});
    Checks checks;
    auto ids = derham::verify_decomposition_identities(m, 20, cfg.seed, w);
    checks.add(ids);
    auto cert = derham::certificate_for(*m);
    j["certificate"] = certificate_json(cert);
    j["formal"] = is_formal(cert);
    json tables = json::array();
    if (!ids.get("d^2 = 0").passed) {
        j["tables"] = tables;
        j["tables_note"] = "d^2 != 0; cohomology is undefined";
    } else if (m->dxi >= 0) {
        for (int l = w.l_min; l <= w.l_max; ++l) {
            auto d = derham::cohomology_dims(m, derham::Component::d_F, w, l);
            tables.push_back({{"op", "d_F"}, {"l", l}, {"cohomology", dims_json(d)}});
            if (!d.formal) checks.add("non-resonant modes acyclic (l = " + std::to_string(l) + ")", d.nonresonant_exact);
        }
    } else {
        auto d = derham::cohomology_dims(m, derham::Component::d_F, w);
        tables.push_back({{"op", "d_F"}, {"cohomology", dims_json(d)}});
        if (!d.formal) checks.add("non-resonant modes acyclic", d.nonresonant_exact);
        j["window_stable"] = derham::window_stable(m, derham::Component::d_F, w);
        auto basic = derham::basic_cohomology_dims(m, w);
        j["basic"] = {{"dims", basic.dims}, {"window_dependent", basic.window_sensitive}};
        try {
            j["betti"] = derham::ordinary_derham_dims(m, w.bound);
        } catch (const ComplexViolation& e) {
            j["betti"] = nullptr;
            j["betti_note"] = e.what();
        }
    }
    if (!j.contains("tables")) j["tables"] = tables;
    j["checks"] = checks.list;
    j["passed"] = checks.passed;
    return j;
}

inline json run_poisson(const ParsedModel& pm, const RunConfig& cfg) {
    ModelPtr X = conic_of(pm.model);
    if (!X) throw CapabilityError("the poisson analysis needs a torus-based or conic model");
    ModeWindow w = cfg.window();
    json j = header("poisson", pm, cfg,
                    {"poisson.verify_star_delta_identity", "poisson.verify_bracket_expansion", "poisson.verify_hom_can",
                     "poisson.homogeneous_poisson_dims"});
    Checks checks;
    checks.add(poisson::verify_star_delta_identity(X, w), "star: ");
    auto exp = poisson::verify_bracket_expansion(X, 20, cfg.seed);
    checks.add(exp.identities, "bracket: ");
    j["bracket_global_sign"] = exp.global_sign;
    json dims = json::array();
    for (int l = w.l_min; l <= w.l_max; ++l)
        for (int k = 0; k <= X->generator_count(); ++k) {
            auto d = poisson::homogeneous_poisson_dims(X, k, l, w);
            dims.push_back({{"k", k}, {"l", l}, {"dim", d.total}, {"plus", d.plus}, {"minus", d.minus}});
        }
    j["delta_homology"] = dims;
    if (X->is_torus_based()) {
        auto hc = poisson::verify_hom_can(X, w);
        json rows = json::array();
        for (auto& r : hc.rows)
            rows.push_back({{"k", r.k}, {"l", r.l}, {"delta", r.delta}, {"delta_F", r.delta_F}, {"cosphere", r.cosphere},
                            {"cosphere_index", {r.index_r, r.index_s}}, {"agree", r.agree}});
        j["oracle_triangle"] = rows;
        j["certificate"] = certificate_json(hc.certificate);
        j["formal"] = hc.formal;
        checks.add("delta = delta_F = cosphere d_F dims", hc.all_agree);
        checks.add("vanishing for |l| > p", hc.vanishing_holds);
    }
    j["checks"] = checks.list;
    j["passed"] = checks.passed;
    return j;
}

inline json run_gysin(const ParsedModel& pm, const RunConfig& cfg) {
    ModelPtr T = torus_of(pm.model);
    if (!T) throw CapabilityError("the gysin analysis needs a Kronecker torus base");
    ModeWindow w{cfg.mode_bound, 0, 0};
    json j = header("gysin", pm, cfg, {"gysin.product_splitting_dims", "gysin.pullback", "gysin.fiber_integrate"});
    j["integration_convention"] = gysin::kIntegrationConvention;
    Checks checks;
    json tables = json::array();
    for (int r : {1, 2}) {
        for (int h = 0; h <= T->codim(); ++h) {
            auto rep = gysin::product_splitting_dims(T, r, h, w);
            json rows = json::array();
            for (auto& row : rep.rows) {
                json x{{"k", row.k}, {"predicted", row.predicted}, {"base_k", row.base_k}, {"base_k_minus_r", row.base_k_minus_r}};
                if (row.direct) {
                    x["direct"] = *row.direct;
                    x["pullback_rank"] = row.pullback_rank;
                    x["integration_rank"] = row.integration_rank;
                    x["short_exact"] = row.exact;
                }
                rows.push_back(x);
            }
            tables.push_back({{"r", r}, {"h", h}, {"rows", rows}});
            if (r == 1) {
                checks.add("splitting h = " + std::to_string(h), rep.all_agree);
                checks.add("isomorphism ranges h = " + std::to_string(h), rep.isomorphism_ranges_hold);
            }
        }
    }
    j["tables"] = tables;
    j["checks"] = checks.list;
    j["passed"] = checks.passed;
    return j;
}

inline json run_specseq(const ParsedModel& pm, const RunConfig& cfg) {
    ModelPtr X = conic_of(pm.model);
    if (!X) throw CapabilityError("the specseq analysis needs a torus-based or conic model");
    json j = header("specseq", pm, cfg, {"specseq.poisson_filtration", "specseq.pages", "poisson.homogeneous_poisson_dims"});
    Checks checks;
    json rows = json::array();
    for (int k = 0; k <= X->generator_count(); ++k) {
        specseq::PoissonSpectralReport rep;
        try {
            rep = specseq::poisson_spectral_check(X, k, cfg.window());
        } catch (const WindowError&) {
            continue;
        }
        json e1 = json::array();
        for (auto& [key, v] : rep.ss.page(1).dims)
            if (v) e1.push_back({{"weight", key.first}, {"complementary", key.second}, {"dim", v}});
        json einf = json::array();
        for (auto& [l, v] : rep.e_infinity) einf.push_back({{"l", l}, {"e_infinity", v}, {"direct", rep.direct[l]}});
        rows.push_back({{"k", k}, {"e1", e1}, {"e1_weights", rep.e1_weights}, {"compared_l", rep.compared}, {"collapse_page", rep.ss.collapse_page ? json(*rep.ss.collapse_page) : json(nullptr)},
                        {"comparison", einf}});
        std::string t = " (k = " + std::to_string(k) + ")";
        checks.add("E1 in a single row" + t, rep.single_row);
        checks.add("collapse at E1" + t, rep.collapses_at_e1);
        checks.add("E_infinity = delta-homology" + t, rep.matches_direct);
        checks.add("convergence" + t, rep.ss.converged);
        checks.add("E_{r+1} = H(E_r, d_r)" + t, rep.ss.pages_consistent);
    }
    j["filtrations"] = rows;
    j["checks"] = checks.list;
    j["passed"] = checks.passed;
    return j;
}

inline json run_hochschild(const ParsedModel& pm, const RunConfig& cfg) {
    ModelPtr T = torus_of(pm.model);
    if (!T) throw CapabilityError("the hochschild analysis needs a Kronecker torus base");
    json j = header("hochschild", pm, cfg,
                    {"hochschild.e2_dims", "hochschild.hh_dims_assuming_collapse", "hochschild.hh0_and_top",
                     "hochschild.hp_dims", "hochschild.e1_to_e2"});
    ModeWindow w = cfg.window();
    auto r = hochschild::hochschild_report(T, {w.bound, 0, 0});
    json e2 = json::array();
    for (auto& [key, v] : r.e2) e2.push_back({{"k", key.first}, {"h", key.second}, {"dim", v}});
    j["hh"] = r.hh;
    j["e2"] = e2;
    j["hh0"] = r.traces.hh0;
    j["hh_top"] = r.traces.hhtop;
    j["identification"] = r.traces.identification;
    j["hp"] = {r.periodic.hp0, r.periodic.hp1};
    j["cosphere_betti"] = r.periodic.betti;
    j["collapse_status"] = r.collapse_status;
    j["certificate"] = certificate_json(r.certificate);
    j["formal"] = is_formal(r.certificate);
    Checks checks;
    checks.add("HH_k = 0 for k > 2p + q", r.vanishing_bound_holds);
    checks.add("sum HH_k = sum E2", r.totals_consistent);
    auto b = hochschild::e1_to_e2(T, w);
    json cells = json::array();
    for (auto& c : b.cells) cells.push_back({{"k", c.k}, {"h", c.h}, {"e1", c.e1}, {"e2", c.e2}, {"closed_form", c.closed}});
    j["e1_to_e2"] = {{"cells", cells}, {"note", b.note}};
    checks.add("E2 from delta-homology = closed form", b.all_agree);
    // resonant modes carry classes at every bound, so growth with the window is expected there
    if (is_formal(r.certificate)) j["e1_to_e2"]["window_dependent"] = !b.window_stable;
    else checks.add("E1 -> E2 window stable", b.window_stable);
    j["checks"] = checks.list;
    j["passed"] = checks.passed;
    return j;
}

inline json run_symbols(const ParsedModel& pm, const RunConfig& cfg) {
    ModelPtr T = torus_of(pm.model);
    if (!T) throw CapabilityError("the symbols analysis needs a Kronecker torus base");
    if (!T->resonance.empty()) throw CapabilityError("the symbols analysis needs a non-resonant slope");
    json j = header("symbols", pm, cfg,
                    {"symbols.compose", "symbols.residue_trace", "symbols.apply_derivation", "symbols.cocycle_evaluate",
                     "symbols.verify_traces_and_collapse", "hochschild.hh_dims_assuming_collapse", "hochschild.hh0_and_top"});
    auto rep = symbols::verify_traces_and_collapse(T, cfg.trials, cfg.depth, cfg.seed);
    auto hh = hochschild::hh_dims_assuming_collapse(T, {cfg.mode_bound, 0, 0});
    auto traces = hochschild::hh0_and_top(T, {cfg.mode_bound, 0, 0});
    Checks checks;
    for (auto& c : rep.checks) {
        std::string detail = c.counterexample;
        if (c.skipped) detail += (detail.empty() ? "" : "; ") + std::to_string(c.skipped) + " instances below the watermark";
        checks.add(c.name, c.passed, detail, c.checked);
    }
    checks.add("trace space dimension = HH_0", rep.trace_space_dim == traces.hh0,
               std::to_string(rep.trace_space_dim) + " vs " + std::to_string(traces.hh0));
    bool certificate = true;
    json counts = json::array();
    for (auto& c : rep.cocycles) {
        std::size_t predicted = c.l < static_cast<int>(hh.size()) ? hh[c.l] : 0;
        bool full = c.rank == c.cocycles && c.cocycles == predicted;
        certificate = certificate && full && c.coboundary_vanishes;
        json x{{"l", c.l}, {"cocycles", c.cocycles}, {"rank", c.rank}, {"tuples", c.tuples}, {"tuples_available", c.tuples_available}, {"hh_predicted", predicted}};
        if (c.coboundary_checked) x["coboundary_vanishes"] = c.coboundary_vanishes;
        counts.push_back(x);
        if (c.coboundary_checked) checks.add("coboundary vanishes (l = " + std::to_string(c.l) + ")", c.coboundary_vanishes);
        checks.add("cocycle evaluation rank = HH count (l = " + std::to_string(c.l) + ")", full,
                   std::to_string(c.rank) + " of " + std::to_string(c.cocycles) + ", predicted " + std::to_string(predicted));
    }
    j["cocycles"] = counts;
    j["collapse_certificate"] = certificate;
    j["independence_scope"] = rep.independence_scope;
    j["tuple_family"] = rep.tuple_family;
    j["generator"] = {{"mode_bound", rep.generator.bound},
                      {"orders", {rep.generator.order_min, rep.generator.order_max}},
                      {"coefficients", rep.generator.coeff},
                      {"terms", rep.generator.terms}};
    j["watermark"] = "checks use only orders at or above the validity watermark of every operand";
    j["checks"] = checks.list;
    j["passed"] = checks.passed;
    return j;
}

inline json run_analysis(const std::string& name, const ParsedModel& pm, const RunConfig& cfg) {
    if (name == "derham") return run_derham(pm, cfg);
    if (name == "poisson") return run_poisson(pm, cfg);
    if (name == "gysin") return run_gysin(pm, cfg);
    if (name == "specseq") return run_specseq(pm, cfg);
    if (name == "hochschild") return run_hochschild(pm, cfg);
    if (name == "symbols") return run_symbols(pm, cfg);
    throw CapabilityError("unknown analysis '" + name + "'");
}

inline json summary(const ParsedModel& pm, const RunConfig& cfg, const std::vector<std::pair<std::string, json>>& reports) {
    json j{{"schema", kReportSchema}, {"analysis", "summary"}, {"model", pm.document}, {"config", cfg.to_json()}};
    auto cert = derham::certificate_for(*pm.model);
    if (auto t = torus_of(pm.model)) cert = derham::certificate_for(*t);
    j["certificate"] = certificate_json(cert);
    if (is_formal(cert)) j["banner"] = "formal (non-Diophantine)";
    bool passed = true;
    json analyses = json::object();
    std::optional<bool> collapse;
    for (auto& [name, r] : reports) {
        analyses[name] = r;
        if (r.contains("passed")) passed = passed && r["passed"].get<bool>();
        if (name == "symbols" && r.contains("collapse_certificate")) collapse = r["collapse_certificate"].get<bool>();
    }
    j["collapse_certificate"] = collapse ? json(*collapse ? "certified by the cocycle count" : "not certified")
                                         : json("not evaluated (symbols analysis not run)");
    j["analyses"] = analyses;
    j["passed"] = passed;
    return j;
}

// ----------------------------------------------------------------------------
// rendering

inline std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
}

inline bool flat_object(const json& v) {
    if (!v.is_object()) return false;
    for (auto& [k, x] : v.items())
        if (x.is_object() || (x.is_array() && !x.empty() && (x[0].is_object() || x[0].is_array()))) return false;
    return true;
}

inline void markdown_into(std::ostringstream& out, const json& v, int level, const std::string& title) {
    std::string hashes(std::min(level, 6), '#');
    if (v.is_object()) {
        if (!title.empty()) out << hashes << " " << title << "\n\n";
        std::vector<std::string> nested;
        for (auto& [k, x] : v.items()) {
            if (x.is_object() || (x.is_array() && !x.empty() && x[0].is_object())) nested.push_back(k);
            else out << "- **" << k << "**: " << scalar_text(x) << "\n";
        }
        out << "\n";
        for (auto& k : nested) markdown_into(out, v[k], level + 1, k);
        return;
    }
    if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), flat_object)) {
        if (!title.empty()) out << hashes << " " << title << "\n\n";
        std::vector<std::string> cols;
        for (auto& row : v)
            for (auto& [k, x] : row.items())
                if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
        out << "|";
        for (auto& c : cols) out << " " << c << " |";
        out << "\n|";
        for (std::size_t i = 0; i < cols.size(); ++i) out << " --- |";
        out << "\n";
        for (auto& row : v) {
            out << "|";
            for (auto& c : cols) out << " " << (row.contains(c) ? scalar_text(row[c]) : "") << " |";
            out << "\n";
        }
        out << "\n";
        return;
    }
    if (v.is_array()) {
        if (!title.empty()) out << hashes << " " << title << "\n\n";
        for (std::size_t i = 0; i < v.size(); ++i) markdown_into(out, v[i], level + 1, title + " " + std::to_string(i));
        return;
    }
    out << "- **" << title << "**: " << scalar_text(v) << "\n";
}

inline std::string to_markdown(const json& report) {
    std::ostringstream out;
    std::string title = report.value("analysis", "report");
    out << "# " << title << "\n\n";
    if (report.contains("banner")) out << "> " << report["banner"].get<std::string>() << "\n\n";
    json body = report;
    body.erase("analysis");
    markdown_into(out, body, 1, "");
    return out.str();
}

inline void csv_into(std::vector<std::pair<std::string, std::string>>& rows, const json& v, const std::string& path) {
    if (v.is_object()) {
        for (auto& [k, x] : v.items()) csv_into(rows, x, path + "/" + k);
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) csv_into(rows, v[i], path + "/" + std::to_string(i));
    } else {
        rows.push_back({path, scalar_text(v)});
    }
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

// One row per leaf value, keyed by its JSON pointer.
inline std::string to_csv(const json& report) {
    std::vector<std::pair<std::string, std::string>> rows;
    csv_into(rows, report, "");
    std::string out = "path,value\n";
    for (auto& [p, v] : rows) out += csv_field(p) + "," + csv_field(v) + "\n";
    return out;
}

inline std::string render(const json& report, const std::string& format) {
    if (format == "json") return report.dump(2) + "\n";
    if (format == "markdown") return to_markdown(report);
    if (format == "csv") return to_csv(report);
    throw ValidationError("unknown format '" + format + "'");
}

}  // namespace foliated::report
