// Batch front end: parse a model spec, run analyses, write reports.
//
//   foliated run derham --model models/t2_sqrt2.json
//   foliated run all --model models/t2_resonant.json --out reports --format markdown
//
// Exit status: 0 all checks passed, 1 an exact check failed, 2 usage, parse or capability error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "foliated/model_json.hpp"
#include "foliated/report.hpp"

using namespace foliated;
using nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::pair<int, int> parse_range(const std::string& s) {
    auto c = s.find(':', s.empty() ? 0 : 1);
    if (c == std::string::npos) throw ValidationError("--xi-range expects a:b, got '" + s + "'");
    try {
        std::size_t p1 = 0, p2 = 0;
        int a = std::stoi(s.substr(0, c), &p1), b = std::stoi(s.substr(c + 1), &p2);
        if (p1 != c || p2 != s.size() - c - 1) throw std::invalid_argument(s);
        if (a > b) throw ValidationError("--xi-range needs a <= b");
        return {a, b};
    } catch (const std::logic_error&) {
        throw ValidationError("--xi-range expects integers a:b, got '" + s + "'");
    }
}

std::string extension(const std::string& format) {
    if (format == "markdown") return "md";
    return format;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact homological invariants of foliated model manifolds"};
    std::vector<std::string> positional;
    std::string model_path, analyses_list, xi_range = "-2:2", out_dir, format = "json";
    report::RunConfig cfg;
    app.add_option("command", positional, "run [analysis ...], or an analysis name")->expected(0, -1);
    app.add_option("--model", model_path, "model spec JSON")->required();
    app.add_option("--analyses", analyses_list, "comma separated subset of derham,poisson,gysin,specseq,hochschild,symbols,all");
    app.add_option("--mode-bound", cfg.mode_bound, "Fourier mode bound B (|m|_inf <= B)")->capture_default_str();
    app.add_option("--xi-range", xi_range, "homogeneity range a:b in the cotangent variable")->capture_default_str();
    app.add_option("--depth", cfg.depth, "symbol composition depth K")->capture_default_str();
    app.add_option("--trials", cfg.trials, "random symbol trials")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--out", out_dir, "output directory; reports go to stdout when absent");
    app.add_option("--format", format, "json, markdown or csv")
        ->check(CLI::IsMember({"json", "markdown", "csv"}))
        ->capture_default_str();
#ifdef FOLIATED_ENABLE_FAULTS
    std::string fault;
    app.add_option("--fault", fault)->group("")->check(CLI::IsMember({"composition"}));
#endif
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::vector<std::string> requested;
    try {
        std::vector<std::string> words = positional;
        if (!words.empty() && words.front() == "run") words.erase(words.begin());
        for (auto& w : words)
            for (auto& x : split_list(w)) requested.push_back(x);
        for (auto& x : split_list(analyses_list)) requested.push_back(x);
        if (requested.empty()) throw ValidationError("no analyses requested");
        for (auto& a : requested)
            if (a != "all" && std::find(report::kAnalyses.begin(), report::kAnalyses.end(), a) == report::kAnalyses.end())
                throw ValidationError("unknown analysis '" + a + "'");
        if (cfg.mode_bound < 1) throw ValidationError("--mode-bound must be positive");
        if (cfg.depth < 1) throw ValidationError("--depth must be positive");
        if (cfg.trials < 1) throw ValidationError("--trials must be positive");
        std::tie(cfg.l_min, cfg.l_max) = parse_range(xi_range);
    } catch (const Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
#ifdef FOLIATED_ENABLE_FAULTS
    if (fault == "composition") symbols::faults::corrupt_composition = true;
#endif

    bool everything = std::find(requested.begin(), requested.end(), "all") != requested.end();
    std::vector<std::string> order;
    for (auto& a : report::kAnalyses)
        if (everything || std::find(requested.begin(), requested.end(), a) != requested.end()) order.push_back(a);

    ParsedModel pm;
    try {
        pm = load_model(model_path);
    } catch (const ParseError& e) {
        std::cerr << "parse error at " << (e.location().empty() ? "/" : e.location()) << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    }

    // With `all`, analyses that do not apply to the model are listed as skipped.
    // Naming an analysis explicitly makes an unsupported pairing an error.
    std::vector<std::pair<std::string, json>> reports;
    for (auto& name : order) {
        try {
            reports.push_back({name, report::run_analysis(name, pm, cfg)});
        } catch (const CapabilityError& e) {
            if (!everything) {
                std::cerr << "capability error: " << name << ": " << e.what() << "\n";
                return 2;
            }
            reports.push_back({name, json{{"schema", report::kReportSchema}, {"analysis", name}, {"skipped", e.what()}}});
        } catch (const UnsupportedModel& e) {
            if (!everything) {
                std::cerr << "capability error: " << name << ": " << e.what() << "\n";
                return 2;
            }
            reports.push_back({name, json{{"schema", report::kReportSchema}, {"analysis", name}, {"skipped", e.what()}}});
        } catch (const WindowError& e) {
            std::cerr << "window error: " << name << ": " << e.what() << "\n";
            return 2;
        } catch (const Error& e) {
            std::cerr << "error: " << name << ": " << e.what() << "\n";
            return 2;
        }
    }
    json sum = report::summary(pm, cfg, reports);

    try {
        if (out_dir.empty()) {
            if (reports.size() == 1) std::cout << report::render(reports.front().second, format);
            else std::cout << report::render(sum, format);
        } else {
            std::filesystem::create_directories(out_dir);
            auto write = [&](const std::string& stem, const json& j) {
                std::ofstream f(std::filesystem::path(out_dir) / (stem + "." + extension(format)), std::ios::binary);
                if (!f) throw ValidationError("cannot write to " + out_dir);
                f << report::render(j, format);
            };
            for (auto& [name, j] : reports) write(name, j);
            write("summary", sum);
        }
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 2;
    }

    if (!sum["passed"].get<bool>()) {
        for (auto& [name, j] : reports)
            if (j.contains("checks"))
                for (auto& c : j["checks"])
                    if (!c["passed"].get<bool>()) std::cerr << "FAILED " << name << ": " << c["name"].get<std::string>() << "\n";
        return 1;
    }
    return 0;
}
