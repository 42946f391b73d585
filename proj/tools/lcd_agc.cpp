// lcd-agc: build complementary-dual algebraic geometry codes from the packaged
// curve recipes, measure minimum distances, dump Riemann-Roch bases, and replay
// the frozen reproduction manifest.

#include <lcdagc/manifest.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace lcdagc;

namespace {

std::map<std::string, std::string> split_params(const std::vector<std::string>& kvs) {
    std::map<std::string, std::string> out;
    for (auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--param wants key=value, got: " + kv);
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return out;
}

int cmd_construct(const std::string& field, const std::string& curve, const std::string& recipe,
                  const std::vector<std::string>& kvs, const std::string& out_path) {
    auto F = parse_field_spec(field);
    auto C = parse_curve(F, curve);
    auto rep = run_recipe(C, recipe, split_params(kvs));
    auto j = to_json(rep);
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open output file: " + out_path);
        os << j.dump(2) << "\n";
    }
    if (!rep.emitted) {
        std::cerr << "hypothesis failed: " << rep.failure << "\n";
        for (auto& h : rep.hypotheses)
            if (!h.passed)
                std::cerr << "  clause " << h.clause << (h.detail.empty() ? "" : ": " + h.detail)
                          << "\n";
        return 2;
    }
    return 0;
}

// rebuilds just enough of a code object from its JSON to measure distances
GeneralizedAGCode code_from_json(const nlohmann::json& j) {
    auto F = parse_field_spec(j.at("field").get<std::string>());
    auto C = parse_curve(F, j.at("curve").get<std::string>());
    GeneralizedAGCode code;
    code.curve = C;
    code.gen = Matrix::from_text(*C->field(), j.at("matrix").get<std::string>());
    auto& p = j.at("params");
    code.params.n = p.at("n").get<long long>();
    code.params.k = p.at("k").get<long long>();
    code.params.design_distance = p.at("design_distance").get<long long>();
    code.params.d_lower = std::max<long long>(1, code.params.design_distance);
    code.params.d_upper = code.params.n - code.params.k + 1;
    if ((long long)code.gen.rows() != code.params.k ||
        (long long)code.gen.cols() != code.params.n)
        throw std::invalid_argument("matrix shape disagrees with the recorded parameters");
    return code;
}

int cmd_mindist(const std::string& in_path, const std::string& method, uint64_t budget,
                bool pick_dual) {
    std::ifstream is(in_path);
    if (!is) throw std::runtime_error("cannot open code file: " + in_path);
    nlohmann::json j = nlohmann::json::parse(is);
    if (j.contains("code")) {
        const char* side = pick_dual ? "dual" : "code";
        if (j.at(side).is_null())
            throw std::invalid_argument(std::string("report holds no ") + side + " object");
        j = j.at(side);
    } else if (pick_dual) {
        throw std::invalid_argument("--dual needs a construction report, not a bare code");
    }
    auto code = code_from_json(j);

    auto t0 = std::chrono::steady_clock::now();
    DistanceReport r;
    try {
        r = min_distance(code, method, budget);
    } catch (const std::invalid_argument& e) {
        if (method != "enumerate") throw;
        // the walk cannot start under this budget; report the standing bracket
        std::cerr << "note: " << e.what() << "\n";
        r.method_used = "bracket";
        r.d_lower = code.params.d_lower;
        r.d_upper = code.params.d_upper;
        r.exact = false;
    }
    auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();

    std::cout << "n=" << code.params.n << " k=" << code.params.k << " method=" << r.method_used
              << " d_lower=" << r.d_lower << " d_upper=" << r.d_upper
              << " exact=" << (r.exact ? "true" : "false") << " steps=" << r.steps
              << " time_ms=" << ms << "\n";
    if (!r.witness_columns.empty()) {
        std::cout << "dependent_columns=";
        for (size_t i = 0; i < r.witness_columns.size(); ++i)
            std::cout << (i ? "," : "") << r.witness_columns[i];
        std::cout << "\n";
    }
    return 0;
}

int cmd_rr(const std::string& field, const std::string& curve, const std::string& divisor) {
    auto F = parse_field_spec(field);
    auto C = parse_curve(F, curve);
    auto G = parse_divisor(C, divisor);
    auto basis = rr_basis(G);
    std::cout << "dim=" << basis.size() << "\n";
    for (auto& f : basis) std::cout << f.str() << "\n";
    return 0;
}

int cmd_reproduce(const std::string& id, bool include_slow) {
    std::vector<const ManifestEntry*> picked;
    if (id == "all") {
        for (auto& m : reproduction_manifest()) picked.push_back(&m);
    } else {
        picked.push_back(&manifest_entry(id));
    }

    bool all_pass = true;
    for (auto* m : picked) {
        auto res = reproduce_entry(*m, include_slow);
        all_pass = all_pass && res.pass;
        std::cout << res.id << ": " << (res.pass ? "PASS" : "FAIL") << "\n";
        for (auto& line : res.lines) {
            std::cout << "  [" << (line.pass ? " OK " : "FAIL") << "] " << line.label;
            if (!line.pass && !line.detail.empty()) std::cout << " (" << line.detail << ")";
            std::cout << "\n";
        }
    }
    std::cout << (all_pass ? "reproduce: all selected entries pass"
                           : "reproduce: at least one entry failed")
              << "\n";
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"complementary-dual algebraic geometry codes"};
    app.require_subcommand(1);

    std::string field, curve, recipe, out_path, in_path, divisor;
    std::vector<std::string> kvs;
    std::string method = "auto";
    uint64_t budget = 500000000ull;
    bool pick_dual = false, include_slow = false;
    std::string repro_id = "all";

    auto* construct = app.add_subcommand("construct", "build a code pair from a recipe");
    construct->add_option("--field", field, "field spec, e.g. 2^4:x^4+x+1")->required();
    construct->add_option("--curve", curve, "curve spec, e.g. elliptic:b=0,c=8")->required();
    construct->add_option("--recipe", recipe, "recipe id, e.g. thm4")->required();
    construct->add_option("--param", kvs, "recipe parameter key=value, repeatable");
    construct->add_option("--out", out_path, "write the report JSON here instead of stdout");

    auto* mindist = app.add_subcommand("mindist", "measure minimum distance of a stored code");
    mindist->add_option("input", in_path, "construction report or code JSON file")->required();
    mindist->add_option("--method", method, "enumerate | column_search | auto");
    mindist->add_option("--budget", budget, "work budget for the chosen method");
    mindist->add_flag("--dual", pick_dual, "measure the dual code of a report");

    auto* rr = app.add_subcommand("rr", "print a Riemann-Roch space basis");
    rr->add_option("--field", field, "field spec")->required();
    rr->add_option("--curve", curve, "curve spec")->required();
    rr->add_option("--divisor", divisor, "divisor text, e.g. 4O+3(2,0)")->required();

    auto* reproduce = app.add_subcommand("reproduce", "replay the frozen reproduction manifest");
    reproduce->add_option("id", repro_id, "manifest entry id, or 'all'");
    reproduce->add_flag("--include-slow", include_slow, "also run the slow distance checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (construct->parsed())
            return cmd_construct(field, curve, recipe, kvs, out_path);
        if (mindist->parsed()) return cmd_mindist(in_path, method, budget, pick_dual);
        if (rr->parsed()) return cmd_rr(field, curve, divisor);
        return cmd_reproduce(repro_id, include_slow);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
