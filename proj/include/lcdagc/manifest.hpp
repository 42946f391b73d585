#pragma once

// Frozen reproduction targets. Each entry pins a construction's inputs
// together with the parameters and distance results a rebuild must land on,
// and reproduce_entry replays one entry and diffs every pinned value.

#include <lcdagc/constructions.hpp>

#include <map>
#include <string>
#include <vector>

namespace lcdagc {

struct DistanceCheck {
    bool on_dual = false;
    std::string method;   // enumerate | column_search | witness
    uint64_t budget = 500000000ull;
    long long lower = 0;
    long long upper = 0;
    bool exact = false;
    bool slow = false;   // runs only when include_slow is set
};

struct FlagCheck {
    bool on_dual = false;
    std::string flag;   // mds | almost_mds | griesmer_optimal | elliptic_optimal
    bool value = false;
};

struct ManifestEntry {
    std::string id;
    std::string field;
    std::string curve;
    std::string recipe;
    std::map<std::string, std::string> params;
    long long n = 0;
    long long k = 0;
    long long dual_k = -1;   // -1 when the recipe emits no dual code
    std::string dual_G;      // expected dual divisor, empty skips the check
    std::vector<DistanceCheck> distances;
    std::vector<FlagCheck> flags;
    bool cited_optimal = false;   // published code tables list these parameters as optimal
};

inline const std::vector<ManifestEntry>& reproduction_manifest() {
    static const std::vector<ManifestEntry> entries = {
        {"sec5",
         "2^2:x^2+x+1",
         "elliptic:b=0,c=0",
         "thm3",
         {{"D", "points:(0,1);(2,2);(2,3);(3,2);(3,3);(1,2);(1,3)"}, {"G", "2O+(0,0)"}},
         7,
         3,
         4,
         "6O-2(0,0)",
         {{false, "enumerate", 1000000, 4, 4, true, false},
          {true, "enumerate", 1000000, 3, 3, true, false}},
         {{false, "almost_mds", true},
          {false, "mds", false},
          {true, "almost_mds", true}},
         true},

        {"ex1",
         "2^4:x^4+x+1",
         "elliptic:b=0,c=8",
         "thm4",
         {{"alpha0", "2"}, {"fibers", "solvable"}, {"r", "4"}},
         22,
         8,
         14,
         "18O-4(2,0)",
         {{false, "witness", 200000, 14, 14, true, false},
          {true, "column_search", 500000000, 8, 8, true, false},
          {false, "enumerate", 5000000000ull, 14, 14, true, true}},
         {{false, "almost_mds", true},
          {false, "elliptic_optimal", false},
          {true, "almost_mds", true}}},

        {"ex2",
         "2^4:x^4+x+1",
         "elliptic:b=0,c=8",
         "thm5",
         {{"alpha1", "2"}, {"fibers", "solvable"}, {"r", "3"}},
         23,
         7,
         16,
         "20O-4(2,0)",
         {{false, "enumerate", 300000000, 16, 16, true, false},
          {true, "column_search", 500000000, 7, 7, true, false}},
         {{false, "almost_mds", true},
          {true, "almost_mds", true}}},

        {"ex3",
         "2^4:x^4+x+1",
         "elliptic:b=0,c=8",
         "thm6",
         {{"alpha0", "2"}, {"fibers", "solvable"}, {"r", "0"}},
         22,
         4,
         18,
         "21O-2(2,0)-(2,1)",
         {{false, "enumerate", 100000, 18, 18, true, false},
          {true, "column_search", 500000000, 4, 4, true, false}},
         {{false, "almost_mds", true},
          {false, "griesmer_optimal", true},
          {false, "elliptic_optimal", true},
          {true, "almost_mds", true},
          {true, "elliptic_optimal", true}},
         true},

        {"hyper4",
         "2^4:x^4+x+1",
         "hyperell:q=4",
         "hyper-rp",
         {{"P", "0,0"}, {"r", "7"}},
         31,
         15,
         16,
         "25O-8(0,0)",
         {{false, "column_search", 20000000, 15, 17, false, false},
          {true, "column_search", 20000000, 14, 16, false, false}},
         {}},

        {"hyper8",
         "2^6:x^6+x^4+x^3+x+1",
         "hyperell:q=8",
         "hyper-reduced",
         {{"alphas", "0"}, {"ns", "4"}, {"rs", "5"}},
         126,
         30,
         96,
         "115O-10(0,0)-6(0,1)",
         {{false, "column_search", 20000000, 93, 97, false, false},
          {true, "column_search", 20000000, 27, 31, false, false}},
         {}},

        {"herm",
         "3^2:x^2+2x+2",
         "hermitian:q=3",
         "hermitian",
         {{"P", "[x^3+3x^2+2x+4#0]"}, {"r", "2"}},
         27,
         12,
         15,
         "23O-2[x^3+3x^2+2x+4#0]",
         {{false, "column_search", 20000000, 13, 16, false, false},
          {true, "column_search", 20000000, 10, 13, false, false}},
         {}},
    };
    return entries;
}

inline const ManifestEntry& manifest_entry(const std::string& id) {
    for (auto& m : reproduction_manifest())
        if (m.id == id) return m;
    throw std::invalid_argument("unknown manifest id: " + id);
}

struct ReproLine {
    std::string label;
    bool pass;
    std::string detail;
};

struct ReproResult {
    std::string id;
    bool pass = true;
    std::vector<ReproLine> lines;
    ConstructionReport report;
};

namespace detail {

inline bool read_flag(const ParameterRecord& p, const std::string& name) {
    if (name == "mds") return p.flags.mds;
    if (name == "almost_mds") return p.flags.almost_mds;
    if (name == "griesmer_optimal") return p.flags.griesmer_optimal;
    if (name == "elliptic_optimal") return p.flags.elliptic_optimal;
    throw std::invalid_argument("unknown flag: " + name);
}

} // namespace detail

inline ReproResult reproduce_entry(const ManifestEntry& m, bool include_slow = false) {
    ReproResult out;
    out.id = m.id;
    auto check = [&](const std::string& label, bool ok, std::string detail = "") {
        out.lines.push_back({label, ok, std::move(detail)});
        out.pass = out.pass && ok;
    };

    auto F = parse_field_spec(m.field);
    auto C = parse_curve(F, m.curve);
    out.report = run_recipe(C, m.recipe, m.params);
    check("emitted", out.report.emitted, out.report.failure);
    if (!out.report.emitted) return out;

    auto& code = *out.report.code;
    check("n", code.params.n == m.n,
          "got " + std::to_string(code.params.n) + ", want " + std::to_string(m.n));
    check("k", code.params.k == m.k,
          "got " + std::to_string(code.params.k) + ", want " + std::to_string(m.k));
    check("lcd", code.params.lcd);
    if (m.dual_k >= 0) {
        bool have = out.report.dual.has_value();
        check("dual k", have && out.report.dual->params.k == m.dual_k,
              have ? "got " + std::to_string(out.report.dual->params.k) + ", want " +
                         std::to_string(m.dual_k)
                   : "no dual emitted");
        if (have) check("dual lcd", out.report.dual->params.lcd);
        if (have && !m.dual_G.empty())
            check("dual divisor", out.report.dual->G == parse_divisor(C, m.dual_G),
                  "got " + out.report.dual->G.str() + ", want " + m.dual_G);
    }

    for (auto& dc : m.distances) {
        if (dc.slow && !include_slow) continue;
        std::string side = dc.on_dual ? "dual" : "primal";
        if (dc.on_dual && !out.report.dual) {
            check(side + " distance (" + dc.method + ")", false, "no dual emitted");
            continue;
        }
        auto& target = dc.on_dual ? *out.report.dual : code;
        if (dc.method == "witness") {
            bool hit = elliptic_weight_witness(target, dc.budget);
            bool ok = hit && target.params.d_exact && *target.params.d_exact == dc.lower;
            check(side + " distance (witness)", ok,
                  hit ? "d_exact " +
                            (target.params.d_exact ? std::to_string(*target.params.d_exact)
                                                   : std::string("unset")) +
                            ", want " + std::to_string(dc.lower)
                      : "no witness found");
            continue;
        }
        auto r = min_distance(target, dc.method, dc.budget);
        record_distance(target, r);
        bool ok = r.d_lower == dc.lower && r.d_upper == dc.upper && r.exact == dc.exact;
        check(side + " distance (" + dc.method + ")", ok,
              "got [" + std::to_string(r.d_lower) + "," + std::to_string(r.d_upper) + "] exact=" +
                  (r.exact ? "1" : "0") + ", want [" + std::to_string(dc.lower) + "," +
                  std::to_string(dc.upper) + "] exact=" + (dc.exact ? "1" : "0"));
    }

    for (auto& fc : m.flags) {
        if (fc.on_dual && !out.report.dual) {
            check("dual flag " + fc.flag, false, "no dual emitted");
            continue;
        }
        const auto& p = fc.on_dual ? out.report.dual->params : code.params;
        bool got = detail::read_flag(p, fc.flag);
        check(std::string(fc.on_dual ? "dual" : "primal") + " flag " + fc.flag, got == fc.value,
              std::string("got ") + (got ? "true" : "false") + ", want " +
                  (fc.value ? "true" : "false"));
    }
    return out;
}

} // namespace lcdagc
