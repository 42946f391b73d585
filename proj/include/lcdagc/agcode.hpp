#pragma once

// Generalized AG codes: a-scaled evaluations of L(G) at an ordered list of
// rational places, their dual data through a differential with simple poles
// along D, the Gram LCD test, and minimum distance computation.

#include <lcdagc/curve.hpp>
#include <lcdagc/function_field.hpp>
#include <lcdagc/linalg.hpp>
#include <lcdagc/riemann_roch.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lcdagc {

struct CodeFlags {
    bool mds = false;
    bool almost_mds = false;
    bool griesmer_optimal = false;
    bool elliptic_optimal = false;   // cited range condition, elliptic family only
};

struct ParameterRecord {
    long long n = 0;
    long long k = 0;
    long long design_distance = 0;   // n - deg G
    long long d_lower = 0;
    long long d_upper = 0;
    std::optional<long long> d_exact;
    bool lcd = false;
    long long griesmer_value = 0;
    CodeFlags flags;
};

struct GeneralizedAGCode {
    CurvePtr curve;
    std::vector<Place> D;
    Divisor G;
    std::vector<uint32_t> a;
    std::vector<CurveFunction> basis;
    Matrix gen;
    ParameterRecord params;
};

inline long long griesmer(long long q, long long k, long long d) {
    if (k < 1 || d < 1) throw std::invalid_argument("griesmer needs k >= 1, d >= 1");
    long long sum = 0, pw = 1;
    for (long long i = 0; i < k; ++i) {
        sum += (d + pw - 1) / pw;
        if (pw > d / q) pw = d + 1;   // every later term is 1
        else pw *= q;
    }
    return sum;
}

inline bool is_lcd(const Matrix& gen) { return gram_det(gen).idx() != 0; }
inline bool is_lcd(const GeneralizedAGCode& c) { return is_lcd(c.gen); }

// the basis overload evaluates the given spanning set instead of rr_basis(G);
// callers must pass independent functions of L(G) spanning the full space
inline GeneralizedAGCode build_code(CurvePtr C, std::vector<Place> D, Divisor G,
                                    std::vector<uint32_t> a,
                                    std::vector<CurveFunction> basis) {
    const FieldSpec& F = *C->field();
    size_t n = D.size();
    if (a.size() != n) throw std::invalid_argument("scaling vector length differs from |D|");
    for (auto v : a)
        if (v == 0) throw std::invalid_argument("zero scaling entry");
    for (size_t i = 0; i < n; ++i) {
        if (D[i].kind() != Place::Kind::Rational)
            throw std::invalid_argument("evaluation places must be rational");
        if (G.coeff(D[i]) != 0) throw std::invalid_argument("supp(G) meets supp(D)");
        for (size_t j = i + 1; j < n; ++j)
            if (D[i] == D[j]) throw std::invalid_argument("repeated evaluation place");
    }
    long long g = C->genus(), degG = G.degree();
    if (!(2 * g - 2 < degG && degG < (long long)n))
        throw std::invalid_argument("deg G outside (2g-2, n)");

    if (basis.empty()) {
        basis = rr_basis(G);
    } else {
        for (auto& h : basis)
            if (!(divisor_of(h) + G).is_effective())
                throw std::invalid_argument("basis function escapes L(G)");
    }
    if ((long long)basis.size() != degG + 1 - g)
        throw std::logic_error("section count misses deg G + 1 - g");
    size_t k = basis.size();

    Matrix M(&F, k, n);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < n; ++j)
            M.set(i, j, F.mul_idx(a[j], eval_at(basis[i], D[j])));
    if (rank(M) != k) throw std::logic_error("generator matrix is rank deficient");

    GeneralizedAGCode code{std::move(C), std::move(D), std::move(G), std::move(a),
                           std::move(basis), std::move(M), {}};
    auto& p = code.params;
    p.n = (long long)n;
    p.k = (long long)k;
    p.design_distance = (long long)n - degG;
    p.d_lower = std::max<long long>(1, p.design_distance);
    p.d_upper = p.n - p.k + 1;
    p.lcd = is_lcd(code.gen);
    p.griesmer_value = griesmer(F.q(), p.k, p.d_lower);
    if (code.curve->family() == CurveFamily::EllipticAS) {
        long long q = F.q();
        bool range = (2 <= degG && degG <= p.n - q - 1) || (q + 1 <= degG && degG <= p.n - 2);
        p.flags.elliptic_optimal = p.n >= q + 3 && range;
    }
    return code;
}

inline GeneralizedAGCode build_code(CurvePtr C, std::vector<Place> D, Divisor G,
                                    std::vector<uint32_t> a) {
    return build_code(std::move(C), std::move(D), std::move(G), std::move(a), {});
}

// differential dx / prod (x - alpha) over the distinct x-coordinates of D;
// it has a simple pole at every point of every touched fiber
inline Differential standard_differential(const CurvePtr& C, const std::vector<Place>& D) {
    const FieldSpec& F = *C->field();
    std::vector<uint32_t> xs;
    for (auto& P : D)
        if (std::find(xs.begin(), xs.end(), P.x()) == xs.end()) xs.push_back(P.x());
    Poly den = Poly::one(F);
    for (auto alpha : xs) den = den * Poly(&F, {F.neg_idx(alpha), 1});
    return Differential(CurveFunction::from_parts(C, {Poly::one(F)}, den));
}

struct DualData {
    Divisor H;
    std::vector<uint32_t> e;   // residues at the evaluation places, in D order
};

inline DualData dual_divisor(const CurvePtr& C, const std::vector<Place>& D, const Divisor& G,
                             const Differential& omega) {
    DualData out{Divisor(C), {}};
    for (auto& P : D) {
        if (omega.order_at(P) != -1)
            throw std::invalid_argument("differential needs a simple pole at every evaluation place");
        uint32_t e = omega.residue(P);
        if (e == 0) throw std::logic_error("vanishing residue at a simple pole");
        out.e.push_back(e);
    }
    Divisor Dsum(C);
    for (auto& P : D) Dsum.add(P, 1);
    out.H = Dsum - G + omega.divisor();
    return out;
}

// scaling that makes the code built from H the exact dual of the one from G
inline std::vector<uint32_t> dual_scaling(const FieldSpec& F, const std::vector<uint32_t>& a,
                                          const std::vector<uint32_t>& e) {
    std::vector<uint32_t> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = F.mul_idx(e[i], F.inv_idx(a[i]));
    return out;
}

// a-scaled code against (e/a)-scaled dual code: plain inner products vanish
inline bool codes_orthogonal(const GeneralizedAGCode& c, const GeneralizedAGCode& d) {
    const FieldSpec& F = *c.curve->field();
    if (c.gen.cols() != d.gen.cols()) return false;
    for (size_t i = 0; i < c.gen.rows(); ++i)
        for (size_t j = 0; j < d.gen.rows(); ++j) {
            uint32_t acc = 0;
            for (size_t t = 0; t < c.gen.cols(); ++t)
                acc = F.add_idx(acc, F.mul_idx(c.gen.get(i, t), d.gen.get(j, t)));
            if (acc != 0) return false;
        }
    return true;
}

struct DistanceReport {
    std::string method_used;   // enumerate | column_search | bracket
    long long d_lower = 0;
    long long d_upper = 0;
    bool exact = false;
    uint64_t steps = 0;
    std::vector<size_t> witness_columns;   // dependent column set, column_search only
};

namespace detail {

inline unsigned worker_count() {
    if (const char* env = std::getenv("LCD_AGC_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return (unsigned)std::min<long>(v, 256);
    }
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

// floor(q^k) capped so comparisons against a budget stay in range
inline uint64_t pow_capped(uint64_t q, uint64_t k, uint64_t cap) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < k; ++i) {
        if (r > cap / q) return cap + 1;
        r *= q;
    }
    return r;
}

inline uint64_t binom_capped(uint64_t n, uint64_t w, uint64_t cap) {
    uint64_t r = 1;
    for (uint64_t i = 1; i <= w; ++i) {
        if (r > cap) return cap + 1;
        r = r * (n - w + i) / i;
    }
    return r;
}

// all nonzero messages with first digit in {first + t*stride}, walked in
// reflected base-q Gray order; one digit moves per step, and the codeword is
// updated by the field difference of the two digit values times that row
inline void enumerate_block(const Matrix& gen, long long design, uint32_t first, uint32_t stride,
                            std::atomic<bool>& stop, long long& best, uint64_t& visited) {
    const FieldSpec& F = gen.field();
    size_t k = gen.rows(), n = gen.cols();
    uint32_t q = uint32_t(F.q());
    best = (long long)n + 1;
    visited = 0;

    std::vector<uint32_t> cw(n);
    std::vector<uint32_t> digit(k, 0);
    std::vector<int> dir(k, 1);
    for (uint32_t top = first; top < q; top += stride) {
        if (stop.load(std::memory_order_relaxed)) return;
        std::fill(digit.begin(), digit.end(), 0);
        std::fill(dir.begin(), dir.end(), 1);
        digit[0] = top;
        long long wt = 0;
        for (size_t j = 0; j < n; ++j) {
            cw[j] = F.mul_idx(top, gen.get(0, j));
            wt += cw[j] != 0;
        }
        while (true) {
            ++visited;
            if (wt != 0 && wt < best) {
                best = wt;
                if (best <= design) {
                    stop.store(true, std::memory_order_relaxed);
                    return;
                }
            }
            size_t i = 1;
            while (i < k) {
                long long next = (long long)digit[i] + dir[i];
                if (next >= 0 && next < (long long)q) break;
                dir[i] = -dir[i];
                ++i;
            }
            if (i == k) break;
            uint32_t prev = digit[i];
            digit[i] = uint32_t((long long)prev + dir[i]);
            uint32_t delta = F.sub_idx(digit[i], prev);
            for (size_t j = 0; j < n; ++j) {
                uint32_t add = F.mul_idx(delta, gen.get(i, j));
                if (add == 0) continue;
                uint32_t nw = F.add_idx(cw[j], add);
                wt += (nw != 0) - (cw[j] != 0);
                cw[j] = nw;
            }
            if ((visited & 0xffff) == 0 && stop.load(std::memory_order_relaxed)) return;
        }
    }
}

} // namespace detail

// exact distance by Gray-code walk over all q^k messages; the design bound
// lets the walk stop early once it is met
inline DistanceReport min_distance_enumerate(const GeneralizedAGCode& code, uint64_t budget) {
    const FieldSpec& F = *code.curve->field();
    uint64_t total = detail::pow_capped((uint64_t)F.q(), (uint64_t)code.params.k, budget);
    if (total > budget) throw std::invalid_argument("message space exceeds the enumeration budget");

    unsigned workers = std::min<unsigned>(detail::worker_count(), (unsigned)F.q());
    std::atomic<bool> stop{false};
    std::vector<long long> best(workers);
    std::vector<uint64_t> visited(workers);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
            detail::enumerate_block(code.gen, code.params.design_distance, t, workers, stop,
                                    best[t], visited[t]);
        });
    for (auto& th : pool) th.join();

    DistanceReport r;
    r.method_used = "enumerate";
    r.d_lower = r.d_upper = *std::min_element(best.begin(), best.end());
    r.exact = true;
    for (auto v : visited) r.steps += v;
    return r;
}

// exact distance as the size of the smallest dependent column set of the
// parity-check matrix, scanning sizes upward under an operation budget
inline DistanceReport min_distance_columns(const GeneralizedAGCode& code, uint64_t budget) {
    const FieldSpec& F = *code.curve->field();
    Matrix parity = kernel_basis(code.gen);
    size_t n = code.gen.cols(), rows = parity.rows();
    DistanceReport r;
    r.method_used = "column_search";
    r.d_lower = code.params.d_lower;
    r.d_upper = code.params.n - code.params.k + 1;

    uint64_t ops = 0;
    for (size_t w = 1; w <= rows + 1; ++w) {
        std::vector<size_t> idx(w);
        for (size_t i = 0; i < w; ++i) idx[i] = i;
        Matrix sub(&F, rows, w);
        while (true) {
            ops += (uint64_t)w * w * rows;
            ++r.steps;
            if (ops > budget) {
                r.d_lower = std::max<long long>(r.d_lower, (long long)w);
                r.exact = false;
                return r;
            }
            for (size_t c = 0; c < w; ++c)
                for (size_t i = 0; i < rows; ++i) sub.set(i, c, parity.get(i, idx[c]));
            if (rank(sub) < w) {
                r.d_lower = r.d_upper = (long long)w;
                r.exact = true;
                r.witness_columns = idx;
                return r;
            }
            size_t i = w;
            while (i > 0 && idx[i - 1] == n - w + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (size_t j = i; j < w; ++j) idx[j] = idx[j - 1] + 1;
        }
        r.d_lower = std::max<long long>(r.d_lower, (long long)w + 1);
    }
    // every rows+1 columns of the parity check are dependent
    r.d_lower = r.d_upper = (long long)rows + 1;
    r.exact = true;
    return r;
}

// weight of the lightest codeword among sampled random messages
inline long long sampled_upper_bound(const GeneralizedAGCode& code, uint64_t samples) {
    const FieldSpec& F = *code.curve->field();
    size_t k = code.gen.rows(), n = code.gen.cols();
    std::mt19937_64 rng(0x5eedc0de);
    std::uniform_int_distribution<uint32_t> pick(0, uint32_t(F.q() - 1));
    long long best = code.params.n - code.params.k + 1;
    std::vector<uint32_t> m(k), cw(n);
    for (uint64_t t = 0; t < samples; ++t) {
        bool nz = false;
        for (auto& v : m) nz |= (v = pick(rng)) != 0;
        if (!nz) continue;
        long long wt = 0;
        for (size_t j = 0; j < n; ++j) {
            uint32_t acc = 0;
            for (size_t i = 0; i < k; ++i) acc = F.add_idx(acc, F.mul_idx(m[i], code.gen.get(i, j)));
            wt += acc != 0;
        }
        best = std::min(best, wt);
    }
    return best;
}

inline DistanceReport min_distance(const GeneralizedAGCode& code,
                                   const std::string& method = "auto",
                                   uint64_t budget = 500000000ull) {
    const FieldSpec& F = *code.curve->field();
    if (method == "enumerate") return min_distance_enumerate(code, budget);
    if (method == "column_search") return min_distance_columns(code, budget);
    if (method != "auto") throw std::invalid_argument("unknown distance method");

    uint64_t n = (uint64_t)code.params.n;
    uint64_t enum_cost = detail::pow_capped((uint64_t)F.q(), (uint64_t)code.params.k, budget);
    uint64_t col_cost = 0;
    size_t rows = size_t(code.params.n - code.params.k);
    for (long long w = 1; w <= code.params.design_distance && col_cost <= budget; ++w) {
        uint64_t c = detail::binom_capped(n, (uint64_t)w, budget);
        col_cost = c > budget ? budget + 1 : col_cost + c * (uint64_t)w * (uint64_t)w * rows;
    }
    bool enum_ok = enum_cost <= budget, col_ok = col_cost <= budget;
    if (enum_ok && (!col_ok || enum_cost * n <= col_cost)) return min_distance_enumerate(code, budget);
    if (col_ok || !enum_ok) {
        auto r = min_distance_columns(code, budget);
        if (r.exact || !enum_ok) {
            if (!r.exact) {
                r.method_used = "bracket";
                r.d_upper = std::min(r.d_upper, sampled_upper_bound(code, 2000));
                if (r.d_lower == r.d_upper) r.exact = true;   // bound met by a codeword
            }
            return r;
        }
    }
    return min_distance_enumerate(code, budget);
}

inline void record_distance(GeneralizedAGCode& code, const DistanceReport& r) {
    auto& p = code.params;
    p.d_lower = std::max(p.d_lower, r.d_lower);
    p.d_upper = std::min(p.d_upper, r.d_upper);
    if (p.d_lower > p.d_upper) throw std::logic_error("inconsistent distance bracket");
    if (r.exact) p.d_exact = r.d_lower;
    p.griesmer_value = griesmer(code.curve->field()->q(), p.k, p.d_lower);
    if (p.d_exact) {
        long long d = *p.d_exact;
        p.flags.mds = d == p.n - p.k + 1;
        p.flags.almost_mds = d == p.n - p.k;
        p.flags.griesmer_optimal = p.n == griesmer(code.curve->field()->q(), p.k, d);
    }
}

inline nlohmann::json to_json(const ParameterRecord& p) {
    nlohmann::json j{{"n", p.n},
                     {"k", p.k},
                     {"design_distance", p.design_distance},
                     {"d_bracket", {p.d_lower, p.d_upper}},
                     {"lcd", p.lcd},
                     {"griesmer", p.griesmer_value},
                     {"flags",
                      {{"mds", p.flags.mds},
                       {"almost_mds", p.flags.almost_mds},
                       {"griesmer_optimal", p.flags.griesmer_optimal},
                       {"elliptic_optimal", p.flags.elliptic_optimal}}}};
    j["d_exact"] = p.d_exact ? nlohmann::json(*p.d_exact) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const GeneralizedAGCode& c) {
    nlohmann::json a = nlohmann::json::array();
    for (auto v : c.a) a.push_back(v);
    return nlohmann::json{{"field", c.curve->field()->spec_string()},
                          {"curve", c.curve->spec_string()},
                          {"D_size", c.D.size()},
                          {"G", c.G.str()},
                          {"a", a},
                          {"matrix", c.gen.to_text()},
                          {"params", to_json(c.params)}};
}

} // namespace lcdagc
