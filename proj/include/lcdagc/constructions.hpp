#pragma once

// Recipes that assemble LCD code pairs from curve data.  Every recipe checks
// its hypotheses one clause at a time and only builds when all of them hold,
// so a failed report names the exact clause that blocked emission.

#include <lcdagc/agcode.hpp>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcdagc {

struct HypothesisCheck {
    std::string clause;
    bool passed;
    std::string detail;
};

struct ConstructionReport {
    std::string recipe;
    nlohmann::json inputs;
    std::vector<HypothesisCheck> hypotheses;
    bool emitted = false;
    std::optional<GeneralizedAGCode> code;
    std::optional<GeneralizedAGCode> dual;
    std::vector<uint32_t> residues;   // e in D order, once the differential is fixed
    std::string failure;              // first failed clause, empty on success

    bool ok() const { return failure.empty(); }

    bool check(const std::string& clause, bool passed, std::string detail = "") {
        hypotheses.push_back({clause, passed, std::move(detail)});
        if (!passed && failure.empty()) failure = clause;
        return passed;
    }
};

namespace detail {

// deg-0 principality; rational support goes through the group law, anything
// else through l(D) = 1
inline bool deg0_principal(const Divisor& D) {
    if (D.degree() != 0) throw std::invalid_argument("principality test needs degree 0");
    bool rational = true;
    for (auto& [P, n] : D.terms())
        if (!P.is_infinity() && P.kind() != Place::Kind::Rational) rational = false;
    if (rational) return is_principal(D);
    return rr_dim(D) == 1;
}

// closed-form residue of dx / prod_i (x + alpha_i) at any point above alpha_j
inline uint32_t fiber_residue(const FieldSpec& F, const std::vector<uint32_t>& alphas, size_t j) {
    uint32_t prod = F.one_idx();
    for (size_t i = 0; i < alphas.size(); ++i) {
        if (i == j) continue;
        prod = F.mul_idx(prod, F.add_idx(alphas[j], F.neg_idx(alphas[i])));
    }
    return F.inv_idx(prod);
}

// char-2 square root of fiber_residue: 1 / prod (sqrt(a_j) + sqrt(a_i))
inline uint32_t fiber_residue_sqrt(const FieldSpec& F, const std::vector<uint32_t>& alphas,
                                   size_t j) {
    uint32_t prod = F.one_idx();
    for (size_t i = 0; i < alphas.size(); ++i) {
        if (i == j) continue;
        auto sj = F.sqrt_idx(alphas[j]), si = F.sqrt_idx(alphas[i]);
        prod = F.mul_idx(prod, F.add_idx(*sj, *si));
    }
    return F.inv_idx(prod);
}

inline Poly product_of_linears(const FieldSpec& F, const std::vector<uint32_t>& alphas) {
    Poly h = Poly::one(F);
    for (auto a : alphas) h = h * Poly(&F, {F.neg_idx(a), 1});
    return h;
}

// x^q - x over the whole base field
inline Poly full_fiber_poly(const FieldSpec& F) {
    Poly h = Poly::monomial(F, F.q(), F.one_idx());
    return h + Poly(&F, {0, F.neg_idx(F.one_idx())});
}

inline std::vector<uint32_t> ones(const FieldSpec& F, size_t n) {
    return std::vector<uint32_t>(n, F.one_idx());
}

// collapse the bracket set by build_code when the design bound already meets
// the Singleton ceiling
inline void record_collapse(GeneralizedAGCode& code) {
    auto& p = code.params;
    if (p.d_lower == p.d_upper && !p.d_exact) {
        DistanceReport r;
        r.method_used = "bracket";
        r.d_lower = p.d_lower;
        r.d_upper = p.d_upper;
        r.exact = true;
        record_distance(code, r);
    }
}

// builds the gated pair, verifies exact duality, and stores both codes
inline void emit_pair(ConstructionReport& rep, CurvePtr C, const std::vector<Place>& D,
                      const Divisor& G, const Divisor& H, const std::vector<uint32_t>& a,
                      const std::vector<uint32_t>& e,
                      std::vector<CurveFunction> basis = {}) {
    const FieldSpec& F = *C->field();
    auto b = dual_scaling(F, a, e);
    auto code = build_code(C, D, G, a, std::move(basis));
    auto dual = build_code(C, D, H, b);
    if (code.params.k + dual.params.k != code.params.n)
        throw std::logic_error("pair dimensions miss n");
    if (!codes_orthogonal(code, dual))
        throw std::logic_error("pair fails orthogonality");
    if (!code.params.lcd || !dual.params.lcd)
        throw std::logic_error("gated construction produced a non-LCD code");
    record_collapse(code);
    record_collapse(dual);
    rep.residues = e;
    rep.code = std::move(code);
    rep.dual = std::move(dual);
    rep.emitted = true;
}

// residue gate shared by the elliptic recipes: every e_i must be a square
inline bool square_residues(ConstructionReport& rep, const FieldSpec& F,
                            const std::vector<uint32_t>& e, std::vector<uint32_t>& a) {
    a.clear();
    for (size_t i = 0; i < e.size(); ++i) {
        auto r = F.sqrt_idx(e[i]);
        if (!r)
            return rep.check("square-residue", false,
                             "residue at place " + std::to_string(i) + " is not a square");
        a.push_back(*r);
    }
    return rep.check("square-residue", true);
}

inline bool constant_residues(ConstructionReport& rep, const std::vector<uint32_t>& e) {
    for (auto v : e)
        if (v != e.front())
            return rep.check("constant-residues", false, "residues differ along D");
    return rep.check("constant-residues", true);
}

// wraps dual_divisor: the pole-order requirement becomes a clause instead of
// an exception, and the computed H is compared against the stated formula
inline std::optional<DualData> dual_vs_formula(ConstructionReport& rep, const CurvePtr& C,
                                                   const std::vector<Place>& D, const Divisor& G,
                                                   const Differential& omega,
                                                   const Divisor* expected_H) {
    DualData dd{Divisor(C), {}};
    try {
        dd = dual_divisor(C, D, G, omega);
    } catch (const std::exception& ex) {
        rep.check("dual-divisor", false, ex.what());
        return std::nullopt;
    }
    if (expected_H && !(dd.H == *expected_H)) {
        rep.check("dual-divisor", false,
                  "computed dual divisor " + dd.H.str() + " differs from " + expected_H->str());
        return std::nullopt;
    }
    rep.check("dual-divisor", true);
    return dd;
}

inline bool disjoint_support(ConstructionReport& rep, const CurvePtr& C, const Divisor& G,
                             const std::vector<Place>& D, const std::string& which) {
    for (auto& P : D)
        if (G.coeff(P) != 0)
            return rep.check("disjoint-support", false,
                             which + " meets the evaluation set at " + Divisor::at(C, P).str());
    return rep.check("disjoint-support", true);
}

} // namespace detail

// user-supplied divisors on an elliptic curve; gcd(G,H) must be degree 0 and
// non-principal.  omega_scale, when given, is the principal divisor of the
// scale f with omega = f dx; otherwise the standard differential over the
// x-support of D is used.
inline ConstructionReport thm3_build(CurvePtr C, std::vector<Place> D, Divisor G,
                                     std::optional<Divisor> omega_scale = std::nullopt) {
    ConstructionReport rep;
    rep.recipe = "thm3";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"D_size", D.size()}, {"G", G.str()},
                  {"omega", omega_scale ? omega_scale->str() : "standard"}};
    if (!rep.check("family", C->family() == CurveFamily::EllipticAS, "needs an elliptic curve"))
        return rep;
    long long n = (long long)D.size(), degG = G.degree();
    if (!rep.check("parameter-range", 0 < degG && degG < n,
                   "deg G = " + std::to_string(degG) + " outside (0, " + std::to_string(n) + ")"))
        return rep;
    if (!detail::disjoint_support(rep, C, G, D, "supp(G)")) return rep;

    std::optional<Differential> omega;
    if (omega_scale) {
        auto f = function_with_divisor(*omega_scale);
        if (!rep.check("omega", f.has_value(), "omega divisor is not principal")) return rep;
        omega.emplace(*f);
    } else {
        omega.emplace(standard_differential(C, D));
    }
    auto dd = detail::dual_vs_formula(rep, C, D, G, *omega, nullptr);
    if (!dd) return rep;
    Divisor H = dd->H;
    if (!detail::disjoint_support(rep, C, H, D, "supp(H)")) return rep;

    std::vector<uint32_t> a;
    if (!detail::square_residues(rep, F, dd->e, a)) return rep;

    Divisor g = gcd(G, H);
    if (!rep.check("gcd-degree", g.degree() == 0,
                   "gcd(G,H) = " + g.str() + " has degree " + std::to_string(g.degree())))
        return rep;
    if (!rep.check("principality", !detail::deg0_principal(g), "gcd(G,H) is principal"))
        return rep;
    detail::emit_pair(rep, C, D, G, H, a, dd->e);
    return rep;
}

// G = (r-1)O + r*Dbar where Dbar is the group-law sum of D
inline ConstructionReport cor1_build(CurvePtr C, std::vector<Place> D, long long r) {
    ConstructionReport rep;
    rep.recipe = "cor1";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"D_size", D.size()}, {"r", r}};
    if (!rep.check("family", C->family() == CurveFamily::EllipticAS, "needs an elliptic curve"))
        return rep;
    long long n = (long long)D.size();
    if (!rep.check("parameter-range", 2 <= r && 2 * r <= n + 1,
                   "needs 2 <= r <= (n+1)/2"))
        return rep;

    Divisor Dsum(C);
    for (auto& P : D) Dsum.add(P, 1);
    auto bar = class_sum(Dsum);
    if (!rep.check("torsion", bar.has_value() && !C->ell_in_torsion(bar, r - 1),
                   bar ? "class point lies in the (r-1)-torsion"
                       : "class point is the point at infinity"))
        return rep;
    Place Q = Place::rational(bar->x, bar->y);
    bool hitsD = std::find(D.begin(), D.end(), Q) != D.end();
    if (!rep.check("disjoint-support", !hitsD, "class point lies in the evaluation set"))
        return rep;

    Divisor G = Divisor::at(C, Place::infinity(), r - 1);
    G.add(Q, r);
    auto f = function_with_divisor(Divisor::at(C, Place::infinity(), n - 1) + Divisor::at(C, Q) - Dsum);
    if (!rep.check("omega", f.has_value(), "no function matches the required differential"))
        return rep;
    Divisor H = Divisor::at(C, Place::infinity(), n - r);
    H.add(Q, -(r - 1));
    auto dd = detail::dual_vs_formula(rep, C, D, G, Differential(*f), &H);
    if (!dd) return rep;

    std::vector<uint32_t> a;
    if (!detail::square_residues(rep, F, dd->e, a)) return rep;
    Divisor g = gcd(G, H);
    if (!rep.check("principality", g.degree() == 0 && !detail::deg0_principal(g),
                   "gcd(G,H) is principal"))
        return rep;
    detail::emit_pair(rep, C, D, G, H, a, dd->e);
    return rep;
}

// G = (r deg Q)O + rQ over an evaluation set whose group-law sum vanishes
inline ConstructionReport cor2_build(CurvePtr C, std::vector<Place> D, Place Q, long long r) {
    ConstructionReport rep;
    rep.recipe = "cor2";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"D_size", D.size()}, {"Q", Divisor::at(C, Q).str()}, {"r", r}};
    if (!rep.check("family", C->family() == CurveFamily::EllipticAS, "needs an elliptic curve"))
        return rep;
    long long n = (long long)D.size(), dQ = Q.degree();
    if (!rep.check("parameter-range", !Q.is_infinity() && r > 0 && 0 < 2 * r * dQ && 2 * r * dQ < n,
                   "needs 0 < 2 r deg(Q) < n and affine Q"))
        return rep;
    bool hitsD = Q.kind() == Place::Kind::Rational &&
                 std::find(D.begin(), D.end(), Q) != D.end();
    if (!rep.check("disjoint-support", !hitsD, "Q lies in the evaluation set")) return rep;

    Divisor Dsum(C);
    for (auto& P : D) Dsum.add(P, 1);
    auto bar = class_sum(Dsum);
    if (!rep.check("class-sum", !bar.has_value(), "the evaluation set does not sum to the identity"))
        return rep;

    Divisor G = Divisor::at(C, Place::infinity(), r * dQ);
    G.add(Q, r);
    auto f = function_with_divisor(Divisor::at(C, Place::infinity(), n) - Dsum);
    if (!rep.check("omega", f.has_value(), "no function matches the required differential"))
        return rep;
    Divisor H = Divisor::at(C, Place::infinity(), n - r * dQ);
    H.add(Q, -r);
    auto dd = detail::dual_vs_formula(rep, C, D, G, Differential(*f), &H);
    if (!dd) return rep;

    std::vector<uint32_t> a;
    if (!detail::square_residues(rep, F, dd->e, a)) return rep;
    Divisor g = gcd(G, H);
    if (!rep.check("principality", g.degree() == 0 && !detail::deg0_principal(g),
                   "gcd(G,H) is principal"))
        return rep;
    detail::emit_pair(rep, C, D, G, H, a, dd->e);
    return rep;
}

namespace detail {

struct FiberData {
    std::vector<Place> D;              // evaluation places in fiber order
    std::vector<uint32_t> a;           // closed-form scaling
    std::vector<Place> plus, minus;    // the two points above each alpha
};

// common gates of the split-fiber recipes: distinct alphas, each one solvable
inline bool split_fibers(ConstructionReport& rep, const Curve& C,
                         const std::vector<uint32_t>& alphas) {
    for (size_t i = 0; i < alphas.size(); ++i)
        for (size_t j = i + 1; j < alphas.size(); ++j)
            if (alphas[i] == alphas[j])
                return rep.check("alphas-distinct", false,
                                 "alpha " + std::to_string(alphas[i]) + " repeats");
    rep.check("alphas-distinct", true);
    for (auto a : alphas)
        if (C.fiber(a).empty())
            return rep.check("fiber-splits", false,
                             "no point above x = " + std::to_string(a));
    return rep.check("fiber-splits", true);
}

// torsion gate with the coprime fast path
inline bool point_torsion_gate(ConstructionReport& rep, const Curve& C, const AffinePoint& P,
                               long long r) {
    long long N = C.point_count();
    if (std::gcd(r, N) == 1)
        return rep.check("torsion", true, "gcd(r, group order) = 1");
    bool in = C.ell_in_torsion(AffinePoint{P.x, P.y}, r);
    return rep.check("torsion", !in,
                     in ? "support point lies in the " + std::to_string(r) + "-torsion" : "");
}

// verifies the closed-form scaling squares to the residue computed by series
inline bool scaling_matches_residues(ConstructionReport& rep, const FieldSpec& F,
                                     const std::vector<uint32_t>& a,
                                     const std::vector<uint32_t>& e) {
    for (size_t i = 0; i < a.size(); ++i)
        if (F.mul_idx(a[i], a[i]) != e[i])
            return rep.check("scaling-residue", false,
                             "closed form disagrees with the residue at place " + std::to_string(i));
    return rep.check("scaling-residue", true);
}

} // namespace detail

// full fibers over alpha_1..alpha_s, G = rO + r P(alpha_0)+
inline ConstructionReport thm4_build(CurvePtr C, uint32_t alpha0, std::vector<uint32_t> fibers,
                                     long long r) {
    ConstructionReport rep;
    rep.recipe = "thm4";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"alpha0", alpha0}, {"fibers", fibers}, {"r", r}};
    if (!rep.check("family", C->family() == CurveFamily::EllipticAS, "needs an elliptic curve"))
        return rep;
    std::vector<uint32_t> all = fibers;
    all.push_back(alpha0);
    if (!detail::split_fibers(rep, *C, all)) return rep;
    long long s = (long long)fibers.size();
    if (!rep.check("parameter-range", 0 < r && r < s, "needs 0 < r < s")) return rep;

    auto ys0 = C->fiber(alpha0);
    AffinePoint Pp{alpha0, ys0[0]};
    if (!detail::point_torsion_gate(rep, *C, Pp, r)) return rep;

    std::vector<Place> D;
    std::vector<uint32_t> a;
    for (size_t j = 0; j < fibers.size(); ++j) {
        auto ys = C->fiber(fibers[j]);
        uint32_t b = detail::fiber_residue_sqrt(F, fibers, j);
        D.push_back(Place::rational(fibers[j], ys[0]));
        D.push_back(Place::rational(fibers[j], ys[1]));
        a.push_back(b);
        a.push_back(b);
    }
    Divisor G = Divisor::at(C, Place::infinity(), r);
    G.add(Place::rational(Pp.x, Pp.y), r);
    Divisor H = Divisor::at(C, Place::infinity(), 2 * s - r);
    H.add(Place::rational(Pp.x, Pp.y), -r);

    Differential omega(CurveFunction::from_parts(C, {Poly::one(F)},
                                                 detail::product_of_linears(F, fibers)));
    auto dd = detail::dual_vs_formula(rep, C, D, G, omega, &H);
    if (!dd) return rep;
    if (!detail::scaling_matches_residues(rep, F, a, dd->e)) return rep;
    detail::emit_pair(rep, C, D, G, H, a, dd->e);
    return rep;
}

// one bare point over alpha_1 plus full fibers over alpha_2..alpha_s,
// G = (r+1)O + r P(alpha_1)+
inline ConstructionReport thm5_build(CurvePtr C, std::vector<uint32_t> fibers, long long r) {
    ConstructionReport rep;
    rep.recipe = "thm5";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"fibers", fibers}, {"r", r}};
    if (!rep.check("family", C->family() == CurveFamily::EllipticAS, "needs an elliptic curve"))
        return rep;
    if (!detail::split_fibers(rep, *C, fibers)) return rep;
    long long s = (long long)fibers.size();
    if (!rep.check("parameter-range", 0 <= r && r < s - 1, "needs 0 <= r < s-1")) return rep;

    auto ys1 = C->fiber(fibers[0]);
    AffinePoint Pp{fibers[0], ys1[0]};
    if (!detail::point_torsion_gate(rep, *C, Pp, r + 1)) return rep;

    std::vector<Place> D{Place::rational(fibers[0], ys1[1])};
    std::vector<uint32_t> a{detail::fiber_residue_sqrt(F, fibers, 0)};
    for (size_t j = 1; j < fibers.size(); ++j) {
        auto ys = C->fiber(fibers[j]);
        uint32_t b = detail::fiber_residue_sqrt(F, fibers, j);
        D.push_back(Place::rational(fibers[j], ys[0]));
        D.push_back(Place::rational(fibers[j], ys[1]));
        a.push_back(b);
        a.push_back(b);
    }
    Divisor G = Divisor::at(C, Place::infinity(), r + 1);
    G.add(Place::rational(Pp.x, Pp.y), r);
    Divisor H = Divisor::at(C, Place::infinity(), 2 * s - r - 1);
    H.add(Place::rational(Pp.x, Pp.y), -(r + 1));

    Differential omega(CurveFunction::from_parts(C, {Poly::one(F)},
                                                 detail::product_of_linears(F, fibers)));
    auto dd = detail::dual_vs_formula(rep, C, D, G, omega, &H);
    if (!dd) return rep;
    if (!detail::scaling_matches_residues(rep, F, a, dd->e)) return rep;
    detail::emit_pair(rep, C, D, G, H, a, dd->e);
    return rep;
}

// full fibers over alpha_1..alpha_s with both points of the alpha_0 fiber in
// supp(G); the differential includes the alpha_0 factor
inline ConstructionReport thm6_build(CurvePtr C, uint32_t alpha0, std::vector<uint32_t> fibers,
                                     long long r) {
    ConstructionReport rep;
    rep.recipe = "thm6";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"alpha0", alpha0}, {"fibers", fibers}, {"r", r}};
    if (!rep.check("family", C->family() == CurveFamily::EllipticAS, "needs an elliptic curve"))
        return rep;
    std::vector<uint32_t> all{alpha0};
    all.insert(all.end(), fibers.begin(), fibers.end());
    if (!detail::split_fibers(rep, *C, all)) return rep;
    long long s = (long long)fibers.size();
    if (!rep.check("parameter-range", 0 <= r && 2 * r + 2 < s, "needs 0 <= r < (s-2)/2"))
        return rep;

    auto ys0 = C->fiber(alpha0);
    Place Pp = Place::rational(alpha0, ys0[0]), Pm = Place::rational(alpha0, ys0[1]);

    std::vector<Place> D;
    std::vector<uint32_t> a;
    for (size_t j = 0; j < fibers.size(); ++j) {
        auto ys = C->fiber(fibers[j]);
        uint32_t b = detail::fiber_residue_sqrt(F, all, j + 1);
        D.push_back(Place::rational(fibers[j], ys[0]));
        D.push_back(Place::rational(fibers[j], ys[1]));
        a.push_back(b);
        a.push_back(b);
    }
    Divisor G = Divisor::at(C, Place::infinity(), 2 * r + 3);
    G.add(Pp, r + 1);
    G.add(Pm, r);
    Divisor H = Divisor::at(C, Place::infinity(), 2 * s - 2 * r - 1);
    H.add(Pp, -(r + 2));
    H.add(Pm, -(r + 1));

    Differential omega(CurveFunction::from_parts(C, {Poly::one(F)},
                                                 detail::product_of_linears(F, all)));
    auto dd = detail::dual_vs_formula(rep, C, D, G, omega, &H);
    if (!dd) return rep;
    if (!detail::scaling_matches_residues(rep, F, a, dd->e)) return rep;
    Divisor g = gcd(G, H);
    if (!rep.check("principality", g.degree() == 0 && !detail::deg0_principal(g),
                   "gcd(G,H) is principal"))
        return rep;
    detail::emit_pair(rep, C, D, G, H, a, dd->e);
    return rep;
}

// any curve family; gcd(G,H) must be non-special of degree g-1
inline ConstructionReport thm7_build(CurvePtr C, std::vector<Place> D, Divisor G,
                                     std::optional<Divisor> omega_scale = std::nullopt) {
    ConstructionReport rep;
    rep.recipe = "thm7";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"D_size", D.size()}, {"G", G.str()},
                  {"omega", omega_scale ? omega_scale->str() : "standard"}};
    long long n = (long long)D.size(), g = C->genus(), degG = G.degree();
    if (!rep.check("parameter-range", 2 * g - 2 < degG && degG < n,
                   "deg G = " + std::to_string(degG) + " outside (2g-2, n)"))
        return rep;
    if (!detail::disjoint_support(rep, C, G, D, "supp(G)")) return rep;

    std::optional<Differential> omega;
    if (omega_scale) {
        auto f = function_with_divisor(*omega_scale);
        if (!rep.check("omega", f.has_value(), "omega divisor is not principal")) return rep;
        omega.emplace(*f);
    } else {
        omega.emplace(standard_differential(C, D));
    }
    auto dd = detail::dual_vs_formula(rep, C, D, G, *omega, nullptr);
    if (!dd) return rep;
    Divisor H = dd->H;
    if (!detail::disjoint_support(rep, C, H, D, "supp(H)")) return rep;

    std::vector<uint32_t> a;
    if (!detail::square_residues(rep, F, dd->e, a)) return rep;

    Divisor gc = gcd(G, H);
    if (!rep.check("gcd-degree", gc.degree() == g - 1,
                   "gcd(G,H) has degree " + std::to_string(gc.degree()) +
                       ", needs g-1 = " + std::to_string(g - 1)))
        return rep;
    if (!rep.check("non-speciality", is_non_special(gc), "gcd(G,H) is special"))
        return rep;
    detail::emit_pair(rep, C, D, G, H, a, dd->e);
    return rep;
}

// hyperelliptic y^2 + y = x^(q0+1) over GF(q0^2); all affine points except P,
// G = (r + q0/2)O + rP
inline ConstructionReport hyper_build_rp(CurvePtr C, Place P, long long r) {
    ConstructionReport rep;
    rep.recipe = "hyper-rp";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"P", Divisor::at(C, P).str()}, {"r", r}};
    if (!rep.check("family", C->family() == CurveFamily::HyperellipticAS,
                   "needs the hyperelliptic model"))
        return rep;
    long long q0 = C->weight_y() - 1;
    if (!rep.check("parameter-range",
                   q0 >= 4 && P.kind() == Place::Kind::Rational && 4 * r >= q0 &&
                       r <= q0 * q0 - q0 / 4 - 1,
                   "needs q0 >= 4, rational P, q0/4 <= r <= q0^2 - q0/4 - 1"))
        return rep;

    std::vector<Place> D;
    for (auto& pt : C->points()) {
        Place Q = Place::rational(pt.x, pt.y);
        if (!(Q == P)) D.push_back(Q);
    }
    Divisor G = Divisor::at(C, Place::infinity(), r + q0 / 2);
    G.add(P, r);
    Divisor gc = Divisor::at(C, Place::infinity(), r + q0 / 2);
    gc.add(P, -(r + 1));
    if (!rep.check("non-speciality", is_non_special(gc),
                   "divisor " + gc.str() + " is special"))
        return rep;

    Divisor H = Divisor::at(C, Place::infinity(), 2 * q0 * q0 + q0 / 2 - r - 2);
    H.add(P, -(r + 1));
    Differential omega(CurveFunction::from_parts(C, {Poly::one(F)}, detail::full_fiber_poly(F)));
    auto dd = detail::dual_vs_formula(rep, C, D, G, omega, &H);
    if (!dd) return rep;
    if (!detail::constant_residues(rep, dd->e)) return rep;
    detail::emit_pair(rep, C, D, G, H, detail::ones(F, D.size()), dd->e);
    return rep;
}

// hyperelliptic curve with t excluded fibers; multiplicities n_i sum to the
// genus and the r_i obey the stated cap
inline ConstructionReport hyper_build_reduced(CurvePtr C, std::vector<uint32_t> alphas,
                                              std::vector<long long> ns,
                                              std::vector<long long> rs) {
    ConstructionReport rep;
    rep.recipe = "hyper-reduced";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"alphas", alphas}, {"ns", ns}, {"rs", rs}};
    if (!rep.check("family", C->family() == CurveFamily::HyperellipticAS,
                   "needs the hyperelliptic model"))
        return rep;
    long long q0 = C->weight_y() - 1, g = C->genus();
    long long t = (long long)alphas.size();
    if (!rep.check("parameter-range", t > 0 && ns.size() == alphas.size() && rs.size() == alphas.size(),
                   "alphas, ns, rs need equal nonzero length"))
        return rep;
    if (!detail::split_fibers(rep, *C, alphas)) return rep;
    long long sum_n = std::accumulate(ns.begin(), ns.end(), 0ll);
    long long sum_r = std::accumulate(rs.begin(), rs.end(), 0ll);
    bool pos = std::all_of(ns.begin(), ns.end(), [](long long v) { return v > 0; }) &&
               std::all_of(rs.begin(), rs.end(), [](long long v) { return v >= 0; });
    if (!rep.check("parameter-range",
                   q0 >= 4 && pos && sum_n == g &&
                       8 * sum_r <= 4 * q0 * q0 - 3 * q0 - 8 * t - 8,
                   "needs q0 >= 4, n_i > 0 summing to g, r_i >= 0 within the cap"))
        return rep;

    std::vector<Place> plus(t, Place::infinity()), minus(t, Place::infinity());
    for (long long i = 0; i < t; ++i) {
        auto ys = C->fiber(alphas[i]);
        plus[i] = Place::rational(alphas[i], ys[0]);
        minus[i] = Place::rational(alphas[i], ys[1]);
    }
    std::vector<Place> D;
    for (auto& pt : C->points()) {
        if (std::find(alphas.begin(), alphas.end(), pt.x) != alphas.end()) continue;
        D.push_back(Place::rational(pt.x, pt.y));
    }

    Divisor G = Divisor::at(C, Place::infinity(), 2 * (t + sum_r) + q0 - 1);
    for (long long i = 0; i < t; ++i) {
        G.add(plus[i], rs[i] + ns[i]);
        G.add(minus[i], rs[i]);
    }
    Divisor H = Divisor::at(C, Place::infinity(), 2 * q0 * q0 - 2 * (t + sum_r) - 1);
    for (long long i = 0; i < t; ++i) {
        H.add(plus[i], -(rs[i] + ns[i] + 1));
        H.add(minus[i], -(rs[i] + 1));
    }
    Divisor gc = gcd(G, H);
    if (!rep.check("gcd-degree", gc.degree() == g - 1,
                   "gcd(G,H) has degree " + std::to_string(gc.degree())))
        return rep;
    if (!rep.check("non-speciality", is_non_special(gc), "gcd(G,H) is special")) return rep;

    Differential omega(CurveFunction::from_parts(C, {Poly::one(F)}, detail::full_fiber_poly(F)));
    auto dd = detail::dual_vs_formula(rep, C, D, G, omega, &H);
    if (!dd) return rep;
    if (!detail::constant_residues(rep, dd->e)) return rep;
    detail::emit_pair(rep, C, D, G, H, detail::ones(F, D.size()), dd->e);
    return rep;
}

// Hermitian curve, G = (r deg P + g - 1)O + rP for a higher-degree place P;
// the code is LCD exactly when (r deg P + g - 1)O - rP is non-special
inline ConstructionReport hermitian_build(CurvePtr C, Place P, long long r) {
    ConstructionReport rep;
    rep.recipe = "hermitian";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"P", Divisor::at(C, P).str()}, {"r", r}};
    if (!rep.check("family", C->family() == CurveFamily::Hermitian, "needs the Hermitian model"))
        return rep;
    long long g = C->genus(), n = (long long)C->points().size();
    long long dP = P.degree();
    if (!rep.check("parameter-range", dP > 1 && r >= 1 && 2 * r * dP <= n,
                   "needs deg(P) > 1 and 1 <= r with r deg(P) <= n/2"))
        return rep;

    Divisor gc = Divisor::at(C, Place::infinity(), r * dP + g - 1);
    gc.add(P, -r);
    if (!is_non_special(gc)) {
        auto wit = rr_basis(gc);
        rep.check("non-speciality", false,
                  "divisor " + gc.str() + " is special; witness " + wit[0].str());
        return rep;
    }
    rep.check("non-speciality", true);

    std::vector<Place> D;
    for (auto& pt : C->points()) D.push_back(Place::rational(pt.x, pt.y));
    Divisor G = Divisor::at(C, Place::infinity(), r * dP + g - 1);
    G.add(P, r);
    Divisor H = Divisor::at(C, Place::infinity(), n - r * dP + g - 1);
    H.add(P, -r);
    Differential omega(CurveFunction::from_parts(C, {Poly::one(F)}, detail::full_fiber_poly(F)));
    auto dd = detail::dual_vs_formula(rep, C, D, G, omega, &H);
    if (!dd) return rep;
    if (!detail::constant_residues(rep, dd->e)) return rep;
    detail::emit_pair(rep, C, D, G, H, detail::ones(F, D.size()), dd->e);
    return rep;
}

// projective line, G = rO + rP0, evaluation at the powers of a primitive
// element; the generator comes out as the interleaved power pattern
inline ConstructionReport projline_build(CurvePtr C, long long r) {
    ConstructionReport rep;
    rep.recipe = "projline";
    const FieldSpec& F = *C->field();
    rep.inputs = {{"r", r}};
    if (!rep.check("family", C->family() == CurveFamily::ProjectiveLine,
                   "needs the projective line"))
        return rep;
    long long q = F.q();
    if (!rep.check("parameter-range", 0 < r && 2 * r <= q - 2, "needs 0 < r <= (q-2)/2"))
        return rep;

    uint32_t rho = F.primitive_idx();
    std::vector<Place> D;
    uint32_t x = F.one_idx();
    for (long long j = 0; j < q - 1; ++j) {
        D.push_back(Place::rational(x, C->fiber(x)[0]));
        x = F.mul_idx(x, rho);
    }
    Place P0 = Place::rational(0, C->fiber(0)[0]);
    Divisor G = Divisor::at(C, Place::infinity(), r);
    G.add(P0, r);
    Divisor H = Divisor::at(C, Place::infinity(), q - r - 2);
    H.add(P0, -(r + 1));

    // basis x^0, x^1, x^-1, ..., x^r, x^-r matches the printed pattern
    std::vector<CurveFunction> basis{CurveFunction::one(C)};
    for (long long i = 1; i <= r; ++i) {
        basis.push_back(CurveFunction::from_parts(C, {Poly::monomial(F, (size_t)i, F.one_idx())},
                                                  Poly::one(F)));
        basis.push_back(CurveFunction::from_parts(C, {Poly::one(F)},
                                                  Poly::monomial(F, (size_t)i, F.one_idx())));
    }

    Divisor gc = gcd(G, H);
    rep.check("non-speciality", is_non_special(gc), "");
    if (!rep.ok()) return rep;
    Differential omega(CurveFunction::from_parts(C, {Poly::one(F)}, detail::full_fiber_poly(F)));
    auto dd = detail::dual_vs_formula(rep, C, D, G, omega, &H);
    if (!dd) return rep;
    if (!detail::constant_residues(rep, dd->e)) return rep;

    long long dual_k = (q - r - 2) - (r + 1) + 1;
    if (dual_k < 1) {
        auto code = build_code(C, D, G, detail::ones(F, D.size()), basis);
        if (!code.params.lcd) throw std::logic_error("gated construction produced a non-LCD code");
        detail::record_collapse(code);
        rep.residues = dd->e;
        rep.code = std::move(code);
        rep.emitted = true;
        rep.check("dual-dimension", true, "dual code is zero-dimensional, primal only");
    } else {
        detail::emit_pair(rep, C, D, G, H, detail::ones(F, D.size()), dd->e, basis);
    }

    // the pattern basis must span the same space as the computed one
    auto reference = build_code(C, D, G, detail::ones(F, D.size()));
    if (!row_space_equal(rep.code->gen, reference.gen))
        throw std::logic_error("pattern basis spans a different space");
    return rep;
}

// weight witness for elliptic codes: an effective subset of D equivalent to G
// pins a codeword of the design weight, collapsing the distance bracket
inline bool elliptic_weight_witness(GeneralizedAGCode& code, uint64_t tries = 200000,
                                    uint64_t seed = 0x77177e55ull) {
    const auto& C = code.curve;
    if (C->family() != CurveFamily::EllipticAS) return false;
    long long m = code.G.degree();
    if (m < 1 || m >= (long long)code.D.size()) return false;
    auto target = class_sum(code.G);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, code.D.size() - 1);
    for (uint64_t t = 0; t < tries; ++t) {
        std::vector<size_t> idx;
        while ((long long)idx.size() < m - 1) {
            size_t c = pick(rng);
            if (std::find(idx.begin(), idx.end(), c) == idx.end()) idx.push_back(c);
        }
        Curve::EllPoint sum = std::nullopt;
        for (auto i : idx)
            sum = C->ell_add(sum, AffinePoint{code.D[i].x(), code.D[i].y()});
        auto last = C->ell_add(target, C->ell_negate(sum));
        if (!last) continue;
        Place Pl = Place::rational(last->x, last->y);
        auto it = std::find(code.D.begin(), code.D.end(), Pl);
        if (it == code.D.end()) continue;
        size_t li = (size_t)(it - code.D.begin());
        if (std::find(idx.begin(), idx.end(), li) != idx.end()) continue;
        idx.push_back(li);

        Divisor A(C);
        for (auto i : idx) A.add(code.D[i], 1);
        auto h = function_with_divisor(A - code.G);
        if (!h) continue;
        long long weight = 0;
        for (auto& P : code.D)
            if (eval_at(*h, P) != 0) ++weight;
        if (weight != code.params.n - m) throw std::logic_error("witness weight is off");
        DistanceReport r;
        r.method_used = "bracket";
        r.d_lower = code.params.design_distance;
        r.d_upper = weight;
        r.exact = r.d_lower == r.d_upper;
        record_distance(code, r);
        return true;
    }
    return false;
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& text, char sep = ';') {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline AffinePoint parse_point(const Curve& C, const std::string& text) {
    std::string body = text;
    if (!body.empty() && body.front() == '(') {
        if (body.back() != ')') throw std::invalid_argument("unbalanced point literal: " + text);
        body = body.substr(1, body.size() - 2);
    }
    auto comma = body.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("point needs x,y: " + text);
    uint32_t x = uint32_t(std::stoul(body.substr(0, comma)));
    uint32_t y = uint32_t(std::stoul(body.substr(comma + 1)));
    auto ys = C.fiber(x);
    if (std::find(ys.begin(), ys.end(), y) == ys.end())
        throw std::invalid_argument("point is not on the curve: " + text);
    return {x, y};
}

// place parameter: "x,y", "[mp#k]" picking the k-th place above mp, or
// "[mp@ypoly]" picking the branch whose y equals ypoly(x) at the fiber root
inline Place parse_place_param(const CurvePtr& C, const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty place parameter");
    if (text.front() != '[') {
        auto pt = parse_point(*C, text);
        return Place::rational(pt.x, pt.y);
    }
    if (text.back() != ']') throw std::invalid_argument("unbalanced place literal: " + text);
    std::string body = text.substr(1, text.size() - 2);
    auto at = body.find('@');
    if (at == std::string::npos) {
        Divisor D = parse_divisor(C, "[" + body + "]");
        return D.terms().begin()->first;
    }
    Poly mp = parse_poly(*C->field(), body.substr(0, at));
    Poly ypoly = parse_poly(*C->field(), body.substr(at + 1));
    auto places = places_above(*C, mp);
    for (auto& P : places) {
        if (P.kind() != Place::Kind::Extension) continue;
        const FieldSpec& K = *P.ext_field();
        const Embedding& emb = P.embedding();
        uint32_t want = 0;
        for (long long i = (long long)ypoly.degree(); i >= 0; --i)
            want = K.add_idx(K.mul_idx(want, P.ext_x()), emb.map_idx(ypoly.coeff((size_t)i)));
        if (want == P.ext_y()) return P;
    }
    throw std::invalid_argument("no branch above " + body.substr(0, at) +
                                " matches the y expression");
}

inline std::vector<Place> parse_eval_set(const CurvePtr& C, const std::string& text) {
    std::vector<Place> D;
    if (text == "all") {
        for (auto& pt : C->points()) D.push_back(Place::rational(pt.x, pt.y));
        return D;
    }
    if (text.rfind("points:", 0) == 0) {
        for (auto& item : split_list(text.substr(7))) {
            auto pt = parse_point(*C, item);
            D.push_back(Place::rational(pt.x, pt.y));
        }
        return D;
    }
    if (text.rfind("exclude:", 0) == 0) {
        std::vector<AffinePoint> skip;
        for (auto& item : split_list(text.substr(8))) skip.push_back(parse_point(*C, item));
        for (auto& pt : C->points()) {
            bool out = false;
            for (auto& s : skip) out = out || (s.x == pt.x && s.y == pt.y);
            if (!out) D.push_back(Place::rational(pt.x, pt.y));
        }
        return D;
    }
    throw std::invalid_argument("evaluation set needs all, points:..., or exclude:...");
}

// split x-coordinates in ascending order
inline std::vector<uint32_t> solvable_fibers(const Curve& C) {
    std::vector<uint32_t> out;
    for (uint32_t a = 0; a < C.field()->q(); ++a)
        if (!C.fiber(a).empty()) out.push_back(a);
    return out;
}

inline std::vector<uint32_t> parse_fibers(const CurvePtr& C, const std::string& text,
                                          std::optional<uint32_t> drop,
                                          std::optional<uint32_t> front) {
    std::vector<uint32_t> out;
    if (text == "solvable") {
        for (auto a : solvable_fibers(*C)) {
            if (drop && a == *drop) continue;
            if (front && a == *front) continue;
            out.push_back(a);
        }
    } else {
        for (auto& item : split_list(text)) {
            uint32_t a = uint32_t(std::stoul(item));
            if (drop && a == *drop) continue;
            if (front && a == *front) continue;
            out.push_back(a);
        }
    }
    if (front) out.insert(out.begin(), *front);
    return out;
}

inline std::vector<long long> parse_ints(const std::string& text) {
    std::vector<long long> out;
    for (auto& item : split_list(text)) out.push_back(std::stoll(item));
    return out;
}

inline const std::string& need(const std::map<std::string, std::string>& params,
                               const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("missing parameter: " + key);
    return it->second;
}

} // namespace detail

// string-parameter front end used by the command line tool
inline ConstructionReport run_recipe(CurvePtr C, const std::string& recipe,
                                     const std::map<std::string, std::string>& params) {
    using namespace detail;
    if (recipe == "thm3" || recipe == "thm7") {
        auto D = parse_eval_set(C, need(params, "D"));
        Divisor G = parse_divisor(C, need(params, "G"));
        std::optional<Divisor> omega;
        if (params.count("omega")) omega = parse_divisor(C, params.at("omega"));
        return recipe == "thm3" ? thm3_build(C, D, G, omega) : thm7_build(C, D, G, omega);
    }
    if (recipe == "cor1") {
        auto D = parse_eval_set(C, need(params, "D"));
        return cor1_build(C, D, std::stoll(need(params, "r")));
    }
    if (recipe == "cor2") {
        auto D = parse_eval_set(C, need(params, "D"));
        Place Q = parse_place_param(C, need(params, "Q"));
        return cor2_build(C, D, Q, std::stoll(need(params, "r")));
    }
    if (recipe == "thm4") {
        uint32_t alpha0 = uint32_t(std::stoul(need(params, "alpha0")));
        auto fibers = parse_fibers(C, need(params, "fibers"), alpha0, std::nullopt);
        return thm4_build(C, alpha0, fibers, std::stoll(need(params, "r")));
    }
    if (recipe == "thm5") {
        uint32_t alpha1 = uint32_t(std::stoul(need(params, "alpha1")));
        auto fibers = parse_fibers(C, need(params, "fibers"), std::nullopt, alpha1);
        return thm5_build(C, fibers, std::stoll(need(params, "r")));
    }
    if (recipe == "thm6") {
        uint32_t alpha0 = uint32_t(std::stoul(need(params, "alpha0")));
        auto fibers = parse_fibers(C, need(params, "fibers"), alpha0, std::nullopt);
        return thm6_build(C, alpha0, fibers, std::stoll(need(params, "r")));
    }
    if (recipe == "hyper-rp") {
        Place P = parse_place_param(C, need(params, "P"));
        return hyper_build_rp(C, P, std::stoll(need(params, "r")));
    }
    if (recipe == "hyper-reduced") {
        std::vector<uint32_t> alphas;
        for (auto v : parse_ints(need(params, "alphas"))) alphas.push_back(uint32_t(v));
        return hyper_build_reduced(C, alphas, parse_ints(need(params, "ns")),
                                   parse_ints(need(params, "rs")));
    }
    if (recipe == "hermitian") {
        Place P = parse_place_param(C, need(params, "P"));
        return hermitian_build(C, P, std::stoll(need(params, "r")));
    }
    if (recipe == "projline") return projline_build(C, std::stoll(need(params, "r")));
    throw std::invalid_argument("unknown recipe: " + recipe);
}

inline nlohmann::json to_json(const HypothesisCheck& h) {
    return {{"clause", h.clause}, {"passed", h.passed}, {"detail", h.detail}};
}

inline nlohmann::json to_json(const ConstructionReport& rep) {
    nlohmann::json hyp = nlohmann::json::array();
    for (auto& h : rep.hypotheses) hyp.push_back(to_json(h));
    nlohmann::json j{{"recipe", rep.recipe},
                     {"inputs", rep.inputs},
                     {"hypotheses", hyp},
                     {"emitted", rep.emitted},
                     {"failure", rep.failure}};
    nlohmann::json res = nlohmann::json::array();
    for (auto v : rep.residues) res.push_back(v);
    j["residues"] = res;
    j["code"] = rep.code ? to_json(*rep.code) : nlohmann::json(nullptr);
    j["dual"] = rep.dual ? to_json(*rep.dual) : nlohmann::json(nullptr);
    return j;
}

} // namespace lcdagc
