#include <catch_amalgamated.hpp>

#include <lcdagc/curve.hpp>

#include <random>

using namespace lcdagc;

namespace {

FieldSpecPtr gf4() { return parse_field_spec("2^2:x^2+x+1"); }
FieldSpecPtr gf9() { return parse_field_spec("3^2:x^2+2x+2"); }
FieldSpecPtr gf16() { return parse_field_spec("2^4:x^4+x+1"); }
FieldSpecPtr gf64() { return parse_field_spec("2^6:x^6+x+1"); }

// truncated product of coefficient series over a field
std::vector<uint32_t> series_mul(const FieldSpec& K, const std::vector<uint32_t>& a,
                                 const std::vector<uint32_t>& b, size_t n) {
    std::vector<uint32_t> c(n + 1, 0);
    for (size_t i = 0; i < a.size() && i <= n; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && i + j <= n; ++j)
            c[i + j] = K.add_idx(c[i + j], K.mul_idx(a[i], b[j]));
    }
    return c;
}

} // namespace

TEST_CASE("small elliptic curve point census", "[curve]") {
    auto C = Curve::elliptic(gf4(), 0, 0);   // y^2 + y = x^3
    REQUIRE(C->genus() == 1);
    REQUIRE(C->weight_x() == 2);
    REQUIRE(C->weight_y() == 3);
    REQUIRE(C->dx_order_at_infinity() == 0);
    REQUIRE(C->theta() == std::vector<uint32_t>({0, 1}));

    REQUIRE(C->fiber(0) == std::vector<uint32_t>({0, 1}));
    REQUIRE(C->fiber(1) == std::vector<uint32_t>({2, 3}));   // y^2 + y = 1
    REQUIRE(C->points().size() == 8);
    REQUIRE(C->point_count() == 9);
}

TEST_CASE("elliptic curve over GF(16) used by the main constructions", "[curve]") {
    auto C = Curve::elliptic(gf16(), 0, 8);   // c = rho^3
    REQUIRE(C->point_count() == 25);
    int solvable = 0;
    for (uint32_t a = 0; a < 16; ++a)
        if (!C->fiber(a).empty()) ++solvable;
    REQUIRE(solvable == 12);
    REQUIRE(!C->fiber(2).empty());   // the fiber above rho splits
    REQUIRE(C->spec_string() == "elliptic:b=0,c=8");
}

TEST_CASE("group law verified exhaustively on a small curve", "[curve]") {
    auto C = Curve::elliptic(gf4(), 0, 0);
    std::vector<Curve::EllPoint> all;
    all.push_back(std::nullopt);
    for (auto& pt : C->points()) all.push_back(pt);
    REQUIRE(all.size() == 9);

    auto on_curve = [&](const Curve::EllPoint& P) {
        if (!P) return true;
        for (auto& q : C->points())
            if (q == *P) return true;
        return false;
    };

    for (auto& P : all) {
        REQUIRE(C->ell_add(P, std::nullopt) == P);
        REQUIRE(!C->ell_add(P, C->ell_negate(P)).has_value());
        for (auto& Q : all) {
            auto S = C->ell_add(P, Q);
            REQUIRE(on_curve(S));
            REQUIRE(S == C->ell_add(Q, P));
            for (auto& R : all)
                REQUIRE(C->ell_add(C->ell_add(P, Q), R) == C->ell_add(P, C->ell_add(Q, R)));
        }
        REQUIRE(!C->ell_mul(9, P).has_value());   // Lagrange: order divides 9
    }
}

TEST_CASE("point orders and torsion membership", "[curve]") {
    auto C = Curve::elliptic(gf16(), 0, 8);
    long long N = C->point_count();
    REQUIRE(N == 25);
    for (auto& pt : C->points()) {
        long long ord = C->ell_order(pt);
        REQUIRE(N % ord == 0);
        REQUIRE((ord == 1 || ord == 5 || ord == 25));
        REQUIRE(C->ell_in_torsion(pt, N));
        REQUIRE(C->ell_in_torsion(pt, ord));
        if (ord == 25) REQUIRE(!C->ell_in_torsion(pt, 5));
    }
    REQUIRE(C->ell_order(std::nullopt) == 1);
}

TEST_CASE("hyperelliptic curves are maximal", "[curve]") {
    auto C4 = Curve::hyperelliptic(gf16(), 4);   // y^2 + y = x^5
    REQUIRE(C4->genus() == 2);
    REQUIRE(C4->weight_y() == 5);
    REQUIRE(C4->dx_order_at_infinity() == 2);
    REQUIRE(C4->point_count() == 33);
    for (uint32_t a = 0; a < 16; ++a)
        REQUIRE(C4->fiber(a).size() == 2);

    auto C8 = Curve::hyperelliptic(gf64(), 8);   // y^2 + y = x^9
    REQUIRE(C8->genus() == 4);
    REQUIRE(C8->point_count() == 129);
    REQUIRE(C8->sub_q() == 8);
}

TEST_CASE("hermitian curve over GF(9)", "[curve]") {
    auto C = Curve::hermitian(gf9(), 3);   // y^3 + y = x^4
    REQUIRE(C->genus() == 3);
    REQUIRE(C->fiber_degree() == 3);
    REQUIRE(C->point_count() == 28);
    REQUIRE(C->theta() == std::vector<uint32_t>({0, 4, 8}));
    for (uint32_t a = 0; a < 9; ++a)
        REQUIRE(C->fiber(a).size() == 3);
    REQUIRE(C->dx_order_at_infinity() == 4);   // 2g - 2
}

TEST_CASE("hermitian curve over GF(16)", "[curve]") {
    auto C = Curve::hermitian(gf16(), 4);   // y^4 + y = x^5
    REQUIRE(C->genus() == 6);
    REQUIRE(C->point_count() == 65);
    REQUIRE(C->theta().size() == 4);
}

TEST_CASE("projective line", "[curve]") {
    auto C = Curve::projective_line(gf16());
    REQUIRE(C->genus() == 0);
    REQUIRE(C->point_count() == 17);
    REQUIRE(C->fiber(5) == std::vector<uint32_t>({0}));
    REQUIRE(C->dx_order_at_infinity() == -2);
}

TEST_CASE("curve model validation", "[curve]") {
    REQUIRE_THROWS_AS(Curve::elliptic(gf9(), 0, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(Curve::hyperelliptic(gf16(), 3), std::invalid_argument);
    REQUIRE_THROWS_AS(Curve::hermitian(parse_field_spec("2^3:x^3+x+1"), 2), std::invalid_argument);
    REQUIRE_THROWS_AS(Curve::projective_line(gf4())->ell_add(std::nullopt, std::nullopt),
                      std::logic_error);
}

TEST_CASE("curve spec parsing", "[curve]") {
    REQUIRE(parse_curve(gf16(), "elliptic:b=0,c=8")->spec_string() == "elliptic:b=0,c=8");
    REQUIRE(parse_curve(gf16(), "hyperell:q=4")->spec_string() == "hyperell:q=4");
    REQUIRE(parse_curve(gf9(), "hermitian:q=3")->spec_string() == "hermitian:q=3");
    REQUIRE(parse_curve(gf4(), "projline")->family() == CurveFamily::ProjectiveLine);
    REQUIRE_THROWS_AS(parse_curve(gf4(), "weierstrass:a=1"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_curve(gf4(), "hyperell"), std::invalid_argument);
}

TEST_CASE("places above closed points", "[curve]") {
    auto F = gf16();
    auto C = Curve::elliptic(F, 0, 8);

    // split rational fiber: two rational places
    auto split = places_above(*C, Poly(F.get(), {F->neg_idx(2), 1}));
    REQUIRE(split.size() == 2);
    for (auto& P : split) {
        REQUIRE(P.kind() == Place::Kind::Rational);
        REQUIRE(P.x() == 2);
        REQUIRE(P.degree() == 1);
    }
    REQUIRE(split[0] < split[1]);

    // inert rational fiber: one place of degree 2
    uint32_t inert_x = 0xffffffffu;
    for (uint32_t a = 0; a < 16; ++a)
        if (C->fiber(a).empty()) { inert_x = a; break; }
    REQUIRE(inert_x != 0xffffffffu);
    auto inert = places_above(*C, Poly(F.get(), {F->neg_idx(inert_x), 1}));
    REQUIRE(inert.size() == 1);
    REQUIRE(inert[0].kind() == Place::Kind::Extension);
    REQUIRE(inert[0].degree() == 2);
    {
        const FieldSpec& K = *inert[0].ext_field();
        const Embedding& e = inert[0].embedding();
        uint32_t xi = inert[0].ext_x(), eta = inert[0].ext_y();
        REQUIRE(C->rhs().embedded(e).eval_idx(xi) ==
                K.add_idx(K.pow_idx(eta, 2), eta));
    }

    // the degrees of the places above a closed point add up to
    // deg(minpoly) * fiber_degree on every fiber
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint32_t> c(1 + rng() % 2, 0);
        c.push_back(1);
        for (size_t i = 0; i + 1 < c.size(); ++i) c[i] = uint32_t(rng() % 16);
        Poly mp(F.get(), std::move(c));
        if (!is_irreducible(mp)) continue;
        auto pls = places_above(*C, mp);
        int total = 0;
        for (auto& P : pls) total += P.degree();
        REQUIRE(total == mp.degree() * C->fiber_degree());
    }
}

TEST_CASE("places above closed points of the hermitian curve", "[curve]") {
    auto F = gf9();
    auto C = Curve::hermitian(F, 3);
    // every rational fiber splits fully
    auto pls = places_above(*C, Poly(F.get(), {F->neg_idx(5), 1}));
    REQUIRE(pls.size() == 3);
    for (auto& P : pls) REQUIRE(P.degree() == 1);

    // x^2 + 1 = (x - i)(x + i) splits in GF(9), so it is rejected as a minpoly
    REQUIRE_THROWS_AS(places_above(*C, Poly::from_int_coeffs(*F, {1, 0, 1})),
                      std::invalid_argument);

    // an irreducible quadratic: sum of place degrees is 2 * 3
    Poly mp = Poly::from_int_coeffs(*F, {2, 1, 1});
    bool irr = is_irreducible(mp);
    if (irr) {
        int total = 0;
        for (auto& P : places_above(*C, mp)) total += P.degree();
        REQUIRE(total == 6);
    }
}

TEST_CASE("place ordering", "[curve]") {
    auto O = Place::infinity();
    auto A = Place::rational(1, 2);
    auto B = Place::rational(1, 3);
    REQUIRE(O < A);
    REQUIRE(A < B);
    REQUIRE(!(A < A));
    REQUIRE(A == Place::rational(1, 2));
    REQUIRE(A != B);
    REQUIRE(O == Place::infinity());
}

TEST_CASE("branch expansion satisfies the fiber equation", "[curve]") {
    const int n = 12;
    std::mt19937_64 rng(71);
    for (auto C : {Curve::elliptic(gf16(), 0, 8), Curve::hyperelliptic(gf16(), 4),
                   Curve::hermitian(gf9(), 3)}) {
        const FieldSpec& K = *C->field();
        auto& pts = C->points();
        for (int t = 0; t < 25; ++t) {
            auto& P = pts[rng() % pts.size()];
            auto c = y_series(*C, K, nullptr, P.x, P.y, n);
            REQUIRE(c[0] == P.y);
            // y^s + y - f(x) must vanish to order n
            std::vector<uint32_t> pw = {K.one_idx()};
            for (int i = 0; i < C->fiber_degree(); ++i) pw = series_mul(K, pw, c, n);
            Poly shifted = C->rhs().shift(P.x);
            for (int k = 0; k <= n; ++k) {
                uint32_t lhs = K.add_idx(pw[size_t(k)], c[size_t(k)]);
                REQUIRE(lhs == shifted.coeff(size_t(k)));
            }
        }
    }
    REQUIRE_THROWS_AS(y_series(*Curve::elliptic(gf16(), 0, 8), *gf16(), nullptr, 0, 5, 4),
                      std::invalid_argument);
}
