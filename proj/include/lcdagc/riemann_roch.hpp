#pragma once

// Bases of the spaces L(G) = { h : (h) + G >= 0 }. Candidates are written
// as g(x,y)/d(x) where d collects the positive affine part of G; the pole
// cap at O bounds the weighted degree of g, and vanishing conditions at
// constrained places cut out the basis as a kernel over the base field.

#include <lcdagc/curve.hpp>
#include <lcdagc/function_field.hpp>
#include <lcdagc/gf.hpp>
#include <lcdagc/linalg.hpp>
#include <lcdagc/poly.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lcdagc {

namespace detail {

// invert a square matrix over GF(p)
inline std::vector<std::vector<int>> pmat_inverse(std::vector<std::vector<int>> a, int p) {
    size_t n = a.size();
    std::vector<std::vector<int>> inv(n, std::vector<int>(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    auto inv_mod = [p](int x) {
        for (int t = 1; t < p; ++t)
            if (t * x % p == 1) return t;
        throw std::logic_error("noninvertible pivot mod p");
    };
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        while (sel < n && a[sel][col] == 0) ++sel;
        if (sel == n) throw std::logic_error("singular coordinate matrix");
        std::swap(a[sel], a[col]);
        std::swap(inv[sel], inv[col]);
        int f = inv_mod(a[col][col]);
        for (size_t j = 0; j < n; ++j) {
            a[col][j] = a[col][j] * f % p;
            inv[col][j] = inv[col][j] * f % p;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col] == 0) continue;
            int g = a[i][col];
            for (size_t j = 0; j < n; ++j) {
                a[i][j] = ((a[i][j] - g * a[col][j]) % p + p) % p;
                inv[i][j] = ((inv[i][j] - g * inv[col][j]) % p + p) % p;
            }
        }
    }
    return inv;
}

// base-field coordinates in the residue field of an extension place, with
// respect to the product basis xi^a eta^b
struct ResidueCoords {
    const FieldSpec* F = nullptr;
    const FieldSpec* K = nullptr;
    int n = 0;
    std::vector<std::vector<int>> inv;

    ResidueCoords(const FieldSpec& base, const Place& P) : F(&base), K(P.ext_field().get()) {
        n = P.degree();
        int m = F->m(), dm = P.minpoly().degree();
        int reps = n / dm;
        const Embedding& e = P.embedding();
        std::vector<uint32_t> basis;
        uint32_t etapw = K->one_idx();
        for (int b = 0; b < reps; ++b) {
            uint32_t xipw = K->one_idx();
            for (int a = 0; a < dm; ++a) {
                basis.push_back(K->mul_idx(etapw, xipw));
                xipw = K->mul_idx(xipw, P.ext_x());
            }
            etapw = K->mul_idx(etapw, P.ext_y());
        }
        size_t dim = size_t(m) * size_t(n);
        std::vector<std::vector<int>> T(dim, std::vector<int>(dim, 0));
        for (int t = 0; t < n; ++t) {
            uint32_t fb = 1;   // base-field basis element x^i has index p^i
            for (int i = 0; i < m; ++i) {
                uint32_t val = K->mul_idx(e.map_idx(fb), basis[size_t(t)]);
                auto cf = K->coeffs_of(val);
                for (size_t r = 0; r < dim; ++r) T[r][size_t(t * m + i)] = cf[r];
                fb *= uint32_t(F->p());
            }
        }
        inv = pmat_inverse(std::move(T), F->p());
    }

    std::vector<uint32_t> coords(uint32_t kappa) const {
        int m = F->m(), p = F->p();
        auto cf = K->coeffs_of(kappa);
        size_t dim = size_t(m) * size_t(n);
        std::vector<int> w(dim, 0);
        for (size_t i = 0; i < dim; ++i) {
            long long acc = 0;
            for (size_t j = 0; j < dim; ++j) acc += (long long)inv[i][j] * cf[j];
            w[i] = int(acc % p);
        }
        std::vector<uint32_t> out(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t) {
            std::vector<int> part(w.begin() + t * m, w.begin() + (t + 1) * m);
            out[size_t(t)] = F->idx_from_coeffs(part);
        }
        return out;
    }
};

} // namespace detail

inline std::vector<CurveFunction> rr_basis(const Divisor& G) {
    CurvePtr C = G.curve();
    if (!C) throw std::invalid_argument("divisor without a curve");
    const FieldSpec& F = *C->field();
    long long mO = G.coeff(Place::infinity());

    // group the affine support by the minimal polynomial of x
    struct Group {
        Poly mp;
        long long dmult = 0;   // multiplicity of mp in the denominator
        std::vector<std::pair<Place, long long>> named;
    };
    std::vector<Group> groups;
    auto group_of = [&](const Poly& mp) -> Group& {
        for (auto& g : groups)
            if (g.mp == mp) return g;
        groups.push_back(Group{mp, 0, {}});
        return groups.back();
    };
    for (auto& [P, nP] : G.terms()) {
        if (P.is_infinity()) continue;
        Poly mp = P.kind() == Place::Kind::Rational
                      ? Poly(&F, {F.neg_idx(P.x()), 1})
                      : P.minpoly();
        group_of(mp).named.push_back({P, nP});
    }

    Poly d = Poly::one(F);
    for (auto& g : groups) {
        long long M = 0;
        for (auto& [P, nP] : g.named) M = std::max(M, nP);
        g.dmult = M;
        for (long long i = 0; i < M; ++i) d = d * g.mp;
    }

    long long s = mO + (long long)C->weight_x() * d.degree();
    if (s < 0) return {};

    // monomials x^i y^j with j below the fiber degree, ordered by their
    // pole order at O; the weights are injective on this range
    std::vector<std::pair<int, int>> mono;
    for (int j = 0; j < C->fiber_degree(); ++j) {
        long long base = (long long)C->weight_y() * j;
        if (base > s) continue;
        for (int i = 0; (long long)C->weight_x() * i + base <= s; ++i)
            mono.push_back({i, j});
    }
    std::sort(mono.begin(), mono.end(), [&](auto& a, auto& b) {
        return (long long)C->weight_x() * a.first + (long long)C->weight_y() * a.second <
               (long long)C->weight_x() * b.first + (long long)C->weight_y() * b.second;
    });

    // vanishing conditions: at every place above a denominator factor the
    // candidate numerator must vanish to order dmult - coeff_G, and a
    // negatively weighted place constrains itself
    std::vector<std::vector<uint32_t>> rows;
    for (auto& g : groups) {
        auto pls = places_above(*C, g.mp);
        for (auto& P : pls) {
            long long k = g.dmult - G.coeff(P);
            if (k <= 0) continue;
            int trunc = int(k) - 1;
            const FieldSpec& K = P.kind() == Place::Kind::Rational ? F : *P.ext_field();
            const Embedding* emb = P.kind() == Place::Kind::Rational ? nullptr : &P.embedding();
            uint32_t alpha = P.kind() == Place::Kind::Rational ? P.x() : P.ext_x();
            uint32_t beta = P.kind() == Place::Kind::Rational ? P.y() : P.ext_y();

            auto ys = y_series(*C, K, emb, alpha, beta, trunc);
            // series of each monomial at the place, truncated to order k
            std::vector<std::vector<uint32_t>> xpow, ypow;
            std::vector<uint32_t> xser(size_t(trunc) + 1, 0), one(size_t(trunc) + 1, 0);
            one[0] = K.one_idx();
            xser[0] = alpha;
            if (trunc >= 1) xser[1] = K.one_idx();
            int max_i = 0, max_j = 0;
            for (auto& [i, j] : mono) { max_i = std::max(max_i, i); max_j = std::max(max_j, j); }
            xpow.push_back(one);
            for (int i = 1; i <= max_i; ++i)
                xpow.push_back(detail::series_mul(K, xpow.back(), xser, size_t(trunc)));
            ypow.push_back(one);
            for (int j = 1; j <= max_j; ++j)
                ypow.push_back(detail::series_mul(K, ypow.back(), ys, size_t(trunc)));

            std::optional<detail::ResidueCoords> rc;
            if (P.kind() == Place::Kind::Extension) rc.emplace(F, P);

            for (int l = 0; l <= trunc; ++l) {
                if (P.kind() == Place::Kind::Rational) {
                    std::vector<uint32_t> row(mono.size());
                    for (size_t mcol = 0; mcol < mono.size(); ++mcol) {
                        auto [i, j] = mono[mcol];
                        uint32_t acc = 0;
                        for (int u = 0; u <= l; ++u)
                            acc = K.add_idx(acc, K.mul_idx(xpow[size_t(i)][size_t(u)],
                                                           ypow[size_t(j)][size_t(l - u)]));
                        row[mcol] = acc;
                    }
                    rows.push_back(std::move(row));
                } else {
                    std::vector<std::vector<uint32_t>> block(size_t(P.degree()),
                                                             std::vector<uint32_t>(mono.size()));
                    for (size_t mcol = 0; mcol < mono.size(); ++mcol) {
                        auto [i, j] = mono[mcol];
                        uint32_t acc = 0;
                        for (int u = 0; u <= l; ++u)
                            acc = K.add_idx(acc, K.mul_idx(xpow[size_t(i)][size_t(u)],
                                                           ypow[size_t(j)][size_t(l - u)]));
                        auto co = rc->coords(acc);
                        for (int t = 0; t < P.degree(); ++t) block[size_t(t)][mcol] = co[size_t(t)];
                    }
                    for (auto& r : block) rows.push_back(std::move(r));
                }
            }
        }
    }

    Matrix constraints(&F, rows.size(), mono.size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < mono.size(); ++c)
            constraints.set(r, c, rows[r][c]);
    Matrix ker = rows.empty() ? Matrix::identity(F, mono.size()) : kernel_basis(constraints);

    std::vector<CurveFunction> basis;
    for (size_t r = 0; r < ker.rows(); ++r) {
        std::vector<Poly> num(size_t(C->fiber_degree()), Poly::zero(F));
        for (size_t c = 0; c < mono.size(); ++c) {
            uint32_t v = ker.get(r, c);
            if (v == 0) continue;
            auto [i, j] = mono[c];
            num[size_t(j)] = num[size_t(j)] + Poly::monomial(F, size_t(i), v);
        }
        basis.push_back(CurveFunction::from_parts(C, std::move(num), d));
    }
    return basis;
}

inline long long rr_dim(const Divisor& G) { return (long long)rr_basis(G).size(); }

// l(G) - (deg G + 1 - g), the number of missing sections
inline long long speciality_index(const Divisor& G) {
    return rr_dim(G) - (G.degree() + 1 - G.curve()->genus());
}

inline bool is_non_special(const Divisor& G) { return speciality_index(G) == 0; }

// the unique monic-normalized function with divisor D, when D is principal
inline std::optional<CurveFunction> function_with_divisor(const Divisor& D) {
    if (D.degree() != 0) return std::nullopt;
    auto basis = rr_basis(-D);
    if (basis.empty()) return std::nullopt;
    if (basis.size() > 1)
        throw std::logic_error("degree-zero divisor with more than one section");
    CurveFunction h = basis[0];
    const Curve& C = *h.curve();
    const FieldSpec& F = *C.field();
    long long best = -1;
    uint32_t lead = 0;
    for (size_t j = 0; j < h.components(); ++j) {
        if (h.num(j).is_zero()) continue;
        long long w = (long long)C.weight_x() * h.num(j).degree() +
                      (long long)C.weight_y() * (long long)j;
        if (w > best) {
            best = w;
            lead = h.num(j).lead();
        }
    }
    h = h * CurveFunction::constant(D.curve(), F.inv_idx(lead));
    if (divisor_of(h) != D)
        throw std::logic_error("candidate section has the wrong divisor");
    return h;
}

} // namespace lcdagc
