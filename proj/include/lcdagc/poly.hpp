// Dense univariate polynomials over a FieldSpec.
//
// Coefficients are canonical indices, ascending by exponent, trimmed.
// Factorization is sized for this library's needs: base fields are small,
// so linear factors come from root scans and the nonlinear residue goes
// through squarefree reduction, distinct-degree splitting and Frobenius
// orbits of roots materialized in one canonical extension field.
#pragma once

#include "gf.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lcdagc {

class Poly {
public:
    Poly() : f_(nullptr) {}
    explicit Poly(const FieldSpec* f) : f_(f) {}
    Poly(const FieldSpec* f, std::vector<uint32_t> coeffs) : f_(f), c_(std::move(coeffs)) { trim(); }

    static Poly zero(const FieldSpec& f) { return Poly(&f); }
    static Poly one(const FieldSpec& f) { return Poly(&f, {1}); }
    static Poly constant(const FieldElement& a) { return Poly(a.spec_ptr(), {a.idx()}); }
    static Poly x(const FieldSpec& f) { return Poly(&f, {0, 1}); }
    // x^n with a scalar coefficient
    static Poly monomial(const FieldSpec& f, size_t n, uint32_t coeff) {
        std::vector<uint32_t> c(n + 1, 0);
        c[n] = coeff;
        return Poly(&f, std::move(c));
    }
    static Poly from_int_coeffs(const FieldSpec& f, const std::vector<int>& ints) {
        std::vector<uint32_t> c(ints.size());
        for (size_t i = 0; i < ints.size(); ++i) {
            int v = ints[i] % f.p();
            if (v < 0) v += f.p();
            c[i] = uint32_t(v);
        }
        return Poly(&f, std::move(c));
    }

    const FieldSpec& field() const {
        if (!f_) throw std::logic_error("polynomial without field");
        return *f_;
    }
    const FieldSpec* field_ptr() const { return f_; }

    bool is_zero() const { return c_.empty(); }
    long long degree() const { return (long long)c_.size() - 1; }
    uint32_t coeff(size_t i) const { return i < c_.size() ? c_[i] : 0; }
    uint32_t lead() const { return c_.empty() ? 0 : c_.back(); }
    const std::vector<uint32_t>& coeffs() const { return c_; }
    bool is_monic() const { return lead() == 1; }

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return c_ != o.c_; }

    Poly operator+(const Poly& o) const {
        const FieldSpec& f = field();
        std::vector<uint32_t> r(std::max(c_.size(), o.c_.size()), 0);
        for (size_t i = 0; i < r.size(); ++i)
            r[i] = f.add_idx(coeff(i), o.coeff(i));
        return Poly(f_, std::move(r));
    }
    Poly operator-(const Poly& o) const {
        const FieldSpec& f = field();
        std::vector<uint32_t> r(std::max(c_.size(), o.c_.size()), 0);
        for (size_t i = 0; i < r.size(); ++i)
            r[i] = f.sub_idx(coeff(i), o.coeff(i));
        return Poly(f_, std::move(r));
    }
    Poly operator*(const Poly& o) const {
        const FieldSpec& f = field();
        if (is_zero() || o.is_zero()) return Poly(f_);
        std::vector<uint32_t> r(c_.size() + o.c_.size() - 1, 0);
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) {
                if (o.c_[j] == 0) continue;
                r[i + j] = f.add_idx(r[i + j], f.mul_idx(c_[i], o.c_[j]));
            }
        }
        return Poly(f_, std::move(r));
    }
    Poly scaled(uint32_t s) const {
        const FieldSpec& f = field();
        std::vector<uint32_t> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) r[i] = f.mul_idx(c_[i], s);
        return Poly(f_, std::move(r));
    }
    Poly operator-() const { return scaled(field().neg_idx(1)); }

    // quotient and remainder by a nonzero divisor
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        const FieldSpec& f = field();
        if (d.is_zero()) throw std::domain_error("division by zero polynomial");
        Poly r = *this;
        if (r.degree() < d.degree()) return {Poly(f_), r};
        std::vector<uint32_t> q(size_t(r.degree() - d.degree()) + 1, 0);
        uint32_t dlead_inv = f.inv_idx(d.lead());
        while (!r.is_zero() && r.degree() >= d.degree()) {
            size_t shift = size_t(r.degree() - d.degree());
            uint32_t s = f.mul_idx(r.lead(), dlead_inv);
            q[shift] = s;
            for (size_t i = 0; i < d.c_.size(); ++i)
                r.c_[shift + i] = f.sub_idx(r.c_[shift + i], f.mul_idx(s, d.c_[i]));
            r.trim();
        }
        return {Poly(f_, std::move(q)), r};
    }
    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    Poly monic_scaled() const {
        if (is_zero()) return *this;
        return scaled(field().inv_idx(lead()));
    }

    uint32_t eval_idx(uint32_t a) const {
        const FieldSpec& f = field();
        uint32_t acc = 0;
        for (size_t i = c_.size(); i-- > 0;)
            acc = f.add_idx(f.mul_idx(acc, a), c_[i]);
        return acc;
    }
    FieldElement eval(const FieldElement& a) const {
        return FieldElement(f_, eval_idx(a.idx()));
    }

    // Taylor shift f(x + alpha) through repeated synthetic division
    Poly shift(uint32_t alpha) const {
        const FieldSpec& f = field();
        if (is_zero() || alpha == 0) return *this;
        std::vector<uint32_t> work = c_;
        std::vector<uint32_t> out(c_.size(), 0);
        for (size_t k = 0; k < c_.size(); ++k) {
            // divide work by (x - alpha); remainder is the k-th Taylor coefficient
            uint32_t carry = 0;
            for (size_t i = work.size(); i-- > 0;) {
                uint32_t v = f.add_idx(work[i], f.mul_idx(carry, alpha));
                work[i] = carry;
                carry = v;
            }
            out[k] = carry;
            if (!work.empty()) work.pop_back();
            else break;
        }
        return Poly(f_, std::move(out));
    }

    Poly derivative() const {
        const FieldSpec& f = field();
        if (c_.size() <= 1) return Poly(f_);
        std::vector<uint32_t> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) {
            uint32_t s = uint32_t(i % f.p());
            r[i - 1] = f.mul_idx(c_[i], s);
        }
        return Poly(f_, std::move(r));
    }

    Poly embedded(const Embedding& e) const {
        if (!field().same_structure(e.from()))
            throw std::invalid_argument("polynomial not over the embedding source");
        std::vector<uint32_t> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) r[i] = e.map_idx(c_[i]);
        return Poly(&e.to(), std::move(r));
    }

    // coefficients print as canonical element encodings
    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            if (!first) os << "+";
            first = false;
            if (i == 0) { os << c_[i]; continue; }
            if (c_[i] != 1) os << c_[i];
            os << var;
            if (i > 1) os << '^' << i;
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    const FieldSpec* f_;
    std::vector<uint32_t> c_;
};

// inverse of Poly::str: coefficient literals are canonical encodings in
// 0..q-1, and a leading minus negates in the field
inline Poly parse_poly(const FieldSpec& F, const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace((unsigned char)ch)) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty polynomial");
    std::vector<uint32_t> coeffs;
    auto bump = [&](size_t deg, uint32_t c, int sign) {
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
        uint32_t v = sign < 0 ? F.neg_idx(c) : c;
        coeffs[deg] = F.add_idx(coeffs[deg], v);
    };
    size_t i = 0;
    int sign = 1;
    while (i < s.size()) {
        if (s[i] == '+') { sign = 1; ++i; continue; }
        if (s[i] == '-') { sign = -1; ++i; continue; }
        uint64_t coef = 1;
        bool saw_num = false;
        if (std::isdigit((unsigned char)s[i])) {
            coef = 0;
            while (i < s.size() && std::isdigit((unsigned char)s[i]))
                coef = coef * 10 + uint64_t(s[i++] - '0');
            saw_num = true;
        }
        if (coef >= F.q()) throw std::invalid_argument("coefficient outside field: " + text);
        if (i < s.size() && s[i] == '*') ++i;
        size_t deg = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                if (i >= s.size() || !std::isdigit((unsigned char)s[i]))
                    throw std::invalid_argument("malformed exponent: " + text);
                size_t e = 0;
                while (i < s.size() && std::isdigit((unsigned char)s[i]))
                    e = e * 10 + size_t(s[i++] - '0');
                deg = e;
            }
        } else if (!saw_num) {
            throw std::invalid_argument("malformed term: " + text);
        }
        bump(deg, uint32_t(coef), sign);
        sign = 1;
    }
    return Poly(&F, std::move(coeffs));
}

inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic_scaled();
}

inline Poly poly_pow_mod(const Poly& base, long long e, const Poly& mod) {
    Poly r = Poly::one(base.field());
    Poly b = base % mod;
    while (e > 0) {
        if (e & 1) r = (r * b) % mod;
        b = (b * b) % mod;
        e >>= 1;
    }
    return r;
}

// all roots in the coefficient field, with multiplicities, ascending index
inline std::vector<std::pair<uint32_t, int>> roots_in_field(const Poly& f) {
    std::vector<std::pair<uint32_t, int>> out;
    if (f.is_zero()) throw std::domain_error("roots of the zero polynomial");
    Poly g = f;
    const FieldSpec& F = f.field();
    for (uint64_t a = 0; a < F.q(); ++a) {
        if (g.degree() < 1) break;
        if (g.eval_idx(uint32_t(a)) != 0) continue;
        Poly lin(&F, {F.neg_idx(uint32_t(a)), 1});
        int mult = 0;
        while (true) {
            auto [q, r] = g.divmod(lin);
            if (!r.is_zero()) break;
            g = q;
            ++mult;
        }
        out.emplace_back(uint32_t(a), mult);
    }
    return out;
}

// trial-division irreducibility; meant for minimal polynomials of small degree
inline bool is_irreducible(const Poly& f) {
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    const FieldSpec& F = f.field();
    long long deg = f.degree();
    // roots catch all degree-1 divisors
    for (uint64_t a = 0; a < F.q(); ++a)
        if (f.eval_idx(uint32_t(a)) == 0) return false;
    for (long long d = 2; 2 * d <= deg; ++d) {
        uint64_t count = 1;
        for (long long i = 0; i < d; ++i) {
            count *= F.q();
            if (count > (uint64_t(1) << 24))
                throw std::domain_error("irreducibility check degree too large");
        }
        for (uint64_t code = 0; code < count; ++code) {
            std::vector<uint32_t> g(size_t(d) + 1, 0);
            uint64_t c = code;
            for (long long i = 0; i < d; ++i) { g[size_t(i)] = uint32_t(c % F.q()); c /= F.q(); }
            g[size_t(d)] = 1;
            if ((f % Poly(f.field_ptr(), std::move(g))).is_zero()) return false;
        }
    }
    return true;
}

namespace detail {

// p-th root coefficient map for f with f' = 0, i.e. f(x) = g(x^p)
inline Poly pth_root_decompose(const Poly& f) {
    const FieldSpec& F = f.field();
    int p = F.p();
    std::vector<uint32_t> g;
    for (long long i = 0; i <= f.degree(); i += p) {
        uint32_t c = f.coeff(size_t(i));
        // p-th root inside GF(p^m) is Frobenius applied m-1 times
        for (int k = 0; k < F.m() - 1; ++k) c = F.pow_idx(c, p);
        g.push_back(c);
    }
    return Poly(f.field_ptr(), std::move(g));
}

// product of the distinct monic irreducible factors, each to the first power
inline Poly squarefree_part(Poly f) {
    f = f.monic_scaled();
    if (f.degree() < 1) return Poly::one(f.field());
    Poly d = f.derivative();
    if (d.is_zero()) return squarefree_part(pth_root_decompose(f));
    Poly g = gcd(f, d);
    if (g.degree() < 1) return f;
    Poly s = f / g;   // factors whose exponent is not divisible by p, once each
    // strip every power of those factors, leaving the p-th power part
    Poly h = f;
    while (true) {
        Poly c = gcd(h, s);
        if (c.degree() < 1) break;
        h = h / c;
    }
    return (s * squarefree_part(h)).monic_scaled();
}

} // namespace detail

// Monic irreducible factors with multiplicities, deterministic order:
// ascending degree, then ascending coefficient encoding. Nonlinear blocks
// are split through Frobenius orbits of roots materialized in GF(q^d);
// a block whose splitting field passes FieldSpec::kMaxOrder raises.
inline std::vector<std::pair<Poly, int>> factor(const Poly& input) {
    if (input.is_zero()) throw std::domain_error("factor of zero polynomial");
    const FieldSpec& F = input.field();
    Poly f = input.monic_scaled();
    std::vector<Poly> found;

    for (auto& [root, mult] : roots_in_field(f)) {
        (void)mult;
        found.push_back(Poly(input.field_ptr(), {F.neg_idx(root), 1}));
    }

    Poly sf = detail::squarefree_part(f);
    for (const Poly& lin : found)
        if (sf.degree() >= 1 && (sf % lin).is_zero()) sf = sf / lin;

    if (sf.degree() >= 1) {
        // distinct-degree blocks of the nonlinear squarefree residue
        std::vector<std::pair<long long, Poly>> blocks;
        Poly xpoly = Poly::x(F);
        Poly phi = poly_pow_mod(xpoly, (long long)F.q(), sf);   // x^(q^d) mod sf
        Poly rest = sf;
        for (long long d = 1; rest.degree() >= 1; ++d) {
            if (2 * d > rest.degree()) {
                blocks.emplace_back(rest.degree(), rest);
                break;
            }
            if (d > 1) phi = poly_pow_mod(phi, (long long)F.q(), sf);
            Poly g = gcd(rest, (phi - xpoly) % rest);
            if (g.degree() >= 1) {
                blocks.emplace_back(d, g.monic_scaled());
                rest = rest / g;
            }
        }
        for (auto& [d, block] : blocks) {
            if (block.degree() == d) {
                found.push_back(block.monic_scaled());
                continue;
            }
            // several degree-d factors: split through roots in GF(q^d)
            uint64_t ext_q = 1;
            for (long long i = 0; i < d; ++i) {
                ext_q *= F.q();
                if (ext_q > FieldSpec::kMaxOrder)
                    throw std::domain_error("factor splitting field above supported limit");
            }
            auto ext = create_field(F.p(), F.m() * int(d),
                                    first_irreducible_modulus(F.p(), F.m() * int(d)));
            Embedding up(F, *ext);
            Poly be = block.embedded(up);
            std::vector<uint32_t> roots;
            for (uint64_t a = 0; a < ext->q(); ++a)
                if (be.eval_idx(uint32_t(a)) == 0) roots.push_back(uint32_t(a));
            std::vector<bool> used(roots.size(), false);
            for (size_t i = 0; i < roots.size(); ++i) {
                if (used[i]) continue;
                // Frobenius orbit over the base field
                std::vector<uint32_t> orbit;
                uint32_t r = roots[i];
                do {
                    orbit.push_back(r);
                    auto it = std::find(roots.begin(), roots.end(), r);
                    used[size_t(it - roots.begin())] = true;
                    r = ext->pow_idx(r, (long long)F.q());
                } while (r != roots[i]);
                if ((long long)orbit.size() != d)
                    throw std::logic_error("orbit size disagrees with block degree");
                Poly mp = Poly::one(*ext);
                for (uint32_t o : orbit)
                    mp = mp * Poly(ext.get(), {ext->neg_idx(o), 1});
                std::vector<uint32_t> base_coeffs;
                for (size_t k = 0; k <= size_t(mp.degree()); ++k) {
                    auto down = up.inverse_idx(mp.coeff(k));
                    if (!down) throw std::logic_error("minimal polynomial left the base field");
                    base_coeffs.push_back(*down);
                }
                found.push_back(Poly(input.field_ptr(), std::move(base_coeffs)));
            }
        }
    }

    std::sort(found.begin(), found.end(), [](const Poly& a, const Poly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.coeffs() < b.coeffs();
    });
    found.erase(std::unique(found.begin(), found.end()), found.end());

    std::vector<std::pair<Poly, int>> out;
    Poly work = f;
    for (const Poly& irr : found) {
        int mult = 0;
        while (work.degree() >= irr.degree()) {
            auto [q, r] = work.divmod(irr);
            if (!r.is_zero()) break;
            work = q;
            ++mult;
        }
        if (mult == 0) throw std::logic_error("claimed factor does not divide");
        out.emplace_back(irr, mult);
    }
    if (work.degree() != 0)
        throw std::logic_error("factorization left a nontrivial cofactor");
    return out;
}

} // namespace lcdagc
