#pragma once

// Elements of the function field F(x)[y] / (y^s + y - f(x)), written as
// (n_0(x) + n_1(x) y + ... + n_{s-1}(x) y^{s-1}) / d(x), together with
// valuations, divisors, residues and the degree-zero class map on the
// elliptic family.

#include <lcdagc/curve.hpp>
#include <lcdagc/gf.hpp>
#include <lcdagc/linalg.hpp>
#include <lcdagc/poly.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcdagc {

namespace detail {

inline std::vector<uint32_t> series_mul(const FieldSpec& K, const std::vector<uint32_t>& a,
                                        const std::vector<uint32_t>& b, size_t n) {
    std::vector<uint32_t> c(n + 1, 0);
    for (size_t i = 0; i < a.size() && i <= n; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && i + j <= n; ++j)
            c[i + j] = K.add_idx(c[i + j], K.mul_idx(a[i], b[j]));
    }
    return c;
}

// binomial coefficients mod p, rows 0..n
inline std::vector<std::vector<int>> pascal_mod(int n, int p) {
    std::vector<std::vector<int>> t(size_t(n) + 1);
    for (int i = 0; i <= n; ++i) {
        t[size_t(i)].assign(size_t(i) + 1, 1);
        for (int j = 1; j < i; ++j)
            t[size_t(i)][size_t(j)] = (t[size_t(i) - 1][size_t(j) - 1] + t[size_t(i) - 1][size_t(j)]) % p;
    }
    return t;
}

} // namespace detail

class CurveFunction {
public:
    CurveFunction() = default;

    explicit CurveFunction(CurvePtr C)
        : curve_(std::move(C)), num_(size_t(curve_->fiber_degree()), Poly::zero(*curve_->field())),
          den_(Poly::one(*curve_->field())) {}

    static CurveFunction zero(CurvePtr C) { return CurveFunction(std::move(C)); }

    static CurveFunction constant(CurvePtr C, uint32_t a) {
        CurveFunction h(std::move(C));
        h.num_[0] = Poly(h.field(), {a});
        return h;
    }

    static CurveFunction one(CurvePtr C) { return constant(std::move(C), 1); }

    static CurveFunction x(CurvePtr C) {
        CurveFunction h(std::move(C));
        h.num_[0] = Poly::x(*h.curve_->field());
        return h;
    }

    static CurveFunction y(CurvePtr C) {
        if (C->family() == CurveFamily::ProjectiveLine) return zero(std::move(C));
        CurveFunction h(std::move(C));
        h.num_[1] = Poly::one(*h.curve_->field());
        return h;
    }

    static CurveFunction from_poly(CurvePtr C, Poly num, Poly den) {
        CurveFunction h(std::move(C));
        if (den.is_zero()) throw std::invalid_argument("zero denominator");
        h.num_[0] = std::move(num);
        h.den_ = std::move(den);
        h.reduce();
        return h;
    }

    // numerator component of y^j and the common denominator
    static CurveFunction from_parts(CurvePtr C, std::vector<Poly> num, Poly den) {
        CurveFunction h(std::move(C));
        if (den.is_zero()) throw std::invalid_argument("zero denominator");
        if (num.size() > h.num_.size()) throw std::invalid_argument("too many y components");
        for (size_t j = 0; j < num.size(); ++j) h.num_[j] = std::move(num[j]);
        h.den_ = std::move(den);
        h.reduce();
        return h;
    }

    const CurvePtr& curve() const { return curve_; }
    const Poly& num(size_t j) const { return num_[j]; }
    const Poly& den() const { return den_; }
    size_t components() const { return num_.size(); }

    bool is_zero() const {
        for (auto& n : num_)
            if (!n.is_zero()) return false;
        return true;
    }

    bool operator==(const CurveFunction& o) const {
        check_same(o);
        // both sides are kept reduced with a monic denominator
        return den_ == o.den_ && num_ == o.num_;
    }
    bool operator!=(const CurveFunction& o) const { return !(*this == o); }

    CurveFunction operator+(const CurveFunction& o) const {
        check_same(o);
        CurveFunction r(curve_);
        r.den_ = den_ * o.den_;
        for (size_t j = 0; j < num_.size(); ++j)
            r.num_[j] = num_[j] * o.den_ + o.num_[j] * den_;
        r.reduce();
        return r;
    }

    CurveFunction operator-() const {
        CurveFunction r = *this;
        for (auto& n : r.num_) n = -n;
        return r;
    }

    CurveFunction operator-(const CurveFunction& o) const { return *this + (-o); }

    CurveFunction operator*(const CurveFunction& o) const {
        check_same(o);
        size_t s = num_.size();
        std::vector<Poly> prod(2 * s - 1, Poly::zero(*curve_->field()));
        for (size_t i = 0; i < s; ++i) {
            if (num_[i].is_zero()) continue;
            for (size_t j = 0; j < s; ++j) {
                if (o.num_[j].is_zero()) continue;
                prod[i + j] = prod[i + j] + num_[i] * o.num_[j];
            }
        }
        // y^s = f(x) - y
        for (size_t j = 2 * s - 2; j >= s && j < prod.size(); --j) {
            if (prod[j].is_zero()) continue;
            prod[j - s] = prod[j - s] + prod[j] * curve_->rhs();
            prod[j - s + 1] = prod[j - s + 1] - prod[j];
            prod[j] = Poly::zero(*curve_->field());
        }
        CurveFunction r(curve_);
        for (size_t j = 0; j < s; ++j) r.num_[j] = prod[j];
        r.den_ = den_ * o.den_;
        r.reduce();
        return r;
    }

    // y -> y + theta, a generator of the fiber symmetries
    CurveFunction shifted_y(uint32_t theta) const {
        const FieldSpec& F = *curve_->field();
        size_t s = num_.size();
        auto pas = detail::pascal_mod(int(s) - 1, F.p());
        CurveFunction r(curve_);
        r.den_ = den_;
        for (size_t j = 0; j < s; ++j) {
            if (num_[j].is_zero()) continue;
            uint32_t pw = F.one_idx();   // theta^{j-i}
            for (size_t i = j + 1; i-- > 0;) {
                int bc = pas[j][i] % F.p();
                if (bc != 0 && pw != 0) {
                    uint32_t scale = F.mul_idx(F.from_int(bc).idx(), pw);
                    r.num_[i] = r.num_[i] + num_[j].scaled(scale);
                }
                pw = F.mul_idx(pw, theta);
            }
        }
        r.reduce();
        return r;
    }

    // product over all fiber symmetries, an element of F(x); here for the
    // polynomial part only (denominator 1)
    Poly numerator_norm() const {
        CurveFunction prod = one(curve_);
        for (uint32_t t : curve_->theta()) {
            CurveFunction n(curve_);
            n.num_ = num_;
            prod = prod * n.shifted_y(t);
        }
        for (size_t j = 1; j < prod.num_.size(); ++j)
            if (!prod.num_[j].is_zero())
                throw std::logic_error("norm kept a fiber component");
        return prod.num_[0];
    }

    CurveFunction inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        CurveFunction conj = one(curve_);
        const auto& th = curve_->theta();
        CurveFunction numer(curve_);
        numer.num_ = num_;
        for (size_t i = 1; i < th.size(); ++i)
            conj = conj * numer.shifted_y(th[i]);
        CurveFunction full = numer * conj;
        for (size_t j = 1; j < full.num_.size(); ++j)
            if (!full.num_[j].is_zero())
                throw std::logic_error("norm kept a fiber component");
        Poly n0 = full.num_[0];
        if (n0.is_zero()) throw std::logic_error("vanishing norm of a nonzero function");
        CurveFunction r(curve_);
        for (size_t j = 0; j < r.num_.size(); ++j) r.num_[j] = conj.num_[j] * den_;
        r.den_ = conj.den_ * n0;
        r.reduce();
        return r;
    }

    CurveFunction operator/(const CurveFunction& o) const { return *this * o.inverse(); }

    // pole order bound at O for the numerator part
    long long numerator_weight() const {
        long long w = -1;
        for (size_t j = 0; j < num_.size(); ++j) {
            if (num_[j].is_zero()) continue;
            w = std::max(w, (long long)curve_->weight_x() * num_[j].degree() +
                                (long long)curve_->weight_y() * (long long)j);
        }
        return w;   // -1 for the zero numerator
    }

    // exact by weight injectivity: distinct monomials x^i y^j with j below
    // the fiber degree have distinct pole orders at O
    long long valuation_at_infinity() const {
        if (is_zero()) throw std::invalid_argument("valuation of the zero function");
        return -numerator_weight() + (long long)curve_->weight_x() * den_.degree();
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        os << "(";
        for (size_t j = 0; j < num_.size(); ++j) {
            if (num_[j].is_zero()) continue;
            if (!first) os << " + ";
            os << "(" << num_[j].str("x") << ")";
            if (j == 1) os << "*y";
            if (j > 1) os << "*y^" << j;
            first = false;
        }
        if (first) os << "0";
        os << ")";
        if (den_.degree() > 0 || den_.coeff(0) != curve_->field()->one_idx())
            os << "/(" << den_.str("x") << ")";
        return os.str();
    }

private:
    const FieldSpec* field() const { return curve_->field().get(); }

    void check_same(const CurveFunction& o) const {
        if (curve_.get() != o.curve_.get())
            throw std::invalid_argument("functions live on different curves");
    }

    void reduce() {
        Poly g = den_;
        for (auto& n : num_) g = gcd(g, n);
        if (g.degree() > 0) {
            den_ = den_ / g;
            for (auto& n : num_) n = n / g;
        }
        uint32_t lead = den_.lead();
        if (lead != curve_->field()->one_idx()) {
            uint32_t inv = curve_->field()->inv_idx(lead);
            den_ = den_.scaled(inv);
            for (auto& n : num_) n = n.scaled(inv);
        }
    }

    CurvePtr curve_;
    std::vector<Poly> num_;
    Poly den_;
};

// Laurent expansion of h at a point (alpha, beta) over K in the local
// parameter t = x - alpha. Returns the valuation v and the coefficients of
// t^v .. t^{v+want}. K is the base field (emb null) or a residue field.
inline std::pair<long long, std::vector<uint32_t>> local_series(
    const CurveFunction& h, const FieldSpec& K, const Embedding* emb,
    uint32_t alpha, uint32_t beta, int want) {
    if (h.is_zero()) throw std::invalid_argument("expansion of the zero function");
    const Curve& C = *h.curve();
    long long wnum = h.numerator_weight();
    long long wden = (long long)C.weight_x() * h.den().degree();
    int trunc = int(wnum + wden) + want + 2;

    auto lift = [&](const Poly& p) {
        Poly q = emb ? p.embedded(*emb) : p;
        Poly sh = q.shift(alpha);
        std::vector<uint32_t> c(size_t(trunc) + 1, 0);
        for (int i = 0; i <= trunc; ++i) c[size_t(i)] = sh.coeff(size_t(i));
        return c;
    };

    auto ys = y_series(C, K, emb, alpha, beta, trunc);
    std::vector<uint32_t> num(size_t(trunc) + 1, 0);
    std::vector<uint32_t> ypow = {K.one_idx()};
    for (size_t j = 0; j < h.components(); ++j) {
        if (!h.num(j).is_zero()) {
            auto base = lift(h.num(j));
            auto term = detail::series_mul(K, base, ypow, size_t(trunc));
            for (int i = 0; i <= trunc; ++i)
                num[size_t(i)] = K.add_idx(num[size_t(i)], term[size_t(i)]);
        }
        if (j + 1 < h.components()) ypow = detail::series_mul(K, ypow, ys, size_t(trunc));
    }
    auto den = lift(h.den());

    auto first_nonzero = [&](const std::vector<uint32_t>& c, long long bound,
                             const char* what) {
        for (size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0) return (long long)i;
        (void)bound;
        throw std::logic_error(std::string("series of a nonzero ") + what +
                               " vanished to its pole-order bound");
    };
    long long vnum = first_nonzero(num, wnum, "numerator");
    long long vden = first_nonzero(den, wden, "denominator");
    long long v = vnum - vden;

    std::vector<uint32_t> out(size_t(want) + 1, 0);
    uint32_t b0inv = K.inv_idx(den[size_t(vden)]);
    for (int k = 0; k <= want; ++k) {
        uint32_t acc = (vnum + k <= trunc) ? num[size_t(vnum + k)] : 0;
        for (int i = 0; i < k; ++i) {
            uint32_t bj = (vden + (k - i) <= trunc) ? den[size_t(vden + (k - i))] : 0;
            acc = K.sub_idx(acc, K.mul_idx(out[size_t(i)], bj));
        }
        out[size_t(k)] = K.mul_idx(acc, b0inv);
    }
    return {v, out};
}

inline long long valuation(const CurveFunction& h, const Place& P) {
    switch (P.kind()) {
    case Place::Kind::Infinity:
        return h.valuation_at_infinity();
    case Place::Kind::Rational:
        return local_series(h, *h.curve()->field(), nullptr, P.x(), P.y(), 0).first;
    case Place::Kind::Extension:
        return local_series(h, *P.ext_field(), &P.embedding(), P.ext_x(), P.ext_y(), 0).first;
    }
    throw std::logic_error("unreachable");
}

// value of h at a rational place, in the base field
inline uint32_t eval_at(const CurveFunction& h, const Place& P) {
    if (P.kind() != Place::Kind::Rational)
        throw std::invalid_argument("evaluation is defined at rational places here");
    if (h.is_zero()) return h.curve()->field()->zero_idx();
    auto [v, c] = local_series(h, *h.curve()->field(), nullptr, P.x(), P.y(), 0);
    if (v > 0) return h.curve()->field()->zero_idx();
    if (v == 0) return c[0];
    throw std::domain_error("pole at the evaluation point");
}

// residue of h dx at a rational place; t = x - alpha is a uniformizer at
// every affine place, so dx = dt there
inline uint32_t residue_at(const CurveFunction& h, const Place& P) {
    if (P.kind() != Place::Kind::Rational)
        throw std::invalid_argument("residues are taken at rational places here");
    if (h.is_zero()) return h.curve()->field()->zero_idx();
    long long v = local_series(h, *h.curve()->field(), nullptr, P.x(), P.y(), 0).first;
    if (v >= 0) return h.curve()->field()->zero_idx();
    auto full = local_series(h, *h.curve()->field(), nullptr, P.x(), P.y(), int(-1 - v));
    return full.second[size_t(-1 - v)];
}

class Divisor {
public:
    Divisor() = default;
    explicit Divisor(CurvePtr C) : curve_(std::move(C)) {}

    static Divisor at(CurvePtr C, const Place& P, long long n = 1) {
        Divisor d(std::move(C));
        d.add(P, n);
        return d;
    }

    const CurvePtr& curve() const { return curve_; }
    const std::map<Place, long long>& terms() const { return coeff_; }

    long long coeff(const Place& P) const {
        auto it = coeff_.find(P);
        return it == coeff_.end() ? 0 : it->second;
    }

    void add(const Place& P, long long n) {
        if (n == 0) return;
        auto it = coeff_.find(P);
        if (it == coeff_.end()) {
            coeff_[P] = n;
        } else {
            it->second += n;
            if (it->second == 0) coeff_.erase(it);
        }
    }

    long long degree() const {
        long long d = 0;
        for (auto& [P, n] : coeff_) d += n * P.degree();
        return d;
    }

    bool is_zero() const { return coeff_.empty(); }

    bool is_effective() const {
        for (auto& [P, n] : coeff_)
            if (n < 0) return false;
        return true;
    }

    Divisor operator+(const Divisor& o) const {
        check_same(o);
        Divisor r = *this;
        for (auto& [P, n] : o.coeff_) r.add(P, n);
        return r;
    }

    Divisor operator-() const {
        Divisor r = *this;
        for (auto& [P, n] : r.coeff_) (void)P, n = -n;
        return r;
    }

    Divisor operator-(const Divisor& o) const { return *this + (-o); }

    Divisor operator*(long long k) const {
        Divisor r(curve_);
        if (k == 0) return r;
        r.coeff_ = coeff_;
        for (auto& [P, n] : r.coeff_) (void)P, n *= k;
        return r;
    }

    bool operator==(const Divisor& o) const { return coeff_ == o.coeff_; }
    bool operator!=(const Divisor& o) const { return !(*this == o); }

    std::string str() const {
        if (coeff_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [P, n] : coeff_) {
            if (n > 0 && !first) os << "+";
            if (n == -1) os << "-";
            else if (n != 1) os << n << "*";
            os << P.str();
            first = false;
        }
        return os.str();
    }

private:
    void check_same(const Divisor& o) const {
        if (curve_ && o.curve_ && curve_.get() != o.curve_.get())
            throw std::invalid_argument("divisors live on different curves");
    }

    CurvePtr curve_;
    std::map<Place, long long> coeff_;
};

inline Divisor gcd(const Divisor& a, const Divisor& b) {
    Divisor r(a.curve());
    for (auto& [P, n] : a.terms()) r.add(P, std::min(n, b.coeff(P)));
    for (auto& [P, n] : b.terms())
        if (a.coeff(P) == 0) r.add(P, std::min((long long)0, n));
    return r;
}

inline Divisor lmd(const Divisor& a, const Divisor& b) {
    Divisor r(a.curve());
    for (auto& [P, n] : a.terms()) r.add(P, std::max(n, b.coeff(P)));
    for (auto& [P, n] : b.terms())
        if (a.coeff(P) == 0) r.add(P, std::max((long long)0, n));
    return r;
}

// principal divisor of h; every zero and pole lies above a factor of the
// denominator or of the numerator norm, and the total degree must vanish
inline Divisor divisor_of(const CurveFunction& h) {
    if (h.is_zero()) throw std::invalid_argument("divisor of the zero function");
    const CurvePtr& C = h.curve();
    Divisor D(C);
    D.add(Place::infinity(), h.valuation_at_infinity());

    std::vector<Poly> cands;
    auto push = [&](const Poly& mp) {
        for (auto& q : cands)
            if (q == mp) return;
        cands.push_back(mp);
    };
    if (h.den().degree() > 0)
        for (auto& [mp, e] : factor(h.den())) (void)e, push(mp);
    Poly nrm = h.numerator_norm();
    if (nrm.degree() > 0)
        for (auto& [mp, e] : factor(nrm)) (void)e, push(mp);

    for (auto& mp : cands)
        for (auto& P : places_above(*C, mp)) {
            long long v = valuation(h, P);
            if (v != 0) D.add(P, v);
        }
    if (D.degree() != 0)
        throw std::logic_error("principal divisor of nonzero degree");
    return D;
}

// differentials f dx; (dx) = (2g-2) O on every supported model
class Differential {
public:
    explicit Differential(CurveFunction f) : f_(std::move(f)) {
        if (f_.is_zero()) throw std::invalid_argument("zero differential");
    }

    const CurveFunction& scale() const { return f_; }

    Divisor divisor() const {
        Divisor D = divisor_of(f_);
        D.add(Place::infinity(), f_.curve()->dx_order_at_infinity());
        return D;
    }

    long long order_at(const Place& P) const {
        long long v = valuation(f_, P);
        if (P.is_infinity()) v += f_.curve()->dx_order_at_infinity();
        return v;
    }

    uint32_t residue(const Place& P) const { return residue_at(f_, P); }

private:
    CurveFunction f_;
};

// sum of the affine support under the group law; elliptic family only
inline Curve::EllPoint class_sum(const Divisor& D) {
    const Curve& C = *D.curve();
    Curve::EllPoint acc = std::nullopt;
    for (auto& [P, n] : D.terms()) {
        if (P.is_infinity()) continue;
        if (P.kind() != Place::Kind::Rational)
            throw std::invalid_argument("class map needs rational support");
        acc = C.ell_add(acc, C.ell_mul(n, AffinePoint{P.x(), P.y()}));
    }
    return acc;
}

inline bool is_principal(const Divisor& D) {
    return D.degree() == 0 && !class_sum(D).has_value();
}

// divisor text: terms like 3O, 2(4,7), -[x^2+x+1#0], joined by + or -
inline Divisor parse_divisor(CurvePtr C, const std::string& text) {
    Divisor D(C);
    size_t i = 0;
    auto fail = [&] { throw std::invalid_argument("cannot parse divisor: " + text); };
    auto skip_ws = [&] { while (i < text.size() && text[i] == ' ') ++i; };
    skip_ws();
    if (text == "0") return D;
    bool first = true;
    while (i < text.size()) {
        skip_ws();
        long long sign = 1;
        if (text[i] == '+') { ++i; }
        else if (text[i] == '-') { sign = -1; ++i; }
        else if (!first) fail();
        skip_ws();
        long long mult = 1;
        if (i < text.size() && std::isdigit((unsigned char)text[i])) {
            size_t j = i;
            while (j < text.size() && std::isdigit((unsigned char)text[j])) ++j;
            mult = std::stoll(text.substr(i, j - i));
            i = j;
            if (i < text.size() && text[i] == '*') ++i;
        }
        skip_ws();
        if (i >= text.size()) fail();
        if (text[i] == 'O') {
            ++i;
            D.add(Place::infinity(), sign * mult);
        } else if (text[i] == '(') {
            size_t close = text.find(')', i);
            if (close == std::string::npos) fail();
            std::string body = text.substr(i + 1, close - i - 1);
            auto comma = body.find(',');
            if (comma == std::string::npos) fail();
            uint32_t px = uint32_t(std::stoul(body.substr(0, comma)));
            uint32_t py = uint32_t(std::stoul(body.substr(comma + 1)));
            auto ys = C->fiber(px);
            if (std::find(ys.begin(), ys.end(), py) == ys.end())
                throw std::invalid_argument("point is not on the curve: (" +
                                            std::to_string(px) + "," + std::to_string(py) + ")");
            D.add(Place::rational(px, py), sign * mult);
            i = close + 1;
        } else if (text[i] == '[') {
            size_t close = text.find(']', i);
            if (close == std::string::npos) fail();
            std::string body = text.substr(i + 1, close - i - 1);
            size_t hash = body.find('#');
            size_t branch = 0;
            if (hash != std::string::npos) {
                branch = std::stoul(body.substr(hash + 1));
                body = body.substr(0, hash);
            }
            Poly mp = parse_poly(*C->field(), body);
            auto pls = places_above(*C, mp);
            if (branch >= pls.size()) throw std::invalid_argument("branch index out of range");
            D.add(pls[branch], sign * mult);
            i = close + 1;
        } else {
            fail();
        }
        first = false;
        skip_ws();
    }
    return D;
}

} // namespace lcdagc
