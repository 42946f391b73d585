// Finite field arithmetic on explicit monic moduli.
//
// A FieldSpec describes GF(p^m) as GF(p)[x]/(modulus) and owns the
// arithmetic tables. Elements are canonical integers: the coefficient
// vector of the residue polynomial read as a base-p number, constant
// term least significant. That encoding fixes element I/O, ordering,
// and the tie-break used when embedding into an extension field.
#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lcdagc {

namespace detail {

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Dense polynomials over GF(p) as int vectors, ascending coefficients.
inline void pf_trim(std::vector<int>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<int> pf_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = int((c[i + j] + static_cast<long long>(a[i]) * b[j]) % p);
    pf_trim(c);
    return c;
}

// Remainder of a modulo monic m.
inline std::vector<int> pf_mod(std::vector<int> a, const std::vector<int>& m, int p) {
    pf_trim(a);
    if (m.empty() || m.back() != 1)
        throw std::invalid_argument("pf_mod: modulus must be monic");
    const size_t dm = m.size() - 1;
    while (a.size() > dm) {
        int lead = a.back();
        size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (size_t i = 0; i < m.size(); ++i) {
                long long v = a[shift + i] - static_cast<long long>(lead) * m[i];
                a[shift + i] = int(((v % p) + p) % p);
            }
        }
        a.pop_back();
        pf_trim(a);
        if (a.size() <= dm) break;
    }
    pf_trim(a);
    return a;
}

// Trial division over GF(p); intended for moduli of modest degree.
inline bool pf_irreducible(const std::vector<int>& f, int p) {
    if (f.size() < 2) return false;
    size_t deg = f.size() - 1;
    if (deg == 1) return true;
    for (size_t d = 1; 2 * d <= deg; ++d) {
        // every monic divisor candidate of degree d
        uint64_t count = 1;
        for (size_t i = 0; i < d; ++i) count *= uint64_t(p);
        for (uint64_t code = 0; code < count; ++code) {
            std::vector<int> g(d + 1, 0);
            uint64_t c = code;
            for (size_t i = 0; i < d; ++i) { g[i] = int(c % p); c /= p; }
            g[d] = 1;
            if (pf_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

inline std::vector<long long> factor_integer(long long n) {
    std::vector<long long> out;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace detail

class FieldElement;

// Immutable description of GF(p^m) plus arithmetic tables. Create through
// create_field or parse_field_spec; always held by shared_ptr so elements
// can carry plain pointers.
class FieldSpec {
public:
    static constexpr uint64_t kMaxOrder = 1u << 20;       // largest supported q
    static constexpr uint64_t kDenseTableLimit = 1024;     // q*q add/mul tables below this

    int p() const { return p_; }
    int m() const { return m_; }
    uint64_t q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    bool same_structure(const FieldSpec& o) const {
        return p_ == o.p_ && m_ == o.m_ && modulus_ == o.modulus_;
    }

    uint32_t zero_idx() const { return 0; }
    uint32_t one_idx() const { return 1; }

    // residue class of x; the conventional generator name is rho
    uint32_t rho_idx() const { return rho_; }

    // smallest element of multiplicative order q-1 (rho when rho qualifies)
    uint32_t primitive_idx() const { return primitive_; }

    uint32_t add_idx(uint32_t a, uint32_t b) const {
        if (p_ == 2) return a ^ b;
        if (!add_table_.empty()) return add_table_[size_t(a) * q_ + b];
        return digit_add(a, b, 1);
    }

    uint32_t sub_idx(uint32_t a, uint32_t b) const {
        if (p_ == 2) return a ^ b;
        return add_idx(a, neg_idx(b));
    }

    uint32_t neg_idx(uint32_t a) const {
        if (p_ == 2) return a;
        return digit_add(0, a, p_ - 1);
    }

    uint32_t mul_idx(uint32_t a, uint32_t b) const {
        if (!mul_table_.empty()) return mul_table_[size_t(a) * q_ + b];
        if (a == 0 || b == 0) return 0;
        uint64_t e = uint64_t(log_[a]) + log_[b];
        if (e >= q_ - 1) e -= q_ - 1;
        return exp_[e];
    }

    uint32_t inv_idx(uint32_t a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }

    uint32_t div_idx(uint32_t a, uint32_t b) const { return mul_idx(a, inv_idx(b)); }

    uint32_t pow_idx(uint32_t a, long long e) const {
        if (a == 0) {
            if (e < 0) throw std::domain_error("inverse of zero");
            return e == 0 ? 1 : 0;
        }
        long long ord = (long long)(q_ - 1);
        long long r = e % ord;
        if (r < 0) r += ord;
        return exp_[(uint64_t(log_[a]) * uint64_t(r)) % (q_ - 1)];
    }

    // absolute trace down to GF(p), returned as an integer in [0,p)
    int trace_idx(uint32_t a) const {
        uint32_t s = 0, t = a;
        for (int i = 0; i < m_; ++i) {
            s = add_idx(s, t);
            t = pow_idx(t, p_);
        }
        if (s >= uint32_t(p_))
            throw std::logic_error("trace left the prime field");
        return int(s);
    }

    // square root: Frobenius half-power in characteristic 2, scan otherwise
    std::optional<uint32_t> sqrt_idx(uint32_t a) const {
        if (a == 0) return 0u;
        if (p_ == 2) return pow_idx(a, (long long)(q_ / 2));
        if (q_ > 65536)
            throw std::domain_error("sqrt scan not supported above 2^16 in odd characteristic");
        for (uint32_t r = 0; r < q_; ++r)
            if (mul_idx(r, r) == a) return r;
        return std::nullopt;
    }

    bool is_square_idx(uint32_t a) const {
        if (p_ == 2 || a == 0) return true;
        return pow_idx(a, (long long)((q_ - 1) / 2)) == 1;
    }

    std::vector<int> coeffs_of(uint32_t a) const {
        std::vector<int> c(m_);
        for (int i = 0; i < m_; ++i) { c[i] = int(a % p_); a /= p_; }
        return c;
    }

    uint32_t idx_from_coeffs(const std::vector<int>& c) const {
        if ((int)c.size() > m_)
            throw std::invalid_argument("coefficient vector longer than m");
        uint64_t v = 0;
        for (size_t i = c.size(); i-- > 0;) {
            int d = ((c[i] % p_) + p_) % p_;
            v = v * p_ + d;
        }
        return uint32_t(v);
    }

    std::string spec_string() const {
        std::ostringstream os;
        os << p_ << '^' << m_ << ':' << modulus_string();
        return os.str();
    }

    std::string modulus_string() const {
        std::ostringstream os;
        bool first = true;
        for (size_t i = modulus_.size(); i-- > 0;) {
            int c = modulus_[i];
            if (c == 0) continue;
            if (!first) os << '+';
            first = false;
            if (i == 0) { os << c; continue; }
            if (c != 1) os << c;
            os << 'x';
            if (i > 1) os << '^' << i;
        }
        if (first) os << '0';
        return os.str();
    }

    FieldElement element(uint32_t idx) const;
    FieldElement zero() const;
    FieldElement one() const;
    FieldElement rho() const;
    FieldElement primitive() const;
    FieldElement from_int(long long v) const;   // v mod p, as a prime-field constant

    FieldSpec(const FieldSpec&) = delete;
    FieldSpec& operator=(const FieldSpec&) = delete;

    static std::shared_ptr<const FieldSpec> create(int p, int m, std::vector<int> modulus);

private:
    FieldSpec() = default;

    uint32_t digit_add(uint32_t a, uint32_t b, int scale_b) const {
        // digit-wise a + scale_b * b mod p
        uint64_t out = 0, mult = 1;
        for (int i = 0; i < m_; ++i) {
            int da = int(a % p_), db = int(b % p_);
            a /= p_; b /= p_;
            int d = (da + scale_b * db) % p_;
            out += uint64_t(d) * mult;
            mult *= p_;
        }
        return uint32_t(out);
    }

    uint32_t raw_mul(uint32_t a, uint32_t b) const {
        // coefficient convolution + modulus reduction; used before tables exist
        std::vector<int> ca = coeffs_of(a), cb = coeffs_of(b);
        std::vector<int> prod = detail::pf_mul(ca, cb, p_);
        prod = detail::pf_mod(prod, modulus_, p_);
        prod.resize(m_, 0);
        return idx_from_coeffs(prod);
    }

    void build_tables();

    int p_ = 0, m_ = 0;
    uint64_t q_ = 0;
    std::vector<int> modulus_;
    uint32_t rho_ = 0, generator_ = 0, primitive_ = 0;
    std::vector<uint32_t> exp_, log_;       // discrete logs w.r.t. generator_
    std::vector<uint16_t> mul_table_, add_table_;  // dense, only for small q
};

using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

// Value type: a spec pointer plus a canonical index. The spec must outlive
// the element; mixing elements of structurally different specs throws.
class FieldElement {
public:
    FieldElement() : spec_(nullptr), idx_(0) {}
    FieldElement(const FieldSpec* spec, uint32_t idx) : spec_(spec), idx_(idx) {}

    const FieldSpec& spec() const {
        if (!spec_) throw std::logic_error("element without field");
        return *spec_;
    }
    const FieldSpec* spec_ptr() const { return spec_; }
    uint32_t idx() const { return idx_; }
    bool is_zero() const { return idx_ == 0; }

    FieldElement operator+(const FieldElement& o) const { return bin(o, &FieldSpec::add_idx); }
    FieldElement operator-(const FieldElement& o) const { return bin(o, &FieldSpec::sub_idx); }
    FieldElement operator*(const FieldElement& o) const { return bin(o, &FieldSpec::mul_idx); }
    FieldElement operator/(const FieldElement& o) const { return bin(o, &FieldSpec::div_idx); }
    FieldElement operator-() const { return {spec_, spec().neg_idx(idx_)}; }

    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
    FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }

    FieldElement inv() const { return {spec_, spec().inv_idx(idx_)}; }
    FieldElement pow(long long e) const { return {spec_, spec().pow_idx(idx_, e)}; }

    bool operator==(const FieldElement& o) const {
        if (spec_ == o.spec_) return idx_ == o.idx_;
        check_compatible(o);
        return idx_ == o.idx_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(idx_); }

private:
    void check_compatible(const FieldElement& o) const {
        if (!spec_ || !o.spec_)
            throw std::logic_error("element without field");
        if (spec_ != o.spec_ && !spec_->same_structure(*o.spec_))
            throw std::invalid_argument("elements of different fields");
    }
    FieldElement bin(const FieldElement& o, uint32_t (FieldSpec::*op)(uint32_t, uint32_t) const) const {
        check_compatible(o);
        return {spec_, (spec_->*op)(idx_, o.idx_)};
    }

    const FieldSpec* spec_;
    uint32_t idx_;
};

inline FieldElement FieldSpec::element(uint32_t idx) const {
    if (idx >= q_) throw std::invalid_argument("element index out of range");
    return FieldElement(this, idx);
}
inline FieldElement FieldSpec::zero() const { return FieldElement(this, 0); }
inline FieldElement FieldSpec::one() const { return FieldElement(this, 1); }
inline FieldElement FieldSpec::rho() const { return FieldElement(this, rho_); }
inline FieldElement FieldSpec::primitive() const { return FieldElement(this, primitive_); }
inline FieldElement FieldSpec::from_int(long long v) const {
    long long r = v % p_;
    if (r < 0) r += p_;
    return FieldElement(this, uint32_t(r));
}

inline void FieldSpec::build_tables() {
    // multiplicative generator: smallest index whose order is q-1,
    // verified through the prime factorization of q-1
    std::vector<long long> primes = detail::factor_integer((long long)(q_ - 1));
    auto pow_raw = [&](uint32_t a, long long e) {
        uint32_t r = 1, base = a;
        while (e > 0) {
            if (e & 1) r = raw_mul(r, base);
            base = raw_mul(base, base);
            e >>= 1;
        }
        return r;
    };
    generator_ = 0;
    for (uint32_t cand = 1; cand < q_; ++cand) {
        bool ok = true;
        for (long long pr : primes)
            if (pow_raw(cand, (long long)((q_ - 1) / pr)) == 1) { ok = false; break; }
        if (ok) { generator_ = cand; break; }
    }
    if (generator_ == 0 && q_ > 2)
        throw std::logic_error("no multiplicative generator found");
    if (q_ == 2) generator_ = 1;

    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    uint32_t cur = 1;
    for (uint64_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = cur;
        log_[cur] = uint32_t(i);
        cur = raw_mul(cur, generator_);
    }
    if (cur != 1) throw std::logic_error("generator order mismatch");

    if (q_ <= kDenseTableLimit) {
        mul_table_.assign(q_ * q_, 0);
        for (uint64_t a = 0; a < q_; ++a) {
            if (a == 0) continue;
            for (uint64_t b = 0; b < q_; ++b) {
                if (b == 0) continue;
                uint64_t e = uint64_t(log_[a]) + log_[b];
                if (e >= q_ - 1) e -= q_ - 1;
                mul_table_[a * q_ + b] = uint16_t(exp_[e]);
            }
        }
        if (p_ != 2) {
            add_table_.assign(q_ * q_, 0);
            for (uint64_t a = 0; a < q_; ++a)
                for (uint64_t b = 0; b < q_; ++b)
                    add_table_[a * q_ + b] = uint16_t(digit_add(uint32_t(a), uint32_t(b), 1));
        }
    }

    // rho qualifies as the primitive element iff its order is q-1
    if (q_ == 2) { primitive_ = 1; }
    else {
        auto order_of = [&](uint32_t a) {
            long long ord = (long long)(q_ - 1);
            for (long long pr : primes)
                while (ord % pr == 0 && pow_idx(a, ord / pr) == 1) ord /= pr;
            return ord;
        };
        if (rho_ != 0 && order_of(rho_) == (long long)(q_ - 1)) primitive_ = rho_;
        else primitive_ = generator_;
    }
}

inline std::shared_ptr<const FieldSpec> FieldSpec::create(int p, int m, std::vector<int> modulus) {
    if (!detail::is_prime(p)) throw std::invalid_argument("p is not prime");
    if (m < 1) throw std::invalid_argument("m must be positive");
    for (int& c : modulus) c = ((c % p) + p) % p;
    detail::pf_trim(modulus);
    if ((int)modulus.size() != m + 1)
        throw std::invalid_argument("modulus degree must equal m");
    if (modulus.back() != 1)
        throw std::invalid_argument("modulus must be monic");
    if (!detail::pf_irreducible(modulus, p))
        throw std::invalid_argument("modulus is reducible");

    uint64_t q = 1;
    for (int i = 0; i < m; ++i) {
        q *= uint64_t(p);
        if (q > kMaxOrder) throw std::invalid_argument("field order above supported limit");
    }

    auto spec = std::shared_ptr<FieldSpec>(new FieldSpec());
    spec->p_ = p;
    spec->m_ = m;
    spec->q_ = q;
    spec->modulus_ = modulus;
    if (m == 1) {
        spec->rho_ = uint32_t((p - modulus[0]) % p);   // x = -c in GF(p)[x]/(x+c)
    } else {
        spec->rho_ = uint32_t(p);                      // coefficient vector (0,1,0,...)
    }
    spec->build_tables();
    return spec;
}

inline FieldSpecPtr create_field(int p, int m, const std::vector<int>& modulus) {
    return FieldSpec::create(p, m, modulus);
}

// ---- polynomial text parsing (prime coefficient polynomials) ----

namespace detail {

inline std::vector<int> parse_int_poly(const std::string& text, int p) {
    // terms like "x^4", "2x^3", "3*x", "7"; separators + and -
    std::vector<int> coeffs;
    auto bump = [&](size_t deg, long long c) {
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
        long long v = (coeffs[deg] + c) % p;
        if (v < 0) v += p;
        coeffs[deg] = int(v);
    };
    size_t i = 0;
    int sign = 1;
    std::string s;
    for (char ch : text)
        if (!std::isspace((unsigned char)ch)) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty polynomial");
    while (i < s.size()) {
        if (s[i] == '+') { sign = 1; ++i; continue; }
        if (s[i] == '-') { sign = -1; ++i; continue; }
        long long coef = 1;
        bool saw_num = false;
        if (std::isdigit((unsigned char)s[i])) {
            coef = 0;
            while (i < s.size() && std::isdigit((unsigned char)s[i])) {
                coef = coef * 10 + (s[i] - '0');
                ++i;
            }
            saw_num = true;
        }
        if (i < s.size() && s[i] == '*') ++i;
        size_t deg = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                if (i >= s.size() || !std::isdigit((unsigned char)s[i]))
                    throw std::invalid_argument("malformed exponent in polynomial");
                size_t e = 0;
                while (i < s.size() && std::isdigit((unsigned char)s[i])) {
                    e = e * 10 + size_t(s[i] - '0');
                    ++i;
                }
                deg = e;
            }
        } else if (!saw_num) {
            throw std::invalid_argument("malformed term in polynomial");
        }
        bump(deg, sign * coef);
        sign = 1;
    }
    pf_trim(coeffs);
    return coeffs;
}

} // namespace detail

// "p^m:poly", e.g. "2^4:x^4+x+1" or "3^2:x^2+2x+2"
inline FieldSpecPtr parse_field_spec(const std::string& text) {
    size_t caret = text.find('^');
    size_t colon = text.find(':');
    if (caret == std::string::npos || colon == std::string::npos || caret > colon)
        throw std::invalid_argument("field spec must look like p^m:poly");
    int p = std::stoi(text.substr(0, caret));
    int m = std::stoi(text.substr(caret + 1, colon - caret - 1));
    std::vector<int> modulus = detail::parse_int_poly(text.substr(colon + 1), p);
    return create_field(p, m, modulus);
}

// first monic irreducible of degree m over GF(p) in canonical coefficient order
inline std::vector<int> first_irreducible_modulus(int p, int m) {
    uint64_t count = 1;
    for (int i = 0; i < m; ++i) {
        count *= uint64_t(p);
        if (count > FieldSpec::kMaxOrder)
            throw std::invalid_argument("extension degree above supported limit");
    }
    for (uint64_t code = 0; code < count; ++code) {
        std::vector<int> f(m + 1, 0);
        uint64_t c = code;
        for (int i = 0; i < m; ++i) { f[i] = int(c % p); c /= p; }
        f[m] = 1;
        if (detail::pf_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

// Embedding GF(p^m) -> GF(p^(m*d)); rho of the source maps to the root of
// the source modulus with the smallest canonical encoding in the target.
class Embedding {
public:
    // both specs must outlive the embedding (same discipline as FieldElement)
    Embedding(const FieldSpec& from, const FieldSpec& to) : from_(&from), to_(&to) {
        const FieldSpec& F = *from_;
        const FieldSpec& T = *to_;
        if (F.p() != T.p() || T.m() % F.m() != 0)
            throw std::invalid_argument("no embedding between these fields");
        root_ = 0;
        bool found = false;
        for (uint64_t cand = 0; cand < T.q(); ++cand) {
            // Horner evaluation of the source modulus at cand
            uint32_t acc = 0;
            for (size_t i = F.modulus().size(); i-- > 0;) {
                acc = T.mul_idx(acc, uint32_t(cand));
                acc = T.add_idx(acc, uint32_t(F.modulus()[i] % T.p()));
            }
            if (acc == 0) { root_ = uint32_t(cand); found = true; break; }
        }
        if (!found) throw std::logic_error("source modulus has no root in target");
        forward_.assign(F.q(), 0);
        for (uint64_t a = 0; a < F.q(); ++a) {
            std::vector<int> c = F.coeffs_of(uint32_t(a));
            uint32_t acc = 0;
            for (size_t i = c.size(); i-- > 0;) {
                acc = T.mul_idx(acc, root_);
                acc = T.add_idx(acc, uint32_t(c[i]));
            }
            forward_[a] = acc;
            inverse_[acc] = uint32_t(a);
        }
    }

    const FieldSpec& from() const { return *from_; }
    const FieldSpec& to() const { return *to_; }
    uint32_t root_idx() const { return root_; }

    uint32_t map_idx(uint32_t a) const {
        if (a >= forward_.size()) throw std::invalid_argument("index out of range");
        return forward_[a];
    }
    FieldElement map(const FieldElement& a) const {
        if (!a.spec().same_structure(*from_))
            throw std::invalid_argument("element not in the source field");
        return FieldElement(to_, map_idx(a.idx()));
    }
    // inverse image if the target element lies in the embedded subfield
    std::optional<uint32_t> inverse_idx(uint32_t b) const {
        auto it = inverse_.find(b);
        if (it == inverse_.end()) return std::nullopt;
        return it->second;
    }

private:
    const FieldSpec* from_;
    const FieldSpec* to_;
    uint32_t root_;
    std::vector<uint32_t> forward_;
    std::unordered_map<uint32_t, uint32_t> inverse_;
};

inline int trace(const FieldElement& a) { return a.spec().trace_idx(a.idx()); }

inline std::optional<FieldElement> sqrt_of(const FieldElement& a) {
    auto r = a.spec().sqrt_idx(a.idx());
    if (!r) return std::nullopt;
    return FieldElement(a.spec_ptr(), *r);
}

inline std::vector<FieldElement> enumerate_field(const FieldSpec& f) {
    std::vector<FieldElement> out;
    out.reserve(f.q());
    for (uint64_t i = 0; i < f.q(); ++i) out.push_back(FieldElement(&f, uint32_t(i)));
    return out;
}

} // namespace lcdagc
