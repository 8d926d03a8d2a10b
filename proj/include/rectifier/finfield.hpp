#pragma once

// Exact arithmetic in F_p and F_{p^t} with elements stored as coefficient
// vectors over the adjoined root (little-endian), plus the norm map down to F_p.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"

namespace rectifier {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (e > 0) {
        if (e & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return result;
}

} // namespace detail

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0) return n == small;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

struct FieldElement {
    std::vector<std::uint64_t> coeffs;

    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

enum class FieldOp { Add, Sub, Mul, Neg };

class FiniteField {
public:
    std::uint64_t characteristic() const noexcept { return p_; }
    unsigned degree() const noexcept { return t_; }
    std::uint64_t order() const noexcept { return order_; }
    /// Low coefficients of the monic modulus (the leading 1 is implicit); empty for prime fields.
    const std::vector<std::uint64_t>& modulus() const noexcept { return modulus_; }

    FieldElement zero() const { return FieldElement{std::vector<std::uint64_t>(t_, 0)}; }
    FieldElement one() const {
        FieldElement e = zero();
        e.coeffs[0] = 1;
        return e;
    }
    /// The adjoined root x; requires t >= 2.
    FieldElement generator_root() const {
        if (t_ < 2) fail(ErrorCode::InvalidArgument, "prime field has no adjoined root");
        FieldElement e = zero();
        e.coeffs[1] = 1;
        return e;
    }
    FieldElement constant(std::uint64_t c) const {
        FieldElement e = zero();
        e.coeffs[0] = c % p_;
        return e;
    }

    /// Elements are enumerated in coefficient-lexicographic order: the
    /// constant coefficient is the most significant digit.
    FieldElement element_at(std::uint64_t index) const {
        if (index >= order_) fail(ErrorCode::InvalidArgument, "element index out of range");
        FieldElement e = zero();
        for (unsigned i = t_; i-- > 0;) {
            e.coeffs[i] = index % p_;
            index /= p_;
        }
        return e;
    }
    std::uint64_t index_of(const FieldElement& e) const {
        check(e);
        std::uint64_t index = 0;
        for (unsigned i = 0; i < t_; ++i) index = index * p_ + e.coeffs[i];
        return index;
    }

    bool contains(const FieldElement& e) const {
        if (e.coeffs.size() != t_) return false;
        for (auto c : e.coeffs)
            if (c >= p_) return false;
        return true;
    }

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        check(a);
        check(b);
        FieldElement r = zero();
        for (unsigned i = 0; i < t_; ++i) {
            std::uint64_t s = a.coeffs[i] + b.coeffs[i];
            if (s >= p_) s -= p_;
            r.coeffs[i] = s;
        }
        return r;
    }

    FieldElement neg(const FieldElement& a) const {
        check(a);
        FieldElement r = zero();
        for (unsigned i = 0; i < t_; ++i) r.coeffs[i] = a.coeffs[i] == 0 ? 0 : p_ - a.coeffs[i];
        return r;
    }

    FieldElement sub(const FieldElement& a, const FieldElement& b) const { return add(a, neg(b)); }

    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        check(a);
        check(b);
        std::vector<std::uint64_t> prod(2 * t_ - 1, 0);
        for (unsigned i = 0; i < t_; ++i) {
            if (a.coeffs[i] == 0) continue;
            for (unsigned j = 0; j < t_; ++j) {
                prod[i + j] = (prod[i + j] + detail::mulmod(a.coeffs[i], b.coeffs[j], p_)) % p_;
            }
        }
        // x^t = -(modulus_0 + modulus_1 x + ... + modulus_{t-1} x^{t-1})
        for (std::size_t d = prod.size(); d-- > t_;) {
            const std::uint64_t lead = prod[d];
            if (lead == 0) continue;
            prod[d] = 0;
            for (unsigned i = 0; i < t_; ++i) {
                const std::uint64_t sub = detail::mulmod(lead, modulus_[i], p_);
                std::uint64_t& slot = prod[d - t_ + i];
                slot = slot >= sub ? slot - sub : slot + (p_ - sub);
            }
        }
        prod.resize(t_);
        return FieldElement{std::move(prod)};
    }

    FieldElement arith(FieldOp op, const FieldElement& a, const FieldElement& b) const {
        switch (op) {
        case FieldOp::Add: return add(a, b);
        case FieldOp::Sub: return sub(a, b);
        case FieldOp::Mul: return mul(a, b);
        case FieldOp::Neg: return neg(a);
        }
        fail(ErrorCode::InvalidArgument, "unknown field operation");
    }

    /// Square-and-multiply; pow(0, 0) is the multiplicative identity.
    FieldElement pow(const FieldElement& a, std::uint64_t e) const {
        check(a);
        FieldElement result = one();
        FieldElement base = a;
        while (e > 0) {
            if (e & 1) result = mul(result, base);
            e >>= 1;
            if (e > 0) base = mul(base, base);
        }
        return result;
    }

    /// Exponent (q^t - 1)/(q - 1) of the norm map to the prime subfield.
    std::uint64_t norm_exponent() const { return (order_ - 1) / (p_ - 1); }

    /// Field norm to F_p, returned as a residue in [0, p).
    std::uint64_t norm(const FieldElement& z) const {
        const FieldElement n = pow(z, norm_exponent());
        for (unsigned i = 1; i < t_; ++i) {
            if (n.coeffs[i] != 0) fail(ErrorCode::InvalidArgument, "norm left the prime subfield; modulus is not irreducible");
        }
        return n.coeffs[0];
    }

    friend bool operator==(const FiniteField& a, const FiniteField& b) {
        return a.p_ == b.p_ && a.t_ == b.t_ && a.modulus_ == b.modulus_;
    }

    friend FiniteField make_field(std::uint64_t p, unsigned t);

private:
    void check(const FieldElement& e) const {
        if (!contains(e)) fail(ErrorCode::DimensionMismatch, "element does not belong to this field");
    }

    std::uint64_t p_ = 2;
    unsigned t_ = 1;
    std::uint64_t order_ = 2;
    std::vector<std::uint64_t> modulus_;
};

namespace detail {

// Polynomials over F_p as little-endian coefficient vectors, normalized (no leading zeros).
using Poly = std::vector<std::uint64_t>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Remainder of a modulo a monic divisor.
inline Poly poly_mod(Poly a, const Poly& monic, std::uint64_t p) {
    trim(a);
    const std::size_t dd = monic.size() - 1;
    while (a.size() > dd) {
        const std::uint64_t lead = a.back();
        const std::size_t shift = a.size() - 1 - dd;
        for (std::size_t i = 0; i <= dd; ++i) {
            const std::uint64_t sub = mulmod(lead, monic[i], p);
            std::uint64_t& slot = a[shift + i];
            slot = slot >= sub ? slot - sub : slot + (p - sub);
        }
        trim(a);
    }
    return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& monic, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], p)) % p;
    return poly_mod(std::move(prod), monic, p);
}

inline Poly poly_powmod(Poly base, std::uint64_t e, const Poly& monic, std::uint64_t p) {
    Poly result{1};
    base = poly_mod(std::move(base), monic, p);
    for (; e != 0; e >>= 1) {
        if (e & 1) result = poly_mulmod(result, base, monic, p);
        base = poly_mulmod(base, base, monic, p);
    }
    return result;
}

inline Poly make_monic(Poly a, std::uint64_t p) {
    trim(a);
    if (a.empty()) return a;
    const std::uint64_t inv = powmod(a.back(), p - 2, p);
    for (auto& c : a) c = mulmod(c, inv, p);
    return a;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
    a = make_monic(std::move(a), p);
    b = make_monic(std::move(b), p);
    while (!b.empty()) {
        Poly r = make_monic(poly_mod(a, b, p), p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// Ben-Or: f of degree t is irreducible iff gcd(x^(p^i) - x, f) = 1 for i <= t/2.
inline bool is_irreducible_ben_or(const Poly& f, std::uint64_t p) {
    const std::size_t deg = f.size() - 1;
    const Poly x{0, 1};
    Poly h = poly_mod(x, f, p);
    for (std::size_t i = 1; i <= deg / 2; ++i) {
        h = poly_powmod(h, p, f, p);
        Poly diff = h;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        if (poly_gcd(diff, f, p).size() != 1) return false;
    }
    return true;
}

/// Number of monic divisors of degree 1..t/2, saturating at `cap`.
inline std::uint64_t trial_divisor_count(std::uint64_t p, std::size_t t, std::uint64_t cap) {
    std::uint64_t total = 0, power = 1;
    for (std::size_t d = 1; d <= t / 2; ++d) {
        if (power > cap / p) return cap;
        power *= p;
        total += power;
        if (total >= cap) return cap;
    }
    return total;
}

inline constexpr std::uint64_t kTrialDivisionLimit = std::uint64_t{1} << 20;

/// True when the monic polynomial f has no monic factor of degree 1..deg(f)/2.
/// Trial division against every candidate factor when there are at most
/// 2^20 of them; the gcd test otherwise.
inline bool is_irreducible(const Poly& f, std::uint64_t p) {
    const std::size_t deg = f.size() - 1;
    if (deg <= 1) return deg == 1;
    if (f[0] == 0) return false;
    if (trial_divisor_count(p, deg, kTrialDivisionLimit) >= kTrialDivisionLimit) return is_irreducible_ben_or(f, p);
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        // Enumerate all monic polynomials of degree d via a base-p counter.
        Poly g(d + 1, 0);
        g[d] = 1;
        while (true) {
            if (poly_mod(f, g, p).empty()) return false;
            std::size_t i = 0;
            while (i < d && ++g[i] == p) g[i++] = 0;
            if (i == d) break;
        }
    }
    return true;
}

} // namespace detail

/// Builds F_{p^t}. The modulus is the lexicographically smallest monic
/// irreducible of degree t, comparing coefficients from the constant term up.
inline FiniteField make_field(std::uint64_t p, unsigned t) {
    if (t == 0) fail(ErrorCode::InvalidArgument, "field degree must be at least 1");
    if (!is_prime(p)) fail(ErrorCode::NonPrimeCharacteristic, std::to_string(p) + " is not prime");
    std::uint64_t order = 1;
    for (unsigned i = 0; i < t; ++i) {
        if (order > (1ULL << 63) / p) fail(ErrorCode::OrderOverflow, "p^t exceeds 2^63");
        order *= p;
    }
    FiniteField f;
    f.p_ = p;
    f.t_ = t;
    f.order_ = order;
    if (t == 1) return f;

    // Low-degree-first lexicographic order: c0 is the most significant digit
    // of the counter, so increment from the top coefficient down.
    // Every candidate with c0 = 0 is divisible by x, so start at c0 = 1.
    detail::Poly candidate(t + 1, 0);
    candidate[t] = 1;
    candidate[0] = 1;
    while (true) {
        if (detail::is_irreducible(candidate, p)) {
            f.modulus_.assign(candidate.begin(), candidate.end() - 1);
            return f;
        }
        std::size_t i = t;
        while (i > 0) {
            --i;
            if (++candidate[i] < p) break;
            candidate[i] = 0;
            if (i == 0) fail(ErrorCode::InvalidArgument, "no irreducible polynomial found");
        }
    }
}

} // namespace rectifier
