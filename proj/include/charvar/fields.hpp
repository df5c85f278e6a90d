#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <random>
#include <string>

#include "charvar/errors.hpp"

namespace charvar {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Runtime descriptor of a base field: the rationals or a prime field F_p.
struct FieldTag {
    enum class Kind { rationals, prime };
    Kind kind = Kind::rationals;
    std::int64_t p = 0;  // set iff kind == prime

    friend bool operator==(const FieldTag&, const FieldTag&) = default;
};

inline bool is_prime_i64(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// Deterministic uniform draw from [0, bound) via masked rejection.  Avoids
/// std::uniform_int_distribution, whose output is implementation-defined.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = ~std::uint64_t{0};
    std::uint64_t limit = bound - 1;
    while (mask >> 1 >= limit) mask >>= 1;
    for (;;) {
        std::uint64_t x = rng() & mask;
        if (x < bound) return x;
    }
}

/// The field Q with exact arbitrary-precision arithmetic.  Elements are
/// reduced fractions with positive denominator (cpp_rational maintains that).
class Rationals {
  public:
    using Element = BigRational;

    FieldTag tag() const { return {FieldTag::Kind::rationals, 0}; }

    Element zero() const { return Element(0); }
    Element one() const { return Element(1); }
    Element from_int(std::int64_t v) const { return Element(v); }
    Element from_fraction(const BigInt& num, const BigInt& den) const {
        require(den != 0, errc::invalid_argument, "zero denominator");
        return Element(num, den);
    }

    Element add(const Element& a, const Element& b) const { return a + b; }
    Element sub(const Element& a, const Element& b) const { return a - b; }
    Element mul(const Element& a, const Element& b) const { return a * b; }
    Element neg(const Element& a) const { return -a; }
    Element inv(const Element& a) const {
        require(a != 0, errc::singular, "inverse of zero");
        return Element(1) / a;
    }
    Element div(const Element& a, const Element& b) const { return mul(a, inv(b)); }

    bool is_zero(const Element& a) const { return a == 0; }
    bool is_one(const Element& a) const { return a == 1; }
    bool eq(const Element& a, const Element& b) const { return a == b; }
    bool less(const Element& a, const Element& b) const { return a < b; }

    std::string to_string(const Element& a) const { return a.str(); }

    /// Small random rational; used only by randomized tests, never by the
    /// deterministic samplers (those are F_p-only).
    Element random(std::mt19937_64& rng) const {
        std::int64_t num = static_cast<std::int64_t>(uniform_below(rng, 7)) - 3;
        std::int64_t den = 1 + static_cast<std::int64_t>(uniform_below(rng, 2));
        return Element(num, den);
    }
};

/// The prime field F_p for a word-size prime p.  Elements are residues in
/// [0, p); inverses are computed with the extended Euclidean algorithm.
class PrimeField {
  public:
    using Element = std::int64_t;

    explicit PrimeField(std::int64_t p) : p_(p) {
        require(p >= 2 && p < (std::int64_t{1} << 31), errc::invalid_argument,
                "prime must satisfy 2 <= p < 2^31, got " + std::to_string(p));
        require(is_prime_i64(p), errc::invalid_argument, std::to_string(p) + " is not prime");
    }

    FieldTag tag() const { return {FieldTag::Kind::prime, p_}; }
    std::int64_t modulus() const { return p_; }

    Element zero() const { return 0; }
    Element one() const { return p_ == 1 ? 0 : 1; }
    Element from_int(std::int64_t v) const {
        Element r = v % p_;
        return r < 0 ? r + p_ : r;
    }

    Element add(Element a, Element b) const {
        Element r = a + b;
        return r >= p_ ? r - p_ : r;
    }
    Element sub(Element a, Element b) const {
        Element r = a - b;
        return r < 0 ? r + p_ : r;
    }
    Element mul(Element a, Element b) const { return (a * b) % p_; }
    Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }

    Element inv(Element a) const {
        require(a % p_ != 0, errc::singular, "inverse of zero in F_p");
        // extended Euclid on (a, p)
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = p_, new_r = a % p_;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            std::int64_t tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        return t < 0 ? t + p_ : t;
    }
    Element div(Element a, Element b) const { return mul(a, inv(b)); }

    bool is_zero(Element a) const { return a == 0; }
    bool is_one(Element a) const { return a == 1; }
    bool eq(Element a, Element b) const { return a == b; }
    bool less(Element a, Element b) const { return a < b; }

    std::string to_string(Element a) const { return std::to_string(a); }

    Element random(std::mt19937_64& rng) const {
        return static_cast<Element>(uniform_below(rng, static_cast<std::uint64_t>(p_)));
    }
    Element random_nonzero(std::mt19937_64& rng) const {
        return 1 + static_cast<Element>(uniform_below(rng, static_cast<std::uint64_t>(p_ - 1)));
    }

    /// Smallest generator of the cyclic group F_p^*.
    Element primitive_root() const {
        if (p_ == 2) return 1;
        std::vector<std::int64_t> prime_factors;
        std::int64_t m = p_ - 1;
        for (std::int64_t d = 2; d * d <= m; ++d) {
            if (m % d == 0) {
                prime_factors.push_back(d);
                while (m % d == 0) m /= d;
            }
        }
        if (m > 1) prime_factors.push_back(m);
        for (Element g = 2; g < p_; ++g) {
            bool ok = true;
            for (std::int64_t f : prime_factors) {
                if (pow(g, (p_ - 1) / f) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) return g;
        }
        return 1;  // unreachable for prime p
    }

    Element pow(Element a, std::int64_t e) const {
        a = from_int(a);
        Element r = one();
        while (e > 0) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

  private:
    std::int64_t p_;
};

inline bool operator==(const Rationals&, const Rationals&) { return true; }

}  // namespace charvar
