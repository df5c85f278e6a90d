#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "charvar/matrix.hpp"

namespace charvar {

/// Dense univariate polynomial over F, coefficients low to high, no trailing
/// zeros.  Just enough machinery for characteristic polynomials and root
/// extraction; not a general-purpose polynomial library.
template <class F>
class Poly {
  public:
    using Element = typename F::Element;

    explicit Poly(const F& field) : field_(field) {}
    Poly(const F& field, std::vector<Element> coeffs) : field_(field), c_(std::move(coeffs)) {
        trim();
    }

    static Poly constant(const F& f, const Element& a) { return Poly(f, {a}); }
    static Poly x(const F& f) { return Poly(f, {f.zero(), f.one()}); }

    const F& field() const { return field_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Element>& coeffs() const { return c_; }
    Element coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field_.zero(); }
    Element lead() const { return c_.empty() ? field_.zero() : c_.back(); }

    bool is_monic() const { return !c_.empty() && field_.is_one(c_.back()); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        const F& k = a.field_;
        std::vector<Element> c(std::max(a.c_.size(), b.c_.size()), k.zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = k.add(a.coeff(i), b.coeff(i));
        return Poly(k, std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        const F& k = a.field_;
        std::vector<Element> c(std::max(a.c_.size(), b.c_.size()), k.zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = k.sub(a.coeff(i), b.coeff(i));
        return Poly(k, std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        const F& k = a.field_;
        if (a.is_zero() || b.is_zero()) return Poly(k);
        std::vector<Element> c(a.c_.size() + b.c_.size() - 1, k.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (k.is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] = k.add(c[i + j], k.mul(a.c_[i], b.c_[j]));
        }
        return Poly(k, std::move(c));
    }

    Poly scaled(const Element& s) const {
        const F& k = field_;
        std::vector<Element> c = c_;
        for (auto& x : c) x = k.mul(s, x);
        return Poly(k, std::move(c));
    }

    Element eval(const Element& at) const {
        const F& k = field_;
        Element r = k.zero();
        for (std::size_t i = c_.size(); i-- > 0;) r = k.add(k.mul(r, at), c_[i]);
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!a.field_.eq(a.c_[i], b.c_[i])) return false;
        return true;
    }

  private:
    void trim() {
        while (!c_.empty() && field_.is_zero(c_.back())) c_.pop_back();
    }

    F field_;
    std::vector<Element> c_;
};

/// Euclidean division; the divisor's leading coefficient must be invertible,
/// which over a field only rules out the zero divisor.
template <class F>
std::pair<Poly<F>, Poly<F>> poly_divmod(const Poly<F>& a, const Poly<F>& b) {
    const F& k = a.field();
    require(!b.is_zero(), errc::invalid_argument, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly<F>(k), a};
    auto lead_inv = k.inv(b.lead());
    std::vector<typename F::Element> rem = a.coeffs();
    std::vector<typename F::Element> quot(a.degree() - b.degree() + 1, k.zero());
    for (int i = a.degree(); i >= b.degree(); --i) {
        auto f = k.mul(rem[i], lead_inv);
        if (k.is_zero(f)) continue;
        quot[i - b.degree()] = f;
        for (int j = 0; j <= b.degree(); ++j)
            rem[i - b.degree() + j] = k.sub(rem[i - b.degree() + j], k.mul(f, b.coeff(j)));
    }
    return {Poly<F>(k, std::move(quot)), Poly<F>(k, std::move(rem))};
}

template <class F>
Poly<F> poly_mod(const Poly<F>& a, const Poly<F>& b) {
    return poly_divmod(a, b).second;
}

/// Monic gcd.
template <class F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
    const F& k = a.field();
    while (!b.is_zero()) {
        auto r = poly_mod(a, b);
        a = b;
        b = r;
    }
    if (!a.is_zero()) a = a.scaled(k.inv(a.lead()));
    return a;
}

/// a^e mod m by square-and-multiply.
template <class F>
Poly<F> poly_powmod(Poly<F> a, std::int64_t e, const Poly<F>& m) {
    const F& k = a.field();
    Poly<F> r = Poly<F>::constant(k, k.one());
    a = poly_mod(a, m);
    while (e > 0) {
        if (e & 1) r = poly_mod(r * a, m);
        a = poly_mod(a * a, m);
        e >>= 1;
    }
    return r;
}

/// Characteristic polynomial det(xI - A), monic of degree n.  The matrix is
/// first brought to upper Hessenberg form by an exact similarity, then the
/// leading-minor recurrence assembles the polynomial.
template <class F>
Poly<F> char_poly(const Matrix<F>& a) {
    require(a.rows() == a.cols(), errc::shape_mismatch, "characteristic polynomial of non-square");
    const F& k = a.field();
    std::size_t n = a.rows();
    Matrix<F> h = a;

    for (std::size_t col = 0; col + 2 < n; ++col) {
        std::size_t piv = col + 1;
        while (piv < n && k.is_zero(h(piv, col))) ++piv;
        if (piv == n) continue;
        if (piv != col + 1) {
            for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(col + 1, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, col + 1));
        }
        auto piv_inv = k.inv(h(col + 1, col));
        for (std::size_t i = col + 2; i < n; ++i) {
            if (k.is_zero(h(i, col))) continue;
            auto f = k.mul(h(i, col), piv_inv);
            for (std::size_t j = 0; j < n; ++j) h(i, j) = k.sub(h(i, j), k.mul(f, h(col + 1, j)));
            for (std::size_t r = 0; r < n; ++r) h(r, col + 1) = k.add(h(r, col + 1), k.mul(f, h(r, i)));
        }
    }

    // p_k = (x - h_kk) p_{k-1} - sum_i h_ik (prod_{j=i..k-2} h_{j+1,j}) p_{i-1}, 1-based
    std::vector<Poly<F>> p;
    p.reserve(n + 1);
    p.push_back(Poly<F>::constant(k, k.one()));
    for (std::size_t kk = 1; kk <= n; ++kk) {
        Poly<F> xm(k, {k.neg(h(kk - 1, kk - 1)), k.one()});
        Poly<F> acc = xm * p[kk - 1];
        auto sub_prod = k.one();
        for (std::size_t i = kk - 1; i >= 1; --i) {
            sub_prod = k.mul(sub_prod, h(i, i - 1));  // h_{i+1,i} in 1-based terms
            if (k.is_zero(sub_prod)) break;
            auto coeff = k.mul(h(i - 1, kk - 1), sub_prod);
            if (!k.is_zero(coeff)) acc = acc - p[i - 1].scaled(coeff);
        }
        p.push_back(std::move(acc));
    }
    return p[n];
}

/// Roots in the base field with multiplicities, sorted canonically.  Roots
/// outside the field are simply not reported; callers compare the total
/// multiplicity with the degree to detect a non-split polynomial.
inline std::vector<std::pair<std::int64_t, int>> poly_roots(const Poly<PrimeField>& f) {
    const PrimeField& k = f.field();
    require(!f.is_zero(), errc::invalid_argument, "roots of zero polynomial");
    std::int64_t p = k.modulus();
    std::vector<std::pair<std::int64_t, int>> out;

    Poly<PrimeField> work = f;

    auto record_root = [&](std::int64_t r) {
        Poly<PrimeField> lin(k, {k.neg(r), k.one()});
        int mult = 0;
        for (;;) {
            auto [q, rem] = poly_divmod(work, lin);
            if (!rem.is_zero()) break;
            work = q;
            ++mult;
        }
        if (mult > 0) out.emplace_back(r, mult);
    };

    if (p <= 65536) {
        for (std::int64_t r = 0; r < p && work.degree() > 0; ++r)
            if (k.is_zero(work.eval(r))) record_root(r);
    } else {
        // distinct roots divide gcd(f, x^p - x); split by quadratic residues
        auto xp = poly_powmod(Poly<PrimeField>::x(k), p, work);
        auto g = poly_gcd(work, xp - Poly<PrimeField>::x(k));
        std::vector<Poly<PrimeField>> stack{g};
        std::vector<std::int64_t> roots;
        while (!stack.empty()) {
            auto cur = stack.back();
            stack.pop_back();
            if (cur.degree() <= 0) continue;
            if (cur.degree() == 1) {
                roots.push_back(k.neg(k.mul(cur.coeff(0), k.inv(cur.coeff(1)))));
                continue;
            }
            bool split = false;
            for (std::int64_t shift = 0; shift < p && !split; ++shift) {
                Poly<PrimeField> xa(k, {k.from_int(shift), k.one()});
                auto h = poly_powmod(xa, (p - 1) / 2, cur) - Poly<PrimeField>::constant(k, k.one());
                auto d = poly_gcd(cur, h);
                if (d.degree() > 0 && d.degree() < cur.degree()) {
                    stack.push_back(d);
                    stack.push_back(poly_divmod(cur, d).first);
                    split = true;
                }
            }
            require(split, errc::invalid_argument, "equal-degree splitting failed");
        }
        for (auto r : roots) record_root(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Rational roots with multiplicities.  The polynomial is rescaled to a monic
/// integer polynomial whose integer roots divide its constant term; divisor
/// enumeration runs under a hard budget.
inline std::vector<std::pair<BigRational, int>> poly_roots(const Poly<Rationals>& f) {
    const Rationals& k = f.field();
    require(!f.is_zero(), errc::invalid_argument, "roots of zero polynomial");
    std::vector<std::pair<BigRational, int>> out;
    Poly<Rationals> work = f;

    auto record_root = [&](const BigRational& r) {
        Poly<Rationals> lin(k, {k.neg(r), k.one()});
        int mult = 0;
        for (;;) {
            auto [q, rem] = poly_divmod(work, lin);
            if (!rem.is_zero()) break;
            work = q;
            ++mult;
        }
        if (mult > 0) out.emplace_back(r, mult);
    };

    // strip roots at zero first
    record_root(BigRational(0));
    if (work.degree() >= 1) {
        int n = work.degree();
        BigInt lcm_den = 1;
        for (int i = 0; i <= n; ++i) {
            BigInt den = denominator(work.coeff(i));
            lcm_den = lcm_den / gcd(lcm_den, den) * den;
        }
        // G(y) = lead^{-1} L^n f(y/L) is monic with integer coefficients
        auto lead_inv = k.inv(work.lead());
        std::vector<BigInt> g(n + 1);
        for (int i = 0; i <= n; ++i) {
            BigRational c = k.mul(lead_inv, work.coeff(i));
            BigRational scaled = c * BigRational(pow(lcm_den, n - i));
            require(denominator(scaled) == 1, errc::invalid_argument, "rescaling failed");
            g[i] = numerator(scaled);
        }
        BigInt g0 = g[0];
        if (g0 < 0) g0 = -g0;
        // factor |g0| by trial division under a budget
        std::vector<std::pair<BigInt, int>> factors;
        BigInt m = g0;
        std::int64_t steps = 0;
        const std::int64_t step_budget = std::int64_t{1} << 22;
        for (BigInt d = 2; d * d <= m; ++d) {
            if (++steps > step_budget)
                throw budget_error("trial-division factoring of constant term " + g0.str());
            if (m % d == 0) {
                int e = 0;
                while (m % d == 0) {
                    m /= d;
                    ++e;
                }
                factors.emplace_back(d, e);
            }
        }
        if (m > 1) factors.emplace_back(m, 1);
        // enumerate divisors, capped
        std::vector<BigInt> divisors{1};
        for (auto& [pr, e] : factors) {
            std::size_t base = divisors.size();
            require(base * (e + 1) <= (std::size_t{1} << 20), errc::invalid_argument,
                    "too many divisors of the constant term");
            BigInt pw = 1;
            for (int t = 1; t <= e; ++t) {
                pw *= pr;
                for (std::size_t i = 0; i < base; ++i) divisors.push_back(divisors[i] * pw);
            }
        }
        auto eval_g = [&](const BigInt& y) {
            BigInt r = 0;
            for (int i = n; i >= 0; --i) r = r * y + g[i];
            return r;
        };
        std::vector<BigRational> found;
        for (const auto& d : divisors) {
            if (eval_g(d) == 0) found.emplace_back(BigInt(d), lcm_den);
            if (eval_g(-d) == 0) found.emplace_back(BigInt(-d), lcm_den);
        }
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
        for (const auto& r : found) record_root(r);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace charvar
