#pragma once

#include <cstddef>
#include <random>
#include <sstream>
#include <vector>

#include "charvar/errors.hpp"
#include "charvar/fields.hpp"

namespace charvar {

/// Dense matrix over an exact field F (Rationals or PrimeField).  Entries are
/// stored row-major; the field object travels with the matrix so prime-field
/// matrices know their modulus.  Values are immutable in practice: every
/// operation returns a fresh matrix.
template <class F>
class Matrix {
  public:
    using Element = typename F::Element;

    Matrix(const F& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, field.zero()) {}

    static Matrix identity(const F& field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    static Matrix from_rows(const F& field, const std::vector<std::vector<Element>>& rows) {
        std::size_t r = rows.size();
        std::size_t c = r == 0 ? 0 : rows.front().size();
        Matrix m(field, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            require(rows[i].size() == c, errc::shape_mismatch, "ragged row list");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    /// Convenience for tests: entries given as integers, mapped into F.
    static Matrix from_ints(const F& field, const std::vector<std::vector<std::int64_t>>& rows) {
        std::size_t r = rows.size();
        std::size_t c = r == 0 ? 0 : rows.front().size();
        Matrix m(field, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            require(rows[i].size() == c, errc::shape_mismatch, "ragged row list");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = field.from_int(rows[i][j]);
        }
        return m;
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Element& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Element& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<Element> row(std::size_t i) const {
        return std::vector<Element>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

    void set_row(std::size_t i, const std::vector<Element>& v) {
        require(v.size() == cols_, errc::shape_mismatch, "row length");
        std::copy(v.begin(), v.end(), a_.begin() + i * cols_);
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        if (!(x.field_.tag() == y.field_.tag())) return false;
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
        for (std::size_t k = 0; k < x.a_.size(); ++k)
            if (!x.field_.eq(x.a_[k], y.a_[k])) return false;
        return true;
    }
    friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < cols_; ++j)
                os << (j ? ", " : "") << field_.to_string((*this)(i, j));
            os << "]";
        }
        os << "]";
        return os.str();
    }

  private:
    F field_;
    std::size_t rows_, cols_;
    std::vector<Element> a_;
};

namespace detail {

template <class F>
void check_same_field(const Matrix<F>& a, const Matrix<F>& b) {
    require(a.field().tag() == b.field().tag(), errc::field_mismatch,
            "operands live in different fields");
}

}  // namespace detail

template <class F>
Matrix<F> mat_mul(const Matrix<F>& a, const Matrix<F>& b) {
    detail::check_same_field(a, b);
    require(a.cols() == b.rows(), errc::shape_mismatch, "inner dimensions disagree");
    const F& k = a.field();
    Matrix<F> c(k, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const auto& ail = a(i, l);
            if (k.is_zero(ail)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) = k.add(c(i, j), k.mul(ail, b(l, j)));
        }
    return c;
}

template <class F>
Matrix<F> operator*(const Matrix<F>& a, const Matrix<F>& b) {
    return mat_mul(a, b);
}

template <class F>
Matrix<F> mat_add(const Matrix<F>& a, const Matrix<F>& b) {
    detail::check_same_field(a, b);
    require(a.rows() == b.rows() && a.cols() == b.cols(), errc::shape_mismatch, "shape");
    Matrix<F> c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field().add(a(i, j), b(i, j));
    return c;
}

template <class F>
Matrix<F> mat_sub(const Matrix<F>& a, const Matrix<F>& b) {
    detail::check_same_field(a, b);
    require(a.rows() == b.rows() && a.cols() == b.cols(), errc::shape_mismatch, "shape");
    Matrix<F> c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field().sub(a(i, j), b(i, j));
    return c;
}

template <class F>
Matrix<F> scalar_mul(const typename F::Element& s, const Matrix<F>& a) {
    Matrix<F> c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field().mul(s, a(i, j));
    return c;
}

template <class F>
Matrix<F> transpose(const Matrix<F>& a) {
    Matrix<F> t(a.field(), a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

/// In-place reduced row echelon form.  Returns the pivot columns.
template <class F>
std::vector<std::size_t> rref_in_place(Matrix<F>& m) {
    const F& k = m.field();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && k.is_zero(m(sel, col))) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
        auto piv_inv = k.inv(m(row, col));
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = k.mul(piv_inv, m(row, j));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || k.is_zero(m(i, col))) continue;
            auto f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                m(i, j) = k.sub(m(i, j), k.mul(f, m(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class F>
std::size_t rank(const Matrix<F>& a) {
    Matrix<F> m = a;
    return rref_in_place(m).size();
}

template <class F>
Matrix<F> mat_inverse(const Matrix<F>& a) {
    require(a.rows() == a.cols(), errc::shape_mismatch, "inverse of non-square matrix");
    const F& k = a.field();
    std::size_t n = a.rows();
    Matrix<F> work(k, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) work(i, j) = a(i, j);
        work(i, n + i) = k.one();
    }
    auto pivots = rref_in_place(work);
    require(pivots.size() == n && pivots.back() == n - 1 && pivots.front() == 0 &&
                [&] {
                    for (std::size_t i = 0; i < n; ++i)
                        if (pivots[i] != i) return false;
                    return true;
                }(),
            errc::singular, "matrix is singular");
    Matrix<F> inv(k, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = work(i, n + j);
    return inv;
}

template <class F>
bool is_invertible(const Matrix<F>& a) {
    if (a.rows() != a.cols()) return false;
    return rank(a) == a.rows();
}

template <class F>
typename F::Element determinant(const Matrix<F>& a) {
    require(a.rows() == a.cols(), errc::shape_mismatch, "determinant of non-square matrix");
    const F& k = a.field();
    Matrix<F> m = a;
    std::size_t n = a.rows();
    auto det = k.one();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && k.is_zero(m(sel, col))) ++sel;
        if (sel == n) return k.zero();
        if (sel != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(sel, j), m(col, j));
            det = k.neg(det);
        }
        det = k.mul(det, m(col, col));
        auto piv_inv = k.inv(m(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            if (k.is_zero(m(i, col))) continue;
            auto f = k.mul(piv_inv, m(i, col));
            for (std::size_t j = col; j < n; ++j) m(i, j) = k.sub(m(i, j), k.mul(f, m(col, j)));
        }
    }
    return det;
}

/// Apply a to a column vector v (given as a flat vector).
template <class F>
std::vector<typename F::Element> mat_apply(const Matrix<F>& a, const std::vector<typename F::Element>& v) {
    require(v.size() == a.cols(), errc::shape_mismatch, "vector length");
    const F& k = a.field();
    std::vector<typename F::Element> out(a.rows(), k.zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] = k.add(out[i], k.mul(a(i, j), v[j]));
    return out;
}

template <class F>
bool is_upper_triangular(const Matrix<F>& a) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!a.field().is_zero(a(i, j))) return false;
    return true;
}

/// Member of B = invertible upper-triangular matrices.
template <class F>
bool in_borel(const Matrix<F>& a) {
    if (!is_upper_triangular(a)) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (a.field().is_zero(a(i, i))) return false;
    return true;
}

/// Member of U = unipotent upper-triangular matrices.
template <class F>
bool in_unipotent(const Matrix<F>& a) {
    if (!is_upper_triangular(a)) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (!a.field().is_one(a(i, i))) return false;
    return true;
}

/// Member of K^x * U: upper-triangular with constant nonzero diagonal.
template <class F>
bool in_scalar_unipotent(const Matrix<F>& a) {
    if (!is_upper_triangular(a) || a.rows() == 0) return false;
    const auto& t = a(0, 0);
    if (a.field().is_zero(t)) return false;
    for (std::size_t i = 1; i < a.rows(); ++i)
        if (!a.field().eq(a(i, i), t)) return false;
    return true;
}

template <class F>
Matrix<F> commutator(const Matrix<F>& a, const Matrix<F>& b) {
    return a * b * mat_inverse(a) * mat_inverse(b);
}

/// Uniform random matrix over F_p (all entries independent).
inline Matrix<PrimeField> random_matrix(const PrimeField& k, std::size_t rows, std::size_t cols,
                                        std::mt19937_64& rng) {
    Matrix<PrimeField> m(k, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = k.random(rng);
    return m;
}

/// Uniform random element of GL_n(F_p) by rejection on singular draws.
inline Matrix<PrimeField> random_gl(const PrimeField& k, std::size_t n, std::mt19937_64& rng) {
    for (;;) {
        Matrix<PrimeField> m = random_matrix(k, n, n, rng);
        if (is_invertible(m)) return m;
    }
}

/// Uniform random element of B(F_p): nonzero diagonal, free strict upper part.
inline Matrix<PrimeField> random_borel(const PrimeField& k, std::size_t n, std::mt19937_64& rng) {
    Matrix<PrimeField> m(k, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = k.random_nonzero(rng);
        for (std::size_t j = i + 1; j < n; ++j) m(i, j) = k.random(rng);
    }
    return m;
}

inline Matrix<PrimeField> random_unipotent(const PrimeField& k, std::size_t n, std::mt19937_64& rng) {
    Matrix<PrimeField> m = Matrix<PrimeField>::identity(k, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m(i, j) = k.random(rng);
    return m;
}

}  // namespace charvar
