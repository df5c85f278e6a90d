#pragma once

#include <cstddef>
#include <vector>

#include "charvar/matrix.hpp"

namespace charvar {

/// Linear subspace of F^n, stored as a reduced row-echelon basis with the
/// pivot columns strictly increasing and no zero rows.  The RREF is a
/// canonical form, so two Subspace values are equal as data exactly when they
/// are equal as subspaces.
template <class F>
class Subspace {
  public:
    using Element = typename F::Element;

    /// The zero subspace of F^n.
    Subspace(const F& field, std::size_t ambient_dim)
        : ambient_(ambient_dim), basis_(field, 0, ambient_dim) {}

    /// Row span of the given matrix, canonicalized.
    static Subspace from_rows(const Matrix<F>& rows) {
        Matrix<F> m = rows;
        auto pivots = rref_in_place(m);
        Matrix<F> basis(m.field(), pivots.size(), m.cols());
        for (std::size_t i = 0; i < pivots.size(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) basis(i, j) = m(i, j);
        return Subspace(rows.cols(), std::move(basis));
    }

    static Subspace full(const F& field, std::size_t n) {
        return Subspace(n, Matrix<F>::identity(field, n));
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix<F>& basis() const { return basis_; }
    const F& field() const { return basis_.field(); }

    /// Membership: v reduces to zero against the echelon basis.
    bool contains(const std::vector<Element>& v) const {
        require(v.size() == ambient_, errc::shape_mismatch, "vector length");
        const F& k = field();
        std::vector<Element> w = v;
        for (std::size_t r = 0; r < basis_.rows(); ++r) {
            std::size_t piv = pivot_col(r);
            if (!k.is_zero(w[piv])) {
                auto f = w[piv];
                for (std::size_t j = 0; j < ambient_; ++j)
                    w[j] = k.sub(w[j], k.mul(f, basis_(r, j)));
            }
        }
        for (const auto& x : w)
            if (!k.is_zero(x)) return false;
        return true;
    }

    bool contains(const Subspace& other) const {
        for (std::size_t r = 0; r < other.basis_.rows(); ++r)
            if (!contains(other.basis_.row(r))) return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    std::string to_string() const { return basis_.to_string(); }

  private:
    Subspace(std::size_t ambient, Matrix<F> basis) : ambient_(ambient), basis_(std::move(basis)) {}

    std::size_t pivot_col(std::size_t r) const {
        const F& k = field();
        for (std::size_t j = 0; j < ambient_; ++j)
            if (!k.is_zero(basis_(r, j))) return j;
        return ambient_;
    }

    std::size_t ambient_;
    Matrix<F> basis_;
};

namespace detail {

template <class F>
void check_same_ambient(const Subspace<F>& u, const Subspace<F>& v) {
    require(u.field().tag() == v.field().tag(), errc::field_mismatch, "subspace fields differ");
    require(u.ambient_dim() == v.ambient_dim(), errc::shape_mismatch,
            "subspaces of different ambient spaces");
}

}  // namespace detail

template <class F>
Subspace<F> sub_sum(const Subspace<F>& u, const Subspace<F>& v) {
    detail::check_same_ambient(u, v);
    Matrix<F> stack(u.field(), u.dim() + v.dim(), u.ambient_dim());
    for (std::size_t i = 0; i < u.dim(); ++i) stack.set_row(i, u.basis().row(i));
    for (std::size_t i = 0; i < v.dim(); ++i) stack.set_row(u.dim() + i, v.basis().row(i));
    return Subspace<F>::from_rows(stack);
}

/// Zassenhaus: row-reduce [U U; V 0].  Rows with zero left half carry an
/// intersection basis in their right half.
template <class F>
Subspace<F> sub_intersect(const Subspace<F>& u, const Subspace<F>& v) {
    detail::check_same_ambient(u, v);
    const F& k = u.field();
    std::size_t n = u.ambient_dim();
    Matrix<F> work(k, u.dim() + v.dim(), 2 * n);
    for (std::size_t i = 0; i < u.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            work(i, j) = u.basis()(i, j);
            work(i, n + j) = u.basis()(i, j);
        }
    for (std::size_t i = 0; i < v.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) work(u.dim() + i, j) = v.basis()(i, j);
    rref_in_place(work);
    std::vector<std::vector<typename F::Element>> rows;
    for (std::size_t i = 0; i < work.rows(); ++i) {
        bool left_zero = true;
        for (std::size_t j = 0; j < n && left_zero; ++j)
            if (!k.is_zero(work(i, j))) left_zero = false;
        if (!left_zero) continue;
        bool right_zero = true;
        std::vector<typename F::Element> r(n, k.zero());
        for (std::size_t j = 0; j < n; ++j) {
            r[j] = work(i, n + j);
            if (!k.is_zero(r[j])) right_zero = false;
        }
        if (!right_zero) rows.push_back(std::move(r));
    }
    Matrix<F> m(k, rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return Subspace<F>::from_rows(m);
}

/// Right kernel of a as a row-reduced subspace of F^cols.
template <class F>
Subspace<F> kernel(const Matrix<F>& a) {
    const F& k = a.field();
    Matrix<F> m = a;
    auto pivots = rref_in_place(m);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<typename F::Element>> rows;
    for (std::size_t free_col = 0; free_col < a.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<typename F::Element> v(a.cols(), k.zero());
        v[free_col] = k.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = k.neg(m(r, free_col));
        rows.push_back(std::move(v));
    }
    Matrix<F> basis(k, rows.size(), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) basis.set_row(i, rows[i]);
    return Subspace<F>::from_rows(basis);
}

/// Image { g v : v in s } of a subspace under a linear map (vectors are
/// columns, subspace bases are rows, hence the transpose dance).
template <class F>
Subspace<F> image(const Matrix<F>& g, const Subspace<F>& s) {
    require(g.cols() == s.ambient_dim(), errc::shape_mismatch, "map domain vs ambient space");
    Matrix<F> moved = s.basis() * transpose(g);
    return Subspace<F>::from_rows(moved);
}

}  // namespace charvar
