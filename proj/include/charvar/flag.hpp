#pragma once

#include <numeric>

#include "charvar/subspace.hpp"

namespace charvar {

/// Relative position of two complete flags: a permutation matrix in W, kept
/// as the image list w with w[i] = j meaning entry (i, j) = 1 (1-based).
struct RelativePosition {
    std::vector<std::size_t> image;

    std::size_t size() const { return image.size(); }

    static RelativePosition identity(std::size_t n) {
        RelativePosition r;
        r.image.resize(n);
        std::iota(r.image.begin(), r.image.end(), std::size_t{1});
        return r;
    }

    static RelativePosition skew_identity(std::size_t n) {
        RelativePosition r;
        r.image.resize(n);
        for (std::size_t i = 0; i < n; ++i) r.image[i] = n - i;
        return r;
    }

    bool is_permutation() const {
        std::vector<bool> seen(image.size(), false);
        for (auto j : image) {
            if (j < 1 || j > image.size() || seen[j - 1]) return false;
            seen[j - 1] = true;
        }
        return true;
    }

    RelativePosition transposed() const {
        RelativePosition r;
        r.image.resize(image.size());
        for (std::size_t i = 0; i < image.size(); ++i) r.image[image[i] - 1] = i + 1;
        return r;
    }

    friend bool operator==(const RelativePosition&, const RelativePosition&) = default;
};

/// Complete flag F_1 c F_2 c ... c F_n in F^n.  Steps are canonical
/// subspaces (RREF bases), so flag equality is structural equality.
template <class F>
class Flag {
  public:
    using Element = typename F::Element;

    explicit Flag(std::vector<Subspace<F>> steps) : steps_(std::move(steps)) { validate(); }

    /// Flag spanned by the leading columns of an invertible matrix:
    /// F_i = <column 1, ..., column i>.
    static Flag from_basis(const Matrix<F>& basis) {
        require(basis.rows() == basis.cols(), errc::shape_mismatch, "basis must be square");
        require(is_invertible(basis), errc::singular, "flag basis must be invertible");
        const F& k = basis.field();
        std::size_t n = basis.rows();
        std::vector<Subspace<F>> steps;
        for (std::size_t i = 1; i <= n; ++i) {
            Matrix<F> rows(k, i, n);
            for (std::size_t r = 0; r < i; ++r)
                for (std::size_t c = 0; c < n; ++c) rows(r, c) = basis(c, r);
            steps.push_back(Subspace<F>::from_rows(rows));
        }
        return Flag(std::move(steps));
    }

    std::size_t ambient_dim() const { return steps_.back().ambient_dim(); }
    std::size_t length() const { return steps_.size(); }
    const Subspace<F>& step(std::size_t i) const {  // 1-based
        require(i >= 1 && i <= steps_.size(), errc::index_out_of_range, "flag step");
        return steps_[i - 1];
    }
    Subspace<F> zero_step() const { return Subspace<F>(field(), ambient_dim()); }
    const std::vector<Subspace<F>>& steps() const { return steps_; }
    const F& field() const { return steps_.front().field(); }

    friend bool operator==(const Flag& a, const Flag& b) { return a.steps_ == b.steps_; }
    friend bool operator!=(const Flag& a, const Flag& b) { return !(a == b); }

  private:
    void validate() const {
        require(!steps_.empty(), errc::invalid_argument, "flag needs at least one step");
        std::size_t n = steps_.back().ambient_dim();
        require(steps_.size() == n, errc::invalid_argument, "complete flag needs n steps");
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            require(steps_[i].ambient_dim() == n, errc::shape_mismatch, "mixed ambient dims");
            require(steps_[i].dim() == i + 1, errc::invalid_argument,
                    "step " + std::to_string(i + 1) + " has wrong dimension");
            if (i > 0)
                require(steps_[i].contains(steps_[i - 1]), errc::invalid_argument,
                        "flag steps not nested");
        }
    }

    std::vector<Subspace<F>> steps_;
};

template <class F>
Flag<F> standard_flag(const F& field, std::size_t n) {
    require(n >= 1, errc::invalid_argument, "ambient dimension must be positive");
    return Flag<F>::from_basis(Matrix<F>::identity(field, n));
}

/// pos(F, F')_{ij} = dim( F_i n F'_j / (F_i n F'_{j-1} + F_{i-1} n F'_j) ),
/// evaluated literally with subspace intersections and sums.
template <class F>
RelativePosition relative_position(const Flag<F>& f, const Flag<F>& f2) {
    require(f.ambient_dim() == f2.ambient_dim(), errc::shape_mismatch,
            "flags in different ambient spaces");
    require(f.field().tag() == f2.field().tag(), errc::field_mismatch, "flag fields differ");
    std::size_t n = f.ambient_dim();
    RelativePosition out;
    out.image.assign(n, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            auto top = sub_intersect(f.step(i), f2.step(j));
            auto a = i > 1 ? sub_intersect(f.step(i - 1), f2.step(j))
                           : Subspace<F>(f.field(), n);
            auto b = j > 1 ? sub_intersect(f.step(i), f2.step(j - 1))
                           : Subspace<F>(f.field(), n);
            std::size_t denom = sub_sum(a, b).dim();
            std::size_t entry = top.dim() - denom;
            if (entry == 1) {
                require(out.image[i - 1] == 0, errc::invalid_argument,
                        "relative position is not a permutation");
                out.image[i - 1] = j;
            }
        }
    }
    require(out.is_permutation(), errc::invalid_argument, "relative position is not a permutation");
    return out;
}

/// Transports a flag by an invertible matrix: steps g . F_i.
template <class F>
Flag<F> transport_flag(const Matrix<F>& g, const Flag<F>& f) {
    require(g.rows() == g.cols() && g.rows() == f.ambient_dim(), errc::shape_mismatch,
            "transport dimension");
    require(is_invertible(g), errc::singular, "transport by a singular matrix");
    std::vector<Subspace<F>> steps;
    steps.reserve(f.length());
    for (const auto& s : f.steps()) steps.push_back(image(g, s));
    return Flag<F>(std::move(steps));
}

/// phi(F_i) c F'_i for all i.
template <class F>
bool is_filtered_map(const Matrix<F>& phi, const Flag<F>& f, const Flag<F>& f2) {
    require(phi.rows() == f2.ambient_dim() && phi.cols() == f.ambient_dim(), errc::shape_mismatch,
            "map shape");
    for (std::size_t i = 1; i <= f.length(); ++i)
        if (!f2.step(i).contains(image(phi, f.step(i)))) return false;
    return true;
}

/// Ordered basis e_1..e_n as matrix columns; adapted to the flag
/// F_i = <e_1..e_i> it spans.
template <class F>
class Frame {
  public:
    explicit Frame(Matrix<F> basis) : basis_(std::move(basis)) {
        require(basis_.rows() == basis_.cols(), errc::shape_mismatch, "frame must be square");
        require(is_invertible(basis_), errc::singular, "frame must be invertible");
    }

    static Frame standard(const F& field, std::size_t n) {
        return Frame(Matrix<F>::identity(field, n));
    }

    const Matrix<F>& basis() const { return basis_; }
    std::size_t dim() const { return basis_.rows(); }

    Flag<F> flag() const { return Flag<F>::from_basis(basis_); }

    friend bool operator==(const Frame& a, const Frame& b) { return a.basis_ == b.basis_; }

  private:
    Matrix<F> basis_;
};

/// Frame up to one overall nonzero scalar.
template <class F>
struct ProjectiveFrame {
    Frame<F> representative;

    friend bool equivalent(const ProjectiveFrame& a, const ProjectiveFrame& b) {
        const auto& x = a.representative.basis();
        const auto& y = b.representative.basis();
        if (x.rows() != y.rows()) return false;
        const F& k = x.field();
        typename F::Element scale = k.zero();
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < x.cols(); ++j) {
                if (k.is_zero(y(i, j)) != k.is_zero(x(i, j))) return false;
                if (k.is_zero(x(i, j))) continue;
                auto s = k.div(x(i, j), y(i, j));
                if (k.is_zero(scale))
                    scale = s;
                else if (!k.eq(scale, s))
                    return false;
            }
        return !k.is_zero(scale);
    }
};

namespace detail {

template <class F>
Matrix<F> frame_matrix_of(const Matrix<F>& phi, const Frame<F>& from, const Frame<F>& to) {
    require(is_invertible(phi), errc::singular, "map must be invertible");
    return mat_inverse(to.basis()) * phi * from.basis();
}

}  // namespace detail

/// beta'^-1 . phi . beta is unipotent upper-triangular.
template <class F>
bool is_unipotent_iso(const Matrix<F>& phi, const Frame<F>& beta, const Frame<F>& beta2) {
    return in_unipotent(detail::frame_matrix_of(phi, beta, beta2));
}

/// beta = beta' o phi, i.e. the matrix of phi in the two frames is the identity.
template <class F>
bool is_strict_iso(const Matrix<F>& phi, const Frame<F>& beta, const Frame<F>& beta2) {
    auto m = detail::frame_matrix_of(phi, beta, beta2);
    return m == Matrix<F>::identity(m.field(), m.rows());
}

/// beta'^-1 . phi . beta lies in K^x U (scalar times unipotent).
template <class F>
bool is_projectively_unipotent(const Matrix<F>& phi, const Frame<F>& beta, const Frame<F>& beta2) {
    return in_scalar_unipotent(detail::frame_matrix_of(phi, beta, beta2));
}

/// Random complete flag over F_p, from a uniform random invertible basis.
inline Flag<PrimeField> random_flag(const PrimeField& k, std::size_t n, std::mt19937_64& rng) {
    return Flag<PrimeField>::from_basis(random_gl(k, n, rng));
}

}  // namespace charvar
