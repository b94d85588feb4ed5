#ifndef DAGPH_LINALG_HPP
#define DAGPH_LINALG_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dagph/matrix.hpp"

namespace dagph {

template <class F>
struct RrefResult {
    Matrix<F> mat;            // reduced row-echelon form
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

// Gauss-Jordan to reduced row-echelon form.  Row span is preserved.
template <class F>
RrefResult<F> rref(Matrix<F> m) {
    const F& f = m.field;
    std::size_t piv_row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < m.cols && piv_row < m.rows; ++col) {
        std::size_t sel = piv_row;
        while (sel < m.rows && f.is_zero(m.at(sel, col))) ++sel;
        if (sel == m.rows) continue;
        if (sel != piv_row)
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(sel, c), m.at(piv_row, c));
        auto inv = f.inv(m.at(piv_row, col));
        for (std::size_t c = col; c < m.cols; ++c) m.at(piv_row, c) = f.mul(m.at(piv_row, c), inv);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == piv_row || f.is_zero(m.at(r, col))) continue;
            auto factor = m.at(r, col);
            for (std::size_t c = col; c < m.cols; ++c)
                m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(piv_row, c)));
        }
        pivots.push_back(col);
        ++piv_row;
    }
    return {std::move(m), pivots.size(), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    return rref(m).rank;
}

// Basis of {x : M x = 0}, one kernel vector per row, in canonical (rref) form.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
    const F& f = m.field;
    auto r = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : r.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<typename F::Elem>> rows;
    for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<typename F::Elem> v(m.cols, f.zero());
        v[free_col] = f.one();
        for (std::size_t i = 0; i < r.rank; ++i)
            v[r.pivot_cols[i]] = f.neg(r.mat.at(i, free_col));
        rows.push_back(std::move(v));
    }
    auto basis = Matrix<F>::from_rows(rows, m.cols, f);
    return rref(basis).mat;  // canonicalize
}

// Rows spanning the column space of m, canonical form.
template <class F>
Matrix<F> column_space_rows(const Matrix<F>& m) {
    auto r = rref(m.transposed());
    Matrix<F> out(r.rank, m.rows, m.field);
    for (std::size_t i = 0; i < r.rank; ++i)
        for (std::size_t c = 0; c < m.rows; ++c) out.at(i, c) = r.mat.at(i, c);
    return out;
}

// A linear subspace of F^ambient.  Basis rows are kept in reduced
// row-echelon form with no zero rows, so equal subspaces compare equal.
template <class F>
struct Subspace {
    std::size_t ambient = 0;
    Matrix<F> basis;  // dim() rows, ambient columns

    static Subspace zero(std::size_t ambient, const F& f) {
        Subspace s;
        s.ambient = ambient;
        s.basis = Matrix<F>(0, ambient, f);
        return s;
    }

    static Subspace full(std::size_t ambient, const F& f) {
        Subspace s;
        s.ambient = ambient;
        s.basis = Matrix<F>::identity(ambient, f);
        return s;
    }

    // Span of the given rows.
    static Subspace span_rows(const Matrix<F>& rows) {
        auto r = rref(rows);
        Subspace s;
        s.ambient = rows.cols;
        s.basis = Matrix<F>(r.rank, rows.cols, rows.field);
        for (std::size_t i = 0; i < r.rank; ++i)
            for (std::size_t c = 0; c < rows.cols; ++c) s.basis.at(i, c) = r.mat.at(i, c);
        return s;
    }

    static Subspace span_cols(const Matrix<F>& cols) { return span_rows(cols.transposed()); }

    std::size_t dim() const { return basis.rows; }
    const F& field() const { return basis.field; }

    bool operator==(const Subspace& o) const { return ambient == o.ambient && basis == o.basis; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    bool contains_vector(const std::vector<typename F::Elem>& v) const {
        const F& f = basis.field;
        auto w = v;
        // reduce against rref basis rows
        for (std::size_t i = 0; i < basis.rows; ++i) {
            std::size_t piv = 0;
            while (piv < ambient && f.is_zero(basis.at(i, piv))) ++piv;
            if (piv == ambient) continue;
            if (f.is_zero(w[piv])) continue;
            auto factor = w[piv];  // basis pivot is 1
            for (std::size_t c = piv; c < ambient; ++c)
                w[c] = f.sub(w[c], f.mul(factor, basis.at(i, c)));
        }
        for (auto& e : w)
            if (!f.is_zero(e)) return false;
        return true;
    }

    bool contains(const Subspace& o) const {
        for (std::size_t i = 0; i < o.basis.rows; ++i)
            if (!contains_vector(o.basis.row(i))) return false;
        return true;
    }
};

template <class F>
Subspace<F> subspace_sum(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient != b.ambient) throw std::invalid_argument("subspace_sum: ambient dimension mismatch");
    const F& f = a.basis.field;
    Matrix<F> stacked(a.basis.rows + b.basis.rows, a.ambient, f);
    for (std::size_t r = 0; r < a.basis.rows; ++r)
        for (std::size_t c = 0; c < a.ambient; ++c) stacked.at(r, c) = a.basis.at(r, c);
    for (std::size_t r = 0; r < b.basis.rows; ++r)
        for (std::size_t c = 0; c < a.ambient; ++c) stacked.at(a.basis.rows + r, c) = b.basis.at(r, c);
    return Subspace<F>::span_rows(stacked);
}

// Intersection via the stacked system (alpha beta) (M; N)^T = 0: solutions
// alpha give spanning vectors alpha * M of the intersection.
template <class F>
Subspace<F> subspace_intersect(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient != b.ambient)
        throw std::invalid_argument("subspace_intersect: ambient dimension mismatch");
    const F& f = a.basis.field;
    const std::size_t ka = a.basis.rows, kb = b.basis.rows;
    if (ka == 0 || kb == 0) return Subspace<F>::zero(a.ambient, f);
    // Columns of the system are the coefficients (alpha, beta); rows are the
    // ambient coordinates of alpha*M - beta*N = 0.
    Matrix<F> sys(a.ambient, ka + kb, f);
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t c = 0; c < a.ambient; ++c) sys.at(c, i) = a.basis.at(i, c);
    for (std::size_t i = 0; i < kb; ++i)
        for (std::size_t c = 0; c < a.ambient; ++c) sys.at(c, ka + i) = f.neg(b.basis.at(i, c));
    auto null = kernel_basis(sys);  // rows: (alpha, beta)
    Matrix<F> span(null.rows, a.ambient, f);
    for (std::size_t r = 0; r < null.rows; ++r)
        for (std::size_t c = 0; c < a.ambient; ++c) {
            auto acc = f.zero();
            for (std::size_t i = 0; i < ka; ++i)
                acc = f.add(acc, f.mul(null.at(r, i), a.basis.at(i, c)));
            span.at(r, c) = acc;
        }
    return Subspace<F>::span_rows(span);
}

template <class F>
typename F::Elem dot(const F& f, const std::vector<typename F::Elem>& a,
                     const std::vector<typename F::Elem>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    auto acc = f.zero();
    for (std::size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
    return acc;
}

namespace detail {
// Scale a rational vector to a primitive integer vector.  Keeps spans and
// orthogonality relations while limiting coefficient growth.
inline void normalize_primitive(std::vector<Rational>& v) {
    BigInt lcm_den = 1, gcd_num = 0;
    for (const auto& e : v)
        if (e != 0) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(e));
    for (const auto& e : v)
        if (e != 0) gcd_num = boost::multiprecision::gcd(gcd_num, numerator(e) * (lcm_den / denominator(e)));
    if (gcd_num == 0) return;
    Rational scale(lcm_den, gcd_num);
    if (scale < 0) scale = -scale;
    for (auto& e : v) e *= scale;
}
}  // namespace detail

// Gram-Schmidt without normalization: output columns are pairwise orthogonal
// and every prefix span equals the corresponding input prefix span.  Columns
// that become zero (linear dependence) are dropped; their input indices are
// reported.  Rational backend only.
template <class F>
std::pair<Matrix<F>, std::vector<std::size_t>> orthogonalize(const Matrix<F>& m) {
    if constexpr (!F::has_inner_product) {
        throw UnsupportedBackend("orthogonalize requires the rational backend");
    } else {
        const F& f = m.field;
        std::vector<std::vector<typename F::Elem>> kept;
        std::vector<std::size_t> dropped;
        for (std::size_t c = 0; c < m.cols; ++c) {
            auto v = m.col(c);
            for (const auto& b : kept) {
                auto coef = f.div(dot(f, v, b), dot(f, b, b));
                for (std::size_t i = 0; i < v.size(); ++i)
                    v[i] = f.sub(v[i], f.mul(coef, b[i]));
            }
            bool zero = true;
            for (const auto& e : v)
                if (!f.is_zero(e)) {
                    zero = false;
                    break;
                }
            if (zero) {
                dropped.push_back(c);
            } else {
                detail::normalize_primitive(v);
                kept.push_back(std::move(v));
            }
        }
        return {Matrix<F>::from_cols(kept, m.rows, f), dropped};
    }
}

// v minus its projection onto the span of the (pairwise orthogonal) basis
// columns.  The result is orthogonal to every basis column.
template <class F>
std::vector<typename F::Elem> project_complement(const F& f,
                                                 std::vector<typename F::Elem> v,
                                                 const Matrix<F>& basis_cols) {
    if constexpr (!F::has_inner_product) {
        throw UnsupportedBackend("project_complement requires the rational backend");
    } else {
        for (std::size_t c = 0; c < basis_cols.cols; ++c) {
            auto b = basis_cols.col(c);
            auto bb = dot(f, b, b);
            if (f.is_zero(bb)) throw std::invalid_argument("zero basis column");
            auto coef = f.div(dot(f, v, b), bb);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.sub(v[i], f.mul(coef, b[i]));
        }
        return v;
    }
}

// rref with a recorded transform: returns (R, T, rank, pivots) with R = T * A.
template <class F>
struct FactoredRows {
    Matrix<F> reduced;    // rref of input rows
    Matrix<F> transform;  // reduced = transform * input
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

template <class F>
FactoredRows<F> rref_with_transform(const Matrix<F>& a) {
    const F& f = a.field;
    Matrix<F> aug(a.rows, a.cols + a.rows, f);
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t c = 0; c < a.cols; ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols + r) = f.one();
    }
    // eliminate only on the first a.cols columns
    std::size_t piv_row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < a.cols && piv_row < a.rows; ++col) {
        std::size_t sel = piv_row;
        while (sel < a.rows && f.is_zero(aug.at(sel, col))) ++sel;
        if (sel == a.rows) continue;
        if (sel != piv_row)
            for (std::size_t c = 0; c < aug.cols; ++c) std::swap(aug.at(sel, c), aug.at(piv_row, c));
        auto inv = f.inv(aug.at(piv_row, col));
        for (std::size_t c = 0; c < aug.cols; ++c) aug.at(piv_row, c) = f.mul(aug.at(piv_row, c), inv);
        for (std::size_t r = 0; r < a.rows; ++r) {
            if (r == piv_row || f.is_zero(aug.at(r, col))) continue;
            auto factor = aug.at(r, col);
            for (std::size_t c = 0; c < aug.cols; ++c)
                aug.at(r, c) = f.sub(aug.at(r, c), f.mul(factor, aug.at(piv_row, c)));
        }
        pivots.push_back(col);
        ++piv_row;
    }
    FactoredRows<F> out;
    out.rank = pivots.size();
    out.pivot_cols = pivots;
    out.reduced = Matrix<F>(a.rows, a.cols, f);
    out.transform = Matrix<F>(a.rows, a.rows, f);
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t c = 0; c < a.cols; ++c) out.reduced.at(r, c) = aug.at(r, c);
        for (std::size_t c = 0; c < a.rows; ++c) out.transform.at(r, c) = aug.at(r, a.cols + c);
    }
    return out;
}

// Express v as a combination of the input rows of a factored matrix.
// Returns the coefficient vector (length = number of input rows), or
// nullopt if v is outside the row span.
template <class F>
std::optional<std::vector<typename F::Elem>> solve_in_rows(const FactoredRows<F>& fac,
                                                           const std::vector<typename F::Elem>& v) {
    const F& f = fac.reduced.field;
    auto w = v;
    std::vector<typename F::Elem> lambda(fac.reduced.rows, f.zero());
    for (std::size_t i = 0; i < fac.rank; ++i) {
        std::size_t piv = fac.pivot_cols[i];
        if (f.is_zero(w[piv])) continue;
        auto factor = w[piv];
        lambda[i] = factor;
        for (std::size_t c = 0; c < fac.reduced.cols; ++c)
            w[c] = f.sub(w[c], f.mul(factor, fac.reduced.at(i, c)));
    }
    for (const auto& e : w)
        if (!f.is_zero(e)) return std::nullopt;
    // coefficients in terms of the original rows: lambda * transform
    std::vector<typename F::Elem> coeffs(fac.transform.cols, f.zero());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (f.is_zero(lambda[i])) continue;
        for (std::size_t c = 0; c < fac.transform.cols; ++c)
            coeffs[c] = f.add(coeffs[c], f.mul(lambda[i], fac.transform.at(i, c)));
    }
    return coeffs;
}

}  // namespace dagph

#endif
