#ifndef DAGPH_MATRIX_HPP
#define DAGPH_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dagph/field.hpp"

namespace dagph {

// Dense row-major matrix over a field backend.  The field instance is
// carried with the matrix so Z_p entries know their modulus.
template <class F>
struct Matrix {
    using Elem = typename F::Elem;

    std::size_t rows = 0;
    std::size_t cols = 0;
    F field;
    std::vector<Elem> entries;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, const F& f)
        : rows(r), cols(c), field(f), entries(r * c, f.zero()) {}

    Elem& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    const Elem& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

    bool operator==(const Matrix& o) const {
        if (rows != o.rows || cols != o.cols) return false;
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (!field.eq(entries[i], o.entries[i])) return false;
        return true;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    static Matrix identity(std::size_t n, const F& f) {
        Matrix m(n, n, f);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
        return m;
    }

    Matrix transposed() const {
        Matrix t(cols, rows, field);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    std::vector<Elem> row(std::size_t r) const {
        return std::vector<Elem>(entries.begin() + r * cols, entries.begin() + (r + 1) * cols);
    }
    std::vector<Elem> col(std::size_t c) const {
        std::vector<Elem> v(rows, field.zero());
        for (std::size_t r = 0; r < rows; ++r) v[r] = at(r, c);
        return v;
    }

    static Matrix from_rows(const std::vector<std::vector<Elem>>& rws, std::size_t ncols, const F& f) {
        Matrix m(rws.size(), ncols, f);
        for (std::size_t r = 0; r < rws.size(); ++r) {
            if (rws[r].size() != ncols) throw std::invalid_argument("row length mismatch");
            for (std::size_t c = 0; c < ncols; ++c) m.at(r, c) = rws[r][c];
        }
        return m;
    }

    static Matrix from_cols(const std::vector<std::vector<Elem>>& cls, std::size_t nrows, const F& f) {
        Matrix m(nrows, cls.size(), f);
        for (std::size_t c = 0; c < cls.size(); ++c) {
            if (cls[c].size() != nrows) throw std::invalid_argument("column length mismatch");
            for (std::size_t r = 0; r < nrows; ++r) m.at(r, c) = cls[c][r];
        }
        return m;
    }

    Matrix mul(const Matrix& o) const {
        if (cols != o.rows) throw std::invalid_argument("matrix product shape mismatch");
        Matrix out(rows, o.cols, field);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t k = 0; k < cols; ++k) {
                if (field.is_zero(at(r, k))) continue;
                for (std::size_t c = 0; c < o.cols; ++c)
                    out.at(r, c) = field.add(out.at(r, c), field.mul(at(r, k), o.at(k, c)));
            }
        return out;
    }

    bool is_zero() const {
        for (const auto& e : entries)
            if (!field.is_zero(e)) return false;
        return true;
    }
};

}  // namespace dagph

#endif
