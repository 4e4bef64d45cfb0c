#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "qsilt/rational.hpp"

namespace qsilt {

/// Dense matrix over exact rationals. Column vectors; a map V -> W is a
/// (dim W) x (dim V) matrix acting on the left.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t r, size_t c) : rows_(r), cols_(c), a_(r * c) {}

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = Rat(1);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Rat& at(size_t i, size_t j) {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }
    const Rat& at(size_t i, size_t j) const {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }

    bool is_zero() const {
        for (const Rat& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix operator+(const Matrix& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix: dimension mismatch in product");
        Matrix r(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const Rat& aik = at(i, k);
                if (aik.is_zero()) continue;
                for (size_t j = 0; j < o.cols_; ++j) {
                    const Rat& bkj = o.at(k, j);
                    if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }
    Matrix scaled(const Rat& c) const {
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Matrix row(size_t i) const {
        Matrix r(1, cols_);
        for (size_t j = 0; j < cols_; ++j) r.at(0, j) = at(i, j);
        return r;
    }
    Matrix col(size_t j) const {
        Matrix r(rows_, 1);
        for (size_t i = 0; i < rows_; ++i) r.at(i, 0) = at(i, j);
        return r;
    }

    /// Canonical reduced row echelon form; writes pivot columns if requested.
    Matrix rref(std::vector<size_t>* pivot_cols = nullptr) const;

    size_t rank() const;

    /// Some X with (*this) * X = target, or nullopt if inconsistent.
    std::optional<Matrix> solve_right(const Matrix& target) const;

    /// Some X with X * (*this) = target, or nullopt.
    std::optional<Matrix> solve_left(const Matrix& target) const {
        auto xt = transpose().solve_right(target.transpose());
        if (!xt) return std::nullopt;
        return xt->transpose();
    }

private:
    size_t rows_, cols_;
    std::vector<Rat> a_;
};

inline Matrix hstack(const Matrix& a, const Matrix& b) {
    assert(a.rows() == b.rows());
    Matrix r(a.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
        for (size_t j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.cols() || a.rows() == 0 || b.rows() == 0);
    size_t cols = a.rows() ? a.cols() : b.cols();
    Matrix r(a.rows() + b.rows(), cols);
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < cols; ++j) r.at(i, j) = a.at(i, j);
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < cols; ++j) r.at(a.rows() + i, j) = b.at(i, j);
    return r;
}

/// Block-diagonal stack.
inline Matrix dstack(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() + b.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) r.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return r;
}

namespace detail {

// Fraction-free forward elimination (Bareiss). Rows enter as integers; the
// previous pivot divides every 2x2 determinant update exactly. Keeps
// coefficient growth polynomial instead of the naive exponential blowup.
// Returns rank, fills pivot columns; the matrix ends in row echelon form.
inline size_t bareiss(std::vector<std::vector<mpz_class>>& a, std::vector<size_t>& pivot_cols) {
    pivot_cols.clear();
    if (a.empty()) return 0;
    const size_t rows = a.size(), cols = a[0].size();
    mpz_class prev = 1;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i)
            if (sgn(a[i][c]) != 0) { piv = i; break; }
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) {
                mpz_class t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = t;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        pivot_cols.push_back(c);
        ++r;
    }
    return r;
}

// Clears denominators row by row; preserves the row space.
inline std::vector<std::vector<mpz_class>> to_integer_rows(const Matrix& m) {
    std::vector<std::vector<mpz_class>> a(m.rows(), std::vector<mpz_class>(m.cols()));
    for (size_t i = 0; i < m.rows(); ++i) {
        mpz_class l = 1;
        for (size_t j = 0; j < m.cols(); ++j) l = lcm(l, m.at(i, j).den());
        for (size_t j = 0; j < m.cols(); ++j) {
            const Rat& x = m.at(i, j);
            a[i][j] = x.num() * (l / x.den());
        }
    }
    return a;
}

}  // namespace detail

inline size_t Matrix::rank() const {
    auto a = detail::to_integer_rows(*this);
    std::vector<size_t> piv;
    return detail::bareiss(a, piv);
}

inline Matrix Matrix::rref(std::vector<size_t>* pivot_cols) const {
    auto a = detail::to_integer_rows(*this);
    std::vector<size_t> piv;
    size_t rk = detail::bareiss(a, piv);
    // Back substitution over the rationals to reach the canonical form.
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < rk; ++i) {
        Rat p = Rat(a[i][piv[i]]).inv();
        for (size_t j = piv[i]; j < cols_; ++j) r.at(i, j) = Rat(a[i][j]) * p;
    }
    for (size_t i = rk; i-- > 0;) {
        for (size_t k = 0; k < i; ++k) {
            Rat f = r.at(k, piv[i]);
            if (f.is_zero()) continue;
            for (size_t j = piv[i]; j < cols_; ++j) r.at(k, j) -= f * r.at(i, j);
        }
    }
    if (pivot_cols) *pivot_cols = piv;
    return r;
}

inline std::optional<Matrix> Matrix::solve_right(const Matrix& target) const {
    if (target.rows() != rows_) throw std::invalid_argument("solve_right: row count mismatch");
    Matrix aug = hstack(*this, target);
    std::vector<size_t> piv;
    Matrix r = aug.rref(&piv);
    for (size_t c : piv)
        if (c >= cols_) return std::nullopt;
    Matrix x(cols_, target.cols());
    for (size_t i = 0; i < piv.size(); ++i)
        for (size_t t = 0; t < target.cols(); ++t) x.at(piv[i], t) = r.at(i, cols_ + t);
    return x;
}

}  // namespace qsilt
