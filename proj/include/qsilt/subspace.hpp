#pragma once

#include <vector>

#include "qsilt/matrix.hpp"

namespace qsilt {

/// Linear subspace of k^n, kept as a canonical reduced-echelon row basis so
/// that equality of subspaces is equality of representations.
class Subspace {
public:
    Subspace() : ambient_(0) {}
    explicit Subspace(size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

    static Subspace span_rows(const Matrix& rows) {
        Subspace s(rows.cols());
        std::vector<size_t> piv;
        Matrix r = rows.rref(&piv);
        Matrix b(piv.size(), rows.cols());
        for (size_t i = 0; i < piv.size(); ++i)
            for (size_t j = 0; j < rows.cols(); ++j) b.at(i, j) = r.at(i, j);
        s.basis_ = b;
        s.pivots_ = piv;
        return s;
    }

    static Subspace span_cols(const Matrix& cols) { return span_rows(cols.transpose()); }

    static Subspace full(size_t ambient) { return span_rows(Matrix::identity(ambient)); }

    size_t ambient() const { return ambient_; }
    size_t dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }
    const std::vector<size_t>& pivots() const { return pivots_; }

    /// Basis vectors as the columns of an (ambient x dim) inclusion matrix.
    Matrix inclusion() const { return basis_.transpose(); }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    Subspace sum(const Subspace& o) const {
        check_ambient(o);
        return span_rows(vstack(basis_, o.basis_));
    }

    Subspace intersect(const Subspace& o) const {
        check_ambient(o);
        if (dim() == 0 || o.dim() == 0) return Subspace(ambient_);
        // x = basisᵀ·α = o.basisᵀ·β ; solve for the nullspace of [basisᵀ | -o.basisᵀ].
        Matrix m = hstack(basis_.transpose(), o.basis_.transpose().scaled(Rat(-1)));
        Subspace ns = nullspace_of(m);
        Matrix vecs(ns.dim(), ambient_);
        for (size_t i = 0; i < ns.dim(); ++i) {
            // alpha part of the i-th kernel vector, mapped back into ambient space
            for (size_t k = 0; k < dim(); ++k) {
                const Rat& c = ns.basis().at(i, k);
                if (c.is_zero()) continue;
                for (size_t j = 0; j < ambient_; ++j) vecs.at(i, j) += c * basis_.at(k, j);
            }
        }
        return span_rows(vecs);
    }

    /// Row vector membership.
    bool contains(const Matrix& vec) const {
        Matrix r = reduce(vec);
        return r.is_zero();
    }

    bool contains(const Subspace& o) const {
        for (size_t i = 0; i < o.dim(); ++i)
            if (!contains(o.basis_.row(i))) return false;
        return true;
    }

    /// Residue of a row vector modulo this subspace (zero iff member).
    Matrix reduce(const Matrix& vec) const {
        assert(vec.rows() == 1 && vec.cols() == ambient_);
        Matrix r = vec;
        for (size_t i = 0; i < dim(); ++i) {
            Rat f = r.at(0, pivots_[i]);
            if (f.is_zero()) continue;
            for (size_t j = 0; j < ambient_; ++j) r.at(0, j) -= f * basis_.at(i, j);
        }
        return r;
    }

    /// Coordinates of a member row vector in the canonical basis.
    std::vector<Rat> coords_of(const Matrix& vec) const {
        std::vector<Rat> c(dim());
        for (size_t i = 0; i < dim(); ++i) c[i] = vec.at(0, pivots_[i]);
        return c;
    }

    struct Quotient {
        Matrix projection;  // (ambient - dim) x ambient, kernel = the subspace
        Matrix section;     // ambient x (ambient - dim), projection*section = id
    };

    /// Projection onto the complement coordinates (the non-pivot columns).
    Quotient quotient() const {
        std::vector<bool> is_piv(ambient_, false);
        for (size_t p : pivots_) is_piv[p] = true;
        size_t q = ambient_ - dim();
        Matrix proj(q, ambient_), sect(ambient_, q);
        size_t rI = 0;
        for (size_t j = 0; j < ambient_; ++j) {
            if (is_piv[j]) continue;
            proj.at(rI, j) = Rat(1);
            for (size_t i = 0; i < dim(); ++i) proj.at(rI, pivots_[i]) = -basis_.at(i, j);
            sect.at(j, rI) = Rat(1);
            ++rI;
        }
        return {proj, sect};
    }

private:
    static Subspace nullspace_of(const Matrix& m);
    void check_ambient(const Subspace& o) const {
        if (ambient_ != o.ambient_) throw std::invalid_argument("Subspace: ambient mismatch");
    }
    size_t ambient_;
    Matrix basis_;
    std::vector<size_t> pivots_;
};

/// Canonical basis of {v : m·v = 0}.
inline Subspace nullspace(const Matrix& m) {
    std::vector<size_t> piv;
    Matrix r = m.rref(&piv);
    std::vector<bool> is_piv(m.cols(), false);
    for (size_t p : piv) is_piv[p] = true;
    size_t nfree = m.cols() - piv.size();
    Matrix vecs(nfree, m.cols());
    size_t row = 0;
    for (size_t f = 0; f < m.cols(); ++f) {
        if (is_piv[f]) continue;
        vecs.at(row, f) = Rat(1);
        for (size_t i = 0; i < piv.size(); ++i) vecs.at(row, piv[i]) = -r.at(i, f);
        ++row;
    }
    return Subspace::span_rows(vecs);
}

inline Subspace Subspace::nullspace_of(const Matrix& m) { return qsilt::nullspace(m); }

/// Column space as a subspace of k^rows.
inline Subspace column_space(const Matrix& m) { return Subspace::span_cols(m); }

}  // namespace qsilt
