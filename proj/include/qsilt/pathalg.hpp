#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qsilt/quiver.hpp"
#include "qsilt/subspace.hpp"

namespace qsilt {

struct NotFiniteDimensional : std::runtime_error {
    explicit NotFiniteDimensional(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

using SparseVec = std::map<size_t, Rat>;

inline void sparse_axpy(SparseVec& v, const Rat& c, const SparseVec& w) {
    for (const auto& [i, x] : w) {
        Rat& e = v[i];
        e += c * x;
        if (e.is_zero()) v.erase(i);
    }
}

/// Incremental row echelon over growing sparse coordinates. Pivot = smallest
/// index of each stored row; rows normalized to pivot coefficient 1.
class SparseEchelon {
public:
    // Reduces v in place so it has no entries at stored pivot indices.
    // Reduction against a fixed echelon is a linear projection.
    void reduce(SparseVec& v) const {
        auto it = v.begin();
        while (it != v.end()) {
            size_t i = it->first;
            auto rit = rows_.find(i);
            if (rit == rows_.end()) {
                ++it;
                continue;
            }
            Rat c = it->second;
            sparse_axpy(v, -c, rit->second);
            it = v.upper_bound(i);
        }
    }

    // Returns true if v was independent of the stored rows (and stores it).
    bool add(SparseVec v) {
        reduce(v);
        if (v.empty()) return false;
        Rat inv = v.begin()->second.inv();
        for (auto& [i, x] : v) x *= inv;
        size_t piv = v.begin()->first;
        rows_.emplace(piv, std::move(v));
        return true;
    }

    size_t rank() const { return rows_.size(); }

private:
    std::map<size_t, SparseVec> rows_;
};

/// Echelon that remembers how each stored row combines the inserted vectors,
/// so members can be expressed in terms of the original insertion tags.
class TaggedEchelon {
public:
    void add(SparseVec v, size_t tag) {
        SparseVec expr{{tag, Rat(1)}};
        auto it = v.begin();
        while (it != v.end()) {
            size_t i = it->first;
            auto rit = rows_.find(i);
            if (rit == rows_.end()) {
                ++it;
                continue;
            }
            Rat c = it->second;
            sparse_axpy(v, -c, rit->second.row);
            sparse_axpy(expr, -c, rit->second.expr);
            it = v.upper_bound(i);
        }
        if (v.empty()) throw std::logic_error("TaggedEchelon: dependent insertion");
        Rat inv = v.begin()->second.inv();
        for (auto& [i, x] : v) x *= inv;
        for (auto& [i, x] : expr) x *= inv;
        size_t piv = v.begin()->first;
        rows_.emplace(piv, Row{std::move(v), std::move(expr)});
    }

    // Expresses v (which must lie in the span) in the insertion tags.
    SparseVec express(SparseVec v) const {
        SparseVec out;
        auto it = v.begin();
        while (it != v.end()) {
            size_t i = it->first;
            auto rit = rows_.find(i);
            if (rit == rows_.end()) throw std::logic_error("TaggedEchelon: vector not in span");
            Rat c = it->second;
            sparse_axpy(v, -c, rit->second.row);
            sparse_axpy(out, c, rit->second.expr);
            it = v.upper_bound(i);
        }
        return out;
    }

private:
    struct Row {
        SparseVec row;
        SparseVec expr;
    };
    std::map<size_t, Row> rows_;
};

}  // namespace detail

/// A finite-dimensional path algebra kQ/I: basis of path residues (chosen
/// greedily degree by degree), dense structure constants, vertex idempotents.
class PathAlgebra {
public:
    struct BasisElem {
        std::vector<size_t> path;  // arrow indices; empty = trivial path at src
        size_t src, tgt;
        size_t degree() const { return path.size(); }
    };

    const AlgebraPresentation& presentation() const { return pres_; }
    size_t dim() const { return basis_.size(); }
    size_t num_vertices() const { return pres_.vertices.size(); }
    const std::vector<BasisElem>& basis() const { return basis_; }
    const BasisElem& basis_elem(size_t i) const { return basis_[i]; }

    /// Basis index of the idempotent e_v.
    size_t idempotent_index(size_t v) const { return v; }

    const Rat& sc(size_t x, size_t y, size_t z) const {
        return sc_[(x * basis_.size() + y) * basis_.size() + z];
    }

    std::vector<Rat> zero_elem() const { return std::vector<Rat>(dim()); }

    std::vector<Rat> unit() const {
        std::vector<Rat> u(dim());
        for (size_t v = 0; v < num_vertices(); ++v) u[v] = Rat(1);
        return u;
    }

    std::vector<Rat> mul(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
        std::vector<Rat> r(dim());
        for (size_t x = 0; x < dim(); ++x) {
            if (a[x].is_zero()) continue;
            for (size_t y = 0; y < dim(); ++y) {
                if (b[y].is_zero()) continue;
                Rat c = a[x] * b[y];
                for (size_t z = 0; z < dim(); ++z) {
                    const Rat& s = sc(x, y, z);
                    if (!s.is_zero()) r[z] += c * s;
                }
            }
        }
        return r;
    }

    /// Residue of an arbitrary composable arrow path in the chosen basis.
    std::vector<Rat> path_residue(const std::vector<size_t>& arrows) const {
        if (arrows.empty())
            throw std::invalid_argument("path_residue: use trivial_path_residue for length 0");
        for (size_t i = 0; i + 1 < arrows.size(); ++i)
            if (pres_.arrows[arrows[i]].tgt != pres_.arrows[arrows[i + 1]].src)
                throw std::invalid_argument("path_residue: path not composable");
        std::vector<Rat> out(dim());
        if (arrows.size() > stop_degree_) return out;
        size_t src = arrows.empty() ? 0 : pres_.arrows[arrows.front()].src;
        auto it = nf_.find(PathKey{src, arrows});
        if (it == nf_.end()) return out;  // beyond the enumerated range: in the ideal
        for (const auto& [j, c] : it->second) out[j] = c;
        return out;
    }

    std::vector<Rat> trivial_path_residue(size_t v) const {
        std::vector<Rat> out(dim());
        out[v] = Rat(1);
        return out;
    }

    std::string basis_label(size_t i) const {
        const BasisElem& b = basis_[i];
        if (b.path.empty()) return "e_" + pres_.vertices[b.src];
        return pres_.path_str(b.path);
    }

    friend std::shared_ptr<const PathAlgebra> build_algebra(const AlgebraPresentation& p,
                                                            size_t length_cap);

private:
    struct PathKey {
        size_t src;
        std::vector<size_t> arrows;
        friend auto operator<=>(const PathKey&, const PathKey&) = default;
    };

    AlgebraPresentation pres_;
    std::vector<BasisElem> basis_;
    std::vector<Rat> sc_;
    size_t stop_degree_ = 0;
    std::map<PathKey, std::vector<std::pair<size_t, Rat>>> nf_;
};

/// Builds the basis of kQ/I by spanning paths degree by degree and quotienting
/// by the two-sided ideal generated by the relations. Stops at the first
/// degree that contributes no new basis path; errors if length_cap is reached
/// with a nonzero contribution.
inline std::shared_ptr<const PathAlgebra> build_algebra(const AlgebraPresentation& p,
                                                        size_t length_cap = 64) {
    constexpr size_t kPathExplosionGuard = 200000;

    auto alg = std::make_shared<PathAlgebra>();
    alg->pres_ = p;
    const size_t nv = p.vertices.size();

    struct Pure {
        size_t src, tgt;
        std::vector<size_t> arrows;
    };
    std::vector<Pure> paths;                              // all enumerated pure paths, global index
    std::map<PathAlgebra::PathKey, size_t> path_index;    // key -> global index
    std::vector<std::vector<size_t>> by_degree;           // global indices per degree

    auto add_path = [&](Pure q) {
        size_t idx = paths.size();
        path_index[{q.src, q.arrows}] = idx;
        paths.push_back(std::move(q));
        return idx;
    };

    detail::SparseEchelon ideal_rows;   // generators u·r·v
    detail::SparseEchelon full_rows;    // generators + kept paths
    std::vector<size_t> kept;           // global path indices, selection order

    // degree 0: trivial paths, always independent
    by_degree.emplace_back();
    for (size_t v = 0; v < nv; ++v) {
        size_t idx = add_path({v, v, {}});
        by_degree[0].push_back(idx);
        full_rows.add({{idx, Rat(1)}});
        kept.push_back(idx);
    }

    size_t stop_degree = 0;
    for (size_t d = 1;; ++d) {
        if (d > length_cap)
            throw NotFiniteDimensional("degree cap " + std::to_string(length_cap) +
                                       " reached with nonzero contribution");
        // pure paths of degree d
        by_degree.emplace_back();
        for (size_t pi : by_degree[d - 1]) {
            size_t tgt = paths[pi].tgt;
            for (size_t ai = 0; ai < p.arrows.size(); ++ai) {
                if (p.arrows[ai].src != tgt) continue;
                Pure q{paths[pi].src, p.arrows[ai].tgt, paths[pi].arrows};
                q.arrows.push_back(ai);
                by_degree[d].push_back(add_path(std::move(q)));
            }
        }
        if (paths.size() > kPathExplosionGuard)
            throw NotFiniteDimensional("path enumeration exceeded " +
                                       std::to_string(kPathExplosionGuard) + " paths");

        // ideal generators whose longest term has total degree d
        for (const auto& rel : p.relations) {
            size_t maxlen = 0;
            for (const auto& t : rel.terms) maxlen = std::max(maxlen, t.path.size());
            if (maxlen > d) continue;
            size_t rsrc = p.path_src(rel.terms[0].path);
            size_t rtgt = p.path_tgt(rel.terms[0].path);
            for (size_t ud = 0; ud + maxlen <= d; ++ud) {
                size_t vd = d - maxlen - ud;
                for (size_t upi : by_degree[ud]) {
                    if (paths[upi].tgt != rsrc) continue;
                    for (size_t vpi : by_degree[vd]) {
                        if (paths[vpi].src != rtgt) continue;
                        detail::SparseVec gen;
                        for (const auto& t : rel.terms) {
                            std::vector<size_t> full = paths[upi].arrows;
                            full.insert(full.end(), t.path.begin(), t.path.end());
                            full.insert(full.end(), paths[vpi].arrows.begin(),
                                        paths[vpi].arrows.end());
                            size_t src = paths[upi].src;
                            auto it = path_index.find({src, full});
                            if (it == path_index.end())
                                throw std::logic_error("build_algebra: missing path index");
                            Rat& e = gen[it->second];
                            e += t.coeff;
                            if (e.is_zero()) gen.erase(it->second);
                        }
                        if (gen.empty()) continue;
                        detail::SparseVec g2 = gen;
                        ideal_rows.add(std::move(gen));
                        full_rows.add(std::move(g2));
                    }
                }
            }
        }

        // greedy basis pick: keep residues independent of ideal + earlier picks
        size_t picked = 0;
        for (size_t pi : by_degree[d]) {
            if (full_rows.add({{pi, Rat(1)}})) {
                kept.push_back(pi);
                ++picked;
            }
        }
        if (picked == 0) {
            stop_degree = d;
            break;
        }
        if (kept.size() > 128)
            throw std::runtime_error(
                "build_algebra: dimension exceeds 128, too large for dense structure constants");
    }

    alg->stop_degree_ = stop_degree;
    const size_t dim = kept.size();
    alg->basis_.reserve(dim);
    for (size_t j = 0; j < dim; ++j) {
        const Pure& q = paths[kept[j]];
        alg->basis_.push_back({q.arrows, q.src, q.tgt});
    }

    // normal forms: residue of every enumerated path in the kept basis
    detail::TaggedEchelon expr;
    for (size_t j = 0; j < dim; ++j) {
        detail::SparseVec kappa{{kept[j], Rat(1)}};
        ideal_rows.reduce(kappa);
        expr.add(std::move(kappa), j);
    }
    for (size_t pi = 0; pi < paths.size(); ++pi) {
        detail::SparseVec v{{pi, Rat(1)}};
        ideal_rows.reduce(v);
        detail::SparseVec coeffs = expr.express(std::move(v));
        std::vector<std::pair<size_t, Rat>> nf(coeffs.begin(), coeffs.end());
        alg->nf_[{paths[pi].src, paths[pi].arrows}] = std::move(nf);
    }

    // dense structure constants from concatenation + normal form
    alg->sc_.assign(dim * dim * dim, Rat(0));
    for (size_t x = 0; x < dim; ++x) {
        for (size_t y = 0; y < dim; ++y) {
            const auto& bx = alg->basis_[x];
            const auto& by = alg->basis_[y];
            if (bx.tgt != by.src) continue;
            std::vector<size_t> cat = bx.path;
            cat.insert(cat.end(), by.path.begin(), by.path.end());
            if (cat.size() > stop_degree) continue;  // all long paths lie in the ideal
            size_t src = cat.empty() ? bx.src : p.arrows[cat.front()].src;
            auto it = alg->nf_.find({src, cat});
            if (it == alg->nf_.end())
                throw std::logic_error("build_algebra: concatenation not enumerated");
            for (const auto& [z, c] : it->second)
                alg->sc_[(x * dim + y) * dim + z] = c;
        }
    }
    return alg;
}

struct AdmissibilityReport {
    size_t nilpotency_degree = 0;  // least N with (arrow ideal)^N = 0
    bool relations_in_square = true;
    std::vector<std::string> violations;
};

inline AdmissibilityReport admissibility_report(const PathAlgebra& a) {
    AdmissibilityReport rep;
    for (const auto& rel : a.presentation().relations)
        for (const auto& t : rel.terms)
            if (t.path.size() < 2) {
                rep.relations_in_square = false;
                rep.violations.push_back("relation term of length < 2");
            }

    const size_t dim = a.dim();
    Matrix arrow_span(0, dim);
    for (size_t i = 0; i < dim; ++i) {
        if (a.basis_elem(i).degree() == 0) continue;
        Matrix r(1, dim);
        r.at(0, i) = Rat(1);
        arrow_span = vstack(arrow_span, r);
    }
    Subspace power = Subspace::span_rows(arrow_span);
    Subspace radical = power;
    size_t n = 1;
    while (power.dim() > 0) {
        Matrix next(0, dim);
        for (size_t i = 0; i < power.dim(); ++i) {
            std::vector<Rat> x(dim);
            for (size_t j = 0; j < dim; ++j) x[j] = power.basis().at(i, j);
            for (size_t k = 0; k < radical.dim(); ++k) {
                std::vector<Rat> y(dim);
                for (size_t j = 0; j < dim; ++j) y[j] = radical.basis().at(k, j);
                std::vector<Rat> prod = a.mul(x, y);
                Matrix r(1, dim);
                for (size_t j = 0; j < dim; ++j) r.at(0, j) = prod[j];
                if (!r.is_zero()) next = vstack(next, r);
            }
        }
        power = Subspace::span_rows(next);
        ++n;
    }
    rep.nilpotency_degree = n;
    return rep;
}

}  // namespace qsilt
