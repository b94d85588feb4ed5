#ifndef DAGPH_SIMPLICIAL_HPP
#define DAGPH_SIMPLICIAL_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "dagph/linalg.hpp"

namespace dagph {

struct Simplex {
    std::vector<int> vertices;  // strictly increasing

    Simplex() = default;
    explicit Simplex(std::vector<int> vs) : vertices(std::move(vs)) {
        auto sorted = vertices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("simplex has duplicate vertices");
        if (!vertices.empty() && vertices.front() < 0)
            throw std::invalid_argument("negative vertex id");
        vertices = std::move(sorted);
    }

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
    bool operator==(const Simplex& o) const { return vertices == o.vertices; }
    bool operator<(const Simplex& o) const {
        if (vertices.size() != o.vertices.size()) return vertices.size() < o.vertices.size();
        return vertices < o.vertices;
    }

    // codimension-1 faces, by omitted-vertex position
    std::vector<Simplex> faces() const {
        std::vector<Simplex> out;
        if (dim() == 0) return out;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            auto vs = vertices;
            vs.erase(vs.begin() + i);
            out.emplace_back(std::move(vs));
        }
        return out;
    }
};

// One ambient complex; every vertex space of a graph filtration is a
// subcomplex of it.  Simplex ids are face-ordered: a face always has a
// smaller id than any simplex having it on its boundary.
struct GlobalComplex {
    std::vector<Simplex> simplices;                 // index = id
    std::vector<std::vector<int>> face_ids;         // codim-1 faces per simplex
    std::map<Simplex, int> index;

    int id_of(const Simplex& s) const {
        auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
    }
    int max_dim() const {
        int d = -1;
        for (const auto& s : simplices) d = std::max(d, s.dim());
        return d;
    }
};

// Smallest complex containing every seed simplex.  Ids are assigned by
// (dimension, vertex order), which is face-ordered.
inline GlobalComplex close_under_faces(const std::vector<Simplex>& seed) {
    std::set<Simplex> all;
    std::vector<Simplex> work(seed.begin(), seed.end());
    while (!work.empty()) {
        Simplex s = std::move(work.back());
        work.pop_back();
        if (!all.insert(s).second) continue;
        for (auto& f : s.faces()) work.push_back(std::move(f));
    }
    GlobalComplex gc;
    for (const auto& s : all) {  // std::set order = (dim, lex)
        gc.index[s] = static_cast<int>(gc.simplices.size());
        gc.simplices.push_back(s);
    }
    gc.face_ids.resize(gc.simplices.size());
    for (std::size_t i = 0; i < gc.simplices.size(); ++i)
        for (const auto& f : gc.simplices[i].faces())
            gc.face_ids[i].push_back(gc.index.at(f));
    return gc;
}

// A subcomplex given as a member set of simplex ids, closed under faces.
struct SubcomplexMask {
    const GlobalComplex* complex = nullptr;
    std::set<int> members;

    SubcomplexMask() = default;
    SubcomplexMask(const GlobalComplex& gc, std::set<int> m) : complex(&gc), members(std::move(m)) {}

    static SubcomplexMask full(const GlobalComplex& gc) {
        std::set<int> m;
        for (int i = 0; i < static_cast<int>(gc.simplices.size()); ++i) m.insert(i);
        return {gc, std::move(m)};
    }

    bool closed_under_faces() const {
        for (int id : members)
            for (int fid : complex->face_ids[id])
                if (!members.count(fid)) return false;
        return true;
    }

    // close the current member set under faces (in place)
    void close() {
        std::vector<int> work(members.begin(), members.end());
        while (!work.empty()) {
            int id = work.back();
            work.pop_back();
            for (int fid : complex->face_ids[id])
                if (members.insert(fid).second) work.push_back(fid);
        }
    }

    bool subset_of(const SubcomplexMask& o) const {
        return std::includes(o.members.begin(), o.members.end(), members.begin(), members.end());
    }

    SubcomplexMask set_union(const SubcomplexMask& o) const {
        std::set<int> m = members;
        m.insert(o.members.begin(), o.members.end());
        return {*complex, std::move(m)};
    }
    SubcomplexMask set_intersection(const SubcomplexMask& o) const {
        std::set<int> m;
        std::set_intersection(members.begin(), members.end(), o.members.begin(), o.members.end(),
                              std::inserter(m, m.begin()));
        return {*complex, std::move(m)};
    }

    // ids of member simplices of dimension k, ascending
    std::vector<int> simplices_of_dim(int k) const {
        std::vector<int> out;
        for (int id : members)
            if (complex->simplices[id].dim() == k) out.push_back(id);
        return out;
    }
};

// Matrix of the boundary operator from k-chains to (k-1)-chains of the
// subcomplex.  One column per k-simplex, one row per (k-1)-simplex, both in
// ascending id order; signs are (-1)^i by omitted-vertex position.
template <class F>
Matrix<F> boundary_matrix(const SubcomplexMask& sub, int k, const F& field) {
    auto cols_ids = sub.simplices_of_dim(k);
    auto rows_ids = sub.simplices_of_dim(k - 1);
    std::map<int, std::size_t> row_pos;
    for (std::size_t i = 0; i < rows_ids.size(); ++i) row_pos[rows_ids[i]] = i;
    Matrix<F> m(rows_ids.size(), cols_ids.size(), field);
    for (std::size_t c = 0; c < cols_ids.size(); ++c) {
        const auto& s = sub.complex->simplices[cols_ids[c]];
        auto fs = s.faces();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            int fid = sub.complex->id_of(fs[i]);
            auto sign = (i % 2 == 0) ? field.one() : field.neg(field.one());
            m.at(row_pos.at(fid), c) = sign;
        }
    }
    return m;
}

template <class F>
std::size_t betti(const SubcomplexMask& sub, int k, const F& field) {
    auto dk = boundary_matrix(sub, k, field);
    auto dk1 = boundary_matrix(sub, k + 1, field);
    std::size_t cycles = dk.cols - rank(dk);
    return cycles - rank(dk1);
}

// Canonical homology data of a subcomplex at dimension k: cycle
// representatives (rows, in the subcomplex's local k-simplex coordinates)
// taken from the rref kernel basis of the boundary operator, in order, plus
// a factored solver that expresses any cycle in (boundary, homology)
// coordinates.
template <class F>
struct HomologyBasis {
    std::vector<int> ksimplex_ids;  // local coordinate c -> global simplex id
    std::size_t boundary_rank = 0;
    Matrix<F> reps;                 // betti rows, s cols
    FactoredRows<F> solver;         // rows: boundary basis then reps

    std::size_t dim() const { return reps.rows; }
};

template <class F>
HomologyBasis<F> homology_basis(const SubcomplexMask& sub, int k, const F& field) {
    HomologyBasis<F> hb;
    hb.ksimplex_ids = sub.simplices_of_dim(k);
    const std::size_t s = hb.ksimplex_ids.size();
    auto cycles = kernel_basis(boundary_matrix(sub, k, field));
    auto bd_rows = column_space_rows(boundary_matrix(sub, k + 1, field));
    hb.boundary_rank = bd_rows.rows;
    // pick kernel rows extending the boundary span, in rref order
    std::vector<std::vector<typename F::Elem>> chosen;
    Matrix<F> stacked = bd_rows;
    std::size_t cur_rank = bd_rows.rows;
    for (std::size_t r = 0; r < cycles.rows; ++r) {
        Matrix<F> trial(stacked.rows + 1, s, field);
        for (std::size_t i = 0; i < stacked.rows; ++i)
            for (std::size_t c = 0; c < s; ++c) trial.at(i, c) = stacked.at(i, c);
        for (std::size_t c = 0; c < s; ++c) trial.at(stacked.rows, c) = cycles.at(r, c);
        if (rank(trial) > cur_rank) {
            chosen.push_back(cycles.row(r));
            stacked = std::move(trial);
            ++cur_rank;
        }
    }
    hb.reps = Matrix<F>::from_rows(chosen, s, field);
    // solver over [boundary basis; reps]
    Matrix<F> all(bd_rows.rows + hb.reps.rows, s, field);
    for (std::size_t i = 0; i < bd_rows.rows; ++i)
        for (std::size_t c = 0; c < s; ++c) all.at(i, c) = bd_rows.at(i, c);
    for (std::size_t i = 0; i < hb.reps.rows; ++i)
        for (std::size_t c = 0; c < s; ++c) all.at(bd_rows.rows + i, c) = hb.reps.at(i, c);
    hb.solver = rref_with_transform(all);
    return hb;
}

// Homology coordinates of a cycle given in the basis owner's local
// coordinates.  Fails (nullopt) if the chain is not a cycle of the space.
template <class F>
std::optional<std::vector<typename F::Elem>> homology_coords(
    const HomologyBasis<F>& hb, const std::vector<typename F::Elem>& cycle) {
    auto sol = solve_in_rows(hb.solver, cycle);
    if (!sol) return std::nullopt;
    return std::vector<typename F::Elem>(sol->begin() + hb.boundary_rank, sol->end());
}

// Matrix of the inclusion-induced map H_k(U) -> H_k(W) in the canonical
// bases, where U's k-simplices are a subset of W's.
template <class F>
Matrix<F> induced_map(const HomologyBasis<F>& from, const HomologyBasis<F>& to, const F& field) {
    std::map<int, std::size_t> to_pos;
    for (std::size_t i = 0; i < to.ksimplex_ids.size(); ++i) to_pos[to.ksimplex_ids[i]] = i;
    Matrix<F> m(to.dim(), from.dim(), field);
    for (std::size_t j = 0; j < from.dim(); ++j) {
        std::vector<typename F::Elem> chain(to.ksimplex_ids.size(), field.zero());
        for (std::size_t c = 0; c < from.ksimplex_ids.size(); ++c) {
            auto it = to_pos.find(from.ksimplex_ids[c]);
            if (it == to_pos.end()) throw std::invalid_argument("induced_map: not a subcomplex");
            chain[it->second] = from.reps.at(j, c);
        }
        auto coords = homology_coords(to, chain);
        if (!coords) throw std::logic_error("induced_map: image chain is not a cycle");
        for (std::size_t i = 0; i < to.dim(); ++i) m.at(i, j) = (*coords)[i];
    }
    return m;
}

}  // namespace dagph

#endif
