#ifndef DAGPH_SUBGRAPH_HPP
#define DAGPH_SUBGRAPH_HPP

#include <deque>
#include <functional>

#include "dagph/dagmodel.hpp"

namespace dagph {

struct PersistenceResult {
    int k = 0;
    std::size_t rank = 0;
};

struct SubgraphStats {
    std::size_t updates = 0;  // state-changing column/subspace updates
};

namespace detail {

// Chain-level inclusion map of one edge at dimension k: the isometric
// coordinate inclusion determined by the source's k-simplices being a subset
// of the destination's.  `positions` are the destination-list slots of the
// k-simplices absent from the source (empty = identity).
struct ChainMap {
    int si = 0, sj = 0;
    std::vector<int> positions;  // ascending
};

inline ChainMap chain_map(const SimplexwiseDAG& dag, int edge, int k) {
    const auto& e = dag.edges[edge];
    ChainMap cm;
    auto ki = dag.vertices[e.src].mask.simplices_of_dim(k);
    auto kj = dag.vertices[e.dst].mask.simplices_of_dim(k);
    cm.si = static_cast<int>(ki.size());
    cm.sj = static_cast<int>(kj.size());
    const auto& src = dag.vertices[e.src].mask.members;
    for (std::size_t t = 0; t < kj.size(); ++t)
        if (!src.count(kj[t])) cm.positions.push_back(static_cast<int>(t));
    return cm;
}

template <class T>
std::vector<T> lift_coord(const std::vector<T>& v, const std::vector<int>& positions,
                          const T& zero) {
    if (positions.empty()) return v;
    std::vector<T> out(v.size() + positions.size(), zero);
    std::size_t vi = 0, pi = 0;
    for (std::size_t o = 0; o < out.size(); ++o) {
        if (pi < positions.size() && static_cast<int>(o) == positions[pi])
            ++pi;
        else
            out[o] = v[vi++];
    }
    return out;
}

template <class T>
std::vector<T> drop_coord(const std::vector<T>& v, const std::vector<int>& positions) {
    if (positions.empty()) return v;
    std::vector<T> out;
    std::size_t pi = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (pi < positions.size() && static_cast<int>(i) == positions[pi])
            ++pi;
        else
            out.push_back(v[i]);
    }
    return out;
}

// ---- rational backend: one orthogonal matrix M = (B | Z | C) per vertex ----

template <class F>
struct OrthoState {
    int s = 0, b = 0, z = 0;  // c = s - b - z
    std::vector<std::vector<typename F::Elem>> cols;
    // fixed orthogonal basis of the full boundary space B_k(X_v); the B block
    // (forbidden directions) evolves, but homology-level compatibility is
    // always modulo this original space
    std::vector<std::vector<typename F::Elem>> bfull;
};

template <class F>
void subtract_projection(const F& f, std::vector<typename F::Elem>& v,
                         const std::vector<typename F::Elem>& onto) {
    auto nn = dot(f, onto, onto);
    auto coef = f.div(dot(f, v, onto), nn);
    if (f.is_zero(coef)) return;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.sub(v[i], f.mul(coef, onto[i]));
}

template <class F>
bool vec_zero(const F& f, const std::vector<typename F::Elem>& v) {
    for (const auto& e : v)
        if (!f.is_zero(e)) return false;
    return true;
}

// Confine the columns in [begin, end) of st to the hyperplane orthogonal to
// v: eliminate the v-component of every column using the first column with a
// nonzero component as the pivot, remove the pivot, and re-orthogonalize the
// survivors in place.  Pivoting (rather than projecting) keeps the span of
// any column prefix intersected with v^⊥, which is what the B block needs.
// Returns the index of the removed pivot column.
template <class F>
int eliminate_against(const F& f, OrthoState<F>& st, int begin, int end,
                      const std::vector<typename F::Elem>& v) {
    int piv = -1;
    for (int idx = begin; idx < end; ++idx)
        if (!f.is_zero(dot(f, st.cols[idx], v))) {
            piv = idx;
            break;
        }
    if (piv < 0) throw std::logic_error("eliminate_against: vector outside the block span");
    auto pa = dot(f, st.cols[piv], v);
    for (int idx = begin; idx < end; ++idx) {
        if (idx == piv) continue;
        auto a = dot(f, st.cols[idx], v);
        if (f.is_zero(a)) continue;
        auto factor = f.div(a, pa);
        for (std::size_t r = 0; r < st.cols[idx].size(); ++r)
            st.cols[idx][r] = f.sub(st.cols[idx][r], f.mul(factor, st.cols[piv][r]));
    }
    st.cols.erase(st.cols.begin() + piv);
    // re-orthogonalize the modified block (its columns are still independent)
    for (int idx = begin; idx < end - 1; ++idx) {
        for (int prev = begin; prev < idx; ++prev)
            subtract_projection(f, st.cols[idx], st.cols[prev]);
        if (vec_zero(f, st.cols[idx]))
            throw std::logic_error("eliminate_against: unexpected dependent column");
        normalize_primitive(st.cols[idx]);
    }
    return piv;
}

// Make v orthogonal to the C block and append it to C, cutting the candidate
// space down to its part orthogonal to v.  One (B | Z) column is consumed;
// whichever block held the pivot shrinks.  Returns false when v was already
// spanned by C.
template <class F>
bool add_to_C(const F& f, OrthoState<F>& st, std::vector<typename F::Elem> v) {
    for (int c = st.b + st.z; c < static_cast<int>(st.cols.size()); ++c)
        subtract_projection(f, v, st.cols[c]);
    if (vec_zero(f, v)) return false;
    normalize_primitive(v);
    int piv = eliminate_against(f, st, 0, st.b + st.z, v);
    if (piv < st.b)
        --st.b;
    else
        --st.z;
    st.cols.push_back(std::move(v));
    return true;
}

// Make v orthogonal to C and B and append it to B; one Z column is consumed.
// Returns false when v carries nothing new outside B (mod C).
template <class F>
bool add_to_B(const F& f, OrthoState<F>& st, std::vector<typename F::Elem> v) {
    for (int c = st.b + st.z; c < static_cast<int>(st.cols.size()); ++c)
        subtract_projection(f, v, st.cols[c]);
    for (int c = 0; c < st.b; ++c) subtract_projection(f, v, st.cols[c]);
    if (vec_zero(f, v)) return false;
    normalize_primitive(v);
    eliminate_against(f, st, st.b, st.b + st.z, v);
    st.cols.insert(st.cols.begin() + st.b, std::move(v));
    ++st.b;
    --st.z;
    return true;
}

template <class F>
struct OrthoEngine {
    using State = OrthoState<F>;

    static State init(const SubcomplexMask& mask, int k, const F& f) {
        State st;
        st.s = static_cast<int>(mask.simplices_of_dim(k).size());
        auto dk = boundary_matrix(mask, k, f);
        auto dk1 = boundary_matrix(mask, k + 1, f);
        auto [bcols, bdrop] = orthogonalize(dk1);
        for (std::size_t c = 0; c < bcols.cols; ++c) st.cols.push_back(bcols.col(c));
        st.b = static_cast<int>(bcols.cols);
        st.bfull = st.cols;
        auto cycles = kernel_basis(dk);  // rows
        for (std::size_t r = 0; r < cycles.rows; ++r) {
            auto v = cycles.row(r);
            for (const auto& c : st.cols) subtract_projection(f, v, c);
            if (!vec_zero(f, v)) {
                normalize_primitive(v);
                st.cols.push_back(std::move(v));
                ++st.z;
            }
        }
        for (int e = 0; e < st.s; ++e) {
            std::vector<typename F::Elem> v(st.s, f.zero());
            v[e] = f.one();
            for (const auto& c : st.cols) subtract_projection(f, v, c);
            if (!vec_zero(f, v)) {
                normalize_primitive(v);
                st.cols.push_back(std::move(v));
            }
        }
        if (static_cast<int>(st.cols.size()) != st.s)
            throw std::logic_error("init_vertex_state: basis is not complete");
        return st;
    }

    // Apply the four replacement rules for an edge i -> j; returns the number
    // of state-changing updates on each side.
    static std::pair<int, int> apply(const F& f, State& si, State& sj, const ChainMap& cm) {
        int ci = 0, cj = 0;
        auto span_of = [&f](const std::vector<std::vector<typename F::Elem>>& vecs,
                            int first, int last, int ambient) {
            Matrix<F> m(static_cast<std::size_t>(last - first), ambient, f);
            for (int r = first; r < last; ++r)
                for (int c = 0; c < ambient; ++c) m.at(r - first, c) = vecs[r][c];
            return Subspace<F>::span_rows(m);
        };
        // 1. candidates at j must be homologous, modulo the boundary space of
        //    X_j, to the image of a candidate at i: enlarge C_j by the
        //    orthogonal complement of f_e(Z_i+B_i) + B_k(X_j)
        {
            Matrix<F> w(static_cast<std::size_t>(si.b + si.z + sj.bfull.size()), cm.sj, f);
            std::size_t r = 0;
            for (int c = 0; c < si.b + si.z; ++c, ++r) {
                auto v = lift_coord(si.cols[c], cm.positions, f.zero());
                for (int x = 0; x < cm.sj; ++x) w.at(r, x) = v[x];
            }
            for (const auto& bv : sj.bfull) {
                for (int x = 0; x < cm.sj; ++x) w.at(r, x) = bv[x];
                ++r;
            }
            auto comp = kernel_basis(w);
            for (std::size_t kr = 0; kr < comp.rows; ++kr)
                cj += add_to_C(f, sj, comp.row(kr)) ? 1 : 0;
        }
        // 2. shrink Z_i+B_i to the preimage of Z_j+B_j
        for (int c = sj.b + sj.z; c < static_cast<int>(sj.cols.size()); ++c)
            ci += add_to_C(f, si, drop_coord(sj.cols[c], cm.positions)) ? 1 : 0;
        // 3. grow B_i by the candidate part of the preimage of B_j
        {
            auto pre = subspace_preimage(span_of(sj.cols, 0, sj.b, cm.sj), cm, f);
            auto grow = subspace_intersect(pre, span_of(si.cols, 0, si.b + si.z, cm.si));
            for (std::size_t r = 0; r < grow.dim(); ++r)
                ci += add_to_B(f, si, grow.basis.row(r)) ? 1 : 0;
        }
        // 4. grow B_j by the candidate part of the image of B_i (mod boundaries)
        {
            auto img = subspace_sum(subspace_image(span_of(si.cols, 0, si.b, cm.si), cm, f),
                                    span_of(sj.bfull, 0, static_cast<int>(sj.bfull.size()), cm.sj));
            auto grow = subspace_intersect(img, span_of(sj.cols, 0, sj.b + sj.z, cm.sj));
            for (std::size_t r = 0; r < grow.dim(); ++r)
                cj += add_to_B(f, sj, grow.basis.row(r)) ? 1 : 0;
        }
        return {ci, cj};
    }

    static std::size_t zdim(const State& st) { return static_cast<std::size_t>(st.z); }
    static std::size_t bdim(const State& st) { return static_cast<std::size_t>(st.b); }
    static std::size_t zbdim(const State& st) { return static_cast<std::size_t>(st.b + st.z); }
};

// ---- finite-field backend: canonical (Z+B, B) echelon subspaces ----

template <class F>
struct EchelonState {
    int s = 0;
    Subspace<F> zb, bin;
    Subspace<F> bfull;  // original boundary space B_k(X_v), never modified
};

template <class F>
Subspace<F> subspace_image(const Subspace<F>& sp, const ChainMap& cm, const F& f) {
    if (cm.positions.empty()) return sp;
    Matrix<F> rows(sp.dim(), cm.sj, f);
    for (std::size_t r = 0; r < sp.dim(); ++r) {
        auto v = lift_coord(sp.basis.row(r), cm.positions, f.zero());
        for (int c = 0; c < cm.sj; ++c) rows.at(r, c) = v[c];
    }
    return Subspace<F>::span_rows(rows);
}

template <class F>
Subspace<F> subspace_preimage(const Subspace<F>& sp, const ChainMap& cm, const F& f) {
    if (cm.positions.empty()) return sp;
    // intersect with the image subspace (extra coordinates zero), then drop them
    Matrix<F> image(cm.si, cm.sj, f);
    for (int r = 0, c = 0; c < cm.sj; ++c) {
        if (std::binary_search(cm.positions.begin(), cm.positions.end(), c)) continue;
        image.at(r++, c) = f.one();
    }
    auto cut = subspace_intersect(sp, Subspace<F>::span_rows(image));
    Matrix<F> rows(cut.dim(), cm.si, f);
    for (std::size_t r = 0; r < cut.dim(); ++r) {
        auto v = drop_coord(cut.basis.row(r), cm.positions);
        for (int c = 0; c < cm.si; ++c) rows.at(r, c) = v[c];
    }
    return Subspace<F>::span_rows(rows);
}

template <class F>
struct EchelonEngine {
    using State = EchelonState<F>;

    static State init(const SubcomplexMask& mask, int k, const F& f) {
        State st;
        st.s = static_cast<int>(mask.simplices_of_dim(k).size());
        st.zb = Subspace<F>::span_rows(kernel_basis(boundary_matrix(mask, k, f)));
        st.bin = Subspace<F>::span_cols(boundary_matrix(mask, k + 1, f));
        st.bfull = st.bin;
        return st;
    }

    static std::pair<int, int> apply(const F& f, State& si, State& sj, const ChainMap& cm) {
        int ci = 0, cj = 0;
        // candidates at j must be homologous, modulo the (original) boundary
        // space of X_j, to an image candidate — not literally equal to one
        auto nzbj =
            subspace_intersect(sj.zb, subspace_sum(subspace_image(si.zb, cm, f), sj.bfull));
        if (nzbj != sj.zb) {
            sj.zb = std::move(nzbj);
            sj.bin = subspace_intersect(sj.bin, sj.zb);
            ++cj;
        }
        auto nzbi = subspace_intersect(si.zb, subspace_preimage(sj.zb, cm, f));
        if (nzbi != si.zb) {
            si.zb = std::move(nzbi);
            si.bin = subspace_intersect(si.bin, si.zb);
            ++ci;
        }
        auto nbi = subspace_intersect(subspace_sum(si.bin, subspace_preimage(sj.bin, cm, f)),
                                      si.zb);
        if (nbi != si.bin) {
            si.bin = std::move(nbi);
            ++ci;
        }
        auto nbj = subspace_intersect(subspace_sum(sj.bin, subspace_image(si.bin, cm, f)), sj.zb);
        if (nbj != sj.bin) {
            sj.bin = std::move(nbj);
            ++cj;
        }
        return {ci, cj};
    }

    static std::size_t zdim(const State& st) { return st.zb.dim() - st.bin.dim(); }
    static std::size_t bdim(const State& st) { return st.bin.dim(); }
    static std::size_t zbdim(const State& st) { return st.zb.dim(); }
};

template <class F>
using EngineFor =
    std::conditional_t<F::has_inner_product, OrthoEngine<F>, EchelonEngine<F>>;

}  // namespace detail

// Hook for observing per-vertex dimension evolution during a run (testing).
template <class F>
struct SubgraphObserver {
    // called after each edge application that changed something
    std::function<void(int vertex, std::size_t zb_dim, std::size_t b_dim)> on_change;
};

// Run the incremental edge insertion + worklist propagation to the fixpoint
// and return the per-vertex states (keyed by dag vertex index).
template <class F>
std::map<int, typename detail::EngineFor<F>::State> fixpoint_states(
    const SimplexwiseDAG& dag, const SubgraphSelector& sel, int k, const F& field,
    const std::vector<int>* edge_order = nullptr, SubgraphStats* stats = nullptr,
    const SubgraphObserver<F>* observer = nullptr) {
    using Engine = detail::EngineFor<F>;
    if (!sel.weakly_connected(dag))
        throw std::invalid_argument("subgraph selector is not connected");
    std::map<int, typename Engine::State> states;
    for (int v : sel.vertices) states.emplace(v, Engine::init(dag.vertices[v].mask, k, field));
    std::vector<int> order = edge_order ? *edge_order : sel.edge_indices;
    if (!edge_order)
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::pair(dag.edges[a].src, dag.edges[a].dst) <
                   std::pair(dag.edges[b].src, dag.edges[b].dst);
        });
    std::map<int, detail::ChainMap> cms;
    for (int e : order) cms[e] = detail::chain_map(dag, e, k);

    std::map<int, std::vector<int>> incident;  // vertex -> active edges
    auto notify = [&](int v) {
        if (observer && observer->on_change) {
            const auto& st = states.at(v);
            observer->on_change(v, Engine::zbdim(st), Engine::bdim(st));
        }
    };
    for (int e : order) {
        incident[dag.edges[e].src].push_back(e);
        incident[dag.edges[e].dst].push_back(e);
        std::deque<int> work{e};
        std::set<int> queued{e};
        while (!work.empty()) {
            int cur = work.front();
            work.pop_front();
            queued.erase(cur);
            int u = dag.edges[cur].src, w = dag.edges[cur].dst;
            auto [cu, cw] = Engine::apply(field, states.at(u), states.at(w), cms.at(cur));
            if (stats) stats->updates += static_cast<std::size_t>(cu + cw);
            if (cu) notify(u);
            if (cw) notify(w);
            for (int changed : {cu ? u : -1, cw ? w : -1}) {
                if (changed < 0) continue;
                for (int adj : incident[changed])
                    if (queued.insert(adj).second) work.push_back(adj);
            }
        }
    }
    return states;
}

// dim H_k^{G'} of the selected connected subgraph.
template <class F>
PersistenceResult persistence_rank(const SimplexwiseDAG& dag, const SubgraphSelector& sel, int k,
                                   const F& field, const std::vector<int>* edge_order = nullptr,
                                   SubgraphStats* stats = nullptr,
                                   const SubgraphObserver<F>* observer = nullptr) {
    using Engine = detail::EngineFor<F>;
    auto states = fixpoint_states(dag, sel, k, field, edge_order, stats, observer);
    std::optional<std::size_t> z;
    for (int v : sel.vertices) {
        auto zv = Engine::zdim(states.at(v));
        if (z && *z != zv) throw std::logic_error("fixpoint reached with unequal z dimensions");
        z = zv;
    }
    return {k, z.value_or(0)};
}

// Independent brute-force reference: solve the compatibility system over the
// homology coordinates of every selected vertex and take the best subspace
// that projects injectively everywhere.
template <class F>
std::size_t oracle_rank(const SimplexwiseDAG& dag, const SubgraphSelector& sel, int k,
                        const F& field) {
    if (!sel.weakly_connected(dag))
        throw std::invalid_argument("subgraph selector is not connected");
    std::map<int, HomologyBasis<F>> bases;
    std::map<int, std::size_t> offset;
    std::size_t total = 0;
    for (int v : sel.vertices) {
        bases.emplace(v, homology_basis(dag.vertices[v].mask, k, field));
        offset[v] = total;
        total += bases.at(v).dim();
    }
    std::size_t nrows = 0;
    for (int e : sel.edge_indices) nrows += bases.at(dag.edges[e].dst).dim();
    Matrix<F> constraints(nrows, total, field);
    std::size_t row = 0;
    for (int e : sel.edge_indices) {
        int u = dag.edges[e].src, w = dag.edges[e].dst;
        auto m = induced_map(bases.at(u), bases.at(w), field);
        for (std::size_t r = 0; r < m.rows; ++r, ++row) {
            for (std::size_t c = 0; c < m.cols; ++c) constraints.at(row, offset[u] + c) = m.at(r, c);
            constraints.at(row, offset[w] + r) = field.neg(field.one());
        }
    }
    auto L = kernel_basis(constraints);  // rows span the compatible families
    const std::size_t d = L.rows;
    // rank of L's projection onto each vertex block
    std::size_t minr = d;
    for (int v : sel.vertices) {
        Matrix<F> block(d, bases.at(v).dim(), field);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < bases.at(v).dim(); ++c)
                block.at(r, c) = L.at(r, offset[v] + c);
        minr = std::min(minr, rank(block));
    }
    if constexpr (F::has_inner_product) {
        return minr;  // a generic subspace of this dim works over ℚ
    } else {
    if (field.p > 5) return minr;  // and over large finite fields
    if (d > 4) throw std::runtime_error("instance too large for exhaustive subspace search");
    // exhaustive: largest r-dim S ≤ L with injective projections, via all
    // rref bases of subspaces of F_p^d
    const long p = field.p;
    for (std::size_t r = minr; r >= 1; --r) {
        // choose pivot columns
        std::vector<int> piv(r);
        std::function<bool(std::size_t, int)> choose = [&](std::size_t idx, int start) -> bool {
            if (idx == r) {
                // free positions
                std::vector<std::pair<std::size_t, std::size_t>> free_pos;
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t c = piv[i] + 1; c < d; ++c)
                        if (std::find(piv.begin(), piv.end(), static_cast<int>(c)) == piv.end())
                            free_pos.emplace_back(i, c);
                std::vector<long> vals(free_pos.size(), 0);
                while (true) {
                    Matrix<F> S(r, d, field);
                    for (std::size_t i = 0; i < r; ++i) S.at(i, piv[i]) = field.one();
                    for (std::size_t t = 0; t < free_pos.size(); ++t)
                        S.at(free_pos[t].first, free_pos[t].second) = field.from_int(vals[t]);
                    // ambient rows = S * L
                    Matrix<F> amb(r, total, field);
                    for (std::size_t i = 0; i < r; ++i)
                        for (std::size_t c = 0; c < total; ++c) {
                            auto acc = field.zero();
                            for (std::size_t t = 0; t < d; ++t)
                                acc = field.add(acc, field.mul(S.at(i, t), L.at(t, c)));
                            amb.at(i, c) = acc;
                        }
                    bool ok = true;
                    for (int v : sel.vertices) {
                        Matrix<F> block(r, bases.at(v).dim(), field);
                        for (std::size_t i = 0; i < r; ++i)
                            for (std::size_t c = 0; c < bases.at(v).dim(); ++c)
                                block.at(i, c) = amb.at(i, offset[v] + c);
                        if (rank(block) != r) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) return true;
                    // next assignment
                    std::size_t t = 0;
                    while (t < vals.size() && ++vals[t] == p) vals[t++] = 0;
                    if (t == vals.size()) break;
                }
                return false;
            }
            for (int c = start; c < static_cast<int>(d); ++c) {
                piv[idx] = c;
                if (choose(idx + 1, c + 1)) return true;
            }
            return false;
        };
        if (choose(0, 0)) return r;
    }
    return 0;
    }
}

}  // namespace dagph

#endif
