#ifndef DAGPH_SSSS_HPP
#define DAGPH_SSSS_HPP

#include <sstream>
#include <tuple>

#include "dagph/dagmodel.hpp"

namespace dagph {

// State of the standard persistence reduction at a point along a path of
// single-simplex insertions.  Snapshots at branch points are plain deep
// copies; replaying from any snapshot is identical to recomputing the path.
template <class F>
struct ReductionState {
    using Chain = std::map<int, typename F::Elem>;  // position -> coefficient

    F field;
    std::vector<int> id_at;       // position -> global simplex id
    std::vector<int> dim_at;      // position -> simplex dimension
    std::map<int, int> pos_of;    // global simplex id -> position
    std::map<int, Chain> stored;  // pivot position -> reduced boundary chain
    std::map<int, int> pair_of;   // birth position -> death position
    std::set<int> positives;      // positions of creator simplices (all dims)

    explicit ReductionState(const F& f) : field(f) {}

    int size() const { return static_cast<int>(id_at.size()); }

    // Insert one simplex; all its faces must already be present.
    void insert(int global_id, const GlobalComplex& gc) {
        int p = size();
        const auto& faces = gc.face_ids[global_id];
        Chain ch;
        for (std::size_t i = 0; i < faces.size(); ++i) {
            auto sign = (i % 2 == 0) ? field.one() : field.neg(field.one());
            ch[pos_of.at(faces[i])] = sign;
        }
        while (!ch.empty()) {
            int q = ch.rbegin()->first;
            auto it = stored.find(q);
            if (it == stored.end()) break;
            auto factor = field.div(ch.rbegin()->second, it->second.rbegin()->second);
            for (const auto& [pos, coef] : it->second) {
                auto& slot = ch[pos];
                slot = field.sub(slot, field.mul(factor, coef));
                if (field.is_zero(slot)) ch.erase(pos);
            }
        }
        if (ch.empty()) {
            positives.insert(p);
        } else {
            int q = ch.rbegin()->first;
            stored[q] = std::move(ch);
            pair_of[q] = p;
        }
        id_at.push_back(global_id);
        dim_at.push_back(gc.simplices[global_id].dim());
        pos_of[global_id] = p;
    }

    // Number of k-classes born before position `limit` and still alive.
    std::size_t alive_count(int k, int limit) const {
        std::size_t n = 0;
        for (int p : positives)
            if (p < limit && dim_at[p] == k && !pair_of.count(p)) ++n;
        return n;
    }

    // Birth positions of currently alive k-classes, ascending.
    std::vector<int> alive_births(int k) const {
        std::vector<int> out;
        for (int p : positives)
            if (dim_at[p] == k && !pair_of.count(p)) out.push_back(p);
        return out;
    }
};

struct PersistencePair {
    int birth = 0;
    std::optional<int> death;  // nullopt = essential
    bool operator==(const PersistencePair&) const = default;
};

// The directed path through a SimplexwiseDAG that is a path graph: the edge
// indices in walk order, starting at the unique source.
inline std::vector<int> path_edge_order(const SimplexwiseDAG& dag) {
    std::vector<int> out_edge(dag.vertices.size(), -1), indeg(dag.vertices.size(), 0);
    for (std::size_t i = 0; i < dag.edges.size(); ++i) {
        if (out_edge[dag.edges[i].src] != -1)
            throw std::invalid_argument("not a path: vertex with out-degree > 1");
        out_edge[dag.edges[i].src] = static_cast<int>(i);
        if (++indeg[dag.edges[i].dst] > 1)
            throw std::invalid_argument("not a path: vertex with in-degree > 1");
    }
    int start = -1;
    for (std::size_t v = 0; v < dag.vertices.size(); ++v)
        if (indeg[v] == 0) {
            if (start != -1) throw std::invalid_argument("not a path: multiple sources");
            start = static_cast<int>(v);
        }
    if (start == -1) throw std::invalid_argument("not a path: no source");
    std::vector<int> order;
    for (int v = start; out_edge[v] != -1; v = dag.edges[out_edge[v]].dst)
        order.push_back(out_edge[v]);
    if (order.size() != dag.edges.size()) throw std::invalid_argument("not a path: disconnected");
    return order;
}

// Persistence pairing of a directed path starting from the empty complex.
// Indices are edge positions along the path (identity edges advance the
// index without matrix work).
template <class F>
std::vector<PersistencePair> standard_persistence(const SimplexwiseDAG& dag, int k,
                                                  const F& field) {
    auto order = path_edge_order(dag);
    int start = order.empty() ? 0 : dag.edges[order[0]].src;
    if (!dag.vertices.empty() && !dag.vertices[start].mask.members.empty())
        throw std::invalid_argument("not a path from the empty complex");
    ReductionState<F> st(field);
    std::vector<int> pos_to_index;  // reduction position -> path edge index
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& e = dag.edges[order[i]];
        if (!e.added_simplex) continue;
        pos_to_index.push_back(static_cast<int>(i));
        st.insert(*e.added_simplex, *dag.complex);
    }
    std::vector<PersistencePair> pairs;
    for (int p : st.positives) {
        if (st.dim_at[p] != k) continue;
        auto it = st.pair_of.find(p);
        if (it == st.pair_of.end())
            pairs.push_back({pos_to_index[p], std::nullopt});
        else
            pairs.push_back({pos_to_index[p], pos_to_index[it->second]});
    }
    return pairs;
}

// (source vertex, target vertex, k) -> rank of the induced map on H_k.
struct RankTable {
    std::map<std::tuple<int, int, int>, std::size_t> entries;

    std::optional<std::size_t> rank(int u, int w, int k) const {
        auto it = entries.find({u, w, k});
        if (it == entries.end()) return std::nullopt;
        return it->second;
    }
};

namespace detail {

// BFS tree over the sub-DAG reachable from `source`; children in destination
// vertex-id order.  Returns per-vertex lists of outgoing tree edge indices.
inline std::vector<std::vector<int>> bfs_tree(const SimplexwiseDAG& dag, int source) {
    std::vector<std::vector<int>> out(dag.vertices.size());
    std::vector<std::vector<int>> adj(dag.vertices.size());
    for (std::size_t i = 0; i < dag.edges.size(); ++i)
        adj[dag.edges[i].src].push_back(static_cast<int>(i));
    for (auto& a : adj)
        std::sort(a.begin(), a.end(),
                  [&](int x, int y) { return dag.edges[x].dst < dag.edges[y].dst; });
    std::vector<char> seen(dag.vertices.size(), 0);
    seen[source] = 1;
    std::queue<int> q;
    q.push(source);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e : adj[v])
            if (!seen[dag.edges[e].dst]) {
                seen[dag.edges[e].dst] = 1;
                out[v].push_back(e);
                q.push(dag.edges[e].dst);
            }
    }
    return out;
}

template <class F>
void tree_walk(const SimplexwiseDAG& dag, const std::vector<std::vector<int>>& tree, int node,
               ReductionState<F> st, int source, int n_source, int k, RankTable& table) {
    table.entries[{source, node, k}] = st.alive_count(k, n_source);
    const auto& kids = tree[node];
    for (std::size_t i = 0; i < kids.size(); ++i) {
        const auto& e = dag.edges[kids[i]];
        // checkpoint: deep-copy the state at branch points, move down the last branch
        ReductionState<F> next = (i + 1 == kids.size()) ? std::move(st) : st;
        if (e.added_simplex) next.insert(*e.added_simplex, *dag.complex);
        tree_walk(dag, tree, e.dst, std::move(next), source, n_source, k, table);
    }
}

template <class F>
void single_source_ranks(const SimplexwiseDAG& dag, int source, int k, const F& field,
                         RankTable& table) {
    ReductionState<F> st(field);
    for (int id : dag.vertices[source].mask.members) st.insert(id, *dag.complex);
    int n_source = st.size();
    tree_walk(dag, bfs_tree(dag, source), source, std::move(st), source, n_source, k, table);
}

}  // namespace detail

// rank(u,w,k) for every ordered pair with w reachable from u, via one
// checkpointed reduction per source along a BFS tree.
template <class F>
RankTable all_pairs_rank_serial(const SimplexwiseDAG& dag, int k, const F& field) {
    RankTable table;
    for (std::size_t u = 0; u < dag.vertices.size(); ++u)
        detail::single_source_ranks(dag, static_cast<int>(u), k, field, table);
    return table;
}

template <class F>
RankTable all_pairs_rank(const SimplexwiseDAG& dag, int k, const F& field) {
    RankTable table;
    int n = static_cast<int>(dag.vertices.size());
#pragma omp parallel for schedule(dynamic)
    for (int u = 0; u < n; ++u) {
        RankTable local;
        detail::single_source_ranks(dag, u, k, field, local);
#pragma omp critical
        table.entries.insert(local.entries.begin(), local.entries.end());
    }
    return table;
}

// A d-dimensional lattice layout over the non-inserted vertices of a
// SimplexwiseDAG: coords[v] is the grid coordinate of dag vertex v, empty
// for vertices inserted by refinement.
struct LatticeSpec {
    std::vector<int> shape;                // extent per axis (entries = m+1)
    std::vector<std::vector<int>> coords;  // parallel to dag.vertices
};

namespace detail {

struct LatticeIndex {
    std::map<std::vector<int>, int> vertex_at;         // cell -> dag vertex
    std::map<std::pair<int, int>, std::vector<int>> step;  // (vertex, axis) -> edge chain
};

inline LatticeIndex index_lattice(const SimplexwiseDAG& dag, const LatticeSpec& spec) {
    if (spec.coords.size() != dag.vertices.size())
        throw std::invalid_argument("non-lattice input: coords size mismatch");
    LatticeIndex li;
    std::size_t cells = 1;
    for (int m : spec.shape) cells *= static_cast<std::size_t>(m);
    for (std::size_t v = 0; v < dag.vertices.size(); ++v) {
        if (spec.coords[v].empty()) continue;
        if (spec.coords[v].size() != spec.shape.size())
            throw std::invalid_argument("non-lattice input: coordinate arity mismatch");
        for (std::size_t a = 0; a < spec.shape.size(); ++a)
            if (spec.coords[v][a] < 0 || spec.coords[v][a] >= spec.shape[a])
                throw std::invalid_argument("non-lattice input: coordinate out of range");
        if (!li.vertex_at.emplace(spec.coords[v], static_cast<int>(v)).second)
            throw std::invalid_argument("non-lattice input: duplicate cell");
    }
    if (li.vertex_at.size() != cells)
        throw std::invalid_argument("non-lattice input: missing grid cells");
    // walk each edge chain from a grid vertex to the next grid vertex
    std::vector<int> out_at(dag.vertices.size(), -1);
    std::vector<std::vector<int>> outs(dag.vertices.size());
    for (std::size_t i = 0; i < dag.edges.size(); ++i)
        outs[dag.edges[i].src].push_back(static_cast<int>(i));
    for (std::size_t v = 0; v < dag.vertices.size(); ++v) {
        if (spec.coords[v].empty()) continue;
        for (int first : outs[v]) {
            std::vector<int> chain{first};
            int cur = dag.edges[first].dst;
            while (spec.coords[cur].empty()) {
                if (outs[cur].size() != 1)
                    throw std::invalid_argument("non-lattice input: branching chain vertex");
                chain.push_back(outs[cur][0]);
                cur = dag.edges[outs[cur][0]].dst;
            }
            // destination must be a grid neighbour one step up a single axis
            int axis = -1;
            for (std::size_t a = 0; a < spec.shape.size(); ++a) {
                int d = spec.coords[cur][a] - spec.coords[v][a];
                if (d == 0) continue;
                if (d != 1 || axis != -1)
                    throw std::invalid_argument("non-lattice input: edge is not a grid step");
                axis = static_cast<int>(a);
            }
            if (axis == -1) throw std::invalid_argument("non-lattice input: self edge");
            li.step[{static_cast<int>(v), axis}] = std::move(chain);
        }
    }
    return li;
}

template <class F>
void lattice_walk(const SimplexwiseDAG& dag, const LatticeSpec& spec, const LatticeIndex& li,
                  const std::vector<int>& root, std::vector<int> cell, ReductionState<F> st, int k,
                  std::vector<std::pair<int, int>>& path, RankTable& table) {
    int v = li.vertex_at.at(cell);
    path.emplace_back(v, st.size());
    auto births = st.alive_births(k);
    for (auto& [u, n_u] : path) {
        std::size_t r = 0;
        for (int b : births)
            if (b < n_u) ++r;
        table.entries[{u, v, k}] = r;
    }
    // children: raise axis j while every higher axis still sits at the root value
    int d = static_cast<int>(spec.shape.size());
    std::vector<int> axes;
    for (int j = d - 1; j >= 0; --j) {
        if (cell[j] + 1 < spec.shape[j]) axes.push_back(j);
        if (cell[j] != root[j]) break;  // higher axes must stay at root below this point
    }
    std::sort(axes.begin(), axes.end());
    for (std::size_t i = 0; i < axes.size(); ++i) {
        int j = axes[i];
        ReductionState<F> next = (i + 1 == axes.size()) ? std::move(st) : st;
        for (int e : li.step.at({v, j}))
            if (dag.edges[e].added_simplex) next.insert(*dag.edges[e].added_simplex, *dag.complex);
        auto child = cell;
        ++child[j];
        lattice_walk(dag, spec, li, root, std::move(child), std::move(next), k, path, table);
    }
    path.pop_back();
}

}  // namespace detail

// Rank invariant over all comparable grid pairs, computed from trees rooted
// only at cells of the form (0, v2, ..., vd).
template <class F>
RankTable lattice_rank_invariants(const SimplexwiseDAG& dag, const LatticeSpec& spec, int k,
                                  const F& field) {
    auto li = detail::index_lattice(dag, spec);
    RankTable table;
    for (const auto& [cell, v] : li.vertex_at) {
        if (cell[0] != 0) continue;
        ReductionState<F> st(field);
        for (int id : dag.vertices[v].mask.members) st.insert(id, *dag.complex);
        std::vector<std::pair<int, int>> path;
        detail::lattice_walk(dag, spec, li, cell, cell, std::move(st), k, path, table);
    }
    return table;
}

// `source,target,k,rank` rows with a header, sorted lexicographically.
inline std::string rank_table_csv(const RankTable& table, const SimplexwiseDAG& dag) {
    std::vector<std::string> rows;
    for (const auto& [key, r] : table.entries) {
        auto [u, w, k] = key;
        rows.push_back(dag.vertices[u].id + "," + dag.vertices[w].id + "," + std::to_string(k) +
                       "," + std::to_string(r));
    }
    std::sort(rows.begin(), rows.end());
    std::string out = "source,target,k,rank\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

}  // namespace dagph

#endif
