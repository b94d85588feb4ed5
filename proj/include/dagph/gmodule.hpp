#ifndef DAGPH_GMODULE_HPP
#define DAGPH_GMODULE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "dagph/dagmodel.hpp"

namespace dagph {

// Commutative G-module: one vector space per graph vertex, one linear map per
// edge, with commuting path compositions.
template <class F>
struct GModule {
    struct Edge {
        int src = 0, dst = 0;  // dag vertex indices
        Matrix<F> map;         // dims[dst] x dims[src]
    };

    std::vector<int> vertices;  // dag vertex indices, ascending
    std::vector<std::string> ids;
    std::vector<std::size_t> dims;  // parallel to vertices
    std::vector<Edge> edges;

    int index_of(int dag_vertex) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), dag_vertex);
        if (it == vertices.end() || *it != dag_vertex) return -1;
        return static_cast<int>(it - vertices.begin());
    }
};

// The k-th homology module of the selected subgraph, in the canonical cycle
// bases.
template <class F>
GModule<F> homology_module(const SimplexwiseDAG& dag, const SubgraphSelector& sel, int k,
                           const F& field) {
    GModule<F> m;
    std::map<int, HomologyBasis<F>> bases;
    for (int v : sel.vertices) {
        bases.emplace(v, homology_basis(dag.vertices[v].mask, k, field));
        m.vertices.push_back(v);
        m.ids.push_back(dag.vertices[v].id);
        m.dims.push_back(bases.at(v).dim());
    }
    for (int e : sel.edge_indices) {
        int u = dag.edges[e].src, w = dag.edges[e].dst;
        m.edges.push_back({u, w, induced_map(bases.at(u), bases.at(w), field)});
    }
    return m;
}

// Σ_v dim W_v − Σ_e rank f_e
template <class F>
long module_dimension(const GModule<F>& m) {
    long d = 0;
    for (auto n : m.dims) d += static_cast<long>(n);
    for (const auto& e : m.edges) d -= static_cast<long>(rank(e.map));
    return d;
}

// True iff the module is (isomorphic to) the elementary module of the given
// carrier: one-dimensional with identity maps on the carrier after a
// consistent rescaling, zero elsewhere.
template <class F>
bool is_elementary(const GModule<F>& m, const SubgraphSelector& carrier, const F& field) {
    std::set<int> cset(carrier.vertices.begin(), carrier.vertices.end());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        std::size_t want = cset.count(m.vertices[i]) ? 1 : 0;
        if (m.dims[i] != want) return false;
    }
    // rescaling consistency: propagate a unit over the carrier-internal edges
    std::map<int, std::vector<std::pair<int, typename F::Elem>>> adj;
    for (const auto& e : m.edges) {
        if (!cset.count(e.src) || !cset.count(e.dst)) continue;
        if (e.map.rows != 1 || e.map.cols != 1) return false;
        auto a = e.map.at(0, 0);
        if (field.is_zero(a)) return false;
        adj[e.src].push_back({e.dst, a});                 // scale_dst = a * scale_src
        adj[e.dst].push_back({e.src, field.inv(a)});
    }
    if (carrier.vertices.empty()) return true;
    std::map<int, typename F::Elem> scale;
    std::vector<int> work{carrier.vertices[0]};
    scale[carrier.vertices[0]] = field.one();
    while (!work.empty()) {
        int v = work.back();
        work.pop_back();
        for (const auto& [w, a] : adj[v]) {
            auto s = field.mul(a, scale.at(v));
            auto it = scale.find(w);
            if (it == scale.end()) {
                scale[w] = s;
                work.push_back(w);
            } else if (!field.eq(it->second, s)) {
                return false;  // inconsistent cycle
            }
        }
    }
    return scale.size() == carrier.vertices.size();  // carrier must be connected
}

// Largest subspace of the compatible families that projects injectively into
// every vertex of the (connected) vertex subset.  Homology-level counterpart
// of the chain-level fixpoint; exact over ℚ and large prime fields.
template <class F>
std::size_t module_subgraph_rank(const GModule<F>& m, const std::vector<int>& verts,
                                 const F& field) {
    std::set<int> vs(verts.begin(), verts.end());
    std::map<int, std::size_t> offset;
    std::size_t total = 0;
    for (int v : verts) {
        int i = m.index_of(v);
        if (i < 0) throw std::invalid_argument("module_subgraph_rank: vertex not in module");
        offset[v] = total;
        total += m.dims[i];
    }
    std::size_t nrows = 0;
    for (const auto& e : m.edges)
        if (vs.count(e.src) && vs.count(e.dst)) nrows += e.map.rows;
    Matrix<F> constraints(nrows, total, field);
    std::size_t row = 0;
    for (const auto& e : m.edges) {
        if (!vs.count(e.src) || !vs.count(e.dst)) continue;
        for (std::size_t r = 0; r < e.map.rows; ++r, ++row) {
            for (std::size_t c = 0; c < e.map.cols; ++c)
                constraints.at(row, offset[e.src] + c) = e.map.at(r, c);
            constraints.at(row, offset[e.dst] + r) = field.neg(field.one());
        }
    }
    auto L = kernel_basis(constraints);
    std::size_t minr = L.rows;
    for (int v : verts) {
        std::size_t dv = m.dims[m.index_of(v)];
        Matrix<F> block(L.rows, dv, field);
        for (std::size_t r = 0; r < L.rows; ++r)
            for (std::size_t c = 0; c < dv; ++c) block.at(r, c) = L.at(r, offset[v] + c);
        minr = std::min(minr, rank(block));
    }
    return minr;
}

// ---- persistence diagrams over a linear index family ----

struct DiagramPoint {
    double birth = 0;
    double death = 0;  // +inf for essential classes
    std::size_t multiplicity = 1;

    bool operator==(const DiagramPoint&) const = default;
};

struct PersistenceDiagram {
    std::vector<DiagramPoint> points;  // sorted by (birth, death)

    std::size_t total_multiplicity() const {
        std::size_t n = 0;
        for (const auto& p : points) n += p.multiplicity;
        return n;
    }
};

struct NonIntervalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invert a rank function over the linear family 0..n by inclusion-exclusion.
// A point (i, j) means: alive at every index of [i, j]; death is ∞ when the
// class is still alive at index n.  Negative multiplicities mean the input is
// not interval-decomposable and are reported as errors.
inline PersistenceDiagram diagram_from_ranks(const std::function<std::size_t(int, int)>& r,
                                             int n) {
    auto rr = [&](int i, int j) -> long {
        if (i < 0 || j > n || i > j) return 0;
        return static_cast<long>(r(i, j));
    };
    PersistenceDiagram d;
    for (int i = 0; i <= n; ++i) {
        for (int j = i; j < n; ++j) {
            long mult = rr(i, j) - rr(i - 1, j) - rr(i, j + 1) + rr(i - 1, j + 1);
            if (mult < 0)
                throw NonIntervalError("rank function is not interval-decomposable at (" +
                                       std::to_string(i) + "," + std::to_string(j) + ")");
            if (mult > 0)
                d.points.push_back({static_cast<double>(i), static_cast<double>(j),
                                    static_cast<std::size_t>(mult)});
        }
        long essential = rr(i, n) - rr(i - 1, n);
        if (essential < 0)
            throw NonIntervalError("rank function is not interval-decomposable at (" +
                                   std::to_string(i) + ",inf)");
        if (essential > 0)
            d.points.push_back({static_cast<double>(i), std::numeric_limits<double>::infinity(),
                                static_cast<std::size_t>(essential)});
    }
    std::sort(d.points.begin(), d.points.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
        return std::pair(a.birth, a.death) < std::pair(b.birth, b.death);
    });
    return d;
}

// `birth,death,multiplicity` rows with a header; `inf` for ∞.
inline std::string diagram_csv(const PersistenceDiagram& d) {
    std::ostringstream out;
    out << "birth,death,multiplicity\n";
    auto pts = d.points;
    std::sort(pts.begin(), pts.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
        return std::pair(a.birth, a.death) < std::pair(b.birth, b.death);
    });
    for (const auto& p : pts) {
        out << p.birth << ",";
        if (std::isinf(p.death))
            out << "inf";
        else
            out << p.death;
        out << "," << p.multiplicity << "\n";
    }
    return out.str();
}

namespace detail {

inline std::vector<std::pair<double, double>> expand_finite(const PersistenceDiagram& d) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : d.points)
        if (!std::isinf(p.death))
            for (std::size_t t = 0; t < p.multiplicity; ++t) out.emplace_back(p.birth, p.death);
    return out;
}

inline std::vector<double> essential_births(const PersistenceDiagram& d) {
    std::vector<double> out;
    for (const auto& p : d.points)
        if (std::isinf(p.death))
            for (std::size_t t = 0; t < p.multiplicity; ++t) out.push_back(p.birth);
    std::sort(out.begin(), out.end());
    return out;
}

// perfect matching feasibility at threshold t (points + diagonal copies)
inline bool bottleneck_feasible(const std::vector<std::pair<double, double>>& a,
                                const std::vector<std::pair<double, double>>& b, double t) {
    const std::size_t n = a.size(), mcount = b.size();
    const double eps = 1e-12;
    auto cost = [](const std::pair<double, double>& p, const std::pair<double, double>& q) {
        return std::max(std::abs(p.first - q.first), std::abs(p.second - q.second));
    };
    auto diag = [](const std::pair<double, double>& p) { return (p.second - p.first) / 2; };
    // left: a points then mcount diagonal nodes; right: b points then n diagonals
    std::size_t L = n + mcount, R = mcount + n;
    std::vector<std::vector<int>> adj(L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < R; ++j) {
            bool ok;
            if (i < n && j < mcount)
                ok = cost(a[i], b[j]) <= t + eps;
            else if (i < n)
                ok = diag(a[i]) <= t + eps;
            else if (j < mcount)
                ok = diag(b[j]) <= t + eps;
            else
                ok = true;
            if (ok) adj[i].push_back(static_cast<int>(j));
        }
    std::vector<int> match_r(R, -1);
    std::vector<char> used;
    std::function<bool(int)> kuhn = [&](int u) -> bool {
        for (int v : adj[u]) {
            if (used[v]) continue;
            used[v] = 1;
            if (match_r[v] < 0 || kuhn(match_r[v])) {
                match_r[v] = u;
                return true;
            }
        }
        return false;
    };
    for (std::size_t u = 0; u < L; ++u) {
        used.assign(R, 0);
        if (!kuhn(static_cast<int>(u))) return false;
    }
    return true;
}

}  // namespace detail

// Bottleneck distance with diagonal matching (∞-norm); essential classes must
// match essential classes, else the distance is infinite.
inline double bottleneck(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
    auto e1 = detail::essential_births(d1), e2 = detail::essential_births(d2);
    if (e1.size() != e2.size()) return std::numeric_limits<double>::infinity();
    double ess = 0;
    for (std::size_t i = 0; i < e1.size(); ++i) ess = std::max(ess, std::abs(e1[i] - e2[i]));
    auto a = detail::expand_finite(d1), b = detail::expand_finite(d2);
    std::vector<double> cands{0};
    for (const auto& p : a) {
        cands.push_back((p.second - p.first) / 2);
        for (const auto& q : b)
            cands.push_back(std::max(std::abs(p.first - q.first), std::abs(p.second - q.second)));
    }
    for (const auto& q : b) cands.push_back((q.second - q.first) / 2);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::size_t lo = 0, hi = cands.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (detail::bottleneck_feasible(a, b, cands[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return std::max(ess, cands[lo]);
}

}  // namespace dagph

#endif
