#ifndef DAGPH_PIPELINES_HPP
#define DAGPH_PIPELINES_HPP

#include <cctype>
#include <sstream>

#include "dagph/gmodule.hpp"
#include "dagph/subgraph.hpp"

namespace dagph {

// ---- point clouds with exact coordinates ----

// Euclidean point sample; coordinates are exact rationals so that all
// distance comparisons during complex construction are tie-free.
struct PointCloud {
    std::vector<std::vector<Rational>> points;  // all rows share one dimension

    std::size_t size() const { return points.size(); }
    int dimension() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
};

// Decimal literal ("-12.5", "3", "+0.125") to an exact rational.
inline Rational parse_decimal(const std::string& token) {
    std::size_t b = token.find_first_not_of(" \t");
    std::size_t e = token.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("empty number");
    std::string s = token.substr(b, e - b + 1);
    std::size_t pos = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        pos = 1;
    }
    std::string digits;
    long frac_len = 0;
    bool dot = false, any = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c == '.') {
            if (dot) throw ParseError("invalid number: " + s);
            dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (dot) ++frac_len;
            any = true;
        } else {
            throw ParseError("invalid number: " + s);
        }
    }
    if (!any) throw ParseError("invalid number: " + s);
    BigInt num = 0;  // accumulate digits (a string ctor would read "0..." as octal)
    for (char c : digits) num = num * 10 + (c - '0');
    BigInt den = 1;
    for (long i = 0; i < frac_len; ++i) den *= 10;
    Rational r(num, den);
    return neg ? -r : r;
}

// CSV, one point per row, decimal coordinates; blank lines ignored.
inline PointCloud parse_point_cloud(const std::string& text) {
    PointCloud pc;
    std::istringstream in(text);
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<Rational> point;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            try {
                point.push_back(parse_decimal(tok));
            } catch (const ParseError& e) {
                throw ParseError("row " + std::to_string(row) + ": " + e.what());
            }
        }
        if (!pc.points.empty() && point.size() != pc.points[0].size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(pc.points[0].size()) + " coordinates, got " +
                             std::to_string(point.size()));
        pc.points.push_back(std::move(point));
    }
    return pc;
}

inline Rational squared_distance(const PointCloud& pc, int i, int j) {
    Rational s = 0;
    for (std::size_t c = 0; c < pc.points[i].size(); ++c) {
        Rational d = pc.points[i][c] - pc.points[j][c];
        s += d * d;
    }
    return s;
}

// ---- radius schedules ----

struct RadiusSchedule {
    std::vector<Rational> radii;  // strictly increasing
};

inline RadiusSchedule make_schedule(std::vector<Rational> radii) {
    if (radii.empty()) throw std::invalid_argument("radius schedule is empty");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("radius schedule is not strictly increasing");
    return {std::move(radii)};
}

// ---- Vietoris–Rips complexes ----

// All cliques (up to max_dim) of the subset's points under the diameter
// threshold 2r, as simplices on the cloud's point indices.
inline std::vector<Simplex> rips_simplices(const PointCloud& pc, const std::vector<int>& subset,
                                           const Rational& r, int max_dim) {
    Rational thr = 4 * r * r;  // (2r)^2
    std::map<int, std::set<int>> nbr;
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            if (squared_distance(pc, subset[a], subset[b]) <= thr) {
                nbr[subset[a]].insert(subset[b]);
                nbr[subset[b]].insert(subset[a]);
            }
    std::vector<Simplex> out;
    std::vector<std::vector<int>> cliques;
    for (int v : subset) {
        cliques.push_back({v});
        out.push_back(Simplex({v}));
    }
    for (int d = 1; d <= max_dim; ++d) {
        std::vector<std::vector<int>> next;
        for (const auto& c : cliques)
            for (int w : nbr[c.back()]) {
                if (w <= c.back()) continue;
                bool ok = true;
                for (int v : c)
                    if (!nbr[v].count(w)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                auto grown = c;
                grown.push_back(w);
                out.push_back(Simplex(grown));
                next.push_back(std::move(grown));
            }
        cliques = std::move(next);
    }
    return out;
}

// Shared ambient complex: the Rips complex of the whole cloud at the largest
// radius of interest.  Every mask at a smaller radius or on a point subset is
// a literal subcomplex, which is what makes all inclusion edges exact.
struct RipsContext {
    PointCloud cloud;
    std::shared_ptr<GlobalComplex> complex;
    Rational r_max;
    int max_dim = 2;

    std::vector<int> all_points() const {
        std::vector<int> out(cloud.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
        return out;
    }

    SubcomplexMask mask(const std::vector<int>& subset, const Rational& r) const {
        SubcomplexMask m(*complex, {});
        for (const auto& s : rips_simplices(cloud, subset, r, max_dim)) {
            int id = complex->id_of(s);
            if (id < 0) throw std::logic_error("rips mask: simplex beyond context radius");
            m.members.insert(id);
        }
        return m;  // clique sets are closed under faces by construction
    }

    SubcomplexMask mask(const Rational& r) const { return mask(all_points(), r); }
};

inline RipsContext rips_complex(PointCloud pc, const Rational& r_max, int max_dim) {
    if (r_max < 0) throw std::invalid_argument("radius must be nonnegative");
    for (const auto& p : pc.points)
        if (p.size() != pc.points[0].size())
            throw std::invalid_argument("point cloud has mixed dimensions");
    RipsContext ctx{std::move(pc), nullptr, r_max, max_dim};
    ctx.complex = std::make_shared<GlobalComplex>(
        close_under_faces(rips_simplices(ctx.cloud, ctx.all_points(), r_max, max_dim)));
    return ctx;
}

// ---- the parallel-subsample graph ----

// Combine two samples drawn from one point set, deduplicating by exact
// coordinate equality; x_points / y_points index into the merged cloud.
struct MergedClouds {
    PointCloud cloud;
    std::vector<int> x_points, y_points;
};

inline MergedClouds merge_clouds(const PointCloud& x, const PointCloud& y) {
    if (x.size() && y.size() && x.dimension() != y.dimension())
        throw std::invalid_argument("point clouds have different dimensions");
    MergedClouds m;
    std::map<std::vector<Rational>, int> seen;
    auto add = [&](const std::vector<Rational>& p) {
        auto it = seen.find(p);
        if (it != seen.end()) return it->second;
        int id = static_cast<int>(m.cloud.points.size());
        seen[p] = id;
        m.cloud.points.push_back(p);
        return id;
    };
    for (const auto& p : x.points) m.x_points.push_back(add(p));
    for (const auto& p : y.points) m.y_points.push_back(add(p));
    return m;
}

// Three Rips chains over one schedule — the X sample, the Y sample, and the
// combined sample — with cross edges X_i -> U_i and Y_i -> U_i at each level.
struct ParallelGraph {
    GraphFiltration gf;
    RipsContext ctx;
    RadiusSchedule sched;
    int levels = 0;
    std::vector<int> x_vertex, y_vertex, u_vertex;  // gf vertex index per level
};

inline ParallelGraph build_parallel_graph(const PointCloud& x, const PointCloud& y,
                                          const RadiusSchedule& sched, int max_dim) {
    auto checked = make_schedule(sched.radii);
    auto merged = merge_clouds(x, y);
    ParallelGraph pg;
    pg.sched = checked;
    pg.levels = static_cast<int>(checked.radii.size());
    pg.ctx = rips_complex(std::move(merged.cloud), checked.radii.back(), max_dim);
    pg.gf.complex = pg.ctx.complex;
    auto all = pg.ctx.all_points();
    for (int i = 0; i < pg.levels; ++i) {
        const auto& r = checked.radii[i];
        pg.x_vertex.push_back(static_cast<int>(pg.gf.vertex_ids.size()));
        pg.gf.vertex_ids.push_back("X" + std::to_string(i));
        pg.gf.masks.push_back(pg.ctx.mask(merged.x_points, r));
        pg.y_vertex.push_back(static_cast<int>(pg.gf.vertex_ids.size()));
        pg.gf.vertex_ids.push_back("Y" + std::to_string(i));
        pg.gf.masks.push_back(pg.ctx.mask(merged.y_points, r));
        pg.u_vertex.push_back(static_cast<int>(pg.gf.vertex_ids.size()));
        pg.gf.vertex_ids.push_back("U" + std::to_string(i));
        pg.gf.masks.push_back(pg.ctx.mask(all, r));
    }
    for (int i = 0; i < pg.levels; ++i) {
        pg.gf.edges.emplace_back(pg.x_vertex[i], pg.u_vertex[i]);
        pg.gf.edges.emplace_back(pg.y_vertex[i], pg.u_vertex[i]);
        if (i + 1 < pg.levels) {
            pg.gf.edges.emplace_back(pg.x_vertex[i], pg.x_vertex[i + 1]);
            pg.gf.edges.emplace_back(pg.y_vertex[i], pg.y_vertex[i + 1]);
            pg.gf.edges.emplace_back(pg.u_vertex[i], pg.u_vertex[i + 1]);
        }
    }
    auto rep = validate(pg.gf);
    if (!rep.ok) throw std::logic_error("parallel graph failed validation: " + rep.message);
    return pg;
}

// Use a graph filtration as a DAG directly, one edge per inclusion.
inline SimplexwiseDAG as_simplexwise(const GraphFiltration& gf) {
    SimplexwiseDAG dag;
    dag.complex = gf.complex;
    for (std::size_t i = 0; i < gf.vertex_ids.size(); ++i)
        dag.vertices.push_back({gf.vertex_ids[i], gf.masks[i], false, -1});
    dag.original_vertex.resize(gf.vertex_ids.size());
    for (std::size_t i = 0; i < gf.vertex_ids.size(); ++i)
        dag.original_vertex[i] = static_cast<int>(i);
    for (auto [u, v] : gf.edges) dag.edges.push_back({u, v, std::nullopt});
    return dag;
}

// ---- window ranks and level-indexed diagrams ----

// R(i, j) over all level windows i <= j of a leveled graph.
struct WindowRanks {
    int levels = 0;
    std::vector<std::vector<std::size_t>> table;  // table[i][j], valid for i <= j

    std::size_t rank(int i, int j) const { return table[i][j]; }
};

// Which engine computes each window's subgraph rank: the homology-level
// compatibility system over the graph's homology module (default), or the
// chain-level fixpoint propagation.
enum class WindowEngine { homology, chain };

namespace detail {

// Window ranks over a graph whose vertices are grouped into levels; `window`
// maps a level interval to the DAG vertex set spanning it.  Windows are
// independent pure computations and run in parallel.
template <class F>
WindowRanks window_ranks(const SimplexwiseDAG& dag,
                         const std::function<std::vector<int>(int, int)>& window, int levels,
                         int k, const F& field, WindowEngine engine) {
    WindowRanks wr;
    wr.levels = levels;
    wr.table.assign(levels, std::vector<std::size_t>(levels, 0));
    std::optional<GModule<F>> mod;
    if (engine == WindowEngine::homology)
        mod = homology_module(dag, SubgraphSelector::whole(dag), k, field);
    std::vector<std::pair<int, int>> wins;
    for (int i = 0; i < levels; ++i)
        for (int j = i; j < levels; ++j) wins.emplace_back(i, j);
    int nw = static_cast<int>(wins.size());
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < nw; ++t) {
        auto [i, j] = wins[t];
        auto verts = window(i, j);
        std::size_t r =
            engine == WindowEngine::homology
                ? module_subgraph_rank(*mod, verts, field)
                : persistence_rank(dag, SubgraphSelector::induced(dag, verts), k, field).rank;
        wr.table[i][j] = r;
    }
    return wr;
}

}  // namespace detail

// `start,end,rank` rows with a header, windows in (start, end) order.
inline std::string window_rank_csv(const WindowRanks& wr) {
    std::ostringstream out;
    out << "start,end,rank\n";
    for (int i = 0; i < wr.levels; ++i)
        for (int j = i; j < wr.levels; ++j) out << i << "," << j << "," << wr.rank(i, j) << "\n";
    return out.str();
}

// Replace level indices by their schedule radii (death stays ∞ for essential
// classes).  Reported alongside the index-scale diagram because the paper's
// normalization units are ambiguous.
inline PersistenceDiagram scale_to_radii(const PersistenceDiagram& d,
                                         const RadiusSchedule& sched) {
    PersistenceDiagram out;
    for (const auto& p : d.points) {
        DiagramPoint q = p;
        q.birth = sched.radii[static_cast<std::size_t>(p.birth)].convert_to<double>();
        if (!std::isinf(p.death))
            q.death = sched.radii[static_cast<std::size_t>(p.death)].convert_to<double>();
        out.points.push_back(q);
    }
    return out;
}

// ---- subsample persistence (parallel graph application) ----

struct SubsampleResult {
    WindowRanks ranks;
    PersistenceDiagram diagram;         // level-index scale
    PersistenceDiagram radius_diagram;  // schedule-radius scale
};

template <class F>
SubsampleResult subsample_persistence(const ParallelGraph& pg, int k, const F& field,
                                      WindowEngine engine = WindowEngine::homology) {
    auto dag = as_simplexwise(pg.gf);
    auto window = [&](int i, int j) {
        std::vector<int> verts;
        for (int l = i; l <= j; ++l) {
            verts.push_back(pg.x_vertex[l]);
            verts.push_back(pg.y_vertex[l]);
            verts.push_back(pg.u_vertex[l]);
        }
        return verts;
    };
    SubsampleResult res;
    res.ranks = detail::window_ranks(dag, window, pg.levels, k, field, engine);
    res.diagram = diagram_from_ranks(
        [&](int i, int j) { return res.ranks.rank(i, j); }, pg.levels - 1);
    res.radius_diagram = scale_to_radii(res.diagram, pg.sched);
    return res;
}

// ---- filtration comparison (intersection/union application) ----

// Four columns per level — X∩Y, X, Y, X∪Y — with the per-level inclusion
// edges ∩→X, ∩→Y, X→∪, Y→∪ and vertical edges along each column.
struct ComparisonGraph {
    GraphFiltration gf;
    int levels = 0;
    std::vector<int> i_vertex, x_vertex, y_vertex, u_vertex;
};

inline ComparisonGraph build_comparison_graph(const std::vector<SubcomplexMask>& xf,
                                              const std::vector<SubcomplexMask>& yf,
                                              std::shared_ptr<GlobalComplex> complex = nullptr) {
    if (xf.empty() || xf.size() != yf.size())
        throw std::invalid_argument("comparison graph needs two equal-length filtrations");
    if (xf[0].complex != yf[0].complex)
        throw std::invalid_argument("filtrations must share one ambient complex");
    if (complex && complex.get() != xf[0].complex)
        throw std::invalid_argument("complex handle does not match the filtrations");
    for (std::size_t i = 0; i + 1 < xf.size(); ++i)
        if (!xf[i].subset_of(xf[i + 1]) || !yf[i].subset_of(yf[i + 1]))
            throw std::invalid_argument("input filtrations are not monotone");
    ComparisonGraph cg;
    cg.levels = static_cast<int>(xf.size());
    // fall back to a non-owning handle; the masks keep the complex referenced
    cg.gf.complex = complex ? std::move(complex)
                            : std::shared_ptr<GlobalComplex>(
                                  std::shared_ptr<GlobalComplex>(),
                                  const_cast<GlobalComplex*>(xf[0].complex));
    for (int i = 0; i < cg.levels; ++i) {
        auto add = [&](const std::string& tag, SubcomplexMask m, std::vector<int>& slot) {
            slot.push_back(static_cast<int>(cg.gf.vertex_ids.size()));
            cg.gf.vertex_ids.push_back(tag + std::to_string(i));
            cg.gf.masks.push_back(std::move(m));
        };
        add("I", xf[i].set_intersection(yf[i]), cg.i_vertex);
        add("X", xf[i], cg.x_vertex);
        add("Y", yf[i], cg.y_vertex);
        add("U", xf[i].set_union(yf[i]), cg.u_vertex);
    }
    for (int i = 0; i < cg.levels; ++i) {
        cg.gf.edges.emplace_back(cg.i_vertex[i], cg.x_vertex[i]);
        cg.gf.edges.emplace_back(cg.i_vertex[i], cg.y_vertex[i]);
        cg.gf.edges.emplace_back(cg.x_vertex[i], cg.u_vertex[i]);
        cg.gf.edges.emplace_back(cg.y_vertex[i], cg.u_vertex[i]);
        if (i + 1 < cg.levels)
            for (const auto* col : {&cg.i_vertex, &cg.x_vertex, &cg.y_vertex, &cg.u_vertex})
                cg.gf.edges.emplace_back((*col)[i], (*col)[i + 1]);
    }
    auto rep = validate(cg.gf);
    if (!rep.ok) throw std::logic_error("comparison graph failed validation: " + rep.message);
    return cg;
}

// Standard persistence of a single monotone filtration at level granularity:
// rank(i, j) is the rank of the inclusion-induced map H_k(F_i) -> H_k(F_j),
// inverted into a diagram by inclusion–exclusion.
template <class F>
PersistenceDiagram filtration_diagram(const std::vector<SubcomplexMask>& masks, int k,
                                      const F& field) {
    const int L = static_cast<int>(masks.size());
    if (L == 0) return {};
    std::vector<HomologyBasis<F>> bases;
    for (const auto& m : masks) bases.push_back(homology_basis(m, k, field));
    std::vector<Matrix<F>> step;  // H(F_i) -> H(F_{i+1})
    for (int i = 0; i + 1 < L; ++i)
        step.push_back(induced_map(bases[i], bases[i + 1], field));
    std::vector<std::vector<std::size_t>> r(L, std::vector<std::size_t>(L, 0));
    for (int i = 0; i < L; ++i) {
        Matrix<F> cur = Matrix<F>::identity(bases[i].dim(), field);
        r[i][i] = bases[i].dim();
        for (int j = i + 1; j < L; ++j) {
            cur = step[j - 1].mul(cur);
            r[i][j] = rank(cur);
        }
    }
    return diagram_from_ranks([&](int i, int j) { return r[i][j]; }, L - 1);
}

struct CompareResult {
    PersistenceDiagram diagram_x, diagram_y, diagram_g;  // level-index scale
    WindowRanks ranks;                                   // comparison-graph windows
    double dist_x = 0, dist_y = 0;                       // bottleneck(X, G), bottleneck(Y, G)
};

template <class F>
CompareResult compare_shapes(const std::vector<SubcomplexMask>& xf,
                             const std::vector<SubcomplexMask>& yf, int k, const F& field,
                             WindowEngine engine = WindowEngine::homology) {
    auto cg = build_comparison_graph(xf, yf);
    CompareResult res;
    res.diagram_x = filtration_diagram(xf, k, field);
    res.diagram_y = filtration_diagram(yf, k, field);
    auto dag = as_simplexwise(cg.gf);
    auto window = [&](int i, int j) {
        std::vector<int> verts;
        for (int l = i; l <= j; ++l) {
            verts.push_back(cg.i_vertex[l]);
            verts.push_back(cg.x_vertex[l]);
            verts.push_back(cg.y_vertex[l]);
            verts.push_back(cg.u_vertex[l]);
        }
        return verts;
    };
    res.ranks = detail::window_ranks(dag, window, cg.levels, k, field, engine);
    res.diagram_g = diagram_from_ranks(
        [&](int i, int j) { return res.ranks.rank(i, j); }, cg.levels - 1);
    res.dist_x = bottleneck(res.diagram_x, res.diagram_g);
    res.dist_y = bottleneck(res.diagram_y, res.diagram_g);
    return res;
}

}  // namespace dagph

#endif
