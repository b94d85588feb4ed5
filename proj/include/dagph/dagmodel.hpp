#ifndef DAGPH_DAGMODEL_HPP
#define DAGPH_DAGMODEL_HPP

#include <memory>
#include <optional>
#include <queue>
#include <string>

#include <json.hpp>

#include "dagph/simplicial.hpp"

namespace dagph {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A DAG whose vertices carry subcomplexes of one ambient complex and whose
// edges are subset inclusions.
struct GraphFiltration {
    std::shared_ptr<GlobalComplex> complex;
    std::vector<std::string> vertex_ids;
    std::vector<SubcomplexMask> masks;              // parallel to vertex_ids
    std::vector<std::pair<int, int>> edges;         // (src index, dst index)

    int vertex_index(const std::string& id) const {
        for (std::size_t i = 0; i < vertex_ids.size(); ++i)
            if (vertex_ids[i] == id) return static_cast<int>(i);
        return -1;
    }
};

struct ValidationReport {
    bool ok = true;
    std::string kind;     // "cycle-found" | "inclusion-violated"
    int edge = -1;
    std::string message;
};

// Topological order of 0..n-1 under the given edges, or nullopt on a cycle.
inline std::optional<std::vector<int>> topo_order(int n,
                                                  const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    std::vector<int> indeg(n, 0);
    for (auto& [u, v] : edges) {
        adj[u].push_back(v);
        ++indeg[v];
    }
    // smallest-index-first for determinism
    std::priority_queue<int, std::vector<int>, std::greater<int>> q;
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) q.push(i);
    std::vector<int> order;
    while (!q.empty()) {
        int u = q.top();
        q.pop();
        order.push_back(u);
        for (int v : adj[u])
            if (--indeg[v] == 0) q.push(v);
    }
    if (static_cast<int>(order.size()) != n) return std::nullopt;
    return order;
}

inline ValidationReport validate(const GraphFiltration& gf) {
    ValidationReport rep;
    int n = static_cast<int>(gf.vertex_ids.size());
    for (auto& [u, v] : gf.edges)
        if (u < 0 || v < 0 || u >= n || v >= n) {
            rep.ok = false;
            rep.kind = "inclusion-violated";
            rep.message = "edge endpoint out of range";
            return rep;
        }
    if (!topo_order(n, gf.edges)) {
        rep.ok = false;
        rep.kind = "cycle-found";
        rep.message = "edge relation contains a directed cycle";
        return rep;
    }
    for (std::size_t e = 0; e < gf.edges.size(); ++e) {
        auto [u, v] = gf.edges[e];
        if (!gf.masks[u].subset_of(gf.masks[v])) {
            rep.ok = false;
            rep.kind = "inclusion-violated";
            rep.edge = static_cast<int>(e);
            rep.message = "edge " + gf.vertex_ids[u] + " -> " + gf.vertex_ids[v] +
                          " is not an inclusion";
            return rep;
        }
    }
    for (std::size_t i = 0; i < gf.masks.size(); ++i)
        if (!gf.masks[i].closed_under_faces()) {
            rep.ok = false;
            rep.kind = "inclusion-violated";
            rep.message = "vertex " + gf.vertex_ids[i] + " is not closed under faces";
            return rep;
        }
    return rep;
}

// Refined form: every edge adds at most one simplex.  Vertices inserted by
// refinement carry the id of their originating edge.
struct SimplexwiseDAG {
    struct Vertex {
        std::string id;
        SubcomplexMask mask;
        bool inserted = false;   // created by refinement
        int origin_edge = -1;    // original edge index for inserted vertices
    };
    struct Edge {
        int src = 0, dst = 0;
        std::optional<int> added_simplex;  // global simplex id; nullopt = identity edge
    };

    std::shared_ptr<GlobalComplex> complex;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<int> original_vertex;  // original index -> refined index

    int vertex_index(const std::string& id) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i].id == id) return static_cast<int>(i);
        return -1;
    }
};

// Split every edge into a chain of single-simplex inclusions, faces before
// cofaces (ascending simplex id, which is face-ordered).
inline SimplexwiseDAG refine_to_simplexwise(const GraphFiltration& gf) {
    SimplexwiseDAG out;
    out.complex = gf.complex;
    for (std::size_t i = 0; i < gf.vertex_ids.size(); ++i)
        out.vertices.push_back({gf.vertex_ids[i], gf.masks[i], false, -1});
    out.original_vertex.resize(gf.vertex_ids.size());
    for (std::size_t i = 0; i < gf.vertex_ids.size(); ++i)
        out.original_vertex[i] = static_cast<int>(i);
    for (std::size_t e = 0; e < gf.edges.size(); ++e) {
        auto [u, v] = gf.edges[e];
        std::vector<int> diff;
        for (int id : gf.masks[v].members)
            if (!gf.masks[u].members.count(id)) diff.push_back(id);
        std::sort(diff.begin(), diff.end());
        if (diff.empty()) {
            out.edges.push_back({u, v, std::nullopt});
            continue;
        }
        int prev = u;
        SubcomplexMask cur = gf.masks[u];
        for (std::size_t step = 0; step < diff.size(); ++step) {
            cur.members.insert(diff[step]);
            int next;
            if (step + 1 == diff.size()) {
                next = v;
            } else {
                next = static_cast<int>(out.vertices.size());
                out.vertices.push_back({gf.vertex_ids[u] + "+" + std::to_string(step + 1) + ">" +
                                            gf.vertex_ids[v],
                                        cur, true, static_cast<int>(e)});
            }
            out.edges.push_back({prev, next, diff[step]});
            prev = next;
        }
    }
    return out;
}

// A connected set of vertices of a SimplexwiseDAG together with its induced
// edge set.
struct SubgraphSelector {
    std::vector<int> vertices;       // refined-DAG vertex indices, ascending
    std::vector<int> edge_indices;   // induced edges (indices into dag.edges)

    static SubgraphSelector induced(const SimplexwiseDAG& dag, std::vector<int> verts) {
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        SubgraphSelector sel;
        sel.vertices = std::move(verts);
        std::set<int> vs(sel.vertices.begin(), sel.vertices.end());
        for (std::size_t i = 0; i < dag.edges.size(); ++i)
            if (vs.count(dag.edges[i].src) && vs.count(dag.edges[i].dst))
                sel.edge_indices.push_back(static_cast<int>(i));
        return sel;
    }

    static SubgraphSelector whole(const SimplexwiseDAG& dag) {
        std::vector<int> all(dag.vertices.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        return induced(dag, all);
    }

    bool weakly_connected(const SimplexwiseDAG& dag) const {
        if (vertices.empty()) return false;
        std::map<int, std::vector<int>> adj;
        for (int e : edge_indices) {
            adj[dag.edges[e].src].push_back(dag.edges[e].dst);
            adj[dag.edges[e].dst].push_back(dag.edges[e].src);
        }
        std::set<int> seen{vertices[0]};
        std::vector<int> work{vertices[0]};
        while (!work.empty()) {
            int u = work.back();
            work.pop_back();
            for (int w : adj[u])
                if (seen.insert(w).second) work.push_back(w);
        }
        return seen.size() == vertices.size();
    }
};

// ---- JSON document format ----
// {"simplices": [[0],[1],[0,1],...],
//  "vertices": [{"id":"X0","members":[0,1]}, ...],
//  "edges": [["X0","X1"], ...]}

inline GraphFiltration parse_filtration(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("simplices") || !j.contains("vertices") ||
        !j.contains("edges"))
        throw ParseError("document must have fields: simplices, vertices, edges");
    std::vector<Simplex> listed;
    for (std::size_t i = 0; i < j["simplices"].size(); ++i) {
        const auto& arr = j["simplices"][i];
        if (!arr.is_array()) throw ParseError("simplices[" + std::to_string(i) + "] is not a list");
        std::vector<int> vs;
        for (const auto& v : arr) vs.push_back(v.get<int>());
        try {
            listed.emplace_back(vs);
        } catch (const std::invalid_argument& e) {
            throw ParseError("simplices[" + std::to_string(i) + "]: " + e.what());
        }
    }
    GraphFiltration gf;
    gf.complex = std::make_shared<GlobalComplex>(close_under_faces(listed));
    for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
        const auto& v = j["vertices"][i];
        if (!v.contains("id") || !v.contains("members"))
            throw ParseError("vertices[" + std::to_string(i) + "] needs id and members");
        std::string id = v["id"].get<std::string>();
        if (gf.vertex_index(id) != -1) throw ParseError("duplicate vertex id: " + id);
        std::set<int> members;
        for (const auto& m : v["members"]) {
            int idx = m.get<int>();
            if (idx < 0 || idx >= static_cast<int>(listed.size()))
                throw ParseError("vertex " + id + ": member index " + std::to_string(idx) +
                                 " out of range");
            members.insert(gf.complex->id_of(listed[idx]));
        }
        gf.vertex_ids.push_back(id);
        gf.masks.emplace_back(*gf.complex, std::move(members));
    }
    for (std::size_t i = 0; i < j["edges"].size(); ++i) {
        const auto& e = j["edges"][i];
        if (!e.is_array() || e.size() != 2)
            throw ParseError("edges[" + std::to_string(i) + "] must be a [src,dst] pair");
        int u = gf.vertex_index(e[0].get<std::string>());
        int v = gf.vertex_index(e[1].get<std::string>());
        if (u < 0) throw ParseError("edge references unknown vertex id: " + e[0].get<std::string>());
        if (v < 0) throw ParseError("edge references unknown vertex id: " + e[1].get<std::string>());
        gf.edges.emplace_back(u, v);
    }
    return gf;
}

inline std::string serialize_filtration(const GraphFiltration& gf) {
    nlohmann::json j;
    j["simplices"] = nlohmann::json::array();
    for (const auto& s : gf.complex->simplices) j["simplices"].push_back(s.vertices);
    j["vertices"] = nlohmann::json::array();
    for (std::size_t i = 0; i < gf.vertex_ids.size(); ++i) {
        nlohmann::json v;
        v["id"] = gf.vertex_ids[i];
        v["members"] = std::vector<int>(gf.masks[i].members.begin(), gf.masks[i].members.end());
        j["vertices"].push_back(v);
    }
    j["edges"] = nlohmann::json::array();
    for (auto& [u, v] : gf.edges)
        j["edges"].push_back({gf.vertex_ids[u], gf.vertex_ids[v]});
    return j.dump(2) + "\n";
}

}  // namespace dagph

#endif
