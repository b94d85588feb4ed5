#ifndef DAGPH_TESTS_FIXTURES_HPP
#define DAGPH_TESTS_FIXTURES_HPP

#include <array>

#include "dagph/dagmodel.hpp"

namespace dagph::fixtures {

// Triangulated sphere: two n×n grids of cells glued along their boundary
// ("pillowcase").  Vertex numbering: top sheet (i,j) -> i*(n+1)+j; interior
// bottom vertices get fresh ids above that.
struct GridSphere {
    std::shared_ptr<GlobalComplex> complex;
    int n = 0;
    std::vector<std::vector<int>> top;     // vertex ids, (n+1)x(n+1)
    std::vector<std::vector<int>> bottom;  // shares the boundary ring with top
};

inline GridSphere grid_sphere(int n) {
    GridSphere gs;
    gs.n = n;
    int next = (n + 1) * (n + 1);
    gs.top.assign(n + 1, std::vector<int>(n + 1));
    gs.bottom.assign(n + 1, std::vector<int>(n + 1));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            gs.top[i][j] = i * (n + 1) + j;
            bool boundary = i == 0 || j == 0 || i == n || j == n;
            gs.bottom[i][j] = boundary ? gs.top[i][j] : next++;
        }
    std::vector<Simplex> seed;
    for (const auto* sheet : {&gs.top, &gs.bottom})
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto& v = *sheet;
                seed.push_back(Simplex({v[i][j], v[i + 1][j], v[i + 1][j + 1]}));
                seed.push_back(Simplex({v[i][j], v[i][j + 1], v[i + 1][j + 1]}));
            }
    gs.complex = std::make_shared<GlobalComplex>(close_under_faces(seed));
    return gs;
}

// Fig-4-style graph: a sphere with four vertex-disjoint open triangles
// removed, with each hole's boundary circle as a separate source vertex.
struct FourPunctured {
    GraphFiltration gf;  // vertices C1..C4 then S; edges Ci -> S
    std::vector<int> hole_faces;
};

inline FourPunctured four_punctured_sphere() {
    auto gs = grid_sphere(3);
    const auto& gc = *gs.complex;
    FourPunctured fp;
    fp.gf.complex = gs.complex;
    // pairwise vertex-disjoint lower triangles of cells (0,0),(0,2),(2,0),(2,2)
    for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {0, 2}, {2, 0}, {2, 2}}) {
        int id = gc.id_of(
            Simplex({gs.top[i][j], gs.top[i + 1][j], gs.top[i + 1][j + 1]}));
        if (id < 0) throw std::logic_error("fixture: hole face missing");
        fp.hole_faces.push_back(id);
    }
    SubcomplexMask sphere = SubcomplexMask::full(gc);
    for (int id : fp.hole_faces) sphere.members.erase(id);
    for (std::size_t h = 0; h < fp.hole_faces.size(); ++h) {
        SubcomplexMask circle(gc, {});
        for (int fid : gc.face_ids[fp.hole_faces[h]]) circle.members.insert(fid);
        circle.close();
        fp.gf.vertex_ids.push_back("C" + std::to_string(h + 1));
        fp.gf.masks.push_back(std::move(circle));
    }
    fp.gf.vertex_ids.push_back("S");
    fp.gf.masks.push_back(std::move(sphere));
    for (int h = 0; h < 4; ++h) fp.gf.edges.emplace_back(h, 4);
    return fp;
}

// Use the filtration graph as-is (coordinate-inclusion edges, no refinement).
inline SimplexwiseDAG as_unrefined_dag(const GraphFiltration& gf) {
    SimplexwiseDAG dag;
    dag.complex = gf.complex;
    for (std::size_t i = 0; i < gf.vertex_ids.size(); ++i)
        dag.vertices.push_back({gf.vertex_ids[i], gf.masks[i], false, -1});
    for (auto [u, v] : gf.edges) dag.edges.push_back({u, v, std::nullopt});
    return dag;
}

// Genus-two surface U = X ∪ Y ∪ Z with the 8-space inclusion poset
//   U; A = X∪Y, B = Y∪Z; C = X, D = Y, E = Z; P = X∩Y, Q = Y∩Z.
// Built as a grid sphere with four open triangles removed and two handle
// tubes glued on: X is the first tube (annulus), Y the punctured sphere,
// Z the second tube plus a disk containing its feet (one-holed torus).
struct GenusTwo {
    GraphFiltration gf;  // vertex order U,A,B,C,D,E,P,Q
};

inline GenusTwo build_genus_two_graph() {
    const int n = 4;
    auto layout = grid_sphere(n);  // only for the sheet vertex ids
    const auto& t = layout.top;
    const auto& bo = layout.bottom;

    auto lower = [](const std::vector<std::vector<int>>& v, int i, int j) {
        return Simplex({v[i][j], v[i + 1][j], v[i + 1][j + 1]});
    };
    auto upper = [](const std::vector<std::vector<int>>& v, int i, int j) {
        return Simplex({v[i][j], v[i][j + 1], v[i + 1][j + 1]});
    };
    // hole triangles: pairwise non-adjacent (so tube cross edges are new) and
    // each with an interior vertex (so the bottom sheet cannot fill the hole)
    auto hole_tri = [&](int h) {
        switch (h) {
            case 0: return lower(t, 0, 0);
            case 1: return upper(t, 3, 0);
            case 2: return lower(t, 0, 3);
            default: return lower(t, 3, 3);
        }
    };
    auto is_hole = [&](const std::vector<std::vector<int>>& v, const Simplex& s) {
        if (&v != &t) return false;
        for (int h = 0; h < 4; ++h)
            if (s == hole_tri(h)) return true;
        return false;
    };

    std::vector<Simplex> sphere_tris;  // minus the four holes
    std::vector<Simplex> disk_tris;    // top-sheet columns j >= 2, minus holes
    for (const auto* sheet : {&t, &bo})
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (const auto& s : {lower(*sheet, i, j), upper(*sheet, i, j)}) {
                    if (is_hole(*sheet, s)) continue;
                    sphere_tris.push_back(s);
                    if (sheet == &t && j >= 2) disk_tris.push_back(s);
                }

    auto hole_verts = [&](int h) {
        auto s = hole_tri(h);
        return std::array<int, 3>{s.vertices[0], s.vertices[1], s.vertices[2]};
    };
    auto tube = [](std::array<int, 3> a, std::array<int, 3> b, bool flip) {
        if (flip) std::swap(b[1], b[2]);
        return std::vector<Simplex>{
            Simplex({a[0], a[1], b[0]}), Simplex({a[1], b[0], b[1]}),
            Simplex({a[1], a[2], b[1]}), Simplex({a[2], b[1], b[2]}),
            Simplex({a[2], a[0], b[2]}), Simplex({a[0], b[2], b[0]})};
    };

    // pick the handle gluings that keep the surface orientable
    for (bool f1 : {false, true})
        for (bool f2 : {false, true}) {
            auto tube1 = tube(hole_verts(0), hole_verts(1), f1);
            auto tube2 = tube(hole_verts(2), hole_verts(3), f2);
            std::vector<Simplex> seed = sphere_tris;
            seed.insert(seed.end(), tube1.begin(), tube1.end());
            seed.insert(seed.end(), tube2.begin(), tube2.end());
            auto gc = std::make_shared<GlobalComplex>(close_under_faces(seed));
            RationalField q;
            auto full = SubcomplexMask::full(*gc);
            if (betti(full, 1, q) != 4 || betti(full, 2, q) != 1) continue;

            auto mask_of = [&](const std::vector<Simplex>& tris) {
                SubcomplexMask m(*gc, {});
                for (const auto& s : tris) m.members.insert(gc->id_of(s));
                m.close();
                return m;
            };
            SubcomplexMask x = mask_of(tube1);
            SubcomplexMask y = mask_of(sphere_tris);
            SubcomplexMask zdisk = mask_of(disk_tris);
            SubcomplexMask z = zdisk.set_union(mask_of(tube2));

            GenusTwo g2;
            g2.gf.complex = gc;
            g2.gf.vertex_ids = {"U", "A", "B", "C", "D", "E", "P", "Q"};
            g2.gf.masks = {full,
                           x.set_union(y),
                           y.set_union(z),
                           x,
                           y,
                           z,
                           x.set_intersection(y),
                           y.set_intersection(z)};
            g2.gf.edges = {{6, 3}, {6, 4}, {7, 4}, {7, 5}, {3, 1},
                           {4, 1}, {4, 2}, {5, 2}, {1, 0}, {2, 0}};
            return g2;
        }
    throw std::logic_error("fixture: no orientable handle gluing found");
}

inline const GenusTwo& genus_two_graph() {
    static const GenusTwo cached = build_genus_two_graph();
    return cached;
}

}  // namespace dagph::fixtures

#endif
