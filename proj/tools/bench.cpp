// Benchmark harness: runtime scaling on doubling path families, serial vs
// OpenMP all-pairs ranks, and rational coefficient growth.
#include <chrono>
#include <cmath>
#include <iostream>

#include "dagph/pipelines.hpp"
#include "dagph/ssss.hpp"

using namespace dagph;

namespace {

// Path filtration of the first `len` simplices of a triangulated grid in
// cell-growth order (sorted by largest vertex, then dimension), one simplex
// per edge.  Unlike the plain face order this interleaves dimensions, so
// cycles are born and killed all along the path.
SimplexwiseDAG grid_path(const std::shared_ptr<GlobalComplex>& gc, int len) {
    std::vector<int> order(gc->simplices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& sa = gc->simplices[a].vertices;
        const auto& sb = gc->simplices[b].vertices;
        return std::tuple(sa.back(), sa.size(), sa) < std::tuple(sb.back(), sb.size(), sb);
    });
    GraphFiltration gf;
    gf.complex = gc;
    std::set<int> cur;
    for (int i = 0; i <= len; ++i) {
        gf.vertex_ids.push_back("P" + std::to_string(i));
        gf.masks.emplace_back(*gc, cur);
        if (i < len) cur.insert(order[i]);
        if (i) gf.edges.emplace_back(i - 1, i);
    }
    return refine_to_simplexwise(gf);
}

std::shared_ptr<GlobalComplex> grid_complex(int n) {
    std::vector<Simplex> seed;
    auto v = [n](int i, int j) { return i * (n + 1) + j; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            seed.push_back(Simplex({v(i, j), v(i + 1, j), v(i + 1, j + 1)}));
            seed.push_back(Simplex({v(i, j), v(i, j + 1), v(i + 1, j + 1)}));
        }
    return std::make_shared<GlobalComplex>(close_under_faces(seed));
}

template <class Fn>
double time_ms(Fn&& fn, int reps = 1) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

// least-squares slope of log(t) vs log(l)
double loglog_exponent(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [l, t] : pts) {
        double x = std::log(l), y = std::log(std::max(t, 1e-6));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::size_t rational_bits(const Rational& r) {
    using boost::multiprecision::msb;
    BigInt num = boost::multiprecision::abs(boost::multiprecision::numerator(r));
    BigInt den = boost::multiprecision::denominator(r);
    std::size_t b = 0;
    if (num != 0) b = static_cast<std::size_t>(msb(num)) + 1;
    if (den != 0) b = std::max(b, static_cast<std::size_t>(msb(den)) + 1);
    return b;
}

}  // namespace

int main() {
    PrimeField fp;
    auto gc = grid_complex(6);

    std::cout << "== all_pairs_rank on doubling path lengths (Z_" << fp.p << ", k=1) ==\n";
    std::vector<std::pair<double, double>> ap_pts;
    for (int l : {16, 32, 64, 128}) {
        auto dag = grid_path(gc, l);
        double t = time_ms([&] { all_pairs_rank(dag, 1, fp); }, l <= 32 ? 3 : 1);
        ap_pts.emplace_back(l, t);
        std::cout << "l=" << l << "  t=" << t << " ms\n";
    }
    std::cout << "log-log exponent: " << loglog_exponent(ap_pts) << "\n\n";

    std::cout << "== persistence_rank on doubling whole-path subgraphs ==\n";
    std::vector<std::pair<double, double>> pr_pts;
    for (int l : {16, 32, 64, 128}) {
        auto dag = grid_path(gc, l);
        auto sel = SubgraphSelector::whole(dag);
        double t = time_ms([&] { persistence_rank(dag, sel, 1, fp); }, l <= 32 ? 3 : 1);
        pr_pts.emplace_back(l, t);
        std::cout << "l=" << l << "  t=" << t << " ms\n";
    }
    std::cout << "log-log exponent: " << loglog_exponent(pr_pts) << "\n\n";

    std::cout << "== serial vs OpenMP all_pairs_rank (l=128) ==\n";
    {
        auto dag = grid_path(gc, 128);
        double ts = time_ms([&] { all_pairs_rank_serial(dag, 1, fp); });
        double tp = time_ms([&] { all_pairs_rank(dag, 1, fp); });
        std::cout << "serial=" << ts << " ms  parallel=" << tp << " ms  speedup=" << ts / tp
                  << "x\n\n";
    }

    std::cout << "== rational coefficient growth (orthogonal engine, l=48) ==\n";
    {
        RationalField q;
        auto dag = grid_path(gc, 48);
        auto sel = SubgraphSelector::whole(dag);
        auto states = fixpoint_states(dag, sel, 1, q);
        std::size_t maxbits = 0, entries = 0;
        for (const auto& [v, st] : states)
            for (const auto& col : st.cols)
                for (const auto& e : col) {
                    maxbits = std::max(maxbits, rational_bits(e));
                    ++entries;
                }
        std::cout << "state entries=" << entries << "  max entry bits=" << maxbits << "\n";
    }
    return 0;
}
