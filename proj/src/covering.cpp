#include "sqc/covering.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>

namespace sqc {

std::vector<Ball> greedy_disjoint_subcover(const BallSystem& sys, const std::vector<Ball>& cover,
                                           const PointSet& A) {
    std::vector<char> covered(sys.num_points(), 0);
    for (const Ball& b : cover)
        for (PointId x : sys.realize(b)) covered[x] = 1;
    for (PointId x : A)
        if (!covered[x]) throw PreconditionError("cover does not contain A", static_cast<long>(x));

    std::vector<std::size_t> order(cover.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cover[a].depth < cover[b].depth; });

    std::vector<char> taken(sys.num_points(), 0);
    std::vector<Ball> chosen;
    for (std::size_t i : order) {
        PointSet r = sys.realize(cover[i]);
        bool free = std::none_of(r.begin(), r.end(), [&](PointId x) { return taken[x] != 0; });
        if (!free) continue;
        for (PointId x : r) taken[x] = 1;
        chosen.push_back(cover[i]);
    }
    return chosen;
}

bool pairwise_disjoint(const BallSystem& sys, const std::vector<Ball>& balls) {
    std::vector<char> taken(sys.num_points(), 0);
    for (const Ball& b : balls)
        for (PointId x : sys.realize(b)) {
            if (taken[x]) return false;
            taken[x] = 1;
        }
    return true;
}

bool q_shift_covers(const BallSystem& sys, const std::vector<Ball>& balls, const PointSet& A) {
    std::vector<char> covered(sys.num_points(), 0);
    for (const Ball& b : balls)
        for (PointId x : sys.realize(sys.shift_by(b, sys.q()))) covered[x] = 1;
    return std::all_of(A.begin(), A.end(), [&](PointId x) { return covered[x] != 0; });
}

namespace {

/// Balls of depth d meeting A, in natural order.
std::vector<Ball> meeting(const BallSystem& sys, const PointSet& A, int d) {
    std::vector<char> seen(sys.num_balls(d), 0);
    std::vector<Ball> out;
    for (PointId x : A)
        for (const Ball& b : sys.balls_containing(x, d))
            if (!seen[b.index]) {
                seen[b.index] = 1;
                out.push_back(b);
            }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Packing max_packing(const BallSystem& sys, const PointSet& A, const AdmissibleFn& k, int n, std::uint64_t seed,
                    int max_depth) {
    Packing P;
    P.base = A;
    P.k = k;
    P.n = n;
    if (A.empty()) return P;
    if (max_depth < 0) max_depth = sys.max_depth();
    std::mt19937_64 rng(seed);
    std::vector<char> taken(sys.num_points(), 0);
    std::vector<char> in_a(sys.num_points(), 0);
    for (PointId x : A) in_a[x] = 1;
    std::size_t a_left = A.size();
    for (int d = std::max(n, sys.min_depth()); d <= std::min(max_depth, sys.max_depth()); ++d) {
        // once A is exhausted every candidate's outer set hits a taken point
        if (a_left == 0) break;
        auto cands = meeting(sys, A, d);
        if (seed != 0) std::shuffle(cands.begin(), cands.end(), rng);
        for (const Ball& b : cands) {
            PointSet outer = sys.realize(sys.shift_by(b, k));
            bool free = std::none_of(outer.begin(), outer.end(), [&](PointId x) { return taken[x] != 0; });
            if (!free) continue;
            for (PointId x : outer) {
                taken[x] = 1;
                if (in_a[x]) --a_left;
            }
            P.pairs.push_back(PackingPair{b, sys.realize(b), std::move(outer)});
        }
    }
    return P;
}

bool is_valid_packing(const Packing& P) {
    std::vector<PointId> all;
    for (const auto& pr : P.pairs) {
        if (!intersects(pr.inner, P.base)) return false;
        if (!includes(pr.outer, pr.inner)) return false;
        all.insert(all.end(), pr.outer.begin(), pr.outer.end());
    }
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
}

bool is_maximal(const BallSystem& sys, const Packing& P, int max_depth) {
    if (max_depth < 0) max_depth = sys.max_depth();
    std::vector<char> taken(sys.num_points(), 0);
    for (const auto& pr : P.pairs)
        for (PointId x : pr.outer) taken[x] = 1;
    for (int d = std::max(P.n, sys.min_depth()); d <= std::min(max_depth, sys.max_depth()); ++d) {
        for (const Ball& b : meeting(sys, P.base, d)) {
            PointSet outer = sys.realize(sys.shift_by(b, P.k));
            if (std::none_of(outer.begin(), outer.end(), [&](PointId x) { return taken[x] != 0; })) return false;
        }
    }
    return true;
}

void write_packing(std::ostream& os, const Packing& P) {
    os << "packing n " << P.n << " k " << P.k.serialize() << '\n';
    os << "base " << format_ranges(P.base) << '\n';
    for (const auto& pr : P.pairs)
        os << "pair " << pr.witness.index << ' ' << pr.witness.depth << " inner=" << format_ranges(pr.inner)
           << " outer=" << format_ranges(pr.outer) << '\n';
}

}  // namespace sqc
