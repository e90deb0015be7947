#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "sqc/ballsys.hpp"

namespace sqc {

/// Raised when an input does not meet an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(const std::string& what, long witness = -1)
        : std::invalid_argument(what), witness_(witness) {}
    long witness() const { return witness_; }

private:
    long witness_;
};

/// Covering lemma: pairwise disjoint subfamily whose q-shifts still cover A.
///
/// Depths are processed in increasing order; within a depth the input order decides.
/// Throws PreconditionError carrying an uncovered point when the cover misses A.
std::vector<Ball> greedy_disjoint_subcover(const BallSystem& sys, const std::vector<Ball>& cover,
                                           const PointSet& A);

/// True iff the realizations of the chosen balls are pairwise disjoint.
bool pairwise_disjoint(const BallSystem& sys, const std::vector<Ball>& balls);
/// True iff the q(depth)-shifted realizations cover A.
bool q_shift_covers(const BallSystem& sys, const std::vector<Ball>& balls, const PointSet& A);

struct PackingPair {
    Ball witness;
    PointSet inner;  // a-
    PointSet outer;  // a+
};

struct Packing {
    std::vector<PackingPair> pairs;
    PointSet base;
    AdmissibleFn k = AdmissibleFn::zero();
    int n = 0;
};

/// Maximal packing by (k, n)-outer rings (b^, k.b^) whose inner sets meet A.
///
/// Depths n..max_depth are scanned in increasing order; the order inside a depth is
/// shuffled by the seed (seed 0 keeps the natural order).
Packing max_packing(const BallSystem& sys, const PointSet& A, const AdmissibleFn& k, int n, std::uint64_t seed,
                    int max_depth = -1);

/// No candidate ball of depth in [n, max_depth] can be added to the packing.
bool is_maximal(const BallSystem& sys, const Packing& P, int max_depth = -1);
/// Inner sets meet the base and outer sets are pairwise disjoint.
bool is_valid_packing(const Packing& P);

void write_packing(std::ostream& os, const Packing& P);

}  // namespace sqc
