#pragma once

#include <set>
#include <vector>

#include "conley/morse.hpp"

namespace conley {

/// Partition of both slice index sets into continuable interval pairs.
struct Decomposition {
    std::vector<IntervalPair> pairs;
    bool operator==(const Decomposition&) const = default;
};

/// Sort pairs by minimal element of the slice-0 side, empty sides last.
Decomposition canonical(Decomposition d);

Decomposition trivial_decomposition(const MorseModel& model);

/// Declarative continuability: the trivial pair and the user-declared pairs,
/// closed under pairwise intersection and under complement within a member.
class ContinuabilityOracle {
  public:
    explicit ContinuabilityOracle(const MorseModel& model);

    bool continuable(const IntervalPair& pair) const;
    const std::set<IntervalPair>& members() const { return members_; }

  private:
    std::set<IntervalPair> members_;
};

/// Axiom-by-axiom check of a decomposition: interval sides, disjointness,
/// coverage of both slices, and continuability of every pair.
VerificationReport validate_decomposition(const MorseModel& model, const Decomposition& d);

/// Pairwise intersections with (empty, empty) pairs removed.
/// Both inputs must validate over the model.
Decomposition reduced_intersection(const MorseModel& model, const Decomposition& a, const Decomposition& b);

/// No oracle member sits properly inside the pair.
bool is_indecomposable(const MorseModel& model, const IntervalPair& pair);

/// The unique decomposition whose pairs are all indecomposable relative to
/// the oracle, reached by splitting along oracle members until stable.
Decomposition finest_decomposition(const MorseModel& model);

}  // namespace conley
