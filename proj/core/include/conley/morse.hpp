#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "conley/gf2.hpp"
#include "conley/poset.hpp"
#include "conley/report.hpp"

namespace conley {

/// Key of one connection block: CH_degree(M_q) -> CH_{degree-1}(M_p).
struct BlockKey {
    std::string p;
    std::string q;
    int degree = 0;
    auto operator<=>(const BlockKey&) const = default;
};

/// Morse decomposition data at one boundary slice: an admissible order,
/// the homological index of every Morse set, and the connection blocks.
class MorseSlice {
  public:
    MorseSlice() = default;
    MorseSlice(int label, Poset order, std::map<std::string, GradedSpace> conley_index,
               std::map<BlockKey, Gf2Matrix> connection, GradedLimits limits = {});

    int label() const { return label_; }
    const Poset& order() const { return order_; }
    const std::map<std::string, GradedSpace>& conley_indices() const { return conley_index_; }
    const GradedSpace& conley_index(const std::string& id) const;
    const std::map<BlockKey, Gf2Matrix>& connection_blocks() const { return connection_; }
    Gf2Matrix connection_block(const std::string& p, const std::string& q, int degree) const;

    /// Direct sum over the Morse sets, element blocks laid out in the order
    /// the poset lists its elements.
    GradedSpace total_space() const;
    /// Column offset of element `id` within degree `n` of the total space.
    int offset(const std::string& id, int n) const;

    GradedMap connection_map() const;
    /// Validated complex; throws InputError when the connection is not a boundary.
    ChainComplex complex() const;

  private:
    int label_ = 0;
    Poset order_;
    std::map<std::string, GradedSpace> conley_index_;
    std::map<BlockKey, Gf2Matrix> connection_;
};

/// Structural connection-matrix checks: degree -1 block shapes, square zero,
/// triangularity with respect to the admissible order. Block (p, q) may be
/// nonzero only when p < q.
VerificationReport verify_connection_matrix(const MorseSlice& slice);

/// Subcomplex on an order interval; throws InputError on non-intervals.
ChainComplex restrict_complex(const MorseSlice& slice, const IdSet& interval);

struct ConnectionEvidence {
    std::string p;
    std::string q;
    int degree = 0;
    auto operator<=>(const ConnectionEvidence&) const = default;
};

/// Adjacent pairs with a nonzero connection block; each certifies a
/// connecting orbit M_q -> M_p. Requires a verified slice.
std::vector<ConnectionEvidence> infer_connections(const MorseSlice& slice);

/// Interval pair (J in slice 0, J' in slice 1).
struct IntervalPair {
    IdSet j0;
    IdSet j1;
    auto operator<=>(const IntervalPair&) const = default;
    bool has_nonempty_side() const { return !j0.empty() || !j1.empty(); }
};

/// Transition entries pinned by external knowledge (for instance a Morse set
/// known to be a sink across the whole parameter interval). `degree` indexes
/// the slice-level block CH_degree(M_q^1) -> CH_degree(M_p^0).
struct FixedTransitionBlock {
    std::string p;
    std::string q;
    int degree = 0;
    Gf2Matrix value;
};

/// The two-slice bundle every other module consumes.
class MorseModel {
  public:
    MorseModel() = default;
    MorseModel(MorseSlice slice0, MorseSlice slice1, std::vector<IntervalPair> continuable_pairs,
               double lambda0, std::vector<FixedTransitionBlock> fixed_transition = {});

    const MorseSlice& slice0() const { return slice0_; }
    const MorseSlice& slice1() const { return slice1_; }
    const std::vector<IntervalPair>& continuable_pairs() const { return continuable_pairs_; }
    double lambda0() const { return lambda0_; }
    const std::vector<FixedTransitionBlock>& fixed_transition() const { return fixed_transition_; }

    /// Product order on the disjoint union of the slice orders.
    const Poset& product() const { return product_; }

  private:
    MorseSlice slice0_;
    MorseSlice slice1_;
    std::vector<IntervalPair> continuable_pairs_;
    double lambda0_ = 0.5;
    std::vector<FixedTransitionBlock> fixed_transition_;
    Poset product_;
};

}  // namespace conley
