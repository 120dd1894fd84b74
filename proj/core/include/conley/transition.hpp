#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conley/continuation.hpp"
#include "conley/morse.hpp"

namespace conley {

/// Braid isomorphisms linking slice indices to extended-flow indices.
/// theta(slice, id, n) maps degree n of the extended-flow index of M_id to
/// degree n - slice of the slice index; entries default to the identity
/// after the degree shift.
class ThetaShift {
  public:
    ThetaShift() = default;

    void set(int slice, const std::string& id, int n, Gf2Matrix m);
    /// Identity of size `dim` when no entry is stored.
    Gf2Matrix get(int slice, const std::string& id, int n, int dim) const;
    bool is_identity() const { return entries_.empty(); }

  private:
    std::map<std::tuple<int, std::string, int>, Gf2Matrix> entries_;
};

/// Candidate off-diagonal blocks of the extended-flow connection matrix,
/// keyed at extended degrees: block (p, q, n) maps degree n of M_q^1's
/// extended index to degree n-1 of M_p^0's.
using HatBlocks = std::map<BlockKey, Gf2Matrix>;

/// The extended-flow complex over the product order: slice-0 indices at
/// native degree, slice-1 indices shifted up by one, boundary
/// [[X^(0), T^], [0, X^(1)]]. Built without requiring square zero.
class ExtendedComplex {
  public:
    ExtendedComplex(const MorseModel& model, const ThetaShift& theta, const HatBlocks& hat_blocks);

    const Poset& order() const { return order_; }
    const GradedSpace& space() const { return space_; }
    const GradedMap& boundary() const { return boundary_; }

    /// Extended index of one Morse set (slice-1 entries are shifted).
    const GradedSpace& extended_index(const std::string& id) const;
    int offset(const std::string& id, int n) const;
    int slice_of(const std::string& id) const;

    bool passes_square_zero() const;
    Gf2Matrix hat_block(const std::string& p, const std::string& q, int n) const;

  private:
    Poset order_;
    GradedSpace space_;
    GradedMap boundary_;
    std::vector<std::string> ids_;  // slice-0 then slice-1, in slice order
    std::map<std::string, GradedSpace> extended_index_;
    std::map<std::string, int> slice_;
    HatBlocks hat_blocks_;
};

ExtendedComplex build_extended(const MorseModel& model, const ThetaShift& theta, const HatBlocks& hat_blocks);

/// Degree-0 map from the slice-1 complex to the slice-0 complex, stored as
/// per-pair blocks T_n(i, j): CH_n(M_j^1) -> CH_n(M_i^0).
class TransitionMatrix {
  public:
    enum class Provenance { Enumerated, Assembled };

    TransitionMatrix() = default;
    explicit TransitionMatrix(Provenance provenance) : provenance_(provenance) {}

    Provenance provenance() const { return provenance_; }
    void set_block(const BlockKey& key, Gf2Matrix m);
    Gf2Matrix block(const MorseModel& model, const std::string& p, const std::string& q, int degree) const;
    const std::map<BlockKey, Gf2Matrix>& blocks() const { return blocks_; }

    GradedMap as_graded_map(const MorseModel& model) const;
    bool operator==(const TransitionMatrix& other) const { return blocks_ == other.blocks_; }

  private:
    Provenance provenance_ = Provenance::Enumerated;
    std::map<BlockKey, Gf2Matrix> blocks_;  // nonzero blocks only
};

/// Conjugate the hat blocks back to slice degrees:
/// T_n(i,j) = theta^0_n(i) . T^_{n+1}(i,j) . theta^1_{n+1}(j)^{-1}.
/// Requires the extended boundary to square to zero.
TransitionMatrix shift_to_transition(const ExtendedComplex& ext, const ThetaShift& theta,
                                     const MorseModel& model);

/// Chain-map and per-pair quasi-isomorphism checks. The overall verdict
/// covers the given decomposition plus the finest decomposition and the
/// trivial pair (refinement makes those two sufficient for all others).
VerificationReport is_axiomatic(const MorseModel& model, const Decomposition& d, const TransitionMatrix& t);

struct EnumerationOptions {
    std::size_t cap = 4096;  // maximum matrices returned
    int max_free_bits = 40;  // reduced-unknown ceiling; past it the call refuses
};

struct EnumerationResult {
    std::vector<TransitionMatrix> matrices;
    bool truncated = false;
    int free_bits = 0;
    std::uint64_t affine_count = 0;  // size of the solution set before filtering
};

/// All members of the axiomatic set for this model: solve the linear
/// constraints, then filter the affine solution set by the per-pair
/// homology-isomorphism condition (as mapping-cone acyclicity).
/// Output order is lexicographic in the free-variable bit vector.
EnumerationResult enumerate_transitions(const MorseModel& model, const Decomposition& d,
                                        const EnumerationOptions& options = {});

struct ForcedConnection {
    std::string p;
    std::string q;
    int degree = 0;
    bool adjacent_in_product = false;
    auto operator<=>(const ForcedConnection&) const = default;
};

/// Blocks nonzero in every enumerated matrix; each certifies a connecting
/// orbit from M_q^1 to M_p^0 in the extended flow for small drift speeds.
/// Refuses on truncated enumeration.
std::vector<ForcedConnection> forced_connections(const MorseModel& model, const Decomposition& d,
                                                 const EnumerationOptions& options = {});

struct Scenario {
    std::string kind;  // at-breakdown | before-breakdown | after-breakdown-direct | after-breakdown-descent | within-pair
    std::string description;
};

/// Qualitative paths a forced connection (p, q) can realize: through the
/// breakdown slice, through a slice connection before it, or after it with
/// an optional within-slice descent. Advisory output.
std::vector<Scenario> connection_scenarios(const MorseModel& model, const std::string& p,
                                           const std::string& q);

}  // namespace conley
