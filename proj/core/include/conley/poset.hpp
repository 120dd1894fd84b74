#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "conley/errors.hpp"

namespace conley {

/// Element ids, kept sorted and duplicate-free by the operations below.
using IdSet = std::vector<std::string>;

IdSet normalize_ids(IdSet ids);
bool id_set_contains(const IdSet& ids, const std::string& id);
IdSet id_set_union(const IdSet& a, const IdSet& b);
IdSet id_set_intersection(const IdSet& a, const IdSet& b);
IdSet id_set_difference(const IdSet& a, const IdSet& b);
bool id_set_subset(const IdSet& a, const IdSet& b);
bool id_set_disjoint(const IdSet& a, const IdSet& b);

/// Finite strict partial order. Built from covering relations and stored
/// transitively closed; construction rejects cycles.
class Poset {
  public:
    Poset() = default;

    static Poset from_covers(std::vector<std::string> elements,
                             const std::vector<std::pair<std::string, std::string>>& covers);

    const std::vector<std::string>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    bool contains(const std::string& id) const;
    int index_of(const std::string& id) const;  // InputError on unknown id

    /// Strict comparison p < q.
    bool less(const std::string& p, const std::string& q) const;
    bool less_by_index(int p, int q) const { return less_[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]; }

    /// All pairs (p, q) with p < q, ordered by element index.
    std::vector<std::pair<std::string, std::string>> relation_pairs() const;

    bool is_maximal(const std::string& id) const;
    bool is_minimal(const std::string& id) const;

  private:
    std::vector<std::string> elements_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<bool>> less_;
};

/// Order-convex subsets.
bool is_interval(const Poset& poset, const IdSet& subset);

/// Downward-closed intervals. Throws InputError on non-interval input.
bool is_attracting_interval(const Poset& poset, const IdSet& subset);

/// Disjoint intervals (I, J) whose union is an interval with no element of I
/// above an element of J. Throws InputError on overlapping input.
bool is_adjacent_pair(const Poset& poset, const IdSet& first, const IdSet& second);

/// Every order-convex subset including the empty set and the whole poset,
/// in lexicographic order. Throws ResourceError past `max_elements`.
std::vector<IdSet> intervals(const Poset& poset, std::size_t max_elements = 16);

/// Disjoint union with every element of slice0 below every element of
/// slice1 and the internal orders preserved. Throws InputError on id collision.
Poset product_order(const Poset& slice0, const Poset& slice1);

}  // namespace conley
