#include "conley/poset.hpp"

#include <algorithm>

namespace conley {

IdSet normalize_ids(IdSet ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

bool id_set_contains(const IdSet& ids, const std::string& id) {
    return std::binary_search(ids.begin(), ids.end(), id);
}

IdSet id_set_union(const IdSet& a, const IdSet& b) {
    IdSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IdSet id_set_intersection(const IdSet& a, const IdSet& b) {
    IdSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IdSet id_set_difference(const IdSet& a, const IdSet& b) {
    IdSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool id_set_subset(const IdSet& a, const IdSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool id_set_disjoint(const IdSet& a, const IdSet& b) {
    return id_set_intersection(a, b).empty();
}

Poset Poset::from_covers(std::vector<std::string> elements,
                         const std::vector<std::pair<std::string, std::string>>& covers) {
    Poset p;
    p.elements_ = std::move(elements);
    for (std::size_t i = 0; i < p.elements_.size(); ++i) {
        if (p.index_.count(p.elements_[i]))
            throw InputError("poset: duplicate element id '" + p.elements_[i] + "'");
        p.index_[p.elements_[i]] = static_cast<int>(i);
    }
    std::size_t n = p.elements_.size();
    p.less_.assign(n, std::vector<bool>(n, false));
    for (const auto& [lo, hi] : covers) {
        auto a = p.index_.find(lo);
        auto b = p.index_.find(hi);
        if (a == p.index_.end()) throw InputError("poset: unknown element id '" + lo + "'");
        if (b == p.index_.end()) throw InputError("poset: unknown element id '" + hi + "'");
        p.less_[static_cast<std::size_t>(a->second)][static_cast<std::size_t>(b->second)] = true;
    }
    // Warshall closure.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (p.less_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (p.less_[k][j]) p.less_[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (p.less_[i][i]) throw InputError("poset: relation contains a cycle through '" + p.elements_[i] + "'");
    return p;
}

bool Poset::contains(const std::string& id) const { return index_.count(id) > 0; }

int Poset::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("poset: unknown element id '" + id + "'");
    return it->second;
}

bool Poset::less(const std::string& p, const std::string& q) const {
    return less_by_index(index_of(p), index_of(q));
}

std::vector<std::pair<std::string, std::string>> Poset::relation_pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < elements_.size(); ++i)
        for (std::size_t j = 0; j < elements_.size(); ++j)
            if (less_[i][j]) out.emplace_back(elements_[i], elements_[j]);
    return out;
}

bool Poset::is_maximal(const std::string& id) const {
    int i = index_of(id);
    for (std::size_t j = 0; j < elements_.size(); ++j)
        if (less_[static_cast<std::size_t>(i)][j]) return false;
    return true;
}

bool Poset::is_minimal(const std::string& id) const {
    int i = index_of(id);
    for (std::size_t j = 0; j < elements_.size(); ++j)
        if (less_[j][static_cast<std::size_t>(i)]) return false;
    return true;
}

bool is_interval(const Poset& poset, const IdSet& subset) {
    IdSet ids = normalize_ids(subset);
    std::vector<int> idx;
    idx.reserve(ids.size());
    for (const auto& id : ids) idx.push_back(poset.index_of(id));
    std::vector<bool> in(poset.size(), false);
    for (int i : idx) in[static_cast<std::size_t>(i)] = true;
    for (int p : idx) {
        for (int q : idx) {
            if (p == q || !poset.less_by_index(p, q)) continue;
            for (std::size_t r = 0; r < poset.size(); ++r) {
                if (!in[r] && poset.less_by_index(p, static_cast<int>(r)) &&
                    poset.less_by_index(static_cast<int>(r), q))
                    return false;
            }
        }
    }
    return true;
}

bool is_attracting_interval(const Poset& poset, const IdSet& subset) {
    if (!is_interval(poset, subset)) throw InputError("is_attracting_interval: input is not an interval");
    IdSet ids = normalize_ids(subset);
    for (const auto& a : ids) {
        int ai = poset.index_of(a);
        for (std::size_t p = 0; p < poset.size(); ++p) {
            if (poset.less_by_index(static_cast<int>(p), ai) && !id_set_contains(ids, poset.elements()[p]))
                return false;
        }
    }
    return true;
}

bool is_adjacent_pair(const Poset& poset, const IdSet& first, const IdSet& second) {
    IdSet a = normalize_ids(first);
    IdSet b = normalize_ids(second);
    if (!id_set_disjoint(a, b)) throw InputError("is_adjacent_pair: inputs overlap");
    if (!is_interval(poset, a) || !is_interval(poset, b))
        throw InputError("is_adjacent_pair: inputs are not intervals");
    if (!is_interval(poset, id_set_union(a, b))) return false;
    for (const auto& p : a)
        for (const auto& q : b)
            if (poset.less(q, p)) return false;
    return true;
}

std::vector<IdSet> intervals(const Poset& poset, std::size_t max_elements) {
    std::size_t n = poset.size();
    if (n > max_elements || n > 20)
        throw ResourceError("interval enumeration cap of " + std::to_string(std::min<std::size_t>(max_elements, 20)) +
                            " elements exceeded (poset has " + std::to_string(n) + ")");
    // betw[i][j]: elements strictly between i and j.
    std::vector<std::vector<std::uint32_t>> betw(n, std::vector<std::uint32_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (poset.less_by_index(static_cast<int>(i), static_cast<int>(j)))
                for (std::size_t r = 0; r < n; ++r)
                    if (poset.less_by_index(static_cast<int>(i), static_cast<int>(r)) &&
                        poset.less_by_index(static_cast<int>(r), static_cast<int>(j)))
                        betw[i][j] |= (std::uint32_t{1} << r);
    std::vector<IdSet> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        bool convex = true;
        for (std::size_t i = 0; i < n && convex; ++i) {
            if (!((mask >> i) & 1u)) continue;
            for (std::size_t j = 0; j < n && convex; ++j) {
                if (!((mask >> j) & 1u)) continue;
                if ((betw[i][j] & ~mask) != 0) convex = false;
            }
        }
        if (!convex) continue;
        IdSet ids;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1u) ids.push_back(poset.elements()[i]);
        out.push_back(normalize_ids(std::move(ids)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Poset product_order(const Poset& slice0, const Poset& slice1) {
    for (const auto& id : slice1.elements())
        if (slice0.contains(id)) throw InputError("product_order: element id collision '" + id + "'");
    std::vector<std::string> elements = slice0.elements();
    elements.insert(elements.end(), slice1.elements().begin(), slice1.elements().end());
    std::vector<std::pair<std::string, std::string>> covers;
    for (const auto& [p, q] : slice0.relation_pairs()) covers.emplace_back(p, q);
    for (const auto& [p, q] : slice1.relation_pairs()) covers.emplace_back(p, q);
    for (const auto& p : slice0.elements())
        for (const auto& q : slice1.elements()) covers.emplace_back(p, q);
    return Poset::from_covers(std::move(elements), covers);
}

}  // namespace conley
