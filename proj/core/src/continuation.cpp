#include "conley/continuation.hpp"

#include <algorithm>
#include <optional>

namespace conley {

namespace {

IdSet all_ids(const Poset& order) { return normalize_ids(order.elements()); }

std::string pair_text(const IntervalPair& pair) {
    auto side = [](const IdSet& ids) {
        std::string s = "{";
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) s += ",";
            s += ids[i];
        }
        return s + "}";
    };
    return "(" + side(pair.j0) + "," + side(pair.j1) + ")";
}

}  // namespace

Decomposition canonical(Decomposition d) {
    for (auto& pair : d.pairs) {
        pair.j0 = normalize_ids(pair.j0);
        pair.j1 = normalize_ids(pair.j1);
    }
    std::sort(d.pairs.begin(), d.pairs.end(), [](const IntervalPair& a, const IntervalPair& b) {
        bool a_empty = a.j0.empty();
        bool b_empty = b.j0.empty();
        if (a_empty != b_empty) return b_empty;  // empty slice-0 sides last
        if (!a_empty && a.j0.front() != b.j0.front()) return a.j0.front() < b.j0.front();
        return a < b;
    });
    return d;
}

Decomposition trivial_decomposition(const MorseModel& model) {
    return Decomposition{{IntervalPair{all_ids(model.slice0().order()), all_ids(model.slice1().order())}}};
}

ContinuabilityOracle::ContinuabilityOracle(const MorseModel& model) {
    const Poset& p0 = model.slice0().order();
    const Poset& p1 = model.slice1().order();
    members_.insert(IntervalPair{all_ids(p0), all_ids(p1)});
    for (const auto& declared : model.continuable_pairs()) members_.insert(declared);

    auto admissible = [&](const IntervalPair& pair) {
        return pair.has_nonempty_side() && is_interval(p0, pair.j0) && is_interval(p1, pair.j1);
    };

    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<IntervalPair> snapshot(members_.begin(), members_.end());
        for (const auto& a : snapshot) {
            for (const auto& b : snapshot) {
                IntervalPair meet{id_set_intersection(a.j0, b.j0), id_set_intersection(a.j1, b.j1)};
                if (meet.has_nonempty_side() && members_.insert(meet).second) grew = true;
                if (id_set_subset(b.j0, a.j0) && id_set_subset(b.j1, a.j1)) {
                    IntervalPair rest{id_set_difference(a.j0, b.j0), id_set_difference(a.j1, b.j1)};
                    if (admissible(rest) && members_.insert(rest).second) grew = true;
                }
            }
        }
    }
}

bool ContinuabilityOracle::continuable(const IntervalPair& pair) const {
    return members_.count(IntervalPair{normalize_ids(pair.j0), normalize_ids(pair.j1)}) > 0;
}

VerificationReport validate_decomposition(const MorseModel& model, const Decomposition& d) {
    const Poset& p0 = model.slice0().order();
    const Poset& p1 = model.slice1().order();
    VerificationReport report;

    bool intervals_ok = true;
    bool nonempty_ok = true;
    std::string detail;
    for (const auto& pair : d.pairs) {
        IdSet j0 = normalize_ids(pair.j0);
        IdSet j1 = normalize_ids(pair.j1);
        for (const auto& id : j0)
            if (!p0.contains(id)) throw InputError("decomposition: unknown slice-0 id '" + id + "'");
        for (const auto& id : j1)
            if (!p1.contains(id)) throw InputError("decomposition: unknown slice-1 id '" + id + "'");
        if (!is_interval(p0, j0) || !is_interval(p1, j1)) {
            intervals_ok = false;
            if (detail.empty()) detail = pair_text(pair);
        }
        if (j0.empty() && j1.empty()) nonempty_ok = false;
    }
    report.add("every side is an interval", intervals_ok, detail);
    report.add("every pair has a nonempty side", nonempty_ok);

    bool disjoint_ok = true;
    IdSet seen0, seen1;
    for (const auto& pair : d.pairs) {
        IdSet j0 = normalize_ids(pair.j0);
        IdSet j1 = normalize_ids(pair.j1);
        if (!id_set_disjoint(seen0, j0) || !id_set_disjoint(seen1, j1)) disjoint_ok = false;
        seen0 = id_set_union(seen0, j0);
        seen1 = id_set_union(seen1, j1);
    }
    report.add("pairwise disjoint", disjoint_ok);
    report.add("covers both slices", seen0 == all_ids(p0) && seen1 == all_ids(p1));

    ContinuabilityOracle oracle(model);
    bool continuable_ok = true;
    std::string cdetail;
    for (const auto& pair : d.pairs) {
        if (!oracle.continuable(pair)) {
            continuable_ok = false;
            if (cdetail.empty()) cdetail = pair_text(pair);
        }
    }
    report.add("every pair continuable under the oracle", continuable_ok, cdetail);
    return report;
}

Decomposition reduced_intersection(const MorseModel& model, const Decomposition& a, const Decomposition& b) {
    if (!validate_decomposition(model, a).all_pass() || !validate_decomposition(model, b).all_pass())
        throw InputError("reduced_intersection: inputs are not valid decompositions over this model");
    Decomposition out;
    for (const auto& pa : a.pairs) {
        for (const auto& pb : b.pairs) {
            IntervalPair meet{id_set_intersection(normalize_ids(pa.j0), normalize_ids(pb.j0)),
                              id_set_intersection(normalize_ids(pa.j1), normalize_ids(pb.j1))};
            if (meet.has_nonempty_side()) out.pairs.push_back(std::move(meet));
        }
    }
    return canonical(std::move(out));
}

namespace {

// An oracle member properly inside the pair, usable as one half of a split.
std::optional<IntervalPair> find_splitter(const ContinuabilityOracle& oracle, const Poset& p0,
                                          const Poset& p1, const IntervalPair& pair) {
    for (const auto& member : oracle.members()) {
        if (member == pair) continue;
        if (!id_set_subset(member.j0, pair.j0) || !id_set_subset(member.j1, pair.j1)) continue;
        IntervalPair rest{id_set_difference(pair.j0, member.j0), id_set_difference(pair.j1, member.j1)};
        if (!rest.has_nonempty_side()) continue;
        if (!is_interval(p0, rest.j0) || !is_interval(p1, rest.j1)) continue;
        return member;  // members() iterates in sorted order: deterministic choice
    }
    return std::nullopt;
}

}  // namespace

bool is_indecomposable(const MorseModel& model, const IntervalPair& pair) {
    ContinuabilityOracle oracle(model);
    IntervalPair norm{normalize_ids(pair.j0), normalize_ids(pair.j1)};
    if (!oracle.continuable(norm)) throw InputError("is_indecomposable: pair is not continuable under the oracle");
    for (const auto& member : oracle.members()) {
        if (member == norm) continue;
        if (id_set_subset(member.j0, norm.j0) && id_set_subset(member.j1, norm.j1)) return false;
    }
    return true;
}

Decomposition finest_decomposition(const MorseModel& model) {
    const Poset& p0 = model.slice0().order();
    const Poset& p1 = model.slice1().order();
    ContinuabilityOracle oracle(model);

    std::vector<IntervalPair> pending = trivial_decomposition(model).pairs;
    std::vector<IntervalPair> done;
    while (!pending.empty()) {
        IntervalPair pair = pending.back();
        pending.pop_back();
        auto splitter = find_splitter(oracle, p0, p1, pair);
        if (!splitter) {
            done.push_back(std::move(pair));
            continue;
        }
        IntervalPair rest{id_set_difference(pair.j0, splitter->j0), id_set_difference(pair.j1, splitter->j1)};
        pending.push_back(*splitter);
        pending.push_back(std::move(rest));
    }
    return canonical(Decomposition{std::move(done)});
}

}  // namespace conley
