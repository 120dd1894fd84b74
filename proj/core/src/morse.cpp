#include "conley/morse.hpp"

#include <algorithm>

namespace conley {

MorseSlice::MorseSlice(int label, Poset order, std::map<std::string, GradedSpace> conley_index,
                       std::map<BlockKey, Gf2Matrix> connection, GradedLimits limits)
    : label_(label), order_(std::move(order)), conley_index_(std::move(conley_index)),
      connection_(std::move(connection)) {
    if (label_ != 0 && label_ != 1) throw InputError("morse slice: label must be 0 or 1");
    for (const auto& id : order_.elements()) {
        if (!conley_index_.count(id))
            throw InputError("morse slice: element '" + id + "' has no Conley index entry");
    }
    for (const auto& [id, space] : conley_index_) {
        if (!order_.contains(id)) throw InputError("morse slice: Conley index for unknown element '" + id + "'");
        check_limits(space, limits);
    }
    for (const auto& [key, m] : connection_) {
        if (!order_.contains(key.p)) throw InputError("morse slice: connection block for unknown element '" + key.p + "'");
        if (!order_.contains(key.q)) throw InputError("morse slice: connection block for unknown element '" + key.q + "'");
        int rows = conley_index_.at(key.p).dim(key.degree - 1);
        int cols = conley_index_.at(key.q).dim(key.degree);
        if (m.rows() != rows || m.cols() != cols)
            throw InputError("morse slice: connection block (" + key.p + "," + key.q + "," +
                             std::to_string(key.degree) + ") has shape " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
}

const GradedSpace& MorseSlice::conley_index(const std::string& id) const {
    auto it = conley_index_.find(id);
    if (it == conley_index_.end()) throw InputError("morse slice: unknown element '" + id + "'");
    return it->second;
}

Gf2Matrix MorseSlice::connection_block(const std::string& p, const std::string& q, int degree) const {
    auto it = connection_.find(BlockKey{p, q, degree});
    if (it != connection_.end()) return it->second;
    return Gf2Matrix(conley_index(p).dim(degree - 1), conley_index(q).dim(degree));
}

GradedSpace MorseSlice::total_space() const {
    GradedSpace out;
    for (const auto& id : order_.elements()) out = GradedSpace::direct_sum(out, conley_index(id));
    return out;
}

int MorseSlice::offset(const std::string& id, int n) const {
    int off = 0;
    for (const auto& e : order_.elements()) {
        if (e == id) return off;
        off += conley_index(e).dim(n);
    }
    throw InputError("morse slice: unknown element '" + id + "'");
}

GradedMap MorseSlice::connection_map() const {
    GradedSpace space = total_space();
    GradedMap d(space, space, -1);
    if (space.is_zero()) return d;
    for (int n = space.min_degree(); n <= space.max_degree(); ++n) {
        Gf2Matrix block(space.dim(n - 1), space.dim(n));
        bool any = false;
        for (const auto& [key, m] : connection_) {
            if (key.degree != n || m.is_zero()) continue;
            int r0 = offset(key.p, n - 1);
            int c0 = offset(key.q, n);
            for (int r = 0; r < m.rows(); ++r)
                for (int c = 0; c < m.cols(); ++c)
                    if (m.get(r, c)) block.set(r0 + r, c0 + c, true);
            any = true;
        }
        if (any) d.set_block(n, std::move(block));
    }
    return d;
}

ChainComplex MorseSlice::complex() const { return make_complex(total_space(), connection_map()); }

VerificationReport verify_connection_matrix(const MorseSlice& slice) {
    VerificationReport report;

    // Shape conformance is enforced at construction; report it for the record.
    report.add("degree -1 block shapes", true);

    GradedMap d = slice.connection_map();
    GradedMap dd = compose(d, d);
    if (dd.is_zero()) {
        report.add("square zero", true);
    } else {
        // Name one offending composite block (p, q, n).
        std::string detail;
        for (const auto& [n, m] : dd.stored_blocks()) {
            for (const auto& p : slice.order().elements()) {
                for (const auto& q : slice.order().elements()) {
                    int r0 = slice.offset(p, n - 2);
                    int c0 = slice.offset(q, n);
                    int rows = slice.conley_index(p).dim(n - 2);
                    int cols = slice.conley_index(q).dim(n);
                    for (int r = 0; r < rows && detail.empty(); ++r)
                        for (int c = 0; c < cols && detail.empty(); ++c)
                            if (m.get(r0 + r, c0 + c))
                                detail = "(" + p + "," + q + "," + std::to_string(n) + ")";
                }
            }
        }
        report.add("square zero", false, detail);
    }

    bool triangular = true;
    std::string tri_detail;
    for (const auto& [key, m] : slice.connection_blocks()) {
        if (m.is_zero()) continue;
        if (!slice.order().less(key.p, key.q)) {
            triangular = false;
            tri_detail = "(" + key.p + "," + key.q + "," + std::to_string(key.degree) + ")";
            break;
        }
    }
    report.add("triangular with respect to the order", triangular, tri_detail);
    return report;
}

ChainComplex restrict_complex(const MorseSlice& slice, const IdSet& interval) {
    IdSet ids = normalize_ids(interval);
    if (!is_interval(slice.order(), ids)) throw InputError("restrict: subset is not an interval");
    GradedSpace space;
    std::vector<std::string> members;  // in poset element order
    for (const auto& e : slice.order().elements()) {
        if (id_set_contains(ids, e)) {
            members.push_back(e);
            space = GradedSpace::direct_sum(space, slice.conley_index(e));
        }
    }
    auto offset_in = [&](const std::string& id, int n) {
        int off = 0;
        for (const auto& e : members) {
            if (e == id) return off;
            off += slice.conley_index(e).dim(n);
        }
        throw InputError("restrict: unknown element");
    };
    GradedMap d(space, space, -1);
    if (!space.is_zero()) {
        for (int n = space.min_degree(); n <= space.max_degree(); ++n) {
            Gf2Matrix block(space.dim(n - 1), space.dim(n));
            bool any = false;
            for (const auto& [key, m] : slice.connection_blocks()) {
                if (key.degree != n || m.is_zero()) continue;
                if (!id_set_contains(ids, key.p) || !id_set_contains(ids, key.q)) continue;
                int r0 = offset_in(key.p, n - 1);
                int c0 = offset_in(key.q, n);
                for (int r = 0; r < m.rows(); ++r)
                    for (int c = 0; c < m.cols(); ++c)
                        if (m.get(r, c)) block.set(r0 + r, c0 + c, true);
                any = true;
            }
            if (any) d.set_block(n, std::move(block));
        }
    }
    return make_complex(std::move(space), std::move(d));
}

std::vector<ConnectionEvidence> infer_connections(const MorseSlice& slice) {
    if (!verify_connection_matrix(slice).all_pass())
        throw InputError("infer_connections: slice fails connection-matrix verification");
    std::vector<ConnectionEvidence> out;
    for (const auto& [key, m] : slice.connection_blocks()) {
        if (m.is_zero()) continue;
        if (is_adjacent_pair(slice.order(), {key.p}, {key.q}))
            out.push_back({key.p, key.q, key.degree});
    }
    std::sort(out.begin(), out.end());
    return out;
}

MorseModel::MorseModel(MorseSlice slice0, MorseSlice slice1, std::vector<IntervalPair> continuable_pairs,
                       double lambda0, std::vector<FixedTransitionBlock> fixed_transition)
    : slice0_(std::move(slice0)), slice1_(std::move(slice1)),
      continuable_pairs_(std::move(continuable_pairs)), lambda0_(lambda0),
      fixed_transition_(std::move(fixed_transition)) {
    if (slice0_.label() != 0 || slice1_.label() != 1)
        throw InputError("morse model: slice labels must be 0 and 1");
    for (auto& pair : continuable_pairs_) {
        pair.j0 = normalize_ids(pair.j0);
        pair.j1 = normalize_ids(pair.j1);
        if (!pair.has_nonempty_side()) throw InputError("morse model: declared pair with two empty sides");
        if (!is_interval(slice0_.order(), pair.j0))
            throw InputError("morse model: declared pair side is not an interval of slice 0");
        if (!is_interval(slice1_.order(), pair.j1))
            throw InputError("morse model: declared pair side is not an interval of slice 1");
    }
    for (const auto& fixed : fixed_transition_) {
        int rows = slice0_.conley_index(fixed.p).dim(fixed.degree);
        int cols = slice1_.conley_index(fixed.q).dim(fixed.degree);
        if (fixed.value.rows() != rows || fixed.value.cols() != cols)
            throw InputError("morse model: fixed transition block (" + fixed.p + "," + fixed.q + "," +
                             std::to_string(fixed.degree) + ") has the wrong shape");
    }
    product_ = product_order(slice0_.order(), slice1_.order());
}

}  // namespace conley
