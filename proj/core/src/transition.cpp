#include "conley/transition.hpp"

#include <algorithm>
#include <thread>

#include "conley/runtime.hpp"

namespace conley {

void ThetaShift::set(int slice, const std::string& id, int n, Gf2Matrix m) {
    if (!m.is_invertible()) throw InputError("theta shift: block must be square and invertible");
    entries_[{slice, id, n}] = std::move(m);
}

Gf2Matrix ThetaShift::get(int slice, const std::string& id, int n, int dim) const {
    auto it = entries_.find({slice, id, n});
    if (it == entries_.end()) return Gf2Matrix::identity(dim);
    if (it->second.rows() != dim)
        throw InputError("theta shift: block for '" + id + "' at degree " + std::to_string(n) +
                         " has size " + std::to_string(it->second.rows()) + ", expected " + std::to_string(dim));
    return it->second;
}

ExtendedComplex::ExtendedComplex(const MorseModel& model, const ThetaShift& theta, const HatBlocks& hat_blocks)
    : order_(model.product()), hat_blocks_(hat_blocks) {
    const MorseSlice& s0 = model.slice0();
    const MorseSlice& s1 = model.slice1();
    for (const auto& id : s0.order().elements()) {
        ids_.push_back(id);
        extended_index_[id] = s0.conley_index(id);
        slice_[id] = 0;
    }
    for (const auto& id : s1.order().elements()) {
        ids_.push_back(id);
        extended_index_[id] = s1.conley_index(id).shifted(1);  // one unstable drift direction
        slice_[id] = 1;
    }
    for (const auto& id : ids_) space_ = GradedSpace::direct_sum(space_, extended_index_[id]);

    for (const auto& [key, m] : hat_blocks_) {
        if (slice_.count(key.p) == 0 || slice_.count(key.q) == 0)
            throw InputError("extended complex: hat block for unknown element");
        if (slice_.at(key.p) != 0 || slice_.at(key.q) != 1)
            throw InputError("extended complex: hat blocks must map slice 1 into slice 0");
        int rows = extended_index_.at(key.p).dim(key.degree - 1);
        int cols = extended_index_.at(key.q).dim(key.degree);
        if (m.rows() != rows || m.cols() != cols)
            throw InputError("extended complex: hat block (" + key.p + "," + key.q + "," +
                             std::to_string(key.degree) + ") has the wrong shape");
    }

    boundary_ = GradedMap(space_, space_, -1);
    if (space_.is_zero()) return;

    auto put = [&](int n, Gf2Matrix& block, const std::string& p, const std::string& q, const Gf2Matrix& m) {
        int r0 = offset(p, n - 1);
        int c0 = offset(q, n);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c)
                if (m.get(r, c)) block.set(r0 + r, c0 + c, true);
    };

    for (int n = space_.min_degree(); n <= space_.max_degree(); ++n) {
        Gf2Matrix block(space_.dim(n - 1), space_.dim(n));
        bool any = false;
        // X^(0): slice blocks at native degree, conjugated by theta^0.
        for (const auto& [key, m] : s0.connection_blocks()) {
            if (key.degree != n || m.is_zero()) continue;
            Gf2Matrix tp = theta.get(0, key.p, n - 1, s0.conley_index(key.p).dim(n - 1));
            Gf2Matrix tq = theta.get(0, key.q, n, s0.conley_index(key.q).dim(n));
            Gf2Matrix conj = tp.inverse() * m * tq;
            if (conj.is_zero()) continue;
            put(n, block, key.p, key.q, conj);
            any = true;
        }
        // X^(1): slice blocks shifted one degree up, conjugated by theta^1.
        for (const auto& [key, m] : s1.connection_blocks()) {
            if (key.degree != n - 1 || m.is_zero()) continue;
            Gf2Matrix tp = theta.get(1, key.p, n - 1, s1.conley_index(key.p).dim(n - 2));
            Gf2Matrix tq = theta.get(1, key.q, n, s1.conley_index(key.q).dim(n - 1));
            Gf2Matrix conj = tp.inverse() * m * tq;
            if (conj.is_zero()) continue;
            put(n, block, key.p, key.q, conj);
            any = true;
        }
        for (const auto& [key, m] : hat_blocks_) {
            if (key.degree != n || m.is_zero()) continue;
            put(n, block, key.p, key.q, m);
            any = true;
        }
        if (any) boundary_.set_block(n, std::move(block));
    }
}

const GradedSpace& ExtendedComplex::extended_index(const std::string& id) const {
    auto it = extended_index_.find(id);
    if (it == extended_index_.end()) throw InputError("extended complex: unknown element '" + id + "'");
    return it->second;
}

int ExtendedComplex::offset(const std::string& id, int n) const {
    int off = 0;
    for (const auto& e : ids_) {
        if (e == id) return off;
        off += extended_index_.at(e).dim(n);
    }
    throw InputError("extended complex: unknown element '" + id + "'");
}

int ExtendedComplex::slice_of(const std::string& id) const {
    auto it = slice_.find(id);
    if (it == slice_.end()) throw InputError("extended complex: unknown element '" + id + "'");
    return it->second;
}

bool ExtendedComplex::passes_square_zero() const { return compose(boundary_, boundary_).is_zero(); }

Gf2Matrix ExtendedComplex::hat_block(const std::string& p, const std::string& q, int n) const {
    auto it = hat_blocks_.find(BlockKey{p, q, n});
    if (it != hat_blocks_.end()) return it->second;
    return Gf2Matrix(extended_index(p).dim(n - 1), extended_index(q).dim(n));
}

ExtendedComplex build_extended(const MorseModel& model, const ThetaShift& theta, const HatBlocks& hat_blocks) {
    return ExtendedComplex(model, theta, hat_blocks);
}

void TransitionMatrix::set_block(const BlockKey& key, Gf2Matrix m) {
    if (m.is_zero())
        blocks_.erase(key);
    else
        blocks_[key] = std::move(m);
}

Gf2Matrix TransitionMatrix::block(const MorseModel& model, const std::string& p, const std::string& q,
                                  int degree) const {
    auto it = blocks_.find(BlockKey{p, q, degree});
    if (it != blocks_.end()) return it->second;
    return Gf2Matrix(model.slice0().conley_index(p).dim(degree), model.slice1().conley_index(q).dim(degree));
}

GradedMap TransitionMatrix::as_graded_map(const MorseModel& model) const {
    const MorseSlice& s0 = model.slice0();
    const MorseSlice& s1 = model.slice1();
    GradedSpace source = s1.total_space();
    GradedSpace target = s0.total_space();
    GradedMap t(source, target, 0);
    if (source.is_zero() || target.is_zero()) return t;
    int lo = std::min(source.min_degree(), target.min_degree());
    int hi = std::max(source.max_degree(), target.max_degree());
    for (int n = lo; n <= hi; ++n) {
        Gf2Matrix block(target.dim(n), source.dim(n));
        bool any = false;
        for (const auto& [key, m] : blocks_) {
            if (key.degree != n || m.is_zero()) continue;
            int r0 = s0.offset(key.p, n);
            int c0 = s1.offset(key.q, n);
            for (int r = 0; r < m.rows(); ++r)
                for (int c = 0; c < m.cols(); ++c)
                    if (m.get(r, c)) block.set(r0 + r, c0 + c, true);
            any = true;
        }
        if (any) t.set_block(n, std::move(block));
    }
    return t;
}

TransitionMatrix shift_to_transition(const ExtendedComplex& ext, const ThetaShift& theta,
                                     const MorseModel& model) {
    if (!ext.passes_square_zero())
        throw InputError("shift_to_transition: extended boundary does not square to zero");
    TransitionMatrix t(TransitionMatrix::Provenance::Assembled);
    const MorseSlice& s0 = model.slice0();
    const MorseSlice& s1 = model.slice1();
    for (const auto& p : s0.order().elements()) {
        for (const auto& q : s1.order().elements()) {
            const GradedSpace& sp = ext.extended_index(p);
            const GradedSpace& sq = ext.extended_index(q);
            if (sq.is_zero()) continue;
            for (int n = sq.min_degree(); n <= sq.max_degree(); ++n) {
                if (sp.dim(n - 1) == 0 || sq.dim(n) == 0) continue;
                Gf2Matrix hat = ext.hat_block(p, q, n);
                Gf2Matrix tp = theta.get(0, p, n - 1, s0.conley_index(p).dim(n - 1));
                Gf2Matrix tq = theta.get(1, q, n, s1.conley_index(q).dim(n - 1));
                Gf2Matrix shifted = tp * hat * tq.inverse();
                if (!shifted.is_zero()) t.set_block(BlockKey{p, q, n - 1}, std::move(shifted));
            }
        }
    }
    return t;
}

namespace {

struct RestrictedPair {
    std::string label;
    ChainComplex from;  // slice-1 restriction
    ChainComplex to;    // slice-0 restriction
    IdSet j0;
    IdSet j1;
};

GradedMap restricted_transition_map(const MorseModel& model, const TransitionMatrix& t,
                                    const RestrictedPair& pair) {
    const MorseSlice& s0 = model.slice0();
    const MorseSlice& s1 = model.slice1();
    GradedMap out(pair.from.space, pair.to.space, 0);

    auto offset_in = [](const MorseSlice& slice, const IdSet& ids, const std::string& id, int n) {
        int off = 0;
        for (const auto& e : slice.order().elements()) {
            if (!id_set_contains(ids, e)) continue;
            if (e == id) return off;
            off += slice.conley_index(e).dim(n);
        }
        throw InputError("restricted transition: unknown element");
    };

    for (const auto& [key, m] : t.blocks()) {
        if (m.is_zero()) continue;
        if (!id_set_contains(pair.j0, key.p) || !id_set_contains(pair.j1, key.q)) continue;
        int n = key.degree;
        Gf2Matrix block = out.block(n);
        int r0 = offset_in(s0, pair.j0, key.p, n);
        int c0 = offset_in(s1, pair.j1, key.q, n);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c)
                if (m.get(r, c)) block.set(r0 + r, c0 + c, true);
        out.set_block(n, std::move(block));
    }
    return out;
}

std::vector<RestrictedPair> pairs_to_check(const MorseModel& model, const Decomposition& d) {
    std::vector<IntervalPair> pairs;
    auto push = [&](const IntervalPair& pair) {
        IntervalPair norm{normalize_ids(pair.j0), normalize_ids(pair.j1)};
        if (std::find(pairs.begin(), pairs.end(), norm) == pairs.end()) pairs.push_back(std::move(norm));
    };
    for (const auto& pair : d.pairs) push(pair);
    for (const auto& pair : finest_decomposition(model).pairs) push(pair);
    push(trivial_decomposition(model).pairs.front());

    std::vector<RestrictedPair> out;
    for (const auto& pair : pairs) {
        RestrictedPair rp;
        rp.j0 = pair.j0;
        rp.j1 = pair.j1;
        rp.label = "(";
        for (std::size_t i = 0; i < pair.j0.size(); ++i) rp.label += (i ? "," : "") + pair.j0[i];
        rp.label += "|";
        for (std::size_t i = 0; i < pair.j1.size(); ++i) rp.label += (i ? "," : "") + pair.j1[i];
        rp.label += ")";
        // Over GF(2) the sign on the slice-0 restriction vanishes: -X(0) = X(0).
        rp.to = restrict_complex(model.slice0(), pair.j0);
        rp.from = restrict_complex(model.slice1(), pair.j1);
        out.push_back(std::move(rp));
    }
    return out;
}

}  // namespace

VerificationReport is_axiomatic(const MorseModel& model, const Decomposition& d, const TransitionMatrix& t) {
    VerificationReport report;
    ChainComplex cx0 = model.slice0().complex();
    ChainComplex cx1 = model.slice1().complex();
    GradedMap tmap = t.as_graded_map(model);
    report.add("(A1) chain map", is_chain_map(tmap, cx1, cx0));

    for (const auto& pair : pairs_to_check(model, d)) {
        GradedMap restricted = restricted_transition_map(model, t, pair);
        bool chain = is_chain_map(restricted, pair.from, pair.to);
        report.add("(A2) restricted chain map " + pair.label, chain);
        if (chain) {
            bool iso = is_acyclic(mapping_cone(restricted, pair.from, pair.to));
            report.add("(A2) homology isomorphism " + pair.label, iso);
        } else {
            report.add("(A2) homology isomorphism " + pair.label, false, "restriction is not a chain map");
        }
    }
    return report;
}

namespace {

// Variable layout of the unknown transition blocks at slice degrees.
struct VarLayout {
    struct Block {
        int rows = 0;
        int cols = 0;
        int var_start = -1;   // -1: fixed
        Gf2Matrix fixed;
    };
    std::map<BlockKey, Block> blocks;
    int num_vars = 0;

    bool cell_var(const BlockKey& key, int r, int c, int& var, bool& constant) const {
        auto it = blocks.find(key);
        if (it == blocks.end()) {
            constant = false;
            return false;  // shape-zero block
        }
        const Block& b = it->second;
        if (b.var_start < 0) {
            constant = b.fixed.get(r, c);
            return false;
        }
        var = b.var_start + r * b.cols + c;
        return true;
    }
};

VarLayout build_layout(const MorseModel& model) {
    VarLayout layout;
    const MorseSlice& s0 = model.slice0();
    const MorseSlice& s1 = model.slice1();

    std::map<BlockKey, Gf2Matrix> fixed;
    for (const auto& fb : model.fixed_transition()) fixed[BlockKey{fb.p, fb.q, fb.degree}] = fb.value;

    for (const auto& p : s0.order().elements()) {
        for (const auto& q : s1.order().elements()) {
            const GradedSpace& tp = s0.conley_index(p);
            const GradedSpace& sq = s1.conley_index(q);
            if (sq.is_zero()) continue;
            for (int n = sq.min_degree(); n <= sq.max_degree(); ++n) {
                int rows = tp.dim(n);
                int cols = sq.dim(n);
                if (rows == 0 || cols == 0) continue;
                BlockKey key{p, q, n};
                VarLayout::Block block;
                block.rows = rows;
                block.cols = cols;
                auto it = fixed.find(key);
                if (it != fixed.end()) {
                    block.fixed = it->second;
                } else {
                    block.var_start = layout.num_vars;
                    layout.num_vars += rows * cols;
                }
                layout.blocks[key] = std::move(block);
            }
        }
    }
    return layout;
}

// X_n(0) . T_n + T_{n-1} . X_n(1) = 0 restricted to (J, J'); the global
// equation is the trivial-pair instance.
void add_chain_map_equations(Gf2LinearSystem& system, const VarLayout& layout, const MorseModel& model,
                             const IdSet& j0, const IdSet& j1) {
    const MorseSlice& s0 = model.slice0();
    const MorseSlice& s1 = model.slice1();
    int hi = std::max(s0.total_space().max_degree(), s1.total_space().max_degree()) + 1;
    for (int n = 0; n <= hi; ++n) {
        for (const auto& i : j0) {
            int rows = s0.conley_index(i).dim(n - 1);
            if (rows == 0) continue;
            for (const auto& j : j1) {
                int cols = s1.conley_index(j).dim(n);
                if (cols == 0) continue;
                for (int r = 0; r < rows; ++r) {
                    for (int c = 0; c < cols; ++c) {
                        std::vector<int> vars;
                        bool rhs = false;
                        for (const auto& k : j0) {
                            Gf2Matrix x0 = s0.connection_block(i, k, n);
                            if (x0.is_zero()) continue;
                            for (int m = 0; m < x0.cols(); ++m) {
                                if (!x0.get(r, m)) continue;
                                int var = -1;
                                bool constant = false;
                                if (layout.cell_var(BlockKey{k, j, n}, m, c, var, constant))
                                    vars.push_back(var);
                                else if (constant)
                                    rhs = !rhs;
                            }
                        }
                        for (const auto& l : j1) {
                            Gf2Matrix x1 = s1.connection_block(l, j, n);
                            if (x1.is_zero()) continue;
                            for (int m = 0; m < x1.rows(); ++m) {
                                if (!x1.get(m, c)) continue;
                                int var = -1;
                                bool constant = false;
                                if (layout.cell_var(BlockKey{i, l, n - 1}, r, m, var, constant))
                                    vars.push_back(var);
                                else if (constant)
                                    rhs = !rhs;
                            }
                        }
                        if (!vars.empty() || rhs) system.add_equation(vars, rhs);
                    }
                }
            }
        }
    }
}

TransitionMatrix matrix_from_bits(const VarLayout& layout, const std::vector<std::uint8_t>& bits) {
    TransitionMatrix t(TransitionMatrix::Provenance::Enumerated);
    for (const auto& [key, block] : layout.blocks) {
        Gf2Matrix m(block.rows, block.cols);
        if (block.var_start < 0) {
            m = block.fixed;
        } else {
            for (int r = 0; r < block.rows; ++r)
                for (int c = 0; c < block.cols; ++c)
                    if (bits[static_cast<std::size_t>(block.var_start + r * block.cols + c)]) m.set(r, c, true);
        }
        if (!m.is_zero()) t.set_block(key, std::move(m));
    }
    return t;
}

}  // namespace

EnumerationResult enumerate_transitions(const MorseModel& model, const Decomposition& d,
                                        const EnumerationOptions& options) {
    VarLayout layout = build_layout(model);
    std::vector<RestrictedPair> pairs = pairs_to_check(model, d);

    Gf2LinearSystem system(layout.num_vars);
    for (const auto& pair : pairs) add_chain_map_equations(system, layout, model, pair.j0, pair.j1);

    EnumerationResult result;
    auto solutions = system.solve();
    if (!solutions) return result;  // no chain map at all with the fixed entries

    result.free_bits = solutions->free_bits();
    if (result.free_bits > options.max_free_bits)
        throw ResourceError("enumeration: " + std::to_string(result.free_bits) +
                            " unknown bits remain after linear reduction, above the cap of " +
                            std::to_string(options.max_free_bits));
    result.affine_count = std::uint64_t{1} << result.free_bits;

    std::uint64_t total = result.affine_count;
    int workers = std::min<int>(configured_thread_count(), static_cast<int>(std::min<std::uint64_t>(total, 16)));
    std::vector<std::vector<std::pair<std::uint64_t, TransitionMatrix>>> found(
        static_cast<std::size_t>(workers));

    // Workers scan interleaved index classes in increasing order, so after a
    // worker has cap+1 hits of its own the first cap hits in global lexical
    // order are already covered and it may stop.
    auto worker = [&](int w) {
        auto& hits = found[static_cast<std::size_t>(w)];
        for (std::uint64_t idx = static_cast<std::uint64_t>(w); idx < total;
             idx += static_cast<std::uint64_t>(workers)) {
            TransitionMatrix t = matrix_from_bits(layout, solutions->solution(idx));
            bool pass = true;
            for (const auto& pair : pairs) {
                GradedMap restricted = restricted_transition_map(model, t, pair);
                if (!is_acyclic(mapping_cone(restricted, pair.from, pair.to))) {
                    pass = false;
                    break;
                }
            }
            if (pass) {
                hits.emplace_back(idx, std::move(t));
                if (hits.size() > options.cap) break;
            }
        }
    };

    if (workers <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(worker, w);
        for (auto& th : threads) th.join();
    }

    std::vector<std::pair<std::uint64_t, TransitionMatrix>> merged;
    for (auto& chunk : found)
        for (auto& item : chunk) merged.push_back(std::move(item));
    std::sort(merged.begin(), merged.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [idx, t] : merged) {
        if (result.matrices.size() >= options.cap) {
            result.truncated = true;
            break;
        }
        result.matrices.push_back(std::move(t));
    }
    return result;
}

std::vector<ForcedConnection> forced_connections(const MorseModel& model, const Decomposition& d,
                                                 const EnumerationOptions& options) {
    EnumerationResult res = enumerate_transitions(model, d, options);
    if (res.truncated)
        throw ResourceError("forced connections require the full enumeration; raise the cap");
    std::vector<ForcedConnection> out;
    if (res.matrices.empty()) return out;

    const MorseSlice& s0 = model.slice0();
    const MorseSlice& s1 = model.slice1();
    for (const auto& p : s0.order().elements()) {
        for (const auto& q : s1.order().elements()) {
            const GradedSpace& sq = s1.conley_index(q);
            if (sq.is_zero()) continue;
            for (int n = sq.min_degree(); n <= sq.max_degree(); ++n) {
                if (s0.conley_index(p).dim(n) == 0 || sq.dim(n) == 0) continue;
                bool forced = true;
                for (const auto& t : res.matrices) {
                    if (t.block(model, p, q, n).is_zero()) {
                        forced = false;
                        break;
                    }
                }
                if (forced)
                    out.push_back({p, q, n, is_adjacent_pair(model.product(), {p}, {q})});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string side_text(const IdSet& ids) {
    std::string s = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ",";
        s += ids[i];
    }
    return s + "}";
}

std::string block_name(const IntervalPair& pair) {
    return "M" + side_text(id_set_union(pair.j0, pair.j1));
}

}  // namespace

std::vector<Scenario> connection_scenarios(const MorseModel& model, const std::string& p,
                                           const std::string& q) {
    Decomposition finest = finest_decomposition(model);
    std::vector<ForcedConnection> forced = forced_connections(model, finest);
    bool is_forced = false;
    for (const auto& fc : forced)
        if (fc.p == p && fc.q == q) is_forced = true;
    if (!is_forced) throw InputError("connection_scenarios: (" + p + "," + q + ") is not a forced connection");

    const IntervalPair* bp = nullptr;
    const IntervalPair* bq = nullptr;
    for (const auto& pair : finest.pairs) {
        if (id_set_contains(pair.j0, p)) bp = &pair;
        if (id_set_contains(pair.j1, q)) bq = &pair;
    }
    if (!bp || !bq) throw InputError("connection_scenarios: endpoints not covered by the finest decomposition");

    std::vector<Scenario> out;
    if (bp == bq) {
        out.push_back({"within-pair", q + " descends through " + block_name(*bp) +
                                          " across the breakdown parameter to " + p});
        return out;
    }

    out.push_back({"at-breakdown", q + " -> " + block_name(*bq) + " at the breakdown parameter, connection " +
                                       block_name(*bq) + " > " + block_name(*bp) +
                                       " in that slice, then " + block_name(*bp) + " <- " + p});
    if (!bq->j0.empty()) {
        out.push_back({"before-breakdown", q + " descends " + block_name(*bq) + " to " + side_text(bq->j0) +
                                               ", slice connection to " + p +
                                               " at some parameter below the breakdown"});
    }
    if (!bp->j1.empty()) {
        IdSet maximal;
        for (const auto& id : bp->j1) {
            bool top = true;
            for (const auto& other : bp->j1)
                if (model.slice1().order().less(id, other)) top = false;
            if (top) maximal.push_back(id);
        }
        out.push_back({"after-breakdown-direct", q + " connects to " + side_text(maximal) +
                                                     " at some parameter above the breakdown, then enters " +
                                                     block_name(*bp) + " down to " + p});
        bool internal = false;
        for (const auto& a : bp->j1)
            for (const auto& b : bp->j1)
                if (model.slice1().order().less(a, b)) internal = true;
        if (internal) {
            IdSet minimal;
            for (const auto& id : bp->j1) {
                bool bottom = true;
                for (const auto& other : bp->j1)
                    if (model.slice1().order().less(other, id)) bottom = false;
                if (bottom) minimal.push_back(id);
            }
            out.push_back({"after-breakdown-descent",
                           q + " connects to " + side_text(maximal) + " then descends within the slice to " +
                               side_text(minimal) + " before entering " + block_name(*bp) + " down to " + p});
        }
    }
    return out;
}

}  // namespace conley
