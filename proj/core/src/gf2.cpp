#include "conley/gf2.hpp"

#include <algorithm>
#include <bit>

namespace conley {

namespace {

int words_for(int cols) { return cols <= 0 ? 0 : (cols + 63) / 64; }

bool vec_get(const std::vector<std::uint64_t>& v, int i) {
    return (v[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
}

void vec_set(std::vector<std::uint64_t>& v, int i) { v[static_cast<std::size_t>(i) >> 6] ^= (std::uint64_t{1} << (i & 63)); }

bool vec_is_zero(const std::vector<std::uint64_t>& v) {
    for (auto w : v)
        if (w) return false;
    return true;
}

int lowest_set_bit(const std::vector<std::uint64_t>& v, int width) {
    for (std::size_t w = 0; w < v.size(); ++w) {
        if (v[w]) {
            int bit = static_cast<int>(w) * 64 + std::countr_zero(v[w]);
            return bit < width ? bit : -1;
        }
    }
    return -1;
}

void vec_xor(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

}  // namespace

Gf2Matrix::Gf2Matrix(int rows, int cols) : rows_(rows), cols_(cols), wpr_(words_for(cols)) {
    if (rows < 0 || cols < 0) throw InputError("matrix dimensions must be non-negative");
    words_.assign(static_cast<std::size_t>(rows_) * wpr_, 0);
}

Gf2Matrix Gf2Matrix::identity(int n) {
    Gf2Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

Gf2Matrix Gf2Matrix::from_bit_rows(const std::vector<std::string>& rows, int expect_rows, int expect_cols) {
    int r = static_cast<int>(rows.size());
    int c = rows.empty() ? (expect_cols >= 0 ? expect_cols : 0) : static_cast<int>(rows[0].size());
    if (expect_rows >= 0 && r != expect_rows)
        throw InputError("bit rows: expected " + std::to_string(expect_rows) + " rows, got " + std::to_string(r));
    if (expect_cols >= 0 && !rows.empty() && c != expect_cols)
        throw InputError("bit rows: expected " + std::to_string(expect_cols) + " columns, got " + std::to_string(c));
    Gf2Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw InputError("bit rows: ragged row " + std::to_string(i));
        for (int j = 0; j < c; ++j) {
            char ch = rows[i][static_cast<std::size_t>(j)];
            if (ch == '1')
                m.set(i, j, true);
            else if (ch != '0')
                throw InputError(std::string("bit rows: invalid character '") + ch + "'");
        }
    }
    return m;
}

bool Gf2Matrix::get(int r, int c) const {
    return (row_ptr(r)[c >> 6] >> (c & 63)) & 1u;
}

void Gf2Matrix::set(int r, int c, bool value) {
    std::uint64_t mask = std::uint64_t{1} << (c & 63);
    if (value)
        row_ptr(r)[c >> 6] |= mask;
    else
        row_ptr(r)[c >> 6] &= ~mask;
}

bool Gf2Matrix::is_zero() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

bool Gf2Matrix::operator==(const Gf2Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && words_ == other.words_;
}

Gf2Matrix Gf2Matrix::operator*(const Gf2Matrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw InputError("matrix product: shape mismatch " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                         " * " + std::to_string(rhs.rows_) + "x" + std::to_string(rhs.cols_));
    Gf2Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        const std::uint64_t* a = row_ptr(i);
        std::uint64_t* o = out.row_ptr(i);
        for (int k = 0; k < cols_; ++k) {
            if ((a[k >> 6] >> (k & 63)) & 1u) {
                const std::uint64_t* b = rhs.row_ptr(k);
                for (int w = 0; w < out.wpr_; ++w) o[w] ^= b[w];
            }
        }
    }
    return out;
}

Gf2Matrix Gf2Matrix::operator+(const Gf2Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InputError("matrix sum: shape mismatch");
    Gf2Matrix out = *this;
    for (std::size_t i = 0; i < out.words_.size(); ++i) out.words_[i] ^= rhs.words_[i];
    return out;
}

int Gf2Matrix::rank() const {
    if (rows_ == 0 || cols_ == 0) return 0;
    std::vector<std::vector<std::uint64_t>> work;
    work.reserve(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) work.emplace_back(row_ptr(i), row_ptr(i) + wpr_);
    int rank = 0;
    for (int col = 0; col < cols_ && rank < rows_; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows_; ++r) {
            if (vec_get(work[static_cast<std::size_t>(r)], col)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(work[static_cast<std::size_t>(rank)], work[static_cast<std::size_t>(pivot)]);
        for (int r = 0; r < rows_; ++r) {
            if (r != rank && vec_get(work[static_cast<std::size_t>(r)], col))
                vec_xor(work[static_cast<std::size_t>(r)], work[static_cast<std::size_t>(rank)]);
        }
        ++rank;
    }
    return rank;
}

Gf2Matrix Gf2Matrix::kernel_basis() const {
    // Reduced row echelon over a working copy, then one kernel vector per
    // free column with deterministic pivot bookkeeping.
    std::vector<std::vector<std::uint64_t>> work;
    work.reserve(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) work.emplace_back(row_ptr(i), row_ptr(i) + wpr_);
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < cols_ && rank < rows_; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows_; ++r) {
            if (vec_get(work[static_cast<std::size_t>(r)], col)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(work[static_cast<std::size_t>(rank)], work[static_cast<std::size_t>(pivot)]);
        for (int r = 0; r < rows_; ++r) {
            if (r != rank && vec_get(work[static_cast<std::size_t>(r)], col))
                vec_xor(work[static_cast<std::size_t>(r)], work[static_cast<std::size_t>(rank)]);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols_), false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;

    Gf2Matrix basis(cols_ - rank, cols_);
    int out = 0;
    for (int free_col = 0; free_col < cols_; ++free_col) {
        if (is_pivot[static_cast<std::size_t>(free_col)]) continue;
        basis.set(out, free_col, true);
        for (int r = 0; r < rank; ++r) {
            if (vec_get(work[static_cast<std::size_t>(r)], free_col)) basis.set(out, pivot_col[static_cast<std::size_t>(r)], true);
        }
        ++out;
    }
    return basis;
}

Gf2Matrix Gf2Matrix::inverse() const {
    if (rows_ != cols_) throw InputError("matrix inverse: not square");
    int n = rows_;
    Gf2Matrix work = *this;
    Gf2Matrix inv = Gf2Matrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (work.get(r, col)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw InputError("matrix inverse: matrix is singular");
        if (pivot != col) {
            for (int w = 0; w < work.wpr_; ++w) std::swap(work.row_ptr(col)[w], work.row_ptr(pivot)[w]);
            for (int w = 0; w < inv.wpr_; ++w) std::swap(inv.row_ptr(col)[w], inv.row_ptr(pivot)[w]);
        }
        for (int r = 0; r < n; ++r) {
            if (r != col && work.get(r, col)) {
                for (int w = 0; w < work.wpr_; ++w) work.row_ptr(r)[w] ^= work.row_ptr(col)[w];
                for (int w = 0; w < inv.wpr_; ++w) inv.row_ptr(r)[w] ^= inv.row_ptr(col)[w];
            }
        }
    }
    return inv;
}

std::vector<std::uint64_t> Gf2Matrix::apply(const std::vector<std::uint64_t>& v) const {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(words_for(rows_)), 0);
    for (int c = 0; c < cols_; ++c) {
        if (vec_get(v, c)) {
            for (int r = 0; r < rows_; ++r) {
                if (get(r, c)) vec_set(out, r);
            }
        }
    }
    return out;
}

std::string Gf2Matrix::row_bits(int r) const {
    std::string s(static_cast<std::size_t>(cols_), '0');
    for (int c = 0; c < cols_; ++c)
        if (get(r, c)) s[static_cast<std::size_t>(c)] = '1';
    return s;
}

std::vector<std::string> Gf2Matrix::to_bit_rows() const {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) out.push_back(row_bits(r));
    return out;
}

Gf2RowBasis::Gf2RowBasis(int width) : width_(width), wpr_(words_for(width)) {}

std::vector<std::uint64_t> Gf2RowBasis::reduce(std::vector<std::uint64_t> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (vec_get(v, pivots_[i])) vec_xor(v, rows_[i]);
    }
    return v;
}

bool Gf2RowBasis::insert(std::vector<std::uint64_t> v) {
    v = reduce(std::move(v));
    int p = lowest_set_bit(v, width_);
    if (p < 0) return false;
    // Keep earlier rows reduced against the new one.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (vec_get(rows_[i], p)) vec_xor(rows_[i], v);
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
}

GradedSpace::GradedSpace(std::map<int, int> dims) {
    for (const auto& [deg, dim] : dims) {
        if (deg < 0) throw InputError("graded space: negative degree " + std::to_string(deg));
        if (dim < 0) throw InputError("graded space: negative dimension");
        if (dim > 0) dims_[deg] = dim;
    }
}

int GradedSpace::dim(int degree) const {
    auto it = dims_.find(degree);
    return it == dims_.end() ? 0 : it->second;
}

void GradedSpace::set_dim(int degree, int dim) {
    if (degree < 0) throw InputError("graded space: negative degree");
    if (dim < 0) throw InputError("graded space: negative dimension");
    if (dim == 0)
        dims_.erase(degree);
    else
        dims_[degree] = dim;
}

int GradedSpace::min_degree() const { return dims_.empty() ? 0 : dims_.begin()->first; }
int GradedSpace::max_degree() const { return dims_.empty() ? -1 : dims_.rbegin()->first; }

int GradedSpace::total_dim() const {
    int t = 0;
    for (const auto& [deg, dim] : dims_) t += dim;
    return t;
}

GradedSpace GradedSpace::direct_sum(const GradedSpace& a, const GradedSpace& b) {
    GradedSpace out = a;
    for (const auto& [deg, dim] : b.dims_) out.set_dim(deg, out.dim(deg) + dim);
    return out;
}

GradedSpace GradedSpace::shifted(int shift) const {
    GradedSpace out;
    for (const auto& [deg, dim] : dims_) out.set_dim(deg + shift, dim);
    return out;
}

void check_limits(const GradedSpace& space, const GradedLimits& limits) {
    for (const auto& [deg, dim] : space.dims()) {
        if (deg > limits.max_degree)
            throw InputError("degree " + std::to_string(deg) + " exceeds the degree cap " +
                             std::to_string(limits.max_degree));
        if (dim > limits.max_dim_per_degree)
            throw InputError("dimension " + std::to_string(dim) + " at degree " + std::to_string(deg) +
                             " exceeds the per-degree cap " + std::to_string(limits.max_dim_per_degree));
    }
}

GradedMap::GradedMap(GradedSpace source, GradedSpace target, int degree)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree) {}

GradedMap GradedMap::identity(const GradedSpace& space) {
    GradedMap m(space, space, 0);
    for (const auto& [deg, dim] : space.dims()) m.set_block(deg, Gf2Matrix::identity(dim));
    return m;
}

GradedMap GradedMap::zero(GradedSpace source, GradedSpace target, int degree) {
    return GradedMap(std::move(source), std::move(target), degree);
}

Gf2Matrix GradedMap::block(int n) const {
    auto it = blocks_.find(n);
    if (it != blocks_.end()) return it->second;
    return Gf2Matrix(target_.dim(n + degree_), source_.dim(n));
}

void GradedMap::set_block(int n, Gf2Matrix m) {
    if (m.rows() != target_.dim(n + degree_) || m.cols() != source_.dim(n))
        throw InputError("graded map block at degree " + std::to_string(n) + ": expected shape " +
                         std::to_string(target_.dim(n + degree_)) + "x" + std::to_string(source_.dim(n)) +
                         ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (m.is_zero())
        blocks_.erase(n);
    else
        blocks_[n] = std::move(m);
}

bool GradedMap::is_zero() const { return blocks_.empty(); }

bool GradedMap::operator==(const GradedMap& other) const {
    return source_ == other.source_ && target_ == other.target_ && degree_ == other.degree_ &&
           blocks_ == other.blocks_;
}

GradedMap compose(const GradedMap& f, const GradedMap& g) {
    if (!(g.target() == f.source())) throw InputError("compose: inner spaces do not match");
    GradedMap out(g.source(), f.target(), f.degree() + g.degree());
    for (const auto& [n, gb] : g.stored_blocks()) {
        Gf2Matrix fb = f.block(n + g.degree());
        if (fb.rows() == 0 || fb.is_zero()) continue;
        Gf2Matrix prod = fb * gb;
        if (!prod.is_zero()) out.set_block(n, out.block(n) + prod);
    }
    return out;
}

GradedMap add(const GradedMap& f, const GradedMap& g) {
    if (!(f.source() == g.source()) || !(f.target() == g.target()) || f.degree() != g.degree())
        throw InputError("add: maps are not parallel");
    GradedMap out = f;
    for (const auto& [n, gb] : g.stored_blocks()) out.set_block(n, out.block(n) + gb);
    return out;
}

bool is_boundary(const GradedMap& d) {
    if (!(d.source() == d.target())) throw InputError("is_boundary: map is not an endomorphism");
    if (d.degree() != -1) throw InputError("is_boundary: map does not have degree -1");
    return compose(d, d).is_zero();
}

ChainComplex make_complex(GradedSpace space, GradedMap boundary) {
    if (!(boundary.source() == space) || !(boundary.target() == space))
        throw InputError("chain complex: boundary is not an endomorphism of the space");
    if (boundary.degree() != -1) throw InputError("chain complex: boundary degree is not -1");
    if (!compose(boundary, boundary).is_zero()) throw InputError("chain complex: boundary squared is nonzero");
    return ChainComplex{std::move(space), std::move(boundary)};
}

GradedSpace homology(const ChainComplex& c) {
    GradedSpace out;
    if (c.space.is_zero()) return out;
    for (int n = c.space.min_degree(); n <= c.space.max_degree(); ++n) {
        if (c.space.dim(n) == 0) continue;
        int nullity = c.boundary.block(n).nullity();
        int rank_above = c.boundary.block(n + 1).rank();
        out.set_dim(n, nullity - rank_above);
    }
    return out;
}

bool is_acyclic(const ChainComplex& c) { return homology(c).is_zero(); }

bool is_chain_map(const GradedMap& t, const ChainComplex& from, const ChainComplex& to) {
    if (t.degree() != 0) throw InputError("chain map: degree is not 0");
    if (!(t.source() == from.space) || !(t.target() == to.space))
        throw InputError("chain map: source/target spaces do not match the complexes");
    return compose(to.boundary, t) == compose(t, from.boundary);
}

namespace {

// Deterministic homology data at a single degree: representatives are the
// kernel-basis rows that stay independent modulo the image.
struct HomologyBasis {
    std::vector<std::vector<std::uint64_t>> reps;
    Gf2RowBasis image;  // image of d_{n+1}

    HomologyBasis(const ChainComplex& c, int n) : image(c.space.dim(n)) {
        int dim = c.space.dim(n);
        Gf2Matrix d_next = c.boundary.block(n + 1);
        for (int col = 0; col < d_next.cols(); ++col) {
            std::vector<std::uint64_t> v(static_cast<std::size_t>(words_for(dim)), 0);
            for (int r = 0; r < d_next.rows(); ++r)
                if (d_next.get(r, col)) vec_set(v, r);
            image.insert(std::move(v));
        }
        Gf2RowBasis eliminator = image;
        Gf2Matrix kernel = c.boundary.block(n).kernel_basis();
        for (int r = 0; r < kernel.rows(); ++r) {
            std::vector<std::uint64_t> v(static_cast<std::size_t>(words_for(dim)), 0);
            for (int cidx = 0; cidx < dim; ++cidx)
                if (kernel.get(r, cidx)) vec_set(v, cidx);
            if (eliminator.insert(v)) reps.push_back(std::move(v));
        }
    }
};

}  // namespace

GradedMap induced_homology_map(const GradedMap& t, const ChainComplex& from, const ChainComplex& to) {
    if (!is_chain_map(t, from, to)) throw InputError("induced homology map: not a chain map");
    GradedSpace h_from = homology(from);
    GradedSpace h_to = homology(to);
    GradedMap out(h_from, h_to, 0);
    int lo = std::min(from.space.min_degree(), to.space.min_degree());
    int hi = std::max(from.space.max_degree(), to.space.max_degree());
    for (int n = lo; n <= hi; ++n) {
        if (h_from.dim(n) == 0 && h_to.dim(n) == 0) continue;
        HomologyBasis fb(from, n);
        HomologyBasis tb(to, n);
        int dim_to = to.space.dim(n);
        int reps_to = static_cast<int>(tb.reps.size());
        // Augmented eliminator: [vector | rep coordinates]. Image rows carry
        // zero tags, representative i carries tag e_i; row operations keep
        // the tag equal to the rep combination entering each stored row.
        Gf2RowBasis eliminator(dim_to + reps_to);
        int total_words = words_for(dim_to + reps_to);
        Gf2Matrix d_next = to.boundary.block(n + 1);
        for (int col = 0; col < d_next.cols(); ++col) {
            std::vector<std::uint64_t> v(static_cast<std::size_t>(total_words), 0);
            for (int r = 0; r < d_next.rows(); ++r)
                if (d_next.get(r, col)) vec_set(v, r);
            eliminator.insert(std::move(v));
        }
        for (int i = 0; i < reps_to; ++i) {
            std::vector<std::uint64_t> v(static_cast<std::size_t>(total_words), 0);
            for (int b = 0; b < dim_to; ++b)
                if (vec_get(tb.reps[static_cast<std::size_t>(i)], b)) vec_set(v, b);
            vec_set(v, dim_to + i);
            eliminator.insert(std::move(v));
        }
        Gf2Matrix block(h_to.dim(n), h_from.dim(n));
        Gf2Matrix tn = t.block(n);
        for (std::size_t j = 0; j < fb.reps.size(); ++j) {
            std::vector<std::uint64_t> img = tn.apply(fb.reps[j]);
            std::vector<std::uint64_t> v(static_cast<std::size_t>(total_words), 0);
            for (int b = 0; b < dim_to; ++b)
                if (vec_get(img, b)) vec_set(v, b);
            v = eliminator.reduce(std::move(v));
            if (lowest_set_bit(v, dim_to) >= 0)
                throw InputError("induced homology map: cycle image not expressible in homology basis");
            for (int i = 0; i < reps_to; ++i)
                if (vec_get(v, dim_to + i)) block.set(i, static_cast<int>(j), true);
        }
        if (!block.is_zero()) out.set_block(n, std::move(block));
    }
    return out;
}

ChainComplex mapping_cone(const GradedMap& t, const ChainComplex& from, const ChainComplex& to) {
    if (!is_chain_map(t, from, to)) throw InputError("mapping cone: not a chain map");
    GradedSpace cone_space = GradedSpace::direct_sum(from.space.shifted(1), to.space);
    GradedMap boundary(cone_space, cone_space, -1);
    if (!cone_space.is_zero()) {
        for (int n = cone_space.min_degree(); n <= cone_space.max_degree(); ++n) {
            int rows = cone_space.dim(n - 1);
            int cols = cone_space.dim(n);
            if (rows == 0 || cols == 0) continue;
            // Columns: from-part (degree n-1) then to-part (degree n).
            int from_cols = from.space.dim(n - 1);
            int from_rows = from.space.dim(n - 2);
            Gf2Matrix m(rows, cols);
            Gf2Matrix d_from = from.boundary.block(n - 1);
            for (int r = 0; r < d_from.rows(); ++r)
                for (int cidx = 0; cidx < d_from.cols(); ++cidx)
                    if (d_from.get(r, cidx)) m.set(r, cidx, true);
            Gf2Matrix tn = t.block(n - 1);
            for (int r = 0; r < tn.rows(); ++r)
                for (int cidx = 0; cidx < tn.cols(); ++cidx)
                    if (tn.get(r, cidx)) m.set(from_rows + r, cidx, true);
            Gf2Matrix d_to = to.boundary.block(n);
            for (int r = 0; r < d_to.rows(); ++r)
                for (int cidx = 0; cidx < d_to.cols(); ++cidx)
                    if (d_to.get(r, cidx)) m.set(from_rows + r, from_cols + cidx, true);
            if (!m.is_zero()) boundary.set_block(n, std::move(m));
        }
    }
    return make_complex(cone_space, std::move(boundary));
}

Gf2LinearSystem::Gf2LinearSystem(int num_vars) : num_vars_(num_vars), wpr_(words_for(num_vars + 1)) {
    if (num_vars < 0) throw InputError("linear system: negative variable count");
}

void Gf2LinearSystem::add_equation(const std::vector<int>& vars, bool rhs) {
    std::vector<std::uint64_t> row(static_cast<std::size_t>(wpr_), 0);
    for (int v : vars) {
        if (v < 0 || v >= num_vars_) throw InputError("linear system: variable index out of range");
        vec_set(row, v);
    }
    if (rhs) vec_set(row, num_vars_);
    rows_.push_back(std::move(row));
}

std::optional<Gf2LinearSystem::AffineSolutionSet> Gf2LinearSystem::solve() const {
    std::vector<std::vector<std::uint64_t>> work = rows_;
    std::vector<int> pivot_of_col(static_cast<std::size_t>(num_vars_), -1);
    int rank = 0;
    for (int col = 0; col < num_vars_ && rank < static_cast<int>(work.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(work.size()); ++r) {
            if (vec_get(work[static_cast<std::size_t>(r)], col)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(work[static_cast<std::size_t>(rank)], work[static_cast<std::size_t>(pivot)]);
        for (int r = 0; r < static_cast<int>(work.size()); ++r) {
            if (r != rank && vec_get(work[static_cast<std::size_t>(r)], col))
                vec_xor(work[static_cast<std::size_t>(r)], work[static_cast<std::size_t>(rank)]);
        }
        pivot_of_col[static_cast<std::size_t>(col)] = rank;
        ++rank;
    }
    for (int r = rank; r < static_cast<int>(work.size()); ++r) {
        if (vec_get(work[static_cast<std::size_t>(r)], num_vars_)) return std::nullopt;  // 0 = 1
    }

    AffineSolutionSet out;
    out.particular.assign(static_cast<std::size_t>(num_vars_), 0);
    for (int col = 0; col < num_vars_; ++col) {
        int p = pivot_of_col[static_cast<std::size_t>(col)];
        if (p >= 0 && vec_get(work[static_cast<std::size_t>(p)], num_vars_)) out.particular[static_cast<std::size_t>(col)] = 1;
    }
    for (int free_col = 0; free_col < num_vars_; ++free_col) {
        if (pivot_of_col[static_cast<std::size_t>(free_col)] >= 0) continue;
        std::vector<std::uint8_t> v(static_cast<std::size_t>(num_vars_), 0);
        v[static_cast<std::size_t>(free_col)] = 1;
        for (int col = 0; col < num_vars_; ++col) {
            int p = pivot_of_col[static_cast<std::size_t>(col)];
            if (p >= 0 && vec_get(work[static_cast<std::size_t>(p)], free_col)) v[static_cast<std::size_t>(col)] = 1;
        }
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

std::vector<std::uint8_t> Gf2LinearSystem::AffineSolutionSet::solution(std::uint64_t index) const {
    std::vector<std::uint8_t> v = particular;
    int f = free_bits();
    for (int k = 0; k < f; ++k) {
        if ((index >> (f - 1 - k)) & 1u) {
            const auto& basis = nullspace[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] ^= basis[i];
        }
    }
    return v;
}

}  // namespace conley
