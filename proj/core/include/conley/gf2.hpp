#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conley/errors.hpp"

namespace conley {

/// Dense matrix over the two-element field, stored as 64-bit row words.
/// Zero-by-n and n-by-zero shapes are legal and behave like empty maps.
class Gf2Matrix {
  public:
    Gf2Matrix() = default;
    Gf2Matrix(int rows, int cols);

    static Gf2Matrix identity(int n);
    /// Parse rows of '0'/'1' characters ("001" puts a one in column 2).
    static Gf2Matrix from_bit_rows(const std::vector<std::string>& rows, int expect_rows = -1,
                                   int expect_cols = -1);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const;
    void set(int r, int c, bool value);

    bool is_zero() const;
    bool operator==(const Gf2Matrix& other) const;
    bool operator!=(const Gf2Matrix& other) const { return !(*this == other); }

    Gf2Matrix operator*(const Gf2Matrix& rhs) const;
    Gf2Matrix operator+(const Gf2Matrix& rhs) const;

    /// Rank by forward elimination, always pivoting on the lowest-index
    /// candidate so the result of every derived basis is deterministic.
    int rank() const;
    int nullity() const { return cols_ - rank(); }
    bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

    /// Rows span the null space; in reduced form with deterministic order.
    Gf2Matrix kernel_basis() const;

    /// Gauss-Jordan inverse; throws InputError when singular or non-square.
    Gf2Matrix inverse() const;

    /// Apply to a coordinate vector of the column space.
    std::vector<std::uint64_t> apply(const std::vector<std::uint64_t>& v) const;

    std::string row_bits(int r) const;
    std::vector<std::string> to_bit_rows() const;

    const std::uint64_t* row_ptr(int r) const { return words_.data() + static_cast<std::size_t>(r) * wpr_; }
    std::uint64_t* row_ptr(int r) { return words_.data() + static_cast<std::size_t>(r) * wpr_; }
    int words_per_row() const { return wpr_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    int wpr_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Incremental row-echelon basis over GF(2); used for homology ranks and
/// for expressing cycles in a chosen representative basis.
class Gf2RowBasis {
  public:
    explicit Gf2RowBasis(int width);

    /// Reduce v against the basis, returning the residue.
    std::vector<std::uint64_t> reduce(std::vector<std::uint64_t> v) const;
    /// Insert v if independent; returns true when the basis grew.
    bool insert(std::vector<std::uint64_t> v);
    int size() const { return static_cast<int>(rows_.size()); }
    int width() const { return width_; }

  private:
    int width_;
    int wpr_;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::vector<int> pivots_;
};

/// Finitely supported list of dimensions per homological degree.
class GradedSpace {
  public:
    GradedSpace() = default;
    explicit GradedSpace(std::map<int, int> dims);

    int dim(int degree) const;
    void set_dim(int degree, int dim);

    /// Support bounds; min_degree() > max_degree() means the zero space.
    int min_degree() const;
    int max_degree() const;
    int total_dim() const;
    bool is_zero() const { return dims_.empty(); }

    const std::map<int, int>& dims() const { return dims_; }
    bool operator==(const GradedSpace&) const = default;

    static GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b);
    /// Degrees move up by `shift`.
    GradedSpace shifted(int shift) const;

  private:
    std::map<int, int> dims_;
};

/// Caps applied when ingesting external data.
struct GradedLimits {
    int max_degree = 8;
    int max_dim_per_degree = 32;
};

void check_limits(const GradedSpace& space, const GradedLimits& limits = {});

/// Degree-d family of GF(2) blocks between two graded spaces.
/// block(n) maps degree n of the source into degree n+degree() of the target;
/// absent blocks are zero.
class GradedMap {
  public:
    GradedMap() = default;
    GradedMap(GradedSpace source, GradedSpace target, int degree);

    static GradedMap identity(const GradedSpace& space);
    static GradedMap zero(GradedSpace source, GradedSpace target, int degree);

    const GradedSpace& source() const { return source_; }
    const GradedSpace& target() const { return target_; }
    int degree() const { return degree_; }

    Gf2Matrix block(int n) const;
    void set_block(int n, Gf2Matrix m);
    const std::map<int, Gf2Matrix>& stored_blocks() const { return blocks_; }

    bool is_zero() const;
    bool operator==(const GradedMap& other) const;

  private:
    GradedSpace source_;
    GradedSpace target_;
    int degree_ = 0;
    std::map<int, Gf2Matrix> blocks_;  // nonzero blocks only
};

/// f after g; degrees add.
GradedMap compose(const GradedMap& f, const GradedMap& g);
GradedMap add(const GradedMap& f, const GradedMap& g);

/// True iff d is a degree -1 endomorphism with d*d = 0.
bool is_boundary(const GradedMap& d);

/// A graded GF(2) space with a square-zero degree -1 boundary.
struct ChainComplex {
    GradedSpace space;
    GradedMap boundary;
};

/// Validates the boundary shape and d*d = 0; throws InputError otherwise.
ChainComplex make_complex(GradedSpace space, GradedMap boundary);

/// dim H_n = nullity(d_n) - rank(d_{n+1}).
GradedSpace homology(const ChainComplex& c);
bool is_acyclic(const ChainComplex& c);

bool is_chain_map(const GradedMap& t, const ChainComplex& from, const ChainComplex& to);

/// Map induced on homology in deterministic cycle-representative bases
/// (pivot order of the elimination). Requires is_chain_map.
GradedMap induced_homology_map(const GradedMap& t, const ChainComplex& from, const ChainComplex& to);

/// Cone of a degree-0 chain map: dims[n] = from.dims[n-1] + to.dims[n],
/// boundary [[d_from, 0], [t, d_to]]. Acyclic iff t is a quasi-isomorphism.
ChainComplex mapping_cone(const GradedMap& t, const ChainComplex& from, const ChainComplex& to);

/// Affine linear system over GF(2) in a fixed number of bit variables.
class Gf2LinearSystem {
  public:
    explicit Gf2LinearSystem(int num_vars);

    /// sum of listed variables = rhs; repeated indices cancel.
    void add_equation(const std::vector<int>& vars, bool rhs);

    struct AffineSolutionSet {
        std::vector<std::uint8_t> particular;               // one solution
        std::vector<std::vector<std::uint8_t>> nullspace;   // basis of the homogeneous part
        int free_bits() const { return static_cast<int>(nullspace.size()); }
        /// Solution for a free-coordinate assignment, bit k of `index`
        /// driving nullspace vector k (most significant first).
        std::vector<std::uint8_t> solution(std::uint64_t index) const;
    };

    /// Empty optional when the system is inconsistent.
    std::optional<AffineSolutionSet> solve() const;

    int num_vars() const { return num_vars_; }
    int num_equations() const { return static_cast<int>(rows_.size()); }

  private:
    int num_vars_;
    int wpr_;
    std::vector<std::vector<std::uint64_t>> rows_;  // augmented: last bit is rhs
};

}  // namespace conley
