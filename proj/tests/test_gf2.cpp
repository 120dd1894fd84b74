#include <random>

#include "conley/gf2.hpp"
#include "doctest.h"

using namespace conley;

namespace {

Gf2Matrix random_matrix(std::mt19937& rng, int rows, int cols) {
    Gf2Matrix m(rows, cols);
    std::bernoulli_distribution coin(0.5);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (coin(rng)) m.set(r, c, true);
    return m;
}

Gf2Matrix random_invertible(std::mt19937& rng, int n) {
    for (;;) {
        Gf2Matrix m = random_matrix(rng, n, n);
        if (m.is_invertible()) return m;
    }
}

// Naive triple-loop product oracle.
Gf2Matrix naive_product(const Gf2Matrix& a, const Gf2Matrix& b) {
    Gf2Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            bool acc = false;
            for (int k = 0; k < a.cols(); ++k) acc ^= (a.get(i, k) && b.get(k, j));
            out.set(i, j, acc);
        }
    return out;
}

// Kernel and image sizes by enumerating all vectors; dims <= 3 only.
int brute_kernel_dim(const Gf2Matrix& m) {
    int count = 0;
    for (int mask = 0; mask < (1 << m.cols()); ++mask) {
        std::vector<bool> out(static_cast<std::size_t>(m.rows()), false);
        for (int c = 0; c < m.cols(); ++c)
            if (mask & (1 << c))
                for (int r = 0; r < m.rows(); ++r) out[static_cast<std::size_t>(r)] = out[static_cast<std::size_t>(r)] ^ m.get(r, c);
        bool zero = true;
        for (bool b : out) zero = zero && !b;
        if (zero) ++count;
    }
    int dim = 0;
    while ((1 << dim) < count) ++dim;
    return dim;
}

int brute_rank(const Gf2Matrix& m) { return m.cols() - brute_kernel_dim(m); }

ChainComplex tower(std::map<int, int> dims, std::map<int, Gf2Matrix> blocks) {
    GradedSpace space{std::move(dims)};
    GradedMap d(space, space, -1);
    for (auto& [n, m] : blocks) d.set_block(n, std::move(m));
    return make_complex(space, d);
}

ChainComplex random_complex(std::mt19937& rng, int max_dim_per_degree, int degrees) {
    for (;;) {
        std::map<int, int> dims;
        std::uniform_int_distribution<int> dim_dist(0, max_dim_per_degree);
        for (int n = 0; n < degrees; ++n) {
            int d = dim_dist(rng);
            if (d > 0) dims[n] = d;
        }
        GradedSpace space{dims};
        GradedMap d(space, space, -1);
        for (int n = 1; n < degrees; ++n) {
            int rows = space.dim(n - 1), cols = space.dim(n);
            if (rows == 0 || cols == 0) continue;
            d.set_block(n, random_matrix(rng, rows, cols));
        }
        if (compose(d, d).is_zero()) return ChainComplex{space, d};
        // Kill the obstruction by zeroing alternate blocks.
        for (int n = 2; n < degrees; n += 2) d.set_block(n, Gf2Matrix(space.dim(n - 1), space.dim(n)));
        if (compose(d, d).is_zero()) return ChainComplex{space, d};
    }
}

}  // namespace

TEST_CASE("matrix basics") {
    Gf2Matrix m = Gf2Matrix::from_bit_rows({"001", "001", "000"});
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 3);
    CHECK(m.get(0, 2));
    CHECK_FALSE(m.get(2, 2));
    CHECK(m.rank() == 1);
    CHECK(m.row_bits(0) == "001");
    CHECK_THROWS_AS(Gf2Matrix::from_bit_rows({"01", "0"}), InputError);
    CHECK_THROWS_AS(Gf2Matrix::from_bit_rows({"0x"}), InputError);
}

TEST_CASE("empty shapes behave") {
    Gf2Matrix a(0, 3);
    Gf2Matrix b(3, 0);
    CHECK(a.rank() == 0);
    CHECK(a.nullity() == 3);
    CHECK(b.kernel_basis().rows() == 0);
    CHECK((a * Gf2Matrix(3, 2)).rows() == 0);
    Gf2Matrix prod = b * a;  // 3x0 * 0x3 = 3x3 zero
    CHECK(prod.rows() == 3);
    CHECK(prod.is_zero());
}

TEST_CASE("inverse") {
    std::mt19937 rng(3);
    for (int n = 1; n <= 5; ++n) {
        Gf2Matrix m = random_invertible(rng, n);
        CHECK(m * m.inverse() == Gf2Matrix::identity(n));
    }
    CHECK_THROWS_AS(Gf2Matrix(2, 2).inverse(), InputError);
}

TEST_CASE("compose: identity, zero, random against the naive oracle") {
    GradedSpace s{{{0, 3}, {1, 3}}};
    GradedMap id = GradedMap::identity(s);
    std::mt19937 rng(5);

    GradedMap f(s, s, 0);
    f.set_block(0, random_matrix(rng, 3, 3));
    f.set_block(1, random_matrix(rng, 3, 3));
    CHECK(compose(id, f) == f);
    CHECK(compose(f, id) == f);

    GradedMap zero(s, s, 0);
    CHECK(compose(f, zero).is_zero());

    GradedMap g(s, s, 0);
    g.set_block(0, random_matrix(rng, 3, 3));
    g.set_block(1, random_matrix(rng, 3, 3));
    GradedMap fg = compose(f, g);
    for (int n = 0; n <= 1; ++n) CHECK(fg.block(n) == naive_product(f.block(n), g.block(n)));

    GradedSpace other{{{0, 2}}};
    GradedMap bad(other, other, 0);
    CHECK_THROWS_AS(compose(f, bad), InputError);
}

TEST_CASE("is_boundary") {
    GradedSpace s2{{{0, 2}}};
    GradedMap zero(s2, s2, -1);
    CHECK(is_boundary(zero));

    GradedSpace s11{{{0, 1}, {1, 1}}};
    GradedMap d(s11, s11, -1);
    d.set_block(1, Gf2Matrix::from_bit_rows({"1"}));
    CHECK(is_boundary(d));

    GradedSpace s111{{{0, 1}, {1, 1}, {2, 1}}};
    GradedMap bad(s111, s111, -1);
    bad.set_block(1, Gf2Matrix::from_bit_rows({"1"}));
    bad.set_block(2, Gf2Matrix::from_bit_rows({"1"}));
    CHECK_FALSE(is_boundary(bad));

    GradedMap wrong(s2, s2, 0);
    CHECK_THROWS_AS(is_boundary(wrong), InputError);
}

TEST_CASE("homology of small towers") {
    ChainComplex zero2 = tower({{0, 2}}, {});
    CHECK(homology(zero2).dim(0) == 2);

    ChainComplex acyclic = tower({{0, 1}, {1, 1}}, {{1, Gf2Matrix::from_bit_rows({"1"})}});
    CHECK(homology(acyclic).is_zero());
    CHECK(is_acyclic(acyclic));
}

TEST_CASE("rank-nullity at every degree") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        ChainComplex c = random_complex(rng, 4, 4);
        for (int n = 0; n <= 4; ++n) {
            Gf2Matrix d = c.boundary.block(n);
            CHECK(d.rank() + d.nullity() == c.space.dim(n));
        }
    }
}

TEST_CASE("homology dims are basis independent") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        ChainComplex c = random_complex(rng, 4, 3);
        // Conjugate the boundary by a random invertible change of basis.
        std::map<int, Gf2Matrix> basis;
        for (int n = 0; n <= 3; ++n) {
            int d = c.space.dim(n);
            basis[n] = d > 0 ? random_invertible(rng, d) : Gf2Matrix(0, 0);
        }
        GradedMap conj(c.space, c.space, -1);
        for (int n = 0; n <= 3; ++n) {
            if (c.space.dim(n) == 0 || c.space.dim(n - 1) == 0) continue;
            conj.set_block(n, basis[n - 1].inverse() * c.boundary.block(n) * basis[n]);
        }
        ChainComplex changed = make_complex(c.space, conj);
        CHECK(homology(changed) == homology(c));
    }
}

TEST_CASE("kernel and image ranks agree with brute force on dims <= 3") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        Gf2Matrix m = random_matrix(rng, 3, 3);
        CHECK(m.rank() == brute_rank(m));
        CHECK(m.nullity() == brute_kernel_dim(m));
        Gf2Matrix k = m.kernel_basis();
        CHECK(k.rows() == m.nullity());
        // Every kernel basis row actually maps to zero.
        for (int r = 0; r < k.rows(); ++r) {
            Gf2Matrix col(3, 1);
            for (int c = 0; c < 3; ++c) col.set(c, 0, k.get(r, c));
            CHECK((m * col).is_zero());
        }
    }
}

TEST_CASE("is_chain_map") {
    ChainComplex acyclic = tower({{0, 1}, {1, 1}}, {{1, Gf2Matrix::from_bit_rows({"1"})}});
    GradedMap zero(acyclic.space, acyclic.space, 0);
    CHECK(is_chain_map(zero, acyclic, acyclic));
    CHECK(is_chain_map(GradedMap::identity(acyclic.space), acyclic, acyclic));
}

TEST_CASE("pitchfork transition is a chain map with an induced isomorphism") {
    // Slice 1: two sinks at degree 0, one source at degree 1, both unit
    // connections. Slice 0: one sink.
    ChainComplex from = tower({{0, 2}, {1, 1}}, {{1, Gf2Matrix::from_bit_rows({"1", "1"})}});
    ChainComplex to = tower({{0, 1}}, {});
    GradedMap t(from.space, to.space, 0);
    t.set_block(0, Gf2Matrix::from_bit_rows({"11"}));
    CHECK(is_chain_map(t, from, to));

    GradedSpace h_from = homology(from);
    CHECK(h_from.dim(0) == 1);
    CHECK(h_from.dim(1) == 0);

    GradedMap induced = induced_homology_map(t, from, to);
    CHECK(induced.block(0) == Gf2Matrix::from_bit_rows({"1"}));

    CHECK(is_acyclic(mapping_cone(t, from, to)));
}

TEST_CASE("induced map of identity and zero") {
    ChainComplex c = tower({{0, 2}, {1, 1}}, {{1, Gf2Matrix::from_bit_rows({"1", "0"})}});
    GradedMap id = GradedMap::identity(c.space);
    GradedMap induced = induced_homology_map(id, c, c);
    GradedSpace h = homology(c);
    for (int n = 0; n <= 1; ++n) CHECK(induced.block(n) == Gf2Matrix::identity(h.dim(n)));

    GradedMap zero(c.space, c.space, 0);
    CHECK(induced_homology_map(zero, c, c).is_zero());
}

TEST_CASE("mapping cone of the identity is acyclic; cone of zero sums shifted homology") {
    ChainComplex c = tower({{0, 2}, {1, 1}}, {{1, Gf2Matrix::from_bit_rows({"1", "0"})}});
    CHECK(is_acyclic(mapping_cone(GradedMap::identity(c.space), c, c)));

    GradedMap zero(c.space, c.space, 0);
    ChainComplex cone = mapping_cone(zero, c, c);
    GradedSpace h = homology(c);
    GradedSpace hc = homology(cone);
    for (int n = 0; n <= 2; ++n) CHECK(hc.dim(n) == h.dim(n) + h.dim(n - 1));
}

TEST_CASE("quasi-isomorphism iff acyclic cone on small complexes") {
    std::mt19937 rng(29);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        ChainComplex from = random_complex(rng, 2, 3);
        ChainComplex to = random_complex(rng, 2, 3);
        if (from.space.total_dim() + to.space.total_dim() > 6) continue;
        // Random candidate blocks; keep only chain maps.
        GradedMap t(from.space, to.space, 0);
        for (int n = 0; n <= 3; ++n) {
            int rows = to.space.dim(n), cols = from.space.dim(n);
            if (rows && cols) t.set_block(n, random_matrix(rng, rows, cols));
        }
        if (!is_chain_map(t, from, to)) continue;
        ++checked;
        GradedMap induced = induced_homology_map(t, from, to);
        GradedSpace h_from = homology(from);
        GradedSpace h_to = homology(to);
        bool iso = h_from == h_to;
        if (iso)
            for (int n = 0; n <= 3; ++n)
                if (induced.block(n).rank() != h_from.dim(n)) iso = false;
        CHECK(iso == is_acyclic(mapping_cone(t, from, to)));
    }
    CHECK(checked > 20);
}

TEST_CASE("affine linear systems over GF(2)") {
    // x0 + x1 = 1, x1 + x2 = 0 -> one free bit.
    Gf2LinearSystem sys(3);
    sys.add_equation({0, 1}, true);
    sys.add_equation({1, 2}, false);
    auto sol = sys.solve();
    REQUIRE(sol.has_value());
    CHECK(sol->free_bits() == 1);
    for (std::uint64_t idx = 0; idx < 2; ++idx) {
        auto v = sol->solution(idx);
        CHECK((v[0] ^ v[1]) == 1);
        CHECK((v[1] ^ v[2]) == 0);
    }

    Gf2LinearSystem bad(1);
    bad.add_equation({}, true);
    CHECK_FALSE(bad.solve().has_value());

    Gf2LinearSystem inconsistent(2);
    inconsistent.add_equation({0}, true);
    inconsistent.add_equation({0}, false);
    CHECK_FALSE(inconsistent.solve().has_value());
}
