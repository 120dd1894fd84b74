#include <algorithm>
#include <random>

#include "conley/continuation.hpp"
#include "conley/model_io.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace conley;

namespace {

IntervalPair pair(IdSet j0, IdSet j1) { return IntervalPair{normalize_ids(std::move(j0)), normalize_ids(std::move(j1))}; }

// Matched n-chains on both slices with every singleton pair declared;
// valid decompositions are exactly the partitions into consecutive runs.
MorseModel matched_chain_model(int n) {
    std::vector<std::string> e0, e1;
    std::vector<std::pair<std::string, std::string>> c0, c1;
    std::map<std::string, GradedSpace> i0, i1;
    for (int i = 1; i <= n; ++i) {
        e0.push_back(std::to_string(i) + "@0");
        e1.push_back(std::to_string(i) + "@1");
        i0[e0.back()] = GradedSpace{{{0, 1}}};
        i1[e1.back()] = GradedSpace{{{0, 1}}};
    }
    for (int i = 1; i < n; ++i) {
        c0.emplace_back(std::to_string(i) + "@0", std::to_string(i + 1) + "@0");
        c1.emplace_back(std::to_string(i) + "@1", std::to_string(i + 1) + "@1");
    }
    std::vector<IntervalPair> declared;
    for (int i = 1; i <= n; ++i)
        declared.push_back(pair({std::to_string(i) + "@0"}, {std::to_string(i) + "@1"}));
    return MorseModel(MorseSlice(0, Poset::from_covers(e0, c0), i0, {}),
                      MorseSlice(1, Poset::from_covers(e1, c1), i1, {}), declared, 0.5);
}

Decomposition random_run_partition(std::mt19937& rng, int n) {
    Decomposition d;
    int start = 1;
    std::bernoulli_distribution cut(0.5);
    for (int i = 1; i <= n; ++i) {
        if (i == n || cut(rng)) {
            IdSet j0, j1;
            for (int k = start; k <= i; ++k) {
                j0.push_back(std::to_string(k) + "@0");
                j1.push_back(std::to_string(k) + "@1");
            }
            d.pairs.push_back(pair(j0, j1));
            start = i + 1;
        }
    }
    return canonical(d);
}

}  // namespace

TEST_CASE("validate_decomposition examples") {
    MorseModel pitchfork = load_model(test_data("pitchfork.json"));
    CHECK(validate_decomposition(pitchfork, trivial_decomposition(pitchfork)).all_pass());
    // The pitchfork's only decomposition is the trivial pair itself.
    Decomposition one{{pair({"1@0"}, {"1@1", "2@1", "3@1"})}};
    CHECK(validate_decomposition(pitchfork, one).all_pass());

    MorseModel main = load_model(test_data("mainexample.json"));
    Decomposition three{{pair({"1@0"}, {"1@1"}), pair({"2@0"}, {"2@1", "3@1", "4@1"}),
                         pair({"5@0"}, {"5@1"})}};
    CHECK(validate_decomposition(main, three).all_pass());

    // Missing coverage fails.
    Decomposition partial{{pair({"1@0"}, {"1@1"})}};
    CHECK_FALSE(validate_decomposition(main, partial).all_pass());

    CHECK_THROWS_AS(validate_decomposition(main, Decomposition{{pair({"9@0"}, {})}}), InputError);
}

TEST_CASE("oracle closure derives intersections and complements") {
    MorseModel figure1 = load_model(test_data("figure1.json"));
    ContinuabilityOracle oracle(figure1);
    CHECK(oracle.continuable(pair({"1@0", "2@0", "3@0", "4@0", "5@0"},
                                  {"1@1", "2@1", "3@1", "4@1", "5@1"})));
    CHECK(oracle.continuable(pair({"2@0", "3@0", "4@0", "5@0"}, {"2@1", "3@1", "4@1", "5@1"})));
    CHECK(oracle.continuable(pair({"3@0", "4@0", "5@0"}, {"3@1", "4@1", "5@1"})));
    CHECK(oracle.continuable(pair({"3@0", "4@0"}, {})));
    CHECK_FALSE(oracle.continuable(pair({"5@0"}, {"5@1"})));
    CHECK_FALSE(oracle.continuable(pair({"3@0"}, {})));
}

TEST_CASE("reduced_intersection") {
    MorseModel figure1 = load_model(test_data("figure1.json"));
    Decomposition d1{{pair({"1@0"}, {"1@1"}),
                      pair({"2@0", "3@0", "4@0", "5@0"}, {"2@1", "3@1", "4@1", "5@1"})}};
    Decomposition d2{{pair({"1@0", "2@0"}, {"1@1", "2@1"}),
                      pair({"3@0", "4@0", "5@0"}, {"3@1", "4@1", "5@1"})}};
    REQUIRE(validate_decomposition(figure1, d1).all_pass());
    REQUIRE(validate_decomposition(figure1, d2).all_pass());

    // Frozen from the set-intersection oracle: intersect componentwise and
    // drop the (empty, empty) pairs.
    Decomposition oracle_result;
    for (const auto& a : d1.pairs)
        for (const auto& b : d2.pairs) {
            IntervalPair meet{id_set_intersection(a.j0, b.j0), id_set_intersection(a.j1, b.j1)};
            if (meet.has_nonempty_side()) oracle_result.pairs.push_back(meet);
        }
    oracle_result = canonical(oracle_result);
    CHECK(oracle_result.pairs.size() == 3);

    Decomposition result = reduced_intersection(figure1, d1, d2);
    CHECK(result == oracle_result);
    CHECK(validate_decomposition(figure1, result).all_pass());

    // Intersecting with the finest yields the finest: the four pairs
    // including the empty-right saddle-node pair.
    Decomposition finest = finest_decomposition(figure1);
    CHECK(reduced_intersection(figure1, d1, finest) == finest);
    CHECK(reduced_intersection(figure1, d1, finest).pairs.size() == 4);

    // d meet trivial = d, and idempotence.
    CHECK(reduced_intersection(figure1, d1, trivial_decomposition(figure1)) == canonical(d1));
    CHECK(reduced_intersection(figure1, d1, d1) == canonical(d1));
}

TEST_CASE("finest decomposition of the saddle-node + pitchfork diagram") {
    MorseModel figure1 = load_model(test_data("figure1.json"));
    Decomposition finest = finest_decomposition(figure1);
    Decomposition expected{{pair({"1@0"}, {"1@1"}), pair({"2@0"}, {"2@1"}), pair({"3@0", "4@0"}, {}),
                            pair({"5@0"}, {"3@1", "4@1", "5@1"})}};
    CHECK(finest == canonical(expected));
}

TEST_CASE("finest of an undeclared model is the trivial pair") {
    MorseModel sink = load_model(test_data("single_sink.json"));
    CHECK(finest_decomposition(sink) == trivial_decomposition(sink));

    MorseModel pitchfork = load_model(test_data("pitchfork.json"));
    CHECK(finest_decomposition(pitchfork) == trivial_decomposition(pitchfork));
}

TEST_CASE("finest of the eight-set example") {
    MorseModel main = load_model(test_data("mainexample.json"));
    Decomposition expected{{pair({"1@0"}, {"1@1"}), pair({"2@0"}, {"2@1", "3@1", "4@1"}),
                            pair({"5@0"}, {"5@1"})}};
    CHECK(finest_decomposition(main) == canonical(expected));
}

TEST_CASE("finest is invariant under permutation of declared pairs") {
    MorseModel figure1 = load_model(test_data("figure1.json"));
    Decomposition expected = finest_decomposition(figure1);
    std::vector<IntervalPair> declared = figure1.continuable_pairs();
    std::mt19937 rng(31);
    for (int shuffle = 0; shuffle < 100; ++shuffle) {
        std::shuffle(declared.begin(), declared.end(), rng);
        MorseModel permuted(figure1.slice0(), figure1.slice1(), declared, figure1.lambda0());
        CHECK(finest_decomposition(permuted) == expected);
    }
}

TEST_CASE("is_indecomposable") {
    MorseModel figure1 = load_model(test_data("figure1.json"));
    CHECK(is_indecomposable(figure1, pair({"1@0"}, {"1@1"})));
    CHECK_FALSE(is_indecomposable(figure1, trivial_decomposition(figure1).pairs.front()));
    CHECK(is_indecomposable(figure1, pair({"3@0", "4@0"}, {})));
    CHECK_THROWS_AS(is_indecomposable(figure1, pair({"1@0"}, {"2@1"})), InputError);
}

TEST_CASE("every finest pair is indecomposable") {
    for (const char* name : {"figure1.json", "mainexample.json", "pitchfork.json"}) {
        MorseModel model = load_model(test_data(name));
        for (const auto& p : finest_decomposition(model).pairs) CHECK(is_indecomposable(model, p));
    }
}

TEST_CASE("reduced_intersection is commutative, associative, idempotent") {
    MorseModel model = matched_chain_model(6);
    std::mt19937 rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        Decomposition a = random_run_partition(rng, 6);
        Decomposition b = random_run_partition(rng, 6);
        Decomposition c = random_run_partition(rng, 6);
        REQUIRE(validate_decomposition(model, a).all_pass());
        CHECK(reduced_intersection(model, a, b) == reduced_intersection(model, b, a));
        CHECK(reduced_intersection(model, a, a) == a);
        Decomposition ab_c = reduced_intersection(model, reduced_intersection(model, a, b), c);
        Decomposition a_bc = reduced_intersection(model, a, reduced_intersection(model, b, c));
        CHECK(ab_c == a_bc);
    }
}

TEST_CASE("finest refines every valid decomposition") {
    MorseModel figure1 = load_model(test_data("figure1.json"));
    Decomposition finest = finest_decomposition(figure1);
    Decomposition d1{{pair({"1@0"}, {"1@1"}),
                      pair({"2@0", "3@0", "4@0", "5@0"}, {"2@1", "3@1", "4@1", "5@1"})}};
    Decomposition d2{{pair({"1@0", "2@0"}, {"1@1", "2@1"}),
                      pair({"3@0", "4@0", "5@0"}, {"3@1", "4@1", "5@1"})}};
    for (const auto& other : {trivial_decomposition(figure1), d1, d2}) {
        REQUIRE(validate_decomposition(figure1, other).all_pass());
        for (const auto& fine : finest.pairs) {
            int containers = 0;
            for (const auto& coarse : other.pairs)
                if (id_set_subset(fine.j0, coarse.j0) && id_set_subset(fine.j1, coarse.j1)) ++containers;
            CHECK(containers == 1);
        }
    }
}

TEST_CASE("splitting lemma: complements of nested members are accepted") {
    for (const char* name : {"figure1.json", "mainexample.json"}) {
        MorseModel model = load_model(test_data(name));
        ContinuabilityOracle oracle(model);
        for (const auto& outer : oracle.members()) {
            for (const auto& inner : oracle.members()) {
                if (!id_set_subset(inner.j0, outer.j0) || !id_set_subset(inner.j1, outer.j1)) continue;
                IntervalPair rest{id_set_difference(outer.j0, inner.j0),
                                  id_set_difference(outer.j1, inner.j1)};
                if (!rest.has_nonempty_side()) continue;
                if (!is_interval(model.slice0().order(), rest.j0) ||
                    !is_interval(model.slice1().order(), rest.j1))
                    continue;
                CHECK(oracle.continuable(rest));
            }
        }
    }
}
