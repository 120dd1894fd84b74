#include <cmath>

#include "conley/model_io.hpp"
#include "conley/slowfast.hpp"
#include "conley/transition.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace conley;

TEST_CASE("analyze_slice on the pitchfork family") {
    Family1D family = Family1D::pitchfork(0.5);

    SUBCASE("below the bifurcation: a single sink at the origin") {
        SliceAnalysis s = analyze_slice(family, 0.2);
        REQUIRE(s.fixed_points.size() == 1);
        CHECK(s.fixed_points[0].stability == FixedPoint1D::Stability::Sink);
        CHECK(std::abs(s.fixed_points[0].x) < 1e-8);
        CHECK(s.fixed_points[0].label == "M1");
    }

    SUBCASE("above the bifurcation: analytic roots 0 and +-sqrt(lambda - lambda0)") {
        double lambda = 0.9;
        double branch = std::sqrt(lambda - 0.5);
        SliceAnalysis s = analyze_slice(family, lambda);
        REQUIRE(s.fixed_points.size() == 3);
        CHECK(std::abs(s.fixed_points[0].x + branch) < 1e-8);
        CHECK(std::abs(s.fixed_points[1].x) < 1e-8);
        CHECK(std::abs(s.fixed_points[2].x - branch) < 1e-8);
        CHECK(s.fixed_points[0].stability == FixedPoint1D::Stability::Sink);
        CHECK(s.fixed_points[1].stability == FixedPoint1D::Stability::Source);
        CHECK(s.fixed_points[2].stability == FixedPoint1D::Stability::Sink);
        // Sinks first: M1, M3 = source, M2 = upper branch.
        CHECK(s.fixed_points[0].label == "M1");
        CHECK(s.fixed_points[1].label == "M3");
        CHECK(s.fixed_points[2].label == "M2");
        // Source above both sinks in the slice order.
        CHECK(s.morse_order.less("M1", "M3"));
        CHECK(s.morse_order.less("M2", "M3"));
        // Indices: sink at degree 0, source at degree 1.
        CHECK(s.conley_index.at("M1").dim(0) == 1);
        CHECK(s.conley_index.at("M3").dim(1) == 1);
    }

    SUBCASE("at the bifurcation: one non-hyperbolic root") {
        SliceAnalysis s = analyze_slice(family, 0.5);
        REQUIRE(s.fixed_points.size() == 1);
        CHECK(s.fixed_points[0].stability == FixedPoint1D::Stability::NonHyperbolic);
        CHECK(s.has_non_hyperbolic);
    }

    SUBCASE("analytic roots across a parameter sweep") {
        for (int i = 0; i <= 100; ++i) {
            double lambda = i / 100.0;
            if (std::abs(lambda - 0.5) < 1e-3) continue;
            SliceAnalysis s = analyze_slice(family, lambda);
            if (lambda < 0.5) {
                REQUIRE(s.fixed_points.size() == 1);
                CHECK(std::abs(s.fixed_points[0].x) < 1e-8);
            } else {
                double branch = std::sqrt(lambda - 0.5);
                REQUIRE(s.fixed_points.size() == 3);
                CHECK(std::abs(s.fixed_points[0].x + branch) < 1e-8);
                CHECK(std::abs(s.fixed_points[2].x - branch) < 1e-8);
            }
        }
    }
}

TEST_CASE("detect_breakdown") {
    SUBCASE("pitchfork bracket straddles lambda0") {
        Family1D family = Family1D::pitchfork(0.5);
        BreakdownScan scan = detect_breakdown(family, 256);
        REQUIRE_FALSE(scan.breakdowns.empty());
        bool found = false;
        for (const auto& b : scan.breakdowns) {
            if (b.lo <= 0.5 && 0.5 <= b.hi) {
                found = true;
                CHECK(b.hi - b.lo <= 1.0 / 256 + 1e-12);
            }
        }
        CHECK(found);
    }

    SUBCASE("a constant sink family has no breakdown") {
        BreakdownScan scan = detect_breakdown(Family1D::linear_sink(), 64);
        CHECK(scan.breakdowns.empty());
        REQUIRE(scan.windows.size() == 1);
        CHECK(scan.windows[0].signature == "+");
    }

    SUBCASE("perturbed pitchfork fold at the closed-form parameter") {
        Family1D family = Family1D::perturbed_pitchfork(0.5, 0.02);
        double fold = family.fold_lambda();
        // Closed form: lambda0 + (3 sqrt(3) h / 2)^(2/3).
        CHECK(fold == doctest::Approx(0.5 + std::pow(3.0 * std::sqrt(3.0) * 0.02 / 2.0, 2.0 / 3.0)));
        BreakdownScan scan = detect_breakdown(family, 256);
        REQUIRE(scan.breakdowns.size() == 1);
        CHECK(scan.breakdowns[0].lo <= fold);
        CHECK(fold <= scan.breakdowns[0].hi);
        CHECK(scan.breakdowns[0].hi - scan.breakdowns[0].lo <= 1.0 / 256 + 1e-12);
    }

    SUBCASE("grid floor") {
        CHECK_THROWS_AS(detect_breakdown(Family1D::linear_sink(), 8), InputError);
    }
}

TEST_CASE("integrate_extended") {
    Family1D family = Family1D::pitchfork(0.5);

    SUBCASE("frozen drift keeps lambda constant") {
        IntegrationOptions options;
        options.horizon = 50.0;
        OrbitTrace trace = integrate_extended(family, 0.0, 0.3, 0.7, options);
        for (const auto& s : trace.samples) CHECK(std::abs(s[2] - 0.7) < 1e-12);
    }

    SUBCASE("the invariant line x = 0 is preserved") {
        IntegrationOptions options;
        options.horizon = 2000.0;
        OrbitTrace trace = integrate_extended(family, 1e-2, 0.0, 0.9, options);
        for (const auto& s : trace.samples) CHECK(std::abs(s[1]) < 1e-14);
    }

    SUBCASE("lambda decreases strictly inside (0, 1) for positive drift") {
        IntegrationOptions options;
        options.horizon = 1e5;
        OrbitTrace trace = integrate_extended(family, 1e-2, 1e-6, 1.0 - 1e-3, options);
        for (std::size_t i = 1; i < trace.samples.size(); ++i)
            CHECK(trace.samples[i][2] < trace.samples[i - 1][2]);
    }

    SUBCASE("slow-manifold following at eps = 1e-3") {
        IntegrationOptions options;
        options.horizon = 40.0 / 1e-3;
        options.lambda_grid = 100;
        OrbitTrace trace = integrate_extended(family, 1e-3, 1e-6, 1.0 - 1e-3, options);
        // Within 1e-2 of the upper branch on [0.6, 0.9] ...
        for (const auto& [lam, xs] : trace.slice_hits) {
            if (lam >= 0.6 && lam <= 0.9) {
                REQUIRE_FALSE(xs.empty());
                CHECK(std::abs(xs.front() - std::sqrt(lam - 0.5)) < 1e-2);
            }
            // ... back within 1e-2 of the origin below 0.4.
            if (lam <= 0.4 && !xs.empty()) CHECK(std::abs(xs.front()) < 1e-2);
        }
    }

    SUBCASE("window exit is flagged") {
        Family1D narrow = family;
        narrow.x_max = 0.5;
        IntegrationOptions options;
        options.horizon = 1e4;
        OrbitTrace trace = integrate_extended(narrow, 1e-2, 0.45, 0.99, options);
        CHECK(trace.exited_window);
    }

    SUBCASE("step doubling keeps slice hits stable to 1e-6") {
        IntegrationOptions coarse;
        coarse.horizon = 40.0 / 1e-2;
        coarse.lambda_grid = 64;
        IntegrationOptions fine = coarse;
        fine.step = coarse.step / 2.0;
        OrbitTrace a = integrate_extended(family, 1e-2, 1e-6, 1.0 - 1e-3, coarse);
        OrbitTrace b = integrate_extended(family, 1e-2, 1e-6, 1.0 - 1e-3, fine);
        for (const auto& [lam, xs] : a.slice_hits) {
            auto it = b.slice_hits.find(lam);
            if (it == b.slice_hits.end() || xs.empty() || it->second.empty()) continue;
            CHECK(std::abs(xs.front() - it->second.front()) < 1e-6);
        }
    }
}

TEST_CASE("hausdorff_distance") {
    CHECK(hausdorff_distance({{0.0, 0.0}}, {{0.0, 0.0}}) == 0.0);
    CHECK(hausdorff_distance({{0.0, 0.0}}, {{3.0, 4.0}}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(hausdorff_distance({}, {{1.0, 1.0}}), InputError);

    // Successive eps-traces of the pitchfork connecting orbit approach each
    // other as the drift slows.
    Family1D family = Family1D::pitchfork(0.5);
    auto points = [&](double eps) {
        IntegrationOptions options;
        options.horizon = 40.0 / eps;
        options.lambda_grid = 64;
        OrbitTrace trace = integrate_extended(family, eps, 1e-6, 1.0 - 1e-3, options);
        std::vector<std::array<double, 2>> out;
        for (const auto& [lam, xs] : trace.slice_hits)
            for (double x : xs) out.push_back({x, lam});
        return out;
    };
    auto p2 = points(1e-2);
    auto p3 = points(1e-3);
    auto p4 = points(1e-4);
    double d23 = hausdorff_distance(p2, p3);
    double d34 = hausdorff_distance(p3, p4);
    CHECK(d34 < d23);
}

TEST_CASE("limit_itinerary") {
    Family1D family = Family1D::pitchfork(0.5);

    SUBCASE("from the source: source, branch sink, breakdown, final sink") {
        ItineraryReport report = limit_itinerary(family, {1e-2, 1e-3, 1e-4}, "source");
        CHECK(report.clean);
        REQUIRE(report.labels.size() == 3);
        CHECK(report.labels[0] == "M3");
        CHECK(report.labels[1] == "M2");
        CHECK(report.labels[2] == "M1");
        REQUIRE(report.transitions.size() == 2);
        CHECK_FALSE(report.transitions[0].at_breakdown);
        CHECK(report.transitions[1].at_breakdown);
        CHECK(report.before_breakdown_label == "M2");
        CHECK(report.after_breakdown_label == "M1");
    }

    SUBCASE("from the branch sink: a single breakdown transition") {
        ItineraryReport report = limit_itinerary(family, {1e-2, 1e-3, 1e-4}, "M2");
        CHECK(report.clean);
        REQUIRE(report.labels.size() == 2);
        CHECK(report.labels[0] == "M2");
        CHECK(report.labels[1] == "M1");
        REQUIRE(report.transitions.size() == 1);
        CHECK(report.transitions[0].at_breakdown);
    }

    SUBCASE("a plain sink family never changes label") {
        ItineraryReport report = limit_itinerary(Family1D::linear_sink(), {1e-1, 1e-2, 1e-3}, "sink");
        CHECK(report.clean);
        CHECK(report.labels.size() == 1);
        CHECK(report.transitions.empty());
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(limit_itinerary(family, {1e-2, 1e-3}, "source"), InputError);
        CHECK_THROWS_AS(limit_itinerary(family, {1e-2, 1e-3, 1e-2}, "source"), InputError);
        CHECK_THROWS_AS(limit_itinerary(family, {1e-2, 1e-3, 1e-4}, "M9"), InputError);
    }
}

TEST_CASE("itinerary labels descend the slice order at every transition") {
    Family1D family = Family1D::pitchfork(0.5);
    ItineraryReport report = limit_itinerary(family, {1e-2, 1e-3, 1e-4}, "source");
    for (const auto& tr : report.transitions) {
        if (tr.at_breakdown) continue;
        SliceAnalysis slice = analyze_slice(family, tr.gamma);
        CHECK(slice.morse_order.less(tr.to, tr.from));
    }
}

TEST_CASE("model_from_family emits the pitchfork model") {
    Family1D family = Family1D::pitchfork(0.5);
    MorseModel model = model_from_family(family);

    CHECK(model.slice0().order().size() == 1);
    CHECK(model.slice1().order().size() == 3);
    CHECK(model.slice0().conley_index("1@0").dim(0) == 1);
    CHECK(model.slice1().conley_index("3@1").dim(1) == 1);
    CHECK(model.slice1().connection_block("1@1", "3@1", 1) == Gf2Matrix::from_bit_rows({"1"}));
    CHECK(model.slice1().connection_block("2@1", "3@1", 1) == Gf2Matrix::from_bit_rows({"1"}));
    CHECK(verify_connection_matrix(model.slice0()).all_pass());
    CHECK(verify_connection_matrix(model.slice1()).all_pass());
    CHECK(std::abs(model.lambda0() - 0.5) <= 1.0 / 256);

    // End to end: its enumeration reproduces the unique transition matrix.
    EnumerationResult result = enumerate_transitions(model, finest_decomposition(model));
    REQUIRE(result.matrices.size() == 1);
    CHECK(result.matrices.front().block(model, "1@0", "1@1", 0) == Gf2Matrix::from_bit_rows({"1"}));
    CHECK(result.matrices.front().block(model, "1@0", "2@1", 0) == Gf2Matrix::from_bit_rows({"1"}));
}

TEST_CASE("family json parsing") {
    Family1D family = load_family(test_data("perturbed_family.json"));
    CHECK(family.kind == Family1D::Kind::PerturbedPitchfork);
    CHECK(family.imperfection == doctest::Approx(0.02));
    CHECK_THROWS_AS(parse_family("{\"family\": \"unknown\"}"), InputError);
    CHECK_THROWS_AS(parse_family("not json"), InputError);

    Family1D poly = parse_family(R"({"family": "polynomial", "coeff_const": [0, -1], "x_window": [-3, 3]})");
    CHECK(poly.eval(2.0, 0.3) == doctest::Approx(-2.0));
}
