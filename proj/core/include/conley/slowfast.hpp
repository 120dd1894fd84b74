#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "conley/morse.hpp"

namespace conley {

/// One-parameter family of scalar fields f(x, lambda) from a fixed menu of
/// built-ins, integrated with the drift lambda' = eps * lambda * (lambda - 1).
struct Family1D {
    enum class Kind { Pitchfork, PerturbedPitchfork, LinearSink, Polynomial };

    Kind kind = Kind::Pitchfork;
    double lambda0 = 0.5;       // pitchfork parameter
    double imperfection = 0.0;  // perturbed pitchfork offset
    /// Polynomial family: f = sum_k (coeff_const[k] + coeff_lambda[k] * lambda) * x^k.
    std::array<double, 6> coeff_const{};
    std::array<double, 6> coeff_lambda{};
    double x_min = -2.0;
    double x_max = 2.0;
    double delta = 1e-2;  // parameter-window padding

    double eval(double x, double lambda) const;
    double lambda_min() const { return -2.0 * delta; }
    double lambda_max() const { return 1.0 + 2.0 * delta; }

    static Family1D pitchfork(double lambda0);
    static Family1D perturbed_pitchfork(double lambda0, double imperfection);
    static Family1D linear_sink();

    /// Fold parameter of the perturbed pitchfork in closed form.
    double fold_lambda() const;
};

struct FixedPoint1D {
    enum class Stability { Sink, Source, NonHyperbolic };
    double x = 0.0;
    Stability stability = Stability::Sink;
    std::string label;  // sinks numbered first in ascending x, then sources
};

/// Morse data of one frozen-parameter slice: roots of f(., lambda) with
/// stabilities, the order generated by source-over-neighboring-sink
/// relations, and the index dimensions (sink -> degree 0, source -> degree 1).
struct SliceAnalysis {
    double lambda = 0.0;
    std::vector<FixedPoint1D> fixed_points;  // ascending in x
    Poset morse_order;
    std::map<std::string, GradedSpace> conley_index;
    bool has_non_hyperbolic = false;

    const FixedPoint1D* by_label(const std::string& label) const;
    std::string nearest_label(double x) const;
};

SliceAnalysis analyze_slice(const Family1D& family, double lambda, double tol = 1e-9,
                            int grid_cells = 4096);

struct BreakdownScan {
    struct Window {
        double lambda_lo = 0.0;
        double lambda_hi = 0.0;
        std::string signature;  // stabilities in ascending x, e.g. "+-+"
    };
    struct Bracket {
        double lo = 0.0;
        double hi = 0.0;
        std::string reason;  // "signature-change" or "non-hyperbolic"
    };
    std::vector<Window> windows;
    std::vector<Bracket> breakdowns;
};

/// Maximal parameter windows of constant slice signature; boundaries are
/// breakdown candidates with bracket width bounded by the grid step.
BreakdownScan detect_breakdown(const Family1D& family, int grid = 256, double lambda_lo = 0.0,
                               double lambda_hi = 1.0, double tol = 1e-9);

struct IntegrationOptions {
    double step = 1e-3;
    double horizon = 1e9;
    int lambda_grid = 256;           // slice-hit resolution on [0, 1]
    std::size_t max_samples = 200000;  // stored samples (hits stay exact)
    double lambda_floor = 1e-3;      // stop once lambda drops below
};

struct OrbitTrace {
    double epsilon = 0.0;
    std::vector<std::array<double, 3>> samples;  // (t, x, lambda), downsampled
    /// lambda-grid value -> x at each crossing, by linear interpolation.
    std::map<double, std::vector<double>> slice_hits;
    bool exited_window = false;
    double t_end = 0.0;
};

/// Fixed-step classical fourth-order integration of the extended system.
OrbitTrace integrate_extended(const Family1D& family, double epsilon, double x_start,
                              double lambda_start, const IntegrationOptions& options = {});

/// Max over directed distances, Euclidean ground metric. Inputs nonempty.
double hausdorff_distance(const std::vector<std::array<double, 2>>& a,
                          const std::vector<std::array<double, 2>>& b);

struct ItineraryReport {
    struct Transition {
        double gamma = 0.0;  // parameter where the label changed
        std::string from;
        std::string to;
        bool at_breakdown = false;
    };
    double epsilon = 0.0;  // smallest entry of the sequence
    std::vector<std::string> labels;  // labels visited, in descending lambda
    std::vector<Transition> transitions;
    std::string before_breakdown_label;
    std::string after_breakdown_label;
    bool clean = true;
    std::string diagnostic;
};

/// Run the drift at each eps (in parallel), then read the nearest-Morse-set
/// label sequence of the smallest-eps trace against slice analyses.
/// `start_rule` picks the initial point at the lambda = 1 slice:
/// "source" / "sink" (unique of that kind) or an explicit label like "M3".
/// When `smallest_trace` is given it receives the smallest-eps trace.
ItineraryReport limit_itinerary(const Family1D& family, const std::vector<double>& eps_sequence,
                                const std::string& start_rule, const IntegrationOptions& options = {},
                                double tol = 1e-9, OrbitTrace* smallest_trace = nullptr);

/// Start point for connecting-orbit sampling: repeller x + offset at
/// lambda = 1 - 1e-3.
std::pair<double, double> start_point(const Family1D& family, const std::string& start_rule,
                                      double offset = 1e-6, double tol = 1e-9);

/// Morse model of the two boundary slices: orders and unit connection
/// blocks from x-adjacency (sink below neighboring source), indices from
/// stability, no declared pairs, lambda0 from the breakdown scan.
MorseModel model_from_family(const Family1D& family, double lambda_slice0 = 0.0,
                             double lambda_slice1 = 1.0, double tol = 1e-9, int grid = 256);

}  // namespace conley
