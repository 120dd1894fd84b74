#include "conley/slowfast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "conley/runtime.hpp"

namespace conley {

double Family1D::eval(double x, double lambda) const {
    switch (kind) {
        case Kind::Pitchfork:
            return (lambda - lambda0) * x - x * x * x;
        case Kind::PerturbedPitchfork:
            return (lambda - lambda0) * x - x * x * x + imperfection;
        case Kind::LinearSink:
            return -x;
        case Kind::Polynomial: {
            double acc = 0.0;
            double xp = 1.0;
            for (std::size_t k = 0; k < coeff_const.size(); ++k) {
                acc += (coeff_const[k] + coeff_lambda[k] * lambda) * xp;
                xp *= x;
            }
            return acc;
        }
    }
    return 0.0;
}

Family1D Family1D::pitchfork(double lambda0) {
    Family1D f;
    f.kind = Kind::Pitchfork;
    f.lambda0 = lambda0;
    return f;
}

Family1D Family1D::perturbed_pitchfork(double lambda0, double imperfection) {
    Family1D f;
    f.kind = Kind::PerturbedPitchfork;
    f.lambda0 = lambda0;
    f.imperfection = imperfection;
    return f;
}

Family1D Family1D::linear_sink() {
    Family1D f;
    f.kind = Kind::LinearSink;
    return f;
}

double Family1D::fold_lambda() const {
    if (kind != Kind::PerturbedPitchfork)
        throw InputError("fold_lambda: only defined for the perturbed pitchfork family");
    // f = (lambda - lambda0) x - x^3 + h; setting f = f_x = 0 gives
    // lambda = lambda0 + (3 sqrt(3) h / 2)^(2/3).
    double h = std::abs(imperfection);
    return lambda0 + std::pow(3.0 * std::sqrt(3.0) * h / 2.0, 2.0 / 3.0);
}

const FixedPoint1D* SliceAnalysis::by_label(const std::string& label) const {
    for (const auto& fp : fixed_points)
        if (fp.label == label) return &fp;
    return nullptr;
}

std::string SliceAnalysis::nearest_label(double x) const {
    const FixedPoint1D* best = nullptr;
    double best_d = 0.0;
    for (const auto& fp : fixed_points) {
        double d = std::abs(fp.x - x);
        if (!best || d < best_d) {
            best = &fp;
            best_d = d;
        }
    }
    return best ? best->label : std::string{};
}

SliceAnalysis analyze_slice(const Family1D& family, double lambda, double tol, int grid_cells) {
    if (lambda < family.lambda_min() || lambda > family.lambda_max())
        throw InputError("analyze_slice: lambda outside the family window");
    if (grid_cells < 2) throw InputError("analyze_slice: grid too coarse");

    SliceAnalysis out;
    out.lambda = lambda;

    // Sign-change bisection on a uniform grid, refined to interval
    // convergence; |f| alone stops too early for the hyperbolicity test.
    double lo = family.x_min;
    double hi = family.x_max;
    double h = (hi - lo) / grid_cells;
    std::vector<double> fs(static_cast<std::size_t>(grid_cells) + 1);
    for (int i = 0; i <= grid_cells; ++i) fs[static_cast<std::size_t>(i)] = family.eval(lo + i * h, lambda);

    std::vector<double> roots;
    auto push_root = [&](double r) {
        for (double seen : roots)
            if (std::abs(seen - r) <= 2.0 * tol) return;
        roots.push_back(r);
    };
    for (int i = 0; i <= grid_cells; ++i) {
        double x = lo + i * h;
        if (fs[static_cast<std::size_t>(i)] == 0.0) {
            push_root(x);
            continue;
        }
        if (i < grid_cells && fs[static_cast<std::size_t>(i)] * fs[static_cast<std::size_t>(i + 1)] < 0.0) {
            double a = x, b = x + h, fa = fs[static_cast<std::size_t>(i)];
            for (int it = 0; it < 80 && (b - a) > 1e-14; ++it) {
                double mid = 0.5 * (a + b);
                double fm = family.eval(mid, lambda);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (fa * fm < 0.0)
                    b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            push_root(0.5 * (a + b));
        }
    }
    // Tangency candidates: interior local minima of |f| below tolerance
    // without a crossing; these carry the non-hyperbolic flag below.
    for (int i = 1; i < grid_cells; ++i) {
        double fi = std::abs(fs[static_cast<std::size_t>(i)]);
        if (fi == 0.0 || fi >= tol) continue;
        if (fi > std::abs(fs[static_cast<std::size_t>(i - 1)]) || fi > std::abs(fs[static_cast<std::size_t>(i + 1)])) continue;
        double x = lo + i * h;
        bool near_existing = false;
        for (double seen : roots)
            if (std::abs(seen - x) <= 2.0 * h) near_existing = true;
        if (!near_existing) roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());

    double fd_step = std::max(1e-6, 4.0 * tol);
    std::vector<FixedPoint1D> points;
    for (double r : roots) {
        FixedPoint1D fp;
        fp.x = r;
        double slope = (family.eval(r + fd_step, lambda) - family.eval(r - fd_step, lambda)) / (2.0 * fd_step);
        if (std::abs(slope) < tol) {
            fp.stability = FixedPoint1D::Stability::NonHyperbolic;
            out.has_non_hyperbolic = true;
        } else {
            fp.stability = slope < 0.0 ? FixedPoint1D::Stability::Sink : FixedPoint1D::Stability::Source;
        }
        points.push_back(fp);
    }

    // Sinks numbered first in ascending x, then sources.
    int next = 1;
    for (auto& fp : points)
        if (fp.stability == FixedPoint1D::Stability::Sink) fp.label = "M" + std::to_string(next++);
    for (auto& fp : points)
        if (fp.stability == FixedPoint1D::Stability::Source) fp.label = "M" + std::to_string(next++);
    for (auto& fp : points)
        if (fp.stability == FixedPoint1D::Stability::NonHyperbolic) fp.label = "M" + std::to_string(next++);
    out.fixed_points = std::move(points);

    // Order: each source sits above its x-neighboring sinks.
    std::vector<std::string> elements;
    for (const auto& fp : out.fixed_points) elements.push_back(fp.label);
    std::vector<std::pair<std::string, std::string>> covers;
    for (std::size_t i = 0; i < out.fixed_points.size(); ++i) {
        if (out.fixed_points[i].stability != FixedPoint1D::Stability::Source) continue;
        if (i > 0 && out.fixed_points[i - 1].stability == FixedPoint1D::Stability::Sink)
            covers.emplace_back(out.fixed_points[i - 1].label, out.fixed_points[i].label);
        if (i + 1 < out.fixed_points.size() &&
            out.fixed_points[i + 1].stability == FixedPoint1D::Stability::Sink)
            covers.emplace_back(out.fixed_points[i + 1].label, out.fixed_points[i].label);
    }
    // Label order inside the poset: ascending x.
    out.morse_order = Poset::from_covers(elements, covers);
    for (const auto& fp : out.fixed_points) {
        GradedSpace space;
        if (fp.stability == FixedPoint1D::Stability::Sink) space.set_dim(0, 1);
        if (fp.stability == FixedPoint1D::Stability::Source) space.set_dim(1, 1);
        out.conley_index[fp.label] = space;
    }
    return out;
}

namespace {

std::string slice_signature(const SliceAnalysis& s) {
    std::string sig;
    for (const auto& fp : s.fixed_points) {
        switch (fp.stability) {
            case FixedPoint1D::Stability::Sink: sig += '+'; break;
            case FixedPoint1D::Stability::Source: sig += '-'; break;
            case FixedPoint1D::Stability::NonHyperbolic: sig += '?'; break;
        }
    }
    return sig;
}

}  // namespace

BreakdownScan detect_breakdown(const Family1D& family, int grid, double lambda_lo, double lambda_hi,
                               double tol) {
    if (grid < 16) throw InputError("detect_breakdown: grid must have at least 16 points");
    BreakdownScan out;
    double step = (lambda_hi - lambda_lo) / grid;

    std::vector<double> lambdas(static_cast<std::size_t>(grid) + 1);
    std::vector<SliceAnalysis> slices(static_cast<std::size_t>(grid) + 1);
    for (int i = 0; i <= grid; ++i) {
        lambdas[static_cast<std::size_t>(i)] = lambda_lo + i * step;
        slices[static_cast<std::size_t>(i)] = analyze_slice(family, lambdas[static_cast<std::size_t>(i)], tol);
    }

    // Flagged slices split their window conservatively and stand as
    // zero-width breakdown candidates of their own.
    int window_start = -1;
    std::string window_sig;
    auto close_window = [&](int end_index) {
        if (window_start >= 0 && end_index >= window_start)
            out.windows.push_back({lambdas[static_cast<std::size_t>(window_start)],
                                   lambdas[static_cast<std::size_t>(end_index)], window_sig});
        window_start = -1;
    };

    for (int i = 0; i <= grid; ++i) {
        const SliceAnalysis& s = slices[static_cast<std::size_t>(i)];
        if (s.has_non_hyperbolic) {
            close_window(i - 1);
            out.breakdowns.push_back({lambdas[static_cast<std::size_t>(i)], lambdas[static_cast<std::size_t>(i)],
                                      "non-hyperbolic"});
            continue;
        }
        std::string sig = slice_signature(s);
        if (window_start < 0) {
            window_start = i;
            window_sig = sig;
        } else if (sig != window_sig) {
            close_window(i - 1);
            out.breakdowns.push_back({lambdas[static_cast<std::size_t>(i - 1)],
                                      lambdas[static_cast<std::size_t>(i)], "signature-change"});
            window_start = i;
            window_sig = sig;
        }
    }
    close_window(grid);
    return out;
}

OrbitTrace integrate_extended(const Family1D& family, double epsilon, double x_start,
                              double lambda_start, const IntegrationOptions& options) {
    if (epsilon < 0.0) throw InputError("integrate_extended: epsilon must be non-negative");
    if (x_start < family.x_min || x_start > family.x_max ||
        lambda_start < family.lambda_min() || lambda_start > family.lambda_max())
        throw InputError("integrate_extended: start point outside the window");

    OrbitTrace trace;
    trace.epsilon = epsilon;

    double h = options.step;
    std::uint64_t max_steps = static_cast<std::uint64_t>(options.horizon / h);
    std::uint64_t stride = max_steps / options.max_samples + 1;
    std::uint64_t countdown = stride;

    // The drift is strictly negative on (0, 1) and points away from [0, 1]
    // outside it, so grid crossings only ever happen downward: track the
    // next grid value below instead of dividing every step.
    int grid_n = options.lambda_grid;
    double grid_step = 1.0 / grid_n;
    int g_next = static_cast<int>(std::floor(lambda_start * grid_n - 1e-12));
    double next_cross = g_next * grid_step;

    double t = 0.0, x = x_start, lambda = lambda_start;
    trace.samples.push_back({t, x, lambda});

    auto fx = [&](double xx, double ll) { return family.eval(xx, ll); };
    auto fl = [&](double ll) { return epsilon * ll * (ll - 1.0); };

    for (std::uint64_t step_i = 0; step_i < max_steps; ++step_i) {
        double k1x = fx(x, lambda), k1l = fl(lambda);
        double k2x = fx(x + 0.5 * h * k1x, lambda + 0.5 * h * k1l), k2l = fl(lambda + 0.5 * h * k1l);
        double k3x = fx(x + 0.5 * h * k2x, lambda + 0.5 * h * k2l), k3l = fl(lambda + 0.5 * h * k2l);
        double k4x = fx(x + h * k3x, lambda + h * k3l), k4l = fl(lambda + h * k3l);
        double nx = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        double nl = lambda + h / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l);
        double nt = t + h;

        while (nl <= next_cross && next_cross < lambda) {
            if (next_cross >= 0.0 && next_cross <= 1.0) {
                double w = (next_cross - lambda) / (nl - lambda);
                trace.slice_hits[next_cross].push_back(x + w * (nx - x));
            }
            --g_next;
            next_cross = g_next * grid_step;
        }

        bool settled = epsilon == 0.0 && std::abs(nx - x) < 1e-15;
        t = nt;
        x = nx;
        lambda = nl;
        if (--countdown == 0) {
            trace.samples.push_back({t, x, lambda});
            countdown = stride;
        }
        if (x < family.x_min || x > family.x_max || lambda < family.lambda_min() ||
            lambda > family.lambda_max()) {
            trace.exited_window = true;
            break;
        }
        if (epsilon > 0.0 && lambda < options.lambda_floor) break;
        if (settled) break;
    }
    if (trace.samples.back()[0] != t) trace.samples.push_back({t, x, lambda});
    trace.t_end = t;
    return trace;
}

double hausdorff_distance(const std::vector<std::array<double, 2>>& a,
                          const std::vector<std::array<double, 2>>& b) {
    if (a.empty() || b.empty()) throw InputError("hausdorff_distance: empty point set");
    auto directed = [](const std::vector<std::array<double, 2>>& from,
                       const std::vector<std::array<double, 2>>& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) {
                double dx = p[0] - q[0], dy = p[1] - q[1];
                best = std::min(best, std::sqrt(dx * dx + dy * dy));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

std::pair<double, double> start_point(const Family1D& family, const std::string& start_rule,
                                      double offset, double tol) {
    double lambda = 1.0 - 1e-3;
    SliceAnalysis slice = analyze_slice(family, lambda, tol);
    const FixedPoint1D* pick = nullptr;
    if (start_rule == "source" || start_rule == "sink") {
        auto want = start_rule == "source" ? FixedPoint1D::Stability::Source : FixedPoint1D::Stability::Sink;
        for (const auto& fp : slice.fixed_points) {
            if (fp.stability != want) continue;
            if (pick) throw InputError("start rule '" + start_rule + "' is ambiguous at lambda = 1");
            pick = &fp;
        }
    } else {
        pick = slice.by_label(start_rule);
    }
    if (!pick) throw InputError("start rule '" + start_rule + "' matches no fixed point at lambda = 1");
    return {pick->x + offset, lambda};
}

ItineraryReport limit_itinerary(const Family1D& family, const std::vector<double>& eps_sequence,
                                const std::string& start_rule, const IntegrationOptions& options,
                                double tol) {
    if (eps_sequence.size() < 3) throw InputError("limit_itinerary: need at least 3 epsilon values");
    for (std::size_t i = 1; i < eps_sequence.size(); ++i)
        if (!(eps_sequence[i] < eps_sequence[i - 1]) || eps_sequence[i] <= 0.0)
            throw InputError("limit_itinerary: epsilon sequence must be strictly decreasing and positive");

    auto [x0, l0] = start_point(family, start_rule, 1e-6, tol);

    std::vector<OrbitTrace> traces(eps_sequence.size());
    {
        int workers = std::min<int>(configured_thread_count(), static_cast<int>(eps_sequence.size()));
        std::vector<std::thread> threads;
        std::size_t next = 0;
        std::mutex mu;
        auto run = [&]() {
            for (;;) {
                std::size_t mine;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (next >= eps_sequence.size()) return;
                    mine = next++;
                }
                IntegrationOptions per = options;
                per.horizon = std::min(options.horizon, 40.0 / eps_sequence[mine]);
                traces[mine] = integrate_extended(family, eps_sequence[mine], x0, l0, per);
            }
        };
        for (int w = 0; w < workers; ++w) threads.emplace_back(run);
        for (auto& th : threads) th.join();
    }

    const OrbitTrace& trace = traces.back();
    ItineraryReport report;
    report.epsilon = eps_sequence.back();

    BreakdownScan scan = detect_breakdown(family, options.lambda_grid, 0.0, 1.0, tol);

    auto in_breakdown = [&](double lo, double hi) {
        for (const auto& b : scan.breakdowns)
            if (b.lo <= hi + 1e-12 && lo <= b.hi + 1e-12) return true;
        return false;
    };

    // Walk slice hits in descending lambda, labeling by nearest fixed point.
    std::vector<std::pair<double, double>> hits;  // (lambda, x)
    for (const auto& [glam, xs] : trace.slice_hits)
        for (double xx : xs) hits.emplace_back(glam, xx);
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    std::map<double, SliceAnalysis> slice_cache;
    auto slice_at = [&](double lam) -> const SliceAnalysis& {
        auto it = slice_cache.find(lam);
        if (it == slice_cache.end()) it = slice_cache.emplace(lam, analyze_slice(family, lam, tol)).first;
        return it->second;
    };

    // The first label is the start point's own: for small drift speeds the
    // orbit can leave its Morse set before the first grid crossing.
    std::string current = analyze_slice(family, 1.0, tol).nearest_label(x0);
    double current_lambda = l0;
    if (!current.empty()) report.labels.push_back(current);
    double hysteresis = 2.0 * tol;
    for (const auto& [lam, xx] : hits) {
        const SliceAnalysis& slice = slice_at(lam);
        if (slice.has_non_hyperbolic) continue;
        std::string label = slice.nearest_label(xx);
        if (label.empty()) continue;
        if (current.empty()) {
            current = label;
            current_lambda = lam;
            report.labels.push_back(label);
            continue;
        }
        if (label == current) {
            current_lambda = lam;
            continue;
        }
        // Hysteresis: only switch when the new set is decisively nearer.
        const FixedPoint1D* cur_fp = slice.by_label(current);
        const FixedPoint1D* new_fp = slice.by_label(label);
        if (cur_fp && new_fp && std::abs(new_fp->x - xx) + hysteresis >= std::abs(cur_fp->x - xx)) continue;

        ItineraryReport::Transition tr;
        tr.gamma = lam;
        tr.from = current;
        tr.to = label;
        tr.at_breakdown = in_breakdown(lam, current_lambda);
        if (tr.at_breakdown && report.before_breakdown_label.empty()) {
            report.before_breakdown_label = current;
            report.after_breakdown_label = label;
        }
        // Oscillation check: a label must not reappear after being left.
        for (const auto& seen : report.labels) {
            if (seen == label) {
                report.clean = false;
                report.diagnostic = "label " + label + " re-entered at lambda = " + std::to_string(lam);
            }
        }
        // Same-slice transitions must descend the slice order.
        if (!tr.at_breakdown && cur_fp && new_fp) {
            if (!slice.morse_order.less(label, current)) {
                report.clean = false;
                report.diagnostic = "transition " + current + " -> " + label + " at lambda = " +
                                    std::to_string(lam) + " does not descend the slice order";
            }
        }
        report.transitions.push_back(tr);
        report.labels.push_back(label);
        current = label;
        current_lambda = lam;
    }
    return report;
}

MorseModel model_from_family(const Family1D& family, double lambda_slice0, double lambda_slice1,
                             double tol, int grid) {
    SliceAnalysis s0 = analyze_slice(family, lambda_slice0, tol);
    SliceAnalysis s1 = analyze_slice(family, lambda_slice1, tol);
    if (s0.has_non_hyperbolic || s1.has_non_hyperbolic)
        throw InputError("model_from_family: boundary slice has a non-hyperbolic fixed point");

    auto build_slice = [](const SliceAnalysis& s, int label) {
        std::vector<std::string> elements;
        std::map<std::string, GradedSpace> index;
        std::map<BlockKey, Gf2Matrix> connection;
        auto tag = [&](const std::string& name) { return name.substr(1) + "@" + std::to_string(label); };
        for (const auto& fp : s.fixed_points) elements.push_back(tag(fp.label));
        std::vector<std::pair<std::string, std::string>> covers;
        for (std::size_t i = 0; i < s.fixed_points.size(); ++i) {
            if (s.fixed_points[i].stability != FixedPoint1D::Stability::Source) continue;
            // Unit block to each x-neighboring sink.
            if (i > 0 && s.fixed_points[i - 1].stability == FixedPoint1D::Stability::Sink) {
                covers.emplace_back(tag(s.fixed_points[i - 1].label), tag(s.fixed_points[i].label));
                connection[BlockKey{tag(s.fixed_points[i - 1].label), tag(s.fixed_points[i].label), 1}] =
                    Gf2Matrix::from_bit_rows({"1"});
            }
            if (i + 1 < s.fixed_points.size() &&
                s.fixed_points[i + 1].stability == FixedPoint1D::Stability::Sink) {
                covers.emplace_back(tag(s.fixed_points[i + 1].label), tag(s.fixed_points[i].label));
                connection[BlockKey{tag(s.fixed_points[i + 1].label), tag(s.fixed_points[i].label), 1}] =
                    Gf2Matrix::from_bit_rows({"1"});
            }
        }
        for (const auto& fp : s.fixed_points) {
            GradedSpace space;
            space.set_dim(fp.stability == FixedPoint1D::Stability::Sink ? 0 : 1, 1);
            index[tag(fp.label)] = space;
        }
        return MorseSlice(label, Poset::from_covers(elements, covers), std::move(index), std::move(connection));
    };

    double lambda0 = 0.5;
    BreakdownScan scan = detect_breakdown(family, grid, 0.0, 1.0, tol);
    if (!scan.breakdowns.empty())
        lambda0 = 0.5 * (scan.breakdowns.front().lo + scan.breakdowns.front().hi);

    return MorseModel(build_slice(s0, 0), build_slice(s1, 1), {}, lambda0);
}

}  // namespace conley
