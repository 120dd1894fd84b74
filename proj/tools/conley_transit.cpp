// conley-transit: transition matrices between Morse decompositions across a
// continuation breakdown, plus a slow-fast companion simulator for 1-D
// families.
//
// Exit codes: 0 success, 1 verification failure, 2 truncation or resource
// cap, 3 input error.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conley/continuation.hpp"
#include "conley/model_io.hpp"
#include "conley/morse.hpp"
#include "conley/slowfast.hpp"
#include "conley/transition.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitResource = 2;
constexpr int kExitInput = 3;

struct OutputMode {
    bool json = false;
};

void add_output_flags(CLI::App* cmd, OutputMode& mode) {
    auto* json = cmd->add_flag("--json", mode.json, "machine-readable JSON output");
    cmd->add_flag_callback("--pretty", [&mode]() { mode.json = false; }, "human-readable output (default)")
        ->excludes(json);
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw conley::InputError("bad epsilon value '" + item + "'");
        }
    }
    if (out.empty()) throw conley::InputError("--eps needs at least one value");
    return out;
}

int run_verify(const std::string& path, const OutputMode& mode) {
    conley::MorseModel model = conley::load_model(path);
    conley::VerificationReport report;
    for (const auto* slice : {&model.slice0(), &model.slice1()}) {
        conley::VerificationReport r = conley::verify_connection_matrix(*slice);
        for (auto& item : r.items) {
            item.check = "slice" + std::to_string(slice->label()) + ": " + item.check;
            report.items.push_back(item);
        }
    }
    std::cout << (mode.json ? conley::report_to_json(report) : conley::report_to_text(report));
    return report.all_pass() ? kExitOk : kExitVerificationFailed;
}

int run_finest(const std::string& path, const OutputMode& mode) {
    conley::MorseModel model = conley::load_model(path);
    conley::Decomposition finest = conley::finest_decomposition(model);
    std::cout << (mode.json ? conley::decomposition_to_json(finest) : conley::decomposition_to_text(finest));
    return kExitOk;
}

int run_enumerate(const std::string& path, std::size_t cap, int max_bits, const OutputMode& mode) {
    conley::MorseModel model = conley::load_model(path);
    conley::Decomposition finest = conley::finest_decomposition(model);
    conley::EnumerationOptions options;
    options.cap = cap;
    options.max_free_bits = max_bits;
    conley::EnumerationResult result = conley::enumerate_transitions(model, finest, options);
    std::cout << (mode.json ? conley::enumeration_to_json(model, result)
                            : conley::enumeration_to_text(model, result));
    return result.truncated ? kExitResource : kExitOk;
}

int run_forced(const std::string& path, std::size_t cap, int max_bits, bool scenarios,
               const OutputMode& mode) {
    conley::MorseModel model = conley::load_model(path);
    conley::Decomposition finest = conley::finest_decomposition(model);
    conley::EnumerationOptions options;
    options.cap = cap;
    options.max_free_bits = max_bits;
    std::vector<conley::ForcedConnection> forced = conley::forced_connections(model, finest, options);
    std::vector<conley::Scenario> all_scenarios;
    if (scenarios) {
        for (const auto& fc : forced) {
            for (auto& s : conley::connection_scenarios(model, fc.p, fc.q)) {
                s.description = "(" + fc.p + "," + fc.q + ") " + s.description;
                all_scenarios.push_back(std::move(s));
            }
        }
    }
    if (mode.json) {
        std::cout << conley::forced_to_json(forced, scenarios ? &all_scenarios : nullptr);
    } else {
        std::cout << conley::forced_to_text(forced);
        for (const auto& s : all_scenarios) std::cout << "  [" << s.kind << "] " << s.description << "\n";
    }
    return kExitOk;
}

int run_simulate(const std::string& path, const std::string& eps_text, const std::string& start,
                 double step, double horizon, int grid, const std::string& out_csv,
                 const OutputMode& mode) {
    conley::Family1D family = conley::load_family(path);
    std::vector<double> eps = parse_eps_list(eps_text);
    conley::IntegrationOptions options;
    options.step = step;
    options.horizon = horizon;
    options.lambda_grid = grid;

    if (eps.size() >= 3) {
        conley::ItineraryReport report = conley::limit_itinerary(family, eps, start, options);
        std::cout << (mode.json ? conley::itinerary_to_json(report) : conley::itinerary_to_text(report));
    } else {
        std::cout << (mode.json ? std::string("{\"schema\": \"") + conley::kSchemaVersion +
                                      "\", \"note\": \"fewer than 3 epsilon values: traces only\"}\n"
                                : "fewer than 3 epsilon values: traces only, no itinerary\n");
    }
    if (!out_csv.empty()) {
        auto [x0, l0] = conley::start_point(family, start);
        conley::IntegrationOptions per = options;
        per.horizon = std::min(options.horizon, 40.0 / eps.back());
        conley::OrbitTrace trace = conley::integrate_extended(family, eps.back(), x0, l0, per);
        conley::write_trace_csv(trace, out_csv);
    }
    return kExitOk;
}

int run_indices(const std::string& path, const std::string& lambda_text, const std::string& emit,
                double tol, int grid, const OutputMode& mode) {
    conley::Family1D family = conley::load_family(path);
    double l0 = 0.0, l1 = 1.0;
    if (!lambda_text.empty()) {
        std::stringstream ss(lambda_text);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw conley::InputError("--lambda needs two comma-separated values");
        l0 = std::stod(a);
        l1 = std::stod(b);
    }
    conley::MorseModel model = conley::model_from_family(family, l0, l1, tol, grid);
    std::string json = conley::model_to_json(model);
    if (!emit.empty()) {
        conley::save_model(model, emit);
        if (!mode.json) std::cout << "model written to " << emit << "\n";
    } else {
        std::cout << json;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transition matrices between Morse decompositions across a continuation breakdown"};
    app.require_subcommand(1);

    OutputMode mode;

    std::string model_path, family_path;
    std::size_t cap = 4096;
    int max_bits = 40;
    bool with_scenarios = false;
    std::string eps_text = "1e-2,1e-3,1e-4";
    std::string start = "source";
    double step = 1e-3;
    double horizon = 1e9;
    int grid = 256;
    std::string out_csv;
    std::string lambda_text = "0,1";
    std::string emit_path;
    double tol = 1e-9;

    auto* verify = app.add_subcommand("verify-connection-matrix",
                                      "check degree, square-zero and triangularity of both slices");
    verify->add_option("model", model_path, "model JSON file")->required();
    add_output_flags(verify, mode);

    auto* finest = app.add_subcommand("finest-decomposition",
                                      "finest decomposition of the continuable interval pair");
    finest->add_option("model", model_path, "model JSON file")->required();
    add_output_flags(finest, mode);

    auto* enumerate = app.add_subcommand("enumerate-transitions", "all axiomatic transition matrices");
    enumerate->add_option("model", model_path, "model JSON file")->required();
    enumerate->add_option("--cap", cap, "maximum matrices returned (exit 2 past it)");
    enumerate->add_option("--max-bits", max_bits, "reduced-unknown ceiling");
    add_output_flags(enumerate, mode);

    auto* forced = app.add_subcommand("forced-connections",
                                      "blocks nonzero in every transition matrix");
    forced->add_option("model", model_path, "model JSON file")->required();
    forced->add_option("--cap", cap, "enumeration cap");
    forced->add_option("--max-bits", max_bits, "reduced-unknown ceiling");
    forced->add_flag("--scenarios", with_scenarios, "list qualitative connection scenarios");
    add_output_flags(forced, mode);

    auto* simulate = app.add_subcommand("simulate", "integrate the extended slow-fast system");
    simulate->add_option("family", family_path, "family JSON file")->required();
    simulate->add_option("--eps", eps_text, "comma-separated drift speeds, decreasing");
    simulate->add_option("--start", start, "start rule at lambda = 1: source | sink | label like M3");
    simulate->add_option("--step", step, "integration step");
    simulate->add_option("--horizon", horizon, "time horizon");
    simulate->add_option("--grid", grid, "lambda-grid resolution for slice hits");
    simulate->add_option("--out", out_csv, "trace CSV path (columns t,x,lambda)");
    add_output_flags(simulate, mode);

    auto* indices = app.add_subcommand("indices-1d", "Morse data of the boundary slices as a model file");
    indices->add_option("family", family_path, "family JSON file")->required();
    indices->add_option("--lambda", lambda_text, "two slice parameters, default 0,1");
    indices->add_option("--emit-model", emit_path, "write the model JSON here");
    indices->add_option("--tol", tol, "root tolerance");
    indices->add_option("--grid", grid, "breakdown-scan resolution");
    add_output_flags(indices, mode);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_verify(model_path, mode);
        if (finest->parsed()) return run_finest(model_path, mode);
        if (enumerate->parsed()) return run_enumerate(model_path, cap, max_bits, mode);
        if (forced->parsed()) return run_forced(model_path, cap, max_bits, with_scenarios, mode);
        if (simulate->parsed()) return run_simulate(family_path, eps_text, start, step, horizon, grid, out_csv, mode);
        if (indices->parsed()) return run_indices(family_path, lambda_text, emit_path, tol, grid, mode);
    } catch (const conley::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const conley::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
