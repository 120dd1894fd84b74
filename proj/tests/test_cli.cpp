#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "test_support.hpp"

#ifndef CONLEY_TRANSIT_BIN
#define CONLEY_TRANSIT_BIN "conley-transit"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(CONLEY_TRANSIT_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) result.output += buf.data();
    int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    return result;
}

}  // namespace

TEST_CASE("verify-connection-matrix exits 0 on the pitchfork model") {
    RunResult r = run_cli("verify-connection-matrix " + test_data("pitchfork.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("[PASS]") != std::string::npos);
}

TEST_CASE("verify-connection-matrix exits 1 on a triangularity violation") {
    std::string path = test_data("bad_triangular.json");
    {
        std::ofstream out(path);
        out << R"({
          "lambda0": 0.5,
          "slice0": {"order": [], "conley_index": {"1": {"0": 1}}, "connection": {}},
          "slice1": {
            "order": [["1", "2"], ["2", "3"]],
            "conley_index": {"1": {"1": 1}, "2": {"0": 1}, "3": {"0": 1}},
            "connection": {"3|1|1": ["1"]}
          },
          "continuable_pairs": []
        })";
    }
    RunResult r = run_cli("verify-connection-matrix " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("[FAIL]") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("finest-decomposition prints the canonical pair list") {
    RunResult r = run_cli("finest-decomposition " + test_data("figure1.json") + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"3\"") != std::string::npos);
    // The saddle-node pair has an empty right side.
    CHECK(r.output.find("[]") != std::string::npos);
}

TEST_CASE("enumerate-transitions prints one matrix for the pitchfork") {
    RunResult r = run_cli("enumerate-transitions " + test_data("pitchfork.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("1 transition matrix") != std::string::npos);
}

TEST_CASE("enumerate-transitions exits 2 past the unknown-bit cap") {
    RunResult r = run_cli("enumerate-transitions " + test_data("huge.json"));
    CHECK(r.exit_code == 2);
}

TEST_CASE("forced-connections reports the saddle entry of the eight-set model") {
    RunResult r = run_cli("forced-connections " + test_data("mainexample.json") + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"p\": \"2@0\"") != std::string::npos);
    CHECK(r.output.find("\"q\": \"5@1\"") != std::string::npos);
}

TEST_CASE("malformed input exits 3") {
    std::string path = test_data("garbage.json");
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    RunResult r = run_cli("verify-connection-matrix " + path);
    CHECK(r.exit_code == 3);
    std::remove(path.c_str());

    RunResult missing = run_cli("verify-connection-matrix /nonexistent/model.json");
    CHECK(missing.exit_code == 3);
}

TEST_CASE("identical inputs produce identical bytes") {
    for (const std::string args : {
             "finest-decomposition " + test_data("figure1.json") + " --json",
             "enumerate-transitions " + test_data("mainexample.json") + " --json",
             "forced-connections " + test_data("pitchfork.json") + " --json --scenarios",
         }) {
        RunResult first = run_cli(args);
        RunResult second = run_cli(args);
        CHECK(first.exit_code == second.exit_code);
        CHECK(first.output == second.output);
    }
}

TEST_CASE("json outputs re-parse and carry the schema version") {
    for (const std::string args : {
             "verify-connection-matrix " + test_data("pitchfork.json") + " --json",
             "finest-decomposition " + test_data("mainexample.json") + " --json",
             "enumerate-transitions " + test_data("single_sink.json") + " --json",
         }) {
        RunResult r = run_cli(args);
        CHECK(r.output.find("conley-transit/1") != std::string::npos);
        CHECK(r.output.front() == '{');
    }
}

TEST_CASE("indices-1d emits a model the other commands accept") {
    std::string model_path = test_data("emitted_pitchfork.json");
    RunResult emit = run_cli("indices-1d " + test_data("pitchfork_family.json") + " --emit-model " + model_path);
    CHECK(emit.exit_code == 0);

    RunResult verify = run_cli("verify-connection-matrix " + model_path);
    CHECK(verify.exit_code == 0);

    RunResult enumerate = run_cli("enumerate-transitions " + model_path);
    CHECK(enumerate.exit_code == 0);
    CHECK(enumerate.output.find("1 transition matrix") != std::string::npos);
    std::remove(model_path.c_str());
}

TEST_CASE("simulate writes a trace and prints the itinerary") {
    std::string csv_path = test_data("trace_tmp.csv");
    RunResult r = run_cli("simulate " + test_data("pitchfork_family.json") +
                          " --eps 1e-2,2e-3,1e-3 --start source --out " + csv_path + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"labels\"") != std::string::npos);

    std::ifstream csv(csv_path);
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,x,lambda");
    std::remove(csv_path.c_str());
}
