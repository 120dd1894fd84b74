#pragma once

#include <string>

#include "conley/continuation.hpp"
#include "conley/morse.hpp"
#include "conley/slowfast.hpp"
#include "conley/transition.hpp"

namespace conley {

/// Schema tag embedded in every JSON the tool emits.
inline constexpr const char* kSchemaVersion = "conley-transit/1";

/// Model file layout (UTF-8 JSON): top-level keys `slice0`, `slice1`,
/// `continuable_pairs`, `lambda0`, optional `fixed_transition`. Each slice
/// holds `order` (covering pairs over bare ids), `conley_index`
/// (id -> {degree: dim}) and `connection` (blocks keyed "p|q|n" with
/// bit-string rows; row i, column j is the coefficient from generator j of
/// the source into generator i of the target). Ids are tagged name@slice
/// on load.
MorseModel load_model(const std::string& path);
MorseModel parse_model(const std::string& json_text);
std::string model_to_json(const MorseModel& model);
void save_model(const MorseModel& model, const std::string& path);

/// Family file: `family` = pitchfork | perturbed_pitchfork | linear_sink |
/// polynomial, plus per-family parameters and the window.
Family1D load_family(const std::string& path);
Family1D parse_family(const std::string& json_text);

std::string report_to_json(const VerificationReport& report);
std::string report_to_text(const VerificationReport& report);

std::string decomposition_to_json(const Decomposition& d);
std::string decomposition_to_text(const Decomposition& d);

std::string enumeration_to_json(const MorseModel& model, const EnumerationResult& result);
std::string enumeration_to_text(const MorseModel& model, const EnumerationResult& result);

std::string forced_to_json(const std::vector<ForcedConnection>& forced,
                           const std::vector<Scenario>* scenarios = nullptr);
std::string forced_to_text(const std::vector<ForcedConnection>& forced);

std::string itinerary_to_json(const ItineraryReport& report);
std::string itinerary_to_text(const ItineraryReport& report);

void write_trace_csv(const OrbitTrace& trace, const std::string& path);

}  // namespace conley
