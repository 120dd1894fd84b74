#include "conley/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace conley {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string tag_id(const std::string& bare, int slice) { return bare + "@" + std::to_string(slice); }

std::string untag_id(const std::string& id) {
    auto pos = id.rfind('@');
    return pos == std::string::npos ? id : id.substr(0, pos);
}

MorseSlice parse_slice(const ordered_json& j, int label) {
    if (!j.is_object()) throw InputError("model: slice" + std::to_string(label) + " is not an object");

    std::vector<std::string> elements;
    std::map<std::string, GradedSpace> index;
    if (!j.contains("conley_index") || !j.at("conley_index").is_object())
        throw InputError("model: slice" + std::to_string(label) + " needs a conley_index object");
    for (const auto& [bare, dims] : j.at("conley_index").items()) {
        std::string id = tag_id(bare, label);
        elements.push_back(id);
        GradedSpace space;
        for (const auto& [deg, dim] : dims.items()) {
            int d;
            try {
                d = std::stoi(deg);
            } catch (...) {
                throw InputError("model: bad degree key '" + deg + "' in conley_index of '" + bare + "'");
            }
            if (!dim.is_number_integer()) throw InputError("model: dimension of '" + bare + "' is not an integer");
            space.set_dim(d, dim.get<int>());
        }
        index[id] = space;
    }

    std::vector<std::pair<std::string, std::string>> covers;
    if (j.contains("order")) {
        for (const auto& pair : j.at("order")) {
            if (!pair.is_array() || pair.size() != 2)
                throw InputError("model: order entries must be [lower, upper] pairs");
            covers.emplace_back(tag_id(pair[0].get<std::string>(), label),
                                tag_id(pair[1].get<std::string>(), label));
        }
    }

    std::map<BlockKey, Gf2Matrix> connection;
    if (j.contains("connection")) {
        for (const auto& [key, rows] : j.at("connection").items()) {
            auto first = key.find('|');
            auto second = key.find('|', first + 1);
            if (first == std::string::npos || second == std::string::npos)
                throw InputError("model: connection key '" + key + "' is not of the form p|q|n");
            std::string p = tag_id(key.substr(0, first), label);
            std::string q = tag_id(key.substr(first + 1, second - first - 1), label);
            int degree;
            try {
                degree = std::stoi(key.substr(second + 1));
            } catch (...) {
                throw InputError("model: connection key '" + key + "' has a bad degree");
            }
            if (!index.count(p) || !index.count(q))
                throw InputError("model: connection key '" + key + "' names an unknown element");
            std::vector<std::string> bit_rows = rows.get<std::vector<std::string>>();
            connection[BlockKey{p, q, degree}] = Gf2Matrix::from_bit_rows(
                bit_rows, index.at(p).dim(degree - 1), index.at(q).dim(degree));
        }
    }
    return MorseSlice(label, Poset::from_covers(elements, covers), std::move(index), std::move(connection));
}

IdSet parse_side(const ordered_json& j, int slice) {
    IdSet out;
    for (const auto& bare : j) out.push_back(tag_id(bare.get<std::string>(), slice));
    return normalize_ids(out);
}

ordered_json side_to_json(const IdSet& ids) {
    ordered_json out = ordered_json::array();
    for (const auto& id : ids) out.push_back(untag_id(id));
    return out;
}

ordered_json blocks_to_json(const std::map<BlockKey, Gf2Matrix>& blocks) {
    ordered_json out = ordered_json::object();
    for (const auto& [key, m] : blocks) {
        if (m.is_zero()) continue;
        out[untag_id(key.p) + "|" + untag_id(key.q) + "|" + std::to_string(key.degree)] = m.to_bit_rows();
    }
    return out;
}

}  // namespace

MorseModel parse_model(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw InputError(std::string("model: JSON parse failed: ") + e.what());
    }
    if (!j.contains("slice0") || !j.contains("slice1"))
        throw InputError("model: missing slice0/slice1");

    MorseSlice s0 = parse_slice(j.at("slice0"), 0);
    MorseSlice s1 = parse_slice(j.at("slice1"), 1);

    std::vector<IntervalPair> pairs;
    if (j.contains("continuable_pairs")) {
        for (const auto& pair : j.at("continuable_pairs")) {
            if (!pair.is_array() || pair.size() != 2)
                throw InputError("model: continuable_pairs entries must be [J, J'] lists");
            pairs.push_back(IntervalPair{parse_side(pair[0], 0), parse_side(pair[1], 1)});
        }
    }

    double lambda0 = 0.5;
    if (j.contains("lambda0")) lambda0 = j.at("lambda0").get<double>();
    if (!(lambda0 > 0.0 && lambda0 < 1.0))
        throw InputError("model: lambda0 must lie strictly between 0 and 1");

    std::vector<FixedTransitionBlock> fixed;
    if (j.contains("fixed_transition")) {
        for (const auto& fb : j.at("fixed_transition")) {
            FixedTransitionBlock block;
            block.p = tag_id(fb.at("p").get<std::string>(), 0);
            block.q = tag_id(fb.at("q").get<std::string>(), 1);
            block.degree = fb.at("degree").get<int>();
            std::vector<std::string> rows = fb.at("rows").get<std::vector<std::string>>();
            block.value = Gf2Matrix::from_bit_rows(rows, s0.conley_index(block.p).dim(block.degree),
                                                   s1.conley_index(block.q).dim(block.degree));
            fixed.push_back(std::move(block));
        }
    }
    return MorseModel(std::move(s0), std::move(s1), std::move(pairs), lambda0, std::move(fixed));
}

MorseModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string model_to_json(const MorseModel& model) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["lambda0"] = model.lambda0();
    for (int label = 0; label <= 1; ++label) {
        const MorseSlice& slice = label == 0 ? model.slice0() : model.slice1();
        ordered_json js;
        ordered_json order = ordered_json::array();
        for (const auto& [p, q] : slice.order().relation_pairs())
            order.push_back(ordered_json::array({untag_id(p), untag_id(q)}));
        js["order"] = order;
        ordered_json index = ordered_json::object();
        for (const auto& id : slice.order().elements()) {
            ordered_json dims = ordered_json::object();
            for (const auto& [deg, dim] : slice.conley_index(id).dims()) dims[std::to_string(deg)] = dim;
            index[untag_id(id)] = dims;
        }
        js["conley_index"] = index;
        js["connection"] = blocks_to_json(slice.connection_blocks());
        j[label == 0 ? "slice0" : "slice1"] = js;
    }
    ordered_json pairs = ordered_json::array();
    for (const auto& pair : model.continuable_pairs())
        pairs.push_back(ordered_json::array({side_to_json(pair.j0), side_to_json(pair.j1)}));
    j["continuable_pairs"] = pairs;
    if (!model.fixed_transition().empty()) {
        ordered_json fixed = ordered_json::array();
        for (const auto& fb : model.fixed_transition()) {
            ordered_json e;
            e["p"] = untag_id(fb.p);
            e["q"] = untag_id(fb.q);
            e["degree"] = fb.degree;
            e["rows"] = fb.value.to_bit_rows();
            fixed.push_back(e);
        }
        j["fixed_transition"] = fixed;
    }
    return j.dump(2) + "\n";
}

void save_model(const MorseModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write model file '" + path + "'");
    out << model_to_json(model);
}

Family1D parse_family(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw InputError(std::string("family: JSON parse failed: ") + e.what());
    }
    Family1D f;
    std::string kind = j.value("family", "");
    if (kind == "pitchfork")
        f.kind = Family1D::Kind::Pitchfork;
    else if (kind == "perturbed_pitchfork")
        f.kind = Family1D::Kind::PerturbedPitchfork;
    else if (kind == "linear_sink")
        f.kind = Family1D::Kind::LinearSink;
    else if (kind == "polynomial")
        f.kind = Family1D::Kind::Polynomial;
    else
        throw InputError("family: unknown kind '" + kind + "'");
    f.lambda0 = j.value("lambda0", 0.5);
    f.imperfection = j.value("imperfection", 0.0);
    if (j.contains("coeff_const")) {
        auto v = j.at("coeff_const").get<std::vector<double>>();
        if (v.size() > f.coeff_const.size()) throw InputError("family: polynomial degree above 5");
        for (std::size_t i = 0; i < v.size(); ++i) f.coeff_const[i] = v[i];
    }
    if (j.contains("coeff_lambda")) {
        auto v = j.at("coeff_lambda").get<std::vector<double>>();
        if (v.size() > f.coeff_lambda.size()) throw InputError("family: polynomial degree above 5");
        for (std::size_t i = 0; i < v.size(); ++i) f.coeff_lambda[i] = v[i];
    }
    if (j.contains("x_window")) {
        auto w = j.at("x_window").get<std::vector<double>>();
        if (w.size() != 2 || !(w[0] < w[1])) throw InputError("family: x_window must be [min, max]");
        f.x_min = w[0];
        f.x_max = w[1];
    }
    f.delta = j.value("delta", 1e-2);
    if (!(f.delta > 0.0)) throw InputError("family: delta must be positive");
    return f;
}

Family1D load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open family file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_family(buf.str());
}

std::string report_to_json(const VerificationReport& report) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["pass"] = report.all_pass();
    ordered_json items = ordered_json::array();
    for (const auto& item : report.items) {
        ordered_json e;
        e["check"] = item.check;
        e["pass"] = item.pass;
        if (!item.detail.empty()) e["detail"] = item.detail;
        items.push_back(e);
    }
    j["items"] = items;
    return j.dump(2) + "\n";
}

std::string report_to_text(const VerificationReport& report) {
    std::ostringstream out;
    for (const auto& item : report.items) {
        out << (item.pass ? "[PASS] " : "[FAIL] ") << item.check;
        if (!item.detail.empty()) out << "  " << item.detail;
        out << "\n";
    }
    out << (report.all_pass() ? "all checks passed" : "verification failed") << "\n";
    return out.str();
}

namespace {

ordered_json pair_to_json(const IntervalPair& pair) {
    return ordered_json::array({side_to_json(pair.j0), side_to_json(pair.j1)});
}

std::string side_to_text(const IdSet& ids) {
    std::string s = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ",";
        s += ids[i];
    }
    return s + "}";
}

}  // namespace

std::string decomposition_to_json(const Decomposition& d) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    ordered_json pairs = ordered_json::array();
    for (const auto& pair : d.pairs) pairs.push_back(pair_to_json(pair));
    j["pairs"] = pairs;
    return j.dump(2) + "\n";
}

std::string decomposition_to_text(const Decomposition& d) {
    std::ostringstream out;
    for (const auto& pair : d.pairs) out << "(" << side_to_text(pair.j0) << ", " << side_to_text(pair.j1) << ")\n";
    return out.str();
}

namespace {

ordered_json transition_to_json(const MorseModel& model, const TransitionMatrix& t) {
    ordered_json blocks = ordered_json::object();
    for (const auto& [key, m] : t.blocks()) {
        if (m.is_zero()) continue;
        blocks[untag_id(key.p) + "|" + untag_id(key.q) + "|" + std::to_string(key.degree)] = m.to_bit_rows();
    }
    (void)model;
    return blocks;
}

}  // namespace

std::string enumeration_to_json(const MorseModel& model, const EnumerationResult& result) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["count"] = result.matrices.size();
    j["truncated"] = result.truncated;
    j["free_bits"] = result.free_bits;
    ordered_json list = ordered_json::array();
    for (const auto& t : result.matrices) list.push_back(transition_to_json(model, t));
    j["matrices"] = list;
    return j.dump(2) + "\n";
}

std::string enumeration_to_text(const MorseModel& model, const EnumerationResult& result) {
    std::ostringstream out;
    out << result.matrices.size() << " transition matrix(es)";
    if (result.truncated) out << " (truncated)";
    out << "\n";
    int index = 0;
    for (const auto& t : result.matrices) {
        out << "--- matrix " << index++ << "\n";
        for (const auto& [key, m] : t.blocks()) {
            out << "  T_" << key.degree << "(" << key.p << "," << key.q << ") =";
            for (const auto& row : m.to_bit_rows()) out << " [" << row << "]";
            out << "\n";
        }
    }
    (void)model;
    return out.str();
}

std::string forced_to_json(const std::vector<ForcedConnection>& forced,
                           const std::vector<Scenario>* scenarios) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    ordered_json list = ordered_json::array();
    for (const auto& fc : forced) {
        ordered_json e;
        e["p"] = fc.p;
        e["q"] = fc.q;
        e["degree"] = fc.degree;
        e["adjacent_in_product_order"] = fc.adjacent_in_product;
        list.push_back(e);
    }
    j["forced"] = list;
    if (scenarios) {
        ordered_json sc = ordered_json::array();
        for (const auto& s : *scenarios) {
            ordered_json e;
            e["kind"] = s.kind;
            e["description"] = s.description;
            sc.push_back(e);
        }
        j["scenarios"] = sc;
    }
    return j.dump(2) + "\n";
}

std::string forced_to_text(const std::vector<ForcedConnection>& forced) {
    std::ostringstream out;
    if (forced.empty()) {
        out << "no forced connections\n";
        return out.str();
    }
    for (const auto& fc : forced) {
        out << fc.q << " -> " << fc.p << " at degree " << fc.degree;
        if (!fc.adjacent_in_product) out << "  (not adjacent in the product order)";
        out << "\n";
    }
    return out.str();
}

std::string itinerary_to_json(const ItineraryReport& report) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["epsilon"] = report.epsilon;
    j["clean"] = report.clean;
    if (!report.diagnostic.empty()) j["diagnostic"] = report.diagnostic;
    j["labels"] = report.labels;
    ordered_json ts = ordered_json::array();
    for (const auto& tr : report.transitions) {
        ordered_json e;
        e["gamma"] = tr.gamma;
        e["from"] = tr.from;
        e["to"] = tr.to;
        e["at_breakdown"] = tr.at_breakdown;
        ts.push_back(e);
    }
    j["transitions"] = ts;
    if (!report.before_breakdown_label.empty()) {
        j["before_breakdown"] = report.before_breakdown_label;
        j["after_breakdown"] = report.after_breakdown_label;
    }
    return j.dump(2) + "\n";
}

std::string itinerary_to_text(const ItineraryReport& report) {
    std::ostringstream out;
    out << "itinerary (eps = " << report.epsilon << "): ";
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        if (i) out << " -> ";
        out << report.labels[i];
    }
    out << "\n";
    for (const auto& tr : report.transitions) {
        out << "  " << tr.from << " -> " << tr.to << " at lambda = " << tr.gamma;
        if (tr.at_breakdown) out << "  (breakdown)";
        out << "\n";
    }
    if (!report.clean) out << "  diagnostic: " << report.diagnostic << "\n";
    return out.str();
}

void write_trace_csv(const OrbitTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write trace file '" + path + "'");
    out << "t,x,lambda\n";
    out.precision(17);
    for (const auto& s : trace.samples) out << s[0] << "," << s[1] << "," << s[2] << "\n";
}

}  // namespace conley
