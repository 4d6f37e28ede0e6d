#include "ontolab/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace ontolab {

Json universe_to_json(const GeneralizedPermutation& p) {
    Json j;
    j["dim"] = p.dim();
    j["target"] = p.targets();
    j["phase"] = p.phases();
    return j;
}

GeneralizedPermutation universe_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("universe: JSON object expected");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "dim" && key != "target" && key != "phase")
            throw std::invalid_argument("universe: unknown key '" + key + "'");
    }
    if (!j.contains("dim") || !j.contains("target"))
        throw std::invalid_argument("universe: keys 'dim' and 'target' are required");
    const auto dim = j.at("dim").get<std::size_t>();
    auto target = j.at("target").get<std::vector<std::size_t>>();
    std::vector<double> phase(dim, 0.0);
    if (j.contains("phase")) phase = j.at("phase").get<std::vector<double>>();
    if (target.size() != dim || phase.size() != dim)
        throw std::invalid_argument("universe: 'target' and 'phase' must have length 'dim'");
    return GeneralizedPermutation(std::move(target), std::move(phase));
}

GeneralizedPermutation load_universe(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("universe: cannot open '" + path + "'");
    Json j;
    in >> j;
    return universe_from_json(j);
}

Json state_class_to_json(const StateClass& c) {
    Json j;
    if (const auto* o = std::get_if<Ontological>(&c)) {
        j["type"] = "ontological";
        j["index"] = o->index;
        j["phase"] = o->phase;
    } else {
        j["type"] = "superposed";
    }
    return j;
}

Json conservation_report_to_json(const ConservationReport& r) {
    Json j;
    j["initial_class"] = state_class_to_json(r.initial_class);
    j["final_class"] = state_class_to_json(r.final_class);
    j["deviation"] = r.max_multiset_deviation;
    j["verdict"] = r.pass ? "pass" : "fail";
    return j;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
    std::string out = "\"";
    for (char ch : value) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += '\n';
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string cone_map_to_csv(const std::vector<ConeMapRow>& rows) {
    std::string out = csv_row({"x", "xp", "t", "tp", "separation", "commutator_norm",
                               "probe_a", "probe_b", "causal_contact"});
    for (const auto& r : rows) {
        out += csv_row({std::to_string(r.x), std::to_string(r.xp), std::to_string(r.t),
                        std::to_string(r.tp), to_string(r.separation), format_double(r.commutator),
                        r.probe_a, r.probe_b, r.causal_contact ? "1" : "0"});
    }
    return out;
}

Json cone_map_to_json(const std::vector<ConeMapRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json j;
        j["x"] = r.x;
        j["xp"] = r.xp;
        j["t"] = r.t;
        j["tp"] = r.tp;
        j["separation"] = to_string(r.separation);
        j["commutator_norm"] = r.commutator;
        j["probe_a"] = r.probe_a;
        j["probe_b"] = r.probe_b;
        j["causal_contact"] = r.causal_contact;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace ontolab
