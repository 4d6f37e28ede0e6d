#include "ontolab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "ontolab/bell.hpp"

namespace ontolab {

namespace {

enum class Kind { u64, f64, choice, path };

struct ParamSpec {
    std::string name;
    Kind kind;
    bool required = false;
    const char* fallback = nullptr;  // nullptr: optional with no default
    std::vector<std::string> choices;
    std::uint64_t umin = 0;
    std::uint64_t umax = UINT64_MAX;
    bool positive = false;  // f64 must be strictly positive
    const char* help = "";
};

using Schema = std::vector<ParamSpec>;

const std::map<std::string, Schema>& schemas() {
    static const std::map<std::string, Schema> table = {
        {"cogwheel",
         {
             {"n", Kind::u64, true, nullptr, {}, 1, 1u << 20, false, "cycle length N"},
         }},
        {"spectrum",
         {
             {"n", Kind::u64, false, nullptr, {}, 1, 4096, false, "cogwheel size (alternative to --universe)"},
             {"universe", Kind::path, false, nullptr, {}, 0, 0, false, "universe description file"},
             {"dt", Kind::f64, false, "1.0", {}, 0, 0, true, "clock beat duration"},
             {"branch", Kind::choice, false, "zero2pi", {"zero2pi", "pmpi"}, 0, 0, false,
              "eigenphase window"},
         }},
        {"conserve",
         {
             {"dim", Kind::u64, true, nullptr, {}, 1, 4096, false, "universe dimension"},
             {"steps", Kind::u64, false, "100", {}, 0, 1000000, false, "maximum evolution steps per trial"},
             {"trials", Kind::u64, false, "1000", {}, 1, 1000000, false, "seeded trials"},
             {"mode", Kind::choice, false, "ontology", {"ontology", "uncertainty", "negative"}, 0, 0,
              false, "which law to check (negative = dense-unitary control)"},
             {"tol", Kind::f64, false, "1e-12", {}, 0, 0, true, "multiset deviation tolerance"},
         }},
        {"beables",
         {
             {"n", Kind::u64, false, nullptr, {}, 1, 256, false, "cogwheel size (universe source)"},
             {"universe", Kind::path, false, nullptr, {}, 0, 0, false, "universe description file"},
             {"shift", Kind::u64, false, nullptr, {}, 1, 12, false, "bit-shift universe with this many sites"},
             {"random-dim", Kind::u64, false, nullptr, {}, 1, 64, false, "random pure permutation of this dimension"},
             {"set", Kind::choice, false, "diagonal", {"diagonal", "xz"}, 0, 0, false,
              "observable set (xz = {X@0, Z@0}; dim must be a power of two)"},
             {"horizon", Kind::u64, false, nullptr, {}, 0, 4096, false, "time horizon (default: period if <= 64, else 64)"},
             {"tol", Kind::f64, false, "1e-10", {}, 0, 0, true, "commutator tolerance"},
         }},
        {"lightcone",
         {
             {"sites", Kind::u64, true, nullptr, {}, 2, 12, false, "ring size of the bit-shift universe"},
             {"tmax", Kind::u64, false, nullptr, {}, 0, 64, false, "largest probe time (default: sites)"},
         }},
        {"bell",
         {
             {"a", Kind::f64, true, nullptr, {}, 0, 0, false, "Alice setting (degrees)"},
             {"b", Kind::f64, true, nullptr, {}, 0, 0, false, "Bob setting (degrees)"},
             {"aprime", Kind::f64, true, nullptr, {}, 0, 0, false, "Alice alternative setting (degrees)"},
             {"bprime", Kind::f64, true, nullptr, {}, 0, 0, false, "Bob alternative setting (degrees)"},
             {"method", Kind::choice, false, "quad", {"mc", "quad"}, 0, 0, false, "estimator"},
             {"samples", Kind::u64, false, "1000000", {}, 1, 1000000000ULL, false, "Monte Carlo samples per correlation"},
             {"grid", Kind::u64, false, "4096", {}, 8, 1u << 22, false, "quadrature panels"},
         }},
    };
    return table;
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) return std::nullopt;
    return v;
}

std::optional<double> parse_f64(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

using Resolved = std::map<std::string, std::string>;

Resolved resolve(const ExperimentConfig& cfg) {
    Resolved out = cfg.parameters;
    for (const auto& spec : schemas().at(cfg.subcommand)) {
        if (!out.count(spec.name) && spec.fallback) out[spec.name] = spec.fallback;
    }
    return out;
}

std::uint64_t get_u64(const Resolved& r, const std::string& key) {
    return *parse_u64(r.at(key));
}

double get_f64(const Resolved& r, const std::string& key) {
    return *parse_f64(r.at(key));
}

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Emitted {
    Json result = Json::object();
    std::string csv;
    int exit_code = 0;
};

Emitted run_cogwheel(const Resolved& rp, const ExperimentConfig&) {
    const auto n = static_cast<std::size_t>(get_u64(rp, "n"));
    const GeneralizedPermutation p = cogwheel(n);
    Emitted em;
    em.result["universe"] = universe_to_json(p);
    em.result["period"] = period(p);
    em.csv = csv_row({"index", "target", "phase"});
    for (std::size_t i = 0; i < p.dim(); ++i)
        em.csv += csv_row({std::to_string(i), std::to_string(p.target(i)), format_double(p.phase(i))});
    return em;
}

GeneralizedPermutation universe_from_params(const Resolved& rp, std::uint64_t seed) {
    if (rp.count("universe")) return load_universe(rp.at("universe"));
    if (rp.count("n")) return cogwheel(static_cast<std::size_t>(get_u64(rp, "n")));
    if (rp.count("shift")) return bit_shift_universe(static_cast<std::size_t>(get_u64(rp, "shift")));
    if (rp.count("random-dim")) {
        Rng rng(seed);
        return random_generalized_permutation(static_cast<std::size_t>(get_u64(rp, "random-dim")), rng,
                                              /*with_phases=*/false);
    }
    throw std::invalid_argument("no universe source given");
}

Emitted run_spectrum(const Resolved& rp, const ExperimentConfig& cfg) {
    const GeneralizedPermutation p = universe_from_params(rp, cfg.seed);
    const TimeStep dt(get_f64(rp, "dt"));
    const Branch branch = rp.at("branch") == "zero2pi" ? Branch::zero_to_two_pi : Branch::minus_pi_to_pi;
    std::vector<double> phases = eigenphases_of(p, branch);
    std::sort(phases.begin(), phases.end());
    std::vector<double> h_eigs(phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k) h_eigs[k] = phases[k] / dt.dt;
    Emitted em;
    em.result["dim"] = p.dim();
    em.result["dt"] = dt.dt;
    em.result["branch"] = rp.at("branch");
    em.result["eigenphases"] = phases;
    em.result["hamiltonian_eigenvalues"] = h_eigs;
    em.result["roundtrip_residual"] = roundtrip_residual(p, dt, branch);
    em.csv = csv_row({"index", "eigenphase", "hamiltonian_eigenvalue"});
    for (std::size_t k = 0; k < phases.size(); ++k)
        em.csv += csv_row({std::to_string(k), format_double(phases[k]), format_double(h_eigs[k])});
    return em;
}

Emitted run_conserve(const Resolved& rp, const ExperimentConfig& cfg) {
    const auto dim = static_cast<std::size_t>(get_u64(rp, "dim"));
    const auto trials = static_cast<std::size_t>(get_u64(rp, "trials"));
    const std::string mode = rp.at("mode");
    Emitted em;
    if (mode == "negative") {
        if (dim > 256) throw std::invalid_argument("conserve: dim > 256 is unsupported for mode=negative");
        const NegativeControlSuiteResult r = negative_control_suite(dim, trials, cfg.seed, 0.1);
        const double fraction = static_cast<double>(r.broken) / static_cast<double>(r.trials);
        const bool pass = fraction >= 0.99;  // the control demonstrates non-conservation
        em.result["mode"] = mode;
        em.result["dim"] = dim;
        em.result["trials"] = r.trials;
        em.result["broken"] = r.broken;
        em.result["fraction_broken"] = fraction;
        em.result["min_deviation"] = r.min_deviation;
        em.result["max_deviation"] = r.max_deviation;
        em.result["verdict"] = pass ? "pass" : "fail";
        em.exit_code = pass ? 0 : 1;
        em.csv = csv_row({"mode", "dim", "trials", "broken", "fraction_broken", "min_deviation",
                          "max_deviation", "verdict"});
        em.csv += csv_row({mode, std::to_string(dim), std::to_string(r.trials), std::to_string(r.broken),
                           format_double(fraction), format_double(r.min_deviation),
                           format_double(r.max_deviation), pass ? "pass" : "fail"});
        return em;
    }
    const std::uint64_t steps = get_u64(rp, "steps");
    const double tol = get_f64(rp, "tol");
    const ConservationLaw law = mode == "ontology" ? ConservationLaw::ontology : ConservationLaw::uncertainty;
    const TrialSuiteResult r = conservation_trial_suite(dim, steps, trials, cfg.seed, law, tol);
    em.result["mode"] = mode;
    em.result["dim"] = dim;
    em.result["steps"] = steps;
    em.result["trials"] = r.trials;
    em.result["failures"] = r.failures;
    em.result["ontology_breaks"] = r.ontology_breaks;
    em.result["max_deviation"] = r.max_deviation;
    em.result["verdict"] = r.pass ? "pass" : "fail";
    em.exit_code = r.pass ? 0 : 1;
    em.csv = csv_row({"mode", "dim", "steps", "trials", "failures", "ontology_breaks", "max_deviation",
                      "verdict"});
    em.csv += csv_row({mode, std::to_string(dim), std::to_string(steps), std::to_string(r.trials),
                       std::to_string(r.failures), std::to_string(r.ontology_breaks),
                       format_double(r.max_deviation), r.pass ? "pass" : "fail"});
    return em;
}

Emitted run_beables(const Resolved& rp, const ExperimentConfig& cfg) {
    const GeneralizedPermutation p = universe_from_params(rp, cfg.seed);
    std::vector<Observable> ops;
    if (rp.at("set") == "diagonal") {
        ops = basis_projectors(p.dim());
    } else {
        std::size_t sites = 0;
        while ((std::size_t{1} << sites) < p.dim()) ++sites;
        if ((std::size_t{1} << sites) != p.dim())
            throw std::invalid_argument("beables: set=xz requires a power-of-two dimension (key 'set')");
        ops.push_back(x_at(0, sites));
        ops.push_back(z_at(0, sites));
    }
    const std::uint64_t horizon = rp.count("horizon") ? get_u64(rp, "horizon") : default_horizon(p);
    const double tol = get_f64(rp, "tol");
    const BeableVerdict v = is_beable_set(ops, p, horizon, tol);
    Emitted em;
    em.result["dim"] = p.dim();
    em.result["set"] = rp.at("set");
    em.result["horizon"] = horizon;
    em.result["tol"] = tol;
    em.result["verdict"] = v.pass ? "pass" : "fail";
    if (v.witness) {
        Json w;
        w["i"] = v.witness->i;
        w["j"] = v.witness->j;
        w["label_i"] = ops[v.witness->i].label;
        w["label_j"] = ops[v.witness->j].label;
        w["s"] = v.witness->s;
        w["t"] = v.witness->t;
        w["commutator"] = v.witness->commutator;
        em.result["witness"] = w;
    } else {
        em.result["witness"] = nullptr;
    }
    em.exit_code = v.pass ? 0 : 1;
    em.csv = csv_row({"dim", "set", "horizon", "verdict", "witness_i", "witness_j", "witness_s",
                      "witness_t", "witness_commutator"});
    em.csv += csv_row({std::to_string(p.dim()), rp.at("set"), std::to_string(horizon),
                       v.pass ? "pass" : "fail", v.witness ? std::to_string(v.witness->i) : "",
                       v.witness ? std::to_string(v.witness->j) : "",
                       v.witness ? std::to_string(v.witness->s) : "",
                       v.witness ? std::to_string(v.witness->t) : "",
                       v.witness ? format_double(v.witness->commutator) : ""});
    return em;
}

Emitted run_lightcone(const Resolved& rp, const ExperimentConfig&) {
    const auto sites = static_cast<std::size_t>(get_u64(rp, "sites"));
    const auto tmax = static_cast<std::int64_t>(rp.count("tmax") ? get_u64(rp, "tmax") : sites);
    const std::vector<ConeMapRow> rows = cone_map(sites, tmax);
    double spacelike_max = 0.0;
    double lightlike_contact_min = std::numeric_limits<double>::infinity();
    double offcone_nocontact_max = 0.0;
    for (const auto& r : rows) {
        if (r.separation == Separation::spacelike) spacelike_max = std::max(spacelike_max, r.commutator);
        if (r.separation == Separation::lightlike && r.causal_contact && r.probe_a != r.probe_b)
            lightlike_contact_min = std::min(lightlike_contact_min, r.commutator);
        if (!r.causal_contact) offcone_nocontact_max = std::max(offcone_nocontact_max, r.commutator);
    }
    Emitted em;
    em.result["sites"] = sites;
    em.result["tmax"] = tmax;
    em.result["spacelike_max_commutator"] = spacelike_max;
    em.result["lightlike_xz_contact_min_commutator"] =
        std::isfinite(lightlike_contact_min) ? lightlike_contact_min : 0.0;
    em.result["no_contact_max_commutator"] = offcone_nocontact_max;
    em.result["rows"] = cone_map_to_json(rows);
    em.csv = cone_map_to_csv(rows);
    return em;
}

Emitted run_bell(const Resolved& rp, const ExperimentConfig& cfg) {
    const double a = get_f64(rp, "a") * kDegToRad;
    const double b = get_f64(rp, "b") * kDegToRad;
    const double ap = get_f64(rp, "aprime") * kDegToRad;
    const double bp = get_f64(rp, "bprime") * kDegToRad;
    const Method method = rp.at("method") == "mc" ? Method::montecarlo : Method::quadrature;
    const std::uint64_t n_or_panels =
        method == Method::montecarlo ? get_u64(rp, "samples") : get_u64(rp, "grid");
    const ChshResult r = chsh(a, ap, b, bp, method, n_or_panels, cfg.seed);
    const double qs = quantum_reference(a, b) - quantum_reference(a, bp) + quantum_reference(ap, b) +
                      quantum_reference(ap, bp);
    Emitted em;
    em.result["S"] = r.s;
    em.result["E"] = Json{{"ab", r.ab.value}, {"abp", r.abp.value}, {"apb", r.apb.value},
                          {"apbp", r.apbp.value}};
    em.result["std_error"] = Json{{"ab", r.ab.std_error}, {"abp", r.abp.std_error},
                                  {"apb", r.apb.std_error}, {"apbp", r.apbp.std_error}};
    em.result["quantum_reference_S"] = qs;
    em.result["classical_bound"] = kClassicalBound;
    em.result["tsirelson_bound"] = kTsirelsonBound;
    em.csv = csv_row({"S", "E_ab", "E_abp", "E_apb", "E_apbp", "se_ab", "se_abp", "se_apb", "se_apbp",
                      "quantum_reference_S", "classical_bound", "tsirelson_bound"});
    em.csv += csv_row({format_double(r.s), format_double(r.ab.value), format_double(r.abp.value),
                       format_double(r.apb.value), format_double(r.apbp.value),
                       format_double(r.ab.std_error), format_double(r.abp.std_error),
                       format_double(r.apb.std_error), format_double(r.apbp.std_error),
                       format_double(qs), format_double(kClassicalBound), format_double(kTsirelsonBound)});
    return em;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: JSON object expected");
    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "subcommand") {
            cfg.subcommand = value.get<std::string>();
        } else if (key == "parameters") {
            if (!value.is_object()) throw std::invalid_argument("config: 'parameters' must be an object");
            for (const auto& [pk, pv] : value.items()) {
                if (pv.is_string()) cfg.parameters[pk] = pv.get<std::string>();
                else cfg.parameters[pk] = pv.dump();
            }
        } else if (key == "seed") {
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "output_format") {
            cfg.output_format = value.get<std::string>();
        } else if (key == "output_path") {
            cfg.output_path = value.get<std::string>();
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
    std::vector<std::string> errors;
    const auto& table = schemas();
    const auto it = table.find(cfg.subcommand);
    if (it == table.end()) {
        errors.push_back("unknown subcommand '" + cfg.subcommand + "'");
        return errors;
    }
    const Schema& schema = it->second;
    for (const auto& [key, value] : cfg.parameters) {
        const auto* spec = [&]() -> const ParamSpec* {
            for (const auto& s : schema)
                if (s.name == key) return &s;
            return nullptr;
        }();
        if (!spec) {
            errors.push_back("unknown key '" + key + "' for subcommand '" + cfg.subcommand + "'");
            continue;
        }
        switch (spec->kind) {
            case Kind::u64: {
                const auto v = parse_u64(value);
                if (!v) {
                    errors.push_back("key '" + key + "': unsigned integer expected, got '" + value + "'");
                } else if (*v < spec->umin || *v > spec->umax) {
                    errors.push_back("key '" + key + "': value " + value + " outside [" +
                                     std::to_string(spec->umin) + ", " + std::to_string(spec->umax) + "]");
                }
                break;
            }
            case Kind::f64: {
                const auto v = parse_f64(value);
                if (!v) {
                    errors.push_back("key '" + key + "': number expected, got '" + value + "'");
                } else if (spec->positive && !(*v > 0.0)) {
                    errors.push_back("key '" + key + "': must be positive");
                }
                break;
            }
            case Kind::choice: {
                if (std::find(spec->choices.begin(), spec->choices.end(), value) == spec->choices.end()) {
                    std::string opts;
                    for (const auto& c : spec->choices) opts += (opts.empty() ? "" : "|") + c;
                    errors.push_back("key '" + key + "': expected one of {" + opts + "}, got '" + value + "'");
                }
                break;
            }
            case Kind::path:
                if (value.empty()) errors.push_back("key '" + key + "': empty path");
                break;
        }
    }
    for (const auto& spec : schema) {
        if (spec.required && !cfg.parameters.count(spec.name) && !spec.fallback)
            errors.push_back("missing required key '" + spec.name + "' for subcommand '" +
                             cfg.subcommand + "'");
    }
    if (cfg.subcommand == "conserve" && cfg.parameters.count("mode") &&
        cfg.parameters.at("mode") == "negative" && cfg.parameters.count("dim")) {
        const auto dim = parse_u64(cfg.parameters.at("dim"));
        if (dim && *dim > 256)
            errors.push_back("key 'dim': mode=negative builds dense unitaries; dim must be <= 256");
    }
    // Universe-source exclusivity.
    if (cfg.subcommand == "spectrum" || cfg.subcommand == "beables") {
        std::size_t sources = 0;
        for (const char* key : {"n", "universe", "shift", "random-dim"})
            if (cfg.parameters.count(key)) ++sources;
        if (sources != 1)
            errors.push_back("subcommand '" + cfg.subcommand +
                             "' requires exactly one universe source (keys 'n', 'universe'" +
                             (cfg.subcommand == "beables" ? ", 'shift', 'random-dim'" : "") + ")");
    }
    if (cfg.output_format != "json" && cfg.output_format != "csv")
        errors.push_back("output_format: expected json or csv, got '" + cfg.output_format + "'");
    return errors;
}

RunResult run(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult rr;
    rr.errors = validate(cfg);
    if (!rr.errors.empty()) {
        rr.exit_code = 2;
        return rr;
    }
    const Resolved rp = resolve(cfg);
    Emitted em;
    try {
        if (cfg.subcommand == "cogwheel") em = run_cogwheel(rp, cfg);
        else if (cfg.subcommand == "spectrum") em = run_spectrum(rp, cfg);
        else if (cfg.subcommand == "conserve") em = run_conserve(rp, cfg);
        else if (cfg.subcommand == "beables") em = run_beables(rp, cfg);
        else if (cfg.subcommand == "lightcone") em = run_lightcone(rp, cfg);
        else em = run_bell(rp, cfg);
    } catch (const std::exception& e) {
        rr.errors.push_back(e.what());
        rr.exit_code = 2;
        return rr;
    }
    rr.exit_code = em.exit_code;
    if (cfg.output_format == "csv") {
        rr.body = em.csv;
        return rr;
    }
    Json doc;
    doc["tool_version"] = kToolVersion;
    Json echo;
    echo["subcommand"] = cfg.subcommand;
    echo["parameters"] = Json(rp);
    echo["seed"] = cfg.seed;
    echo["output_format"] = cfg.output_format;
    echo["output_path"] = cfg.output_path;
    doc["config_echo"] = echo;
    doc["seed"] = cfg.seed;
    for (auto& [key, value] : em.result.items()) doc[key] = value;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    doc["meta"] = Json{{"timings", Json{{"total_seconds", seconds}}}};
    rr.body = doc.dump(2) + "\n";
    return rr;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"ontolab: finite permutation universes, their emergent Hamiltonians,\n"
                 "conservation-law checks, beables, light cones, and a Bell/CHSH simulator"};
    app.require_subcommand(0, 1);

    std::string top_config;
    app.add_option("--config", top_config, "JSON experiment config (flags override file values)");

    struct SubState {
        std::map<std::string, std::string> params;
        std::string seed, out, output, config;
    };
    std::map<std::string, std::shared_ptr<SubState>> states;

    for (const auto& [name, schema] : schemas()) {
        auto* sub = app.add_subcommand(name, "");
        auto state = std::make_shared<SubState>();
        states[name] = state;
        for (const auto& spec : schema) {
            sub->add_option_function<std::string>(
                "--" + spec.name,
                [state, pname = spec.name](const std::string& v) { state->params[pname] = v; },
                spec.help);
        }
        sub->add_option("--seed", state->seed, "master seed (unsigned 64-bit)");
        sub->add_option("--out", state->out, "output format: json|csv");
        sub->add_option("--output", state->output, "output path (default: stdout)");
        sub->add_option("--config", state->config, "JSON experiment config");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ExperimentConfig cfg;
    std::string config_path = top_config;
    const auto subs = app.get_subcommands();
    if (!subs.empty()) {
        const std::string name = subs.front()->get_name();
        const SubState& st = *states.at(name);
        if (!st.config.empty()) config_path = st.config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot open config '" << config_path << "'\n";
                return 2;
            }
            try {
                Json j;
                in >> j;
                cfg = config_from_json(j);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            if (!cfg.subcommand.empty() && cfg.subcommand != name) {
                std::cerr << "error: config subcommand '" << cfg.subcommand
                          << "' conflicts with command line '" << name << "'\n";
                return 2;
            }
        }
        cfg.subcommand = name;
        for (const auto& [k, v] : st.params) cfg.parameters[k] = v;  // flags override file
        if (!st.seed.empty()) {
            const auto v = parse_u64(st.seed);
            if (!v) {
                std::cerr << "error: key 'seed': unsigned integer expected, got '" << st.seed << "'\n";
                return 2;
            }
            cfg.seed = *v;
        }
        if (!st.out.empty()) cfg.output_format = st.out;
        if (!st.output.empty()) cfg.output_path = st.output;
    } else if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config '" << config_path << "'\n";
            return 2;
        }
        try {
            Json j;
            in >> j;
            cfg = config_from_json(j);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    } else {
        std::cerr << app.help();
        return 2;
    }

    const RunResult rr = run(cfg);
    for (const auto& err : rr.errors) std::cerr << "error: " << err << "\n";
    if (rr.exit_code == 2) return 2;
    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path);
        if (!out) {
            std::cerr << "error: cannot write '" << cfg.output_path << "'\n";
            return 2;
        }
        out << rr.body;
    } else {
        std::cout << rr.body;
    }
    return rr.exit_code;
}

}  // namespace ontolab
