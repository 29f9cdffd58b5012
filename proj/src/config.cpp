// SPDX-License-Identifier: Apache-2.0
#include "jamloc/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "jamloc/error.hpp"

namespace jamloc {

using nlohmann::json;

namespace {

/// Walks one JSON object, remembering which keys were read so leftovers can be rejected.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    const json* get(const char* key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void number(const char* key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) throw ConfigError("field '" + field(key) + "': expected a number");
            out = v->get<double>();
        }
    }

    void integer(const char* key, int& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer()) throw ConfigError("field '" + field(key) + "': expected an integer");
            const auto x = v->get<std::int64_t>();
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
                throw ConfigError("field '" + field(key) + "': integer out of range");
            }
            out = static_cast<int>(x);
        }
    }

    void seed(const char* key, std::uint64_t& out) {
        if (const json* v = get(key)) {
            if (v->is_number_unsigned()) {
                out = v->get<std::uint64_t>();
            } else if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
                out = static_cast<std::uint64_t>(v->get<std::int64_t>());
            } else {
                throw ConfigError("field '" + field(key) + "': expected a non-negative 64-bit integer");
            }
        }
    }

    std::optional<std::string> string(const char* key) {
        const json* v = get(key);
        if (v == nullptr) return std::nullopt;
        if (!v->is_string()) throw ConfigError("field '" + field(key) + "': expected a string");
        return v->get<std::string>();
    }

    Position3 vec3(const json& v, const std::string& name) const {
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
            throw ConfigError("field '" + name + "': expected [x, y, z]");
        }
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    void finish() const {
        for (const auto& [key, _] : j_.items()) {
            if (!seen_.contains(key)) throw ConfigError("unknown config key '" + field(key.c_str()) + "'");
        }
    }

    const std::string& path() const { return path_; }

private:
    std::string where() const { return path_.empty() ? "config" : "field '" + path_ + "'"; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_box(ObjectReader& parent, const char* key, Box& box) {
    const json* v = parent.get(key);
    if (v == nullptr) return;
    ObjectReader r(*v, parent.field(key));
    if (const json* lo = r.get("min")) box.min = r.vec3(*lo, r.field("min"));
    if (const json* hi = r.get("max")) box.max = r.vec3(*hi, r.field("max"));
    r.finish();
}

ModulationScheme read_modulation(const json& v, const std::string& path, bool& random_peak) {
    ObjectReader r(v, path);
    const std::string type = r.string("type").value_or("constant");
    ModulationScheme out;
    if (type == "constant") {
        modulation::Constant c;
        random_peak = !r.has("peak_dbm");
        r.number("peak_dbm", c.peak_dbm);
        out = c;
    } else if (type == "random_uniform") {
        modulation::RandomUniform u;
        r.number("low_dbm", u.low_dbm);
        r.number("high_dbm", u.high_dbm);
        out = u;
    } else if (type == "sinusoidal") {
        modulation::Sinusoidal s;
        double phase_deg = 0.0;
        r.number("mean_dbm", s.mean_dbm);
        r.number("amplitude_db", s.amplitude_db);
        r.number("period_s", s.period_s);
        r.number("phase_deg", phase_deg);
        s.phase_rad = deg_to_rad(phase_deg);
        const std::string jitter = r.string("frequency_jitter").value_or("none");
        if (jitter == "none") {
            s.jitter = modulation::FrequencyJitter::None;
        } else if (jitter == "uniform_factor") {
            s.jitter = modulation::FrequencyJitter::UniformFactor;
        } else {
            throw ConfigError("field '" + r.field("frequency_jitter") + "': expected \"none\" or \"uniform_factor\"");
        }
        out = s;
    } else {
        throw ConfigError("field '" + r.field("type") + "': unknown modulation type '" + type + "'");
    }
    r.finish();
    return out;
}

JammerTemplate read_jammer(const json& v, const std::string& path) {
    ObjectReader r(v, path);
    JammerTemplate t;
    if (const json* p = r.get("position")) {
        if (!p->is_null()) t.position = r.vec3(*p, r.field("position"));
    }
    if (const json* b = r.get("boresight_deg")) {
        ObjectReader br(*b, r.field("boresight_deg"));
        double az = rad_to_deg(t.boresight.azimuth);
        double el = rad_to_deg(t.boresight.elevation);
        br.number("azimuth", az);
        br.number("elevation", el);
        br.finish();
        t.boresight = {deg_to_rad(az), deg_to_rad(el)};
    }
    if (const json* m = r.get("modulation")) t.modulation = read_modulation(*m, r.field("modulation"), t.random_peak);
    r.finish();
    return t;
}

RunConfig read_run_config(const json& root) {
    ObjectReader r(root, "");
    RunConfig out;
    ScenarioConfig& c = out.scenario;

    read_box(r, "cruising_area", c.cruising_area);
    read_box(r, "jammer_area", c.jammer_area);
    if (const json* js = r.get("jammers")) {
        if (!js->is_array()) throw ConfigError("field 'jammers': expected an array");
        c.jammers.clear();
        for (std::size_t i = 0; i < js->size(); ++i) {
            c.jammers.push_back(read_jammer((*js)[i], "jammers[" + std::to_string(i) + "]"));
        }
    }
    if (const json* range = r.get("peak_power_range_dbm")) {
        if (!range->is_array() || range->size() != 2 || !(*range)[0].is_number() || !(*range)[1].is_number()) {
            throw ConfigError("field 'peak_power_range_dbm': expected [min, max]");
        }
        c.peak_power_min_dbm = (*range)[0].get<double>();
        c.peak_power_max_dbm = (*range)[1].get<double>();
    }
    if (const json* sp = r.get("signal_power_dbm")) {
        if (sp->is_null()) {
            c.signal_power_dbm = -std::numeric_limits<double>::infinity();
        } else if (sp->is_number()) {
            c.signal_power_dbm = sp->get<double>();
        } else {
            throw ConfigError("field 'signal_power_dbm': expected a number or null (no signal)");
        }
    }
    r.integer("n_samples", c.n_samples);
    if (const json* pl = r.get("path_loss")) {
        ObjectReader p(*pl, "path_loss");
        p.number("reference_distance_m", c.path_loss.reference_distance_m);
        p.number("exponent", c.path_loss.exponent);
        p.number("shadowing_std_db", c.path_loss.shadowing_std_db);
        p.finish();
    }
    if (const json* an = r.get("antenna")) {
        ObjectReader a(*an, "antenna");
        a.number("dynamic_range_db", c.antenna_dynamic_range_db);
        a.number("beam_exponent", c.antenna_beam_exponent);
        a.finish();
    }
    if (const json* ae = r.get("aoa_error")) {
        ObjectReader a(*ae, "aoa_error");
        a.number("sigma_ref_deg2", c.aoa_error.sigma_ref_deg2);
        a.number("jsr_ref_db", c.aoa_error.jsr_ref_db);
        a.number("slope", c.aoa_error.slope);
        a.number("sigma_min_deg2", c.aoa_error.sigma_min_deg2);
        a.number("sigma_max_deg2", c.aoa_error.sigma_max_deg2);
        a.number("scale", c.aoa_error.scale);
        a.finish();
    }
    r.number("position_error_power", c.position_error_power);
    if (const json* at = r.get("attribution")) {
        ObjectReader a(*at, "attribution");
        const std::string mode = a.string("mode").value_or("physical_dominant");
        if (mode == "physical_dominant") {
            c.attribution = attribution::PhysicalDominant{};
        } else if (mode == "direct_probability") {
            attribution::DirectProbability d;
            a.number("p_a", d.p_a);
            c.attribution = d;
        } else {
            throw ConfigError("field 'attribution.mode': expected \"physical_dominant\" or \"direct_probability\"");
        }
        a.finish();
    }
    if (const json* le = r.get("lean")) {
        ObjectReader l(*le, "lean");
        const std::string kind = l.string("kind").value_or("none");
        if (kind == "none") {
            c.lean.kind = LeanKind::None;
        } else if (kind == "strong") {
            c.lean.kind = LeanKind::Strong;
        } else if (kind == "slight") {
            c.lean.kind = LeanKind::Slight;
        } else {
            throw ConfigError("field 'lean.kind': expected \"none\", \"strong\" or \"slight\"");
        }
        l.number("strong_offset_m", c.lean.strong_offset_m);
        l.number("slight_offset_m", c.lean.slight_offset_m);
        l.number("half_extent_m", c.lean.half_extent_m);
        l.finish();
    }
    r.number("measurement_window_s", c.measurement_window_s);
    r.number("start_span_s", c.start_span_s);
    if (const json* sg = r.get("spgd")) {
        ObjectReader s(*sg, "spgd");
        s.integer("iterations", c.spgd.iterations);
        s.number("learning_rate", c.spgd.learning_rate);
        s.number("decay", c.spgd.decay);
        s.number("pruning_rate", c.spgd.pruning_rate);
        s.finish();
    }
    if (const auto target = r.string("target")) {
        if (*target == "jammer_a") {
            c.target = ErrorTarget::JammerA;
        } else if (*target == "majority") {
            c.target = ErrorTarget::Majority;
        } else {
            throw ConfigError("field 'target': expected \"jammer_a\" or \"majority\"");
        }
    }
    if (const auto metric = r.string("metric")) {
        if (*metric == "rmse") {
            c.metric = ErrorMetric::Rmse;
        } else if (*metric == "mae") {
            c.metric = ErrorMetric::MeanAbsolute;
        } else {
            throw ConfigError("field 'metric': expected \"rmse\" or \"mae\"");
        }
    }
    r.integer("trials", c.trials);
    r.seed("master_seed", c.master_seed);
    if (const json* sw = r.get("sweep")) {
        if (!sw->is_null()) {
            ObjectReader s(*sw, "sweep");
            SweepSpec spec;
            spec.parameter = s.string("parameter").value_or("");
            if (const json* vals = s.get("values")) {
                if (!vals->is_array()) throw ConfigError("field 'sweep.values': expected an array of numbers");
                for (const auto& x : *vals) {
                    if (!x.is_number()) throw ConfigError("field 'sweep.values': expected an array of numbers");
                    spec.values.push_back(x.get<double>());
                }
            }
            s.finish();
            if (spec.parameter.empty()) throw ConfigError("field 'sweep.parameter' is required");
            if (spec.values.empty()) throw ConfigError("field 'sweep.values' must not be empty");
            out.sweep = spec;
        }
    }
    r.finish();
    c.validate();
    if (out.sweep) {
        for (double v : out.sweep->values) apply_override(c, out.sweep->parameter, v);
    }
    return out;
}

// Degrees whose conversion back to radians is exactly r, so manifests replay bit-exactly.
double roundtrip_degrees(double r) {
    const double d = rad_to_deg(r);
    if (deg_to_rad(d) == r) return d;
    double lo = d;
    double hi = d;
    for (int i = 0; i < 8; ++i) {
        lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
        hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
        if (deg_to_rad(lo) == r) return lo;
        if (deg_to_rad(hi) == r) return hi;
    }
    return d;
}

json vec3_json(const Position3& p) { return json::array({p.x, p.y, p.z}); }

json box_json(const Box& b) { return {{"min", vec3_json(b.min)}, {"max", vec3_json(b.max)}}; }

json modulation_json(const ModulationScheme& m, bool random_peak) {
    if (const auto* c = std::get_if<modulation::Constant>(&m)) {
        json j = {{"type", "constant"}};
        if (!random_peak) j["peak_dbm"] = c->peak_dbm;
        return j;
    }
    if (const auto* u = std::get_if<modulation::RandomUniform>(&m)) {
        return {{"type", "random_uniform"}, {"low_dbm", u->low_dbm}, {"high_dbm", u->high_dbm}};
    }
    const auto& s = std::get<modulation::Sinusoidal>(m);
    return {{"type", "sinusoidal"},
            {"mean_dbm", s.mean_dbm},
            {"amplitude_db", s.amplitude_db},
            {"period_s", s.period_s},
            {"phase_deg", roundtrip_degrees(s.phase_rad)},
            {"frequency_jitter", s.jitter == modulation::FrequencyJitter::None ? "none" : "uniform_factor"}};
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

RunConfig config_from_json(const json& j) {
    if (j.is_object() && j.contains("manifest_version")) {
        if (!j.contains("config")) throw ConfigError("manifest has no 'config' object");
        return read_run_config(j.at("config"));
    }
    return read_run_config(j);
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_and_column(text, e.byte);
        throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + e.what());
    }
    return config_from_json(j);
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

json config_to_json(const RunConfig& rc) {
    const ScenarioConfig& c = rc.scenario;
    json jammers = json::array();
    for (const auto& t : c.jammers) {
        json j;
        j["position"] = t.position ? vec3_json(*t.position) : json(nullptr);
        j["boresight_deg"] = {{"azimuth", roundtrip_degrees(t.boresight.azimuth)}, {"elevation", roundtrip_degrees(t.boresight.elevation)}};
        j["modulation"] = modulation_json(t.modulation, t.random_peak);
        jammers.push_back(j);
    }
    json attribution;
    if (const auto* d = std::get_if<attribution::DirectProbability>(&c.attribution)) {
        attribution = {{"mode", "direct_probability"}, {"p_a", d->p_a}};
    } else {
        attribution = {{"mode", "physical_dominant"}};
    }
    const char* lean_kind = c.lean.kind == LeanKind::None ? "none" : c.lean.kind == LeanKind::Strong ? "strong" : "slight";

    json out = {
        {"cruising_area", box_json(c.cruising_area)},
        {"jammer_area", box_json(c.jammer_area)},
        {"jammers", jammers},
        {"peak_power_range_dbm", {c.peak_power_min_dbm, c.peak_power_max_dbm}},
        {"signal_power_dbm", std::isinf(c.signal_power_dbm) ? json(nullptr) : json(c.signal_power_dbm)},
        {"n_samples", c.n_samples},
        {"path_loss",
         {{"reference_distance_m", c.path_loss.reference_distance_m},
          {"exponent", c.path_loss.exponent},
          {"shadowing_std_db", c.path_loss.shadowing_std_db}}},
        {"antenna", {{"dynamic_range_db", c.antenna_dynamic_range_db}, {"beam_exponent", c.antenna_beam_exponent}}},
        {"aoa_error",
         {{"sigma_ref_deg2", c.aoa_error.sigma_ref_deg2},
          {"jsr_ref_db", c.aoa_error.jsr_ref_db},
          {"slope", c.aoa_error.slope},
          {"sigma_min_deg2", c.aoa_error.sigma_min_deg2},
          {"sigma_max_deg2", c.aoa_error.sigma_max_deg2},
          {"scale", c.aoa_error.scale}}},
        {"position_error_power", c.position_error_power},
        {"attribution", attribution},
        {"lean",
         {{"kind", lean_kind},
          {"strong_offset_m", c.lean.strong_offset_m},
          {"slight_offset_m", c.lean.slight_offset_m},
          {"half_extent_m", c.lean.half_extent_m}}},
        {"measurement_window_s", c.measurement_window_s},
        {"start_span_s", c.start_span_s},
        {"spgd",
         {{"iterations", c.spgd.iterations},
          {"learning_rate", c.spgd.learning_rate},
          {"decay", c.spgd.decay},
          {"pruning_rate", c.spgd.pruning_rate}}},
        {"metric", c.metric == ErrorMetric::Rmse ? "rmse" : "mae"},
        {"trials", c.trials},
        {"master_seed", c.master_seed},
    };
    if (c.target) out["target"] = *c.target == ErrorTarget::JammerA ? "jammer_a" : "majority";
    if (rc.sweep) {
        out["sweep"] = {{"parameter", rc.sweep->parameter}, {"values", rc.sweep->values}};
    }
    return out;
}

}  // namespace jamloc
