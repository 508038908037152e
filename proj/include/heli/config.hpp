#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "heli/errors.hpp"
#include "heli/simulate.hpp"

namespace heli {

inline constexpr int kSchemaVersion = 1;

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& j, const std::string& ctx,
                                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw config_error("config: " + ctx + " must be an object");
    }
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (item.key() == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw config_error("config: unknown key '" + item.key() + "' in " + ctx);
        }
    }
}

inline double get_num(const json& j, const char* key, double fallback, const std::string& ctx) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j[key].is_number()) {
        throw config_error("config: " + ctx + "." + key + " must be a number");
    }
    return j[key].get<double>();
}

inline double deg2rad(double v) { return v * std::numbers::pi / 180.0; }

inline DisturbanceSpec parse_disturbance(const json& j, const std::string& ctx) {
    reject_unknown_keys(j, ctx, {"kind", "amplitude", "omega", "phase", "samples"});
    const std::string kind = j.value("kind", std::string("none"));
    try {
        if (kind == "none") {
            reject_unknown_keys(j, ctx, {"kind"});
            return DisturbanceSpec::none();
        }
        if (kind == "sinusoid") {
            reject_unknown_keys(j, ctx, {"kind", "amplitude", "omega", "phase"});
            return DisturbanceSpec::sinusoid(get_num(j, "amplitude", 1.0, ctx),
                                             get_num(j, "omega", 1.0, ctx),
                                             get_num(j, "phase", 0.0, ctx));
        }
        if (kind == "tabulated") {
            reject_unknown_keys(j, ctx, {"kind", "samples"});
            if (!j.contains("samples") || !j["samples"].is_array()) {
                throw config_error("config: " + ctx + ".samples must be an array of [t, value]");
            }
            std::vector<std::pair<double, double>> samples;
            for (const auto& s : j["samples"]) {
                if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
                    throw config_error("config: " + ctx +
                                       ".samples entries must be [t, value] pairs");
                }
                samples.emplace_back(s[0].get<double>(), s[1].get<double>());
            }
            return DisturbanceSpec::tabulated(std::move(samples));
        }
    } catch (const std::domain_error& e) {
        throw config_error("config: " + ctx + ": " + e.what());
    }
    throw config_error("config: " + ctx + ".kind must be none|sinusoid|tabulated");
}

inline ReferenceSpec parse_reference(const json& j, const std::string& ctx, bool degrees) {
    reject_unknown_keys(j, ctx, {"kind", "value", "amplitude", "omega", "phase"});
    const std::string kind = j.value("kind", std::string("constant"));
    const double scale = degrees ? std::numbers::pi / 180.0 : 1.0;
    try {
        if (kind == "constant") {
            reject_unknown_keys(j, ctx, {"kind", "value"});
            return ReferenceSpec::constant(scale * get_num(j, "value", 0.0, ctx));
        }
        if (kind == "sine") {
            reject_unknown_keys(j, ctx, {"kind", "amplitude", "omega", "phase"});
            return ReferenceSpec::sine(scale * get_num(j, "amplitude", 1.0, ctx),
                                       get_num(j, "omega", 1.0, ctx),
                                       scale * get_num(j, "phase", 0.0, ctx));
        }
    } catch (const std::domain_error& e) {
        throw config_error("config: " + ctx + ": " + e.what());
    }
    throw config_error("config: " + ctx + ".kind must be constant|sine");
}

inline ChannelConfig parse_channel(const json& j, const std::string& ctx, bool degrees,
                                   const ChannelConfig& defaults) {
    reject_unknown_keys(j, ctx, {"gains", "hftd", "trainer", "rbf", "disturbance", "reference"});
    ChannelConfig cc = defaults;
    if (j.contains("gains")) {
        const json& g = j["gains"];
        reject_unknown_keys(g, ctx + ".gains", {"k1", "k2", "m1", "m2", "n1", "n2", "h"});
        cc.gains.k1 = get_num(g, "k1", cc.gains.k1, ctx + ".gains");
        cc.gains.k2 = get_num(g, "k2", cc.gains.k2, ctx + ".gains");
        cc.gains.m1 = get_num(g, "m1", cc.gains.m1, ctx + ".gains");
        cc.gains.m2 = get_num(g, "m2", cc.gains.m2, ctx + ".gains");
        cc.gains.n1 = get_num(g, "n1", cc.gains.n1, ctx + ".gains");
        cc.gains.n2 = get_num(g, "n2", cc.gains.n2, ctx + ".gains");
        if (g.contains("h")) {
            const json& h = g["h"];
            if (!h.is_array() || h.size() != 2 || !h[0].is_number_integer() ||
                !h[1].is_number_integer()) {
                throw config_error("config: " + ctx +
                                   ".gains.h must be [numerator, denominator] integers");
            }
            try {
                cc.gains.h = OddFraction(h[0].get<long>(), h[1].get<long>());
            } catch (const std::domain_error& e) {
                throw config_error("config: " + ctx + ".gains.h: " + e.what());
            }
        }
    }
    if (j.contains("hftd")) {
        const json& f = j["hftd"];
        reject_unknown_keys(f, ctx + ".hftd", {"a0", "a1", "b0", "b1", "r1", "r2", "eps"});
        cc.hftd.a0 = get_num(f, "a0", cc.hftd.a0, ctx + ".hftd");
        cc.hftd.a1 = get_num(f, "a1", cc.hftd.a1, ctx + ".hftd");
        cc.hftd.b0 = get_num(f, "b0", cc.hftd.b0, ctx + ".hftd");
        cc.hftd.b1 = get_num(f, "b1", cc.hftd.b1, ctx + ".hftd");
        cc.hftd.r1 = get_num(f, "r1", cc.hftd.r1, ctx + ".hftd");
        cc.hftd.r2 = get_num(f, "r2", cc.hftd.r2, ctx + ".hftd");
        cc.hftd.eps = get_num(f, "eps", cc.hftd.eps, ctx + ".hftd");
    }
    if (j.contains("trainer")) {
        const json& t = j["trainer"];
        reject_unknown_keys(t, ctx + ".trainer", {"learning_rate", "exponent", "width_floor"});
        cc.trainer.learning_rate =
            get_num(t, "learning_rate", cc.trainer.learning_rate, ctx + ".trainer");
        cc.trainer.exponent = get_num(t, "exponent", cc.trainer.exponent, ctx + ".trainer");
        cc.trainer.width_floor =
            get_num(t, "width_floor", cc.trainer.width_floor, ctx + ".trainer");
    }
    if (j.contains("rbf")) {
        const json& r = j["rbf"];
        reject_unknown_keys(r, ctx + ".rbf",
                            {"neurons", "angle_range", "rate_range", "initial_width"});
        if (r.contains("neurons")) {
            if (!r["neurons"].is_number_integer() || r["neurons"].get<long>() <= 0) {
                throw config_error("config: " + ctx + ".rbf.neurons must be a positive integer");
            }
            cc.rbf.neurons = r["neurons"].get<std::size_t>();
        }
        for (const auto& [key, target] :
             {std::pair<const char*, std::array<double, 2>*>{"angle_range", &cc.rbf.angle_range},
              {"rate_range", &cc.rbf.rate_range}}) {
            if (r.contains(key)) {
                const json& a = r[key];
                if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
                    throw config_error("config: " + ctx + ".rbf." + key + " must be [lo, hi]");
                }
                (*target)[0] = a[0].get<double>();
                (*target)[1] = a[1].get<double>();
            }
        }
        cc.rbf.initial_width = get_num(r, "initial_width", cc.rbf.initial_width, ctx + ".rbf");
    }
    if (j.contains("disturbance")) {
        cc.disturbance = parse_disturbance(j["disturbance"], ctx + ".disturbance");
    }
    if (j.contains("reference")) {
        cc.reference = parse_reference(j["reference"], ctx + ".reference", degrees);
    }
    return cc;
}

}  // namespace detail

// Builds a scenario from JSON. Every field is optional and falls back to
// the stock scenario; unknown keys are rejected. schema_version is
// mandatory and must equal kSchemaVersion. With degrees = true, the
// angle-valued inputs (initial_state, reference value/amplitude/phase,
// angle_limit) are taken in degrees.
inline ScenarioConfig scenario_from_json(const nlohmann::json& j, bool degrees = false) {
    using detail::get_num;
    detail::reject_unknown_keys(
        j, "scenario",
        {"schema_version", "dt", "t_end", "controller", "plant", "initial_state", "elevation",
         "pitch", "saturation", "angle_limit", "hftd_dt_margin", "output"});
    if (!j.contains("schema_version")) {
        throw config_error("config: schema_version is required");
    }
    if (!j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != kSchemaVersion) {
        throw config_error("config: unsupported schema_version (expected " +
                           std::to_string(kSchemaVersion) + ")");
    }

    ScenarioConfig cfg;
    cfg.dt = get_num(j, "dt", cfg.dt, "scenario");
    cfg.t_end = get_num(j, "t_end", cfg.t_end, "scenario");
    if (j.contains("controller")) {
        const std::string v = j["controller"].get<std::string>();
        if (v == "proposed") {
            cfg.variant = Variant::proposed;
        } else if (v == "baseline") {
            cfg.variant = Variant::baseline;
        } else {
            throw config_error("config: controller must be proposed|baseline");
        }
    }
    if (j.contains("plant")) {
        const nlohmann::json& p = j["plant"];
        detail::reject_unknown_keys(p, "plant",
                                    {"elev_inertia", "pitch_inertia", "elev_arm", "pitch_arm",
                                     "mass", "gravity"});
        cfg.plant.elev_inertia = get_num(p, "elev_inertia", cfg.plant.elev_inertia, "plant");
        cfg.plant.pitch_inertia = get_num(p, "pitch_inertia", cfg.plant.pitch_inertia, "plant");
        cfg.plant.elev_arm = get_num(p, "elev_arm", cfg.plant.elev_arm, "plant");
        cfg.plant.pitch_arm = get_num(p, "pitch_arm", cfg.plant.pitch_arm, "plant");
        cfg.plant.mass = get_num(p, "mass", cfg.plant.mass, "plant");
        cfg.plant.gravity = get_num(p, "gravity", cfg.plant.gravity, "plant");
    }
    const double ang_scale = degrees ? std::numbers::pi / 180.0 : 1.0;
    if (j.contains("initial_state")) {
        const nlohmann::json& s = j["initial_state"];
        detail::reject_unknown_keys(s, "initial_state",
                                    {"elevation", "elevation_rate", "pitch", "pitch_rate"});
        const auto set_if = [&](const char* key, double& target) {
            if (s.contains(key)) {
                target = ang_scale * get_num(s, key, 0.0, "initial_state");
            }
        };
        set_if("elevation", cfg.initial.elevation);
        set_if("elevation_rate", cfg.initial.elevation_rate);
        set_if("pitch", cfg.initial.pitch);
        set_if("pitch_rate", cfg.initial.pitch_rate);
    }
    if (j.contains("elevation")) {
        cfg.elevation = detail::parse_channel(j["elevation"], "elevation", degrees, cfg.elevation);
    }
    if (j.contains("pitch")) {
        cfg.pitch = detail::parse_channel(j["pitch"], "pitch", degrees, cfg.pitch);
    }
    if (j.contains("saturation")) {
        if (j["saturation"].is_null()) {
            cfg.saturation.reset();
        } else if (j["saturation"].is_number()) {
            cfg.saturation = j["saturation"].get<double>();
        } else {
            throw config_error("config: saturation must be a number or null");
        }
    }
    if (j.contains("angle_limit")) {
        cfg.angle_limit = ang_scale * get_num(j, "angle_limit", 0.0, "scenario");
    }
    cfg.hftd_dt_margin = get_num(j, "hftd_dt_margin", cfg.hftd_dt_margin, "scenario");
    if (j.contains("output")) {
        detail::reject_unknown_keys(j["output"], "output", {"diagnostics"});
        if (j["output"].contains("diagnostics")) {
            if (!j["output"]["diagnostics"].is_boolean()) {
                throw config_error("config: output.diagnostics must be a boolean");
            }
            cfg.output.record_net = j["output"]["diagnostics"].get<bool>();
        }
    }
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path, bool degrees = false) {
    std::ifstream f(path);
    if (!f) {
        throw io_error("load_scenario: cannot open " + path.string());
    }
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config: " + path.string() + " is not valid JSON: " + e.what());
    }
    return scenario_from_json(j, degrees);
}

// Serializes a scenario back to JSON (radians, full explicit form). Loading
// the result reproduces the config.
inline nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    using nlohmann::json;
    const auto channel_json = [](const ChannelConfig& cc) {
        json ch;
        ch["gains"] = {{"k1", cc.gains.k1}, {"k2", cc.gains.k2}, {"m1", cc.gains.m1},
                       {"m2", cc.gains.m2}, {"n1", cc.gains.n1}, {"n2", cc.gains.n2},
                       {"h", {cc.gains.h.numerator(), cc.gains.h.denominator()}}};
        ch["hftd"] = {{"a0", cc.hftd.a0}, {"a1", cc.hftd.a1}, {"b0", cc.hftd.b0},
                      {"b1", cc.hftd.b1}, {"r1", cc.hftd.r1}, {"r2", cc.hftd.r2},
                      {"eps", cc.hftd.eps}};
        ch["trainer"] = {{"learning_rate", cc.trainer.learning_rate},
                         {"exponent", cc.trainer.exponent},
                         {"width_floor", cc.trainer.width_floor}};
        ch["rbf"] = {{"neurons", cc.rbf.neurons},
                     {"angle_range", {cc.rbf.angle_range[0], cc.rbf.angle_range[1]}},
                     {"rate_range", {cc.rbf.rate_range[0], cc.rbf.rate_range[1]}},
                     {"initial_width", cc.rbf.initial_width}};
        switch (cc.disturbance.kind()) {
            case DisturbanceSpec::Kind::none:
                ch["disturbance"] = {{"kind", "none"}};
                break;
            case DisturbanceSpec::Kind::sinusoid:
                ch["disturbance"] = {{"kind", "sinusoid"},
                                     {"amplitude", cc.disturbance.amplitude()},
                                     {"omega", cc.disturbance.omega()},
                                     {"phase", cc.disturbance.phase()}};
                break;
            case DisturbanceSpec::Kind::tabulated: {
                json samples = json::array();
                for (const auto& [t, v] : cc.disturbance.samples()) {
                    samples.push_back({t, v});
                }
                ch["disturbance"] = {{"kind", "tabulated"}, {"samples", std::move(samples)}};
                break;
            }
        }
        if (cc.reference.kind() == ReferenceSpec::Kind::constant) {
            ch["reference"] = {{"kind", "constant"}, {"value", cc.reference.value()}};
        } else {
            ch["reference"] = {{"kind", "sine"},
                               {"amplitude", cc.reference.amplitude()},
                               {"omega", cc.reference.omega()},
                               {"phase", cc.reference.phase()}};
        }
        return ch;
    };

    json j;
    j["schema_version"] = kSchemaVersion;
    j["dt"] = cfg.dt;
    j["t_end"] = cfg.t_end;
    j["controller"] = cfg.variant == Variant::proposed ? "proposed" : "baseline";
    j["plant"] = {{"elev_inertia", cfg.plant.elev_inertia},
                  {"pitch_inertia", cfg.plant.pitch_inertia},
                  {"elev_arm", cfg.plant.elev_arm},
                  {"pitch_arm", cfg.plant.pitch_arm},
                  {"mass", cfg.plant.mass},
                  {"gravity", cfg.plant.gravity}};
    j["initial_state"] = {{"elevation", cfg.initial.elevation},
                          {"elevation_rate", cfg.initial.elevation_rate},
                          {"pitch", cfg.initial.pitch},
                          {"pitch_rate", cfg.initial.pitch_rate}};
    j["elevation"] = channel_json(cfg.elevation);
    j["pitch"] = channel_json(cfg.pitch);
    if (cfg.saturation) {
        j["saturation"] = *cfg.saturation;
    }
    j["angle_limit"] = cfg.angle_limit;
    j["hftd_dt_margin"] = cfg.hftd_dt_margin;
    j["output"] = {{"diagnostics", cfg.output.record_net}};
    return j;
}

}  // namespace heli
