#include "npasym/config.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace npasym {

using nlohmann::json;

ParametrizedSurface SurfaceSpec::build() const {
    if (kind == "sphere") return ParametrizedSurface::sphere(a);
    if (kind == "ellipsoid") return ParametrizedSurface::ellipsoid(a, b, c);
    if (kind == "radial_graph") return ParametrizedSurface::radial_graph(harmonics);
    throw InvalidArgument("unknown surface.kind '" + kind + "'");
}

FieldOptions RunConfig::field_options() const {
    FieldOptions o;
    o.chart_radius = chart_radius;
    o.expansion.eps_ladder = eps_ladder;
    o.expansion.directions = angles;
    return o;
}

void RunConfig::validate() const {
    (void)lame();
    if (mesh_n < 8) throw InvalidArgument("mesh.n must be at least 8");
    if (!(chart_radius > 0.0)) throw InvalidArgument("chart.radius must be positive");
    if (angles < 64 || angles % 2) throw InvalidArgument("extract.angles must be even and at least 64");
    if (!(windows.guard >= 0.0 && windows.guard < 0.5)) throw InvalidArgument("windows.policy guard must lie in [0, 0.5)");
    (void)surface.build();
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{"surface.kind",   "surface.a",      "surface.b",         "surface.c",
                                               "surface.harmonics", "material.lambda", "material.mu",     "mesh.n",
                                               "chart.radius",   "extract.eps_ladder", "extract.angles", "windows.policy",
                                               "out.dir"};
    return keys;
}

namespace {

void set_key(RunConfig& c, const std::string& key, const json& v) {
    try {
        if (key == "surface.kind") c.surface.kind = v.get<std::string>();
        else if (key == "surface.a") c.surface.a = v.get<double>();
        else if (key == "surface.b") c.surface.b = v.get<double>();
        else if (key == "surface.c") c.surface.c = v.get<double>();
        else if (key == "surface.harmonics") {
            c.surface.harmonics.clear();
            for (const auto& h : v) {
                if (h.is_array() && h.size() == 3)
                    c.surface.harmonics.push_back({h[0].get<int>(), h[1].get<int>(), h[2].get<double>()});
                else if (h.is_object())
                    c.surface.harmonics.push_back({h.at("l").get<int>(), h.at("m").get<int>(), h.at("c").get<double>()});
                else
                    throw InvalidArgument("surface.harmonics entries are [l, m, c] or {l, m, c}");
            }
        } else if (key == "material.lambda") c.lambda = v.get<double>();
        else if (key == "material.mu") c.mu = v.get<double>();
        else if (key == "mesh.n") c.mesh_n = v.get<int>();
        else if (key == "chart.radius") c.chart_radius = v.get<double>();
        else if (key == "extract.eps_ladder") c.eps_ladder = v.get<std::vector<double>>();
        else if (key == "extract.angles") c.angles = v.get<int>();
        else if (key == "windows.policy") {
            if (v.is_number()) c.windows.guard = v.get<double>();
            else if (v.is_object()) c.windows.guard = v.value("guard", 0.05);
            else if (v.is_string() && v.get<std::string>() == "midpoint") c.windows.guard = 0.05;
            else throw InvalidArgument("windows.policy is \"midpoint\", a guard fraction or {\"guard\": g}");
        } else if (key == "out.dir") c.out_dir = v.get<std::string>();
        else throw InvalidArgument("unknown config key '" + key + "'");
    } catch (const json::exception& e) {
        throw InvalidArgument("config key '" + key + "': " + e.what());
    }
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string k = prefix.empty() ? it.key() : prefix + "." + it.key();
        const bool leaf = std::find(config_keys().begin(), config_keys().end(), k) != config_keys().end();
        if (it->is_object() && !leaf) flatten(*it, k, out);
        else out.push_back({k, *it});
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    std::vector<std::pair<std::string, json>> kv;
    flatten(j, "", kv);
    RunConfig c;
    for (const auto& [k, v] : kv) set_key(c, k, v);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded()) v = value;
    set_key(cfg, key, v);
}

}  // namespace npasym
