#pragma once

#include "npasym/elasticity.hpp"
#include "npasym/extraction.hpp"
#include "npasym/spectral.hpp"
#include "npasym/surface.hpp"

#include <string>
#include <vector>

namespace npasym {

struct SurfaceSpec {
    std::string kind = "sphere";  // sphere | ellipsoid | radial_graph
    double a = 1.0, b = 1.0, c = 1.0;  // sphere radius is a
    std::vector<Harmonic> harmonics;
    ParametrizedSurface build() const;
};

struct RunConfig {
    SurfaceSpec surface;
    double lambda = 1.0, mu = 1.0;
    int mesh_n = 24;
    double chart_radius = 0.25;
    std::vector<double> eps_ladder{6.25e-4, 1.25e-3, 2.5e-3, 5e-3, 1e-2};
    int angles = 128;
    WindowPolicy windows;
    std::string out_dir = ".";

    LameParams lame() const { return make_lame(lambda, mu); }
    FieldOptions field_options() const;
    void validate() const;
};

// Known flat keys, in canonical order.
const std::vector<std::string>& config_keys();

// JSON text, either flat ("surface.kind": ...) or nested ({"surface": {...}}).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Sets one key from its command-line text; the value is read as JSON when it
// parses, otherwise as a plain string.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace npasym
