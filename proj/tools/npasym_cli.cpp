#include "npasym/asymptotics.hpp"
#include "npasym/config.hpp"
#include "npasym/spectral.hpp"
#include "npasym/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace npasym;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write '" + path + "'");
    return os;
}

std::vector<double> discrete_spectrum(const RunConfig& cfg) {
    DiscretizationOptions o;
    o.n = cfg.mesh_n;
    o.single_layer = false;
    return spectrum(discretize(cfg.surface.build(), cfg.lame(), o).K).values;
}

void run_essential(const RunConfig& cfg) {
    const auto P = essential_spectrum(cfg.lame());
    nlohmann::ordered_json j;
    j["roots"] = P.roots();
    j["p_coefficients"] = P.poly().coeffs();
    std::cout << j.dump() << '\n';
}

void run_sphere_exact(const RunConfig& cfg, int kmax) {
    const auto s = sphere_exact_eigenvalues(cfg.lame(), kmax);
    std::cout << "k,zero,minus,plus\n";
    for (int k = 1; k <= kmax; ++k)
        std::cout << k << ',' << fmt(s.zero[k - 1]) << ',' << fmt(s.minus[k - 1]) << ',' << fmt(s.plus[k - 1]) << '\n';
}

void run_assemble(const RunConfig& cfg) {
    DiscretizationOptions o;
    o.n = cfg.mesh_n;
    const auto d = discretize(cfg.surface.build(), cfg.lame(), o);
    for (auto [name, M] : {std::pair{"K.npmat", &d.K}, std::pair{"S.npmat", &d.S}}) {
        const auto path = out_path(cfg, name);
        auto os = open_out(path);
        write_npmat(os, *M);
        std::cout << path << '\n';
    }
}

void run_spectrum(const RunConfig& cfg) {
    const auto ev = discrete_spectrum(cfg);
    const auto path = out_path(cfg, "spectrum.csv");
    auto os = open_out(path);
    os << "index,value\n";
    for (std::size_t i = 0; i < ev.size(); ++i) os << i << ',' << fmt(ev[i]) << '\n';
    std::cout << path << '\n';
}

// Counting functions per root: "discrete" counts the windowed spectrum of the
// discretization, "ball" uses the exact sphere families with measured
// multiplicities.
std::vector<CountingFunction> counting(const RunConfig& cfg, const std::string& route, std::vector<PowerFit>* fits) {
    const auto ev = discrete_spectrum(cfg);
    const auto P = cfg.lame();
    const auto roots = essential_spectrum(P);
    std::vector<CountingFunction> out;
    for (int i = 0; i < roots.degree(); ++i) {
        if (route == "ball") {
            if (cfg.surface.kind != "sphere") throw InvalidArgument("the ball route needs surface.kind = sphere");
            auto bc = ball_counting(P, ev, i);
            out.push_back(bc.counting);
            if (fits) fits->push_back(bc.fit);
        } else if (route == "discrete") {
            const auto sample = make_sample(ev, roots, cfg.windows);
            out.push_back(cluster_and_count(sample, i));
            if (fits) fits->push_back(fit_power_law(out.back().tau, out.back().n_plus, 1.0 / 3.0));
        } else {
            throw InvalidArgument("route must be discrete or ball");
        }
    }
    return out;
}

void run_count(const RunConfig& cfg, const std::string& route) {
    const auto cfs = counting(cfg, route, nullptr);
    for (std::size_t i = 0; i < cfs.size(); ++i) {
        const auto path = out_path(cfg, "count_root" + std::to_string(i) + ".csv");
        auto os = open_out(path);
        os << "tau,n_plus,n_minus,root\n";
        const auto& c = cfs[i];
        for (std::size_t k = 0; k < c.tau.size(); ++k)
            os << fmt(c.tau[k]) << ',' << c.n_plus[k] << ',' << c.n_minus[k] << ',' << fmt(c.root) << '\n';
        std::cout << path << '\n';
    }
}

void run_fit(const RunConfig& cfg, const std::string& route) {
    std::vector<PowerFit> fits;
    const auto cfs = counting(cfg, route, &fits);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < cfs.size(); ++i) {
        nlohmann::ordered_json j;
        j["root"] = cfs[i].root;
        j["side"] = "plus";
        j["route"] = route;
        j["h"] = fits[i].h;
        j["C"] = fits[i].C;
        j["residual"] = fits[i].residual;
        j["power_like"] = fits[i].power_like;
        arr.push_back(j);
    }
    std::cout << arr.dump(2) << '\n';
}

void run_coeff(const RunConfig& cfg, int circle) {
    const auto S = cfg.surface.build();
    const auto P = cfg.lame();
    const auto field = np_symbol_field(S, P, field_nodes(surface_quadrature(S, cfg.mesh_n)), cfg.field_options());
    CoefficientOptions co;
    co.angles = circle;
    std::vector<AsymptoticReport> reports;
    for (int i = 0; i < field.roots.degree(); ++i) {
        const auto c = coefficient_integral(field, i, co);
        double ext = 0.0;
        for (const auto& n : field.nodes) ext = std::max(ext, n.expansion.err_estimate);
        const double err = std::max(c.drift, ext);
        reports.push_back({field.roots.root(i), Side::plus, c.C_plus, co.d, "symbol", err});
        reports.push_back({field.roots.root(i), Side::minus, c.C_minus, co.d, "symbol", err});
    }
    std::cout << to_json(reports) << '\n';
}

int run_verify() {
    int failed = 0;
    for (const auto& c : identity_suite()) {
        std::printf("%s %s (defect %.3g, tol %.3g)\n", c.pass() ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tol);
        failed += !c.pass();
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    // --<config key> <value> pairs are overrides; everything else goes to CLI11
    std::vector<std::pair<std::string, std::string>> overrides;
    std::vector<std::string> rest{argv[0]};
    const auto& keys = config_keys();
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a.rfind("--", 0) == 0 && std::find(keys.begin(), keys.end(), a.substr(2)) != keys.end()) {
            if (i + 1 >= argc) {
                std::cerr << "error: missing value for " << a << '\n';
                return 2;
            }
            overrides.push_back({a.substr(2), argv[++i]});
        } else {
            rest.push_back(a);
        }
    }

    CLI::App app{"Spectral asymptotics of the elastic Neumann-Poincare operator"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON run configuration");
    app.footer("Config keys may be overridden as --<key> <value>, e.g. --material.lambda 2");

    auto* essential = app.add_subcommand("essential", "essential spectrum roots and p(w)");
    int kmax = 10;
    auto* sphere = app.add_subcommand("sphere-exact", "exact sphere eigenvalue table");
    sphere->add_option("--kmax", kmax, "largest family index")->check(CLI::PositiveNumber);
    auto* assemble = app.add_subcommand("assemble", "write K and S as NPMAT files");
    auto* spec = app.add_subcommand("spectrum", "eigenvalues of the discretized NP operator");
    std::string route = "discrete";
    auto* count = app.add_subcommand("count", "counting functions per root");
    count->add_option("--route", route, "discrete | ball")->check(CLI::IsMember({"discrete", "ball"}));
    auto* fit = app.add_subcommand("fit", "power-law fits of the counting functions");
    fit->add_option("--route", route, "discrete | ball")->check(CLI::IsMember({"discrete", "ball"}));
    int circle = 64;
    auto* coeff = app.add_subcommand("coeff", "symbol-route asymptotic coefficients");
    coeff->add_option("--circle", circle, "covector angles per node (>= 64)");
    auto* verify = app.add_subcommand("verify", "algebraic identity suite");

    std::vector<const char*> cargv;
    for (const auto& s : rest) cargv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), const_cast<char**>(cargv.data()));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        for (const auto& [k, v] : overrides) apply_override(cfg, k, v);
        cfg.validate();
        if (*essential) run_essential(cfg);
        else if (*sphere) run_sphere_exact(cfg, kmax);
        else if (*assemble) run_assemble(cfg);
        else if (*spec) run_spectrum(cfg);
        else if (*count) run_count(cfg, route);
        else if (*fit) run_fit(cfg, route);
        else if (*coeff) run_coeff(cfg, circle);
        else if (*verify) return run_verify();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
