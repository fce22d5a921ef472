#include "npasym/asymptotics.hpp"
#include "npasym/symbol_algebra.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>

namespace npasym {

std::string to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

Side side_from_string(const std::string& s) {
    if (s == "plus" || s == "+") return Side::plus;
    if (s == "minus" || s == "-") return Side::minus;
    throw InvalidArgument("side must be plus or minus, got '" + s + "'");
}

double signed_power_trace(const CMat& M, int d, Side side, double realness_tol, double zero_tol) {
    if (d < 1) throw InvalidArgument("signed_power_trace: d must be positive");
    const auto ev = real_eigenvalues(M, realness_tol);
    double scale = 0.0;
    for (double l : ev) scale = std::max(scale, std::abs(l));
    double sum = 0.0;
    for (double l : ev) {
        if (std::abs(l) <= zero_tol * scale) continue;
        if (side == Side::plus && l > 0) sum += std::pow(l, d);
        if (side == Side::minus && l < 0) sum += std::pow(-l, d);
    }
    return sum;
}

CosphereIntegral cosphere_integral(const std::vector<CosphereSample>& samples, int d, int angles) {
    if (angles < 4) throw InvalidArgument("cosphere_integral: too few angles");
    CosphereIntegral r;
    const double dth = 2.0 * kPi / angles;
    for (const auto& s : samples) {
        double p = 0.0, m = 0.0;
        for (int k = 0; k < angles; ++k) {
            const double th = k * dth;
            const CMat v = s.m(Vec2(std::cos(th), std::sin(th)));
            p += signed_power_trace(v, d, Side::plus);
            m += signed_power_trace(v, d, Side::minus);
        }
        r.plus += s.weight * p * dth;
        r.minus += s.weight * m * dth;
    }
    const double f = 1.0 / (d * std::pow(2.0 * kPi, d));
    r.plus *= f;
    r.minus *= f;
    return r;
}

Coefficients coefficient_integral(const SymbolField& field, int iota, const CoefficientOptions& opt) {
    if (field.nodes.empty()) throw InvalidArgument("coefficient_integral: empty symbol field");
    if (iota < 0 || iota >= field.roots.degree()) throw InvalidArgument("coefficient_integral: root index out of range");
    if (opt.angles < 64) throw InvalidArgument("coefficient_integral: at least 64 circle angles are required");
    std::vector<CosphereSample> samples;
    for (const auto& n : field.nodes) {
        if (static_cast<int>(n.m.size()) <= iota) throw InvalidArgument("coefficient_integral: node lacks symbols");
        const TwoTermSymbol* b = &n.m[iota];
        samples.push_back({n.weight, [b](const Vec2& xi) { return b->minus_one(Vec2::Zero(), xi); }});
    }
    const auto a = cosphere_integral(samples, opt.d, opt.angles);
    const auto b = cosphere_integral(samples, opt.d, 2 * opt.angles);
    Coefficients c;
    const double ref = std::max(std::abs(b.plus) + std::abs(b.minus), 1e-300);
    c.drift = (std::abs(a.plus - b.plus) + std::abs(a.minus - b.minus)) / ref;
    if (c.drift > opt.drift_tol)
        throw NumericalFailure("coefficient_integral: circle quadrature drift " + std::to_string(c.drift));
    c.B_plus = b.plus;
    c.B_minus = b.minus;
    c.slope = field.roots.projector_slope(iota);
    c.C_plus = c.B_plus / std::pow(c.slope, opt.d);
    c.C_minus = c.B_minus / std::pow(c.slope, opt.d);
    return c;
}

double SequenceModel::operator()(int n) const {
    if (n < 1) throw InvalidArgument("sequence index starts at 1");
    const double t = std::pow(C / n, 1.0 / d);
    return side == Side::plus ? omega + t : omega - t;
}

std::vector<double> SequenceModel::first(int count) const {
    std::vector<double> v;
    if (degenerate) return v;
    for (int n = 1; n <= count; ++n) v.push_back((*this)(n));
    return v;
}

SequenceModel counting_to_sequence(double C, int d, Side side, double omega) {
    if (C < 0) throw InvalidArgument("counting_to_sequence: C must be nonnegative");
    if (d < 1) throw InvalidArgument("counting_to_sequence: d must be positive");
    SequenceModel m;
    m.C = C;
    m.d = d;
    m.side = side;
    m.omega = omega;
    m.degenerate = C == 0.0;
    return m;
}

std::string to_json(const std::vector<AsymptoticReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["root"] = r.root;
        j["side"] = to_string(r.side);
        j["C"] = r.C;
        j["d"] = r.d;
        j["route"] = r.route;
        j["err_estimate"] = r.err_estimate;
        arr.push_back(j);
    }
    return arr.dump(2);
}

}  // namespace npasym
