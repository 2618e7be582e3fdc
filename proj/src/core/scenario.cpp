#include "core/scenario.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "core/dirichlet1d.hpp"
#include "core/envelope.hpp"
#include "core/exterior.hpp"
#include "core/fractional_order.hpp"
#include "core/geometry.hpp"
#include "core/quadrature.hpp"

namespace sconv {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        }
        cfg.entries[key] = value;
    }
    return cfg;
}

std::string KeyValueConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
}

double KeyValueConfig::get(const std::string& key, double fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' is not numeric: " + it->second);
    }
}

int KeyValueConfig::get(const std::string& key, int fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' is not an integer: " + it->second);
    }
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

CheckResult check_le(const std::string& name, double value, double limit) {
    CheckResult c;
    c.name = name;
    c.value = value;
    c.pass = value <= limit;
    c.detail = fmt(value) + " <= " + fmt(limit);
    return c;
}

CheckResult check_ge(const std::string& name, double value, double limit) {
    CheckResult c;
    c.name = name;
    c.value = value;
    c.pass = value >= limit;
    c.detail = fmt(value) + " >= " + fmt(limit);
    return c;
}

CheckResult check_flag(const std::string& name, bool flag, const std::string& detail) {
    CheckResult c;
    c.name = name;
    c.pass = flag;
    c.value = flag ? 1.0 : 0.0;
    c.detail = detail;
    return c;
}

void finish(ScenarioReport& rep) {
    rep.all_pass = true;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
}

// ---------------------------------------------------------------------
// dyda: the reference profile has a constant operator value on (-1,1).

ScenarioReport scenario_dyda(const KeyValueConfig& cfg) {
    ScenarioReport rep;
    rep.name = "dyda";
    const double s = cfg.get("s", 0.5);
    const double h = cfg.get("h", 1.0 / 512);
    const double radius = cfg.get("window", 2.5);
    rep.params = {{"s", fmt(s)}, {"h", fmt(h)}, {"window", fmt(radius)}};

    const FractionalOrder order(s);
    const Profile prof = parse_profile("dyda:" + fmt(s));
    const Quadrature1D quad = build_quadrature(order, h, radius, true);
    const int J = static_cast<int>(std::ceil((1.0 + radius) / h)) + 2;
    std::vector<double> samples(static_cast<size_t>(2 * J + 1));
    for (int j = -J; j <= J; ++j) samples[static_cast<size_t>(j + J)] = prof(j * h);

    Table tbl;
    tbl.name = "operator_values";
    tbl.columns = {"t", "frac_lap"};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double worst = 0.0;
    const double target = order.gamma_2s_plus_1();
    for (int j = -J; j <= J; ++j) {
        const double t = j * h;
        if (std::abs(t) >= 0.9) continue;
        const double v = frac_lap_1d(samples, j + J, t, quad, TailModel::zero());
        tbl.rows.push_back({t, v});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        worst = std::max(worst, std::abs(v - target) / target);
    }
    rep.tables.push_back(std::move(tbl));
    rep.checks.push_back(check_le("constancy_relative_spread", (hi - lo) / target, 0.02));
    rep.checks.push_back(check_le("value_vs_gamma", worst, 0.02));
    finish(rep);
    return rep;
}

// ---------------------------------------------------------------------
// dyda_scaling: segment of length l scales the operator by l^{2s}.

ScenarioReport scenario_dyda_scaling(const KeyValueConfig& cfg) {
    ScenarioReport rep;
    rep.name = "dyda_scaling";
    const double s = cfg.get("s", 0.5);
    const double h = cfg.get("h", 1.0 / 512);
    rep.params = {{"s", fmt(s)}, {"h", fmt(h)}};

    const FractionalOrder order(s);
    const Profile prof = parse_profile("dyda:" + fmt(s));

    auto value_for_length = [&](double len) {
        // segment x = -len/2, y = +len/2 inside (-1,1), parameter tau in [0,1]
        const double x0 = -0.5 * len;
        const double radius = (1.0 + 0.5 * len) / len + 1.0;
        const Quadrature1D quad = build_quadrature(order, h, radius, true);
        const int J = static_cast<int>(std::ceil(radius / h)) + 2;
        std::vector<double> samples(static_cast<size_t>(2 * J + 1));
        for (int j = -J; j <= J; ++j) {
            const double tau = 0.5 + j * h;
            samples[static_cast<size_t>(j + J)] = prof(x0 + tau * len);
        }
        return frac_lap_1d(samples, J, 0.5, quad, TailModel::zero());
    };

    const double base = value_for_length(1.0);
    Table tbl;
    tbl.name = "scaling";
    tbl.columns = {"length", "value", "expected"};
    double worst = 0.0;
    for (const double len : {0.5, 0.25}) {
        const double v = value_for_length(len);
        const double expected = std::pow(len, 2.0 * s) * base;
        tbl.rows.push_back({len, v, expected});
        worst = std::max(worst, std::abs(v - expected) / expected);
    }
    rep.tables.push_back(std::move(tbl));
    rep.checks.push_back(check_le("scaling_law_error", worst, 0.03));
    finish(rep);
    return rep;
}

// ---------------------------------------------------------------------
// affine_harmonic: affine data with an affine tail are annihilated.

ScenarioReport scenario_affine_harmonic(const KeyValueConfig& cfg) {
    ScenarioReport rep;
    rep.name = "affine_harmonic";
    const double h = cfg.get("h", 1.0 / 256);
    const double slope = cfg.get("slope", 3.0);
    const double intercept = cfg.get("intercept", 2.0);
    rep.params = {{"h", fmt(h)}, {"slope", fmt(slope)}, {"intercept", fmt(intercept)}};

    Table tbl;
    tbl.name = "affine_residuals";
    tbl.columns = {"s", "t", "frac_lap"};
    double worst = 0.0;
    for (const double s : {0.6, 0.75, 0.9}) {
        const FractionalOrder order(s);
        const Quadrature1D quad = build_quadrature(order, h, 8.0, true);
        const int J = static_cast<int>(std::ceil(9.0 / h));
        std::vector<double> samples(static_cast<size_t>(2 * J + 1));
        for (int j = -J; j <= J; ++j) {
            samples[static_cast<size_t>(j + J)] = slope * (j * h) + intercept;
        }
        for (const double t : {-0.35, 0.0, 0.41}) {
            const int j0 = static_cast<int>(std::llround(t / h));
            const double v =
                frac_lap_1d(samples, j0 + J, j0 * h, quad, TailModel::affine());
            tbl.rows.push_back({s, j0 * h, v});
            worst = std::max(worst, std::abs(v));
        }
    }
    rep.tables.push_back(std::move(tbl));
    rep.checks.push_back(
        check_le("affine_residual_over_slope", worst / std::abs(slope), 1e-8));
    finish(rep);
    return rep;
}

// ---------------------------------------------------------------------
// bump_not_sconvex: convex-but-not-s-convex datum on [-1, 1].

ScenarioReport scenario_bump_not_sconvex(const KeyValueConfig& cfg) {
    ScenarioReport rep;
    rep.name = "bump_not_sconvex";
    const double s = cfg.get("s", 0.5);
    const int n = cfg.get("n", 511);
    const double window = cfg.get("window", 4.0);
    rep.params = {{"s", fmt(s)}, {"n", std::to_string(n)}, {"window", fmt(window)}};

    const FractionalOrder order(s);
    const Profile bump = parse_profile("bump_2_4");
    // segment [-1,1] in the line of the datum: t = -1 + 2 tau
    auto line = [&](double tau) { return bump(-1.0 + 2.0 * tau); };

    SegmentProblem prob{order, line, n, window, std::nullopt};
    const std::vector<double> v = solve_segment(prob);
    Table tbl;
    tbl.name = "segment_solution";
    tbl.columns = {"tau", "t", "v", "u"};
    const double h = 1.0 / (n + 1);
    for (int i = 1; i <= n; ++i) {
        const double tau = i * h;
        tbl.rows.push_back({tau, -1.0 + 2.0 * tau, v[static_cast<size_t>(i - 1)], line(tau)});
    }
    rep.tables.push_back(std::move(tbl));

    const double mid = v[static_cast<size_t>((n - 1) / 2)];
    rep.checks.push_back(check_le("midpoint_below_datum", mid, 1.0 - 0.005));

    const SegmentReport sr = is_s_convex_on_segment(line, order, n, window);
    rep.checks.push_back(check_flag("checker_reports_not_s_convex", !sr.holds,
                                    "worst violation " + fmt(sr.worst_violation)));
    finish(rep);
    return rep;
}

// ---------------------------------------------------------------------
// sconvex_not_convex: s-convex solution that is not classically convex.

ScenarioReport scenario_sconvex_not_convex(const KeyValueConfig& cfg) {
    ScenarioReport rep;
    rep.name = "sconvex_not_convex";
    const double s = cfg.get("s", 0.5);
    const int n = cfg.get("n", 511);
    const double window = cfg.get("window", 4.0);
    rep.params = {{"s", fmt(s)}, {"n", std::to_string(n)}, {"window", fmt(window)}};

    const FractionalOrder order(s);
    const Profile datum = parse_profile("ge_one_bump");

    SegmentProblem prob{order, datum.f, n, window, std::nullopt};
    const std::vector<double> u = solve_segment(prob);
    const double h = 1.0 / (n + 1);

    Table tbl;
    tbl.name = "solution_and_hull";
    tbl.columns = {"t", "u", "hull"};
    std::vector<double> ts;
    std::vector<double> vs;
    ts.push_back(0.0);
    vs.push_back(1.0);  // boundary values of the datum
    for (int i = 1; i <= n; ++i) {
        ts.push_back(i * h);
        vs.push_back(u[static_cast<size_t>(i - 1)]);
    }
    ts.push_back(1.0);
    vs.push_back(1.0);
    const std::vector<double> hull = classical_convex_envelope_1d(ts, vs);
    for (size_t i = 0; i < ts.size(); ++i) {
        tbl.rows.push_back({ts[i], vs[i], hull[i]});
    }
    rep.tables.push_back(std::move(tbl));

    const double mid = u[static_cast<size_t>((n - 1) / 2)];
    double umin = std::numeric_limits<double>::infinity();
    for (const double x : u) umin = std::min(umin, x);
    double hull_dev = 0.0;
    for (const double x : hull) hull_dev = std::max(hull_dev, std::abs(x - 1.0));

    rep.checks.push_back(check_ge("midpoint_above_boundary", mid, 1.0 + 0.005));
    rep.checks.push_back(check_ge("strictly_above_one", umin, 1.0 + 1e-9));
    rep.checks.push_back(check_le("classical_hull_is_one", hull_dev, 1e-9));
    rep.checks.push_back(check_flag("midpoint_convexity_fails", mid > 1.0,
                                    "u(1/2) exceeds the chord value 1"));
    finish(rep);
    return rep;
}

// ---------------------------------------------------------------------
// disk_envelope: 2-D envelope on the unit disk with a clamped linear
// datum; residual and boundary behaviour.

ScenarioReport scenario_disk_envelope(const KeyValueConfig& cfg) {
    ScenarioReport rep;
    rep.name = "disk_envelope";
    const double s = cfg.get("s", 0.5);
    const double dx = cfg.get("dx", 1.0 / 32);
    const int dirs = cfg.get("directions", 64);
    rep.params = {{"s", fmt(s)}, {"dx", fmt(dx)}, {"directions", std::to_string(dirs)},
                  {"g", cfg.get("g", std::string("clamped_linear"))}};

    const FractionalOrder order(s);
    const Domain domain = Domain::parse(cfg.get("domain", std::string("ball:1.0")));
    const ExteriorData g = parse_exterior(cfg.get("g", std::string("clamped_linear")));

    SolverConfig sc;
    sc.grid_spacing = dx;
    sc.direction_count = dirs;
    sc.accelerator = Accelerator::policy_iteration;
    sc.threads = cfg.get("threads", 0);
    sc.max_sweeps = cfg.get("max_sweeps", 20000);
    const EnvelopeResult res = solve_envelope(domain, g, order, sc);

    Table tbl;
    tbl.name = "envelope";
    tbl.columns = {"x", "y", "u", "policy_direction"};
    const auto& interior = res.u.interior();
    double boundary_gap = 0.0;
    for (size_t i = 0; i < interior.size(); ++i) {
        const int f = interior[i];
        const int iy = f / res.u.nx();
        const Vec2 p = res.u.node_point(f - iy * res.u.nx(), iy);
        tbl.rows.push_back({p.x, p.y, res.u.value(f),
                            static_cast<double>(res.policy[i])});
        if (domain.signed_distance(p) < 2.0 * dx) {
            boundary_gap = std::max(boundary_gap, std::abs(res.u.value(f) - g(p)));
        }
    }
    rep.tables.push_back(std::move(tbl));
    rep.checks.push_back(check_flag("converged", res.converged,
                                    "sweeps " + std::to_string(res.sweeps_used)));
    rep.checks.push_back(check_le("residual_relative", res.residual,
                                  1e-3 * std::max(res.osc_g, 1e-12) + 1e-10));
    rep.checks.push_back(check_le("boundary_gap", boundary_gap, 0.5));
    finish(rep);
    return rep;
}

// ---------------------------------------------------------------------
// dumbbell_neck: loss of boundary data on a non-convex domain.

ScenarioReport scenario_dumbbell_neck(const KeyValueConfig& cfg) {
    ScenarioReport rep;
    rep.name = "dumbbell_neck";
    const double s = cfg.get("s", 0.5);
    const double dx = cfg.get("dx", 1.0 / 32);
    const int dirs = cfg.get("directions", 64);
    rep.params = {{"s", fmt(s)}, {"dx", fmt(dx)}, {"directions", std::to_string(dirs)}};

    const FractionalOrder order(s);
    const Domain domain = Domain::dumbbell();
    const Vec2 peak{0.0, 0.2};
    const ExteriorData g = parse_exterior("boundary_peak:0,0.2,0.3,1");

    SolverConfig sc;
    sc.grid_spacing = dx;
    sc.direction_count = dirs;
    sc.accelerator = Accelerator::policy_iteration;
    sc.threads = cfg.get("threads", 0);
    sc.max_sweeps = cfg.get("max_sweeps", 20000);
    const EnvelopeResult res = solve_envelope(domain, g, order, sc);

    Table tbl;
    tbl.name = "neck_values";
    tbl.columns = {"x", "y", "u", "distance_to_peak"};
    double near_peak_max = 0.0;
    const auto& interior = res.u.interior();
    for (size_t i = 0; i < interior.size(); ++i) {
        const int f = interior[i];
        const int iy = f / res.u.nx();
        const Vec2 p = res.u.node_point(f - iy * res.u.nx(), iy);
        const double d = norm(p - peak);
        if (d < 6.0 * dx) {
            tbl.rows.push_back({p.x, p.y, res.u.value(f), d});
        }
        if (d < 2.0 * dx) near_peak_max = std::max(near_peak_max, res.u.value(f));
    }
    rep.tables.push_back(std::move(tbl));
    rep.checks.push_back(check_flag("converged", res.converged,
                                    "sweeps " + std::to_string(res.sweeps_used)));
    rep.checks.push_back(check_le("value_near_peak", near_peak_max, 0.5));
    finish(rep);
    return rep;
}

} // namespace

const std::vector<ScenarioInfo>& scenario_registry() {
    static const std::vector<ScenarioInfo> registry = {
        {"dyda", "constant operator value of the reference profile on (-1,1)"},
        {"dyda_scaling", "operator value scales like length^{2s} on rescaled segments"},
        {"affine_harmonic", "affine data with affine tails are annihilated (s > 1/2)"},
        {"bump_not_sconvex", "convex datum whose segment solution drops below it"},
        {"sconvex_not_convex", "segment solution above 1 with boundary values 1"},
        {"disk_envelope", "2-D envelope on the unit disk, residual and boundary gap"},
        {"dumbbell_neck", "boundary datum not attained on the non-convex dumbbell"},
    };
    return registry;
}

ScenarioReport run_scenario(const std::string& name, const KeyValueConfig& overrides) {
    if (name == "dyda") return scenario_dyda(overrides);
    if (name == "dyda_scaling") return scenario_dyda_scaling(overrides);
    if (name == "affine_harmonic") return scenario_affine_harmonic(overrides);
    if (name == "bump_not_sconvex") return scenario_bump_not_sconvex(overrides);
    if (name == "sconvex_not_convex") return scenario_sconvex_not_convex(overrides);
    if (name == "disk_envelope") return scenario_disk_envelope(overrides);
    if (name == "dumbbell_neck") return scenario_dumbbell_neck(overrides);
    throw std::invalid_argument("unknown scenario: " + name);
}

std::string report_to_json(const ScenarioReport& rep) {
    nlohmann::json j;
    j["scenario"] = rep.name;
    j["all_pass"] = rep.all_pass;
    j["params"] = rep.params;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"value", c.value},
                          {"detail", c.detail}});
    }
    j["checks"] = checks;
    nlohmann::json tables = nlohmann::json::array();
    for (const auto& t : rep.tables) {
        tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
    }
    j["tables"] = tables;
    return j.dump(2);
}

} // namespace sconv
