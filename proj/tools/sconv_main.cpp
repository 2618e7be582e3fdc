// sconv command-line front end. Talks to the solver library through
// the C API only; configuration, manifests and table output live here.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sconv/sconv.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNoConvergence = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using FlatConfig = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

FlatConfig parse_flat_text(const std::string& text) {
    FlatConfig out;
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
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

fs::path resolve_config_path(const std::string& given) {
    fs::path p(given);
    if (fs::exists(p)) return p;
    if (p.is_relative()) {
        if (const char* dir = std::getenv("SCONV_CONFIG_DIR")) {
            const fs::path alt = fs::path(dir) / p;
            if (fs::exists(alt)) return alt;
        }
    }
    throw ConfigError("config file not found: " + given);
}

// Accepts flat key = value text or a previously written manifest (the
// run manifest re-feeds as configuration).
FlatConfig load_config_file(const std::string& path) {
    const fs::path resolved = resolve_config_path(path);
    std::ifstream in(resolved);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad manifest JSON: ") + e.what());
        }
        if (!doc.contains("config") || !doc["config"].is_object()) {
            throw ConfigError("manifest has no config object: " + path);
        }
        FlatConfig out;
        for (const auto& [k, v] : doc["config"].items()) {
            out[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
        return out;
    }
    return parse_flat_text(text);
}

struct RunContext {
    std::string command;
    FlatConfig config;
    fs::path out_dir;
    json checks = json::array();
    std::vector<std::string> outputs;
    bool all_pass = true;

    std::string get(const std::string& key, const std::string& fallback) const {
        const auto it = config.find(key);
        return it == config.end() ? fallback : it->second;
    }
    double get_num(const std::string& key, double fallback) const {
        const auto it = config.find(key);
        if (it == config.end()) return fallback;
        try {
            size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(it->second);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' is not numeric: " + it->second);
        }
    }
    int get_int(const std::string& key, int fallback) const {
        const double v = get_num(key, static_cast<double>(fallback));
        return static_cast<int>(v);
    }

    void set_default(const std::string& key, const std::string& value) {
        config.emplace(key, value);
    }

    void add_check(const std::string& name, bool pass, double value,
                   const std::string& detail) {
        checks.push_back({{"name", name}, {"pass", pass}, {"value", value},
                          {"detail", detail}});
        all_pass = all_pass && pass;
        std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(),
                    detail.c_str());
    }

    fs::path file(const std::string& name) {
        fs::create_directories(out_dir);
        outputs.push_back(name);
        return out_dir / name;
    }

    void write_manifest(int exit_status) {
        fs::create_directories(out_dir);
        json m;
        m["command"] = command;
        m["version"] = sconv_version();
        m["config"] = config;
        m["outputs"] = outputs;
        m["checks"] = checks;
        m["exit_status"] = exit_status;
        std::ofstream out(out_dir / "manifest.json");
        out << m.dump(2) << "\n";
    }
};

void write_csv(const fs::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    for (size_t c = 0; c < columns.size(); ++c) {
        out << columns[c] << (c + 1 == columns.size() ? "\n" : ",");
    }
    char buf[64];
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
            out << buf << (c + 1 == row.size() ? "\n" : ",");
        }
    }
}

void write_plot(const fs::path& path, const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    out << "#";
    for (const auto& c : columns) out << " " << c;
    out << "\n";
    char buf[64];
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
            out << buf << (c + 1 == row.size() ? "\n" : " ");
        }
    }
}

[[noreturn]] void throw_api_error(const std::string& what) {
    const std::string detail = sconv_last_error();
    throw ConfigError(what + (detail.empty() ? "" : ": " + detail));
}

struct DomainHandle {
    sconv_domain* ptr = nullptr;
    explicit DomainHandle(const std::string& spec) {
        if (sconv_domain_create(spec.c_str(), &ptr) != SCONV_OK) {
            throw_api_error("bad domain spec '" + spec + "'");
        }
    }
    ~DomainHandle() { sconv_domain_destroy(ptr); }
    DomainHandle(const DomainHandle&) = delete;
    DomainHandle& operator=(const DomainHandle&) = delete;
};

struct ExteriorHandle {
    sconv_exterior* ptr = nullptr;
    explicit ExteriorHandle(const std::string& spec) {
        if (sconv_exterior_create(spec.c_str(), &ptr) != SCONV_OK) {
            throw_api_error("bad exterior datum spec '" + spec + "'");
        }
    }
    ~ExteriorHandle() { sconv_exterior_destroy(ptr); }
    ExteriorHandle(const ExteriorHandle&) = delete;
    ExteriorHandle& operator=(const ExteriorHandle&) = delete;
};

struct ProfileHandle {
    sconv_profile* ptr = nullptr;
    explicit ProfileHandle(const std::string& spec) {
        if (sconv_profile_create(spec.c_str(), &ptr) != SCONV_OK) {
            throw_api_error("bad profile spec '" + spec + "'");
        }
    }
    ~ProfileHandle() { sconv_profile_destroy(ptr); }
    ProfileHandle(const ProfileHandle&) = delete;
    ProfileHandle& operator=(const ProfileHandle&) = delete;
};

sconv_operator_mode parse_mode(const std::string& name) {
    if (name == "full") return SCONV_MODE_FULL;
    if (name == "localized_union") return SCONV_MODE_LOCALIZED_UNION;
    if (name == "localized_component") return SCONV_MODE_LOCALIZED_COMPONENT;
    throw ConfigError("unknown operator mode: " + name);
}

sconv_solver_config solver_config_from(const RunContext& ctx) {
    sconv_solver_config cfg;
    sconv_solver_config_init(&cfg);
    cfg.tolerance = ctx.get_num("solver.tolerance", cfg.tolerance);
    cfg.max_sweeps = ctx.get_int("solver.max_sweeps", cfg.max_sweeps);
    const std::string order = ctx.get("solver.sweep_order", "jacobi");
    if (order == "jacobi") {
        cfg.sweep_order = SCONV_SWEEP_JACOBI;
    } else if (order == "gauss_seidel") {
        cfg.sweep_order = SCONV_SWEEP_GAUSS_SEIDEL;
    } else {
        throw ConfigError("unknown sweep order: " + order);
    }
    cfg.relaxation = ctx.get_num("solver.relaxation", cfg.relaxation);
    cfg.direction_count = ctx.get_int("solver.directions", cfg.direction_count);
    cfg.mode = parse_mode(ctx.get("solver.mode", "full"));
    const std::string accel = ctx.get("solver.accelerator", "policy");
    if (accel == "none") {
        cfg.accelerator = SCONV_ACCEL_NONE;
    } else if (accel == "policy") {
        cfg.accelerator = SCONV_ACCEL_POLICY_ITERATION;
    } else {
        throw ConfigError("unknown accelerator: " + accel);
    }
    cfg.policy_inner_sweeps = ctx.get_int("solver.inner_sweeps", cfg.policy_inner_sweeps);
    cfg.policy_warmup_sweeps = ctx.get_int("solver.warmup_sweeps", cfg.policy_warmup_sweeps);
    cfg.grid_spacing = ctx.get_num("grid.dx", cfg.grid_spacing);
    cfg.line_spacing = ctx.get_num("line.spacing", cfg.line_spacing);
    cfg.truncation_radius = ctx.get_num("line.radius", cfg.truncation_radius);
    cfg.residual_target = ctx.get_num("solver.residual_target", cfg.residual_target);
    cfg.threads = ctx.get_int("threads", cfg.threads);
    return cfg;
}

// ------------------------------------------------------------------
// envelope

int cmd_envelope(RunContext& ctx) {
    ctx.set_default("domain", "ball:1.0");
    ctx.set_default("g", "constant:0");
    ctx.set_default("order.s", "0.5");
    ctx.set_default("grid.dx", "0.03125");
    ctx.set_default("concave", "0");

    DomainHandle domain(ctx.get("domain", ""));
    ExteriorHandle g(ctx.get("g", ""));
    const double s = ctx.get_num("order.s", 0.5);
    const sconv_solver_config cfg = solver_config_from(ctx);
    const bool concave = ctx.get_int("concave", 0) != 0;

    sconv_result* res = nullptr;
    const sconv_status st =
        concave ? sconv_solve_concave_envelope(domain.ptr, g.ptr, s, &cfg, &res)
                : sconv_solve_envelope(domain.ptr, g.ptr, s, &cfg, &res);
    if (st != SCONV_OK && st != SCONV_ERR_NO_CONVERGENCE) {
        throw_api_error("envelope solve failed");
    }

    const int n = sconv_result_node_count(res);
    std::vector<double> xs(n), ys(n), vals(n), angs(n);
    std::vector<int> pol(n);
    sconv_result_nodes(res, xs.data(), ys.data(), vals.data(), pol.data(), angs.data());
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        rows.push_back({xs[i], ys[i], vals[i], static_cast<double>(pol[i]), angs[i]});
    }
    const std::vector<std::string> cols = {"x", "y", "u", "policy_index", "policy_angle"};
    write_csv(ctx.file("envelope.csv"), cols, rows);
    write_plot(ctx.file("envelope.dat"), {"x", "y", "u"}, [&] {
        std::vector<std::vector<double>> plot;
        for (int i = 0; i < n; ++i) plot.push_back({xs[i], ys[i], vals[i]});
        return plot;
    }());

    const double residual = sconv_result_residual(res);
    const double osc = sconv_result_osc_g(res);
    const bool converged = sconv_result_converged(res) == 1;
    std::printf("nodes %d sweeps %d residual %.3e osc(g) %.3e\n", n,
                sconv_result_sweeps(res), residual, osc);
    ctx.add_check("converged", converged,
                  converged ? 1.0 : 0.0, "sweeps " + std::to_string(sconv_result_sweeps(res)));
    ctx.add_check("residual_below_target", residual <= cfg.residual_target * osc + 1e-10,
                  residual, "sup |operator| over interior nodes");
    sconv_result_destroy(res);
    if (!converged) return kExitNoConvergence;
    return ctx.all_pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------
// operator-eval

int cmd_operator_eval(RunContext& ctx) {
    ctx.set_default("domain", "ball:1.0");
    ctx.set_default("g", "constant:0");
    ctx.set_default("u", "expr:x^2+y^2");
    ctx.set_default("order.s", "0.5");
    ctx.set_default("grid.dx", "0.015625");
    ctx.set_default("at", "0,0");
    ctx.set_default("op.directions", "64");
    ctx.set_default("op.mode", "full");
    ctx.set_default("op.normalized", "0");
    ctx.set_default("monge_ampere", "0");

    DomainHandle domain(ctx.get("domain", ""));
    ExteriorHandle g(ctx.get("g", ""));
    const double s = ctx.get_num("order.s", 0.5);

    // the candidate u is itself an exterior-style spec evaluated inside
    ExteriorHandle u_spec(ctx.get("u", ""));
    struct Ctx {
        sconv_exterior* e;
    } uctx{u_spec.ptr};
    auto eval_u = [](double x, double y, void* user) -> double {
        return sconv_exterior_eval(static_cast<Ctx*>(user)->e, x, y);
    };
    sconv_field* field = nullptr;
    if (sconv_field_create(domain.ptr, g.ptr, eval_u, &uctx,
                           ctx.get_num("grid.dx", 1.0 / 64), &field) != SCONV_OK) {
        throw_api_error("field sampling failed");
    }

    const std::string at = ctx.get("at", "0,0");
    double px = 0.0, py = 0.0;
    if (std::sscanf(at.c_str(), "%lf,%lf", &px, &py) != 2) {
        sconv_field_destroy(field);
        throw ConfigError("bad evaluation point: " + at);
    }

    sconv_operator_opts opts;
    sconv_operator_opts_init(&opts);
    opts.direction_count = ctx.get_int("op.directions", 64);
    opts.line_spacing = ctx.get_num("line.spacing", 0.0);
    opts.truncation_radius = ctx.get_num("line.radius", 0.0);
    opts.normalized = ctx.get_int("op.normalized", 0);
    opts.mode = parse_mode(ctx.get("op.mode", "full"));

    const int m = sconv_domain_dim(domain.ptr) == 1 ? 1 : opts.direction_count;
    std::vector<std::vector<double>> rows;
    for (int d = 0; d < m; ++d) {
        const double theta = d * M_PI / m;
        double v = 0.0;
        if (sconv_directional_frac_lap(field, g.ptr, s, &opts, px, py,
                                       std::cos(theta), std::sin(theta), &v) != SCONV_OK) {
            sconv_field_destroy(field);
            throw_api_error("directional operator evaluation failed");
        }
        rows.push_back({static_cast<double>(d), theta, v});
    }
    write_csv(ctx.file("directions.csv"), {"index", "angle", "value"}, rows);
    write_plot(ctx.file("directions.dat"), {"angle", "value"}, [&] {
        std::vector<std::vector<double>> plot;
        for (const auto& r : rows) plot.push_back({r[1], r[2]});
        return plot;
    }());

    double lam = 0.0;
    int argmin = 0;
    if (sconv_lambda_1s(field, g.ptr, s, &opts, px, py, &lam, &argmin) != SCONV_OK) {
        sconv_field_destroy(field);
        throw_api_error("operator evaluation failed");
    }
    std::printf("lambda_1s(%g, %g) = %.10g  argmin direction %d\n", px, py, lam, argmin);
    ctx.add_check("lambda_1s_finite", std::isfinite(lam), lam,
                  "minimum directional value " + std::to_string(lam));

    if (ctx.get_int("monge_ampere", 0) != 0) {
        double ma = 0.0;
        int sign = 0;
        if (sconv_monge_ampere(field, g.ptr, s, &opts, px, py,
                               ctx.get_num("ma.a_max", 100.0), ctx.get_int("ma.count", 9),
                               &ma, &sign) != SCONV_OK) {
            sconv_field_destroy(field);
            throw_api_error("Monge-Ampere evaluation failed");
        }
        std::printf("monge_ampere = %.10g  sign %d\n", ma, sign);
        ctx.add_check("monge_ampere_sign_consistent",
                      sign == 0 || lam == 0.0 || (sign > 0) == (lam > 0), ma,
                      "sign agreement with lambda_1s");
    }
    sconv_field_destroy(field);
    return ctx.all_pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------
// check-convexity

int cmd_check_convexity(RunContext& ctx) {
    ctx.set_default("domain", "ball:1.0");
    ctx.set_default("g", "constant:0");
    ctx.set_default("u", "expr:x^2+y^2");
    ctx.set_default("order.s", "0.5");
    ctx.set_default("grid.dx", "0.03125");
    ctx.set_default("plan.segments", "200");
    ctx.set_default("plan.nodes", "128");
    ctx.set_default("seed", "42");

    DomainHandle domain(ctx.get("domain", ""));
    ExteriorHandle g(ctx.get("g", ""));
    ExteriorHandle u_spec(ctx.get("u", ""));
    struct Ctx {
        sconv_exterior* e;
    } uctx{u_spec.ptr};
    auto eval_u = [](double x, double y, void* user) -> double {
        return sconv_exterior_eval(static_cast<Ctx*>(user)->e, x, y);
    };
    sconv_field* field = nullptr;
    if (sconv_field_create(domain.ptr, g.ptr, eval_u, &uctx,
                           ctx.get_num("grid.dx", 1.0 / 32), &field) != SCONV_OK) {
        throw_api_error("field sampling failed");
    }

    int holds = 0;
    double worst = 0.0, lx = 0.0, ly = 0.0, rate = 0.0;
    const sconv_status st = sconv_check_s_convexity(
        field, ctx.get_num("order.s", 0.5), ctx.get_int("plan.segments", 200),
        ctx.get_int("plan.nodes", 128),
        static_cast<uint64_t>(ctx.get_num("seed", 42)), &holds, &worst, &lx, &ly, &rate);
    sconv_field_destroy(field);
    if (st != SCONV_OK) throw_api_error("convexity check failed");

    std::printf("pass rate %.3f worst violation %.3e at (%g, %g)\n", rate, worst, lx, ly);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "pass rate %.3f, worst violation %.3e", rate,
                  worst);
    ctx.add_check("s_convex", holds == 1, worst, detail);
    return ctx.all_pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------
// dirichlet-1d

int cmd_dirichlet_1d(RunContext& ctx) {
    ctx.set_default("g", "bump_2_4");
    ctx.set_default("order.s", "0.5");
    ctx.set_default("grid.n", "255");
    ctx.set_default("window", "4.0");

    ProfileHandle g(ctx.get("g", ""));
    const int n = ctx.get_int("grid.n", 255);
    if (n < 1) throw ConfigError("grid.n must be positive");
    std::vector<double> vals(static_cast<size_t>(n), 0.0);
    if (sconv_solve_segment(ctx.get_num("order.s", 0.5), g.ptr, n,
                            ctx.get_num("window", 4.0), vals.data()) != SCONV_OK) {
        throw_api_error("segment solve failed");
    }
    std::vector<std::vector<double>> rows;
    const double h = 1.0 / (n + 1);
    for (int i = 1; i <= n; ++i) {
        rows.push_back({i * h, vals[static_cast<size_t>(i - 1)],
                        sconv_profile_eval(g.ptr, i * h)});
    }
    write_csv(ctx.file("solution.csv"), {"t", "v", "datum"}, rows);
    write_plot(ctx.file("solution.dat"), {"t", "v"}, [&] {
        std::vector<std::vector<double>> plot;
        for (const auto& r : rows) plot.push_back({r[0], r[1]});
        return plot;
    }());
    std::printf("solved %d interior nodes; v(mid) = %.10g\n", n,
                vals[static_cast<size_t>((n - 1) / 2)]);
    ctx.add_check("solved", true, static_cast<double>(n), "interior nodes");
    return kExitOk;
}

// ------------------------------------------------------------------
// scenario

int cmd_scenario(RunContext& ctx, const std::string& name) {
    std::string overrides;
    for (const auto& [k, v] : ctx.config) {
        if (k == "scenario") continue;
        overrides += k + " = " + v + "\n";
    }
    char* report_json = nullptr;
    if (sconv_scenario_run(name.c_str(), overrides.c_str(), &report_json) != SCONV_OK) {
        throw_api_error("scenario '" + name + "' failed");
    }
    json doc = json::parse(report_json);
    sconv_string_free(report_json);

    // resolved scenario parameters join the manifest config
    for (const auto& [k, v] : doc["params"].items()) {
        ctx.config[k] = v.get<std::string>();
    }
    {
        std::ofstream out(ctx.file("report.json"));
        out << doc.dump(2) << "\n";
    }
    for (const auto& tbl : doc["tables"]) {
        std::vector<std::string> cols;
        for (const auto& c : tbl["columns"]) cols.push_back(c.get<std::string>());
        std::vector<std::vector<double>> rows;
        for (const auto& r : tbl["rows"]) rows.push_back(r.get<std::vector<double>>());
        const std::string base = tbl["name"].get<std::string>();
        write_csv(ctx.file(base + ".csv"), cols, rows);
        write_plot(ctx.file(base + ".dat"), cols, rows);
    }
    for (const auto& c : doc["checks"]) {
        ctx.add_check(c["name"].get<std::string>(), c["pass"].get<bool>(),
                      c["value"].get<double>(), c["detail"].get<std::string>());
    }
    return ctx.all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_list_scenarios() {
    for (int i = 0; i < sconv_scenario_count(); ++i) {
        std::printf("%-22s %s\n", sconv_scenario_name(i), sconv_scenario_summary(i));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional convex envelopes: solver, operators and scenario library"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "sconv-out";
    std::vector<std::string> sets;
    app.add_option("--config", config_path,
                   "flat key = value config file or a previous manifest.json");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", sets, "override: key=value (repeatable)");

    // typed convenience flags shared by the subcommands; empty means
    // "not given"
    std::string opt_domain, opt_g, opt_u, opt_s, opt_dx, opt_n, opt_at, opt_dirs,
        opt_seed, opt_scenario_name;

    auto* envelope = app.add_subcommand("envelope", "solve the envelope problem");
    envelope->add_option("--domain", opt_domain, "domain spec, e.g. ball:1.0");
    envelope->add_option("--g", opt_g, "exterior datum spec, e.g. constant:0.7");
    envelope->add_option("--s", opt_s, "fractional order in (0,1)");
    envelope->add_option("--dx", opt_dx, "lattice spacing");
    envelope->add_option("--directions", opt_dirs, "direction count");

    auto* op_eval = app.add_subcommand("operator-eval", "evaluate the operator at a point");
    op_eval->add_option("--domain", opt_domain, "domain spec");
    op_eval->add_option("--g", opt_g, "exterior datum spec");
    op_eval->add_option("--u", opt_u, "candidate function spec (sampled inside)");
    op_eval->add_option("--s", opt_s, "fractional order");
    op_eval->add_option("--at", opt_at, "evaluation point x,y");
    op_eval->add_option("--directions", opt_dirs, "direction count");

    auto* checker = app.add_subcommand("check-convexity", "segment-based convexity check");
    checker->add_option("--domain", opt_domain, "domain spec");
    checker->add_option("--g", opt_g, "exterior datum spec");
    checker->add_option("--u", opt_u, "candidate function spec");
    checker->add_option("--s", opt_s, "fractional order");
    checker->add_option("--segments", opt_n, "number of random segments");
    checker->add_option("--seed", opt_seed, "sampling seed");

    auto* dirichlet = app.add_subcommand("dirichlet-1d", "solve a 1-D segment problem");
    dirichlet->add_option("--g", opt_g, "profile spec, e.g. bump_2_4");
    dirichlet->add_option("--s", opt_s, "fractional order");
    dirichlet->add_option("--n", opt_n, "interior node count");

    auto* scenario = app.add_subcommand("scenario", "run a named scenario");
    scenario->add_option("name", opt_scenario_name, "scenario name")->required();
    scenario->add_option("--s", opt_s, "fractional order override");
    scenario->add_option("--dx", opt_dx, "lattice spacing override");
    scenario->add_option("--n", opt_n, "node count override");

    auto* lister = app.add_subcommand("list-scenarios", "list available scenarios");

    // global options (--out, --config, --set) may follow the subcommand
    for (auto* sub : {envelope, op_eval, checker, dirichlet, scenario, lister}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    RunContext ctx;
    ctx.out_dir = out_dir;
    int status = kExitConfigError;
    try {
        if (!config_path.empty()) ctx.config = load_config_file(config_path);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value: " + kv);
            ctx.config[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
        }
        if (!opt_domain.empty()) ctx.config["domain"] = opt_domain;
        if (!opt_g.empty()) ctx.config["g"] = opt_g;
        if (!opt_u.empty()) ctx.config["u"] = opt_u;
        if (!opt_s.empty()) ctx.config["order.s"] = opt_s;
        if (!opt_dx.empty()) ctx.config["grid.dx"] = opt_dx;
        if (!opt_at.empty()) ctx.config["at"] = opt_at;
        if (!opt_seed.empty()) ctx.config["seed"] = opt_seed;

        if (app.got_subcommand(envelope)) {
            ctx.command = "envelope";
            if (!opt_dirs.empty()) ctx.config["solver.directions"] = opt_dirs;
            status = cmd_envelope(ctx);
        } else if (app.got_subcommand(op_eval)) {
            ctx.command = "operator-eval";
            if (!opt_dirs.empty()) ctx.config["op.directions"] = opt_dirs;
            status = cmd_operator_eval(ctx);
        } else if (app.got_subcommand(checker)) {
            ctx.command = "check-convexity";
            if (!opt_n.empty()) ctx.config["plan.segments"] = opt_n;
            status = cmd_check_convexity(ctx);
        } else if (app.got_subcommand(dirichlet)) {
            ctx.command = "dirichlet-1d";
            if (!opt_n.empty()) ctx.config["grid.n"] = opt_n;
            status = cmd_dirichlet_1d(ctx);
        } else if (app.got_subcommand(scenario)) {
            ctx.command = "scenario";
            ctx.config["scenario"] = opt_scenario_name;
            if (!opt_n.empty()) ctx.config["n"] = opt_n;
            if (!opt_dx.empty()) ctx.config["dx"] = opt_dx;
            if (!opt_s.empty()) ctx.config["s"] = opt_s;
            status = cmd_scenario(ctx, opt_scenario_name);
        } else if (app.got_subcommand(lister)) {
            return cmd_list_scenarios();
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }

    ctx.write_manifest(status);
    return status;
}
