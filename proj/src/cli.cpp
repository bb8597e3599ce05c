#include <permfield/cli.hpp>

#include <permfield/arith.hpp>
#include <permfield/cycles.hpp>
#include <permfield/errors.hpp>
#include <permfield/experiments.hpp>
#include <permfield/field.hpp>
#include <permfield/kronecker.hpp>
#include <permfield/random.hpp>
#include <permfield/ratefn.hpp>
#include <permfield/report.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace permfield {

namespace {

// Raised for bad input that CLI11 cannot see (files, values, configs).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    if (std::isinf(v)) {
        return v < 0 ? "-inf" : "inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

unsigned threads_from_env() {
    const char* env = std::getenv("PERMFIELD_THREADS");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') {
        throw UsageError(std::string("PERMFIELD_THREADS is not a number: ") + env);
    }
    return static_cast<unsigned>(v);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Common {
    bool json = false;
    std::string out_dir;
    std::optional<unsigned> threads;

    unsigned resolved_threads() const { return threads ? *threads : threads_from_env(); }
};

int finish(const ExperimentReport& report, const Common& common, const std::string& text, std::ostream& out,
           std::ostream& err) {
    if (!common.out_dir.empty()) {
        for (const auto& path : report.write(common.out_dir)) {
            err << "wrote " << path.string() << '\n';
        }
    }
    if (common.json) {
        out << report.to_json().dump(2) << '\n';
    } else {
        out << text;
    }
    for (const auto& v : report.verdicts) {
        if (v.status == VerdictStatus::fail) {
            err << "assertion failed: " << v.name << ": " << v.detail << '\n';
        } else if (v.status == VerdictStatus::warning) {
            err << "warning: " << v.name << ": " << v.detail << '\n';
        }
    }
    return report.passed() ? kExitOk : kExitAssertion;
}

ExperimentReport bare_report(const std::string& name, std::uint64_t seed, nlohmann::json config) {
    ExperimentReport report;
    report.name = name;
    report.seed = seed;
    report.config = std::move(config);
    report.config["name"] = name;
    return report;
}

int cmd_constants(const Common& common, std::ostream& out, std::ostream& err) {
    const RateSolution& s = critical_solution();
    ExperimentReport report = bare_report("constants", 0, nlohmann::json::object());
    report.statistics = {{"x_crit", s.x_crit},       {"beta_crit", s.beta_crit}, {"lambda_at", s.lambda_at},
                         {"lambda2_at", s.lambda2_at}, {"residual", s.residual}};
    report.verdicts.push_back(check("x_crit", std::fabs(s.x_crit - 0.6524) <= 5e-4, s.x_crit, "x* = 0.6524 +- 5e-4"));
    report.verdicts.push_back(
        check("beta_crit", std::fabs(s.beta_crit - 11.746) <= 5e-3, s.beta_crit, "beta* = 11.746 +- 5e-3"));
    report.verdicts.push_back(check("legendre_residual", s.residual <= 1e-10, s.residual, "|lambda*(x*) - 1| <= 1e-10"));
    std::ostringstream text;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "x* = %.10f\nbeta* = %.10f\nlambda(beta*) = %.10f\nlambda''(beta*) = %.10g\n|lambda*(x*) - 1| = %.3g\n",
                  s.x_crit, s.beta_crit, s.lambda_at, s.lambda2_at, s.residual);
    text << buf;
    return finish(report, common, text.str(), out, err);
}

int cmd_ratefn_table(const Common& common, double x_min, double x_max, unsigned steps, std::ostream& out,
                     std::ostream& err) {
    if (!(x_min > 0.0) || !(x_max > x_min) || steps < 1) {
        throw UsageError("ratefn-table needs 0 < x-min < x-max and steps >= 1");
    }
    ExperimentReport report = bare_report("ratefn_table", 0, {{"x_min", x_min}, {"x_max", x_max}, {"steps", steps}});
    report.columns = {"x", "lambda_star", "beta"};
    const double log2 = std::log(2.0);
    PlotSeries series{"rate function", {}, {}};
    std::ostringstream text;
    text << "x,lambda_star,beta\n";
    for (unsigned i = 0; i <= steps; ++i) {
        double x = x_min + (x_max - x_min) * i / steps;
        double value = std::numeric_limits<double>::infinity();
        double beta = std::numeric_limits<double>::infinity();
        if (x < log2) {
            LegendrePoint p = legendre(x);
            value = p.value;
            beta = p.beta;
        }
        report.rows.push_back({x, value, beta});
        text << num(x) << ',' << num(value) << ',' << num(beta) << '\n';
        series.x.push_back(x);
        series.y.push_back(value);
    }
    PlotSpec plot;
    plot.title = "Legendre transform of the log-distance cumulant";
    plot.x_label = "x";
    plot.y_label = "lambda*(x)";
    plot.series.push_back(series);
    plot.markers = {log2};
    report.plots.push_back(plot);
    return finish(report, common, text.str(), out, err);
}

int cmd_sample(const Common& common, std::uint64_t n, std::uint64_t seed, std::ostream& out, std::ostream& err) {
    if (n < 1) {
        throw UsageError("--n must be >= 1");
    }
    RandomStream stream(seed);
    CycleStructure structure = sample_cycle_structure(n, stream);
    ExperimentReport report = bare_report("sample", seed, {{"n", n}});
    report.columns = {"length", "count"};
    for (const auto& [len, count] : structure.counts()) {
        report.rows.push_back({static_cast<double>(len), static_cast<double>(count)});
    }
    report.statistics = {{"n", n}, {"cycles", structure.total_cycles()}};
    return finish(report, common, structure.to_csv(), out, err);
}

CycleStructure load_cycles(const std::string& path) {
    try {
        return CycleStructure::from_csv(read_text(path));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

int cmd_eval(const Common& common, const std::string& cycles_path, const std::string& t_text, bool imag,
             std::ostream& out, std::ostream& err) {
    CycleStructure structure = load_cycles(cycles_path);
    TorusPoint t = resolve_torus_point(t_text);
    FieldSpec spec(structure, imag ? FieldKind::imaginary : FieldKind::real);
    ExtReal value = eval_point(spec, t);
    ExperimentReport report =
        bare_report("eval", 0, {{"cycles", cycles_path}, {"t", t_text}, {"kind", imag ? "imag" : "real"}});
    report.statistics = {{"value", json_number(value.value())}, {"n", structure.n()}};
    return finish(report, common, value.to_string() + "\n", out, err);
}

int cmd_scan(const Common& common, std::uint64_t n, std::uint64_t mesh_factor, const std::string& theta_text,
             std::uint64_t seed, bool imag, const std::string& trace_path, std::ostream& out, std::ostream& err) {
    if (n < 1 || mesh_factor < 1) {
        throw UsageError("--n and --mesh-factor must be >= 1");
    }
    Rational theta = parse_rational(theta_text);
    Mesh mesh(mesh_factor * n, theta.num, theta.den);
    RandomStream stream(seed);
    CycleStructure structure = sample_cycle_structure(n, stream);
    FieldSpec spec(structure, imag ? FieldKind::imaginary : FieldKind::real);
    bool keep = !trace_path.empty();
    ScanResult result = scan_max(spec, mesh, common.resolved_threads(), keep);
    nlohmann::json mesh_json = {{"q", mesh.q()}, {"theta", theta.to_string()}, {"denominator", mesh.denominator()}};
    ExperimentReport report = bare_report(
        "scan", seed, {{"n", n}, {"mesh_factor", mesh_factor}, {"theta", theta.to_string()}, {"kind", imag ? "imag" : "real"}});
    double ln = std::log(static_cast<double>(n));
    report.statistics = {{"max", json_number(result.max.value())},
                         {"argmax", result.argmax},
                         {"t_argmax", mesh.point(result.argmax).to_string()},
                         {"cycles", structure.total_cycles()},
                         {"ratio", n > 1 ? json_number(result.max.value() / ln) : nlohmann::json(nullptr)},
                         {"mesh", mesh_json}};
    if (keep) {
        std::ofstream trace(trace_path);
        if (!trace) {
            throw UsageError("cannot write " + trace_path);
        }
        trace << "# " << mesh_json.dump() << '\n' << "j,t,value\n";
        for (std::uint64_t j = 0; j < mesh.size(); ++j) {
            trace << j << ',' << num(mesh.point_float(j)) << ',' << result.trace[j].to_string() << '\n';
        }
        PlotSpec plot;
        plot.title = "field over the mesh";
        plot.x_label = "t";
        plot.y_label = imag ? "Im" : "Re";
        PlotSeries series{"field", {}, {}};
        // At most ~4000 plotted points, keeping the minimum of each stride so dips stay visible.
        std::uint64_t stride = std::max<std::uint64_t>(1, mesh.size() / 4000);
        for (std::uint64_t j = 0; j < mesh.size(); j += stride) {
            double low = std::numeric_limits<double>::infinity();
            for (std::uint64_t i = j; i < std::min(j + stride, mesh.size()); ++i) {
                low = std::min(low, result.trace[i].value());
            }
            series.x.push_back(mesh.point_float(j));
            series.y.push_back(low);
        }
        plot.series.push_back(series);
        report.plots.push_back(plot);
    }
    std::ostringstream text;
    text << "max = " << result.max.to_string() << "\nargmax = " << result.argmax << "\nt = "
         << mesh.point(result.argmax).to_string() << "\ncycles = " << structure.total_cycles() << '\n';
    if (n > 1) {
        text << "max / log N = " << num(result.max.value() / ln) << '\n';
    }
    return finish(report, common, text.str(), out, err);
}

int cmd_arcs_classify(const Common& common, std::uint64_t xi0, double kappa, const std::string& in_path,
                      std::ostream& out, std::ostream& err) {
    if (xi0 < 1 || !(kappa > 0.0 && kappa < 0.5)) {
        throw UsageError("arcs classify needs --xi0 >= 1 and --kappa in (0, 1/2)");
    }
    std::istringstream in(read_text(in_path));
    ExperimentReport report = bare_report("arcs_classify", 0, {{"xi0", xi0}, {"kappa", kappa}, {"in", in_path}});
    report.columns = {"t", "major", "witness"};
    // Each input line is echoed with kind and witness appended.
    std::ostringstream text;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::string field = line.substr(0, line.find(','));
        if (first) {
            first = false;
            if (field == "t") {
                text << line << ",kind,witness\n";
                continue;
            }
            text << "t,kind,witness\n";
        }
        TorusPoint t;
        try {
            t = resolve_torus_point(field);
        } catch (const std::exception& e) {
            throw UsageError(in_path + ": bad point '" + field + "': " + e.what());
        }
        ArcClassification c = classify(t, xi0, kappa);
        double witness = c.witness ? static_cast<double>(*c.witness) : 0.0;
        report.rows.push_back({to_double(t), c.kind == ArcKind::major ? 1.0 : 0.0, witness});
        text << line << ',' << to_string(c.kind) << ',' << (c.witness ? std::to_string(*c.witness) : "") << '\n';
    }
    return finish(report, common, text.str(), out, err);
}

int cmd_fourier_dump(const Common& common, double beta, double tau, std::int64_t xi_max, std::ostream& out,
                     std::ostream& err) {
    if (xi_max < 0) {
        throw UsageError("--xi-max must be >= 0");
    }
    std::complex<double> z(beta, tau);
    ExperimentReport report = bare_report("fourier_dump", 0, {{"beta", beta}, {"tau", tau}, {"xi_max", xi_max}});
    report.columns = {"xi", "re", "im", "abs", "quad_error"};
    std::ostringstream text;
    text << "xi,re,im,abs,quad_error\n";
    for (std::int64_t xi = 0; xi <= xi_max; ++xi) {
        FourierRow row = phi_hat(z, xi);
        double a = std::abs(row.value);
        report.rows.push_back({static_cast<double>(xi), row.value.real(), row.value.imag(), a, row.quad_error});
        text << xi << ',' << num(row.value.real()) << ',' << num(row.value.imag()) << ',' << num(a) << ','
             << num(row.quad_error) << '\n';
    }
    if (xi_max >= 4) {
        DecayEnvelope env = decay_envelope(z, xi_max, 4);
        report.statistics = {{"slope", json_number(env.slope)},
                             {"k_plus", env.k_plus},
                             {"vanishing", env.vanishing},
                             {"within_bound", env.within_bound}};
        report.verdicts.push_back(note("decay_slope", env.slope, "fitted log-log slope over xi in [4, xi_max]"));
    }
    return finish(report, common, text.str(), out, err);
}

int cmd_experiment(const Common& common, const std::string& name, const std::string& config_path,
                   std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
    nlohmann::json overrides = nlohmann::json::object();
    if (!config_path.empty()) {
        try {
            overrides = nlohmann::json::parse(read_text(config_path));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(config_path + ": " + e.what());
        }
    }
    ExperimentConfig config;
    try {
        config = ExperimentConfig::from_json(name, overrides);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    if (seed) {
        config.seed = *seed;
    }
    if (common.threads || !overrides.contains("threads")) {
        config.threads = common.resolved_threads();
    }
    ExperimentReport report = run_experiment(config);
    Common effective = common;
    if (effective.out_dir.empty()) {
        effective.out_dir = "reports";
    }
    std::ostringstream text;
    for (const auto& v : report.verdicts) {
        text << to_string(v.status) << "  " << v.name << "  " << v.detail << '\n';
    }
    return finish(report, effective, text.str(), out, err);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random permutation characteristic-polynomial fields", "permfield"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_flag("--json", common.json, "print the JSON report instead of text");
    app.add_option("--out", common.out_dir, "directory for report files");
    app.add_option("--threads", common.threads, "worker threads (default: PERMFIELD_THREADS or all cores)");

    auto* constants = app.add_subcommand("constants", "critical constants x* and beta*");

    double x_min = 0.05;
    double x_max = 0.69;
    unsigned steps = 64;
    auto* table = app.add_subcommand("ratefn-table", "tabulate the Legendre transform");
    table->add_option("--x-min", x_min);
    table->add_option("--x-max", x_max);
    table->add_option("--steps", steps);

    std::uint64_t n = 0;
    std::uint64_t seed = 1;
    auto* sample = app.add_subcommand("sample", "sample a uniform cycle structure");
    sample->add_option("--n", n)->required();
    sample->add_option("--seed", seed);

    std::string cycles_path;
    std::string t_text;
    bool imag = false;
    auto* eval = app.add_subcommand("eval", "evaluate the field at one point");
    eval->add_option("--cycles", cycles_path)->required();
    eval->add_option("--t", t_text)->required();
    eval->add_flag("--imag", imag);

    std::uint64_t mesh_factor = 2;
    std::string theta_text = "1/7";
    std::string trace_path;
    auto* scan = app.add_subcommand("scan", "maximise the field of a sampled permutation over a mesh");
    scan->add_option("--n", n)->required();
    scan->add_option("--mesh-factor", mesh_factor);
    scan->add_option("--theta", theta_text);
    scan->add_option("--seed", seed);
    scan->add_flag("--imag", imag);
    scan->add_option("--trace", trace_path, "write the full trace as CSV");

    std::uint64_t xi0 = 5;
    double kappa = 0.01;
    std::string in_path;
    auto* arcs = app.add_subcommand("arcs", "major/minor arc tools");
    arcs->require_subcommand(1);
    auto* classify_cmd = arcs->add_subcommand("classify", "classify points read from a CSV");
    classify_cmd->add_option("--xi0", xi0);
    classify_cmd->add_option("--kappa", kappa);
    classify_cmd->add_option("--in", in_path)->required();

    double beta = 1.0;
    double tau = 0.0;
    std::int64_t xi_max = 32;
    auto* fourier = app.add_subcommand("fourier", "Fourier coefficients of |1-e(u)|^z");
    fourier->require_subcommand(1);
    auto* dump = fourier->add_subcommand("dump", "print coefficients for 0 <= xi <= xi-max");
    dump->add_option("--beta", beta);
    dump->add_option("--tau", tau);
    dump->add_option("--xi-max", xi_max);

    std::string experiment_name;
    std::string config_path;
    std::optional<std::uint64_t> experiment_seed;
    auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment");
    experiment->add_option("name", experiment_name)->required()->check(CLI::IsMember(experiment_names()));
    experiment->add_option("--config", config_path, "JSON overrides");
    experiment->add_option("--seed", experiment_seed);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*constants) {
            return cmd_constants(common, out, err);
        }
        if (*table) {
            return cmd_ratefn_table(common, x_min, x_max, steps, out, err);
        }
        if (*sample) {
            return cmd_sample(common, n, seed, out, err);
        }
        if (*eval) {
            return cmd_eval(common, cycles_path, t_text, imag, out, err);
        }
        if (*scan) {
            return cmd_scan(common, n, mesh_factor, theta_text, seed, imag, trace_path, out, err);
        }
        if (*classify_cmd) {
            return cmd_arcs_classify(common, xi0, kappa, in_path, out, err);
        }
        if (*dump) {
            return cmd_fourier_dump(common, beta, tau, xi_max, out, err);
        }
        if (*experiment) {
            return cmd_experiment(common, experiment_name, config_path, experiment_seed, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << "capacity error (" << e.parameter() << "): " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitAssertion;
    }
    err << "usage error: no subcommand\n";
    return kExitUsage;
}

} // namespace permfield
