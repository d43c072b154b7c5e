// Command-line driver: simulate, certify, bump, sweep, fit.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/serialization.hpp"

using namespace fraclab;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSaturation = 2, kStability = 3, kWindow = 4, kConstruction = 5 };

struct Options {
    std::string config;
    std::string out;
    unsigned workers = 1;
    double quad_scale = 1.0;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct Target {
    std::string law;  ///< "power" or "exponential"
    double value = 0.0;
};

Target target_of(const SolverConfig& c) {
    const ReactionSpec& f = c.reaction;
    const double s = c.s;
    switch (f.kind()) {
        case ReactionKind::ignition:
            if (s < 0.5) return {"power", 1.0 / (2.0 * s)};
            break;
        case ReactionKind::alpha_monostable: {
            const double a = f.alpha();
            if (a > 1.0 && s < a / (2.0 * (a - 1.0))) return {"power", a / (2.0 * s * (a - 1.0))};
            break;
        }
        case ReactionKind::kpp: {
            const double rate = f(1e-7) / 1e-7;
            return {"exponential", geometry_of(c) == Geometry::front ? rate / (2.0 * s) : rate / (c.dimension + 2.0 * s)};
        }
        case ReactionKind::bistable:
            break;
    }
    return {"power", 1.0};
}

std::string lambda_tag(double lambda) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", lambda);
    return buf;
}

std::string plot_script(const std::vector<std::string>& csvs, bool log_x) {
    std::ostringstream out;
    out << "set datafile separator ','\n";
    out << "set key left top\n";
    out << "set xlabel 't'\nset ylabel 'x'\n";
    out << (log_x ? "set logscale xy\n" : "set logscale y\n");
    out << "plot ";
    for (std::size_t i = 0; i < csvs.size(); ++i) {
        if (i) out << ", \\\n     ";
        out << "'" << csvs[i] << "' using 1:2 skip 2 with lines title '" << csvs[i] << " x_under', '" << csvs[i]
            << "' using 1:3 skip 2 with lines title '" << csvs[i] << " x_over'";
    }
    out << "\n";
    return out.str();
}

Json fit_entry(const LevelSetSeries& s, const std::vector<double>& x, const char* which, const Target& target,
               FitWindow w) {
    Json j;
    j["lambda"] = s.lambda;
    j["quantity"] = which;
    j["law"] = target.law;
    j["window"] = {w.lo, w.hi};
    j["target_exponent"] = target.value;
    try {
        const FitResult r = target.law == "power" ? fit_power(s.times, x, w) : fit_exponential(s.times, x, w);
        j["exponent"] = r.slope;
        j["amplitude"] = r.amplitude;
        j["residual"] = r.residual;
        j["samples"] = r.samples;
        j["abs_error"] = std::abs(r.slope - target.value);
    } catch (const ContractError& e) {
        j["error"] = e.what();
    }
    return j;
}

/// Runs one simulate config into `out`; returns the exit code.
int simulate(const ExperimentConfig& cfg, const std::string& out, std::uint64_t seed) {
    const SolverConfig& c = *cfg.solver;
    const std::string hash = config_hash(cfg.source);
    std::vector<double> levels = cfg.tracking;
    if (levels.empty()) levels.push_back(0.5);
    LevelSetRecorder rec(levels, geometry_of(c), tracking_window(c));

    Json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["config_hash"] = hash;
    manifest["seed"] = seed;
    manifest["experiment"] = "simulate";
    manifest["config"] = cfg.source;
    manifest["solver"] = solver_to_json(c);

    int code = kOk;
    Trajectory tr;
    try {
        tr = run(c, std::ref(rec));
    } catch (const StabilityError& e) {
        manifest["error"] = e.what();
        code = kStability;
    }
    Json runj;
    runj["steps"] = tr.steps;
    runj["halvings"] = tr.halvings;
    runj["max_clip"] = tr.max_clip;
    runj["saturated"] = tr.saturated;
    if (tr.saturated) {
        runj["saturation_time"] = tr.saturation_time;
        runj["saturation_position"] = tr.saturation_position;
        code = kSaturation;
    }
    Json dts = Json::array();
    for (const DtChange& d : tr.dt_history) dts.push_back({{"t", d.t}, {"dt", d.dt}});
    runj["dt_history"] = dts;
    manifest["run"] = runj;
    Json snaps = Json::array();
    for (const Snapshot& s : tr.snapshots) snaps.push_back({{"t", s.t}, {"mass", s.mass}, {"min", s.min}, {"max", s.max}});
    manifest["snapshots"] = snaps;

    const Target target = target_of(c);
    const double t_end = tr.snapshots.empty() ? c.t_final : tr.snapshots.back().t;
    const FitWindow w = late_window(t_end);
    Json fits = Json::array();
    std::vector<std::string> csvs;
    for (const LevelSetSeries& s : rec.series()) {
        const std::string name = "series_lambda_" + lambda_tag(s.lambda) + ".csv";
        write_text_file((fs::path(out) / name).string(), series_csv(s, hash));
        csvs.push_back(name);
        fits.push_back(fit_entry(s, s.x_under, "x_under", target, w));
        fits.push_back(fit_entry(s, s.x_over, "x_over", target, w));
    }
    manifest["fits"] = fits;
    manifest["fit_note"] = "slopes of late-time fits estimate the growth law; the theory bounds liminf and limsup only";
    write_text_file((fs::path(out) / "manifest.json").string(), dump(manifest));
    write_text_file((fs::path(out) / "plot.gp").string(), plot_script(csvs, target.law == "power"));
    return code;
}

int cmd_simulate(const Options& o) {
    const ExperimentConfig cfg = load_experiment(o.config);
    if (cfg.experiment != "simulate") throw ConfigError("experiment", "expected simulate");
    const std::string out = o.out.empty() ? cfg.output_dir : o.out;
    return simulate(cfg, out, o.seed_given ? o.seed : cfg.seed);
}

int cmd_sweep(const Options& o) {
    const ExperimentConfig cfg = load_experiment(o.config);
    if (cfg.experiment != "sweep") throw ConfigError("experiment", "expected sweep");
    const std::string out = o.out.empty() ? cfg.output_dir : o.out;
    const fs::path base = fs::path(o.config).has_parent_path() ? fs::path(o.config).parent_path() : fs::path(".");
    // Parse every member first so a bad entry fails before any run starts.
    std::vector<ExperimentConfig> members;
    for (std::size_t i = 0; i < cfg.runs.size(); ++i) {
        try {
            members.push_back(parse_experiment(cfg.runs[i], base.string()));
        } catch (const ConfigError& e) {
            throw ConfigError("runs[" + std::to_string(i) + "]." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
        }
        if (members.back().experiment != "simulate") throw ConfigError("runs[" + std::to_string(i) + "].experiment", "expected simulate");
    }
    std::vector<int> codes(members.size(), kOk);
    parallel_for(
        members.size(),
        [&](std::size_t i) {
            char dir[32];
            std::snprintf(dir, sizeof dir, "run_%03zu", i);
            codes[i] = simulate(members[i], (fs::path(out) / dir).string(), o.seed_given ? o.seed : members[i].seed);
        },
        o.workers);
    Json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["config_hash"] = config_hash(cfg.source);
    summary["runs"] = Json::array();
    for (std::size_t i = 0; i < members.size(); ++i)
        summary["runs"].push_back({{"index", i}, {"config_hash", config_hash(members[i].source)}, {"exit_code", codes[i]}});
    write_text_file((fs::path(out) / "sweep.json").string(), dump(summary));
    return *std::max_element(codes.begin(), codes.end());
}

int cmd_certify(const Options& o, const std::string& barrier_path, const std::string& mode_name) {
    if (mode_name != "super" && mode_name != "sub") throw ConfigError("mode", "expected super or sub");
    const BarrierMode mode = mode_name == "super" ? BarrierMode::super : BarrierMode::sub;
    if (!(o.quad_scale >= 1.0)) throw ConfigError("quad-scale", "must be at least 1");
    std::vector<Json> barriers;
    Json source;
    if (!barrier_path.empty()) {
        source = read_json_file(barrier_path);
        barriers.push_back(source);
    } else {
        const ExperimentConfig cfg = load_experiment(o.config);
        if (cfg.experiment != "certify") throw ConfigError("experiment", "expected certify");
        if (cfg.barriers.empty()) throw ConfigError("barriers", "missing");
        barriers = cfg.barriers;
        source = cfg.source;
    }
    const std::string hash = config_hash(source);
    const std::string out = o.out.empty() ? "out" : o.out;
    int code = kOk;
    for (std::size_t i = 0; i < barriers.size(); ++i) {
        const LoadedBarrier lb = barrier_from_json(barriers[i], "barrier");
        const Barrier& b = *lb.barrier;
        const QuadratureScheme scheme = QuadratureScheme::make(b.s(), b.dimension()).refined(o.quad_scale);
        const SamplingPlan plan;
        const ResidualReport rep = certify(b, lb.reaction, mode, plan, o.quad_scale != 1.0 ? &scheme : nullptr);

        // Seeded spot check at points off the certification plan.
        const std::vector<double> times = plan_times(b, plan);
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        int violations = 0;
        const int spots = 32;
        for (int k = 0; k < spots; ++k) {
            const double t = times.front() * std::pow(times.back() / times.front(), U(rng));
            const std::vector<double> zs = b.sample_points(t, 64);
            const double z = zs[static_cast<std::size_t>(U(rng) * static_cast<double>(zs.size())) % zs.size()];
            const Residual r = residual_at(b, lb.reaction, t, z, scheme);
            lo = std::min(lo, r.value);
            hi = std::max(hi, r.value);
            if (mode == BarrierMode::super ? r.value < -rep.tolerance : r.value > rep.tolerance) ++violations;
        }

        Json j = report_to_json(rep);
        j["config_hash"] = hash;
        j["quad_scale"] = o.quad_scale;
        j["barrier"] = barriers[i];
        j["spot_check"] = {{"seed", o.seed}, {"points", spots}, {"min_residual", lo}, {"max_residual", hi}, {"violations", violations}};
        const std::string name = barriers.size() == 1 ? "report.json" : "report_" + std::to_string(i) + ".json";
        write_text_file((fs::path(out) / name).string(), dump(j));
        const Verdict wanted = mode == BarrierMode::super ? Verdict::certified_super : Verdict::certified_sub;
        std::printf("%s %s: %s (min %.6g, max %.6g)\n", b.id().c_str(), mode_name.c_str(), to_string(rep.verdict),
                    rep.min_residual, rep.max_residual);
        if (rep.verdict != wanted) code = kConstruction;
    }
    return code;
}

int cmd_bump(const Options& o, double theta, double theta0, double s, int d, const std::string& shape) {
    ReactionSpec f;
    try {
        f = make_ignition(theta0, shape);
    } catch (const ContractError& e) {
        throw ConfigError("theta0", e.what());
    }
    BumpProfile b;
    try {
        b = build_bump(theta, s, f, d);
    } catch (const ContractError& e) {
        throw ConfigError("theta", e.what());
    }
    Json j = bump_to_json(b, f);
    Json echo = {{"theta", theta}, {"theta0", theta0}, {"s", s}, {"dimension", d}, {"shape", shape}};
    j["config_hash"] = config_hash(echo);
    const std::string out = o.out.empty() ? "out" : o.out;
    write_text_file((fs::path(out) / "bump.json").string(), dump(j));
    std::printf("bump theta=%g s=%g d=%d: margin %.6g, %d lift doublings\n", theta, s, d, b.epsilon, b.lift_doublings);
    return kOk;
}

int cmd_fit(const Options& o, const std::string& series_path, const std::string& law, std::vector<double> window) {
    std::ifstream in(series_path);
    if (!in) throw ConfigError("series", "cannot open " + series_path);
    std::vector<double> t, xu, xo;
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "t,x_under,x_over") throw ConfigError("series line " + std::to_string(lineno), "expected header t,x_under,x_over");
            header = true;
            continue;
        }
        double a, b, c;
        std::istringstream ls(line);
        std::string fa, fb, fc;
        if (!std::getline(ls, fa, ',') || !std::getline(ls, fb, ',') || !std::getline(ls, fc))
            throw ConfigError("series line " + std::to_string(lineno), "expected three columns");
        try {
            a = std::stod(fa);
            b = fb == "nan" ? std::nan("") : std::stod(fb);
            c = fc == "nan" ? std::nan("") : std::stod(fc);
        } catch (const std::exception&) {
            throw ConfigError("series line " + std::to_string(lineno), "not a number");
        }
        t.push_back(a);
        xu.push_back(b);
        xo.push_back(c);
    }
    if (t.empty()) throw ConfigError("series", "no data rows");
    if (law != "power" && law != "exponential") throw ConfigError("law", "expected power or exponential");
    FitWindow w = late_window(t.back());
    if (!window.empty()) {
        if (window.size() != 2 || !(window[0] < window[1])) throw ConfigError("window", "expected LO HI with LO < HI");
        w = {window[0], window[1]};
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["series"] = series_path;
    j["config_hash"] = config_hash({{"series", series_path}, {"law", law}, {"window", {w.lo, w.hi}}});
    j["law"] = law;
    j["window"] = {w.lo, w.hi};
    auto fit = law == "power" ? fit_power : fit_exponential;
    for (auto [name, x] : {std::pair<const char*, const std::vector<double>*>{"x_under", &xu}, {"x_over", &xo}}) {
        try {
            const FitResult r = fit(t, *x, w);
            j[name] = {{"exponent", r.slope}, {"amplitude", r.amplitude}, {"residual", r.residual}, {"samples", r.samples}};
            std::printf("%s: %s exponent %.6g (amplitude %.6g, %d samples)\n", name, law.c_str(), r.slope, r.amplitude, r.samples);
        } catch (const ContractError& e) {
            j[name] = {{"error", e.what()}};
        }
    }
    const std::string out = o.out.empty() ? "out" : o.out;
    write_text_file((fs::path(out) / "fit.json").string(), dump(j));
    write_text_file((fs::path(out) / "fit.gp").string(), plot_script({fs::absolute(series_path).string()}, law == "power"));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional reaction-diffusion barriers, certificates and front simulations"};
    app.require_subcommand(1);
    Options o;
    std::uint64_t seed = 0;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--workers", o.workers, "concurrent runs")->check(CLI::PositiveNumber);
        sub->add_option("--quad-scale", o.quad_scale, "quadrature resolution multiplier for re-checks");
        sub->add_option("--seed", seed, "seed for randomized sampling");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run the solver on a config and track level sets");
    sim->add_option("--config", o.config, "experiment JSON")->required();
    common(sim);

    std::string barrier_path, mode = "super";
    CLI::App* cert = app.add_subcommand("certify", "check a barrier's residual sign");
    auto* bopt = cert->add_option("--barrier", barrier_path, "barrier JSON");
    cert->add_option("--config", o.config, "experiment JSON with a barriers list")->excludes(bopt);
    cert->add_option("--mode", mode, "super or sub");
    common(cert);

    double theta = 0.0, theta0 = 0.0, s = 0.0;
    int d = 1;
    std::string shape = "quadratic_cap";
    CLI::App* bump = app.add_subcommand("bump", "construct a compactly supported stationary subsolution");
    bump->add_option("--theta", theta)->required();
    bump->add_option("--theta0", theta0, "ignition temperature")->required();
    bump->add_option("--s", s)->required();
    bump->add_option("--dimension", d)->check(CLI::Range(1, 2));
    bump->add_option("--shape", shape, "quadratic_cap or cubic_cap");
    common(bump);

    CLI::App* sweep = app.add_subcommand("sweep", "run several simulate configs concurrently");
    sweep->add_option("--config", o.config, "sweep JSON")->required();
    common(sweep);

    std::string series_path, law = "power";
    std::vector<double> window;
    CLI::App* fit = app.add_subcommand("fit", "fit a growth law to a series CSV");
    fit->add_option("--series", series_path, "CSV with t,x_under,x_over")->required();
    fit->add_option("--law", law, "power or exponential");
    fit->add_option("--window", window, "time window LO HI")->expected(2);
    common(fit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfig;
    }
    o.seed = seed;
    o.seed_given = app.get_subcommands().front()->count("--seed") > 0;

    try {
        if (app.got_subcommand(sim)) return cmd_simulate(o);
        if (app.got_subcommand(sweep)) return cmd_sweep(o);
        if (app.got_subcommand(cert)) {
            if (barrier_path.empty() && o.config.empty()) throw ConfigError("barrier", "give --barrier or --config");
            return cmd_certify(o, barrier_path, mode);
        }
        if (app.got_subcommand(bump)) return cmd_bump(o, theta, theta0, s, d, shape);
        if (app.got_subcommand(fit)) return cmd_fit(o, series_path, law, window);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const ContractError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kConfig;
    } catch (const WindowError& e) {
        std::fprintf(stderr, "empty window: %s\n", e.what());
        return kWindow;
    } catch (const StabilityError& e) {
        std::fprintf(stderr, "stability failure: %s\n", e.what());
        return kStability;
    } catch (const ConstructionError& e) {
        std::fprintf(stderr, "construction failed: %s (worst at x = %.6g, value %.6g)\n", e.what(), e.worst_x(),
                     e.worst_value());
        return kConstruction;
    }
    return kConfig;
}
