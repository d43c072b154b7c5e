#include "fraclab/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash(const Json& j) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
    return buf;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), "malformed JSON");
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_json(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.field(), "malformed JSON");
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

// ---------------------------------------------------------------------------

StrictObject::StrictObject(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
}

std::string StrictObject::path_of(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool StrictObject::has(const std::string& key) const { return j_.contains(key); }

const Json& StrictObject::at(const std::string& key) const {
    if (!j_.contains(key)) throw ConfigError(path_of(key), "missing");
    used_.insert(key);
    return j_.at(key);
}

double StrictObject::number(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_number()) throw ConfigError(path_of(key), "expected a number");
    return v.get<double>();
}

double StrictObject::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int StrictObject::integer(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(path_of(key), "expected an integer");
    return v.get<int>();
}

int StrictObject::integer(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::string StrictObject::string(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_string()) throw ConfigError(path_of(key), "expected a string");
    return v.get<std::string>();
}

std::string StrictObject::string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
}

bool StrictObject::boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(path_of(key), "expected true or false");
    return v.get<bool>();
}

std::vector<double> StrictObject::numbers(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_array()) throw ConfigError(path_of(key), "expected an array of numbers");
    std::vector<double> out;
    for (const Json& e : v) {
        if (!e.is_number()) throw ConfigError(path_of(key), "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

void StrictObject::finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
        if (!used_.count(it.key())) throw ConfigError(path_of(it.key()), "unknown field");
}

// ---------------------------------------------------------------------------

Json reaction_to_json(const ReactionSpec& f) {
    Json j;
    j["kind"] = to_string(f.kind());
    j["theta0"] = f.theta0();
    switch (f.kind()) {
        case ReactionKind::ignition:
            j["shape"] = f.shape();
            break;
        case ReactionKind::alpha_monostable:
            j["alpha"] = f.alpha();
            j["gamma"] = f.gamma();
            j["gamma_prime"] = f.gamma_prime();
            break;
        case ReactionKind::kpp:
            j["rate"] = f.gamma_prime();
            break;
        case ReactionKind::bistable:
            break;
    }
    return j;
}

ReactionSpec reaction_from_json(const Json& j, const std::string& path) {
    const StrictObject o(j, path);
    const std::string kind = o.string("kind");
    ReactionSpec f;
    try {
        switch (reaction_kind_from_string(kind)) {
            case ReactionKind::ignition:
                f = make_ignition(o.number("theta0"), o.string("shape", "quadratic_cap"));
                break;
            case ReactionKind::alpha_monostable:
                f = make_alpha_monostable(o.number("alpha"), o.number("gamma", 1.0), o.number("gamma_prime", 1.0),
                                          o.number("theta0"));
                break;
            case ReactionKind::kpp:
                f = make_kpp(o.number("rate", 1.0), o.number("theta0", 0.5));
                break;
            case ReactionKind::bistable:
                f = make_bistable(o.number("theta0"));
                break;
        }
    } catch (const ContractError& e) {
        throw ConfigError(path, e.what());
    }
    o.finish();
    return f;
}

namespace {

Json header(Json j) {
    j["schema_version"] = kSchemaVersion;
    return j;
}

void check_schema(const StrictObject& o) {
    if (o.has("schema_version") && o.integer("schema_version") != kSchemaVersion)
        throw ConfigError(o.path_of("schema_version"), "unsupported schema version");
    if (o.has("config_hash")) o.string("config_hash");
}

Json window_json(const TimeWindow& w) {
    Json j;
    j["lo"] = w.lo;
    j["hi"] = std::isfinite(w.hi) ? Json(w.hi) : Json("inf");
    j["closed_lo"] = w.closed_lo;
    return j;
}

}  // namespace

Json barrier_to_json(const IgnitionSuperBarrier& b, const ReactionSpec& f) {
    Json j;
    j["kind"] = b.kind();
    j["k"] = b.k;
    j["s"] = b.s_value;
    j["reaction"] = reaction_to_json(f);
    Json d;
    d["id"] = b.id();
    d["window"] = window_json(b.window());
    d["c_star"] = b.c_star;
    d["C_s"] = b.C_s;
    d["theta_star"] = b.theta_star;
    d["thetas"] = b.thetas;
    d["alphas"] = b.alphas;
    d["betas"] = b.betas;
    j["derived"] = d;
    return header(j);
}

Json barrier_to_json(const SelfSimilarSub& b, const ReactionSpec& f) {
    Json j;
    j["kind"] = b.kind();
    j["theta"] = b.bump().theta;
    j["s"] = b.s();
    j["dimension"] = b.dimension();
    j["reaction"] = reaction_to_json(f);
    Json d;
    d["id"] = b.id();
    d["window"] = window_json(b.window());
    d["b"] = b.b();
    d["epsilon"] = b.bump().epsilon;
    d["support"] = b.bump().support_end;
    d["lipschitz"] = b.bump().lipschitz;
    j["derived"] = d;
    return header(j);
}

Json barrier_to_json(const MonostableSub& b, const ReactionSpec& f) {
    Json j;
    j["kind"] = b.kind();
    j["theta"] = b.theta;
    j["s"] = b.s_value;
    j["dimension"] = b.d;
    j["reaction"] = reaction_to_json(f);
    j["T_theta"] = b.T_theta;
    j["T_certified"] = b.T_certified;
    Json d;
    d["id"] = b.id();
    d["beta"] = b.beta;
    d["kappa"] = b.kappa;
    d["nu"] = b.nu;
    d["tau"] = b.tau;
    d["delta"] = b.delta;
    d["a1"] = b.a1;
    d["a2"] = b.a2;
    d["a3"] = b.a3;
    d["theta1"] = b.theta1;
    d["theta2"] = b.theta2;
    d["c_far"] = b.far_field.c_far;
    d["C_far"] = b.far_field.C_far;
    d["tau0"] = b.far_field.tau0;
    j["derived"] = d;
    return header(j);
}

LoadedBarrier barrier_from_json(const Json& j, const std::string& path) {
    const StrictObject o(j, path);
    check_schema(o);
    const std::string kind = o.string("kind");
    LoadedBarrier out;
    out.reaction = reaction_from_json(o.at("reaction"), o.path_of("reaction"));
    if (o.has("derived")) o.at("derived");
    try {
        if (kind == "ignition_super") {
            out.barrier = std::make_unique<IgnitionSuperBarrier>(
                build_supersolution(o.integer("k"), o.number("s"), out.reaction));
        } else if (kind == "ignition_self_similar_sub") {
            out.barrier = std::make_unique<SelfSimilarSub>(
                build_bump(o.number("theta"), o.number("s"), out.reaction, o.integer("dimension", 1)));
        } else if (kind == "monostable_sub") {
            auto m = std::make_unique<MonostableSub>(
                build_monostable_sub(o.number("theta"), out.reaction, o.number("s"), o.integer("dimension", 1)));
            m->T_theta = o.number("T_theta", 1.0);
            m->T_certified = o.boolean("T_certified", false);
            out.barrier = std::move(m);
        } else {
            throw ConfigError(o.path_of("kind"), "unknown barrier kind '" + kind + "'");
        }
    } catch (const ContractError& e) {
        throw ConfigError(path, e.what());
    }
    o.finish();
    return out;
}

Json bump_to_json(const BumpProfile& b, const ReactionSpec& f) {
    Json j;
    j["kind"] = "bump";
    j["theta"] = b.theta;
    j["s"] = b.s;
    j["dimension"] = b.dimension;
    j["reaction"] = reaction_to_json(f);
    Json d;
    d["theta0_prime"] = b.theta0_prime;
    d["N"] = b.N;
    d["breakpoints"] = b.breakpoints;
    d["slopes"] = b.slopes;
    d["intercepts"] = b.intercepts;
    d["R_prime"] = b.R_prime;
    d["sup_operator"] = b.sup_operator;
    d["delta"] = b.delta;
    d["scale_r"] = b.scale_r;
    d["mollify_width"] = b.mollify_width;
    d["mollify_retries"] = b.mollify_retries;
    d["line_margin"] = b.line_margin;
    d["lift_shift"] = b.lift_shift;
    d["lift_doublings"] = b.lift_doublings;
    d["R_theta"] = b.R_theta;
    d["lipschitz"] = b.lipschitz;
    d["margin"] = b.epsilon;
    j["derived"] = d;
    return header(j);
}

Json report_to_json(const ResidualReport& r) {
    Json j;
    j["barrier_id"] = r.barrier_id;
    j["mode"] = r.mode == BarrierMode::super ? "super" : "sub";
    j["verdict"] = to_string(r.verdict);
    j["tolerance"] = r.tolerance;
    j["min_residual"] = r.min_residual;
    j["max_residual"] = r.max_residual;
    j["unresolved"] = r.unresolved;
    j["samples"] = r.samples.size();
    j["time_samples"] = r.time_samples;
    j["worst"] = {{"t", r.worst.t}, {"z", r.worst.z}, {"residual", r.worst.residual}, {"error", r.worst.error}};
    return header(j);
}

// ---------------------------------------------------------------------------

namespace {

InitialCondition initial_from_json(const Json& j, const std::string& path, const SolverConfig& c) {
    const StrictObject o(j, path);
    const std::string kind = o.string("kind");
    InitialCondition ic;
    if (kind == "front") {
        ic = InitialCondition::front(o.number("theta"), o.number("R"));
    } else if (kind == "ball") {
        ic = InitialCondition::ball(o.number("theta"), o.number("R_inner"), o.number("R"));
    } else if (kind == "bump") {
        try {
            ic = InitialCondition::from_bump(build_bump(o.number("theta"), c.s, c.reaction, c.dimension));
        } catch (const ContractError& e) {
            throw ConfigError(path, e.what());
        }
    } else {
        throw ConfigError(o.path_of("kind"), "expected front, ball or bump");
    }
    o.finish();
    return ic;
}

std::vector<double> schedule_from_json(const Json& j, const std::string& path, double t_final) {
    if (j.is_array()) {
        std::vector<double> out;
        for (const Json& e : j) {
            if (!e.is_number()) throw ConfigError(path, "expected numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    const StrictObject o(j, path);
    const int count = o.integer("count");
    const std::string spacing = o.string("spacing", "linear");
    if (count < 1) throw ConfigError(o.path_of("count"), "must be positive");
    std::vector<double> out;
    if (spacing == "linear") {
        for (int i = 1; i <= count; ++i) out.push_back(t_final * i / count);
    } else if (spacing == "log") {
        const double first = o.number("first");
        if (!(first > 0.0 && first < t_final)) throw ConfigError(o.path_of("first"), "must lie in (0, t_final)");
        for (int i = 0; i < count; ++i)
            out.push_back(i + 1 == count ? t_final : first * std::pow(t_final / first, static_cast<double>(i) / (count - 1)));
    } else {
        throw ConfigError(o.path_of("spacing"), "expected linear or log");
    }
    o.finish();
    return out;
}

SolverConfig solver_from_json(const Json& j, const std::string& path) {
    const StrictObject o(j, path);
    SolverConfig c;
    c.s = o.number("s");
    c.dimension = o.integer("dimension", 1);
    c.half_width = o.number("half_width");
    const int n = o.integer("points_per_axis");
    if (n <= 0) throw ConfigError(o.path_of("points_per_axis"), "must be positive");
    c.points_per_axis = static_cast<std::size_t>(n);
    c.dt_initial = o.number("dt_initial");
    c.t_final = o.number("t_final");
    c.reaction = reaction_from_json(o.at("reaction"), o.path_of("reaction"));
    c.front_amplitude = o.number("front_amplitude", 1.0);
    c.saturation_level = o.number("saturation_level", 0.1);
    c.output_times = schedule_from_json(o.at("output_times"), o.path_of("output_times"), c.t_final);
    c.store_fields = false;
    if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError(o.path_of("s"), "must lie in (0, 1)");
    c.initial = initial_from_json(o.at("initial_condition"), o.path_of("initial_condition"), c);
    o.finish();
    try {
        validate(c);
    } catch (const ConfigError& e) {
        std::string field = e.field();
        if (field.rfind("initial.", 0) == 0) field = "initial_condition." + field.substr(8);
        throw ConfigError(path + "." + field, std::string(e.what()).substr(e.field().size() + 2));
    }
    return c;
}

Json resolve_file(const Json& entry, const std::string& path, const std::string& base_dir) {
    if (entry.is_object() && entry.size() == 1 && entry.contains("file")) {
        if (!entry["file"].is_string()) throw ConfigError(path + ".file", "expected a path");
        fs::path p(entry["file"].get<std::string>());
        if (p.is_relative()) p = fs::path(base_dir) / p;
        if (!fs::exists(p)) throw ConfigError(path + ".file", "no such file: " + p.string());
        return read_json_file(p.string());
    }
    return entry;
}

}  // namespace

Json solver_to_json(const SolverConfig& c) {
    Json j;
    j["s"] = c.s;
    j["dimension"] = c.dimension;
    j["half_width"] = c.half_width;
    j["points_per_axis"] = c.points_per_axis;
    j["dt_initial"] = c.dt_initial;
    j["t_final"] = c.t_final;
    j["reaction"] = reaction_to_json(c.reaction);
    j["front_amplitude"] = c.front_amplitude;
    j["saturation_level"] = c.saturation_level;
    j["output_times"] = c.output_times;
    Json ic;
    ic["kind"] = to_string(c.initial.kind);
    ic["theta"] = c.initial.theta;
    if (c.initial.kind == InitialKind::ball) ic["R_inner"] = c.initial.R_inner;
    if (c.initial.kind != InitialKind::field) ic["R"] = c.initial.R;
    j["initial_condition"] = ic;
    return j;
}

ExperimentConfig parse_experiment(const Json& j, const std::string& base_dir) {
    const StrictObject o(j, "");
    ExperimentConfig cfg;
    cfg.source = j;
    cfg.schema_version = o.integer("schema_version");
    if (cfg.schema_version != kSchemaVersion)
        throw ConfigError("schema_version", "this build reads version " + std::to_string(kSchemaVersion));
    cfg.experiment = o.string("experiment");
    static const std::set<std::string> kinds = {"simulate", "certify", "bump", "sweep", "fit"};
    if (!kinds.count(cfg.experiment)) throw ConfigError("experiment", "unknown experiment '" + cfg.experiment + "'");
    if (o.has("seed")) {
        const Json& v = o.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError("seed", "expected a nonnegative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    cfg.output_dir = o.string("output_dir", "out");
    if (o.has("tracking")) {
        cfg.tracking = o.numbers("tracking");
        for (double l : cfg.tracking)
            if (!(l > 0.0 && l < 1.0)) throw ConfigError("tracking", "levels must lie in (0, 1)");
    }
    if (o.has("solver")) cfg.solver = solver_from_json(o.at("solver"), "solver");
    if (o.has("barriers")) {
        const Json& arr = o.at("barriers");
        if (!arr.is_array()) throw ConfigError("barriers", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = "barriers[" + std::to_string(i) + "]";
            Json b = resolve_file(arr[i], p, base_dir);
            barrier_from_json(b, p);  // parses and builds, so bad entries fail here
            cfg.barriers.push_back(std::move(b));
        }
    }
    if (o.has("runs")) {
        const Json& arr = o.at("runs");
        if (!arr.is_array()) throw ConfigError("runs", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.runs.push_back(resolve_file(arr[i], "runs[" + std::to_string(i) + "]", base_dir));
    }
    o.finish();
    if (cfg.experiment == "simulate" && !cfg.solver) throw ConfigError("solver", "missing");
    if (cfg.experiment == "sweep" && cfg.runs.empty()) throw ConfigError("runs", "missing");
    return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
    const Json j = read_json_file(path);
    const fs::path p(path);
    return parse_experiment(j, p.has_parent_path() ? p.parent_path().string() : ".");
}

std::string series_csv(const LevelSetSeries& s, const std::string& hash) {
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "# config_hash=%s schema_version=%d lambda=%.17g geometry=%s\n", hash.c_str(),
                  kSchemaVersion, s.lambda, to_string(s.geometry));
    out += buf;
    out += "t,x_under,x_over\n";
    auto num = [&](double v) {
        if (std::isnan(v)) return std::string("nan");
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < s.times.size(); ++i) out += num(s.times[i]) + "," + num(s.x_under[i]) + "," + num(s.x_over[i]) + "\n";
    return out;
}

}  // namespace fraclab
