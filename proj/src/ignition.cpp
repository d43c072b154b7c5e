#include "fraclab/ignition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fraclab/errors.hpp"

namespace fraclab {

const char* to_string(BarrierMode mode) { return mode == BarrierMode::super ? "super" : "sub"; }

double Barrier::time_derivative(double t, double z) const {
    const double h = 1e-4 * t;
    // Hold the absolute position fixed while the local frame moves.
    const double zp = z + origin(t) - origin(t + h);
    const double zm = z + origin(t) - origin(t - h);
    return (value(t + h, zp) - value(t - h, zm)) / (2.0 * h);
}

namespace {

void require_ignition_args(int k, double s) {
    if (k < 1) throw ContractError("ignition barrier: k must be >= 1");
    if (!(s > 0.0 && s < 0.5)) throw ContractError("ignition barrier: construction requires 0 < s < 1/2");
}

}  // namespace

IgnitionSequences build_sequences(int k, double s) {
    require_ignition_args(k, s);
    const double q = 2.0 * s;
    IgnitionSequences seq;
    seq.alphas.assign(k + 1, 0.0);
    seq.betas.assign(k + 1, 1.0);
    for (int n = 1; n <= k; ++n) {
        double a = 0.0;
        double power = 1.0;
        for (int j = 1; j <= n; ++j) {
            a += (k - n + j) * power;
            power *= q;
        }
        seq.alphas[n] = a;
        seq.betas[n] = std::exp2(-a);
    }

    const double cap = 1.0 / ((1.0 - q) * (1.0 - q));
    if (!(seq.alphas[k] <= cap)) throw ConsistencyError("build_sequences: alpha_k exceeds 1/(1-2s)^2");
    double sum = 0.0;
    for (int n = 1; n <= k; ++n) sum += seq.betas[n];
    if (!(sum <= 1.0)) throw ConsistencyError("build_sequences: sum of betas exceeds 1");
    for (int n = 1; n <= k; ++n) {
        // beta_n = 2^{-k+n-1} beta_{n-1}^{2s}, compared in exponent space.
        const double rhs = (k - n + 1) + q * seq.alphas[n - 1];
        if (std::abs(seq.alphas[n] - rhs) > 1e-12 * std::max(1.0, rhs))
            throw ConsistencyError("build_sequences: recurrence fails at n = " + std::to_string(n));
    }
    return seq;
}

TimeWindow ignition_window(int k, double s) {
    require_ignition_args(k, s);
    TimeWindow w;
    w.lo = std::exp2(k / (1.0 - 2.0 * s));
    w.hi = std::exp2(std::pow(2.0 * s, -k));
    return w;
}

double sequence_gap_log2(const IgnitionSequences& seq, int n, double s, double t) {
    if (n < 1 || n >= static_cast<int>(seq.alphas.size())) throw ContractError("sequence_gap_log2: n out of range");
    const double q = 2.0 * s;
    const double lt = std::log2(t);
    return -seq.alphas[n] + seq.alphas[n - 1] - 1.0 + (std::pow(q, n - 1) - std::pow(q, n)) * lt;
}

double ramp_constant(double s) {
    if (!(s > 0.0 && s < 0.5)) throw ContractError("ramp_constant: s must lie in (0, 1/2)");
    const double cs = calibrate_constant(s, 1);
    return std::max(cs / (2.0 * s * (1.0 - 2.0 * s)), 1.0);
}

IgnitionSuperBarrier build_supersolution(int k, double s, const ReactionSpec& f) {
    require_ignition_args(k, s);
    if (f.kind() != ReactionKind::ignition) throw ContractError("build_supersolution: reaction must be of ignition type");
    const TimeWindow w = ignition_window(k, s);
    if (w.empty()) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "build_supersolution: window (%.6g, %.6g) is empty for k=%d, s=%g", w.lo, w.hi, k, s);
        throw WindowError(buf, w.lo, w.hi);
    }
    IgnitionSequences seq = build_sequences(k, s);

    IgnitionSuperBarrier b;
    b.k = k;
    b.s_value = s;
    b.theta0 = f.theta0();
    b.theta_star = 0.5 * f.theta0();
    b.alphas = seq.alphas;
    b.betas = seq.betas;
    b.thetas.resize(k + 2);
    b.thetas[0] = 1.0;
    for (int n = 0; n <= k; ++n) b.thetas[n + 1] = (1.0 - std::exp2(-k + n - 1)) * b.theta_star;
    if (std::abs(b.thetas[k + 1] - 0.5 * b.theta_star) > 1e-15)
        throw ConsistencyError("build_supersolution: theta_k differs from theta_*/2");

    b.C_s = ramp_constant(s);
    b.gamma0 = std::pow(4.0 / b.theta_star, 1.0 / s);
    b.gamma1 = std::exp2(1.0 + 1.0 / ((1.0 - 2.0 * s) * (1.0 - 2.0 * s)));
    b.f_sup = f.sup_norm();
    b.c_star = std::max({b.C_s + 2.0 * b.f_sup, std::pow(b.C_s * b.gamma0, 1.0 / s),
                         std::pow(b.C_s * b.gamma0 * std::pow(b.gamma1, 2.0 * s), 2.0)});
    b.validity = w;
    return b;
}

std::string IgnitionSuperBarrier::id() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "ignition_super_k%d_s%g_theta0%g", k, s_value, theta0);
    return buf;
}

void IgnitionSuperBarrier::require_time(double t) const {
    if (!validity.contains(t)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "ignition barrier: t = %g outside the window (%g, %g)", t, validity.lo, validity.hi);
        throw ContractError(buf);
    }
}

double IgnitionSuperBarrier::origin(double t) const { return c_star * std::pow(t, 1.0 / (2.0 * s_value)); }

double IgnitionSuperBarrier::l(int n, double t) const {
    double sum = 0.0;
    for (int j = 0; j <= n; ++j) sum += betas[j] * std::pow(t, 1.0 / (2.0 * s_value) - std::pow(2.0 * s_value, j));
    return sum;
}

double IgnitionSuperBarrier::l_dot(int n, double t) const {
    double sum = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double p = 1.0 / (2.0 * s_value) - std::pow(2.0 * s_value, j);
        sum += betas[j] * p * std::pow(t, p - 1.0);
    }
    return sum;
}

double IgnitionSuperBarrier::tail_a() const { return std::pow(thetas[k + 1], -1.0 / (2.0 * s_value)); }

double IgnitionSuperBarrier::tail_b(double t) const {
    return std::pow(c_star, -0.5) * std::pow(t, -1.0 / (2.0 * s_value));
}

namespace {

// Phi at local position z given the junctions l_0..l_k at a fixed time.
double phi_local(const std::vector<double>& ls, const std::vector<double>& thetas, double a, double b, double q,
                 double z) {
    if (z <= 0.0) return 1.0;
    const auto it = std::lower_bound(ls.begin(), ls.end(), z);
    if (it == ls.end()) return std::pow(a + b * (z - ls.back()), -q);
    const std::size_t n = static_cast<std::size_t>(it - ls.begin());
    const double prev = n == 0 ? 0.0 : ls[n - 1];
    return thetas[n] - (thetas[n] - thetas[n + 1]) * (z - prev) / (*it - prev);
}

}  // namespace

double IgnitionSuperBarrier::value(double t, double z) const {
    require_time(t);
    std::vector<double> ls(k + 1);
    for (int n = 0; n <= k; ++n) ls[n] = l(n, t);
    return phi_local(ls, thetas, tail_a(), tail_b(t), 2.0 * s_value, z);
}

double IgnitionSuperBarrier::time_derivative(double t, double z) const {
    require_time(t);
    if (z <= 0.0) return 0.0;
    const double q = 2.0 * s_value;
    const double o_dot = c_star / q * std::pow(t, 1.0 / q - 1.0);
    double prev = 0.0;
    double prev_dot = 0.0;
    for (int n = 0; n <= k; ++n) {
        const double ln = l(n, t);
        const double ln_dot = l_dot(n, t);
        if (z <= ln) {
            // L = hi - (hi - lo) (z - l_{n-1}) / (l_n - l_{n-1}) with dz/dt = -o'.
            const double drop = thetas[n] - thetas[n + 1];
            const double span = ln - prev;
            const double num = (-o_dot - prev_dot) * span - (z - prev) * (ln_dot - prev_dot);
            return -drop * num / (span * span);
        }
        prev = ln;
        prev_dot = ln_dot;
    }
    const double y = z - prev;
    const double B = tail_b(t);
    const double dB = -B / (q * t);
    const double dy = -o_dot - prev_dot;
    return -q * std::pow(tail_a() + B * y, -q - 1.0) * (dB * y + B * dy);
}

Profile IgnitionSuperBarrier::profile_at(double t) const {
    require_time(t);
    std::vector<double> ls(k + 1);
    for (int n = 0; n <= k; ++n) ls[n] = l(n, t);
    std::vector<double> kinks{0.0};
    kinks.insert(kinks.end(), ls.begin(), ls.end());
    const double a = tail_a();
    const double b = tail_b(t);
    const double q = 2.0 * s_value;
    Profile p = Profile::line([ls, th = thetas, a, b, q](double z) { return phi_local(ls, th, a, b, q, z); },
                              Tail{1.0}, Tail{0.0, std::pow(c_star, s_value) * t, q});
    p.with_kinks(kinks).with_scales(ls[0], a / b);
    return p;
}

std::vector<double> IgnitionSuperBarrier::junctions(double t) const {
    std::vector<double> j{0.0};
    for (int n = 0; n <= k; ++n) j.push_back(l(n, t));
    return j;
}

std::vector<double> IgnitionSuperBarrier::sample_points(double t, int count) const {
    std::vector<double> pts;
    const double lk = l(k, t);
    const double l0 = l(0, t);
    const int behind = std::max(1, count / 8);
    const int middle = std::max(k + 1, count / 2);
    const int tail = std::max(1, count - behind - middle);
    auto logspace = [](double a, double b, int i, int n) { return a * std::pow(b / a, n > 1 ? double(i) / (n - 1) : 0.0); };
    for (int i = 0; i < behind; ++i) pts.push_back(-logspace(1e-3 * l0, 100.0 * lk, i, behind));
    const int per = middle / (k + 1);
    double prev = 0.0;
    for (int n = 0; n <= k; ++n) {
        const double ln = l(n, t);
        const int m = n == k ? middle - per * k : per;
        for (int i = 0; i < m; ++i) pts.push_back(prev + (ln - prev) * (i + 0.5) / m);
        prev = ln;
    }
    const double outer = tail_a() / tail_b(t);
    for (int i = 0; i < tail; ++i) pts.push_back(lk + logspace(1e-3 * lk, 1e3 * outer, i, tail));
    std::sort(pts.begin(), pts.end());
    return pts;
}

double IgnitionSuperBarrier::level_local(double t, double lambda) const {
    require_time(t);
    if (!(lambda > 0.0 && lambda <= 1.0)) throw ContractError("level_local: lambda must lie in (0, 1]");
    double prev = 0.0;
    for (int n = 0; n <= k; ++n) {
        const double ln = l(n, t);
        if (lambda >= thetas[n + 1]) {
            const double hi = thetas[n];
            const double lo = thetas[n + 1];
            if (lambda >= hi) return prev;
            return prev + (hi - lambda) / (hi - lo) * (ln - prev);
        }
        prev = ln;
    }
    return prev + (std::pow(lambda, -1.0 / (2.0 * s_value)) - tail_a()) / tail_b(t);
}

double IgnitionSuperBarrier::level_bound(double t, double lambda) const {
    const double q = 2.0 * s_value;
    return (c_star + 2.0 + std::sqrt(c_star) * std::pow(lambda, -1.0 / q)) * std::pow(t, 1.0 / q);
}

}  // namespace fraclab
