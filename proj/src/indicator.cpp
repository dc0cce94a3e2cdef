#include "wenc/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wenc/errors.hpp"
#include "wenc/optical.hpp"
#include "wenc/threads.hpp"

namespace wenc {

namespace {

constexpr double kMagnitudeFloor = 1e-300;

void require_matching_nodes(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw DomainError(std::string(what) + ": node counts differ");
}

// Least squares for log|I| = -2 L tau + p log(tau) + c via the 3x3 normal
// equations; returns (L, p, c).
struct DecayModel {
    double L = 0.0, p = 0.0, c = 0.0;

    double at(double tau) const { return -2.0 * L * tau + p * std::log(tau) + c; }
};

DecayModel fit_decay_model(const std::vector<double>& taus, const std::vector<double>& logs,
                           std::size_t begin) {
    double ata[3][3] = {};
    double aty[3] = {};
    for (std::size_t i = begin; i < taus.size(); ++i) {
        double row[3] = {-2.0 * taus[i], std::log(taus[i]), 1.0};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) ata[a][b] += row[a] * row[b];
            aty[a] += row[a] * logs[i];
        }
    }
    // Gaussian elimination with partial pivoting on the 3x3 system.
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(ata[perm[r]][col]) > std::fabs(ata[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        double d = ata[perm[col]][col];
        if (d == 0.0) throw DomainError("decay fit is singular");
        for (int r = col + 1; r < 3; ++r) {
            double m = ata[perm[r]][col] / d;
            for (int cc = col; cc < 3; ++cc) ata[perm[r]][cc] -= m * ata[perm[col]][cc];
            aty[perm[r]] -= m * aty[perm[col]];
        }
    }
    double beta[3];
    for (int r = 2; r >= 0; --r) {
        double s = aty[perm[r]];
        for (int cc = r + 1; cc < 3; ++cc) s -= ata[perm[r]][cc] * beta[cc];
        beta[r] = s / ata[perm[r]][r];
    }
    return {beta[0], beta[1], beta[2]};
}

std::string monotonicity_tag(const MediumField& m) {
    if (!m.inclusion) return "none";
    switch (check_monotonicity(m)) {
        case Monotonicity::Plus: return "monotone-plus";
        case Monotonicity::Minus: return "monotone-minus";
        default: return "violated";
    }
}

} // namespace

std::vector<double> laplace_transform_traces(const TraceSet& tr, double tau) {
    if (!(tau >= 1.0)) throw DomainError("decay rate must be at least 1");
    std::size_t nodes = tr.quad.size();
    std::vector<double> out(nodes, 0.0);
    double z = std::exp(-tau * tr.dt);
    double zk = 1.0;
    for (long k = 0; k <= tr.steps; ++k) {
        double w = tr.dt * zk * ((k == 0 || k == tr.steps) ? 0.5 : 1.0);
        const double* row = tr.data.data() + static_cast<std::size_t>(k) * nodes;
        for (std::size_t q = 0; q < nodes; ++q) out[q] += w * row[q];
        zk *= z;
    }
    return out;
}

double indicator(const std::vector<double>& w_values, const std::vector<double>& v_values,
                 const SourceSpec& s, const QuadratureSet& source_quad, double tau) {
    if (!(tau >= 1.0)) throw DomainError("decay rate must be at least 1");
    require_matching_nodes(w_values.size(), source_quad.size(), "indicator");
    require_matching_nodes(v_values.size(), source_quad.size(), "indicator");
    double acc = 0.0;
    for (std::size_t q = 0; q < source_quad.size(); ++q)
        acc += source_quad.weights[q] * s.value_at(source_quad.nodes[q]) *
               (w_values[q] - v_values[q]);
    return acc;
}

double indicator_tilde(const TraceSet& tr_u, const TraceSet& tr_u0, const SourceSpec& s,
                       const QuadratureSet& source_quad, double tau) {
    if (!(tau >= 1.0)) throw DomainError("decay rate must be at least 1");
    require_matching_nodes(tr_u.quad.size(), tr_u0.quad.size(), "damped difference");
    require_matching_nodes(tr_u.quad.size(), source_quad.size(), "damped difference");
    if (tr_u.dt != tr_u0.dt) throw DomainError("damped difference: time steps differ");
    std::size_t nodes = source_quad.size();
    std::vector<double> fw(nodes);
    for (std::size_t q = 0; q < nodes; ++q)
        fw[q] = source_quad.weights[q] * s.value_at(source_quad.nodes[q]);
    long steps = std::min(tr_u.steps, tr_u0.steps);
    double z = std::exp(-tau * tr_u.dt);
    double zk = 1.0;
    double acc = 0.0;
    for (long k = 0; k <= steps; ++k) {
        double w = zk * ((k == 0 || k == steps) ? 0.5 : 1.0);
        const double* a = tr_u.data.data() + static_cast<std::size_t>(k) * nodes;
        const double* b = tr_u0.data.data() + static_cast<std::size_t>(k) * nodes;
        double plane = 0.0;
        for (std::size_t q = 0; q < nodes; ++q) plane += fw[q] * (a[q] - b[q]);
        acc += w * plane;
        zk *= z;
    }
    return tr_u.dt * acc;
}

SlopeFit extract_length(const IndicatorSeries& series, double residual_threshold) {
    std::size_t n = series.taus.size();
    if (n == 0 || series.values.size() != n)
        throw DomainError("series must carry one value per decay rate");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(series.taus[i] >= 1.0)) throw DomainError("decay rates must be at least 1");
        if (i + 1 < n && !(series.taus[i] < series.taus[i + 1]))
            throw DomainError("decay rates must be strictly increasing");
    }
    if (!(residual_threshold > 0.0)) throw DomainError("residual threshold must be positive");

    SlopeFit out;
    std::vector<double> taus, logs;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        double a = std::fabs(series.values[i]);
        if (std::isfinite(a) && a > kMagnitudeFloor) {
            kept.push_back(i);
            taus.push_back(series.taus[i]);
            logs.push_back(std::log(a));
        } else {
            out.dropped.push_back(i);
        }
    }
    if (kept.empty()) throw AllBelowFloor("every indicator value sits under the magnitude floor");

    for (std::size_t b = 0; b + 4 <= kept.size(); ++b) {
        DecayModel m = fit_decay_model(taus, logs, b);
        double ss = 0.0;
        for (std::size_t i = b; i < taus.size(); ++i) {
            double r = logs[i] - m.at(taus[i]);
            ss += r * r;
        }
        double rms = std::sqrt(ss / static_cast<double>(taus.size() - b));
        if (rms <= residual_threshold) {
            out.length = m.L;
            out.power = m.p;
            out.offset = m.c;
            out.rms = rms;
            out.window_begin = kept[b];
            out.window_size = taus.size() - b;
            return out;
        }
    }
    throw WindowEmpty("no suffix window of four or more points met the residual threshold");
}

SignReport sign_check(const IndicatorSeries& series, const std::string& tag,
                      std::size_t window_begin) {
    SignReport rep;
    rep.tag = tag;
    int want = 0;
    if (tag == "monotone-plus") want = -1;
    else if (tag == "monotone-minus") want = +1;
    if (want == 0) {
        rep.pass = true;
        return rep;
    }
    rep.pass = true;
    for (std::size_t i = window_begin; i < series.values.size(); ++i) {
        ++rep.checked;
        double v = series.values[i];
        bool ok = want < 0 ? v < 0.0 : v > 0.0;
        if (!ok && rep.pass) {
            rep.pass = false;
            rep.first_violation_tau = series.taus[i];
        }
    }
    return rep;
}

double kendall_tau(const std::vector<double>& values) {
    std::size_t n = values.size();
    if (n < 2) return 0.0;
    long score = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (values[j] > values[i]) ++score;
            else if (values[j] < values[i]) --score;
        }
    return static_cast<double>(score) / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

bool EnclosurePredicate::contains(const Point3& x) const {
    if (const TwoLayer* tl = std::get_if<TwoLayer>(&background)) {
        if (!(x.z < 0.0)) return false;
        double root_gp = std::sqrt(tl->gamma_plus);
        for (const ProbeResult& pr : probes)
            if (!(optical_distance(x, pr.p, *tl) > pr.length + pr.r / root_gp)) return false;
        return true;
    }
    for (const ProbeResult& pr : probes)
        if (!(norm(x - pr.p) > pr.length + pr.r)) return false;
    return true;
}

EnclosurePredicate enclosure(std::vector<ProbeResult> probes, const BackgroundSpec& background) {
    if (probes.empty()) throw DomainError("enclosure needs at least one probe");
    bool layered = std::holds_alternative<TwoLayer>(background);
    for (const ProbeResult& pr : probes) {
        if (!(pr.length > 0.0)) throw DomainError("probe lengths must be positive");
        if (!(pr.r >= 0.0)) throw DomainError("probe radii must be nonnegative");
        if (layered && !(pr.p.z > 0.0))
            throw DomainError("layered probes must sit above the interface");
    }
    if (layered) {
        const TwoLayer& tl = std::get<TwoLayer>(background);
        if (!(tl.gamma_plus > 0.0) || !(tl.gamma_minus > 0.0))
            throw DomainError("layer coefficients must be positive");
    }
    EnclosurePredicate pred;
    pred.probes = std::move(probes);
    pred.background = background;
    return pred;
}

std::vector<Point3> sample_enclosure_boundary(const EnclosurePredicate& pred, const Point3& anchor,
                                              double r_max, int directions) {
    if (!(r_max > 0.0)) throw DomainError("march radius must be positive");
    if (directions < 1) throw DomainError("need at least one direction");
    if (!pred.contains(anchor)) throw DomainError("anchor must satisfy the predicate");
    std::vector<Point3> out;
    out.reserve(static_cast<std::size_t>(directions));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const int coarse = 256;
    for (int d = 0; d < directions; ++d) {
        double zc = 1.0 - 2.0 * (d + 0.5) / directions;
        double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        double phi = golden * d;
        Vec3 dir{rho * std::cos(phi), rho * std::sin(phi), zc};
        double lo = 0.0, hi = -1.0;
        for (int s = 1; s <= coarse; ++s) {
            double t = r_max * static_cast<double>(s) / coarse;
            if (!pred.contains(anchor + dir * t)) {
                hi = t;
                break;
            }
            lo = t;
        }
        if (hi < 0.0) continue; // open direction, no boundary within reach
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            if (pred.contains(anchor + dir * mid)) lo = mid;
            else hi = mid;
        }
        out.push_back(anchor + dir * (0.5 * (lo + hi)));
    }
    return out;
}

std::vector<double> log_spaced_taus(double lo, double hi, int n) {
    if (!(lo >= 1.0) || !(hi > lo)) throw DomainError("decay-rate range must satisfy 1 <= lo < hi");
    if (n < 2) throw DomainError("need at least two decay rates");
    std::vector<double> out(static_cast<std::size_t>(n));
    double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

PipelineResult run_probe_pipeline(const PipelineConfig& cfg) {
    std::vector<std::string> problems = validate(cfg.medium, cfg.source.region);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    if (!(cfg.T > 0.0)) throw DomainError("observation time must be positive");
    std::vector<double> taus = cfg.taus.empty() ? log_spaced_taus(2.0, 16.0, 16) : cfg.taus;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] >= 1.0)) throw DomainError("decay rates must be at least 1");
        if (i + 1 < taus.size() && !(taus[i] < taus[i + 1]))
            throw DomainError("decay rates must be strictly increasing");
    }

    PipelineResult res;
    res.tag = monotonicity_tag(cfg.medium);
    res.grid = build_wave_grid(cfg.medium, cfg.source.region, cfg.T, cfg.h, cfg.cfl_safety,
                               cfg.pad_slack);
    const GridSpec& g = res.grid;
    QuadratureSet quad = grid_aligned_quadrature(g, cfg.source.region);

    long K = g.steps;
    double horizon = cfg.tail_horizon < 0.0 ? cfg.T : cfg.tail_horizon;
    long M = std::lround(horizon / g.dt);
    GridSpec g0 = g;
    g0.steps = K + M;

    SimOptions opts;
    opts.threads = cfg.threads;
    SimResult with_inclusion = simulate(cfg.medium, cfg.source, g, quad, opts);
    MediumField background_only;
    background_only.background = cfg.medium.background;
    SimOptions opts0 = opts;
    opts0.causality_horizon = cfg.T; // the extension deliberately records reflections
    SimResult background = simulate(background_only, cfg.source, g0, quad, opts0);

    std::size_t nodes = quad.size();
    std::vector<double> fw(nodes);
    double f_norm_sq = 0.0;
    for (std::size_t q = 0; q < nodes; ++q) {
        double fv = cfg.source.value_at(quad.nodes[q]);
        fw[q] = quad.weights[q] * fv;
        f_norm_sq += quad.weights[q] * fv * fv;
    }
    if (!(f_norm_sq > 0.0)) throw DomainError("source vanishes on every grid cell");
    res.f_norm_sq = f_norm_sq;

    // Project the traces onto f once; every decay rate reuses the result.
    const TraceSet& tu = with_inclusion.traces;
    const TraceSet& t0 = background.traces;
    std::vector<double> proj_diff(static_cast<std::size_t>(K) + 1, 0.0);
    std::vector<double> proj_bg(static_cast<std::size_t>(K + M) + 1, 0.0);
    parallel_slabs(K + M + 1, cfg.threads, [&](long lo, long hi) {
        for (long k = lo; k < hi; ++k) {
            const double* b = t0.data.data() + static_cast<std::size_t>(k) * nodes;
            double sb = 0.0;
            for (std::size_t q = 0; q < nodes; ++q) sb += fw[q] * b[q];
            proj_bg[static_cast<std::size_t>(k)] = sb;
            if (k <= K) {
                const double* a = tu.data.data() + static_cast<std::size_t>(k) * nodes;
                double sd = 0.0;
                for (std::size_t q = 0; q < nodes; ++q) sd += fw[q] * (a[q] - b[q]);
                proj_diff[static_cast<std::size_t>(k)] = sd;
            }
        }
    });

    std::vector<double> standard_vals(taus.size()), tilde_vals(taus.size()), equiv(taus.size());
    for (std::size_t t = 0; t < taus.size(); ++t) {
        double tau = taus[t];
        double z = std::exp(-tau * g.dt);
        double zk = 1.0;
        double tilde = 0.0;
        for (long k = 1; k <= K; ++k) {
            zk *= z;
            tilde += zk * proj_diff[static_cast<std::size_t>(k)] * (k == K ? 0.5 : 1.0);
        }
        tilde *= g.dt;
        // Tail of the background damping integral past T: the standard
        // indicator equals the tilde one minus this series.
        double tail = 0.5 * zk * proj_bg[static_cast<std::size_t>(K)];
        double scaled = 0.5 * std::exp(tau * (cfg.T - K * g.dt)) * proj_bg[static_cast<std::size_t>(K)];
        double ztail = zk;
        for (long k = K + 1; k <= K + M; ++k) {
            ztail *= z;
            tail += ztail * proj_bg[static_cast<std::size_t>(k)];
            scaled += std::exp(tau * (cfg.T - k * g.dt)) * proj_bg[static_cast<std::size_t>(k)];
        }
        tail *= g.dt;
        scaled *= g.dt;
        tilde_vals[t] = tilde;
        standard_vals[t] = tilde - tail;
        equiv[t] = tau * std::fabs(scaled) / f_norm_sq;
    }

    res.standard = IndicatorSeries{taus, standard_vals, cfg.T, "standard", res.tag, cfg.config_hash};
    res.tilde = IndicatorSeries{taus, tilde_vals, cfg.T, "tilde", res.tag, cfg.config_hash};
    res.equivalence = std::move(equiv);

    try {
        res.fit = extract_length(res.tilde);
    } catch (const AllBelowFloor& e) {
        res.fit_error = e.what();
    } catch (const WindowEmpty& e) {
        res.fit_error = e.what();
    }
    std::size_t sign_begin = res.fit_error.empty() ? res.fit.window_begin : 0;
    res.sign = sign_check(res.standard, res.tag, sign_begin);
    return res;
}

} // namespace wenc
