#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "verify_suites.hpp"
#include "wenc/config.hpp"
#include "wenc/errors.hpp"
#include "wenc/forward.hpp"
#include "wenc/indicator.hpp"
#include "wenc/io.hpp"
#include "wenc/svg.hpp"

namespace {

using namespace wenc;

std::string hash_hex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Thread count priority: command line, then WAVE_ENCLOSURE_THREADS, then the
// config file, then one.
int resolve_threads(std::optional<int> cli_threads, int config_threads) {
    if (cli_threads) {
        if (*cli_threads < 1) throw ConfigError("--threads must be at least 1");
        return *cli_threads;
    }
    if (const char* env = std::getenv("WAVE_ENCLOSURE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw ConfigError("WAVE_ENCLOSURE_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    return config_threads;
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<int> threads;
    std::optional<double> tau_min;
    std::optional<double> tau_max;
    std::optional<int> tau_count;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_tau) {
    cmd->add_option("--config", a.config_path, "experiment description file")->required();
    cmd->add_option("--out", a.out_dir, "output directory (created if missing)");
    cmd->add_option("--threads", a.threads, "worker threads");
    if (with_tau) {
        cmd->add_option("--tau-min", a.tau_min, "lowest decay rate");
        cmd->add_option("--tau-max", a.tau_max, "highest decay rate");
        cmd->add_option("--tau-count", a.tau_count, "number of decay rates");
    }
}

ExperimentConfig load_config(const CommonArgs& a) {
    ExperimentConfig cfg = parse_config(read_text_file(a.config_path));
    apply_tau_override(cfg, a.tau_min, a.tau_max, a.tau_count);
    cfg.threads = resolve_threads(a.threads, cfg.threads);
    return cfg;
}

std::string out_path(const CommonArgs& a, const std::string& name) {
    std::filesystem::create_directories(a.out_dir);
    return (std::filesystem::path(a.out_dir) / name).string();
}

Json grid_json(const GridSpec& g) {
    Json j = Json::object();
    j.set("origin", Json::array()
                        .push(Json::number(g.origin.x))
                        .push(Json::number(g.origin.y))
                        .push(Json::number(g.origin.z)));
    j.set("nx", Json::integer(g.nx));
    j.set("ny", Json::integer(g.ny));
    j.set("nz", Json::integer(g.nz));
    j.set("h", Json::number(g.h));
    j.set("dt", Json::number(g.dt));
    j.set("steps", Json::integer(g.steps));
    return j;
}

Json fit_json(const SlopeFit& f) {
    Json j = Json::object();
    j.set("length", Json::number(f.length));
    j.set("power", Json::number(f.power));
    j.set("offset", Json::number(f.offset));
    j.set("rms", Json::number(f.rms));
    j.set("window_begin", Json::integer(static_cast<long long>(f.window_begin)));
    j.set("window_size", Json::integer(static_cast<long long>(f.window_size)));
    Json dropped = Json::array();
    for (std::size_t i : f.dropped) dropped.push(Json::integer(static_cast<long long>(i)));
    j.set("dropped", std::move(dropped));
    return j;
}

Json sign_json(const SignReport& s) {
    Json j = Json::object();
    j.set("pass", Json::boolean(s.pass));
    j.set("tag", Json::string(s.tag));
    j.set("first_violation_tau", Json::number(s.first_violation_tau));
    j.set("checked", Json::integer(static_cast<long long>(s.checked)));
    return j;
}

int cmd_simulate(const CommonArgs& a) {
    ExperimentConfig cfg = load_config(a);
    SourceSpec src = make_source(cfg);
    GridSpec g = build_wave_grid(cfg.medium, src.region, cfg.T, cfg.h, cfg.cfl_safety,
                                 cfg.pad_slack);
    QuadratureSet nodes = grid_aligned_quadrature(g, src.region);
    SimOptions opts;
    opts.threads = cfg.threads;
    opts.energy_every = std::max(1L, g.steps / 50);
    SimResult res = simulate(cfg.medium, src, g, nodes, opts);

    write_text_file(out_path(a, "traces.csv"), traces_csv(res.traces, cfg.hash));

    double drift = 0.0;
    if (!res.energy.values.empty()) {
        double e0 = res.energy.values.front();
        for (double e : res.energy.values)
            if (e0 != 0.0) drift = std::max(drift, std::fabs(e - e0) / std::fabs(e0));
    }
    CflReport cfl = cfl_check(g, cfg.medium);
    Json j = Json::object();
    j.set("config", Json::string(hash_hex(cfg.hash)));
    j.set("grid", grid_json(g));
    j.set("cfl", Json::object()
                     .set("c_max", Json::number(cfl.c_max))
                     .set("dt_max", Json::number(cfl.dt_max)));
    j.set("nodes", Json::integer(static_cast<long long>(nodes.size())));
    j.set("energy", Json::object()
                        .set("samples", Json::integer(
                                            static_cast<long long>(res.energy.values.size())))
                        .set("max_relative_drift", Json::number(drift)));
    write_text_file(out_path(a, "simulate.json"), j.dump(2));
    std::printf("traces: %zu nodes, %ld steps, dt %s\n", nodes.size(), g.steps,
                format_float(g.dt).c_str());
    return 0;
}

int cmd_probe(const CommonArgs& a) {
    ExperimentConfig cfg = load_config(a);
    PipelineConfig pc = make_pipeline(cfg);
    PipelineResult res = run_probe_pipeline(pc);

    write_text_file(out_path(a, "series_standard.csv"), series_csv(res.standard));
    write_text_file(out_path(a, "series_tilde.csv"), series_csv(res.tilde));
    write_text_file(out_path(a, "equivalence.csv"),
                    sweep_csv(res.standard.taus, res.equivalence, "damped_gap", cfg.hash));

    Json j = Json::object();
    j.set("config", Json::string(hash_hex(cfg.hash)));
    j.set("tag", Json::string(res.tag));
    j.set("grid", grid_json(res.grid));
    j.set("f_norm_sq", Json::number(res.f_norm_sq));
    if (res.fit_error.empty()) {
        j.set("fit", fit_json(res.fit));
    } else {
        j.set("fit_error", Json::string(res.fit_error));
    }
    j.set("sign", sign_json(res.sign));
    write_text_file(out_path(a, "fit.json"), j.dump(2));

    if (res.fit_error.empty())
        std::printf("length %s (window %zu..%zu, rms %s), sign %s\n",
                    format_float(res.fit.length).c_str(), res.fit.window_begin,
                    res.fit.window_begin + res.fit.window_size - 1,
                    format_float(res.fit.rms).c_str(), res.sign.pass ? "pass" : "FAIL");
    else
        std::printf("no length: %s\n", res.fit_error.c_str());
    return 0;
}

int cmd_survey(const CommonArgs& a) {
    ExperimentConfig cfg = load_config(a);
    if (cfg.probes.empty()) throw ConfigError("survey needs a [probes] section");

    std::string rows = csv_hash_line(cfg.hash);
    rows += "px,py,pz,radius,length,rms,window_size,sign_pass\n";
    std::vector<ProbeResult> usable;
    Json probe_list = Json::array();
    for (const ProbeSpec& p : cfg.probes) {
        PipelineConfig pc = make_probe_pipeline(cfg, p);
        PipelineResult res = run_probe_pipeline(pc);
        bool ok = res.fit_error.empty();
        double length = ok ? res.fit.length : std::numeric_limits<double>::quiet_NaN();
        double rms = ok ? res.fit.rms : std::numeric_limits<double>::quiet_NaN();
        rows += format_float(p.center.x) + "," + format_float(p.center.y) + "," +
                format_float(p.center.z) + "," + format_float(p.radius) + "," +
                format_float(length) + "," + format_float(rms) + "," +
                std::to_string(ok ? res.fit.window_size : 0) + "," +
                (res.sign.pass ? "1" : "0") + "\n";
        Json pj = Json::object();
        pj.set("center", Json::array()
                             .push(Json::number(p.center.x))
                             .push(Json::number(p.center.y))
                             .push(Json::number(p.center.z)));
        pj.set("radius", Json::number(p.radius));
        pj.set("tag", Json::string(res.tag));
        if (ok) {
            pj.set("fit", fit_json(res.fit));
            usable.push_back(ProbeResult{p.center, p.radius, res.fit.length});
        } else {
            pj.set("fit_error", Json::string(res.fit_error));
        }
        pj.set("sign", sign_json(res.sign));
        probe_list.push(std::move(pj));
        std::printf("probe (%s, %s, %s): %s\n", format_float(p.center.x).c_str(),
                    format_float(p.center.y).c_str(), format_float(p.center.z).c_str(),
                    ok ? format_float(res.fit.length).c_str() : res.fit_error.c_str());
    }
    write_text_file(out_path(a, "probes.csv"), rows);

    Json j = Json::object();
    j.set("config", Json::string(hash_hex(cfg.hash)));
    j.set("probes", std::move(probe_list));

    bool layered = std::holds_alternative<TwoLayer>(cfg.medium.background);
    std::vector<Point3> cloud;
    bool anchor_inside = false;
    Point3 anchor{0, 0, 0};
    if (!usable.empty()) {
        EnclosurePredicate pred = enclosure(usable, cfg.medium.background);
        if (cfg.anchor) {
            anchor = *cfg.anchor;
        } else {
            for (const ProbeResult& p : usable) anchor += p.p;
            anchor = anchor / static_cast<double>(usable.size());
            // a layered survey probes from above; the enclosed set lies below
            if (layered) anchor.z = -1.0;
        }
        anchor_inside = pred.contains(anchor);
        if (anchor_inside) {
            double r_max = 0.0;
            for (const ProbeResult& p : usable)
                r_max = std::max(r_max, norm(p.p - anchor) + p.length + p.r);
            cloud = sample_enclosure_boundary(pred, anchor, 2.0 * r_max + 1.0, 2048);
        }
    }
    write_text_file(out_path(a, "enclosure.csv"), points_csv(cloud, cfg.hash));
    j.set("anchor", Json::array()
                        .push(Json::number(anchor.x))
                        .push(Json::number(anchor.y))
                        .push(Json::number(anchor.z)));
    j.set("anchor_inside", Json::boolean(anchor_inside));
    j.set("boundary_points", Json::integer(static_cast<long long>(cloud.size())));
    write_text_file(out_path(a, "survey.json"), j.dump(2));
    std::printf("%zu of %zu probes usable, %zu boundary points\n", usable.size(),
                cfg.probes.size(), cloud.size());
    return 0;
}

std::uint64_t hash_from_csv(const std::string& text) {
    // first "# config <hex>" comment, if present
    std::size_t pos = text.find("# config ");
    if (pos != std::string::npos) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(text.c_str() + pos + 9, &end, 16);
        if (end != text.c_str() + pos + 9) return v;
    }
    return 0;
}

struct PlotArgs {
    std::string input;
    std::string out_dir = ".";
    std::string kind;
    double slice = 0.0;
    std::optional<double> gamma_plus;
    std::optional<double> gamma_minus;
};

int cmd_plot(const PlotArgs& a) {
    std::string text = read_text_file(a.input);
    CsvTable table = parse_csv(text);
    std::uint64_t hash = hash_from_csv(text);
    std::string svg;
    std::string name;

    if (a.kind == "slope") {
        std::size_t ct = table.column_index("tau");
        std::size_t cv = table.column_index("value");
        IndicatorSeries s;
        for (const auto& row : table.rows) {
            s.taus.push_back(row[ct]);
            s.values.push_back(row[cv]);
        }
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < s.taus.size(); ++i) {
            double la = std::log(std::fabs(s.values[i]));
            if (std::isfinite(la)) {
                xs.push_back(s.taus[i]);
                ys.push_back(la);
            }
        }
        if (xs.empty()) throw ConfigError("no representable magnitudes to plot");
        std::string note;
        std::vector<double> overlay;
        bool have_fit = false;
        try {
            SlopeFit f = extract_length(s);
            for (double tau : xs)
                overlay.push_back(-2.0 * f.length * tau + f.power * std::log(tau) + f.offset);
            note = "L = " + format_float(f.length);
            have_fit = true;
        } catch (const Error& e) {
            note = std::string("no admissible window: ") + e.what();
        }
        svg = svg_xy_plot(xs, ys, have_fit ? &overlay : nullptr, "tau", "log |I|",
                          "indicator decay", note);
        name = "slope.svg";
    } else if (a.kind == "trace") {
        std::size_t ct = table.column_index("t");
        std::size_t cu = table.column_index("u0");
        std::vector<double> xs, ys;
        for (const auto& row : table.rows) {
            xs.push_back(row[ct]);
            ys.push_back(row[cu]);
        }
        svg = svg_xy_plot(xs, ys, nullptr, "t", "u", "field at the first recorded node", "");
        name = "trace.svg";
    } else { // enclosure-slice
        std::size_t cx = table.column_index("px");
        std::size_t cy = table.column_index("py");
        std::size_t cz = table.column_index("pz");
        std::size_t cr = table.column_index("radius");
        std::size_t cl = table.column_index("length");
        std::vector<ProbeResult> probes;
        double extent = 0.0;
        for (const auto& row : table.rows) {
            if (!std::isfinite(row[cl])) continue;
            probes.push_back(ProbeResult{{row[cx], row[cy], row[cz]}, row[cr], row[cl]});
            extent = std::max({extent, std::fabs(row[cx]), std::fabs(row[cy]),
                               row[cr] + row[cl]});
        }
        if (probes.empty()) throw ConfigError("no usable probe rows in " + a.input);
        BackgroundSpec bg = Homogeneous{};
        if (a.gamma_plus || a.gamma_minus) {
            if (!(a.gamma_plus && a.gamma_minus))
                throw ConfigError("--gamma-plus and --gamma-minus go together");
            bg = TwoLayer{*a.gamma_plus, *a.gamma_minus};
        }
        EnclosurePredicate pred = enclosure(probes, bg);
        Box window{{-extent, -extent, a.slice}, {extent, extent, a.slice}};
        svg = svg_enclosure_slice(pred, a.slice, window, 160, "reconstructed enclosure");
        name = "enclosure.svg";
    }

    std::filesystem::create_directories(a.out_dir);
    std::string path = (std::filesystem::path(a.out_dir) / name).string();
    write_text_file(path, "<!-- config " + hash_hex(hash) + " -->\n" + svg);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wave-equation enclosure analysis: synthesize measurement data, form "
                 "indicator series, extract shortest travel lengths, reconstruct enclosing "
                 "regions."};
    app.require_subcommand(1);

    CommonArgs sim_args, probe_args, survey_args;
    PlotArgs plot_args;
    std::string suite = "all";

    CLI::App* sim = app.add_subcommand("simulate", "forward wave run, traces at source nodes");
    add_common(sim, sim_args, false);

    CLI::App* probe = app.add_subcommand("probe", "indicator series, decay fit, sign check");
    add_common(probe, probe_args, true);

    CLI::App* survey =
        app.add_subcommand("survey", "per-probe lengths and enclosure reconstruction");
    add_common(survey, survey_args, true);

    CLI::App* verify = app.add_subcommand("verify", "run property suites");
    verify->add_option("suite", suite, "geometry|optical|resolvent|fit|indicator|all");

    CLI::App* plot = app.add_subcommand("plot", "render a CSV product as SVG");
    plot->add_option("--input", plot_args.input, "CSV file to render")->required();
    plot->add_option("--out", plot_args.out_dir, "output directory");
    plot->add_option("--kind", plot_args.kind, "slope|trace|enclosure-slice")
        ->required()
        ->check(CLI::IsMember({"slope", "trace", "enclosure-slice"}));
    plot->add_option("--slice", plot_args.slice, "x3 level for enclosure-slice");
    plot->add_option("--gamma-plus", plot_args.gamma_plus, "upper-layer coefficient");
    plot->add_option("--gamma-minus", plot_args.gamma_minus, "lower-layer coefficient");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (probe->parsed()) return cmd_probe(probe_args);
        if (survey->parsed()) return cmd_survey(survey_args);
        if (verify->parsed()) return wenc::run_verify_suite(suite);
        if (plot->parsed()) return cmd_plot(plot_args);
    } catch (const wenc::CflViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const wenc::PaddingViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const wenc::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const wenc::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const wenc::DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const wenc::OverlapError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const wenc::EmptyRegionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const wenc::NoInclusionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const wenc::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
