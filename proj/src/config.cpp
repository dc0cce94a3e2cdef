#include "wenc/config.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "wenc/errors.hpp"
#include "wenc/io.hpp"

namespace wenc {

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

// Whitespace-separated tokens; parentheses and commas stand alone.
std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',') {
            if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
            if (c == '(' || c == ')' || c == ',') tokens.push_back(std::string(1, c));
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

struct TokenStream {
    std::vector<std::string> tokens;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const std::string& peek() const {
        if (done()) throw ConfigError("unexpected end of value");
        return tokens[pos];
    }
    std::string next() {
        if (done()) throw ConfigError("unexpected end of value");
        return tokens[pos++];
    }
    void expect(const std::string& t) {
        std::string got = next();
        if (got != t) throw ConfigError("expected '" + t + "', got '" + got + "'");
    }
};

double parse_number(const std::string& tok) {
    const char* s = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0') throw ConfigError("'" + tok + "' is not a number");
    return v;
}

double next_number(TokenStream& ts) { return parse_number(ts.next()); }

Region parse_region_tokens(TokenStream& ts) {
    std::string kind = ts.next();
    if (kind == "ball") {
        double cx = next_number(ts), cy = next_number(ts), cz = next_number(ts);
        double r = next_number(ts);
        return make_ball({cx, cy, cz}, r);
    }
    if (kind == "box") {
        double lx = next_number(ts), ly = next_number(ts), lz = next_number(ts);
        double hx = next_number(ts), hy = next_number(ts), hz = next_number(ts);
        return make_box({lx, ly, lz}, {hx, hy, hz});
    }
    if (kind == "union") {
        ts.expect("(");
        std::vector<Region> parts;
        parts.push_back(parse_region_tokens(ts));
        while (ts.peek() == ",") {
            ts.next();
            parts.push_back(parse_region_tokens(ts));
        }
        ts.expect(")");
        return make_union(std::move(parts));
    }
    throw ConfigError("unknown region kind '" + kind + "'");
}

std::vector<double> parse_numbers(const std::string& value) {
    TokenStream ts{tokenize(value)};
    std::vector<double> out;
    while (!ts.done()) out.push_back(next_number(ts));
    return out;
}

int parse_sign(const std::string& value) {
    if (value == "+1" || value == "1" || value == "+") return +1;
    if (value == "-1" || value == "-") return -1;
    throw ConfigError("sign must be +1 or -1, got '" + value + "'");
}

long parse_count(const std::string& value) {
    std::vector<double> nums = parse_numbers(value);
    if (nums.size() != 1 || nums[0] != static_cast<long>(nums[0]))
        throw ConfigError("'" + value + "' is not an integer");
    return static_cast<long>(nums[0]);
}

Point3 parse_point(const std::string& value) {
    std::vector<double> nums = parse_numbers(value);
    if (nums.size() != 3) throw ConfigError("expected three coordinates, got '" + value + "'");
    return {nums[0], nums[1], nums[2]};
}

// 26 directions of the centered cube stencil scaled to radius R.
std::vector<Point3> octahedral_centers(double radius) {
    std::vector<Point3> out;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                Vec3 d{static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)};
                out.push_back(normalized(d) * radius);
            }
    return out;
}

struct RawConfig {
    // Collected (section, key, value, line) entries in file order.
    struct Entry {
        std::string section, key, value;
        long line;
    };
    std::vector<Entry> entries;
};

RawConfig scan(const std::string& text) {
    static const std::vector<std::string> known_sections = {
        "background", "inclusion", "source", "grid", "tau", "run", "probes"};
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        std::string body = line.substr(a, b - a + 1);
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = body.substr(1, body.size() - 2);
            bool known = false;
            for (const auto& s : known_sections) known |= (s == section);
            if (!known)
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        std::string key = body.substr(0, eq);
        std::string value = body.substr(eq + 1);
        auto trim = [](std::string& s) {
            std::size_t x = s.find_first_not_of(" \t");
            std::size_t y = s.find_last_not_of(" \t");
            s = x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
        };
        trim(key);
        trim(value);
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        raw.entries.push_back({section, key, value, lineno});
    }
    return raw;
}

[[noreturn]] void unknown_key(const RawConfig::Entry& e) {
    throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + e.key +
                      "' in section [" + e.section + "]");
}

} // namespace

Region parse_region_text(const std::string& text) {
    TokenStream ts{tokenize(text)};
    Region r = parse_region_tokens(ts);
    if (!ts.done()) throw ConfigError("trailing tokens after region description");
    validate_region(r);
    return r;
}

ExperimentConfig parse_config(const std::string& text) {
    RawConfig raw = scan(text);
    ExperimentConfig cfg;
    cfg.hash = fnv1a(text);

    std::string bg_kind = "homogeneous";
    std::optional<double> gamma_plus, gamma_minus;
    std::optional<Region> inclusion_region;
    std::optional<Diag3> inclusion_gamma;
    std::optional<double> tau_min, tau_max;
    std::optional<long> tau_count;
    std::vector<double> tau_values;
    std::optional<double> probe_radius;
    std::vector<Point3> probe_centers;

    for (const auto& e : raw.entries) {
        try {
            if (e.section == "background") {
                if (e.key == "kind") {
                    if (e.value != "homogeneous" && e.value != "two-layer")
                        throw ConfigError("background kind must be homogeneous or two-layer");
                    bg_kind = e.value;
                } else if (e.key == "gamma_plus") gamma_plus = parse_number(e.value);
                else if (e.key == "gamma_minus") gamma_minus = parse_number(e.value);
                else unknown_key(e);
            } else if (e.section == "inclusion") {
                if (e.key == "region") inclusion_region = parse_region_text(e.value);
                else if (e.key == "gamma") {
                    std::vector<double> v = parse_numbers(e.value);
                    if (v.size() == 1) inclusion_gamma = Diag3::iso(v[0]);
                    else if (v.size() == 3) inclusion_gamma = Diag3{{v[0], v[1], v[2]}};
                    else throw ConfigError("gamma takes one or three values");
                } else unknown_key(e);
            } else if (e.section == "source") {
                if (e.key == "region") cfg.source_region = parse_region_text(e.value);
                else if (e.key == "amplitude") cfg.amplitude = parse_number(e.value);
                else if (e.key == "sign") cfg.sign = parse_sign(e.value);
                else if (e.key == "smoothing") cfg.smoothing = parse_number(e.value);
                else unknown_key(e);
            } else if (e.section == "grid") {
                if (e.key == "h") cfg.h = parse_number(e.value);
                else if (e.key == "cfl_safety") cfg.cfl_safety = parse_number(e.value);
                else if (e.key == "pad_slack") cfg.pad_slack = parse_number(e.value);
                else unknown_key(e);
            } else if (e.section == "run") {
                if (e.key == "T") cfg.T = parse_number(e.value);
                else if (e.key == "tail_horizon") cfg.tail_horizon = parse_number(e.value);
                else if (e.key == "threads") cfg.threads = static_cast<int>(parse_count(e.value));
                else unknown_key(e);
            } else if (e.section == "tau") {
                if (e.key == "min") tau_min = parse_number(e.value);
                else if (e.key == "max") tau_max = parse_number(e.value);
                else if (e.key == "count") tau_count = parse_count(e.value);
                else if (e.key == "values") tau_values = parse_numbers(e.value);
                else unknown_key(e);
            } else if (e.section == "probes") {
                if (e.key == "radius") probe_radius = parse_number(e.value);
                else if (e.key == "center") probe_centers.push_back(parse_point(e.value));
                else if (e.key == "centers") {
                    TokenStream ts{tokenize(e.value)};
                    std::string layout = ts.next();
                    if (layout != "octahedral")
                        throw ConfigError("unknown probe layout '" + layout + "'");
                    double radius = next_number(ts);
                    if (!ts.done()) throw ConfigError("trailing tokens after probe layout");
                    for (const Point3& p : octahedral_centers(radius)) probe_centers.push_back(p);
                } else if (e.key == "anchor") cfg.anchor = parse_point(e.value);
                else unknown_key(e);
            }
        } catch (const ConfigError& err) {
            std::string msg = err.what();
            if (msg.rfind("line ", 0) == 0) throw;
            throw ConfigError("line " + std::to_string(e.line) + ": " + msg);
        }
    }

    if (bg_kind == "two-layer") {
        if (!gamma_plus || !gamma_minus)
            throw ConfigError("two-layer background needs gamma_plus and gamma_minus");
        cfg.medium.background = TwoLayer{*gamma_plus, *gamma_minus};
    } else {
        if (gamma_plus || gamma_minus)
            throw ConfigError("gamma_plus / gamma_minus are two-layer keys");
        cfg.medium.background = Homogeneous{};
    }

    if (inclusion_region || inclusion_gamma) {
        if (!inclusion_region || !inclusion_gamma)
            throw ConfigError("[inclusion] needs both region and gamma");
        cfg.medium.inclusion = InclusionSpec{*inclusion_region, *inclusion_gamma};
    }

    if (!tau_values.empty()) {
        if (tau_min || tau_max || tau_count)
            throw ConfigError("[tau] values excludes min / max / count");
        for (std::size_t i = 0; i < tau_values.size(); ++i) {
            if (!(tau_values[i] >= 1.0)) throw ConfigError("decay rates must be at least 1");
            if (i + 1 < tau_values.size() && !(tau_values[i] < tau_values[i + 1]))
                throw ConfigError("decay rates must be strictly increasing");
        }
        cfg.taus = tau_values;
    } else if (tau_min || tau_max || tau_count) {
        double lo = tau_min.value_or(2.0), hi = tau_max.value_or(16.0);
        long n = tau_count.value_or(16);
        if (n < 2 || n > 10000) throw ConfigError("tau count out of range");
        cfg.taus = log_spaced_taus(lo, hi, static_cast<int>(n));
    }

    if (!probe_centers.empty()) {
        if (!probe_radius || !(*probe_radius > 0.0))
            throw ConfigError("[probes] needs a positive radius");
        for (const Point3& c : probe_centers) cfg.probes.push_back({c, *probe_radius});
    } else if (probe_radius) {
        throw ConfigError("[probes] has a radius but no centers");
    }

    if (!(cfg.h > 0.0)) throw ConfigError("grid spacing must be positive");
    if (!(cfg.T > 0.0)) throw ConfigError("observation time must be positive");
    if (!(cfg.cfl_safety > 0.0) || cfg.cfl_safety > 1.0)
        throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!(cfg.pad_slack >= 0.0)) throw ConfigError("pad_slack must be nonnegative");
    if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
    if (!(cfg.amplitude > 0.0)) throw ConfigError("amplitude must be positive");
    if (!(cfg.smoothing >= 0.0)) throw ConfigError("smoothing must be nonnegative");
    return cfg;
}

void apply_tau_override(ExperimentConfig& cfg, std::optional<double> tau_min,
                        std::optional<double> tau_max, std::optional<int> tau_count) {
    if (!tau_min && !tau_max && !tau_count) return;
    double lo = tau_min.value_or(cfg.taus.empty() ? 2.0 : cfg.taus.front());
    double hi = tau_max.value_or(cfg.taus.empty() ? 16.0 : cfg.taus.back());
    int n = tau_count.value_or(cfg.taus.empty() ? 16 : static_cast<int>(cfg.taus.size()));
    try {
        cfg.taus = log_spaced_taus(lo, hi, n);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("tau override: ") + e.what());
    }
    std::string stamp = "tau-override min=" + format_float(lo) + " max=" + format_float(hi) +
                        " count=" + std::to_string(n);
    cfg.hash = fnv1a(stamp, cfg.hash);
}

SourceSpec make_source(const ExperimentConfig& cfg) {
    if (!cfg.source_region) throw ConfigError("this command needs a [source] region");
    SourceSpec s;
    s.region = *cfg.source_region;
    s.amplitude = cfg.amplitude;
    s.sign = cfg.sign;
    s.smoothing = cfg.smoothing;
    return s;
}

PipelineConfig make_pipeline(const ExperimentConfig& cfg) {
    PipelineConfig p;
    p.medium = cfg.medium;
    p.source = make_source(cfg);
    p.T = cfg.T;
    p.h = cfg.h;
    p.cfl_safety = cfg.cfl_safety;
    p.pad_slack = cfg.pad_slack;
    p.tail_horizon = cfg.tail_horizon;
    p.taus = cfg.taus;
    p.threads = cfg.threads;
    p.config_hash = cfg.hash;
    return p;
}

PipelineConfig make_probe_pipeline(const ExperimentConfig& cfg, const ProbeSpec& probe) {
    PipelineConfig p;
    p.medium = cfg.medium;
    p.source.region = make_ball(probe.center, probe.radius);
    p.source.amplitude = cfg.amplitude;
    p.source.sign = cfg.sign;
    p.source.smoothing = cfg.smoothing;
    p.T = cfg.T;
    p.h = cfg.h;
    p.cfl_safety = cfg.cfl_safety;
    p.pad_slack = cfg.pad_slack;
    p.tail_horizon = cfg.tail_horizon;
    p.taus = cfg.taus;
    p.threads = cfg.threads;
    p.config_hash = cfg.hash;
    return p;
}

} // namespace wenc
