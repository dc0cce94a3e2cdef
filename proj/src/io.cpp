#include "wenc/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "wenc/errors.hpp"

namespace wenc {

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json Json::object() {
    Json j;
    j.kind_ = Kind::Object;
    return j;
}

Json Json::array() {
    Json j;
    j.kind_ = Kind::Array;
    return j;
}

Json Json::number(double v) {
    Json j;
    j.kind_ = Kind::Number;
    j.num_ = v;
    return j;
}

Json Json::integer(long long v) {
    Json j;
    j.kind_ = Kind::Integer;
    j.int_ = v;
    return j;
}

Json Json::boolean(bool v) {
    Json j;
    j.kind_ = Kind::Bool;
    j.bool_ = v;
    return j;
}

Json Json::string(std::string v) {
    Json j;
    j.kind_ = Kind::String;
    j.str_ = std::move(v);
    return j;
}

Json& Json::set(const std::string& key, Json v) {
    members_.emplace_back(key, std::move(v));
    return *this;
}

Json& Json::push(Json v) {
    elements_.push_back(std::move(v));
    return *this;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

} // namespace

void Json::emit(std::string& out, int indent, int depth) const {
    switch (kind_) {
        case Kind::Number:
            // JSON has no non-finite literals; null marks them.
            out += std::isfinite(num_) ? format_float(num_) : "null";
            break;
        case Kind::Integer: out += std::to_string(int_); break;
        case Kind::Bool: out += bool_ ? "true" : "false"; break;
        case Kind::String: escape_into(out, str_); break;
        case Kind::Object: {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : members_) {
                if (!first) out += ',';
                first = false;
                newline_indent(out, indent, depth + 1);
                escape_into(out, k);
                out += indent > 0 ? ": " : ":";
                v.emit(out, indent, depth + 1);
            }
            if (!members_.empty()) newline_indent(out, indent, depth);
            out += '}';
            break;
        }
        case Kind::Array: {
            out += '[';
            bool first = true;
            for (const Json& v : elements_) {
                if (!first) out += ',';
                first = false;
                newline_indent(out, indent, depth + 1);
                v.emit(out, indent, depth + 1);
            }
            if (!elements_.empty()) newline_indent(out, indent, depth);
            out += ']';
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    emit(out, indent, 0);
    if (indent > 0) out += '\n';
    return out;
}

std::string csv_hash_line(std::uint64_t hash) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "# config %016llx\n", static_cast<unsigned long long>(hash));
    return buf;
}

std::string series_csv(const IndicatorSeries& s) {
    std::string out = csv_hash_line(s.config_hash);
    out += "tau,value,log_abs\n";
    for (std::size_t i = 0; i < s.taus.size(); ++i) {
        out += format_float(s.taus[i]);
        out += ',';
        out += format_float(s.values[i]);
        out += ',';
        double a = std::fabs(s.values[i]);
        if (a > 1e-300 && std::isfinite(a)) out += format_float(std::log(a));
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<double>& taus, const std::vector<double>& values,
                      const std::string& value_name, std::uint64_t hash) {
    if (taus.size() != values.size()) throw DomainError("sweep columns differ in length");
    std::string out = csv_hash_line(hash);
    out += "tau," + value_name + "\n";
    for (std::size_t i = 0; i < taus.size(); ++i) {
        out += format_float(taus[i]);
        out += ',';
        out += format_float(values[i]);
        out += '\n';
    }
    return out;
}

std::string traces_csv(const TraceSet& tr, std::uint64_t hash) {
    std::string out = csv_hash_line(hash);
    out += "t";
    for (std::size_t q = 0; q < tr.quad.size(); ++q) {
        out += ",u";
        out += std::to_string(q);
    }
    out += '\n';
    for (long k = 0; k <= tr.steps; ++k) {
        out += format_float(k * tr.dt);
        for (std::size_t q = 0; q < tr.quad.size(); ++q) {
            out += ',';
            out += format_float(tr.at(k, q));
        }
        out += '\n';
    }
    return out;
}

std::string points_csv(const std::vector<Point3>& pts, std::uint64_t hash) {
    std::string out = csv_hash_line(hash);
    out += "x,y,z\n";
    for (const Point3& p : pts) {
        out += format_float(p.x);
        out += ',';
        out += format_float(p.y);
        out += ',';
        out += format_float(p.z);
        out += '\n';
    }
    return out;
}

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ConfigError("csv column '" + name + "' not found");
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!have_header) {
            table.columns = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != table.columns.size())
            throw ConfigError("csv line " + std::to_string(lineno) + ": expected " +
                              std::to_string(table.columns.size()) + " fields, got " +
                              std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i].empty()) {
                row[i] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const char* s = fields[i].c_str();
            char* end = nullptr;
            row[i] = std::strtod(s, &end);
            if (end == s || *end != '\0')
                throw ConfigError("csv line " + std::to_string(lineno) + ": field '" + fields[i] +
                                  "' is not a number");
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw ConfigError("csv input has no header line");
    return table;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("short write to '" + path + "'");
}

} // namespace wenc
