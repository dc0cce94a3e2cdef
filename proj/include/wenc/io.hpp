#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wenc/forward.hpp"
#include "wenc/indicator.hpp"

namespace wenc {

// Shortest round-trippable decimal form (17 significant digits).
std::string format_float(double v);

// Emission-only JSON document builder.
class Json {
  public:
    static Json object();
    static Json array();
    static Json number(double v);
    static Json integer(long long v);
    static Json boolean(bool v);
    static Json string(std::string v);

    Json& set(const std::string& key, Json v); // object members, insertion order kept
    Json& push(Json v);                        // array elements

    std::string dump(int indent = 0) const;

  private:
    enum class Kind { Object, Array, Number, Integer, Bool, String };
    Kind kind_ = Kind::Object;
    double num_ = 0.0;
    long long int_ = 0;
    bool bool_ = false;
    std::string str_;
    std::vector<std::pair<std::string, Json>> members_;
    std::vector<Json> elements_;

    void emit(std::string& out, int indent, int depth) const;
};

// Leading comment line stamping the configuration hash into a CSV file.
std::string csv_hash_line(std::uint64_t hash);

// Columns tau, value, log_abs (log_abs empty for values under the floor).
std::string series_csv(const IndicatorSeries& s);

// Columns tau, <value_name>.
std::string sweep_csv(const std::vector<double>& taus, const std::vector<double>& values,
                      const std::string& value_name, std::uint64_t hash);

// Column t then one column per recorded node.
std::string traces_csv(const TraceSet& tr, std::uint64_t hash);

// Columns x, y, z.
std::string points_csv(const std::vector<Point3>& pts, std::uint64_t hash);

// Parsed numeric CSV: named columns over double rows. Lines starting with
// '#' are skipped. Throws ConfigError on ragged or non-numeric input.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const; // throws ConfigError
};

CsvTable parse_csv(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace wenc
