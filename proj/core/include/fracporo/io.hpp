#pragma once

#include "fracporo/material.hpp"
#include "fracporo/solver.hpp"
#include "fracporo/stats.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracporo::io {

/// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Unit { m, N, Pa, kg };

std::string to_string(Unit u);
Unit parse_unit(const std::string& s);

/// Time series with a unit tag taken from the value column header ("displacement_m").
struct TimeSeries {
    std::string name = "value";
    Unit unit = Unit::m;
    std::vector<double> t;
    std::vector<double> v;
    /// `# key = value` comment lines, e.g. "h_mm".
    std::map<std::string, std::string> meta;
};

/**
 * @brief Parse `time_s,<name>_<unit>` CSV.
 *
 * Comma delimiter, '.' decimal point, lines starting with '#' skipped
 * (those of the form `# key = value` are kept in `meta`).
 * Throws InputError naming the offending line.
 */
TimeSeries parse_timeseries_csv(std::istream& in, const std::string& source = "<stream>",
                                std::optional<Unit> expected = std::nullopt);
TimeSeries read_timeseries_csv(const std::string& path, std::optional<Unit> expected = std::nullopt);

/// 17 significant digits, so a write/read cycle is lossless.
void write_timeseries_csv(std::ostream& out, const TimeSeries& ts, const std::vector<std::string>& comments = {});
void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          const std::vector<std::string>& comments = {});

std::string format_double(double v);
double parse_double(const std::string& text, const std::string& where);

/// `key = value` file with '#' comments.
struct KeyValues {
    std::string source;
    std::map<std::string, std::string> entries;

    bool has(const std::string& key) const { return entries.count(key) != 0; }
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    std::string text(const std::string& key, const std::string& fallback = "") const;
};

KeyValues parse_key_values(std::istream& in, const std::string& source = "<stream>");
KeyValues read_key_values(const std::string& path);

/// Material, geometry and load of one named configuration (SI units).
struct Preset {
    std::string name;
    ConsolidationParams params;
    std::optional<MaterialParams> material; ///< absent for incompressible presets
    double h = 0.0;
    double P_A = 0.0;
    double diameter = 3e-3;  ///< m
    double w_s = 997.0;      ///< fluid density, kg/m^3
    double W0 = 0.0;         ///< initial sample weight, kg

    double area() const;
};

Preset preset_from_key_values(const KeyValues& kv);

/// Directory searched for presets: $FRACPORO_PRESET_DIR, else the configured default.
std::string preset_directory();
std::vector<std::string> list_presets();

/// A preset name from the preset directory, or a path to a `.params` file.
Preset load_preset(const std::string& name_or_path);

/// Fitted-parameter CSV: sample,h_mm,M_pa,beta,lambda_beta,rms.
std::vector<stats::ParameterRow> parse_parameter_table(std::istream& in, const std::string& source = "<stream>");
std::vector<stats::ParameterRow> read_parameter_table(const std::string& path);
void write_parameter_table(std::ostream& out, const std::vector<stats::ParameterRow>& rows, bool header = true);

/// Long-format solver output: field,z_m,t_s,value for p, u, flux_base and reaction_top.
void write_solve_result(std::ostream& out, const SolveResult& res);

/// Open for writing; "-" or empty means stdout.
class OutputFile {
public:
    explicit OutputFile(const std::string& path);
    ~OutputFile();
    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;
    std::ostream& stream();

private:
    std::ostream* os_;
    bool owned_;
};

} // namespace fracporo::io
