#include "fracporo/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#ifndef FRACPORO_DEFAULT_PRESET_DIR
#define FRACPORO_DEFAULT_PRESET_DIR "presets"
#endif

namespace fracporo::io {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string where(const std::string& source, std::size_t line)
{
    return source + ":" + std::to_string(line);
}

std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

bool skip_line(const std::string& s) { return s.empty() || s.front() == '#'; }

} // namespace

std::string to_string(Unit u)
{
    switch (u) {
    case Unit::m: return "m";
    case Unit::N: return "N";
    case Unit::Pa: return "Pa";
    case Unit::kg: return "kg";
    }
    return "?";
}

Unit parse_unit(const std::string& s)
{
    if (s == "m") return Unit::m;
    if (s == "N") return Unit::N;
    if (s == "Pa") return Unit::Pa;
    if (s == "kg") return Unit::kg;
    throw InputError("unknown unit '" + s + "' (m, N, Pa, kg)");
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, const std::string& at)
{
    const std::string s = trim(text);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last) {
        throw InputError(at + ": '" + s + "' is not a number");
    }
    return v;
}

TimeSeries parse_timeseries_csv(std::istream& in, const std::string& source, std::optional<Unit> expected)
{
    TimeSeries ts;
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(raw);
        if (!line.empty() && line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                const std::string key = trim(line.substr(1, eq - 1));
                if (!key.empty() && key.find(' ') == std::string::npos) ts.meta[key] = trim(line.substr(eq + 1));
            }
            continue;
        }
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (!have_header) {
            if (cells.size() != 2) throw InputError(where(source, line_no) + ": header must have two columns");
            if (cells[0] != "time_s" && cells[0] != "t_s") {
                throw InputError(where(source, line_no) + ": first column must be time_s");
            }
            const auto us = cells[1].rfind('_');
            if (us == std::string::npos || us == 0) {
                throw InputError(where(source, line_no) + ": value column needs a unit suffix, e.g. displacement_m");
            }
            ts.name = cells[1].substr(0, us);
            try {
                ts.unit = parse_unit(cells[1].substr(us + 1));
            } catch (const InputError& e) {
                throw InputError(where(source, line_no) + ": " + e.what());
            }
            if (expected && ts.unit != *expected) {
                throw InputError(where(source, line_no) + ": unit '" + to_string(ts.unit) + "' where '" +
                                 to_string(*expected) + "' is required");
            }
            have_header = true;
            continue;
        }
        if (cells.size() != 2) {
            throw InputError(where(source, line_no) + ": expected 2 fields, found " + std::to_string(cells.size()));
        }
        const double t = parse_double(cells[0], where(source, line_no));
        const double v = parse_double(cells[1], where(source, line_no));
        if (!std::isfinite(t) || !std::isfinite(v)) throw InputError(where(source, line_no) + ": non-finite value");
        if (!ts.t.empty() && !(t > ts.t.back())) {
            throw InputError(where(source, line_no) + ": time is not strictly increasing");
        }
        ts.t.push_back(t);
        ts.v.push_back(v);
    }
    if (!have_header) throw InputError(source + ": missing header");
    if (ts.t.empty()) throw InputError(source + ": no data rows");
    return ts;
}

TimeSeries read_timeseries_csv(const std::string& path, std::optional<Unit> expected)
{
    std::ifstream in = open_in(path);
    return parse_timeseries_csv(in, path, expected);
}

void write_timeseries_csv(std::ostream& out, const TimeSeries& ts, const std::vector<std::string>& comments)
{
    if (ts.t.size() != ts.v.size()) throw std::invalid_argument("write_timeseries_csv: length mismatch");
    for (const auto& c : comments) out << "# " << c << '\n';
    for (const auto& [k, v] : ts.meta) out << "# " << k << " = " << v << '\n';
    out << "time_s," << ts.name << '_' << to_string(ts.unit) << '\n';
    for (std::size_t i = 0; i < ts.t.size(); ++i) out << format_double(ts.t[i]) << ',' << format_double(ts.v[i]) << '\n';
}

void write_timeseries_csv(const std::string& path, const TimeSeries& ts, const std::vector<std::string>& comments)
{
    OutputFile f(path);
    write_timeseries_csv(f.stream(), ts, comments);
}

double KeyValues::number(const std::string& key) const
{
    const auto it = entries.find(key);
    if (it == entries.end()) throw InputError(source + ": missing key '" + key + "'");
    return parse_double(it->second, source + " [" + key + "]");
}

double KeyValues::number(const std::string& key, double fallback) const
{
    return has(key) ? number(key) : fallback;
}

std::string KeyValues::text(const std::string& key, const std::string& fallback) const
{
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
}

KeyValues parse_key_values(std::istream& in, const std::string& source)
{
    KeyValues kv;
    kv.source = source;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError(where(source, line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InputError(where(source, line_no) + ": empty key");
        if (!kv.entries.emplace(key, value).second) {
            throw InputError(where(source, line_no) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues read_key_values(const std::string& path)
{
    std::ifstream in = open_in(path);
    return parse_key_values(in, path);
}

double Preset::area() const
{
    return 0.25 * std::numbers::pi * diameter * diameter;
}

Preset preset_from_key_values(const KeyValues& kv)
{
    static const char* known[] = {"name",  "model", "K_pa",       "G_pa",      "alpha",       "B",    "lambda_beta", "beta",
                                  "poisson", "M_pa", "h_m", "P_A_pa", "diameter_m", "w_s_kg_m3", "W0_kg"};
    for (const auto& [key, value] : kv.entries) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known)) {
            throw InputError(kv.source + ": unknown key '" + key + "'");
        }
    }

    Preset p;
    p.name = kv.text("name", fs::path(kv.source).stem().string());
    const std::string model = kv.text("model", "compressible");
    try {
        if (model == "compressible") {
            MaterialParams m;
            m.K = kv.number("K_pa");
            m.G = kv.number("G_pa");
            m.alpha = kv.number("alpha");
            m.B = kv.number("B");
            m.lambda_beta = kv.number("lambda_beta");
            m.beta = kv.number("beta");
            if (kv.has("poisson")) m.poisson = kv.number("poisson");
            p.params = consolidation_params(m);
            p.material = m;
        } else if (model == "incompressible") {
            p.params = incompressible(kv.number("M_pa"), kv.number("beta"), kv.number("lambda_beta"));
        } else {
            throw InputError(kv.source + ": model must be compressible or incompressible");
        }
    } catch (const std::domain_error& e) {
        throw InputError(kv.source + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(kv.source + ": " + e.what());
    }
    p.h = kv.number("h_m");
    p.P_A = kv.number("P_A_pa");
    p.diameter = kv.number("diameter_m", p.diameter);
    p.w_s = kv.number("w_s_kg_m3", p.w_s);
    p.W0 = kv.number("W0_kg", p.W0);
    if (!(p.h > 0.0)) throw InputError(kv.source + ": h_m must be positive");
    if (!(p.P_A > 0.0)) throw InputError(kv.source + ": P_A_pa must be positive");
    if (!(p.diameter > 0.0) || !(p.w_s > 0.0)) throw InputError(kv.source + ": diameter and w_s must be positive");
    return p;
}

std::string preset_directory()
{
    if (const char* env = std::getenv("FRACPORO_PRESET_DIR"); env && *env) return env;
    return FRACPORO_DEFAULT_PRESET_DIR;
}

std::vector<std::string> list_presets()
{
    std::vector<std::string> names;
    const fs::path dir = preset_directory();
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec)) {
        if (e.path().extension() == ".params") names.push_back(e.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

Preset load_preset(const std::string& name_or_path)
{
    fs::path path = name_or_path;
    if (path.extension() != ".params" || !fs::exists(path)) {
        path = fs::path(preset_directory()) / (name_or_path + ".params");
    }
    if (!fs::exists(path)) {
        throw InputError("unknown preset '" + name_or_path + "' (looked in " + preset_directory() + ")");
    }
    return preset_from_key_values(read_key_values(path.string()));
}

std::vector<stats::ParameterRow> parse_parameter_table(std::istream& in, const std::string& source)
{
    static const std::vector<std::string> header = {"sample", "h_mm", "M_pa", "beta", "lambda_beta", "rms"};
    std::vector<stats::ParameterRow> rows;
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(raw);
        if (skip_line(line)) continue;
        const auto cells = split_csv(line);
        if (!have_header) {
            if (cells != header) throw InputError(where(source, line_no) + ": header must be sample,h_mm,M_pa,beta,lambda_beta,rms");
            have_header = true;
            continue;
        }
        if (cells.size() != header.size()) {
            throw InputError(where(source, line_no) + ": expected 6 fields, found " + std::to_string(cells.size()));
        }
        stats::ParameterRow r;
        r.sample_id = cells[0];
        try {
            const auto loc = stats::parse_sample_id(r.sample_id);
            r.region = loc.region;
            r.direction = loc.direction;
        } catch (const std::invalid_argument& e) {
            throw InputError(where(source, line_no) + ": " + e.what());
        }
        const std::string at = where(source, line_no);
        r.h = 1e-3 * parse_double(cells[1], at);
        r.M = parse_double(cells[2], at);
        r.beta = parse_double(cells[3], at);
        r.lambda_beta = parse_double(cells[4], at);
        r.rms = parse_double(cells[5], at);
        rows.push_back(r);
    }
    if (!have_header) throw InputError(source + ": missing header");
    return rows;
}

std::vector<stats::ParameterRow> read_parameter_table(const std::string& path)
{
    std::ifstream in = open_in(path);
    return parse_parameter_table(in, path);
}

void write_parameter_table(std::ostream& out, const std::vector<stats::ParameterRow>& rows, bool header)
{
    if (header) out << "sample,h_mm,M_pa,beta,lambda_beta,rms\n";
    for (const auto& r : rows) {
        out << r.sample_id << ',' << format_double(1e3 * r.h) << ',' << format_double(r.M) << ','
            << format_double(r.beta) << ',' << format_double(r.lambda_beta) << ',' << format_double(r.rms) << '\n';
    }
}

void write_solve_result(std::ostream& out, const SolveResult& res)
{
    out << "field,z_m,t_s,value\n";
    for (std::size_t k = 0; k < res.t.size(); ++k) {
        for (std::size_t i = 0; i < res.z.size(); ++i) {
            out << "p," << format_double(res.z[i]) << ',' << format_double(res.t[k]) << ','
                << format_double(res.p[k][i]) << '\n';
        }
    }
    for (std::size_t k = 0; k < res.t.size(); ++k) {
        for (std::size_t i = 0; i < res.z.size(); ++i) {
            out << "u," << format_double(res.z[i]) << ',' << format_double(res.t[k]) << ','
                << format_double(res.u[k][i]) << '\n';
        }
    }
    // z = 0 is the loaded top, z = h the drained base
    const double z_base = res.z.empty() ? 0.0 : res.z.back();
    for (std::size_t k = 0; k < res.flux_base.size(); ++k) {
        out << "flux_base," << format_double(z_base) << ',' << format_double(res.t[k]) << ','
            << format_double(res.flux_base[k]) << '\n';
    }
    for (std::size_t k = 0; k < res.reaction_stress_top.size(); ++k) {
        out << "reaction_top,0," << format_double(res.t[k]) << ',' << format_double(res.reaction_stress_top[k])
            << '\n';
    }
}

OutputFile::OutputFile(const std::string& path) : os_(&std::cout), owned_(false)
{
    if (path.empty() || path == "-") return;
    auto* f = new std::ofstream(path);
    if (!*f) {
        delete f;
        throw InputError("cannot write '" + path + "'");
    }
    f->precision(17);
    os_ = f;
    owned_ = true;
}

OutputFile::~OutputFile()
{
    if (owned_) delete os_;
}

std::ostream& OutputFile::stream() { return *os_; }

} // namespace fracporo::io
