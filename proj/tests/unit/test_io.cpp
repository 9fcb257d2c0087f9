#include "fracporo/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace fracporo;
using namespace fracporo::io;

namespace {

TimeSeries parse(const std::string& text, std::optional<Unit> unit = std::nullopt)
{
    std::istringstream in(text);
    return parse_timeseries_csv(in, "test.csv", unit);
}

// message of the InputError thrown by f, or "" if none
template <class F>
std::string error_of(F&& f)
{
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(TimeSeriesCsv, ParsesHeaderUnitAndMeta)
{
    const TimeSeries ts = parse("# h_mm = 3.7\n# free text comment\ntime_s,displacement_m\n0,0\n1.5,2e-6\n\n3,4.5e-6\n");
    EXPECT_EQ(ts.name, "displacement");
    EXPECT_EQ(ts.unit, Unit::m);
    EXPECT_EQ(ts.t, (std::vector<double>{0.0, 1.5, 3.0}));
    EXPECT_EQ(ts.v[2], 4.5e-6);
    ASSERT_EQ(ts.meta.count("h_mm"), 1u);
    EXPECT_EQ(ts.meta.at("h_mm"), "3.7");
    EXPECT_EQ(ts.meta.size(), 1u);
}

TEST(TimeSeriesCsv, ToleratesCrlfAndSpaces)
{
    const TimeSeries ts = parse("time_s, force_N\r\n0 , 1\r\n 2,+3\r\n");
    EXPECT_EQ(ts.unit, Unit::N);
    EXPECT_EQ(ts.v, (std::vector<double>{1.0, 3.0}));
}

TEST(TimeSeriesCsv, ErrorsNameTheLine)
{
    EXPECT_NE(error_of([] { parse("time_s,displacement_m\n0,0\n1,abc\n"); }).find("test.csv:3"), std::string::npos);
    EXPECT_NE(error_of([] { parse("time_s,displacement_m\n0,0\n1;2\n"); }).find("test.csv:3"), std::string::npos);
    EXPECT_NE(error_of([] { parse("# c\ntime_s,displacement_m\n0,0,7\n"); }).find("test.csv:3"), std::string::npos);
    EXPECT_NE(error_of([] { parse("time_s,displacement_m\n0,1,5\n"); }).find("expected 2 fields"), std::string::npos);
}

TEST(TimeSeriesCsv, RejectsNonMonotoneTime)
{
    const std::string msg = error_of([] { parse("time_s,displacement_m\n0,0\n2,1\n2,2\n"); });
    EXPECT_NE(msg.find("test.csv:4"), std::string::npos);
    EXPECT_NE(msg.find("strictly increasing"), std::string::npos);
    EXPECT_THROW(parse("time_s,displacement_m\n3,0\n1,1\n"), InputError);
}

TEST(TimeSeriesCsv, UnitMismatchIsAnError)
{
    EXPECT_THROW(parse("time_s,force_N\n0,1\n", Unit::m), InputError);
    EXPECT_THROW(parse("time_s,force_lbf\n0,1\n"), InputError);
    EXPECT_THROW(parse("time_s,force\n0,1\n"), InputError);
    EXPECT_NO_THROW(parse("time_s,weight_kg\n0,1\n", Unit::kg));
}

TEST(TimeSeriesCsv, RejectsMissingPieces)
{
    EXPECT_THROW(parse(""), InputError);
    EXPECT_THROW(parse("time_s,displacement_m\n"), InputError);
    EXPECT_THROW(parse("when,displacement_m\n0,0\n"), InputError);
    EXPECT_THROW(parse("time_s,displacement_m\n0,nan\n"), InputError);
    EXPECT_THROW(parse("time_s,displacement_m\n0,inf\n"), InputError);
    EXPECT_THROW(read_timeseries_csv("/nonexistent/file.csv"), InputError);
}

TEST(TimeSeriesCsv, SeventeenDigitRoundTripIsLossless)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TimeSeries ts;
    ts.name = "displacement";
    ts.meta["sample"] = "TK11BC";
    double t = 0.0;
    for (int i = 0; i < 500; ++i) {
        t += std::abs(u(rng)) + 1e-9;
        ts.t.push_back(t);
        ts.v.push_back(u(rng) * std::pow(10.0, 40.0 * u(rng)));
    }
    ts.v.push_back(std::numeric_limits<double>::denorm_min());
    ts.t.push_back(t + 1.0);
    ts.v.push_back(-std::numeric_limits<double>::max());
    ts.t.push_back(t + 2.0);

    std::ostringstream out;
    write_timeseries_csv(out, ts, {"written by a test"});
    const TimeSeries back = parse(out.str(), Unit::m);
    EXPECT_EQ(back.t, ts.t);
    EXPECT_EQ(back.v, ts.v);
    EXPECT_EQ(back.meta, ts.meta);
}

TEST(ParseDouble, StrictWholeField)
{
    EXPECT_EQ(parse_double(" 1.25e-3 ", "x"), 1.25e-3);
    EXPECT_THROW(parse_double("1.2.3", "x"), InputError);
    EXPECT_THROW(parse_double("1,5", "x"), InputError);
    EXPECT_THROW(parse_double("", "x"), InputError);
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(KeyValueFile, ParsesAndRejects)
{
    std::istringstream in("# comment\nK_pa = 1.67e5  # trailing\n\nname = demo\n");
    const KeyValues kv = parse_key_values(in, "demo.params");
    EXPECT_EQ(kv.number("K_pa"), 1.67e5);
    EXPECT_EQ(kv.text("name"), "demo");
    EXPECT_EQ(kv.number("G_pa", 5.0), 5.0);
    EXPECT_THROW(kv.number("G_pa"), InputError);

    std::istringstream dup("a = 1\na = 2\n");
    const std::string msg = error_of([&] { parse_key_values(dup, "dup.params"); });
    EXPECT_NE(msg.find("dup.params:2"), std::string::npos);
    std::istringstream noeq("a 1\n");
    EXPECT_THROW(parse_key_values(noeq), InputError);
}

TEST(Presets, ShippedPresetsLoad)
{
    const auto names = list_presets();
    for (const char* expected : {"draft-table-1", "final-table-1", "tk11bc"}) {
        EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;
    }
    const Preset t1 = load_preset("final-table-1");
    ASSERT_TRUE(t1.material.has_value());
    EXPECT_EQ(t1.material->K, 1.67e5);
    EXPECT_EQ(t1.material->G, 7.69e4);
    EXPECT_EQ(t1.h, 3e-3);
    EXPECT_EQ(t1.P_A, 7e4);
    EXPECT_NEAR(t1.params.gamma, 0.69688, 1e-5);

    const Preset tk = load_preset("tk11bc");
    EXPECT_TRUE(tk.params.incompressible);
    EXPECT_EQ(tk.params.M, 1.27e5);
    EXPECT_EQ(tk.params.beta, 0.73);
    EXPECT_EQ(tk.h, 3.7e-3);
    EXPECT_NEAR(tk.area(), 7.0685834705770345e-6, 1e-20);

    // a path works as well as a name
    const Preset by_path = load_preset(preset_directory() + "/tk11bc.params");
    EXPECT_EQ(by_path.params.lambda_beta, tk.params.lambda_beta);
    EXPECT_THROW(load_preset("no-such-preset"), InputError);
}

TEST(Presets, ValidationErrors)
{
    auto from = [](const std::string& text) {
        std::istringstream in(text);
        return preset_from_key_values(parse_key_values(in, "bad.params"));
    };
    const std::string base = "model = incompressible\nM_pa = 1e5\nbeta = 0.5\nlambda_beta = 1e-12\nP_A_pa = 7e4\n";
    EXPECT_NO_THROW(from(base + "h_m = 3e-3\n"));
    EXPECT_THROW(from(base), InputError);                         // no h_m
    EXPECT_THROW(from(base + "h_m = 3e-3\ncolour = red\n"), InputError);
    EXPECT_THROW(from(base + "h_m = -1\n"), InputError);
    EXPECT_THROW(from("model = incompressible\nM_pa = 1e5\nbeta = 1.5\nlambda_beta = 1e-12\nP_A_pa = 7e4\nh_m = 1\n"),
                 InputError);
    EXPECT_THROW(from("model = elastic\nh_m = 1\nP_A_pa = 1\n"), InputError);
}

TEST(ParameterTable, RoundTripAndUnits)
{
    const auto rows = read_parameter_table(preset_directory() + "/fitted_parameters.csv");
    ASSERT_EQ(rows.size(), 29u);
    EXPECT_EQ(rows[0].sample_id, "TK11BC");
    EXPECT_DOUBLE_EQ(rows[0].h, 3.7e-3);
    EXPECT_EQ(rows[0].region, stats::Region::body);
    EXPECT_EQ(rows[0].direction, stats::Direction::circumferential);

    std::ostringstream out;
    write_parameter_table(out, rows);
    std::istringstream in(out.str());
    const auto back = parse_parameter_table(in);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].sample_id, rows[i].sample_id);
        EXPECT_DOUBLE_EQ(back[i].h, rows[i].h);
        EXPECT_EQ(back[i].M, rows[i].M);
        EXPECT_EQ(back[i].beta, rows[i].beta);
        EXPECT_EQ(back[i].lambda_beta, rows[i].lambda_beta);
        EXPECT_EQ(back[i].rms, rows[i].rms);
    }
}

TEST(ParameterTable, RejectsBadHeaderAndRows)
{
    std::istringstream wrong("sample,h,M,beta,lambda,rms\n");
    EXPECT_THROW(parse_parameter_table(wrong), InputError);
    std::istringstream bad_id("sample,h_mm,M_pa,beta,lambda_beta,rms\nTK1XQ,3,1e5,0.5,1e-12,1e-5\n");
    EXPECT_THROW(parse_parameter_table(bad_id), InputError);
    std::istringstream short_row("sample,h_mm,M_pa,beta,lambda_beta,rms\nTK1BC,3,1e5\n");
    const std::string msg = error_of([&] { parse_parameter_table(short_row, "p.csv"); });
    EXPECT_NE(msg.find("p.csv:2"), std::string::npos);
}

TEST(SolveOutput, LongFormatWithBoundaryDepths)
{
    SolveResult r;
    r.z = {0.0, 1e-3};
    r.t = {0.0, 0.5};
    r.p = {{7.0, 0.0}, {3.0, 0.0}};
    r.u = {{2e-6, 0.0}, {3e-6, 0.0}};
    r.flux_base = {0.0, 1e-7};
    r.reaction_stress_top = {7.0, 7.0};
    std::ostringstream out;
    write_solve_result(out, r);
    const std::string s = out.str();
    EXPECT_EQ(s.rfind("field,z_m,t_s,value\n", 0), 0u);
    EXPECT_NE(s.find("p,0,0.5,3\n"), std::string::npos);
    EXPECT_NE(s.find("u,0,0.5,3.0000000000000001e-06\n"), std::string::npos);
    // base flux sits at z = h, the top reaction at z = 0
    EXPECT_NE(s.find("flux_base,0.001,0.5,9.9999999999999995e-08\n"), std::string::npos);
    EXPECT_NE(s.find("reaction_top,0,0.5,7\n"), std::string::npos);
    std::size_t lines = 0;
    for (char c : s) lines += c == '\n';
    EXPECT_EQ(lines, 1u + 4u + 4u + 2u + 2u);
}
