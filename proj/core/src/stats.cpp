#include "fracporo/stats.hpp"

#include "fracporo/mutation.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace fracporo::stats {

SampleLocation parse_sample_id(const std::string& id)
{
    std::string s = id;
    while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.size() < 2) throw std::invalid_argument("sample id '" + id + "': missing location suffix");
    const char r = static_cast<char>(std::toupper(static_cast<unsigned char>(s[s.size() - 2])));
    const char d = static_cast<char>(std::toupper(static_cast<unsigned char>(s[s.size() - 1])));
    SampleLocation loc{};
    switch (r) {
    case 'B': loc.region = Region::body; break;
    case 'A': loc.region = Region::anterior; break;
    case 'P': loc.region = Region::posterior; break;
    default: throw std::invalid_argument("sample id '" + id + "': unknown region letter");
    }
    switch (d) {
    case 'C': loc.direction = Direction::circumferential; break;
    case 'R': loc.direction = Direction::radial; break;
    case 'V': loc.direction = Direction::vertical; break;
    default: throw std::invalid_argument("sample id '" + id + "': unknown direction letter");
    }
    return loc;
}

std::string to_string(Region r)
{
    switch (r) {
    case Region::body: return "body";
    case Region::anterior: return "anterior";
    case Region::posterior: return "posterior";
    }
    return "?";
}

std::string to_string(Direction d)
{
    switch (d) {
    case Direction::circumferential: return "circumferential";
    case Direction::radial: return "radial";
    case Direction::vertical: return "vertical";
    }
    return "?";
}

std::string to_string(Field f)
{
    switch (f) {
    case Field::M: return "M";
    case Field::beta: return "beta";
    case Field::lambda_beta: return "lambda_beta";
    case Field::rms: return "rms";
    }
    return "?";
}

namespace {

std::string lower(std::string s)
{
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

Region parse_region(const std::string& s)
{
    const std::string v = lower(s);
    if (v == "body" || v == "b") return Region::body;
    if (v == "anterior" || v == "a") return Region::anterior;
    if (v == "posterior" || v == "p") return Region::posterior;
    throw std::invalid_argument("unknown region '" + s + "'");
}

Direction parse_direction(const std::string& s)
{
    const std::string v = lower(s);
    if (v == "circumferential" || v == "c") return Direction::circumferential;
    if (v == "radial" || v == "r") return Direction::radial;
    if (v == "vertical" || v == "v") return Direction::vertical;
    throw std::invalid_argument("unknown direction '" + s + "'");
}

Field parse_field(const std::string& s)
{
    if (s == "M") return Field::M;
    if (s == "beta") return Field::beta;
    if (s == "lambda_beta") return Field::lambda_beta;
    if (s == "rms") return Field::rms;
    throw std::invalid_argument("unknown field '" + s + "' (M, beta, lambda_beta, rms)");
}

double field_value(const ParameterRow& row, Field f)
{
    switch (f) {
    case Field::M: return row.M;
    case Field::beta: return row.beta;
    case Field::lambda_beta: return row.lambda_beta;
    case Field::rms: return row.rms;
    }
    throw std::invalid_argument("field_value: bad field");
}

Moments moments(const std::vector<double>& v)
{
    if (v.empty()) throw std::invalid_argument("moments: empty group");
    Moments m;
    m.n = v.size();
    double s = 0.0;
    for (double x : v) s += x;
    m.mean = s / static_cast<double>(m.n);
    if (m.n == 1) {
        m.single = true;
        return m;
    }
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(m.n - 1));
    return m;
}

std::vector<GroupSummary> group_summary(const std::vector<ParameterRow>& rows, Field field, GroupBy by,
                                        bool exclude_outliers)
{
    const Region regions[] = {Region::body, Region::anterior, Region::posterior};
    const Direction dirs[] = {Direction::circumferential, Direction::radial, Direction::vertical};
    std::vector<GroupSummary> out;
    auto add = [&](const std::string& name, auto pred) {
        std::vector<double> v;
        for (const auto& r : rows) {
            if (pred(r)) v.push_back(field_value(r, field));
        }
        if (v.empty()) return;
        if (exclude_outliers) v = split_outliers(v).kept;
        out.push_back({name, moments(v)});
    };
    if (rows.empty()) throw std::invalid_argument("group_summary: empty table");
    switch (by) {
    case GroupBy::region:
        for (Region g : regions) add(to_string(g), [&](const ParameterRow& r) { return r.region == g; });
        break;
    case GroupBy::direction:
        for (Direction g : dirs) add(to_string(g), [&](const ParameterRow& r) { return r.direction == g; });
        break;
    case GroupBy::region_direction:
        for (Region g : regions) {
            for (Direction d : dirs) {
                add(to_string(g) + "/" + to_string(d),
                    [&](const ParameterRow& r) { return r.region == g && r.direction == d; });
            }
        }
        break;
    }
    return out;
}

double f_distribution_sf(double F, double d1, double d2)
{
    if (!(d1 >= 1.0) || !(d2 >= 1.0)) throw std::domain_error("f_distribution_sf: need d1, d2 >= 1");
    if (std::isnan(F) || F < 0.0) throw std::domain_error("f_distribution_sf: need F >= 0");
    if (F == 0.0) return 1.0;
    if (std::isinf(F)) return 0.0;
    // P(X > F) = I_{d2/(d2 + d1 F)}(d2/2, d1/2)
    return boost::math::ibeta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * F));
}

AnovaResult anova_one_way(const std::vector<std::vector<double>>& groups)
{
    if (groups.size() < 2) throw std::invalid_argument("anova: need at least two groups");
    std::size_t N = 0;
    double total = 0.0;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("anova: empty group");
        for (double x : g) {
            if (!std::isfinite(x)) throw std::invalid_argument("anova: non-finite observation");
            total += x;
        }
        N += g.size();
    }
    const std::size_t k = groups.size();
    if (N <= k) throw std::invalid_argument("anova: need more observations than groups");
    const double grand = total / static_cast<double>(N);

    AnovaResult r;
    for (const auto& g : groups) {
        double s = 0.0;
        for (double x : g) s += x;
        const double mean = s / static_cast<double>(g.size());
        r.ss_between += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
        for (double x : g) r.ss_within += (x - mean) * (x - mean);
    }
    r.df_between = static_cast<int>(k - 1);
    r.df_within = static_cast<int>(N - k);
    if (mutation::is_active(mutation::Site::anova_dof)) r.df_within += 1;

    // relative to the data spread, so shifting the data does not create a spurious zero
    double scale = 0.0;
    for (const auto& g : groups) {
        for (double x : g) scale = std::max(scale, std::abs(x - grand));
    }
    const double tiny = 1e-28 * scale * scale * static_cast<double>(N);
    if (r.ss_within <= tiny) {
        if (r.ss_between <= tiny) throw std::domain_error("anova: zero variance within and between groups");
        r.F = INFINITY;
        r.p = 0.0;
        return r;
    }
    r.F = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
    r.p = f_distribution_sf(r.F, r.df_between, r.df_within);
    return r;
}

double pooled_t_statistic(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() + b.size() < 3 || a.empty() || b.empty()) throw std::invalid_argument("pooled_t: too few samples");
    const Moments ma = moments(a), mb = moments(b);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double sp2 = ((na - 1.0) * ma.sd * ma.sd + (nb - 1.0) * mb.sd * mb.sd) / (na + nb - 2.0);
    return (ma.mean - mb.mean) / std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
}

double quantile(std::vector<double> v, double q)
{
    if (v.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile: q must be in [0, 1]");
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    const double pos = q * n - 0.5; // 0-based position of plotting point (i - 0.5)/n
    if (pos <= 0.0) return v.front();
    if (pos >= n - 1.0) return v.back();
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double w = pos - static_cast<double>(i);
    return v[i] + w * (v[i + 1] - v[i]);
}

OutlierSplit split_outliers(const std::vector<double>& v, double k)
{
    if (v.empty()) throw std::invalid_argument("split_outliers: empty sample");
    OutlierSplit s;
    const double q1 = quantile(v, 0.25), q3 = quantile(v, 0.75);
    s.lower_fence = q1 - k * (q3 - q1);
    s.upper_fence = q3 + k * (q3 - q1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < s.lower_fence || v[i] > s.upper_fence) {
            s.excluded.push_back(i);
        } else {
            s.kept.push_back(v[i]);
        }
    }
    return s;
}

TableAnova anova_by_direction(const std::vector<ParameterRow>& rows, Field field, std::optional<Region> region,
                              bool exclude_outliers)
{
    TableAnova out;
    for (Direction d : {Direction::circumferential, Direction::radial, Direction::vertical}) {
        std::vector<double> vals;
        std::vector<std::string> ids;
        for (const auto& r : rows) {
            if (r.direction != d || (region && r.region != *region)) continue;
            vals.push_back(field_value(r, field));
            ids.push_back(r.sample_id);
        }
        if (vals.empty()) continue;
        if (exclude_outliers) {
            const OutlierSplit s = split_outliers(vals);
            for (std::size_t i : s.excluded) out.excluded_samples.push_back(ids[i]);
            vals = s.kept;
        }
        out.groups.push_back(to_string(d));
        out.values.push_back(std::move(vals));
    }
    out.result = anova_one_way(out.values);
    return out;
}

} // namespace fracporo::stats
