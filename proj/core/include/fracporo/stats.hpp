#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fracporo::stats {

enum class Region { body, anterior, posterior };
enum class Direction { circumferential, radial, vertical };
enum class Field { M, beta, lambda_beta, rms };
enum class GroupBy { region, direction, region_direction };

struct SampleLocation {
    Region region;
    Direction direction;
};

/**
 * @brief Location from a sample label such as "TK16BR2".
 *
 * Trailing replicate digits are dropped; the last two letters give the region
 * (B/A/P) and the direction (C/R/V).
 */
SampleLocation parse_sample_id(const std::string& id);

std::string to_string(Region r);
std::string to_string(Direction d);
std::string to_string(Field f);
Region parse_region(const std::string& s);
Direction parse_direction(const std::string& s);
Field parse_field(const std::string& s);

/// One fitted sample (SI units).
struct ParameterRow {
    std::string sample_id;
    Region region = Region::body;
    Direction direction = Direction::circumferential;
    double h = 0.0; ///< m
    double M = 0.0;
    double beta = 0.0;
    double lambda_beta = 0.0;
    double rms = 0.0;
};

double field_value(const ParameterRow& row, Field f);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;       ///< n-1 denominator; 0 for a single value
    bool single = false;   ///< sd set to 0 by convention
};

Moments moments(const std::vector<double>& v);

struct GroupSummary {
    std::string group;
    Moments m;
};

/// Mean and sample SD of `field` per group, groups in enum order, optionally after IQR exclusion per group.
std::vector<GroupSummary> group_summary(const std::vector<ParameterRow>& rows, Field field, GroupBy by,
                                        bool exclude_outliers = false);

struct AnovaResult {
    double F = 0.0;
    double p = 1.0;
    int df_between = 0;
    int df_within = 0;
    double ss_between = 0.0;
    double ss_within = 0.0;
};

/// Classical one-way ANOVA.
AnovaResult anova_one_way(const std::vector<std::vector<double>>& groups);

/// Upper tail P(F_{d1,d2} > F) via the regularized incomplete beta function.
double f_distribution_sf(double F, double d1, double d2);

/// Pooled-variance two-sample t statistic.
double pooled_t_statistic(const std::vector<double>& a, const std::vector<double>& b);

/// Percentile with the (i - 0.5)/n plotting positions and linear interpolation.
double quantile(std::vector<double> v, double q);

struct OutlierSplit {
    std::vector<double> kept;
    std::vector<std::size_t> excluded; ///< indices into the input
    double lower_fence = 0.0;
    double upper_fence = 0.0;
};

/// Drop points outside [Q1 - k IQR, Q3 + k IQR].
OutlierSplit split_outliers(const std::vector<double>& v, double k = 1.5);

struct TableAnova {
    std::vector<std::string> groups;
    std::vector<std::vector<double>> values;
    std::vector<std::string> excluded_samples;
    AnovaResult result;
};

/// ANOVA of `field` across directions, optionally within one region and with IQR exclusion per group.
TableAnova anova_by_direction(const std::vector<ParameterRow>& rows, Field field, std::optional<Region> region,
                              bool exclude_outliers);

} // namespace fracporo::stats
