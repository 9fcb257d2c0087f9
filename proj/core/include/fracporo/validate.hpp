#pragma once

#include "fracporo/mutation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fracporo {

struct CheckResult {
    std::string name;
    std::string group;
    double measured = 0.0;
    double tolerance = 0.0;
    bool at_least = false; ///< pass when measured >= tolerance instead of <=
    bool pass = false;
    std::string detail;
};

struct ValidateOptions {
    std::uint64_t seed = 1;
    /// Restrict to these groups (empty = all): special, gl, terzaghi, solver, flux, fit, anova.
    std::vector<std::string> groups;
};

struct ValidateReport {
    mutation::Site mutation = mutation::Site::none;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool all_pass() const;
    const CheckResult* find(const std::string& name) const;
};

/// Run every oracle check under the currently active mutation site.
ValidateReport run_validate(const ValidateOptions& options = {});

/// Machine-readable report (JSON object with one entry per check).
std::string to_json(const ValidateReport& report);

/// One line per check: PASS/FAIL, name, measured, tolerance.
std::string to_text(const ValidateReport& report);

} // namespace fracporo
