#pragma once

#include <string>
#include <string_view>
#include <vector>

// Process-wide fault injection used by the `validate` mutation smoke test.
// Every site is inert unless explicitly activated.
namespace fracporo::mutation {

enum class Site {
    none,
    gl_coefficient,      // perturbs c_2 of the Grunwald-Letnikov weights
    lanczos_coefficient, // perturbs one Lanczos coefficient in gamma()
    ml_series,           // perturbs the Mittag-Leffler series coefficients
    fourier_coefficient, // perturbs c_n in the closed-form series
    anova_dof,           // off-by-one in the within-group degrees of freedom
};

void activate(Site site);
void reset();
Site active();
bool is_active(Site site);

std::string name(Site site);
Site parse(std::string_view text);
std::vector<Site> all_sites();

/// RAII activation for tests.
class Scoped {
public:
    explicit Scoped(Site site);
    ~Scoped();
    Scoped(const Scoped&) = delete;
    Scoped& operator=(const Scoped&) = delete;

private:
    Site previous_;
};

} // namespace fracporo::mutation
