#include "fracporo/mutation.hpp"

#include <atomic>
#include <stdexcept>

namespace fracporo::mutation {

namespace {
std::atomic<Site> g_site{Site::none};
}

void activate(Site site) { g_site.store(site, std::memory_order_relaxed); }
void reset() { activate(Site::none); }
Site active() { return g_site.load(std::memory_order_relaxed); }
bool is_active(Site site) { return site != Site::none && active() == site; }

std::string name(Site site)
{
    switch (site) {
    case Site::none: return "none";
    case Site::gl_coefficient: return "gl-coefficient";
    case Site::lanczos_coefficient: return "lanczos-coefficient";
    case Site::ml_series: return "ml-series";
    case Site::fourier_coefficient: return "fourier-coefficient";
    case Site::anova_dof: return "anova-dof";
    }
    return "unknown";
}

Site parse(std::string_view text)
{
    for (Site s : all_sites()) {
        if (name(s) == text) return s;
    }
    if (text == "none") return Site::none;
    throw std::invalid_argument("unknown mutation site: " + std::string(text));
}

std::vector<Site> all_sites()
{
    return {Site::gl_coefficient, Site::lanczos_coefficient, Site::ml_series,
            Site::fourier_coefficient, Site::anova_dof};
}

Scoped::Scoped(Site site) : previous_(active()) { activate(site); }
Scoped::~Scoped() { activate(previous_); }

} // namespace fracporo::mutation
