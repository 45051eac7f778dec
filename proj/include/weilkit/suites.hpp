#pragma once

#include "weilkit/fibered.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace weilkit {

struct SuiteConfig {
    std::uint64_t seed = 1;
    /// Sampled points per check.
    std::size_t samples = 20;
    /// Float adds maps with transcendental nodes to the functor battery.
    ScalarMode mode = ScalarMode::ExactRational;
    /// Add mutated inputs; each must be rejected by the checker.
    bool negative_controls = false;
};

/// "axioms", "microlinear", "exponentiable", "fibered", "vertical".
const std::vector<std::string> &suite_names();

/// Throws std::invalid_argument for an unknown name, and for float mode on
/// suites that are exact by construction.
Report run_suite(const std::string &name, const SuiteConfig &config);

Report axioms_suite(const SuiteConfig &config);
Report microlinear_suite(const SuiteConfig &config);
Report exponentiable_suite(const SuiteConfig &config);
Report fibered_suite(const SuiteConfig &config);
Report vertical_suite(const SuiteConfig &config);

/// Short label, e.g. "equalizer of 2 arrows on [Q[x]/(x^2), ...]; apex dim 3".
std::string describe(const DiagramInWeil &d);

/// Entry for a negative control: PASS iff the checker rejected the input.
ReportEntry control_entry(std::string check, std::string instance, bool accepted, const std::string &detail);

} // namespace weilkit
