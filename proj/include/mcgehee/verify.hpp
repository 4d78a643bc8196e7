#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcgehee/boundary.hpp"
#include "mcgehee/integrate.hpp"
#include "mcgehee/system.hpp"

namespace mcgehee {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< measured error or residual
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    int samples = 50;
    IntegratorConfig integrator;
    CriticalSearchOptions search;
};

/// Runs the invariant suites on one system: Euler identity, radial reassembly,
/// energy conservation, boundary energy residual, nu derivative, nu monotonicity,
/// flow equivalence and the eigenvalue cross-check. A check with nothing to test
/// (e.g. no subcritical states) passes with a note in `detail`.
std::vector<CheckResult> run_verify_suite(const LagrangianSystem& sys, const VerifyOptions& opts);

bool all_passed(const std::vector<CheckResult>& results);
std::string format_results(const std::vector<CheckResult>& results);

}  // namespace mcgehee
