#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcgehee/boundary.hpp"
#include "mcgehee/errors.hpp"
#include "mcgehee/germ.hpp"
#include "mcgehee/integrate.hpp"
#include "mcgehee/system.hpp"

namespace mcgehee {

/// Unreadable or malformed configuration.
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct IntegrateSection {
    Frame frame = Frame::Original;
    std::vector<double> state;  ///< (x, v) or (r, q, y)
};

struct EscapeSection {
    double r_B = 0.0;  ///< 0 picks r_E / 2
    int count = 10;
    std::optional<std::vector<double>> state;  ///< single (x, v) start instead of a sweep
};

struct BoomerangSection {
    std::vector<int> ns{4, 8, 16, 32};
    double r_cut = 1.0;
    double spacing = 0.01;
    std::optional<int> critical_point;  ///< index into the critical-point list; default: first local minimum with f < 0
};

/// One experiment: a system plus integrator, search and command settings.
///
/// Metric entries give full coefficients g_ab; entries not listed default to the
/// identity. Magnetic entries give the components A_i.
struct RunConfig {
    int dimension = 0;
    int truncation = 0;
    double domain_radius = 0.0;
    Germ potential;
    MetricField metric;
    MagneticPotential magnetic;

    IntegratorConfig integrator;
    CriticalSearchOptions search;
    std::uint64_t seed = kDefaultSeed;

    IntegrateSection integrate;
    EscapeSection escape;
    BoomerangSection boomerang;

    /// Throws ValidationError naming the first failed condition.
    LagrangianSystem make_system() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace mcgehee
