#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "mcgehee/boundary.hpp"
#include "mcgehee/criteria.hpp"
#include "mcgehee/system.hpp"
#include "mcgehee/trajectory.hpp"

namespace mcgehee {

std::string analysis_text(const LagrangianSystem& sys, const CriterionReport& rep,
                          const std::optional<EscapeSweep>& sweep);
std::string analysis_json(const LagrangianSystem& sys, const CriterionReport& rep,
                          const std::optional<EscapeSweep>& sweep);

/// One block per fixed point: q*, f, nu*, eigenvalues (re, im), classification, flags.
std::string catalog_text(const FixedPointCatalog& cat);

/// Header plus one row per sample: time, r|norm_x, q_i|x_i, y_i|v_i, energy, nu,
/// with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
std::string trajectory_csv(const Trajectory& traj);

/// Writes to a temporary file beside `path` and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mcgehee
