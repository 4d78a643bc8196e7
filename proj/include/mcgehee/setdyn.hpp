#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcgehee/trajectory.hpp"

namespace mcgehee {

/// Finite sample of a compact set in Euclidean embedding coordinates.
struct PointCloud {
    std::vector<Eigen::VectorXd> points;

    bool empty() const { return points.empty(); }
    size_t size() const { return points.size(); }
    void append(const PointCloud& other);
};

/// max over a in A of the distance from a to B. Throws PreconditionError on an empty cloud.
double directed_hausdorff(const PointCloud& A, const PointCloud& B);
double hausdorff_distance(const PointCloud& A, const PointCloud& B);
/// Distance from x to the nearest point of C.
double distance_to_cloud(const Eigen::VectorXd& x, const PointCloud& C);

/// Mean over points of the distance to their nearest other point; 0 for fewer than two points.
double mean_nearest_neighbor_spacing(const PointCloud& C);

/// Points of the union of the sequence that lie within eps of every tail union
/// A_k u A_{k+1} u ... ; eps <= 0 selects twice the mean nearest-neighbour spacing
/// of the union.
PointCloud limsup_sets(const std::vector<PointCloud>& seq, double eps);

using FlowMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Breadth-first search for an (eps, T)-chain from `from` to `to` with intermediate
/// points restricted to `cloud`: a hop a -> b is allowed when |flow_map(a) - b| < eps.
/// At least one hop is made, so from == to asks for a chain back to the start.
bool epsilon_chain_exists(const FlowMap& flow_map, const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                          double eps, int max_hops, const PointCloud& cloud);

/// For every cloud point, whether an eps-chain inside the cloud returns to it.
std::vector<bool> chain_recurrent_points(const FlowMap& flow_map, const PointCloud& cloud, double eps,
                                         int max_hops);

/// Samples of a trajectory on a uniform time grid of spacing dt (plus the endpoint),
/// from the Hermite interpolant. `map` transforms each state when given.
PointCloud cloud_from_trajectory(const Trajectory& traj, double dt,
                                 const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map = {});

/// CSV with a header row and one point per line.
void write_cloud_csv(std::ostream& out, const PointCloud& C, const std::vector<std::string>& header);
PointCloud read_cloud_csv(std::istream& in);

}  // namespace mcgehee
