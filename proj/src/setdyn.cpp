#include "mcgehee/setdyn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mcgehee/errors.hpp"

namespace mcgehee {

void PointCloud::append(const PointCloud& other) {
    points.insert(points.end(), other.points.begin(), other.points.end());
}

double distance_to_cloud(const Eigen::VectorXd& x, const PointCloud& C) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : C.points) {
        best = std::min(best, (p - x).squaredNorm());
    }
    return std::sqrt(best);
}

double directed_hausdorff(const PointCloud& A, const PointCloud& B) {
    if (A.empty() || B.empty()) {
        throw PreconditionError("Hausdorff distance needs non-empty clouds");
    }
    double worst = 0.0;
    for (const auto& a : A.points) {
        worst = std::max(worst, distance_to_cloud(a, B));
    }
    return worst;
}

double hausdorff_distance(const PointCloud& A, const PointCloud& B) {
    return std::max(directed_hausdorff(A, B), directed_hausdorff(B, A));
}

double mean_nearest_neighbor_spacing(const PointCloud& C) {
    const size_t m = C.size();
    if (m < 2) {
        return 0.0;
    }
    double total = 0.0;
    for (size_t i = 0; i < m; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < m; ++j) {
            if (j != i) {
                best = std::min(best, (C.points[i] - C.points[j]).squaredNorm());
            }
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(m);
}

PointCloud limsup_sets(const std::vector<PointCloud>& seq, double eps) {
    if (seq.empty()) {
        throw PreconditionError("limsup of an empty sequence");
    }
    PointCloud all;
    for (const auto& A : seq) {
        all.append(A);
    }
    if (eps <= 0.0) {
        eps = 2.0 * mean_nearest_neighbor_spacing(all);
    }
    // Tail unions are nested, so the smallest one, the last member, decides every tail test.
    const PointCloud& last = seq.back();
    PointCloud out;
    if (last.empty()) {
        return out;
    }
    for (const auto& p : all.points) {
        if (distance_to_cloud(p, last) <= eps) {
            out.points.push_back(p);
        }
    }
    return out;
}

namespace {

std::vector<std::vector<int>> hop_graph(const std::vector<Eigen::VectorXd>& images, const PointCloud& cloud,
                                        double eps) {
    std::vector<std::vector<int>> adj(images.size());
    for (size_t i = 0; i < images.size(); ++i) {
        for (size_t j = 0; j < cloud.size(); ++j) {
            if ((images[i] - cloud.points[j]).norm() < eps) {
                adj[i].push_back(static_cast<int>(j));
            }
        }
    }
    return adj;
}

}  // namespace

bool epsilon_chain_exists(const FlowMap& flow_map, const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                          double eps, int max_hops, const PointCloud& cloud) {
    if (!(eps > 0.0)) {
        throw PreconditionError("epsilon must be positive");
    }
    if (max_hops < 1) {
        return false;
    }
    const Eigen::VectorXd first = flow_map(from);
    if ((first - to).norm() < eps) {
        return true;
    }
    std::vector<Eigen::VectorXd> images;
    images.reserve(cloud.size());
    for (const auto& p : cloud.points) {
        images.push_back(flow_map(p));
    }
    std::vector<int> depth(cloud.size(), -1);
    std::deque<int> frontier;
    for (size_t j = 0; j < cloud.size(); ++j) {
        if ((first - cloud.points[j]).norm() < eps) {
            depth[j] = 1;
            frontier.push_back(static_cast<int>(j));
        }
    }
    while (!frontier.empty()) {
        const int i = frontier.front();
        frontier.pop_front();
        if (depth[i] >= max_hops) {
            continue;
        }
        if ((images[i] - to).norm() < eps) {
            return true;
        }
        for (size_t j = 0; j < cloud.size(); ++j) {
            if (depth[j] < 0 && (images[i] - cloud.points[j]).norm() < eps) {
                depth[j] = depth[i] + 1;
                frontier.push_back(static_cast<int>(j));
            }
        }
    }
    return false;
}

std::vector<bool> chain_recurrent_points(const FlowMap& flow_map, const PointCloud& cloud, double eps,
                                         int max_hops) {
    std::vector<Eigen::VectorXd> images;
    images.reserve(cloud.size());
    for (const auto& p : cloud.points) {
        images.push_back(flow_map(p));
    }
    const auto adj = hop_graph(images, cloud, eps);
    const size_t m = cloud.size();
    std::vector<bool> out(m, false);
    std::vector<int> depth(m);
    for (size_t s = 0; s < m; ++s) {
        std::fill(depth.begin(), depth.end(), -1);
        std::deque<int> frontier;
        for (int j : adj[s]) {
            if (depth[j] < 0) {
                depth[j] = 1;
                frontier.push_back(j);
            }
        }
        while (!frontier.empty() && !out[s]) {
            const int i = frontier.front();
            frontier.pop_front();
            if (static_cast<size_t>(i) == s) {
                out[s] = true;
                break;
            }
            if (depth[i] >= max_hops) {
                continue;
            }
            for (int j : adj[i]) {
                if (depth[j] < 0) {
                    depth[j] = depth[i] + 1;
                    frontier.push_back(j);
                }
            }
        }
    }
    return out;
}

PointCloud cloud_from_trajectory(const Trajectory& traj, double dt,
                                 const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map) {
    PointCloud out;
    if (traj.empty()) {
        return out;
    }
    if (!(dt > 0.0)) {
        throw InputError("cloud spacing must be positive");
    }
    const double t0 = traj.front().time;
    const double t1 = traj.back().time;
    const long count = static_cast<long>(std::floor((t1 - t0) / dt));
    for (long k = 0; k <= count; ++k) {
        const Eigen::VectorXd s = traj.state_at(std::min(t0 + k * dt, t1));
        out.points.push_back(map ? map(s) : s);
    }
    if (t0 + count * dt < t1) {
        const Eigen::VectorXd& s = traj.back().state;
        out.points.push_back(map ? map(s) : s);
    }
    return out;
}

void write_cloud_csv(std::ostream& out, const PointCloud& C, const std::vector<std::string>& header) {
    for (size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n' << std::setprecision(17);
    for (const auto& p : C.points) {
        for (int i = 0; i < p.size(); ++i) {
            out << (i ? "," : "") << p[i];
        }
        out << '\n';
    }
}

PointCloud read_cloud_csv(std::istream& in) {
    PointCloud out;
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("cloud CSV is empty");
    }
    long width = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InputError("cloud CSV: bad number '" + cell + "'");
            }
        }
        if (width >= 0 && static_cast<long>(row.size()) != width) {
            throw InputError("cloud CSV: ragged rows");
        }
        width = static_cast<long>(row.size());
        out.points.push_back(Eigen::Map<Eigen::VectorXd>(row.data(), width));
    }
    return out;
}

}  // namespace mcgehee
