#include "mcgehee/trajectory.hpp"

#include <algorithm>

#include "mcgehee/errors.hpp"

namespace mcgehee {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::TimeOut: return "time-out";
        case Termination::DomainExit: return "domain-exit";
        case Termination::FixedPoint: return "fixed-point-convergence";
        case Termination::Event: return "event";
        case Termination::StepUnderflow: return "step-underflow";
    }
    return "unknown";
}

std::string to_string(Frame f) { return f == Frame::Original ? "original" : "blown"; }

Eigen::VectorXd hermite_value(const Eigen::VectorXd& y0, const Eigen::VectorXd& d0,
                              const Eigen::VectorXd& y1, const Eigen::VectorXd& d1, double h,
                              double theta) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
}

Eigen::VectorXd hermite_derivative(const Eigen::VectorXd& y0, const Eigen::VectorXd& d0,
                                   const Eigen::VectorXd& y1, const Eigen::VectorXd& d1, double h,
                                   double theta) {
    const double t2 = theta * theta;
    return ((6 * t2 - 6 * theta) * y0 + (-6 * t2 + 6 * theta) * y1) / h +
           (3 * t2 - 4 * theta + 1) * d0 + (3 * t2 - 2 * theta) * d1;
}

Eigen::VectorXd Trajectory::state_at(double t) const {
    if (samples.empty() || t < samples.front().time || t > samples.back().time) {
        throw InputError("interpolation time outside the trajectory span");
    }
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const Sample& s, double value) { return s.time < value; });
    if (it->time == t) {
        return it->state;
    }
    const Sample& b = *it;
    const Sample& a = *(it - 1);
    const double h = b.time - a.time;
    return hermite_value(a.state, a.derivative, b.state, b.derivative, h, (t - a.time) / h);
}

}  // namespace mcgehee
