#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcgehee/state.hpp"

namespace mcgehee {

enum class Frame { Original, Blown };

enum class Termination { TimeOut, DomainExit, FixedPoint, Event, StepUnderflow };

std::string to_string(Termination t);
std::string to_string(Frame f);

/// Cubic Hermite interpolant on [t0, t0 + h] at t0 + theta h.
Eigen::VectorXd hermite_value(const Eigen::VectorXd& y0, const Eigen::VectorXd& d0,
                              const Eigen::VectorXd& y1, const Eigen::VectorXd& d1, double h,
                              double theta);
/// Time derivative of the same interpolant.
Eigen::VectorXd hermite_derivative(const Eigen::VectorXd& y0, const Eigen::VectorXd& d0,
                                   const Eigen::VectorXd& y1, const Eigen::VectorXd& d1, double h,
                                   double theta);

/// One accepted integrator step. `energy` is H in the original frame and the
/// rescaled energy in the blown frame.
struct Sample {
    double time = 0.0;
    Eigen::VectorXd state;
    Eigen::VectorXd derivative;
    double energy = 0.0;
    double nu = 0.0;
};

/// Ordered samples of an orbit; times are strictly increasing.
struct Trajectory {
    Frame frame = Frame::Original;
    int dim = 0;
    std::vector<Sample> samples;
    Termination termination = Termination::TimeOut;

    bool empty() const { return samples.empty(); }
    size_t size() const { return samples.size(); }
    const Sample& front() const { return samples.front(); }
    const Sample& back() const { return samples.back(); }

    McGeheeState blown_state(size_t i) const { return McGeheeState::unpack(samples[i].state, dim); }
    PhaseState phase_state(size_t i) const { return PhaseState::unpack(samples[i].state, dim); }

    /// Cubic Hermite interpolation from stored states and derivatives.
    /// Throws InputError outside [front().time, back().time].
    Eigen::VectorXd state_at(double t) const;
};

}  // namespace mcgehee
