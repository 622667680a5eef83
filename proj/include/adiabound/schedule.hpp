#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "adiabound/errors.hpp"

namespace adiabound {

enum class ScheduleKind { linear, power, tanh_ramp, local_adiabatic_grover, tabulated };

std::string to_string(ScheduleKind kind);

/// A monotone map t -> lambda on [0, t_f] with lambda(0) = 0, lambda(t_f) = 1.
///
/// The shape lives in a profile over normalized time s = t / t_f; the run time
/// only stretches it. Instances are immutable.
class Schedule {
public:
    static Schedule linear(double run_time);
    /// lambda = s^exponent, exponent > 0.
    static Schedule power(double run_time, double exponent);
    /// Symmetric tanh ramp of steepness k > 0, shifted and scaled to hit the endpoints.
    static Schedule tanh_ramp(double run_time, double steepness);
    /// Grover local-adiabatic profile: d lambda / dt proportional to the squared gap.
    static Schedule local_adiabatic_grover(double run_time, long long n);
    /// Piecewise-linear through (t_i, lambda_i); t runs strictly upward from 0 to t_f.
    static Schedule tabulated(std::vector<double> times, std::vector<double> lambdas);

    static Schedule load_tabulated(std::istream& in);
    static Schedule load_tabulated(const std::filesystem::path& path);

    ScheduleKind kind() const { return kind_; }
    double run_time() const { return run_time_; }
    double parameter() const { return parameter_; }

    /// lambda as a function of normalized time s in [0, 1].
    double profile(double s) const;
    /// lambda(t) for t in [0, t_f]; DomainError outside.
    double evaluate(double t) const;

    /// Same profile, different run time.
    Schedule with_run_time(double run_time) const;

    /// Short label such as "linear", "power(2)", "local-adiabatic-grover(64)".
    std::string label() const;

private:
    friend double integral_of_lambda(const Schedule& s, double t_upper);

    Schedule(ScheduleKind kind, double run_time, double parameter);

    ScheduleKind kind_;
    double run_time_;
    double parameter_ = 0.0;  // exponent, steepness, or N
    // tabulated profile knots in normalized time
    std::vector<double> knots_s_;
    std::vector<double> knots_lambda_;
};

/// Family of schedules related by linear time rescaling; stored as its t_f = 1 member.
class Path {
public:
    explicit Path(const Schedule& any_member);

    const Schedule& base() const { return base_; }
    /// Schedule lambda(eta t), run time 1/eta.
    Schedule rescale(double eta) const;
    /// The member with the given run time.
    Schedule at_run_time(double run_time) const;

private:
    Schedule base_;
};

double evaluate(const Schedule& s, double t);
Schedule rescale(const Path& p, double eta);

/// Integral of lambda(t) dt over [0, t_upper].
///
/// Closed form for linear, power and tabulated profiles; adaptive Simpson
/// (relative tolerance 1e-10) otherwise.
double integral_of_lambda(const Schedule& s, double t_upper);

Schedule build_local_adiabatic_grover(long long n, double run_time);

}  // namespace adiabound
