#include "adiabound/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace adiabound {

namespace {

constexpr double kEndpointTolerance = 1e-12;
constexpr double kQuadratureRelTol = 1e-10;

void require_run_time(double run_time) {
    if (!(run_time > 0.0) || !std::isfinite(run_time)) {
        throw DomainError("Schedule: run time must be positive and finite");
    }
}

std::string format_number(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson on [a, b]. The absolute target is rel_tol times a coarse
// magnitude estimate; the integrands here are bounded and nonnegative.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (b <= a) return 0.0;
    // seed with a few panels so a narrow feature cannot hide between three nodes
    constexpr int kPanels = 8;
    double coarse = 0.0;
    std::vector<double> nodes(2 * kPanels + 1);
    for (int i = 0; i <= 2 * kPanels; ++i) nodes[static_cast<std::size_t>(i)] = f(a + (b - a) * i / (2.0 * kPanels));
    for (int i = 0; i <= 2 * kPanels; ++i) coarse += std::abs(nodes[static_cast<std::size_t>(i)]);
    coarse *= (b - a) / (2.0 * kPanels + 1.0);
    const double tol = rel_tol * std::max(coarse, 1e-300);
    double total = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double pa = a + (b - a) * (2 * p) / (2.0 * kPanels);
        const double pb = a + (b - a) * (2 * p + 2) / (2.0 * kPanels);
        const double fa = nodes[static_cast<std::size_t>(2 * p)];
        const double fm = nodes[static_cast<std::size_t>(2 * p + 1)];
        const double fb = nodes[static_cast<std::size_t>(2 * p + 2)];
        const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_step(f, pa, pb, fa, fm, fb, whole, tol / kPanels, 50);
    }
    return total;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_double(const std::string& field, std::size_t line) {
    const std::string t = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ParseError("tabulated schedule: line " + std::to_string(line) + ": not a number: '" + t + "'");
    }
    return value;
}

}  // namespace

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::linear: return "linear";
        case ScheduleKind::power: return "power";
        case ScheduleKind::tanh_ramp: return "tanh-ramp";
        case ScheduleKind::local_adiabatic_grover: return "local-adiabatic-grover";
        case ScheduleKind::tabulated: return "tabulated";
    }
    return "unknown";
}

Schedule::Schedule(ScheduleKind kind, double run_time, double parameter)
    : kind_(kind), run_time_(run_time), parameter_(parameter) {
    require_run_time(run_time);
}

Schedule Schedule::linear(double run_time) { return Schedule(ScheduleKind::linear, run_time, 1.0); }

Schedule Schedule::power(double run_time, double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent)) throw DomainError("Schedule::power: exponent must be positive");
    return Schedule(ScheduleKind::power, run_time, exponent);
}

Schedule Schedule::tanh_ramp(double run_time, double steepness) {
    if (!(steepness > 0.0) || !std::isfinite(steepness)) {
        throw DomainError("Schedule::tanh_ramp: steepness must be positive");
    }
    return Schedule(ScheduleKind::tanh_ramp, run_time, steepness);
}

Schedule Schedule::local_adiabatic_grover(double run_time, long long n) {
    if (n < 2) throw DomainError("Schedule::local_adiabatic_grover: N must be >= 2");
    return Schedule(ScheduleKind::local_adiabatic_grover, run_time, static_cast<double>(n));
}

Schedule Schedule::tabulated(std::vector<double> times, std::vector<double> lambdas) {
    if (times.size() != lambdas.size()) throw ParseError("tabulated schedule: column lengths differ");
    if (times.size() < 2) throw ParseError("tabulated schedule: need at least two rows");
    if (std::abs(times.front()) > kEndpointTolerance) throw ParseError("tabulated schedule: first t must be 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ParseError("tabulated schedule: t must be strictly increasing");
        if (!(lambdas[i] >= lambdas[i - 1])) {
            throw ParseError("tabulated schedule: lambda decreases at row " + std::to_string(i + 1));
        }
    }
    if (std::abs(lambdas.front()) > kEndpointTolerance) throw ParseError("tabulated schedule: lambda(0) must be 0");
    if (std::abs(lambdas.back() - 1.0) > kEndpointTolerance) {
        throw ParseError("tabulated schedule: lambda(t_f) must be 1");
    }
    const double run_time = times.back();
    Schedule s(ScheduleKind::tabulated, run_time, 0.0);
    s.knots_s_.reserve(times.size());
    for (double t : times) s.knots_s_.push_back(t / run_time);
    s.knots_s_.front() = 0.0;
    s.knots_s_.back() = 1.0;
    s.knots_lambda_ = std::move(lambdas);
    s.knots_lambda_.front() = 0.0;
    s.knots_lambda_.back() = 1.0;
    return s;
}

Schedule Schedule::load_tabulated(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<double> times;
    std::vector<double> lambdas;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "t,lambda") throw ParseError("tabulated schedule: expected header 't,lambda'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ParseError("tabulated schedule: line " + std::to_string(line_no) + ": expected two columns");
        }
        times.push_back(parse_double(line.substr(0, comma), line_no));
        lambdas.push_back(parse_double(line.substr(comma + 1), line_no));
    }
    if (!header_seen) throw ParseError("tabulated schedule: empty input");
    return tabulated(std::move(times), std::move(lambdas));
}

Schedule Schedule::load_tabulated(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open schedule file " + path.string());
    return load_tabulated(in);
}

double Schedule::profile(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    switch (kind_) {
        case ScheduleKind::linear: return s;
        case ScheduleKind::power: return std::pow(s, parameter_);
        case ScheduleKind::tanh_ramp: {
            const double half = std::tanh(0.5 * parameter_);
            return std::clamp((std::tanh(parameter_ * (s - 0.5)) + half) / (2.0 * half), 0.0, 1.0);
        }
        case ScheduleKind::local_adiabatic_grover: {
            // lambda(s) inverts s(lambda) = [atan(r (2 lambda - 1)) + theta] / (2 theta),
            // r = sqrt(N - 1), theta = atan r, the normalized antiderivative of 1 / gap^2.
            if (s == 0.0) return 0.0;
            if (s == 1.0) return 1.0;
            const double r = std::sqrt(parameter_ - 1.0);
            const double theta = std::atan(r);
            return std::clamp(0.5 * (1.0 + std::tan((2.0 * s - 1.0) * theta) / r), 0.0, 1.0);
        }
        case ScheduleKind::tabulated: {
            const auto it = std::upper_bound(knots_s_.begin(), knots_s_.end(), s);
            if (it == knots_s_.end()) return 1.0;
            const auto hi = static_cast<std::size_t>(it - knots_s_.begin());
            const std::size_t lo = hi - 1;
            const double w = (s - knots_s_[lo]) / (knots_s_[hi] - knots_s_[lo]);
            return knots_lambda_[lo] + w * (knots_lambda_[hi] - knots_lambda_[lo]);
        }
    }
    return s;
}

double Schedule::evaluate(double t) const {
    if (!(t >= 0.0 && t <= run_time_)) {
        throw DomainError("Schedule::evaluate: t = " + format_number(t) + " outside [0, " + format_number(run_time_) + "]");
    }
    return profile(t / run_time_);
}

Schedule Schedule::with_run_time(double run_time) const {
    require_run_time(run_time);
    Schedule s = *this;
    s.run_time_ = run_time;
    return s;
}

std::string Schedule::label() const {
    switch (kind_) {
        case ScheduleKind::linear: return "linear";
        case ScheduleKind::power: return "power(" + format_number(parameter_) + ")";
        case ScheduleKind::tanh_ramp: return "tanh-ramp(" + format_number(parameter_) + ")";
        case ScheduleKind::local_adiabatic_grover:
            return "local-adiabatic-grover(" + std::to_string(static_cast<long long>(parameter_)) + ")";
        case ScheduleKind::tabulated: return "tabulated";
    }
    return "unknown";
}

Path::Path(const Schedule& any_member) : base_(any_member.with_run_time(1.0)) {}

Schedule Path::rescale(double eta) const {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("Path::rescale: eta must be positive");
    return base_.with_run_time(1.0 / eta);
}

Schedule Path::at_run_time(double run_time) const { return base_.with_run_time(run_time); }

double evaluate(const Schedule& s, double t) { return s.evaluate(t); }

Schedule rescale(const Path& p, double eta) { return p.rescale(eta); }

double integral_of_lambda(const Schedule& s, double t_upper) {
    const double tf = s.run_time();
    if (!(t_upper >= 0.0 && t_upper <= tf)) {
        throw DomainError("integral_of_lambda: upper limit outside [0, t_f]");
    }
    if (t_upper == 0.0) return 0.0;
    const double u = t_upper / tf;
    switch (s.kind()) {
        case ScheduleKind::linear: return tf * u * u / 2.0;
        case ScheduleKind::power: {
            const double p = s.parameter();
            return tf * std::pow(u, p + 1.0) / (p + 1.0);
        }
        case ScheduleKind::tabulated: {
            // trapezoids are exact for a piecewise-linear profile
            double area = 0.0;
            for (std::size_t i = 1; i < s.knots_s_.size() && s.knots_s_[i - 1] < u; ++i) {
                const double a = s.knots_s_[i - 1];
                const double b = std::min(s.knots_s_[i], u);
                area += 0.5 * (b - a) * (s.knots_lambda_[i - 1] + s.profile(b));
            }
            return tf * area;
        }
        default: break;
    }
    const auto f = [&s](double x) { return s.profile(x); };
    return tf * adaptive_simpson(f, 0.0, u, kQuadratureRelTol);
}

Schedule build_local_adiabatic_grover(long long n, double run_time) {
    return Schedule::local_adiabatic_grover(run_time, n);
}

}  // namespace adiabound
