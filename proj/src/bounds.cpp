#include "adiabound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace adiabound {

namespace {

void require_unit_interval(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in [0, 1]");
    }
}

InequalityAudit audit(const Trajectory& tr, double delta_v, bool running) {
    if (!(delta_v >= 0.0)) throw DomainError("audit: delta_v must be nonnegative");
    InequalityAudit out;
    out.records.reserve(tr.samples.size());
    out.min_residual = std::numeric_limits<double>::infinity();
    const double full = tr.samples.back().int_lambda_dt;
    for (const auto& s : tr.samples) {
        const double lhs = std::abs(s.fidelity - s.overlap);
        const double rhs = delta_v * (running ? s.int_lambda_dt : full);
        out.records.push_back({s.lambda, lhs, rhs, rhs - lhs});
        out.min_residual = std::min(out.min_residual, rhs - lhs);
    }
    return out;
}

}  // namespace

double driving_uncertainty(const InterpolatedHamiltonian& ih) {
    const EigenPair phi0 = ground_state(ih.h0());
    return std::sqrt(variance(ih.driving_term(), phi0.state));
}

double necessary_run_time(double delta_v, double c_final, double epsilon) {
    if (!(delta_v >= 0.0) || !std::isfinite(delta_v)) throw DomainError("necessary_run_time: delta_v must be >= 0");
    require_unit_interval(c_final, "necessary_run_time: c_final");
    require_unit_interval(epsilon, "necessary_run_time: epsilon");
    const double numerator = 1.0 - epsilon - c_final;
    if (numerator <= 0.0) return 0.0;
    if (delta_v == 0.0) {
        std::ostringstream msg;
        msg << "necessary_run_time: delta_v = 0 with 1 - epsilon - C(1) = " << numerator
            << " > 0; no finite run time meets the allowance";
        throw VacuouslyUnbounded(msg.str());
    }
    return numerator / delta_v;
}

double final_overlap(const InterpolatedHamiltonian& ih) {
    return overlap_sq(ground_state(ih.h1()).state, ground_state(ih.h0()).state);
}

BoundReport make_bound_report(double delta_v, double c_final, double epsilon) {
    return BoundReport{delta_v, c_final, epsilon, necessary_run_time(delta_v, c_final, epsilon)};
}

BoundReport bound_report(const InterpolatedHamiltonian& ih, double epsilon) {
    return make_bound_report(driving_uncertainty(ih), final_overlap(ih), epsilon);
}

InequalityAudit audit_inequality(const Trajectory& tr, double delta_v) { return audit(tr, delta_v, false); }

InequalityAudit audit_inequality_running(const Trajectory& tr, double delta_v) { return audit(tr, delta_v, true); }

bool meets_allowance(double final_fidelity, double epsilon) {
    return 1.0 - final_fidelity <= epsilon - kAllowanceSlack;
}

void to_json(nlohmann::json& j, const BoundReport& r) {
    j = nlohmann::json{{"delta_v", r.delta_v}, {"c_final", r.c_final}, {"epsilon", r.epsilon}, {"t_f_lower", r.t_f_lower}};
}

void from_json(const nlohmann::json& j, BoundReport& r) {
    j.at("delta_v").get_to(r.delta_v);
    j.at("c_final").get_to(r.c_final);
    j.at("epsilon").get_to(r.epsilon);
    j.at("t_f_lower").get_to(r.t_f_lower);
}

void to_json(nlohmann::json& j, const AuditRecord& r) {
    j = nlohmann::json{{"lambda", r.lambda}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}};
}

void to_json(nlohmann::json& j, const InequalityAudit& a) {
    j = nlohmann::json{{"records", a.records}, {"min_residual", a.min_residual}};
}

}  // namespace adiabound
