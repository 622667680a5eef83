#pragma once

#include <vector>

#include <json.hpp>

#include "adiabound/hilbert.hpp"
#include "adiabound/propagator.hpp"

namespace adiabound {

// Audit residuals below this mark a violation of the fidelity-overlap inequality.
inline constexpr double kAuditViolationThreshold = -1e-7;
// 1 - F(1) <= epsilon - kAllowanceSlack counts as meeting the allowance.
inline constexpr double kAllowanceSlack = 1e-12;

struct BoundReport {
    double delta_v = 0.0;
    double c_final = 0.0;
    double epsilon = 0.0;
    double t_f_lower = 0.0;

    // The bound carries no information (numerator 1 - epsilon - C(1) <= 0).
    bool vacuous() const { return 1.0 - epsilon - c_final <= 0.0; }
};

struct AuditRecord {
    double lambda = 0.0;
    double lhs = 0.0;  // |F - C|
    double rhs = 0.0;  // delta_v * integral of lambda
    double residual = 0.0;
};

struct InequalityAudit {
    std::vector<AuditRecord> records;
    double min_residual = 0.0;

    bool violated() const { return min_residual < kAuditViolationThreshold; }
};

/// Standard deviation of V = H_1 - H_0 in the ground state of H_0.
double driving_uncertainty(const InterpolatedHamiltonian& ih);

/// max(0, (1 - epsilon - c_final) / delta_v). Throws VacuouslyUnbounded when
/// delta_v = 0 and the numerator is positive.
double necessary_run_time(double delta_v, double c_final, double epsilon);

/// C(1) = |<Phi_1|Phi_0>|^2.
double final_overlap(const InterpolatedHamiltonian& ih);

BoundReport make_bound_report(double delta_v, double c_final, double epsilon);
BoundReport bound_report(const InterpolatedHamiltonian& ih, double epsilon);

/// |F - C| against delta_v times the full-run integral of lambda.
InequalityAudit audit_inequality(const Trajectory& tr, double delta_v);

/// |F - C| against delta_v times the running integral up to each sample.
InequalityAudit audit_inequality_running(const Trajectory& tr, double delta_v);

bool meets_allowance(double final_fidelity, double epsilon);

void to_json(nlohmann::json& j, const BoundReport& r);
void from_json(const nlohmann::json& j, BoundReport& r);
void to_json(nlohmann::json& j, const AuditRecord& r);
void to_json(nlohmann::json& j, const InequalityAudit& a);

}  // namespace adiabound
