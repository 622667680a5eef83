#include "adiabound/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace adiabound::experiments {

using nlohmann::json;

namespace {

ComplexMatrix parse_matrix(const json& j, std::size_t dim, const char* name) {
    if (!j.is_array() || j.size() != dim) {
        throw ParseError(std::string("matrix pair: '") + name + "' must have " + std::to_string(dim) + " rows");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < dim; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.size() != dim) {
            throw ParseError(std::string("matrix pair: row ") + std::to_string(r) + " of '" + name + "' has wrong length");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            const auto& z = row[c];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                throw ParseError(std::string("matrix pair: entries of '") + name + "' must be [re, im] pairs");
            }
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    return m;
}

double geometric_mid(double a, double b) { return a > 0.0 ? std::sqrt(a * b) : 0.5 * (a + b); }

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

ScheduleKind parse_kind(const std::string& kind) {
    if (kind == "linear") return ScheduleKind::linear;
    if (kind == "power") return ScheduleKind::power;
    if (kind == "tanh-ramp" || kind == "tanh") return ScheduleKind::tanh_ramp;
    if (kind == "local-adiabatic" || kind == "local-adiabatic-grover") return ScheduleKind::local_adiabatic_grover;
    if (kind == "tabulated") return ScheduleKind::tabulated;
    throw DomainError("unknown schedule kind '" + kind + "'");
}

struct Cell {
    long long n;
    double epsilon;
    std::size_t schedule_index;
};

SweepRecord run_cell(const SweepConfig& cfg, const Model& model, const Cell& cell) {
    SweepRecord rec;
    rec.n = cell.n;
    rec.epsilon = cell.epsilon;
    const auto& spec = cfg.schedules[cell.schedule_index];
    try {
        const Path path = make_path(spec, cell.n);
        rec.schedule = path.base().label();
        SearchOptions opts;
        opts.t_lo = cfg.t_lo;
        opts.t_hi = cfg.t_hi;
        opts.rel_tol = cfg.tolerance;
        opts.propagator.samples = cfg.samples;
        rec.lower_bound = model.lower_bound(cell.epsilon);
        const MinRunTime found = min_run_time(path, model, cell.epsilon, opts);
        rec.t_f_min = found.t_f;
        rec.final_fidelity = found.final_fidelity;
        rec.verified = found.verified;
        rec.slack_ratio = rec.lower_bound > 0.0 ? found.t_f / rec.lower_bound : std::numeric_limits<double>::infinity();
        rec.audit_min_residual = audit_inequality(found.trajectory, model.delta_v()).min_residual;
    } catch (const Error& e) {
        if (rec.schedule.empty()) rec.schedule = to_string(spec.kind);
        rec.status = e.what();
    }
    return rec;
}

}  // namespace

// ----------------------------------------------------------------------- Model

Model Model::grover(grover::GroverInstance g) { return Model(std::move(g)); }

Model Model::matrix_pair(InterpolatedHamiltonian ih) { return Model(std::move(ih)); }

long long Model::dim() const {
    if (is_grover()) return grover_instance().n();
    return static_cast<long long>(matrix_hamiltonian().dim());
}

Trajectory Model::simulate(const Schedule& s, const PropagatorConfig& cfg) const {
    if (is_grover()) return grover::propagate_reduced(grover_instance(), s, cfg);
    return propagate(matrix_hamiltonian(), s, cfg);
}

double Model::delta_v() const {
    if (is_grover()) return grover::grover_delta_v(grover_instance().n());
    return driving_uncertainty(matrix_hamiltonian());
}

double Model::c_final() const {
    if (is_grover()) return grover::grover_c_final(grover_instance().n());
    return final_overlap(matrix_hamiltonian());
}

double Model::lower_bound(double epsilon) const {
    if (is_grover()) return grover::grover_bound(grover_instance().n(), epsilon);
    return necessary_run_time(delta_v(), c_final(), epsilon);
}

InterpolatedHamiltonian load_matrix_pair(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("matrix pair: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("h0") || !j.contains("h1")) {
        throw ParseError("matrix pair: expected an object with 'dim', 'h0' and 'h1'");
    }
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
        throw ParseError("matrix pair: 'dim' must be a positive integer");
    }
    const auto dim = j["dim"].get<std::size_t>();
    return InterpolatedHamiltonian(HermitianOperator::dense(parse_matrix(j["h0"], dim, "h0")),
                                   HermitianOperator::dense(parse_matrix(j["h1"], dim, "h1")));
}

InterpolatedHamiltonian load_matrix_pair(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix pair file " + path.string());
    return load_matrix_pair(in);
}

// --------------------------------------------------------------------- search

MinRunTime min_run_time(const Path& path, const Model& model, double epsilon, const SearchOptions& opts) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("min_run_time: epsilon must lie in [0, 1]");
    if (!(opts.t_lo >= 0.0) || !(opts.t_hi > opts.t_lo)) throw DomainError("min_run_time: need 0 <= t_lo < t_hi");
    if (!(opts.rel_tol > 0.0 && opts.rel_tol < 0.5)) throw DomainError("min_run_time: rel_tol must lie in (0, 0.5)");
    if (opts.points_per_decade < 1) throw DomainError("min_run_time: points_per_decade must be >= 1");

    int evaluations = 0;
    struct Probe {
        bool ok;
        Trajectory tr;
    };
    const auto probe = [&](double t_f) {
        ++evaluations;
        Trajectory tr = model.simulate(path.at_run_time(t_f), opts.propagator);
        const bool ok = meets_allowance(tr.final_fidelity(), epsilon);
        return Probe{ok, std::move(tr)};
    };

    // a zero lower end has no schedule; start the grid well below t_hi instead
    const double start = opts.t_lo > 0.0 ? opts.t_lo : opts.t_hi * 1e-4;
    Probe first = probe(start);
    if (first.ok) {
        const double f = first.tr.final_fidelity();
        return MinRunTime{start, f, 0.0, false, evaluations, std::move(first.tr)};
    }

    const double ratio = std::pow(10.0, 1.0 / opts.points_per_decade);
    double hi = opts.t_hi;
    int doublings = 0;
    double grid_fail = start;
    double a = start;
    double b = 0.0;
    std::optional<Trajectory> tr_b;
    while (!tr_b) {
        if (a >= hi) {
            if (doublings >= opts.max_doublings) {
                std::ostringstream msg;
                msg << "min_run_time: allowance " << epsilon << " not met for any t_f up to " << hi << " after "
                    << doublings << " doublings";
                throw BracketNotFound(msg.str());
            }
            hi *= 2.0;
            ++doublings;
            continue;
        }
        const double next = std::min(a * ratio, hi);
        Probe p = probe(next);
        if (p.ok) {
            b = next;
            tr_b = std::move(p.tr);
        } else {
            a = next;
        }
    }
    grid_fail = a;

    // Bisect down to a bracket of relative width rel_tol / 2, then re-simulate at
    // t_f (1 - rel_tol). If that probe also succeeds the crossing we found was not
    // the first one inside the grid interval: restart the bisection below it.
    constexpr int kMaxRestarts = 64;
    for (int restart = 0; restart < kMaxRestarts; ++restart) {
        while (b - a > 0.5 * opts.rel_tol * b) {
            const double m = geometric_mid(a, b);
            Probe p = probe(m);
            if (p.ok) {
                b = m;
                tr_b = std::move(p.tr);
            } else {
                a = m;
            }
        }
        const double below = b * (1.0 - opts.rel_tol);
        Probe check = probe(below);
        if (!check.ok) {
            const double f = tr_b->final_fidelity();
            return MinRunTime{b, f, below, true, evaluations, std::move(*tr_b)};
        }
        b = below;
        tr_b = std::move(check.tr);
        a = grid_fail;
    }
    const double f = tr_b->final_fidelity();
    return MinRunTime{b, f, a, false, evaluations, std::move(*tr_b)};
}

// ------------------------------------------------------------------------ fits

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("fit_power_law: x and y differ in length");
    if (x.size() < 2) throw DomainError("fit_power_law: need at least two points");
    const std::size_t n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_power_law: values must be positive");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0.0) throw DomainError("fit_power_law: x values must not all coincide");
    PowerLawFit fit;
    fit.points = n;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    if (n > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::log(y[i]) - intercept - fit.exponent * std::log(x[i]);
            ssr += r * r;
        }
        fit.stderr_exponent = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    } else {
        fit.stderr_exponent = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

// ---------------------------------------------------------------------- sweep

Path make_path(const ScheduleSpec& spec, long long n) {
    switch (spec.kind) {
        case ScheduleKind::linear: return Path(Schedule::linear(1.0));
        case ScheduleKind::power: return Path(Schedule::power(1.0, spec.parameter));
        case ScheduleKind::tanh_ramp: return Path(Schedule::tanh_ramp(1.0, spec.parameter));
        case ScheduleKind::local_adiabatic_grover: return Path(Schedule::local_adiabatic_grover(1.0, n));
        case ScheduleKind::tabulated: return Path(Schedule::load_tabulated(std::filesystem::path(spec.file)));
    }
    throw DomainError("make_path: unknown schedule kind");
}

ScheduleSpec parse_schedule_spec(const std::string& kind, double power, double steepness, const std::string& file) {
    ScheduleSpec spec;
    spec.kind = parse_kind(kind);
    if (spec.kind == ScheduleKind::power) spec.parameter = power;
    if (spec.kind == ScheduleKind::tanh_ramp) spec.parameter = steepness;
    if (spec.kind == ScheduleKind::tabulated) {
        if (file.empty()) throw DomainError("tabulated schedule needs a schedule file");
        spec.file = file;
    }
    return spec;
}

SweepConfig parse_sweep_config(const json& j) {
    static const std::set<std::string> known = {"grover_n", "marked",    "matrix_file", "schedules", "epsilon", "t_lo",
                                                "t_hi",     "tolerance", "samples",     "workers",   "csv",     "json"};
    if (!j.is_object()) throw ParseError("sweep config: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ParseError("sweep config: unknown key '" + key + "'");
    }
    SweepConfig cfg;
    try {
        if (j.contains("grover_n")) cfg.grover_n = j["grover_n"].get<std::vector<long long>>();
        cfg.marked = j.value("marked", cfg.marked);
        cfg.matrix_file = j.value("matrix_file", cfg.matrix_file);
        if (j.contains("schedules")) {
            for (const auto& s : j["schedules"]) {
                const std::string kind = s.at("kind").get<std::string>();
                cfg.schedules.push_back(parse_schedule_spec(kind, s.value("parameter", 2.0), s.value("parameter", 10.0),
                                                            s.value("file", std::string())));
            }
        }
        if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<std::vector<double>>();
        cfg.t_lo = j.value("t_lo", cfg.t_lo);
        cfg.t_hi = j.value("t_hi", cfg.t_hi);
        cfg.tolerance = j.value("tolerance", cfg.tolerance);
        cfg.samples = j.value("samples", cfg.samples);
        cfg.workers = j.value("workers", cfg.workers);
        cfg.csv = j.value("csv", cfg.csv);
        cfg.json = j.value("json", cfg.json);
    } catch (const json::exception& e) {
        throw ParseError(std::string("sweep config: ") + e.what());
    }
    if (!(cfg.t_lo >= 0.0) || !(cfg.t_hi > cfg.t_lo)) throw ParseError("sweep config: need 0 <= t_lo < t_hi");
    for (double e : cfg.epsilon) {
        if (!(e >= 0.0 && e <= 1.0)) throw ParseError("sweep config: epsilon values must lie in [0, 1]");
    }
    for (long long n : cfg.grover_n) {
        if (n < 2) throw ParseError("sweep config: N values must be >= 2");
    }
    if (cfg.workers < 1) throw ParseError("sweep config: workers must be >= 1");
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sweep config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("sweep config: invalid JSON: ") + e.what());
    }
    return parse_sweep_config(j);
}

SweepResult sweep(const SweepConfig& cfg) {
    std::vector<Model> models;
    std::vector<Cell> cells;
    std::vector<std::size_t> model_of_cell;
    if (!cfg.matrix_file.empty()) {
        models.push_back(Model::matrix_pair(load_matrix_pair(std::filesystem::path(cfg.matrix_file))));
    } else {
        std::vector<long long> ns = cfg.grover_n;
        std::sort(ns.begin(), ns.end());
        ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
        for (long long n : ns) models.push_back(Model::grover(grover::GroverInstance(n, std::min(cfg.marked, n))));
    }
    std::vector<double> eps = cfg.epsilon;
    std::sort(eps.begin(), eps.end());
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        for (double e : eps) {
            for (std::size_t si = 0; si < cfg.schedules.size(); ++si) {
                cells.push_back(Cell{models[mi].dim(), e, si});
                model_of_cell.push_back(mi);
            }
        }
    }

    SweepResult result;
    result.records.resize(cells.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            result.records[i] = run_cell(cfg, models[model_of_cell[i]], cells[i]);
        }
    };
    const auto n_workers = static_cast<std::size_t>(std::max(1, cfg.workers));
    if (n_workers == 1 || cells.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(n_workers, cells.size()); ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // one fit per (schedule, epsilon) with at least two distinct N
    std::map<std::pair<std::size_t, double>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (result.records[i].ok()) groups[{cells[i].schedule_index, cells[i].epsilon}].push_back(i);
    }
    for (const auto& [key, members] : groups) {
        std::vector<double> n;
        std::vector<double> t;
        std::vector<double> bound;
        for (std::size_t i : members) {
            n.push_back(static_cast<double>(result.records[i].n));
            t.push_back(result.records[i].t_f_min);
            bound.push_back(result.records[i].lower_bound);
        }
        if (std::set<double>(n.begin(), n.end()).size() < 2) continue;
        ScalingFit fit;
        fit.schedule = to_string(cfg.schedules[key.first].kind);
        fit.epsilon = key.second;
        try {
            fit.measured = fit_power_law(n, t);
        } catch (const DomainError&) {
            continue;
        }
        try {
            fit.bound = fit_power_law(n, bound);
        } catch (const DomainError&) {
            fit.bound.exponent = std::numeric_limits<double>::quiet_NaN();
        }
        result.fits.push_back(fit);
    }
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "N,epsilon,schedule,t_f_min,lower_bound,slack_ratio,F_final,audit_min_residual,verified,status\n";
    for (const auto& r : result.records) {
        out << r.n << ',' << r.epsilon << ',' << csv_safe(r.schedule) << ',' << r.t_f_min << ',' << r.lower_bound << ','
            << r.slack_ratio << ',' << r.final_fidelity << ',' << r.audit_min_residual << ','
            << (r.verified ? "true" : "false") << ',' << csv_safe(r.status) << '\n';
    }
    out.precision(old_precision);
}

json sweep_summary(const SweepConfig& cfg, const SweepResult& result) {
    json records = json::array();
    for (const auto& r : result.records) {
        records.push_back({{"N", r.n},
                           {"epsilon", r.epsilon},
                           {"schedule", r.schedule},
                           {"t_f_min", r.t_f_min},
                           {"lower_bound", r.lower_bound},
                           {"slack_ratio", finite_or_null(r.slack_ratio)},
                           {"F_final", r.final_fidelity},
                           {"audit_min_residual", r.audit_min_residual},
                           {"verified", r.verified},
                           {"status", r.status}});
    }
    json fits = json::array();
    for (const auto& f : result.fits) {
        fits.push_back({{"schedule", f.schedule},
                        {"epsilon", f.epsilon},
                        {"exponent", f.measured.exponent},
                        {"stderr", finite_or_null(f.measured.stderr_exponent)},
                        {"prefactor", f.measured.prefactor},
                        {"points", f.measured.points},
                        {"bound_exponent", finite_or_null(f.bound.exponent)}});
    }
    return json{{"min_time_definition",
                 "first t_f on a geometric grid (16 points per decade) with 1 - F(1) < epsilon, refined by bisection "
                 "to relative tolerance " +
                     std::to_string(cfg.tolerance)},
                {"records", records},
                {"fits", fits}};
}

}  // namespace adiabound::experiments
