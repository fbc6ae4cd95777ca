#include "mixsteady/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

namespace mixsteady {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

int exit_code_for(SolverFailure kind) {
    switch (kind) {
        case SolverFailure::NonConvergence:
        case SolverFailure::MaxIterations: return exit_code::nonconvergence;
        case SolverFailure::DensityExit: return exit_code::density_exit;
        case SolverFailure::SingularLinearSystem: return exit_code::singular;
        case SolverFailure::OverflowGuard: return exit_code::overflow;
    }
    return exit_code::internal;
}

namespace {

// Maps the exception in flight to its exit code and reports it.
int report_exception(std::ostream& log) {
    try {
        throw;
    } catch (const ParseError& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::parse;
    } catch (const ValidationError& e) {
        log << "error: invalid configuration\n";
        for (const auto& v : e.violations()) log << "  " << v.field << ": " << v.constraint << '\n';
        return exit_code::validation;
    } catch (const DataError& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::data;
    } catch (const DomainError& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::data;
    } catch (const SolverError& e) {
        log << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << '\n';
        return exit_code::internal;
    }
}

double final_delta(const ProblemConfig& cfg, const SolverReport& r) {
    return r.steps.empty() ? cfg.continuation.delta_schedule.front() : r.steps.back().delta;
}

void write_sigma_csv(const std::string& path, const FileHeader& h, const EntropyProduction& s) {
    write_field_csv(path, h, {"viscous", "thermal", "diffusive", "reactive", "total"},
                    {&s.viscous, &s.thermal, &s.diffusive, &s.reactive, &s.total});
}

bool refused(const ProblemConfig& cfg) { return cfg.continuation.M < cfg.continuation.M_min; }

}  // namespace

RunOutput run_config(const ProblemConfig& cfg, const FieldState* warm) {
    RunOutput out;
    out.config = cfg;
    out.data = build_problem_data(cfg);
    out.result = run_construction(cfg.grid, cfg.mixture, out.data, cfg.continuation, warm);
    const double delta = final_delta(cfg, out.result.report);
    out.header = FileHeader{cfg.hash(), cfg.continuation.M, delta, cfg.grid};
    // Computed from the physical state exactly as check recomputes it from files.
    out.diagnostics = diagnose(PhysicalState::from(out.result.state), cfg.mixture, out.data,
                               ledger_params(cfg.continuation, delta));
    return out;
}

ordered_json diagnostics_document(const FileHeader& h, const DiagnosticsReport& d) {
    ordered_json j = header_json(kDiagnosticsSchema, h);
    j["diagnostics"] = to_json(d);
    return j;
}

void write_run(const std::string& dir, const RunOutput& run) {
    fs::create_directories(dir);
    const fs::path d(dir);
    const PhysicalState s = PhysicalState::from(run.result.state);
    write_state(dir, run.header, s);
    write_boundary_csv((d / "boundary_Theta.csv").string(), run.header, run.data.Theta);
    write_sigma_csv((d / "sigma.csv").string(), run.header, run.diagnostics.sigma);
    write_json((d / "diagnostics.json").string(), diagnostics_document(run.header, run.diagnostics));
    ordered_json rep = header_json(kReportSchema, run.header);
    rep["report"] = to_json(run.result.report);
    write_json((d / "report.json").string(), rep);
    std::ofstream cfg(d / "config.cfg", std::ios::binary);
    cfg << run.config.canonical();
}

SweepAxis parse_sweep_axis(const std::string& s) {
    if (s == "delta") return SweepAxis::Delta;
    if (s == "M") return SweepAxis::M;
    throw std::invalid_argument("unknown sweep axis '" + s + "' (delta or M)");
}

ProblemConfig sweep_config(const ProblemConfig& base, SweepAxis axis, double value) {
    ProblemConfig c = base;
    if (axis == SweepAxis::Delta)
        c.continuation.delta_schedule = {value};
    else
        c.continuation.M = value;
    return c;
}

std::vector<SweepRow> run_sweep(const ProblemConfig& base, SweepAxis axis, const std::vector<double>& values,
                                int jobs) {
    std::vector<SweepRow> rows(values.size());
    auto one = [&](std::size_t k, const FieldState* warm) {
        SweepRow& row = rows[k];
        row.value = values[k];
        const ProblemConfig cfg = sweep_config(base, axis, values[k]);
        if (refused(cfg)) {
            row.status = "refused";
            row.message = "M below M_min";
            return;
        }
        try {
            cfg.continuation.validate();
            row.run = run_config(cfg, warm);
            row.has_state = true;
            const auto& rep = row.run.result.report;
            for (const auto& s : rep.steps)
                if (s.lambda == 1.0) row.g_val = s.g_val;
            if (rep.failure) {
                row.status = std::string("failed:") + to_string(rep.failure->kind);
                row.message = rep.failure->message;
            } else {
                row.status = "ok";
            }
        } catch (const std::exception& e) {
            row.status = "failed:error";
            row.message = e.what();
        }
    };

    if (jobs <= 1) {
        const FieldState* warm = nullptr;
        for (std::size_t k = 0; k < values.size(); ++k) {
            one(k, warm);
            if (rows[k].has_state) warm = &rows[k].run.result.state;
        }
    } else {
        const int n = static_cast<int>(values.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
        for (int k = 0; k < n; ++k) one(static_cast<std::size_t>(k), nullptr);
    }
    return rows;
}

SweepSummary summarize_sweep(const std::vector<SweepRow>& rows) {
    SweepSummary s;
    std::vector<double> v, defect, xim;
    std::map<std::string, std::pair<double, double>> range;
    std::vector<std::string> order;
    for (const auto& r : rows) {
        if (r.status != "ok") continue;
        const auto& d = r.run.diagnostics;
        v.push_back(r.value);
        defect.push_back(d.defect.l2);
        xim.push_back(d.xi_over_M);
        for (const auto& e : d.ledger) {
            auto it = range.find(e.id);
            if (it == range.end()) {
                range[e.id] = {e.lhs, e.lhs};
                order.push_back(e.id);
            } else {
                it->second.first = std::min(it->second.first, e.lhs);
                it->second.second = std::max(it->second.second, e.lhs);
            }
        }
    }
    if (v.size() >= 2) {
        s.defect_slope = loglog_slope(v, defect);
        s.xi_over_M_slope = loglog_slope(v, xim);
    }
    s.xi_over_M_decreasing = v.size() >= 2;
    for (std::size_t k = 1; k < xim.size(); ++k)
        if (!(xim[k] < xim[k - 1])) s.xi_over_M_decreasing = false;
    for (const auto& id : order) {
        const auto [lo, hi] = range[id];
        s.ledger_variation.emplace_back(id, lo > 0.0 ? hi / lo - 1.0 : INFINITY);
    }
    return s;
}

void write_ledger_csv(const std::string& path, const ProblemConfig& base, SweepAxis axis,
                      const std::vector<SweepRow>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path);
    const char* axis_name = axis == SweepAxis::Delta ? "delta" : "M";
    os << "# " << kLedgerSchema << " version=" << kToolVersion << " config=" << base.hash() << " axis=" << axis_name
       << '\n';

    std::vector<std::string> ids;
    for (const auto& r : rows)
        if (r.has_state) {
            for (const auto& e : r.run.diagnostics.ledger) ids.push_back(e.id);
            break;
        }
    os << "value,status,M,delta,steps,g_val,mass_defect_l2,mass_defect_w12,xi,xi_over_M,energy_residual,"
          "entropy_residual,sigma_min,compat_max_abs";
    for (const auto& id : ids) os << ',' << id << "_lhs," << id << "_rhs";
    os << '\n';

    auto d = [](double x) { return std::isfinite(x) ? format_double(x) : std::string("nan"); };
    for (const auto& r : rows) {
        os << d(r.value) << ',' << r.status;
        if (!r.has_state) {
            for (std::size_t k = 0; k < 12 + 2 * ids.size(); ++k) os << ',';
            os << '\n';
            continue;
        }
        const auto& diag = r.run.diagnostics;
        double cmax = 0.0;
        for (double c : diag.compat) cmax = std::max(cmax, std::abs(c));
        os << ',' << d(r.run.header.M) << ',' << d(r.run.header.delta) << ',' << r.run.result.report.steps.size() << ','
           << d(r.g_val) << ',' << d(diag.defect.l2) << ',' << d(diag.defect.w12) << ',' << d(diag.xi) << ','
           << d(diag.xi_over_M) << ',' << d(diag.energy.residual) << ',' << d(diag.entropy.residual) << ','
           << d(diag.sigma.min) << ',' << d(cmax);
        for (const auto& id : ids) {
            auto it = std::find_if(diag.ledger.begin(), diag.ledger.end(), [&](const auto& e) { return e.id == id; });
            if (it == diag.ledger.end())
                os << ",,";
            else
                os << ',' << d(it->lhs) << ',' << d(it->rhs);
        }
        os << '\n';
    }

    const SweepSummary s = summarize_sweep(rows);
    os << "# slope log(mass_defect_l2) vs log(" << axis_name << ") = " << d(s.defect_slope) << '\n';
    os << "# slope log(xi_over_M) vs log(" << axis_name << ") = " << d(s.xi_over_M_slope) << '\n';
    os << "# xi_over_M strictly decreasing = " << (s.xi_over_M_decreasing ? "true" : "false") << '\n';
    for (const auto& [id, var] : s.ledger_variation)
        os << "# variation " << id << "_lhs (max/min - 1) = " << d(var)
           << " (independence proxy: <= 0.25 across the sweep)\n";
    for (const auto& r : rows)
        if (r.status != "ok") os << "# row value=" << d(r.value) << " " << r.status << ": " << r.message << '\n';
    if (!os) throw DataError("write failed: " + path);
}

int cmd_solve(const CommandOptions& opt, std::ostream& log) {
    try {
        const ProblemConfig cfg = load_config(opt.config);
        if (refused(cfg)) {
            log << "error: M = " << format_double(cfg.continuation.M) << " is below M_min = "
                << format_double(cfg.continuation.M_min) << "; refusing to solve\n";
            return exit_code::below_min_density;
        }
        const RunOutput run = run_config(cfg);
        write_run(opt.out, run);
        const auto& rep = run.result.report;
        log << "solve: " << rep.steps.size() << " steps, final delta " << format_double(run.header.delta)
            << ", mass defect " << format_double(run.diagnostics.defect.l2) << '\n';
        if (rep.failure) {
            log << "error: " << rep.failure->message << " (partial state written)\n";
            return exit_code_for(rep.failure->kind);
        }
        return exit_code::ok;
    } catch (...) {
        return report_exception(log);
    }
}

int cmd_sweep(const CommandOptions& opt, const std::string& axis_name, const std::vector<double>& values,
              std::ostream& log) {
    try {
        const SweepAxis axis = parse_sweep_axis(axis_name);
        if (values.empty()) {
            log << "error: sweep needs at least one value\n";
            return exit_code::usage;
        }
        const ProblemConfig cfg = load_config(opt.config);
        const auto rows = run_sweep(cfg, axis, values, opt.jobs);
        fs::create_directories(opt.out);
        for (std::size_t k = 0; k < rows.size(); ++k)
            if (rows[k].has_state) write_run((fs::path(opt.out) / ("run_" + std::to_string(k))).string(), rows[k].run);
        write_ledger_csv((fs::path(opt.out) / "ledger.csv").string(), cfg, axis, rows);
        int bad = 0;
        for (const auto& r : rows) {
            log << "sweep " << axis_name << "=" << format_double(r.value) << ": " << r.status << '\n';
            bad += r.status != "ok";
        }
        const SweepSummary s = summarize_sweep(rows);
        log << "slope log(mass_defect_l2) = " << format_double(s.defect_slope) << '\n';
        return bad ? exit_code::nonconvergence : exit_code::ok;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (...) {
        return report_exception(log);
    }
}

int cmd_mms(const CommandOptions& opt, const std::string& case_id, std::ostream& log) {
    MmsCase kind;
    try {
        kind = parse_mms_case(case_id);
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::usage;
    }
    try {
        const ProblemConfig cfg = load_config(opt.config);
        const MmsTable t = run_mms(kind, mms_options(cfg), cfg.mixture);
        fs::create_directories(opt.out);
        const std::string stem = std::string("mms_") + to_string(kind);
        const fs::path base(opt.out);
        std::ofstream os(base / (stem + ".csv"), std::ios::binary);
        os << "# " << kMmsSchema << " version=" << kToolVersion << " config=" << cfg.hash() << " case=" << to_string(kind)
           << " convection=" << t.convection << '\n';
        os << "cells,h,error_l2,error_max,newton_iterations\n";
        for (const auto& r : t.rows)
            os << r.cells << ',' << format_double(r.h) << ',' << format_double(r.error_l2) << ','
               << format_double(r.error_max) << ',' << r.newton_iterations << '\n';
        os << "# order_l2 = " << format_double(t.order_l2) << "\n# order_max = " << format_double(t.order_max) << '\n';
        if (!os) throw DataError("cannot write " + (base / (stem + ".csv")).string());
        ordered_json j = {{"schema", kMmsSchema}, {"version", kToolVersion}, {"config_hash", cfg.hash()}};
        j["table"] = to_json(t);
        write_json((base / (stem + ".json")).string(), j);
        log << "mms " << to_string(kind) << ": order_l2 " << format_double(t.order_l2) << '\n';
        return exit_code::ok;
    } catch (...) {
        return report_exception(log);
    }
}

int cmd_check(const CommandOptions& opt, const std::string& state_dir, std::ostream& log) {
    try {
        const ProblemConfig cfg = load_config(opt.config);
        const LoadedState ls = read_state(state_dir);
        if (ls.header.config_hash != cfg.hash())
            throw DataError(state_dir + ": state was written for config " + ls.header.config_hash + ", not " +
                            cfg.hash());
        if (ls.state.Y.size() != static_cast<std::size_t>(cfg.mixture.n))
            throw DataError(state_dir + ": species count differs from the configuration");
        const ProblemData data = build_problem_data(cfg, ls.header.grid);
        ProblemConfig at = cfg;
        at.continuation.M = ls.header.M;
        const DiagnosticsReport d =
            diagnose(ls.state, cfg.mixture, data, ledger_params(at.continuation, ls.header.delta));
        fs::create_directories(opt.out);
        write_json((fs::path(opt.out) / "diagnostics.json").string(), diagnostics_document(ls.header, d));
        log << "check: sigma min " << format_double(d.sigma.min) << ", mass defect " << format_double(d.defect.l2)
            << '\n';
        return exit_code::ok;
    } catch (...) {
        return report_exception(log);
    }
}

}  // namespace mixsteady
