#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mixsteady/config.hpp"
#include "mixsteady/io.hpp"

namespace mixsteady {

// Process exit codes. Every error path maps to exactly one of these.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int below_min_density = 2;
inline constexpr int parse = 3;
inline constexpr int validation = 4;
inline constexpr int data = 5;  // unreadable files, schema mismatch, non-positive fields
inline constexpr int nonconvergence = 6;
inline constexpr int density_exit = 7;
inline constexpr int singular = 8;
inline constexpr int overflow = 9;
inline constexpr int usage = 64;
}  // namespace exit_code

int exit_code_for(SolverFailure kind);

struct CommandOptions {
    std::string config;
    std::string out;
    int jobs = 1;
    std::uint64_t seed = 0;  // reserved; solves do not draw random numbers
};

// A finished (or partially finished) construction together with the
// diagnostics of its final state, ready to be written.
struct RunOutput {
    ProblemConfig config;
    ProblemData data;
    ConstructionResult result;
    FileHeader header;
    DiagnosticsReport diagnostics;
};

RunOutput run_config(const ProblemConfig& cfg, const FieldState* warm = nullptr);

// r.csv ... Y_n.csv, boundary_Theta.csv, sigma.csv, diagnostics.json, report.json.
void write_run(const std::string& dir, const RunOutput& run);

// Diagnostics document as written by solve and by check.
nlohmann::ordered_json diagnostics_document(const FileHeader& h, const DiagnosticsReport& d);

enum class SweepAxis { Delta, M };
SweepAxis parse_sweep_axis(const std::string& s);  // throws std::invalid_argument
ProblemConfig sweep_config(const ProblemConfig& base, SweepAxis axis, double value);

struct SweepRow {
    double value = 0.0;
    std::string status;  // "ok", "failed:<kind>", "refused"
    std::string message;
    RunOutput run;
    double g_val = 0.0;  // g at the last lambda = 1 step, 0 when none
    bool has_state = false;
};

struct SweepSummary {
    double defect_slope = 0.0;          // log-log slope of mass defect vs value
    double xi_over_M_slope = 0.0;       // log-log slope of Xi/M vs value
    bool xi_over_M_decreasing = false;
    std::vector<std::pair<std::string, double>> ledger_variation;  // max/min - 1 per ledger id
};

// One construction per value. With jobs == 1 the previous state warm-starts
// the next; with jobs > 1 the runs are independent. Rows come back in input order.
std::vector<SweepRow> run_sweep(const ProblemConfig& base, SweepAxis axis, const std::vector<double>& values, int jobs);
SweepSummary summarize_sweep(const std::vector<SweepRow>& rows);
void write_ledger_csv(const std::string& path, const ProblemConfig& base, SweepAxis axis,
                      const std::vector<SweepRow>& rows);

int cmd_solve(const CommandOptions& opt, std::ostream& log);
int cmd_sweep(const CommandOptions& opt, const std::string& axis, const std::vector<double>& values, std::ostream& log);
int cmd_mms(const CommandOptions& opt, const std::string& case_id, std::ostream& log);
int cmd_check(const CommandOptions& opt, const std::string& state_dir, std::ostream& log);

}  // namespace mixsteady
