#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mixsteady/diagnostics.hpp"
#include "mixsteady/homotopy.hpp"
#include "mixsteady/mms.hpp"

namespace mixsteady {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kFieldSchema = "mixsteady-field/1";
inline constexpr const char* kBoundarySchema = "mixsteady-boundary/1";
inline constexpr const char* kDiagnosticsSchema = "mixsteady-diagnostics/1";
inline constexpr const char* kReportSchema = "mixsteady-report/1";
inline constexpr const char* kLedgerSchema = "mixsteady-ledger/1";
inline constexpr const char* kMmsSchema = "mixsteady-mms/1";

// Malformed or inconsistent input files.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);  // throws std::invalid_argument

// Provenance carried by every output file.
struct FileHeader {
    std::string config_hash;
    double M = 0.0;
    double delta = 0.0;
    GridSpec grid{};
};

struct FieldTable {
    FileHeader header;
    std::vector<std::string> names;
    std::vector<ScalarField> columns;
};

// Header line, then `i,j,x,y,<names...>`, one row per node in storage order.
void write_field_csv(const std::string& path, const FileHeader& h, const std::vector<std::string>& names,
                     const std::vector<const ScalarField*>& columns);
FieldTable read_field_csv(const std::string& path);

// `side,index,x,y,Theta` with side in {left,right,bottom,top}.
void write_boundary_csv(const std::string& path, const FileHeader& h, const BoundaryFlux& b);
BoundaryFlux read_boundary_csv(const std::string& path, const GridSpec& g);

// r.csv, u_x.csv, u_y.csv, theta.csv, Y_1.csv ... Y_n.csv.
void write_state(const std::string& dir, const FileHeader& h, const PhysicalState& s);
struct LoadedState {
    FileHeader header;
    PhysicalState state;
};
// Throws DataError on schema mismatch and DomainError (with node indices)
// when theta, Y or M + r is not positive.
LoadedState read_state(const std::string& dir);

nlohmann::ordered_json header_json(const char* schema, const FileHeader& h);
nlohmann::ordered_json to_json(const DiagnosticsReport& d);
nlohmann::ordered_json to_json(const StepRecord& s);
nlohmann::ordered_json to_json(const SolverReport& r);
nlohmann::ordered_json to_json(const MmsTable& t);
void write_json(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace mixsteady
