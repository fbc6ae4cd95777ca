#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mixsteady {

// Invalid pointwise input to a constitutive closure (nonpositive theta, rho*Y, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class SolverFailure {
    NonConvergence,
    DensityExit,
    SingularLinearSystem,
    OverflowGuard,
    MaxIterations,
};

const char* to_string(SolverFailure kind);

class SolverError : public std::runtime_error {
public:
    SolverError(SolverFailure kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    SolverFailure kind() const { return kind_; }

private:
    SolverFailure kind_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct Violation {
    std::string field;
    std::string constraint;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

}  // namespace mixsteady
