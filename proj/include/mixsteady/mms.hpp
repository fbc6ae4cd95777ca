#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mixsteady/state.hpp"

namespace mixsteady {

enum class MmsCase { Thermal, Species, Flow, Coupled };

MmsCase parse_mms_case(const std::string& name);  // throws std::invalid_argument
const char* to_string(MmsCase c);

struct MmsOptions {
    std::vector<int> cells{16, 32, 64, 128};
    double M = 10.0;
    double lambda = 1.0;
    double delta = 0.1;  // eps = delta^3
    SubsolverConfig solver{};
};

struct MmsRow {
    int cells = 0;
    double h = 0.0;
    double error_l2 = 0.0;   // composite discrete L2 error over the solved fields
    double error_max = 0.0;
    int newton_iterations = 0;
};

struct MmsTable {
    MmsCase kind = MmsCase::Thermal;
    std::string convection;
    std::vector<MmsRow> rows;
    double order_l2 = 0.0;   // least-squares slope of log error vs log h
    double order_max = 0.0;
};

MmsTable run_mms(MmsCase kind, const MmsOptions& opt, const MixtureSpec& spec);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

using Field2 = std::function<double(double, double)>;

// Sixth-order central differences with step eta on analytic fields; the
// manufactured-solution oracle builds every forcing term from these.
double fd_dx(const Field2& f, double x, double y, double eta);
double fd_dy(const Field2& f, double x, double y, double eta);

}  // namespace mixsteady
