#pragma once

#include <string>
#include <vector>

#include "mixsteady/diagnostics.hpp"
#include "mixsteady/homotopy.hpp"
#include "mixsteady/mms.hpp"

namespace mixsteady {

enum class ForcePreset { Zero, Constant, Fourier, Gaussian, Csv };
enum class ThetaPreset { Constant, Fourier, Gaussian, Csv };

// Body force f.
//   constant: (value_x, value_y)
//   fourier:  amplitude * (cos(kx pi x/Lx) sin(ky pi y/Ly), -sin(kx pi x/Lx) cos(ky pi y/Ly))
//   gaussian: amplitude * exp(-|x - x0|^2 / (2 width^2)) * (cos angle, sin angle)
//   csv:      nodal file with columns i,j,x,y,f_x,f_y
struct ForceConfig {
    ForcePreset preset = ForcePreset::Zero;
    double value_x = 0.0, value_y = 0.0;
    double amplitude = 0.0;
    int kx = 1, ky = 1;
    double x0 = 0.5, y0 = 0.5, width = 0.1, angle = 0.0;
    std::string path;
};

// Boundary temperature Theta, sampled at boundary nodes.
//   constant: base
//   fourier:  base + amplitude cos(kx pi x/Lx) cos(ky pi y/Ly)
//   gaussian: base + amplitude exp(-|x - x0|^2 / (2 width^2))
//   csv:      boundary file with columns side,index,x,y,Theta
struct ThetaConfig {
    ThetaPreset preset = ThetaPreset::Constant;
    double base = 1.0;
    double amplitude = 0.0;
    int kx = 1, ky = 1;
    double x0 = 0.5, y0 = 0.5, width = 0.1;
    std::string path;
};

struct MmsConfig {
    std::vector<int> cells{16, 32, 64, 128};
    double M = 10.0;
    double lambda = 1.0;
    double delta = 0.1;
};

struct ProblemConfig {
    GridSpec grid{1.0, 1.0, 64, 64};
    MixtureSpec mixture{};
    ContinuationParams continuation{};
    ForceConfig force{};
    ThetaConfig theta{};
    MmsConfig mms{};
    std::string base_dir;  // directory of the config file, for relative csv paths

    // Canonical key = value text of every setting; the hash is taken over it.
    std::string canonical() const;
    std::string hash() const;
};

// Throws ParseError on malformed text and ValidationError listing every
// constraint violation (unknown keys included).
ProblemConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ProblemConfig load_config(const std::string& path);

// Evaluates the force and boundary temperature on the configured grid.
ProblemData build_problem_data(const ProblemConfig& cfg);
ProblemData build_problem_data(const ProblemConfig& cfg, const GridSpec& g);

MmsOptions mms_options(const ProblemConfig& cfg);

}  // namespace mixsteady
