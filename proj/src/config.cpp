#include "mixsteady/config.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mixsteady/io.hpp"

namespace mixsteady {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    int column = 0;
};

using Table = std::map<std::string, Entry>;  // "section.key" -> entry

bool key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Table tokenize(const std::string& text) {
    Table t;
    std::istringstream is(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw[first] == '#' || raw[first] == ';') continue;
        const int col = static_cast<int>(first) + 1;
        if (raw[first] == '[') {
            const auto close = raw.find(']', first);
            if (close == std::string::npos) throw ParseError(line, col, "unterminated section header");
            if (!trim(raw.substr(close + 1)).empty())
                throw ParseError(line, static_cast<int>(close) + 2, "unexpected text after section header");
            section = trim(raw.substr(first + 1, close - first - 1));
            if (section.empty()) throw ParseError(line, col + 1, "empty section name");
            for (std::size_t k = 0; k < section.size(); ++k)
                if (!key_char(section[k])) throw ParseError(line, col + 1, "invalid character in section name");
            continue;
        }
        const auto eq = raw.find('=', first);
        if (eq == std::string::npos) throw ParseError(line, col, "expected 'key = value'");
        const std::string key = trim(raw.substr(first, eq - first));
        if (key.empty()) throw ParseError(line, col, "missing key before '='");
        for (std::size_t k = 0; k < key.size(); ++k)
            if (!key_char(key[k])) throw ParseError(line, col + static_cast<int>(k), "invalid character in key");
        const std::string value = trim(raw.substr(eq + 1));
        const int vcol = static_cast<int>(raw.find_first_not_of(" \t", eq + 1)) + 1;
        if (value.empty()) throw ParseError(line, static_cast<int>(eq) + 2, "missing value after '='");
        if (section.empty()) throw ParseError(line, col, "key outside of any [section]");
        const std::string full = section + "." + key;
        if (t.count(full)) throw ParseError(line, col, "duplicate key '" + full + "'");
        t[full] = {value, line, vcol};
    }
    return t;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(v);
    while (std::getline(is, cur, ',')) out.push_back(trim(cur));
    return out;
}

int parse_int(const std::string& s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("integer expected");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::invalid_argument("true or false expected");
}

// Every known key with the setter that converts its text.
using Setter = std::function<void(ProblemConfig&, const std::string&)>;

std::map<std::string, Setter> setters() {
    std::map<std::string, Setter> m;
    auto dbl = [&](const char* key, auto member) {
        m[key] = [member](ProblemConfig& c, const std::string& v) { member(c) = parse_double(v); };
    };
    auto integer = [&](const char* key, auto member) {
        m[key] = [member](ProblemConfig& c, const std::string& v) { member(c) = parse_int(v); };
    };
    auto str = [&](const char* key, auto member) {
        m[key] = [member](ProblemConfig& c, const std::string& v) { member(c) = v; };
    };

    dbl("grid.Lx", [](ProblemConfig& c) -> double& { return c.grid.Lx; });
    dbl("grid.Ly", [](ProblemConfig& c) -> double& { return c.grid.Ly; });
    integer("grid.nx", [](ProblemConfig& c) -> int& { return c.grid.nx; });
    integer("grid.ny", [](ProblemConfig& c) -> int& { return c.grid.ny; });

    integer("mixture.n", [](ProblemConfig& c) -> int& { return c.mixture.n; });
    dbl("mixture.gamma", [](ProblemConfig& c) -> double& { return c.mixture.gamma; });
    m["mixture.c_v"] = [](ProblemConfig& c, const std::string& v) {
        c.mixture.c_v.clear();
        for (const auto& s : split_list(v)) c.mixture.c_v.push_back(parse_double(s));
    };
    dbl("mixture.D0", [](ProblemConfig& c) -> double& { return c.mixture.D0; });
    dbl("mixture.kappa0", [](ProblemConfig& c) -> double& { return c.mixture.kappa0; });
    dbl("mixture.L0", [](ProblemConfig& c) -> double& { return c.mixture.L0; });
    dbl("mixture.Lambda", [](ProblemConfig& c) -> double& { return c.mixture.Lambda; });
    dbl("mixture.B_omega", [](ProblemConfig& c) -> double& { return c.mixture.B_omega; });
    dbl("mixture.f_fric", [](ProblemConfig& c) -> double& { return c.mixture.f_fric; });

    dbl("continuation.M", [](ProblemConfig& c) -> double& { return c.continuation.M; });
    dbl("continuation.M_min", [](ProblemConfig& c) -> double& { return c.continuation.M_min; });
    m["continuation.lambda_steps"] = [](ProblemConfig& c, const std::string& v) {
        const int k = parse_int(v);
        if (k < 2) throw std::invalid_argument(">= 2 required");
        c.continuation.lambda_schedule = uniform_lambda_schedule(k);
    };
    m["continuation.lambda_schedule"] = [](ProblemConfig& c, const std::string& v) {
        c.continuation.lambda_schedule.clear();
        for (const auto& s : split_list(v)) c.continuation.lambda_schedule.push_back(parse_double(s));
    };
    m["continuation.delta_schedule"] = [](ProblemConfig& c, const std::string& v) {
        c.continuation.delta_schedule.clear();
        for (const auto& s : split_list(v)) c.continuation.delta_schedule.push_back(parse_double(s));
    };
    dbl("continuation.C0", [](ProblemConfig& c) -> double& { return c.continuation.C0; });
    dbl("continuation.E", [](ProblemConfig& c) -> double& { return c.continuation.E; });
    dbl("continuation.C_f", [](ProblemConfig& c) -> double& { return c.continuation.C_f; });
    dbl("continuation.damping", [](ProblemConfig& c) -> double& { return c.continuation.damping; });
    dbl("continuation.fp_tol", [](ProblemConfig& c) -> double& { return c.continuation.fp_tol; });
    integer("continuation.max_fp", [](ProblemConfig& c) -> int& { return c.continuation.max_fp; });
    dbl("continuation.p", [](ProblemConfig& c) -> double& { return c.continuation.p; });

    dbl("solver.newton_tol", [](ProblemConfig& c) -> double& { return c.continuation.solver.newton.tol; });
    integer("solver.max_newton", [](ProblemConfig& c) -> int& { return c.continuation.solver.newton.max_iter; });
    dbl("solver.backtrack", [](ProblemConfig& c) -> double& { return c.continuation.solver.newton.backtrack; });
    m["solver.convection"] = [](ProblemConfig& c, const std::string& v) {
        if (v == "upwind") c.continuation.solver.convection = ConvectionScheme::Upwind;
        else if (v == "centered") c.continuation.solver.convection = ConvectionScheme::Centered;
        else throw std::invalid_argument("upwind or centered expected");
    };
    m["solver.coupling"] = [](ProblemConfig& c, const std::string& v) {
        if (v == "implicit") c.continuation.solver.coupling = ReactionCoupling::Implicit;
        else if (v == "barred") c.continuation.solver.coupling = ReactionCoupling::Barred;
        else throw std::invalid_argument("implicit or barred expected");
    };
    m["solver.reuse_factorization"] = [](ProblemConfig& c, const std::string& v) {
        c.continuation.solver.reuse_factorization = parse_bool(v);
    };

    m["force.preset"] = [](ProblemConfig& c, const std::string& v) {
        static const std::map<std::string, ForcePreset> p{{"zero", ForcePreset::Zero},
                                                          {"constant", ForcePreset::Constant},
                                                          {"fourier", ForcePreset::Fourier},
                                                          {"gaussian", ForcePreset::Gaussian},
                                                          {"csv", ForcePreset::Csv}};
        auto it = p.find(v);
        if (it == p.end()) throw std::invalid_argument("zero, constant, fourier, gaussian or csv expected");
        c.force.preset = it->second;
    };
    dbl("force.value_x", [](ProblemConfig& c) -> double& { return c.force.value_x; });
    dbl("force.value_y", [](ProblemConfig& c) -> double& { return c.force.value_y; });
    dbl("force.amplitude", [](ProblemConfig& c) -> double& { return c.force.amplitude; });
    integer("force.kx", [](ProblemConfig& c) -> int& { return c.force.kx; });
    integer("force.ky", [](ProblemConfig& c) -> int& { return c.force.ky; });
    dbl("force.x0", [](ProblemConfig& c) -> double& { return c.force.x0; });
    dbl("force.y0", [](ProblemConfig& c) -> double& { return c.force.y0; });
    dbl("force.width", [](ProblemConfig& c) -> double& { return c.force.width; });
    dbl("force.angle", [](ProblemConfig& c) -> double& { return c.force.angle; });
    str("force.path", [](ProblemConfig& c) -> std::string& { return c.force.path; });

    m["theta.preset"] = [](ProblemConfig& c, const std::string& v) {
        static const std::map<std::string, ThetaPreset> p{{"constant", ThetaPreset::Constant},
                                                          {"fourier", ThetaPreset::Fourier},
                                                          {"gaussian", ThetaPreset::Gaussian},
                                                          {"csv", ThetaPreset::Csv}};
        auto it = p.find(v);
        if (it == p.end()) throw std::invalid_argument("constant, fourier, gaussian or csv expected");
        c.theta.preset = it->second;
    };
    dbl("theta.base", [](ProblemConfig& c) -> double& { return c.theta.base; });
    dbl("theta.amplitude", [](ProblemConfig& c) -> double& { return c.theta.amplitude; });
    integer("theta.kx", [](ProblemConfig& c) -> int& { return c.theta.kx; });
    integer("theta.ky", [](ProblemConfig& c) -> int& { return c.theta.ky; });
    dbl("theta.x0", [](ProblemConfig& c) -> double& { return c.theta.x0; });
    dbl("theta.y0", [](ProblemConfig& c) -> double& { return c.theta.y0; });
    dbl("theta.width", [](ProblemConfig& c) -> double& { return c.theta.width; });
    str("theta.path", [](ProblemConfig& c) -> std::string& { return c.theta.path; });

    m["mms.cells"] = [](ProblemConfig& c, const std::string& v) {
        c.mms.cells.clear();
        for (const auto& s : split_list(v)) c.mms.cells.push_back(parse_int(s));
    };
    dbl("mms.M", [](ProblemConfig& c) -> double& { return c.mms.M; });
    dbl("mms.lambda", [](ProblemConfig& c) -> double& { return c.mms.lambda; });
    dbl("mms.delta", [](ProblemConfig& c) -> double& { return c.mms.delta; });
    return m;
}

void collect(std::vector<Violation>& out, const std::function<void()>& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        out.insert(out.end(), e.violations().begin(), e.violations().end());
    }
}

std::vector<Violation> semantic_checks(const ProblemConfig& c) {
    std::vector<Violation> v;
    collect(v, [&] { c.grid.validate(); });
    collect(v, [&] { c.mixture.validate(); });
    const auto cv = c.continuation.violations();
    v.insert(v.end(), cv.begin(), cv.end());

    const ForceConfig& f = c.force;
    if (f.kx < 0 || f.ky < 0) v.push_back({"force.kx/ky", ">= 0 required"});
    if (f.preset == ForcePreset::Gaussian && !(f.width > 0.0)) v.push_back({"force.width", "> 0 required"});
    if (f.preset == ForcePreset::Csv && f.path.empty()) v.push_back({"force.path", "required for preset csv"});

    const ThetaConfig& t = c.theta;
    if (t.kx < 0 || t.ky < 0) v.push_back({"theta.kx/ky", ">= 0 required"});
    if (t.preset == ThetaPreset::Gaussian && !(t.width > 0.0)) v.push_back({"theta.width", "> 0 required"});
    if (t.preset == ThetaPreset::Csv && t.path.empty()) v.push_back({"theta.path", "required for preset csv"});
    if (t.preset != ThetaPreset::Csv) {
        const double low = t.preset == ThetaPreset::Constant   ? t.base
                           : t.preset == ThetaPreset::Fourier ? t.base - std::abs(t.amplitude)
                                                              : t.base + std::min(0.0, t.amplitude);
        if (!(low > 0.0)) v.push_back({"theta", "boundary temperature must stay > 0"});
    }

    if (c.mms.cells.size() < 2) v.push_back({"mms.cells", "at least two grids required"});
    for (std::size_t k = 0; k < c.mms.cells.size(); ++k) {
        if (c.mms.cells[k] < 8) v.push_back({"mms.cells", ">= 8 required"});
        if (k > 0 && c.mms.cells[k] <= c.mms.cells[k - 1]) v.push_back({"mms.cells", "must increase"});
    }
    if (!(c.mms.M > 0.0)) v.push_back({"mms.M", "> 0 required"});
    if (!(c.mms.lambda >= 0.0 && c.mms.lambda <= 1.0)) v.push_back({"mms.lambda", "in [0,1] required"});
    if (!(c.mms.delta > 0.0)) v.push_back({"mms.delta", "> 0 required"});
    return v;
}

const char* name_of(ForcePreset p) {
    switch (p) {
        case ForcePreset::Zero: return "zero";
        case ForcePreset::Constant: return "constant";
        case ForcePreset::Fourier: return "fourier";
        case ForcePreset::Gaussian: return "gaussian";
        case ForcePreset::Csv: return "csv";
    }
    return "?";
}

const char* name_of(ThetaPreset p) {
    switch (p) {
        case ThetaPreset::Constant: return "constant";
        case ThetaPreset::Fourier: return "fourier";
        case ThetaPreset::Gaussian: return "gaussian";
        case ThetaPreset::Csv: return "csv";
    }
    return "?";
}

std::string resolve(const std::string& base, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base.empty()) return p.string();
    return (std::filesystem::path(base) / p).string();
}

}  // namespace

ProblemConfig parse_config(const std::string& text, const std::string& base_dir) {
    const Table t = tokenize(text);
    const auto known = setters();
    ProblemConfig c;
    c.base_dir = base_dir;
    std::vector<Violation> v;
    for (const auto& [key, e] : t) {
        const std::string at = " (line " + std::to_string(e.line) + ", column " + std::to_string(e.column) + ")";
        auto it = known.find(key);
        if (it == known.end()) {
            v.push_back({key, "unknown key" + at});
            continue;
        }
        try {
            it->second(c, e.value);
        } catch (const std::invalid_argument& ex) {
            v.push_back({key, std::string(ex.what()) + at});
        }
    }
    if (t.count("continuation.lambda_steps") && t.count("continuation.lambda_schedule"))
        v.push_back({"continuation.lambda_schedule", "give either lambda_steps or lambda_schedule, not both"});
    const auto sem = semantic_checks(c);
    v.insert(v.end(), sem.begin(), sem.end());
    if (!v.empty()) throw ValidationError(std::move(v));
    return c;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot read config " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_config(ss.str(), base);
}

std::string ProblemConfig::canonical() const {
    std::ostringstream os;
    auto d = [](double x) { return format_double(x); };
    auto list = [&](const std::vector<double>& xs) {
        std::string s;
        for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + d(xs[k]);
        return s;
    };
    const auto& m = mixture;
    const auto& ct = continuation;
    os << "[grid]\nLx=" << d(grid.Lx) << "\nLy=" << d(grid.Ly) << "\nnx=" << grid.nx << "\nny=" << grid.ny << "\n";
    os << "[mixture]\nn=" << m.n << "\ngamma=" << d(m.gamma) << "\nc_v=" << list(m.c_v) << "\nD0=" << d(m.D0)
       << "\nkappa0=" << d(m.kappa0) << "\nL0=" << d(m.L0) << "\nLambda=" << d(m.Lambda) << "\nB_omega=" << d(m.B_omega)
       << "\nf_fric=" << d(m.f_fric) << "\n";
    os << "[continuation]\nM=" << d(ct.M) << "\nM_min=" << d(ct.M_min) << "\nlambda_schedule=" << list(ct.lambda_schedule)
       << "\ndelta_schedule=" << list(ct.delta_schedule) << "\nC0=" << d(ct.C0) << "\nE=" << d(ct.E)
       << "\nC_f=" << d(ct.C_f) << "\ndamping=" << d(ct.damping) << "\nfp_tol=" << d(ct.fp_tol)
       << "\nmax_fp=" << ct.max_fp << "\np=" << d(ct.p) << "\n";
    os << "[solver]\nnewton_tol=" << d(ct.solver.newton.tol) << "\nmax_newton=" << ct.solver.newton.max_iter
       << "\nbacktrack=" << d(ct.solver.newton.backtrack)
       << "\nconvection=" << (ct.solver.convection == ConvectionScheme::Upwind ? "upwind" : "centered")
       << "\ncoupling=" << (ct.solver.coupling == ReactionCoupling::Implicit ? "implicit" : "barred")
       << "\nreuse_factorization=" << (ct.solver.reuse_factorization ? "true" : "false") << "\n";
    os << "[force]\npreset=" << name_of(force.preset) << "\nvalue_x=" << d(force.value_x) << "\nvalue_y=" << d(force.value_y)
       << "\namplitude=" << d(force.amplitude) << "\nkx=" << force.kx << "\nky=" << force.ky << "\nx0=" << d(force.x0)
       << "\ny0=" << d(force.y0) << "\nwidth=" << d(force.width) << "\nangle=" << d(force.angle)
       << "\n" << (force.path.empty() ? "" : "path=" + force.path + "\n");
    os << "[theta]\npreset=" << name_of(theta.preset) << "\nbase=" << d(theta.base) << "\namplitude=" << d(theta.amplitude)
       << "\nkx=" << theta.kx << "\nky=" << theta.ky << "\nx0=" << d(theta.x0) << "\ny0=" << d(theta.y0)
       << "\nwidth=" << d(theta.width) << "\n" << (theta.path.empty() ? "" : "path=" + theta.path + "\n");
    std::string cells;
    for (std::size_t k = 0; k < mms.cells.size(); ++k) cells += (k ? "," : "") + std::to_string(mms.cells[k]);
    os << "[mms]\ncells=" << cells << "\nM=" << d(mms.M) << "\nlambda=" << d(mms.lambda) << "\ndelta=" << d(mms.delta)
       << "\n";
    return os.str();
}

std::string ProblemConfig::hash() const {
    const std::string text = canonical();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 15];
    }
    return out;
}

ProblemData build_problem_data(const ProblemConfig& cfg) { return build_problem_data(cfg, cfg.grid); }

ProblemData build_problem_data(const ProblemConfig& cfg, const GridSpec& g) {
    ProblemData d = ProblemData::trivial(g, cfg.theta.base);
    const double pi = std::acos(-1.0);
    const ForceConfig& f = cfg.force;
    switch (f.preset) {
        case ForcePreset::Zero: break;
        case ForcePreset::Constant:
            std::fill(d.force.x.begin(), d.force.x.end(), f.value_x);
            std::fill(d.force.y.begin(), d.force.y.end(), f.value_y);
            break;
        case ForcePreset::Fourier:
            for (int j = 0; j <= g.ny; ++j)
                for (int i = 0; i <= g.nx; ++i) {
                    const double ax = f.kx * pi * g.x(i) / g.Lx, ay = f.ky * pi * g.y(j) / g.Ly;
                    d.force.x[g.index(i, j)] = f.amplitude * std::cos(ax) * std::sin(ay);
                    d.force.y[g.index(i, j)] = -f.amplitude * std::sin(ax) * std::cos(ay);
                }
            break;
        case ForcePreset::Gaussian:
            for (int j = 0; j <= g.ny; ++j)
                for (int i = 0; i <= g.nx; ++i) {
                    const double dx = g.x(i) - f.x0, dy = g.y(j) - f.y0;
                    const double b = f.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * f.width * f.width));
                    d.force.x[g.index(i, j)] = b * std::cos(f.angle);
                    d.force.y[g.index(i, j)] = b * std::sin(f.angle);
                }
            break;
        case ForcePreset::Csv: {
            const std::string path = resolve(cfg.base_dir, f.path);
            FieldTable t = read_field_csv(path);
            if (t.header.grid.nx != g.nx || t.header.grid.ny != g.ny)
                throw DataError(path + ": grid size differs from the configuration");
            if (t.names != std::vector<std::string>{"f_x", "f_y"}) throw DataError(path + ": columns f_x,f_y expected");
            d.force.x = std::move(t.columns[0]);
            d.force.y = std::move(t.columns[1]);
            break;
        }
    }

    const ThetaConfig& t = cfg.theta;
    if (t.preset == ThetaPreset::Csv) {
        d.Theta = read_boundary_csv(resolve(cfg.base_dir, t.path), g);
    } else if (t.preset != ThetaPreset::Constant) {
        ScalarField th(g.size());
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) {
                double v = t.base;
                if (t.preset == ThetaPreset::Fourier) {
                    v += t.amplitude * std::cos(t.kx * pi * g.x(i) / g.Lx) * std::cos(t.ky * pi * g.y(j) / g.Ly);
                } else {
                    const double dx = g.x(i) - t.x0, dy = g.y(j) - t.y0;
                    v += t.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * t.width * t.width));
                }
                th[g.index(i, j)] = v;
            }
        d.Theta = trace(g, th);
    }
    for (const auto& side : d.Theta.side)
        for (double v : side)
            if (!(v > 0.0) || !std::isfinite(v)) throw DataError("boundary temperature must be finite and positive");
    for (std::size_t p = 0; p < g.size(); ++p)
        if (!std::isfinite(d.force.x[p]) || !std::isfinite(d.force.y[p])) throw DataError("force must be finite");
    return d;
}

MmsOptions mms_options(const ProblemConfig& cfg) {
    MmsOptions o;
    o.cells = cfg.mms.cells;
    o.M = cfg.mms.M;
    o.lambda = cfg.mms.lambda;
    o.delta = cfg.mms.delta;
    o.solver = cfg.continuation.solver;
    return o;
}

}  // namespace mixsteady
