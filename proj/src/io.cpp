#include "mixsteady/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace mixsteady {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string header_line(const char* schema, const FileHeader& h) {
    std::ostringstream os;
    os << "# " << schema << " version=" << kToolVersion << " config=" << h.config_hash << " M=" << format_double(h.M)
       << " delta=" << format_double(h.delta) << " Lx=" << format_double(h.grid.Lx)
       << " Ly=" << format_double(h.grid.Ly) << " nx=" << h.grid.nx << " ny=" << h.grid.ny;
    return os.str();
}

FileHeader parse_header(const std::string& line, const char* schema, const std::string& path) {
    std::istringstream is(line);
    std::string hash, tag;
    is >> hash >> tag;
    if (hash != "#" || tag != schema) throw DataError(path + ": expected header '# " + schema + " ...'");
    std::map<std::string, std::string> kv;
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw DataError(path + ": malformed header token '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto need = [&](const char* k) -> const std::string& {
        auto it = kv.find(k);
        if (it == kv.end()) throw DataError(path + ": header lacks '" + k + "'");
        return it->second;
    };
    FileHeader h;
    try {
        h.config_hash = need("config");
        h.M = parse_double(need("M"));
        h.delta = parse_double(need("delta"));
        h.grid.Lx = parse_double(need("Lx"));
        h.grid.Ly = parse_double(need("Ly"));
        h.grid.nx = std::stoi(need("nx"));
        h.grid.ny = std::stoi(need("ny"));
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": bad header value: " + e.what());
    }
    if (h.grid.nx < 1 || h.grid.ny < 1) throw DataError(path + ": bad grid size in header");
    return h;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot read " + path);
    return is;
}

const char* side_name(int s) {
    static const char* names[] = {"left", "right", "bottom", "top"};
    return names[s];
}

}  // namespace

void write_field_csv(const std::string& path, const FileHeader& h, const std::vector<std::string>& names,
                     const std::vector<const ScalarField*>& columns) {
    const GridSpec& g = h.grid;
    std::ofstream os = open_out(path);
    os << header_line(kFieldSchema, h) << '\n' << "i,j,x,y";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const std::size_t p = g.index(i, j);
            os << i << ',' << j << ',' << format_double(g.x(i)) << ',' << format_double(g.y(j));
            for (const ScalarField* c : columns) os << ',' << format_double((*c)[p]);
            os << '\n';
        }
    if (!os) throw DataError("write failed: " + path);
}

FieldTable read_field_csv(const std::string& path) {
    std::ifstream is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw DataError(path + ": empty file");
    FieldTable t;
    t.header = parse_header(line, kFieldSchema, path);
    const GridSpec& g = t.header.grid;
    if (!std::getline(is, line)) throw DataError(path + ": missing column line");
    const auto cols = split(line, ',');
    if (cols.size() < 5 || cols[0] != "i" || cols[1] != "j" || cols[2] != "x" || cols[3] != "y")
        throw DataError(path + ": columns must start with i,j,x,y and name at least one field");
    t.names.assign(cols.begin() + 4, cols.end());
    t.columns.assign(t.names.size(), ScalarField(g.size(), 0.0));
    std::vector<char> seen(g.size(), 0);
    std::size_t rows = 0;
    int lineno = 2;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != cols.size())
            throw DataError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols.size()) + " values");
        int i = 0, j = 0;
        try {
            i = std::stoi(f[0]);
            j = std::stoi(f[1]);
            if (i < 0 || i > g.nx || j < 0 || j > g.ny) throw std::out_of_range("index");
            const std::size_t p = g.index(i, j);
            if (seen[p]) throw DataError(path + ":" + std::to_string(lineno) + ": duplicate node");
            seen[p] = 1;
            for (std::size_t c = 0; c < t.names.size(); ++c) t.columns[c][p] = parse_double(f[4 + c]);
        } catch (const std::logic_error& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        ++rows;
    }
    if (rows != g.size())
        throw DataError(path + ": expected " + std::to_string(g.size()) + " rows, found " + std::to_string(rows));
    return t;
}

void write_boundary_csv(const std::string& path, const FileHeader& h, const BoundaryFlux& b) {
    const GridSpec& g = h.grid;
    std::ofstream os = open_out(path);
    os << header_line(kBoundarySchema, h) << '\n' << "side,index,x,y,Theta\n";
    for (int s = 0; s < 4; ++s) {
        const bool vertical = s < 2;
        for (std::size_t q = 0; q < b.side[s].size(); ++q) {
            const int k = static_cast<int>(q);
            const double x = vertical ? (s == 0 ? 0.0 : g.Lx) : g.x(k);
            const double y = vertical ? g.y(k) : (s == 2 ? 0.0 : g.Ly);
            os << side_name(s) << ',' << k << ',' << format_double(x) << ',' << format_double(y) << ','
               << format_double(b.side[s][q]) << '\n';
        }
    }
}

BoundaryFlux read_boundary_csv(const std::string& path, const GridSpec& g) {
    std::ifstream is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw DataError(path + ": empty file");
    const FileHeader h = parse_header(line, kBoundarySchema, path);
    if (h.grid.nx != g.nx || h.grid.ny != g.ny) throw DataError(path + ": grid size differs from the configuration");
    if (!std::getline(is, line) || line != "side,index,x,y,Theta")
        throw DataError(path + ": column line must be side,index,x,y,Theta");
    BoundaryFlux b = BoundaryFlux::zeros(g);
    std::array<std::vector<char>, 4> seen;
    for (int s = 0; s < 4; ++s) seen[s].assign(b.side[s].size(), 0);
    int lineno = 2;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        const std::string where = path + ":" + std::to_string(lineno);
        if (f.size() != 5) throw DataError(where + ": expected 5 values");
        int s = -1;
        for (int k = 0; k < 4; ++k)
            if (f[0] == side_name(k)) s = k;
        if (s < 0) throw DataError(where + ": unknown side '" + f[0] + "'");
        try {
            const int k = std::stoi(f[1]);
            if (k < 0 || k >= static_cast<int>(b.side[s].size())) throw std::out_of_range("index");
            b.side[s][k] = parse_double(f[4]);
            seen[s][k] = 1;
        } catch (const std::logic_error& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    for (int s = 0; s < 4; ++s)
        for (char c : seen[s])
            if (!c) throw DataError(path + ": missing nodes on side " + side_name(s));
    return b;
}

void write_state(const std::string& dir, const FileHeader& h, const PhysicalState& s) {
    fs::create_directories(dir);
    const fs::path d(dir);
    write_field_csv((d / "r.csv").string(), h, {"r"}, {&s.r});
    write_field_csv((d / "u_x.csv").string(), h, {"u_x"}, {&s.u.x});
    write_field_csv((d / "u_y.csv").string(), h, {"u_y"}, {&s.u.y});
    write_field_csv((d / "theta.csv").string(), h, {"theta"}, {&s.theta});
    for (std::size_t k = 0; k < s.Y.size(); ++k) {
        const std::string name = "Y_" + std::to_string(k + 1);
        write_field_csv((d / (name + ".csv")).string(), h, {name}, {&s.Y[k]});
    }
}

LoadedState read_state(const std::string& dir) {
    const fs::path d(dir);
    auto load = [&](const std::string& name, const FileHeader* ref) {
        const std::string path = (d / (name + ".csv")).string();
        FieldTable t = read_field_csv(path);
        if (t.names.size() != 1 || t.names[0] != name) throw DataError(path + ": expected a single column '" + name + "'");
        if (ref && (t.header.grid.nx != ref->grid.nx || t.header.grid.ny != ref->grid.ny ||
                    t.header.grid.Lx != ref->grid.Lx || t.header.grid.Ly != ref->grid.Ly || t.header.M != ref->M ||
                    t.header.delta != ref->delta || t.header.config_hash != ref->config_hash))
            throw DataError(path + ": header differs from r.csv");
        return t;
    };
    FieldTable r = load("r", nullptr);
    LoadedState out;
    out.header = r.header;
    PhysicalState& s = out.state;
    s.grid = r.header.grid;
    s.M = r.header.M;
    s.r = std::move(r.columns[0]);
    s.u = VectorField(s.grid.size());
    s.u.x = std::move(load("u_x", &out.header).columns[0]);
    s.u.y = std::move(load("u_y", &out.header).columns[0]);
    s.theta = std::move(load("theta", &out.header).columns[0]);
    for (int k = 1; fs::exists(d / ("Y_" + std::to_string(k) + ".csv")); ++k)
        s.Y.push_back(std::move(load("Y_" + std::to_string(k), &out.header).columns[0]));
    if (s.Y.size() < 2) throw DataError(dir + ": at least Y_1.csv and Y_2.csv are required");

    const GridSpec& g = s.grid;
    auto where = [&](std::size_t p) {
        const int i = static_cast<int>(p % static_cast<std::size_t>(g.px())), j = static_cast<int>(p / g.px());
        return " at node (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
    };
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!(s.theta[p] > 0.0)) throw DomainError("theta must be positive" + where(p));
        if (!(s.M + s.r[p] > 0.0)) throw DomainError("density M + r must be positive" + where(p));
        for (std::size_t k = 0; k < s.Y.size(); ++k)
            if (!(s.Y[k][p] > 0.0)) throw DomainError("Y_" + std::to_string(k + 1) + " must be positive" + where(p));
    }
    return out;
}

namespace {

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json vec(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

ordered_json balance(const Balance& b) {
    return {{"residual", num(b.residual)}, {"raw", num(b.raw)}, {"regularization", num(b.regularization)}};
}

}  // namespace

ordered_json header_json(const char* schema, const FileHeader& h) {
    return {{"schema", schema},
            {"version", kToolVersion},
            {"config_hash", h.config_hash},
            {"M", num(h.M)},
            {"delta", num(h.delta)},
            {"grid", {{"Lx", num(h.grid.Lx)}, {"Ly", num(h.grid.Ly)}, {"nx", h.grid.nx}, {"ny", h.grid.ny}}}};
}

ordered_json to_json(const DiagnosticsReport& d) {
    ordered_json ledger = ordered_json::array();
    for (const auto& e : d.ledger)
        ledger.push_back({{"id", e.id}, {"lhs", num(e.lhs)}, {"rhs", num(e.rhs)}, {"holds", e.holds}});
    auto term_min = [](const ScalarField& f) {
        double m = INFINITY;
        for (double v : f) m = std::min(m, v);
        return m;
    };
    return {{"sigma",
             {{"min", num(d.sigma.min)},
              {"max_abs", num(d.sigma.max_abs)},
              {"sign_ok", d.sigma.min >= -1e-12 * std::max(1.0, d.sigma.max_abs)},
              {"term_min",
               {{"viscous", num(term_min(d.sigma.viscous))},
                {"thermal", num(term_min(d.sigma.thermal))},
                {"diffusive", num(term_min(d.sigma.diffusive))},
                {"reactive", num(term_min(d.sigma.reactive))}}},
              {"regularization", num(d.sigma_regularization)}}},
            {"entropy_balance", balance(d.entropy)},
            {"total_energy_balance", balance(d.energy)},
            {"xi", num(d.xi)},
            {"xi_over_M", num(d.xi_over_M)},
            {"mass_defect", {{"l2", num(d.defect.l2)}, {"w12", num(d.defect.w12)}}},
            {"compat", vec(d.compat)},
            {"bound_ledger", ledger}};
}

ordered_json to_json(const StepRecord& s) {
    ordered_json mem = ordered_json::array();
    for (const auto& m : s.membership)
        mem.push_back(
            {{"set", m.set}, {"quantity", m.quantity}, {"value", num(m.value)}, {"bound", num(m.bound)}, {"holds", m.holds}});
    return {{"lambda", num(s.lambda)},
            {"delta", num(s.delta)},
            {"eps", num(s.eps)},
            {"iterations", s.iterations},
            {"update_norm", num(s.update_norm)},
            {"update_history", vec(s.update_history)},
            {"g_val", num(s.g_val)},
            {"subsolves",
             {{"flow_residual", num(s.subsolves.flow_residual)},
              {"species_residual", num(s.subsolves.species_residual)},
              {"thermal_residual", num(s.subsolves.thermal_residual)},
              {"newton_iterations", s.subsolves.newton_iterations}}},
            {"membership", mem},
            {"diagnostics", to_json(s.diagnostics)}};
}

ordered_json to_json(const SolverReport& r) {
    ordered_json steps = ordered_json::array();
    for (const auto& s : r.steps) steps.push_back(to_json(s));
    ordered_json trace = ordered_json::array();
    for (const auto& [d, v] : r.defect_trace) trace.push_back({{"delta", num(d)}, {"mass_defect_l2", num(v)}});
    ordered_json j = {{"completed", r.completed()}, {"steps", steps}, {"defect_trace", trace}};
    if (r.failure)
        j["failure"] = {{"kind", to_string(r.failure->kind)},
                        {"message", r.failure->message},
                        {"lambda", num(r.failure->lambda)},
                        {"delta", num(r.failure->delta)}};
    else
        j["failure"] = nullptr;
    return j;
}

ordered_json to_json(const MmsTable& t) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"cells", r.cells},
                        {"h", num(r.h)},
                        {"error_l2", num(r.error_l2)},
                        {"error_max", num(r.error_max)},
                        {"newton_iterations", r.newton_iterations}});
    return {{"case", to_string(t.kind)},
            {"convection", t.convection},
            {"rows", rows},
            {"order_l2", num(t.order_l2)},
            {"order_max", num(t.order_max)}};
}

void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream os = open_out(path);
    os << j.dump(2) << '\n';
    if (!os) throw DataError("write failed: " + path);
}

}  // namespace mixsteady
