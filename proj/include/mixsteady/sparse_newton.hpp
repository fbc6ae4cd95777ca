#pragma once

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>
#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "mixsteady/dual.hpp"
#include "mixsteady/errors.hpp"
#include "mixsteady/grid.hpp"

namespace mixsteady {

struct NewtonOptions {
    double tol = 1e-10;            // relative: ||R|| <= tol (1 + ||R0||), RMS norm
    int max_iter = 50;
    double backtrack = 0.5;
    int max_backtracks = 40;
    double step_tol = 1e-13;       // full step below this (relative to ||x||_inf) counts as converged
    bool reuse_factorization = false;
    double chord_rate = 0.25;      // stale-Jacobian step accepted if it cuts ||R|| by this factor
};

struct NewtonReport {
    int iterations = 0;
    int jacobians = 0;
    double initial_residual = 0.0;
    double final_residual = 0.0;
    std::vector<double> history;
    bool converged = false;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

inline double rms(const std::vector<double>& r) {
    long double s = 0.0L;
    for (double v : r) s += static_cast<long double>(v) * v;
    return r.empty() ? 0.0 : static_cast<double>(std::sqrt(s / static_cast<long double>(r.size())));
}

// Problem concept:
//   const GridSpec& grid() const;   int components() const;
//   int radius() const;             int globals() const;
//   template <class T> void residual(const T* x, T* R) const;
//   void global_rows(const double* x, std::vector<Triplet>& out) const;
//   void check(const double* x) const;   // throws SolverError when inadmissible
// Unknowns are node-major (x[node * components + c]) followed by `globals`
// scalars. Rows of the global unknowns must be linear and are supplied by
// global_rows; every other Jacobian entry comes from colored dual sweeps.
template <class Problem>
void assemble_jacobian(const Problem& p, const std::vector<double>& x, SparseMatrix& J) {
    const GridSpec& g = p.grid();
    const int nc = p.components();
    const int R = p.radius();
    const int P = 2 * R + 1;
    const int ng = p.globals();
    const std::size_t nodes = g.size();
    const std::size_t nloc = nodes * static_cast<std::size_t>(nc);
    const std::size_t N = nloc + static_cast<std::size_t>(ng);

    std::vector<Dual> xd(N), rd(N);
    std::vector<Triplet> trip;
    trip.reserve(nloc * static_cast<std::size_t>(nc) * static_cast<std::size_t>(4 * R * R + 4 * R + 1) / 2);

    auto reset = [&] {
        for (std::size_t k = 0; k < N; ++k) xd[k] = Dual(x[k], 0.0);
    };

    for (int color = 0; color < P * P * nc; ++color) {
        const int ci = color % P;
        const int cj = (color / P) % P;
        const int cc = color / (P * P);
        reset();
        bool any = false;
        for (int j = cj; j <= g.ny; j += P)
            for (int i = ci; i <= g.nx; i += P) {
                xd[g.index(i, j) * nc + cc].d = 1.0;
                any = true;
            }
        if (!any) continue;
        p.residual(xd.data(), rd.data());
        for (int j = 0; j <= g.ny; ++j) {
            int dj = ((cj - j) % P + P) % P;
            if (dj > R) dj -= P;
            const int jc = j + dj;
            if (jc < 0 || jc > g.ny) continue;
            for (int i = 0; i <= g.nx; ++i) {
                int di = ((ci - i) % P + P) % P;
                if (di > R) di -= P;
                const int ic = i + di;
                if (ic < 0 || ic > g.nx) continue;
                const std::size_t col = g.index(ic, jc) * nc + cc;
                const std::size_t rowbase = g.index(i, j) * nc;
                for (int c = 0; c < nc; ++c) {
                    const double v = rd[rowbase + c].d;
                    if (v != 0.0) trip.emplace_back(static_cast<int>(rowbase + c), static_cast<int>(col), v);
                }
            }
        }
    }
    for (int k = 0; k < ng; ++k) {
        reset();
        xd[nloc + k].d = 1.0;
        p.residual(xd.data(), rd.data());
        for (std::size_t r = 0; r < nloc; ++r)
            if (rd[r].d != 0.0) trip.emplace_back(static_cast<int>(r), static_cast<int>(nloc + k), rd[r].d);
    }
    if (ng > 0) p.global_rows(x.data(), trip);

    J.resize(static_cast<int>(N), static_cast<int>(N));
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
}

// Newton with backtracking. Keeps its LU factorization between calls so a
// sequence of nearby solves can run chord steps on a stale Jacobian.
class NewtonSolver {
public:
    explicit NewtonSolver(NewtonOptions opt = {}) : opt_(opt) {}
    NewtonOptions& options() { return opt_; }
    void invalidate() { lu_.reset(); }

    template <class Problem>
    NewtonReport solve(const Problem& p, std::vector<double>& x);

private:
    struct Factor {
        SparseMatrix J;  // UmfPackLU keeps a reference to the factored matrix
        Eigen::UmfPackLU<SparseMatrix> lu;
        std::size_t n = 0;
    };

    template <class Problem>
    void refactor(const Problem& p, const std::vector<double>& x, NewtonReport& rep);
    std::vector<double> apply_inverse(const std::vector<double>& r) const;

    NewtonOptions opt_;
    std::unique_ptr<Factor> lu_;
};

template <class Problem>
void NewtonSolver::refactor(const Problem& p, const std::vector<double>& x, NewtonReport& rep) {
    auto f = std::make_unique<Factor>();
    assemble_jacobian(p, x, f->J);
    f->n = x.size();
    f->lu.analyzePattern(f->J);
    f->lu.factorize(f->J);
    if (f->lu.info() != Eigen::Success)
        throw SolverError(SolverFailure::SingularLinearSystem, "sparse LU factorization failed");
    lu_ = std::move(f);
    ++rep.jacobians;
}

inline std::vector<double> NewtonSolver::apply_inverse(const std::vector<double>& r) const {
    Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    Eigen::VectorXd d = lu_->lu.solve(rv);
    if (lu_->lu.info() != Eigen::Success)
        throw SolverError(SolverFailure::SingularLinearSystem, "sparse LU solve failed");
    std::vector<double> out(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) out[k] = d[static_cast<Eigen::Index>(k)];
    return out;
}

template <class Problem>
NewtonReport NewtonSolver::solve(const Problem& p, std::vector<double>& x) {
    NewtonReport rep;
    const std::size_t N = x.size();
    if (lu_ && lu_->n != N) lu_.reset();
    if (!opt_.reuse_factorization) lu_.reset();

    p.check(x.data());
    std::vector<double> r(N), rt(N), xt(N);
    p.residual(x.data(), r.data());
    double nr = rms(r);
    rep.initial_residual = nr;
    rep.history.push_back(nr);
    const double target = opt_.tol * (1.0 + nr);

    auto xinf = [&] {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    };
    auto finite = [](double v) { return std::isfinite(v); };

    bool fresh = false;
    while (true) {
        if (nr <= target) {
            rep.converged = true;
            break;
        }
        if (rep.iterations >= opt_.max_iter)
            throw SolverError(SolverFailure::NonConvergence,
                              "Newton hit the iteration cap with residual " + std::to_string(nr));

        if (!lu_) {
            refactor(p, x, rep);
            fresh = true;
        }
        const std::vector<double> dx = apply_inverse(r);
        double dinf = 0.0;
        for (double v : dx) dinf = std::max(dinf, std::abs(v));
        ++rep.iterations;

        if (!fresh) {
            // Chord step on the stale factorization, full length only.
            bool ok = true;
            for (std::size_t k = 0; k < N; ++k) xt[k] = x[k] - dx[k];
            try {
                p.check(xt.data());
                p.residual(xt.data(), rt.data());
            } catch (const SolverError&) {
                ok = false;
            } catch (const DomainError&) {
                ok = false;
            }
            const double nt = ok ? rms(rt) : INFINITY;
            if (ok && finite(nt) && nt <= opt_.chord_rate * nr) {
                x.swap(xt);
                r.swap(rt);
                nr = nt;
                rep.history.push_back(nr);
                continue;
            }
            refactor(p, x, rep);
            fresh = true;
            --rep.iterations;
            continue;
        }

        // A fresh step this small cannot be resolved against rounding in the
        // residual; take it and stop instead of backtracking on noise.
        if (dinf <= 1e3 * opt_.step_tol * (1.0 + xinf())) {
            for (std::size_t k = 0; k < N; ++k) xt[k] = x[k] - dx[k];
            p.check(xt.data());
            p.residual(xt.data(), rt.data());
            x.swap(xt);
            r.swap(rt);
            nr = rms(r);
            rep.history.push_back(nr);
            rep.converged = true;
            break;
        }

        double alpha = 1.0;
        bool accepted = false;
        std::optional<SolverError> last;
        for (int b = 0; b <= opt_.max_backtracks; ++b) {
            for (std::size_t k = 0; k < N; ++k) xt[k] = x[k] - alpha * dx[k];
            try {
                p.check(xt.data());
                p.residual(xt.data(), rt.data());
                const double nt = rms(rt);
                if (finite(nt) && nt <= (1.0 - 1e-4 * alpha) * nr) {
                    accepted = true;
                    nr = nt;
                    break;
                }
            } catch (const SolverError& e) {
                last = e;
            } catch (const DomainError&) {
            }
            alpha *= opt_.backtrack;
        }
        if (!accepted) {
            // At the rounding floor the full step is negligible and the
            // residual cannot decrease further.
            if (dinf <= 1e3 * opt_.step_tol * (1.0 + xinf())) {
                rep.converged = true;
                break;
            }
            if (last) throw *last;
            throw SolverError(SolverFailure::NonConvergence,
                              "line search failed with residual " + std::to_string(nr));
        }
        x.swap(xt);
        r.swap(rt);
        rep.history.push_back(nr);
        fresh = !opt_.reuse_factorization;
        if (!opt_.reuse_factorization) lu_.reset();
        if (alpha == 1.0 && dinf <= opt_.step_tol * (1.0 + xinf())) {
            rep.converged = true;
            break;
        }
    }
    rep.final_residual = nr;
    return rep;
}

}  // namespace mixsteady
