#include "covclone/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace covclone {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---- small Hermitian 3x3 helpers for the barrier ----
// Cholesky keeps log-det and inverse usable when the block is nearly
// singular, which the central path reaches at small mu.

struct Cholesky3 {
    bool ok = false;
    complexd l10, l20, l21;
    double d0 = 0, d1 = 0, d2 = 0;  // positive diagonal of L
};

Cholesky3 cholesky3(const ComplexMatrix& b) {
    Cholesky3 ch;
    const double a00 = b(0, 0).real();
    if (!(a00 > 0)) return ch;
    ch.d0 = std::sqrt(a00);
    ch.l10 = std::conj(b(0, 1)) / ch.d0;
    ch.l20 = std::conj(b(0, 2)) / ch.d0;
    const double p1 = b(1, 1).real() - std::norm(ch.l10);
    if (!(p1 > 0)) return ch;
    ch.d1 = std::sqrt(p1);
    ch.l21 = (std::conj(b(1, 2)) - ch.l20 * std::conj(ch.l10)) / ch.d1;
    const double p2 = b(2, 2).real() - std::norm(ch.l20) - std::norm(ch.l21);
    if (!(p2 > 0)) return ch;
    ch.d2 = std::sqrt(p2);
    ch.ok = true;
    return ch;
}

bool positive_definite3(const ComplexMatrix& b) { return cholesky3(b).ok; }

double log_det3(const ComplexMatrix& b) {
    const Cholesky3 ch = cholesky3(b);
    return 2.0 * (std::log(ch.d0) + std::log(ch.d1) + std::log(ch.d2));
}

ComplexMatrix inverse3(const ComplexMatrix& b) {
    const Cholesky3 ch = cholesky3(b);
    ComplexMatrix inv(3, 3);
    for (int col = 0; col < 3; ++col) {
        // forward solve L z = e_col
        complexd z0 = (col == 0) ? complexd{1.0 / ch.d0} : complexd{};
        complexd z1 = ((col == 1) ? complexd{1.0} : complexd{}) - ch.l10 * z0;
        z1 /= ch.d1;
        complexd z2 = ((col == 2) ? complexd{1.0} : complexd{}) - ch.l20 * z0 - ch.l21 * z1;
        z2 /= ch.d2;
        // back solve L^dag x = z
        const complexd x2 = z2 / ch.d2;
        const complexd x1 = (z1 - std::conj(ch.l21) * x2) / ch.d1;
        const complexd x0 = (z0 - std::conj(ch.l10) * x1 - std::conj(ch.l20) * x2) / ch.d0;
        inv(0, static_cast<std::size_t>(col)) = x0;
        inv(1, static_cast<std::size_t>(col)) = x1;
        inv(2, static_cast<std::size_t>(col)) = x2;
    }
    return inv;
}

double re_trace_prod(const ComplexMatrix& a, const ComplexMatrix& b) {
    complexd t{};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
    return t.real();
}

// Gaussian elimination with partial pivoting; small dense systems only.
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        const double p = a[col][col];
        if (p == 0.0) throw std::runtime_error("solve_linear: singular system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / p;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// Reduced variable basis: full params x = e0 + sum_j y_j dx_j with the
// trace-preserving equality eliminated through c00.
struct VarBasis {
    std::vector<std::array<double, 7>> dx;
    std::vector<ComplexMatrix> db1;   // 3x3 derivative of the B1 block
    std::vector<double> dc00;
    std::vector<ComplexMatrix> dc1;   // 3x3 derivative of the CP block
    std::size_t size() const { return dx.size(); }
};

ComplexMatrix e3(std::size_t i, std::size_t j) {
    ComplexMatrix m(3, 3);
    m(i, j) = 1.0;
    return m;
}

VarBasis make_basis(const SymmetryFlags& flags) {
    VarBasis vb;
    auto add = [&](std::array<double, 7> dx, ComplexMatrix db1, double dc00, ComplexMatrix dc1) {
        vb.dx.push_back(dx);
        vb.db1.push_back(std::move(db1));
        vb.dc00.push_back(dc00);
        vb.dc1.push_back(std::move(dc1));
    };
    const complexd i1{0.0, 1.0};
    // C1 block (input partial transpose) = [[c00,c12,c12],[c12*,c33,c24],[c12*,c24,c22]]
    add({-1, 1, 0, 0, 0, 0, 0}, e3(0, 0), -1.0, -e3(0, 0));  // c11
    if (flags.swap_clones) {
        add({-2, 0, 1, 1, 0, 0, 0}, e3(1, 1) + e3(2, 2), -2.0,
            e3(1, 1) + e3(2, 2) - e3(0, 0) * complexd{2.0});  // c22 = c33 shared
    } else {
        add({-1, 0, 1, 0, 0, 0, 0}, e3(1, 1), -1.0, e3(2, 2) - e3(0, 0));  // c22
        add({-1, 0, 0, 1, 0, 0, 0}, e3(2, 2), -1.0, e3(1, 1) - e3(0, 0));  // c33
    }
    add({0, 0, 0, 0, 1, 0, 0}, e3(1, 2) + e3(2, 1), 0.0, e3(1, 2) + e3(2, 1));        // c24
    add({0, 0, 0, 0, 0, 1, 0}, e3(0, 1) + e3(0, 2) + e3(1, 0) + e3(2, 0), 0.0,
        e3(0, 1) + e3(0, 2) + e3(1, 0) + e3(2, 0));                                   // Re c12
    add({0, 0, 0, 0, 0, 0, 1}, (e3(0, 1) + e3(0, 2)) * i1 - (e3(1, 0) + e3(2, 0)) * i1, 0.0,
        (e3(0, 1) + e3(0, 2)) * i1 - (e3(1, 0) + e3(2, 0)) * i1);                      // Im c12
    return vb;
}

std::array<double, 7> params_of(const VarBasis& vb, const std::vector<double>& y) {
    std::array<double, 7> x{1, 0, 0, 0, 0, 0, 0};  // base point: c00 = 1
    for (std::size_t j = 0; j < vb.size(); ++j)
        for (int k = 0; k < 7; ++k) x[static_cast<std::size_t>(k)] += y[j] * vb.dx[j][static_cast<std::size_t>(k)];
    return x;
}

struct BarrierState {
    double c00 = 0;
    ComplexMatrix b1;
    ComplexMatrix c1;
};

BarrierState barrier_state(const VarBasis& vb, const std::vector<double>& y, bool with_cp) {
    const auto x = params_of(vb, y);
    const CovariantParams p = CovariantParams::from_array(x);
    BarrierState st;
    st.c00 = p.c00;
    st.b1 = p.b1_block();
    if (with_cp) {
        st.c1 = ComplexMatrix(3, 3);
        st.c1(0, 0) = p.c00; st.c1(0, 1) = p.c12; st.c1(0, 2) = p.c12;
        st.c1(1, 0) = std::conj(p.c12); st.c1(1, 1) = p.c33; st.c1(1, 2) = p.c24;
        st.c1(2, 0) = std::conj(p.c12); st.c1(2, 1) = p.c24; st.c1(2, 2) = p.c22;
    }
    return st;
}

bool feasible(const BarrierState& st, bool with_cp) {
    if (!(st.c00 > 0)) return false;
    if (!positive_definite3(st.b1)) return false;
    if (with_cp && !positive_definite3(st.c1)) return false;
    return true;
}

double barrier_value(const BarrierState& st, bool with_cp) {
    double v = -std::log(st.c00) - log_det3(st.b1);
    if (with_cp) v -= log_det3(st.c1);
    return v;
}

}  // namespace

Ensemble Ensemble::single(const PureQubit& q) {
    Ensemble e;
    e.members.emplace_back(q, 1.0);
    return e;
}

void Ensemble::validate(double tol) const {
    if (members.empty()) throw std::invalid_argument("Ensemble: empty");
    double sum = 0;
    for (const auto& [q, w] : members) {
        (void)q;
        if (!(w > 0)) throw std::invalid_argument("Ensemble: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument("Ensemble: weights must sum to 1");
}

std::array<double, 7> objective_coefficients(const Ensemble& e, Variant v, int clone) {
    e.validate();
    if (clone != 1 && clone != 2) throw std::invalid_argument("clone index must be 1 or 2");
    std::array<double, 7> g{};
    for (const auto& [q, w] : e.members) {
        const ComplexMatrix k = fidelity_kernel(q, v, clone);
        for (int i = 0; i < 7; ++i) {
            ComplexMatrix gen = family_generator(i);
            if (v == Variant::v1) gen = variant1_conjugate(gen);
            g[static_cast<std::size_t>(i)] += w * re_trace_prod(k, gen);
        }
    }
    return g;
}

SdpResult optimize_fidelity(const Ensemble& e, Variant v, const SdpOptions& options) {
    e.validate();
    std::array<double, 7> g{};
    switch (options.objective) {
        case ObjectiveKind::clone1: g = objective_coefficients(e, v, 1); break;
        case ObjectiveKind::clone2: g = objective_coefficients(e, v, 2); break;
        case ObjectiveKind::symmetric: {
            const auto g1 = objective_coefficients(e, v, 1);
            const auto g2 = objective_coefficients(e, v, 2);
            for (std::size_t k = 0; k < 7; ++k) g[k] = 0.5 * (g1[k] + g2[k]);
            break;
        }
    }

    const bool with_cp = options.flags.require_cp;
    const VarBasis vb = make_basis(options.flags);
    const std::size_t n = vb.size();

    std::vector<double> gy(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (int k = 0; k < 7; ++k) gy[j] += g[static_cast<std::size_t>(k)] * vb.dx[j][static_cast<std::size_t>(k)];

    // strictly feasible start: c00 = c11 = c22 = c33 = 1/4
    std::vector<double> y(n, 0.0);
    if (options.flags.swap_clones) {
        y[0] = 0.25;  // c11
        y[1] = 0.25;  // c22 = c33
    } else {
        y[0] = 0.25; y[1] = 0.25; y[2] = 0.25;
    }

    const double nu = with_cp ? 7.0 : 4.0;  // total barrier cone dimension
    auto objective_at = [&](const std::vector<double>& yy) {
        const auto x = params_of(vb, yy);
        double val = 0;
        for (int k = 0; k < 7; ++k) val += g[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
        return val;
    };

    SdpResult res;
    res.constraint_flags = options.flags;

    double mu = options.mu_initial;
    int outer = 0;
    while (true) {
        ++outer;
        if (outer > options.max_outer) {
            res.optimum = objective_at(y);
            res.params = CovariantParams::from_array(params_of(vb, y));
            res.gap = 2.0 * nu * mu;
            throw SdpConvergenceError("optimize_fidelity: outer iteration cap exceeded", res);
        }
        const double t = 1.0 / mu;

        // center: minimize -t g.y + barrier
        double prev_lambda2 = std::numeric_limits<double>::infinity();
        for (int it = 0;; ++it) {
            if (it >= options.max_newton) {
                res.optimum = objective_at(y);
                res.params = CovariantParams::from_array(params_of(vb, y));
                res.gap = 2.0 * nu * mu;
                throw SdpConvergenceError("optimize_fidelity: Newton iteration cap exceeded", res);
            }
            const BarrierState st = barrier_state(vb, y, with_cp);
            const ComplexMatrix b1inv = inverse3(st.b1);
            ComplexMatrix c1inv;
            if (with_cp) c1inv = inverse3(st.c1);

            std::vector<double> grad(n);
            std::vector<std::vector<double>> hess(n, std::vector<double>(n, 0.0));
            std::vector<ComplexMatrix> b1inv_db(n), c1inv_dc(with_cp ? n : 0);
            for (std::size_t j = 0; j < n; ++j) {
                b1inv_db[j] = b1inv * vb.db1[j];
                if (with_cp) c1inv_dc[j] = c1inv * vb.dc1[j];
                grad[j] = -t * gy[j] - vb.dc00[j] / st.c00;
                complexd tr{};
                for (std::size_t d = 0; d < 3; ++d) tr += b1inv_db[j](d, d);
                grad[j] -= tr.real();
                if (with_cp) {
                    complexd trc{};
                    for (std::size_t d = 0; d < 3; ++d) trc += c1inv_dc[j](d, d);
                    grad[j] -= trc.real();
                }
            }
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = j; l < n; ++l) {
                    double hjl = vb.dc00[j] * vb.dc00[l] / (st.c00 * st.c00);
                    hjl += re_trace_prod(b1inv_db[j], b1inv_db[l]);
                    if (with_cp) hjl += re_trace_prod(c1inv_dc[j], c1inv_dc[l]);
                    hess[j][l] = hjl;
                    hess[l][j] = hjl;
                }

            std::vector<double> rhs(n);
            for (std::size_t j = 0; j < n; ++j) rhs[j] = -grad[j];
            const std::vector<double> step = solve_linear(hess, rhs);

            double lambda2 = 0;
            for (std::size_t j = 0; j < n; ++j) lambda2 += -grad[j] * step[j];
            if (!std::isfinite(lambda2)) {
                res.optimum = objective_at(y);
                res.params = CovariantParams::from_array(params_of(vb, y));
                res.gap = 2.0 * nu * mu;
                throw SdpConvergenceError("optimize_fidelity: Newton decrement not finite", res);
            }
            res.iterations += 1;
            if (lambda2 / 2.0 <= options.newton_tol) break;
            // decrement at its floating-point floor: accept while the gap
            // bound for approximate centering still applies
            if (lambda2 >= 0.5 * prev_lambda2 && lambda2 / 2.0 <= options.newton_accept) break;
            prev_lambda2 = lambda2;

            double lin0 = 0;
            for (std::size_t j = 0; j < n; ++j) lin0 += gy[j] * y[j];
            const double h0 = -t * lin0 + barrier_value(st, with_cp);

            double alpha = 1.0;
            std::vector<double> ytrial(n);
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                for (std::size_t j = 0; j < n; ++j) ytrial[j] = y[j] + alpha * step[j];
                const BarrierState ts = barrier_state(vb, ytrial, with_cp);
                if (feasible(ts, with_cp)) {
                    double ht = barrier_value(ts, with_cp);
                    double lin = 0;
                    for (std::size_t j = 0; j < n; ++j) lin += gy[j] * ytrial[j];
                    ht -= t * lin;
                    if (ht <= h0 - 0.25 * alpha * lambda2) {
                        y = ytrial;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!moved) {
                // progress below floating-point resolution; fine if already
                // inside the quadratic-convergence region
                if (lambda2 / 2.0 <= options.newton_accept) break;
                res.optimum = objective_at(y);
                res.params = CovariantParams::from_array(params_of(vb, y));
                res.gap = 2.0 * nu * mu;
                throw SdpConvergenceError("optimize_fidelity: line search stalled off-center", res);
            }
        }

        res.objective_trace.push_back(objective_at(y));
        if (mu <= options.mu_final) break;
        mu /= options.mu_factor;
        if (mu < options.mu_final) mu = options.mu_final;
    }

    res.optimum = objective_at(y);
    res.params = CovariantParams::from_array(params_of(vb, y));
    res.gap = 2.0 * nu * mu;
    res.params.validate(1e-9);
    return res;
}

ChoiOperator choi_from_result(const SdpResult& res, Variant v) {
    const ChoiOperator canonical = build_covariant_choi(res.params);
    return (v == Variant::v1) ? to_variant1(canonical) : canonical;
}

namespace {

void check_curve_domain(double xi) {
    if (!(xi >= -1e-12 && xi <= kPi / 2 + 1e-12))
        throw std::invalid_argument("analytic fidelity: xi must lie in [0, pi/2]");
}

}  // namespace

double analytic_f1(double xi) {
    check_curve_domain(xi);
    const double s = std::sin(xi), c = std::cos(xi);
    const double root = std::sqrt(2.0 * s * s * s * s + c * c * c * c);
    return 0.5 * (1.0 + 0.5 * c * c * (1.0 + c * c / root) + s * s * s * s / root);
}

double analytic_f2(double xi) {
    check_curve_domain(xi);
    const double s = std::sin(xi), c = std::cos(xi);
    const double root = std::sqrt(2.0 * s * s * s * s + c * c * c * c);
    const double branch1 = 0.25 * (std::cos(2.0 * xi) + 3.0);
    const double branch2 = 0.5 * (1.0 + 0.5 * c * c * (-1.0 + c * c / root) + s * s * s * s / root);
    return std::max(branch1, branch2);
}

std::vector<CurveRow> fidelity_curve(Variant v, const std::vector<double>& xi_grid,
                                     CurveMode mode) {
    std::vector<CurveRow> rows;
    rows.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        check_curve_domain(xi);
        CurveRow row;
        row.xi = xi;
        if (mode != CurveMode::sdp)
            row.analytic = (v == Variant::v1) ? analytic_f1(xi) : analytic_f2(xi);
        if (mode != CurveMode::analytic) {
            const double xi_c = std::min(std::max(xi, 0.0), kPi / 2);
            row.sdp = optimize_fidelity(Ensemble::single(PureQubit(xi_c, 0.0)), v).optimum;
        }
        rows.push_back(row);
    }
    return rows;
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double xtol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

Minimum find_minimum(Variant v) {
    const auto f = (v == Variant::v1) ? analytic_f1 : analytic_f2;
    const double xi = golden_section_minimize(f, 0.1, kPi / 2 - 0.1, 1e-10);
    return {xi, f(xi)};
}

}  // namespace covclone
