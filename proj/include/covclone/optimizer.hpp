#ifndef COVCLONE_OPTIMIZER_HPP
#define COVCLONE_OPTIMIZER_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "covclone/channels.hpp"

namespace covclone {

/// Weighted set of pure input states; weights positive, summing to 1.
struct Ensemble {
    std::vector<std::pair<PureQubit, double>> members;

    static Ensemble single(const PureQubit& q);
    void validate(double tol = 1e-12) const;
};

struct SymmetryFlags {
    bool swap_clones = false;  // enforce c22 == c33 ([R, SWAP x I] = 0)
    bool require_cp = false;   // additionally require the input partial transpose PSD
};

enum class ObjectiveKind { clone1, clone2, symmetric };

struct SdpOptions {
    SymmetryFlags flags{};
    ObjectiveKind objective = ObjectiveKind::symmetric;
    double mu_initial = 1.0;
    double mu_final = 1e-10;
    double mu_factor = 10.0;
    int max_outer = 60;
    int max_newton = 200;      // per centering
    double newton_tol = 1e-9;  // target Newton decrement^2 / 2
    // Accept a stalled line search as centered while the decrement stays in
    // the quadratic-convergence region; the gap bound remains valid.
    double newton_accept = 0.05;
};

struct SdpResult {
    double optimum = 0;
    CovariantParams params;
    double gap = 0;  // barrier optimality bound (cone dimension x final mu)
    int iterations = 0;
    SymmetryFlags constraint_flags;
    std::vector<double> objective_trace;  // objective at each outer centering
};

class SdpConvergenceError : public std::runtime_error {
public:
    SdpConvergenceError(const std::string& msg, SdpResult best_so_far)
        : std::runtime_error(msg), best(std::move(best_so_far)) {}
    SdpResult best;
};

/// Linear form g with F = sum_k g_k c_k over family coordinates, obtained by
/// evaluating the fidelity functional on the 7 family generators.
std::array<double, 7> objective_coefficients(const Ensemble& e, Variant v, int clone);

/// Maximize the (ensemble-averaged) single-copy fidelity over the covariant
/// family by a log-barrier interior-point method. Strictly feasible start
/// c00=c11=c22=c33=1/4. Deterministic.
SdpResult optimize_fidelity(const Ensemble& e, Variant v, const SdpOptions& options = {});

/// Physical Choi operator of an optimizer result (conjugated for variant 1).
ChoiOperator choi_from_result(const SdpResult& res, Variant v);

/// Closed-form single-state optimum curves; xi in [0, pi/2].
double analytic_f1(double xi);
double analytic_f2(double xi);

enum class CurveMode { analytic, sdp, both };

struct CurveRow {
    double xi = 0;
    double analytic = 0;  // valid per mode
    double sdp = 0;
};

std::vector<CurveRow> fidelity_curve(Variant v, const std::vector<double>& xi_grid, CurveMode mode);

struct Minimum {
    double xi_min = 0;
    double f_min = 0;
};

/// Golden-section search of the analytic curve on [0.1, pi/2 - 0.1].
Minimum find_minimum(Variant v);

/// Golden-section minimizer for unimodal f on [a, b]; tolerance in x.
double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double xtol);

}  // namespace covclone

#endif
