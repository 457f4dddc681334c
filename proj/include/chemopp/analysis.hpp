// Equilibrium and stability analysis, Lyapunov machinery and limit-cycle
// characterization for the reduced predator-prey system.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "chemopp/integrator.hpp"
#include "chemopp/model.hpp"

namespace chemopp {

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

std::array<std::complex<double>, 2> eigenvalues(const Mat2& m);

enum class Stability { Saddle, Stable, Unstable, NonHyperbolic };
const char* to_string(Stability s);

/// Eigenvalue real parts within this band of zero are reported non-hyperbolic
/// instead of guessing a stability.
inline constexpr double kHyperbolicityTol = 1e-10;

Stability classify(const Mat2& jac);

struct EquilibriumReport {
    ReducedState location;
    Mat2 jac;
    std::array<std::complex<double>, 2> eig;
    Stability classification = Stability::NonHyperbolic;
    Stability predicted = Stability::NonHyperbolic;  // from the trace criterion
};

/// Jacobian of the isocline form at an arbitrary state,
/// [[f'F + fF' - eta f', -f], [eta psi', psi]].
Mat2 jacobian(const ReducedParams& p, const ReducedState& s);

/// The origin and (1,0) always; (lambda, F(lambda)) additionally when
/// 0 < lambda < 1.
std::vector<EquilibriumReport> find_equilibria(const ReducedParams& p);

/// The lambda value at which the interior equilibrium changes stability:
/// xi_+ when beta > 1 + epsilon, otherwise 0 (no destabilization possible).
double hopf_threshold(const ReducedParams& p);

// ---------------------------------------------------------------------------
// Boundedness (trapping region)

/// V(xi,eta) = int_lambda^xi dx/f(x) + int_F(lambda)^eta de/e, the function
/// whose high level sets trap trajectories.
double boundedness_V(const ReducedParams& p, const ReducedState& s);

/// A level kappa such that V' < 0 on {V > kappa, lambda <= xi <= 1}.
double trapping_level(const ReducedParams& p);

// ---------------------------------------------------------------------------
// Lyapunov family

/// int_lambda^xi psi/f, in closed form (partial fractions). Requires xi > 0.
double psi_over_f_integral(const ReducedParams& p, double xi);

/// F_bar_theta(xi) = F(lambda) - theta * int_lambda^xi psi/f.
double F_bar_theta(const ReducedParams& p, double theta, double xi);

double lyapunov_W(const ReducedParams& p, double theta, const ReducedState& s);
double lyapunov_Wdot(const ReducedParams& p, double theta, const ReducedState& s);

/// theta = max(0, 2 xi_+ beta / mu), the choice that makes the sign
/// condition hold whenever lambda >= xi_+.
double certificate_theta(const ReducedParams& p);

/// Right-hand side of the rotated system xi' = f (F_bar_theta - eta),
/// eta' = eta psi, of which W_theta is a first integral.
RhsFn rotated_rhs(const ReducedParams& p, double theta);

struct LyapunovCertificate {
    double theta = 0.0;
    // Sign condition: (F - F_bar_theta)(xi - lambda) < 0 for xi != lambda,
    // i.e. W' <= 0 along the flow. worst_violation is the largest product
    // value seen on the grid (pass needs <= tolerance).
    double worst_violation = 0.0;
    double worst_xi = 0.0;
    int grid_points = 0;
    double max_Wdot = 0.0;  // largest W' observed along the trajectory fan
    int trajectories_checked = 0;
    int failed_trajectory = -1;  // index of a non-convergent fan member
    bool sign_condition_ok = false;
    bool trajectories_ok = false;
    bool pass = false;
    std::string detail;
};

inline constexpr double kSignConditionTol = 1e-10;

struct CertificateOptions {
    IntegratorConfig config = IntegratorConfig::verification();
    int grid_points = 10'000;
    int fan_points = 8;
    double fan_time = 2000.0;
    double converge_dist = 1e-5;
    bool run_trajectories = true;
};

/// Numerical global-stability certificate: checks the sign condition with the
/// canonical theta on a dense grid and integrates a fan of initial
/// conditions, confirming convergence to (lambda, F(lambda)) and W' <= 0.
/// Outside lambda >= xi_+ the certificate fails with a witness.
LyapunovCertificate global_stability_certificate(const ReducedParams& p,
                                                 const CertificateOptions& opts = {});

// ---------------------------------------------------------------------------
// Uniqueness of the limit cycle

/// Real roots of a x^3 + b x^2 + c x + d (degenerate leading coefficients
/// cascade to the quadratic/linear case).
std::vector<double> solve_cubic_real(double a, double b, double c, double d);

/// Expanded quartic whose non-positivity on [0,1] is the uniqueness
/// condition: the numerator of d/dxi (f F' / psi).
double kuang_quartic(const ReducedParams& p, double xi);

/// Taylor-around-lambda form of the same condition; equals
/// kuang_quartic / (epsilon beta^2). Requires epsilon > 0 and beta > 0.
double kuang_quartic_taylor(const ReducedParams& p, double xi);

struct UniquenessReport {
    bool pass = false;
    double max_value = 0.0;   // max of the quartic over the augmented grid
    double max_xi = 0.0;
    int grid_points = 0;
    int stationary_points = 0;
};

/// Evaluates the quartic on a dense [0,1] grid augmented with the real roots
/// of its derivative; pass iff the maximum is <= 1e-12.
UniquenessReport uniqueness_check(const ReducedParams& p, int grid_points = 10'000);

// ---------------------------------------------------------------------------
// Limit cycle

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> iterates)
        : std::runtime_error(what), history(std::move(iterates)) {}
    std::vector<double> history;
};

/// Distinct starts converged to distinct return-map fixed points, i.e. the
/// located cycle would not be unique.
class MultiplicityAlarm : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CycleReport {
    bool found = false;
    double eta_star = 0.0;   // section fixed point (downward crossing)
    double period = 0.0;
    double xi_min = 0.0, xi_max = 0.0;
    double eta_min = 0.0, eta_max = 0.0;
    double return_slope = 0.0;  // |dR/deta| at the fixed point, finite differences
    std::vector<double> history;  // fixed-point iterates, all starts concatenated
};

struct CycleOptions {
    IntegratorConfig config = IntegratorConfig::verification();
    double t_max_per_return = 1e4;
    double fixed_point_tol = 1e-9;   // on the return-map residual scale
    double merge_tol = 1e-6;         // distinct starts must agree to this
    int max_iterations = 120;
};

/// Fixed point of the downward-crossing return map reached from eta0
/// (secant iteration with damped-map fallback). Iterates are appended to
/// history when non-null.
double return_map_fixed_point(const ReducedParams& p, double eta0, const CycleOptions& opts = {},
                              std::vector<double>* history = nullptr);

/// Locate the stable limit cycle for 0 < lambda < xi_+ via the Poincare
/// return map, iterated from starts on both sides of F(lambda). Returns a
/// not-found report when lambda is outside the cycle regime.
CycleReport find_limit_cycle(const ReducedParams& p, const CycleOptions& opts = {});

/// Cycle amplitude used by the Hopf-scaling check: (xi_max - xi_min)/2.
inline double cycle_amplitude(const CycleReport& r) { return 0.5 * (r.xi_max - r.xi_min); }

}  // namespace chemopp
