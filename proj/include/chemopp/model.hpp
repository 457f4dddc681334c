// Model family: chemostat food chain, its planar reductions, and the
// structural functions of the isocline form.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace chemopp {

/// Thrown when a parameter set violates a model invariant. The message names
/// the violated inequality.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The five concrete systems of the model family.
///
///   Chemostat3D       substrate/prey/predator chemostat, state (s, x, y)
///   SurfaceExact      exact reduction on the invariant surface H = 0, state (x, y)
///   LogisticCoupled   logistic prey growth, predation coupling term kept, state (x, y)
///   LogisticClassical logistic prey growth, coupling term dropped, state (x, y)
///   ReducedCoupled    dimensionless form of LogisticCoupled, state (xi, eta)
enum class SystemKind {
    Chemostat3D,
    SurfaceExact,
    LogisticCoupled,
    LogisticClassical,
    ReducedCoupled,
};

int state_dimension(SystemKind kind);
const char* to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& name);

/// Parameters of the chemostat food chain. All rates are strictly positive;
/// the prey handling time b may be exactly 0 (unsaturated prey limit).
struct ChemostatParams {
    double C;  // inflow substrate concentration
    double D;  // dilution rate
    double a;  // prey search rate
    double b;  // prey handling time (may be 0)
    double m;  // prey conversion factor
    double A;  // predator search rate
    double B;  // predator handling time
    double M;  // predator conversion factor

    ChemostatParams(double C, double D, double a, double b, double m,
                    double A, double B, double M);

    /// amC - D; must be positive for the dimensionless reduction to exist.
    double prey_margin() const { return a * m * C - D; }
    /// M - BD; must be positive for mu > 0 and lambda > 0.
    double predator_margin() const { return M - B * D; }
};

struct ChemoState {
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// Dimensionless parameters of the reduced predator-prey system.
/// epsilon = 0 selects the classical (uncoupled) system.
struct ReducedParams {
    double epsilon;
    double beta;
    double mu;
    double lambda;

    ReducedParams(double epsilon, double beta, double mu, double lambda);
};

struct ReducedState {
    double xi = 0.0;
    double eta = 0.0;
};

// ---------------------------------------------------------------------------
// Vector fields

std::array<double, 3> chemostat_rhs(const ChemostatParams& p, const std::array<double, 3>& s);
std::array<double, 2> surface_rhs(const ChemostatParams& p, const std::array<double, 2>& s);
std::array<double, 2> logistic_coupled_rhs(const ChemostatParams& p, const std::array<double, 2>& s);
std::array<double, 2> logistic_classical_rhs(const ChemostatParams& p, const std::array<double, 2>& s);
std::array<double, 2> reduced_rhs(const ReducedParams& p, const std::array<double, 2>& s);

/// Evaluate the right-hand side of the selected system. Throws
/// InvalidParameter if the kind does not belong to the given parameter type
/// and std::invalid_argument on a state dimension mismatch.
void vector_field(SystemKind kind, const ChemostatParams& p,
                  std::span<const double> state, std::span<double> deriv);
void vector_field(SystemKind kind, const ReducedParams& p,
                  std::span<const double> state, std::span<double> deriv);

// ---------------------------------------------------------------------------
// Invariant surface

/// H(s,x,y) = ms + x + y/M - mC. Along the chemostat flow H' = -D H, so the
/// surface H = 0 attracts exponentially.
double H_function(const ChemostatParams& p, const ChemoState& s);

// ---------------------------------------------------------------------------
// Reparametrization

struct ReductionScales {
    double xi_per_x;   // a / (amC - D)
    double eta_per_y;  // A / (amC - D)
    double tau_per_t;  // amC - D
};

struct Reduction {
    ReducedParams params;
    ReductionScales scales;
};

/// Map chemostat parameters to the four dimensionless parameters plus the
/// coordinate/time scales. Requires amC - D > 0 and M - BD > 0.
Reduction reparametrize(const ChemostatParams& p);

// ---------------------------------------------------------------------------
// Isocline form
//
// The reduced system in isocline form reads
//   xi'  = f(xi) (F(xi) - eta)
//   eta' = eta psi(xi)
// with f the per-predator consumption rate, F the prey isocline and psi the
// predator per-capita growth rate; psi vanishes on the predator isocline
// xi = lambda.

struct IsoclineForm {
    ReducedParams params;

    double f(double xi) const;
    double f_prime(double xi) const;
    double F(double xi) const;
    /// Canonical expanded form of F'.
    double F_prime(double xi) const;
    /// Factored form of F' via the roots xi_+/-; defined for epsilon > 0 and
    /// used only as a cross-check of the expanded form.
    double F_prime_factored(double xi) const;
    double psi(double xi) const;
    double psi_prime(double xi) const;
};

IsoclineForm isocline_form(const ReducedParams& p);

/// Roots of the numerator of F'. For epsilon > 0 both roots exist and
/// minus < 0 always; plus > 0 iff beta > 1 + epsilon. For epsilon = 0 the
/// quadratic degenerates and plus is the analytic limit (beta-1)/(2 beta)
/// (absent when beta = 0); minus is absent.
struct XiRoots {
    std::optional<double> plus;
    std::optional<double> minus;
};

XiRoots xi_roots(const ReducedParams& p);

// ---------------------------------------------------------------------------
// Single-species growth

/// Non-logistic growth h(x) = a x (mC - x) / (1 + (ab/m)(mC - x)) of the prey
/// on the invariant surface in the absence of predators. Domain
/// [0, mC + m/(ab)); the upper end is the vertical asymptote (infinite for
/// b = 0).
double growth_h(const ChemostatParams& p, double x);

/// Location of the unique maximum of h on [0, mC]:
/// mC(1+abC) / (1+abC+sqrt(1+abC)); tends to mC/2 as b -> 0.
double growth_h_argmax(const ChemostatParams& p);

}  // namespace chemopp
