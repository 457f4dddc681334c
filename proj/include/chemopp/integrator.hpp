// Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4)) with dense
// output and section-crossing event detection for small autonomous systems.
#pragma once

#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chemopp/model.hpp"

namespace chemopp {

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 20'000'000;
    double event_tol = 1e-12;  // |event function| at a reported crossing

    void validate() const;

    /// Tight tolerances for verification runs.
    static IntegratorConfig verification() { return {}; }
    /// Looser tolerances for bifurcation sweeps.
    static IntegratorConfig sweeping() {
        IntegratorConfig c;
        c.rel_tol = 1e-6;
        c.abs_tol = 1e-9;
        return c;
    }
};

struct EventRecord {
    double t = 0.0;
    std::vector<double> state;
    int event_id = 0;
    int direction = 0;  // +1 event function increasing through 0, -1 decreasing
};

struct EventSpec {
    std::function<double(double t, std::span<const double> y)> value;
    int direction = 0;      // +1 rising only, -1 falling only, 0 both
    bool terminal = false;  // stop integration at the crossing
};

using RhsFn = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Derivative evaluation produced a non-finite value; carries the last
/// accepted time and state.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double last_t, std::vector<double> last_y)
        : std::runtime_error(what), last_time(last_t), last_state(std::move(last_y)) {}
    double last_time;
    std::vector<double> last_state;
};

/// Dense-output coefficients of one accepted step; quartic interpolant of the
/// Dormand-Prince pair evaluated via
///   y(t0 + th*h) = r1 + th*(r2 + (1-th)*(r3 + th*(r4 + (1-th)*r5))).
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> r;  // 5 * dim coefficients, r1..r5 contiguous

    void eval(double theta, std::span<double> out) const;
};

class Trajectory {
public:
    int dim = 0;
    std::vector<double> times;                 // accepted step times, strictly monotone
    std::vector<std::vector<double>> states;   // state per stored time
    std::vector<DenseSegment> segments;        // times.size() - 1 segments
    std::vector<EventRecord> events;
    bool truncated = false;         // stopped by max_steps
    bool event_terminated = false;  // stopped by a terminal event

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
    const std::vector<double>& back() const { return states.back(); }

    /// Interpolate the state at time t (within the integration span). Exactly
    /// reproduces stored states at stored times.
    std::vector<double> interpolate(double t) const;
    void interpolate(double t, std::span<double> out) const;

    /// CSV serialization: optional "# key=value" provenance header, a column
    /// header line, one row per stored time. extra_columns appends derived
    /// columns evaluated at each stored state.
    void write_csv(std::ostream& os, std::span<const std::string> column_names,
                   std::span<const std::pair<std::string, std::string>> header = {},
                   std::span<const std::pair<std::string, std::function<double(double, std::span<const double>)>>>
                       extra_columns = {}) const;
};

Trajectory integrate(const RhsFn& rhs, std::span<const double> y0, double t0, double t1,
                     const IntegratorConfig& config = {}, std::span<const EventSpec> events = {});

Trajectory integrate(SystemKind kind, const ChemostatParams& p, std::span<const double> y0,
                     double t0, double t1, const IntegratorConfig& config = {},
                     std::span<const EventSpec> events = {});

Trajectory integrate(const ReducedParams& p, ReducedState y0, double t0, double t1,
                     const IntegratorConfig& config = {}, std::span<const EventSpec> events = {});

RhsFn make_rhs(SystemKind kind, const ChemostatParams& p);
RhsFn make_rhs(const ReducedParams& p);

// ---------------------------------------------------------------------------
// Poincare section machinery

/// The trajectory never returned to the section within the time budget
/// (typically because it converged to an equilibrium).
class NoReturnError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PoincareReturn {
    double eta = 0.0;       // eta at the return crossing
    double period = 0.0;    // elapsed time to the return
    bool degenerate = false;  // start was the equilibrium itself
};

/// Return map on the section xi = lambda with the canonical crossing
/// direction xi' < 0 (eta at a local maximum). Starts at (lambda, eta0) and
/// integrates to the next downward crossing; a start below F(lambda) reaches
/// the directed section after a partial loop first.
PoincareReturn poincare_return(const ReducedParams& p, double eta0,
                               const IntegratorConfig& config = {}, double t_max = 1e4);

}  // namespace chemopp
