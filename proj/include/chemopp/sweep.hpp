// Batch bifurcation-diagram generation over one reduced parameter.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chemopp/analysis.hpp"
#include "chemopp/model.hpp"

namespace chemopp {

enum class SweepParameter { Lambda, Epsilon, Beta, Mu };
const char* to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& name);

struct SweepSpec {
    ReducedParams base;
    SweepParameter parameter = SweepParameter::Lambda;
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
    IntegratorConfig config = IntegratorConfig::sweeping();
    double transient_time = 500.0;
    double sample_time = 200.0;
    // Points whose lambda is within this many grid steps of xi_+ are
    // recomputed at verification tolerances (critical slowing down).
    double refine_steps = 2.0;

    void validate() const;
    double value_at(int index) const;
    ReducedParams params_at(int index) const;
};

enum class AttractorKind { BoundaryEquilibrium, InteriorEquilibrium, LimitCycle, Unresolved };
const char* to_string(AttractorKind k);

struct SweepRecord {
    double value = 0.0;                 // swept parameter value
    AttractorKind kind = AttractorKind::Unresolved;
    AttractorKind predicted = AttractorKind::Unresolved;
    double xi_eq = 0.0, eta_eq = 0.0;   // equilibrium kinds only
    double cycle_xi_min = 0.0, cycle_xi_max = 0.0;
    double cycle_eta_min = 0.0, cycle_eta_max = 0.0;
    double period = 0.0;                // limit-cycle kind only
    bool has_certificate = false;
    bool certificate_pass = false;
    bool discrepant = false;            // kind disagrees with the prediction
    bool slow_convergence = false;      // needed an extended transient
    std::string error;
};

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int workers = 1);

/// CSV with the fixed column set
/// param_value,kind,xi_eq,eta_eq,cycle_xi_min,cycle_xi_max,cycle_eta_min,
/// cycle_eta_max,period,flags; non-applicable fields are left empty.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                     const std::vector<std::pair<std::string, std::string>>& header = {});

/// JSON sidecar recording the full spec for provenance.
void write_sweep_spec_json(std::ostream& os, const SweepSpec& spec,
                           const std::vector<std::pair<std::string, std::string>>& extra = {});

struct SweepDiffRow {
    double value = 0.0;
    AttractorKind kind_a = AttractorKind::Unresolved;
    AttractorKind kind_b = AttractorKind::Unresolved;
    bool kind_equal = false;
    double amplitude_a = 0.0;  // (cycle_xi_max - cycle_xi_min)/2, 0 for equilibria
    double amplitude_b = 0.0;
};

struct SweepDiff {
    std::vector<SweepDiffRow> rows;       // only rows that differ
    std::vector<SweepDiffRow> all_rows;
    bool same_kind_sequence = false;      // ordered attractor kinds agree
    // Grid interval [lo, hi] bracketing the equilibrium->cycle change, when present.
    std::optional<std::pair<double, double>> cycle_onset_a;
    std::optional<std::pair<double, double>> cycle_onset_b;
};

SweepDiff diff_sweeps(const std::vector<SweepRecord>& a, const std::vector<SweepRecord>& b);

}  // namespace chemopp
