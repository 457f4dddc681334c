#include "chemopp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

namespace chemopp {

const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Lambda: return "lambda";
        case SweepParameter::Epsilon: return "epsilon";
        case SweepParameter::Beta: return "beta";
        case SweepParameter::Mu: return "mu";
    }
    return "?";
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
    if (name == "lambda") return SweepParameter::Lambda;
    if (name == "epsilon" || name == "eps") return SweepParameter::Epsilon;
    if (name == "beta") return SweepParameter::Beta;
    if (name == "mu") return SweepParameter::Mu;
    throw InvalidParameter("unknown sweep parameter: " + name);
}

const char* to_string(AttractorKind k) {
    switch (k) {
        case AttractorKind::BoundaryEquilibrium: return "boundary-equilibrium";
        case AttractorKind::InteriorEquilibrium: return "interior-equilibrium";
        case AttractorKind::LimitCycle: return "limit-cycle";
        case AttractorKind::Unresolved: return "unresolved";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (!(lo < hi)) throw InvalidParameter("sweep range: lo < hi violated");
    if (points < 2) throw InvalidParameter("sweep range: points >= 2 violated");
    config.validate();
    if (!(transient_time > 0) || !(sample_time > 0))
        throw InvalidParameter("transient/sample time must be positive");
    // Every grid point must give a valid parameter set.
    params_at(0);
    params_at(points - 1);
}

double SweepSpec::value_at(int index) const {
    return lo + (hi - lo) * index / (points - 1);
}

ReducedParams SweepSpec::params_at(int index) const {
    const double v = value_at(index);
    switch (parameter) {
        case SweepParameter::Lambda: return {base.epsilon, base.beta, base.mu, v};
        case SweepParameter::Epsilon: return {v, base.beta, base.mu, base.lambda};
        case SweepParameter::Beta: return {base.epsilon, v, base.mu, base.lambda};
        case SweepParameter::Mu: return {base.epsilon, base.beta, v, base.lambda};
    }
    throw InvalidParameter("bad sweep parameter");
}

namespace {

AttractorKind predicted_kind(const ReducedParams& p) {
    if (p.lambda >= 1.0) return AttractorKind::BoundaryEquilibrium;
    if (p.lambda >= hopf_threshold(p)) return AttractorKind::InteriorEquilibrium;
    return AttractorKind::LimitCycle;
}

struct EquilibriumTarget {
    double xi, eta;
    AttractorKind kind;
};

SweepRecord classify_point(const SweepSpec& spec, int index) {
    SweepRecord rec;
    rec.value = spec.value_at(index);
    const ReducedParams p = spec.params_at(index);
    rec.predicted = predicted_kind(p);
    const auto iso = isocline_form(p);
    const double xp = hopf_threshold(p);

    IntegratorConfig cfg = spec.config;
    const double grid_step = (spec.hi - spec.lo) / (spec.points - 1);
    const bool near_threshold =
        spec.parameter == SweepParameter::Lambda &&
        std::abs(rec.value - xp) < spec.refine_steps * grid_step;
    if (near_threshold) {
        // Critical slowing down: tighten tolerances, keep the step budget.
        const IntegratorConfig tight = IntegratorConfig::verification();
        cfg.rel_tol = std::min(cfg.rel_tol, tight.rel_tol);
        cfg.abs_tol = std::min(cfg.abs_tol, tight.abs_tol);
        cfg.event_tol = std::min(cfg.event_tol, tight.event_tol);
    }

    std::vector<EquilibriumTarget> stable_targets;
    if (p.lambda >= 1.0) {
        stable_targets.push_back({1.0, 0.0, AttractorKind::BoundaryEquilibrium});
    } else {
        stable_targets.push_back({p.lambda, iso.F(p.lambda), AttractorKind::InteriorEquilibrium});
        stable_targets.push_back({1.0, 0.0, AttractorKind::BoundaryEquilibrium});
    }

    const double eq_tol = 1e-6;
    // The equilibrium-proximity test needs the numerical trajectory to settle
    // well below eq_tol; with loose tolerances the local error balanced
    // against the contraction rate stalls the orbit at about rel_tol/rate
    // from the fixed point. Floor the classification windows at verification
    // accuracy (the swept config still governs the cycle solver).
    IntegratorConfig prox_cfg = cfg;
    {
        const IntegratorConfig tight = IntegratorConfig::verification();
        prox_cfg.rel_tol = std::min(prox_cfg.rel_tol, tight.rel_tol);
        prox_cfg.abs_tol = std::min(prox_cfg.abs_tol, tight.abs_tol);
    }
    std::vector<EventSpec> events;
    for (const auto& tgt : stable_targets) {
        EventSpec ev;
        ev.value = [tgt, eq_tol](double, std::span<const double> y) {
            const double dx = y[0] - tgt.xi, dy = y[1] - tgt.eta;
            return dx * dx + dy * dy - eq_tol * eq_tol;
        };
        ev.direction = -1;
        ev.terminal = true;
        events.push_back(std::move(ev));
    }

    try {
        std::vector<double> state{0.6, 0.6};
        double window = spec.transient_time;
        const int max_windows = 7;  // up to 64x the base transient
        for (int attempt = 0; attempt < max_windows; ++attempt) {
            Trajectory traj = integrate(make_rhs(p), state, 0.0, window, prox_cfg, events);
            if (traj.event_terminated) {
                const auto& tgt = stable_targets[static_cast<size_t>(traj.events.back().event_id)];
                rec.kind = tgt.kind;
                rec.xi_eq = tgt.xi;
                rec.eta_eq = tgt.eta;
                rec.slow_convergence = attempt > 0;
                break;
            }
            state = traj.back();
            if (attempt == 0 && p.lambda < xp) break;  // cycle regime: no stable equilibrium
            window *= 2.0;
        }

        if (rec.kind == AttractorKind::Unresolved && p.lambda < xp) {
            CycleOptions copts;
            copts.config = cfg;
            CycleReport cyc = find_limit_cycle(p, copts);
            if (cyc.found) {
                rec.kind = AttractorKind::LimitCycle;
                rec.cycle_xi_min = cyc.xi_min;
                rec.cycle_xi_max = cyc.xi_max;
                rec.cycle_eta_min = cyc.eta_min;
                rec.cycle_eta_max = cyc.eta_max;
                rec.period = cyc.period;
            }
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }

    rec.discrepant = rec.kind != rec.predicted;

    // Global-stability / cycle-uniqueness certificate summaries where they
    // apply (grid-level checks; the trajectory-fan certificate lives in
    // verify/analyze).
    try {
        if (rec.kind == AttractorKind::InteriorEquilibrium) {
            CertificateOptions copts;
            copts.run_trajectories = false;
            rec.has_certificate = true;
            rec.certificate_pass = global_stability_certificate(p, copts).pass;
        } else if (rec.kind == AttractorKind::LimitCycle) {
            rec.has_certificate = true;
            rec.certificate_pass = uniqueness_check(p).pass;
        }
    } catch (const std::exception& e) {
        rec.has_certificate = true;
        rec.certificate_pass = false;
        if (rec.error.empty()) rec.error = e.what();
    }
    return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int workers) {
    spec.validate();
    if (workers < 1) workers = 1;
    std::vector<SweepRecord> records(static_cast<size_t>(spec.points));
    if (workers == 1) {
        for (int i = 0; i < spec.points; ++i) records[static_cast<size_t>(i)] = classify_point(spec, i);
        return records;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < spec.points; i = next.fetch_add(1))
                records[static_cast<size_t>(i)] = classify_point(spec, i);
        });
    }
    for (auto& th : pool) th.join();
    return records;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                     const std::vector<std::pair<std::string, std::string>>& header) {
    for (const auto& [k, v] : header) os << "# " << k << "=" << v << "\n";
    os << "param_value,kind,xi_eq,eta_eq,cycle_xi_min,cycle_xi_max,cycle_eta_min,"
          "cycle_eta_max,period,flags\n";
    for (const auto& r : records) {
        os << num(r.value) << "," << to_string(r.kind) << ",";
        const bool eq = r.kind == AttractorKind::BoundaryEquilibrium ||
                        r.kind == AttractorKind::InteriorEquilibrium;
        const bool cyc = r.kind == AttractorKind::LimitCycle;
        os << (eq ? num(r.xi_eq) : "") << "," << (eq ? num(r.eta_eq) : "") << ",";
        os << (cyc ? num(r.cycle_xi_min) : "") << "," << (cyc ? num(r.cycle_xi_max) : "") << ",";
        os << (cyc ? num(r.cycle_eta_min) : "") << "," << (cyc ? num(r.cycle_eta_max) : "") << ",";
        os << (cyc ? num(r.period) : "") << ",";
        std::string flags;
        auto add_flag = [&flags](const std::string& f) {
            if (!flags.empty()) flags += ";";
            flags += f;
        };
        if (r.discrepant) add_flag("discrepant");
        if (r.slow_convergence) add_flag("slow-convergence");
        if (r.has_certificate) add_flag(r.certificate_pass ? "certificate-pass" : "certificate-fail");
        if (!r.error.empty()) add_flag("error");
        os << flags << "\n";
    }
}

void write_sweep_spec_json(std::ostream& os, const SweepSpec& spec,
                           const std::vector<std::pair<std::string, std::string>>& extra) {
    nlohmann::json j;
    j["base"] = {{"epsilon", spec.base.epsilon},
                 {"beta", spec.base.beta},
                 {"mu", spec.base.mu},
                 {"lambda", spec.base.lambda}};
    j["parameter"] = to_string(spec.parameter);
    j["lo"] = spec.lo;
    j["hi"] = spec.hi;
    j["points"] = spec.points;
    j["integrator"] = {{"rel_tol", spec.config.rel_tol},
                       {"abs_tol", spec.config.abs_tol},
                       {"max_step", spec.config.max_step},
                       {"max_steps", spec.config.max_steps},
                       {"event_tol", spec.config.event_tol}};
    j["transient_time"] = spec.transient_time;
    j["sample_time"] = spec.sample_time;
    for (const auto& [k, v] : extra) j[k] = v;
    os << j.dump(2) << "\n";
}

SweepDiff diff_sweeps(const std::vector<SweepRecord>& a, const std::vector<SweepRecord>& b) {
    if (a.size() != b.size()) throw InvalidParameter("sweep grids differ in size");
    SweepDiff diff;
    std::vector<AttractorKind> seq_a, seq_b;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].value != b[i].value) throw InvalidParameter("sweep grids differ in values");
        SweepDiffRow row;
        row.value = a[i].value;
        row.kind_a = a[i].kind;
        row.kind_b = b[i].kind;
        row.kind_equal = a[i].kind == b[i].kind;
        row.amplitude_a = a[i].kind == AttractorKind::LimitCycle
                              ? 0.5 * (a[i].cycle_xi_max - a[i].cycle_xi_min)
                              : 0.0;
        row.amplitude_b = b[i].kind == AttractorKind::LimitCycle
                              ? 0.5 * (b[i].cycle_xi_max - b[i].cycle_xi_min)
                              : 0.0;
        diff.all_rows.push_back(row);
        if (!row.kind_equal || row.amplitude_a != row.amplitude_b) diff.rows.push_back(row);
        if (seq_a.empty() || seq_a.back() != a[i].kind) seq_a.push_back(a[i].kind);
        if (seq_b.empty() || seq_b.back() != b[i].kind) seq_b.push_back(b[i].kind);
    }
    diff.same_kind_sequence = seq_a == seq_b;

    auto onset = [](const std::vector<SweepRecord>& recs)
        -> std::optional<std::pair<double, double>> {
        for (size_t i = 0; i + 1 < recs.size(); ++i) {
            const bool cyc_lo = recs[i].kind == AttractorKind::LimitCycle;
            const bool cyc_hi = recs[i + 1].kind == AttractorKind::LimitCycle;
            if (cyc_lo != cyc_hi)
                return std::make_pair(std::min(recs[i].value, recs[i + 1].value),
                                      std::max(recs[i].value, recs[i + 1].value));
        }
        return std::nullopt;
    };
    diff.cycle_onset_a = onset(a);
    diff.cycle_onset_b = onset(b);
    return diff;
}

}  // namespace chemopp
