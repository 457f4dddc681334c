#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "chemopp/sweep.hpp"

using namespace chemopp;

namespace {

SweepSpec small_lambda_sweep(double lo, double hi, int points) {
    SweepSpec spec{ReducedParams{1.0, 4.0, 1.0, 0.5}};
    spec.parameter = SweepParameter::Lambda;
    spec.lo = lo;
    spec.hi = hi;
    spec.points = points;
    return spec;
}

bool records_identical(const std::vector<SweepRecord>& a, const std::vector<SweepRecord>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (std::memcmp(&x.value, &y.value, sizeof x.value) != 0) return false;
        if (x.kind != y.kind || x.predicted != y.predicted) return false;
        for (auto [u, v] : {std::pair{x.xi_eq, y.xi_eq},
                            {x.eta_eq, y.eta_eq},
                            {x.cycle_xi_min, y.cycle_xi_min},
                            {x.cycle_xi_max, y.cycle_xi_max},
                            {x.cycle_eta_min, y.cycle_eta_min},
                            {x.cycle_eta_max, y.cycle_eta_max},
                            {x.period, y.period}})
            if (std::memcmp(&u, &v, sizeof u) != 0) return false;
        if (x.certificate_pass != y.certificate_pass || x.error != y.error) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("sweep");

TEST_CASE("spec validation") {
    auto spec = small_lambda_sweep(0.1, 0.5, 5);
    CHECK_NOTHROW(spec.validate());
    spec.points = 1;
    CHECK_THROWS_AS(spec.validate(), InvalidParameter);
    spec.points = 5;
    spec.lo = 0.6;
    CHECK_THROWS_AS(spec.validate(), InvalidParameter);
    // A range that exits the validity region (lambda <= 0) is rejected whole.
    auto bad = small_lambda_sweep(-0.1, 0.5, 5);
    CHECK_THROWS_AS(bad.validate(), InvalidParameter);
}

TEST_CASE("representative lambda points classify by regime") {
    auto spec = small_lambda_sweep(0.05, 1.2, 2);
    // 0.05 < xi_+ ~ 0.1124 -> cycle; 1.2 > 1 -> boundary equilibrium.
    const auto records = run_sweep(spec);
    REQUIRE(records.size() == 2);
    CHECK(records[0].kind == AttractorKind::LimitCycle);
    CHECK(records[0].period > 0.0);
    CHECK(records[0].cycle_xi_min < 0.05);
    CHECK(records[0].cycle_xi_max > 0.05);
    CHECK(!records[0].discrepant);
    CHECK(records[1].kind == AttractorKind::BoundaryEquilibrium);
    CHECK(records[1].xi_eq == 1.0);
    CHECK(records[1].eta_eq == 0.0);
    CHECK(!records[1].discrepant);
}

TEST_CASE("interior equilibrium point carries a passing certificate") {
    auto spec = small_lambda_sweep(0.3, 0.6, 2);
    const auto records = run_sweep(spec);
    for (const auto& r : records) {
        CHECK(r.kind == AttractorKind::InteriorEquilibrium);
        CHECK(r.xi_eq == doctest::Approx(r.value));
        CHECK(r.has_certificate);
        CHECK(r.certificate_pass);
        CHECK(!r.discrepant);
    }
}

TEST_CASE("sweeps are deterministic and worker-count independent") {
    auto spec = small_lambda_sweep(0.08, 0.9, 5);
    const auto serial = run_sweep(spec, 1);
    const auto again = run_sweep(spec, 1);
    const auto parallel = run_sweep(spec, 3);
    CHECK(records_identical(serial, again));
    CHECK(records_identical(serial, parallel));
}

TEST_CASE("csv column layout is stable") {
    auto spec = small_lambda_sweep(0.05, 1.2, 2);
    const auto records = run_sweep(spec);
    std::ostringstream os;
    write_sweep_csv(os, records, {{"seed", "1"}});
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "# seed=1");
    std::getline(is, line);
    CHECK(line ==
          "param_value,kind,xi_eq,eta_eq,cycle_xi_min,cycle_xi_max,cycle_eta_min,"
          "cycle_eta_max,period,flags");
    std::getline(is, line);
    CHECK(line.find("limit-cycle") != std::string::npos);
    // Equilibrium columns empty on a cycle row: ",," right after the kind.
    CHECK(line.find("limit-cycle,,") != std::string::npos);
    std::getline(is, line);
    CHECK(line.find("boundary-equilibrium,1,0,,,,,,") != std::string::npos);
}

TEST_CASE("json sidecar round-trips the spec") {
    auto spec = small_lambda_sweep(0.05, 1.2, 7);
    std::ostringstream os;
    write_sweep_spec_json(os, spec, {{"seed", "99"}});
    const std::string s = os.str();
    CHECK(s.find("\"parameter\": \"lambda\"") != std::string::npos);
    CHECK(s.find("\"points\": 7") != std::string::npos);
    CHECK(s.find("\"seed\": \"99\"") != std::string::npos);
}

TEST_CASE("diff of identical sweeps is empty") {
    auto spec = small_lambda_sweep(0.2, 0.8, 3);
    const auto records = run_sweep(spec);
    const SweepDiff diff = diff_sweeps(records, records);
    CHECK(diff.rows.empty());
    CHECK(diff.same_kind_sequence);
}

TEST_CASE("diff rejects mismatched grids") {
    const auto a = run_sweep(small_lambda_sweep(0.2, 0.8, 3));
    const auto b = run_sweep(small_lambda_sweep(0.2, 0.9, 3));
    CHECK_THROWS_AS(diff_sweeps(a, b), InvalidParameter);
}

TEST_CASE("coupling term shifts the Hopf point left") {
    // Same grid for eps = 1 and eps = 0 at beta = 4; the classical Hopf point
    // is (beta-1)/(2 beta) = 0.375, the coupled one ~0.1124.
    SweepSpec coupled = small_lambda_sweep(0.05, 0.45, 9);
    SweepSpec classical = coupled;
    classical.base = ReducedParams{0.0, 4.0, 1.0, 0.5};
    const auto rec_coupled = run_sweep(coupled);
    const auto rec_classical = run_sweep(classical);
    const SweepDiff diff = diff_sweeps(rec_coupled, rec_classical);

    REQUIRE(diff.cycle_onset_a.has_value());
    REQUIRE(diff.cycle_onset_b.has_value());
    const double xp_coupled = hopf_threshold(coupled.base);
    CHECK(diff.cycle_onset_a->first < xp_coupled);
    CHECK(xp_coupled < diff.cycle_onset_a->second);
    CHECK(diff.cycle_onset_b->first < 0.375);
    CHECK(0.375 < diff.cycle_onset_b->second);
    // Qualitatively the same route, destabilization needs smaller lambda.
    CHECK(diff.cycle_onset_a->second <= diff.cycle_onset_b->first + 1e-12);
}

TEST_CASE("epsilon sweep crosses the threshold at fixed lambda") {
    // At beta = 4, lambda = 0.2: xi_+(0) = 0.375 > lambda (cycle) while
    // xi_+(1) ~ 0.112 < lambda (stable interior equilibrium).
    SweepSpec spec{ReducedParams{0.5, 4.0, 1.0, 0.2}};
    spec.parameter = SweepParameter::Epsilon;
    spec.lo = 1e-6;
    spec.hi = 1.0;
    spec.points = 4;
    const auto records = run_sweep(spec);
    REQUIRE(records.size() == 4);
    CHECK(records.front().kind == AttractorKind::LimitCycle);
    CHECK(records.back().kind == AttractorKind::InteriorEquilibrium);
    for (const auto& r : records) CHECK(!r.discrepant);
}

TEST_CASE("per-point failures are recorded, not thrown") {
    // Two cycle-regime points with a starved step budget: the cycle solver
    // cannot close a loop, the record carries the error, the sweep survives.
    auto spec = small_lambda_sweep(0.04, 0.06, 2);
    spec.config.max_steps = 50;
    spec.transient_time = 50.0;
    const auto records = run_sweep(spec);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(r.kind == AttractorKind::Unresolved);
        CHECK(r.discrepant);
        CHECK(!r.error.empty());
    }
}

TEST_SUITE_END();
