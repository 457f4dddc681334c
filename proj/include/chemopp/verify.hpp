// Verification checks: randomized property suites over the model family,
// shared by the verify command and the acceptance tests.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chemopp/integrator.hpp"
#include "chemopp/model.hpp"

namespace chemopp {

inline constexpr std::uint64_t kDefaultSeed = 412985;

/// Deterministic uniform generator (splitmix-seeded xoshiro-free: plain
/// mt19937_64 bits mapped to [0,1) the same way on every platform).
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    double uniform(double lo, double hi);
    /// true with probability p
    bool chance(double p);

private:
    std::uint64_t s_[4];
    std::uint64_t next_bits();
};

struct VerifyOptions {
    std::uint64_t seed = kDefaultSeed;
    // Multiplier on the draw counts; 1.0 runs the full suite.
    double draw_scale = 1.0;
    IntegratorConfig config = IntegratorConfig::verification();
    // Force a below-threshold lambda and expect the certificate to fail.
    bool lambda_below_threshold = false;
    bool expect_certificate_fail = false;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;      // worst observed value on the check's own scale
    double tolerance = 0.0;  // the pinned tolerance it was compared against
    std::string detail;
};

// One function per acceptance criterion.
CheckResult check_h_invariance(const VerifyOptions& opts);            // 1
CheckResult check_reparametrization(const VerifyOptions& opts);       // 2
CheckResult check_stability_boundary(const VerifyOptions& opts);      // 3
CheckResult check_threshold_identity(const VerifyOptions& opts);      // 4
CheckResult check_global_stability(const VerifyOptions& opts);        // 5
CheckResult check_uniqueness_quartic(const VerifyOptions& opts);      // 6
CheckResult check_limit_cycle_uniqueness(const VerifyOptions& opts);  // 7
CheckResult check_hopf_scaling(const VerifyOptions& opts);            // 8
CheckResult check_bifurcation_ordering(const VerifyOptions& opts);    // 9
CheckResult check_transcritical(const VerifyOptions& opts);           // 10

std::vector<CheckResult> run_all_checks(const VerifyOptions& opts);

// Random draw helpers shared by the checks (exposed for tests).
ChemostatParams draw_chemostat_params(Rng& rng);
/// Draws with a positive prey margin and predator margin (reducible).
ChemostatParams draw_reducible_chemostat_params(Rng& rng);
ReducedParams draw_reduced_params(Rng& rng);

}  // namespace chemopp
