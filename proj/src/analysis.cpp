#include "chemopp/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace chemopp {

std::array<std::complex<double>, 2> eigenvalues(const Mat2& m) {
    const double tr = m.trace(), det = m.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::complex<double>(0.5 * (tr - s), 0.0),
                std::complex<double>(0.5 * (tr + s), 0.0)};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(0.5 * tr, -im), std::complex<double>(0.5 * tr, im)};
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Saddle: return "saddle";
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::NonHyperbolic: return "non-hyperbolic";
    }
    return "?";
}

Stability classify(const Mat2& jac) {
    const auto eig = eigenvalues(jac);
    const double r1 = eig[0].real(), r2 = eig[1].real();
    const double tol = kHyperbolicityTol;
    if (std::abs(r1) <= tol || std::abs(r2) <= tol) return Stability::NonHyperbolic;
    if (r1 < 0 && r2 < 0) return Stability::Stable;
    if (r1 > 0 && r2 > 0) return Stability::Unstable;
    return Stability::Saddle;
}

Mat2 jacobian(const ReducedParams& p, const ReducedState& s) {
    const auto iso = isocline_form(p);
    const double xi = s.xi, eta = s.eta;
    return {iso.f_prime(xi) * iso.F(xi) + iso.f(xi) * iso.F_prime(xi) - eta * iso.f_prime(xi),
            -iso.f(xi),
            eta * iso.psi_prime(xi),
            iso.psi(xi)};
}

namespace {

EquilibriumReport make_report(const ReducedParams& p, ReducedState loc, Stability predicted) {
    EquilibriumReport rep;
    rep.location = loc;
    rep.jac = jacobian(p, loc);
    rep.eig = eigenvalues(rep.jac);
    rep.classification = classify(rep.jac);
    rep.predicted = predicted;
    return rep;
}

}  // namespace

std::vector<EquilibriumReport> find_equilibria(const ReducedParams& p) {
    const auto iso = isocline_form(p);
    std::vector<EquilibriumReport> out;
    out.push_back(make_report(p, {0.0, 0.0}, Stability::Saddle));
    {
        Stability pred = Stability::NonHyperbolic;
        if (p.lambda > 1.0) pred = Stability::Stable;
        else if (p.lambda < 1.0) pred = Stability::Saddle;
        out.push_back(make_report(p, {1.0, 0.0}, pred));
    }
    if (p.lambda < 1.0) {
        const double slope = iso.F_prime(p.lambda);
        Stability pred = Stability::NonHyperbolic;
        if (slope < -kHyperbolicityTol) pred = Stability::Stable;
        else if (slope > kHyperbolicityTol) pred = Stability::Unstable;
        out.push_back(make_report(p, {p.lambda, iso.F(p.lambda)}, pred));
    }
    return out;
}

double hopf_threshold(const ReducedParams& p) {
    const auto roots = xi_roots(p);
    return roots.plus && *roots.plus > 0.0 ? *roots.plus : 0.0;
}

// ---------------------------------------------------------------------------
// Boundedness

namespace {

// int_lambda^xi dx / f(x), closed form.
double inverse_f_integral(const ReducedParams& p, double xi) {
    if (!(xi > 0)) throw std::domain_error("inverse_f_integral: xi > 0 required");
    const double e = p.epsilon, b = p.beta, lam = p.lambda;
    const double lead = std::log(xi / lam) / (1.0 + e);
    if (e > 0.0)
        return lead + std::log1p(e * b * (xi - lam) / (1.0 + e + e * b * lam)) / ((1.0 + e) * e);
    return lead + b * (xi - lam);
}

}  // namespace

double boundedness_V(const ReducedParams& p, const ReducedState& s) {
    if (!(s.xi > 0 && s.eta > 0)) throw std::domain_error("boundedness_V: open positive cone only");
    const double F_lam = isocline_form(p).F(p.lambda);
    return inverse_f_integral(p, s.xi) + std::log(s.eta / F_lam);
}

double trapping_level(const ReducedParams& p) {
    const auto iso = isocline_form(p);
    const double lam = p.lambda;
    const int n = 20'000;
    double eta_lev = 0.0, v_xi_max = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double xi = lam + (1.0 - lam) * i / n;
        eta_lev = std::max(eta_lev, iso.F(xi) + iso.psi(xi));
        v_xi_max = std::max(v_xi_max, inverse_f_integral(p, xi));
    }
    // Grid maxima carry O(dx^2) error; pad so the level set guarantee holds.
    eta_lev = eta_lev * (1.0 + 1e-6) + 1e-9;
    v_xi_max = v_xi_max * (1.0 + 1e-6) + 1e-9;
    return v_xi_max + std::log(eta_lev / iso.F(lam));
}

// ---------------------------------------------------------------------------
// Lyapunov family

double psi_over_f_integral(const ReducedParams& p, double xi) {
    if (!(xi > 0)) throw std::domain_error("psi_over_f_integral: xi > 0 required");
    const double e = p.epsilon, b = p.beta, mu = p.mu, lam = p.lambda;
    const double eb = e * b;
    // psi/f = mu (xi-lam) / (xi (1+e+eb xi)); partial fractions.
    const double log_term = -(mu * lam / (1.0 + e)) * std::log(xi / lam);
    double tail;
    if (eb > 0.0)
        tail = std::log1p(eb * (xi - lam) / (1.0 + e + eb * lam)) / eb;
    else
        tail = (xi - lam) / (1.0 + e);
    return log_term + mu * (1.0 + e + lam * eb) / (1.0 + e) * tail;
}

double F_bar_theta(const ReducedParams& p, double theta, double xi) {
    if (theta < 0) throw InvalidParameter("theta >= 0 violated");
    return isocline_form(p).F(p.lambda) - theta * psi_over_f_integral(p, xi);
}

double lyapunov_W(const ReducedParams& p, double theta, const ReducedState& s) {
    if (!(s.xi > 0 && s.eta > 0)) throw std::domain_error("lyapunov_W: open positive cone only");
    const double F_lam = isocline_form(p).F(p.lambda);
    if (!(F_lam > 0))
        throw InvalidParameter("lyapunov_W requires lambda < 1 (interior equilibrium)");
    const double eta = s.eta;
    const double xi_part = psi_over_f_integral(p, s.xi);
    if (theta == 0.0) return xi_part + (eta - F_lam) - F_lam * std::log(eta / F_lam);
    const double eta_th = std::pow(eta, theta);
    const double eta_part = (std::pow(eta, theta + 1.0) - std::pow(F_lam, theta + 1.0)) / (theta + 1.0) -
                            F_lam * (eta_th - std::pow(F_lam, theta)) / theta;
    return eta_th * xi_part + eta_part;
}

double lyapunov_Wdot(const ReducedParams& p, double theta, const ReducedState& s) {
    if (!(s.xi > 0 && s.eta > 0)) throw std::domain_error("lyapunov_Wdot: open positive cone only");
    const auto iso = isocline_form(p);
    return std::pow(s.eta, theta) * iso.psi(s.xi) *
           (iso.F(s.xi) - F_bar_theta(p, theta, s.xi));
}

double certificate_theta(const ReducedParams& p) {
    const double xp = hopf_threshold(p);
    return std::max(0.0, 2.0 * xp * p.beta / p.mu);
}

RhsFn rotated_rhs(const ReducedParams& p, double theta) {
    return [p, theta](double, std::span<const double> y, std::span<double> dy) {
        const auto iso = isocline_form(p);
        dy[0] = iso.f(y[0]) * (F_bar_theta(p, theta, y[0]) - y[1]);
        dy[1] = y[1] * iso.psi(y[0]);
    };
}

LyapunovCertificate global_stability_certificate(const ReducedParams& p,
                                                 const CertificateOptions& opts) {
    const auto iso = isocline_form(p);
    LyapunovCertificate cert;
    cert.theta = certificate_theta(p);
    cert.grid_points = opts.grid_points;

    // Sign condition (F - F_bar_theta)(xi - lambda) < 0 on a dense grid of
    // (0, 1]. Positive values are violations.
    cert.worst_violation = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= opts.grid_points; ++i) {
        const double xi = static_cast<double>(i) / opts.grid_points;
        const double v = (iso.F(xi) - F_bar_theta(p, cert.theta, xi)) * (xi - p.lambda);
        if (v > cert.worst_violation) {
            cert.worst_violation = v;
            cert.worst_xi = xi;
        }
    }
    cert.sign_condition_ok = cert.worst_violation <= kSignConditionTol;

    cert.trajectories_ok = true;
    if (opts.run_trajectories) {
        const bool interior = p.lambda < 1.0;
        const double target_xi = interior ? p.lambda : 1.0;
        const double target_eta = interior ? iso.F(p.lambda) : 0.0;
        const double r2 = opts.converge_dist * opts.converge_dist;

        std::vector<std::array<double, 2>> starts;
        if (interior) {
            const double r =
                0.2 * std::min({p.lambda, iso.F(p.lambda), 1.0 - p.lambda});
            for (int k = 0; k < opts.fan_points; ++k) {
                const double phi = 0.3 + 2.0 * M_PI * k / opts.fan_points;
                starts.push_back({target_xi + r * std::cos(phi), target_eta + r * std::sin(phi)});
            }
        } else {
            for (double xi0 : {0.5, 0.8, 1.2, 1.5})
                for (double eta0 : {0.2, 0.6}) starts.push_back({xi0, eta0});
        }

        EventSpec near_target;
        near_target.value = [=](double, std::span<const double> y) {
            const double dx = y[0] - target_xi, dy = y[1] - target_eta;
            return dx * dx + dy * dy - r2;
        };
        near_target.direction = -1;
        near_target.terminal = true;

        cert.trajectories_checked = static_cast<int>(starts.size());
        cert.max_Wdot = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < starts.size(); ++i) {
            Trajectory traj = integrate(make_rhs(p), starts[i], 0.0, opts.fan_time, opts.config,
                                        std::span(&near_target, 1));
            if (!traj.event_terminated) {
                cert.trajectories_ok = false;
                cert.failed_trajectory = static_cast<int>(i);
                cert.detail = "fan trajectory did not reach the equilibrium";
                break;
            }
            if (interior) {
                for (const auto& st : traj.states) {
                    if (st[0] > 0 && st[1] > 0) {
                        cert.max_Wdot = std::max(
                            cert.max_Wdot, lyapunov_Wdot(p, cert.theta, {st[0], st[1]}));
                    }
                }
            }
        }
        if (interior && cert.trajectories_ok && cert.max_Wdot > 1e-10) {
            cert.trajectories_ok = false;
            cert.detail = "positive W' observed along a fan trajectory";
        }
    }

    cert.pass = cert.sign_condition_ok && cert.trajectories_ok;
    if (!cert.sign_condition_ok && cert.detail.empty())
        cert.detail = "sign condition violated";
    return cert;
}

// ---------------------------------------------------------------------------
// Uniqueness quartic

std::vector<double> solve_cubic_real(double a, double b, double c, double d) {
    std::vector<double> roots;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (scale == 0.0) return roots;
    if (std::abs(a) <= 1e-14 * scale) {
        // Quadratic b x^2 + c x + d.
        if (std::abs(b) <= 1e-14 * scale) {
            if (std::abs(c) > 1e-14 * scale) roots.push_back(-d / c);
            return roots;
        }
        const double disc = c * c - 4.0 * b * d;
        if (disc < 0.0) return roots;
        const double s = std::sqrt(disc);
        const double q = -0.5 * (c + (c >= 0 ? s : -s));
        roots.push_back(q / b);
        if (q != 0.0) roots.push_back(d / q);
        else roots.push_back(0.0);
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    // Normalized: x^3 + p2 x^2 + p1 x + p0.
    const double p2 = b / a, p1 = c / a, p0 = d / a;
    // Depressed cubic t^3 + pt + q with x = t - p2/3.
    const double shift = p2 / 3.0;
    const double pp = p1 - p2 * p2 / 3.0;
    const double qq = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
    const double disc = qq * qq / 4.0 + pp * pp * pp / 27.0;
    // A discriminant within rounding of zero means a (near-)double root;
    // treat it with the three-real branch so the double root is not lost.
    const double disc_scale = qq * qq / 4.0 + std::abs(pp * pp * pp) / 27.0;
    if (disc > 1e-13 * disc_scale) {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-qq / 2.0 + s);
        const double v = std::cbrt(-qq / 2.0 - s);
        roots.push_back(u + v - shift);
    } else if (std::abs(pp) <= 1e-14 * std::max(1.0, std::abs(qq))) {
        roots.push_back(std::cbrt(-qq) - shift);  // triple root
    } else {
        const double r = std::sqrt(std::abs(pp * pp * pp) / 27.0);
        const double phi = std::acos(std::clamp(-qq / (2.0 * r), -1.0, 1.0));
        const double m = 2.0 * std::sqrt(std::abs(pp) / 3.0);
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos((phi + 2.0 * M_PI * k) / 3.0) - shift);
    }
    // One Newton polish per root.
    for (double& x : roots) {
        for (int it = 0; it < 2; ++it) {
            const double fx = ((a * x + b) * x + c) * x + d;
            const double dfx = (3.0 * a * x + 2.0 * b) * x + c;
            if (dfx != 0.0) x -= fx / dfx;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

double kuang_quartic(const ReducedParams& p, double xi) {
    const double e = p.epsilon, b = p.beta, lam = p.lambda;
    const double q4 = -e * e * b * b * b;
    const double q3 = -2.0 * e * b * b * (1.0 + e - lam * e * b);
    const double q2 = -b * ((1.0 + e) * (2.0 + e) + e * b - 5.0 * lam * e * b * (1.0 + e));
    const double q1 = 4.0 * lam * b * (1.0 + e) * (1.0 + e);
    const double q0 = -lam * (1.0 + e) * (b - (1.0 + e));
    return (((q4 * xi + q3) * xi + q2) * xi + q1) * xi + q0;
}

double kuang_quartic_taylor(const ReducedParams& p, double xi) {
    const double e = p.epsilon, b = p.beta, lam = p.lambda;
    if (!(e > 0 && b > 0))
        throw InvalidParameter("Taylor form requires epsilon > 0 and beta > 0");
    const auto roots = xi_roots(p);
    const double xp = *roots.plus, xm = *roots.minus;
    const double eb = e * b;
    const double c1 = lam + (1.0 + e) / eb;
    const double u = xi - lam;
    return eb * lam * c1 * (lam - xm) * (lam - xp) +
           2.0 * eb * lam * (lam - xm) * (lam - xp) * u -
           (1.0 + e) * (c1 + 1.0 / eb) * u * u -
           u * u * (1.0 + 2.0 * eb * c1 * u + eb * u * u);
}

UniquenessReport uniqueness_check(const ReducedParams& p, int grid_points) {
    UniquenessReport rep;
    rep.grid_points = grid_points;
    rep.max_value = -std::numeric_limits<double>::infinity();
    auto consider = [&](double xi) {
        const double v = kuang_quartic(p, xi);
        if (v > rep.max_value) {
            rep.max_value = v;
            rep.max_xi = xi;
        }
    };
    for (int i = 0; i <= grid_points; ++i) consider(static_cast<double>(i) / grid_points);
    // Stationary points of the quartic: roots of its derivative cubic.
    const double e = p.epsilon, b = p.beta, lam = p.lambda;
    const double q4 = -e * e * b * b * b;
    const double q3 = -2.0 * e * b * b * (1.0 + e - lam * e * b);
    const double q2 = -b * ((1.0 + e) * (2.0 + e) + e * b - 5.0 * lam * e * b * (1.0 + e));
    const double q1 = 4.0 * lam * b * (1.0 + e) * (1.0 + e);
    for (double xi : solve_cubic_real(4.0 * q4, 3.0 * q3, 2.0 * q2, q1)) {
        if (xi >= 0.0 && xi <= 1.0) {
            consider(xi);
            ++rep.stationary_points;
        }
    }
    rep.pass = rep.max_value <= 1e-12;
    return rep;
}

// ---------------------------------------------------------------------------
// Limit cycle

namespace {

struct ReturnMap {
    const ReducedParams& p;
    const CycleOptions& opts;
    double operator()(double eta) const {
        return poincare_return(p, eta, opts.config, opts.t_max_per_return).eta;
    }
};

// Fixed point of the return map by secant iteration on g(eta) = R(eta) - eta,
// seeded with two plain map iterations; falls back to damped iteration when a
// secant step leaves the admissible range.
double solve_fixed_point(const ReturnMap& R, double eta0, double eta_floor,
                         const CycleOptions& opts, std::vector<double>& history) {
    double e_prev = eta0;
    history.push_back(e_prev);
    double r_prev = R(e_prev);
    double e_cur = r_prev;  // one plain iteration moves onto the directed section
    history.push_back(e_cur);
    if (std::abs(e_cur - e_prev) <= opts.fixed_point_tol * std::max(1.0, std::abs(e_cur)))
        return e_cur;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const double r_cur = R(e_cur);
        const double g_cur = r_cur - e_cur;
        const double g_prev = r_prev - e_prev;
        double e_next;
        const double denom = g_cur - g_prev;
        if (denom != 0.0 && std::isfinite(denom)) {
            e_next = e_cur - g_cur * (e_cur - e_prev) / denom;
        } else {
            e_next = 0.5 * (e_cur + r_cur);
        }
        if (!(e_next > eta_floor) || !std::isfinite(e_next))
            e_next = 0.5 * (e_cur + r_cur);  // damped map step stays admissible
        history.push_back(e_next);
        const double slope = denom / (e_cur - e_prev);  // d(g)/d(eta) estimate
        const double err_est =
            std::abs(slope) > 0.05 ? std::abs(g_cur / slope) : std::abs(g_cur) * 20.0;
        if (std::abs(e_next - e_cur) <= opts.fixed_point_tol * std::max(1.0, std::abs(e_cur)) &&
            err_est <= 10.0 * opts.fixed_point_tol * std::max(1.0, std::abs(e_cur)))
            return e_next;
        e_prev = e_cur;
        r_prev = r_cur;
        e_cur = e_next;
    }
    throw ConvergenceError("return-map fixed point iteration did not converge", history);
}

}  // namespace

double return_map_fixed_point(const ReducedParams& p, double eta0, const CycleOptions& opts,
                              std::vector<double>* history) {
    const double F_lam = isocline_form(p).F(p.lambda);
    std::vector<double> local;
    std::vector<double>& hist = history ? *history : local;
    return solve_fixed_point(ReturnMap{p, opts}, eta0, F_lam, opts, hist);
}

CycleReport find_limit_cycle(const ReducedParams& p, const CycleOptions& opts) {
    CycleReport rep;
    const double xp = hopf_threshold(p);
    if (!(p.lambda > 0.0 && p.lambda < xp)) return rep;  // no-cycle regime

    const auto iso = isocline_form(p);
    const double F_lam = iso.F(p.lambda);
    ReturnMap R{p, opts};

    // Starts on both sides of F(lambda); both must land on the same fixed
    // point of the downward-crossing return map.
    const double eta_lo = solve_fixed_point(R, 0.5 * F_lam, F_lam, opts, rep.history);
    const double eta_hi = solve_fixed_point(R, 2.0 * F_lam, F_lam, opts, rep.history);
    if (std::abs(eta_lo - eta_hi) > opts.merge_tol * std::max(1.0, std::abs(eta_hi)))
        throw MultiplicityAlarm("return-map starts converged to distinct fixed points: " +
                                std::to_string(eta_lo) + " vs " + std::to_string(eta_hi));
    rep.eta_star = 0.5 * (eta_lo + eta_hi);

    // One loop from the fixed point: section crossings give the eta extremes
    // and the period, prey-isocline crossings give the xi extremes.
    std::array<EventSpec, 3> events;
    events[0].value = [lam = p.lambda](double, std::span<const double> y) { return y[0] - lam; };
    events[0].direction = -1;
    events[0].terminal = true;
    events[1].value = [lam = p.lambda](double, std::span<const double> y) { return y[0] - lam; };
    events[1].direction = +1;
    events[2].value = [iso](double, std::span<const double> y) { return y[1] - iso.F(y[0]); };
    events[2].direction = 0;

    const std::array<double, 2> start{p.lambda, rep.eta_star};
    Trajectory loop = integrate(make_rhs(p), start, 0.0, opts.t_max_per_return, opts.config, events);
    if (!loop.event_terminated)
        throw ConvergenceError("cycle loop did not close", rep.history);
    rep.period = loop.t_end();
    rep.eta_max = rep.eta_star;
    rep.eta_min = rep.eta_star;
    rep.xi_min = p.lambda;
    rep.xi_max = p.lambda;
    for (const auto& ev : loop.events) {
        if (ev.event_id == 1) rep.eta_min = std::min(rep.eta_min, ev.state[1]);
        if (ev.event_id == 2) {
            rep.xi_min = std::min(rep.xi_min, ev.state[0]);
            rep.xi_max = std::max(rep.xi_max, ev.state[0]);
        }
    }

    // Return-map slope at the fixed point by central differences.
    const double gap = rep.eta_star - F_lam;
    const double delta = std::max(1e-7, 1e-3 * gap);
    rep.return_slope = std::abs((R(rep.eta_star + delta) - R(rep.eta_star - delta)) / (2.0 * delta));

    rep.found = true;
    return rep;
}

}  // namespace chemopp
