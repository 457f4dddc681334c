#include "chemopp/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chemopp {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                 kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
// Error coefficients (5th minus embedded 4th order weights).
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
// Dense output coefficients.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

struct Stepper {
    const RhsFn& rhs;
    int n;
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;

    Stepper(const RhsFn& f, int dim)
        : rhs(f), n(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim),
          ytmp(dim), ynew(dim), yerr(dim) {}

    // One trial step from (t, y) with k1 = f(t, y) already evaluated.
    // Fills ynew, yerr and k7 = f(t+h, ynew) (FSAL).
    void attempt(double t, std::span<const double> y, double h) {
        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
        rhs(t + kC2 * h, ytmp, k2);
        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        rhs(t + kC3 * h, ytmp, k3);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        rhs(t + kC4 * h, ytmp, k4);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        rhs(t + kC5 * h, ytmp, k5);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] +
                      h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (int i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] +
                                  kA76 * k6[i]);
        rhs(t + h, ynew, k7);
        for (int i = 0; i < n; ++i)
            yerr[i] = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] +
                           kE7 * k7[i]);
    }

    double error_norm(std::span<const double> y, const IntegratorConfig& cfg) const {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = yerr[i] / sc;
            sum += e * e;
        }
        return std::sqrt(sum / n);
    }

    DenseSegment dense(double t, std::span<const double> y, double h) const {
        DenseSegment seg;
        seg.t0 = t;
        seg.h = h;
        seg.r.resize(5 * static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            seg.r[i] = y[i];
            seg.r[n + i] = ydiff;
            seg.r[2 * n + i] = bspl;
            seg.r[3 * n + i] = ydiff - h * k7[i] - bspl;
            seg.r[4 * n + i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                                    kD6 * k6[i] + kD7 * k7[i]);
        }
        return seg;
    }
};

double initial_step(const RhsFn& rhs, double t0, std::span<const double> y0,
                    std::span<const double> f0, double dir, double span,
                    const IntegratorConfig& cfg) {
    const int n = static_cast<int>(y0.size());
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    std::vector<double> y1(n), f1(n);
    for (int i = 0; i < n; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
    rhs(t0 + dir * h0, y1, f1);
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
        const double df = (f1[i] - f0[i]) / sc;
        d2 += df * df;
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, span, cfg.max_step});
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0)) throw InvalidParameter("rel_tol > 0 violated");
    if (!(abs_tol > 0)) throw InvalidParameter("abs_tol > 0 violated");
    if (!(max_step > 0)) throw InvalidParameter("max_step > 0 violated");
    if (max_steps < 1) throw InvalidParameter("max_steps >= 1 violated");
    if (!(event_tol > 0)) throw InvalidParameter("event_tol > 0 violated");
}

void DenseSegment::eval(double theta, std::span<double> out) const {
    const int n = static_cast<int>(out.size());
    const double th1 = 1.0 - theta;
    for (int i = 0; i < n; ++i) {
        out[i] = r[i] + theta * (r[n + i] +
                                 th1 * (r[2 * n + i] +
                                        theta * (r[3 * n + i] + th1 * r[4 * n + i])));
    }
}

std::vector<double> Trajectory::interpolate(double t) const {
    std::vector<double> out(static_cast<size_t>(dim));
    interpolate(t, out);
    return out;
}

void Trajectory::interpolate(double t, std::span<double> out) const {
    const bool fwd = times.back() >= times.front();
    const double lo = fwd ? times.front() : times.back();
    const double hi = fwd ? times.back() : times.front();
    if (t < lo || t > hi) throw std::invalid_argument("interpolate: time outside trajectory span");
    // Stored times reproduce stored states bit for bit.
    auto cmp = fwd ? [](double a, double b) { return a < b; }
                   : [](double a, double b) { return a > b; };
    auto it = std::lower_bound(times.begin(), times.end(), t, cmp);
    if (it != times.end() && *it == t) {
        const auto& s = states[static_cast<size_t>(it - times.begin())];
        std::copy(s.begin(), s.end(), out.begin());
        return;
    }
    size_t seg = static_cast<size_t>(it - times.begin());
    seg = seg == 0 ? 0 : seg - 1;
    if (seg >= segments.size()) seg = segments.size() - 1;
    const auto& s = segments[seg];
    s.eval((t - s.t0) / s.h, out);
}

namespace {

void csv_value(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

void Trajectory::write_csv(
    std::ostream& os, std::span<const std::string> column_names,
    std::span<const std::pair<std::string, std::string>> header,
    std::span<const std::pair<std::string, std::function<double(double, std::span<const double>)>>>
        extra_columns) const {
    for (const auto& [k, v] : header) os << "# " << k << "=" << v << "\n";
    os << "t";
    for (const auto& c : column_names) os << "," << c;
    for (const auto& [name, fn] : extra_columns) os << "," << name;
    os << "\n";
    for (size_t i = 0; i < times.size(); ++i) {
        csv_value(os, times[i]);
        for (double v : states[i]) {
            os << ",";
            csv_value(os, v);
        }
        for (const auto& [name, fn] : extra_columns) {
            os << ",";
            csv_value(os, fn(times[i], states[i]));
        }
        os << "\n";
    }
}

namespace {

struct EventWatch {
    double g_prev = 0.0;     // event value at the last examined point
    bool have_prev = false;  // false until a nonzero value has been seen
};

// Locate a sign change of ev.value inside [theta_lo, theta_hi] of a dense
// segment by bisection until |g| <= event_tol at the midpoint.
std::pair<double, double> refine_crossing(const EventSpec& ev, const DenseSegment& seg,
                                          double theta_lo, double theta_hi, double g_lo,
                                          double event_tol, std::vector<double>& work) {
    double mid = 0.5 * (theta_lo + theta_hi), g_mid = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (theta_lo + theta_hi);
        seg.eval(mid, work);
        g_mid = ev.value(seg.t0 + mid * seg.h, work);
        if (std::abs(g_mid) <= event_tol) break;
        if ((g_lo < 0) == (g_mid < 0)) {
            theta_lo = mid;
            g_lo = g_mid;
        } else {
            theta_hi = mid;
        }
    }
    return {mid, g_mid};
}

}  // namespace

Trajectory integrate(const RhsFn& rhs, std::span<const double> y0, double t0, double t1,
                     const IntegratorConfig& config, std::span<const EventSpec> events) {
    config.validate();
    if (y0.empty()) throw std::invalid_argument("empty initial state");
    if (!all_finite(y0)) throw std::invalid_argument("non-finite initial state");
    if (t1 == t0) throw std::invalid_argument("degenerate time span");

    const int n = static_cast<int>(y0.size());
    const double dir = t1 > t0 ? 1.0 : -1.0;

    Trajectory traj;
    traj.dim = n;
    traj.times.push_back(t0);
    traj.states.emplace_back(y0.begin(), y0.end());

    Stepper st(rhs, n);
    std::vector<double> y(y0.begin(), y0.end());
    double t = t0;
    rhs(t, y, st.k1);
    if (!all_finite(st.k1)) throw IntegrationFailure("non-finite derivative at start", t, y);

    double h = initial_step(rhs, t, y, st.k1, dir, std::abs(t1 - t0), config);
    bool rejected = false;
    std::vector<EventWatch> watches(events.size());
    for (size_t j = 0; j < events.size(); ++j) {
        const double g0 = events[j].value(t, y);
        if (g0 != 0.0) {
            watches[j].g_prev = g0;
            watches[j].have_prev = true;
        }
    }
    std::vector<double> ework(n);

    for (long step = 0; step < config.max_steps; ++step) {
        h = std::min(h, config.max_step);
        bool last = false;
        if (std::abs(t1 - t) <= h) {
            h = std::abs(t1 - t);
            last = true;
        }
        if (h <= std::abs(t) * 1e-15 + 1e-300)
            throw IntegrationFailure("step size underflow", t, y);

        st.attempt(t, y, dir * h);
        if (!all_finite(st.ynew) || !all_finite(st.k7))
            throw IntegrationFailure("non-finite state or derivative", t, y);

        const double err = st.error_norm(y, config);
        if (err > 1.0) {
            const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= std::min(fac, 1.0);
            rejected = true;
            continue;
        }

        // Accepted step.
        const double t_new = last ? t1 : t + dir * h;
        DenseSegment seg = st.dense(t, y, dir * h);

        // Scan for event crossings at quarter points of the step, collect
        // candidates across all events, then commit them in time order.
        struct Candidate {
            double theta;
            size_t event;
            int direction;
        };
        std::vector<Candidate> found;
        for (size_t j = 0; j < events.size(); ++j) {
            const auto& ev = events[j];
            double th_prev = 0.0;
            for (int q = 1; q <= 4; ++q) {
                const double th = 0.25 * q;
                double g;
                if (q == 4) {
                    g = ev.value(t_new, st.ynew);
                } else {
                    seg.eval(th, ework);
                    g = ev.value(seg.t0 + th * seg.h, ework);
                }
                if (!watches[j].have_prev) {
                    if (g != 0.0) {
                        watches[j].g_prev = g;
                        watches[j].have_prev = true;
                    }
                    th_prev = th;
                    continue;
                }
                const double gp = watches[j].g_prev;
                if (g == 0.0 || (gp < 0) != (g < 0)) {
                    const int crossing_dir = gp < 0 ? +1 : -1;
                    if (ev.direction == 0 || ev.direction == crossing_dir) {
                        auto [theta, g_at] =
                            refine_crossing(ev, seg, th_prev, th, gp, config.event_tol, ework);
                        (void)g_at;
                        found.push_back({theta, j, crossing_dir});
                    }
                }
                watches[j].g_prev = g;
                th_prev = th;
            }
        }
        std::sort(found.begin(), found.end(),
                  [](const Candidate& a, const Candidate& b) { return a.theta < b.theta; });
        for (const auto& c : found) {
            EventRecord rec;
            rec.t = seg.t0 + c.theta * seg.h;
            rec.state.resize(n);
            seg.eval(c.theta, rec.state);
            rec.event_id = static_cast<int>(c.event);
            rec.direction = c.direction;
            traj.events.push_back(std::move(rec));
            if (events[c.event].terminal) {
                // Keep the full-step dense polynomial; only [t, rec.t] of it
                // is inside the trajectory span.
                traj.times.push_back(traj.events.back().t);
                traj.states.push_back(traj.events.back().state);
                traj.segments.push_back(std::move(seg));
                traj.event_terminated = true;
                return traj;
            }
        }

        traj.times.push_back(t_new);
        traj.states.emplace_back(st.ynew.begin(), st.ynew.end());
        traj.segments.push_back(std::move(seg));

        t = t_new;
        y = st.ynew;
        std::swap(st.k1, st.k7);  // FSAL

        if (last) return traj;

        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::min(rejected ? 1.0 : 5.0, std::max(0.2, fac));
        h *= fac;
        rejected = false;
    }

    traj.truncated = true;
    return traj;
}

Trajectory integrate(SystemKind kind, const ChemostatParams& p, std::span<const double> y0,
                     double t0, double t1, const IntegratorConfig& config,
                     std::span<const EventSpec> events) {
    return integrate(make_rhs(kind, p), y0, t0, t1, config, events);
}

Trajectory integrate(const ReducedParams& p, ReducedState y0, double t0, double t1,
                     const IntegratorConfig& config, std::span<const EventSpec> events) {
    const std::array<double, 2> s{y0.xi, y0.eta};
    return integrate(make_rhs(p), s, t0, t1, config, events);
}

RhsFn make_rhs(SystemKind kind, const ChemostatParams& p) {
    if (kind == SystemKind::ReducedCoupled)
        throw InvalidParameter("ReducedCoupled takes ReducedParams, not ChemostatParams");
    return [kind, p](double, std::span<const double> y, std::span<double> dy) {
        vector_field(kind, p, y, dy);
    };
}

RhsFn make_rhs(const ReducedParams& p) {
    return [p](double, std::span<const double> y, std::span<double> dy) {
        vector_field(SystemKind::ReducedCoupled, p, y, dy);
    };
}

PoincareReturn poincare_return(const ReducedParams& p, double eta0,
                               const IntegratorConfig& config, double t_max) {
    if (!(eta0 > 0)) throw InvalidParameter("eta0 > 0 violated");
    if (!(p.lambda < 1)) throw InvalidParameter("lambda < 1 violated: no interior equilibrium");

    const auto iso = isocline_form(p);
    const double eta_eq = iso.F(p.lambda);
    if (std::abs(eta0 - eta_eq) <= 1e-13 * std::max(1.0, std::abs(eta_eq)))
        return {eta_eq, 0.0, true};

    EventSpec section;
    section.value = [lam = p.lambda](double, std::span<const double> y) { return y[0] - lam; };
    section.direction = -1;  // canonical: xi decreasing, eta at a local max
    section.terminal = true;

    const std::array<double, 2> s0{p.lambda, eta0};
    Trajectory traj = integrate(make_rhs(p), s0, 0.0, t_max, config, std::span(&section, 1));
    if (!traj.event_terminated)
        throw NoReturnError("no return to the section xi = lambda within t_max (trajectory "
                            "likely converges to an equilibrium)");
    const EventRecord& rec = traj.events.back();
    return {rec.state[1], rec.t, false};
}

}  // namespace chemopp
