#include "chemopp/model.hpp"

#include <cmath>

namespace chemopp {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

}  // namespace

int state_dimension(SystemKind kind) {
    return kind == SystemKind::Chemostat3D ? 3 : 2;
}

const char* to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::Chemostat3D: return "chemostat";
        case SystemKind::SurfaceExact: return "surface";
        case SystemKind::LogisticCoupled: return "logistic";
        case SystemKind::LogisticClassical: return "classical";
        case SystemKind::ReducedCoupled: return "reduced";
    }
    return "?";
}

SystemKind system_kind_from_string(const std::string& name) {
    if (name == "chemostat") return SystemKind::Chemostat3D;
    if (name == "surface") return SystemKind::SurfaceExact;
    if (name == "logistic") return SystemKind::LogisticCoupled;
    if (name == "classical") return SystemKind::LogisticClassical;
    if (name == "reduced") return SystemKind::ReducedCoupled;
    throw InvalidParameter("unknown system kind: " + name);
}

ChemostatParams::ChemostatParams(double C_, double D_, double a_, double b_, double m_,
                                 double A_, double B_, double M_)
    : C(C_), D(D_), a(a_), b(b_), m(m_), A(A_), B(B_), M(M_) {
    require(std::isfinite(C) && C > 0, "C > 0 violated");
    require(std::isfinite(D) && D > 0, "D > 0 violated");
    require(std::isfinite(a) && a > 0, "a > 0 violated");
    require(std::isfinite(b) && b >= 0, "b >= 0 violated");
    require(std::isfinite(m) && m > 0, "m > 0 violated");
    require(std::isfinite(A) && A > 0, "A > 0 violated");
    require(std::isfinite(B) && B > 0, "B > 0 violated");
    require(std::isfinite(M) && M > 0, "M > 0 violated");
}

ReducedParams::ReducedParams(double epsilon_, double beta_, double mu_, double lambda_)
    : epsilon(epsilon_), beta(beta_), mu(mu_), lambda(lambda_) {
    require(std::isfinite(epsilon) && epsilon >= 0, "epsilon >= 0 violated");
    require(std::isfinite(beta) && beta >= 0, "beta >= 0 violated");
    require(std::isfinite(mu) && mu > 0, "mu > 0 violated");
    require(std::isfinite(lambda) && lambda > 0, "lambda > 0 violated");
}

std::array<double, 3> chemostat_rhs(const ChemostatParams& p, const std::array<double, 3>& u) {
    const double s = u[0], x = u[1], y = u[2];
    const double prey_uptake = p.a * x * s / (1.0 + p.a * p.b * s);
    const double pred_uptake = p.A * x * y / (1.0 + p.A * p.B * x);
    return {p.C * p.D - p.D * s - prey_uptake,
            p.m * prey_uptake - p.D * x - pred_uptake,
            p.M * pred_uptake - p.D * y};
}

std::array<double, 2> surface_rhs(const ChemostatParams& p, const std::array<double, 2>& u) {
    const double x = u[0], y = u[1];
    const double s_surf = p.m * p.C - x - y / p.M;  // m * s on the surface H = 0
    const double growth = p.a * x * s_surf / (1.0 + (p.a * p.b / p.m) * s_surf);
    const double pred_uptake = p.A * x * y / (1.0 + p.A * p.B * x);
    return {growth - p.D * x - pred_uptake,
            p.M * pred_uptake - p.D * y};
}

std::array<double, 2> logistic_coupled_rhs(const ChemostatParams& p, const std::array<double, 2>& u) {
    const double x = u[0], y = u[1];
    const double pred_uptake = p.A * x * y / (1.0 + p.A * p.B * x);
    return {p.a * x * (p.m * p.C - x) - p.D * x - p.a * x * y / p.M - pred_uptake,
            p.M * pred_uptake - p.D * y};
}

std::array<double, 2> logistic_classical_rhs(const ChemostatParams& p, const std::array<double, 2>& u) {
    const double x = u[0], y = u[1];
    const double pred_uptake = p.A * x * y / (1.0 + p.A * p.B * x);
    return {p.a * x * (p.m * p.C - x) - p.D * x - pred_uptake,
            p.M * pred_uptake - p.D * y};
}

std::array<double, 2> reduced_rhs(const ReducedParams& p, const std::array<double, 2>& u) {
    const double xi = u[0], eta = u[1];
    return {xi * (1.0 - xi) - p.epsilon * xi * eta - xi * eta / (1.0 + p.beta * xi),
            eta * p.mu * (xi - p.lambda) / (1.0 + p.beta * xi)};
}

namespace {

void check_dim(SystemKind kind, std::span<const double> state, std::span<double> deriv) {
    const auto dim = static_cast<size_t>(state_dimension(kind));
    if (state.size() != dim || deriv.size() != dim)
        throw std::invalid_argument("state dimension does not match system kind");
}

}  // namespace

void vector_field(SystemKind kind, const ChemostatParams& p,
                  std::span<const double> state, std::span<double> deriv) {
    if (kind == SystemKind::ReducedCoupled)
        throw InvalidParameter("ReducedCoupled takes ReducedParams, not ChemostatParams");
    check_dim(kind, state, deriv);
    if (kind == SystemKind::Chemostat3D) {
        auto d = chemostat_rhs(p, {state[0], state[1], state[2]});
        deriv[0] = d[0]; deriv[1] = d[1]; deriv[2] = d[2];
        return;
    }
    std::array<double, 2> d{};
    switch (kind) {
        case SystemKind::SurfaceExact: d = surface_rhs(p, {state[0], state[1]}); break;
        case SystemKind::LogisticCoupled: d = logistic_coupled_rhs(p, {state[0], state[1]}); break;
        case SystemKind::LogisticClassical: d = logistic_classical_rhs(p, {state[0], state[1]}); break;
        default: break;
    }
    deriv[0] = d[0]; deriv[1] = d[1];
}

void vector_field(SystemKind kind, const ReducedParams& p,
                  std::span<const double> state, std::span<double> deriv) {
    if (kind != SystemKind::ReducedCoupled)
        throw InvalidParameter(std::string(to_string(kind)) + " takes ChemostatParams, not ReducedParams");
    check_dim(kind, state, deriv);
    auto d = reduced_rhs(p, {state[0], state[1]});
    deriv[0] = d[0]; deriv[1] = d[1];
}

double H_function(const ChemostatParams& p, const ChemoState& s) {
    return p.m * s.s + s.x + s.y / p.M - p.m * p.C;
}

Reduction reparametrize(const ChemostatParams& p) {
    const double k = p.prey_margin();
    if (!(k > 0)) throw InvalidParameter("a*m*C - D > 0 violated: reduction undefined");
    const double w = p.predator_margin();
    if (!(w > 0)) throw InvalidParameter("M - B*D > 0 violated: reduction undefined");
    ReducedParams rp{p.a / (p.M * p.A),
                     (p.A * p.B / p.a) * k,
                     (p.A / p.a) * w,
                     p.D * p.a / (p.A * k * w)};
    return {rp, {p.a / k, p.A / k, k}};
}

double IsoclineForm::f(double xi) const {
    return params.epsilon * xi + xi / (1.0 + params.beta * xi);
}

double IsoclineForm::f_prime(double xi) const {
    const double d = 1.0 + params.beta * xi;
    return params.epsilon + 1.0 / (d * d);
}

double IsoclineForm::F(double xi) const {
    return (1.0 + params.beta * xi) * (1.0 - xi) /
           (1.0 + params.epsilon + params.epsilon * params.beta * xi);
}

double IsoclineForm::F_prime(double xi) const {
    const double e = params.epsilon, b = params.beta;
    const double den = 1.0 + e + e * b * xi;
    return (b - 1.0 - e - 2.0 * b * xi - 2.0 * b * e * xi - b * b * e * xi * xi) / (den * den);
}

double IsoclineForm::F_prime_factored(double xi) const {
    const double e = params.epsilon;
    if (!(e > 0)) throw InvalidParameter("factored F' requires epsilon > 0");
    auto roots = xi_roots(params);
    const double xp = *roots.plus, xm = *roots.minus;
    const double mid = 0.5 * (xp + xm);
    return -(xi - xp) * (xi - xm) / (e * (xi - mid) * (xi - mid));
}

double IsoclineForm::psi(double xi) const {
    return params.mu * (xi - params.lambda) / (1.0 + params.beta * xi);
}

double IsoclineForm::psi_prime(double xi) const {
    const double d = 1.0 + params.beta * xi;
    return params.mu * (1.0 + params.beta * params.lambda) / (d * d);
}

IsoclineForm isocline_form(const ReducedParams& p) { return {p}; }

XiRoots xi_roots(const ReducedParams& p) {
    const double e = p.epsilon, b = p.beta;
    XiRoots r;
    if (b == 0.0) return r;  // F' numerator is the constant -(1+e): no roots
    // Cancellation-free form of (-(1+e) + sqrt(1+e+be)) / (be); also valid
    // in the limit e = 0 where the quadratic degenerates.
    const double disc = std::sqrt(1.0 + e + b * e);
    r.plus = (b - 1.0 - e) / (b * (1.0 + e + disc));
    if (e > 0.0) r.minus = (-(1.0 + e) - disc) / (b * e);
    return r;
}

double growth_h(const ChemostatParams& p, double x) {
    const double cap = p.m * p.C;
    const double den = 1.0 + (p.a * p.b / p.m) * (cap - x);
    // Vertical asymptote at x = mC + m/(ab); h is only meaningful left of it.
    if (x < 0.0 || den <= 0.0)
        throw std::domain_error("growth_h: x outside [0, mC + m/(ab))");
    return p.a * x * (cap - x) / den;
}

double growth_h_argmax(const ChemostatParams& p) {
    const double q = 1.0 + p.a * p.b * p.C;
    return p.m * p.C * q / (q + std::sqrt(q));
}

}  // namespace chemopp
