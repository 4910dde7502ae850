#include "lifetime/laplace_asym.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lifetime/quadrature.hpp"

namespace lifetime {

using std::numbers::pi;

namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

}  // namespace

double log_laplace_point(const LaplaceProblem& problem, double lambda)
{
    require_positive(lambda, "lambda");
    if (!(problem.f2 < 0.0)) throw std::invalid_argument("laplace_point: f''(x0) must be negative");
    const double h0 = problem.h(problem.x0);
    if (!(h0 > 0.0)) throw std::invalid_argument("laplace_point: log form needs h(x0) > 0");
    return std::log(h0) + lambda * problem.f(problem.x0) + 0.5 * std::log(2.0 * pi / (lambda * -problem.f2));
}

double laplace_point(const LaplaceProblem& problem, double lambda)
{
    require_positive(lambda, "lambda");
    if (!(problem.f2 < 0.0)) throw std::invalid_argument("laplace_point: f''(x0) must be negative");
    const double h0 = problem.h(problem.x0);
    if (h0 == 0.0) throw std::invalid_argument("laplace_point: h(x0) must be nonzero");
    return h0 * std::exp(lambda * problem.f(problem.x0)) * std::sqrt(2.0 * pi / (lambda * -problem.f2));
}

double saddle_exponent_coefficient(double a, double b)
{
    return 3.0 * std::cbrt(a) * std::cbrt(b * b) / std::cbrt(4.0);
}

double saddle_location(double a, double b, double t) { return std::cbrt(2.0 * a * t / b); }

double log_asym_inverse_square(double lambda)
{
    require_positive(lambda, "lambda");
    return -3.0 * lambda / std::cbrt(4.0) + 0.5 * std::log(std::cbrt(16.0) * pi / (3.0 * lambda));
}

double log_asym_saddle(double a, double b, double t)
{
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(t, "t");
    return 0.5 * std::log(pi / 3.0) + (2.0 / 3.0) * std::log(2.0) + std::log(a) / 6.0 - (2.0 / 3.0) * std::log(b) +
           std::log(t) / 6.0 - saddle_exponent_coefficient(a, b) * std::cbrt(t);
}

double log_asym_saddle_moment(double a, double b, double t)
{
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(t, "t");
    return std::log(2.0) + 0.5 * std::log(pi / 3.0) + 0.5 * std::log(a) - std::log(b) + 0.5 * std::log(t) -
           saddle_exponent_coefficient(a, b) * std::cbrt(t);
}

double log_asym_cosine_moment(double K, double lambda_d, double t)
{
    if (!(K >= 0.0)) throw std::invalid_argument("K must be non-negative");
    return log_asym_saddle_moment(pi * pi / 2.0, lambda_d, t);
}

double asym_inverse_square(double lambda) { return std::exp(log_asym_inverse_square(lambda)); }
double asym_saddle(double a, double b, double t) { return std::exp(log_asym_saddle(a, b, t)); }
double asym_saddle_moment(double a, double b, double t) { return std::exp(log_asym_saddle_moment(a, b, t)); }
double asym_cosine_moment(double K, double lambda_d, double t) { return std::exp(log_asym_cosine_moment(K, lambda_d, t)); }

double log_asymptotic(SaddleKind kind, const SaddleParams& p, double s)
{
    switch (kind) {
    case SaddleKind::inverse_square: return log_asym_inverse_square(s);
    case SaddleKind::saddle: return log_asym_saddle(p.a, p.b, s);
    case SaddleKind::saddle_moment: return log_asym_saddle_moment(p.a, p.b, s);
    case SaddleKind::cosine_moment: return log_asym_cosine_moment(p.K, p.b, s);
    }
    throw std::invalid_argument("unknown saddle kind");
}

std::string to_string(SaddleKind kind)
{
    switch (kind) {
    case SaddleKind::inverse_square: return "inverse_square";
    case SaddleKind::saddle: return "saddle";
    case SaddleKind::saddle_moment: return "saddle_moment";
    case SaddleKind::cosine_moment: return "cosine_moment";
    }
    return "unknown";
}

namespace {

// Integrand  x^power · exp(-A/x² - B x)  on [x0/50, 50 x0] plus analytic tails.
struct PowerSaddle {
    double A, B;
    int power;
};

struct Core {
    LogQuadrature quad;
    double log_tail;  // log of the bound on the two excluded tails
    double x0;
};

Core integrate_core(const PowerSaddle& ps, const std::function<double(double)>& extra_log, double rel_tol)
{
    const double x0 = std::cbrt(2.0 * ps.A / ps.B);
    const double lo = x0 / 50.0, hi = 50.0 * x0;
    auto g = [&](double x) {
        return ps.power * std::log(x) - ps.A / (x * x) - ps.B * x + (extra_log ? extra_log(x) : 0.0);
    };
    LogQuadOptions opt;
    opt.rel_tol = rel_tol;
    Core c{integrate_log(g, lo, hi, x0, opt), 0.0, x0};
    // Upper tail: ∫_hi^∞ x^p e^{-Bx} dx; lower tail: ∫_0^lo x^p e^{-A/x²} dx <= lo^{p+1} e^{-A/lo²}.
    const double upper = ps.power == 0 ? -ps.B * hi - std::log(ps.B)
                                       : -ps.B * hi + std::log(hi / ps.B + 1.0 / (ps.B * ps.B));
    const double lower = (ps.power + 1) * std::log(lo) - ps.A / (lo * lo);
    c.log_tail = log_add(upper, lower);
    return c;
}

OracleEstimate finish(const Core& c)
{
    OracleEstimate e;
    e.evaluations = c.quad.evaluations;
    e.converged = c.quad.converged;
    const double tail_rel = std::exp(c.log_tail - c.quad.log_value);
    e.log_value = c.quad.log_value;
    e.rel_error = c.quad.rel_error + tail_rel;
    return e;
}

}  // namespace

OracleEstimate numeric_oracle(SaddleKind kind, const SaddleParams& p, double s, double rel_tol)
{
    require_positive(s, "lambda/t");
    if (!(rel_tol >= 1e-14)) throw std::invalid_argument("numeric_oracle: relative tolerance too small");
    switch (kind) {
    case SaddleKind::inverse_square: return finish(integrate_core({s, s, 0}, {}, rel_tol));
    case SaddleKind::saddle:
        require_positive(p.a, "a");
        require_positive(p.b, "b");
        return finish(integrate_core({p.a * s, p.b, 0}, {}, rel_tol));
    case SaddleKind::saddle_moment:
        require_positive(p.a, "a");
        require_positive(p.b, "b");
        return finish(integrate_core({p.a * s, p.b, 1}, {}, rel_tol));
    case SaddleKind::cosine_moment: {
        require_positive(p.b, "lambda_D");
        if (!(p.K >= 0.0)) throw std::invalid_argument("K must be non-negative");
        const PowerSaddle ps{pi * pi * s / 2.0, p.b, 1};
        const Core full = integrate_core(ps, {}, rel_tol);
        if (p.K == 0.0) return finish(full);
        // x cos(πK/x) = x - 2x sin²(πK/(2x)); both pieces have positive integrands.
        auto deficit = [&](double x) {
            const double sn = std::abs(std::sin(pi * p.K / (2.0 * x)));
            return sn > 0 ? std::log(2.0) + 2.0 * std::log(sn) : -std::numeric_limits<double>::infinity();
        };
        const Core removed = integrate_core(ps, deficit, rel_tol);
        const double ratio = std::exp(removed.quad.log_value - full.quad.log_value);
        if (!(ratio < 1.0)) throw std::runtime_error("numeric_oracle: cosine integral is not positive");
        OracleEstimate e = finish(full);
        const OracleEstimate r = finish(removed);
        e.log_value = full.quad.log_value + std::log1p(-ratio);
        e.rel_error = (e.rel_error + ratio * r.rel_error) / (1.0 - ratio);
        e.evaluations += r.evaluations;
        e.converged = e.converged && r.converged;
        return e;
    }
    }
    throw std::invalid_argument("unknown saddle kind");
}

}  // namespace lifetime
