#include "lifetime/subordination.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lifetime/exit_laws.hpp"
#include "lifetime/quadrature.hpp"

namespace lifetime {

using std::numbers::pi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and non-negative");
}

Estimate from_quad(const LogQuadrature& q)
{
    Estimate e;
    e.log_value = std::min(q.log_value, 0.0);
    e.abs_error_log = std::abs(std::log1p(std::min(q.rel_error, 0.5)));
    e.evaluations = q.evaluations;
    e.converged = q.converged;
    return e;
}

}  // namespace

TailLaw TailLaw::exponential(double A, double lambda)
{
    TailLaw t;
    t.kind = TailKind::exponential;
    t.A = A;
    t.lambda = lambda;
    t.validate();
    return t;
}

TailLaw TailLaw::polynomial(double C)
{
    TailLaw t;
    t.kind = TailKind::polynomial;
    t.C = C;
    t.validate();
    return t;
}

TailLaw TailLaw::stretched_log(double C, double p)
{
    TailLaw t;
    t.kind = TailKind::stretched_log;
    t.C = C;
    t.p = p;
    t.validate();
    return t;
}

TailLaw TailLaw::algebraic_log(double C, double alpha, double beta)
{
    TailLaw t;
    t.kind = TailKind::algebraic_log;
    t.C = C;
    t.alpha = alpha;
    t.beta = beta;
    t.validate();
    return t;
}

TailLaw TailLaw::point_mass(double u0)
{
    TailLaw t;
    t.kind = TailKind::point_mass;
    t.u0 = u0;
    t.validate();
    return t;
}

void TailLaw::validate() const
{
    switch (kind) {
    case TailKind::exponential:
        if (!(A > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("exponential tail: need A > 0 and lambda > 0");
        break;
    case TailKind::polynomial:
        if (!(C > 0.0)) throw std::invalid_argument("polynomial tail: need C > 0");
        break;
    case TailKind::stretched_log:
        if (!(C > 0.0) || !(p > 0.0)) throw std::invalid_argument("stretched_log tail: need C > 0 and p > 0");
        break;
    case TailKind::algebraic_log:
        if (!(C > 0.0)) throw std::invalid_argument("algebraic_log tail: need C > 0");
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("algebraic_log tail: alpha must lie in (0,1)");
        break;
    case TailKind::point_mass:
        if (!(u0 > 0.0)) throw std::invalid_argument("point_mass tail: need u0 > 0");
        break;
    }
}

double TailLaw::splice() const
{
    if (kind == TailKind::point_mass || u0 >= 0.0) return u0;
    switch (kind) {
    case TailKind::exponential: return A > lambda ? std::log(A / lambda) / lambda : 0.0;
    case TailKind::polynomial: return 1.0;
    case TailKind::stretched_log: return std::exp(2.0 / p);
    case TailKind::algebraic_log: {
        const double q = (1.0 - alpha) / (1.0 + alpha), r = 2.0 * beta / (1.0 + alpha);
        return std::exp(std::max(1.0, r / q));
    }
    case TailKind::point_mass: break;
    }
    return u0;
}

double TailLaw::log_tail(double u) const
{
    const double s = splice();
    if (u < s || u <= 0.0) return 0.0;
    switch (kind) {
    case TailKind::exponential: return std::min(0.0, std::log(A / lambda) - lambda * u);
    case TailKind::polynomial: return std::min(0.0, -C * std::log(u));
    case TailKind::stretched_log: return std::min(0.0, -C * u * std::pow(std::log(u), -2.0 / p));
    case TailKind::algebraic_log: {
        const double q = (1.0 - alpha) / (1.0 + alpha), r = 2.0 * beta / (1.0 + alpha);
        return std::min(0.0, -C * std::pow(u, q) * std::pow(std::log(u), -r));
    }
    case TailKind::point_mass: return kNegInf;
    }
    return 0.0;
}

std::string to_string(TailKind kind)
{
    switch (kind) {
    case TailKind::exponential: return "exponential";
    case TailKind::polynomial: return "polynomial";
    case TailKind::stretched_log: return "stretched_log";
    case TailKind::algebraic_log: return "algebraic_log";
    case TailKind::point_mass: return "point_mass";
    }
    return "unknown";
}

Estimate ibm_survival(const SpectralDomain& domain, std::span<const double> z, double t,
                      const SubordinationOptions& options)
{
    check_time(t);
    if (!domain.contains(z)) throw std::invalid_argument("ibm_survival: z must lie strictly inside the domain");
    if (t == 0.0) return {};
    const std::vector<double> zz(z.begin(), z.end());
    const double lambda = domain.modes().front().eigenvalue;

    LogQuadOptions inner_opt;
    inner_opt.rel_tol = options.rel_tol;
    inner_opt.scan_points = 64;
    const double w_hi = options.symmetrized ? 0.5 : 1.0;
    const double log_mult = options.symmetrized ? std::log(2.0) : 0.0;

    std::size_t inner_evals = 0;
    struct InnerRecord {
        double log_outer, rel_error;
        bool converged;
    };
    std::vector<InnerRecord> records;
    // u = w x, v = (1-w) x, du dv = x dx dw.
    auto outer = [&](double x) {
        const double s = t / (x * x);
        auto inner = [&](double w) {
            const double a = log_domain_exit_density(domain, zz, w * x);
            if (a == kNegInf) return kNegInf;
            const double b = log_domain_exit_density(domain, zz, (1.0 - w) * x);
            if (b == kNegInf) return kNegInf;
            return log_interval_survival_excess(w, s) + a + b;
        };
        const double centre = options.symmetrized ? 0.25 : 0.5;
        const LogQuadrature q = integrate_log(inner, 0.0, w_hi, centre, inner_opt);
        inner_evals += q.evaluations;
        const double v = q.log_value == kNegInf ? kNegInf : std::log(x) + q.log_value + log_mult - pi * pi * s / 2.0;
        if (v != kNegInf) records.push_back({v, q.rel_error, q.converged});
        return v;
    };

    LogQuadOptions outer_opt;
    outer_opt.rel_tol = options.rel_tol;
    outer_opt.truncation_scale = options.truncation_scale;
    outer_opt.scan_points = 96;
    const double centre = std::max(std::cbrt(pi * pi * t / lambda), std::sqrt(t));
    const LogQuadrature q = integrate_log(outer, 0.0, std::numeric_limits<double>::infinity(), centre, outer_opt);
    // Inner errors matter only where the outer integrand carries mass.
    double top = kNegInf;
    for (const auto& r : records) top = std::max(top, r.log_outer);
    double worst_inner = 0.0;
    bool inner_ok = true;
    for (const auto& r : records) {
        if (r.log_outer < top - 40.0) continue;
        worst_inner = std::max(worst_inner, r.rel_error);
        inner_ok = inner_ok && r.converged;
    }
    Estimate e = from_quad(q);
    e.abs_error_log += worst_inner;
    e.evaluations += inner_evals;
    e.converged = e.converged && inner_ok;
    return e;
}

Estimate btbm_survival_density(const SpectralDomain& domain, std::span<const double> z, double t,
                               const SubordinationOptions& options)
{
    check_time(t);
    if (!domain.contains(z)) throw std::invalid_argument("btbm_survival_density: z must lie strictly inside the domain");
    if (t == 0.0) return {};
    const std::vector<double> zz(z.begin(), z.end());
    const double lambda = domain.modes().front().eigenvalue;
    auto g = [&](double u) {
        const double f = log_domain_exit_density(domain, zz, u);
        if (f == kNegInf) return kNegInf;
        return log_interval_survival(0.5, t / (4.0 * u * u)) + f;
    };
    LogQuadOptions opt;
    opt.rel_tol = options.rel_tol;
    opt.truncation_scale = options.truncation_scale;
    const double centre = std::max(std::cbrt(pi * pi * t / (4.0 * lambda)), 0.5 * std::sqrt(t));
    return from_quad(integrate_log(g, 0.0, std::numeric_limits<double>::infinity(), centre, opt));
}

Estimate btbm_survival_tail(const TailLaw& tail, double t, const SubordinationOptions& options)
{
    check_time(t);
    tail.validate();
    if (t == 0.0) return {};
    const double u0 = tail.splice();
    auto g = [&](double u) {
        const double lt = tail.log_tail(u);
        if (lt == kNegInf) return kNegInf;
        return log_sym_eta_density_du(u, t) + lt;
    };
    LogQuadOptions opt;
    opt.rel_tol = options.rel_tol;
    opt.truncation_scale = options.truncation_scale;

    // Candidate centres: the diffusive scale and the saddle against the local tail rate.
    std::vector<double> candidates{std::sqrt(t), 0.5 * std::sqrt(t)};
    double u = std::max(std::cbrt(t), 2.0 * std::max(u0, 1.0));
    for (int it = 0; it < 6; ++it) {
        const double h = 1e-4 * u;
        const double rate = -(tail.log_tail(u + h) - tail.log_tail(u - h)) / (2.0 * h);
        if (!(rate > 0.0) || !std::isfinite(rate)) break;
        u = std::cbrt(pi * pi * t / (4.0 * rate));
    }
    candidates.push_back(u);
    double centre = candidates.front(), best = kNegInf;
    for (double c : candidates) {
        const double v = g(c);
        if (v > best) {
            best = v;
            centre = c;
        }
    }

    std::vector<double> breaks;
    if (u0 > 0.0) breaks.push_back(u0);
    const double hi = tail.kind == TailKind::point_mass ? u0 : std::numeric_limits<double>::infinity();
    if (tail.kind == TailKind::point_mass) centre = std::min(centre, 0.5 * u0);
    return from_quad(integrate_log(g, 0.0, hi, centre, opt, breaks));
}

double scaled_ratio(const Estimate& estimate, double t, const AsymptoticPrediction& prediction)
{
    if (!prediction.sharp || prediction.form != ScaleForm::sharp)
        throw std::invalid_argument("scaled_ratio: prediction must be a sharp prefactor limit");
    if (!(t > 0.0)) throw std::invalid_argument("scaled_ratio: t must be positive");
    const double log_r = estimate.log_value - prediction.prefactor_power * std::log(t) -
                         prediction.rate * std::pow(t, prediction.t_power);
    return std::exp(log_r);
}

double log_scaled(const Estimate& estimate, double t, double power_a, double log_power_b)
{
    if (!(t > std::numbers::e)) throw std::invalid_argument("log_scaled: need t > e");
    return std::pow(t, -power_a) * std::pow(std::log(t), log_power_b) * estimate.log_value;
}

double log_scaled(const Estimate& estimate, double t, const AsymptoticPrediction& prediction)
{
    if (prediction.form != ScaleForm::log) throw std::invalid_argument("log_scaled: prediction must be a log limit");
    return log_scaled(estimate, t, prediction.t_power, prediction.log_power);
}

}  // namespace lifetime
