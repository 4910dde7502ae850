#include "lifetime/predictors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lifetime {

using std::numbers::pi;

namespace {

std::string fmt_power(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

AsymptoticPrediction log_prediction(std::string tag, std::string process, double t_power, double log_power,
                                    double rate, BoundKind bound)
{
    AsymptoticPrediction p;
    p.tag = std::move(tag);
    p.process = std::move(process);
    p.form = ScaleForm::log;
    p.t_power = t_power;
    p.log_power = log_power;
    p.rate = rate;
    p.bound = bound;
    return p;
}

}  // namespace

std::string AsymptoticPrediction::scale_description() const
{
    std::string s;
    if (form == ScaleForm::log) {
        if (t_power != 0) s += "t^-" + fmt_power(t_power) + " ";
        if (log_power != 0) s += "(log t)^" + fmt_power(log_power) + " ";
        return s + "log P";
    }
    if (prefactor_power != 0) s += "t^-" + fmt_power(prefactor_power) + " ";
    return s + "exp(" + fmt_power(-rate) + " t^" + fmt_power(t_power) + ") P";
}

std::string to_string(BoundKind b)
{
    switch (b) {
    case BoundKind::limit: return "limit";
    case BoundKind::lower: return "lower";
    case BoundKind::upper: return "upper";
    }
    return "unknown";
}

std::string to_string(ScaleForm f) { return f == ScaleForm::log ? "log" : "sharp"; }

double ibm_prefactor(double lambda_d) { return lambda_d * std::pow(2.0, 3.5) / std::sqrt(3.0 * pi); }

double ibm_rate(double lambda_d) { return 1.5 * std::cbrt(pi * pi) * std::cbrt(lambda_d * lambda_d); }

double ibm_constant(double lambda_d, double psi_times_integral)
{
    return ibm_prefactor(lambda_d) * psi_times_integral * psi_times_integral;
}

PrefactorBracket ibm_prefactor_bracket(double lambda_d)
{
    const double base = lambda_d * std::sqrt(2.0 * pi / 3.0);
    return {2.0 * base, ibm_prefactor(lambda_d), pi * base};
}

BoundedPredictions predict_bounded(const SpectralDomain& domain, std::span<const double> z)
{
    const Principal pr = principal(domain, z);
    const double weight = pr.psi * pr.psi_integral;
    BoundedPredictions out;

    out.bm.tag = "bounded.bm";
    out.bm.process = "bm";
    out.bm.form = ScaleForm::sharp;
    out.bm.t_power = 1.0;
    out.bm.rate = -pr.lambda;
    out.bm.prefactor_constant = weight;
    out.bm.sharp = true;

    out.ibm_log = log_prediction("bounded.ibm_log", "ibm", 1.0 / 3.0, 0.0, -ibm_rate(pr.lambda), BoundKind::limit);

    out.ibm_sharp.tag = "bounded.ibm_sharp";
    out.ibm_sharp.process = "ibm";
    out.ibm_sharp.form = ScaleForm::sharp;
    out.ibm_sharp.t_power = 1.0 / 3.0;
    out.ibm_sharp.prefactor_power = 0.5;
    out.ibm_sharp.rate = -ibm_rate(pr.lambda);
    out.ibm_sharp.prefactor_constant = ibm_constant(pr.lambda, weight);
    out.ibm_sharp.sharp = true;
    return out;
}

namespace {

void check_twisted(const TwistedParams& t)
{
    if (!(t.p > 0.0 && t.p <= 1.0)) throw std::invalid_argument("twisted domain: p must lie in (0,1]");
    if (!(t.gamma > 0.0)) throw std::invalid_argument("twisted domain: gamma must be positive");
}

}  // namespace

double twisted_cp(double p)
{
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("twisted constant: p must lie in (0,1)");
    const double log_inner = (2.0 + p) * std::log(pi) - p * std::log(8.0) - 2.0 * p * std::log(p) -
                             (1.0 - p) * std::log1p(-p) +
                             2.0 * p * (std::lgamma((1.0 - p) / (2.0 * p)) - std::lgamma(1.0 / (2.0 * p)));
    return (1.0 + p) * std::exp(log_inner / (p + 1.0));
}

double twisted_l1(double gamma, double p)
{
    check_twisted({gamma, p});
    if (p == 1.0) throw std::invalid_argument("twisted constant: p must lie in (0,1)");
    const double log_base = (2.0 * p - 1.0) * std::log(pi) - std::log(gamma) - 2.0 * p * std::log(2.0) -
                            2.0 * p * std::log1p(-p);
    return std::exp(2.0 / (p + 1.0) * log_base) * twisted_cp(p);
}

double twisted_c_gamma(double gamma)
{
    if (!(gamma > 0.0)) throw std::invalid_argument("twisted domain: gamma must be positive");
    return pi / (4.0 * std::acos(1.0 / std::sqrt(1.0 + gamma * gamma)));
}

double twisted_btbm_factor(double p) { return std::pow(2.0, (2.0 * p - 2.0) / (3.0 + p)); }

TwistedPredictions predict_twisted(const TwistedParams& params)
{
    check_twisted(params);
    const double p = params.p;
    TwistedPredictions out;
    if (p < 1.0) {
        const double l1 = twisted_l1(params.gamma, p);
        const double q = (1.0 - p) / (3.0 + p);
        const double ibm = -(3.0 + p) / (2.0 + 2.0 * p) * std::pow((1.0 + p) / (1.0 - p), q) *
                           std::pow(pi, (2.0 - 2.0 * p) / (3.0 + p)) * std::pow(l1, (2.0 + 2.0 * p) / (3.0 + p));
        out.bm = log_prediction("twisted.bm", "bm", (1.0 - p) / (1.0 + p), 0.0, -l1, BoundKind::limit);
        out.ibm = log_prediction("twisted.ibm", "ibm", q, 0.0, ibm, BoundKind::limit);
        out.btbm = log_prediction("twisted.btbm", "btbm", q, 0.0, twisted_btbm_factor(p) * ibm, BoundKind::limit);
        return out;
    }
    const double c = twisted_c_gamma(params.gamma);
    out.bm = log_prediction("twisted.bm", "bm", 0.0, -1.0, -c, BoundKind::limit);
    out.btbm = log_prediction("twisted.btbm", "btbm", 0.0, -1.0, -c / 2.0, BoundKind::limit);
    out.ibm = log_prediction("twisted.ibm", "ibm", 0.0, -1.0, -c / 2.0, BoundKind::upper);
    return out;
}

double parabola_exp_constant(double p, double j_squared)
{
    if (!(p > 0.0)) throw std::invalid_argument("parabola region: p must be positive");
    return std::pow(1.5, (4.0 + 3.0 * p) / (3.0 * p)) * std::cbrt(2.0) *
           std::pow(j_squared * std::pow(2.0, 2.0 / p), 2.0 / 3.0) * std::cbrt(pi * pi / 8.0);
}

AlgebraicConstants algebraic_bm_constants(double A, double alpha, double beta, double j2)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("parabola region: alpha must lie in (0,1)");
    if (!(A > 0.0)) throw std::invalid_argument("parabola region: A must be positive");
    const double e = 1.0 / (1.0 + alpha);
    AlgebraicConstants c;
    c.c1 = 0.5 / (1.0 - alpha) *
           std::pow(std::pow(alpha, -alpha) * std::pow(1.0 + alpha, 2.0 * beta + 2.0) * j2 / (A * A), e);
    const double C = std::pow(2.0, 2.0 * beta - 1.0) * j2 / ((1.0 - alpha) * A * A);
    c.c2 = (1.0 + alpha) * std::pow(2.0 * alpha, -alpha * e) * std::pow(0.5 * (1.0 + alpha), 2.0 * beta * e) *
           std::pow(C, e);
    return c;
}

double algebraic_btbm_constant(double c, double alpha, double beta)
{
    const double s = 3.0 + alpha;
    return std::pow(s / (2.0 * (1.0 + alpha)), (s + 4.0 * beta) / s) * ((1.0 - alpha) / s) *
           std::pow(pi * pi / 8.0, (1.0 - alpha) / s) * std::pow(c, 2.0 * (1.0 + alpha) / s) *
           std::pow(2.0, 4.0 * beta / s);
}

ParabolaPredictions predict_parabola(const ParabolaParams& params)
{
    if (!(params.nu >= 0.0)) throw std::invalid_argument("parabola region: nu must be non-negative");
    const double j = bessel_zero(params.nu);
    const double j2 = j * j;
    ParabolaPredictions out;
    if (params.variant == ParabolaVariant::exp_power) {
        const double p = params.p;
        if (!(p > 0.0)) throw std::invalid_argument("parabola region: p must be positive");
        const double cp = parabola_exp_constant(p, j2);
        out.bm_lower = log_prediction("parabola.bm", "bm", 1.0, 2.0 / p, -j2, BoundKind::limit);
        out.bm_upper = out.bm_lower;
        out.btbm_lower = log_prediction("parabola.btbm", "btbm", 1.0 / 3.0, 4.0 / (3.0 * p), -cp, BoundKind::limit);
        out.btbm_upper = out.btbm_lower;
        out.ibm_upper = log_prediction("parabola.ibm", "ibm", 1.0 / 3.0, 4.0 / (3.0 * p), -cp, BoundKind::upper);
        return out;
    }
    const double a = params.alpha, b = params.beta;
    const AlgebraicConstants bm = algebraic_bm_constants(params.A, a, b, j2);
    const double tp = (1.0 - a) / (1.0 + a), lp = 2.0 * b / (1.0 + a);
    out.bm_lower = log_prediction("parabola_alg.bm_lower", "bm", tp, lp, -bm.c1, BoundKind::lower);
    out.bm_upper = log_prediction("parabola_alg.bm_upper", "bm", tp, lp, -bm.c2, BoundKind::upper);
    const double tq = (1.0 - a) / (3.0 + a), lq = 4.0 * b * (1.0 + a) / (3.0 + a);
    out.btbm_lower = log_prediction("parabola_alg.btbm_lower", "btbm", tq, lq,
                                    -algebraic_btbm_constant(bm.c1, a, b), BoundKind::lower);
    out.btbm_upper = log_prediction("parabola_alg.btbm_upper", "btbm", tq, lq,
                                    -algebraic_btbm_constant(bm.c2, a, b), BoundKind::upper);
    out.ibm_upper = out.btbm_upper;
    out.ibm_upper.tag = "parabola_alg.ibm_upper";
    out.ibm_upper.process = "ibm";
    return out;
}

double bessel_j_series(double nu, double x)
{
    if (!(nu >= 0.0)) throw std::invalid_argument("bessel: nu must be non-negative");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    // J_ν(x) = (x/2)^ν Σ_m (-x²/4)^m / (m! Γ(m+ν+1))
    const long double q = -static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
    long double sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= q / (static_cast<long double>(m) * (m + nu));
        sum += term;
        if (std::fabs(term) < 1e-21L * std::fabs(sum) && m > x) break;
    }
    return static_cast<double>(sum * std::pow(static_cast<long double>(x) / 2.0L, static_cast<long double>(nu)));
}

double bessel_zero(double nu)
{
    if (!(nu >= 0.0 && nu <= 50.0)) throw std::invalid_argument("bessel_zero: nu must lie in [0, 50]");
    const double step = 0.1;
    double a = step, fa = bessel_j_series(nu, a);
    for (;;) {
        const double b = a + step, fb = bessel_j_series(nu, b);
        if (fa == 0.0) return a;
        if ((fa > 0) != (fb > 0) || fb == 0.0) {
            double lo = a, hi = b, flo = fa;
            while (hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi) {
                const double mid = 0.5 * (lo + hi), fm = bessel_j_series(nu, mid);
                if (fm == 0.0) return mid;
                if ((fm > 0) == (flo > 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        a = b;
        fa = fb;
    }
}

}  // namespace lifetime
