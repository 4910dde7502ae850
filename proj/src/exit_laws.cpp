#include "lifetime/exit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "lifetime/quadrature.hpp"

namespace lifetime {

using std::numbers::pi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRelStop = 1e-17;
constexpr int kMaxTerms = 2000;

double upper_tail(double y) { return 0.5 * std::erfc(y / std::numbers::sqrt2); }

void check_position(double x)
{
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("starting point must lie in (0, 1)");
}

// Distance to the nearer endpoint, computed without rounding for x >= ½.
double reduce(double x) { return x <= 0.5 ? x : 1.0 - x; }

// Spectral survival factored as (4/π) e^{-π²s/2} · sum.
struct Factored {
    double sum;
    double rel_bound;  // bound on the dropped tail, relative to sin(πm)
    int terms;
};

Factored spectral_survival_sum(double m, double s)
{
    const double c = pi * pi * s / 2.0;
    double sum = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        const double k = 2.0 * n + 1.0;
        sum += std::exp(-(k * k - 1.0) * c) * std::sin(k * pi * m) / k;
        const double kn = k + 2.0;
        const double ratio = std::exp(-(8.0 * (n + 1) + 8.0) * c);
        const double tail = std::exp(-(kn * kn - 1.0) * c) / (1.0 - ratio);
        if (tail <= kRelStop) return {sum, tail, n + 1};
    }
    return {sum, 0.0, kMaxTerms};
}

Factored spectral_density_sum(double m, double s)
{
    const double c = pi * pi * s / 2.0;
    double sum = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        const double k = 2.0 * n + 1.0;
        sum += k * std::exp(-(k * k - 1.0) * c) * std::sin(k * pi * m);
        const double kn = k + 2.0;
        const double ratio = std::pow((kn + 2.0) / kn, 2) * std::exp(-(8.0 * (n + 1) + 8.0) * c);
        const double tail = kn * kn * std::exp(-(kn * kn - 1.0) * c) / (1.0 - ratio);
        if (ratio < 1.0 && tail <= kRelStop) return {sum, tail, n + 1};
    }
    return {sum, 0.0, kMaxTerms};
}

// P(|σZ - j| < m) for j >= 1, m <= ½.
double window_mass(double j, double m, double sigma)
{
    return upper_tail((j - m) / sigma) - upper_tail((j + m) / sigma);
}

// Image series: S = G(0) + 2 Σ_{j>=1} (-1)^j G(j), alternating and decreasing.
struct ImageEval {
    double survival;
    double cdf;
    double bound;
    int terms;
};

ImageEval image_survival(double m, double s)
{
    const double sigma = std::sqrt(s);
    const double a = m / (sigma * std::numbers::sqrt2);
    double alt = 0.0;  // 2 Σ (-1)^j G(j)
    int j = 1;
    double bound = 0.0;
    for (; j < kMaxTerms; ++j) {
        const double term = 2.0 * window_mass(j, m, sigma);
        alt += (j % 2 == 0) ? term : -term;
        bound = 2.0 * upper_tail((j + 1 - m) / sigma);
        if (bound <= kRelStop * std::erf(a) || bound == 0.0) break;
    }
    return {std::erf(a) + alt, std::erfc(a) - alt, bound, j + 1};
}

// Bracket of the image-series density after factoring e^{-m²/(2s)}/(2 s^{3/2} √(2π)).
double image_density_bracket(double m, double s, double* bound)
{
    double acc = 2.0 * m;
    const double m2 = m * m;
    for (int j = 1; j < kMaxTerms; ++j) {
        const double jp = j + m, jm = j - m;
        const double piece = jp * std::exp(-(jp * jp - m2) / (2 * s)) - jm * std::exp(-(jm * jm - m2) / (2 * s));
        acc += (j % 2 == 0) ? 2.0 * piece : -2.0 * piece;
        const double next = j + 1.0 - m;
        const double b = 4.0 * (next + 1.0) * std::exp(-(next * next - m2) / (2 * s));
        if (b <= kRelStop * acc || b == 0.0) {
            if (bound) *bound = b;
            break;
        }
    }
    return acc;
}

double log_survival_reduced(double m, double s)
{
    if (s == 0.0) return 0.0;
    if (s >= kSpectralCrossover) {
        const Factored f = spectral_survival_sum(m, s);
        return std::log(4.0 / pi) - pi * pi * s / 2.0 + std::log(f.sum);
    }
    const ImageEval e = image_survival(m, s);
    if (e.cdf < 0.5) return std::log1p(-e.cdf);
    return std::log(e.survival);
}

double log_density_reduced(double m, double s)
{
    if (s == 0.0) return kNegInf;
    if (s >= kSpectralCrossover) {
        const Factored f = spectral_density_sum(m, s);
        return std::log(2.0 * pi) - pi * pi * s / 2.0 + std::log(f.sum);
    }
    const double bracket = image_density_bracket(m, s, nullptr);
    const double lead = -m * m / (2 * s);
    if (lead == kNegInf) return kNegInf;
    return lead - 1.5 * std::log(s) - 0.5 * std::log(8.0 * pi) + std::log(bracket);
}

void check_interior(const SpectralDomain& domain, std::span<const double> z)
{
    if (!domain.contains(z)) throw std::invalid_argument("point must lie strictly inside the domain");
}

// Clamp a probability per the benign-excursion rule.
double clamp_probability(double p, double tol)
{
    if (p >= 0.0 && p <= 1.0) return p;
    if (p < 0.0 && p >= -tol) return 0.0;
    if (p > 1.0 && p <= 1.0 + tol) return 1.0;
    throw std::runtime_error("probability " + std::to_string(p) + " outside [0,1] beyond tolerance");
}

}  // namespace

SeriesEvaluation interval_survival(double x, double s, double tol)
{
    check_position(x);
    if (!(s > 0.0)) throw std::invalid_argument("interval_survival: time must be positive");
    const double m = reduce(x);
    SeriesEvaluation out;
    double v;
    if (s >= kSpectralCrossover) {
        const Factored f = spectral_survival_sum(m, s);
        const double lead = 4.0 / pi * std::exp(-pi * pi * s / 2.0);
        v = lead * f.sum;
        out.truncation_bound = lead * f.rel_bound * std::sin(pi * m);
        out.terms_used = f.terms;
    } else {
        const ImageEval e = image_survival(m, s);
        v = e.survival;
        out.truncation_bound = e.bound;
        out.terms_used = e.terms;
    }
    out.value = clamp_probability(v, std::max(tol, out.truncation_bound) + 1e-14);
    return out;
}

double interval_exit_cdf(double x, double s)
{
    check_position(x);
    if (s <= 0.0) return 0.0;
    const double m = reduce(x);
    if (s >= kSpectralCrossover) return 1.0 - std::exp(log_survival_reduced(m, s));
    return image_survival(m, s).cdf;
}

double log_interval_survival(double x, double s)
{
    check_position(x);
    if (s < 0.0) throw std::invalid_argument("log_interval_survival: negative time");
    return log_survival_reduced(reduce(x), s);
}

double log_interval_survival_excess(double x, double s)
{
    check_position(x);
    if (s < 0.0) throw std::invalid_argument("log_interval_survival_excess: negative time");
    const double m = reduce(x);
    if (s >= kSpectralCrossover) return std::log(4.0 / pi) + std::log(spectral_survival_sum(m, s).sum);
    return log_survival_reduced(m, s) + pi * pi * s / 2.0;
}

double log_interval_exit_density(double x, double s)
{
    check_position(x);
    if (s < 0.0) throw std::invalid_argument("log_interval_exit_density: negative time");
    return log_density_reduced(reduce(x), s);
}

double interval_exit_density(double x, double s) { return std::exp(log_interval_exit_density(x, s)); }

SeriesEvaluation eta_survival(double u, double v, double t)
{
    if (!(u > 0.0 && v > 0.0)) throw std::invalid_argument("eta_survival: interval ends must be positive");
    if (t < 0.0) throw std::invalid_argument("eta_survival: negative time");
    if (t == 0.0) return {1.0, 0.0, 0};
    const double w = u + v;
    return interval_survival(u / w, t / (w * w));
}

double log_eta_survival(double u, double v, double t)
{
    if (!(u > 0.0 && v > 0.0)) throw std::invalid_argument("log_eta_survival: interval ends must be positive");
    if (t < 0.0) throw std::invalid_argument("log_eta_survival: negative time");
    const double w = u + v;
    return log_survival_reduced(std::min(u, v) / w, t / (w * w));
}

double log_sym_eta_density_du(double u, double t)
{
    if (!(u > 0.0 && t > 0.0)) throw std::invalid_argument("sym_eta_density_du: need u, t > 0");
    const double s = t / (4.0 * u * u);
    return std::log(t / 2.0) - 3.0 * std::log(u) + log_density_reduced(0.5, s);
}

double sym_eta_density_du(double u, double t) { return std::exp(log_sym_eta_density_du(u, t)); }

double bm_validity_threshold(const SpectralDomain& domain)
{
    const double L = domain.min_side();
    return 0.05 * L * L;
}

namespace {

// Per-axis partial sums and tail bounds for the truncated eigen series.
struct AxisSums {
    double surv, surv_tail;        // Σ_{k<=K} e^{-λ_k t} ψ_k(z) ∫ψ_k and tail bound
    double dens, dens_tail;        // Σ λ_k e^{-λ_k t} ψ_k(z) ∫ψ_k and tail bound
};

AxisSums axis_sums(const Interval& side, int K, double z, double t)
{
    AxisSums a{};
    for (int k = 1; k <= K; ++k) {
        const double lam = interval_eigenvalue(side, k);
        const double term = std::exp(-lam * t) * interval_eigenfunction(side, k, z) *
                            interval_eigenfunction_integral(side, k);
        a.surv += term;
        a.dens += lam * term;
    }
    const double L = side.length();
    const double c = pi * pi * t / (2 * L * L);
    const double k1 = K + 1.0;
    const double ratio = std::exp(-(2 * k1 + 1) * c);
    a.surv_tail = 4.0 / (k1 * pi) * std::exp(-k1 * k1 * c) / (1.0 - ratio);
    const double ratio_d = ratio * std::pow((k1 + 1) / k1, 2);
    a.dens_tail = ratio_d < 1.0 ? k1 * k1 * pi * pi / (2 * L * L) * 4.0 / (k1 * pi) * std::exp(-k1 * k1 * c) /
                                      (1.0 - ratio_d)
                                : std::numeric_limits<double>::infinity();
    return a;
}

void check_window(const SpectralDomain& domain, double t)
{
    if (t < bm_validity_threshold(domain))
        throw OutOfValidityWindow("eigenfunction series requested at t = " + std::to_string(t) +
                                  " below its validity window t >= " + std::to_string(bm_validity_threshold(domain)));
}

}  // namespace

SeriesEvaluation bm_exit_cdf(const SpectralDomain& domain, std::span<const double> z, double t)
{
    check_interior(domain, z);
    check_window(domain, t);
    double survival = 0.0;
    for (const Mode& m : domain.modes()) survival += std::exp(-m.eigenvalue * t) * domain.eigenfunction(m, z) * m.integral;

    double with_tail = 1.0, without = 1.0;
    for (std::size_t i = 0; i < domain.dimension(); ++i) {
        const AxisSums a = axis_sums(domain.sides()[i], domain.modes_per_axis(), z[i], t);
        with_tail *= std::abs(a.surv) + a.surv_tail;
        without *= std::abs(a.surv);
    }
    SeriesEvaluation out;
    out.truncation_bound = with_tail - without;
    out.terms_used = static_cast<int>(domain.modes().size());
    out.value = clamp_probability(1.0 - survival, out.truncation_bound + 1e-12);
    return out;
}

SeriesEvaluation bm_exit_density(const SpectralDomain& domain, std::span<const double> z, double t)
{
    check_interior(domain, z);
    check_window(domain, t);
    double f = 0.0;
    for (const Mode& m : domain.modes())
        f += m.eigenvalue * std::exp(-m.eigenvalue * t) * domain.eigenfunction(m, z) * m.integral;

    std::vector<AxisSums> axes;
    for (std::size_t i = 0; i < domain.dimension(); ++i)
        axes.push_back(axis_sums(domain.sides()[i], domain.modes_per_axis(), z[i], t));
    double bound = 0.0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        double others_with = 1.0, others_without = 1.0;
        for (std::size_t j = 0; j < axes.size(); ++j) {
            if (j == i) continue;
            others_with *= std::abs(axes[j].surv) + axes[j].surv_tail;
            others_without *= std::abs(axes[j].surv);
        }
        bound += axes[i].dens_tail * others_with + std::abs(axes[i].dens) * (others_with - others_without);
    }
    SeriesEvaluation out;
    out.truncation_bound = bound;
    out.terms_used = static_cast<int>(domain.modes().size());
    if (f < 0.0 && f >= -(bound + 1e-12)) f = 0.0;
    out.value = f;
    return out;
}

double log_domain_survival(const SpectralDomain& domain, std::span<const double> z, double t)
{
    check_interior(domain, z);
    if (t < 0.0) throw std::invalid_argument("log_domain_survival: negative time");
    double acc = 0.0;
    for (std::size_t i = 0; i < domain.dimension(); ++i) {
        const Interval& side = domain.sides()[i];
        const double L = side.length();
        acc += log_interval_survival((z[i] - side.a) / L, t / (L * L));
    }
    return acc;
}

double log_domain_exit_density(const SpectralDomain& domain, std::span<const double> z, double t)
{
    check_interior(domain, z);
    if (t < 0.0) throw std::invalid_argument("log_domain_exit_density: negative time");
    if (t == 0.0) return kNegInf;
    const std::size_t d = domain.dimension();
    std::vector<double> log_s(d), log_f(d);
    double total_s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const Interval& side = domain.sides()[i];
        const double L = side.length();
        const double x = (z[i] - side.a) / L;
        log_s[i] = log_interval_survival(x, t / (L * L));
        log_f[i] = log_interval_exit_density(x, t / (L * L)) - 2.0 * std::log(L);
        total_s += log_s[i];
    }
    std::vector<double> parts(d);
    for (std::size_t i = 0; i < d; ++i) parts[i] = log_f[i] + (total_s - log_s[i]);
    return log_sum_exp(parts);
}

}  // namespace lifetime
