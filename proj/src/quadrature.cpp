#include "lifetime/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace lifetime {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Sample {
    double x;
    double g;
};

}  // namespace

double log_add(double a, double b)
{
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_sum_exp(std::span<const double> values)
{
    double hi = kNegInf;
    for (double v : values) hi = std::max(hi, v);
    if (hi == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

LogQuadrature integrate_log(const LogIntegrand& log_f, double lo, double hi, double center,
                            const LogQuadOptions& options, std::span<const double> breakpoints)
{
    if (!(hi >= lo) || !std::isfinite(lo)) throw std::invalid_argument("integrate_log: need finite lo <= hi");
    LogQuadrature out;
    if (hi == lo) {
        out.log_value = kNegInf;
        return out;
    }

    std::size_t evals = 0;
    auto g = [&](double x) {
        ++evals;
        const double v = log_f(x);
        if (std::isnan(v)) throw std::runtime_error("integrate_log: integrand returned NaN");
        return v;
    };

    const bool finite_hi = std::isfinite(hi);
    if (!(center > lo && center < hi)) center = finite_hi ? 0.5 * (lo + hi) : lo + 1.0;

    // Scan grid: geometric offsets around the centre in both additive and
    // multiplicative form, plus a uniform grid when the range is finite.
    std::vector<double> xs;
    const std::size_t J = std::max<std::size_t>(options.scan_points / 4, 8);
    const double ln10 = std::log(10.0);
    const double step = 12.0 * ln10 / static_cast<double>(J);
    const double scale = std::abs(center) > 0 ? std::abs(center) : 1.0;
    xs.push_back(center);
    for (std::size_t j = 0; j <= J; ++j) {
        const double off = scale * std::exp(-6.0 * ln10 + step * static_cast<double>(j));
        xs.push_back(center + off);
        xs.push_back(center - off);
        if (center > 0 && lo >= 0) xs.push_back(center * std::exp(-step * static_cast<double>(j)));
    }
    if (finite_hi) {
        const std::size_t n = std::max<std::size_t>(options.scan_points / 2, 8);
        for (std::size_t i = 0; i < n; ++i)
            xs.push_back(lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    }
    std::erase_if(xs, [&](double x) { return !(x > lo && x < hi); });
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<Sample> samples;
    samples.reserve(xs.size());
    for (double x : xs) samples.push_back({x, g(x)});

    auto best = std::max_element(samples.begin(), samples.end(),
                                 [](const Sample& a, const Sample& b) { return a.g < b.g; });
    if (best == samples.end() || best->g == kNegInf) {
        out.log_value = kNegInf;
        out.evaluations = evals;
        return out;
    }

    // Refine the peak inside the bracket formed by the neighbouring scan points.
    const std::size_t ib = static_cast<std::size_t>(best - samples.begin());
    const double br_lo = ib > 0 ? samples[ib - 1].x : lo;
    const double br_hi = ib + 1 < samples.size() ? samples[ib + 1].x : (finite_hi ? hi : 2 * best->x - lo);
    auto neg = [&](double x) { return -g(x); };
    auto [x_peak, neg_peak] = boost::math::tools::brent_find_minima(neg, br_lo, br_hi, 50);
    double peak = -neg_peak;
    if (best->g > peak) {
        x_peak = best->x;
        peak = best->g;
    }

    // Curvature scale of the peak.
    double sigma = (br_hi - br_lo) / 4.0;
    for (int pass = 0; pass < 2; ++pass) {
        const double h = std::max(sigma / 8.0, 1e-7 * std::max(std::abs(x_peak), 1e-300));
        if (x_peak - h <= lo || (finite_hi && x_peak + h >= hi)) break;
        const double g2 = (g(x_peak + h) - 2 * peak + g(x_peak - h)) / (h * h);
        if (!(g2 < 0) || !std::isfinite(g2)) break;
        sigma = 1.0 / std::sqrt(-g2);
    }

    // Retained support.
    const double floor_g = peak - options.drop;
    std::size_t first = samples.size(), last = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].g > floor_g) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == samples.size()) first = last = ib;
    double left = first > 0 ? samples[first - 1].x : lo;
    double right = last + 1 < samples.size() ? samples[last + 1].x : hi;
    bool closed = true;
    if (!std::isfinite(right)) {
        // The scan never dropped below the floor on the upper side.
        right = samples.back().x;
        closed = false;
    }
    left = std::min(left, x_peak);
    right = std::max(right, x_peak);
    if (left > lo) left = std::max(lo, x_peak - (x_peak - left) * options.truncation_scale);
    if (right < hi) right = std::min(hi, x_peak + (right - x_peak) * options.truncation_scale);

    std::vector<double> cuts{left, right, x_peak};
    for (int k = 0; k < 24; ++k) {
        const double d = sigma * std::ldexp(1.0, k);
        cuts.push_back(x_peak - d);
        cuts.push_back(x_peak + d);
    }
    for (double b : breakpoints) cuts.push_back(b);
    std::erase_if(cuts, [&](double x) { return !(x >= left && x <= right); });
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> panels;
    for (double c : cuts) {
        if (panels.empty() || c - panels.back() > 1e-13 * std::max(std::abs(c), 1e-300)) panels.push_back(c);
    }
    if (panels.size() < 2) panels = {left, right};

    // exp(g - peak) carries a relative rounding error of about ε·|g|.
    const double noise = 32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(peak));
    const double tol = std::max(options.rel_tol, noise);

    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto scaled = [&](double x) { return std::exp(g(x) - peak); };
    double total = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
        // Map each panel onto [-1, 1]: the recursive error estimate is not
        // rescaled by the panel width in this Boost version.
        const double mid = 0.5 * (panels[i] + panels[i + 1]), half = 0.5 * (panels[i + 1] - panels[i]);
        double err = 0.0, l1 = 0.0;
        const double v = half * GK::integrate([&](double s) { return scaled(mid + half * s); }, -1.0, 1.0,
                                              options.max_depth, tol, &err, &l1);
        err *= half;
        total += v;
        error += err;
    }
    const double dropped = std::exp(-options.drop) * (right - left);
    out.evaluations = evals;
    if (!(total > 0)) {
        out.log_value = kNegInf;
        return out;
    }
    out.log_value = peak + std::log(total);
    out.rel_error = (error + dropped) / total + noise;
    out.converged = closed && out.rel_error <= std::max(100 * tol, 1e-9);
    return out;
}

}  // namespace lifetime
