#include "lifetime/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "lifetime/exit_laws.hpp"

namespace lifetime {

using std::numbers::pi;

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double DrawStream::uniform_at(std::uint32_t slot) const
{
    const std::uint64_t h = mix64(mix64(mix64(seed_) ^ index_) ^ (static_cast<std::uint64_t>(slot) + 0x632be59bd9b4e019ULL));
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double DrawStream::uniform() { return uniform_at(next_++); }

double interval_exit_quantile(double x, double q)
{
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("interval_exit_quantile: x must lie in (0,1)");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("interval_exit_quantile: q must lie in (0,1)");
    const double log_q = std::log(q);
    // Work in y = log s; f(y) = log S(e^y) - log q is decreasing.
    auto f = [&](double y) { return log_interval_survival(x, std::exp(y)) - log_q; };
    double lo = std::log(1e-8), hi = std::log(50.0);
    while (f(lo) < 0.0) {
        hi = lo;
        lo -= std::log(100.0);
        if (lo < -700.0) return std::exp(lo);
    }
    if (f(hi) > 0.0) {
        // Beyond the bracket the one-mode tail is exact to double precision.
        return 2.0 / (pi * pi) * (std::log(4.0 / pi * std::sin(pi * x)) - log_q);
    }
    double guess = 0.5 * (lo + hi);
    const double tail = 2.0 / (pi * pi) * (std::log(4.0 / pi * std::sin(pi * x)) - log_q);
    if (tail > 0.1) guess = std::clamp(std::log(tail), lo, hi);
    auto fd = [&](double y) {
        const double s = std::exp(y);
        const double ls = log_interval_survival(x, s);
        const double ld = log_interval_exit_density(x, s);
        // d/dy log S = -s D/S
        return std::make_pair(ls - log_q, -std::exp(y + ld - ls));
    };
    std::uintmax_t iters = 100;
    const double y = boost::math::tools::newton_raphson_iterate(fd, guess, lo, hi, 50, iters);
    return std::exp(y);
}

double sample_interval_exit(double x, DrawStream& rng) { return interval_exit_quantile(x, rng.uniform()); }

double sample_domain_exit(const SpectralDomain& domain, std::span<const double> z, DrawStream& rng)
{
    if (!domain.contains(z)) throw std::invalid_argument("sample_domain_exit: z must lie strictly inside the domain");
    double tau = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
        const Interval& side = domain.sides()[i];
        const double L = side.length();
        tau = std::min(tau, L * L * sample_interval_exit((z[i] - side.a) / L, rng));
    }
    return tau;
}

double sample_ibm_exit(const ExitSampler& outer, DrawStream& rng)
{
    const double plus = outer(rng);
    const double minus = outer(rng);
    const double w = plus + minus;
    return w * w * sample_interval_exit(minus / w, rng);
}

double sample_btbm_exit(const ExitSampler& outer, DrawStream& rng)
{
    const double tau = outer(rng);
    return 4.0 * tau * tau * sample_interval_exit(0.5, rng);
}

double sample_ibm_exit(const SpectralDomain& domain, std::span<const double> z, DrawStream& rng)
{
    return sample_ibm_exit([&](DrawStream& r) { return sample_domain_exit(domain, z, r); }, rng);
}

double sample_btbm_exit(const SpectralDomain& domain, std::span<const double> z, DrawStream& rng)
{
    return sample_btbm_exit([&](DrawStream& r) { return sample_domain_exit(domain, z, r); }, rng);
}

namespace {

template <class Body>
void for_ranges(std::uint64_t n, unsigned workers, Body body)
{
    workers = std::max(1u, workers);
    if (workers == 1 || n < 2 * workers) {
        body(0, n, 0u);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t b = std::min(n, w * chunk), e = std::min(n, b + chunk);
        pool.emplace_back([=] { body(b, e, w); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<double> sample_many(const ExitSampler& sampler, std::uint64_t n, std::uint64_t seed, unsigned workers)
{
    std::vector<double> out(n);
    for_ranges(n, workers, [&](std::uint64_t b, std::uint64_t e, unsigned) {
        for (std::uint64_t i = b; i < e; ++i) {
            DrawStream rng(seed, i);
            out[i] = sampler(rng);
        }
    });
    return out;
}

std::vector<McEstimate> estimate_survival(const ExitSampler& sampler, std::span<const double> ts, std::uint64_t n,
                                          std::uint64_t seed, unsigned workers)
{
    if (n < 1) throw std::invalid_argument("estimate_survival: n must be at least 1");
    for (double t : ts)
        if (!(t >= 0.0)) throw std::invalid_argument("estimate_survival: times must be non-negative");
    // Integer counts per worker make the reduction exact.
    workers = std::max(1u, workers);
    std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(ts.size(), 0));
    const bool need_draws = std::any_of(ts.begin(), ts.end(), [](double t) { return t > 0.0 && std::isfinite(t); });
    if (need_draws) {
        for_ranges(n, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
            for (std::uint64_t i = b; i < e; ++i) {
                DrawStream rng(seed, i);
                const double tau = sampler(rng);
                for (std::size_t k = 0; k < ts.size(); ++k)
                    if (tau > ts[k]) ++counts[w][k];
            }
        });
    }
    std::vector<McEstimate> out;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        McEstimate m;
        m.n = n;
        m.seed = seed;
        std::uint64_t c = 0;
        for (const auto& wc : counts) c += wc[k];
        if (ts[k] == 0.0) c = n;
        if (std::isinf(ts[k])) c = 0;
        m.p_hat = static_cast<double>(c) / static_cast<double>(n);
        m.std_err = std::sqrt(m.p_hat * (1.0 - m.p_hat) / static_cast<double>(n));
        out.push_back(m);
    }
    return out;
}

McEstimate estimate_survival(const ExitSampler& sampler, double t, std::uint64_t n, std::uint64_t seed,
                             unsigned workers)
{
    const double ts[1] = {t};
    return estimate_survival(sampler, std::span<const double>(ts, 1), n, seed, workers).front();
}

}  // namespace lifetime
