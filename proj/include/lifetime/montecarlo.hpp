#pragma once

// Exact-in-law exit-time samplers and Monte Carlo survival estimates.
//
// Randomness is counter based: the k-th uniform of draw i under seed s is a
// pure function of (s, i, k), so any partition of draws over workers
// reproduces the same sample.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "lifetime/domain_spectra.hpp"

namespace lifetime {

/// Uniforms for one draw.
class DrawStream {
public:
    DrawStream(std::uint64_t seed, std::uint64_t index) : seed_(seed), index_(index) {}

    /// Uniform on (0,1), 53-bit resolution.
    double uniform();
    /// Uniform of an explicit sub-stream; does not advance the stream.
    double uniform_at(std::uint32_t slot) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t index() const { return index_; }

private:
    std::uint64_t seed_, index_;
    std::uint32_t next_ = 0;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Exit time of (0,1) from x for survival level q ∈ (0,1): solves P_x[η > s] = q.
double interval_exit_quantile(double x, double q);

using ExitSampler = std::function<double(DrawStream&)>;

double sample_interval_exit(double x, DrawStream& rng);
double sample_domain_exit(const SpectralDomain& domain, std::span<const double> z, DrawStream& rng);

/// Two independent outer exits τ⁺, τ⁻, then η(-τ⁻, τ⁺) by scaling.
double sample_ibm_exit(const ExitSampler& outer, DrawStream& rng);
double sample_ibm_exit(const SpectralDomain& domain, std::span<const double> z, DrawStream& rng);

/// One outer exit τ, then η(-τ, τ).
double sample_btbm_exit(const ExitSampler& outer, DrawStream& rng);
double sample_btbm_exit(const SpectralDomain& domain, std::span<const double> z, DrawStream& rng);

struct McEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
};

/// Fraction of n draws exceeding t. Draw i uses DrawStream(seed, i); the
/// result is independent of the worker count.
McEstimate estimate_survival(const ExitSampler& sampler, double t, std::uint64_t n, std::uint64_t seed,
                             unsigned workers = 1);

/// One estimate per t from a single set of n draws.
std::vector<McEstimate> estimate_survival(const ExitSampler& sampler, std::span<const double> ts, std::uint64_t n,
                                          std::uint64_t seed, unsigned workers = 1);

/// Draws themselves, in index order.
std::vector<double> sample_many(const ExitSampler& sampler, std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

}  // namespace lifetime
