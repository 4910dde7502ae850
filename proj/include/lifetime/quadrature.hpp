#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lifetime {

/// Result of a quadrature carried out on the logarithm of a positive integrand.
///
/// `log_value` is the natural log of the integral (-inf when the integral is
/// exactly zero); `rel_error` bounds |I_computed - I| / I and is therefore also
/// an absolute bound on the error of `log_value` to first order.
struct LogQuadrature {
    double log_value = 0.0;
    double rel_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

struct LogQuadOptions {
    double rel_tol = 1e-11;
    unsigned max_depth = 12;
    /// Region where log f lies more than `drop` below its peak is treated as
    /// negligible; the dropped mass is folded into the error estimate.
    double drop = 60.0;
    /// Multiplies the width of the retained support on the side(s) that are
    /// truncated (the upper side for semi-infinite ranges).
    double truncation_scale = 1.0;
    std::size_t scan_points = 160;
};

using LogIntegrand = std::function<double(double)>;

/// Computes log ∫_lo^hi exp(log_f(x)) dx.
///
/// `hi` may be +infinity. The integrand is scanned on a mixed linear and
/// geometric grid around `center`, the peak is refined by golden section,
/// and the retained support is split into panels at the scan points and at
/// peak ± 2^k σ so that narrow peaks are always resolved. Each panel is
/// integrated with adaptive Gauss–Kronrod on exp(log_f − peak), so values far
/// below the double-precision underflow threshold are representable.
/// `breakpoints` are added verbatim (use them for jumps in the integrand).
LogQuadrature integrate_log(const LogIntegrand& log_f, double lo, double hi, double center,
                            const LogQuadOptions& options = {},
                            std::span<const double> breakpoints = {});

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

/// log Σ exp(v_i); -inf for an empty span.
double log_sum_exp(std::span<const double> values);

}  // namespace lifetime
