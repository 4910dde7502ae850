#pragma once

// Survival of IBM and BTBM as integrals of inner-clock exit laws against
// outer exit-time laws, evaluated in log space.
//
//   IBM:   P_z[τ_D(Z) > t]  = ∫∫ P_0[η(-u,v) > t] f(u) f(v) du dv
//   BTBM:  P_z[τ_D(Z¹) > t] = ∫ P_0[η(-u,u) > t] f(u) du
//                           = ∫ (d/du P_0[η(-u,u) > t]) P[τ > u] du

#include <span>
#include <string>

#include "lifetime/domain_spectra.hpp"
#include "lifetime/predictors.hpp"

namespace lifetime {

struct Estimate {
    double log_value = 0.0;
    double abs_error_log = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

enum class TailKind { exponential, polynomial, stretched_log, algebraic_log, point_mass };

/// Outer exit tail P[τ > u]; equal to 1 below the splice point u₀.
struct TailLaw {
    TailKind kind = TailKind::polynomial;
    double A = 1.0;       ///< exponential: density ~ A e^{-λu}
    double lambda = 1.0;  ///< exponential
    double C = 1.0;       ///< polynomial / stretched_log / algebraic_log
    double p = 1.0;       ///< stretched_log
    double alpha = 0.5;   ///< algebraic_log
    double beta = 0.0;    ///< algebraic_log
    double u0 = -1.0;     ///< splice point; negative selects the default for the kind

    static TailLaw exponential(double A, double lambda);
    static TailLaw polynomial(double C);
    static TailLaw stretched_log(double C, double p);
    static TailLaw algebraic_log(double C, double alpha, double beta);
    static TailLaw point_mass(double u0);

    double splice() const;
    /// log P[τ > u].
    double log_tail(double u) const;
    void validate() const;
};

std::string to_string(TailKind kind);

struct SubordinationOptions {
    double rel_tol = 1e-9;
    bool symmetrized = false;      ///< IBM: 2∫∫_{v>u} instead of the full quadrant
    double truncation_scale = 1.0; ///< widen the automatic outer cutoff
};

Estimate ibm_survival(const SpectralDomain& domain, std::span<const double> z, double t,
                      const SubordinationOptions& options = {});

Estimate btbm_survival_density(const SpectralDomain& domain, std::span<const double> z, double t,
                               const SubordinationOptions& options = {});

Estimate btbm_survival_tail(const TailLaw& tail, double t, const SubordinationOptions& options = {});

/// t^{-prefactor_power} exp(-rate t^{t_power}) P for a sharp prediction.
double scaled_ratio(const Estimate& estimate, double t, const AsymptoticPrediction& prediction);

/// t^{-a} (log t)^b log P. Requires t > e.
double log_scaled(const Estimate& estimate, double t, double power_a, double log_power_b);

/// log_scaled with the powers of a log-form prediction.
double log_scaled(const Estimate& estimate, double t, const AsymptoticPrediction& prediction);

}  // namespace lifetime
