#pragma once

// Closed-form lifetime asymptotics for Brownian motion, iterated Brownian
// motion (IBM) and Brownian-time Brownian motion (BTBM).
//
// Two scale forms are used:
//   log:    t^{-t_power} (log t)^{log_power} log P  →  rate
//   sharp:  t^{-prefactor_power} exp(-rate t^{t_power}) P  →  prefactor_constant

#include <optional>
#include <span>
#include <string>

#include "lifetime/domain_spectra.hpp"

namespace lifetime {

enum class ScaleForm { log, sharp };
enum class BoundKind { limit, lower, upper };

struct AsymptoticPrediction {
    std::string tag;
    std::string process;  ///< "bm", "ibm" or "btbm"
    ScaleForm form = ScaleForm::log;
    double t_power = 0.0;
    double log_power = 0.0;
    double rate = 0.0;
    double prefactor_power = 0.0;
    std::optional<double> prefactor_constant;
    BoundKind bound = BoundKind::limit;
    bool sharp = false;

    /// Text form of the scaled quantity, e.g. "t^-1/3 log P".
    std::string scale_description() const;
};

std::string to_string(BoundKind b);
std::string to_string(ScaleForm f);

struct BoundedPredictions {
    AsymptoticPrediction bm, ibm_log, ibm_sharp;
};

/// Prefactor λ_D 2^{7/2}/√(3π) multiplying (ψ(z)∫ψ)².
double ibm_prefactor(double lambda_d);
/// (3/2) π^{2/3} λ_D^{2/3}.
double ibm_rate(double lambda_d);
/// λ_D 2^{7/2}/√(3π) (ψ(z)∫ψ)².
double ibm_constant(double lambda_d, double psi_times_integral);

/// Earlier bracket of the prefactor: 2 λ√(2π/3) and π λ√(2π/3).
struct PrefactorBracket {
    double lower, value, upper;
};
PrefactorBracket ibm_prefactor_bracket(double lambda_d);

BoundedPredictions predict_bounded(const SpectralDomain& domain, std::span<const double> z);

struct TwistedParams {
    double gamma = 1.0;
    double p = 1.0;
};

struct TwistedPredictions {
    AsymptoticPrediction bm, ibm, btbm;
};

double twisted_cp(double p);
double twisted_l1(double gamma, double p);
/// π [4 arccos(1/√(1+γ²))]^{-1}.
double twisted_c_gamma(double gamma);
/// Factor between the BTBM and IBM rates for p < 1: 2^{(2p-2)/(3+p)}.
double twisted_btbm_factor(double p);

TwistedPredictions predict_twisted(const TwistedParams& params);

enum class ParabolaVariant { exp_power, algebraic };

struct ParabolaParams {
    ParabolaVariant variant = ParabolaVariant::exp_power;
    double p = 1.0;      ///< exp_power: f(x) = exp(|x|^p)
    double A = 1.0;      ///< algebraic: h^{-1}(x) = A x^α (log x)^β
    double alpha = 0.5;
    double beta = 0.0;
    double nu = 0.0;     ///< (n-2)/2
};

struct ParabolaPredictions {
    AsymptoticPrediction bm_lower, bm_upper, btbm_lower, btbm_upper, ibm_upper;
};

/// (3/2)^{(4+3p)/3p} 2^{1/3} (j² 2^{2/p})^{2/3} (π²/8)^{1/3}.
double parabola_exp_constant(double p, double j_squared);

struct AlgebraicConstants {
    double c1, c2;  ///< Brownian lower/upper constants
};
AlgebraicConstants algebraic_bm_constants(double A, double alpha, double beta, double j_squared);

/// BTBM constant built from a Brownian constant c of the algebraic class.
double algebraic_btbm_constant(double c, double alpha, double beta);

ParabolaPredictions predict_parabola(const ParabolaParams& params);

/// Smallest positive zero of J_ν, 0 <= ν <= 50.
double bessel_zero(double nu);

/// J_ν(x) from the ascending series (long double accumulation).
double bessel_j_series(double nu, double x);

}  // namespace lifetime
