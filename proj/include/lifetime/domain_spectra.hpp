#pragma once

// Bounded domains with closed-form Dirichlet spectra.
//
// Generator convention: the killed process is Brownian motion with generator
// ½Δ, so on (0, L) the eigenvalues are k²π²/(2L²), not k²π²/L². Every
// constant downstream (exit tails, prefactors, rates) inherits this factor.

#include <cstddef>
#include <span>
#include <vector>

namespace lifetime {

struct Interval {
    double a = 0.0;
    double b = 1.0;
    double length() const { return b - a; }
};

using Point = std::vector<double>;

/// One Dirichlet mode of ½Δ. For boxes, `wave_numbers` holds one positive
/// integer per axis and the eigenfunction is the product of the 1-D sines.
struct Mode {
    double eigenvalue = 0.0;
    double integral = 0.0;  ///< ∫_D ψ_k(y) dy
    std::vector<int> wave_numbers;
};

enum class DomainKind { interval, box };

/// Immutable after construction.
class SpectralDomain {
public:
    SpectralDomain(DomainKind kind, std::vector<Interval> sides, int modes_per_axis);

    DomainKind kind() const { return kind_; }
    std::size_t dimension() const { return sides_.size(); }
    std::span<const Interval> sides() const { return sides_; }
    std::span<const Mode> modes() const { return modes_; }
    int modes_per_axis() const { return modes_per_axis_; }
    double min_side() const;

    /// Strictly interior.
    bool contains(std::span<const double> z) const;

    double eigenfunction(std::size_t mode, std::span<const double> z) const;
    double eigenfunction(const Mode& mode, std::span<const double> z) const;

private:
    DomainKind kind_;
    std::vector<Interval> sides_;
    int modes_per_axis_;
    std::vector<Mode> modes_;
};

inline constexpr int kDefaultModes = 64;

/// ½Δ on (a, b) with the first K modes. Throws std::invalid_argument when a >= b or K < 1.
SpectralDomain spectrum_interval(double a, double b, int K = kDefaultModes);

/// Tensor-product box; K modes per axis, modes sorted by total eigenvalue.
SpectralDomain spectrum_box(std::vector<Interval> sides, int K_per_axis = kDefaultModes);

/// 1-D helpers on (a, b), wave number k ≥ 1.
double interval_eigenvalue(const Interval& side, int k);
double interval_eigenfunction(const Interval& side, int k, double x);
double interval_eigenfunction_integral(const Interval& side, int k);

struct Principal {
    double lambda = 0.0;         ///< λ_D
    double psi = 0.0;            ///< ψ(z)
    double psi_integral = 0.0;   ///< ∫_D ψ
    double A = 0.0;              ///< λ_D ψ(z) ∫_D ψ, the exit-density prefactor
};

/// Principal eigendata at an interior point; throws std::invalid_argument otherwise.
Principal principal(const SpectralDomain& domain, std::span<const double> z);

}  // namespace lifetime
