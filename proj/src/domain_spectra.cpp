#include "lifetime/domain_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lifetime {

using std::numbers::pi;

double interval_eigenvalue(const Interval& side, int k)
{
    const double L = side.length();
    return k * k * pi * pi / (2.0 * L * L);
}

double interval_eigenfunction(const Interval& side, int k, double x)
{
    const double L = side.length();
    return std::sqrt(2.0 / L) * std::sin(k * pi * (x - side.a) / L);
}

double interval_eigenfunction_integral(const Interval& side, int k)
{
    if (k % 2 == 0) return 0.0;
    const double L = side.length();
    return std::sqrt(2.0 / L) * 2.0 * L / (k * pi);
}

SpectralDomain::SpectralDomain(DomainKind kind, std::vector<Interval> sides, int modes_per_axis)
    : kind_(kind), sides_(std::move(sides)), modes_per_axis_(modes_per_axis)
{
    if (sides_.empty()) throw std::invalid_argument("spectral domain needs at least one side");
    if (kind_ == DomainKind::interval && sides_.size() != 1)
        throw std::invalid_argument("interval domain must have exactly one side");
    for (const auto& s : sides_) {
        if (!(s.a < s.b) || !std::isfinite(s.a) || !std::isfinite(s.b))
            throw std::invalid_argument("degenerate side: need a < b, got (" + std::to_string(s.a) + ", " +
                                        std::to_string(s.b) + ")");
    }
    if (modes_per_axis_ < 1) throw std::invalid_argument("mode count must be at least 1");

    const std::size_t d = sides_.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        total *= static_cast<std::size_t>(modes_per_axis_);
        if (total > 5'000'000) throw std::invalid_argument("too many modes for box spectrum");
    }
    modes_.reserve(total);
    std::vector<int> idx(d, 1);
    for (std::size_t n = 0; n < total; ++n) {
        Mode m;
        m.wave_numbers = idx;
        m.integral = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            m.eigenvalue += interval_eigenvalue(sides_[i], idx[i]);
            m.integral *= interval_eigenfunction_integral(sides_[i], idx[i]);
        }
        modes_.push_back(std::move(m));
        for (std::size_t i = 0; i < d; ++i) {
            if (++idx[i] <= modes_per_axis_) break;
            idx[i] = 1;
        }
    }
    std::stable_sort(modes_.begin(), modes_.end(),
                     [](const Mode& x, const Mode& y) { return x.eigenvalue < y.eigenvalue; });
}

double SpectralDomain::min_side() const
{
    double m = sides_.front().length();
    for (const auto& s : sides_) m = std::min(m, s.length());
    return m;
}

bool SpectralDomain::contains(std::span<const double> z) const
{
    if (z.size() != sides_.size()) return false;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (!(z[i] > sides_[i].a && z[i] < sides_[i].b)) return false;
    return true;
}

double SpectralDomain::eigenfunction(const Mode& mode, std::span<const double> z) const
{
    if (z.size() != sides_.size()) throw std::invalid_argument("point dimension does not match domain");
    double v = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) v *= interval_eigenfunction(sides_[i], mode.wave_numbers[i], z[i]);
    return v;
}

double SpectralDomain::eigenfunction(std::size_t mode, std::span<const double> z) const
{
    return eigenfunction(modes_.at(mode), z);
}

SpectralDomain spectrum_interval(double a, double b, int K)
{
    if (!(a < b)) throw std::invalid_argument("degenerate interval: need a < b");
    return SpectralDomain(DomainKind::interval, {Interval{a, b}}, K);
}

SpectralDomain spectrum_box(std::vector<Interval> sides, int K_per_axis)
{
    if (sides.empty()) throw std::invalid_argument("box needs at least one side");
    return SpectralDomain(DomainKind::box, std::move(sides), K_per_axis);
}

Principal principal(const SpectralDomain& domain, std::span<const double> z)
{
    if (!domain.contains(z)) throw std::invalid_argument("principal: point must lie strictly inside the domain");
    const Mode& m = domain.modes().front();
    Principal p;
    p.lambda = m.eigenvalue;
    p.psi = domain.eigenfunction(m, z);
    p.psi_integral = m.integral;
    p.A = p.lambda * p.psi * p.psi_integral;
    return p;
}

}  // namespace lifetime
