#include "attrec/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace attrec {

namespace {

ResolutionReport assemble(const AttenuationLaw& law, double r, double snr, double omega_cut)
{
    ResolutionReport rep;
    rep.r = r;
    rep.snr = snr;
    rep.omega_cut = omega_cut;
    rep.f_cut = omega_cut / (2.0 * std::numbers::pi);
    rep.c_at_cut = phase_velocity(law, omega_cut);
    rep.delta_time = std::numbers::pi / omega_cut;
    rep.delta_space = resolution_limit(omega_cut, rep.c_at_cut);
    return rep;
}

void check_cutoff_args(const AttenuationLaw& law, double r, double snr)
{
    validate_law(law);
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("propagation distance r must be positive");
    if (!(snr > 1.0))
        throw std::invalid_argument("snr must exceed 1, the signal never drops below the noise floor otherwise");
    if (law.alpha0 == 0.0)
        throw std::invalid_argument("alpha0 = 0 gives an infinite cut-off frequency");
}

} // namespace

ResolutionReport cutoff_frequency(const AttenuationLaw& law, double r, double snr)
{
    check_cutoff_args(law, r, snr);
    const double omega_cut = std::pow(std::log(snr) / (law.alpha0 * r), 1.0 / law.y);
    return assemble(law, r, snr, omega_cut);
}

ResolutionReport cutoff_frequency_bisect(const AttenuationLaw& law, double r, double snr,
                                         double rel_tol)
{
    check_cutoff_args(law, r, snr);
    const double target = std::log(snr);
    auto excess = [&](double w) { return attenuation_coefficient(law, w) * r - target; };

    double hi = law.omega_ref;
    double lo = law.omega_ref;
    while (excess(hi) < 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi))
            throw std::runtime_error("cut-off bracket expansion overflowed");
    }
    while (excess(lo) > 0.0) {
        lo *= 0.5;
        if (lo < 1e-300)
            throw std::runtime_error("cut-off bracket expansion underflowed");
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return assemble(law, r, snr, 0.5 * (lo + hi));
}

double resolution_limit(double omega_cut, double c_at_cut)
{
    if (!(omega_cut > 0.0))
        throw std::invalid_argument("omega_cut must be positive");
    return std::numbers::pi * c_at_cut / omega_cut;
}

double implied_exponent(double f_cut_1, double r1, double f_cut_2, double r2)
{
    if (!(f_cut_1 > 0.0) || !(f_cut_2 > 0.0) || !(r1 > 0.0) || !(r2 > 0.0))
        throw std::invalid_argument("implied exponent needs positive frequencies and distances");
    if (f_cut_1 == f_cut_2)
        throw std::invalid_argument("implied exponent is undefined for equal cut-offs");
    return std::log(r2 / r1) / std::log(f_cut_1 / f_cut_2);
}

SeparabilityVerdict separability(const Signal& s, double threshold, double valley_threshold)
{
    validate_signal(s);
    if (!(threshold > 0.0) || !(threshold < 1.0))
        throw std::invalid_argument("peak threshold must lie in (0, 1)");
    if (!(valley_threshold > 0.0) || !(valley_threshold <= 1.0))
        throw std::invalid_argument("valley threshold must lie in (0, 1]");

    SeparabilityVerdict v;
    const double peak = *std::max_element(s.samples.begin(), s.samples.end());
    if (!(peak > 0.0))
        return v;

    std::vector<std::size_t> maxima;
    const double level = threshold * peak;
    for (std::size_t i = 1; i + 1 < s.grid.n; ++i) {
        if (s.samples[i] > s.samples[i - 1] && s.samples[i] >= s.samples[i + 1]
            && s.samples[i] > level)
            maxima.push_back(i);
    }
    for (std::size_t i : maxima)
        v.peak_positions.push_back(s.grid.time_at(i));

    if (maxima.size() != 2)
        return v;
    const double h0 = s.samples[maxima[0]];
    const double h1 = s.samples[maxima[1]];
    double valley = h0;
    for (std::size_t i = maxima[0]; i <= maxima[1]; ++i)
        valley = std::min(valley, s.samples[i]);
    v.valley_ratio = valley / std::min(h0, h1);
    v.resolved = v.valley_ratio < valley_threshold;
    return v;
}

} // namespace attrec
