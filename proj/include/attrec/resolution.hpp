#pragma once

#include <vector>

#include "attrec/attenuation.hpp"
#include "attrec/signal.hpp"

namespace attrec {

// Cut-off where accumulated attenuation over distance r reaches the noise
// floor, alpha(omega_cut) * r = ln(snr), and the linear resolution limits it
// implies.
struct ResolutionReport {
    double r = 0.0;
    double snr = 0.0;
    double omega_cut = 0.0;
    double f_cut = 0.0;
    double c_at_cut = 0.0;
    double delta_time = 0.0;  // pi / omega_cut = 1 / (2 f_cut)
    double delta_space = 0.0; // pi * c(omega_cut) / omega_cut
};

// Closed form for the power law, omega_cut = (ln(snr) / (alpha0 * r))^(1/y).
ResolutionReport cutoff_frequency(const AttenuationLaw& law, double r, double snr);

// Same quantity through bisection on the monotone accumulated attenuation,
// usable for any monotone alpha.
ResolutionReport cutoff_frequency_bisect(const AttenuationLaw& law, double r, double snr,
                                         double rel_tol = 1e-13);

double resolution_limit(double omega_cut, double c_at_cut);

// Exponent consistent with two (r, f_cut) pairs under the same law and snr,
// from alpha(f1) * r1 = alpha(f2) * r2.
double implied_exponent(double f_cut_1, double r1, double f_cut_2, double r2);

struct SeparabilityVerdict {
    bool resolved = false;
    // times of all local maxima above the threshold, two entries when resolved
    std::vector<double> peak_positions;
    // valley height over the lower peak, meaningful only with exactly two peaks
    double valley_ratio = 0.0;
};

// Two sources count as resolved when the normalized signal has exactly two
// local maxima above `threshold` and the valley between them stays below
// `valley_threshold` times the lower peak.
SeparabilityVerdict separability(const Signal& s, double threshold = 0.2,
                                 double valley_threshold = 0.8);

} // namespace attrec
