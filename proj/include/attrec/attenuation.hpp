#pragma once

#include <complex>

namespace attrec {

// Power law attenuation alpha(omega) = alpha0 * |omega|^y with the matching
// Kramers-Kronig phase velocity. alpha0 is in Np * m^-1 * (rad/s)^-y, c0 is
// the phase velocity at omega_ref.
struct AttenuationLaw {
    double alpha0 = 0.0;
    double y = 1.5;
    double c0 = 1540.0;
    double omega_ref = 2.0 * 3.14159265358979323846 * 1e6;
    bool dispersion = true;
};

void validate_law(const AttenuationLaw& law);

// Np/m at angular frequency omega. Even in omega.
double attenuation_coefficient(const AttenuationLaw& law, double omega);

// Kramers-Kronig phase velocity for the power law, y != 1:
//   1/c(omega) = 1/c0 + alpha0 * tan(pi*y/2) * (|omega|^(y-1) - omega_ref^(y-1)).
// With dispersion disabled returns c0.
double phase_velocity(const AttenuationLaw& law, double omega);

// Complex wavenumber K(omega) = omega/c(omega) + i*alpha(omega).
std::complex<double> wavenumber(const AttenuationLaw& law, double omega);

// gamma(omega) = K(omega) - omega/c0, the lossy excess over the ideal medium.
std::complex<double> gamma(const AttenuationLaw& law, double omega);

// Conversions between alpha0 in Np * m^-1 * (rad/s)^-y and the tabulated
// dB * cm^-1 * MHz^-y form.
double alpha0_from_db_cm_mhz(double a_db, double y);
double alpha0_to_db_cm_mhz(double alpha0, double y);

} // namespace attrec
