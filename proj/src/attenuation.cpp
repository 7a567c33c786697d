#include "attrec/attenuation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace attrec {

void validate_law(const AttenuationLaw& law)
{
    if (!(law.alpha0 >= 0.0) || !std::isfinite(law.alpha0))
        throw std::invalid_argument("alpha0 must be nonnegative and finite");
    if (!(law.y > 0.0) || !(law.y <= 2.0))
        throw std::invalid_argument("exponent y must lie in (0, 2]");
    if (!(law.c0 > 0.0) || !std::isfinite(law.c0))
        throw std::invalid_argument("c0 must be positive and finite");
    if (!(law.omega_ref > 0.0) || !std::isfinite(law.omega_ref))
        throw std::invalid_argument("omega_ref must be positive and finite");
    if (law.dispersion && law.alpha0 > 0.0 && law.y == 1.0)
        throw std::invalid_argument("unsupported exponent y = 1 for the dispersion relation");
}

double attenuation_coefficient(const AttenuationLaw& law, double omega)
{
    return law.alpha0 * std::pow(std::abs(omega), law.y);
}

double phase_velocity(const AttenuationLaw& law, double omega)
{
    if (!law.dispersion || law.alpha0 == 0.0)
        return law.c0;
    if (law.y == 1.0)
        throw std::invalid_argument("unsupported exponent y = 1 for the dispersion relation");
    if (omega == 0.0)
        throw std::invalid_argument("phase velocity is undefined at omega = 0");
    const double w = std::abs(omega);
    const double slope = law.alpha0 * std::tan(std::numbers::pi * law.y / 2.0);
    const double inv_c = 1.0 / law.c0
        + slope * (std::pow(w, law.y - 1.0) - std::pow(law.omega_ref, law.y - 1.0));
    if (!(inv_c > 0.0))
        throw std::runtime_error("dispersion relation produced a nonpositive slowness");
    return 1.0 / inv_c;
}

std::complex<double> wavenumber(const AttenuationLaw& law, double omega)
{
    if (omega == 0.0)
        return {0.0, 0.0};
    return {omega / phase_velocity(law, omega), attenuation_coefficient(law, omega)};
}

std::complex<double> gamma(const AttenuationLaw& law, double omega)
{
    if (omega == 0.0)
        return {0.0, 0.0};
    const std::complex<double> k = wavenumber(law, omega);
    return {k.real() - omega / law.c0, k.imag()};
}

namespace {

// 1 dB/cm = ln(10)/20 Np/cm = 5*ln(10) Np/m, and f in MHz maps to
// omega = 2*pi*1e6*f.
const double np_per_db_m = 5.0 * std::numbers::ln10;

} // namespace

double alpha0_from_db_cm_mhz(double a_db, double y)
{
    return a_db * np_per_db_m / std::pow(2.0 * std::numbers::pi * 1e6, y);
}

double alpha0_to_db_cm_mhz(double alpha0, double y)
{
    return alpha0 * std::pow(2.0 * std::numbers::pi * 1e6, y) / np_per_db_m;
}

} // namespace attrec
