#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "attrec/attenuation.hpp"
#include "attrec/signal.hpp"

namespace attrec {

// Circulant attenuation operator for propagation distance r, diagonal in the
// DFT basis. Bin j carries
//   m_j = (omega_j / (c0 * K(omega_j))) * exp(i * gamma(omega_j) * r) * H(omega_j)
// with m_0 = 1 and H the optional transducer impulse response spectrum. At
// r = 0 the propagation part is the identity. The Nyquist bin of an even grid
// is realified so real signals map to real signals.
struct ForwardOperator {
    Grid grid;
    AttenuationLaw law;
    double r = 0.0;
    std::vector<std::complex<double>> multipliers;
    bool has_impulse_response = false;
    // max | omega/(c0*K) - 1 | over the checked band, diagnostic only
    double max_factor_deviation = 0.0;
};

// factor_check_band_hz bounds the band for the max_factor_deviation
// diagnostic; bins above it still get the exact factor.
ForwardOperator build_operator(const AttenuationLaw& law, double r, const Grid& grid,
                               const Signal* impulse_response = nullptr,
                               double factor_check_band_hz = 50e6);

Signal apply(const ForwardOperator& op, const Signal& s);
Signal apply_adjoint(const ForwardOperator& op, const Signal& s);

// Singular values |m_j| paired with omega_j, sorted by increasing |omega|.
std::vector<std::pair<double, double>> singular_values(const ForwardOperator& op);

double max_singular_value(const ForwardOperator& op);

// Largest singular value estimated through power iteration on M^T M,
// independent of the diagonal form. Relative accuracy ~tol.
double operator_norm_power_iteration(const ForwardOperator& op, double tol = 1e-4,
                                     std::size_t max_iters = 10000);

// CSV with header "omega,sigma,phase" sorted by increasing |omega|.
void write_operator_csv(const std::filesystem::path& path, const ForwardOperator& op);

} // namespace attrec
