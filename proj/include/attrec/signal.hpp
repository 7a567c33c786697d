#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace attrec {

struct Grid {
    std::size_t n = 0;
    double dt = 0.0;
    double t0 = 0.0;

    bool operator==(const Grid&) const = default;
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double duration() const { return static_cast<double>(n) * dt; }
};

void validate_grid(const Grid& g);

// Sampled real pressure signal. Signals are combinable only on identical grids.
struct Signal {
    Grid grid;
    std::vector<double> samples;
};

// Full-length complex DFT coefficients, bin j at omega_j = 2*pi*j/(n*dt),
// upper half interpreted as negative frequencies.
struct Spectrum {
    Grid grid;
    std::vector<std::complex<double>> bins;
};

struct NoiseModel {
    double snr = 0.0;
    std::uint64_t seed = 0;
};

// Half-open sample index range.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

void validate_signal(const Signal& s);

// Signed angular frequency per DFT bin, in DFT bin order.
std::vector<double> omega_bins(const Grid& g);

// Analysis is unnormalized, X_j = sum_n x_n exp(-2*pi*i*j*n/N);
// synthesis carries the 1/N factor.
Spectrum forward_dft(const Signal& s);

// Inverse transform of a conjugate-symmetric spectrum. The imaginary residual
// is checked against `imag_tol` relative to the result peak and discarded.
Signal inverse_dft(const Spectrum& sp, double imag_tol = 1e-10);

// Adds white Gaussian noise of standard deviation reference_peak / nm.snr.
Signal add_noise(const Signal& s, const NoiseModel& nm, double reference_peak);

// max |s| over signal_window divided by the sample standard deviation over
// noise_window. Windows must be disjoint and hold at least 16 samples each.
double estimate_snr(const Signal& s, IndexRange noise_window, IndexRange signal_window);

// Copy of the samples in [range.begin, range.end), t0 shifted accordingly.
Signal crop_signal(const Signal& s, IndexRange range);

// CSV with header "t,p", 17 significant digits, one row per sample.
void write_signal_csv(const std::filesystem::path& path, const Signal& s);
Signal read_signal_csv(const std::filesystem::path& path);

} // namespace attrec
