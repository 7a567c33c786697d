#include "attrec/forward_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace attrec {

ForwardOperator build_operator(const AttenuationLaw& law, double r, const Grid& grid,
                               const Signal* impulse_response, double factor_check_band_hz)
{
    validate_law(law);
    validate_grid(grid);
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("propagation distance r must be nonnegative");

    ForwardOperator op;
    op.grid = grid;
    op.law = law;
    op.r = r;
    op.multipliers.resize(grid.n);

    std::vector<std::complex<double>> ir_bins;
    if (impulse_response) {
        if (!(impulse_response->grid == grid))
            throw std::invalid_argument("impulse response grid does not match operator grid");
        ir_bins = forward_dft(*impulse_response).bins;
        op.has_impulse_response = true;
    }

    const auto omegas = omega_bins(grid);
    const double band = 2.0 * std::numbers::pi * factor_check_band_hz;
    double max_dev = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double w = omegas[j];
        std::complex<double> m;
        if (w == 0.0 || r == 0.0) {
            m = 1.0;
        } else {
            const std::complex<double> k = wavenumber(law, w);
            const std::complex<double> factor = w / (law.c0 * k);
            const std::complex<double> g = gamma(law, w);
            m = factor * std::exp(std::complex<double>(0.0, 1.0) * g * r);
            if (std::abs(w) <= band)
                max_dev = std::max(max_dev, std::abs(factor - 1.0));
        }
        if (impulse_response)
            m *= ir_bins[j];
        op.multipliers[j] = m;
    }
    // even grid: the Nyquist bin has no conjugate partner, keep it real
    if (grid.n % 2 == 0)
        op.multipliers[grid.n / 2] = op.multipliers[grid.n / 2].real();
    op.max_factor_deviation = max_dev;
    return op;
}

namespace {

Signal apply_diag(const ForwardOperator& op, const Signal& s, bool conjugate)
{
    validate_signal(s);
    if (!(s.grid == op.grid))
        throw std::invalid_argument("signal grid does not match operator grid");
    Spectrum sp = forward_dft(s);
    for (std::size_t j = 0; j < op.grid.n; ++j)
        sp.bins[j] *= conjugate ? std::conj(op.multipliers[j]) : op.multipliers[j];
    return inverse_dft(sp);
}

} // namespace

Signal apply(const ForwardOperator& op, const Signal& s)
{
    return apply_diag(op, s, false);
}

Signal apply_adjoint(const ForwardOperator& op, const Signal& s)
{
    return apply_diag(op, s, true);
}

std::vector<std::pair<double, double>> singular_values(const ForwardOperator& op)
{
    const auto omegas = omega_bins(op.grid);
    std::vector<std::pair<double, double>> sv(op.grid.n);
    for (std::size_t j = 0; j < op.grid.n; ++j)
        sv[j] = {omegas[j], std::abs(op.multipliers[j])};
    std::sort(sv.begin(), sv.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a.first);
        const double mb = std::abs(b.first);
        if (ma != mb)
            return ma < mb;
        return a.first < b.first;
    });
    return sv;
}

double max_singular_value(const ForwardOperator& op)
{
    double s = 0.0;
    for (const auto& m : op.multipliers)
        s = std::max(s, std::abs(m));
    return s;
}

double operator_norm_power_iteration(const ForwardOperator& op, double tol, std::size_t max_iters)
{
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Signal v;
    v.grid = op.grid;
    v.samples.resize(op.grid.n);
    for (double& x : v.samples)
        x = gauss(rng);
    auto norm2 = [](const std::vector<double>& x) {
        return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    };
    const double n0 = norm2(v.samples);
    for (double& x : v.samples)
        x /= n0;

    double sigma = 0.0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        Signal w = apply_adjoint(op, apply(op, v));
        const double lam = norm2(w.samples);
        if (lam == 0.0)
            return 0.0;
        for (std::size_t i = 0; i < w.samples.size(); ++i)
            v.samples[i] = w.samples[i] / lam;
        const double next = std::sqrt(lam);
        if (sigma > 0.0 && std::abs(next - sigma) <= tol * sigma) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    return sigma;
}

void write_operator_csv(const std::filesystem::path& path, const ForwardOperator& op)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "omega,sigma,phase\n";
    const auto omegas = omega_bins(op.grid);
    std::vector<std::size_t> order(op.grid.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(omegas[a]);
        const double mb = std::abs(omegas[b]);
        if (ma != mb)
            return ma < mb;
        return omegas[a] < omegas[b];
    });
    char line[120];
    for (std::size_t j : order) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", omegas[j],
                      std::abs(op.multipliers[j]), std::arg(op.multipliers[j]));
        out << line;
    }
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

} // namespace attrec
