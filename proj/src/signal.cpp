#include "attrec/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

namespace attrec {

namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

void dft_c2c(std::size_t n, const std::complex<double>* in, std::complex<double>* out, int sign)
{
    fftw_plan plan = nullptr;
    std::vector<std::complex<double>> buf_in(in, in + n);
    std::vector<std::complex<double>> buf_out(n);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(buf_in.data()),
                                reinterpret_cast<fftw_complex*>(buf_out.data()),
                                sign, FFTW_ESTIMATE);
    }
    if (!plan)
        throw std::runtime_error("fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    std::copy(buf_out.begin(), buf_out.end(), out);
}

} // namespace

void validate_grid(const Grid& g)
{
    if (g.n < 2)
        throw std::invalid_argument("grid needs at least 2 samples");
    if (!(g.dt > 0.0) || !std::isfinite(g.dt))
        throw std::invalid_argument("grid dt must be positive and finite");
    if (!std::isfinite(g.t0))
        throw std::invalid_argument("grid t0 must be finite");
}

void validate_signal(const Signal& s)
{
    validate_grid(s.grid);
    if (s.samples.size() != s.grid.n)
        throw std::invalid_argument("sample count does not match grid");
    for (double v : s.samples)
        if (!std::isfinite(v))
            throw std::invalid_argument("signal contains non-finite samples");
}

std::vector<double> omega_bins(const Grid& g)
{
    validate_grid(g);
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(g.n) * g.dt);
    std::vector<double> w(g.n);
    const std::size_t half = (g.n + 1) / 2;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double idx = (j < half) ? static_cast<double>(j)
                                      : static_cast<double>(j) - static_cast<double>(g.n);
        w[j] = base * idx;
    }
    return w;
}

Spectrum forward_dft(const Signal& s)
{
    validate_signal(s);
    std::vector<std::complex<double>> in(s.grid.n);
    for (std::size_t i = 0; i < s.grid.n; ++i)
        in[i] = s.samples[i];
    Spectrum sp;
    sp.grid = s.grid;
    sp.bins.resize(s.grid.n);
    dft_c2c(s.grid.n, in.data(), sp.bins.data(), FFTW_FORWARD);
    return sp;
}

Signal inverse_dft(const Spectrum& sp, double imag_tol)
{
    validate_grid(sp.grid);
    if (sp.bins.size() != sp.grid.n)
        throw std::invalid_argument("bin count does not match grid");
    std::vector<std::complex<double>> out(sp.grid.n);
    dft_c2c(sp.grid.n, sp.bins.data(), out.data(), FFTW_BACKWARD);

    const double scale = 1.0 / static_cast<double>(sp.grid.n);
    double max_real = 0.0;
    double max_imag = 0.0;
    Signal s;
    s.grid = sp.grid;
    s.samples.resize(sp.grid.n);
    for (std::size_t i = 0; i < sp.grid.n; ++i) {
        const double re = out[i].real() * scale;
        const double im = out[i].imag() * scale;
        s.samples[i] = re;
        max_real = std::max(max_real, std::abs(re));
        max_imag = std::max(max_imag, std::abs(im));
    }
    if (max_imag > imag_tol * std::max(max_real, 1e-300)) {
        std::ostringstream msg;
        msg << "spectrum is not conjugate symmetric, max imaginary residual "
            << max_imag << " against peak " << max_real;
        throw std::invalid_argument(msg.str());
    }
    return s;
}

Signal add_noise(const Signal& s, const NoiseModel& nm, double reference_peak)
{
    validate_signal(s);
    if (!(nm.snr > 1.0))
        throw std::invalid_argument("snr must exceed 1");
    if (!(reference_peak > 0.0))
        throw std::invalid_argument("reference peak must be positive");
    std::mt19937_64 rng(nm.seed);
    std::normal_distribution<double> gauss(0.0, reference_peak / nm.snr);
    Signal out = s;
    for (double& v : out.samples)
        v += gauss(rng);
    return out;
}

double estimate_snr(const Signal& s, IndexRange noise_window, IndexRange signal_window)
{
    validate_signal(s);
    auto check_window = [&](IndexRange w, const char* name) {
        if (w.end > s.grid.n || w.begin >= w.end)
            throw std::invalid_argument(std::string(name) + " window out of range");
        if (w.end - w.begin < 16)
            throw std::invalid_argument(std::string(name) + " window needs at least 16 samples");
    };
    check_window(noise_window, "noise");
    check_window(signal_window, "signal");
    if (noise_window.begin < signal_window.end && signal_window.begin < noise_window.end)
        throw std::invalid_argument("noise and signal windows must be disjoint");

    double mean = 0.0;
    const std::size_t nn = noise_window.end - noise_window.begin;
    for (std::size_t i = noise_window.begin; i < noise_window.end; ++i)
        mean += s.samples[i];
    mean /= static_cast<double>(nn);
    double var = 0.0;
    for (std::size_t i = noise_window.begin; i < noise_window.end; ++i) {
        const double d = s.samples[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(nn - 1);
    const double sigma = std::sqrt(var);

    double peak = 0.0;
    for (std::size_t i = signal_window.begin; i < signal_window.end; ++i)
        peak = std::max(peak, std::abs(s.samples[i]));

    if (sigma < 1e-300 || !(std::isfinite(sigma)))
        throw std::runtime_error("noise floor below machine epsilon");
    return peak / sigma;
}

Signal crop_signal(const Signal& s, IndexRange range)
{
    validate_signal(s);
    if (range.end > s.grid.n || range.begin >= range.end)
        throw std::invalid_argument("crop range out of bounds");
    if (range.end - range.begin < 2)
        throw std::invalid_argument("crop range needs at least 2 samples");
    Signal out;
    out.grid.n = range.end - range.begin;
    out.grid.dt = s.grid.dt;
    out.grid.t0 = s.grid.time_at(range.begin);
    out.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(range.begin),
                       s.samples.begin() + static_cast<std::ptrdiff_t>(range.end));
    return out;
}

void write_signal_csv(const std::filesystem::path& path, const Signal& s)
{
    validate_signal(s);
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "t,p\n";
    char line[80];
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", s.grid.time_at(i), s.samples[i]);
        out << line;
    }
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

Signal read_signal_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path.string() + " is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "t,p")
        throw std::runtime_error(path.string() + " has unexpected header, want t,p");

    std::vector<double> t;
    std::vector<double> p;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path.string() + " has a malformed row: " + line);
        try {
            t.push_back(std::stod(line.substr(0, comma)));
            p.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + " has a malformed row: " + line);
        }
    }
    if (t.size() < 2)
        throw std::runtime_error(path.string() + " needs at least 2 rows");

    Signal s;
    s.grid.n = t.size();
    s.grid.t0 = t.front();
    s.grid.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    s.samples = std::move(p);
    validate_signal(s);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double expect = s.grid.time_at(i);
        const double scale = std::max(std::abs(expect), s.grid.dt);
        if (std::abs(t[i] - expect) > 1e-9 * scale)
            throw std::runtime_error(path.string() + " time column is not uniformly sampled");
    }
    return s;
}

} // namespace attrec
