#include "attrec/phantom.hpp"

#include <cmath>
#include <stdexcept>

namespace attrec {

namespace {

void add_source(Signal& s, double position, double amplitude, double width)
{
    const Grid& g = s.grid;
    if (width <= 0.0) {
        const double idx = (position - g.t0) / g.dt;
        const auto i = static_cast<std::size_t>(std::llround(idx));
        s.samples[i] += amplitude / g.dt;
        return;
    }
    std::vector<double> shape(g.n);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double u = (g.time_at(i) - position) / width;
        shape[i] = std::exp(-0.5 * u * u);
        sum += shape[i];
    }
    if (sum == 0.0)
        throw std::runtime_error("smoothing width too narrow for the grid");
    // normalize the discrete sum so the trapezoid integral is the amplitude
    const double scale = amplitude / (sum * g.dt);
    for (std::size_t i = 0; i < g.n; ++i)
        s.samples[i] += shape[i] * scale;
}

} // namespace

Signal generate_phantom(const PhantomSpec& spec, const Grid& grid)
{
    validate_grid(grid);
    if (spec.kind == PhantomKind::from_file) {
        Signal s = read_signal_csv(spec.file);
        if (!(s.grid == grid))
            throw std::invalid_argument("phantom file grid does not match the experiment grid");
        for (double v : s.samples)
            if (v < 0.0)
                throw std::invalid_argument("phantom file contains negative pressure");
        return s;
    }

    const std::size_t want = spec.kind == PhantomKind::single_delta ? 1 : 2;
    if (spec.positions.size() != want)
        throw std::invalid_argument("phantom kind and position count disagree");
    std::vector<double> amps = spec.amplitudes;
    if (amps.empty())
        amps.assign(want, 1.0);
    if (amps.size() != want)
        throw std::invalid_argument("phantom amplitude count disagrees with position count");
    for (double a : amps)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("phantom amplitudes must be nonnegative");
    const double t_end = grid.time_at(grid.n - 1);
    for (double p : spec.positions)
        if (!(p >= grid.t0) || !(p <= t_end))
            throw std::invalid_argument("phantom position falls outside the grid");
    if (want == 2 && std::abs(spec.positions[1] - spec.positions[0]) < grid.dt)
        throw std::invalid_argument("phantom sources collide, separation below one sample");
    if (!(spec.smoothing_width >= 0.0) || !std::isfinite(spec.smoothing_width))
        throw std::invalid_argument("smoothing width must be nonnegative");

    Signal s;
    s.grid = grid;
    s.samples.assign(grid.n, 0.0);
    for (std::size_t i = 0; i < want; ++i)
        add_source(s, spec.positions[i], amps[i], spec.smoothing_width);
    return s;
}

} // namespace attrec
