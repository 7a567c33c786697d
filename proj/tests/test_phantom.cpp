#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "attrec/phantom.hpp"
#include "attrec/signal.hpp"

using namespace attrec;

namespace {

double integral(const Signal& s)
{
    return std::accumulate(s.samples.begin(), s.samples.end(), 0.0) * s.grid.dt;
}

} // namespace

TEST_CASE("bare delta lands on the nearest sample with unit area")
{
    const Grid g{64, 2e-9, 0.0};
    PhantomSpec spec;
    spec.positions = {10.6e-9};

    const auto s = generate_phantom(spec, g);
    CHECK(s.samples[5] == doctest::Approx(1.0 / g.dt));
    std::size_t nonzero = 0;
    for (double v : s.samples)
        if (v != 0.0)
            ++nonzero;
    CHECK(nonzero == 1);
    CHECK(integral(s) == doctest::Approx(1.0));

    SUBCASE("amplitude scales the area")
    {
        spec.amplitudes = {2.5};
        const auto scaled = generate_phantom(spec, g);
        CHECK(scaled.samples[5] == doctest::Approx(2.5 / g.dt));
        CHECK(integral(scaled) == doctest::Approx(2.5));
    }
}

TEST_CASE("smoothed delta integrates to the amplitude")
{
    const Grid g{256, 2e-9, 0.0};
    PhantomSpec spec;
    spec.positions = {256e-9};
    spec.smoothing_width = 10e-9;

    const auto s = generate_phantom(spec, g);
    CHECK(integral(s) == doctest::Approx(1.0).epsilon(1e-12));

    std::size_t imax = 0;
    for (std::size_t i = 1; i < g.n; ++i)
        if (s.samples[i] > s.samples[imax])
            imax = i;
    CHECK(g.time_at(imax) == doctest::Approx(256e-9).epsilon(1e-9));

    SUBCASE("profile is the normalized gaussian")
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double u = (g.time_at(i) - 256e-9) / spec.smoothing_width;
            sum += std::exp(-0.5 * u * u);
        }
        for (std::size_t i = 0; i < g.n; ++i) {
            const double u = (g.time_at(i) - 256e-9) / spec.smoothing_width;
            CHECK(s.samples[i]
                  == doctest::Approx(std::exp(-0.5 * u * u) / (sum * g.dt)).epsilon(1e-12));
        }
    }
}

TEST_CASE("two sources superpose")
{
    const Grid g{512, 2e-9, 0.0};
    PhantomSpec two;
    two.kind = PhantomKind::two_delta;
    two.positions = {200e-9, 600e-9};
    two.amplitudes = {1.0, 0.5};
    two.smoothing_width = 8e-9;

    const auto s = generate_phantom(two, g);
    CHECK(integral(s) == doctest::Approx(1.5).epsilon(1e-12));

    PhantomSpec a;
    a.positions = {200e-9};
    a.amplitudes = {1.0};
    a.smoothing_width = 8e-9;
    PhantomSpec b;
    b.positions = {600e-9};
    b.amplitudes = {0.5};
    b.smoothing_width = 8e-9;
    const auto sa = generate_phantom(a, g);
    const auto sb = generate_phantom(b, g);
    for (std::size_t i = 0; i < g.n; ++i)
        CHECK(s.samples[i] == doctest::Approx(sa.samples[i] + sb.samples[i]).epsilon(1e-12));
}

TEST_CASE("phantom validation")
{
    const Grid g{64, 2e-9, 0.0};

    SUBCASE("position count must match the kind")
    {
        PhantomSpec spec;
        spec.kind = PhantomKind::two_delta;
        spec.positions = {10e-9};
        CHECK_THROWS_AS(generate_phantom(spec, g), std::invalid_argument);
        spec.kind = PhantomKind::single_delta;
        spec.positions = {10e-9, 20e-9};
        CHECK_THROWS_AS(generate_phantom(spec, g), std::invalid_argument);
    }

    SUBCASE("positions must stay on the grid")
    {
        PhantomSpec spec;
        spec.positions = {-1e-9};
        CHECK_THROWS_WITH_AS(generate_phantom(spec, g), doctest::Contains("outside the grid"),
                             std::invalid_argument);
        spec.positions = {g.duration()};
        CHECK_THROWS_AS(generate_phantom(spec, g), std::invalid_argument);
        spec.positions = {g.time_at(g.n - 1)};
        CHECK_NOTHROW(generate_phantom(spec, g));
    }

    SUBCASE("colliding sources are rejected")
    {
        PhantomSpec spec;
        spec.kind = PhantomKind::two_delta;
        spec.positions = {20e-9, 21e-9};
        CHECK_THROWS_WITH_AS(generate_phantom(spec, g), doctest::Contains("collide"),
                             std::invalid_argument);
        spec.positions = {20e-9, 24e-9};
        CHECK_NOTHROW(generate_phantom(spec, g));
    }

    SUBCASE("amplitudes must be nonnegative and counted")
    {
        PhantomSpec spec;
        spec.positions = {20e-9};
        spec.amplitudes = {-1.0};
        CHECK_THROWS_AS(generate_phantom(spec, g), std::invalid_argument);
        spec.amplitudes = {1.0, 1.0};
        CHECK_THROWS_AS(generate_phantom(spec, g), std::invalid_argument);
    }

    SUBCASE("smoothing width must be nonnegative")
    {
        PhantomSpec spec;
        spec.positions = {20e-9};
        spec.smoothing_width = -1e-9;
        CHECK_THROWS_AS(generate_phantom(spec, g), std::invalid_argument);
    }
}

TEST_CASE("phantom from file")
{
    const Grid g{32, 2e-9, 0.0};
    const auto path = std::filesystem::temp_directory_path() / "attrec_test_phantom.csv";

    Signal src;
    src.grid = g;
    src.samples.assign(g.n, 0.0);
    src.samples[10] = 3.0;
    src.samples[11] = 1.0;
    write_signal_csv(path, src);

    PhantomSpec spec;
    spec.kind = PhantomKind::from_file;
    spec.file = path;

    const auto s = generate_phantom(spec, g);
    CHECK(s.samples == src.samples);

    SUBCASE("grid mismatch is rejected")
    {
        const Grid other{32, 4e-9, 0.0};
        CHECK_THROWS_WITH_AS(generate_phantom(spec, other), doctest::Contains("grid"),
                             std::invalid_argument);
    }

    SUBCASE("negative pressure is rejected")
    {
        src.samples[5] = -0.5;
        write_signal_csv(path, src);
        CHECK_THROWS_WITH_AS(generate_phantom(spec, g), doctest::Contains("negative"),
                             std::invalid_argument);
    }

    std::filesystem::remove(path);
}
