#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "attrec/signal.hpp"

using namespace attrec;

namespace {

Signal make_signal(const Grid& g, std::vector<double> v)
{
    Signal s;
    s.grid = g;
    s.samples = std::move(v);
    return s;
}

std::filesystem::path temp_csv(const char* name)
{
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("grid validation")
{
    CHECK_NOTHROW(validate_grid(Grid{2, 1e-9, 0.0}));
    CHECK_THROWS_AS(validate_grid(Grid{0, 1e-9, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_grid(Grid{1, 1e-9, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_grid(Grid{8, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_grid(Grid{8, -1e-9, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_grid(Grid{8, 1e-9, std::nan("")}), std::invalid_argument);

    const Grid g{16, 2e-9, 1e-6};
    CHECK(g.time_at(0) == doctest::Approx(1e-6));
    CHECK(g.time_at(5) == doctest::Approx(1e-6 + 5 * 2e-9));
    CHECK(g.duration() == doctest::Approx(32e-9));
}

TEST_CASE("signal validation")
{
    const Grid g{4, 1e-9, 0.0};
    CHECK_NOTHROW(validate_signal(make_signal(g, {1, 2, 3, 4})));
    CHECK_THROWS_AS(validate_signal(make_signal(g, {1, 2, 3})), std::invalid_argument);
    CHECK_THROWS_AS(validate_signal(make_signal(g, {1, 2, std::nan(""), 4})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_signal(make_signal(g, {1, 2, INFINITY, 4})),
                    std::invalid_argument);
}

TEST_CASE("omega_bins ordering and values")
{
    const double dt = 2e-9;

    SUBCASE("even length")
    {
        const Grid g{8, dt, 0.0};
        const auto w = omega_bins(g);
        REQUIRE(w.size() == 8);
        const double dw = 2.0 * std::numbers::pi / (8 * dt);
        for (int j = 0; j < 4; ++j)
            CHECK(w[static_cast<std::size_t>(j)] == doctest::Approx(j * dw));
        // the unpaired Nyquist bin sits on the negative side
        for (int j = 4; j < 8; ++j)
            CHECK(w[static_cast<std::size_t>(j)] == doctest::Approx((j - 8) * dw));
    }

    SUBCASE("odd length")
    {
        const Grid g{5, dt, 0.0};
        const auto w = omega_bins(g);
        REQUIRE(w.size() == 5);
        const double dw = 2.0 * std::numbers::pi / (5 * dt);
        CHECK(w[0] == 0.0);
        CHECK(w[1] == doctest::Approx(dw));
        CHECK(w[2] == doctest::Approx(2 * dw));
        CHECK(w[3] == doctest::Approx(-2 * dw));
        CHECK(w[4] == doctest::Approx(-dw));
    }
}

TEST_CASE("forward_dft known transforms")
{
    const Grid g{4, 1e-9, 0.0};

    SUBCASE("constant maps to dc only")
    {
        const auto sp = forward_dft(make_signal(g, {1, 1, 1, 1}));
        REQUIRE(sp.bins.size() == 4);
        CHECK(std::abs(sp.bins[0] - std::complex<double>{4.0, 0.0}) < 1e-14);
        for (std::size_t j = 1; j < 4; ++j)
            CHECK(std::abs(sp.bins[j]) < 1e-14);
    }

    SUBCASE("impulse maps to a flat spectrum")
    {
        const auto sp = forward_dft(make_signal(g, {1, 0, 0, 0}));
        for (const auto& b : sp.bins)
            CHECK(std::abs(b - std::complex<double>{1.0, 0.0}) < 1e-14);
    }
}

TEST_CASE("forward_dft matches direct summation")
{
    const Grid g{64, 1e-9, 0.0};
    const auto s = oracles::random_signal(g, 42);
    const auto sp = forward_dft(s);
    const auto ref = oracles::naive_dft(s.samples);

    double scale = 0.0;
    for (const auto& b : ref)
        scale = std::max(scale, std::abs(b));
    for (std::size_t j = 0; j < 64; ++j)
        CHECK(std::abs(sp.bins[j] - ref[j]) < 1e-12 * scale);
}

TEST_CASE("dft round trip and Parseval")
{
    const Grid g{128, 2e-9, 0.0};
    const auto s = oracles::random_signal(g, 7);
    const auto sp = forward_dft(s);
    const auto back = inverse_dft(sp);

    CHECK(back.grid == g);
    CHECK(oracles::max_abs_diff(back.samples, s.samples) < 1e-12 * oracles::max_abs(s.samples));

    double time_energy = 0.0;
    for (double v : s.samples)
        time_energy += v * v;
    double freq_energy = 0.0;
    for (const auto& b : sp.bins)
        freq_energy += std::norm(b);
    freq_energy /= static_cast<double>(g.n);
    CHECK(freq_energy == doctest::Approx(time_energy).epsilon(1e-10));
}

TEST_CASE("dft linearity")
{
    const Grid g{96, 1e-9, 0.0};
    const auto a = oracles::random_signal(g, 1);
    const auto b = oracles::random_signal(g, 2);

    Signal combo = a;
    for (std::size_t i = 0; i < g.n; ++i)
        combo.samples[i] = 2.5 * a.samples[i] - 0.75 * b.samples[i];

    const auto sa = forward_dft(a);
    const auto sb = forward_dft(b);
    const auto sc = forward_dft(combo);

    double scale = 0.0;
    for (const auto& bin : sc.bins)
        scale = std::max(scale, std::abs(bin));
    for (std::size_t j = 0; j < g.n; ++j)
        CHECK(std::abs(sc.bins[j] - (2.5 * sa.bins[j] - 0.75 * sb.bins[j])) < 1e-12 * scale);
}

TEST_CASE("inverse_dft rejects a spectrum that is not conjugate symmetric")
{
    const Grid g{16, 1e-9, 0.0};
    auto sp = forward_dft(oracles::random_signal(g, 3));
    sp.bins[1] += std::complex<double>{0.0, 10.0};
    CHECK_THROWS_WITH_AS(inverse_dft(sp),
                         doctest::Contains("not conjugate symmetric"), std::invalid_argument);

    SUBCASE("a loose tolerance accepts the same spectrum")
    {
        CHECK_NOTHROW(inverse_dft(sp, 10.0));
    }
}

TEST_CASE("add_noise statistics and determinism")
{
    const Grid g{100000, 1e-9, 0.0};
    Signal s;
    s.grid = g;
    s.samples.assign(g.n, 0.0);
    s.samples[0] = 1.0;

    const NoiseModel nm{100.0, 2024};
    const auto noisy = add_noise(s, nm, 1.0);
    REQUIRE(noisy.samples.size() == g.n);

    double mean = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        mean += noisy.samples[i] - s.samples[i];
    mean /= static_cast<double>(g.n);
    double var = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double d = noisy.samples[i] - s.samples[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(g.n - 1);
    const double sd = std::sqrt(var);
    CHECK(sd > 0.0095);
    CHECK(sd < 0.0105);
    CHECK(std::abs(mean) < 5e-4);

    const auto again = add_noise(s, nm, 1.0);
    CHECK(again.samples == noisy.samples);

    const auto other = add_noise(s, NoiseModel{100.0, 2025}, 1.0);
    CHECK(other.samples != noisy.samples);
}

TEST_CASE("add_noise validation")
{
    const Grid g{32, 1e-9, 0.0};
    Signal s;
    s.grid = g;
    s.samples.assign(g.n, 0.0);

    CHECK_THROWS_AS(add_noise(s, NoiseModel{1.0, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(add_noise(s, NoiseModel{0.5, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(add_noise(s, NoiseModel{100.0, 0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(add_noise(s, NoiseModel{100.0, 0}, -1.0), std::invalid_argument);
}

TEST_CASE("estimate_snr on a synthetic signal")
{
    const Grid g{4096, 1e-9, 0.0};
    Signal clean;
    clean.grid = g;
    clean.samples.assign(g.n, 0.0);
    clean.samples[3000] = 1.0;

    const auto noisy = add_noise(clean, NoiseModel{100.0, 5}, 1.0);
    const double est = estimate_snr(noisy, IndexRange{0, 2048}, IndexRange{2048, 4096});
    CHECK(est > 80.0);
    CHECK(est < 125.0);

    SUBCASE("scale invariance")
    {
        Signal scaled = noisy;
        for (double& v : scaled.samples)
            v *= 7.0;
        const double est2 = estimate_snr(scaled, IndexRange{0, 2048}, IndexRange{2048, 4096});
        CHECK(est2 == doctest::Approx(est).epsilon(1e-12));
    }
}

TEST_CASE("estimate_snr validation")
{
    const Grid g{64, 1e-9, 0.0};
    Signal s;
    s.grid = g;
    s.samples.assign(g.n, 1.0);

    CHECK_THROWS_AS(estimate_snr(s, IndexRange{0, 10}, IndexRange{32, 64}),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_snr(s, IndexRange{0, 32}, IndexRange{16, 48}),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_snr(s, IndexRange{0, 32}, IndexRange{48, 80}),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(estimate_snr(s, IndexRange{0, 32}, IndexRange{32, 64}),
                         doctest::Contains("noise floor below machine epsilon"),
                         std::runtime_error);
}

TEST_CASE("crop_signal")
{
    const Grid g{8, 2e-9, 1e-6};
    const auto s = make_signal(g, {0, 1, 2, 3, 4, 5, 6, 7});

    const auto c = crop_signal(s, IndexRange{2, 6});
    CHECK(c.grid.n == 4);
    CHECK(c.grid.dt == g.dt);
    CHECK(c.grid.t0 == doctest::Approx(1e-6 + 2 * 2e-9));
    CHECK(c.samples == std::vector<double>{2, 3, 4, 5});

    CHECK_THROWS_AS(crop_signal(s, IndexRange{6, 2}), std::invalid_argument);
    CHECK_THROWS_AS(crop_signal(s, IndexRange{2, 9}), std::invalid_argument);
    CHECK_THROWS_AS(crop_signal(s, IndexRange{2, 3}), std::invalid_argument);
}

TEST_CASE("signal csv round trip")
{
    const Grid g{48, 2e-9, 5e-7};
    const auto s = oracles::random_signal(g, 11, 3.0);
    const auto path = temp_csv("attrec_test_signal.csv");

    write_signal_csv(path, s);
    const auto back = read_signal_csv(path);

    CHECK(back.grid.n == g.n);
    CHECK(back.grid.dt == doctest::Approx(g.dt).epsilon(1e-12));
    CHECK(back.grid.t0 == doctest::Approx(g.t0).epsilon(1e-12));
    CHECK(oracles::max_abs_diff(back.samples, s.samples) == 0.0);

    std::filesystem::remove(path);
}

TEST_CASE("read_signal_csv rejects malformed input")
{
    const auto path = temp_csv("attrec_test_bad.csv");

    SUBCASE("wrong header")
    {
        std::ofstream out(path);
        out << "time,pressure\n0,1\n1e-9,2\n";
        out.close();
        CHECK_THROWS_WITH_AS(read_signal_csv(path), doctest::Contains("unexpected header"),
                             std::runtime_error);
    }

    SUBCASE("nonuniform sampling")
    {
        std::ofstream out(path);
        out << "t,p\n0,1\n1e-9,2\n3e-9,3\n";
        out.close();
        CHECK_THROWS_WITH_AS(read_signal_csv(path),
                             doctest::Contains("not uniformly sampled"), std::runtime_error);
    }

    SUBCASE("too short")
    {
        std::ofstream out(path);
        out << "t,p\n0,1\n";
        out.close();
        CHECK_THROWS_AS(read_signal_csv(path), std::runtime_error);
    }

    SUBCASE("malformed row")
    {
        std::ofstream out(path);
        out << "t,p\n0,1\nbroken\n";
        out.close();
        CHECK_THROWS_WITH_AS(read_signal_csv(path), doctest::Contains("malformed row"),
                             std::runtime_error);
    }

    std::filesystem::remove(path);
}
