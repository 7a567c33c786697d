#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "attrec/attenuation.hpp"

using namespace attrec;

TEST_CASE("law validation")
{
    CHECK_NOTHROW(validate_law(AttenuationLaw{}));

    AttenuationLaw law;
    law.alpha0 = -1e-12;
    CHECK_THROWS_AS(validate_law(law), std::invalid_argument);

    law = AttenuationLaw{};
    law.y = 0.0;
    CHECK_THROWS_AS(validate_law(law), std::invalid_argument);
    law.y = 2.0000001;
    CHECK_THROWS_AS(validate_law(law), std::invalid_argument);
    law.y = 2.0;
    CHECK_NOTHROW(validate_law(law));

    law = AttenuationLaw{};
    law.c0 = 0.0;
    CHECK_THROWS_AS(validate_law(law), std::invalid_argument);

    law = AttenuationLaw{};
    law.omega_ref = -1.0;
    CHECK_THROWS_AS(validate_law(law), std::invalid_argument);
}

TEST_CASE("y = 1 is rejected only when the dispersion relation is in play")
{
    AttenuationLaw law;
    law.alpha0 = 1e-10;
    law.y = 1.0;
    CHECK_THROWS_WITH_AS(validate_law(law), doctest::Contains("y = 1"), std::invalid_argument);

    law.dispersion = false;
    CHECK_NOTHROW(validate_law(law));
    CHECK(phase_velocity(law, 1e7) == law.c0);

    law.dispersion = true;
    law.alpha0 = 0.0;
    CHECK_NOTHROW(validate_law(law));
    CHECK(phase_velocity(law, 1e7) == law.c0);
}

TEST_CASE("attenuation coefficient")
{
    AttenuationLaw law;
    law.alpha0 = 1e-15;
    law.y = 2.0;

    CHECK(attenuation_coefficient(law, 0.0) == 0.0);
    CHECK(attenuation_coefficient(law, 2.0 * std::numbers::pi * 1e7)
          == doctest::Approx(3.9478417604357434).epsilon(1e-14));
    CHECK(attenuation_coefficient(law, -5e6) == attenuation_coefficient(law, 5e6));

    law.y = 1.5;
    const double a1 = attenuation_coefficient(law, 3e6);
    const double a2 = attenuation_coefficient(law, 6e6);
    CHECK(a2 / a1 == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-13));
}

TEST_CASE("phase velocity against direct long double evaluation")
{
    AttenuationLaw law;
    law.alpha0 = 4.1448399846708252e-10;

    for (double y : {0.5, 1.3, 1.5, 1.9}) {
        law.y = y;
        for (double scale : {0.1, 0.5, 2.0, 10.0}) {
            const double w = scale * law.omega_ref;
            const double ref = static_cast<double>(
                1.0L / oracles::kk_slowness(law.alpha0, y, law.c0, law.omega_ref, w));
            CHECK(phase_velocity(law, w) == doctest::Approx(ref).epsilon(1e-12));
            CHECK(phase_velocity(law, -w) == phase_velocity(law, w));
        }
        CHECK(phase_velocity(law, law.omega_ref) == doctest::Approx(law.c0).epsilon(1e-14));
    }
}

TEST_CASE("phase velocity edge cases")
{
    AttenuationLaw law;
    law.alpha0 = 4e-10;

    CHECK_THROWS_AS(phase_velocity(law, 0.0), std::invalid_argument);

    law.dispersion = false;
    CHECK(phase_velocity(law, 0.0) == law.c0);
    law.dispersion = true;

    SUBCASE("y = 1.5 raises the velocity above c0 at high frequency")
    {
        CHECK(phase_velocity(law, 10.0 * law.omega_ref) > law.c0);
        CHECK(phase_velocity(law, 0.1 * law.omega_ref) < law.c0);
    }

    SUBCASE("a strong enough law drives the slowness negative")
    {
        law.alpha0 = 1e-6;
        CHECK_THROWS_WITH_AS(phase_velocity(law, 1e8),
                             doctest::Contains("nonpositive slowness"), std::runtime_error);
    }
}

TEST_CASE("wavenumber and gamma")
{
    AttenuationLaw law;
    law.alpha0 = 4.1448399846708252e-10;

    CHECK(wavenumber(law, 0.0) == std::complex<double>{0.0, 0.0});
    CHECK(gamma(law, 0.0) == std::complex<double>{0.0, 0.0});

    const double w = 2.0 * std::numbers::pi * 8e6;
    const auto k = wavenumber(law, w);
    CHECK(k.real() == doctest::Approx(w / phase_velocity(law, w)).epsilon(1e-14));
    CHECK(k.imag() == doctest::Approx(attenuation_coefficient(law, w)).epsilon(1e-14));

    SUBCASE("negative frequencies mirror as K(-w) = -conj(K(w))")
    {
        const auto km = wavenumber(law, -w);
        CHECK(km.real() == doctest::Approx(-k.real()).epsilon(1e-14));
        CHECK(km.imag() == doctest::Approx(k.imag()).epsilon(1e-14));
    }

    SUBCASE("gamma subtracts the lossless phase")
    {
        const auto g = gamma(law, w);
        CHECK(g.real() == doctest::Approx(k.real() - w / law.c0).epsilon(1e-12));
        CHECK(g.imag() == doctest::Approx(k.imag()).epsilon(1e-14));
    }

    SUBCASE("lossless medium has gamma = 0")
    {
        law.alpha0 = 0.0;
        const auto g = gamma(law, w);
        CHECK(g.real() == 0.0);
        CHECK(g.imag() == 0.0);
    }

    SUBCASE("without dispersion gamma is purely absorptive")
    {
        law.dispersion = false;
        const auto g = gamma(law, w);
        CHECK(g.real() == 0.0);
        CHECK(g.imag() == doctest::Approx(attenuation_coefficient(law, w)).epsilon(1e-14));
    }
}

TEST_CASE("dB conversions")
{
    CHECK(alpha0_from_db_cm_mhz(1.0, 1.0)
          == doctest::Approx(1.8323389971985694e-6).epsilon(1e-15));
    CHECK(alpha0_from_db_cm_mhz(0.5, 1.5)
          == doctest::Approx(3.6549874900543581e-10).epsilon(1e-15));

    SUBCASE("round trip")
    {
        for (double y : {0.7, 1.0, 1.5, 2.0}) {
            for (double a : {0.1, 0.5, 1.0, 3.0}) {
                CHECK(alpha0_to_db_cm_mhz(alpha0_from_db_cm_mhz(a, y), y)
                      == doctest::Approx(a).epsilon(1e-14));
            }
        }
    }

    SUBCASE("at 1 MHz the attenuation in dB matches the tabulated value")
    {
        const double a_db = 0.75;
        const double y = 1.5;
        AttenuationLaw law;
        law.alpha0 = alpha0_from_db_cm_mhz(a_db, y);
        law.y = y;
        const double np_per_m = attenuation_coefficient(law, 2.0 * std::numbers::pi * 1e6);
        const double db_per_cm = np_per_m * 20.0 / std::log(10.0) / 100.0;
        CHECK(db_per_cm == doctest::Approx(a_db).epsilon(1e-13));
    }
}
