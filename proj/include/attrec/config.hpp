#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "attrec/attenuation.hpp"
#include "attrec/phantom.hpp"
#include "attrec/signal.hpp"
#include "attrec/solvers.hpp"

namespace attrec {

// Douglas-Rachford settings as configured; absolute lambda/tau override the
// data-derived factors when set.
struct DrOptions {
    std::optional<double> lambda;
    std::optional<double> tau;
    double lambda_factor = 0.05; // of max |M^T p|
    double tau_factor = 1.0;     // of 1 / sigma_max^2
    double relaxation = 1.0;
    std::size_t max_iters = 200;
    double tol = 1e-8;
};

struct BenchmarkSettings {
    // separations as multiples of the time resolution limit at the headline r
    std::vector<double> separation_factors{0.4, 0.6, 0.8, 1.0, 1.25, 1.5, 2.0, 4.0};
    // explicit separations in seconds take precedence when nonempty
    std::vector<double> separations_s;
    double center_position = 6.5e-6;
    double smoothing_width = 8e-9;
    std::vector<std::size_t> dr_iters{20, 200};
    std::size_t repeats = 5;
    double peak_threshold = 0.2;
    double valley_threshold = 0.8;
    // separability window spans the sources plus this many resolution limits
    double roi_pad_factor = 1.5;
    double dr_tau_factor = 1500.0;
    double dr_lambda_factor = 0.002;
    double dr_relaxation = 1.5;
    double dr_tol = 0.0;
};

struct ExperimentConfig {
    Grid grid{4096, 2e-9, 0.0};
    AttenuationLaw law;
    std::vector<double> r_list{0.006, 0.020};
    double snr = 100.0;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    std::filesystem::path impulse_response_csv;
    PhantomSpec phantom;
    std::optional<double> tsvd_explicit_cut;
    DrOptions dr;
    BenchmarkSettings benchmark;
};

// Built-in defaults, a soft tissue style medium probed at 6 and 20 mm.
ExperimentConfig default_config();

// INI style file: [section] headers, key = value pairs, # comments.
// Unknown sections or keys are rejected.
ExperimentConfig load_config(const std::filesystem::path& path);

// Fraction of forward-model energy that would wrap around the grid end,
// measured on a grid padded to twice the length. Distance r is taken at the
// worst case, the largest entry of r_list.
double wrap_energy_ratio(const AttenuationLaw& law, const Grid& grid, double r,
                         const Signal& phantom);

// Full validation including the wrap-around check; load_config calls this.
void validate_config(const ExperimentConfig& cfg);

} // namespace attrec
