#pragma once

#include <filesystem>
#include <vector>

#include "attrec/signal.hpp"

namespace attrec {

enum class PhantomKind {
    single_delta,
    two_delta,
    from_file,
};

// Initial pressure profile along the propagation axis, expressed over the
// retarded time grid. Delta sources carry unit area by default: a bare delta
// puts amplitude/dt at the nearest grid sample, a smoothed one spreads it
// over a Gaussian of width sigma = smoothing_width that still integrates to
// the amplitude.
struct PhantomSpec {
    PhantomKind kind = PhantomKind::single_delta;
    std::vector<double> positions;   // seconds, one or two entries
    std::vector<double> amplitudes;  // defaults to 1 per source
    double smoothing_width = 0.0;    // seconds, 0 keeps bare deltas
    std::filesystem::path file;      // for from_file
};

Signal generate_phantom(const PhantomSpec& spec, const Grid& grid);

} // namespace attrec
