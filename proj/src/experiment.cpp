#include "attrec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "attrec/solvers.hpp"

namespace attrec {

namespace {

Signal load_impulse_response(const ExperimentConfig& cfg)
{
    return read_signal_csv(cfg.impulse_response_csv);
}

double peak_abs(const Signal& s)
{
    double peak = 0.0;
    for (double v : s.samples)
        peak = std::max(peak, std::abs(v));
    return peak;
}

} // namespace

ForwardRun run_forward(const ExperimentConfig& cfg)
{
    validate_config(cfg);
    ForwardRun run;
    run.phantom = generate_phantom(cfg.phantom, cfg.grid);
    run.r = cfg.r_list;
    const double ref = peak_abs(run.phantom);

    Signal ir;
    const bool has_ir = !cfg.impulse_response_csv.empty();
    if (has_ir)
        ir = load_impulse_response(cfg);

    for (std::size_t i = 0; i < cfg.r_list.size(); ++i) {
        const double r = cfg.r_list[i];
        const ForwardOperator op = build_operator(cfg.law, r, cfg.grid,
                                                  has_ir ? &ir : nullptr);
        Signal clean = apply(op, run.phantom);
        NoiseModel nm{cfg.snr, cfg.seed + i};
        run.noisy.push_back(add_noise(clean, nm, ref));
        run.clean.push_back(std::move(clean));
        run.wrap_ratios.push_back(wrap_energy_ratio(cfg.law, cfg.grid, r, run.phantom));
        run.factor_deviations.push_back(op.max_factor_deviation);
        if (cfg.law.alpha0 > 0.0)
            run.reports.push_back(cutoff_frequency(cfg.law, r, cfg.snr));
    }
    return run;
}

namespace {

struct BenchState {
    const ExperimentConfig& cfg;
    std::size_t repeats;
    Signal ir;
    bool has_ir = false;
};

SeparabilityVerdict judge(const ExperimentConfig& cfg, const Signal& recon,
                          double pos0, double pos1, double delta_time)
{
    const Grid& g = recon.grid;
    const auto i0 = std::llround((pos0 - g.t0) / g.dt);
    const auto i1 = std::llround((pos1 - g.t0) / g.dt);
    const auto pad = std::llround(cfg.benchmark.roi_pad_factor * delta_time / g.dt);
    const auto lo = std::max<long long>(0, i0 - pad);
    const auto hi = std::min<long long>(static_cast<long long>(g.n), i1 + pad + 1);
    if (hi - lo < 3)
        throw std::runtime_error("benchmark window too small for separability");
    const Signal window = crop_signal(recon, {static_cast<std::size_t>(lo),
                                              static_cast<std::size_t>(hi)});
    return separability(window, cfg.benchmark.peak_threshold, cfg.benchmark.valley_threshold);
}

BenchmarkRun run_benchmark_at(const BenchState& st, double r, const std::vector<double>& seps)
{
    const ExperimentConfig& cfg = st.cfg;
    const BenchmarkSettings& b = cfg.benchmark;

    BenchmarkRun run;
    run.r = r;
    run.report = cutoff_frequency(cfg.law, r, cfg.snr);
    const double delta = run.report.delta_time;

    const ForwardOperator op = build_operator(cfg.law, r, cfg.grid,
                                              st.has_ir ? &st.ir : nullptr);
    const double tau = b.dr_tau_factor * default_tau(op);

    std::vector<std::string> method_names;
    method_names.push_back("tsvd");
    for (std::size_t k : b.dr_iters)
        method_names.push_back("dr" + std::to_string(k));

    for (double sep : seps) {
        const double pos0 = b.center_position - sep / 2.0;
        const double pos1 = b.center_position + sep / 2.0;
        PhantomSpec spec;
        spec.kind = PhantomKind::two_delta;
        spec.positions = {pos0, pos1};
        spec.smoothing_width = b.smoothing_width;
        const Signal phantom = generate_phantom(spec, cfg.grid);
        const double ref = peak_abs(phantom);
        const Signal clean = apply(op, phantom);

        std::vector<std::size_t> hits(method_names.size(), 0);
        std::vector<double> first_valley(method_names.size(), 0.0);
        for (std::size_t rep = 0; rep < st.repeats; ++rep) {
            const Signal noisy = add_noise(clean, {cfg.snr, cfg.seed + rep}, ref);

            std::vector<SeparabilityVerdict> verdicts;
            verdicts.push_back(judge(cfg, tsvd_reconstruct(op, noisy, {cfg.snr, {}}).reconstruction,
                                     pos0, pos1, delta));
            const double lambda = b.dr_lambda_factor * peak_abs(apply_adjoint(op, noisy));
            for (std::size_t iters : b.dr_iters) {
                DrConfig dc;
                dc.lambda = lambda;
                dc.tau = tau;
                dc.relaxation = b.dr_relaxation;
                dc.max_iters = iters;
                dc.tol = b.dr_tol;
                verdicts.push_back(judge(cfg, dr_reconstruct(op, noisy, dc).reconstruction,
                                         pos0, pos1, delta));
            }
            for (std::size_t m = 0; m < verdicts.size(); ++m) {
                if (verdicts[m].resolved)
                    ++hits[m];
                if (rep == 0)
                    first_valley[m] = verdicts[m].valley_ratio;
            }
        }

        BenchmarkRow row;
        row.separation_s = sep;
        row.separation_m = sep * run.report.c_at_cut;
        for (std::size_t m = 0; m < method_names.size(); ++m) {
            MethodOutcome out;
            out.method = method_names[m];
            out.resolve_rate = static_cast<double>(hits[m]) / static_cast<double>(st.repeats);
            out.resolved = 2 * hits[m] >= st.repeats;
            out.valley_ratio = first_valley[m];
            row.methods.push_back(std::move(out));
        }
        run.rows.push_back(std::move(row));
    }

    for (std::size_t m = 0; m < method_names.size(); ++m) {
        double smallest = std::numeric_limits<double>::quiet_NaN();
        for (const auto& row : run.rows) {
            if (row.methods[m].resolved) {
                smallest = row.separation_s;
                break;
            }
        }
        run.smallest_resolved_s.emplace_back(method_names[m], smallest);
    }
    return run;
}

} // namespace

BenchmarkResult run_benchmark(const ExperimentConfig& cfg, std::size_t repeats_override)
{
    validate_config(cfg);
    const double r_max = *std::max_element(cfg.r_list.begin(), cfg.r_list.end());
    std::vector<double> seps = cfg.benchmark.separations_s;
    if (seps.empty()) {
        const double delta = cutoff_frequency(cfg.law, r_max, cfg.snr).delta_time;
        for (double f : cfg.benchmark.separation_factors)
            seps.push_back(f * delta);
    }
    return run_benchmark(cfg, seps, repeats_override);
}

BenchmarkResult run_benchmark(const ExperimentConfig& cfg,
                              const std::vector<double>& separations_s,
                              std::size_t repeats_override)
{
    validate_config(cfg);
    std::vector<double> seps = separations_s;
    std::sort(seps.begin(), seps.end());
    seps.erase(std::unique(seps.begin(), seps.end()), seps.end());
    if (seps.size() < 3)
        throw std::invalid_argument("benchmark needs at least 3 distinct separations");
    const double r_max = *std::max_element(cfg.r_list.begin(), cfg.r_list.end());
    const double delta = cutoff_frequency(cfg.law, r_max, cfg.snr).delta_time;
    if (!(seps.front() < delta) || !(seps.back() > delta))
        throw std::invalid_argument(
            "benchmark separations must span both sides of the resolution limit");

    BenchState st{cfg, repeats_override ? repeats_override : cfg.benchmark.repeats, {}, false};
    if (!cfg.impulse_response_csv.empty()) {
        st.ir = load_impulse_response(cfg);
        st.has_ir = true;
    }

    BenchmarkResult res;
    std::vector<double> rs = cfg.r_list;
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    for (double r : rs)
        res.per_r.push_back(run_benchmark_at(st, r, seps));
    res.headline = res.per_r.back();
    return res;
}

void write_benchmark_csv(const std::filesystem::path& path, const BenchmarkResult& res)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "r,f_cut_hz,separation_s,separation_m,method,resolve_rate,resolved,valley_ratio\n";
    char line[256];
    for (const auto& run : res.per_r) {
        for (const auto& row : run.rows) {
            for (const auto& m : row.methods) {
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%s,%.17g,%d,%.17g\n",
                              run.r, run.report.f_cut, row.separation_s, row.separation_m,
                              m.method.c_str(), m.resolve_rate, m.resolved ? 1 : 0,
                              m.valley_ratio);
                out << line;
            }
        }
    }
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

namespace {

nlohmann::json run_to_json(const BenchmarkRun& run)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : run.rows) {
        nlohmann::json methods = nlohmann::json::array();
        for (const auto& m : row.methods) {
            methods.push_back({{"method", m.method},
                               {"resolve_rate", m.resolve_rate},
                               {"resolved", m.resolved},
                               {"valley_ratio", m.valley_ratio}});
        }
        rows.push_back({{"separation_s", row.separation_s},
                        {"separation_m", row.separation_m},
                        {"methods", methods}});
    }
    nlohmann::json smallest = nlohmann::json::object();
    for (const auto& [name, sep] : run.smallest_resolved_s) {
        if (std::isnan(sep))
            smallest[name] = nullptr;
        else
            smallest[name] = sep;
    }
    return {{"r", run.r},
            {"f_cut_hz", run.report.f_cut},
            {"delta_time_s", run.report.delta_time},
            {"delta_space_m", run.report.delta_space},
            {"c_at_cut_m_s", run.report.c_at_cut},
            {"rows", rows},
            {"smallest_resolved_s", smallest}};
}

} // namespace

void write_benchmark_json(const std::filesystem::path& path, const BenchmarkResult& res)
{
    nlohmann::json doc;
    doc["headline"] = run_to_json(res.headline);
    doc["delta_limit_s"] = res.headline.report.delta_time;
    doc["delta_limit_m"] = res.headline.report.delta_space;
    nlohmann::json per_r = nlohmann::json::array();
    for (const auto& run : res.per_r)
        per_r.push_back(run_to_json(run));
    doc["per_r"] = per_r;

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

void emit_plot_data(const std::filesystem::path& csv_path,
                    const std::filesystem::path& svg_path,
                    const std::vector<std::pair<std::string, Signal>>& series)
{
    if (series.empty())
        throw std::invalid_argument("plot data needs at least one series");
    const Grid grid = series.front().second.grid;
    std::vector<std::vector<double>> cols;
    for (const auto& [name, sig] : series) {
        validate_signal(sig);
        if (!(sig.grid == grid))
            throw std::invalid_argument("plot series '" + name + "' is on a different grid");
        const double peak = peak_abs(sig);
        if (peak == 0.0)
            throw std::invalid_argument("plot series '" + name
                                        + "' is identically zero, cannot normalize");
        std::vector<double> col(sig.samples);
        for (double& v : col)
            v /= peak;
        cols.push_back(std::move(col));
    }

    {
        std::ofstream out(csv_path);
        if (!out)
            throw std::runtime_error("cannot open " + csv_path.string() + " for writing");
        out << "t";
        for (const auto& [name, sig] : series)
            out << "," << name;
        out << "\n";
        char num[40];
        for (std::size_t i = 0; i < grid.n; ++i) {
            std::snprintf(num, sizeof num, "%.17g", grid.time_at(i));
            out << num;
            for (const auto& col : cols) {
                std::snprintf(num, sizeof num, ",%.17g", col[i]);
                out << num;
            }
            out << "\n";
        }
        if (!out)
            throw std::runtime_error("write failed for " + csv_path.string());
    }

    // standalone line plot, one polyline per series
    const double width = 960.0, height = 540.0;
    const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 45.0;
    double ymin = 0.0, ymax = 0.0;
    for (const auto& col : cols)
        for (double v : col) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax == ymin)
        ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    const double tmin = grid.t0;
    const double tmax = grid.time_at(grid.n - 1);
    auto px = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * (width - ml - mr); };
    auto py = [&](double v) { return height - mb - (v - ymin) / (ymax - ymin) * (height - mt - mb); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const std::size_t ncolors = sizeof palette / sizeof palette[0];

    std::ofstream out(svg_path);
    if (!out)
        throw std::runtime_error("cannot open " + svg_path.string() + " for writing");
    char buf[160];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"540\" "
           "viewBox=\"0 0 960 540\">\n";
    out << "<rect width=\"960\" height=\"540\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                  "fill=\"none\" stroke=\"black\"/>\n",
                  ml, mt, width - ml - mr, height - mt - mb);
    out << buf;
    if (ymin < 0.0 && ymax > 0.0) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#cccccc\"/>\n",
                      ml, py(0.0), width - mr, py(0.0));
        out << buf;
    }
    for (std::size_t k = 0; k < cols.size(); ++k) {
        out << "<polyline fill=\"none\" stroke=\"" << palette[k % ncolors]
            << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < grid.n; ++i) {
            std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px(grid.time_at(i)), py(cols[k][i]));
            out << buf;
        }
        out << "\"/>\n";
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double lx = width - mr - 190.0;
        const double ly = mt + 18.0 + 16.0 * static_cast<double>(k);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"%s\" stroke-width=\"2\"/>\n",
                      lx, ly - 4.0, lx + 24.0, ly - 4.0, palette[k % ncolors]);
        out << buf;
        out << "<text x=\"" << lx + 30.0 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[k].first
            << "</text>\n";
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"middle\">t [s]</text>\n",
                  ml + (width - ml - mr) / 2.0, height - 10.0);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\">"
                  "%.3g</text>\n",
                  5.0, py(ymax) + 4.0, ymax);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\">"
                  "%.3g</text>\n",
                  5.0, py(ymin) + 4.0, ymin);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\">"
                  "%.6g</text>\n",
                  ml, height - mb + 16.0, tmin);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"end\">%.6g</text>\n",
                  width - mr, height - mb + 16.0, tmax);
    out << buf;
    out << "</svg>\n";
    if (!out)
        throw std::runtime_error("write failed for " + svg_path.string());
}

} // namespace attrec
