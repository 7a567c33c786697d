#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "attrec/attenuation.hpp"
#include "attrec/config.hpp"
#include "attrec/experiment.hpp"
#include "attrec/forward_operator.hpp"
#include "attrec/phantom.hpp"
#include "attrec/resolution.hpp"
#include "attrec/signal.hpp"
#include "attrec/solvers.hpp"

namespace {

using namespace attrec;

std::string r_label(double r)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%gmm", r * 1000.0);
    return buf;
}

std::filesystem::path ensure_out_dir(const ExperimentConfig& cfg, const std::string& override_dir)
{
    std::filesystem::path dir = override_dir.empty() ? cfg.out_dir
                                                     : std::filesystem::path(override_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void print_conversion(const AttenuationLaw& law)
{
    std::printf("alpha0 = %.17g dB cm^-1 MHz^-%g = %.17g Np m^-1 (rad/s)^-%g\n",
                alpha0_to_db_cm_mhz(law.alpha0, law.y), law.y, law.alpha0, law.y);
}

struct ReconArgs {
    std::string config;
    std::string input;
    std::string method = "tsvd";
    std::string out_dir;
    double r = 0.0;
    double snr = 0.0;
    double lambda = -1.0;
    double tau = 0.0;
    double tol = -1.0;
    double relaxation = 0.0;
    double explicit_cut = 0.0;
    std::size_t iters = 0;
};

int cmd_simulate(const std::string& config_path, const std::string& out_override,
                 std::uint64_t seed_override, bool has_seed, bool verbose)
{
    ExperimentConfig cfg = load_config(config_path);
    if (has_seed)
        cfg.seed = seed_override;
    const auto out_dir = ensure_out_dir(cfg, out_override);

    const ForwardRun run = run_forward(cfg);
    write_signal_csv(out_dir / "phantom.csv", run.phantom);

    nlohmann::json meta;
    meta["alpha0_np_m_rad_s"] = cfg.law.alpha0;
    meta["alpha0_db_cm_mhz_y"] = alpha0_to_db_cm_mhz(cfg.law.alpha0, cfg.law.y);
    meta["exponent_y"] = cfg.law.y;
    meta["c0_m_s"] = cfg.law.c0;
    meta["snr"] = cfg.snr;
    meta["seed"] = cfg.seed;
    meta["grid"] = {{"n", cfg.grid.n}, {"dt_s", cfg.grid.dt}, {"t0_s", cfg.grid.t0}};
    nlohmann::json channels = nlohmann::json::array();

    for (std::size_t i = 0; i < run.r.size(); ++i) {
        const std::string label = r_label(run.r[i]);
        write_signal_csv(out_dir / ("attenuated_" + label + ".csv"), run.clean[i]);
        write_signal_csv(out_dir / ("measurement_" + label + ".csv"), run.noisy[i]);
        nlohmann::json ch;
        ch["r_m"] = run.r[i];
        ch["wrap_energy_ratio"] = run.wrap_ratios[i];
        ch["max_factor_deviation"] = run.factor_deviations[i];
        if (i < run.reports.size()) {
            ch["f_cut_hz"] = run.reports[i].f_cut;
            ch["delta_time_s"] = run.reports[i].delta_time;
            ch["delta_space_m"] = run.reports[i].delta_space;
        }
        channels.push_back(ch);
        std::printf("r = %s: wrote attenuated_%s.csv, measurement_%s.csv\n",
                    label.c_str(), label.c_str(), label.c_str());
        if (verbose && i < run.reports.size())
            std::printf("  f_cut = %.6g MHz, delta_t = %.6g ns, delta_x = %.6g um, wrap = %.3g\n",
                        run.reports[i].f_cut / 1e6, run.reports[i].delta_time * 1e9,
                        run.reports[i].delta_space * 1e6, run.wrap_ratios[i]);
    }
    meta["channels"] = channels;
    std::ofstream mf(out_dir / "meta.json");
    mf << meta.dump(2) << "\n";
    if (verbose)
        print_conversion(cfg.law);
    std::printf("wrote %s\n", (out_dir / "meta.json").string().c_str());
    return 0;
}

int cmd_cutoff(const std::string& config_path, double r_override, const std::string& out_override,
               bool verbose)
{
    ExperimentConfig cfg = load_config(config_path);
    const auto out_dir = ensure_out_dir(cfg, out_override);
    std::vector<double> rs = cfg.r_list;
    if (r_override > 0.0)
        rs = {r_override};

    if (verbose)
        print_conversion(cfg.law);
    std::ofstream out(out_dir / "cutoff.csv");
    out << "r_m,omega_cut_rad_s,f_cut_hz,c_at_cut_m_s,delta_time_s,delta_space_m\n";
    char line[220];
    std::vector<ResolutionReport> reps;
    for (double r : rs) {
        const ResolutionReport rep = cutoff_frequency(cfg.law, r, cfg.snr);
        reps.push_back(rep);
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r,
                      rep.omega_cut, rep.f_cut, rep.c_at_cut, rep.delta_time, rep.delta_space);
        out << line;
        std::printf("r = %-8s f_cut = %10.6g MHz  delta_t = %8.5g ns  delta_x = %8.5g um\n",
                    r_label(r).c_str(), rep.f_cut / 1e6, rep.delta_time * 1e9,
                    rep.delta_space * 1e6);
    }
    if (reps.size() >= 2 && reps.front().f_cut != reps.back().f_cut) {
        const double y_hat = implied_exponent(reps.front().f_cut, rs.front(),
                                              reps.back().f_cut, rs.back());
        std::printf("implied exponent from the two extreme distances: %.6g\n", y_hat);
    }
    std::printf("wrote %s\n", (out_dir / "cutoff.csv").string().c_str());
    return 0;
}

int cmd_reconstruct(const ReconArgs& a, bool verbose)
{
    ExperimentConfig cfg = load_config(a.config);
    const auto out_dir = ensure_out_dir(cfg, a.out_dir);
    const Signal p = read_signal_csv(a.input);
    const double snr = a.snr > 0.0 ? a.snr : cfg.snr;

    Signal ir;
    const Signal* irp = nullptr;
    if (!cfg.impulse_response_csv.empty()) {
        ir = read_signal_csv(cfg.impulse_response_csv);
        irp = &ir;
    }
    const ForwardOperator op = build_operator(cfg.law, a.r, p.grid, irp);

    SolverResult res;
    if (a.method == "tsvd") {
        TsvdConfig tc;
        tc.snr = snr;
        tc.explicit_cut = cfg.tsvd_explicit_cut;
        if (a.explicit_cut > 0.0)
            tc.explicit_cut = a.explicit_cut;
        res = tsvd_reconstruct(op, p, tc);
        std::printf("tsvd: effective cut-off %.6g MHz\n",
                    res.effective_cutoff_omega / (2.0 * 3.14159265358979323846 * 1e6));
    } else if (a.method == "dr") {
        double base = 0.0;
        {
            const Signal mtp = apply_adjoint(op, p);
            for (double v : mtp.samples)
                base = std::max(base, std::abs(v));
        }
        DrConfig dc;
        dc.lambda = a.lambda >= 0.0 ? a.lambda
                  : cfg.dr.lambda  ? *cfg.dr.lambda
                                   : cfg.dr.lambda_factor * base;
        dc.tau = a.tau > 0.0 ? a.tau
               : cfg.dr.tau  ? *cfg.dr.tau
                             : cfg.dr.tau_factor * default_tau(op);
        dc.relaxation = a.relaxation > 0.0 ? a.relaxation : cfg.dr.relaxation;
        dc.max_iters = a.iters > 0 ? a.iters : cfg.dr.max_iters;
        dc.tol = a.tol >= 0.0 ? a.tol : cfg.dr.tol;
        res = dr_reconstruct(op, p, dc);
        std::printf("dr: %zu iterations%s, final residual %.6g\n", res.iterations_run,
                    res.stopped_by_tol ? " (stopped by tol)" : "",
                    res.residual_norm_history.back());
    } else {
        throw std::runtime_error("unknown method '" + a.method + "', want tsvd or dr");
    }

    write_signal_csv(out_dir / "reconstruction.csv", res.reconstruction);
    std::ofstream diag(out_dir / "diagnostics.csv");
    diag << "iter,residual,objective,fp_residual\n";
    char line[160];
    for (std::size_t k = 0; k < res.iterations_run; ++k) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", k + 1,
                      res.residual_norm_history[k], res.objective_history[k],
                      res.fixed_point_residual_history[k]);
        diag << line;
    }
    if (verbose)
        std::printf("max factor deviation over the checked band: %.6g\n",
                    op.max_factor_deviation);
    std::printf("wrote %s and diagnostics.csv\n",
                (out_dir / "reconstruction.csv").string().c_str());
    return 0;
}

int cmd_benchmark(const std::string& config_path, std::size_t repeats,
                  const std::string& out_override)
{
    ExperimentConfig cfg = load_config(config_path);
    const auto out_dir = ensure_out_dir(cfg, out_override);
    const BenchmarkResult res = run_benchmark(cfg, repeats);
    write_benchmark_csv(out_dir / "benchmark.csv", res);
    write_benchmark_json(out_dir / "benchmark.json", res);

    const BenchmarkRun& h = res.headline;
    std::printf("headline r = %s: f_cut = %.6g MHz, delta_t = %.6g ns, delta_x = %.6g um\n",
                r_label(h.r).c_str(), h.report.f_cut / 1e6, h.report.delta_time * 1e9,
                h.report.delta_space * 1e6);
    for (const auto& row : h.rows) {
        std::printf("  sep = %8.4g ns (%5.3g x limit):", row.separation_s * 1e9,
                    row.separation_s / h.report.delta_time);
        for (const auto& m : row.methods)
            std::printf("  %s %s (%.2g)", m.method.c_str(),
                        m.resolved ? "resolved" : "unresolved", m.resolve_rate);
        std::printf("\n");
    }
    for (const auto& [name, sep] : h.smallest_resolved_s) {
        if (std::isnan(sep))
            std::printf("%s: nothing resolved\n", name.c_str());
        else
            std::printf("%s: smallest resolved separation %.6g ns (%.3g x limit)\n",
                        name.c_str(), sep * 1e9, sep / h.report.delta_time);
    }
    std::printf("wrote %s and benchmark.json\n", (out_dir / "benchmark.csv").string().c_str());
    return 0;
}

int cmd_plotdata(const std::string& config_path, const std::string& out_override)
{
    ExperimentConfig cfg = load_config(config_path);
    const auto out_dir = ensure_out_dir(cfg, out_override);
    const ForwardRun run = run_forward(cfg);

    std::vector<std::pair<std::string, Signal>> signals;
    signals.emplace_back("phantom", run.phantom);
    for (std::size_t i = 0; i < run.r.size(); ++i)
        signals.emplace_back("p_" + r_label(run.r[i]), run.noisy[i]);
    emit_plot_data(out_dir / "plot_signals.csv", out_dir / "plot_signals.svg", signals);

    // reconstructions at the worst-case distance, benchmark solver settings
    const std::size_t worst = static_cast<std::size_t>(
        std::max_element(run.r.begin(), run.r.end()) - run.r.begin());
    Signal ir;
    const Signal* irp = nullptr;
    if (!cfg.impulse_response_csv.empty()) {
        ir = read_signal_csv(cfg.impulse_response_csv);
        irp = &ir;
    }
    const ForwardOperator op = build_operator(cfg.law, run.r[worst], cfg.grid, irp);
    const Signal& p = run.noisy[worst];

    std::vector<std::pair<std::string, Signal>> recons;
    recons.emplace_back("phantom", run.phantom);
    recons.emplace_back("tsvd", tsvd_reconstruct(op, p, {cfg.snr, {}}).reconstruction);
    const double tau = cfg.benchmark.dr_tau_factor * default_tau(op);
    double base = 0.0;
    {
        const Signal mtp = apply_adjoint(op, p);
        for (double v : mtp.samples)
            base = std::max(base, std::abs(v));
    }
    for (std::size_t iters : cfg.benchmark.dr_iters) {
        DrConfig dc;
        dc.lambda = cfg.benchmark.dr_lambda_factor * base;
        dc.tau = tau;
        dc.relaxation = cfg.benchmark.dr_relaxation;
        dc.max_iters = iters;
        dc.tol = cfg.benchmark.dr_tol;
        recons.emplace_back("dr" + std::to_string(iters),
                            dr_reconstruct(op, p, dc).reconstruction);
    }
    emit_plot_data(out_dir / "plot_recon.csv", out_dir / "plot_recon.svg", recons);

    std::printf("wrote plot_signals.{csv,svg} and plot_recon.{csv,svg} under %s\n",
                out_dir.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"frequency dependent attenuation: simulation, limits, reconstruction"};
    app.require_subcommand(1);
    app.fallthrough();
    bool verbose = false;
    app.add_flag("--verbose", verbose, "print extra diagnostics");

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;
    double r_override = 0.0;
    std::size_t repeats = 0;
    ReconArgs recon;

    auto* sim = app.add_subcommand("simulate", "generate phantom and attenuated measurements");
    sim->add_option("--config", config_path, "experiment config file")->required();
    sim->add_option("--out", out_dir, "output directory override");
    sim->add_option("--seed", seed, "noise seed override")->each([&](const std::string&) {
        has_seed = true;
    });

    auto* cut = app.add_subcommand("cutoff", "report cut-off frequency and resolution limits");
    cut->add_option("--config", config_path, "experiment config file")->required();
    cut->add_option("--r", r_override, "single propagation distance in meters");
    cut->add_option("--out", out_dir, "output directory override");

    auto* rec = app.add_subcommand("reconstruct", "invert a measured signal");
    rec->add_option("--config", recon.config, "experiment config file")->required();
    rec->add_option("--input", recon.input, "measurement csv")->required();
    rec->add_option("--r", recon.r, "propagation distance in meters")->required();
    rec->add_option("--method", recon.method, "tsvd or dr")->check(CLI::IsMember({"tsvd", "dr"}));
    rec->add_option("--snr", recon.snr, "signal-to-noise ratio override");
    rec->add_option("--lambda", recon.lambda, "dr sparsity weight");
    rec->add_option("--tau", recon.tau, "dr step size");
    rec->add_option("--iters", recon.iters, "dr iteration cap");
    rec->add_option("--tol", recon.tol, "dr stopping tolerance");
    rec->add_option("--relaxation", recon.relaxation, "dr relaxation in (0, 2)");
    rec->add_option("--explicit-cut", recon.explicit_cut, "tsvd cut-off in rad/s");
    rec->add_option("--out", recon.out_dir, "output directory override");

    auto* bench = app.add_subcommand("benchmark", "two-source separability study");
    bench->add_option("--config", config_path, "experiment config file")->required();
    bench->add_option("--repeats", repeats, "noise repeats per separation");
    bench->add_option("--out", out_dir, "output directory override");

    auto* plot = app.add_subcommand("plotdata", "emit normalized plot csv and svg");
    plot->add_option("--config", config_path, "experiment config file")->required();
    plot->add_option("--out", out_dir, "output directory override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, out_dir, seed, has_seed, verbose);
        if (cut->parsed())
            return cmd_cutoff(config_path, r_override, out_dir, verbose);
        if (rec->parsed())
            return cmd_reconstruct(recon, verbose);
        if (bench->parsed())
            return cmd_benchmark(config_path, repeats, out_dir);
        if (plot->parsed())
            return cmd_plotdata(config_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
