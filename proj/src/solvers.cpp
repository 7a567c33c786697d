#include "attrec/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace attrec {

namespace {

double objective(const ForwardOperator& op, const Signal& p, const Signal& x, double lambda)
{
    double l1 = 0.0;
    for (double v : x.samples) {
        if (v < -1e-12)
            return std::numeric_limits<double>::infinity();
        l1 += std::abs(v);
    }
    Signal mx = apply(op, x);
    double fid = 0.0;
    for (std::size_t i = 0; i < mx.samples.size(); ++i) {
        const double d = mx.samples[i] - p.samples[i];
        fid += d * d;
    }
    return 0.5 * fid + lambda * l1;
}

double residual_norm(const ForwardOperator& op, const Signal& p, const Signal& x)
{
    Signal mx = apply(op, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < mx.samples.size(); ++i) {
        const double d = mx.samples[i] - p.samples[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

void check_data(const ForwardOperator& op, const Signal& p)
{
    validate_signal(p);
    if (!(p.grid == op.grid))
        throw std::invalid_argument("data grid does not match operator grid");
}

} // namespace

SolverResult tsvd_reconstruct(const ForwardOperator& op, const Signal& p, const TsvdConfig& cfg)
{
    check_data(op, p);
    if (!cfg.explicit_cut && !(cfg.snr > 1.0))
        throw std::invalid_argument("tsvd needs snr > 1 or an explicit cut");
    if (cfg.explicit_cut && !(*cfg.explicit_cut > 0.0))
        throw std::invalid_argument("explicit cut must be positive");

    Spectrum sp = forward_dft(p);
    const auto omegas = omega_bins(op.grid);
    double kept_omega = 0.0;
    for (std::size_t j = 0; j < op.grid.n; ++j) {
        const double sigma = std::abs(op.multipliers[j]);
        bool keep;
        if (cfg.explicit_cut)
            keep = std::abs(omegas[j]) <= *cfg.explicit_cut;
        else
            keep = sigma >= 1.0 / cfg.snr;
        if (keep) {
            if (sigma == 0.0)
                throw std::runtime_error("singular value is zero on a retained bin");
            sp.bins[j] /= op.multipliers[j];
            kept_omega = std::max(kept_omega, std::abs(omegas[j]));
        } else {
            sp.bins[j] = 0.0;
        }
    }

    SolverResult res;
    res.reconstruction = inverse_dft(sp);
    res.iterations_run = 1;
    res.effective_cutoff_omega = kept_omega;
    res.residual_norm_history.push_back(residual_norm(op, p, res.reconstruction));
    res.objective_history.push_back(objective(op, p, res.reconstruction, 0.0));
    res.fixed_point_residual_history.push_back(0.0);
    return res;
}

std::vector<double> prox_sparse_nonneg(const std::vector<double>& x, double theta)
{
    if (!(theta >= 0.0))
        throw std::invalid_argument("prox threshold must be nonnegative");
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = std::max(x[i] - theta, 0.0);
    return y;
}

Signal prox_fidelity(const ForwardOperator& op, const Signal& p, const Signal& z, double tau)
{
    check_data(op, p);
    check_data(op, z);
    if (!(tau >= 0.0))
        throw std::invalid_argument("tau must be nonnegative");
    Spectrum zh = forward_dft(z);
    Spectrum ph = forward_dft(p);
    for (std::size_t j = 0; j < op.grid.n; ++j) {
        const std::complex<double> m = op.multipliers[j];
        zh.bins[j] = (zh.bins[j] + tau * std::conj(m) * ph.bins[j])
            / (1.0 + tau * std::norm(m));
    }
    return inverse_dft(zh);
}

SolverResult dr_reconstruct(const ForwardOperator& op, const Signal& p, const DrConfig& cfg)
{
    check_data(op, p);
    if (!(cfg.lambda >= 0.0))
        throw std::invalid_argument("lambda must be nonnegative");
    if (!(cfg.tau > 0.0))
        throw std::invalid_argument("tau must be positive");
    if (!(cfg.relaxation > 0.0) || !(cfg.relaxation < 2.0))
        throw std::invalid_argument("relaxation must lie in (0, 2)");
    if (cfg.max_iters == 0)
        throw std::invalid_argument("max_iters must be positive");
    if (!(cfg.tol >= 0.0))
        throw std::invalid_argument("tol must be nonnegative");

    const std::size_t n = op.grid.n;
    Signal z;
    z.grid = op.grid;
    z.samples.assign(n, 0.0);
    Signal y = z;

    SolverResult res;
    res.residual_norm_history.reserve(cfg.max_iters);
    res.objective_history.reserve(cfg.max_iters);
    res.fixed_point_residual_history.reserve(cfg.max_iters);

    const double theta = cfg.tau * cfg.lambda;
    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        const Signal x = prox_fidelity(op, p, z, cfg.tau);
        std::vector<double> reflected(n);
        for (std::size_t i = 0; i < n; ++i)
            reflected[i] = 2.0 * x.samples[i] - z.samples[i];
        y.samples = prox_sparse_nonneg(reflected, theta);

        double step2 = 0.0;
        double znorm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = cfg.relaxation * (y.samples[i] - x.samples[i]);
            znorm2 += z.samples[i] * z.samples[i];
            z.samples[i] += d;
            step2 += d * d;
        }
        const double step = std::sqrt(step2);
        res.iterations_run = k + 1;
        res.residual_norm_history.push_back(residual_norm(op, p, y));
        res.objective_history.push_back(objective(op, p, y, cfg.lambda));
        res.fixed_point_residual_history.push_back(step);
        if (step < cfg.tol * std::max(std::sqrt(znorm2), 1e-300)) {
            res.stopped_by_tol = true;
            break;
        }
    }

    for (double& v : y.samples)
        v = std::max(v, 0.0);
    res.reconstruction = std::move(y);
    return res;
}

double default_tau(const ForwardOperator& op)
{
    const double smax = max_singular_value(op);
    if (smax == 0.0)
        throw std::invalid_argument("operator has no nonzero singular value");
    return 1.0 / (smax * smax);
}

double default_lambda(const ForwardOperator& op, const Signal& p)
{
    Signal mtp = apply_adjoint(op, p);
    double peak = 0.0;
    for (double v : mtp.samples)
        peak = std::max(peak, std::abs(v));
    return 0.05 * peak;
}

} // namespace attrec
