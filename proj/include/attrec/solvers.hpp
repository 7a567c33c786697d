#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "attrec/forward_operator.hpp"
#include "attrec/signal.hpp"

namespace attrec {

// Truncated SVD inversion in the DFT basis. Bins with |m_j| < 1/snr are
// zeroed; with explicit_cut set, bins with |omega_j| > explicit_cut are
// zeroed instead.
struct TsvdConfig {
    double snr = 0.0;
    std::optional<double> explicit_cut;
};

// Douglas-Rachford splitting for
//   min 0.5 * ||M x - p||^2 + lambda * ||x||_1  subject to x >= 0.
struct DrConfig {
    double lambda = 0.0;
    double tau = 0.0;
    double relaxation = 1.0;
    std::size_t max_iters = 200;
    double tol = 1e-8;
};

struct SolverResult {
    Signal reconstruction;
    std::size_t iterations_run = 0;
    bool stopped_by_tol = false;
    // per iteration: ||M x - p||_2
    std::vector<double> residual_norm_history;
    // per iteration: 0.5 * ||M x - p||^2 + lambda * ||x||_1, +inf when the
    // iterate dips below -1e-12
    std::vector<double> objective_history;
    // per iteration: ||z_{k+1} - z_k||_2
    std::vector<double> fixed_point_residual_history;
    // largest |omega_j| kept by the truncation, 0 for Douglas-Rachford
    double effective_cutoff_omega = 0.0;
};

SolverResult tsvd_reconstruct(const ForwardOperator& op, const Signal& p, const TsvdConfig& cfg);

// prox of theta * (lambda ||x||_1 + indicator(x >= 0)), elementwise
// max(x - theta, 0) with theta = tau * lambda already folded in.
std::vector<double> prox_sparse_nonneg(const std::vector<double>& x, double theta);

// prox of tau/2 * ||M x - p||^2 at z, solved exactly in the DFT basis:
// x_hat_j = (z_hat_j + tau * conj(m_j) * p_hat_j) / (1 + tau * |m_j|^2).
Signal prox_fidelity(const ForwardOperator& op, const Signal& p, const Signal& z, double tau);

SolverResult dr_reconstruct(const ForwardOperator& op, const Signal& p, const DrConfig& cfg);

// Default step 1 / sigma_max^2.
double default_tau(const ForwardOperator& op);

// Default weight 0.05 * max |M^T p|.
double default_lambda(const ForwardOperator& op, const Signal& p);

} // namespace attrec
