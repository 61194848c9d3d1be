#pragma once

// General mellowmax (GM) regularizer family and its Bellman backup.
//
// For a reference distribution d, the GM regularizer is
//   Omega(pi) = (1/omega) [ q KL(pi, d) + (1 - q) (-H(pi)) ]
// and with d = softmax_alpha(Q) the regularized optimum is
//   g*(Q) = (1/omega) [ LSE((q alpha + omega) Q) - q LSE(alpha Q) ],
// attained by pi* = softmax_{q alpha + omega}(Q).

#include "tgm/dcg.hpp"

#include <span>

namespace tgm {

struct GmParams {
    double q = 0.0;
    double alpha = 0.0;
    double omega = 1.0;
    double beta = 1.0;

    /// Throws std::invalid_argument when out of range.
    void validate() const;

    /// Inverse temperature of the optimal policy.
    double policy_temperature() const { return q * alpha + omega; }

    /// q = 0, omega = 1: the proportional-sampling (GFN) setting.
    bool is_gfn() const { return q == 0.0 && omega == 1.0; }
};

/// log sum_i exp(scale * v_i), max-shifted.
double log_sum_exp(std::span<const double> v, double scale = 1.0);

/// softmax with inverse temperature tau. tau = 0 gives the uniform distribution.
ActionVector softmax(std::span<const double> v, double tau);

/// log softmax_tau(v)[i] computed as tau v_i - LSE(tau v).
ActionVector log_softmax(std::span<const double> v, double tau);

/// GM regularizer value. Uses 0 log 0 = 0.
double omega_gm(std::span<const double> pi, std::span<const double> d, const GmParams& params);

struct TiltedDecomposition {
    double kl_term; ///< KL(pi, d^q / Z_q(d))
    double log_zq;  ///< log sum_a d(a)^q
};

/// Splits Omega into (1/omega) KL(pi, tilted d) - (1/omega) log Z_q(d).
TiltedDecomposition tilted_decomposition(std::span<const double> pi, std::span<const double> d,
                                         const GmParams& params);

double gm_backup(std::span<const double> q_values, const GmParams& params);

ActionVector gm_optimal_policy(std::span<const double> q_values, const GmParams& params);

/// g(Q, a) = (1/omega) [ log softmax_{q alpha + omega}(Q)[a] - q log softmax_alpha(Q)[a] ].
/// Equals Q[a] - gm_backup(Q).
double gm_consistency_term(std::span<const double> q_values, std::size_t action,
                           const GmParams& params);

/// d g(Q, a) / d Q[b] for every b, written into `out`.
void gm_consistency_gradient(std::span<const double> q_values, std::size_t action,
                             const GmParams& params, std::span<double> out);

enum class ConjugateKind { NegShannon, Kl, Gm };

ConjugateKind parse_conjugate_kind(std::string_view name);
std::string_view to_string(ConjugateKind kind);

/// Closed-form convex conjugates:
///   neg-shannon: LSE(y); kl: log sum d e^y; gm: (1/omega) log sum d^q e^{omega y}.
/// `d` is ignored for neg-shannon.
double conjugate(ConjugateKind kind, std::span<const double> argument, std::span<const double> d,
                 const GmParams& params);

/// Throws std::invalid_argument unless `v` is a distribution (nonnegative, sums to 1 within tol).
void check_distribution(std::span<const double> v, double tol = 1e-9);

} // namespace tgm
