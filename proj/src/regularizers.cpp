#include "tgm/regularizers.hpp"

#include "tgm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tgm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (std::isnan(x)) {
            throw NumericalError(std::string("NaN in ") + what);
        }
        if (!std::isfinite(x)) {
            throw NumericalError(std::string("non-finite value in ") + what);
        }
    }
}

void require_nonempty(std::span<const double> v) {
    if (v.empty()) {
        throw std::invalid_argument("action vector must not be empty");
    }
}

// log sum_i exp(logw_i + y_i); entries with logw_i = -inf drop out.
double weighted_lse(std::span<const double> logw, std::span<const double> y) {
    double m = kNegInf;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (logw[i] != kNegInf) {
            m = std::max(m, logw[i] + y[i]);
        }
    }
    if (m == kNegInf) {
        return kNegInf;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (logw[i] != kNegInf) {
            s += std::exp(logw[i] + y[i] - m);
        }
    }
    return m + std::log(s);
}

// q log d(a), with d^0 = 1 for every d(a) including 0.
ActionVector tilted_log_weights(std::span<const double> d, double q) {
    ActionVector out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (q == 0.0) {
            out[i] = 0.0;
        } else {
            out[i] = d[i] > 0.0 ? q * std::log(d[i]) : kNegInf;
        }
    }
    return out;
}

void check_pair(std::span<const double> pi, std::span<const double> d) {
    if (pi.size() != d.size()) {
        throw std::invalid_argument("policy and reference distribution differ in arity");
    }
    check_distribution(pi);
    check_distribution(d);
}

} // namespace

void GmParams::validate() const {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("q must lie in [0, 1]");
    }
    if (!std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be finite");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("omega must be positive");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be positive");
    }
}

void check_distribution(std::span<const double> v, double tol) {
    double total = 0.0;
    for (double x : v) {
        if (std::isnan(x)) {
            throw NumericalError("NaN in distribution");
        }
        if (x < 0.0) {
            throw std::invalid_argument("distribution has a negative entry");
        }
        total += x;
    }
    if (std::abs(total - 1.0) > tol) {
        throw std::invalid_argument("distribution does not sum to 1");
    }
}

double log_sum_exp(std::span<const double> v, double scale) {
    require_nonempty(v);
    double m = kNegInf;
    for (double x : v) {
        m = std::max(m, scale * x);
    }
    double s = 0.0;
    for (double x : v) {
        s += std::exp(scale * x - m);
    }
    return m + std::log(s);
}

ActionVector softmax(std::span<const double> v, double tau) {
    require_nonempty(v);
    require_finite(v, "softmax input");
    if (!std::isfinite(tau)) {
        throw NumericalError("softmax temperature must be finite");
    }
    double m = kNegInf;
    for (double x : v) {
        m = std::max(m, tau * x);
    }
    ActionVector out(v.size());
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(tau * v[i] - m);
        s += out[i];
    }
    for (double& x : out) {
        x /= s;
    }
    return out;
}

ActionVector log_softmax(std::span<const double> v, double tau) {
    require_nonempty(v);
    require_finite(v, "log-softmax input");
    const double lse = log_sum_exp(v, tau);
    ActionVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = tau * v[i] - lse;
    }
    return out;
}

double omega_gm(std::span<const double> pi, std::span<const double> d, const GmParams& params) {
    params.validate();
    check_pair(pi, d);
    double neg_entropy = 0.0;
    double kl = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] == 0.0) {
            continue;
        }
        neg_entropy += pi[i] * std::log(pi[i]);
        if (params.q > 0.0) {
            if (d[i] == 0.0) {
                throw std::invalid_argument("KL undefined");
            }
            kl += pi[i] * std::log(pi[i] / d[i]);
        }
    }
    return (params.q * kl + (1.0 - params.q) * neg_entropy) / params.omega;
}

TiltedDecomposition tilted_decomposition(std::span<const double> pi, std::span<const double> d,
                                         const GmParams& params) {
    params.validate();
    check_pair(pi, d);
    const ActionVector logw = tilted_log_weights(d, params.q);
    const ActionVector zeros(d.size(), 0.0);
    const double log_zq = weighted_lse(logw, zeros);
    double kl = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] == 0.0) {
            continue;
        }
        if (logw[i] == kNegInf) {
            throw std::invalid_argument("KL undefined");
        }
        const double log_tilted = logw[i] - log_zq;
        kl += pi[i] * (std::log(pi[i]) - log_tilted);
    }
    return TiltedDecomposition{kl, log_zq};
}

double gm_backup(std::span<const double> q_values, const GmParams& params) {
    params.validate();
    require_nonempty(q_values);
    require_finite(q_values, "Q-values");
    const double tau = params.policy_temperature();
    const double tilt = params.q == 0.0 ? 0.0 : params.q * log_sum_exp(q_values, params.alpha);
    return (log_sum_exp(q_values, tau) - tilt) / params.omega;
}

ActionVector gm_optimal_policy(std::span<const double> q_values, const GmParams& params) {
    params.validate();
    return softmax(q_values, params.policy_temperature());
}

double gm_consistency_term(std::span<const double> q_values, std::size_t action,
                           const GmParams& params) {
    params.validate();
    if (action >= q_values.size()) {
        throw std::out_of_range("action index out of range");
    }
    require_finite(q_values, "Q-values");
    const double tau = params.policy_temperature();
    const double log_pi = tau * q_values[action] - log_sum_exp(q_values, tau);
    double log_ref = 0.0;
    if (params.q != 0.0) {
        log_ref = params.alpha * q_values[action] - log_sum_exp(q_values, params.alpha);
    }
    return (log_pi - params.q * log_ref) / params.omega;
}

void gm_consistency_gradient(std::span<const double> q_values, std::size_t action,
                             const GmParams& params, std::span<double> out) {
    if (action >= q_values.size() || out.size() != q_values.size()) {
        throw std::out_of_range("action index out of range");
    }
    const double tau = params.policy_temperature();
    const ActionVector pi = softmax(q_values, tau);
    const ActionVector ref = softmax(q_values, params.alpha);
    const double qa = params.q * params.alpha;
    for (std::size_t b = 0; b < q_values.size(); ++b) {
        out[b] = -(tau * pi[b] - qa * ref[b]) / params.omega;
    }
    out[action] += 1.0;
}

ConjugateKind parse_conjugate_kind(std::string_view name) {
    if (name == "neg-shannon") {
        return ConjugateKind::NegShannon;
    }
    if (name == "kl") {
        return ConjugateKind::Kl;
    }
    if (name == "gm") {
        return ConjugateKind::Gm;
    }
    throw std::invalid_argument("unknown regularizer kind '" + std::string(name) +
                                "' (expected neg-shannon, kl or gm)");
}

std::string_view to_string(ConjugateKind kind) {
    switch (kind) {
    case ConjugateKind::NegShannon:
        return "neg-shannon";
    case ConjugateKind::Kl:
        return "kl";
    case ConjugateKind::Gm:
        return "gm";
    }
    return "?";
}

double conjugate(ConjugateKind kind, std::span<const double> argument, std::span<const double> d,
                 const GmParams& params) {
    require_nonempty(argument);
    require_finite(argument, "conjugate argument");
    switch (kind) {
    case ConjugateKind::NegShannon:
        return log_sum_exp(argument);
    case ConjugateKind::Kl: {
        if (d.size() != argument.size()) {
            throw std::invalid_argument("reference distribution arity mismatch");
        }
        check_distribution(d);
        return weighted_lse(tilted_log_weights(d, 1.0), argument);
    }
    case ConjugateKind::Gm: {
        params.validate();
        if (d.size() != argument.size()) {
            throw std::invalid_argument("reference distribution arity mismatch");
        }
        check_distribution(d);
        ActionVector scaled(argument.begin(), argument.end());
        for (double& y : scaled) {
            y *= params.omega;
        }
        return weighted_lse(tilted_log_weights(d, params.q), scaled) / params.omega;
    }
    }
    throw std::invalid_argument("unknown conjugate kind");
}

} // namespace tgm
