#include "tgm/uncertainty.hpp"

#include "tgm/errors.hpp"
#include "tgm/format.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace tgm {

namespace {

double weight(const UncertaintySetSpec& spec, std::size_t a) {
    const double q = spec.effective_q();
    if (q == 0.0) {
        return 1.0;
    }
    return std::pow(spec.d[a], q);
}

double base(const UncertaintySetSpec& spec, std::size_t a) {
    return spec.r0.empty() ? 0.0 : spec.r0[a];
}

MembershipResult classify(double m) {
    const double margin = m - 1.0;
    if (std::abs(margin) <= kBoundaryTolerance) {
        return {Membership::Boundary, margin};
    }
    return {margin < 0.0 ? Membership::Inside : Membership::Outside, margin};
}

void require_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw NumericalError("non-finite reward vector");
        }
    }
}

} // namespace

double UncertaintySetSpec::effective_q() const {
    switch (kind) {
    case ConjugateKind::NegShannon:
        return 0.0;
    case ConjugateKind::Kl:
        return 1.0;
    case ConjugateKind::Gm:
        return q;
    }
    return q;
}

void UncertaintySetSpec::validate(std::size_t arity) const {
    if (arity == 0) {
        throw std::invalid_argument("uncertainty set needs at least one action");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("omega must be positive");
    }
    if (kind == ConjugateKind::Gm && !(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("q must lie in [0, 1]");
    }
    if (kind != ConjugateKind::NegShannon) {
        if (d.size() != arity) {
            throw std::invalid_argument("reference distribution arity does not match");
        }
        check_distribution(d);
    }
    if (!r0.empty() && r0.size() != arity) {
        throw std::invalid_argument("base reward arity does not match");
    }
}

std::string_view to_string(Membership m) {
    switch (m) {
    case Membership::Inside:
        return "inside";
    case Membership::Boundary:
        return "boundary";
    case Membership::Outside:
        return "outside";
    }
    return "?";
}

MembershipResult membership_of_perturbation(const UncertaintySetSpec& spec,
                                            std::span<const double> delta) {
    spec.validate(delta.size());
    require_finite(delta);
    double m = 0.0;
    for (std::size_t a = 0; a < delta.size(); ++a) {
        m += weight(spec, a) * std::exp(-spec.omega * delta[a]);
    }
    return classify(m);
}

MembershipResult membership(const UncertaintySetSpec& spec, std::span<const double> r) {
    spec.validate(r.size());
    require_finite(r);
    ActionVector delta(r.size());
    for (std::size_t a = 0; a < r.size(); ++a) {
        delta[a] = r[a] - base(spec, a);
    }
    return membership_of_perturbation(spec, delta);
}

MembershipResult minkowski_membership(const UncertaintySetSpec& spec, int k,
                                      std::span<const double> r) {
    if (k < 1) {
        throw std::invalid_argument("Minkowski step count must be at least 1");
    }
    spec.validate(r.size());
    require_finite(r);
    ActionVector per_step(r.size());
    for (std::size_t a = 0; a < r.size(); ++a) {
        per_step[a] = (r[a] - k * base(spec, a)) / k;
    }
    return membership_of_perturbation(spec, per_step);
}

std::vector<TraceRow> boundary_trace_2d(const UncertaintySetSpec& spec, std::size_t resolution,
                                        double lo, double hi, int steps) {
    if (spec.kind != ConjugateKind::NegShannon && spec.d.size() != 2) {
        throw std::invalid_argument("2D trace requires two actions");
    }
    if (!spec.r0.empty() && spec.r0.size() != 2) {
        throw std::invalid_argument("2D trace requires two actions");
    }
    if (resolution < 2 || !(hi > lo)) {
        throw std::invalid_argument("grid needs resolution >= 2 and hi > lo");
    }
    if (steps < 1) {
        throw std::invalid_argument("Minkowski step count must be at least 1");
    }
    std::vector<TraceRow> rows;
    rows.reserve(resolution * resolution);
    const double h = (hi - lo) / static_cast<double>(resolution - 1);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double d1 = lo + h * static_cast<double>(i);
        for (std::size_t j = 0; j < resolution; ++j) {
            const double d2 = lo + h * static_cast<double>(j);
            const double per_step[2] = {d1 / steps, d2 / steps};
            rows.push_back({d1, d2, membership_of_perturbation(spec, per_step).margin});
        }
    }
    return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    out << "delta1,delta2,margin\n";
    for (const auto& row : rows) {
        out << format_double(row.delta1) << ',' << format_double(row.delta2) << ','
            << format_double(row.margin) << '\n';
    }
}

std::optional<double> boundary_delta2(const UncertaintySetSpec& spec, double delta1) {
    spec.validate(2);
    const double rest = 1.0 - weight(spec, 0) * std::exp(-spec.omega * delta1);
    const double w2 = weight(spec, 1);
    if (!(rest > 0.0) || w2 == 0.0) {
        return std::nullopt;
    }
    return -std::log(rest / w2) / spec.omega;
}

} // namespace tgm
