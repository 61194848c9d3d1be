#pragma once

// Reward uncertainty sets induced by the regularizers. A set is
//   r0 + { delta : sum_a d(a)^q exp(-omega delta(a)) <= 1 },
// i.e. the zero sublevel set of the conjugate evaluated at -delta. Against this
// set the robust value equals the regularized value.

#include "tgm/regularizers.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace tgm {

struct UncertaintySetSpec {
    ConjugateKind kind = ConjugateKind::Gm;
    ActionVector d;     ///< reference distribution; ignored for neg-shannon
    double q = 1.0;     ///< used by gm only
    double omega = 1.0;
    ActionVector r0;    ///< base reward; empty means zero

    /// Exponent applied to d: 0 for neg-shannon, 1 for kl, q for gm.
    double effective_q() const;

    /// Throws std::invalid_argument for invalid parameters or a mismatched arity.
    void validate(std::size_t arity) const;
};

enum class Membership { Inside, Boundary, Outside };

std::string_view to_string(Membership m);

struct MembershipResult {
    Membership status;
    double margin; ///< sum_a d^q e^{-omega delta} - 1
};

inline constexpr double kBoundaryTolerance = 1e-9;

MembershipResult membership(const UncertaintySetSpec& spec, std::span<const double> r);

/// Membership of delta = r - r0 directly.
MembershipResult membership_of_perturbation(const UncertaintySetSpec& spec,
                                            std::span<const double> delta);

/// Membership of r in the k-fold Minkowski sum of the set: the per-step set is
/// tested at (r - k r0) / k.
MembershipResult minkowski_membership(const UncertaintySetSpec& spec, int k,
                                      std::span<const double> r);

struct TraceRow {
    double delta1;
    double delta2;
    double margin;
};

/// Margin on a resolution x resolution grid over [lo, hi]^2 (delta1 outer,
/// delta2 inner). With steps = k the grid holds total perturbations of the
/// k-fold sum. Requires a two-action spec.
std::vector<TraceRow> boundary_trace_2d(const UncertaintySetSpec& spec, std::size_t resolution,
                                        double lo, double hi, int steps = 1);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

/// For a two-action set, the delta2 placing (delta1, delta2) on the boundary,
/// if one exists.
std::optional<double> boundary_delta2(const UncertaintySetSpec& spec, double delta1);

} // namespace tgm
