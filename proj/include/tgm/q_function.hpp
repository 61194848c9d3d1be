#pragma once

#include "tgm/dcg.hpp"

#include <iosfwd>
#include <map>

namespace tgm {

/// Tabular state -> action-value store. Entries are created lazily on first
/// write; reads of unvisited states return `init_value` for every action.
class QFunction {
public:
    explicit QFunction(double init_value = 0.0) : init_value_(init_value) {}

    double init_value() const { return init_value_; }

    /// Q-values of a non-terminal state, arity = space.num_actions(s).
    ActionVector values(const SequenceSpace& space, const State& s) const;

    /// Mutable entry, initialized on first access.
    ActionVector& entry(const SequenceSpace& space, const State& s);

    /// Replaces the entry for `s`. Arity must match the state.
    void set(const SequenceSpace& space, const State& s, ActionVector values);

    bool contains(const TokenSeq& prefix) const { return table_.contains(prefix); }
    std::size_t size() const { return table_.size(); }

    /// Stored entries keyed by prefix, ordered lexicographically.
    const std::map<TokenSeq, ActionVector>& entries() const { return table_; }

    /// TSV rows `state<TAB>action<TAB>value` with a header line.
    void write_tsv(std::ostream& out, const SequenceSpace& space) const;
    static QFunction read_tsv(std::istream& in, const SequenceSpace& space,
                              double init_value = 0.0);

private:
    std::map<TokenSeq, ActionVector> table_;
    double init_value_;
};

} // namespace tgm
