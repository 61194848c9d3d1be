#include "tgm/q_function.hpp"

#include "tgm/format.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tgm {

ActionVector QFunction::values(const SequenceSpace& space, const State& s) const {
    const std::size_t n = space.num_actions(s);
    const auto it = table_.find(s.prefix);
    if (it == table_.end()) {
        return ActionVector(n, init_value_);
    }
    return it->second;
}

ActionVector& QFunction::entry(const SequenceSpace& space, const State& s) {
    const std::size_t n = space.num_actions(s);
    auto [it, inserted] = table_.try_emplace(s.prefix);
    if (inserted) {
        it->second.assign(n, init_value_);
    }
    return it->second;
}

void QFunction::set(const SequenceSpace& space, const State& s, ActionVector values) {
    if (values.size() != space.num_actions(s)) {
        throw std::invalid_argument("Q-vector arity does not match the state's action count");
    }
    table_[s.prefix] = std::move(values);
}

void QFunction::write_tsv(std::ostream& out, const SequenceSpace& space) const {
    out << "state\taction\tvalue\n";
    for (const auto& [prefix, values] : table_) {
        const std::string rendered = space.render(prefix);
        for (std::size_t a = 0; a < values.size(); ++a) {
            out << rendered << '\t' << a << '\t' << format_double(values[a]) << '\n';
        }
    }
}

QFunction QFunction::read_tsv(std::istream& in, const SequenceSpace& space, double init_value) {
    QFunction q(init_value);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (lineno == 1 && line.rfind("state\t", 0) == 0) {
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw std::invalid_argument("Q snapshot line " + std::to_string(lineno) +
                                        ": expected 3 tab-separated fields");
        }
        const State s{space.parse(fields[0]), false};
        const long long action = parse_int(fields[1]);
        auto& values = q.entry(space, s);
        if (action < 0 || static_cast<std::size_t>(action) >= values.size()) {
            throw std::invalid_argument("Q snapshot line " + std::to_string(lineno) +
                                        ": action index out of range");
        }
        values[static_cast<std::size_t>(action)] = parse_double(fields[2]);
    }
    return q;
}

} // namespace tgm
