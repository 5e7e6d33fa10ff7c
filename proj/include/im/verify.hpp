#pragma once

// Exhaustive interpreter verification: a transformation is valid at a bound
// iff it preserves the denoted function of every program with at most that
// many tokens. The reported counterexample is always the canonically first
// one.

#include <optional>
#include <sstream>
#include <string>

#include "im/enumerate.hpp"
#include "im/lang.hpp"
#include "im/transform.hpp"

namespace im {

struct VerificationReport {
    Transformation subject;
    int bound = 0;
    bool valid = false;
    std::size_t programs_checked = 0;
    std::optional<Program> counterexample;
    std::optional<FunctionTable> expected_table;  // table of the counterexample
    std::optional<FunctionTable> actual_table;    // table of its image

    std::string summary() const {
        std::ostringstream os;
        os << to_term(subject) << " @ bound " << bound << ": "
           << (valid ? "valid" : "invalid");
        if (!valid && counterexample) os << " (counterexample: " << serialize(*counterexample) << ")";
        return os.str();
    }
};

inline VerificationReport verify(const Universe& u, const Transformation& t, int bound) {
    VerificationReport rep;
    rep.subject = t;
    rep.bound = bound;
    const std::size_t n = u.require_upto(bound);  // throws EnumerationCeilingExceeded
    u.ensure_tables(n);
    rep.programs_checked = n;
    rep.valid = true;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& pc = u.compact_at(i);
        const Program p = u.parse_compact(pc);
        const Program q = apply(u, t, p);
        if (compact(q) == pc) continue;  // identity on this input
        const uint64_t expected = u.table_key_at(i);
        const FunctionTable actual = u.table(q);
        if (actual.key() != expected) {
            rep.valid = false;
            rep.counterexample = p;
            rep.expected_table = u.table(p);
            rep.actual_table = actual;
            break;
        }
    }
    return rep;
}

}  // namespace im
