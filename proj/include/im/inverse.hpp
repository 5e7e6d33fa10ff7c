#pragma once

// The constructive inverse of a verified transformation s on a particular
// preimage p: strip whatever comment apply(s, p) carries, write the numeral
// n = index_of(p) + 1 into the comment one digit at a time, then run the
// inverse-dovetail interpreter that stores s. Because p is the last program
// among the first n in canonical order, it is the last suitable preimage the
// dovetail finds, so the chain lands exactly on p.

#include <string>
#include <vector>

#include "im/enumerate.hpp"
#include "im/lang.hpp"
#include "im/transform.hpp"

namespace im {

struct InverseChainPlan {
    Transformation source;          // s
    Program preimage;               // p
    std::size_t n = 0;              // index_of(p) + 1
    std::vector<Transformation> steps;
    std::size_t max_step_bits = 0;
};

inline InverseChainPlan build_inverse_chain(const Universe& u, const Transformation& s,
                                            const Program& p) {
    InverseChainPlan plan;
    plan.source = s;
    plan.preimage = p;
    plan.n = u.index_of(p) + 1;  // throws EnumerationCeilingExceeded when out of reach
    plan.steps.push_back(Transformation::strip_comment());
    for (char d : std::to_string(plan.n))
        plan.steps.push_back(Transformation::append_comment_digit(d - '0'));
    plan.steps.push_back(Transformation::inv_dovetail(s));
    for (const auto& st : plan.steps) plan.max_step_bits = std::max(plan.max_step_bits, complexity(st));
    return plan;
}

inline Program execute_steps(const Universe& u, const std::vector<Transformation>& steps,
                             Program start) {
    for (const auto& st : steps) start = apply(u, st, start);
    return start;
}

}  // namespace im
