#pragma once

// The chain distance: the least budget K such that some chain of catalog
// transformations, each of complexity at most K bits, maps one program to the
// other. Computed by a best-first bottleneck search over the directed graph
// whose edges are single transformation applications. A layered value
// iteration over explicit chains serves as the independent oracle.
//
// Conventions: the empty chain is allowed only from a program to itself
// (distance 0); chains cannot leave a semantic equivalence class, so
// inequivalent programs are reported unreachable without search. Witnesses
// are tie-broken deterministically: least bottleneck, then shortest chain,
// then lexicographically least sequence of step encodings.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "im/catalog.hpp"
#include "im/enumerate.hpp"
#include "im/lang.hpp"
#include "im/transform.hpp"

namespace im {

struct SearchBounds {
    int max_program_tokens = 0;
    std::optional<int> max_chain_length;
    std::optional<std::size_t> max_explored = 2'000'000;

    // Intermediates may exceed both endpoints: the inverse construction grows
    // a program by a comment before shrinking it, hence the slack.
    static SearchBounds defaults_for(const Program& p, const Program& q, int slack = 8) {
        SearchBounds b;
        b.max_program_tokens =
            static_cast<int>(std::max(token_count(p), token_count(q))) + slack;
        return b;
    }
};

struct Chain {
    Program source, target;
    std::vector<Transformation> steps;
};

struct DistanceResult {
    std::optional<std::size_t> value_bits;  // empty = unreachable within bounds
    std::optional<Chain> witness;
    std::size_t explored = 0;
    SearchBounds bounds;
    std::string note;

    bool reachable() const { return value_bits.has_value(); }
};

// ---------------------------------------------------------------------------
// Chain checking

struct ChainCheckResult {
    bool ok = false;
    std::size_t max_step_bits = 0;
    std::string diagnostic;
    std::vector<Program> programs;  // source, every intermediate, final
};

inline ChainCheckResult check_chain(const Universe& u, const Chain& c, const Catalog& cat) {
    ChainCheckResult r;
    const FunctionTable want = u.table(c.source);
    Program cur = c.source;
    r.programs.push_back(cur);
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const CatalogEntry* e = cat.find(c.steps[i]);
        if (!e) {
            r.diagnostic = "step " + std::to_string(i + 1) + " (" + to_term(c.steps[i]) +
                           ") is not in catalog `" + cat.name + "`";
            return r;
        }
        r.max_step_bits = std::max(r.max_step_bits, e->bits);
        cur = apply(u, c.steps[i], cur);
        r.programs.push_back(cur);
        if (u.table(cur) != want) {
            r.diagnostic = "step " + std::to_string(i + 1) + " (" + to_term(c.steps[i]) +
                           ") changed the denoted function";
            return r;
        }
    }
    if (cur != c.target) {
        r.diagnostic = "chain ends at `" + serialize(cur) + "`, not the target";
        return r;
    }
    r.ok = true;
    return r;
}

// ---------------------------------------------------------------------------
// Search internals

namespace detail {

constexpr std::size_t kInfBits = std::numeric_limits<std::size_t>::max();

struct PathRec {
    int parent_rec;  // -1 at the source
    uint32_t step;   // index into the edge list
};

inline std::vector<uint32_t> rec_steps(const std::vector<PathRec>& log, int rec) {
    std::vector<uint32_t> steps;
    while (rec >= 0) {
        steps.push_back(log[rec].step);
        rec = log[rec].parent_rec;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
}

inline bool steps_lex_less(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           const std::vector<std::string>& encodings) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) {
            if (encodings[a[i]] != encodings[b[i]]) return encodings[a[i]] < encodings[b[i]];
        }
    return a.size() < b.size();
}

struct EdgeSet {
    std::vector<Transformation> steps;
    std::vector<std::size_t> bits;
    std::vector<std::string> encodings;

    explicit EdgeSet(const Catalog& cat) {
        for (const auto& e : cat.entries) {
            if (e.transform.kind == TKind::Id) continue;  // never changes a program
            steps.push_back(e.transform);
            bits.push_back(e.bits);
            encodings.push_back(encode(e.transform));
        }
    }
};

}  // namespace detail

inline DistanceResult distance(const Universe& u, const Program& p, const Program& q,
                               const Catalog& cat, SearchBounds bounds) {
    DistanceResult res;
    res.bounds = bounds;
    const std::string pc = compact(p), qc = compact(q);
    if (pc == qc) {
        res.value_bits = 0;
        res.witness = Chain{p, q, {}};
        return res;
    }
    if (u.table(p) != u.table(q)) {
        res.note = "inequivalent programs; no interpreter chain can connect them";
        return res;
    }
    const std::size_t cap_tokens = static_cast<std::size_t>(bounds.max_program_tokens);
    if (pc.size() > cap_tokens || qc.size() > cap_tokens) {
        res.note = "an endpoint exceeds max_program_tokens";
        return res;
    }

    const detail::EdgeSet es(cat);

    struct Node {
        std::string compact;
        std::size_t b = detail::kInfBits;
        uint32_t len = 0;
        int rec = -1;
        bool settled = false;
    };
    std::vector<Node> nodes;
    std::unordered_map<std::string, uint32_t> id_of;
    std::vector<detail::PathRec> log;
    auto intern = [&](const std::string& c) -> uint32_t {
        auto it = id_of.find(c);
        if (it != id_of.end()) return it->second;
        const uint32_t id = static_cast<uint32_t>(nodes.size());
        nodes.push_back(Node{c, detail::kInfBits, 0, -1, false});
        id_of.emplace(c, id);
        return id;
    };

    const uint32_t src = intern(pc);
    const uint32_t dst = intern(qc);
    nodes[src].b = 0;

    using Key = std::tuple<std::size_t, uint32_t, std::string>;
    using Item = std::pair<Key, uint32_t>;
    auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    pq.push({Key{0, 0, pc}, src});

    const std::size_t explore_cap = bounds.max_explored.value_or(detail::kInfBits);
    bool found = false;
    while (!pq.empty()) {
        const Item top = pq.top();
        pq.pop();
        const uint32_t v = top.second;
        if (nodes[v].settled || std::get<0>(top.first) != nodes[v].b ||
            std::get<1>(top.first) != nodes[v].len)
            continue;
        nodes[v].settled = true;
        ++res.explored;
        if (v == dst) {
            found = true;
            break;
        }
        if (res.explored >= explore_cap) {
            res.note = "exploration cap reached before the target was settled";
            return res;
        }
        if (bounds.max_chain_length &&
            nodes[v].len >= static_cast<uint32_t>(*bounds.max_chain_length))
            continue;

        const std::size_t vb = nodes[v].b;
        const uint32_t vlen = nodes[v].len;
        const int vrec = nodes[v].rec;
        const Program pv = u.parse_compact(nodes[v].compact);
        for (std::size_t ei = 0; ei < es.steps.size(); ++ei) {
            Program r = apply(u, es.steps[ei], pv);
            std::string rc = compact(r);
            if (rc.size() > cap_tokens || rc == nodes[v].compact) continue;
            const std::size_t nb = std::max(vb, es.bits[ei]);
            const uint32_t nlen = vlen + 1;
            const uint32_t w = intern(rc);
            if (nodes[w].settled) continue;
            bool better;
            if (nb != nodes[w].b) {
                better = nb < nodes[w].b;
            } else if (nlen != nodes[w].len) {
                better = nlen < nodes[w].len;
            } else {
                std::vector<uint32_t> cand = detail::rec_steps(log, vrec);
                cand.push_back(static_cast<uint32_t>(ei));
                better = detail::steps_lex_less(cand, detail::rec_steps(log, nodes[w].rec),
                                                es.encodings);
            }
            if (!better) continue;
            log.push_back(detail::PathRec{vrec, static_cast<uint32_t>(ei)});
            nodes[w].b = nb;
            nodes[w].len = nlen;
            nodes[w].rec = static_cast<int>(log.size()) - 1;
            pq.push({Key{nb, nlen, nodes[w].compact}, w});
        }
    }

    if (!found) {
        if (res.note.empty()) res.note = "frontier exhausted within bounds";
        return res;
    }
    res.value_bits = nodes[dst].b;
    Chain wit;
    wit.source = p;
    wit.target = q;
    for (uint32_t si : detail::rec_steps(log, nodes[dst].rec)) wit.steps.push_back(es.steps[si]);
    res.witness = std::move(wit);
    return res;
}

// Exact minimax over every chain of length <= max_len, by layered full
// enumeration of chains (value iteration). Independent of the best-first
// search above; used as its oracle. An optional token cap makes the explored
// chain space match a bounded search exactly.
inline DistanceResult distance_bruteforce(const Universe& u, const Program& p, const Program& q,
                                          const Catalog& cat, int max_len,
                                          std::optional<int> max_program_tokens = std::nullopt) {
    DistanceResult res;
    res.bounds.max_chain_length = max_len;
    res.bounds.max_program_tokens = max_program_tokens.value_or(0);
    res.bounds.max_explored.reset();
    const std::string pc = compact(p), qc = compact(q);
    if (pc == qc) {
        res.value_bits = 0;
        res.witness = Chain{p, q, {}};
        return res;
    }
    if (u.table(p) != u.table(q)) {
        res.note = "inequivalent programs; no interpreter chain can connect them";
        return res;
    }

    const detail::EdgeSet es(cat);
    const std::size_t cap_tokens =
        max_program_tokens ? static_cast<std::size_t>(*max_program_tokens)
                           : std::numeric_limits<std::size_t>::max();

    std::vector<std::string> compacts;
    std::unordered_map<std::string, uint32_t> id_of;
    std::vector<std::size_t> dist_prev, dist_cur;
    std::vector<int> rec_prev, rec_cur;
    std::vector<detail::PathRec> log;
    auto intern = [&](const std::string& c) -> uint32_t {
        auto it = id_of.find(c);
        if (it != id_of.end()) return it->second;
        const uint32_t id = static_cast<uint32_t>(compacts.size());
        compacts.push_back(c);
        dist_prev.push_back(detail::kInfBits);
        dist_cur.push_back(detail::kInfBits);
        rec_prev.push_back(-1);
        rec_cur.push_back(-1);
        id_of.emplace(c, id);
        return id;
    };
    const uint32_t src = intern(pc);
    const uint32_t dst = intern(qc);
    dist_prev[src] = dist_cur[src] = 0;

    std::vector<uint32_t> frontier{src};
    for (int round = 1; round <= max_len && !frontier.empty(); ++round) {
        std::vector<uint32_t> next;
        for (const uint32_t v : frontier) {
            const std::size_t vb = dist_prev[v];
            const int vrec = rec_prev[v];
            const Program pv = u.parse_compact(compacts[v]);
            for (std::size_t ei = 0; ei < es.steps.size(); ++ei) {
                Program r = apply(u, es.steps[ei], pv);
                std::string rc = compact(r);
                if (rc.size() > cap_tokens || rc == compacts[v]) continue;
                const std::size_t nb = std::max(vb, es.bits[ei]);
                const uint32_t w = intern(rc);
                if (nb < dist_cur[w]) {
                    if (dist_cur[w] == dist_prev[w]) next.push_back(w);  // first touch this round
                    dist_cur[w] = nb;
                    log.push_back(detail::PathRec{vrec, static_cast<uint32_t>(ei)});
                    rec_cur[w] = static_cast<int>(log.size()) - 1;
                }
            }
        }
        // Publish this layer.
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (const uint32_t w : next) {
            dist_prev[w] = dist_cur[w];
            rec_prev[w] = rec_cur[w];
        }
        frontier = std::move(next);
    }

    res.explored = compacts.size();
    if (dist_cur[dst] == detail::kInfBits) {
        res.note = "no chain of length <= " + std::to_string(max_len);
        return res;
    }
    res.value_bits = dist_cur[dst];
    Chain wit;
    wit.source = p;
    wit.target = q;
    for (uint32_t si : detail::rec_steps(log, rec_cur[dst])) wit.steps.push_back(es.steps[si]);
    res.witness = std::move(wit);
    return res;
}

// max of the two directed distances; unreachable when either direction is.
inline DistanceResult symmetrized_distance(const Universe& u, const Program& p, const Program& q,
                                           const Catalog& cat, SearchBounds bounds) {
    DistanceResult fwd = distance(u, p, q, cat, bounds);
    DistanceResult bwd = distance(u, q, p, cat, bounds);
    DistanceResult res;
    res.bounds = bounds;
    res.explored = fwd.explored + bwd.explored;
    if (!fwd.reachable() || !bwd.reachable()) {
        res.note = !fwd.reachable() ? "forward direction unreachable: " + fwd.note
                                    : "backward direction unreachable: " + bwd.note;
        return res;
    }
    const bool take_fwd = *fwd.value_bits >= *bwd.value_bits;
    res.value_bits = std::max(*fwd.value_bits, *bwd.value_bits);
    res.witness = take_fwd ? fwd.witness : bwd.witness;
    res.note = "symmetrized: forward " + std::to_string(*fwd.value_bits) + " bits, backward " +
               std::to_string(*bwd.value_bits) + " bits";
    return res;
}

// ---------------------------------------------------------------------------
// Structured report form

inline nlohmann::ordered_json bounds_json(const SearchBounds& b) {
    nlohmann::ordered_json j;
    j["max_program_tokens"] = b.max_program_tokens;
    if (b.max_chain_length) j["max_chain_length"] = *b.max_chain_length;
    else j["max_chain_length"] = nullptr;
    if (b.max_explored) j["max_explored"] = *b.max_explored;
    else j["max_explored"] = nullptr;
    return j;
}

inline nlohmann::ordered_json distance_json(const DistanceResult& r) {
    nlohmann::ordered_json j;
    if (r.value_bits) j["value_bits"] = *r.value_bits;
    else j["value_bits"] = "unreachable";
    j["reachable"] = r.reachable();
    if (r.witness) {
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (const auto& s : r.witness->steps) steps.push_back(to_term(s));
        j["witness"] = steps;
    } else {
        j["witness"] = nullptr;
    }
    j["explored"] = r.explored;
    j["bounds"] = bounds_json(r.bounds);
    j["note"] = r.note;
    return j;
}

// The witness spelled out with every intermediate program, for reports.
inline nlohmann::ordered_json chain_json(const Universe& u, const Chain& c) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : c.steps) steps.push_back(to_term(s));
    j["steps"] = steps;
    nlohmann::ordered_json programs = nlohmann::ordered_json::array();
    Program cur = c.source;
    programs.push_back(serialize(cur));
    for (const auto& s : c.steps) {
        cur = apply(u, s, cur);
        programs.push_back(serialize(cur));
    }
    j["programs"] = programs;
    return j;
}

}  // namespace im
