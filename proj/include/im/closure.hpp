#pragma once

// All-pairs chain distances over a bounded universe, computed per semantic
// equivalence class by threshold decomposition: for each distinct step budget
// B in the catalog, build the subgraph of edges costing at most B, condense
// its strongly connected components, and take transitive reachability over
// the condensation. The distance between two programs of the same class is
// then the least budget whose reachability relation connects them; chains are
// confined to the universe (every intermediate stays within the token bound).
//
// Budgets are few (a handful of distinct encoding lengths), classes are
// moderate, and reachability is bitset work, which is what makes exhaustive
// metric-axiom checks tractable at desk scale.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "im/catalog.hpp"
#include "im/enumerate.hpp"
#include "im/lang.hpp"
#include "im/transform.hpp"

namespace im {

struct ThresholdLevel {
    std::size_t budget_bits = 0;
    uint32_t scc_count = 0;
    std::size_t words = 0;
    std::vector<uint32_t> scc_of;    // local node -> component (topological ids)
    std::vector<uint32_t> scc_size;  // members per component
    std::vector<uint64_t> reach;     // scc_count rows of `words` bitset words
    std::vector<std::pair<uint32_t, uint32_t>> dag_edges;  // condensed, from != to

    bool reachable(uint32_t from_scc, uint32_t to_scc) const {
        return (reach[from_scc * words + to_scc / 64] >> (to_scc % 64)) & 1u;
    }
    bool node_reachable(uint32_t i, uint32_t j) const { return reachable(scc_of[i], scc_of[j]); }
};

struct ClassClosure {
    uint64_t table_key = 0;
    std::vector<std::size_t> members;  // global enumeration indices, ascending
    std::vector<ThresholdLevel> levels;  // ascending budgets

    std::size_t size() const { return members.size(); }

    // Least budget connecting local node i to local node j; 0 for i == j.
    std::optional<std::size_t> dist_local(uint32_t i, uint32_t j) const {
        if (i == j) return 0;
        for (const auto& lv : levels)
            if (lv.node_reachable(i, j)) return lv.budget_bits;
        return std::nullopt;
    }
};

namespace detail {

struct RawEdge {
    uint32_t from, to;
    std::size_t bits;
};

// Kosaraju condensation with components numbered in topological order
// (every condensation edge goes from a lower id to a higher id).
inline void condense(uint32_t n, const std::vector<std::vector<uint32_t>>& adj,
                     const std::vector<std::vector<uint32_t>>& radj, std::vector<uint32_t>& comp,
                     uint32_t& comp_count) {
    std::vector<uint32_t> order;
    order.reserve(n);
    std::vector<uint8_t> seen(n, 0);
    std::vector<std::pair<uint32_t, std::size_t>> stack;
    for (uint32_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        stack.emplace_back(s, 0);
        while (!stack.empty()) {
            auto& [v, ei] = stack.back();
            if (ei < adj[v].size()) {
                const uint32_t w = adj[v][ei++];
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                order.push_back(v);
                stack.pop_back();
            }
        }
    }
    comp.assign(n, UINT32_MAX);
    comp_count = 0;
    std::vector<uint32_t> dfs;
    for (std::size_t i = order.size(); i-- > 0;) {
        const uint32_t s = order[i];
        if (comp[s] != UINT32_MAX) continue;
        comp[s] = comp_count;
        dfs.push_back(s);
        while (!dfs.empty()) {
            const uint32_t v = dfs.back();
            dfs.pop_back();
            for (const uint32_t w : radj[v])
                if (comp[w] == UINT32_MAX) {
                    comp[w] = comp_count;
                    dfs.push_back(w);
                }
        }
        ++comp_count;
    }
}

}  // namespace detail

class UniverseClosure {
public:
    UniverseClosure(const Universe& u, int max_tokens, Catalog cat,
                    std::optional<uint64_t> class_filter = std::nullopt)
        : u_(u), max_tokens_(max_tokens), cat_(std::move(cat)) {
        const std::size_t n = u.require_upto(max_tokens);
        u.ensure_tables(n);
        std::unordered_map<uint64_t, std::size_t> class_idx;
        for (std::size_t i = 0; i < n; ++i) {
            const uint64_t key = u.table_key_at(i);
            if (class_filter && key != *class_filter) continue;
            auto [it, fresh] = class_idx.emplace(key, classes_.size());
            if (fresh) {
                classes_.emplace_back();
                classes_.back().table_key = key;
            }
            classes_[it->second].members.push_back(i);
        }
        // Canonical report order: by first member (ascending = enumeration order).
        std::sort(classes_.begin(), classes_.end(),
                  [](const ClassClosure& a, const ClassClosure& b) {
                      return a.members.front() < b.members.front();
                  });
        budgets_ = positive_budgets();
        for (auto& cls : classes_) build_class(cls);
    }

    const std::vector<ClassClosure>& classes() const { return classes_; }
    const Catalog& catalog() const { return cat_; }
    int max_tokens() const { return max_tokens_; }

    // Distinct positive step budgets, ascending (level budgets).
    const std::vector<std::size_t>& level_budgets() const { return budgets_; }

    std::size_t universe_size() const {
        std::size_t n = 0;
        for (const auto& c : classes_) n += c.size();
        return n;
    }

    // Ordered equivalent pairs (p != q) in the covered classes.
    std::size_t equivalent_pairs() const {
        std::size_t n = 0;
        for (const auto& c : classes_) n += c.size() * (c.size() - 1);
        return n;
    }

    // Ordered pairs p != q with distance <= budget (within-universe chains).
    std::size_t connected_pairs_upto(std::size_t budget) const {
        std::size_t total = 0;
        for (const auto& cls : classes_) {
            const ThresholdLevel* lv = nullptr;
            for (const auto& l : cls.levels)
                if (l.budget_bits <= budget) lv = &l;
            if (!lv) continue;
            // sum over components U of |U| * (sum of |V| over V reachable from U) - |U| (self)
            for (uint32_t c = 0; c < lv->scc_count; ++c) {
                std::size_t reach_size = 0;
                const uint64_t* row = &lv->reach[c * lv->words];
                for (uint32_t d = 0; d < lv->scc_count; ++d)
                    if ((row[d / 64] >> (d % 64)) & 1u) reach_size += lv->scc_size[d];
                total += static_cast<std::size_t>(lv->scc_size[c]) * reach_size;
            }
            total -= cls.size();  // drop reflexive pairs
        }
        return total;
    }

private:
    std::vector<std::size_t> positive_budgets() const {
        std::vector<std::size_t> v;
        for (const auto& b : cat_.distinct_bits())
            if (b > 0) v.push_back(b);
        return v;
    }

    void build_class(ClassClosure& cls) {
        const uint32_t n = static_cast<uint32_t>(cls.members.size());
        std::unordered_map<std::string_view, uint32_t> local_of;
        local_of.reserve(n * 2);
        for (uint32_t i = 0; i < n; ++i)
            local_of.emplace(std::string_view(u_.compact_at(cls.members[i])), i);

        std::vector<detail::RawEdge> edges;
        for (uint32_t i = 0; i < n; ++i) {
            const Program p = u_.parse_compact(u_.compact_at(cls.members[i]));
            for (const auto& e : cat_.entries) {
                if (e.transform.kind == TKind::Id) continue;
                Program r = apply(u_, e.transform, p);
                const std::string rc = compact(r);
                if (rc.size() > static_cast<std::size_t>(max_tokens_)) continue;
                auto it = local_of.find(std::string_view(rc));
                if (it == local_of.end())
                    throw std::logic_error(
                        "closure: image left the equivalence class; catalog entry " +
                        to_term(e.transform) + " is not a valid interpreter");
                if (it->second == i) continue;
                edges.push_back({i, it->second, e.bits});
            }
        }
        std::sort(edges.begin(), edges.end(), [](const detail::RawEdge& a, const detail::RawEdge& b) {
            if (a.from != b.from) return a.from < b.from;
            if (a.to != b.to) return a.to < b.to;
            return a.bits < b.bits;
        });
        edges.erase(std::unique(edges.begin(), edges.end(),
                                [](const detail::RawEdge& a, const detail::RawEdge& b) {
                                    return a.from == b.from && a.to == b.to;
                                }),
                    edges.end());  // keep cheapest parallel edge

        for (const std::size_t budget : budgets_) {
            ThresholdLevel lv;
            lv.budget_bits = budget;
            std::vector<std::vector<uint32_t>> adj(n), radj(n);
            for (const auto& e : edges) {
                if (e.bits > budget) continue;
                adj[e.from].push_back(e.to);
                radj[e.to].push_back(e.from);
            }
            detail::condense(n, adj, radj, lv.scc_of, lv.scc_count);
            lv.scc_size.assign(lv.scc_count, 0);
            for (uint32_t i = 0; i < n; ++i) ++lv.scc_size[lv.scc_of[i]];

            for (const auto& e : edges) {
                if (e.bits > budget) continue;
                const uint32_t a = lv.scc_of[e.from], b = lv.scc_of[e.to];
                if (a != b) lv.dag_edges.emplace_back(a, b);
            }
            std::sort(lv.dag_edges.begin(), lv.dag_edges.end());
            lv.dag_edges.erase(std::unique(lv.dag_edges.begin(), lv.dag_edges.end()),
                               lv.dag_edges.end());

            lv.words = (lv.scc_count + 63) / 64;
            lv.reach.assign(static_cast<std::size_t>(lv.scc_count) * lv.words, 0);
            // Components are topologically numbered, so sweep sinks first.
            std::size_t edge_at = lv.dag_edges.size();
            for (uint32_t c = lv.scc_count; c-- > 0;) {
                uint64_t* row = &lv.reach[c * lv.words];
                row[c / 64] |= uint64_t(1) << (c % 64);
                while (edge_at > 0 && lv.dag_edges[edge_at - 1].first == c) {
                    const uint32_t d = lv.dag_edges[edge_at - 1].second;
                    const uint64_t* drow = &lv.reach[d * lv.words];
                    for (std::size_t w = 0; w < lv.words; ++w) row[w] |= drow[w];
                    --edge_at;
                }
            }
            cls.levels.push_back(std::move(lv));
        }
    }

    const Universe& u_;
    int max_tokens_;
    Catalog cat_;
    std::vector<std::size_t> budgets_;
    std::vector<ClassClosure> classes_;
};

}  // namespace im
