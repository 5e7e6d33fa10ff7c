#pragma once

// Executable experiment suites: metric axioms over a bounded universe, the
// selector counterexample, budget-sweep connectivity, and the comment-versus-
// algebra ordering. Every suite is deterministic byte-for-byte given
// (universe, catalog, spec) and reports violations as data; callers turn a
// failed suite into a nonzero exit status.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "im/catalog.hpp"
#include "im/closure.hpp"
#include "im/enumerate.hpp"
#include "im/inverse.hpp"
#include "im/metric.hpp"
#include "im/transform.hpp"
#include "im/verify.hpp"

namespace im {

struct UniverseSpec {
    int max_tokens = 6;
    std::optional<uint64_t> class_filter;  // restrict to one equivalence class
};

namespace detail {

// Deterministic sampling; fixed-seed SplitMix64.
struct Rng {
    uint64_t state = 0x9e3779b97f4a7c15ull;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

inline std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Metric axiom suite

struct AxiomReport {
    int max_tokens = 0;
    std::size_t universe_size = 0;
    std::size_t class_count = 0;

    // identity: d(p,q) = 0 iff p = q
    std::size_t identity_programs_checked = 0;
    std::size_t identity_distance_samples = 0;
    std::size_t zero_bit_entries = 0;
    bool zero_bit_entry_is_id = false;
    std::size_t min_nonzero_bits = 0;
    std::vector<std::string> identity_violations;

    // directed strong triangle
    std::size_t triangle_closure_checks = 0;
    std::size_t triangle_sampled_triples = 0;
    std::size_t triangle_concrete_triples = 0;  // saturated count of covered triples
    std::vector<std::string> triangle_violations;

    // symmetry gap on the inverse-closed catalog
    std::string closed_catalog_name;
    std::size_t delta_bits = 0;
    std::size_t mutual_pairs = 0;
    std::size_t one_way_pairs = 0;
    std::size_t max_gap_bits = 0;
    std::vector<std::string> symmetry_violations;

    // exact axioms for the symmetrized distance
    bool laminar_ok = false;
    std::size_t symmetrized_sampled_triples = 0;
    std::vector<std::string> symmetrized_violations;

    bool pass() const {
        return identity_violations.empty() && triangle_violations.empty() &&
               symmetry_violations.empty() && symmetrized_violations.empty() && laminar_ok &&
               zero_bit_entries == 1 && zero_bit_entry_is_id;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["universe"] = {{"max_tokens", max_tokens},
                         {"programs", universe_size},
                         {"classes", class_count}};
        j["identity"] = {{"programs_checked", identity_programs_checked},
                         {"distance_samples", identity_distance_samples},
                         {"zero_bit_entries", zero_bit_entries},
                         {"zero_bit_entry_is_id", zero_bit_entry_is_id},
                         {"min_nonzero_bits", min_nonzero_bits},
                         {"violations", identity_violations}};
        j["triangle"] = {{"closure_checks", triangle_closure_checks},
                         {"sampled_triples", triangle_sampled_triples},
                         {"concrete_triples_covered", triangle_concrete_triples},
                         {"violations", triangle_violations}};
        j["symmetry"] = {{"closed_catalog", closed_catalog_name},
                         {"delta_bits", delta_bits},
                         {"mutual_pairs", mutual_pairs},
                         {"one_way_pairs", one_way_pairs},
                         {"max_gap_bits", max_gap_bits},
                         {"violations", symmetry_violations}};
        j["symmetrized"] = {{"laminar_ok", laminar_ok},
                            {"sampled_triples", symmetrized_sampled_triples},
                            {"violations", symmetrized_violations}};
        j["pass"] = pass();
        return j;
    }
};

namespace detail {

// Least budget at which i and j fall into one strongly connected component
// (the symmetrized distance within the bounded universe); 0 when i == j.
inline std::optional<std::size_t> sym_dist_local(const ClassClosure& cls, uint32_t i, uint32_t j) {
    if (i == j) return 0;
    for (const auto& lv : cls.levels)
        if (lv.scc_of[i] == lv.scc_of[j]) return lv.budget_bits;
    return std::nullopt;
}

}  // namespace detail

inline AxiomReport axiom_suite(const Universe& u, const UniverseSpec& spec, const Catalog& cat) {
    AxiomReport rep;
    rep.max_tokens = spec.max_tokens;

    // ---- identity: audit the complexity table, then the zero-cost entries.
    std::size_t min_nonzero = ~std::size_t(0);
    for (const auto& e : cat.entries) {
        if (e.bits == 0) {
            ++rep.zero_bit_entries;
            rep.zero_bit_entry_is_id = e.transform.kind == TKind::Id;
            if (e.transform.kind != TKind::Id)
                rep.identity_violations.push_back("zero-complexity entry is not Id: " +
                                                  to_term(e.transform));
        } else {
            min_nonzero = std::min(min_nonzero, e.bits);
        }
    }
    if (rep.zero_bit_entries != 1)
        rep.identity_violations.push_back("expected exactly one zero-complexity entry, found " +
                                          std::to_string(rep.zero_bit_entries));
    if (!cat.contains(Transformation::id()))
        rep.identity_violations.push_back("catalog does not contain Id");
    rep.min_nonzero_bits = min_nonzero == ~std::size_t(0) ? 0 : min_nonzero;

    const UniverseClosure closure(u, spec.max_tokens, cat, spec.class_filter);
    rep.class_count = closure.classes().size();
    rep.universe_size = closure.universe_size();

    // Every zero-cost entry must fix every program; with the audit above this
    // pins d(p,q) >= min_nonzero_bits for p != q.
    for (const auto& cls : closure.classes()) {
        for (const std::size_t gi : cls.members) {
            const Program p = u.parse_compact(u.compact_at(gi));
            for (const auto& e : cat.entries) {
                if (e.bits != 0) continue;
                if (compact(apply(u, e.transform, p)) != u.compact_at(gi))
                    rep.identity_violations.push_back("zero-complexity entry " +
                                                      to_term(e.transform) + " moves program `" +
                                                      serialize(p) + "`");
            }
            ++rep.identity_programs_checked;
        }
    }
    // Spot-check d(p,p) = 0 through the search path as well.
    {
        detail::Rng rng;
        SearchBounds b;
        b.max_program_tokens = spec.max_tokens;
        for (int s = 0; s < 64 && rep.universe_size > 0; ++s) {
            const auto& cls = closure.classes()[rng.below(closure.classes().size())];
            const Program p =
                u.parse_compact(u.compact_at(cls.members[rng.below(cls.size())]));
            const DistanceResult d = distance(u, p, p, cat, b);
            if (!d.reachable() || *d.value_bits != 0)
                rep.identity_violations.push_back("d(p,p) != 0 for `" + serialize(p) + "`");
            ++rep.identity_distance_samples;
        }
    }

    // ---- directed strong triangle.
    // The distance between p and q is the least threshold whose reachability
    // relation connects them, so the triangle inequality over all triples
    // reduces to transitivity of each threshold's reachability. Reachability
    // rows were built by a sink-first sweep; verify transitivity directly:
    // reach(V) must be contained in reach(U) for every condensation edge U->V.
    for (const auto& cls : closure.classes()) {
        rep.triangle_concrete_triples = detail::sat_add(
            rep.triangle_concrete_triples,
            detail::sat_mul(cls.size(), detail::sat_mul(cls.size(), cls.size())));
        for (const auto& lv : cls.levels) {
            for (const auto& [a, b] : lv.dag_edges) {
                const uint64_t* ra = &lv.reach[a * lv.words];
                const uint64_t* rb = &lv.reach[b * lv.words];
                bool subset = true;
                for (std::size_t w = 0; w < lv.words; ++w)
                    if (rb[w] & ~ra[w]) {
                        subset = false;
                        break;
                    }
                ++rep.triangle_closure_checks;
                if (!subset)
                    rep.triangle_violations.push_back(
                        "reachability not transitive at budget " +
                        std::to_string(lv.budget_bits) + " (class key " +
                        std::to_string(cls.table_key) + ")");
            }
        }
    }
    {
        detail::Rng rng;
        for (std::size_t t = 0; t < 100000 && rep.universe_size > 0; ++t) {
            const auto& cls = closure.classes()[rng.below(closure.classes().size())];
            const uint32_t n = static_cast<uint32_t>(cls.size());
            const uint32_t i = static_cast<uint32_t>(rng.below(n));
            const uint32_t j = static_cast<uint32_t>(rng.below(n));
            const uint32_t k = static_cast<uint32_t>(rng.below(n));
            const auto dij = cls.dist_local(i, j);
            const auto djk = cls.dist_local(j, k);
            if (!dij || !djk) continue;
            const auto dik = cls.dist_local(i, k);
            ++rep.triangle_sampled_triples;
            if (!dik || *dik > std::max(*dij, *djk))
                rep.triangle_violations.push_back(
                    "triangle violated: d(i,k) > max(d(i,j), d(j,k)) in class key " +
                    std::to_string(cls.table_key));
        }
    }

    // ---- symmetry gap on the inverse-closed catalog.
    const Catalog closed = inverse_closure(cat);
    rep.closed_catalog_name = closed.name;
    rep.delta_bits = symmetry_delta(closed);
    const UniverseClosure closure2(u, spec.max_tokens, closed, spec.class_filter);
    for (const auto& cls : closure2.classes()) {
        if (cls.levels.empty()) continue;
        const ThresholdLevel& top = cls.levels.back();
        // Group members by their profile of per-level components; distances
        // between members depend only on the profiles.
        std::map<std::vector<uint32_t>, std::pair<uint32_t, std::size_t>> profiles;  // rep, count
        for (uint32_t i = 0; i < cls.size(); ++i) {
            std::vector<uint32_t> key;
            key.reserve(cls.levels.size());
            for (const auto& lv : cls.levels) key.push_back(lv.scc_of[i]);
            auto [it, fresh] = profiles.emplace(std::move(key), std::make_pair(i, std::size_t(0)));
            ++it->second.second;
        }
        // Mutually reachable = same top-level component.
        std::map<uint32_t, std::vector<const std::pair<uint32_t, std::size_t>*>> by_top;
        for (const auto& kv : profiles)
            by_top[top.scc_of[kv.second.first]].push_back(&kv.second);
        for (const auto& [scc, plist] : by_top) {
            std::size_t members_here = 0;
            for (const auto* pr : plist) members_here += pr->second;
            rep.mutual_pairs += members_here * (members_here - 1);
            for (std::size_t a = 0; a < plist.size(); ++a) {
                for (std::size_t b = a + 1; b < plist.size(); ++b) {
                    const uint32_t i = plist[a]->first, j = plist[b]->first;
                    const auto dij = cls.dist_local(i, j);
                    const auto dji = cls.dist_local(j, i);
                    if (!dij || !dji) {
                        rep.symmetry_violations.push_back(
                            "mutual pair missing a direction in class key " +
                            std::to_string(cls.table_key));
                        continue;
                    }
                    const std::size_t gap = *dij > *dji ? *dij - *dji : *dji - *dij;
                    rep.max_gap_bits = std::max(rep.max_gap_bits, gap);
                    if (gap > rep.delta_bits)
                        rep.symmetry_violations.push_back(
                            "symmetry gap " + std::to_string(gap) + " bits exceeds delta " +
                            std::to_string(rep.delta_bits) + " (class key " +
                            std::to_string(cls.table_key) + ")");
                }
            }
        }
        // Ordered cross-component reachable pairs are one-way by definition.
        for (uint32_t c = 0; c < top.scc_count; ++c) {
            std::size_t reach_members = 0;
            const uint64_t* row = &top.reach[c * top.words];
            for (uint32_t d = 0; d < top.scc_count; ++d)
                if (d != c && ((row[d / 64] >> (d % 64)) & 1u)) reach_members += top.scc_size[d];
            rep.one_way_pairs += static_cast<std::size_t>(top.scc_size[c]) * reach_members;
        }
    }

    // ---- exact axioms for the symmetrized distance (ultrametric from the
    // nested component hierarchy).
    rep.laminar_ok = true;
    for (const auto& cls : closure2.classes()) {
        for (std::size_t l = 0; l + 1 < cls.levels.size(); ++l) {
            const auto& fine = cls.levels[l];
            const auto& coarse = cls.levels[l + 1];
            std::unordered_map<uint32_t, uint32_t> image;
            for (uint32_t i = 0; i < cls.size(); ++i) {
                auto [it, fresh] = image.emplace(fine.scc_of[i], coarse.scc_of[i]);
                if (!fresh && it->second != coarse.scc_of[i]) {
                    rep.laminar_ok = false;
                    rep.symmetrized_violations.push_back(
                        "component hierarchy not nested between budgets " +
                        std::to_string(fine.budget_bits) + " and " +
                        std::to_string(coarse.budget_bits));
                }
            }
        }
    }
    {
        detail::Rng rng;
        for (std::size_t t = 0; t < 100000 && rep.universe_size > 0; ++t) {
            const auto& cls = closure2.classes()[rng.below(closure2.classes().size())];
            const uint32_t n = static_cast<uint32_t>(cls.size());
            const uint32_t i = static_cast<uint32_t>(rng.below(n));
            const uint32_t j = static_cast<uint32_t>(rng.below(n));
            const uint32_t k = static_cast<uint32_t>(rng.below(n));
            const auto dij = detail::sym_dist_local(cls, i, j);
            const auto djk = detail::sym_dist_local(cls, j, k);
            const auto dji = detail::sym_dist_local(cls, j, i);
            if (dij != dji)
                rep.symmetrized_violations.push_back("symmetrized distance not symmetric");
            if ((dij && *dij == 0 && i != j) || (i == j && (!dij || *dij != 0)))
                rep.symmetrized_violations.push_back("symmetrized identity axiom violated");
            if (!dij || !djk) continue;
            const auto dik = detail::sym_dist_local(cls, i, k);
            ++rep.symmetrized_sampled_triples;
            if (!dik || *dik > std::max(*dij, *djk))
                rep.symmetrized_violations.push_back("symmetrized strong triangle violated");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Budget sweep (the unboundedness analog)

struct SweepRow {
    std::size_t budget_bits = 0;
    std::size_t connected_pairs = 0;
    double connected_fraction = 0.0;
    std::size_t unreachable_pairs = 0;
};

struct SweepReport {
    int max_tokens = 0;
    std::size_t equivalent_pairs = 0;
    std::vector<SweepRow> rows;  // one per distinct catalog complexity, ascending
    std::size_t unreachable_at_full_catalog = 0;  // pairs no chain connects at all

    bool monotone() const {
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].connected_fraction < rows[i - 1].connected_fraction) return false;
        return true;
    }
    bool pass() const {
        if (!monotone()) return false;
        if (!rows.empty() && rows.front().budget_bits == 0 && rows.front().connected_pairs != 0)
            return false;
        return true;
    }

    std::string to_csv() const {
        std::string out = "budget_bits,connected_fraction,unreachable_pairs\n";
        for (const auto& r : rows)
            out += std::to_string(r.budget_bits) + "," + detail::fixed6(r.connected_fraction) +
                   "," + std::to_string(r.unreachable_pairs) + "\n";
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["max_tokens"] = max_tokens;
        j["equivalent_pairs"] = equivalent_pairs;
        nlohmann::ordered_json rows_j = nlohmann::ordered_json::array();
        for (const auto& r : rows)
            rows_j.push_back({{"budget_bits", r.budget_bits},
                              {"connected_pairs", r.connected_pairs},
                              {"connected_fraction", detail::fixed6(r.connected_fraction)},
                              {"unreachable_pairs", r.unreachable_pairs}});
        j["rows"] = rows_j;
        j["unreachable_at_full_catalog"] = unreachable_at_full_catalog;
        j["pass"] = pass();
        return j;
    }
};

inline SweepReport budget_sweep(const Universe& u, const UniverseSpec& spec, const Catalog& cat) {
    SweepReport rep;
    rep.max_tokens = spec.max_tokens;
    const UniverseClosure closure(u, spec.max_tokens, cat, spec.class_filter);
    rep.equivalent_pairs = closure.equivalent_pairs();
    const auto budgets = cat.distinct_bits();
    for (const std::size_t b : budgets) {
        SweepRow row;
        row.budget_bits = b;
        // connectivity uses strictly cheaper steps: chains whose every step
        // costs below the budget
        std::size_t below = 0;
        bool have_below = false;
        for (const std::size_t lb : closure.level_budgets())
            if (lb < b) {
                below = lb;
                have_below = true;
            }
        row.connected_pairs = have_below ? closure.connected_pairs_upto(below) : 0;
        row.connected_fraction =
            rep.equivalent_pairs ? static_cast<double>(row.connected_pairs) /
                                       static_cast<double>(rep.equivalent_pairs)
                                 : 0.0;
        row.unreachable_pairs = rep.equivalent_pairs - row.connected_pairs;
        rep.rows.push_back(row);
    }
    const std::size_t max_level =
        closure.level_budgets().empty() ? 0 : closure.level_budgets().back();
    rep.unreachable_at_full_catalog =
        rep.equivalent_pairs - closure.connected_pairs_upto(max_level);
    return rep;
}

// ---------------------------------------------------------------------------
// Comments-versus-algebra ordering experiment

struct OrderingReport {
    int max_tokens = 0;
    std::size_t comment_pairs = 0;
    std::size_t comment_max_bits = 0;
    std::size_t expression_pairs = 0;
    std::map<std::string, std::size_t> expression_histogram;  // "5", "9", "over_9"
    std::size_t expression_pairs_over_9 = 0;
    std::size_t example_comment_pair_bits = 0;   // d(# 1 ( x + x ), ( x + x ))
    bool example_expression_pair_over_9 = false;  // d(( x + x ), ( 2 * x )) > 9
    std::vector<std::string> violations;

    bool pass() const {
        return violations.empty() && comment_max_bits <= 9 && expression_pairs_over_9 > 0;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["max_tokens"] = max_tokens;
        j["comment_pairs"] = {{"count", comment_pairs}, {"max_bits", comment_max_bits}};
        j["expression_pairs"] = {{"count", expression_pairs},
                                 {"histogram", expression_histogram},
                                 {"over_9_bits", expression_pairs_over_9}};
        j["example"] = {{"comment_pair_bits", example_comment_pair_bits},
                        {"expression_pair_over_9", example_expression_pair_over_9}};
        j["violations"] = violations;
        j["pass"] = pass();
        return j;
    }
};

inline OrderingReport ordering_experiment(const Universe& u, const UniverseSpec& spec,
                                          const Catalog& cat) {
    OrderingReport rep;
    rep.max_tokens = spec.max_tokens;

    // (a) every comment-variant pair is within 9 bits: exhibit the two-phase
    // chain (strip the old comment, append the new numeral) and check it.
    std::vector<std::string> numerals{""};
    for (int d = 0; d <= 9; ++d) numerals.push_back(std::string(1, '0' + d));
    for (int d1 = 0; d1 <= 9; ++d1)
        for (int d2 = 0; d2 <= 9; ++d2)
            numerals.push_back({static_cast<char>('0' + d1), static_cast<char>('0' + d2)});

    u.for_each_upto(spec.max_tokens - 2, [&](std::size_t, std::string_view body) {
        if (body[0] == '#') return;  // bodies are comment-free programs
        auto fits = [&](const std::string& c) {
            return c.empty() ||
                   1 + c.size() + body.size() <= static_cast<std::size_t>(spec.max_tokens);
        };
        for (const auto& c1 : numerals) {
            if (!fits(c1)) continue;
            for (const auto& c2 : numerals) {
                if (c1 == c2 || !fits(c2)) continue;
                Chain chain;
                chain.source = u.parse_compact(c1.empty() ? std::string(body)
                                                          : "#" + c1 + std::string(body));
                chain.target = u.parse_compact(c2.empty() ? std::string(body)
                                                          : "#" + c2 + std::string(body));
                if (!c1.empty()) chain.steps.push_back(Transformation::strip_comment());
                for (char d : c2) chain.steps.push_back(Transformation::append_comment_digit(d - '0'));
                const ChainCheckResult r = check_chain(u, chain, cat);
                ++rep.comment_pairs;
                if (!r.ok) {
                    rep.violations.push_back("comment-variant witness chain rejected: " +
                                             r.diagnostic);
                    continue;
                }
                rep.comment_max_bits = std::max(rep.comment_max_bits, r.max_step_bits);
                if (r.max_step_bits > 9)
                    rep.violations.push_back("comment-variant pair needs " +
                                             std::to_string(r.max_step_bits) + " bits");
            }
        }
    });

    // (b) expression-distinct equivalent pairs. Between comment-free
    // programs, comment steps cannot lower a sub-10-bit bottleneck (they
    // project away), and no step priced above 9 bits can appear in a chain
    // with bottleneck <= 9; so the 9-bit tier is decided on the comment-free
    // subgraph. Pairs not connected there sit strictly above every
    // comment-variant pair.
    Catalog tier9;
    tier9.name = cat.name + "<=9";
    tier9.bound = cat.bound;
    for (const auto& e : cat.entries)
        if (e.bits <= 9 && e.transform.kind != TKind::AppendCommentDigit)
            tier9.entries.push_back(e);
    tier9.sort_canonical();

    std::vector<Program> exprs;
    u.for_each_upto(spec.max_tokens, [&](std::size_t, std::string_view c) {
        if (c.find('#') == std::string_view::npos && c.find('S') == std::string_view::npos)
            exprs.push_back(u.parse_compact(c));
    });
    const Program ex_src = u.parse("( x + x )");
    const Program ex_dst = u.parse("( 2 * x )");
    for (const auto& p : exprs) {
        const FunctionTable tp = u.table(p);
        for (const auto& q : exprs) {
            if (compact(p) == compact(q) || u.table(q) != tp) continue;
            SearchBounds b;
            b.max_program_tokens = spec.max_tokens + 8;
            const DistanceResult d = distance(u, p, q, tier9, b);
            ++rep.expression_pairs;
            if (d.reachable()) {
                ++rep.expression_histogram[std::to_string(*d.value_bits)];
            } else {
                ++rep.expression_histogram["over_9"];
                ++rep.expression_pairs_over_9;
            }
            if (compact(p) == compact(ex_src) && compact(q) == compact(ex_dst))
                rep.example_expression_pair_over_9 = !d.reachable();
        }
    }

    // The named instance: a commented variant sits at 5 bits, below the
    // algebraically different pair.
    {
        const Program commented = u.parse("# 1 ( x + x )");
        const DistanceResult d =
            distance(u, commented, ex_src, cat, SearchBounds::defaults_for(commented, ex_src));
        if (!d.reachable() || *d.value_bits != 5)
            rep.violations.push_back("expected d(# 1 ( x + x ), ( x + x )) = 5 bits");
        else
            rep.example_comment_pair_bits = *d.value_bits;
        if (!rep.example_expression_pair_over_9)
            rep.violations.push_back(
                "expected d(( x + x ), ( 2 * x )) to exceed the 9-bit comment tier");
    }
    if (rep.expression_pairs_over_9 == 0)
        rep.violations.push_back("no expression-distinct pair above the comment tier");
    return rep;
}

// ---------------------------------------------------------------------------
// Selector demo (the rejected cross-selector route)

struct SelectorReport {
    std::string source, padded, flipped, target;
    int verify_bound = 0;
    bool append_steps_valid = false;
    bool padded_preserves_table = false;
    bool flip_rejected = false;
    std::string flip_counterexample;
    bool flip_preserves_table_here = false;  // on this one input, not in general
    std::size_t invariant_checked = 0;       // programs swept for the selector invariant
    bool restricted_unreachable = false;
    bool full_unreachable = false;
    std::vector<std::string> violations;

    bool pass() const { return violations.empty(); }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["programs"] = {{"source", source},
                         {"padded", padded},
                         {"rejected_flip", flipped},
                         {"target", target}};
        j["verify_bound"] = verify_bound;
        j["append_steps_valid"] = append_steps_valid;
        j["padded_preserves_table"] = padded_preserves_table;
        j["flip"] = {{"rejected", flip_rejected},
                     {"counterexample", flip_counterexample},
                     {"preserves_table_on_this_input", flip_preserves_table_here}};
        j["selector_invariant_sweep"] = invariant_checked;
        j["restricted_catalog_unreachable"] = restricted_unreachable;
        j["full_catalog_unreachable"] = full_unreachable;
        j["pass"] = pass();
        return j;
    }
};

inline SelectorReport selector_demo(const Universe& u, const Catalog& cat, int verify_bound = 6) {
    SelectorReport rep;
    rep.verify_bound = verify_bound;
    const Program src = u.parse("1 0 S");
    const Program dst = u.parse("2 S ( 0 + 0 )");
    rep.source = serialize(src);
    rep.target = serialize(dst);

    // (1)-(2) pad code for the other function after the separator, one token
    // at a time; each step is itself a verified interpreter.
    const std::string code_j = "(0+0)";
    Program padded = src;
    rep.append_steps_valid = true;
    for (char t : code_j) {
        const Transformation step = Transformation::append_inactive_token(t);
        const VerificationReport vr = verify(u, step, verify_bound);
        if (!vr.valid) {
            rep.append_steps_valid = false;
            rep.violations.push_back("append step " + to_term(step) + " failed verification");
        }
        padded = apply(u, step, padded);
    }
    rep.padded = serialize(padded);
    rep.padded_preserves_table = u.table(padded) == u.table(src);
    if (!rep.padded_preserves_table)
        rep.violations.push_back("padding after S changed the denoted function");

    // (3) the flip itself is not a valid interpreter, even though on this
    // particular input it would preserve the function.
    const Transformation flip = Transformation::flip_selector();
    const Program flipped = apply(u, flip, padded);
    rep.flipped = serialize(flipped);
    rep.flip_preserves_table_here = u.table(flipped) == u.table(padded);
    const VerificationReport fr = verify(u, flip, verify_bound);
    rep.flip_rejected = !fr.valid;
    if (fr.valid) {
        rep.violations.push_back("FlipSelector unexpectedly verified as valid");
    } else {
        rep.flip_counterexample = serialize(*fr.counterexample);
    }

    // The restricted catalog can edit comments and dead code only.
    Catalog restricted;
    restricted.name = "comment-and-inactive";
    restricted.bound = verify_bound;
    restricted.add(Transformation::id(), verify_bound);
    restricted.add(Transformation::strip_comment(), verify_bound);
    for (int d = 0; d <= 9; ++d)
        restricted.add(Transformation::append_comment_digit(d), verify_bound);
    for (int c = 0; c <= 14; ++c)
        restricted.add(Transformation::append_inactive_token(inactive_token_from_code(c)),
                       verify_bound);
    restricted.add(Transformation::clear_inactive(), verify_bound);
    restricted.sort_canonical();

    // Selector invariant: nothing in either catalog moves the selector or the
    // active run (FlipSelector is in neither).
    u.for_each_upto(5, [&](std::size_t, std::string_view c) {
        if (c.find('S') == std::string_view::npos) return;
        const Program p = u.parse_compact(c);
        for (const Catalog* cc : {const_cast<const Catalog*>(&restricted), &cat})
            for (const auto& e : cc->entries) {
                const Program r = apply(u, e.transform, p);
                if (!r.split || r.selector != p.selector || r.active_run() != p.active_run()) {
                    rep.violations.push_back("entry " + to_term(e.transform) +
                                             " moved the selector or active run of `" +
                                             serialize(p) + "`");
                }
            }
        ++rep.invariant_checked;
    });

    SearchBounds bounds;
    bounds.max_program_tokens = static_cast<int>(token_count(dst));
    const DistanceResult dr = distance(u, src, dst, restricted, bounds);
    rep.restricted_unreachable = !dr.reachable();
    if (dr.reachable())
        rep.violations.push_back("restricted catalog unexpectedly connects the two forms");
    const DistanceResult df = distance(u, src, dst, cat, bounds);
    rep.full_unreachable = !df.reachable();
    if (df.reachable())
        rep.violations.push_back("full catalog unexpectedly connects the two forms");
    return rep;
}

}  // namespace im
