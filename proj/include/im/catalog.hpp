#pragma once

// A catalog is the finite set of transformations the metric is allowed to
// chain, each with its complexity in bits and the bound it was verified at.
// The identity is always a member. Catalog files are line-oriented: `# key:
// value` headers followed by one transformation term per line.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "im/enumerate.hpp"
#include "im/transform.hpp"
#include "im/verify.hpp"

namespace im {

class MalformedCatalog : public std::runtime_error {
public:
    MalformedCatalog(const std::string& msg, std::size_t line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class VerificationFailed : public std::runtime_error {
public:
    explicit VerificationFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct CatalogEntry {
    Transformation transform;
    std::size_t bits = 0;  // normally complexity(transform); tests may break this
    int bound = 0;         // verification bound the entry is trusted at
};

struct Catalog {
    std::string name;
    int bound = 7;
    std::vector<CatalogEntry> entries;

    bool contains(const Transformation& t) const {
        return std::any_of(entries.begin(), entries.end(),
                           [&](const CatalogEntry& e) { return e.transform == t; });
    }
    const CatalogEntry* find(const Transformation& t) const {
        for (const auto& e : entries)
            if (e.transform == t) return &e;
        return nullptr;
    }
    void add(Transformation t, int verified_bound) {
        if (contains(t)) return;
        CatalogEntry e;
        e.bits = complexity(t);
        e.bound = verified_bound;
        e.transform = std::move(t);
        entries.push_back(std::move(e));
    }
    void sort_canonical() {
        std::sort(entries.begin(), entries.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
            return encode(a.transform) < encode(b.transform);
        });
    }
    // Distinct step budgets, ascending (the thresholds of the metric).
    std::vector<std::size_t> distinct_bits() const {
        std::vector<std::size_t> v;
        for (const auto& e : entries) v.push_back(e.bits);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }
    std::size_t max_bits() const {
        std::size_t b = 0;
        for (const auto& e : entries) b = std::max(b, e.bits);
        return b;
    }
};

// The shipped base catalog: the identity, all comment and inactive-run
// editors, the algebraic rewrites, and one inverse-dovetail wrapper.
// FlipSelector is deliberately absent; it fails verification.
inline Catalog standard_catalog(const Universe& u, int bound = 7) {
    Catalog cat;
    cat.name = "base";
    cat.bound = bound;
    cat.add(Transformation::id(), bound);
    cat.add(Transformation::strip_comment(), bound);
    for (int d = 0; d <= 9; ++d) cat.add(Transformation::append_comment_digit(d), bound);
    cat.add(Transformation::commute_add(), bound);
    cat.add(Transformation::commute_mul(), bound);
    cat.add(Transformation::fold_const(), bound);
    cat.add(Transformation::add_zero_elim(), bound);
    cat.add(Transformation::add_zero_intro(), bound);
    cat.add(Transformation::mul_one_elim(), bound);
    cat.add(Transformation::mul_one_intro(), bound);
    for (int a = 0; a < u.modulus(); ++a) cat.add(Transformation::unfold_const_add(a), bound);
    for (int c = 0; c <= 14; ++c)
        cat.add(Transformation::append_inactive_token(inactive_token_from_code(c)), bound);
    cat.add(Transformation::clear_inactive(), bound);
    cat.add(Transformation::inv_dovetail(Transformation::strip_comment()), bound);
    cat.sort_canonical();
    return cat;
}

// One-level closure under the inverse-dovetail construction: for every entry
// s, InvDovetail(s) is also present.
inline Catalog inverse_closure(const Catalog& cat) {
    Catalog out = cat;
    out.name = cat.name + "+inv";
    for (const auto& e : cat.entries) out.add(Transformation::inv_dovetail(e.transform), e.bound);
    out.sort_canonical();
    return out;
}

// The symmetry slack: reversing an s-step via the inverse construction costs
// at most max(9, 5 + rawlen(s)) per step, against a forward cost of bits(s).
inline std::size_t symmetry_delta(const Catalog& cat) {
    std::size_t delta = 9;  // the comment-step constant
    for (const auto& e : cat.entries) {
        const std::size_t inv_cost = 5 + rawlen(e.transform);
        if (inv_cost > e.bits) delta = std::max(delta, inv_cost - e.bits);
    }
    return delta;
}

inline void catalog_save(const Catalog& cat, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open catalog file for writing: " + path);
    out << "# name: " << cat.name << "\n";
    out << "# bound: " << cat.bound << "\n";
    for (const auto& e : cat.entries) out << to_term(e.transform) << "\n";
}

inline Catalog catalog_load(const Universe& u, const std::string& path, bool reverify = false) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open catalog file: " + path);
    Catalog cat;
    cat.name = "catalog";
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            std::istringstream hs(line.substr(start + 1));
            std::string key;
            hs >> key;
            if (key == "name:") hs >> cat.name;
            else if (key == "bound:") {
                if (!(hs >> cat.bound) || cat.bound < 1)
                    throw MalformedCatalog("invalid bound header", lineno);
            }
            continue;
        }
        try {
            Transformation t = parse_term(line.substr(start), u.modulus());
            if (!cat.contains(t)) {
                CatalogEntry e;
                e.bits = complexity(t);
                e.bound = cat.bound;
                e.transform = std::move(t);
                cat.entries.push_back(std::move(e));
            }
        } catch (const MalformedTerm& e) {
            throw MalformedCatalog(e.what(), lineno);
        }
    }
    cat.add(Transformation::id(), cat.bound);  // Id is always a member
    cat.sort_canonical();
    if (reverify) {
        for (const auto& e : cat.entries) {
            VerificationReport rep = verify(u, e.transform, e.bound);
            if (!rep.valid)
                throw VerificationFailed("catalog entry " + to_term(e.transform) +
                                         " is not a valid interpreter at bound " +
                                         std::to_string(e.bound) + "; counterexample: " +
                                         serialize(*rep.counterexample));
        }
    }
    return cat;
}

}  // namespace im
