#pragma once

// Canonical enumeration of all well-formed programs: token count ascending,
// then lexicographic under the token order (see tokens.hpp). The enumeration
// doubles as the program numbering, so ordinals act as desk-scale Godel
// numbers. A Universe owns one modulus, one enumeration ceiling, and the
// caches derived from them; all public operations are safe to call from
// concurrent threads and are observably pure.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "im/lang.hpp"
#include "im/tokens.hpp"

namespace im {

class EnumerationCeilingExceeded : public std::runtime_error {
public:
    explicit EnumerationCeilingExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

// Counts saturate well below overflow so that "more than any ceiling" is
// representable.
inline constexpr std::size_t kCountCap = std::size_t(1) << 60;

inline std::size_t sat_add(std::size_t a, std::size_t b) {
    if (a >= kCountCap || b >= kCountCap || a + b >= kCountCap) return kCountCap;
    return a + b;
}
inline std::size_t sat_mul(std::size_t a, std::size_t b) {
    if (a == 0 || b == 0) return 0;
    if (a >= kCountCap / b) return kCountCap;
    return a * b;
}
inline std::size_t sat_pow(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r = sat_mul(r, base);
    return r;
}

// Fixed-capacity chunked array: element addresses are stable and reads need
// no lock once an element is published (single writer bumps the size with a
// release store).
template <class T>
class ChunkedStore {
public:
    static constexpr std::size_t kBlock = 8192;

    explicit ChunkedStore(std::size_t capacity_hint) {
        blocks_.reserve(capacity_hint / kBlock + 2);
    }
    std::size_t size() const { return size_.load(std::memory_order_acquire); }
    const T& operator[](std::size_t i) const { return blocks_[i / kBlock][i % kBlock]; }
    void push_back(T v) {
        const std::size_t n = size_.load(std::memory_order_relaxed);
        if (n % kBlock == 0) {
            if (blocks_.size() == blocks_.capacity()) blocks_.reserve(blocks_.capacity() * 2 + 2);
            blocks_.push_back(std::make_unique<T[]>(kBlock));
        }
        blocks_.back()[n % kBlock] = std::move(v);
        size_.store(n + 1, std::memory_order_release);
    }

private:
    std::vector<std::unique_ptr<T[]>> blocks_;
    std::atomic<std::size_t> size_{0};
};

inline constexpr char kInactiveTokens[15] = {'0', '1', '2', '3', '4', '5', '6', '7',
                                             '8', '9', '(', ')', '*', '+', 'x'};

template <class Fn>
void for_each_token_string(const char* alphabet, int alpha_n, int len, std::string& buf, Fn&& fn) {
    if (len == 0) {
        fn(buf);
        return;
    }
    for (int i = 0; i < alpha_n; ++i) {
        buf.push_back(alphabet[i]);
        for_each_token_string(alphabet, alpha_n, len - 1, buf, fn);
        buf.pop_back();
    }
}

}  // namespace detail

class Universe {
public:
    // ceiling == 0 selects the default: every program of at most 7 tokens
    // (7 is also the default verification bound, so bound-7 sweeps always fit).
    explicit Universe(int m = 5, std::size_t ceiling = 0) : m_(m) {
        if (m < 2 || m > 10)
            throw std::invalid_argument("modulus must be in 2..10 (constants are single digits)");
        ceiling_ = ceiling ? ceiling : count_upto(7);
        programs_ = std::make_unique<detail::ChunkedStore<std::string>>(ceiling_);
        table_keys_ = std::make_unique<detail::ChunkedStore<uint64_t>>(ceiling_);
    }

    Universe(const Universe&) = delete;
    Universe& operator=(const Universe&) = delete;

    int modulus() const { return m_; }
    std::size_t ceiling() const { return ceiling_; }

    // ----- language conveniences -------------------------------------------
    Program parse(std::string_view text) const { return im::parse(text, m_); }
    Program parse_compact(std::string_view toks) const { return im::parse_compact(toks, m_); }
    Value evaluate(const Program& p, Value x) const { return im::evaluate(p, x, m_); }
    FunctionTable table(const Program& p) const { return im::table(p, m_); }
    bool equivalent(const Program& p, const Program& q) const { return im::equivalent(p, q, m_); }

    // ----- closed-form counting --------------------------------------------
    std::size_t expr_count(int tokens) const {
        if (tokens < 1 || tokens % 4 != 1) return 0;
        // Local DP; cheap enough that no shared memo is worth the locking.
        std::vector<std::size_t> e(tokens + 1, 0);
        e[1] = static_cast<std::size_t>(m_) + 1;  // constants 0..m-1 and x
        for (int j = 5; j <= tokens; j += 4) {
            std::size_t n = 0;
            for (int a = 1; a <= j - 4; a += 4)  // |L| + |R| = j - 3, both >= 1
                n = detail::sat_add(n, detail::sat_mul(e[a], e[j - 3 - a]));
            e[j] = detail::sat_mul(n, 2);  // + and *
        }
        return e[tokens];
    }

    std::size_t body_count(int tokens) const {
        if (tokens < 1) return 0;
        std::size_t n = expr_count(tokens);
        // split forms: selector + active expr + S + junk (either side)
        for (int a = 1; a <= tokens - 2; a += 4) {
            const int b = tokens - 2 - a;
            n = detail::sat_add(
                n, detail::sat_mul(2, detail::sat_mul(expr_count(a), detail::sat_pow(15, b))));
        }
        return n;
    }

    std::size_t count_exact(int tokens) const {
        if (tokens < 1) return 0;
        std::size_t n = body_count(tokens);
        for (int d = 1; d <= tokens - 2; ++d)
            n = detail::sat_add(
                n, detail::sat_mul(detail::sat_pow(10, d), body_count(tokens - 1 - d)));
        return n;
    }

    std::size_t count_upto(int tokens) const {
        std::size_t n = 0;
        for (int k = 1; k <= tokens; ++k) n = detail::sat_add(n, count_exact(k));
        return n;
    }

    // ----- enumeration -----------------------------------------------------

    // Materializes at least min(n, ceiling) programs; returns the number now
    // materialized (>= the request after capping).
    std::size_t materialize_at_least(std::size_t n) const {
        const std::size_t target = std::min(n, ceiling_);
        if (programs_->size() >= target) return programs_->size();
        std::lock_guard<std::mutex> lock(mu_);
        while (programs_->size() < target) materialize_next_stratum();
        return programs_->size();
    }

    std::size_t materialized() const { return programs_->size(); }

    // Compact token string of the i-th program. The index must already be
    // materialized.
    const std::string& compact_at(std::size_t i) const { return (*programs_)[i]; }

    Program program_at(std::size_t i) const {
        if (i >= ceiling_)
            throw EnumerationCeilingExceeded("program_at(" + std::to_string(i) +
                                             "): enumeration ceiling is " +
                                             std::to_string(ceiling_));
        materialize_at_least(i + 1);
        return parse_compact(compact_at(i));
    }

    std::size_t index_of(const Program& p) const {
        const std::string pc = compact(p);
        materialize_at_least(count_upto(static_cast<int>(pc.size())));
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = index_.find(std::string_view(pc));
            if (it != index_.end()) return it->second;
        }
        throw EnumerationCeilingExceeded("index_of: `" + serialize(p) +
                                         "` lies beyond the enumeration ceiling " +
                                         std::to_string(ceiling_));
    }

    // All programs with at most maxTokens tokens, canonical order.
    std::vector<Program> enumerate(int max_tokens) const {
        const std::size_t n = require_upto(max_tokens);
        std::vector<Program> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(parse_compact(compact_at(i)));
        return out;
    }

    // Streams compact strings; fn(index, compact). Lock-free after an initial
    // materialization, so fn may call back into the universe.
    template <class Fn>
    void for_each_upto(int max_tokens, Fn&& fn) const {
        const std::size_t n = require_upto(max_tokens);
        for (std::size_t i = 0; i < n; ++i) fn(i, std::string_view(compact_at(i)));
    }

    // Packed FunctionTable key of the i-th program (cached).
    uint64_t table_key_at(std::size_t i) const {
        ensure_tables(i + 1);
        return (*table_keys_)[i];
    }

    void ensure_tables(std::size_t n) const {
        if (table_keys_->size() >= n) return;
        materialize_at_least(n);
        std::lock_guard<std::mutex> lock(tables_mu_);
        for (std::size_t i = table_keys_->size(); i < n; ++i)
            table_keys_->push_back(table(parse_compact(compact_at(i))).key());
    }

    // Number of programs with <= max_tokens tokens, after checking the
    // ceiling admits them.
    std::size_t require_upto(int max_tokens) const {
        if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
        const std::size_t n = count_upto(max_tokens);
        if (n > ceiling_)
            throw EnumerationCeilingExceeded(
                "universe of <=" + std::to_string(max_tokens) + " tokens has " + std::to_string(n) +
                " programs, beyond the enumeration ceiling " + std::to_string(ceiling_));
        materialize_at_least(n);
        return n;
    }

    // ----- dovetail support --------------------------------------------------
    // Memoized reverse lookup for inverse-dovetail interpreters: among the
    // first n enumerated programs q, the last one whose stripped image under a
    // stored transformation equals `body_compact`. The memo is keyed by the
    // caller (one per stored transformation encoding) and extended on demand;
    // n is capped at the ceiling.
    std::optional<std::size_t> dovetail_last_match(
        const std::string& memo_key, std::string_view body_compact, std::size_t n,
        const std::function<std::string(const Program&)>& stripped_apply) const {
        const std::size_t n_eff = std::min(n, ceiling_);
        if (n_eff == 0) return std::nullopt;
        materialize_at_least(n_eff);
        DovetailMemo* memo;
        {
            std::lock_guard<std::mutex> lock(dovetail_mu_);
            auto& slot = dovetail_[memo_key];
            if (!slot) slot = std::make_unique<DovetailMemo>();
            memo = slot.get();
        }
        std::lock_guard<std::mutex> lock(memo->mu);
        for (std::size_t i = memo->built; i < n_eff; ++i) {
            std::string img = stripped_apply(parse_compact(compact_at(i)));
            memo->by_body[std::move(img)].push_back(static_cast<uint32_t>(i));
        }
        if (memo->built < n_eff) memo->built = n_eff;
        auto it = memo->by_body.find(std::string(body_compact));
        if (it == memo->by_body.end()) return std::nullopt;
        const auto& idxs = it->second;
        auto pos = std::lower_bound(idxs.begin(), idxs.end(), static_cast<uint32_t>(n_eff));
        if (pos == idxs.begin()) return std::nullopt;
        return static_cast<std::size_t>(*std::prev(pos));
    }

private:
    // --- generation ---------------------------------------------------------

    const std::vector<std::string>& exprs_of(int tokens) const {
        // Only called with mu_ held.
        if (static_cast<std::size_t>(tokens) >= exprs_.size()) exprs_.resize(tokens + 1);
        auto& list = exprs_[tokens];
        if (!list.empty() || expr_count(tokens) == 0) return list;
        if (tokens == 1) {
            for (int v = 0; v < m_; ++v) list.push_back(std::string(1, static_cast<char>('0' + v)));
            list.push_back("x");
            return list;
        }
        list.reserve(expr_count(tokens));
        for (int a = 1; a <= tokens - 4; a += 4) {
            const int b = tokens - 3 - a;
            const auto& ls = exprs_of(a);
            const auto& rs = exprs_of(b);
            for (const char op : {'*', '+'})
                for (const auto& l : ls)
                    for (const auto& r : rs) {
                        std::string e;
                        e.reserve(tokens);
                        e.push_back('(');
                        e += l;
                        e.push_back(op);
                        e += r;
                        e.push_back(')');
                        list.push_back(std::move(e));
                    }
        }
        return list;
    }

    template <class Sink>
    void gen_bodies(int j, Sink&& sink) const {
        if (expr_count(j) != 0)
            for (const auto& e : exprs_of(j)) sink(e);
        for (int a = 1; a <= j - 2; a += 4) {
            if (expr_count(a) == 0) continue;
            const int b = j - 2 - a;
            std::string junk;
            junk.reserve(b);
            detail::for_each_token_string(
                detail::kInactiveTokens, 15, b, junk, [&](const std::string& jk) {
                    for (const auto& e : exprs_of(a)) {
                        std::string s1;
                        s1.reserve(j);
                        s1.push_back('1');
                        s1 += e;
                        s1.push_back('S');
                        s1 += jk;
                        sink(std::move(s1));
                        std::string s2;
                        s2.reserve(j);
                        s2.push_back('2');
                        s2 += jk;
                        s2.push_back('S');
                        s2 += e;
                        sink(std::move(s2));
                    }
                });
        }
    }

    template <class Sink>
    void gen_stratum(int k, Sink&& sink) const {
        gen_bodies(k, sink);
        static constexpr char kDigits[10] = {'0', '1', '2', '3', '4', '5', '6', '7', '8', '9'};
        for (int d = 1; d <= k - 2; ++d) {
            const int body_tokens = k - 1 - d;
            if (body_count(body_tokens) == 0) continue;
            gen_bodies(body_tokens, [&](const std::string& b) {
                std::string digits;
                digits.reserve(d);
                detail::for_each_token_string(kDigits, 10, d, digits, [&](const std::string& ds) {
                    std::string s;
                    s.reserve(k);
                    s.push_back('#');
                    s += ds;
                    s += b;
                    sink(std::move(s));
                });
            });
        }
    }

    // Appends the next stratum (or the ceiling-bounded prefix of it) to the
    // program store. Caller holds mu_.
    void materialize_next_stratum() const {
        const int k = next_stratum_;
        const std::size_t have = programs_->size();
        const std::size_t stratum = count_exact(k);
        const std::size_t room = ceiling_ - have;
        std::vector<std::string> batch;
        if (stratum <= room) {
            batch.reserve(stratum);
            gen_stratum(k, [&](std::string s) { batch.push_back(std::move(s)); });
            std::sort(batch.begin(), batch.end(),
                      [](const std::string& a, const std::string& b) { return rank_less(a, b); });
        } else {
            // Keep only the lexicographically smallest `room` programs.
            auto cmp = [](const std::string& a, const std::string& b) { return rank_less(a, b); };
            std::priority_queue<std::string, std::vector<std::string>, decltype(cmp)> heap(cmp);
            gen_stratum(k, [&](std::string s) {
                if (heap.size() < room) {
                    heap.push(std::move(s));
                } else if (rank_less(s, heap.top())) {
                    heap.pop();
                    heap.push(std::move(s));
                }
            });
            batch.resize(heap.size());
            for (std::size_t i = heap.size(); i-- > 0;) {
                batch[i] = heap.top();
                heap.pop();
            }
        }
        for (auto& s : batch) {
            programs_->push_back(std::move(s));
            const std::size_t idx = programs_->size() - 1;
            index_.emplace(std::string_view(compact_at(idx)), idx);
        }
        ++next_stratum_;
    }

    struct DovetailMemo {
        std::mutex mu;
        std::unordered_map<std::string, std::vector<uint32_t>> by_body;
        std::size_t built = 0;
    };

    int m_;
    std::size_t ceiling_;
    mutable std::mutex mu_;
    mutable std::mutex tables_mu_;
    mutable std::mutex dovetail_mu_;
    mutable int next_stratum_ = 1;
    std::unique_ptr<detail::ChunkedStore<std::string>> programs_;
    std::unique_ptr<detail::ChunkedStore<uint64_t>> table_keys_;
    mutable std::unordered_map<std::string_view, std::size_t> index_;
    mutable std::vector<std::vector<std::string>> exprs_;
    mutable std::unordered_map<std::string, std::unique_ptr<DovetailMemo>> dovetail_;
};

}  // namespace im
