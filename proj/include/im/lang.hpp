#pragma once

// Core language: syntax, canonical form and semantics.
//
// A program is an optional comment (`#` followed by decimal digit tokens)
// and a body. A body is either a plain expression or a split form
// `<1|2> run1 S run2` in which only the selected run is executed; the other
// run is an arbitrary sequence of tokens (no S, no #) and is never parsed.
// Expressions are fully parenthesized: x, a constant below the modulus, or
// `( L op R )` with op in {+, *}. Evaluation is total over Z_m.
//
// Canonical text is the single-space-separated token sequence; internally
// programs also travel as "compact" strings (one char per token) since every
// token is a single character.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "im/tokens.hpp"

namespace im {

using Value = int;

class MalformedProgram : public std::runtime_error {
public:
    MalformedProgram(std::string msg, std::size_t token_pos)
        : std::runtime_error(std::move(msg)), token_pos_(token_pos) {}
    // Index of the offending token (0-based), or the token count for
    // "unexpected end of input" errors.
    std::size_t token_pos() const { return token_pos_; }

private:
    std::size_t token_pos_;
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind : uint8_t { Var, Const, Add, Mul };

    Kind kind;
    Value value = 0;     // Const only
    ExprPtr lhs, rhs;    // Add/Mul only

    static ExprPtr var() {
        static const ExprPtr v = std::make_shared<Expr>(Expr{Kind::Var, 0, nullptr, nullptr});
        return v;
    }
    static ExprPtr constant(Value v) {
        return std::make_shared<Expr>(Expr{Kind::Const, v, nullptr, nullptr});
    }
    static ExprPtr binary(Kind k, ExprPtr l, ExprPtr r) {
        return std::make_shared<Expr>(Expr{k, 0, std::move(l), std::move(r)});
    }

    bool is_binary() const { return kind == Kind::Add || kind == Kind::Mul; }
};

inline std::size_t expr_token_count(const Expr& e) {
    if (!e.is_binary()) return 1;
    return 3 + expr_token_count(*e.lhs) + expr_token_count(*e.rhs);
}

inline void expr_compact_into(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::Var:   out.push_back('x'); return;
        case Expr::Kind::Const: out.push_back(static_cast<char>('0' + e.value)); return;
        case Expr::Kind::Add:
        case Expr::Kind::Mul:
            out.push_back('(');
            expr_compact_into(*e.lhs, out);
            out.push_back(e.kind == Expr::Kind::Add ? '+' : '*');
            expr_compact_into(*e.rhs, out);
            out.push_back(')');
            return;
    }
}

inline std::string expr_compact(const Expr& e) {
    std::string out;
    out.reserve(expr_token_count(e));
    expr_compact_into(e, out);
    return out;
}

inline Value eval_expr(const Expr& e, Value x, int m) {
    switch (e.kind) {
        case Expr::Kind::Var:   return x;
        case Expr::Kind::Const: return e.value % m;
        case Expr::Kind::Add:   return (eval_expr(*e.lhs, x, m) + eval_expr(*e.rhs, x, m)) % m;
        case Expr::Kind::Mul:   return (eval_expr(*e.lhs, x, m) * eval_expr(*e.rhs, x, m)) % m;
    }
    return 0;
}

// Parses one expression from compact tokens starting at `pos`; advances `pos`
// past it. Constants must lie below the modulus.
inline ExprPtr parse_expr_compact(std::string_view toks, std::size_t& pos, int m) {
    if (pos >= toks.size())
        throw MalformedProgram("expected expression, got end of input", pos);
    const char c = toks[pos];
    if (c == 'x') {
        ++pos;
        return Expr::var();
    }
    if (is_digit_token(c)) {
        const int v = c - '0';
        if (v >= m)
            throw MalformedProgram("constant " + std::string(1, c) + " out of range for modulus " +
                                       std::to_string(m), pos);
        ++pos;
        return Expr::constant(v);
    }
    if (c == '(') {
        ++pos;
        ExprPtr l = parse_expr_compact(toks, pos, m);
        if (pos >= toks.size() || (toks[pos] != '+' && toks[pos] != '*'))
            throw MalformedProgram("expected + or *", pos);
        const Expr::Kind k = toks[pos] == '+' ? Expr::Kind::Add : Expr::Kind::Mul;
        ++pos;
        ExprPtr r = parse_expr_compact(toks, pos, m);
        if (pos >= toks.size() || toks[pos] != ')')
            throw MalformedProgram("expected )", pos);
        ++pos;
        return Expr::binary(k, std::move(l), std::move(r));
    }
    throw MalformedProgram(std::string("unexpected token ") + c + " in expression", pos);
}

// Parses a full expression; rejects trailing tokens.
inline ExprPtr parse_expr_all(std::string_view toks, int m, std::size_t base_pos = 0) {
    std::size_t pos = 0;
    ExprPtr e = parse_expr_compact(toks, pos, m);
    if (pos != toks.size())
        throw MalformedProgram("trailing tokens after expression", base_pos + pos);
    return e;
}

// ---------------------------------------------------------------------------
// Programs

struct Program {
    std::string comment;  // decimal digits; empty means no comment
    bool split = false;
    // Split form:
    int selector = 0;         // 1 or 2
    std::string run1, run2;   // compact token chars
    // Plain form:
    ExprPtr expr;

    const std::string& active_run() const { return selector == 1 ? run1 : run2; }
    const std::string& inactive_run() const { return selector == 1 ? run2 : run1; }
    std::string& active_run() { return selector == 1 ? run1 : run2; }
    std::string& inactive_run() { return selector == 1 ? run2 : run1; }

    static Program plain(ExprPtr e, std::string comment = "") {
        Program p;
        p.comment = std::move(comment);
        p.expr = std::move(e);
        return p;
    }
    static Program split_form(int sel, std::string r1, std::string r2, std::string comment = "") {
        Program p;
        p.comment = std::move(comment);
        p.split = true;
        p.selector = sel;
        p.run1 = std::move(r1);
        p.run2 = std::move(r2);
        return p;
    }
};

inline std::string compact(const Program& p) {
    std::string out;
    if (!p.comment.empty()) {
        out.push_back('#');
        out += p.comment;
    }
    if (p.split) {
        out.push_back(static_cast<char>('0' + p.selector));
        out += p.run1;
        out.push_back('S');
        out += p.run2;
    } else {
        expr_compact_into(*p.expr, out);
    }
    return out;
}

inline std::size_t token_count(const Program& p) { return compact(p).size(); }

// Canonical text: compact tokens joined by single spaces.
inline std::string spaced(std::string_view compact_tokens) {
    std::string out;
    if (compact_tokens.empty()) return out;
    out.reserve(compact_tokens.size() * 2 - 1);
    for (std::size_t i = 0; i < compact_tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out.push_back(compact_tokens[i]);
    }
    return out;
}

inline std::string serialize(const Program& p) { return spaced(compact(p)); }

inline bool operator==(const Program& a, const Program& b) { return compact(a) == compact(b); }
inline bool operator!=(const Program& a, const Program& b) { return !(a == b); }

// Parses a compact token string (one char per token) into a Program.
inline Program parse_compact(std::string_view toks, int m) {
    for (std::size_t i = 0; i < toks.size(); ++i)
        if (!is_token_char(toks[i]))
            throw MalformedProgram(std::string("unknown token ") + toks[i], i);
    if (toks.empty()) throw MalformedProgram("empty program", 0);

    Program p;
    std::size_t pos = 0;
    if (toks[0] == '#') {
        pos = 1;
        while (pos < toks.size() && is_digit_token(toks[pos])) ++pos;
        if (pos == 1) throw MalformedProgram("comment # must be followed by at least one digit", 0);
        p.comment.assign(toks.substr(1, pos - 1));
    }
    std::string_view body = toks.substr(pos);
    if (body.empty()) throw MalformedProgram("missing program body", pos);
    if (body.find('#') != std::string_view::npos)
        throw MalformedProgram("stray # in program body", pos + body.find('#'));

    const std::size_t s_at = body.find('S');
    if (s_at == std::string_view::npos) {
        p.expr = parse_expr_all(body, m, pos);
        return p;
    }
    if (body.find('S', s_at + 1) != std::string_view::npos)
        throw MalformedProgram("more than one separator S", pos + body.find('S', s_at + 1));
    if (body[0] != '1' && body[0] != '2')
        throw MalformedProgram("split program must begin with selector 1 or 2", pos);
    if (s_at == 0) throw MalformedProgram("stray S", pos);  // unreachable: body[0] checked
    p.split = true;
    p.selector = body[0] - '0';
    p.run1.assign(body.substr(1, s_at - 1));
    p.run2.assign(body.substr(s_at + 1));
    const std::string& act = p.active_run();
    const std::size_t act_base = p.selector == 1 ? pos + 1 : pos + s_at + 1;
    if (act.empty()) throw MalformedProgram("selected run is empty", act_base);
    parse_expr_all(act, m, act_base);  // active run must be a well-formed expression
    return p;
}

// Parses whitespace-separated token text. Each token must be a single
// alphabet character.
inline Program parse(std::string_view text, int m) {
    std::string toks;
    std::size_t token_index = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\n' &&
               text[j] != '\r')
            ++j;
        if (j - i != 1 || !is_token_char(text[i]))
            throw MalformedProgram("unknown token `" + std::string(text.substr(i, j - i)) + "`",
                                   token_index);
        toks.push_back(text[i]);
        ++token_index;
        i = j;
    }
    return parse_compact(toks, m);
}

// The expression the program actually executes.
inline ExprPtr active_expr(const Program& p, int m) {
    if (!p.split) return p.expr;
    return parse_expr_all(p.active_run(), m);
}

inline Value evaluate(const Program& p, Value x, int m) {
    return eval_expr(*active_expr(p, m), x % m, m);
}

// ---------------------------------------------------------------------------
// Denoted functions

struct FunctionTable {
    int m = 0;
    std::array<uint8_t, 16> out{};

    // Packs modulus and outputs into one integer; two tables over the same
    // modulus are equal iff their keys are equal (m <= 10, values < m).
    uint64_t key() const {
        uint64_t k = static_cast<uint64_t>(m);
        for (int i = 0; i < m; ++i) k = (k << 4) | out[i];
        return k;
    }
    bool operator==(const FunctionTable& o) const { return m == o.m && key() == o.key(); }
    bool operator!=(const FunctionTable& o) const { return !(*this == o); }
};

inline FunctionTable table(const Program& p, int m) {
    FunctionTable t;
    t.m = m;
    const ExprPtr e = active_expr(p, m);
    for (int v = 0; v < m; ++v) t.out[v] = static_cast<uint8_t>(eval_expr(*e, v, m));
    return t;
}

inline bool equivalent(const Program& p, const Program& q, int m) {
    return table(p, m) == table(q, m);
}

// Helpers used throughout: comment edits that preserve everything else.
inline Program with_comment(Program p, std::string digits) {
    p.comment = std::move(digits);
    return p;
}
inline Program without_comment(Program p) {
    p.comment.clear();
    return p;
}
inline std::string compact_body(const Program& p) {
    Program q = p;
    q.comment.clear();
    return compact(q);
}

}  // namespace im
