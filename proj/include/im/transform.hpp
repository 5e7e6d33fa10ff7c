#pragma once

// The interpreter DSL: total transformations on programs, their textual term
// form, and the normative self-delimiting binary encoding whose bit length is
// the complexity surrogate (with the identity pinned to zero).
//
// Opcode table (5 bits each):
//   Id=00000  StripComment=00001  AppendCommentDigit=00010(+4-bit digit)
//   CommuteAdd=00011  CommuteMul=00100  FoldConst=00101  AddZeroElim=00110
//   AddZeroIntro=00111  MulOneElim=01000  MulOneIntro=01001
//   UnfoldConstAdd=01010(+4-bit addend)  AppendInactiveToken=01011(+4-bit token)
//   ClearInactive=01100  FlipSelector=01101  InvDovetail=01110(+inner encoding)
//
// Rewrite constructors fire once, at the leftmost-outermost matching position
// of the active expression, and are the identity when nothing matches.
// Every constructor maps well-formed programs to well-formed programs.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "im/enumerate.hpp"
#include "im/lang.hpp"
#include "im/tokens.hpp"

namespace im {

class MalformedEncoding : public std::runtime_error {
public:
    explicit MalformedEncoding(const std::string& msg) : std::runtime_error(msg) {}
};

class MalformedTerm : public std::runtime_error {
public:
    explicit MalformedTerm(const std::string& msg) : std::runtime_error(msg) {}
};

enum class TKind : uint8_t {
    Id = 0,
    StripComment = 1,
    AppendCommentDigit = 2,
    CommuteAdd = 3,
    CommuteMul = 4,
    FoldConst = 5,
    AddZeroElim = 6,
    AddZeroIntro = 7,
    MulOneElim = 8,
    MulOneIntro = 9,
    UnfoldConstAdd = 10,
    AppendInactiveToken = 11,
    ClearInactive = 12,
    FlipSelector = 13,
    InvDovetail = 14,
};

struct Transformation {
    TKind kind = TKind::Id;
    int param = -1;   // digit for AppendCommentDigit, addend for UnfoldConstAdd
    char token = 0;   // AppendInactiveToken
    std::shared_ptr<const Transformation> inner;  // InvDovetail

    static Transformation id() { return {}; }
    static Transformation strip_comment() { return make(TKind::StripComment); }
    static Transformation append_comment_digit(int d) {
        if (d < 0 || d > 9) throw std::invalid_argument("comment digit must be 0..9");
        Transformation t = make(TKind::AppendCommentDigit);
        t.param = d;
        return t;
    }
    static Transformation commute_add() { return make(TKind::CommuteAdd); }
    static Transformation commute_mul() { return make(TKind::CommuteMul); }
    static Transformation fold_const() { return make(TKind::FoldConst); }
    static Transformation add_zero_elim() { return make(TKind::AddZeroElim); }
    static Transformation add_zero_intro() { return make(TKind::AddZeroIntro); }
    static Transformation mul_one_elim() { return make(TKind::MulOneElim); }
    static Transformation mul_one_intro() { return make(TKind::MulOneIntro); }
    static Transformation unfold_const_add(int a) {
        if (a < 0 || a > 9) throw std::invalid_argument("unfold addend must be a digit");
        Transformation t = make(TKind::UnfoldConstAdd);
        t.param = a;
        return t;
    }
    static Transformation append_inactive_token(char c) {
        if (!is_inactive_token(c))
            throw std::invalid_argument("inactive token must be in the alphabet, not S or #");
        Transformation t = make(TKind::AppendInactiveToken);
        t.token = c;
        return t;
    }
    static Transformation clear_inactive() { return make(TKind::ClearInactive); }
    static Transformation flip_selector() { return make(TKind::FlipSelector); }
    static Transformation inv_dovetail(Transformation inner) {
        Transformation t = make(TKind::InvDovetail);
        t.inner = std::make_shared<const Transformation>(std::move(inner));
        return t;
    }

private:
    static Transformation make(TKind k) {
        Transformation t;
        t.kind = k;
        return t;
    }
};

// ---------------------------------------------------------------------------
// Encoding

namespace detail {
inline void append_bits(std::string& out, unsigned value, int width) {
    for (int i = width - 1; i >= 0; --i) out.push_back((value >> i) & 1u ? '1' : '0');
}
}  // namespace detail

inline void encode_into(const Transformation& t, std::string& out) {
    detail::append_bits(out, static_cast<unsigned>(t.kind), 5);
    switch (t.kind) {
        case TKind::AppendCommentDigit:
        case TKind::UnfoldConstAdd:
            detail::append_bits(out, static_cast<unsigned>(t.param), 4);
            break;
        case TKind::AppendInactiveToken:
            detail::append_bits(out, static_cast<unsigned>(inactive_token_code(t.token)), 4);
            break;
        case TKind::InvDovetail:
            encode_into(*t.inner, out);
            break;
        default:
            break;
    }
}

inline std::string encode(const Transformation& t) {
    std::string out;
    encode_into(t, out);
    return out;
}

// Length of the raw encoding in bits; counts Id at its full 5-bit opcode.
inline std::size_t rawlen(const Transformation& t) { return encode(t).size(); }

// The complexity surrogate: encoded length, except that the identity is
// assigned zero by fiat.
inline std::size_t complexity(const Transformation& t) {
    return t.kind == TKind::Id ? 0 : rawlen(t);
}

namespace detail {
inline unsigned read_bits(std::string_view bits, std::size_t& pos, int width) {
    unsigned v = 0;
    for (int i = 0; i < width; ++i) {
        if (pos >= bits.size()) throw MalformedEncoding("truncated encoding");
        const char c = bits[pos++];
        if (c != '0' && c != '1') throw MalformedEncoding("encoding must consist of 0/1 bits");
        v = (v << 1) | (c == '1' ? 1u : 0u);
    }
    return v;
}

inline Transformation decode_cursor(std::string_view bits, std::size_t& pos, int m) {
    const unsigned op = read_bits(bits, pos, 5);
    if (op > 14) throw MalformedEncoding("unknown opcode " + std::to_string(op));
    const TKind k = static_cast<TKind>(op);
    switch (k) {
        case TKind::AppendCommentDigit: {
            const unsigned d = read_bits(bits, pos, 4);
            if (d > 9) throw MalformedEncoding("comment digit parameter out of range");
            return Transformation::append_comment_digit(static_cast<int>(d));
        }
        case TKind::UnfoldConstAdd: {
            const unsigned a = read_bits(bits, pos, 4);
            if (static_cast<int>(a) >= m)
                throw MalformedEncoding("unfold addend " + std::to_string(a) +
                                        " out of range for modulus " + std::to_string(m));
            return Transformation::unfold_const_add(static_cast<int>(a));
        }
        case TKind::AppendInactiveToken: {
            const unsigned c = read_bits(bits, pos, 4);
            if (c > 14) throw MalformedEncoding("inactive token code out of range");
            return Transformation::append_inactive_token(inactive_token_from_code(static_cast<int>(c)));
        }
        case TKind::InvDovetail:
            return Transformation::inv_dovetail(decode_cursor(bits, pos, m));
        case TKind::Id: return Transformation::id();
        case TKind::StripComment: return Transformation::strip_comment();
        case TKind::CommuteAdd: return Transformation::commute_add();
        case TKind::CommuteMul: return Transformation::commute_mul();
        case TKind::FoldConst: return Transformation::fold_const();
        case TKind::AddZeroElim: return Transformation::add_zero_elim();
        case TKind::AddZeroIntro: return Transformation::add_zero_intro();
        case TKind::MulOneElim: return Transformation::mul_one_elim();
        case TKind::MulOneIntro: return Transformation::mul_one_intro();
        case TKind::ClearInactive: return Transformation::clear_inactive();
        case TKind::FlipSelector: return Transformation::flip_selector();
    }
    throw MalformedEncoding("unreachable");
}
}  // namespace detail

inline Transformation decode(std::string_view bits, int m) {
    std::size_t pos = 0;
    Transformation t = detail::decode_cursor(bits, pos, m);
    if (pos != bits.size()) throw MalformedEncoding("trailing bits after transformation");
    return t;
}

inline bool operator==(const Transformation& a, const Transformation& b) {
    return encode(a) == encode(b);
}
inline bool operator!=(const Transformation& a, const Transformation& b) { return !(a == b); }

// Canonical ordering (deterministic tie-breaking everywhere): by encoding.
inline bool transform_less(const Transformation& a, const Transformation& b) {
    return encode(a) < encode(b);
}

// ---------------------------------------------------------------------------
// Term text (catalog files, CLI)

inline std::string to_term(const Transformation& t) {
    switch (t.kind) {
        case TKind::Id: return "Id";
        case TKind::StripComment: return "StripComment";
        case TKind::AppendCommentDigit: return "AppendCommentDigit " + std::to_string(t.param);
        case TKind::CommuteAdd: return "CommuteAdd";
        case TKind::CommuteMul: return "CommuteMul";
        case TKind::FoldConst: return "FoldConst";
        case TKind::AddZeroElim: return "AddZeroElim";
        case TKind::AddZeroIntro: return "AddZeroIntro";
        case TKind::MulOneElim: return "MulOneElim";
        case TKind::MulOneIntro: return "MulOneIntro";
        case TKind::UnfoldConstAdd: return "UnfoldConstAdd " + std::to_string(t.param);
        case TKind::AppendInactiveToken: return std::string("AppendInactiveToken ") + t.token;
        case TKind::ClearInactive: return "ClearInactive";
        case TKind::FlipSelector: return "FlipSelector";
        case TKind::InvDovetail: return "InvDovetail (" + to_term(*t.inner) + ")";
    }
    return "?";
}

namespace detail {
inline void skip_ws(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

inline std::string read_word(std::string_view s, std::size_t& pos) {
    skip_ws(s, pos);
    std::size_t start = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != '(' && s[pos] != ')')
        ++pos;
    return std::string(s.substr(start, pos - start));
}

inline Transformation parse_term_cursor(std::string_view s, std::size_t& pos, int m) {
    const std::string word = read_word(s, pos);
    if (word.empty()) throw MalformedTerm("expected a transformation name");
    if (word == "Id") return Transformation::id();
    if (word == "StripComment") return Transformation::strip_comment();
    if (word == "CommuteAdd") return Transformation::commute_add();
    if (word == "CommuteMul") return Transformation::commute_mul();
    if (word == "FoldConst") return Transformation::fold_const();
    if (word == "AddZeroElim") return Transformation::add_zero_elim();
    if (word == "AddZeroIntro") return Transformation::add_zero_intro();
    if (word == "MulOneElim") return Transformation::mul_one_elim();
    if (word == "MulOneIntro") return Transformation::mul_one_intro();
    if (word == "ClearInactive") return Transformation::clear_inactive();
    if (word == "FlipSelector") return Transformation::flip_selector();
    if (word == "AppendCommentDigit" || word == "UnfoldConstAdd" ||
        word == "AppendInactiveToken") {
        const std::string arg = read_word(s, pos);
        if (arg.size() != 1) throw MalformedTerm(word + " expects a single-character parameter");
        const char c = arg[0];
        if (word == "AppendInactiveToken") {
            if (!is_inactive_token(c)) throw MalformedTerm("invalid inactive token parameter");
            return Transformation::append_inactive_token(c);
        }
        if (!is_digit_token(c)) throw MalformedTerm(word + " expects a digit parameter");
        const int v = c - '0';
        if (word == "UnfoldConstAdd") {
            if (v >= m)
                throw MalformedTerm("UnfoldConstAdd addend out of range for modulus " +
                                    std::to_string(m));
            return Transformation::unfold_const_add(v);
        }
        return Transformation::append_comment_digit(v);
    }
    if (word == "InvDovetail") {
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != '(')
            throw MalformedTerm("InvDovetail expects a parenthesized inner term");
        ++pos;
        Transformation inner = parse_term_cursor(s, pos, m);
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != ')') throw MalformedTerm("missing ) after inner term");
        ++pos;
        return Transformation::inv_dovetail(std::move(inner));
    }
    throw MalformedTerm("unknown transformation `" + word + "`");
}
}  // namespace detail

inline Transformation parse_term(std::string_view s, int m) {
    std::size_t pos = 0;
    Transformation t = detail::parse_term_cursor(s, pos, m);
    detail::skip_ws(s, pos);
    if (pos != s.size()) throw MalformedTerm("trailing characters after transformation term");
    return t;
}

// ---------------------------------------------------------------------------
// Application

namespace detail {

// Leftmost-outermost single rewrite; null when nothing matches.
inline ExprPtr try_rewrite(const ExprPtr& e, TKind kind, int param, int m) {
    switch (kind) {
        case TKind::CommuteAdd:
            if (e->kind == Expr::Kind::Add)
                return Expr::binary(Expr::Kind::Add, e->rhs, e->lhs);
            break;
        case TKind::CommuteMul:
            if (e->kind == Expr::Kind::Mul)
                return Expr::binary(Expr::Kind::Mul, e->rhs, e->lhs);
            break;
        case TKind::FoldConst:
            if (e->is_binary() && e->lhs->kind == Expr::Kind::Const &&
                e->rhs->kind == Expr::Kind::Const) {
                const int a = e->lhs->value, b = e->rhs->value;
                return Expr::constant(e->kind == Expr::Kind::Add ? (a + b) % m : (a * b) % m);
            }
            break;
        case TKind::AddZeroElim:
            if (e->kind == Expr::Kind::Add && e->rhs->kind == Expr::Kind::Const &&
                e->rhs->value == 0)
                return e->lhs;
            break;
        case TKind::MulOneElim:
            if (e->kind == Expr::Kind::Mul && e->rhs->kind == Expr::Kind::Const &&
                e->rhs->value == 1)
                return e->lhs;
            break;
        case TKind::UnfoldConstAdd:
            if (e->kind == Expr::Kind::Const) {
                const int b = ((e->value - param) % m + m) % m;
                return Expr::binary(Expr::Kind::Add, Expr::constant(param), Expr::constant(b));
            }
            break;
        default:
            break;
    }
    if (e->is_binary()) {
        if (ExprPtr l = try_rewrite(e->lhs, kind, param, m))
            return Expr::binary(e->kind, std::move(l), e->rhs);
        if (ExprPtr r = try_rewrite(e->rhs, kind, param, m))
            return Expr::binary(e->kind, e->lhs, std::move(r));
    }
    return nullptr;
}

// Cheap prefilters so that non-matching rewrites skip the active-run parse.
inline bool run_may_match(const std::string& run, TKind kind) {
    switch (kind) {
        case TKind::CommuteAdd:
        case TKind::AddZeroElim:
            return run.find('+') != std::string::npos;
        case TKind::CommuteMul:
        case TKind::MulOneElim:
            return run.find('*') != std::string::npos;
        case TKind::FoldConst:
        case TKind::UnfoldConstAdd:
            for (char c : run)
                if (is_digit_token(c)) return true;
            return false;
        default:
            return true;
    }
}

inline bool is_rewrite_kind(TKind k) {
    switch (k) {
        case TKind::CommuteAdd:
        case TKind::CommuteMul:
        case TKind::FoldConst:
        case TKind::AddZeroElim:
        case TKind::MulOneElim:
        case TKind::UnfoldConstAdd:
            return true;
        default:
            return false;
    }
}

}  // namespace detail

inline std::size_t numeral_value_capped(const std::string& digits, std::size_t cap) {
    std::size_t v = 0;
    for (char c : digits) {
        if (v > cap / 10) return cap;
        v = v * 10 + static_cast<std::size_t>(c - '0');
        if (v > cap) return cap;
    }
    return v;
}

inline Program apply(const Universe& u, const Transformation& t, const Program& p) {
    const int m = u.modulus();
    switch (t.kind) {
        case TKind::Id:
            return p;
        case TKind::StripComment:
            return without_comment(p);
        case TKind::AppendCommentDigit: {
            Program q = p;
            q.comment.push_back(static_cast<char>('0' + t.param));
            return q;
        }
        case TKind::AddZeroIntro:
        case TKind::MulOneIntro: {
            const bool add = t.kind == TKind::AddZeroIntro;
            Program q = p;
            if (!q.split) {
                q.expr = Expr::binary(add ? Expr::Kind::Add : Expr::Kind::Mul, q.expr,
                                      Expr::constant(add ? 0 : 1));
            } else {
                std::string& run = q.active_run();
                std::string wrapped;
                wrapped.reserve(run.size() + 4);
                wrapped.push_back('(');
                wrapped += run;
                wrapped.push_back(add ? '+' : '*');
                wrapped.push_back(add ? '0' : '1');
                wrapped.push_back(')');
                run = std::move(wrapped);
            }
            return q;
        }
        case TKind::CommuteAdd:
        case TKind::CommuteMul:
        case TKind::FoldConst:
        case TKind::AddZeroElim:
        case TKind::MulOneElim:
        case TKind::UnfoldConstAdd: {
            if (t.kind == TKind::UnfoldConstAdd && t.param >= m) return p;  // keep totality
            if (!p.split) {
                if (ExprPtr r = detail::try_rewrite(p.expr, t.kind, t.param, m)) {
                    Program q = p;
                    q.expr = std::move(r);
                    return q;
                }
                return p;
            }
            if (!detail::run_may_match(p.active_run(), t.kind)) return p;
            const ExprPtr active = parse_expr_all(p.active_run(), m);
            if (ExprPtr r = detail::try_rewrite(active, t.kind, t.param, m)) {
                Program q = p;
                q.active_run() = expr_compact(*r);
                return q;
            }
            return p;
        }
        case TKind::AppendInactiveToken: {
            if (!p.split) return p;
            Program q = p;
            q.inactive_run().push_back(t.token);
            return q;
        }
        case TKind::ClearInactive: {
            if (!p.split || p.inactive_run().empty()) return p;
            Program q = p;
            q.inactive_run().clear();
            return q;
        }
        case TKind::FlipSelector: {
            if (!p.split) return p;
            // Stay total: flip only when the other run is a well-formed
            // expression, otherwise the result would not parse.
            try {
                parse_expr_all(p.inactive_run(), m);
            } catch (const MalformedProgram&) {
                return p;
            }
            Program q = p;
            q.selector = 3 - q.selector;
            return q;
        }
        case TKind::InvDovetail: {
            if (p.comment.empty()) return p;
            const std::size_t n = numeral_value_capped(p.comment, u.ceiling());
            const std::string body = compact_body(p);
            const Transformation& inner = *t.inner;
            const std::string memo_key = encode(inner);
            auto hit = u.dovetail_last_match(
                memo_key, body, n,
                [&u, &inner](const Program& q) { return compact_body(apply(u, inner, q)); });
            if (!hit) return p;
            return u.program_at(*hit);
        }
    }
    return p;
}

}  // namespace im
