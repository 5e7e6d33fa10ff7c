#pragma once

// Token alphabet of the toy language and its normative ordering.
//
// The alphabet is fixed: 0 1 2 3 4 5 6 7 8 9 # ( ) * + S x
// Canonical order ranks digits first, then # ( ) * + S x. All comparisons
// between token strings (enumeration order, tie-breaking) use these ranks,
// never raw byte values.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace im {

inline constexpr std::string_view kAlphabet = "0123456789#()*+Sx";

// Rank in the canonical token order; -1 for characters outside the alphabet.
inline constexpr int token_rank(char c) {
    switch (c) {
        case '0': case '1': case '2': case '3': case '4':
        case '5': case '6': case '7': case '8': case '9':
            return c - '0';
        case '#': return 10;
        case '(': return 11;
        case ')': return 12;
        case '*': return 13;
        case '+': return 14;
        case 'S': return 15;
        case 'x': return 16;
        default:  return -1;
    }
}

inline constexpr bool is_token_char(char c) { return token_rank(c) >= 0; }
inline constexpr bool is_digit_token(char c) { return c >= '0' && c <= '9'; }

// Tokens allowed in the inactive run of a split program: everything except S and #.
inline constexpr bool is_inactive_token(char c) {
    return is_token_char(c) && c != 'S' && c != '#';
}

// 4-bit parameter codes for AppendInactiveToken. Normative:
// digits 0..9 -> 0..9, ( -> 10, ) -> 11, * -> 12, + -> 13, x -> 14.
inline constexpr int inactive_token_code(char c) {
    if (is_digit_token(c)) return c - '0';
    switch (c) {
        case '(': return 10;
        case ')': return 11;
        case '*': return 12;
        case '+': return 13;
        case 'x': return 14;
        default:  return -1;
    }
}

inline constexpr char inactive_token_from_code(int code) {
    if (code >= 0 && code <= 9) return static_cast<char>('0' + code);
    switch (code) {
        case 10: return '(';
        case 11: return ')';
        case 12: return '*';
        case 13: return '+';
        case 14: return 'x';
        default: return '\0';
    }
}

// Lexicographic comparison under token ranks. Both strings must consist of
// alphabet characters; used for ordering within one token-count stratum.
inline bool rank_less(std::string_view a, std::string_view b) {
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int ra = token_rank(a[i]), rb = token_rank(b[i]);
        if (ra != rb) return ra < rb;
    }
    return a.size() < b.size();
}

// Global canonical order: token count first, then rank-lexicographic.
inline bool canonical_less(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return rank_less(a, b);
}

}  // namespace im
