#pragma once

// Student answer parsing.
//
// Grammar (after trimming and an optional "y=" / "f(x)=" prefix):
//
//   expr    := term   (('+' | '-') term)*
//   term    := unary  (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | primary
//   primary := number | '(' expr ')'
//   number  := digits [sep digits] | sep digits      sep is '.' or ','
//
// Evaluation is exact. Anything else (identifiers, powers, functions) is a
// MalformedExpression reported at the offending byte offset.

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graphgrade/rational.hpp"

namespace graphgrade {

enum class ParseErrorKind { EmptyInput, MalformedExpression, DivisionByZero, NumericOverflow };

inline std::string_view to_string(ParseErrorKind k)
{
    switch (k) {
    case ParseErrorKind::EmptyInput: return "EmptyInput";
    case ParseErrorKind::MalformedExpression: return "MalformedExpression";
    case ParseErrorKind::DivisionByZero: return "DivisionByZero";
    case ParseErrorKind::NumericOverflow: return "NumericOverflow";
    }
    return "MalformedExpression";
}

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::size_t position, const std::string& message)
        : std::runtime_error(message), kind_(kind), position_(position)
    {
    }

    [[nodiscard]] ParseErrorKind kind() const { return kind_; }
    /// Byte offset into the original text.
    [[nodiscard]] std::size_t position() const { return position_; }

private:
    ParseErrorKind kind_;
    std::size_t position_;
};

struct ParsedAnswer {
    Rational value;
    std::string sourceText;
};

namespace detail {

enum class TokenKind { Number, Ident, Plus, Minus, Star, Slash, LParen, RParen, Equals, End };

struct Token {
    TokenKind kind;
    std::size_t pos;
    std::string_view text;
    Rational value;
};

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

inline Rational read_numeral(std::string_view text, std::size_t pos)
{
    Rational value;
    Rational scale(1);
    bool fraction = false;
    try {
        for (char c : text) {
            if (c == '.' || c == ',') {
                fraction = true;
                continue;
            }
            const Rational digit(c - '0');
            if (!fraction) {
                value = value * Rational(10) + digit;
            } else {
                scale = scale * Rational(10);
                value = value + digit / scale;
            }
        }
    } catch (const RationalOverflow&) {
        throw ParseError(ParseErrorKind::NumericOverflow, pos, "numeral too large");
    }
    return value;
}

inline std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || c == '.' || c == ',') {
            std::size_t int_digits = 0;
            while (i < text.size() && is_digit(text[i])) ++i, ++int_digits;
            std::size_t frac_digits = 0;
            if (i < text.size() && (text[i] == '.' || text[i] == ',')) {
                ++i;
                while (i < text.size() && is_digit(text[i])) ++i, ++frac_digits;
                if (frac_digits == 0) throw ParseError(ParseErrorKind::MalformedExpression, i, "expected digits after decimal separator");
            }
            if (int_digits == 0 && frac_digits == 0) throw ParseError(ParseErrorKind::MalformedExpression, start, "stray decimal separator");
            if (i < text.size() && (text[i] == '.' || text[i] == ','))
                throw ParseError(ParseErrorKind::MalformedExpression, i, "second decimal separator");
            const auto lexeme = text.substr(start, i - start);
            out.push_back({TokenKind::Number, start, lexeme, read_numeral(lexeme, start)});
            continue;
        }
        if (is_alpha(c)) {
            while (i < text.size() && (is_alpha(text[i]) || is_digit(text[i]))) ++i;
            out.push_back({TokenKind::Ident, start, text.substr(start, i - start), {}});
            continue;
        }
        TokenKind kind;
        switch (c) {
        case '+': kind = TokenKind::Plus; break;
        case '-': kind = TokenKind::Minus; break;
        case '*': kind = TokenKind::Star; break;
        case '/': kind = TokenKind::Slash; break;
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        case '=': kind = TokenKind::Equals; break;
        default: throw ParseError(ParseErrorKind::MalformedExpression, start, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, start, text.substr(start, 1), {}});
        ++i;
    }
    out.push_back({TokenKind::End, text.size(), {}, {}});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Rational parse()
    {
        skip_prefix();
        if (peek().kind == TokenKind::End) throw ParseError(ParseErrorKind::EmptyInput, peek().pos, "no value after '='");
        Rational v = expr();
        if (peek().kind != TokenKind::End) throw malformed(peek(), "unexpected token");
        return v;
    }

private:
    static constexpr int kMaxDepth = 200;

    const Token& peek(std::size_t ahead = 0) const
    {
        const std::size_t idx = pos_ + ahead;
        return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
    }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    static ParseError malformed(const Token& t, const std::string& what)
    {
        if (t.kind == TokenKind::End) return ParseError(ParseErrorKind::MalformedExpression, t.pos, what + ": unexpected end of input");
        return ParseError(ParseErrorKind::MalformedExpression, t.pos, what + " at '" + std::string(t.text) + "'");
    }

    static bool ident_is(const Token& t, std::string_view name)
    {
        if (t.kind != TokenKind::Ident || t.text.size() != name.size()) return false;
        for (std::size_t i = 0; i < name.size(); ++i)
            if (std::tolower(static_cast<unsigned char>(t.text[i])) != name[i]) return false;
        return true;
    }

    void skip_prefix()
    {
        if (ident_is(peek(), "y") && peek(1).kind == TokenKind::Equals) {
            pos_ += 2;
        } else if (ident_is(peek(), "f") && peek(1).kind == TokenKind::LParen && ident_is(peek(2), "x") &&
                   peek(3).kind == TokenKind::RParen && peek(4).kind == TokenKind::Equals) {
            pos_ += 5;
        }
    }

    Rational expr()
    {
        Rational acc = term();
        while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
            const Token& op = next();
            Rational rhs = term();
            acc = checked(op, [&] { return op.kind == TokenKind::Plus ? acc + rhs : acc - rhs; });
        }
        return acc;
    }

    Rational term()
    {
        Rational acc = unary();
        while (peek().kind == TokenKind::Star || peek().kind == TokenKind::Slash) {
            const Token& op = next();
            Rational rhs = unary();
            if (op.kind == TokenKind::Slash && rhs == Rational(0))
                throw ParseError(ParseErrorKind::DivisionByZero, op.pos, "division by zero");
            acc = checked(op, [&] { return op.kind == TokenKind::Star ? acc * rhs : acc / rhs; });
        }
        return acc;
    }

    Rational unary()
    {
        if (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
            const Token& op = next();
            DepthGuard guard(*this, op);
            Rational v = unary();
            return op.kind == TokenKind::Minus ? checked(op, [&] { return -v; }) : v;
        }
        return primary();
    }

    Rational primary()
    {
        const Token& t = peek();
        if (t.kind == TokenKind::Number) {
            next();
            return t.value;
        }
        if (t.kind == TokenKind::LParen) {
            next();
            DepthGuard guard(*this, t);
            Rational v = expr();
            if (peek().kind != TokenKind::RParen) throw malformed(peek(), "expected ')'");
            next();
            return v;
        }
        throw malformed(t, "expected a number");
    }

    template <class F>
    static Rational checked(const Token& at, F&& f)
    {
        try {
            return f();
        } catch (const RationalOverflow&) {
            throw ParseError(ParseErrorKind::NumericOverflow, at.pos, "value too large");
        }
    }

    struct DepthGuard {
        DepthGuard(Parser& p, const Token& at) : parser(p)
        {
            if (++parser.depth_ > kMaxDepth) throw ParseError(ParseErrorKind::MalformedExpression, at.pos, "nesting too deep");
        }
        ~DepthGuard() { --parser.depth_; }
        DepthGuard(const DepthGuard&) = delete;
        DepthGuard& operator=(const DepthGuard&) = delete;
        Parser& parser;
    };

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace detail

/// Throws ParseError.
inline ParsedAnswer parse_answer(std::string_view text)
{
    std::size_t first = 0;
    while (first < text.size() && detail::is_space(text[first])) ++first;
    if (first == text.size()) throw ParseError(ParseErrorKind::EmptyInput, 0, "empty answer");
    detail::Parser parser(detail::tokenize(text));
    return ParsedAnswer{parser.parse(), std::string(text)};
}

/// Exact numeric equivalence; tolerance belongs to grading.
inline bool equivalent(const Rational& a, const Rational& b) { return a == b; }

}  // namespace graphgrade
