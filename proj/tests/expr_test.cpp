#include "graphgrade/expr.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <memory>
#include <random>

using namespace graphgrade;

namespace {

Rational parse(std::string_view s) { return parse_answer(s).value; }

ParseError parse_error(std::string_view s)
{
    try {
        parse_answer(s);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "expected a parse error for '" << s << "'";
    return ParseError(ParseErrorKind::MalformedExpression, 0, "");
}

// Expression trees for the precedence corpus; evaluated directly, without text.
struct Node {
    char op = 0;  // 0 for a leaf
    int leaf = 0;
    std::shared_ptr<Node> lhs, rhs;
};

int precedence(char op) { return (op == '+' || op == '-') ? 1 : 2; }

std::optional<Rational> evaluate(const Node& n)
{
    if (n.op == 0) return Rational(n.leaf);
    const auto a = evaluate(*n.lhs);
    const auto b = evaluate(*n.rhs);
    if (!a || !b) return std::nullopt;
    switch (n.op) {
    case '+': return *a + *b;
    case '-': return *a - *b;
    case '*': return *a * *b;
    default:
        if (*b == Rational(0)) return std::nullopt;
        return *a / *b;
    }
}

std::string render_minimal(const Node& n)
{
    if (n.op == 0) return std::to_string(n.leaf);
    auto wrap = [&](const Node& child, bool right) {
        std::string s = render_minimal(child);
        if (child.op == 0) return s;
        const bool needs = precedence(child.op) < precedence(n.op) ||
                           (right && precedence(child.op) == precedence(n.op) && (n.op == '-' || n.op == '/'));
        return needs ? "(" + s + ")" : s;
    };
    return wrap(*n.lhs, false) + n.op + wrap(*n.rhs, true);
}

std::vector<std::shared_ptr<Node>> trees(int ops)
{
    std::vector<std::shared_ptr<Node>> out;
    if (ops == 0) {
        for (int v : {1, 2, 3}) out.push_back(std::make_shared<Node>(Node{0, v, nullptr, nullptr}));
        return out;
    }
    for (int left = 0; left < ops; ++left)
        for (const auto& l : trees(left))
            for (const auto& r : trees(ops - 1 - left))
                for (char op : {'+', '-', '*', '/'}) out.push_back(std::make_shared<Node>(Node{op, 0, l, r}));
    return out;
}

}  // namespace

TEST(ParseAnswer, StudentForms)
{
    EXPECT_EQ(parse("y=-23.5"), Rational(-235, 10));
    EXPECT_EQ(parse("-15/4"), Rational(-375, 100));
    EXPECT_EQ(parse("3,75"), Rational(375, 100));
    EXPECT_EQ(parse("(1/2)+0.25"), Rational(3, 4));
    EXPECT_EQ(parse("  f(x) = 7 "), Rational(7));
    EXPECT_EQ(parse("Y = 2"), Rational(2));
    EXPECT_EQ(parse(".5"), Rational(1, 2));
    EXPECT_EQ(parse("--3"), Rational(3));
    EXPECT_EQ(parse("+4"), Rational(4));
    EXPECT_EQ(parse_answer("y=-23.5").sourceText, "y=-23.5");
}

TEST(ParseAnswer, Precedence)
{
    EXPECT_EQ(parse("1+2*3"), Rational(7));
    EXPECT_EQ(parse("(1+2)*3"), Rational(9));
    EXPECT_EQ(parse("8/4/2"), Rational(1));
    EXPECT_EQ(parse("8-4-2"), Rational(2));
    EXPECT_EQ(parse("-2*-3"), Rational(6));
}

TEST(ParseAnswer, TypedErrors)
{
    EXPECT_EQ(parse_error("").kind(), ParseErrorKind::EmptyInput);
    EXPECT_EQ(parse_error("   ").kind(), ParseErrorKind::EmptyInput);
    EXPECT_EQ(parse_error("y=").kind(), ParseErrorKind::EmptyInput);

    const auto div = parse_error("1/0");
    EXPECT_EQ(div.kind(), ParseErrorKind::DivisionByZero);
    EXPECT_EQ(div.position(), 1u);
    EXPECT_EQ(parse_error("2/(1-1)").kind(), ParseErrorKind::DivisionByZero);

    const auto abc = parse_error("abc");
    EXPECT_EQ(abc.kind(), ParseErrorKind::MalformedExpression);
    EXPECT_EQ(abc.position(), 0u);

    EXPECT_EQ(parse_error("1 + x").position(), 4u);
    EXPECT_EQ(parse_error("(1+2").kind(), ParseErrorKind::MalformedExpression);
    EXPECT_EQ(parse_error("2^3").position(), 1u);
    EXPECT_EQ(parse_error("1.2.3").kind(), ParseErrorKind::MalformedExpression);
    EXPECT_EQ(parse_error("1,2,3").kind(), ParseErrorKind::MalformedExpression);
    EXPECT_EQ(parse_error("3.").kind(), ParseErrorKind::MalformedExpression);
    EXPECT_EQ(parse_error("x=3").kind(), ParseErrorKind::MalformedExpression);
    EXPECT_EQ(parse_error("y=y=3").kind(), ParseErrorKind::MalformedExpression);
    EXPECT_EQ(parse_error("99999999999999999999999").kind(), ParseErrorKind::NumericOverflow);
    EXPECT_EQ(parse_error(std::string(500, '(') + "1" + std::string(500, ')')).kind(), ParseErrorKind::MalformedExpression);
}

TEST(Equivalent, ExactComparison)
{
    EXPECT_TRUE(equivalent(parse("1/2"), parse("0.5")));
    EXPECT_TRUE(equivalent(parse("0.1+0.2"), parse("0.3")));
    EXPECT_FALSE(equivalent(parse("1/3"), parse("0.3333")));
}

TEST(ParseProperties, GrammarCorpusMatchesTreeEvaluation)
{
    int checked = 0;
    for (int ops = 0; ops <= 3; ++ops)
        for (const auto& t : trees(ops)) {
            const auto expected = evaluate(*t);
            const std::string text = render_minimal(*t);
            if (!expected) {
                EXPECT_THROW(parse_answer(text), ParseError) << text;
                continue;
            }
            ASSERT_EQ(parse(text), *expected) << text;
            ++checked;
        }
    EXPECT_GT(checked, 3000);
}

TEST(ParseProperties, DecimalRenderingRoundTrips)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> num(-10'000'000, 10'000'000);
    const long pow10[] = {1, 10, 100, 1000, 10000, 100000};
    for (int i = 0; i < 20000; ++i) {
        const Rational v(num(rng), pow10[i % 6]);
        ASSERT_EQ(parse(to_decimal_string(v)), v) << to_decimal_string(v);
    }
}

TEST(ParseProperties, CommaAndPointAgree)
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> ip(0, 99999), fp(0, 9999);
    for (int i = 0; i < 10000; ++i) {
        const std::string whole = std::to_string(ip(rng));
        const std::string frac = std::to_string(fp(rng));
        const std::string sign = (i % 2) ? "-" : "";
        ASSERT_EQ(parse(sign + whole + "," + frac), parse(sign + whole + "." + frac));
    }
}

TEST(ParseProperties, FuzzedInputYieldsValueOrTypedError)
{
    std::mt19937_64 rng(2024);
    const std::string alphabet = "0123456789+-*/().,= y";
    std::uniform_int_distribution<int> len(0, 32), coin(0, 3), printable(32, 126);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    int values = 0, errors = 0;
    for (int i = 0; i < 100000; ++i) {
        std::string s;
        const int n = len(rng);
        for (int j = 0; j < n; ++j) s += coin(rng) == 0 ? static_cast<char>(printable(rng)) : alphabet[pick(rng)];
        try {
            parse_answer(s);
            ++values;
        } catch (const ParseError&) {
            ++errors;
        }
    }
    EXPECT_GT(values, 0);
    EXPECT_GT(errors, 0);
}
