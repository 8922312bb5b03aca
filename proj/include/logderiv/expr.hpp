#pragma once

// A small expression language for the operands of ln ∂ and ∂^ν:
//
//   expr := ['+'|'-'] term (('+'|'-') term)*
//   term := number ['*'] atom | number | atom
//   atom := 'x' ['^' uint] | 'ln(x)' | 'I0(sqrt(x))'
//
// Whitespace may appear between tokens. Numbers are decimal literals with an
// optional exponent part.

#include <charconv>
#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "logderiv/error.hpp"
#include "logderiv/fracdiff.hpp"
#include "logderiv/series.hpp"
#include "logderiv/umbral.hpp"

namespace logderiv::expr {

struct Const {
    double value = 0.0;
    bool operator==(const Const&) const = default;
};
struct Monomial {
    double coeff = 1.0;
    int n = 1;
    bool operator==(const Monomial&) const = default;
};
struct LnX {
    double coeff = 1.0;
    bool operator==(const LnX&) const = default;
};
struct I0SqrtX {
    double coeff = 1.0;
    bool operator==(const I0SqrtX&) const = default;
};

using Term = std::variant<Const, Monomial, LnX, I0SqrtX>;

/// Flat: terms are never themselves sums.
struct Sum {
    std::vector<Term> terms;
    bool operator==(const Sum&) const = default;
};

using ExprAst = std::variant<Const, Monomial, LnX, I0SqrtX, Sum>;

class parse_error : public error {
public:
    parse_error(const std::string& message, std::size_t offset, std::vector<std::string> expected)
        : error(message), offset_(offset), expected_(std::move(expected))
    {
    }
    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

namespace detail {

class Parser {
public:
    Parser(std::string_view src, int max_exponent) : src_(src), max_exponent_(max_exponent) {}

    ExprAst parse()
    {
        std::vector<Term> terms;
        skip_ws();
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = peek() == '-' ? -1.0 : 1.0;
            ++pos_;
        }
        terms.push_back(term(sign));
        for (;;) {
            skip_ws();
            if (at_end()) break;
            const char c = peek();
            if (c != '+' && c != '-') fail("unexpected character", {"+", "-", "end of input"});
            ++pos_;
            terms.push_back(term(c == '-' ? -1.0 : 1.0));
        }
        if (terms.size() == 1) {
            return std::visit([](const auto& t) -> ExprAst { return t; }, terms.front());
        }
        return Sum{std::move(terms)};
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return at_end() ? '\0' : src_[pos_]; }

    void skip_ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const
    {
        std::string list;
        for (const auto& e : expected) list += (list.empty() ? "" : ", ") + e;
        throw parse_error(what + " at offset " + std::to_string(pos_) + " (expected " + list + ")", pos_,
                          std::move(expected));
    }

    void expect_word(std::string_view word)
    {
        skip_ws();
        for (char c : word) {
            if (peek() != c) fail("syntax error", {std::string(word)});
            ++pos_;
        }
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    double number()
    {
        const std::size_t start = pos_;
        while (is_digit(peek())) ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (is_digit(peek())) ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && src_[start] == '.')) {
            pos_ = start;
            fail("malformed number", {"digit"});
        }
        // exponent only when digits follow, so "2e" is not swallowed
        if (peek() == 'e' || peek() == 'E') {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && is_digit(src_[look])) {
                pos_ = look;
                while (is_digit(peek())) ++pos_;
            }
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(value)) {
            pos_ = start;
            fail("number out of range", {"finite number"});
        }
        return value;
    }

    int exponent()
    {
        skip_ws();
        const std::size_t start = pos_;
        if (!is_digit(peek())) fail("syntax error", {"unsigned integer"});
        long long n = 0;
        while (is_digit(peek())) {
            n = n * 10 + (peek() - '0');
            if (n > max_exponent_) {
                pos_ = start;
                fail("exponent exceeds trunc_order " + std::to_string(max_exponent_), {"exponent <= trunc_order"});
            }
            ++pos_;
        }
        return static_cast<int>(n);
    }

    Term atom(double coeff)
    {
        skip_ws();
        switch (peek()) {
        case 'x': {
            ++pos_;
            skip_ws();
            int n = 1;
            if (peek() == '^') {
                ++pos_;
                n = exponent();
            }
            if (n > max_exponent_) fail("exponent exceeds trunc_order", {"exponent <= trunc_order"});
            return Monomial{coeff, n};
        }
        case 'l':
            expect_word("ln");
            expect_word("(");
            expect_word("x");
            expect_word(")");
            return LnX{coeff};
        case 'I':
            expect_word("I0");
            expect_word("(");
            expect_word("sqrt");
            expect_word("(");
            expect_word("x");
            expect_word(")");
            expect_word(")");
            return I0SqrtX{coeff};
        default:
            fail("syntax error", {"x", "ln(x)", "I0(sqrt(x))"});
        }
    }

    Term term(double sign)
    {
        skip_ws();
        const char c = peek();
        if (is_digit(c) || c == '.') {
            const double value = sign * number();
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                return atom(value);
            }
            if (peek() == 'x' || peek() == 'l' || peek() == 'I') return atom(value);
            return Const{value};
        }
        if (c == 'x' || c == 'l' || c == 'I') return atom(sign);
        fail("syntax error", {"number", "x", "ln(x)", "I0(sqrt(x))"});
    }

    std::string_view src_;
    int max_exponent_;
    std::size_t pos_ = 0;
};

inline std::string shortest(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string render_term(const Term& t, bool first)
{
    auto signed_text = [first](double c, const std::string& tail) {
        std::string head = first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        return head + shortest(std::abs(c)) + tail;
    };
    return std::visit(
        [&](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Const>) return signed_text(node.value, "");
            else if constexpr (std::is_same_v<T, Monomial>) return signed_text(node.coeff, "*x^" + std::to_string(node.n));
            else if constexpr (std::is_same_v<T, LnX>) return signed_text(node.coeff, "*ln(x)");
            else return signed_text(node.coeff, "*I0(sqrt(x))");
        },
        t);
}

} // namespace detail

/// Parses src; exponents above max_exponent are rejected.
inline ExprAst parse_expr(std::string_view src, int max_exponent = SeriesConfig{}.trunc_order)
{
    return detail::Parser(src, max_exponent).parse();
}

/// Text that parse_expr maps back to the same tree.
inline std::string render(const ExprAst& ast)
{
    if (const auto* sum = std::get_if<Sum>(&ast)) {
        std::string out;
        for (std::size_t i = 0; i < sum->terms.size(); ++i) out += detail::render_term(sum->terms[i], i == 0);
        return out;
    }
    return std::visit(
        [](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Sum>) return {};
            else return detail::render_term(Term{node}, true);
        },
        ast);
}

/// Lowers the tree to a power series plus a multiple of ln x.
inline FracOperand to_operand(const ExprAst& ast, const SeriesConfig& config = {})
{
    std::vector<Term> terms;
    if (const auto* sum = std::get_if<Sum>(&ast)) terms = sum->terms;
    else std::visit([&terms](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (!std::is_same_v<T, Sum>) terms.push_back(node);
    }, ast);

    FracOperand out;
    for (const Term& t : terms) {
        if (const auto* c = std::get_if<Const>(&t)) out.power = combine(1.0, out.power, c->value, LaurentSeries::constant(1.0));
        else if (const auto* m = std::get_if<Monomial>(&t)) out.power = combine(1.0, out.power, m->coeff, LaurentSeries::monomial(1.0, m->n));
        else if (const auto* l = std::get_if<LnX>(&t)) out.ln_coeff += l->coeff;
        else if (const auto* i = std::get_if<I0SqrtX>(&t)) out.power = combine(1.0, out.power, i->coeff, umbral::i0_sqrt_series(config));
    }
    return out;
}

} // namespace logderiv::expr
