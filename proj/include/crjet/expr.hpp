#pragma once

#include <cctype>
#include <string>

#include "crjet/errors.hpp"
#include "crjet/series.hpp"

namespace crjet {

/// Recursive-descent parser for polynomial expressions over Q(i):
///   expr   := [sign] term (sign term)*
///   term   := factor ('*' factor)*
///   factor := atom ['^' nat]
///   atom   := nat ['/' nat] | 'i' | variable | '(' expr ')'
/// Coefficients are integer or rational literals and the imaginary unit;
/// '/' only joins two integer literals. Variables must come from `vars`.
class ExprParser {
public:
    ExprParser(std::string text, VarsPtr vars, int line = 1, int col_base = 1)
        : text_(std::move(text)), vars_(std::move(vars)), line_(line), col_base_(col_base) {}

    Series parse() {
        Series s = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return s;
    }

private:
    Series expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = take() == '-';
        Series acc = term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            take();
            Series t = term();
            acc = (c == '-') ? acc - t : acc + t;
        }
        return acc;
    }

    Series term() {
        Series acc = factor();
        while (true) {
            skip_ws();
            if (peek() != '*') break;
            take();
            acc *= factor();
        }
        return acc;
    }

    Series factor() {
        Series base = atom();
        skip_ws();
        if (peek() == '^') {
            take();
            skip_ws();
            long e = integer("exponent");
            if (e > 512) fail("exponent too large");
            return base.pow(static_cast<int>(e));
        }
        return base;
    }

    Series atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            take();
            Series inner = expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            take();
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            BigInt num = big_integer();
            skip_ws();
            if (peek() == '/') {
                take();
                skip_ws();
                if (!std::isdigit(static_cast<unsigned char>(peek())))
                    fail("expected integer denominator");
                BigInt den = big_integer();
                if (den == 0) fail("zero denominator");
                return Series::constant(vars_, GaussianRational(BigRational(num, den)));
            }
            return Series::constant(vars_, GaussianRational(BigRational(num)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            std::string name = identifier();
            if (name == "i") return Series::constant(vars_, GaussianRational::i());
            for (std::size_t k = 0; k < vars_->size(); ++k)
                if ((*vars_)[k] == name) return Series::variable(vars_, k);
            fail_at(start, "unknown variable '" + name + "'");
        }
        fail(pos_ == text_.size() ? "unexpected end of expression" : "unexpected character");
        return Series::zero(vars_); // unreachable
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    BigInt big_integer() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return BigInt(text_.substr(start, pos_ - start));
    }

    long integer(const char* what) {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(std::string("expected ") + what);
        BigInt v = big_integer();
        if (v > 1000000) fail(std::string(what) + " out of range");
        return v.convert_to<long>();
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return text_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) { fail_at(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) {
        throw parse_error(msg, line_, col_base_ + static_cast<int>(at));
    }

    std::string text_;
    VarsPtr vars_;
    int line_;
    int col_base_;
    std::size_t pos_ = 0;
};

inline Series parse_expression(const std::string& text, const VarsPtr& vars, int line = 1,
                               int col_base = 1) {
    return ExprParser(text, vars, line, col_base).parse();
}

} // namespace crjet
