#include "keldysh/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace keldysh {

namespace {

using Fn = std::function<double(double)>;

// Recursive-descent parser over the source string.  Each rule returns the
// compiled subexpression; positions in error messages are 1-based.
struct Parser {
    const std::string& src;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression error at position " +
                                    std::to_string(pos + 1) + ": " + what);
    }

    void skip_space() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool accept(char c) {
        skip_space();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos < src.size() ? src[pos] : '\0';
    }

    Fn parse_expression() {
        Fn left = parse_term();
        for (;;) {
            if (accept('+')) {
                Fn right = parse_term();
                left = [left, right](double t) { return left(t) + right(t); };
            } else if (accept('-')) {
                Fn right = parse_term();
                left = [left, right](double t) { return left(t) - right(t); };
            } else {
                return left;
            }
        }
    }

    Fn parse_term() {
        Fn left = parse_factor();
        for (;;) {
            if (accept('*')) {
                Fn right = parse_factor();
                left = [left, right](double t) { return left(t) * right(t); };
            } else if (accept('/')) {
                Fn right = parse_factor();
                left = [left, right](double t) { return left(t) / right(t); };
            } else {
                return left;
            }
        }
    }

    Fn parse_factor() {
        Fn base = parse_unary();
        if (accept('^')) {
            Fn exponent = parse_factor();  // right-associative
            return [base, exponent](double t) { return std::pow(base(t), exponent(t)); };
        }
        return base;
    }

    Fn parse_unary() {
        if (accept('-')) {
            Fn inner = parse_unary();
            return [inner](double t) { return -inner(t); };
        }
        return parse_primary();
    }

    Fn parse_primary() {
        skip_space();
        if (pos >= src.size()) fail("unexpected end of expression");
        char c = src[pos];

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() && std::isalpha(static_cast<unsigned char>(src[pos]))) ++pos;
            std::string name = src.substr(start, pos - start);
            if (name == "t") return [](double t) { return t; };
            if (name == "inf") return [](double) { return HUGE_VAL; };

            if (!accept('(')) {
                pos = start;
                fail("unknown name '" + name + "'");
            }
            Fn arg = parse_expression();
            if (!accept(')')) fail("expected ')'");
            if (name == "exp") return [arg](double t) { return std::exp(arg(t)); };
            if (name == "sqrt") return [arg](double t) { return std::sqrt(arg(t)); };
            if (name == "abs") return [arg](double t) { return std::fabs(arg(t)); };
            if (name == "ind") return [arg](double t) { return arg(t) > 0.0 ? 1.0 : 0.0; };
            pos = start;
            fail("unknown function '" + name + "'");
        }

        if (accept('(')) {
            Fn inner = parse_expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }

        fail(std::string("unexpected character '") + c + "'");
    }

    Fn parse_number() {
        const char* begin = src.c_str() + pos;
        char* end = nullptr;
        double value = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos += static_cast<std::size_t>(end - begin);
        return [value](double) { return value; };
    }
};

}  // namespace

std::function<double(double)> compile_expression(const std::string& text) {
    Parser p{text};
    Fn compiled = p.parse_expression();
    p.skip_space();
    if (p.pos != text.size()) p.fail("trailing characters");
    return compiled;
}

}  // namespace keldysh
