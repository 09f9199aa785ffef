#include "topowalk/angle_expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "topowalk/core.hpp"

namespace topowalk {

namespace {

// expr    := term (('+' | '-') term)*
// term    := unary (('*' | '/') unary | unary-starting-with-pi-or-paren)*
// unary   := '-' unary | '+' unary | primary
// primary := number | "pi" | '(' expr ')'
class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    double parse()
    {
        const double v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const
    {
        throw std::invalid_argument("bad angle expression '" + std::string(s_) + "': " + why);
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek()
    {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool at_pi()
    {
        skip_ws();
        return s_.substr(pos_, 2) == "pi" || s_.substr(pos_, 2) == "PI";
    }

    double expr()
    {
        double v = term();
        for (;;) {
            const char c = peek();
            if (c == '+') {
                ++pos_;
                v += term();
            } else if (c == '-') {
                ++pos_;
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term()
    {
        double v = unary();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                v *= unary();
            } else if (c == '/') {
                ++pos_;
                const double d = unary();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else if (c == '(' || at_pi()) {
                v *= primary();  // implicit product: "2pi", "3(pi/4)"
            } else {
                return v;
            }
        }
    }

    double unary()
    {
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return primary();
    }

    double primary()
    {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            const double v = expr();
            if (peek() != ')') fail("missing ')'");
            ++pos_;
            return v;
        }
        if (at_pi()) {
            pos_ += 2;
            return pi;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(s_.substr(pos_));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) fail("expected a number");
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            return v;
        }
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

double parse_angle(std::string_view text)
{
    const double v = Parser(text).parse();
    if (!std::isfinite(v)) throw std::invalid_argument("angle expression is not finite");
    return v;
}

std::vector<double> parse_angle_list(std::string_view text)
{
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        out.push_back(parse_angle(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace topowalk
