#include "sha_predict/literal.hpp"

#include <cctype>

#include "sha_predict/errors.hpp"

namespace sha_predict {

namespace {

class LiteralParser {
public:
    explicit LiteralParser(const std::string& text)
        : text_(text)
    {
        for (char ch : text) {
            if (!std::isspace(static_cast<unsigned char>(ch))) {
                s_ += ch;
            }
        }
    }

    QuadNumber parse()
    {
        if (s_.empty()) {
            fail("empty literal");
        }
        auto v = expr();
        if (pos_ != s_.size()) {
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        throw InputError("bad number literal '" + text_ + "': " + why);
    }

    bool peek(char ch) const { return pos_ < s_.size() && s_[pos_] == ch; }
    bool at_digit() const { return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])); }
    bool at_sqrt() const { return s_.compare(pos_, 4, "sqrt") == 0; }

    static QuadNumber rational(const BigInt& v) { return QuadNumber::rational(Rational(v), 2); }

    QuadNumber expr()
    {
        auto v = term();
        while (peek('+') || peek('-')) {
            const char op = s_[pos_++];
            auto rhs = term();
            v = op == '+' ? v + rhs : v - rhs;
        }
        return v;
    }

    QuadNumber term()
    {
        auto v = factor();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                v = v * factor();
            } else if (peek('/')) {
                ++pos_;
                auto rhs = factor();
                if (rhs.sign() == 0) {
                    fail("division by zero");
                }
                v = v / rhs;
            } else if (at_sqrt() || peek('(')) {
                v = v * factor(); // implicit product, "2sqrt3"
            } else {
                return v;
            }
        }
    }

    QuadNumber factor()
    {
        if (peek('-')) {
            ++pos_;
            return -factor();
        }
        if (peek('+')) {
            ++pos_;
            return factor();
        }
        return primary();
    }

    BigInt integer()
    {
        const auto start = pos_;
        while (at_digit()) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a number");
        }
        return BigInt(s_.substr(start, pos_ - start));
    }

    QuadNumber primary()
    {
        if (peek('(')) {
            ++pos_;
            auto v = expr();
            if (!peek(')')) {
                fail("missing ')'");
            }
            ++pos_;
            return v;
        }
        if (at_sqrt()) {
            pos_ += 4;
            const bool paren = peek('(');
            if (paren) {
                ++pos_;
            }
            const BigInt d = integer();
            if (paren) {
                if (!peek(')')) {
                    fail("missing ')'");
                }
                ++pos_;
            }
            if (!d.fits_slong_p()) {
                fail("radicand too large");
            }
            const std::int64_t radicand = d.get_si();
            if (radicand < 0) {
                fail("negative radicand");
            }
            const std::int64_t root = isqrt(radicand);
            if (root * root == radicand) {
                return rational(root);
            }
            return QuadNumber(0, 1, 1, radicand);
        }
        return rational(integer());
    }

    std::string text_;
    std::string s_;
    std::size_t pos_ = 0;
};

} // namespace

QuadNumber parse_quad_literal(const std::string& text)
{
    return LiteralParser(text).parse();
}

} // namespace sha_predict
