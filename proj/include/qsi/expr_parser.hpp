#pragma once
// Small recursive-descent parser shared by scalar, noncommutative and
// rational-function literals.  The caller supplies how identifiers, numbers,
// division and powers map into the target ring.

#include <cctype>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "qsi/poly.hpp"

namespace qsi {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
struct ExprRules {
    std::function<T(const Rational&)> number;
    std::function<std::optional<T>(const std::string&)> ident;
    std::function<T(const T&, const T&)> divide;
    std::function<T(const T&, long)> power;
};

template <class T>
class ExprParser {
public:
    ExprParser(const std::string& src, const ExprRules<T>& rules) : s_(src), r_(rules) {}

    T parse() {
        T v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("parse error in \"" + s_ + "\" at " + std::to_string(pos_) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }
    bool atom_ahead() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || ident_start(c) || c == '(';
    }

    T expr() {
        T v = term();
        for (;;) {
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else return v;
        }
    }
    T term() {
        T v = unary();
        for (;;) {
            if (eat('*')) v = v * unary();
            else if (eat('/')) v = r_.divide(v, unary());
            else if (atom_ahead()) v = v * power();
            else return v;
        }
    }
    T unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    T power() {
        T base = atom();
        while (eat('^')) {
            bool paren = eat('(');
            bool neg = false;
            if (eat('-')) neg = true;
            else eat('+');
            skip();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("exponent expected");
            long e = std::stol(s_.substr(start, pos_ - start));
            if (paren && !eat(')')) fail("')' expected");
            base = r_.power(base, neg ? -e : e);
        }
        return base;
    }
    T atom() {
        skip();
        if (pos_ >= s_.size()) fail("operand expected");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            T v = expr();
            if (!eat(')')) fail("')' expected");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return r_.number(Rational(s_.substr(start, pos_ - start)));
        }
        if (ident_start(c)) {
            size_t start = pos_;
            while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            auto v = r_.ident(id);
            if (!v) fail("unknown identifier '" + id + "'");
            return *v;
        }
        fail("operand expected");
    }

    std::string s_;
    ExprRules<T> r_;
    size_t pos_ = 0;
};

template <class T>
T parse_expr(const std::string& src, const ExprRules<T>& rules) {
    return ExprParser<T>(src, rules).parse();
}

}  // namespace qsi
