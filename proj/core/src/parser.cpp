#include "symcon/parser.hpp"

#include <cctype>

namespace symcon {

namespace {

struct Token {
    enum Kind { Integer, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    std::string text;
    int line = 1, column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }
    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            bump();
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= text_.size()) {
            current_.kind = Token::End;
            current_.text.clear();
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                num += text_[pos_];
                bump();
            }
            current_ = {Token::Integer, num, current_.line, current_.column};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                name += text_[pos_];
                bump();
            }
            // bracket index: q[3] desugars to q_3
            if (pos_ < text_.size() && text_[pos_] == '[') {
                bump();
                std::string idx;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    idx += text_[pos_];
                    bump();
                }
                if (idx.empty() || pos_ >= text_.size() || text_[pos_] != ']')
                    throw ParseError("malformed bracket index", current_.line, current_.column);
                bump();
                name += "_" + idx;
            }
            current_ = {Token::Ident, name, current_.line, current_.column};
            return;
        }
        Token::Kind kind;
        switch (c) {
            case '+': kind = Token::Plus; break;
            case '-': kind = Token::Minus; break;
            case '*': kind = Token::Star; break;
            case '/': kind = Token::Slash; break;
            case '^': kind = Token::Caret; break;
            case '(': kind = Token::LParen; break;
            case ')': kind = Token::RParen; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
        }
        bump();
        current_ = {kind, std::string(1, c), current_.line, current_.column};
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, column_ = 1;
    Token current_;
};

class Parser {
public:
    Parser(const std::string& text, const SymbolTable& symbols)
        : lexer_(text), symbols_(symbols) {}

    Expr parse() {
        Expr e = expression();
        const Token& t = lexer_.peek();
        if (t.kind != Token::End)
            throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.column);
        return e;
    }

private:
    Expr expression() {
        Expr e = term();
        while (true) {
            const Token& t = lexer_.peek();
            if (t.kind == Token::Plus) {
                lexer_.take();
                e += term();
            } else if (t.kind == Token::Minus) {
                lexer_.take();
                e -= term();
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = factor();
        while (true) {
            const Token& t = lexer_.peek();
            if (t.kind == Token::Star) {
                lexer_.take();
                e *= factor();
            } else if (t.kind == Token::Slash) {
                Token op = lexer_.take();
                Expr rhs = factor();
                if (rhs.is_zero()) throw ParseError("division by zero", op.line, op.column);
                e /= rhs;
            } else {
                return e;
            }
        }
    }

    Expr factor() {
        if (lexer_.peek().kind == Token::Minus) {
            lexer_.take();
            return -factor();
        }
        Expr b = base();
        if (lexer_.peek().kind == Token::Caret) {
            Token op = lexer_.take();
            bool negative = false;
            if (lexer_.peek().kind == Token::Minus) {
                lexer_.take();
                negative = true;
            }
            Token e = lexer_.take();
            if (e.kind != Token::Integer)
                throw ParseError("expected integer exponent", e.line, e.column);
            int exp = std::stoi(e.text);
            if (negative && b.is_zero())
                throw ParseError("negative power of zero", op.line, op.column);
            return b.pow(negative ? -exp : exp);
        }
        return b;
    }

    Expr base() {
        Token t = lexer_.take();
        switch (t.kind) {
            case Token::Integer:
                return Expr::from_rational(Rational(Int(t.text)));
            case Token::Ident: {
                auto s = symbols_.find(t.text);
                if (!s) throw ParseError("undeclared identifier '" + t.text + "'", t.line, t.column);
                return Expr::var(*s);
            }
            case Token::LParen: {
                Expr e = expression();
                Token close = lexer_.take();
                if (close.kind != Token::RParen)
                    throw ParseError("expected ')'", close.line, close.column);
                return e;
            }
            default:
                throw ParseError("unexpected token '" + t.text + "'", t.line, t.column);
        }
    }

    Lexer lexer_;
    const SymbolTable& symbols_;
};

} // namespace

Expr parse_expr(const std::string& text, const SymbolTable& symbols) {
    return Parser(text, symbols).parse();
}

} // namespace symcon
