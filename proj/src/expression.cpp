#include "pdolab/expression.hpp"

#include "pdolab/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>

namespace pdolab {

namespace {

constexpr std::size_t kMaxStack = 64;

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::end:
        return "end of input";
    case Tok::number:
    case Tok::ident:
        return "'" + t.text + "'";
    default:
        return "'" + t.text + "'";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_blank();
            Token t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= src_.size()) {
                t.kind = Tok::end;
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                lex_number(t);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t b = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    advance();
                }
                t.kind = Tok::ident;
                t.text = std::string(src_.substr(b, pos_ - b));
            } else {
                static const std::map<char, Tok> singles{{'+', Tok::plus},   {'-', Tok::minus},  {'*', Tok::star},
                                                         {'/', Tok::slash},  {'^', Tok::caret},  {'(', Tok::lparen},
                                                         {')', Tok::rparen}, {',', Tok::comma}};
                const auto it = singles.find(c);
                if (it == singles.end()) {
                    throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
                }
                t.kind = it->second;
                t.text = std::string(1, c);
                advance();
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    bool digit_at(std::size_t p) const {
        return p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]));
    }

    void lex_number(Token& t) {
        const std::size_t b = pos_;
        while (digit_at(pos_)) {
            advance();
        }
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            while (digit_at(pos_)) {
                advance();
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) {
                ++p;
            }
            if (digit_at(p)) {
                while (pos_ < p) {
                    advance();
                }
                while (digit_at(pos_)) {
                    advance();
                }
            }
        }
        t.kind = Tok::number;
        t.text = std::string(src_.substr(b, pos_ - b));
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
            throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

using Op = Expression::Op;

const std::map<std::string, Op>& functions() {
    static const std::map<std::string, Op> table{
        {"exp", Op::exp},   {"sin", Op::sin}, {"cos", Op::cos}, {"abs", Op::abs},   {"sqrt", Op::sqrt},
        {"log", Op::log},   {"re", Op::re},   {"im", Op::im},   {"conj", Op::conj}, {"angle", Op::bracket},
    };
    return table;
}

std::optional<int> variable_index(const std::string& name, std::string_view prefix) {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
        return std::nullopt;
    }
    int v = 0;
    const char* b = name.data() + prefix.size();
    const char* e = name.data() + name.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e || *b == '0') {
        return std::nullopt;
    }
    return v;
}

} // namespace

class ExpressionCompiler {
public:
    ExpressionCompiler(std::string_view src, int dim) : tokens_(Lexer(src).run()), dim_(dim) {
        expr_.source_ = std::string(src);
        expr_.dim_ = dim;
    }

    Expression compile() {
        if (peek().kind == Tok::end) {
            throw ParseError("empty expression", peek().line, peek().column);
        }
        parse_sum();
        if (peek().kind != Tok::end) {
            throw ParseError("unexpected " + describe(peek()) + " after complete expression", peek().line,
                             peek().column);
        }
        return std::move(expr_);
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    void expect(Tok kind, const char* what) {
        if (peek().kind != kind) {
            throw ParseError(std::string("expected ") + what + ", found " + describe(peek()), peek().line,
                             peek().column);
        }
        ++pos_;
    }

    void emit(Op op, int index = 0, Complex value = {}, const Token* at = nullptr) {
        switch (op) {
        case Op::constant:
        case Op::x_var:
        case Op::xi_var:
        case Op::bracket_xi:
            ++depth_;
            break;
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::div:
        case Op::pow:
            --depth_;
            break;
        default:
            break;
        }
        if (depth_ > kMaxStack) {
            const Token& t = at ? *at : peek();
            throw ParseError("expression nests too deeply", t.line, t.column);
        }
        expr_.code_.push_back({op, index, value});
    }

    void parse_sum() {
        parse_product();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Op op = take().kind == Tok::plus ? Op::add : Op::sub;
            parse_product();
            emit(op);
        }
    }

    void parse_product() {
        parse_unary();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Op op = take().kind == Tok::star ? Op::mul : Op::div;
            parse_unary();
            emit(op);
        }
    }

    void parse_unary() {
        if (peek().kind == Tok::minus) {
            take();
            parse_unary();
            emit(Op::neg);
            return;
        }
        if (peek().kind == Tok::plus) {
            take();
            parse_unary();
            return;
        }
        parse_power();
    }

    void parse_power() {
        parse_primary();
        if (peek().kind == Tok::caret) {
            take();
            parse_unary();
            emit(Op::pow);
        }
    }

    void parse_primary() {
        const Token& t = take();
        switch (t.kind) {
        case Tok::number:
            emit(Op::constant, 0, t.number, &t);
            return;
        case Tok::lparen:
            parse_sum();
            expect(Tok::rparen, "')'");
            return;
        case Tok::ident:
            parse_identifier(t);
            return;
        default:
            throw ParseError("expected a number, variable, function or '(', found " + describe(t), t.line, t.column);
        }
    }

    void parse_identifier(const Token& t) {
        if (peek().kind == Tok::lparen) {
            const auto it = functions().find(t.text);
            if (it == functions().end()) {
                throw ParseError("unknown function '" + t.text + "'", t.line, t.column);
            }
            take();
            if (it->second == Op::bracket && (peek().kind == Tok::rparen || is_bare_xi())) {
                if (peek().kind == Tok::ident) {
                    take();
                }
                expect(Tok::rparen, "')'");
                expr_.uses_xi_ = true;
                emit(Op::bracket_xi, 0, {}, &t);
                return;
            }
            parse_sum();
            if (peek().kind == Tok::comma) {
                throw ParseError("function '" + t.text + "' takes one argument", peek().line, peek().column);
            }
            expect(Tok::rparen, "')'");
            emit(it->second);
            return;
        }
        if (functions().count(t.text) != 0) {
            throw ParseError("function '" + t.text + "' needs '('", peek().line, peek().column);
        }
        if (t.text == "pi") {
            emit(Op::constant, 0, kPi, &t);
        } else if (t.text == "e") {
            emit(Op::constant, 0, std::exp(1.0), &t);
        } else if (t.text == "i") {
            emit(Op::constant, 0, Complex(0.0, 1.0), &t);
        } else if (const auto k = variable_index(t.text, "xi")) {
            check_index(*k, t);
            expr_.uses_xi_ = true;
            emit(Op::xi_var, *k - 1, {}, &t);
        } else if (const auto k = variable_index(t.text, "x")) {
            check_index(*k, t);
            expr_.uses_x_ = true;
            emit(Op::x_var, *k - 1, {}, &t);
        } else if (functions().count(t.text) != 0) {
            throw ParseError("function '" + t.text + "' needs an argument list", t.line, t.column);
        } else {
            throw ParseError("unknown identifier '" + t.text + "'", t.line, t.column);
        }
    }

    bool is_bare_xi() const {
        return peek().kind == Tok::ident && peek().text == "xi" && tokens_[pos_ + 1].kind == Tok::rparen;
    }

    void check_index(int k, const Token& t) const {
        if (k < 1 || k > dim_) {
            throw ParseError("variable '" + t.text + "' exceeds dimension " + std::to_string(dim_), t.line,
                             t.column);
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int dim_;
    std::size_t depth_ = 0;
    Expression expr_;
};

Expression Expression::parse(std::string_view source, int dim) {
    if (dim < 1 || dim > TorusGrid::kMaxDim) {
        throw InvariantError("expression dimension must be in 1.." + std::to_string(TorusGrid::kMaxDim));
    }
    return ExpressionCompiler(source, dim).compile();
}

namespace {

Complex power(Complex b, Complex p) {
    if (b.imag() == 0.0) {
        b = Complex(b.real(), 0.0); // drop a negative zero so real negatives take the principal branch
    }
    if (p.imag() == 0.0) {
        const double q = p.real();
        if (q == std::round(q) && std::abs(q) <= 64.0) {
            auto k = static_cast<long long>(std::abs(q));
            Complex r = 1.0;
            Complex base = b;
            while (k > 0) {
                if (k & 1) {
                    r *= base;
                }
                base *= base;
                k >>= 1;
            }
            return q < 0 ? 1.0 / r : r;
        }
        if (b.imag() == 0.0 && b.real() >= 0.0) {
            return std::pow(b.real(), q);
        }
    }
    return std::pow(b, p);
}

Complex real_or_complex(Complex z, double (*fr)(double), Complex (*fc)(const Complex&)) {
    return z.imag() == 0.0 ? Complex(fr(z.real())) : fc(z);
}

} // namespace

Complex Expression::evaluate(std::span<const double> x, std::span<const double> xi) const {
    std::array<Complex, kMaxStack> stack;
    std::size_t top = 0;
    for (const auto& ins : code_) {
        switch (ins.op) {
        case Op::constant:
            stack[top++] = ins.value;
            break;
        case Op::x_var:
            stack[top++] = x[static_cast<std::size_t>(ins.index)];
            break;
        case Op::xi_var:
            stack[top++] = xi[static_cast<std::size_t>(ins.index)];
            break;
        case Op::bracket_xi:
            stack[top++] = japanese_bracket(xi.first(static_cast<std::size_t>(dim_)));
            break;
        case Op::add:
            --top;
            stack[top - 1] += stack[top];
            break;
        case Op::sub:
            --top;
            stack[top - 1] -= stack[top];
            break;
        case Op::mul:
            --top;
            stack[top - 1] *= stack[top];
            break;
        case Op::div:
            --top;
            stack[top - 1] /= stack[top];
            break;
        case Op::pow:
            --top;
            stack[top - 1] = power(stack[top - 1], stack[top]);
            break;
        case Op::neg:
            stack[top - 1] = -stack[top - 1];
            break;
        case Op::exp:
            stack[top - 1] = real_or_complex(stack[top - 1], std::exp, std::exp);
            break;
        case Op::sin:
            stack[top - 1] = real_or_complex(stack[top - 1], std::sin, std::sin);
            break;
        case Op::cos:
            stack[top - 1] = real_or_complex(stack[top - 1], std::cos, std::cos);
            break;
        case Op::abs:
            stack[top - 1] = std::abs(stack[top - 1]);
            break;
        case Op::sqrt: {
            const Complex z = stack[top - 1];
            stack[top - 1] = z.imag() != 0.0 ? std::sqrt(z)
                             : z.real() >= 0.0 ? Complex(std::sqrt(z.real()))
                                               : std::sqrt(Complex(z.real(), 0.0));
            break;
        }
        case Op::log: {
            const Complex z = stack[top - 1];
            stack[top - 1] = z.imag() != 0.0 ? std::log(z)
                             : z.real() > 0.0 ? Complex(std::log(z.real()))
                                              : std::log(Complex(z.real(), 0.0));
            break;
        }
        case Op::bracket:
            stack[top - 1] = std::sqrt(1.0 + std::norm(stack[top - 1]));
            break;
        case Op::re:
            stack[top - 1] = stack[top - 1].real();
            break;
        case Op::im:
            stack[top - 1] = stack[top - 1].imag();
            break;
        case Op::conj:
            stack[top - 1] = std::conj(stack[top - 1]);
            break;
        }
    }
    return stack[0];
}

Symbol symbol_from_expression(const Expression& e) {
    if (!e.uses_x()) {
        const int n = e.dim();
        return Symbol::multiplier(n, [e, n](std::span<const double> xi) {
            const std::array<double, TorusGrid::kMaxDim> x{};
            return e.evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(n)), xi);
        });
    }
    return Symbol::closed_form(e.dim(), [e](std::span<const double> x, std::span<const double> xi) {
        return e.evaluate(x, xi);
    });
}

PointFunction function_from_expression(const Expression& e) {
    if (e.uses_xi()) {
        throw InvariantError("function expression must not use xi variables");
    }
    return [e](std::span<const double> x) {
        const std::array<double, TorusGrid::kMaxDim> xi{};
        return e.evaluate(x, std::span<const double>(xi.data(), x.size()));
    };
}

} // namespace pdolab
