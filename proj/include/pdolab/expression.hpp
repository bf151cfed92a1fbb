#pragma once

#include "pdolab/symbol.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdolab {

/// A compiled complex-valued expression in x1..xn and xi1..xin.
///
/// See docs/expressions.md for the grammar. Parsing failures raise
/// ParseError carrying the 1-based line and column of the offending token.
class Expression {
public:
    /// `dim` bounds the admissible variable indices (1..dim).
    static Expression parse(std::string_view source, int dim);

    int dim() const noexcept { return dim_; }
    const std::string& source() const noexcept { return source_; }
    bool uses_x() const noexcept { return uses_x_; }
    bool uses_xi() const noexcept { return uses_xi_; }

    Complex evaluate(std::span<const double> x, std::span<const double> xi) const;

    enum class Op : unsigned char {
        constant,
        x_var,
        xi_var,
        bracket_xi,
        add,
        sub,
        mul,
        div,
        pow,
        neg,
        exp,
        sin,
        cos,
        abs,
        sqrt,
        log,
        bracket,
        re,
        im,
        conj,
    };
    struct Instruction {
        Op op;
        int index = 0;
        Complex value{};
    };

private:
    Expression() = default;

    std::string source_;
    int dim_ = 1;
    bool uses_x_ = false;
    bool uses_xi_ = false;
    std::vector<Instruction> code_;

    friend class ExpressionCompiler;
};

/// Wraps an expression as a symbol: a multiplier when it never mentions x,
/// a closed form otherwise.
Symbol symbol_from_expression(const Expression& e);

/// x-only function for sampling on a grid; rejects expressions that use xi.
PointFunction function_from_expression(const Expression& e);

} // namespace pdolab
