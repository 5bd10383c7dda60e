#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relgeo/jet.hpp"

namespace relgeo {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable AST over literals, chart variables u1..un, named parameters,
// binary + - * / ^, unary -, and a fixed set of functions.
struct Expr {
    enum class Kind { Number, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind;
    double number = 0.0;       // Number
    int var = -1;              // Var (0-based)
    std::string name;          // Param or Call
    std::vector<ExprPtr> args; // operands

    static ExprPtr make_number(double v);
    static ExprPtr make_var(int index);
    static ExprPtr make_param(std::string name);
    static ExprPtr make_unary(Kind kind, ExprPtr a);
    static ExprPtr make_binary(Kind kind, ExprPtr a, ExprPtr b);
    static ExprPtr make_call(std::string fn, std::vector<ExprPtr> args);
};

bool expr_equal(const Expr& a, const Expr& b);

// Grammar: standard precedence, ^ right-associative and tighter than unary
// minus; identifiers u1..u9 are chart variables, other [a-z]+ identifiers are
// parameters unless they name a function applied with parentheses.
ExprPtr parse_expression(std::string_view text, int n_vars);

std::string to_string(const Expr& e);

// Replaces parameters by literals. Throws UnknownIdentifier for parameters
// missing from the map.
ExprPtr resolve_params(const ExprPtr& e, const std::map<std::string, double>& params);

// Jet of the expression at a chart point; parameters must already be resolved.
Jet eval_jet(const Expr& e, std::span<const double> point, int order);

// Plain recursive evaluation (shares no code path with jet propagation beyond
// the AST itself).
double eval_value(const Expr& e, std::span<const double> point);

}  // namespace relgeo
