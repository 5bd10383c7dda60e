#include "relgeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "relgeo/errors.hpp"

namespace relgeo {

namespace {

const char* const kFunctions[] = {"sin", "cos", "tan", "exp", "ln", "sqrt", "abs", "pow"};

bool is_function(const std::string& name) {
    for (const char* f : kFunctions)
        if (name == f) return true;
    return false;
}

int function_arity(const std::string& name) {
    return name == "pow" ? 2 : 1;
}

}  // namespace

ExprPtr Expr::make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Number;
    e->number = v;
    return e;
}

ExprPtr Expr::make_var(int index) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->var = index;
    return e;
}

ExprPtr Expr::make_param(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Param;
    e->name = std::move(name);
    return e;
}

ExprPtr Expr::make_unary(Kind kind, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->args = {std::move(a)};
    return e;
}

ExprPtr Expr::make_binary(Kind kind, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->args = {std::move(a), std::move(b)};
    return e;
}

ExprPtr Expr::make_call(std::string fn, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Call;
    e->name = std::move(fn);
    e->args = std::move(args);
    return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Number:
            return a.number == b.number;
        case Expr::Kind::Var:
            return a.var == b.var;
        case Expr::Kind::Param:
            return a.name == b.name;
        default:
            break;
    }
    if (a.name != b.name || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!expr_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

namespace {

class Parser {
public:
    Parser(std::string_view text, int n_vars) : text_(text), n_vars_(n_vars) {}

    ExprPtr parse() {
        if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos)
            throw SyntaxError("empty expression", 0);
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = Expr::make_binary(Expr::Kind::Add, e, parse_term());
            else if (eat('-'))
                e = Expr::make_binary(Expr::Kind::Sub, e, parse_term());
            else
                return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        for (;;) {
            if (eat('*'))
                e = Expr::make_binary(Expr::Kind::Mul, e, parse_unary());
            else if (eat('/'))
                e = Expr::make_binary(Expr::Kind::Div, e, parse_unary());
            else
                return e;
        }
    }

    ExprPtr parse_unary() {
        if (eat('-')) return Expr::make_unary(Expr::Kind::Neg, parse_unary());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (eat('^')) return Expr::make_binary(Expr::Kind::Pow, base, parse_unary());
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!eat(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr parse_number() {
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw SyntaxError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return Expr::make_number(v);
    }

    ExprPtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));

        if (peek() == '(') {
            if (!is_function(name))
                throw UnknownIdentifier("unknown function '" + name + "'");
            eat('(');
            std::vector<ExprPtr> args;
            args.push_back(parse_sum());
            while (eat(',')) args.push_back(parse_sum());
            if (!eat(')')) throw SyntaxError("expected ')' after arguments", pos_);
            if (static_cast<int>(args.size()) != function_arity(name))
                throw ArityError("function '" + name + "' takes " +
                                 std::to_string(function_arity(name)) + " argument(s)");
            return Expr::make_call(name, std::move(args));
        }

        if (name.size() == 2 && name[0] == 'u' && name[1] >= '1' && name[1] <= '9') {
            const int index = name[1] - '1';
            if (index >= n_vars_)
                throw UnknownIdentifier("variable '" + name + "' exceeds chart dimension " +
                                        std::to_string(n_vars_));
            return Expr::make_var(index);
        }

        for (char ch : name)
            if (!std::islower(static_cast<unsigned char>(ch)))
                throw UnknownIdentifier("unknown identifier '" + name + "'");
        return Expr::make_param(name);
    }

    std::string_view text_;
    int n_vars_;
    std::size_t pos_ = 0;
};

int precedence(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
            return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div:
            return 2;
        case Expr::Kind::Neg:
            return 3;
        case Expr::Kind::Pow:
            return 4;
        default:
            return 5;
    }
}

void print(const Expr& e, std::string& out, int parent_prec, bool right_side) {
    const int prec = precedence(e.kind);
    const bool parens =
        prec < parent_prec || (prec == parent_prec && right_side && prec <= 2);
    switch (e.kind) {
        case Expr::Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", e.number);
            if (e.number < 0.0) {
                out += '(';
                out += buf;
                out += ')';
            } else {
                out += buf;
            }
            return;
        }
        case Expr::Kind::Var:
            out += 'u';
            out += static_cast<char>('1' + e.var);
            return;
        case Expr::Kind::Param:
            out += e.name;
            return;
        case Expr::Kind::Call: {
            out += e.name;
            out += '(';
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                print(*e.args[i], out, 0, false);
            }
            out += ')';
            return;
        }
        case Expr::Kind::Neg:
            if (parens) out += '(';
            out += '-';
            print(*e.args[0], out, prec, true);
            if (parens) out += ')';
            return;
        default:
            break;
    }
    if (parens) out += '(';
    const char* op = e.kind == Expr::Kind::Add   ? " + "
                     : e.kind == Expr::Kind::Sub ? " - "
                     : e.kind == Expr::Kind::Mul ? "*"
                     : e.kind == Expr::Kind::Div ? "/"
                                                 : "^";
    // ^ is right-associative: parenthesize a left child of equal precedence.
    if (e.kind == Expr::Kind::Pow) {
        print(*e.args[0], out, prec + 1, false);
        out += op;
        print(*e.args[1], out, prec, false);
    } else {
        print(*e.args[0], out, prec, false);
        out += op;
        print(*e.args[1], out, prec, true);
    }
    if (parens) out += ')';
}

}  // namespace

ExprPtr parse_expression(std::string_view text, int n_vars) {
    return Parser(text, n_vars).parse();
}

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out, 0, false);
    return out;
}

ExprPtr resolve_params(const ExprPtr& e, const std::map<std::string, double>& params) {
    switch (e->kind) {
        case Expr::Kind::Number:
        case Expr::Kind::Var:
            return e;
        case Expr::Kind::Param: {
            auto it = params.find(e->name);
            if (it == params.end())
                throw UnknownIdentifier("unresolved parameter '" + e->name + "'");
            return Expr::make_number(it->second);
        }
        default: {
            std::vector<ExprPtr> args;
            args.reserve(e->args.size());
            bool changed = false;
            for (const ExprPtr& a : e->args) {
                ExprPtr r = resolve_params(a, params);
                changed = changed || r != a;
                args.push_back(std::move(r));
            }
            if (!changed) return e;
            auto out = std::make_shared<Expr>(*e);
            out->args = std::move(args);
            return out;
        }
    }
}

Jet eval_jet(const Expr& e, std::span<const double> point, int order) {
    const int n_vars = static_cast<int>(point.size());
    switch (e.kind) {
        case Expr::Kind::Number:
            return Jet::constant(e.number, n_vars, order);
        case Expr::Kind::Var:
            return Jet::variable(point[e.var], e.var, n_vars, order);
        case Expr::Kind::Param:
            throw UnknownIdentifier("unresolved parameter '" + e.name + "' in evaluation");
        case Expr::Kind::Neg:
            return -eval_jet(*e.args[0], point, order);
        case Expr::Kind::Add:
            return eval_jet(*e.args[0], point, order) + eval_jet(*e.args[1], point, order);
        case Expr::Kind::Sub:
            return eval_jet(*e.args[0], point, order) - eval_jet(*e.args[1], point, order);
        case Expr::Kind::Mul:
            return eval_jet(*e.args[0], point, order) * eval_jet(*e.args[1], point, order);
        case Expr::Kind::Div:
            return eval_jet(*e.args[0], point, order) / eval_jet(*e.args[1], point, order);
        case Expr::Kind::Pow:
            return pow(eval_jet(*e.args[0], point, order), eval_jet(*e.args[1], point, order));
        case Expr::Kind::Call: {
            try {
                if (e.name == "pow")
                    return pow(eval_jet(*e.args[0], point, order), eval_jet(*e.args[1], point, order));
                const Jet a = eval_jet(*e.args[0], point, order);
                if (e.name == "sin") return sin(a);
                if (e.name == "cos") return cos(a);
                if (e.name == "tan") return tan(a);
                if (e.name == "exp") return exp(a);
                if (e.name == "ln") return log(a);
                if (e.name == "sqrt") return sqrt(a);
                if (e.name == "abs") return abs(a);
            } catch (const DomainError& err) {
                throw DomainError(std::string(err.what()) + " in '" + to_string(e) + "'");
            } catch (const DivisionByZeroValue& err) {
                throw DivisionByZeroValue(std::string(err.what()) + " in '" + to_string(e) + "'");
            }
            throw UnknownIdentifier("unknown function '" + e.name + "'");
        }
    }
    throw Error("unreachable expression kind");
}

double eval_value(const Expr& e, std::span<const double> point) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return e.number;
        case Expr::Kind::Var:
            return point[e.var];
        case Expr::Kind::Param:
            throw UnknownIdentifier("unresolved parameter '" + e.name + "' in evaluation");
        case Expr::Kind::Neg:
            return -eval_value(*e.args[0], point);
        case Expr::Kind::Add:
            return eval_value(*e.args[0], point) + eval_value(*e.args[1], point);
        case Expr::Kind::Sub:
            return eval_value(*e.args[0], point) - eval_value(*e.args[1], point);
        case Expr::Kind::Mul:
            return eval_value(*e.args[0], point) * eval_value(*e.args[1], point);
        case Expr::Kind::Div: {
            const double d = eval_value(*e.args[1], point);
            if (d == 0.0) throw DivisionByZeroValue("division by zero in '" + to_string(e) + "'");
            return eval_value(*e.args[0], point) / d;
        }
        case Expr::Kind::Pow:
            return std::pow(eval_value(*e.args[0], point), eval_value(*e.args[1], point));
        case Expr::Kind::Call: {
            const double a = eval_value(*e.args[0], point);
            if (e.name == "sin") return std::sin(a);
            if (e.name == "cos") return std::cos(a);
            if (e.name == "tan") return std::tan(a);
            if (e.name == "exp") return std::exp(a);
            if (e.name == "ln") {
                if (a <= 0.0) throw DomainError("ln of a non-positive value in '" + to_string(e) + "'");
                return std::log(a);
            }
            if (e.name == "sqrt") {
                if (a < 0.0) throw DomainError("sqrt of a negative value in '" + to_string(e) + "'");
                return std::sqrt(a);
            }
            if (e.name == "abs") return std::abs(a);
            if (e.name == "pow") return std::pow(a, eval_value(*e.args[1], point));
            throw UnknownIdentifier("unknown function '" + e.name + "'");
        }
    }
    throw Error("unreachable expression kind");
}

}  // namespace relgeo
