#include "core/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace sconv {

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Op {
        constant, var_x, var_y, var_r,
        add, sub, mul, div, pow, neg,
        call1, call2, call3
    };
    Op op;
    double value = 0.0;
    double (*f1)(double) = nullptr;
    double (*f2)(double, double) = nullptr;
    NodePtr a, b, c;
};

double eval(const Node& n, double x, double y) {
    switch (n.op) {
        case Node::Op::constant: return n.value;
        case Node::Op::var_x: return x;
        case Node::Op::var_y: return y;
        case Node::Op::var_r: return std::hypot(x, y);
        case Node::Op::add: return eval(*n.a, x, y) + eval(*n.b, x, y);
        case Node::Op::sub: return eval(*n.a, x, y) - eval(*n.b, x, y);
        case Node::Op::mul: return eval(*n.a, x, y) * eval(*n.b, x, y);
        case Node::Op::div: return eval(*n.a, x, y) / eval(*n.b, x, y);
        case Node::Op::pow: return std::pow(eval(*n.a, x, y), eval(*n.b, x, y));
        case Node::Op::neg: return -eval(*n.a, x, y);
        case Node::Op::call1: return n.f1(eval(*n.a, x, y));
        case Node::Op::call2: return n.f2(eval(*n.a, x, y), eval(*n.b, x, y));
        case Node::Op::call3: {
            const double v = eval(*n.a, x, y);
            const double lo = eval(*n.b, x, y);
            const double hi = eval(*n.c, x, y);
            return std::min(std::max(v, lo), hi);
        }
    }
    return 0.0;
}

NodePtr leaf(Node::Op op, double v = 0.0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = v;
    return n;
}

NodePtr binary(Node::Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return e;
    }

private:
    NodePtr expression() {
        NodePtr e = term();
        for (;;) {
            skip_ws();
            if (consume('+')) e = binary(Node::Op::add, e, term());
            else if (consume('-')) e = binary(Node::Op::sub, e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            skip_ws();
            if (consume('*')) e = binary(Node::Op::mul, e, factor());
            else if (consume('/')) e = binary(Node::Op::div, e, factor());
            else return e;
        }
    }

    // unary signs bind looser than '^': -x^2 parses as -(x^2)
    NodePtr factor() {
        skip_ws();
        if (consume('-')) {
            auto n = std::make_shared<Node>();
            n->op = Node::Op::neg;
            n->a = factor();
            return n;
        }
        consume('+');
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        skip_ws();
        if (consume('^')) return binary(Node::Op::pow, base, factor());  // right assoc
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char ch = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') return identifier();
        if (consume('(')) {
            NodePtr e = expression();
            expect(')');
            return e;
        }
        fail("unexpected character");
        return nullptr;
    }

    NodePtr number() {
        size_t used = 0;
        double v;
        try {
            v = std::stod(text_.substr(pos_), &used);
        } catch (const std::exception&) {
            fail("bad numeric literal");
        }
        pos_ += used;
        return leaf(Node::Op::constant, v);
    }

    NodePtr identifier() {
        const size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name = text_.substr(start, pos_ - start);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') return call(name);

        if (name == "x") return leaf(Node::Op::var_x);
        if (name == "y") return leaf(Node::Op::var_y);
        if (name == "t") return leaf(Node::Op::var_x);
        if (name == "r") return leaf(Node::Op::var_r);
        if (name == "pi") return leaf(Node::Op::constant, M_PI);
        if (name == "e") return leaf(Node::Op::constant, M_E);
        fail("unknown identifier '" + name + "'");
        return nullptr;
    }

    NodePtr call(const std::string& name) {
        expect('(');
        std::vector<NodePtr> args;
        skip_ws();
        if (!consume(')')) {
            args.push_back(expression());
            skip_ws();
            while (consume(',')) {
                args.push_back(expression());
                skip_ws();
            }
            expect(')');
        }
        auto f1 = [&](double (*fn)(double)) {
            if (args.size() != 1) fail(name + " takes one argument");
            auto n = std::make_shared<Node>();
            n->op = Node::Op::call1;
            n->f1 = fn;
            n->a = args[0];
            return NodePtr(n);
        };
        auto f2 = [&](double (*fn)(double, double)) {
            if (args.size() != 2) fail(name + " takes two arguments");
            auto n = std::make_shared<Node>();
            n->op = Node::Op::call2;
            n->f2 = fn;
            n->a = args[0];
            n->b = args[1];
            return NodePtr(n);
        };
        if (name == "sin") return f1([](double v) { return std::sin(v); });
        if (name == "cos") return f1([](double v) { return std::cos(v); });
        if (name == "tan") return f1([](double v) { return std::tan(v); });
        if (name == "exp") return f1([](double v) { return std::exp(v); });
        if (name == "log") return f1([](double v) { return std::log(v); });
        if (name == "sqrt") return f1([](double v) { return std::sqrt(v); });
        if (name == "abs") return f1([](double v) { return std::abs(v); });
        if (name == "tanh") return f1([](double v) { return std::tanh(v); });
        if (name == "floor") return f1([](double v) { return std::floor(v); });
        if (name == "pow") return f2([](double u, double v) { return std::pow(u, v); });
        if (name == "min") return f2([](double u, double v) { return std::min(u, v); });
        if (name == "max") return f2([](double u, double v) { return std::max(u, v); });
        if (name == "clamp") {
            if (args.size() != 3) fail("clamp takes three arguments");
            auto n = std::make_shared<Node>();
            n->op = Node::Op::call3;
            n->a = args[0];
            n->b = args[1];
            n->c = args[2];
            return NodePtr(n);
        }
        fail("unknown function '" + name + "'");
        return nullptr;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("expression error at offset " + std::to_string(pos_) +
                                    ": " + why);
    }

    const std::string& text_;
    size_t pos_ = 0;
};

} // namespace

std::function<double(double, double)> compile_expression(const std::string& text) {
    Parser p(text);
    NodePtr root = p.parse();
    return [root](double x, double y) { return eval(*root, x, y); };
}

} // namespace sconv
