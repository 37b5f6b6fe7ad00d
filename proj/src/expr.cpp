#include "crparallax/expr.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace crparallax {

ParseError::ParseError(int line, int column, std::string found, std::vector<std::string> expected)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "parse error at line " << line << ", column " << column << ": unexpected " << found;
          if (!expected.empty()) {
              os << "; expected one of:";
              for (const auto& e : expected) {
                  os << ' ' << e;
              }
          }
          return os.str();
      }()),
      line_(line), column_(column), found_(std::move(found)), expected_(std::move(expected))
{
}

namespace ast {

namespace {
ExprPtr make(decltype(ExprNode::node) node, SourceSpan span = {})
{
    return std::make_shared<const ExprNode>(ExprNode{std::move(node), span});
}
} // namespace

ExprPtr var(Variable v) { return make(VarNode{v}); }
ExprPtr constant(GaussianRational value) { return make(ConstNode{std::move(value)}); }
ExprPtr conj(ExprPtr child) { return make(ConjNode{std::move(child)}); }
ExprPtr neg(ExprPtr child) { return make(NegNode{std::move(child)}); }
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) { return make(BinaryNode{op, std::move(lhs), std::move(rhs)}); }
ExprPtr pow(ExprPtr child, unsigned exponent) { return make(PowNode{std::move(child), exponent}); }

} // namespace ast

namespace {

enum class Tok { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

std::string describe(const Token& t)
{
    if (t.kind == Tok::End) {
        return "end of input";
    }
    return "'" + t.text + "'";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            SourceSpan span{pos_, pos_, line_, column_};
            if (pos_ >= text_.size()) {
                out.push_back({Tok::End, "", span});
                return out;
            }
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    advance();
                }
                span.end = pos_;
                out.push_back({Tok::Int, std::string(text_.substr(start, pos_ - start)), span});
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                    advance();
                }
                span.end = pos_;
                out.push_back({Tok::Ident, std::string(text_.substr(start, pos_ - start)), span});
                continue;
            }
            Tok kind{};
            switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            default:
                throw ParseError(line_, column_, "character '" + std::string(1, c) + "'",
                                 {"INT", "z1", "z2", "v", "i", "conj", "re", "im", "(", "+", "-", "*", "/", "^", ")"});
            }
            advance();
            span.end = pos_;
            out.push_back({kind, std::string(1, c), span});
        }
    }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            advance();
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

const std::vector<std::string> kAtomStart{"z1", "z2", "v", "i", "INT", "conj", "re", "im", "("};

std::optional<GaussianRational> constant_of(const ExprPtr& e)
{
    if (const auto* c = std::get_if<ConstNode>(&e->node)) {
        return c->value;
    }
    return std::nullopt;
}

GaussianRational power(const GaussianRational& base, unsigned n)
{
    GaussianRational r(1);
    for (unsigned k = 0; k < n; ++k) {
        r *= base;
    }
    return r;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    ExprPtr run()
    {
        auto e = expr();
        if (peek().kind != Tok::End) {
            fail({"+", "-", "*", "/", "end of input"});
        }
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        const Token& t = peek();
        throw ParseError(t.span.line, t.span.column, describe(t), std::move(expected));
    }

    void expect(Tok kind, const char* what)
    {
        if (peek().kind != kind) {
            fail({what});
        }
        ++pos_;
    }

    static SourceSpan join(const SourceSpan& a, const SourceSpan& b) { return {a.begin, b.end, a.line, a.column}; }

    static ExprPtr node(decltype(ExprNode::node) n, SourceSpan span)
    {
        return std::make_shared<const ExprNode>(ExprNode{std::move(n), span});
    }

    static ExprPtr fold_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span)
    {
        auto a = constant_of(lhs);
        auto b = constant_of(rhs);
        if (a && b && !(op == BinaryOp::Div && b->is_zero())) {
            switch (op) {
            case BinaryOp::Add: return node(ConstNode{*a + *b}, span);
            case BinaryOp::Sub: return node(ConstNode{*a - *b}, span);
            case BinaryOp::Mul: return node(ConstNode{*a * *b}, span);
            case BinaryOp::Div: return node(ConstNode{*a / *b}, span);
            }
        }
        return node(BinaryNode{op, std::move(lhs), std::move(rhs)}, span);
    }

    ExprPtr expr()
    {
        auto lhs = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const auto op = take().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            auto rhs = term();
            auto span = join(lhs->span, rhs->span);
            lhs = fold_binary(op, std::move(lhs), std::move(rhs), span);
        }
        return lhs;
    }

    ExprPtr term()
    {
        auto lhs = factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const auto op = take().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
            auto rhs = factor();
            auto span = join(lhs->span, rhs->span);
            lhs = fold_binary(op, std::move(lhs), std::move(rhs), span);
        }
        return lhs;
    }

    ExprPtr factor()
    {
        if (peek().kind == Tok::Minus) {
            const SourceSpan start = take().span;
            auto child = factor();
            auto span = join(start, child->span);
            if (auto c = constant_of(child)) {
                return node(ConstNode{-*c}, span);
            }
            return node(NegNode{std::move(child)}, span);
        }
        auto base = atom();
        if (peek().kind != Tok::Caret) {
            return base;
        }
        ++pos_;
        if (peek().kind != Tok::Int) {
            fail({"INT"});
        }
        const Token& exp = peek();
        if (exp.text.size() > 3 || std::stoul(exp.text) > kMaxExponent) {
            throw ParseError(exp.span.line, exp.span.column, "exponent " + exp.text,
                             {"INT <= " + std::to_string(kMaxExponent)});
        }
        const unsigned n = static_cast<unsigned>(std::stoul(take().text));
        auto span = join(base->span, exp.span);
        if (auto c = constant_of(base)) {
            return node(ConstNode{power(*c, n)}, span);
        }
        return node(PowNode{std::move(base), n}, span);
    }

    ExprPtr call(const Token& name, int kind)
    {
        expect(Tok::LParen, "(");
        auto inner = expr();
        const SourceSpan close = peek().span;
        expect(Tok::RParen, ")");
        const SourceSpan span = join(name.span, close);
        auto conj = node(ConjNode{inner}, span);
        if (kind == 0) {
            return conj;
        }
        if (kind == 1) {
            auto sum = node(BinaryNode{BinaryOp::Add, inner, conj}, span);
            return node(BinaryNode{BinaryOp::Div, sum, node(ConstNode{GaussianRational(2)}, span)}, span);
        }
        auto diff = node(BinaryNode{BinaryOp::Sub, inner, conj}, span);
        return node(BinaryNode{BinaryOp::Div, diff, node(ConstNode{GaussianRational(0, 2)}, span)}, span);
    }

    ExprPtr atom()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Int: {
            ++pos_;
            return node(ConstNode{GaussianRational(mpq_class(mpz_class(t.text)))}, t.span);
        }
        case Tok::LParen: {
            ++pos_;
            auto inner = expr();
            expect(Tok::RParen, ")");
            return inner;
        }
        case Tok::Ident: {
            ++pos_;
            if (t.text == "z1") {
                return node(VarNode{Variable::z1}, t.span);
            }
            if (t.text == "z2") {
                return node(VarNode{Variable::z2}, t.span);
            }
            if (t.text == "v") {
                return node(VarNode{Variable::v}, t.span);
            }
            if (t.text == "i") {
                return node(ConstNode{GaussianRational::unit()}, t.span);
            }
            if (t.text == "conj") {
                return call(t, 0);
            }
            if (t.text == "re") {
                return call(t, 1);
            }
            if (t.text == "im") {
                return call(t, 2);
            }
            --pos_;
            throw ParseError(t.span.line, t.span.column, "identifier '" + t.text + "'", kAtomStart);
        }
        default:
            fail(kAtomStart);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string constant_text(const GaussianRational& q)
{
    auto rat = [](const mpq_class& r) { return r.get_str(); };
    if (q.is_real()) {
        return "(" + rat(q.real()) + ")";
    }
    if (sgn(q.real()) == 0) {
        return "(" + rat(q.imag()) + "*i)";
    }
    return "(" + rat(q.real()) + " + " + rat(q.imag()) + "*i)";
}

} // namespace

ExprPtr parse(std::string_view text)
{
    return Parser(Lexer(text).run()).run();
}

std::string to_string(const ExprPtr& expr)
{
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarNode>) {
                switch (n.var) {
                case Variable::z1: return "z1";
                case Variable::z2: return "z2";
                case Variable::v: return "v";
                }
                return "?";
            } else if constexpr (std::is_same_v<T, ConjNode>) {
                return "conj(" + to_string(n.child) + ")";
            } else if constexpr (std::is_same_v<T, ConstNode>) {
                return constant_text(n.value);
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                static constexpr const char* ops[] = {" + ", " - ", "*", "/"};
                return "(" + to_string(n.lhs) + ops[static_cast<int>(n.op)] + to_string(n.rhs) + ")";
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return "(-" + to_string(n.child) + ")";
            } else {
                return "(" + to_string(n.child) + ")^" + std::to_string(n.exponent);
            }
        },
        expr->node);
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b)
{
    if (a->node.index() != b->node.index()) {
        return false;
    }
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, VarNode>) {
                return x.var == y.var;
            } else if constexpr (std::is_same_v<T, ConstNode>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                return x.op == y.op && structurally_equal(x.lhs, y.lhs) && structurally_equal(x.rhs, y.rhs);
            } else if constexpr (std::is_same_v<T, PowNode>) {
                return x.exponent == y.exponent && structurally_equal(x.child, y.child);
            } else {
                return structurally_equal(x.child, y.child);
            }
        },
        a->node);
}

ExprPtr swap_z(const ExprPtr& expr)
{
    auto rebuilt = std::visit(
        [](const auto& n) -> decltype(ExprNode::node) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarNode>) {
                switch (n.var) {
                case Variable::z1: return VarNode{Variable::z2};
                case Variable::z2: return VarNode{Variable::z1};
                case Variable::v: return n;
                }
                return n;
            } else if constexpr (std::is_same_v<T, ConstNode>) {
                return n;
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                return BinaryNode{n.op, swap_z(n.lhs), swap_z(n.rhs)};
            } else if constexpr (std::is_same_v<T, PowNode>) {
                return PowNode{swap_z(n.child), n.exponent};
            } else {
                return T{swap_z(n.child)};
            }
        },
        expr->node);
    return std::make_shared<const ExprNode>(ExprNode{std::move(rebuilt), expr->span});
}

} // namespace crparallax
