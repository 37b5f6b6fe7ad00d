#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crparallax/scalar.hpp"

namespace crparallax {

/// Byte range [begin, end) in the parsed text plus the 1-based position of begin.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    int line = 1;
    int column = 1;
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class Variable { z1, z2, v };
enum class BinaryOp { Add, Sub, Mul, Div };

struct VarNode {
    Variable var;
};
struct ConjNode {
    ExprPtr child;
};
struct ConstNode {
    GaussianRational value;
};
struct BinaryNode {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct NegNode {
    ExprPtr child;
};
struct PowNode {
    ExprPtr child;
    unsigned exponent;
};

struct ExprNode {
    std::variant<VarNode, ConjNode, ConstNode, BinaryNode, NegNode, PowNode> node;
    SourceSpan span;
};

/// Syntax error with the position of the offending token and what would have been accepted there.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::string found, std::vector<std::string> expected);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& found() const noexcept { return found_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    int line_;
    int column_;
    std::string found_;
    std::vector<std::string> expected_;
};

inline constexpr unsigned kMaxExponent = 64;

/// Parses a graphing-function expression.
///
/// Literals are integers only; a subtree whose operands are all literals is
/// folded into one Gaussian-rational constant, which makes `1/2` and
/// `(3 + 4*i)` plain constants without a separate NUMBER rule. re(e) and im(e)
/// are desugared into (e + conj e)/2 and (e - conj e)/(2i).
ExprPtr parse(std::string_view text);

/// Fully parenthesized rendering that parses back to a structurally equal tree.
std::string to_string(const ExprPtr& expr);

/// Structural equality, ignoring source spans.
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

/// Relabels z1 <-> z2 throughout the tree.
ExprPtr swap_z(const ExprPtr& expr);

/// Convenience constructors, used by the catalog and by tests.
namespace ast {
ExprPtr var(Variable v);
ExprPtr constant(GaussianRational value);
ExprPtr conj(ExprPtr child);
ExprPtr neg(ExprPtr child);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr pow(ExprPtr child, unsigned exponent);
} // namespace ast

} // namespace crparallax
