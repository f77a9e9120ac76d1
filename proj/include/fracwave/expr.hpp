#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fracwave::cas {

// Atoms are the one-sided traces at the interface:
//   atom 2j   = d^j v / dx^j (alpha^-)
//   atom 2j+1 = d^j sigma / dx^j (alpha^-)
inline int atom_v(int j) { return 2 * j; }
inline int atom_sigma(int j) { return 2 * j + 1; }

enum class Kind { Constant, Atom, Sum, Product, Power };

class Node;
using Expr = std::shared_ptr<const Node>;

class Node {
public:
    Kind kind;
    double value = 0.0;           // Constant
    int atom = -1;                // Atom
    int exponent = 1;             // Power (nonzero; negative = reciprocal)
    std::vector<Expr> children;   // Sum, Product, Power (single child)
};

// Smart constructors: flatten sums/products and fold constants, nothing more.
Expr constant(double v);
Expr atom(int id);
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr power(Expr base, int n);

inline Expr add(Expr a, Expr b) { return sum({std::move(a), std::move(b)}); }
inline Expr mul(Expr a, Expr b) { return product({std::move(a), std::move(b)}); }
inline Expr scale(double c, Expr e) { return product({constant(c), std::move(e)}); }

/// Evaluate with atoms[id] supplying every atom value; ids past the span are 0.
double eval(const Expr& e, std::span<const double> atoms);

/// Symbolic partial derivative with respect to one atom.
Expr diff_atom(const Expr& e, int id);

/// Time derivative under the substitution rules of the left-medium PDE:
///   d/dt (atom_v(j))     = (1/rho0) * atom_sigma(j+1)
///   d/dt (atom_sigma(j)) = rho0*c0^2 * atom_v(j+1)
Expr diff_time(const Expr& e, double rho0, double c0);

/// Highest atom id appearing in the expression, -1 if none.
int max_atom(const Expr& e);

/// Parenthesized prefix notation, e.g. (+ 2 (* (v 0) (^ (s 1) -2))).
/// Atoms print as (v j) and (s j); constants as %.17g numbers.
std::string to_prefix(const Expr& e);

} // namespace fracwave::cas
