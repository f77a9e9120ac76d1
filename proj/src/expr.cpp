#include "fracwave/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace fracwave::cas {

namespace {

Expr make(Kind kind) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    return n;
}

bool is_const(const Expr& e, double v) {
    return e->kind == Kind::Constant && e->value == v;
}

} // namespace

Expr constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = v;
    return n;
}

Expr atom(int id) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->atom = id;
    return n;
}

Expr sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    double c = 0.0;
    for (auto& t : terms) {
        if (t->kind == Kind::Constant) {
            c += t->value;
        } else if (t->kind == Kind::Sum) {
            for (const auto& ch : t->children) {
                if (ch->kind == Kind::Constant)
                    c += ch->value;
                else
                    flat.push_back(ch);
            }
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (c != 0.0) flat.push_back(constant(c));
    if (flat.empty()) return constant(0.0);
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->children = std::move(flat);
    return n;
}

Expr product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    double c = 1.0;
    for (auto& f : factors) {
        if (f->kind == Kind::Constant) {
            c *= f->value;
        } else if (f->kind == Kind::Product) {
            for (const auto& ch : f->children) {
                if (ch->kind == Kind::Constant)
                    c *= ch->value;
                else
                    flat.push_back(ch);
            }
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (c == 0.0) return constant(0.0);
    if (c != 1.0) flat.insert(flat.begin(), constant(c));
    if (flat.empty()) return constant(1.0);
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->children = std::move(flat);
    return n;
}

Expr power(Expr base, int n) {
    if (n == 1) return base;
    if (n == 0) return constant(1.0);
    if (base->kind == Kind::Constant) return constant(std::pow(base->value, n));
    if (base->kind == Kind::Power) {
        const int combined = base->exponent * n;
        return power(base->children[0], combined);
    }
    auto node = make(Kind::Power);
    auto mut = std::const_pointer_cast<Node>(node);
    mut->exponent = n;
    mut->children.push_back(std::move(base));
    return node;
}

double eval(const Expr& e, std::span<const double> atoms) {
    switch (e->kind) {
        case Kind::Constant:
            return e->value;
        case Kind::Atom:
            return e->atom < static_cast<int>(atoms.size()) ? atoms[e->atom] : 0.0;
        case Kind::Sum: {
            double acc = 0.0;
            for (const auto& ch : e->children) acc += eval(ch, atoms);
            return acc;
        }
        case Kind::Product: {
            double acc = 1.0;
            for (const auto& ch : e->children) acc *= eval(ch, atoms);
            return acc;
        }
        case Kind::Power: {
            const double b = eval(e->children[0], atoms);
            const int n = e->exponent;
            return n > 0 ? std::pow(b, n) : 1.0 / std::pow(b, -n);
        }
    }
    return 0.0;
}

namespace {

template <typename AtomRule>
Expr differentiate(const Expr& e, AtomRule&& atom_rule) {
    switch (e->kind) {
        case Kind::Constant:
            return constant(0.0);
        case Kind::Atom:
            return atom_rule(e->atom);
        case Kind::Sum: {
            std::vector<Expr> terms;
            terms.reserve(e->children.size());
            for (const auto& ch : e->children) terms.push_back(differentiate(ch, atom_rule));
            return sum(std::move(terms));
        }
        case Kind::Product: {
            // Leibniz rule.
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                std::vector<Expr> factors;
                for (std::size_t j = 0; j < e->children.size(); ++j)
                    factors.push_back(j == i ? differentiate(e->children[j], atom_rule)
                                             : e->children[j]);
                terms.push_back(product(std::move(factors)));
            }
            return sum(std::move(terms));
        }
        case Kind::Power: {
            const Expr& base = e->children[0];
            const int n = e->exponent;
            return product({constant(static_cast<double>(n)), power(base, n - 1),
                            differentiate(base, atom_rule)});
        }
    }
    return constant(0.0);
}

} // namespace

Expr diff_atom(const Expr& e, int id) {
    return differentiate(e, [id](int a) { return constant(a == id ? 1.0 : 0.0); });
}

Expr diff_time(const Expr& e, double rho0, double c0) {
    const double inv_rho = 1.0 / rho0;
    const double rho_c2 = rho0 * c0 * c0;
    return differentiate(e, [=](int a) -> Expr {
        const int j = a / 2;
        if (a % 2 == 0) return scale(inv_rho, atom(atom_sigma(j + 1)));
        return scale(rho_c2, atom(atom_v(j + 1)));
    });
}

int max_atom(const Expr& e) {
    switch (e->kind) {
        case Kind::Constant:
            return -1;
        case Kind::Atom:
            return e->atom;
        default: {
            int best = -1;
            for (const auto& ch : e->children) best = std::max(best, max_atom(ch));
            return best;
        }
    }
}

namespace {

void print(const Expr& e, std::string& out) {
    char buf[40];
    switch (e->kind) {
        case Kind::Constant:
            std::snprintf(buf, sizeof buf, "%.17g", e->value);
            out += buf;
            return;
        case Kind::Atom:
            std::snprintf(buf, sizeof buf, "(%s %d)", e->atom % 2 == 0 ? "v" : "s", e->atom / 2);
            out += buf;
            return;
        case Kind::Sum:
        case Kind::Product:
            out += e->kind == Kind::Sum ? "(+" : "(*";
            for (const auto& ch : e->children) {
                out += ' ';
                print(ch, out);
            }
            out += ')';
            return;
        case Kind::Power:
            std::snprintf(buf, sizeof buf, "(^ ");
            out += buf;
            print(e->children[0], out);
            std::snprintf(buf, sizeof buf, " %d)", e->exponent);
            out += buf;
            return;
    }
}

} // namespace

std::string to_prefix(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

} // namespace fracwave::cas
