#include "ivpcert/printer.hpp"

#include <sstream>

namespace ivpcert {

namespace {

// Precedence levels: 0 sum, 1 product, 2 power-base/unary, 3 atom.
std::string render(const Expr &e, int parent_prec);

std::string render_number(const GaussianRational &v, int parent_prec)
{
    if (v.is_real()) {
        std::string s = v.re.str();
        if ((v.re.sign() < 0 || !v.re.is_integer()) && parent_prec >= 2)
            return "(" + s + ")";
        if (v.re.sign() < 0 && parent_prec >= 1)
            return s; // leading "-2*x" reparses via unary minus
        return s;
    }
    if (v.re.is_zero()) {
        if (v.im == Rational(1))
            return parent_prec >= 2 ? "(i)" : "i";
        if (v.im == Rational(-1))
            return parent_prec >= 1 ? "(-i)" : "-i";
        std::string s = v.im.str() + "*i";
        return parent_prec >= 1 ? "(" + s + ")" : s;
    }
    std::string s = v.str();
    return "(" + s + ")";
}

std::string render_sum(const Expr &e)
{
    std::string out;
    bool first = true;
    for (auto &t : e->kids) {
        // Pull a leading negative real constant out as " - ".
        Expr term = t;
        bool negative = false;
        if (is_number(t) && t->value.is_real() && t->value.re.sign() < 0) {
            negative = true;
            term = num(-t->value);
        } else if (t->tag == ExprNode::Tag::Product && is_number(t->kids[0]) &&
                   t->kids[0]->value.is_real() &&
                   t->kids[0]->value.re.sign() < 0) {
            std::vector<Expr> kids = t->kids;
            kids[0] = num(-kids[0]->value);
            negative = true;
            term = product(std::move(kids));
        }
        if (first) {
            out += negative ? "-" + render(term, 1) : render(term, 0);
            first = false;
        } else {
            out += negative ? " - " : " + ";
            out += render(term, 1);
        }
    }
    return out;
}

std::string render_product(const Expr &e)
{
    std::string out;
    bool printed = false;
    for (size_t idx = 0; idx < e->kids.size(); ++idx) {
        const Expr &f = e->kids[idx];
        // A leading -1 renders as a bare sign: -x*y.
        if (idx == 0 && e->kids.size() > 1 && is_number(f) &&
            f->value.is_real() && f->value.re == Rational(-1)) {
            out += "-";
            continue;
        }
        if (printed)
            out += "*";
        // Only the first factor may carry its own minus sign.
        out += render(f, printed ? 2 : 1);
        printed = true;
    }
    return out;
}

std::string render_exponent(const Expr &ex)
{
    if (is_number(ex) && ex->value.is_real() && ex->value.re.is_integer() &&
        ex->value.re.sign() >= 0)
        return ex->value.re.str();
    if (ex->tag == ExprNode::Tag::Symbol)
        return ex->name;
    return "(" + render(ex, 0) + ")";
}

std::string render(const Expr &e, int parent_prec)
{
    switch (e->tag) {
    case ExprNode::Tag::Number:
        return render_number(e->value, parent_prec);
    case ExprNode::Tag::Symbol:
        return e->name;
    case ExprNode::Tag::Atom: {
        const char *fn = e->atom_kind == AtomKind::Sin
                             ? "sin"
                             : (e->atom_kind == AtomKind::Cos ? "cos" : "expi");
        return std::string(fn) + "(" + render(e->kids[0], 0) + ")";
    }
    case ExprNode::Tag::Sum: {
        std::string s = render_sum(e);
        return parent_prec >= 1 ? "(" + s + ")" : s;
    }
    case ExprNode::Tag::Product: {
        std::string s = render_product(e);
        return parent_prec >= 2 ? "(" + s + ")" : s;
    }
    case ExprNode::Tag::Power: {
        const Expr &base = e->kids[0];
        bool base_simple = base->tag == ExprNode::Tag::Symbol ||
                           base->tag == ExprNode::Tag::Atom;
        std::string b = base_simple ? render(base, 3)
                                    : "(" + render(base, 0) + ")";
        std::string s = b + "^" + render_exponent(e->kids[1]);
        return s;
    }
    case ExprNode::Tag::FiniteSum:
        return "sum(" + e->name + ", " + render(e->kids[0], 0) + ", " +
               render(e->kids[1], 0) + ", " + render(e->kids[2], 0) + ")";
    case ExprNode::Tag::Binom:
        return "binom(" + render(e->kids[0], 0) + ", " + render(e->kids[1], 0) +
               ")";
    }
    throw std::logic_error("print: bad tag");
}

} // namespace

std::string print_expr(const Expr &e) { return render(e, 0); }

std::string print_identity(const IdentityDecl &decl)
{
    std::ostringstream os;
    os << "identity " << decl.name << " {\n";
    os << "  var " << decl.symbols.ode_var << ";\n";
    for (auto &[p, v] : decl.symbols.int_params)
        os << "  param " << p << " = " << v << ";\n";
    if (!decl.symbols.const_syms.empty()) {
        os << "  const ";
        for (size_t i = 0; i < decl.symbols.const_syms.size(); ++i)
            os << (i ? ", " : "") << decl.symbols.const_syms[i];
        os << ";\n";
    }
    os << "  lhs: " << print_expr(decl.lhs) << ";\n";
    os << "  rhs: " << print_expr(decl.rhs) << ";\n";
    if (decl.mode != ProofMode::Split)
        os << "  mode: " << mode_name(decl.mode) << ";\n";
    if (decl.ivp) {
        const auto &ivp = *decl.ivp;
        os << "  ivp {\n";
        os << "    order: " << ivp.order << ";\n";
        os << "    coeff: ";
        for (size_t i = 0; i < ivp.coeffs.size(); ++i)
            os << (i ? ", " : "") << print_expr(ivp.coeffs[i]);
        os << ";\n";
        os << "    force: " << print_expr(ivp.force) << ";\n";
        os << "    at: " << ivp.t0.str() << ";\n";
        os << "    values: ";
        for (size_t i = 0; i < ivp.initial_values.size(); ++i)
            os << (i ? ", " : "") << print_expr(ivp.initial_values[i]);
        os << ";\n";
        os << "    interval: " << ivp.interval.str() << ";\n";
        os << "  }\n";
    }
    if (decl.split) {
        const auto &sp = *decl.split;
        os << "  split {\n";
        os << "    of: " << sp.base << ";\n";
        os << "    part: "
           << (sp.part == SplitSpec::Part::Real ? "real" : "imag") << ";\n";
        if (sp.clear_factor)
            os << "    clear: " << print_expr(sp.clear_factor) << ";\n";
        os << "    interval: " << sp.interval.str() << ";\n";
        os << "  }\n";
    }
    if (!decl.depends.empty()) {
        os << "  depends: [";
        for (size_t i = 0; i < decl.depends.size(); ++i)
            os << (i ? ", " : "") << decl.depends[i];
        os << "];\n";
    }
    if (!decl.comment.empty())
        os << "  comment: \"" << decl.comment << "\";\n";
    os << "}\n";
    return os.str();
}

} // namespace ivpcert
