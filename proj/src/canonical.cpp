#include "ivpcert/canonical.hpp"

#include <algorithm>

namespace ivpcert {

namespace {

void lin_walk(const Expr &e, const Rational &mult, LinearArg &out,
              const CanonContext &ctx)
{
    switch (e->tag) {
    case ExprNode::Tag::Number:
        if (!e->value.is_real())
            throw CanonError("atom argument must be real");
        out.rat += mult * e->value.re;
        return;
    case ExprNode::Tag::Symbol:
        if (e->name == "pi")
            out.pi_coeff += mult;
        else if (e->name == ctx.ode_var)
            out.var_coeff += mult;
        else {
            for (auto &s : out.shifts)
                if (s.first == e->name) {
                    s.second += mult;
                    return;
                }
            out.shifts.emplace_back(e->name, mult);
        }
        return;
    case ExprNode::Tag::Sum:
        for (auto &k : e->kids)
            lin_walk(k, mult, out, ctx);
        return;
    case ExprNode::Tag::Product: {
        Rational scalar = mult;
        const Expr *nonconst = nullptr;
        for (auto &k : e->kids) {
            if (is_number(k)) {
                if (!k->value.is_real())
                    throw CanonError("atom argument must be real");
                scalar *= k->value.re;
            } else if (!nonconst) {
                nonconst = &k;
            } else {
                throw CanonError(
                    "atom argument is not linear in the variable");
            }
        }
        if (nonconst)
            lin_walk(*nonconst, scalar, out, ctx);
        else
            out.rat += scalar;
        return;
    }
    default:
        // Constant subexpressions (e.g. (1/2)^2) still fold.
        try {
            GaussianRational v = eval_const(e);
            if (!v.is_real())
                throw CanonError("atom argument must be real");
            out.rat += mult * v.re;
            return;
        } catch (const std::domain_error &) {
            throw CanonError("atom argument is not linear in the variable");
        }
    }
}

void normalize_shifts(LinearArg &a)
{
    std::sort(a.shifts.begin(), a.shifts.end(),
              [](auto &x, auto &y) { return x.first < y.first; });
    a.shifts.erase(std::remove_if(a.shifts.begin(), a.shifts.end(),
                                  [](auto &s) { return s.second.is_zero(); }),
                   a.shifts.end());
}

GaussianRational i_power(long k)
{
    switch (((k % 4) + 4) % 4) {
    case 0:
        return GaussianRational(1);
    case 1:
        return GaussianRational::unit_i();
    case 2:
        return GaussianRational(-1);
    default:
        return -GaussianRational::unit_i();
    }
}

// q * D must be an integer once the context is built; anything else means
// the frequency does not divide the common base denominator.
long scaled_exponent(const Rational &q, const mpz_class &den,
                     const char *what)
{
    Rational scaled = q * Rational(den);
    if (!scaled.is_integer())
        throw CanonError(std::string("indivisible frequency in ") + what);
    return scaled.to_long();
}

} // namespace

LinearArg linearize_arg(const Expr &arg, const CanonContext &ctx)
{
    LinearArg out;
    lin_walk(arg, Rational(1), out, ctx);
    normalize_shifts(out);
    return out;
}

CanonContext make_context(const std::vector<Expr> &exprs,
                          const std::string &ode_var, bool include_trig)
{
    CanonContext ctx;
    ctx.ode_var = ode_var;
    for (auto &e : exprs) {
        if (!e)
            continue;
        for_each_node(e, [&](const Expr &n) {
            if (n->tag != ExprNode::Tag::Atom)
                return;
            if (n->atom_kind != AtomKind::ExpI && !include_trig)
                return;
            LinearArg a = linearize_arg(n->kids[0], ctx);
            ctx.exp_base_den = lcm(ctx.exp_base_den, a.var_coeff.denominator());
            ctx.exp_rat_den = lcm(ctx.exp_rat_den, a.rat.denominator());
            ctx.exp_pi_den = lcm(ctx.exp_pi_den, a.pi_coeff.denominator());
            for (auto &[name, w] : a.shifts) {
                auto it = ctx.exp_const_den.find(name);
                mpz_class cur = it == ctx.exp_const_den.end() ? mpz_class(1)
                                                              : it->second;
                ctx.exp_const_den[name] = lcm(cur, w.denominator());
            }
        });
    }
    return ctx;
}

CanonicalRF CanonicalRF::make(MultiPoly n, MultiPoly d)
{
    if (d.is_zero())
        throw CanonError("division by the zero rational function");
    if (n.is_zero())
        return zero();
    if (d.is_constant()) {
        return {n.scaled(d.constant_value().inv()),
                MultiPoly::constant(GaussianRational(1))};
    }
    if (auto q = divide_exact(n, d))
        return {std::move(*q), MultiPoly::constant(GaussianRational(1))};
    MultiPoly g = poly_gcd(n, d);
    if (!g.is_constant()) {
        n = *divide_exact(n, g);
        d = *divide_exact(d, g);
    }
    if (d.is_constant())
        return {n.scaled(d.constant_value().inv()),
                MultiPoly::constant(GaussianRational(1))};
    GaussianRational lc = d.leading_coeff();
    return {n.scaled(lc.inv()), d.scaled(lc.inv())};
}

CanonicalRF CanonicalRF::operator+(const CanonicalRF &o) const
{
    if (is_zero())
        return o;
    if (o.is_zero())
        return *this;
    if (den == o.den)
        return make(num + o.num, den);
    return make(num * o.den + o.num * den, den * o.den);
}

CanonicalRF CanonicalRF::operator-(const CanonicalRF &o) const
{
    return *this + (-o);
}

CanonicalRF CanonicalRF::operator*(const CanonicalRF &o) const
{
    if (is_zero() || o.is_zero())
        return zero();
    // Cross-cancel before multiplying to keep intermediate degrees down.
    MultiPoly a = num, b = den, c = o.num, d = o.den;
    MultiPoly g1 = poly_gcd(a, d);
    if (!g1.is_constant()) {
        a = *divide_exact(a, g1);
        d = *divide_exact(d, g1);
    }
    MultiPoly g2 = poly_gcd(c, b);
    if (!g2.is_constant()) {
        c = *divide_exact(c, g2);
        b = *divide_exact(b, g2);
    }
    return make(a * c, b * d);
}

CanonicalRF CanonicalRF::operator/(const CanonicalRF &o) const
{
    if (o.is_zero())
        throw CanonError("division by the zero rational function");
    return *this * CanonicalRF{o.den, o.num};
}

CanonicalRF CanonicalRF::pow(long e) const
{
    if (e == 0)
        return constant(GaussianRational(1));
    if (is_zero()) {
        if (e < 0)
            throw CanonError("negative power of the zero rational function");
        return zero();
    }
    unsigned long a = static_cast<unsigned long>(std::labs(e));
    // num/den stay coprime under powers; only the monic scale needs fixing.
    MultiPoly np = num.pow(static_cast<long>(a));
    MultiPoly dp = den.pow(static_cast<long>(a));
    if (e < 0)
        std::swap(np, dp);
    if (dp.is_constant())
        return {np.scaled(dp.constant_value().inv()),
                MultiPoly::constant(GaussianRational(1))};
    GaussianRational lc = dp.leading_coeff();
    return {np.scaled(lc.inv()), dp.scaled(lc.inv())};
}

namespace {

CanonicalRF trig_atom_rf(AtomKind kind, LinearArg arg)
{
    // Exact constant folding at half-integer multiples of pi.
    if (arg.var_coeff.is_zero() && arg.rat.is_zero() && arg.shifts.empty() &&
        arg.pi_coeff.is_half_integer()) {
        Rational two_w = arg.pi_coeff * Rational(2);
        long k = two_w.to_long(); // angle = k*pi/2
        bool odd = (((k % 2) + 2) % 2) == 1;
        long m = odd ? (k - 1) / 2 : k / 2;
        long sign = (((m % 2) + 2) % 2) == 0 ? 1 : -1;
        if (kind == AtomKind::Sin)
            return CanonicalRF::constant(GaussianRational(odd ? sign : 0));
        return CanonicalRF::constant(GaussianRational(odd ? 0 : sign));
    }
    GaussianRational scale(1);
    if (arg.lead_sign() < 0) {
        arg = arg.negated();
        if (kind == AtomKind::Sin)
            scale = GaussianRational(-1);
    }
    return CanonicalRF::from_poly(
        MultiPoly::generator(Generator::trig(kind == AtomKind::Sin, arg))
            .scaled(scale));
}

CanonicalRF expi_atom_rf(const LinearArg &arg, const CanonContext &ctx)
{
    CanonicalRF acc = CanonicalRF::constant(GaussianRational(1));
    auto mul_gen_power = [&acc](Generator g, long e) {
        if (e == 0)
            return;
        acc = acc * CanonicalRF::from_poly(MultiPoly::generator(g)).pow(e);
    };
    if (!arg.var_coeff.is_zero())
        mul_gen_power(Generator::exp_base(),
                      scaled_exponent(arg.var_coeff, ctx.exp_base_den,
                                      "exp atom variable part"));
    if (!arg.rat.is_zero())
        mul_gen_power(Generator::exp_rat_base(),
                      scaled_exponent(arg.rat, ctx.exp_rat_den,
                                      "exp atom rational part"));
    if (!arg.pi_coeff.is_zero()) {
        if (arg.pi_coeff.is_half_integer()) {
            acc = acc * CanonicalRF::constant(
                            i_power((arg.pi_coeff * Rational(2)).to_long()));
        } else {
            mul_gen_power(Generator::exp_pi_base(),
                          scaled_exponent(arg.pi_coeff, ctx.exp_pi_den,
                                          "exp atom pi part"));
        }
    }
    for (auto &[name, w] : arg.shifts)
        mul_gen_power(Generator::exp_const(name),
                      scaled_exponent(w, ctx.const_den(name),
                                      "exp atom constant shift"));
    return acc;
}

CanonicalRF canon_rec(const Expr &e, const CanonContext &ctx)
{
    switch (e->tag) {
    case ExprNode::Tag::Number:
        return CanonicalRF::constant(e->value);
    case ExprNode::Tag::Symbol:
        if (e->name == "pi")
            throw CanonError("pi may only appear inside atom arguments");
        if (e->name == ctx.ode_var)
            return CanonicalRF::from_poly(
                MultiPoly::generator(Generator::ode_var(e->name)));
        return CanonicalRF::from_poly(
            MultiPoly::generator(Generator::named_var(e->name)));
    case ExprNode::Tag::Atom: {
        LinearArg arg = linearize_arg(e->kids[0], ctx);
        if (e->atom_kind == AtomKind::ExpI)
            return expi_atom_rf(arg, ctx);
        return trig_atom_rf(e->atom_kind, std::move(arg));
    }
    case ExprNode::Tag::Sum: {
        CanonicalRF acc = CanonicalRF::zero();
        for (auto &k : e->kids)
            acc = acc + canon_rec(k, ctx);
        return acc;
    }
    case ExprNode::Tag::Product: {
        CanonicalRF acc = CanonicalRF::constant(GaussianRational(1));
        for (auto &k : e->kids) {
            acc = acc * canon_rec(k, ctx);
            if (acc.is_zero())
                return acc;
        }
        return acc;
    }
    case ExprNode::Tag::Power: {
        const Expr &ex = e->kids[1];
        if (!is_number(ex) || !ex->value.is_real() ||
            !ex->value.re.is_integer())
            throw CanonError("unresolved power exponent");
        return canon_rec(e->kids[0], ctx).pow(ex->value.re.to_long());
    }
    default:
        throw CanonError("expression must be expanded before canonicalization");
    }
}

} // namespace

CanonicalRF canonicalize(const Expr &e, const CanonContext &ctx)
{
    return canon_rec(e, ctx);
}

CanonicalRF canonicalize(const Expr &e, const std::string &ode_var)
{
    return canonicalize(e, make_context({e}, ode_var, false));
}

namespace {

// Derivative of a single generator, as a polynomial.
MultiPoly generator_derivative(const Generator &g, const CanonContext &ctx)
{
    switch (g.kind) {
    case Generator::Kind::OdeVar:
        return MultiPoly::constant(GaussianRational(1));
    case Generator::Kind::SinAtom:
        return MultiPoly::generator(Generator::trig(false, g.arg))
            .scaled(GaussianRational(g.arg.var_coeff));
    case Generator::Kind::CosAtom:
        return MultiPoly::generator(Generator::trig(true, g.arg))
            .scaled(GaussianRational(-g.arg.var_coeff));
    case Generator::Kind::ExpBase: {
        Rational inv_den(mpz_class(1), ctx.exp_base_den);
        return MultiPoly::generator(Generator::exp_base())
            .scaled(GaussianRational(Rational(0), inv_den));
    }
    default:
        return MultiPoly();
    }
}

} // namespace

MultiPoly poly_derivative(const MultiPoly &p, const CanonContext &ctx)
{
    MultiPoly out;
    for (auto &[m, c] : p.terms()) {
        for (size_t i = 0; i < m.factors.size(); ++i) {
            const auto &[g, e] = m.factors[i];
            MultiPoly dg = generator_derivative(g, ctx);
            if (dg.is_zero())
                continue;
            // c * e * g^(e-1) * dg * (other factors)
            Monomial rest;
            for (size_t j = 0; j < m.factors.size(); ++j) {
                if (j == i) {
                    if (e != 1)
                        rest = rest.mul(Monomial::of(g, e - 1));
                } else {
                    rest = rest.mul(
                        Monomial::of(m.factors[j].first, m.factors[j].second));
                }
            }
            MultiPoly term = dg.mono_scaled(rest).scaled(
                c * GaussianRational(Rational(e)));
            out = out + term;
        }
    }
    return out;
}

CanonicalRF rf_derivative(const CanonicalRF &f, const CanonContext &ctx)
{
    MultiPoly dn = poly_derivative(f.num, ctx);
    if (f.den.is_constant())
        return CanonicalRF::make(dn, f.den);
    MultiPoly dd = poly_derivative(f.den, ctx);
    return CanonicalRF::make(dn * f.den - f.num * dd, f.den * f.den);
}

namespace {

CanonicalRF eval_generator(const Generator &g, const PiLin &t0,
                           const CanonContext &ctx)
{
    switch (g.kind) {
    case Generator::Kind::OdeVar:
        if (!t0.pi_coeff.is_zero())
            throw UnsupportedEvaluation(
                "polynomial in the variable at an irrational initial point");
        return CanonicalRF::constant(GaussianRational(t0.rat));
    case Generator::Kind::NamedVar:
    case Generator::Kind::ExpConst:
    case Generator::Kind::ExpRatBase:
    case Generator::Kind::ExpPiBase:
        return CanonicalRF::from_poly(MultiPoly::generator(g));
    case Generator::Kind::SinAtom:
    case Generator::Kind::CosAtom: {
        LinearArg a = g.arg;
        a.rat += a.var_coeff * t0.rat;
        a.pi_coeff += a.var_coeff * t0.pi_coeff;
        a.var_coeff = Rational(0);
        bool is_sin = g.kind == Generator::Kind::SinAtom;
        if (!a.rat.is_zero())
            throw UnsupportedEvaluation(
                "no exact value for a trigonometric atom at a nonzero "
                "rational angle");
        if (!a.pi_coeff.is_half_integer())
            throw UnsupportedEvaluation(
                "no exact value at a non half-integer multiple of pi");
        long k = (a.pi_coeff * Rational(2)).to_long(); // angle = k*pi/2 + S
        bool odd = (((k % 2) + 2) % 2) == 1;
        long m = odd ? (k - 1) / 2 : k / 2;
        long sign = (((m % 2) + 2) % 2) == 0 ? 1 : -1;
        LinearArg shift = a;
        shift.pi_coeff = Rational(0);
        if (shift.is_zero()) {
            long v;
            if (is_sin)
                v = odd ? sign : 0;
            else
                v = odd ? 0 : sign;
            return CanonicalRF::constant(GaussianRational(v));
        }
        // sin(k*pi/2 + S), cos(k*pi/2 + S) with symbolic S fold onto the
        // constant atoms sin(S), cos(S).
        AtomKind folded;
        long factor = sign;
        if (is_sin) {
            folded = odd ? AtomKind::Cos : AtomKind::Sin;
        } else {
            folded = odd ? AtomKind::Sin : AtomKind::Cos;
            if (odd)
                factor = -sign;
        }
        return trig_atom_rf(folded, shift) *
               CanonicalRF::constant(GaussianRational(factor));
    }
    case Generator::Kind::ExpBase: {
        if (!t0.rat.is_zero())
            throw UnsupportedEvaluation(
                "no exact value for the exponential base at a nonzero "
                "rational point");
        Rational w = t0.pi_coeff * Rational(mpz_class(1), ctx.exp_base_den);
        if (!w.is_half_integer())
            throw UnsupportedEvaluation(
                "no exact value at a non half-integer multiple of pi");
        return CanonicalRF::constant(i_power((w * Rational(2)).to_long()));
    }
    }
    throw std::logic_error("eval_generator: bad kind");
}

CanonicalRF eval_poly_at(const MultiPoly &p, const PiLin &t0,
                         const CanonContext &ctx)
{
    CanonicalRF acc = CanonicalRF::zero();
    for (auto &[m, c] : p.terms()) {
        CanonicalRF term = CanonicalRF::constant(c);
        for (auto &[g, e] : m.factors)
            term = term * eval_generator(g, t0, ctx).pow(e);
        acc = acc + term;
    }
    return acc;
}

} // namespace

CanonicalRF eval_at(const CanonicalRF &f, const PiLin &t0,
                    const CanonContext &ctx)
{
    CanonicalRF den_v = eval_poly_at(f.den, t0, ctx);
    if (den_v.is_zero())
        throw SingularEvaluation("denominator vanishes at the initial point");
    CanonicalRF num_v = eval_poly_at(f.num, t0, ctx);
    return num_v / den_v;
}

std::pair<CanonicalRF, CanonicalRF> split_real_imag(const CanonicalRF &f)
{
    for (auto kind :
         {Generator::Kind::ExpBase, Generator::Kind::ExpConst,
          Generator::Kind::ExpRatBase, Generator::Kind::ExpPiBase}) {
        if (f.num.contains_generator_kind(kind) ||
            f.den.contains_generator_kind(kind))
            throw CanonError(
                "split requires an exponential-free form; rewrite first");
    }
    // f = N / D with real generators: multiply through by conj(D).
    MultiPoly d_real = f.den * f.den.conj();
    MultiPoly n = f.num * f.den.conj();
    MultiPoly n_re, n_im;
    for (auto &[m, c] : n.terms()) {
        if (!c.re.is_zero())
            n_re.add_term(m, GaussianRational(c.re));
        if (!c.im.is_zero())
            n_im.add_term(m, GaussianRational(c.im));
    }
    return {CanonicalRF::make(n_re, d_real), CanonicalRF::make(n_im, d_real)};
}

Expr euler_rewrite(const Expr &e, EulerDirection dir)
{
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    for (auto &k : e->kids)
        kids.push_back(euler_rewrite(k, dir));
    if (e->tag == ExprNode::Tag::Atom) {
        const Expr &arg = kids[0];
        if (dir == EulerDirection::ExpToTrig &&
            e->atom_kind == AtomKind::ExpI)
            return add(cos_(arg), mul(imag_unit(), sin_(arg)));
        if (dir == EulerDirection::TrigToExp &&
            e->atom_kind == AtomKind::Sin) {
            // sin u = (E - 1/E) / (2i) = -i/2 * (expi(u) - expi(-u))
            return mul(num(GaussianRational(Rational(0), Rational(-1, 2))),
                       sub(expi(arg), expi(neg(arg))));
        }
        if (dir == EulerDirection::TrigToExp &&
            e->atom_kind == AtomKind::Cos) {
            return mul(num(Rational(1, 2)),
                       add(expi(arg), expi(neg(arg))));
        }
        return atom(e->atom_kind, arg);
    }
    switch (e->tag) {
    case ExprNode::Tag::Number:
    case ExprNode::Tag::Symbol:
        return e;
    case ExprNode::Tag::Sum:
        return sum(std::move(kids));
    case ExprNode::Tag::Product:
        return product(std::move(kids));
    case ExprNode::Tag::Power:
        return power(kids[0], kids[1]);
    case ExprNode::Tag::FiniteSum:
        return finite_sum(e->name, kids[0], kids[1], kids[2]);
    case ExprNode::Tag::Binom:
        return binom_node(kids[0], kids[1]);
    default:
        throw std::logic_error("euler_rewrite: bad tag");
    }
}

} // namespace ivpcert
