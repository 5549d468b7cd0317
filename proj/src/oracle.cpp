#include "ivpcert/oracle.hpp"

#include <random>

namespace ivpcert {

namespace {

struct EvalState {
    const BigFloat &point;
    const ConstBindings &consts;
    mpfr_prec_t prec;
    long max_mag = -1000000000L;

    void track(const BigComplex &v)
    {
        max_mag = std::max({max_mag, v.re.exp2(), v.im.exp2()});
    }
    void pole_check(const BigComplex &v) const
    {
        BigFloat floor = BigFloat::pow2(-static_cast<long>(prec) / 2, 32);
        if (v.modulus() < floor)
            throw PoleError("denominator too close to zero at sample point");
    }
};

BigComplex eval_rec(const Expr &e, EvalState &st)
{
    switch (e->tag) {
    case ExprNode::Tag::Number: {
        BigComplex v = BigComplex::from_gaussian(e->value, st.prec);
        st.track(v);
        return v;
    }
    case ExprNode::Tag::Symbol: {
        BigFloat r(st.prec);
        if (e->name == "pi") {
            r = BigFloat::pi(st.prec);
        } else {
            auto it = st.consts.find(e->name);
            if (it != st.consts.end())
                r = it->second.round_to(st.prec);
            else
                r = st.point.round_to(st.prec);
        }
        BigComplex v = BigComplex::from_real(std::move(r));
        st.track(v);
        return v;
    }
    case ExprNode::Tag::Atom: {
        BigComplex arg = eval_rec(e->kids[0], st);
        // Atom arguments are real affine forms; the imaginary part is zero.
        BigComplex v(st.prec);
        switch (e->atom_kind) {
        case AtomKind::Sin:
            v = BigComplex::from_real(arg.re.sin());
            break;
        case AtomKind::Cos:
            v = BigComplex::from_real(arg.re.cos());
            break;
        case AtomKind::ExpI:
            v = BigComplex::expi(arg.re);
            break;
        }
        st.track(v);
        return v;
    }
    case ExprNode::Tag::Sum: {
        BigComplex acc(st.prec);
        for (auto &k : e->kids) {
            acc = acc + eval_rec(k, st);
            st.track(acc);
        }
        return acc;
    }
    case ExprNode::Tag::Product: {
        BigComplex acc = BigComplex::from_gaussian(GaussianRational(1), st.prec);
        for (auto &k : e->kids) {
            acc = acc * eval_rec(k, st);
            st.track(acc);
        }
        return acc;
    }
    case ExprNode::Tag::Power: {
        long ex = eval_const_int(e->kids[1]);
        BigComplex base = eval_rec(e->kids[0], st);
        if (ex < 0)
            st.pole_check(base);
        BigComplex v = base.pow_int(ex);
        st.track(v);
        return v;
    }
    default:
        throw std::domain_error("numeric_eval: expression must be expanded");
    }
}

} // namespace

BigComplex numeric_eval(const Expr &e, const BigFloat &point,
                        const ConstBindings &consts, mpfr_prec_t prec)
{
    EvalState st{point, consts, prec};
    return eval_rec(e, st);
}

BigComplex numeric_eval_tracked(const Expr &e, const BigFloat &point,
                                const ConstBindings &consts, mpfr_prec_t prec,
                                long &max_magnitude)
{
    EvalState st{point, consts, prec};
    BigComplex v = eval_rec(e, st);
    max_magnitude = st.max_mag;
    return v;
}

BigFloat accurate_residual_modulus(const Expr &e, const BigFloat &point,
                                   const ConstBindings &consts,
                                   mpfr_prec_t prec)
{
    mpfr_prec_t p = prec;
    for (int round = 0; round < 4; ++round) {
        long max_mag = 0;
        BigComplex v = numeric_eval_tracked(e, point, consts, p, max_mag);
        BigFloat m = v.modulus();
        long err_exp = max_mag - static_cast<long>(p) + 48;
        // Either the value stands clear of the error floor or the error floor
        // is already far below anything we assert (~2^-300).
        if (m.exp2() > err_exp + 8 || err_exp < -300)
            return m.round_to(prec);
        p = static_cast<mpfr_prec_t>(
            std::min(16384L, std::max<long>(p * 2, max_mag + 360)));
    }
    long max_mag = 0;
    return numeric_eval_tracked(e, point, consts, p, max_mag)
        .modulus()
        .round_to(prec);
}

BigComplex numeric_eval_poly(const MultiPoly &p, const BigFloat &point,
                             const ConstBindings &consts,
                             const CanonContext &ctx, mpfr_prec_t prec)
{
    auto den_angle = [&](const mpz_class &d) {
        return BigFloat::from_rational(Rational(mpz_class(1), d), prec);
    };
    auto gen_value = [&](const Generator &g) -> BigComplex {
        switch (g.kind) {
        case Generator::Kind::OdeVar:
            return BigComplex::from_real(point.round_to(prec));
        case Generator::Kind::NamedVar: {
            auto it = consts.find(g.name);
            if (it == consts.end())
                throw std::domain_error("no binding for constant " + g.name);
            return BigComplex::from_real(it->second.round_to(prec));
        }
        case Generator::Kind::SinAtom:
        case Generator::Kind::CosAtom: {
            BigFloat a = BigFloat::from_rational(g.arg.rat, prec) +
                         BigFloat::from_rational(g.arg.var_coeff, prec) *
                             point.round_to(prec) +
                         BigFloat::from_rational(g.arg.pi_coeff, prec) *
                             BigFloat::pi(prec);
            for (auto &[name, w] : g.arg.shifts) {
                auto it = consts.find(name);
                if (it == consts.end())
                    throw std::domain_error("no binding for constant " + name);
                a = a + BigFloat::from_rational(w, prec) *
                            it->second.round_to(prec);
            }
            return BigComplex::from_real(g.kind == Generator::Kind::SinAtom
                                             ? a.sin()
                                             : a.cos());
        }
        case Generator::Kind::ExpBase:
            return BigComplex::expi(point.round_to(prec) *
                                    den_angle(ctx.exp_base_den));
        case Generator::Kind::ExpConst: {
            auto it = consts.find(g.name);
            if (it == consts.end())
                throw std::domain_error("no binding for constant " + g.name);
            return BigComplex::expi(it->second.round_to(prec) *
                                    den_angle(ctx.const_den(g.name)));
        }
        case Generator::Kind::ExpRatBase:
            return BigComplex::expi(den_angle(ctx.exp_rat_den));
        case Generator::Kind::ExpPiBase:
            return BigComplex::expi(BigFloat::pi(prec) *
                                    den_angle(ctx.exp_pi_den));
        }
        throw std::logic_error("bad generator");
    };

    BigComplex acc(prec);
    for (auto &[m, c] : p.terms()) {
        BigComplex term = BigComplex::from_gaussian(c, prec);
        for (auto &[g, e] : m.factors)
            term = term * gen_value(g).pow_int(e);
        acc = acc + term;
    }
    return acc;
}

BigComplex central_difference(const Expr &e, const std::string &var,
                              const BigFloat &t, const Rational &h,
                              const ConstBindings &consts, mpfr_prec_t prec)
{
    (void)var;
    // Guard bits: the f(t+h) - f(t-h) cancellation costs ~log2(1/h) bits, so
    // the two evaluations run well above the caller's precision.
    BigFloat habs = BigFloat::from_rational(h, 64).abs();
    long h_bits = -habs.exp2() + 1;
    mpfr_prec_t wp = prec + 2 * h_bits + 64;
    BigFloat hw = BigFloat::from_rational(h, wp);
    BigComplex fp = numeric_eval(e, t.round_to(wp) + hw, consts, wp);
    BigComplex fm = numeric_eval(e, t.round_to(wp) - hw, consts, wp);
    BigComplex d = fp - fm;
    BigFloat two_h = hw + hw;
    BigComplex q{d.re / two_h, d.im / two_h};
    return {q.re.round_to(prec), q.im.round_to(prec)};
}

Sampler::Sampler(const SamplePlan &plan)
    : plan_(plan), rng_(plan.seed ? plan.seed : 1), lo_(plan.precision),
      hi_(plan.precision)
{
    const double kInfMap = 1e6;
    auto bound_value = [&](const Bound &b, bool is_lo) {
        if (b.kind == Bound::Kind::Finite)
            return b.value.numeric(plan_.precision);
        mapped_infinite_ = true;
        BigFloat v(plan_.precision);
        v = BigFloat::parse(is_lo ? "-1e6" : "1e6", plan_.precision);
        (void)kInfMap;
        return v;
    };
    lo_ = bound_value(plan_.interval.lo, true);
    hi_ = bound_value(plan_.interval.hi, false);
    BigFloat width = hi_ - lo_;
    BigFloat margin = width * BigFloat::parse("1e-3", plan_.precision);
    lo_ = lo_ + margin;
    hi_ = hi_ - margin;
    // Constant symbols draw from [-2, 2], away from 1 and -1 so corpus
    // denominators like (1-r)^2 keep sane magnitudes.
    std::vector<std::string> names = plan_.const_symbols;
    std::sort(names.begin(), names.end());
    for (auto &n : names) {
        BigFloat v(plan_.precision);
        for (int tries = 0; tries < 64; ++tries) {
            v = uniform01() * BigFloat::from_long(4, plan_.precision) -
                BigFloat::from_long(2, plan_.precision);
            BigFloat d1 = (v - BigFloat::from_long(1, plan_.precision)).abs();
            BigFloat d2 = (v + BigFloat::from_long(1, plan_.precision)).abs();
            BigFloat eps = BigFloat::parse("0.05", plan_.precision);
            if (d1 > eps && d2 > eps && v.abs() > eps)
                break;
        }
        bindings_.emplace(n, v);
    }
}

BigFloat Sampler::uniform01()
{
    // 256 deterministic bits per draw.
    BigFloat acc(plan_.precision);
    BigFloat scale = BigFloat::from_long(1, plan_.precision);
    BigFloat two64 = BigFloat::pow2(64, plan_.precision);
    for (int i = 0; i < 4; ++i) {
        scale = scale / two64;
        mpz_class w(static_cast<unsigned long>(rng_()));
        acc = acc + BigFloat::from_rational(Rational(w), plan_.precision) * scale;
    }
    return acc;
}

BigFloat Sampler::next_point() { return lo_ + uniform01() * (hi_ - lo_); }

std::pair<std::string, std::string> Sampler::numeric_bounds() const
{
    return {lo_.str(10), hi_.str(10)};
}

SampleReport sample_residual(const Expr &residual, const SamplePlan &plan)
{
    SampleReport report;
    Sampler sampler(plan);
    BigFloat pass = BigFloat::parse("1e-50", plan.precision);
    BigFloat fail = BigFloat::parse("1e-3", plan.precision);
    BigFloat maxm(plan.precision);
    bool any_ambiguous = false;
    int poles_exhausted = 0;
    for (int i = 0; i < plan.count; ++i) {
        BigFloat point(plan.precision);
        BigFloat m(plan.precision);
        bool ok = false;
        for (int attempt = 0; attempt < 8; ++attempt) {
            point = sampler.next_point();
            try {
                m = accurate_residual_modulus(residual, point,
                                              sampler.bindings(),
                                              plan.precision);
                ok = true;
                break;
            } catch (const PoleError &) {
                continue;
            }
        }
        if (!ok) {
            ++poles_exhausted;
            report.lines.push_back("resample-exhausted - inconclusive");
            continue;
        }
        const char *verdict = "ok";
        if (m > fail) {
            verdict = "violation";
            if (!report.witness_point) {
                report.witness_point = point.str(30);
                report.witness_modulus = m.str(10);
            }
        } else if (m > pass) {
            verdict = "ambiguous";
            any_ambiguous = true;
        }
        if (m > maxm)
            maxm = m;
        report.lines.push_back(point.str(30) + " " + m.str(10) + " " + verdict);
        if (report.witness_point && plan.stop_at_first_violation)
            break;
    }
    report.max_modulus = maxm.str(10);
    if (report.witness_point)
        report.outcome = SampleOutcome::Falsified;
    else if (any_ambiguous || poles_exhausted > 0)
        report.outcome = SampleOutcome::Inconclusive;
    else
        report.outcome = SampleOutcome::Consistent;
    const char *oc = report.outcome == SampleOutcome::Falsified
                         ? "falsified"
                         : (report.outcome == SampleOutcome::Consistent
                                ? "consistent"
                                : "inconclusive");
    report.summary = std::string("samples=") + std::to_string(plan.count) +
                     " max_modulus=" + report.max_modulus + " verdict=" + oc;
    return report;
}

DenominatorEvidence sample_denominators(const std::vector<MultiPoly> &dens,
                                        const CanonContext &ctx,
                                        const SamplePlan &plan)
{
    DenominatorEvidence ev;
    ev.count = plan.count;
    ev.seed = plan.seed;
    Sampler sampler(plan);
    ev.mapped_infinite = sampler.mapped_infinite();
    ev.bounds = sampler.numeric_bounds();
    bool nontrivial = false;
    for (auto &d : dens)
        if (!d.is_constant())
            nontrivial = true;
    if (!nontrivial) {
        ev.min_modulus = "1";
        ev.count = 0;
        return ev;
    }
    BigFloat minm(plan.precision);
    bool first = true;
    for (int i = 0; i < plan.count; ++i) {
        BigFloat point = sampler.next_point();
        for (auto &d : dens) {
            if (d.is_constant())
                continue;
            BigFloat m = numeric_eval_poly(d, point, sampler.bindings(), ctx,
                                           plan.precision)
                             .modulus();
            if (first || m < minm) {
                minm = m;
                first = false;
            }
        }
    }
    ev.min_modulus = first ? "1" : minm.str(10);
    return ev;
}

ExpNormalForm exp_normalize(const Expr &e, const std::string &ode_var)
{
    ExpNormalForm nf;
    nf.ctx = make_context({e}, ode_var, true);
    Expr rewritten = euler_rewrite(e, EulerDirection::TrigToExp);
    nf.rf = canonicalize(rewritten, nf.ctx);
    nf.laurent = nf.rf.den.term_count() == 1;
    return nf;
}

} // namespace ivpcert
