#include "ivpcert/prover.hpp"

#include "ivpcert/printer.hpp"

namespace ivpcert {

const char *verdict_name(VerdictStatus s)
{
    switch (s) {
    case VerdictStatus::Certified:
        return "Certified";
    case VerdictStatus::NotAnnihilated:
        return "NotAnnihilated";
    case VerdictStatus::InitialValueMismatch:
        return "InitialValueMismatch";
    case VerdictStatus::SingularInitialPoint:
        return "SingularInitialPoint";
    case VerdictStatus::Unsupported:
        return "Unsupported";
    }
    return "?";
}

std::uint64_t entry_seed(std::uint64_t base, const std::string &name)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h ^ base;
}

ResolvedObligation resolve_obligation(const IdentityDecl &decl)
{
    ResolvedObligation r;
    r.decl = decl;
    auto bindings = decl.symbols.param_bindings();
    auto expand = [&](const Expr &e) -> Expr {
        return e ? expand_finite_sums(e, bindings) : Expr{};
    };
    r.lhs = expand(decl.lhs);
    r.rhs = expand(decl.rhs);
    if (decl.ivp) {
        for (auto &c : decl.ivp->coeffs)
            r.coeffs.push_back(expand(c));
        r.force = expand(decl.ivp->force);
        for (auto &v : decl.ivp->initial_values)
            r.initial_values.push_back(expand(v));
    }
    if (decl.split && decl.split->clear_factor)
        r.clear_factor = expand(decl.split->clear_factor);

    std::vector<Expr> all{r.lhs, r.rhs, r.force, r.clear_factor};
    for (auto &c : r.coeffs)
        all.push_back(c);
    for (auto &v : r.initial_values)
        all.push_back(v);
    r.ctx = make_context(all, decl.symbols.ode_var,
                         decl.mode == ProofMode::Split);
    return r;
}

namespace {

Verdict fail(VerdictStatus status, std::string detail)
{
    Verdict v;
    v.status = status;
    v.detail = std::move(detail);
    return v;
}

// The denominator-cleared operator identity: for terms P_i with sum zero,
// Q_i = num(P_i) * prod_{j != i} den(P_j) gives polynomials with sum zero.
std::vector<MultiPoly> cleared_terms(const std::vector<CanonicalRF> &parts)
{
    std::vector<MultiPoly> out;
    for (size_t i = 0; i < parts.size(); ++i) {
        MultiPoly q = parts[i].num;
        for (size_t j = 0; j < parts.size(); ++j)
            if (j != i)
                q = q * parts[j].den;
        out.push_back(std::move(q));
    }
    return out;
}

void attach_counterexample(Verdict &v, const ResolvedObligation &ob,
                           const CertifyOptions &opt)
{
    if (!opt.find_counterexample)
        return;
    SamplePlan plan;
    plan.interval = ob.decl.interval();
    plan.count = 100;
    plan.precision = opt.precision;
    plan.seed = entry_seed(opt.seed * 0x9e3779b97f4a7c15ULL, ob.decl.name);
    plan.const_symbols = ob.decl.symbols.const_syms;
    plan.stop_at_first_violation = true;
    SampleReport rep = sample_residual(sub(ob.lhs, ob.rhs), plan);
    if (rep.witness_point) {
        v.counterexample_point = rep.witness_point;
        v.counterexample_modulus = rep.witness_modulus;
    }
}

SamplePlan evidence_plan(const ResolvedObligation &ob,
                         const CertifyOptions &opt)
{
    SamplePlan plan;
    plan.interval = ob.decl.interval();
    plan.count = opt.den_samples;
    plan.precision = opt.precision;
    plan.seed = entry_seed(opt.seed, ob.decl.name);
    plan.const_symbols = ob.decl.symbols.const_syms;
    return plan;
}

struct StagePrep {
    SideArtifacts side;
    std::optional<Verdict> verdict; // set on failure
};

// Canonical derivative stages 0..m of an expression, with the order-0
// denominator checked nonsingular at t0.
StagePrep prepare_stages(const std::string &label, const Expr &side_expr,
                         int order, const ResolvedObligation &ob)
{
    StagePrep prep;
    prep.side.label = label;
    Expr cur = side_expr;
    for (int j = 0; j <= order; ++j) {
        if (j > 0)
            cur = differentiate(cur, ob.decl.symbols.ode_var);
        try {
            prep.side.stages.push_back(canonicalize(cur, ob.ctx));
        } catch (const CanonError &err) {
            prep.verdict = fail(VerdictStatus::Unsupported,
                                label + " stage " + std::to_string(j) + ": " +
                                    err.what());
            return prep;
        }
    }
    return prep;
}

} // namespace

CertifyResult certify(const IdentityDecl &decl, const LemmaStore &lemmas,
                      const CertifyOptions &opt)
{
    // Dependency discipline comes first: a missing lemma is an error, never
    // a verdict.
    for (auto &dep : decl.depends) {
        const CertifiedEntry *e = lemmas.find(dep);
        if (!e)
            throw MissingDependencyError(dep);
    }
    if (decl.mode == ProofMode::Split) {
        if (!decl.split)
            return {fail(VerdictStatus::Unsupported,
                         "split mode without a split block"),
                    std::nullopt};
        bool base_listed = false, euler_listed = false;
        for (auto &dep : decl.depends) {
            base_listed |= dep == decl.split->base;
            euler_listed |= dep == "euler";
        }
        if (!base_listed)
            throw MissingDependencyError(decl.split->base);
        if (!euler_listed)
            throw MissingDependencyError("euler");
    }

    ResolvedObligation ob = resolve_obligation(decl);
    ProofArtifacts art;
    art.resolved = ob;
    for (auto &dep : decl.depends)
        art.dependencies.emplace_back(dep, lemmas.find(dep)->cert_hash);

    CertifyResult result;

    if (decl.mode == ProofMode::Split) {
        // Zero test in the exponential model, licensed by the certified
        // Euler identity; the declared clearing factor multiplies the
        // residual so the claim is denominator-free where it matters.
        Expr residual = sub(ob.lhs, ob.rhs);
        if (ob.clear_factor)
            residual = mul(ob.clear_factor, residual);
        Expr rewritten = euler_rewrite(residual, EulerDirection::TrigToExp);
        CanonicalRF claim;
        try {
            claim = canonicalize(rewritten, ob.ctx);
        } catch (const CanonError &err) {
            result.verdict =
                fail(VerdictStatus::Unsupported, err.what());
            return result;
        }
        if (!claim.is_zero()) {
            result.verdict = fail(VerdictStatus::NotAnnihilated,
                                  "part identity is nonzero in the "
                                  "exponential model");
            result.verdict.offending_form = claim.str();
            attach_counterexample(result.verdict, ob, opt);
            return result;
        }
        art.split_claim = claim;
        std::vector<MultiPoly> dens{claim.den};
        if (ob.clear_factor) {
            CanonicalRF cf = canonicalize(
                euler_rewrite(ob.clear_factor, EulerDirection::TrigToExp),
                ob.ctx);
            dens.push_back(cf.num);
            dens.push_back(cf.den);
        }
        art.sampling = sample_denominators(dens, ob.ctx, evidence_plan(ob, opt));
        result.verdict.status = VerdictStatus::Certified;
        result.verdict.detail = "part identity zero in the exponential model";
        result.artifacts = std::move(art);
        return result;
    }

    const IvpDescription &ivp = *decl.ivp;

    // Regular interior initial point.
    if (!ivp.interval.contains_strictly(ivp.t0)) {
        result.verdict =
            fail(VerdictStatus::SingularInitialPoint,
                 "initial point " + ivp.t0.str() +
                     " is not strictly inside the interval " +
                     ivp.interval.str());
        return result;
    }

    // Coefficients canonicalize and are regular at t0.
    std::vector<MultiPoly> sample_dens;
    auto check_regular = [&](const std::string &label, const Expr &e,
                             CanonicalRF &out) -> std::optional<Verdict> {
        try {
            out = canonicalize(e, ob.ctx);
        } catch (const CanonError &err) {
            return fail(VerdictStatus::Unsupported,
                        label + ": " + err.what());
        }
        try {
            CanonicalRF den_v = eval_at(
                CanonicalRF::from_poly(out.den), ivp.t0, ob.ctx);
            if (den_v.is_zero())
                return fail(VerdictStatus::SingularInitialPoint,
                            label + " has a vanishing denominator at t0 = " +
                                ivp.t0.str());
            art.den_values_at_t0.emplace_back(label, den_v);
        } catch (const SingularEvaluation &) {
            return fail(VerdictStatus::SingularInitialPoint,
                        label + ": singular evaluation at t0");
        } catch (const UnsupportedEvaluation &err) {
            return fail(VerdictStatus::Unsupported,
                        label + ": " + err.what());
        }
        sample_dens.push_back(out.den);
        return std::nullopt;
    };

    for (size_t i = 0; i < ob.coeffs.size(); ++i) {
        CanonicalRF rf;
        if (auto bad = check_regular("a" + std::to_string(i + 1), ob.coeffs[i],
                                     rf)) {
            result.verdict = *bad;
            return result;
        }
        art.coeff_rfs.push_back(rf);
    }
    {
        CanonicalRF rf;
        if (auto bad = check_regular("b", ob.force ? ob.force : num(0), rf)) {
            result.verdict = *bad;
            return result;
        }
        art.force_rf = rf;
    }

    LinOp op{ivp.order, ob.coeffs, ob.force, decl.symbols.ode_var};

    if (decl.mode == ProofMode::Residual) {
        if (!art.force_rf.is_zero()) {
            result.verdict = fail(VerdictStatus::Unsupported,
                                  "residual mode requires a homogeneous "
                                  "problem (force term is nonzero)");
            return result;
        }
        for (auto &v : ob.initial_values) {
            try {
                if (!canonicalize(v, ob.ctx).is_zero()) {
                    result.verdict =
                        fail(VerdictStatus::Unsupported,
                             "residual mode requires zero initial data");
                    return result;
                }
            } catch (const CanonError &err) {
                result.verdict = fail(VerdictStatus::Unsupported, err.what());
                return result;
            }
        }
    }

    std::vector<std::pair<std::string, Expr>> side_exprs;
    if (decl.mode == ProofMode::Residual) {
        side_exprs.emplace_back("residual", sub(ob.lhs, ob.rhs));
    } else {
        side_exprs.emplace_back("lhs", ob.lhs);
        side_exprs.emplace_back("rhs", ob.rhs);
    }

    for (auto &[label, side_expr] : side_exprs) {
        StagePrep prep = prepare_stages(label, side_expr, ivp.order, ob);
        if (prep.verdict) {
            result.verdict = *prep.verdict;
            return result;
        }
        SideArtifacts side = std::move(prep.side);

        // The solution must be regular at t0 as well.
        try {
            CanonicalRF den_v = eval_at(
                CanonicalRF::from_poly(side.stages[0].den), ivp.t0, ob.ctx);
            if (den_v.is_zero()) {
                result.verdict =
                    fail(VerdictStatus::SingularInitialPoint,
                         label + " has a vanishing denominator at t0");
                return result;
            }
            art.den_values_at_t0.emplace_back(label, den_v);
        } catch (const SingularEvaluation &) {
            result.verdict = fail(VerdictStatus::SingularInitialPoint,
                                  label + ": singular evaluation at t0");
            return result;
        } catch (const UnsupportedEvaluation &err) {
            result.verdict = fail(VerdictStatus::Unsupported,
                                  label + ": " + err.what());
            return result;
        }
        sample_dens.push_back(side.stages[0].den);

        // Operator annihilation, via the declared operator applied to the
        // expression itself.
        CanonicalRF applied;
        try {
            applied = apply_operator(op, side_expr, ob.ctx);
        } catch (const CanonError &err) {
            result.verdict = fail(VerdictStatus::Unsupported,
                                  label + ": " + err.what());
            return result;
        }
        // Cross-check through the canonical stages; the two routes must
        // agree exactly.
        CanonicalRF combined = side.stages[ivp.order];
        for (int i = 1; i <= ivp.order; ++i)
            combined = combined +
                       art.coeff_rfs[i - 1] * side.stages[ivp.order - i];
        combined = combined - art.force_rf;
        if (!(combined == applied))
            throw std::logic_error(
                "internal: operator application routes disagree");
        if (!applied.is_zero()) {
            result.verdict =
                fail(VerdictStatus::NotAnnihilated,
                     label + " does not satisfy the differential equation");
            result.verdict.offending_form = applied.str();
            attach_counterexample(result.verdict, ob, opt);
            return result;
        }

        std::vector<CanonicalRF> parts{side.stages[ivp.order]};
        for (int i = 1; i <= ivp.order; ++i)
            parts.push_back(art.coeff_rfs[i - 1] *
                            side.stages[ivp.order - i]);
        parts.push_back(-art.force_rf);
        side.cleared_terms = cleared_terms(parts);

        // Initial data, decided exactly by canonicalization over constant
        // atoms.
        for (int j = 0; j < ivp.order; ++j) {
            CanonicalRF computed, declared;
            try {
                computed = eval_at(side.stages[j], ivp.t0, ob.ctx);
            } catch (const SingularEvaluation &) {
                result.verdict =
                    fail(VerdictStatus::SingularInitialPoint,
                         label + " derivative " + std::to_string(j) +
                             ": singular evaluation at t0");
                return result;
            } catch (const UnsupportedEvaluation &err) {
                result.verdict = fail(VerdictStatus::Unsupported,
                                      label + ": " + err.what());
                return result;
            }
            try {
                declared = decl.mode == ProofMode::Residual
                               ? CanonicalRF::zero()
                               : canonicalize(ob.initial_values[j], ob.ctx);
            } catch (const CanonError &err) {
                result.verdict = fail(VerdictStatus::Unsupported,
                                      std::string("initial value: ") +
                                          err.what());
                return result;
            }
            if (!(computed - declared).is_zero()) {
                result.verdict = fail(
                    VerdictStatus::InitialValueMismatch,
                    label + " y^(" + std::to_string(j) + ")(t0): computed " +
                        computed.str() + ", declared " + declared.str());
                result.verdict.offending_form = (computed - declared).str();
                attach_counterexample(result.verdict, ob, opt);
                return result;
            }
            side.initial_computed.push_back(computed);
            side.initial_declared.push_back(declared);
        }
        art.sides.push_back(std::move(side));
    }

    // Success: record the sampled regular-point evidence across I.
    art.sampling = sample_denominators(sample_dens, ob.ctx,
                                       evidence_plan(ob, opt));
    result.verdict.status = VerdictStatus::Certified;
    result.verdict.detail = "uniqueness hypotheses verified; residual "
                            "solves the zero-data problem";
    if (decl.mode == ProofMode::Coincidence)
        result.verdict.detail =
            "both sides solve the same initial value problem";
    result.artifacts = std::move(art);
    return result;
}

IdentityDecl derive_by_differentiation(const IdentityDecl &base,
                                       const Expr &multiplier,
                                       const std::string &new_name)
{
    ResolvedObligation rb = resolve_obligation(base);
    const std::string &var = base.symbols.ode_var;
    IdentityDecl d;
    d.name = new_name;
    d.symbols = base.symbols;
    d.lhs = mul(multiplier, differentiate(rb.lhs, var));
    d.rhs = mul(multiplier, differentiate(rb.rhs, var));
    d.mode = ProofMode::Residual;
    IvpDescription ivp;
    ivp.order = 1;
    ivp.coeffs = {num(0)};
    ivp.force = num(0);
    ivp.t0 = base.ivp ? base.ivp->t0 : PiLin{};
    ivp.initial_values = {num(0)};
    ivp.interval = base.interval();
    d.ivp = ivp;
    d.depends = {base.name};
    d.source = print_identity(d);
    return d;
}

namespace {

Expr arg_to_expr(const LinearArg &a, const CanonContext &ctx)
{
    std::vector<Expr> terms;
    if (!a.var_coeff.is_zero())
        terms.push_back(mul(num(a.var_coeff), sym(ctx.ode_var)));
    if (!a.rat.is_zero())
        terms.push_back(num(a.rat));
    if (!a.pi_coeff.is_zero())
        terms.push_back(mul(num(a.pi_coeff), sym("pi")));
    for (auto &[name, w] : a.shifts)
        terms.push_back(mul(num(w), sym(name)));
    return sum(std::move(terms));
}

Expr gen_to_expr(const Generator &g, const CanonContext &ctx)
{
    switch (g.kind) {
    case Generator::Kind::OdeVar:
    case Generator::Kind::NamedVar:
        return sym(g.name);
    case Generator::Kind::SinAtom:
        return sin_(arg_to_expr(g.arg, ctx));
    case Generator::Kind::CosAtom:
        return cos_(arg_to_expr(g.arg, ctx));
    case Generator::Kind::ExpBase:
        return expi(mul(num(Rational(mpz_class(1), ctx.exp_base_den)),
                        sym(ctx.ode_var)));
    case Generator::Kind::ExpConst:
        return expi(mul(num(Rational(mpz_class(1), ctx.const_den(g.name))),
                        sym(g.name)));
    case Generator::Kind::ExpRatBase:
        return expi(num(Rational(mpz_class(1), ctx.exp_rat_den)));
    case Generator::Kind::ExpPiBase:
        return expi(mul(num(Rational(mpz_class(1), ctx.exp_pi_den)),
                        sym("pi")));
    }
    throw std::logic_error("gen_to_expr: bad kind");
}

Expr poly_to_expr(const MultiPoly &p, const CanonContext &ctx)
{
    std::vector<Expr> terms;
    for (auto &[m, c] : p.terms()) {
        std::vector<Expr> factors{num(c)};
        for (auto &[g, e] : m.factors)
            factors.push_back(power(gen_to_expr(g, ctx), e));
        terms.push_back(product(std::move(factors)));
    }
    return sum(std::move(terms));
}

} // namespace

Expr rf_to_expr(const CanonicalRF &f, const CanonContext &ctx)
{
    Expr n = poly_to_expr(f.num, ctx);
    if (f.den.is_constant())
        return n;
    return div(n, poly_to_expr(f.den, ctx));
}

std::pair<IdentityDecl, IdentityDecl>
split_certified_identity(const IdentityDecl &base)
{
    ResolvedObligation rb = resolve_obligation(base);
    Expr lhs_trig = euler_rewrite(rb.lhs, EulerDirection::ExpToTrig);
    Expr rhs_trig = euler_rewrite(rb.rhs, EulerDirection::ExpToTrig);
    CanonContext ctx =
        make_context({lhs_trig, rhs_trig}, base.symbols.ode_var, false);
    auto [re_l, im_l] = split_real_imag(canonicalize(lhs_trig, ctx));
    auto [re_r, im_r] = split_real_imag(canonicalize(rhs_trig, ctx));

    auto build = [&](const CanonicalRF &l, const CanonicalRF &r,
                     SplitSpec::Part part, const std::string &suffix) {
        IdentityDecl d;
        d.name = base.name + suffix;
        d.symbols = base.symbols;
        d.lhs = rf_to_expr(l, ctx);
        d.rhs = rf_to_expr(r, ctx);
        d.mode = ProofMode::Split;
        SplitSpec sp;
        sp.base = base.name;
        sp.part = part;
        sp.interval = base.interval();
        d.split = sp;
        d.depends = {base.name, "euler"};
        d.source = print_identity(d);
        return d;
    };
    return {build(re_l, re_r, SplitSpec::Part::Real, "_re"),
            build(im_l, im_r, SplitSpec::Part::Imag, "_im")};
}

} // namespace ivpcert
