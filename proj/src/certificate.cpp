#include "ivpcert/certificate.hpp"

#include <openssl/evp.h>

#include "ivpcert/parser.hpp"
#include "ivpcert/printer.hpp"

namespace ivpcert {

std::string sha256_hex(const std::string &bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
               nullptr);
    static const char *hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string canonical_bytes(const Json &doc) { return doc.dump(); }

Json rational_json(const Rational &q) { return q.cert_str(); }

Json gaussian_json(const GaussianRational &g)
{
    return Json{{"re", g.re.cert_str()}, {"im", g.im.cert_str()}};
}

Json poly_json(const MultiPoly &p)
{
    Json terms = Json::array();
    for (auto &[m, c] : p.terms())
        terms.push_back(Json::array({m.key(), gaussian_json(c)}));
    return terms;
}

Json rf_json(const CanonicalRF &f)
{
    return Json{{"num", poly_json(f.num)}, {"den", poly_json(f.den)}};
}

Json context_json(const CanonContext &ctx)
{
    Json consts = Json::object();
    for (auto &[name, d] : ctx.exp_const_den)
        consts[name] = d.get_str();
    return Json{{"exp_base_den", ctx.exp_base_den.get_str()},
                {"exp_rat_den", ctx.exp_rat_den.get_str()},
                {"exp_pi_den", ctx.exp_pi_den.get_str()},
                {"exp_const_den", consts}};
}

namespace {

Json bound_json(const Bound &b) { return b.str(); }

Json ivp_json(const IvpDescription &ivp)
{
    Json coeffs = Json::array();
    for (auto &c : ivp.coeffs)
        coeffs.push_back(print_expr(c));
    Json values = Json::array();
    for (auto &v : ivp.initial_values)
        values.push_back(print_expr(v));
    return Json{{"order", ivp.order},
                {"coeffs", coeffs},
                {"force", print_expr(ivp.force)},
                {"t0", ivp.t0.str()},
                {"initial_values", values},
                {"interval", Json::array({bound_json(ivp.interval.lo),
                                          bound_json(ivp.interval.hi)})}};
}

Json side_json(const SideArtifacts &side)
{
    Json stages = Json::array();
    for (size_t j = 0; j < side.stages.size(); ++j)
        stages.push_back(
            Json{{"order", static_cast<int>(j)}, {"rf", rf_json(side.stages[j])}});
    Json cleared = Json::array();
    for (auto &t : side.cleared_terms)
        cleared.push_back(poly_json(t));
    Json initial = Json::array();
    for (size_t j = 0; j < side.initial_computed.size(); ++j)
        initial.push_back(Json{{"order", static_cast<int>(j)},
                               {"computed", rf_json(side.initial_computed[j])},
                               {"declared", rf_json(side.initial_declared[j])}});
    return Json{{"label", side.label},
                {"stages", stages},
                {"cleared_operator_identity", cleared},
                {"initial_evaluations", initial}};
}

} // namespace

Json emit_certificate(const ProofArtifacts &art)
{
    const IdentityDecl &decl = art.resolved.decl;
    Json params = Json::object();
    for (auto &[p, v] : decl.symbols.int_params)
        params[p] = std::to_string(v);
    Json consts = Json::array();
    for (auto &c : decl.symbols.const_syms)
        consts.push_back(c);

    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["engine_version"] = kEngineVersion;
    doc["identity"] = Json{{"name", decl.name},
                           {"source_sha256", sha256_hex(decl.source)},
                           {"ode_var", decl.symbols.ode_var},
                           {"params", params},
                           {"consts", consts},
                           {"mode", mode_name(decl.mode)}};
    doc["canon"] = context_json(art.resolved.ctx);

    if (decl.mode == ProofMode::Split) {
        const SplitSpec &sp = *decl.split;
        doc["split"] =
            Json{{"of", sp.base},
                 {"part", sp.part == SplitSpec::Part::Real ? "real" : "imag"},
                 {"clear",
                  sp.clear_factor ? print_expr(sp.clear_factor) : "1"},
                 {"interval", Json::array({bound_json(sp.interval.lo),
                                           bound_json(sp.interval.hi)})},
                 {"claim", rf_json(art.split_claim.value())}};
    } else {
        doc["ivp"] = ivp_json(*decl.ivp);
        Json coeff_rfs = Json::array();
        for (auto &c : art.coeff_rfs)
            coeff_rfs.push_back(rf_json(c));
        doc["coefficients"] = coeff_rfs;
        doc["force"] = rf_json(art.force_rf);
        Json sides = Json::array();
        for (auto &s : art.sides)
            sides.push_back(side_json(s));
        doc["sides"] = sides;
    }

    Json dens = Json::array();
    for (auto &[label, v] : art.den_values_at_t0)
        dens.push_back(Json{{"source", label}, {"value_at_t0", rf_json(v)}});
    doc["regular_point_evidence"] =
        Json{{"denominators_at_t0", dens},
             {"sampling",
              Json{{"count", art.sampling.count},
                   {"seed", std::to_string(art.sampling.seed)},
                   {"min_modulus", art.sampling.min_modulus},
                   {"mapped_infinite", art.sampling.mapped_infinite},
                   {"bounds", Json::array({art.sampling.bounds.first,
                                           art.sampling.bounds.second})}}}};

    Json deps = Json::array();
    for (auto &[name, hash] : art.dependencies)
        deps.push_back(Json{{"name", name}, {"cert_sha256", hash}});
    doc["dependencies"] = deps;

    doc["content_sha256"] = "";
    Json unsigned_doc = doc;
    unsigned_doc.erase("content_sha256");
    doc["content_sha256"] = sha256_hex(canonical_bytes(unsigned_doc));
    return doc;
}

const char *check_status_name(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Accepted:
        return "Accepted";
    case CheckStatus::SchemaError:
        return "SchemaError";
    case CheckStatus::HashMismatch:
        return "HashMismatch";
    case CheckStatus::StageMismatch:
        return "StageMismatch";
    case CheckStatus::MissingDependency:
        return "MissingDependency";
    }
    return "?";
}

namespace {

CheckResult bad(CheckStatus status, std::string detail)
{
    return CheckResult{status, std::move(detail)};
}

} // namespace

CheckResult check_certificate(const Json &cert, const SourceLookup &sources,
                              const CertLookup &certs)
{
    try {
        if (!cert.is_object() || !cert.contains("schema_version") ||
            !cert["schema_version"].is_number_integer())
            return bad(CheckStatus::SchemaError, "malformed document");
        if (cert["schema_version"].get<int>() != kSchemaVersion)
            return bad(CheckStatus::SchemaError,
                       "unsupported schema version " +
                           cert["schema_version"].dump());

        // Content hash over the document without its hash field.
        Json unsigned_doc = cert;
        unsigned_doc.erase("content_sha256");
        std::string expect = sha256_hex(canonical_bytes(unsigned_doc));
        if (!cert.contains("content_sha256") ||
            cert["content_sha256"].get<std::string>() != expect)
            return bad(CheckStatus::HashMismatch, "content hash mismatch");

        const Json &ident = cert.at("identity");
        std::string name = ident.at("name").get<std::string>();
        std::optional<IdentityDecl> decl = sources(name);
        if (!decl)
            return bad(CheckStatus::MissingDependency,
                       "no DSL source for identity '" + name + "'");
        if (sha256_hex(decl->source) !=
            ident.at("source_sha256").get<std::string>())
            return bad(CheckStatus::HashMismatch,
                       "DSL source hash mismatch for '" + name + "'");

        // Dependency hashes.
        for (auto &dep : cert.at("dependencies")) {
            std::string dname = dep.at("name").get<std::string>();
            const Json *dcert = certs(dname);
            if (!dcert)
                return bad(CheckStatus::MissingDependency,
                           "dependency certificate '" + dname + "' absent");
            if (!dcert->contains("content_sha256") ||
                (*dcert)["content_sha256"].get<std::string>() !=
                    dep.at("cert_sha256").get<std::string>())
                return bad(CheckStatus::MissingDependency,
                           "dependency certificate '" + dname +
                               "' hash mismatch");
        }

        ResolvedObligation ob = resolve_obligation(*decl);
        if (context_json(ob.ctx) != cert.at("canon"))
            return bad(CheckStatus::StageMismatch,
                       "canonicalization context differs");
        if (ident.at("mode").get<std::string>() !=
            std::string(mode_name(decl->mode)))
            return bad(CheckStatus::StageMismatch, "mode differs");

        if (decl->mode == ProofMode::Split) {
            Expr residual = sub(ob.lhs, ob.rhs);
            if (ob.clear_factor)
                residual = mul(ob.clear_factor, residual);
            CanonicalRF claim = canonicalize(
                euler_rewrite(residual, EulerDirection::TrigToExp), ob.ctx);
            if (!claim.is_zero())
                return bad(CheckStatus::StageMismatch,
                           "split claim does not recanonicalize to zero");
            if (rf_json(claim) != cert.at("split").at("claim"))
                return bad(CheckStatus::StageMismatch,
                           "split claim differs");
            return CheckResult{CheckStatus::Accepted, "replayed"};
        }

        const IvpDescription &ivp = *decl->ivp;
        if (ivp_json(ivp) != cert.at("ivp"))
            return bad(CheckStatus::StageMismatch, "ivp description differs");
        if (!ivp.interval.contains_strictly(ivp.t0))
            return bad(CheckStatus::StageMismatch,
                       "initial point outside the interval");

        // Coefficient normal forms.
        std::vector<CanonicalRF> coeff_rfs;
        const Json &jcoeffs = cert.at("coefficients");
        if (jcoeffs.size() != ob.coeffs.size())
            return bad(CheckStatus::StageMismatch, "coefficient count");
        for (size_t i = 0; i < ob.coeffs.size(); ++i) {
            CanonicalRF rf = canonicalize(ob.coeffs[i], ob.ctx);
            if (rf_json(rf) != jcoeffs[i])
                return bad(CheckStatus::StageMismatch,
                           "coefficient a" + std::to_string(i + 1) +
                               " normal form differs");
            coeff_rfs.push_back(std::move(rf));
        }
        CanonicalRF force_rf =
            canonicalize(ob.force ? ob.force : num(0), ob.ctx);
        if (rf_json(force_rf) != cert.at("force"))
            return bad(CheckStatus::StageMismatch,
                       "force normal form differs");

        // Sides: re-derive stage by stage. Derivatives are taken on the
        // canonical forms here, a different route than the emitter's
        // expression-level differentiation.
        std::vector<std::pair<std::string, Expr>> side_exprs;
        if (decl->mode == ProofMode::Residual)
            side_exprs.emplace_back("residual", sub(ob.lhs, ob.rhs));
        else {
            side_exprs.emplace_back("lhs", ob.lhs);
            side_exprs.emplace_back("rhs", ob.rhs);
        }
        const Json &jsides = cert.at("sides");
        if (jsides.size() != side_exprs.size())
            return bad(CheckStatus::StageMismatch, "side count differs");

        for (size_t s = 0; s < side_exprs.size(); ++s) {
            const Json &jside = jsides[s];
            if (jside.at("label").get<std::string>() != side_exprs[s].first)
                return bad(CheckStatus::StageMismatch, "side label differs");
            const Json &jstages = jside.at("stages");
            if (static_cast<int>(jstages.size()) != ivp.order + 1)
                return bad(CheckStatus::StageMismatch, "stage count differs");

            std::vector<CanonicalRF> stages;
            stages.push_back(canonicalize(side_exprs[s].second, ob.ctx));
            if (rf_json(stages[0]) != jstages[0].at("rf"))
                return bad(CheckStatus::StageMismatch,
                           side_exprs[s].first + " stage 0 differs");
            for (int j = 1; j <= ivp.order; ++j) {
                stages.push_back(rf_derivative(stages[j - 1], ob.ctx));
                if (rf_json(stages[j]) != jstages[j].at("rf"))
                    return bad(CheckStatus::StageMismatch,
                               side_exprs[s].first + " stage " +
                                   std::to_string(j) + " differs");
            }

            // Operator identity, cleared of denominators.
            std::vector<CanonicalRF> parts{stages[ivp.order]};
            for (int i = 1; i <= ivp.order; ++i)
                parts.push_back(coeff_rfs[i - 1] * stages[ivp.order - i]);
            parts.push_back(-force_rf);
            MultiPoly sum_cleared;
            Json jcleared = Json::array();
            for (size_t i = 0; i < parts.size(); ++i) {
                MultiPoly q = parts[i].num;
                for (size_t j = 0; j < parts.size(); ++j)
                    if (j != i)
                        q = q * parts[j].den;
                sum_cleared = sum_cleared + q;
                jcleared.push_back(poly_json(q));
            }
            if (jcleared != jside.at("cleared_operator_identity"))
                return bad(CheckStatus::StageMismatch,
                           side_exprs[s].first +
                               " cleared operator identity differs");
            if (!sum_cleared.is_zero())
                return bad(CheckStatus::StageMismatch,
                           side_exprs[s].first +
                               " cleared operator identity does not vanish");

            // Initial data.
            const Json &jinit = jside.at("initial_evaluations");
            if (static_cast<int>(jinit.size()) != ivp.order)
                return bad(CheckStatus::StageMismatch,
                           "initial evaluation count differs");
            for (int j = 0; j < ivp.order; ++j) {
                CanonicalRF computed = eval_at(stages[j], ivp.t0, ob.ctx);
                CanonicalRF declared =
                    decl->mode == ProofMode::Residual
                        ? CanonicalRF::zero()
                        : canonicalize(ob.initial_values[j], ob.ctx);
                if (rf_json(computed) != jinit[j].at("computed") ||
                    rf_json(declared) != jinit[j].at("declared"))
                    return bad(CheckStatus::StageMismatch,
                               side_exprs[s].first + " initial value " +
                                   std::to_string(j) + " differs");
                if (!(computed - declared).is_zero())
                    return bad(CheckStatus::StageMismatch,
                               side_exprs[s].first + " initial value " +
                                   std::to_string(j) + " does not match");
            }
        }

        // Regular-point values at t0.
        const Json &jdens =
            cert.at("regular_point_evidence").at("denominators_at_t0");
        size_t di = 0;
        auto check_den = [&](const std::string &label,
                             const MultiPoly &den) -> std::optional<CheckResult> {
            if (di >= jdens.size())
                return bad(CheckStatus::StageMismatch,
                           "denominator evidence count differs");
            const Json &entry = jdens[di++];
            CanonicalRF v =
                eval_at(CanonicalRF::from_poly(den), ivp.t0, ob.ctx);
            if (entry.at("source").get<std::string>() != label ||
                rf_json(v) != entry.at("value_at_t0"))
                return bad(CheckStatus::StageMismatch,
                           "denominator evidence for " + label + " differs");
            if (v.is_zero())
                return bad(CheckStatus::StageMismatch,
                           "denominator vanishes at t0 for " + label);
            return std::nullopt;
        };
        for (size_t i = 0; i < coeff_rfs.size(); ++i)
            if (auto r = check_den("a" + std::to_string(i + 1),
                                   coeff_rfs[i].den))
                return *r;
        if (auto r = check_den("b", force_rf.den))
            return *r;
        for (auto &[label, expr] : side_exprs) {
            CanonicalRF rf0 = canonicalize(expr, ob.ctx);
            if (auto r = check_den(label, rf0.den))
                return *r;
        }

        return CheckResult{CheckStatus::Accepted, "replayed"};
    } catch (const Json::exception &e) {
        return bad(CheckStatus::SchemaError, e.what());
    } catch (const CanonError &e) {
        return bad(CheckStatus::StageMismatch, e.what());
    } catch (const std::exception &e) {
        return bad(CheckStatus::SchemaError, e.what());
    }
}

} // namespace ivpcert
