#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivpcert/calculus.hpp"
#include "ivpcert/canonical.hpp"
#include "ivpcert/decl.hpp"
#include "ivpcert/oracle.hpp"

namespace ivpcert {

// A declared dependency is absent or not certified. Deliberately an error,
// not a verdict: a missing lemma must never turn into a wrong answer.
struct MissingDependencyError : std::runtime_error {
    std::string dependency;
    explicit MissingDependencyError(const std::string &dep)
        : std::runtime_error("missing certified dependency '" + dep + "'"),
          dependency(dep)
    {
    }
};

enum class VerdictStatus {
    Certified,
    NotAnnihilated,
    InitialValueMismatch,
    SingularInitialPoint,
    Unsupported,
};

const char *verdict_name(VerdictStatus s);

struct Verdict {
    VerdictStatus status = VerdictStatus::Unsupported;
    std::string detail;
    // Offending canonical form (NotAnnihilated / InitialValueMismatch).
    std::optional<std::string> offending_form;
    // Numeric counterexample, when the falsifier finds one.
    std::optional<std::string> counterexample_point;
    std::optional<std::string> counterexample_modulus;

    bool ok() const { return status == VerdictStatus::Certified; }
};

// Fully expanded obligation: parameters substituted, sums expanded, exponents
// resolved, shared canonicalization context fixed.
struct ResolvedObligation {
    IdentityDecl decl;
    Expr lhs;
    Expr rhs;
    std::vector<Expr> coeffs;
    Expr force;
    std::vector<Expr> initial_values;
    Expr clear_factor; // split mode; null means 1
    CanonContext ctx;
};

ResolvedObligation resolve_obligation(const IdentityDecl &decl);

struct CertifiedEntry {
    IdentityDecl decl;
    std::string cert_hash;
};

// Immutable-once-built store of already certified lemmas.
class LemmaStore {
  public:
    bool contains(const std::string &name) const
    {
        return entries_.count(name) != 0;
    }
    const CertifiedEntry *find(const std::string &name) const
    {
        auto it = entries_.find(name);
        return it == entries_.end() ? nullptr : &it->second;
    }
    void add(CertifiedEntry entry)
    {
        entries_[entry.decl.name] = std::move(entry);
    }
    void remove(const std::string &name) { entries_.erase(name); }

  private:
    std::map<std::string, CertifiedEntry> entries_;
};

// One side of the proof: the residual in residual mode, lhs/rhs in
// coincidence mode. Stages are the canonical forms of the derivatives
// 0..m; the cleared terms spell the operator identity out over a common
// denominator, summing to zero.
struct SideArtifacts {
    std::string label;
    std::vector<CanonicalRF> stages;
    std::vector<MultiPoly> cleared_terms;
    std::vector<CanonicalRF> initial_computed;
    std::vector<CanonicalRF> initial_declared;
};

struct ProofArtifacts {
    ResolvedObligation resolved;
    std::vector<CanonicalRF> coeff_rfs;
    CanonicalRF force_rf;
    std::vector<SideArtifacts> sides;
    // Split mode: the zero claim in the exponential model.
    std::optional<CanonicalRF> split_claim;
    // Regular-point evidence: labelled denominator values at t0 plus the
    // sampled minimum modulus across the interval.
    std::vector<std::pair<std::string, CanonicalRF>> den_values_at_t0;
    DenominatorEvidence sampling;
    std::vector<std::pair<std::string, std::string>> dependencies;
};

struct CertifyOptions {
    int den_samples = 1000;
    mpfr_prec_t precision = 256;
    std::uint64_t seed = 1;
    // Look for a numeric counterexample on symbolic failure.
    bool find_counterexample = true;
};

struct CertifyResult {
    Verdict verdict;
    std::optional<ProofArtifacts> artifacts; // present iff certified
};

// The certification engine. Checks, in order: declared dependencies are
// certified; the initial point is a regular interior point; the operator
// annihilates the residual (or both sides satisfy the full IVP); all initial
// data matches exactly. Numeric sampling is recorded as evidence only and
// never overrides a symbolic result.
CertifyResult certify(const IdentityDecl &decl, const LemmaStore &lemmas,
                      const CertifyOptions &opt = {});

// Deterministic per-entry RNG seed.
std::uint64_t entry_seed(std::uint64_t base, const std::string &name);

// New identity: multiplier * d/dv of both sides of a certified base identity.
// Certification of the result is a fresh obligation.
IdentityDecl derive_by_differentiation(const IdentityDecl &base,
                                       const Expr &multiplier,
                                       const std::string &new_name);

// Real- and imaginary-part identities of a certified complex identity,
// carrying dependencies on the base and on the Euler certificate.
std::pair<IdentityDecl, IdentityDecl>
split_certified_identity(const IdentityDecl &base);

// Expression reconstruction from canonical forms (diagnostics and the split
// operation).
Expr rf_to_expr(const CanonicalRF &f, const CanonContext &ctx);

} // namespace ivpcert
