#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ivpcert/bigfloat.hpp"
#include "ivpcert/calculus.hpp"
#include "ivpcert/canonical.hpp"
#include "ivpcert/decl.hpp"

namespace ivpcert {

// Evaluation walked into a pole (denominator modulus below 2^(-prec/2)).
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ConstBindings = std::map<std::string, BigFloat>;

// High-precision evaluation at a real point. Relative rounding error is
// bounded by roughly 2^(10 - precision) per operation.
BigComplex numeric_eval(const Expr &e, const BigFloat &point,
                        const ConstBindings &consts, mpfr_prec_t prec);

// Same evaluation, also reporting the largest intermediate magnitude (base-2
// exponent); callers use it to decide whether a small result is genuine or
// cancellation noise.
BigComplex numeric_eval_tracked(const Expr &e, const BigFloat &point,
                                const ConstBindings &consts, mpfr_prec_t prec,
                                long &max_magnitude);

// Residual modulus with enough guard precision that the returned value is
// trustworthy in absolute terms (error below ~2^-300) even after catastrophic
// cancellation; never weakens a genuinely nonzero residual.
BigFloat accurate_residual_modulus(const Expr &e, const BigFloat &point,
                                   const ConstBindings &consts,
                                   mpfr_prec_t prec);

// Numeric evaluation of a polynomial in the canonical model.
BigComplex numeric_eval_poly(const MultiPoly &p, const BigFloat &point,
                             const ConstBindings &consts,
                             const CanonContext &ctx, mpfr_prec_t prec);

// Central difference (f(t+h) - f(t-h)) / 2h, evaluated with elevated internal
// precision so the quotient is accurate at the caller's precision.
BigComplex central_difference(const Expr &e, const std::string &var,
                              const BigFloat &t, const Rational &h,
                              const ConstBindings &consts, mpfr_prec_t prec);

struct SamplePlan {
    Interval interval;
    int count = 100;
    mpfr_prec_t precision = 256;
    std::uint64_t seed = 1;
    std::vector<std::string> const_symbols;
    bool stop_at_first_violation = false;
};

// Deterministic point/constant drawing for a plan. Points live strictly
// inside the interval with a relative margin of 1e-3 from each endpoint;
// infinite endpoints map to +-1e6.
class Sampler {
  public:
    explicit Sampler(const SamplePlan &plan);

    BigFloat next_point();
    const ConstBindings &bindings() const { return bindings_; }
    bool mapped_infinite() const { return mapped_infinite_; }
    std::pair<std::string, std::string> numeric_bounds() const;

  private:
    BigFloat uniform01();
    SamplePlan plan_;
    std::mt19937_64 rng_;
    BigFloat lo_, hi_;
    bool mapped_infinite_ = false;
    ConstBindings bindings_;
};

enum class SampleOutcome { Consistent, Falsified, Inconclusive };

struct SampleReport {
    std::vector<std::string> lines; // "point residual_modulus verdict"
    std::string summary;
    SampleOutcome outcome = SampleOutcome::Inconclusive;
    std::string max_modulus;
    std::optional<std::string> witness_point;
    std::optional<std::string> witness_modulus;
};

// Evaluates |residual| on the plan's points. Thresholds: pass < 1e-50,
// falsified > 1e-3, anything between is ambiguous; pole hits are resampled a
// bounded number of times and reported as inconclusive when exhausted.
SampleReport sample_residual(const Expr &residual, const SamplePlan &plan);

struct DenominatorEvidence {
    int count = 0;
    std::string min_modulus;
    std::uint64_t seed = 0;
    bool mapped_infinite = false;
    std::pair<std::string, std::string> bounds;
};

// Minimum modulus of the given polynomial denominators over sampled points.
DenominatorEvidence sample_denominators(const std::vector<MultiPoly> &dens,
                                        const CanonContext &ctx,
                                        const SamplePlan &plan);

// Laurent-style normal form over exponential base atoms: complete zero test
// for this fragment, used strictly as a cross-check of the certification
// route, never as the proof itself.
struct ExpNormalForm {
    CanonicalRF rf;
    CanonContext ctx;
    bool laurent = false; // denominator is a single monomial

    bool is_zero() const { return rf.is_zero(); }
};

ExpNormalForm exp_normalize(const Expr &e, const std::string &ode_var);

} // namespace ivpcert
