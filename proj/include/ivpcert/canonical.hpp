#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "ivpcert/decl.hpp"
#include "ivpcert/expr.hpp"
#include "ivpcert/poly.hpp"

namespace ivpcert {

struct CanonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Denominator vanishes at the evaluation point.
struct SingularEvaluation : CanonError {
    using CanonError::CanonError;
};
// No exact evaluation rule applies (e.g. sin at a nonzero rational).
struct UnsupportedEvaluation : CanonError {
    using CanonError::CanonError;
};

// Shared normalization context for one proof obligation. All exponential
// atoms are rescaled to integer powers of per-class base atoms:
//   e^{i(q t + rho + w_pi pi + sum w_c c)}
//     = E^(q*D) * Eq^(rho*Dq) * (exact scalar or Epi^(w_pi*Dpi)) * prod Ec^(w_c*Dc)
// with the denominators D, Dq, Dpi, Dc collected over every expression that
// participates in the obligation, so that all stages live in one model.
struct CanonContext {
    std::string ode_var;
    mpz_class exp_base_den = 1;                  // D
    std::map<std::string, mpz_class> exp_const_den; // Dc
    mpz_class exp_rat_den = 1;                   // Dq
    mpz_class exp_pi_den = 1;                    // Dpi

    mpz_class const_den(const std::string &name) const
    {
        auto it = exp_const_den.find(name);
        return it == exp_const_den.end() ? mpz_class(1) : it->second;
    }
};

// Scans the expressions' atoms and fixes the base denominators. When
// `include_trig` is set, sin/cos arguments also contribute (required before a
// trig-to-exp rewrite).
CanonContext make_context(const std::vector<Expr> &exprs,
                          const std::string &ode_var, bool include_trig);

// Extracts q*v + rho + w_pi*pi + shifts from an atom argument; rejects
// anything nonlinear in the variable.
LinearArg linearize_arg(const Expr &arg, const CanonContext &ctx);

// Normalized rational function: num/den with gcd(num, den) = 1 and den monic
// under the monomial order. Zero iff num is the zero polynomial; two
// expressions denote the same rational function in the independent-atom model
// iff their forms are identical.
struct CanonicalRF {
    MultiPoly num;
    MultiPoly den = MultiPoly::constant(GaussianRational(1));

    static CanonicalRF zero() { return {}; }
    static CanonicalRF constant(GaussianRational c)
    {
        return {MultiPoly::constant(std::move(c)),
                MultiPoly::constant(GaussianRational(1))};
    }
    static CanonicalRF from_poly(MultiPoly p)
    {
        return {std::move(p), MultiPoly::constant(GaussianRational(1))};
    }
    static CanonicalRF make(MultiPoly n, MultiPoly d); // normalizes

    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.is_constant() && den.is_constant(); }
    GaussianRational constant_value() const { return num.constant_value(); }

    CanonicalRF operator-() const { return {-num, den}; }
    CanonicalRF operator+(const CanonicalRF &o) const;
    CanonicalRF operator-(const CanonicalRF &o) const;
    CanonicalRF operator*(const CanonicalRF &o) const;
    CanonicalRF operator/(const CanonicalRF &o) const;
    CanonicalRF pow(long e) const;

    bool operator==(const CanonicalRF &o) const
    {
        return num == o.num && den == o.den;
    }

    std::string str() const { return "(" + num.str() + ") / (" + den.str() + ")"; }
};

// Unique rational-function normal form of a fully expanded expression.
// canonicalize(e1 - e2, ctx) is zero iff e1 and e2 are the same rational
// function over the independent generators.
CanonicalRF canonicalize(const Expr &e, const CanonContext &ctx);

// Convenience: context derived from the expression itself.
CanonicalRF canonicalize(const Expr &e, const std::string &ode_var);

// d/dv on polynomials and rational functions in the model (generators carry
// their own derivative rules; constant symbols and inert atoms drop out).
MultiPoly poly_derivative(const MultiPoly &p, const CanonContext &ctx);
CanonicalRF rf_derivative(const CanonicalRF &f, const CanonContext &ctx);

// Exact value at t0 (rational or rational multiple of pi): a rational
// function over constant generators only. Throws SingularEvaluation when the
// denominator vanishes at t0 and UnsupportedEvaluation when an atom has no
// exact value there.
CanonicalRF eval_at(const CanonicalRF &f, const PiLin &t0,
                    const CanonContext &ctx);

// (Re, Im) with f = Re + i*Im; requires an ExpI-free form (run the Euler
// rewrite first) and real constant symbols.
std::pair<CanonicalRF, CanonicalRF> split_real_imag(const CanonicalRF &f);

enum class EulerDirection { ExpToTrig, TrigToExp };

// Rewrites through Euler's identity. Pure tree rewrite; the corresponding
// corpus certificate licenses its use, and callers record that dependency.
Expr euler_rewrite(const Expr &e, EulerDirection dir);

} // namespace ivpcert
