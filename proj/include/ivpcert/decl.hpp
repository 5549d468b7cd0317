#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivpcert/bigfloat.hpp"
#include "ivpcert/expr.hpp"

namespace ivpcert {

// Value of the form rat + pi_coeff * pi. Initial points and interval
// endpoints are restricted to this shape so membership and evaluation stay
// exact.
struct PiLin {
    Rational rat;
    Rational pi_coeff;

    PiLin() = default;
    PiLin(Rational r, Rational p) : rat(std::move(r)), pi_coeff(std::move(p)) {}
    static PiLin rational(Rational r) { return {std::move(r), Rational(0)}; }
    static PiLin pi_multiple(Rational p) { return {Rational(0), std::move(p)}; }

    bool operator==(const PiLin &o) const
    {
        return rat == o.rat && pi_coeff == o.pi_coeff;
    }
    bool is_zero() const { return rat.is_zero() && pi_coeff.is_zero(); }

    // Sign is decidable: pi is irrational, so rat + c*pi = 0 only when both
    // parts vanish; otherwise a 512-bit evaluation settles it.
    int sign() const
    {
        if (pi_coeff.is_zero())
            return rat.sign();
        if (rat.is_zero())
            return pi_coeff.sign();
        return numeric(512).sign();
    }
    bool operator<(const PiLin &o) const
    {
        return PiLin{rat - o.rat, pi_coeff - o.pi_coeff}.sign() < 0;
    }

    BigFloat numeric(mpfr_prec_t prec) const
    {
        return BigFloat::from_rational(rat, prec) +
               BigFloat::from_rational(pi_coeff, prec) * BigFloat::pi(prec);
    }

    std::string str() const
    {
        if (pi_coeff.is_zero())
            return rat.str();
        std::string p = pi_coeff == Rational(1)
                            ? "pi"
                            : (pi_coeff == Rational(-1) ? "-pi"
                                                        : pi_coeff.str() + "*pi");
        if (rat.is_zero())
            return p;
        return rat.str() + (pi_coeff.sign() > 0 ? " + " : " - ") +
               (pi_coeff.sign() > 0 ? p
                                    : ((-pi_coeff) == Rational(1)
                                           ? "pi"
                                           : (-pi_coeff).str() + "*pi"));
    }
};

struct Bound {
    enum class Kind { NegInf, Finite, PosInf };
    Kind kind = Kind::Finite;
    PiLin value;

    static Bound neg_inf() { return {Kind::NegInf, {}}; }
    static Bound pos_inf() { return {Kind::PosInf, {}}; }
    static Bound finite(PiLin v) { return {Kind::Finite, std::move(v)}; }

    std::string str() const
    {
        switch (kind) {
        case Kind::NegInf:
            return "-inf";
        case Kind::PosInf:
            return "inf";
        default:
            return value.str();
        }
    }
};

struct Interval {
    Bound lo = Bound::neg_inf();
    Bound hi = Bound::pos_inf();

    bool contains_strictly(const PiLin &p) const
    {
        if (lo.kind == Bound::Kind::Finite && !(lo.value < p))
            return false;
        if (hi.kind == Bound::Kind::Finite && !(p < hi.value))
            return false;
        return true;
    }
    std::string str() const { return "(" + lo.str() + ", " + hi.str() + ")"; }
};

enum class ProofMode { Residual, Coincidence, Split };

inline const char *mode_name(ProofMode m)
{
    switch (m) {
    case ProofMode::Residual:
        return "residual";
    case ProofMode::Coincidence:
        return "coincidence";
    case ProofMode::Split:
        return "split";
    }
    return "?";
}

// Syntactic description of the initial value problem attached to an identity:
// y^(m) + a1 y^(m-1) + ... + am y = b with y^(j)(t0) given, on an open
// interval containing t0.
struct IvpDescription {
    int order = 1;
    std::vector<Expr> coeffs; // a1..am
    Expr force;               // b
    PiLin t0;
    std::vector<Expr> initial_values; // y(t0), y'(t0), ...
    Interval interval;
};

// Certification-by-parts description: this identity is the real or imaginary
// part of an already certified complex identity, checked after clearing the
// declared nonvanishing factor and rewriting through the Euler certificate.
struct SplitSpec {
    enum class Part { Real, Imag };
    std::string base;
    Part part = Part::Real;
    Expr clear_factor; // may be null (treated as 1)
    Interval interval;
};

struct SymbolTable {
    std::string ode_var;
    std::vector<std::string> const_syms;
    // Integer parameters with their bound values, in declaration order.
    std::vector<std::pair<std::string, long>> int_params;

    bool is_const(const std::string &n) const
    {
        for (auto &c : const_syms)
            if (c == n)
                return true;
        return false;
    }
    bool is_param(const std::string &n) const
    {
        for (auto &p : int_params)
            if (p.first == n)
                return true;
        return false;
    }
    bool declared(const std::string &n) const
    {
        return n == ode_var || is_const(n) || is_param(n);
    }
    std::map<std::string, long> param_bindings() const
    {
        std::map<std::string, long> m;
        for (auto &p : int_params)
            m[p.first] = p.second;
        return m;
    }
};

struct IdentityDecl {
    std::string name;
    SymbolTable symbols;
    Expr lhs;
    Expr rhs;
    ProofMode mode = ProofMode::Residual;
    std::optional<IvpDescription> ivp;
    std::optional<SplitSpec> split;
    std::vector<std::string> depends;
    std::string comment;
    // The exact DSL text this declaration was parsed from (or printed to, for
    // derived declarations); certificates hash it.
    std::string source;

    const Interval &interval() const
    {
        if (ivp)
            return ivp->interval;
        if (split)
            return split->interval;
        static const Interval whole{};
        return whole;
    }
};

} // namespace ivpcert
