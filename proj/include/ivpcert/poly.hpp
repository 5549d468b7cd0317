#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivpcert/scalar.hpp"

namespace ivpcert {

// Normalized linear atom argument: var_coeff * v + rat + pi_coeff * pi
// + sum of weighted constant symbols. v is the context's ODE variable.
struct LinearArg {
    Rational var_coeff;
    Rational rat;
    Rational pi_coeff;
    std::vector<std::pair<std::string, Rational>> shifts; // sorted, nonzero

    bool is_zero() const
    {
        return var_coeff.is_zero() && rat.is_zero() && pi_coeff.is_zero() &&
               shifts.empty();
    }
    LinearArg negated() const
    {
        LinearArg r{-var_coeff, -rat, -pi_coeff, shifts};
        for (auto &s : r.shifts)
            s.second = -s.second;
        return r;
    }
    // Sign of the leading coefficient in the fixed component order; used to
    // put sin/cos arguments into a canonical half-space.
    int lead_sign() const
    {
        if (!var_coeff.is_zero())
            return var_coeff.sign();
        if (!pi_coeff.is_zero())
            return pi_coeff.sign();
        if (!rat.is_zero())
            return rat.sign();
        for (auto &s : shifts)
            if (!s.second.is_zero())
                return s.second.sign();
        return 0;
    }
    int cmp(const LinearArg &o) const;
    bool operator==(const LinearArg &o) const { return cmp(o) == 0; }
    std::string key() const;
};

// A generator of the polynomial model: the ODE variable, a named constant
// symbol, a trigonometric atom treated as algebraically independent, or one
// of the exponential base atoms (powers of e^{i t/D}, e^{i c/Dc}, ...).
struct Generator {
    enum class Kind {
        OdeVar,   // the active variable
        NamedVar, // constant symbol / inert parameter variable
        SinAtom,
        CosAtom,
        ExpBase,    // e^{i t / D}
        ExpConst,   // e^{i c / Dc}
        ExpRatBase, // e^{i / Dq}
        ExpPiBase,  // e^{i pi / Dpi}
    };
    Kind kind = Kind::OdeVar;
    std::string name; // OdeVar, NamedVar, ExpConst
    LinearArg arg;    // SinAtom, CosAtom

    static Generator ode_var(std::string n)
    {
        return {Kind::OdeVar, std::move(n), {}};
    }
    static Generator named_var(std::string n)
    {
        return {Kind::NamedVar, std::move(n), {}};
    }
    static Generator trig(bool is_sin, LinearArg a)
    {
        return {is_sin ? Kind::SinAtom : Kind::CosAtom, "", std::move(a)};
    }
    static Generator exp_base() { return {Kind::ExpBase, "", {}}; }
    static Generator exp_const(std::string n)
    {
        return {Kind::ExpConst, std::move(n), {}};
    }
    static Generator exp_rat_base() { return {Kind::ExpRatBase, "", {}}; }
    static Generator exp_pi_base() { return {Kind::ExpPiBase, "", {}}; }

    // Negative = earlier in the significance order (ODE variable first).
    int cmp(const Generator &o) const;
    bool operator==(const Generator &o) const { return cmp(o) == 0; }
    std::string key() const;
};

// Power product over generators, most significant generator first.
struct Monomial {
    std::vector<std::pair<Generator, long>> factors; // exponents > 0

    static Monomial one() { return {}; }
    static Monomial of(Generator g, long e = 1)
    {
        Monomial m;
        if (e != 0)
            m.factors.emplace_back(std::move(g), e);
        return m;
    }

    bool is_one() const { return factors.empty(); }
    long degree_of(const Generator &g) const;
    long total_degree() const;

    Monomial mul(const Monomial &o) const;
    std::optional<Monomial> div(const Monomial &o) const;
    Monomial gcd(const Monomial &o) const;
    Monomial pow(long e) const;

    // Lexicographic comparison in the significance order.
    int cmp(const Monomial &o) const;
    bool operator==(const Monomial &o) const { return cmp(o) == 0; }
    std::string key() const;
};

struct MonomialGreater {
    bool operator()(const Monomial &a, const Monomial &b) const
    {
        return a.cmp(b) > 0;
    }
};

// Exact multivariate polynomial over Gaussian rationals. The zero polynomial
// is the empty term map; no zero coefficients are stored.
class MultiPoly {
  public:
    using TermMap = std::map<Monomial, GaussianRational, MonomialGreater>;

    MultiPoly() = default;
    static MultiPoly constant(GaussianRational c)
    {
        MultiPoly p;
        if (!c.is_zero())
            p.terms_[Monomial::one()] = std::move(c);
        return p;
    }
    static MultiPoly generator(Generator g, long e = 1)
    {
        MultiPoly p;
        p.terms_[Monomial::of(std::move(g), e)] = GaussianRational(1);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const
    {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_.begin()->first.is_one());
    }
    GaussianRational constant_value() const
    {
        if (terms_.empty())
            return GaussianRational(0);
        return terms_.begin()->second;
    }
    size_t term_count() const { return terms_.size(); }
    const TermMap &terms() const { return terms_; }

    const Monomial &leading_monomial() const { return terms_.begin()->first; }
    const GaussianRational &leading_coeff() const
    {
        return terms_.begin()->second;
    }

    void add_term(const Monomial &m, const GaussianRational &c);

    MultiPoly operator-() const;
    MultiPoly operator+(const MultiPoly &o) const;
    MultiPoly operator-(const MultiPoly &o) const;
    MultiPoly operator*(const MultiPoly &o) const;
    MultiPoly scaled(const GaussianRational &c) const;
    MultiPoly mono_scaled(const Monomial &m) const;
    MultiPoly pow(long e) const; // e >= 0

    MultiPoly conj() const;

    bool operator==(const MultiPoly &o) const;

    long degree_of(const Generator &g) const;
    std::vector<Generator> generators() const;
    bool contains_generator_kind(Generator::Kind k) const;

    std::string str() const; // debug / diagnostics

  private:
    TermMap terms_;
};

// Exact division; nullopt when g does not divide f.
std::optional<MultiPoly> divide_exact(const MultiPoly &f, const MultiPoly &g);

// Monic gcd (leading coefficient 1). gcd(0, g) = monic g; gcd of constants
// is 1.
MultiPoly poly_gcd(const MultiPoly &f, const MultiPoly &g);

} // namespace ivpcert
