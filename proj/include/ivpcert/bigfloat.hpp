#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "ivpcert/scalar.hpp"

namespace ivpcert {

// RAII wrapper over an mpfr_t. Every value carries its precision; binary
// operations produce results at the wider of the two operand precisions.
class BigFloat {
  public:
    explicit BigFloat(mpfr_prec_t prec = 128)
    {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(const BigFloat &o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat &&o) noexcept
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat &operator=(BigFloat o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_long(long x, mpfr_prec_t prec)
    {
        BigFloat r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static BigFloat from_rational(const Rational &q, mpfr_prec_t prec)
    {
        BigFloat r(prec);
        mpfr_set_q(r.v_, q.raw().get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static BigFloat pi(mpfr_prec_t prec)
    {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    // x * 2^e, useful for tiny thresholds like 2^-128.
    static BigFloat pow2(long e, mpfr_prec_t prec)
    {
        BigFloat r(prec);
        mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }
    // Parses decimal, e.g. "1e-50".
    static BigFloat parse(const std::string &s, mpfr_prec_t prec)
    {
        BigFloat r(prec);
        mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }
    // Rough magnitude: exponent e with |x| ~ 2^e. Zero => very small.
    long exp2() const
    {
        if (mpfr_zero_p(v_))
            return -1000000000L;
        return static_cast<long>(mpfr_get_exp(v_));
    }

    BigFloat operator-() const
    {
        BigFloat r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

#define IVPCERT_BF_BINOP(opname, fn)                                          \
    BigFloat opname(const BigFloat &o) const                                  \
    {                                                                         \
        BigFloat r(std::max(precision(), o.precision()));                     \
        fn(r.v_, v_, o.v_, MPFR_RNDN);                                        \
        return r;                                                             \
    }
    IVPCERT_BF_BINOP(operator+, mpfr_add)
    IVPCERT_BF_BINOP(operator-, mpfr_sub)
    IVPCERT_BF_BINOP(operator*, mpfr_mul)
    IVPCERT_BF_BINOP(operator/, mpfr_div)
#undef IVPCERT_BF_BINOP

    BigFloat sin() const { return unary(mpfr_sin); }
    BigFloat cos() const { return unary(mpfr_cos); }
    BigFloat exp() const { return unary(mpfr_exp); }
    BigFloat abs() const { return unary(mpfr_abs); }
    BigFloat sqrt() const { return unary(mpfr_sqrt); }

    BigFloat round_to(mpfr_prec_t prec) const
    {
        BigFloat r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    int cmp(const BigFloat &o) const { return mpfr_cmp(v_, o.v_); }
    bool operator<(const BigFloat &o) const { return cmp(o) < 0; }
    bool operator>(const BigFloat &o) const { return cmp(o) > 0; }
    bool operator<=(const BigFloat &o) const { return cmp(o) <= 0; }
    bool operator>=(const BigFloat &o) const { return cmp(o) >= 0; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    std::string str(int digits = 40) const
    {
        char fmt[32];
        std::snprintf(fmt, sizeof(fmt), "%%.%dRe", digits);
        char buf[128 + 64];
        mpfr_snprintf(buf, sizeof(buf), fmt, v_);
        return buf;
    }

  private:
    using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
    BigFloat unary(UnaryFn fn) const
    {
        BigFloat r(precision());
        fn(r.v_, v_, MPFR_RNDN);
        return r;
    }
    mpfr_t v_;
};

struct BigComplex {
    BigFloat re, im;

    explicit BigComplex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

    static BigComplex from_gaussian(const GaussianRational &g,
                                    mpfr_prec_t prec)
    {
        return {BigFloat::from_rational(g.re, prec),
                BigFloat::from_rational(g.im, prec)};
    }
    static BigComplex from_real(BigFloat r)
    {
        BigFloat z(r.precision());
        return {std::move(r), std::move(z)};
    }
    // e^{i*theta} for real theta.
    static BigComplex expi(const BigFloat &theta)
    {
        return {theta.cos(), theta.sin()};
    }

    BigComplex operator-() const { return {-re, -im}; }
    BigComplex operator+(const BigComplex &o) const
    {
        return {re + o.re, im + o.im};
    }
    BigComplex operator-(const BigComplex &o) const
    {
        return {re - o.re, im - o.im};
    }
    BigComplex operator*(const BigComplex &o) const
    {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }

    // |z|^2, exact in the working precision.
    BigFloat norm2() const { return re * re + im * im; }
    BigFloat modulus() const { return norm2().sqrt(); }

    BigComplex conj() const { return {re, -im}; }

    // Throws nothing; caller is responsible for pole checks via norm2().
    BigComplex inv() const
    {
        BigFloat n = norm2();
        return {re / n, -im / n};
    }
    BigComplex operator/(const BigComplex &o) const { return *this * o.inv(); }

    BigComplex pow_int(long e) const
    {
        mpfr_prec_t prec =
            std::max(re.precision(), im.precision());
        BigComplex acc(prec);
        acc.re = BigFloat::from_long(1, prec);
        if (e == 0)
            return acc;
        BigComplex b = e > 0 ? *this : inv();
        unsigned long a = static_cast<unsigned long>(std::labs(e));
        while (a) {
            if (a & 1)
                acc = acc * b;
            b = b * b;
            a >>= 1;
        }
        return acc;
    }
};

} // namespace ivpcert
