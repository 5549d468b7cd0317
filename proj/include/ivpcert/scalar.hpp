#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ivpcert {

// Exact rational scalar. Always kept canonical: gcd(num, den) = 1, den >= 1,
// zero is 0/1.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(const mpz_class &n) : v_(n) {}
    Rational(const mpz_class &num, const mpz_class &den)
    {
        if (den == 0)
            throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

    // Accepts "p" or "p/q".
    static Rational parse(const std::string &s)
    {
        auto slash = s.find('/');
        if (slash == std::string::npos)
            return Rational(mpz_class(s));
        return Rational(mpz_class(s.substr(0, slash)),
                        mpz_class(s.substr(slash + 1)));
    }

    const mpz_class numerator() const { return v_.get_num(); }
    const mpz_class denominator() const { return v_.get_den(); }
    const mpq_class &raw() const { return v_; }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_half_integer() const
    {
        return v_.get_den() == 1 || v_.get_den() == 2;
    }
    int sign() const { return sgn(v_); }

    // Requires is_integer() and fit in long.
    long to_long() const
    {
        if (!is_integer() || !v_.get_num().fits_slong_p())
            throw std::domain_error("Rational: not a machine integer: " +
                                    str());
        return v_.get_num().get_si();
    }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational operator+(const Rational &o) const
    {
        return Rational(mpq_class(v_ + o.v_));
    }
    Rational operator-(const Rational &o) const
    {
        return Rational(mpq_class(v_ - o.v_));
    }
    Rational operator*(const Rational &o) const
    {
        return Rational(mpq_class(v_ * o.v_));
    }
    Rational operator/(const Rational &o) const
    {
        if (o.is_zero())
            throw std::domain_error("Rational: division by zero");
        return Rational(mpq_class(v_ / o.v_));
    }
    Rational &operator+=(const Rational &o) { v_ += o.v_; return *this; }
    Rational &operator-=(const Rational &o) { v_ -= o.v_; return *this; }
    Rational &operator*=(const Rational &o) { v_ *= o.v_; return *this; }

    Rational inv() const
    {
        if (is_zero())
            throw std::domain_error("Rational: inverse of zero");
        return Rational(mpq_class(1 / v_));
    }

    bool operator==(const Rational &o) const { return v_ == o.v_; }
    bool operator!=(const Rational &o) const { return v_ != o.v_; }
    bool operator<(const Rational &o) const { return v_ < o.v_; }
    bool operator<=(const Rational &o) const { return v_ <= o.v_; }
    bool operator>(const Rational &o) const { return v_ > o.v_; }
    bool operator>=(const Rational &o) const { return v_ >= o.v_; }

    // "p" or "p/q".
    std::string str() const
    {
        if (is_integer())
            return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }
    // Always "p/q" (certificate form).
    std::string cert_str() const
    {
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

  private:
    explicit Rational(mpq_class v) : v_(std::move(v)) {}
    mpq_class v_;
};

inline Rational pow_int(const Rational &base, long e)
{
    if (e == 0)
        return Rational(1);
    mpz_class n = base.numerator(), d = base.denominator();
    unsigned long a = static_cast<unsigned long>(std::labs(e));
    mpz_class np, dp;
    mpz_pow_ui(np.get_mpz_t(), n.get_mpz_t(), a);
    mpz_pow_ui(dp.get_mpz_t(), d.get_mpz_t(), a);
    if (e > 0)
        return Rational(np, dp);
    if (n == 0)
        throw std::domain_error("Rational: negative power of zero");
    return Rational(dp, np);
}

inline mpz_class lcm(const mpz_class &a, const mpz_class &b)
{
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline mpz_class binomial(long n, long k)
{
    if (n < 0)
        throw std::domain_error("binomial: negative upper index");
    if (k < 0 || k > n)
        return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

// Complex number with rational real and imaginary parts. Componentwise
// equality; a multiplicative inverse exists iff re^2 + im^2 != 0.
struct GaussianRational {
    Rational re, im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(Rational r, Rational i)
        : re(std::move(r)), im(std::move(i))
    {
    }

    static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }
    bool is_one() const { return im.is_zero() && re == Rational(1); }

    GaussianRational conj() const { return {re, -im}; }

    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational operator+(const GaussianRational &o) const
    {
        return {re + o.re, im + o.im};
    }
    GaussianRational operator-(const GaussianRational &o) const
    {
        return {re - o.re, im - o.im};
    }
    GaussianRational operator*(const GaussianRational &o) const
    {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussianRational inv() const
    {
        Rational n = re * re + im * im;
        if (n.is_zero())
            throw std::domain_error("GaussianRational: inverse of zero");
        return {re / n, -im / n};
    }
    GaussianRational operator/(const GaussianRational &o) const
    {
        return *this * o.inv();
    }
    GaussianRational &operator+=(const GaussianRational &o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }

    bool operator==(const GaussianRational &o) const
    {
        return re == o.re && im == o.im;
    }
    bool operator!=(const GaussianRational &o) const { return !(*this == o); }

    std::string str() const
    {
        if (im.is_zero())
            return re.str();
        std::string i_part =
            im == Rational(1) ? "i"
                              : (im == Rational(-1) ? "-i" : im.str() + "*i");
        if (re.is_zero())
            return i_part;
        if (im.sign() > 0)
            return re.str() + " + " + (im == Rational(1) ? "i" : im.str() + "*i");
        Rational m = -im;
        return re.str() + " - " + (m == Rational(1) ? "i" : m.str() + "*i");
    }
};

inline GaussianRational pow_int(const GaussianRational &base, long e)
{
    if (e == 0)
        return GaussianRational(1);
    GaussianRational b = e > 0 ? base : base.inv();
    unsigned long a = static_cast<unsigned long>(std::labs(e));
    GaussianRational acc(1);
    while (a) {
        if (a & 1)
            acc = acc * b;
        b = b * b;
        a >>= 1;
    }
    return acc;
}

} // namespace ivpcert
