#include "ivpcert/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ivpcert {

namespace {

int rat_cmp(const Rational &a, const Rational &b)
{
    if (a < b)
        return -1;
    if (b < a)
        return 1;
    return 0;
}

} // namespace

int LinearArg::cmp(const LinearArg &o) const
{
    if (int c = rat_cmp(var_coeff, o.var_coeff))
        return c;
    if (int c = rat_cmp(rat, o.rat))
        return c;
    if (int c = rat_cmp(pi_coeff, o.pi_coeff))
        return c;
    size_t n = std::min(shifts.size(), o.shifts.size());
    for (size_t i = 0; i < n; ++i) {
        if (shifts[i].first != o.shifts[i].first)
            return shifts[i].first < o.shifts[i].first ? -1 : 1;
        if (int c = rat_cmp(shifts[i].second, o.shifts[i].second))
            return c;
    }
    if (shifts.size() != o.shifts.size())
        return shifts.size() < o.shifts.size() ? -1 : 1;
    return 0;
}

std::string LinearArg::key() const
{
    std::string s = var_coeff.cert_str() + "|" + rat.cert_str() + "|" +
                    pi_coeff.cert_str();
    for (auto &[name, w] : shifts)
        s += "|" + name + "*" + w.cert_str();
    return s;
}

int Generator::cmp(const Generator &o) const
{
    if (kind != o.kind)
        return static_cast<int>(kind) < static_cast<int>(o.kind) ? -1 : 1;
    switch (kind) {
    case Kind::OdeVar:
    case Kind::NamedVar:
    case Kind::ExpConst:
        return name == o.name ? 0 : (name < o.name ? -1 : 1);
    case Kind::SinAtom:
    case Kind::CosAtom:
        return arg.cmp(o.arg);
    default:
        return 0;
    }
}

std::string Generator::key() const
{
    switch (kind) {
    case Kind::OdeVar:
        return "v:" + name;
    case Kind::NamedVar:
        return "c:" + name;
    case Kind::SinAtom:
        return "sin:" + arg.key();
    case Kind::CosAtom:
        return "cos:" + arg.key();
    case Kind::ExpBase:
        return "E";
    case Kind::ExpConst:
        return "Ec:" + name;
    case Kind::ExpRatBase:
        return "Eq";
    case Kind::ExpPiBase:
        return "Epi";
    }
    return "?";
}

long Monomial::degree_of(const Generator &g) const
{
    for (auto &[gen, e] : factors)
        if (gen == g)
            return e;
    return 0;
}

long Monomial::total_degree() const
{
    long d = 0;
    for (auto &[gen, e] : factors)
        d += e;
    return d;
}

Monomial Monomial::mul(const Monomial &o) const
{
    Monomial r;
    size_t i = 0, j = 0;
    while (i < factors.size() || j < o.factors.size()) {
        if (j == o.factors.size() ||
            (i < factors.size() &&
             factors[i].first.cmp(o.factors[j].first) < 0)) {
            r.factors.push_back(factors[i++]);
        } else if (i == factors.size() ||
                   factors[i].first.cmp(o.factors[j].first) > 0) {
            r.factors.push_back(o.factors[j++]);
        } else {
            long e = factors[i].second + o.factors[j].second;
            if (e != 0)
                r.factors.emplace_back(factors[i].first, e);
            ++i;
            ++j;
        }
    }
    return r;
}

std::optional<Monomial> Monomial::div(const Monomial &o) const
{
    Monomial r;
    size_t i = 0, j = 0;
    while (i < factors.size() || j < o.factors.size()) {
        if (j == o.factors.size()) {
            r.factors.push_back(factors[i++]);
        } else if (i == factors.size()) {
            return std::nullopt;
        } else {
            int c = factors[i].first.cmp(o.factors[j].first);
            if (c < 0) {
                r.factors.push_back(factors[i++]);
            } else if (c > 0) {
                return std::nullopt;
            } else {
                long e = factors[i].second - o.factors[j].second;
                if (e < 0)
                    return std::nullopt;
                if (e > 0)
                    r.factors.emplace_back(factors[i].first, e);
                ++i;
                ++j;
            }
        }
    }
    return r;
}

Monomial Monomial::gcd(const Monomial &o) const
{
    Monomial r;
    size_t i = 0, j = 0;
    while (i < factors.size() && j < o.factors.size()) {
        int c = factors[i].first.cmp(o.factors[j].first);
        if (c < 0)
            ++i;
        else if (c > 0)
            ++j;
        else {
            long e = std::min(factors[i].second, o.factors[j].second);
            if (e > 0)
                r.factors.emplace_back(factors[i].first, e);
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::pow(long e) const
{
    if (e < 0)
        throw std::logic_error("Monomial::pow: negative exponent");
    Monomial r;
    if (e == 0)
        return r;
    r.factors = factors;
    for (auto &f : r.factors)
        f.second *= e;
    return r;
}

int Monomial::cmp(const Monomial &o) const
{
    size_t i = 0, j = 0;
    while (i < factors.size() || j < o.factors.size()) {
        if (i == factors.size())
            return -1;
        if (j == o.factors.size())
            return 1;
        int gc = factors[i].first.cmp(o.factors[j].first);
        if (gc < 0)
            return 1; // this has a more significant generator
        if (gc > 0)
            return -1;
        if (factors[i].second != o.factors[j].second)
            return factors[i].second > o.factors[j].second ? 1 : -1;
        ++i;
        ++j;
    }
    return 0;
}

std::string Monomial::key() const
{
    if (factors.empty())
        return "1";
    std::string s;
    for (auto &[g, e] : factors) {
        if (!s.empty())
            s += " ";
        s += g.key();
        if (e != 1)
            s += "^" + std::to_string(e);
    }
    return s;
}

void MultiPoly::add_term(const Monomial &m, const GaussianRational &c)
{
    if (c.is_zero())
        return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator-() const
{
    MultiPoly r;
    for (auto &[m, c] : terms_)
        r.terms_.emplace(m, -c);
    return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly &o) const
{
    MultiPoly r = *this;
    for (auto &[m, c] : o.terms_)
        r.add_term(m, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly &o) const
{
    MultiPoly r = *this;
    for (auto &[m, c] : o.terms_)
        r.add_term(m, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly &o) const
{
    MultiPoly r;
    for (auto &[m1, c1] : terms_)
        for (auto &[m2, c2] : o.terms_)
            r.add_term(m1.mul(m2), c1 * c2);
    return r;
}

MultiPoly MultiPoly::scaled(const GaussianRational &c) const
{
    MultiPoly r;
    if (c.is_zero())
        return r;
    for (auto &[m, v] : terms_)
        r.terms_.emplace(m, v * c);
    return r;
}

MultiPoly MultiPoly::mono_scaled(const Monomial &m) const
{
    MultiPoly r;
    for (auto &[mm, v] : terms_)
        r.terms_.emplace(mm.mul(m), v);
    return r;
}

MultiPoly MultiPoly::pow(long e) const
{
    if (e < 0)
        throw std::logic_error("MultiPoly::pow: negative exponent");
    MultiPoly acc = constant(GaussianRational(1));
    MultiPoly base = *this;
    while (e) {
        if (e & 1)
            acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

MultiPoly MultiPoly::conj() const
{
    MultiPoly r;
    for (auto &[m, c] : terms_)
        r.terms_.emplace(m, c.conj());
    return r;
}

bool MultiPoly::operator==(const MultiPoly &o) const
{
    if (terms_.size() != o.terms_.size())
        return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt) {
        if (!(it->first == jt->first) || it->second != jt->second)
            return false;
    }
    return true;
}

long MultiPoly::degree_of(const Generator &g) const
{
    long d = 0;
    for (auto &[m, c] : terms_)
        d = std::max(d, m.degree_of(g));
    return d;
}

std::vector<Generator> MultiPoly::generators() const
{
    std::vector<Generator> gens;
    for (auto &[m, c] : terms_)
        for (auto &[g, e] : m.factors) {
            bool found = false;
            for (auto &h : gens)
                if (h == g) {
                    found = true;
                    break;
                }
            if (!found)
                gens.push_back(g);
        }
    std::sort(gens.begin(), gens.end(),
              [](const Generator &a, const Generator &b) { return a.cmp(b) < 0; });
    return gens;
}

bool MultiPoly::contains_generator_kind(Generator::Kind k) const
{
    for (auto &[m, c] : terms_)
        for (auto &[g, e] : m.factors)
            if (g.kind == k)
                return true;
    return false;
}

std::string MultiPoly::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto &[m, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        if (!m.is_one())
            os << "*" << m.key();
    }
    return os.str();
}

std::optional<MultiPoly> divide_exact(const MultiPoly &f, const MultiPoly &g)
{
    if (g.is_zero())
        return std::nullopt;
    MultiPoly q;
    MultiPoly r = f;
    const Monomial &gm = g.leading_monomial();
    const GaussianRational &gc = g.leading_coeff();
    while (!r.is_zero()) {
        auto qm = r.leading_monomial().div(gm);
        if (!qm)
            return std::nullopt;
        GaussianRational qc = r.leading_coeff() / gc;
        MultiPoly t;
        t.add_term(*qm, qc);
        q = q + t;
        r = r - g * t;
    }
    return q;
}

namespace {

// Views a polynomial as univariate in `main` with polynomial coefficients.
std::map<long, MultiPoly> univariate_view(const MultiPoly &f,
                                          const Generator &main)
{
    std::map<long, MultiPoly> coeffs;
    for (auto &[m, c] : f.terms()) {
        long d = m.degree_of(main);
        Monomial rest;
        for (auto &[g, e] : m.factors)
            if (!(g == main))
                rest.factors.emplace_back(g, e);
        coeffs[d].add_term(rest, c);
    }
    return coeffs;
}

MultiPoly from_univariate(const std::map<long, MultiPoly> &coeffs,
                          const Generator &main)
{
    MultiPoly f;
    for (auto &[d, p] : coeffs) {
        MultiPoly xm =
            d == 0 ? MultiPoly::constant(GaussianRational(1))
                   : MultiPoly::generator(main, d);
        f = f + p * xm;
    }
    return f;
}

long uni_degree(const std::map<long, MultiPoly> &u)
{
    return u.empty() ? -1 : u.rbegin()->first;
}

// Content of a univariate-view polynomial: recursive gcd of coefficients.
MultiPoly uni_content(const std::map<long, MultiPoly> &u)
{
    MultiPoly c;
    for (auto &[d, p] : u) {
        c = poly_gcd(c, p);
        if (c.is_constant() && !c.is_zero())
            break;
    }
    return c;
}

std::map<long, MultiPoly> uni_divide(const std::map<long, MultiPoly> &u,
                                     const MultiPoly &d)
{
    std::map<long, MultiPoly> r;
    for (auto &[deg, p] : u) {
        auto q = divide_exact(p, d);
        if (!q)
            throw std::logic_error("content division failed");
        if (!q->is_zero())
            r[deg] = *q;
    }
    return r;
}

// Pseudo-remainder of a by b in the main variable.
std::map<long, MultiPoly> uni_prem(std::map<long, MultiPoly> a,
                                   const std::map<long, MultiPoly> &b)
{
    long db = uni_degree(b);
    const MultiPoly &lb = b.rbegin()->second;
    while (true) {
        long da = uni_degree(a);
        if (da < db)
            return a;
        const MultiPoly la = a.rbegin()->second;
        // a := lb*a - la*x^(da-db)*b
        std::map<long, MultiPoly> next;
        for (auto &[d, p] : a) {
            MultiPoly v = p * lb;
            if (!v.is_zero())
                next[d] = v;
        }
        for (auto &[d, p] : b) {
            long dd = d + da - db;
            MultiPoly v = p * la;
            auto it = next.find(dd);
            if (it == next.end()) {
                if (!v.is_zero())
                    next[dd] = -v;
            } else {
                it->second = it->second - v;
                if (it->second.is_zero())
                    next.erase(it);
            }
        }
        a = std::move(next);
        if (uni_degree(a) >= da)
            throw std::logic_error("pseudo-division did not reduce degree");
    }
}

MultiPoly monic(const MultiPoly &f)
{
    if (f.is_zero())
        return f;
    return f.scaled(f.leading_coeff().inv());
}

} // namespace

MultiPoly poly_gcd(const MultiPoly &f, const MultiPoly &g)
{
    if (f.is_zero())
        return monic(g);
    if (g.is_zero())
        return monic(f);
    if (f.is_constant() || g.is_constant())
        return MultiPoly::constant(GaussianRational(1));

    // Split off the common monomial factor first; it is cheap and keeps the
    // recursion shallow for the sparse polynomials this engine produces.
    Monomial mf = f.leading_monomial();
    for (auto &[m, c] : f.terms())
        mf = mf.gcd(m);
    Monomial mg = g.leading_monomial();
    for (auto &[m, c] : g.terms())
        mg = mg.gcd(m);
    Monomial common = mf.gcd(mg);

    MultiPoly f1 = f, g1 = g;
    if (!mf.is_one()) {
        MultiPoly d;
        d.add_term(mf, GaussianRational(1));
        f1 = *divide_exact(f, d);
    }
    if (!mg.is_one()) {
        MultiPoly d;
        d.add_term(mg, GaussianRational(1));
        g1 = *divide_exact(g, d);
    }

    MultiPoly base;
    if (f1.is_constant() || g1.is_constant()) {
        base = MultiPoly::constant(GaussianRational(1));
    } else {
        // Main variable: the most significant generator present in either.
        std::vector<Generator> gens = f1.generators();
        for (auto &h : g1.generators())
            gens.push_back(h);
        Generator main = gens[0];
        for (auto &h : gens)
            if (h.cmp(main) < 0)
                main = h;

        auto uf = univariate_view(f1, main);
        auto ug = univariate_view(g1, main);
        if (uni_degree(uf) == 0 || uni_degree(ug) == 0) {
            // One input is free of the main variable: gcd with the other's
            // content.
            MultiPoly cf = uni_content(uf);
            MultiPoly cg = uni_content(ug);
            base = poly_gcd(cf, cg);
        } else {
            MultiPoly cf = uni_content(uf);
            MultiPoly cg = uni_content(ug);
            auto pf = uni_divide(uf, cf);
            auto pg = uni_divide(ug, cg);
            if (uni_degree(pf) < uni_degree(pg))
                std::swap(pf, pg);
            while (true) {
                auto r = uni_prem(pf, pg);
                if (r.empty()) {
                    base = from_univariate(pg, main);
                    break;
                }
                if (uni_degree(r) == 0) {
                    base = MultiPoly::constant(GaussianRational(1));
                    break;
                }
                MultiPoly cr = uni_content(r);
                pf = std::move(pg);
                pg = uni_divide(r, cr);
            }
            if (!base.is_constant()) {
                MultiPoly pc = uni_content(univariate_view(base, main));
                base = *divide_exact(base, pc);
            }
            base = base * poly_gcd(cf, cg);
        }
    }

    if (!common.is_one()) {
        MultiPoly cm;
        cm.add_term(common, GaussianRational(1));
        base = base * cm;
    }
    return monic(base);
}

} // namespace ivpcert
