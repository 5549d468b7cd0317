#include "ivpcert/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace ivpcert {

namespace {

struct Token {
    enum class Kind { Ident, Int, Punct, String, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string &src) : src_(src) { advance(); }

    const Token &peek() const { return cur_; }
    Token take()
    {
        Token t = cur_;
        advance();
        return t;
    }
    [[noreturn]] void fail(const std::string &msg) const
    {
        throw ParseError(msg, cur_.line, cur_.col);
    }
    // Byte offset of the current token, for source-span capture.
    size_t offset() const { return tok_start_; }

  private:
    void advance()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
        tok_start_ = pos_;
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Token::Kind::End;
            cur_.text = "<eof>";
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t s = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_'))
                ++pos_;
            cur_.kind = Token::Kind::Ident;
            cur_.text = src_.substr(s, pos_ - s);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t s = pos_;
            while (pos_ < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            cur_.kind = Token::Kind::Int;
            cur_.text = src_.substr(s, pos_ - s);
        } else if (c == '"') {
            size_t s = ++pos_;
            while (pos_ < src_.size() && src_[pos_] != '"')
                ++pos_;
            if (pos_ >= src_.size())
                throw ParseError("unterminated string", line_, col_);
            cur_.kind = Token::Kind::String;
            cur_.text = src_.substr(s, pos_ - s);
            ++pos_;
        } else {
            cur_.kind = Token::Kind::Punct;
            cur_.text = std::string(1, c);
            ++pos_;
        }
        col_ += static_cast<int>(pos_ - tok_start_);
    }

    const std::string &src_;
    size_t pos_ = 0;
    size_t tok_start_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token cur_;
};

class Parser {
  public:
    explicit Parser(const std::string &src) : src_(src), lex_(src) {}

    std::vector<IdentityDecl> file()
    {
        std::vector<IdentityDecl> decls;
        while (lex_.peek().kind != Token::Kind::End) {
            size_t start = lex_.offset();
            decls.push_back(identity(start));
        }
        std::set<std::string> names;
        for (auto &d : decls)
            if (!names.insert(d.name).second)
                throw ParseError("duplicate identity declaration '" + d.name +
                                     "'",
                                 1, 1);
        check_acyclic(decls);
        return decls;
    }

    Expr expr_only(const SymbolTable &symbols)
    {
        table_ = symbols;
        Expr e = expression();
        expect_end();
        return e;
    }

  private:
    IdentityDecl identity(size_t start)
    {
        expect_ident("identity");
        IdentityDecl decl;
        decl.name = expect_name("identity name");
        expect_punct("{");
        table_ = SymbolTable{};
        bool have_lhs = false, have_rhs = false;
        while (!try_punct("}")) {
            Token t = lex_.peek();
            if (t.kind != Token::Kind::Ident)
                lex_.fail("expected a clause keyword, got '" + t.text + "'");
            std::string kw = lex_.take().text;
            if (kw == "var") {
                if (!table_.ode_var.empty())
                    lex_.fail("duplicate var clause");
                table_.ode_var = declare(expect_name("variable name"));
                expect_punct(";");
            } else if (kw == "param") {
                std::string p = declare(expect_name("parameter name"));
                expect_punct("=");
                long v = signed_int("parameter value");
                table_.int_params.emplace_back(p, v);
                expect_punct(";");
            } else if (kw == "const") {
                table_.const_syms.push_back(declare(expect_name("const name")));
                while (try_punct(","))
                    table_.const_syms.push_back(
                        declare(expect_name("const name")));
                expect_punct(";");
            } else if (kw == "lhs") {
                expect_punct(":");
                decl.lhs = expression();
                have_lhs = true;
                expect_punct(";");
            } else if (kw == "rhs") {
                expect_punct(":");
                decl.rhs = expression();
                have_rhs = true;
                expect_punct(";");
            } else if (kw == "mode") {
                expect_punct(":");
                std::string m = expect_name("mode");
                if (m == "residual")
                    decl.mode = ProofMode::Residual;
                else if (m == "coincidence")
                    decl.mode = ProofMode::Coincidence;
                else
                    lex_.fail("unknown mode '" + m +
                              "' (expected residual or coincidence)");
                expect_punct(";");
            } else if (kw == "ivp") {
                decl.ivp = ivp_block();
            } else if (kw == "split") {
                decl.split = split_block();
                decl.mode = ProofMode::Split;
            } else if (kw == "depends") {
                expect_punct(":");
                expect_punct("[");
                if (!try_punct("]")) {
                    decl.depends.push_back(expect_name("dependency name"));
                    while (try_punct(","))
                        decl.depends.push_back(expect_name("dependency name"));
                    expect_punct("]");
                }
                expect_punct(";");
            } else if (kw == "comment") {
                expect_punct(":");
                Token s = lex_.take();
                if (s.kind != Token::Kind::String)
                    throw ParseError("expected a string literal", s.line, s.col);
                decl.comment = s.text;
                expect_punct(";");
            } else {
                lex_.fail("unknown clause '" + kw + "'");
            }
        }
        if (table_.ode_var.empty())
            lex_.fail("identity '" + decl.name + "' has no var clause");
        if (!have_lhs || !have_rhs)
            lex_.fail("identity '" + decl.name + "' needs both lhs and rhs");
        if (decl.ivp && decl.split)
            lex_.fail("identity '" + decl.name +
                      "' declares both ivp and split");
        if (!decl.ivp && !decl.split)
            lex_.fail("identity '" + decl.name + "' needs an ivp or split block");
        decl.symbols = table_;
        decl.source = src_.substr(start, lex_.offset() - start);
        trim(decl.source);
        return decl;
    }

    IvpDescription ivp_block()
    {
        IvpDescription ivp;
        expect_punct("{");
        bool have_order = false, have_at = false, have_interval = false;
        while (!try_punct("}")) {
            std::string kw = expect_name("ivp clause");
            if (kw == "order") {
                expect_punct(":");
                ivp.order = static_cast<int>(signed_int("order"));
                if (ivp.order < 1)
                    lex_.fail("ivp order must be >= 1");
                have_order = true;
                expect_punct(";");
            } else if (kw == "coeff") {
                // Optional bracket form: coeff[1..m]:
                if (try_punct("[")) {
                    long lo = signed_int("coeff range");
                    expect_punct(".");
                    expect_punct(".");
                    long hi = signed_int("coeff range");
                    expect_punct("]");
                    if (lo != 1 || (have_order && hi != ivp.order))
                        lex_.fail("coeff range must be [1..order]");
                }
                expect_punct(":");
                ivp.coeffs.push_back(expression());
                while (try_punct(","))
                    ivp.coeffs.push_back(expression());
                expect_punct(";");
            } else if (kw == "force") {
                expect_punct(":");
                ivp.force = expression();
                expect_punct(";");
            } else if (kw == "at") {
                expect_punct(":");
                ivp.t0 = pilin_value();
                have_at = true;
                expect_punct(";");
            } else if (kw == "values") {
                expect_punct(":");
                ivp.initial_values.push_back(expression());
                while (try_punct(","))
                    ivp.initial_values.push_back(expression());
                expect_punct(";");
            } else if (kw == "interval") {
                expect_punct(":");
                ivp.interval = interval_value();
                have_interval = true;
                expect_punct(";");
            } else {
                lex_.fail("unknown ivp clause '" + kw + "'");
            }
        }
        if (!have_order)
            lex_.fail("ivp block needs an order");
        if (!have_at || !have_interval)
            lex_.fail("ivp block needs 'at' and 'interval'");
        if (static_cast<int>(ivp.coeffs.size()) != ivp.order)
            lex_.fail("expected " + std::to_string(ivp.order) +
                      " coefficients, got " + std::to_string(ivp.coeffs.size()));
        if (static_cast<int>(ivp.initial_values.size()) != ivp.order)
            lex_.fail("expected " + std::to_string(ivp.order) +
                      " initial values, got " +
                      std::to_string(ivp.initial_values.size()));
        if (!ivp.force)
            ivp.force = num(0);
        return ivp;
    }

    SplitSpec split_block()
    {
        SplitSpec sp;
        expect_punct("{");
        bool have_of = false, have_part = false, have_interval = false;
        while (!try_punct("}")) {
            std::string kw = expect_name("split clause");
            if (kw == "of") {
                expect_punct(":");
                sp.base = expect_name("base identity");
                have_of = true;
                expect_punct(";");
            } else if (kw == "part") {
                expect_punct(":");
                std::string p = expect_name("part");
                if (p == "real")
                    sp.part = SplitSpec::Part::Real;
                else if (p == "imag")
                    sp.part = SplitSpec::Part::Imag;
                else
                    lex_.fail("part must be real or imag");
                have_part = true;
                expect_punct(";");
            } else if (kw == "clear") {
                expect_punct(":");
                sp.clear_factor = expression();
                expect_punct(";");
            } else if (kw == "interval") {
                expect_punct(":");
                sp.interval = interval_value();
                have_interval = true;
                expect_punct(";");
            } else {
                lex_.fail("unknown split clause '" + kw + "'");
            }
        }
        if (!have_of || !have_part)
            lex_.fail("split block needs 'of' and 'part'");
        if (!have_interval)
            sp.interval = Interval{};
        return sp;
    }

    // ---- expressions ----

    Expr expression()
    {
        Expr e = term();
        for (;;) {
            if (try_punct("+"))
                e = add(e, term());
            else if (try_punct("-"))
                e = sub(e, term());
            else
                return e;
        }
    }

    Expr term()
    {
        Expr e = unary();
        for (;;) {
            if (try_punct("*"))
                e = mul(e, unary());
            else if (try_punct("/"))
                e = div(e, unary());
            else
                return e;
        }
    }

    Expr unary()
    {
        if (try_punct("-"))
            return neg(unary());
        return postfix();
    }

    Expr postfix()
    {
        Expr e = primary();
        if (try_punct("^"))
            return power(e, exponent());
        return e;
    }

    Expr exponent()
    {
        Token t = lex_.peek();
        if (t.kind == Token::Kind::Int)
            return num(std::stol(lex_.take().text));
        if (try_punct("-")) {
            Token u = lex_.peek();
            if (u.kind == Token::Kind::Int)
                return num(-std::stol(lex_.take().text));
            if (u.kind == Token::Kind::Ident)
                return neg(symbol_ref(lex_.take()));
            lex_.fail("expected an integer exponent");
        }
        if (t.kind == Token::Kind::Ident)
            return symbol_ref(lex_.take());
        if (try_punct("("))
        {
            Expr e = expression();
            expect_punct(")");
            return e;
        }
        lex_.fail("expected an exponent");
    }

    Expr primary()
    {
        Token t = lex_.peek();
        if (t.kind == Token::Kind::Int)
            return num(std::stol(lex_.take().text));
        if (t.kind == Token::Kind::Punct && t.text == "(") {
            lex_.take();
            Expr e = expression();
            expect_punct(")");
            return e;
        }
        if (t.kind != Token::Kind::Ident)
            lex_.fail("expected an expression, got '" + t.text + "'");
        Token id = lex_.take();
        const std::string &w = id.text;
        if (w == "i")
            return imag_unit();
        if (w == "pi")
            return sym("pi");
        if (w == "sin" || w == "cos" || w == "expi") {
            expect_punct("(");
            Expr arg = expression();
            expect_punct(")");
            AtomKind k = w == "sin" ? AtomKind::Sin
                                    : (w == "cos" ? AtomKind::Cos : AtomKind::ExpI);
            return atom(k, arg);
        }
        if (w == "sum") {
            expect_punct("(");
            std::string binder = expect_name("summation index");
            if (table_.declared(binder) || is_binder(binder))
                throw ParseError("summation index '" + binder +
                                     "' shadows a declared symbol",
                                 id.line, id.col);
            expect_punct(",");
            Expr lo = expression();
            expect_punct(",");
            Expr hi = expression();
            expect_punct(",");
            binders_.push_back(binder);
            Expr body = expression();
            binders_.pop_back();
            expect_punct(")");
            return finite_sum(binder, lo, hi, body);
        }
        if (w == "binom") {
            expect_punct("(");
            Expr n_ = expression();
            expect_punct(",");
            Expr k_ = expression();
            expect_punct(")");
            return binom_node(n_, k_);
        }
        return symbol_ref(id);
    }

    Expr symbol_ref(const Token &id)
    {
        if (!table_.declared(id.text) && !is_binder(id.text))
            throw ParseError("unbound symbol '" + id.text + "'", id.line,
                             id.col);
        return sym(id.text);
    }

    bool is_binder(const std::string &n) const
    {
        for (auto &b : binders_)
            if (b == n)
                return true;
        return false;
    }

    // ---- pi-linear values and intervals ----

    PiLin pilin_value()
    {
        Expr e = expression();
        return pilin_from_expr(e);
    }

    PiLin pilin_from_expr(const Expr &e)
    {
        switch (e->tag) {
        case ExprNode::Tag::Number:
            if (!e->value.is_real())
                lex_.fail("expected a real value");
            return PiLin::rational(e->value.re);
        case ExprNode::Tag::Symbol:
            if (e->name == "pi")
                return PiLin::pi_multiple(Rational(1));
            lex_.fail("only rationals and pi may appear here");
        case ExprNode::Tag::Sum: {
            PiLin acc;
            for (auto &k : e->kids) {
                PiLin p = pilin_from_expr(k);
                acc.rat += p.rat;
                acc.pi_coeff += p.pi_coeff;
            }
            return acc;
        }
        case ExprNode::Tag::Product: {
            PiLin acc{Rational(1), Rational(0)};
            for (auto &k : e->kids) {
                PiLin p = pilin_from_expr(k);
                if (!acc.pi_coeff.is_zero() && !p.pi_coeff.is_zero())
                    lex_.fail("nonlinear in pi");
                Rational new_rat = acc.rat * p.rat;
                Rational new_pi = acc.rat * p.pi_coeff + acc.pi_coeff * p.rat;
                acc = PiLin{new_rat, new_pi};
            }
            return acc;
        }
        case ExprNode::Tag::Power: {
            PiLin base = pilin_from_expr(e->kids[0]);
            if (!base.pi_coeff.is_zero())
                lex_.fail("pi under a power is not allowed here");
            long ex = eval_const_int(e->kids[1]);
            return PiLin::rational(pow_int(base.rat, ex));
        }
        default:
            lex_.fail("expected a rational or rational multiple of pi");
        }
    }

    Interval interval_value()
    {
        Interval iv;
        expect_punct("(");
        iv.lo = bound_value();
        expect_punct(",");
        iv.hi = bound_value();
        expect_punct(")");
        return iv;
    }

    Bound bound_value()
    {
        Token t = lex_.peek();
        if (t.kind == Token::Kind::Ident && t.text == "inf") {
            lex_.take();
            return Bound::pos_inf();
        }
        if (t.kind == Token::Kind::Punct && t.text == "-") {
            // Could be -inf or a negative value; look past the sign.
            lex_.take();
            Token u = lex_.peek();
            if (u.kind == Token::Kind::Ident && u.text == "inf") {
                lex_.take();
                return Bound::neg_inf();
            }
            PiLin v = pilin_value();
            return Bound::finite(PiLin{-v.rat, -v.pi_coeff});
        }
        return Bound::finite(pilin_value());
    }

    // ---- token helpers ----

    void expect_ident(const std::string &kw)
    {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Ident || t.text != kw)
            throw ParseError("expected '" + kw + "', got '" + t.text + "'",
                             t.line, t.col);
    }
    std::string expect_name(const std::string &what)
    {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Ident)
            throw ParseError("expected " + what + ", got '" + t.text + "'",
                             t.line, t.col);
        return t.text;
    }
    void expect_punct(const std::string &p)
    {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Punct || t.text != p)
            throw ParseError("expected '" + p + "', got '" + t.text + "'",
                             t.line, t.col);
    }
    bool try_punct(const std::string &p)
    {
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
            lex_.take();
            return true;
        }
        return false;
    }
    long signed_int(const std::string &what)
    {
        bool negative = try_punct("-");
        Token t = lex_.take();
        if (t.kind != Token::Kind::Int)
            throw ParseError("expected " + what, t.line, t.col);
        long v = std::stol(t.text);
        return negative ? -v : v;
    }
    std::string declare(const std::string &name)
    {
        if (name == "pi" || name == "i")
            lex_.fail("'" + name + "' is reserved");
        if (table_.declared(name))
            lex_.fail("duplicate declaration of symbol '" + name + "'");
        return name;
    }
    void expect_end()
    {
        if (lex_.peek().kind != Token::Kind::End)
            lex_.fail("trailing input after expression");
    }

    static void trim(std::string &s)
    {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.pop_back();
        size_t i = 0;
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        s.erase(0, i);
    }

    static void check_acyclic(const std::vector<IdentityDecl> &decls)
    {
        std::map<std::string, const IdentityDecl *> by_name;
        for (auto &d : decls)
            by_name[d.name] = &d;
        // 0 unvisited, 1 in progress, 2 done
        std::map<std::string, int> state;
        std::function<void(const IdentityDecl &)> visit =
            [&](const IdentityDecl &d) {
                state[d.name] = 1;
                for (auto &dep : d.depends) {
                    auto it = by_name.find(dep);
                    if (it == by_name.end())
                        continue; // may resolve against another corpus
                    int s = state[dep];
                    if (s == 1)
                        throw ParseError("cyclic depends-on through '" + dep +
                                             "'",
                                         1, 1);
                    if (s == 0)
                        visit(*it->second);
                }
                state[d.name] = 2;
            };
        for (auto &d : decls)
            if (state[d.name] == 0)
                visit(d);
    }

    const std::string &src_;
    Lexer lex_;
    SymbolTable table_;
    std::vector<std::string> binders_;
};

} // namespace

std::vector<IdentityDecl> parse_file(const std::string &source)
{
    Parser p(source);
    return p.file();
}

IdentityDecl parse_identity(const std::string &source)
{
    auto decls = parse_file(source);
    if (decls.size() != 1)
        throw ParseError("expected exactly one identity block", 1, 1);
    return decls[0];
}

Expr parse_expr_string(const std::string &source, const SymbolTable &symbols)
{
    Parser p(source);
    return p.expr_only(symbols);
}

void apply_param_overrides(
    IdentityDecl &decl,
    const std::vector<std::pair<std::string, long>> &overrides)
{
    for (auto &[name, value] : overrides) {
        bool found = false;
        for (auto &p : decl.symbols.int_params)
            if (p.first == name) {
                p.second = value;
                found = true;
            }
        if (!found)
            throw std::runtime_error("identity '" + decl.name +
                                     "' has no parameter '" + name + "'");
    }
}

} // namespace ivpcert
