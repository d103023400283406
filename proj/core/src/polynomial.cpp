#include "symcon/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace symcon {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::operator*(const Monomial& o) const {
    std::vector<Factor> out;
    out.reserve(factors_.size() + o.factors_.size());
    auto a = factors_.begin(), b = o.factors_.begin();
    while (a != factors_.end() && b != o.factors_.end()) {
        if (a->first == b->first) {
            out.push_back({a->first, a->second + b->second});
            ++a;
            ++b;
        } else if (a->first < b->first) {
            out.push_back(*a++);
        } else {
            out.push_back(*b++);
        }
    }
    out.insert(out.end(), a, factors_.end());
    out.insert(out.end(), b, o.factors_.end());
    Monomial m;
    m.factors_ = std::move(out);
    return m;
}

bool Monomial::divides(const Monomial& m) const {
    for (auto& [s, e] : factors_)
        if (m.degree_in(s) < e) return false;
    return true;
}

Monomial Monomial::operator/(const Monomial& o) const {
    std::vector<Factor> out;
    for (auto& [s, e] : factors_) {
        int r = e - o.degree_in(s);
        if (r < 0) throw std::logic_error("monomial division not exact");
        if (r > 0) out.push_back({s, r});
    }
    Monomial m;
    m.factors_ = std::move(out);
    return m;
}

Monomial Monomial::without(Symbol s) const {
    std::vector<Factor> out;
    for (auto& f : factors_)
        if (!(f.first == s)) out.push_back(f);
    Monomial m;
    m.factors_ = std::move(out);
    return m;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    // lex on exponent vectors, earliest-declared symbol most significant
    auto ia = a.factors_.begin(), ib = b.factors_.begin();
    while (ia != a.factors_.end() && ib != b.factors_.end()) {
        if (ia->first == ib->first) {
            if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
            ++ia;
            ++ib;
        } else if (ia->first < ib->first) {
            return 1; // a has a positive power on an earlier symbol
        } else {
            return -1;
        }
    }
    if (ia != a.factors_.end()) return 1;
    if (ib != b.factors_.end()) return -1;
    return 0;
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
    std::map<Monomial, Rational, MonomialGreater> acc;
    for (auto& [m, c] : terms) {
        if (c == 0) continue;
        auto [it, fresh] = acc.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) acc.erase(it);
        }
    }
    Polynomial p;
    p.terms_.assign(acc.begin(), acc.end());
    return p;
}

std::vector<Symbol> Polynomial::symbols() const {
    std::vector<Symbol> out;
    for (auto& [m, c] : terms_)
        for (auto& [s, e] : m.factors())
            if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial p(*this);
    for (auto& [m, c] : p.terms_) c = -c;
    return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin(), b = o.terms_.begin();
    while (a != terms_.end() && b != o.terms_.end()) {
        int cmp = Monomial::compare(a->first, b->first);
        if (cmp > 0) {
            merged.push_back(*a++);
        } else if (cmp < 0) {
            merged.push_back(*b++);
        } else {
            Rational c = a->second + b->second;
            if (c != 0) merged.push_back({a->first, c});
            ++a;
            ++b;
        }
    }
    merged.insert(merged.end(), a, terms_.end());
    merged.insert(merged.end(), b, o.terms_.end());
    Polynomial p;
    p.terms_ = std::move(merged);
    return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial();
    std::map<Monomial, Rational, MonomialGreater> acc;
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) {
            Monomial m = ma * mb;
            auto [it, fresh] = acc.emplace(std::move(m), ca * cb);
            if (!fresh) {
                it->second += ca * cb;
                if (it->second == 0) acc.erase(it);
            }
        }
    Polynomial p;
    p.terms_.assign(acc.begin(), acc.end());
    return p;
}

Polynomial Polynomial::operator*(const Rational& c) const {
    if (c == 0) return Polynomial();
    Polynomial p(*this);
    for (auto& [m, coef] : p.terms_) coef *= c;
    return p;
}

Polynomial Polynomial::pow(int e) const {
    if (e < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
    Polynomial r = constant(1);
    Polynomial base(*this);
    while (e > 0) {
        if (e & 1) r *= base;
        base = (e >>= 1) ? base * base : base;
    }
    return r;
}

Polynomial Polynomial::derivative(Symbol s) const {
    std::vector<Term> out;
    for (auto& [m, c] : terms_) {
        int e = m.degree_in(s);
        if (e == 0) continue;
        Monomial dm = m.without(s);
        if (e > 1) dm = dm * Monomial::var(s, e - 1);
        out.push_back({dm, c * e});
    }
    return from_terms(std::move(out));
}

Polynomial Polynomial::coefficient_of(Symbol s, int k) const {
    std::vector<Term> out;
    for (auto& [m, c] : terms_)
        if (m.degree_in(s) == k) out.push_back({m.without(s), c});
    return from_terms(std::move(out));
}

Rational Polynomial::eval(const std::function<Rational(Symbol)>& point) const {
    Rational total = 0;
    for (auto& [m, c] : terms_) {
        Rational v = c;
        for (auto& [s, e] : m.factors()) {
            Rational base = point(s);
            for (int i = 0; i < e; ++i) v *= base;
        }
        total += v;
    }
    return total;
}

double Polynomial::eval_double(const std::function<double(Symbol)>& point) const {
    double total = 0;
    for (auto& [m, c] : terms_) {
        double v = to_double(c);
        for (auto& [s, e] : m.factors()) v *= std::pow(point(s), e);
        total += v;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Division and reduction

Polynomial Polynomial::reduce_by(const Polynomial& g) const {
    if (g.is_zero()) throw std::invalid_argument("reduce_by: zero divisor");
    Polynomial r(*this);
    const Monomial& lg = g.leading_monomial();
    const Rational& cg = g.leading_coefficient();
    while (true) {
        bool reduced = false;
        for (auto& [m, c] : r.terms_) {
            if (lg.divides(m)) {
                Polynomial q;
                q.terms_.push_back({m / lg, c / cg});
                r = r - q * g;
                reduced = true;
                break;
            }
        }
        if (!reduced) break;
    }
    return r;
}

std::optional<Polynomial> Polynomial::try_exact_div(const Polynomial& g) const {
    if (g.is_zero()) throw std::invalid_argument("exact_div: zero divisor");
    Polynomial r(*this);
    Polynomial q;
    const Monomial& lg = g.leading_monomial();
    const Rational& cg = g.leading_coefficient();
    while (!r.is_zero()) {
        const Monomial& lr = r.leading_monomial();
        if (!lg.divides(lr)) return std::nullopt;
        Polynomial t;
        t.terms_.push_back({lr / lg, r.leading_coefficient() / cg});
        q += t;
        r = r - t * g;
    }
    return q;
}

Polynomial Polynomial::exact_div(const Polynomial& g) const {
    auto q = try_exact_div(g);
    if (!q) throw std::logic_error("exact_div: division not exact");
    return *q;
}

Rational Polynomial::content() const {
    if (is_zero()) return Rational(0);
    Int num_gcd = 0, den_lcm = 1;
    for (auto& [m, c] : terms_) {
        num_gcd = boost::multiprecision::gcd(num_gcd, numer(c));
        den_lcm = boost::multiprecision::lcm(den_lcm, denom(c));
    }
    Rational content(num_gcd, den_lcm);
    if (leading_coefficient() < 0) content = -content;
    return content;
}

Polynomial Polynomial::primitive_part() const {
    if (is_zero()) return *this;
    return *this * (Rational(1) / content());
}

// ---------------------------------------------------------------------------
// GCD: subresultant PRS, recursing on the most significant symbol present.

namespace {

Symbol main_symbol(const Polynomial& a, const Polynomial& b) {
    Symbol best;
    for (const Polynomial* p : {&a, &b})
        for (auto& [m, c] : p->terms())
            for (auto& [s, e] : m.factors())
                if (!best.valid() || s < best) best = s;
    return best;
}

/// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b with respect to x.
Polynomial prem(Polynomial a, const Polynomial& b, Symbol x) {
    int db = b.degree_in(x);
    Polynomial lb = b.coefficient_of(x, db);
    int e = a.degree_in(x) - db + 1;
    while (!a.is_zero() && a.degree_in(x) >= db) {
        int da = a.degree_in(x);
        Polynomial la = a.coefficient_of(x, da);
        Polynomial shift = (da > db) ? Polynomial::var(x, da - db) : Polynomial::constant(1);
        a = a * lb - la * shift * b;
        --e;
    }
    for (int i = 0; i < e; ++i) a = a * lb;
    return a;
}

Polynomial gcd_primitive(const Polynomial& A, const Polynomial& B);

/// Content of p viewed as univariate in x: gcd of the x-coefficients.
Polynomial content_in(const Polynomial& p, Symbol x) {
    Polynomial cont;
    for (int k = 0; k <= p.degree_in(x); ++k) {
        Polynomial c = p.coefficient_of(x, k);
        if (c.is_zero()) continue;
        cont = cont.is_zero() ? c.primitive_part() : gcd_primitive(cont, c.primitive_part());
        if (cont.is_constant()) return Polynomial::constant(1);
    }
    return cont;
}

Polynomial gcd_primitive(const Polynomial& A, const Polynomial& B) {
    if (A.is_zero()) return B;
    if (B.is_zero()) return A;
    if (A.is_constant() || B.is_constant()) return Polynomial::constant(1);

    Symbol x = main_symbol(A, B);
    if (A.degree_in(x) == 0 || B.degree_in(x) == 0) {
        // x occurs in only one of them; gcd divides that one's x-free content
        if (A.degree_in(x) == 0) return gcd_primitive(A, content_in(B, x));
        return gcd_primitive(content_in(A, x), B);
    }

    Polynomial contA = content_in(A, x);
    Polynomial contB = content_in(B, x);
    Polynomial gamma = gcd_primitive(contA, contB);
    Polynomial a = A.exact_div(contA).primitive_part();
    Polynomial b = B.exact_div(contB).primitive_part();
    if (a.degree_in(x) < b.degree_in(x)) std::swap(a, b);

    // subresultant remainder sequence
    Polynomial g = Polynomial::constant(1);
    Polynomial h = Polynomial::constant(1);
    while (true) {
        int delta = a.degree_in(x) - b.degree_in(x);
        Polynomial r = prem(a, b, x);
        if (r.is_zero()) break;
        if (r.degree_in(x) == 0) {
            b = Polynomial::constant(1);
            break;
        }
        a = b;
        Polynomial divisor = g * h.pow(delta);
        b = r.exact_div(divisor);
        g = a.coefficient_of(x, a.degree_in(x));
        // h = g^delta * h^(1-delta)
        h = (delta >= 1) ? g.pow(delta).exact_div(h.pow(delta - 1)) : h;
    }

    if (b.is_constant()) return gamma;
    Polynomial pp = b.exact_div(content_in(b, x)).primitive_part();
    return (gamma * pp).primitive_part();
}

} // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) return Polynomial();
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    if (a.is_constant() || b.is_constant()) return Polynomial::constant(1);
    return gcd_primitive(a.primitive_part(), b.primitive_part()).primitive_part();
}

// ---------------------------------------------------------------------------
// Printing

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto& [m, c] : terms_) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (m.is_one()) {
            out << to_string(a);
        } else {
            if (a != 1) out << to_string(a) << "*";
            bool first_factor = true;
            for (auto& [s, e] : m.factors()) {
                if (!first_factor) out << "*";
                first_factor = false;
                out << s.name();
                if (e != 1) out << "^" << e;
            }
        }
    }
    return out.str();
}

} // namespace symcon
