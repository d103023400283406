#include "symcon/expr.hpp"

#include <sstream>

namespace symcon {

Expr::Expr(Polynomial num, Polynomial den, bool normalize)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero("zero denominator");
    if (normalize) canonicalize();
}

void Expr::canonicalize() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(1);
        return;
    }
    if (!den_.is_constant()) {
        Polynomial g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = num_.exact_div(g);
            den_ = den_.exact_div(g);
        }
    }
    Rational lc = den_.leading_coefficient();
    if (lc != 1) {
        Rational inv = Rational(1) / lc;
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

std::vector<Symbol> Expr::symbols() const {
    std::vector<Symbol> out = num_.symbols();
    for (Symbol s : den_.symbols())
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

Expr Expr::operator-() const { return Expr(-num_, den_, false); }

Expr Expr::operator+(const Expr& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return Expr(num_ + o.num_, den_, true);
    return Expr(num_ * o.den_ + o.num_ * den_, den_ * o.den_, true);
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const {
    if (is_zero() || o.is_zero()) return Expr();
    return Expr(num_ * o.num_, den_ * o.den_, true);
}

Expr Expr::operator/(const Expr& o) const {
    if (o.is_zero()) throw DivisionByZero("division by zero expression");
    if (is_zero()) return Expr();
    return Expr(num_ * o.den_, den_ * o.num_, true);
}

Expr Expr::pow(int e) const {
    if (e == 0) return one();
    if (e < 0) {
        if (is_zero()) throw DivisionByZero("negative power of zero");
        return Expr(den_.pow(-e), num_.pow(-e), true);
    }
    return Expr(num_.pow(e), den_.pow(e), true);
}

Expr Expr::derivative(Symbol s) const {
    if (is_polynomial()) {
        Polynomial d = num_.derivative(s);
        if (!den_.is_constant()) throw std::logic_error("non-monic polynomial denominator");
        return Expr(std::move(d), den_, true);
    }
    // (n/d)' = (n'd - nd') / d^2
    Polynomial n = num_.derivative(s) * den_ - num_ * den_.derivative(s);
    return Expr(std::move(n), den_ * den_, true);
}

Expr Expr::substitute(const std::map<Symbol, Expr>& bindings) const {
    if (bindings.empty()) return *this;
    for (auto& [s, v] : bindings)
        for (auto& [s2, v2] : bindings)
            if (v.contains(s2))
                throw std::invalid_argument("substitution value mentions a bound symbol: " +
                                            s2.name());
    auto apply = [&](const Polynomial& p) {
        Expr acc = Expr::zero();
        for (auto& [m, c] : p.terms()) {
            Expr term = Expr::from_rational(c);
            for (auto& [s, e] : m.factors()) {
                auto it = bindings.find(s);
                Expr base = (it != bindings.end()) ? it->second : Expr::var(s);
                term *= base.pow(e);
            }
            acc += term;
        }
        return acc;
    };
    return apply(num_) / apply(den_);
}

Expr Expr::substitute(Symbol s, const Expr& value) const {
    return substitute(std::map<Symbol, Expr>{{s, value}});
}

Rational Expr::eval(const std::map<Symbol, Rational>& point) const {
    auto lookup = [&](Symbol s) -> Rational {
        auto it = point.find(s);
        if (it == point.end()) throw std::invalid_argument("unassigned symbol: " + s.name());
        return it->second;
    };
    Rational d = den_.eval(lookup);
    if (d == 0) throw PoleError("denominator vanishes at evaluation point");
    return num_.eval(lookup) / d;
}

double Expr::eval_double(const std::map<Symbol, double>& point) const {
    auto lookup = [&](Symbol s) -> double {
        auto it = point.find(s);
        if (it == point.end()) throw std::invalid_argument("unassigned symbol: " + s.name());
        return it->second;
    };
    return num_.eval_double(lookup) / den_.eval_double(lookup);
}

bool Expr::proportional_to(const Expr& other) const {
    if (is_zero() || other.is_zero()) return is_zero() && other.is_zero();
    Expr ratio = other / *this;
    for (Symbol s : ratio.symbols())
        if (s.kind() != SymbolKind::Parameter && s.kind() != SymbolKind::IntegrationConstant)
            return false;
    return true;
}

bool Expr::is_multiple_of(const Expr& m) const {
    if (m.is_zero()) return is_zero();
    if (is_zero()) return true;
    return (*this / m).is_polynomial();
}

std::string Expr::str() const {
    if (is_polynomial()) return num_.str();
    std::ostringstream out;
    out << "(" << num_.str() << ")/(" << den_.str() << ")";
    return out.str();
}

} // namespace symcon
