#pragma once

#include "symcon/polynomial.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace symcon {

struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivisionByZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact multivariate rational function in canonical form:
/// gcd(num, den) = 1 and den is monic under the graded-lex order, so two
/// Exprs are equal as functions iff their representations are equal.
/// Values are immutable after construction and safe to share across threads.
class Expr {
public:
    Expr() : num_(), den_(Polynomial::constant(1)) {} // zero

    static Expr zero() { return Expr(); }
    static Expr one() { return from_int(1); }
    static Expr from_int(long v) { return Expr(Polynomial::constant(Rational(v)), Polynomial::constant(1), false); }
    static Expr from_rational(const Rational& r) { return Expr(Polynomial::constant(r), Polynomial::constant(1), false); }
    static Expr var(Symbol s) { return Expr(Polynomial::var(s), Polynomial::constant(1), false); }
    static Expr from_poly(Polynomial p) { return Expr(std::move(p), Polynomial::constant(1), false); }
    static Expr ratio(Polynomial num, Polynomial den) { return Expr(std::move(num), std::move(den), true); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    bool is_polynomial() const { return den_.is_constant(); }
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    bool contains(Symbol s) const { return num_.contains(s) || den_.contains(s); }
    std::vector<Symbol> symbols() const;
    int total_degree() const { return num_.total_degree() + den_.total_degree(); }

    Expr operator-() const;
    Expr operator+(const Expr& o) const;
    Expr operator-(const Expr& o) const;
    Expr operator*(const Expr& o) const;
    Expr operator/(const Expr& o) const; // throws DivisionByZero on o == 0
    Expr pow(int e) const;               // negative exponents allowed for nonzero base

    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    Expr& operator/=(const Expr& o) { return *this = *this / o; }

    bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Expr& o) const { return !(*this == o); }

    Expr derivative(Symbol s) const;

    /// Simultaneous substitution. Binding values must not mention any bound
    /// symbol (no implicit fixed point).
    Expr substitute(const std::map<Symbol, Expr>& bindings) const;
    Expr substitute(Symbol s, const Expr& value) const;

    /// Exact evaluation; throws PoleError if the denominator vanishes and
    /// std::invalid_argument if a symbol is unassigned.
    Rational eval(const std::map<Symbol, Rational>& point) const;
    double eval_double(const std::map<Symbol, double>& point) const;

    /// True if other == c * this for a nonzero scalar c of the parameter
    /// field (parameters and integration constants only); zero is
    /// proportional only to zero.
    bool proportional_to(const Expr& other) const;

    /// True if this == f * m for a polynomial f, i.e. this vanishes on the
    /// surface m = 0 for the detectable (principal-ideal) reason.
    bool is_multiple_of(const Expr& m) const;

    std::string str() const;

private:
    Expr(Polynomial num, Polynomial den, bool normalize);
    void canonicalize();

    Polynomial num_, den_;
};

inline Expr operator*(const Rational& c, const Expr& e) { return Expr::from_rational(c) * e; }

} // namespace symcon
