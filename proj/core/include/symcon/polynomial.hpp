#pragma once

#include "symcon/rational.hpp"
#include "symcon/symbol.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symcon {

/// Product of symbol powers, exponents > 0, factors sorted by symbol order.
class Monomial {
public:
    using Factor = std::pair<Symbol, int>;

    Monomial() = default;
    explicit Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {
        normalize();
    }

    static Monomial one() { return Monomial(); }
    static Monomial var(Symbol s, int exp = 1) {
        Monomial m;
        if (exp != 0) m.factors_.push_back({s, exp});
        return m;
    }

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }

    int total_degree() const {
        int d = 0;
        for (auto& [s, e] : factors_) d += e;
        return d;
    }

    int degree_in(Symbol s) const {
        for (auto& [sym, e] : factors_)
            if (sym == s) return e;
        return 0;
    }

    bool contains(Symbol s) const { return degree_in(s) != 0; }

    Monomial operator*(const Monomial& o) const;
    /// Exact quotient; caller guarantees divisibility (checked by divides()).
    Monomial operator/(const Monomial& o) const;
    bool divides(const Monomial& m) const; // this | m

    /// Monomial with the factor of s removed entirely.
    Monomial without(Symbol s) const;

    /// Graded lexicographic order: total degree first, then lex with the
    /// earliest-declared symbol most significant.
    static int compare(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial& o) const { return factors_ == o.factors_; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }

private:
    void normalize() {
        std::sort(factors_.begin(), factors_.end(),
                  [](const Factor& a, const Factor& b) { return a.first < b.first; });
        std::vector<Factor> merged;
        for (auto& f : factors_) {
            if (!merged.empty() && merged.back().first == f.first)
                merged.back().second += f.second;
            else
                merged.push_back(f);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const Factor& f) { return f.second == 0; }),
                     merged.end());
        factors_ = std::move(merged);
    }

    std::vector<Factor> factors_;
};

struct MonomialGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::compare(a, b) > 0;
    }
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are kept in strictly descending graded-lex order with no zero
/// coefficients, so equal polynomials have identical representations.
class Polynomial {
public:
    using Term = std::pair<Monomial, Rational>;

    Polynomial() = default;

    static Polynomial zero() { return Polynomial(); }
    static Polynomial constant(const Rational& c) {
        Polynomial p;
        if (c != 0) p.terms_.push_back({Monomial::one(), c});
        return p;
    }
    static Polynomial var(Symbol s, int exp = 1) {
        Polynomial p;
        p.terms_.push_back({Monomial::var(s, exp), Rational(1)});
        return p;
    }
    static Polynomial from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one());
    }
    Rational constant_value() const {
        return terms_.empty() ? Rational(0) : terms_[0].second;
    }

    const Monomial& leading_monomial() const { return terms_.front().first; }
    const Rational& leading_coefficient() const { return terms_.front().second; }

    int total_degree() const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }
    int degree_in(Symbol s) const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree_in(s));
        return d;
    }
    bool contains(Symbol s) const {
        for (auto& [m, c] : terms_)
            if (m.contains(s)) return true;
        return false;
    }
    std::vector<Symbol> symbols() const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Rational& c) const;
    Polynomial pow(int e) const;

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial derivative(Symbol s) const;

    /// Coefficient of s^k, a polynomial in the remaining symbols.
    Polynomial coefficient_of(Symbol s, int k) const;

    Rational eval(const std::function<Rational(Symbol)>& point) const;
    double eval_double(const std::function<double(Symbol)>& point) const;

    /// Remainder of graded-lex division by a single divisor g != 0.
    Polynomial reduce_by(const Polynomial& g) const;
    /// Exact quotient; throws if the division leaves a remainder.
    Polynomial exact_div(const Polynomial& g) const;
    /// Division attempt: quotient if exact, nullopt otherwise.
    std::optional<Polynomial> try_exact_div(const Polynomial& g) const;

    /// gcd of rational coefficients, sign chosen so that this/content has
    /// positive leading coefficient; content of 0 is 0.
    Rational content() const;
    Polynomial primitive_part() const;

    std::string str() const;

private:
    std::vector<Term> terms_;
};

/// Multivariate polynomial gcd over Q, returned as the primitive
/// integer-coefficient representative with positive leading coefficient
/// (gcd(0,0) = 0). Subresultant polynomial remainder sequences underneath.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

} // namespace symcon
