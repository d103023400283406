#pragma once

#include "symcon/expr.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace symcon {

/// power-of-symbol rewrite: symbol^power -> replacement. The replacement's
/// degree in the symbol must be strictly smaller than power, so exhaustive
/// rewriting terminates.
struct RewriteRule {
    Symbol symbol;
    int power;
    Expr replacement;
};

class RewriteSystem {
public:
    void add_rule(Symbol s, int power, Expr replacement) {
        if (power < 2) throw std::invalid_argument("rewrite power must be >= 2");
        if (replacement.num().degree_in(s) >= power || replacement.den().contains(s))
            throw std::invalid_argument("rewrite rule must reduce the degree of " + s.name());
        for (auto& r : rules_)
            if (r.symbol == s) {
                if (r.power == power && r.replacement == replacement) return; // already present
                throw std::invalid_argument("conflicting rewrite rule for " + s.name());
            }
        rules_.push_back({s, power, std::move(replacement)});
    }

    void set_branch(Symbol s, int sign) {
        if (sign != 1 && sign != -1) throw std::invalid_argument("branch sign must be +1 or -1");
        branch_signs_[s] = sign;
    }

    const std::vector<RewriteRule>& rules() const { return rules_; }
    const std::map<Symbol, int>& branch_signs() const { return branch_signs_; }
    bool empty() const { return rules_.empty(); }

    std::optional<int> branch(Symbol s) const {
        auto it = branch_signs_.find(s);
        if (it == branch_signs_.end()) return std::nullopt;
        return it->second;
    }

    /// Exhaustively rewrite until no rule pattern occurs.
    Expr reduce(const Expr& e) const {
        if (rules_.empty()) return e;
        Expr cur = e;
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& rule : rules_) {
                if (cur.num().degree_in(rule.symbol) >= rule.power ||
                    cur.den().degree_in(rule.symbol) >= rule.power) {
                    cur = apply(cur, rule);
                    changed = true;
                }
            }
        }
        return cur;
    }

    bool reduces_to_zero(const Expr& e) const { return reduce(e).is_zero(); }

private:
    static Expr apply_poly(const Polynomial& p, const RewriteRule& rule) {
        Expr acc = Expr::zero();
        for (int j = 0; j <= p.degree_in(rule.symbol); ++j) {
            Polynomial cj = p.coefficient_of(rule.symbol, j);
            if (cj.is_zero()) continue;
            Expr term = Expr::from_poly(cj);
            term *= Expr::var(rule.symbol).pow(j % rule.power);
            term *= rule.replacement.pow(j / rule.power);
            acc += term;
        }
        return acc;
    }

    static Expr apply(const Expr& e, const RewriteRule& rule) {
        return apply_poly(e.num(), rule) / apply_poly(e.den(), rule);
    }

    std::vector<RewriteRule> rules_;
    std::map<Symbol, int> branch_signs_;
};

} // namespace symcon
