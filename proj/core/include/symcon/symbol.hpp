#pragma once

#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace symcon {

enum class SymbolKind {
    Coordinate,
    Momentum,
    Multiplier,
    Parameter,
    IntegrationConstant,
    Defined,
};

std::string to_string(SymbolKind kind);

struct SymbolData {
    std::string name;
    SymbolKind kind;
    int order; // position in the global total order; fixed at declaration
};

/// Lightweight handle to an interned symbol. The owning SymbolTable must
/// outlive every Expr that mentions the symbol; tables are frozen before
/// an analysis starts, so handles stay valid for the whole run.
class Symbol {
public:
    Symbol() : data_(nullptr) {}
    explicit Symbol(const SymbolData* data) : data_(data) {}

    const std::string& name() const { return data_->name; }
    SymbolKind kind() const { return data_->kind; }
    int order() const { return data_->order; }
    bool valid() const { return data_ != nullptr; }

    bool operator==(const Symbol& o) const { return data_ == o.data_; }
    bool operator!=(const Symbol& o) const { return data_ != o.data_; }
    bool operator<(const Symbol& o) const { return data_->order < o.data_->order; }

private:
    const SymbolData* data_;
};

class SymbolTable {
public:
    SymbolTable() = default;
    SymbolTable(const SymbolTable&) = delete;
    SymbolTable& operator=(const SymbolTable&) = delete;

    Symbol declare(std::string name, SymbolKind kind) {
        if (by_name_.count(name))
            throw std::invalid_argument("symbol already declared: " + name);
        storage_.push_back(SymbolData{name, kind, static_cast<int>(storage_.size())});
        Symbol s(&storage_.back());
        by_name_.emplace(std::move(name), s);
        order_.push_back(s);
        return s;
    }

    std::optional<Symbol> find(std::string_view name) const {
        auto it = by_name_.find(std::string(name));
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    Symbol at(std::string_view name) const {
        auto s = find(name);
        if (!s) throw std::invalid_argument("undeclared symbol: " + std::string(name));
        return *s;
    }

    bool contains(std::string_view name) const { return by_name_.count(std::string(name)) > 0; }

    const std::vector<Symbol>& symbols() const { return order_; }
    std::size_t size() const { return storage_.size(); }

    /// First name of the form <stem><k> (k = start, start+1, ...) not yet taken.
    std::string fresh_name(const std::string& stem, int start = 1) const {
        for (int k = start;; ++k) {
            std::string candidate = stem + std::to_string(k);
            if (!contains(candidate)) return candidate;
        }
    }

private:
    std::deque<SymbolData> storage_; // stable addresses
    std::map<std::string, Symbol> by_name_;
    std::vector<Symbol> order_;
};

inline std::string to_string(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Coordinate: return "coordinate";
        case SymbolKind::Momentum: return "momentum";
        case SymbolKind::Multiplier: return "multiplier";
        case SymbolKind::Parameter: return "parameter";
        case SymbolKind::IntegrationConstant: return "integration-constant";
        case SymbolKind::Defined: return "defined";
    }
    return "?";
}

} // namespace symcon
