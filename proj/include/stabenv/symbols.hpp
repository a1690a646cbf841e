#pragma once

#include "stabenv/mp.hpp"
#include "stabenv/errors.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace stabenv {

using SymId = int;

// Ordered table of named symbols with assigned complex logs. Values of
// symbols are exp(log); keeping logs makes half-integer powers single-valued
// and makes quasiperiod shifts x -> xq an exact addition of log q.
class SymbolTable {
public:
    SymId intern(const std::string& name);
    SymId id(const std::string& name) const;            // throws UnassignedSymbol
    std::optional<SymId> find(const std::string& name) const;

    void assign(SymId s, Cplx log_value);
    void assign(const std::string& name, Cplx log_value);
    bool assigned(SymId s) const;
    const Cplx& log_of(SymId s) const;                  // throws UnassignedSymbol

    const std::string& name(SymId s) const { return names_[static_cast<size_t>(s)]; }
    size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, SymId> index_;
    std::vector<Cplx> logs_;
    std::vector<bool> assigned_;
};

// Formal Laurent monomial with rational exponents of denominator 1 or 2.
// Exponents are stored doubled (integer half-units), so u^{1/2} has entry 1
// and u^{-3} entry -6.
class Monomial {
public:
    Monomial() = default;

    static Monomial sym(SymId s, int numer = 1, int denom = 1);

    Monomial& mul(SymId s, int half_units);
    Monomial operator*(const Monomial& o) const;
    Monomial inverse() const;
    Monomial pow(int e) const;

    bool is_identity() const { return exp_.empty(); }
    const std::map<SymId, int>& half_exponents() const { return exp_; }

    // exponent of symbol s in whole units; throws if it is a half-integer
    int degree(SymId s) const;

    bool operator==(const Monomial& o) const { return exp_ == o.exp_; }
    bool operator<(const Monomial& o) const { return exp_ < o.exp_; }

    // sum over symbols of exponent * log(symbol)
    Cplx eval_log(const SymbolTable& tbl) const;

    std::string to_string(const SymbolTable& tbl) const;

private:
    std::map<SymId, int> exp_;  // symbol -> 2 * exponent
};

// Signed multiset of monomials; houses tangent spaces, polarizations,
// normal bundles and indexes.
struct VirtualChar {
    std::vector<std::pair<int, Monomial>> terms;  // sign in {+1,-1}

    void add(const Monomial& m, int sign = +1) { terms.emplace_back(sign, m); }
    VirtualChar& operator+=(const VirtualChar& o);
    size_t size() const { return terms.size(); }
};

inline Cplx eval_monomial(const Monomial& m, const SymbolTable& tbl) {
    return m.eval_log(tbl);
}

} // namespace stabenv
