#include "stabenv/symbols.hpp"

#include <sstream>

namespace stabenv {

SymId SymbolTable::intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    SymId s = static_cast<SymId>(names_.size());
    names_.push_back(name);
    index_.emplace(name, s);
    logs_.emplace_back();
    assigned_.push_back(false);
    return s;
}

SymId SymbolTable::id(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UnassignedSymbol(name);
    return it->second;
}

std::optional<SymId> SymbolTable::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void SymbolTable::assign(SymId s, Cplx log_value) {
    logs_[static_cast<size_t>(s)] = std::move(log_value);
    assigned_[static_cast<size_t>(s)] = true;
}

void SymbolTable::assign(const std::string& name, Cplx log_value) {
    assign(intern(name), std::move(log_value));
}

bool SymbolTable::assigned(SymId s) const {
    return s >= 0 && static_cast<size_t>(s) < assigned_.size() && assigned_[static_cast<size_t>(s)];
}

const Cplx& SymbolTable::log_of(SymId s) const {
    if (!assigned(s)) throw UnassignedSymbol(name(s));
    return logs_[static_cast<size_t>(s)];
}

Monomial Monomial::sym(SymId s, int numer, int denom) {
    Monomial m;
    if (denom != 1 && denom != 2)
        throw Error("monomial exponent denominator must be 1 or 2");
    m.mul(s, denom == 1 ? 2 * numer : numer);
    return m;
}

Monomial& Monomial::mul(SymId s, int half_units) {
    if (half_units == 0) return *this;
    auto [it, fresh] = exp_.emplace(s, half_units);
    if (!fresh) {
        it->second += half_units;
        if (it->second == 0) exp_.erase(it);
    }
    return *this;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r = *this;
    for (auto& [s, e] : o.exp_) r.mul(s, e);
    return r;
}

Monomial Monomial::inverse() const {
    Monomial r;
    for (auto& [s, e] : exp_) r.exp_[s] = -e;
    return r;
}

Monomial Monomial::pow(int e) const {
    Monomial r;
    if (e == 0) return r;
    for (auto& [s, h] : exp_) r.exp_[s] = h * e;
    return r;
}

int Monomial::degree(SymId s) const {
    auto it = exp_.find(s);
    if (it == exp_.end()) return 0;
    if (it->second % 2 != 0) throw Error("half-integer exponent where integer expected");
    return it->second / 2;
}

Cplx Monomial::eval_log(const SymbolTable& tbl) const {
    Cplx acc;
    for (auto& [s, h] : exp_) {
        const Cplx& l = tbl.log_of(s);
        if (h == 2) { acc += l; continue; }
        if (h == -2) { acc -= l; continue; }
        Real f = Real(h) / 2;
        acc.re += f * l.re;
        acc.im += f * l.im;
    }
    return acc;
}

std::string Monomial::to_string(const SymbolTable& tbl) const {
    if (exp_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [s, h] : exp_) {
        if (!first) os << "*";
        first = false;
        os << tbl.name(s);
        if (h != 2) {
            os << "^";
            if (h % 2 == 0) os << h / 2;
            else os << "(" << h << "/2)";
        }
    }
    return os.str();
}

VirtualChar& VirtualChar::operator+=(const VirtualChar& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
}

} // namespace stabenv
