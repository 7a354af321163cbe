#include "bubbletree/graded_poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bubbletree {

GradedSymbol::GradedSymbol(std::string name, int degree) : name_(std::move(name)), degree_(degree) {
    if (name_.empty()) throw std::invalid_argument("graded symbol needs a name");
    if (degree_ < 0 || degree_ % 2 != 0)
        throw std::invalid_argument("symbol '" + name_ + "' has odd or negative degree " +
                                    std::to_string(degree_));
}

namespace {

// Merge two sorted factor lists, adding exponents of equal names.
std::vector<Monomial::Factor> merge_factors(const std::vector<Monomial::Factor>& a,
                                            const std::vector<Monomial::Factor>& b) {
    std::vector<Monomial::Factor> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first.name() < b[j].first.name())) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first.name() < a[i].first.name()) {
            out.push_back(b[j++]);
        } else {
            if (a[i].first.degree() != b[j].first.degree())
                throw std::invalid_argument("symbol '" + a[i].first.name() +
                                            "' used with two different degrees");
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Monomial::Monomial(const GradedSymbol& s, unsigned exponent) {
    if (exponent > 0) factors_.emplace_back(s, exponent);
}

Monomial::Monomial(std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end(),
              [](const Factor& x, const Factor& y) { return x.first.name() < y.first.name(); });
    for (auto& f : factors) {
        if (f.second == 0) continue;
        factors_ = merge_factors(factors_, {f});
    }
}

int Monomial::degree() const {
    int d = 0;
    for (const auto& [s, e] : factors_) d += s.degree() * static_cast<int>(e);
    return d;
}

unsigned Monomial::exponent_of(const std::string& name) const {
    for (const auto& [s, e] : factors_)
        if (s.name() == name) return e;
    return 0;
}

Monomial Monomial::without(const std::string& name) const {
    Monomial m;
    for (const auto& f : factors_)
        if (f.first.name() != name) m.factors_.push_back(f);
    return m;
}

std::pair<Monomial, Monomial> Monomial::split_scalar() const {
    Monomial scalar, cls;
    for (const auto& f : factors_) (f.first.degree() == 0 ? scalar : cls).factors_.push_back(f);
    return {scalar, cls};
}

std::string Monomial::str() const {
    std::string s;
    for (const auto& [sym, e] : factors_) {
        if (!s.empty()) s += '*';
        s += sym.name();
        if (e != 1) s += '^' + std::to_string(e);
    }
    return s;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.factors_ = merge_factors(a.factors_, b.factors_);
    return m;
}

bool operator<(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    const auto& fa = a.factors_;
    const auto& fb = b.factors_;
    for (std::size_t i = 0; i < fa.size() && i < fb.size(); ++i) {
        if (fa[i].first.name() != fb[i].first.name()) return fa[i].first.name() < fb[i].first.name();
        if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second;
    }
    return fa.size() < fb.size();
}

GradedPolynomial::GradedPolynomial(const Rational& c) {
    if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

GradedPolynomial::GradedPolynomial(const GradedSymbol& s) { terms_.emplace(Monomial(s), Rational(1)); }

GradedPolynomial::GradedPolynomial(const Monomial& m, const Rational& c) {
    if (!c.is_zero()) terms_.emplace(m, c);
}

void GradedPolynomial::add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

std::optional<int> GradedPolynomial::degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

bool GradedPolynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

Rational GradedPolynomial::constant() const { return coefficient(Monomial{}); }

Rational GradedPolynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

GradedPolynomial GradedPolynomial::degree_part(int deg) const {
    GradedPolynomial out;
    for (const auto& [m, c] : terms_)
        if (m.degree() == deg) out.terms_.emplace(m, c);
    return out;
}

GradedPolynomial GradedPolynomial::truncate(int top_degree) const {
    if (top_degree < 0) throw std::invalid_argument("truncation degree must be non-negative");
    GradedPolynomial out;
    for (const auto& [m, c] : terms_)
        if (m.degree() <= top_degree) out.terms_.emplace(m, c);
    return out;
}

GradedPolynomial GradedPolynomial::operator-() const {
    GradedPolynomial out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

GradedPolynomial& GradedPolynomial::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

GradedPolynomial GradedPolynomial::mul_truncated(const GradedPolynomial& a, const GradedPolynomial& b,
                                                 std::optional<int> top_degree) {
    GradedPolynomial out;
    for (const auto& [ma, ca] : a.terms_) {
        int da = ma.degree();
        if (top_degree && da > *top_degree) continue;
        for (const auto& [mb, cb] : b.terms_) {
            if (top_degree && da + mb.degree() > *top_degree) continue;
            out.add_term(ma * mb, ca * cb);
        }
    }
    return out;
}

GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b) {
    return GradedPolynomial::mul_truncated(a, b, std::nullopt);
}

GradedPolynomial GradedPolynomial::pow(unsigned e, std::optional<int> top_degree) const {
    GradedPolynomial result(1);
    GradedPolynomial base = top_degree ? truncate(*top_degree) : *this;
    while (e > 0) {
        if (e & 1u) result = mul_truncated(result, base, top_degree);
        e >>= 1u;
        if (e > 0) base = mul_truncated(base, base, top_degree);
    }
    return result;
}

GradedPolynomial GradedPolynomial::substitute(const std::string& name, const GradedPolynomial& value) const {
    std::map<unsigned, GradedPolynomial> powers;
    return map_monomials([&](const Monomial& m) {
        unsigned e = m.exponent_of(name);
        if (e == 0) return GradedPolynomial(m, Rational(1));
        auto it = powers.find(e);
        if (it == powers.end()) it = powers.emplace(e, value.pow(e)).first;
        return GradedPolynomial(m.without(name), Rational(1)) * it->second;
    });
}

GradedPolynomial GradedPolynomial::map_monomials(
    const std::function<GradedPolynomial(const Monomial&)>& f) const {
    GradedPolynomial out;
    for (const auto& [m, c] : terms_) out += f(m) * c;
    return out;
}

std::string GradedPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational mag = c.sign() < 0 ? -c : c;
        if (first) {
            if (c.sign() < 0) os << '-';
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        first = false;
        if (m.is_unit()) {
            os << mag;
        } else {
            if (mag != Rational(1)) os << mag << '*';
            os << m.str();
        }
    }
    return os.str();
}

SymbolContext SymbolContext::standard() {
    SymbolContext ctx;
    for (const char* n : {"alpha", "omega", "h", "H", "x"}) ctx.declare(n, 2);
    for (const char* n : {"p1", "p1r", "e", "sig", "cL", "cR", "omega0"}) ctx.declare(n, 4);
    for (const char* n : {"chi", "sigma", "Qsym", "Aalpha", "alpha_sq", "omegaL", "omegaR", "A", "B_L",
                          "B_R", "f"})
        ctx.declare(n, 0);
    return ctx;
}

void SymbolContext::declare(const std::string& name, int degree) {
    GradedSymbol check(name, degree);
    if (name == "u") throw std::invalid_argument("'u' is reserved for the equivariant parameter");
    auto [it, inserted] = table_.emplace(name, degree);
    if (!inserted && it->second != degree)
        throw std::invalid_argument("symbol '" + name + "' redeclared with a different degree");
}

std::optional<int> SymbolContext::degree_of(const std::string& name) const {
    auto it = table_.find(name);
    if (it != table_.end()) return it->second;
    // Indexed block constants A_3, B_L_2, ... are scalars.
    auto indexed = [&](const std::string& prefix) {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return false;
        return std::all_of(name.begin() + static_cast<long>(prefix.size()), name.end(),
                           [](char ch) { return ch >= '0' && ch <= '9'; });
    };
    if (indexed("A_") || indexed("B_L_") || indexed("B_R_") || indexed("Aalpha_")) return 0;
    return std::nullopt;
}

}  // namespace bubbletree
