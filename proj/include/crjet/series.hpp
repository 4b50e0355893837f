#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "crjet/errors.hpp"
#include "crjet/gaussian_rational.hpp"

namespace crjet {

using Vars = std::vector<std::string>;
using VarsPtr = std::shared_ptr<const Vars>;

inline VarsPtr make_vars(Vars names) {
    return std::make_shared<const Vars>(std::move(names));
}

/// Exponent vector over a fixed variable list. Doubles as a multiindex.
struct Monomial {
    std::vector<int> exp;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exp(std::move(e)) {}

    static Monomial one(std::size_t nvars) { return Monomial(std::vector<int>(nvars, 0)); }

    static Monomial unit(std::size_t nvars, std::size_t var, int power = 1) {
        Monomial m = one(nvars);
        m.exp.at(var) = power;
        return m;
    }

    int degree() const { return std::accumulate(exp.begin(), exp.end(), 0); }

    Monomial times(const Monomial& o) const {
        Monomial r = *this;
        for (std::size_t k = 0; k < exp.size(); ++k) r.exp[k] += o.exp[k];
        return r;
    }

    bool operator==(const Monomial&) const = default;

    std::string str(const Vars& vars) const {
        std::string s;
        for (std::size_t k = 0; k < exp.size(); ++k) {
            if (exp[k] == 0) continue;
            if (!s.empty()) s += "*";
            s += vars[k];
            if (exp[k] != 1) s += "^" + std::to_string(exp[k]);
        }
        return s;
    }
};

using Multiindex = Monomial;

/// Graded lexicographic order: total degree first, then exponent vectors.
struct GradedLex {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.exp < b.exp;
    }
};

/// Order of a formal power series. Exact(m) certifies a nonzero coefficient in
/// total degree m and none below. AtLeast(m) means every coefficient known so
/// far vanishes and degrees >= m are outside the known range. Infinite is the
/// identically zero series and only arises for fully known polynomials.
struct OrderValue {
    enum class Kind { exact, infinite, at_least };

    Kind kind = Kind::infinite;
    int m = 0;

    static OrderValue exact(int m) { return {Kind::exact, m}; }
    static OrderValue infinite() { return {Kind::infinite, 0}; }
    static OrderValue at_least(int m) { return {Kind::at_least, m}; }

    bool is_exact() const { return kind == Kind::exact; }
    bool is_infinite() const { return kind == Kind::infinite; }
    bool is_at_least() const { return kind == Kind::at_least; }

    bool operator==(const OrderValue&) const = default;

    std::string str() const {
        switch (kind) {
            case Kind::exact: return std::to_string(m);
            case Kind::infinite: return "infinity";
            case Kind::at_least: return ">=" + std::to_string(m);
        }
        return "";
    }
};

/// Formal power series over Q(i) in a fixed ordered variable list.
///
/// A series is either exact (a polynomial known in full) or truncated at a
/// total degree T: coefficients of degree <= T are known exactly, higher ones
/// are unknown rather than zero. Stored terms always have nonzero coefficient
/// and, when truncated, degree <= T. Values are immutable; every operation
/// returns a fresh series. Operands must share one variable list; mixing lists
/// requires an explicit embedded()/renamed()/projected() step.
class Series {
public:
    using TermMap = std::map<Monomial, GaussianRational, GradedLex>;

    static Series zero(VarsPtr vars) { return Series(std::move(vars), {}, std::nullopt); }

    static Series zero_truncated(VarsPtr vars, int trunc) {
        return Series(std::move(vars), {}, check_trunc(trunc));
    }

    static Series constant(VarsPtr vars, GaussianRational c) {
        TermMap t;
        if (!c.is_zero()) t.emplace(Monomial::one(vars->size()), std::move(c));
        return Series(std::move(vars), std::move(t), std::nullopt);
    }

    static Series variable(VarsPtr vars, std::size_t index) {
        if (index >= vars->size()) throw domain_error("variable index out of range");
        TermMap t;
        t.emplace(Monomial::unit(vars->size(), index), GaussianRational(1));
        return Series(std::move(vars), std::move(t), std::nullopt);
    }

    static Series term(VarsPtr vars, Monomial m, GaussianRational c) {
        if (m.exp.size() != vars->size()) throw domain_error("monomial arity mismatch");
        TermMap t;
        if (!c.is_zero()) t.emplace(std::move(m), std::move(c));
        return Series(std::move(vars), std::move(t), std::nullopt);
    }

    const Vars& vars() const { return *vars_; }
    const VarsPtr& vars_ptr() const { return vars_; }
    std::size_t nvars() const { return vars_->size(); }

    bool exact() const { return !trunc_.has_value(); }
    std::optional<int> trunc() const { return trunc_; }

    const TermMap& terms() const { return terms_; }

    /// True when no nonzero coefficient is known. For an exact series this
    /// means identically zero; for a truncated one, zero up to the truncation.
    bool vanishes() const { return terms_.empty(); }
    bool identically_zero() const { return terms_.empty() && exact(); }

    OrderValue order() const {
        if (!terms_.empty()) return OrderValue::exact(terms_.begin()->first.degree());
        if (exact()) return OrderValue::infinite();
        return OrderValue::at_least(*trunc_ + 1);
    }

    GaussianRational coefficient(const Monomial& m) const {
        if (m.exp.size() != nvars()) throw domain_error("monomial arity mismatch");
        if (trunc_ && m.degree() > *trunc_)
            throw truncation_error("coefficient of degree " + std::to_string(m.degree()) +
                                   " beyond truncation " + std::to_string(*trunc_));
        auto it = terms_.find(m);
        return it == terms_.end() ? GaussianRational() : it->second;
    }

    Series operator-() const {
        TermMap t = terms_;
        for (auto& [m, c] : t) c = -c;
        return Series(vars_, std::move(t), trunc_);
    }

    friend Series operator+(const Series& a, const Series& b) {
        a.require_same_vars(b);
        auto tr = meet(a.trunc_, b.trunc_);
        TermMap t = a.terms_;
        for (const auto& [m, c] : b.terms_) {
            auto [it, inserted] = t.emplace(m, c);
            if (!inserted) it->second += c;
        }
        return Series(a.vars_, std::move(t), tr);
    }

    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    friend Series operator*(const Series& a, const Series& b) {
        a.require_same_vars(b);
        auto tr = meet(a.trunc_, b.trunc_);
        TermMap t;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                if (tr && ma.degree() + mb.degree() > *tr) continue;
                GaussianRational c = ca * cb;
                if (c.is_zero()) continue;
                Monomial m = ma.times(mb);
                auto it = t.find(m);
                if (it == t.end())
                    t.emplace(std::move(m), std::move(c));
                else
                    it->second += c;
            }
        }
        return Series(a.vars_, std::move(t), tr);
    }

    Series& operator+=(const Series& o) { return *this = *this + o; }
    Series& operator-=(const Series& o) { return *this = *this - o; }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    Series scaled(const GaussianRational& c) const {
        if (c.is_zero()) return Series(vars_, {}, trunc_);
        TermMap t = terms_;
        for (auto& [m, v] : t) v *= c;
        return Series(vars_, std::move(t), trunc_);
    }

    Series pow(int e) const {
        if (e < 0) throw domain_error("negative series power");
        Series r = constant(vars_, GaussianRational(1));
        if (trunc_) r = r.truncated_to(*trunc_);
        for (int k = 0; k < e; ++k) r *= *this;
        return r;
    }

    /// Plain partial derivative, iterated `times` times: the coefficient of
    /// x^e picks up the falling factorial e(e-1)...(e-times+1).
    Series derivative(std::size_t var, int times = 1) const {
        if (var >= nvars()) throw domain_error("variable index out of range");
        if (times < 0) throw domain_error("negative derivative count");
        if (times == 0) return *this;
        std::optional<int> tr = trunc_;
        if (tr) {
            if (*tr - times < 0)
                throw truncation_error("derivative exhausts truncation degree " + std::to_string(*tr));
            tr = *tr - times;
        }
        TermMap t;
        for (const auto& [m, c] : terms_) {
            int e = m.exp[var];
            if (e < times) continue;
            BigRational f = 1;
            for (int k = 0; k < times; ++k) f *= e - k;
            Monomial rm = m;
            rm.exp[var] = e - times;
            t.emplace(std::move(rm), c * GaussianRational(f));
        }
        return Series(vars_, std::move(t), tr);
    }

    Series derivative(const Multiindex& alpha) const {
        if (alpha.exp.size() != nvars()) throw domain_error("multiindex arity mismatch");
        Series r = *this;
        for (std::size_t k = 0; k < alpha.exp.size(); ++k)
            if (alpha.exp[k] > 0) r = r.derivative(k, alpha.exp[k]);
        return r;
    }

    /// Coefficientwise complex conjugation; variables are untouched.
    Series conjugated() const {
        TermMap t;
        for (const auto& [m, c] : terms_) t.emplace(m, c.conj());
        return Series(vars_, std::move(t), trunc_);
    }

    /// Substitutes images[k] for variable k; images must all live over one
    /// common variable list. When this series is not exact, every image must
    /// have zero constant term, otherwise unknown high-degree terms would leak
    /// into low degrees of the result.
    Series substituted(std::span<const Series> images) const {
        if (images.size() != nvars()) throw domain_error("substitution needs one image per variable");
        VarsPtr tvars = images.empty() ? vars_ : images[0].vars_;
        std::optional<int> tr = trunc_;
        for (const Series& s : images) {
            if (images[0].vars() != s.vars()) throw domain_error("substitution images mix variable lists");
            tr = meet(tr, s.trunc_);
        }
        if (!exact()) {
            for (const Series& s : images)
                if (!s.terms_.empty() && s.terms_.begin()->first.degree() == 0)
                    throw domain_error("substitution into a truncated series requires images without constant term");
        }
        Series acc = tr ? zero_truncated(tvars, *tr) : zero(tvars);
        std::vector<std::vector<Series>> powers(nvars());
        for (const auto& [m, c] : terms_) {
            Series prod = constant(tvars, c);
            if (tr) prod = prod.truncated_to(*tr);
            bool dead = false;
            for (std::size_t k = 0; k < m.exp.size() && !dead; ++k) {
                int e = m.exp[k];
                if (e == 0) continue;
                const Series& p = power_of(images[k], e, powers[k], tr);
                if (p.vanishes() && p.exact()) { dead = true; break; }
                prod *= p;
            }
            if (!dead) acc += prod;
        }
        return acc;
    }

    Series substituted(const std::vector<Series>& images) const {
        return substituted(std::span<const Series>(images));
    }

    /// Declares the tail beyond `t` unknown. Always yields a truncated series,
    /// never tighter than an existing truncation.
    Series truncated_to(int t) const {
        int nt = check_trunc(t).value();
        if (trunc_) nt = std::min(nt, *trunc_);
        TermMap kept;
        for (const auto& [m, c] : terms_)
            if (m.degree() <= nt) kept.emplace(m, c);
        return Series(vars_, std::move(kept), nt);
    }

    /// Reinterprets the series over a superset variable list; matching is by
    /// name and every current variable must appear in the target list.
    Series embedded(const VarsPtr& target) const {
        std::vector<std::size_t> where(nvars());
        for (std::size_t k = 0; k < nvars(); ++k) {
            auto it = std::find(target->begin(), target->end(), (*vars_)[k]);
            if (it == target->end())
                throw domain_error("embedding target lacks variable " + (*vars_)[k]);
            where[k] = static_cast<std::size_t>(it - target->begin());
        }
        TermMap t;
        for (const auto& [m, c] : terms_) {
            Monomial rm = Monomial::one(target->size());
            for (std::size_t k = 0; k < m.exp.size(); ++k) rm.exp[where[k]] = m.exp[k];
            t.emplace(std::move(rm), c);
        }
        return Series(target, std::move(t), trunc_);
    }

    /// Positional renaming onto an equally long variable list.
    Series renamed(const VarsPtr& target) const {
        if (target->size() != nvars()) throw domain_error("renaming must preserve arity");
        return Series(target, terms_, trunc_);
    }

    /// Restricts to a subset variable list; variables outside it must not
    /// occur in any stored term.
    Series projected(const VarsPtr& target) const {
        std::vector<long> where(nvars(), -1);
        for (std::size_t k = 0; k < nvars(); ++k) {
            auto it = std::find(target->begin(), target->end(), (*vars_)[k]);
            if (it != target->end()) where[k] = it - target->begin();
        }
        TermMap t;
        for (const auto& [m, c] : terms_) {
            Monomial rm = Monomial::one(target->size());
            for (std::size_t k = 0; k < m.exp.size(); ++k) {
                if (m.exp[k] == 0) continue;
                if (where[k] < 0)
                    throw domain_error("projection drops used variable " + (*vars_)[k]);
                rm.exp[static_cast<std::size_t>(where[k])] = m.exp[k];
            }
            t.emplace(std::move(rm), c);
        }
        return Series(target, std::move(t), trunc_);
    }

    bool same_series(const Series& o) const {
        return *vars_ == *o.vars_ && trunc_ == o.trunc_ && terms_ == o.terms_;
    }

    std::string str() const {
        std::ostringstream out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            std::string cs = c.str();
            bool negated = cs.size() > 1 && cs[0] == '-' && cs.find('+') == std::string::npos &&
                           cs.find('-', 1) == std::string::npos;
            if (first) {
                if (negated) { out << "-"; cs = cs.substr(1); }
            } else {
                out << (negated ? " - " : " + ");
                if (negated) cs = cs.substr(1);
            }
            bool wrap = cs.find('+') != std::string::npos || cs.find('-') != std::string::npos;
            std::string ms = m.str(*vars_);
            if (ms.empty()) {
                out << (wrap ? "(" + cs + ")" : cs);
            } else if (cs == "1") {
                out << ms;
            } else {
                out << (wrap ? "(" + cs + ")" : cs) << "*" << ms;
            }
            first = false;
        }
        if (first) out << "0";
        if (trunc_) out << " + O(" << (*trunc_ + 1) << ")";
        return out.str();
    }

private:
    Series(VarsPtr vars, TermMap terms, std::optional<int> trunc)
        : vars_(std::move(vars)), terms_(std::move(terms)), trunc_(trunc) {
        normalize();
    }

    static std::optional<int> check_trunc(int t) {
        if (t < 0) throw domain_error("truncation degree must be nonnegative");
        return t;
    }

    static std::optional<int> meet(std::optional<int> a, std::optional<int> b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    static const Series& power_of(const Series& base, int e, std::vector<Series>& cache,
                                  std::optional<int> tr) {
        if (cache.empty()) {
            Series one = constant(base.vars_, GaussianRational(1));
            cache.push_back(tr ? one.truncated_to(*tr) : one);
        }
        while (static_cast<int>(cache.size()) <= e) {
            Series next = cache.back() * base;
            cache.push_back(tr ? next.truncated_to(*tr) : next);
        }
        return cache[static_cast<std::size_t>(e)];
    }

    void require_same_vars(const Series& o) const {
        if (vars_ == o.vars_) return;
        if (*vars_ != *o.vars_)
            throw domain_error("series over different variable lists; embed first");
    }

    void normalize() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second.is_zero() || (trunc_ && it->first.degree() > *trunc_))
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    VarsPtr vars_;
    TermMap terms_;
    std::optional<int> trunc_;
};

/// Determinant of a square series matrix by first-row cofactor expansion.
inline Series series_det(const std::vector<std::vector<Series>>& m) {
    std::size_t n = m.size();
    if (n == 0) throw domain_error("empty matrix");
    for (const auto& row : m)
        if (row.size() != n) throw domain_error("matrix must be square");
    if (n == 1) return m[0][0];
    Series acc = Series::zero(m[0][0].vars_ptr());
    bool first = true;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Series>> minor;
        minor.reserve(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Series> row;
            row.reserve(n - 1);
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        Series contrib = m[0][j] * series_det(minor);
        if (j % 2 == 1) contrib = -contrib;
        if (first) {
            acc = std::move(contrib);
            first = false;
        } else {
            acc += contrib;
        }
    }
    return acc;
}

/// All multiindices over `nvars` variables with 1 <= |alpha| <= maxdeg, in
/// graded lexicographic order.
inline std::vector<Multiindex> multiindices_up_to(std::size_t nvars, int maxdeg) {
    std::map<Multiindex, int, GradedLex> seen;
    std::vector<Multiindex> frontier{Multiindex::one(nvars)};
    for (int d = 1; d <= maxdeg; ++d) {
        std::vector<Multiindex> next;
        for (const auto& m : frontier) {
            for (std::size_t k = 0; k < nvars; ++k) {
                Multiindex up = m;
                up.exp[k] += 1;
                if (seen.emplace(up, 0).second) next.push_back(up);
            }
        }
        frontier = std::move(next);
    }
    std::vector<Multiindex> out;
    out.reserve(seen.size());
    for (auto& [m, _] : seen) out.push_back(m);
    return out;
}

} // namespace crjet
