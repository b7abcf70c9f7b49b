#pragma once

// Exact-rational trigonometric polynomials in one angle and dense rational
// polynomials in a formal integer index. All products reduce immediately to
// sums (product-to-sum), keeping every object canonical:
//   - harmonics are >= 0,
//   - no zero coefficients are stored,
//   - sin(0 theta) never appears; cos(0 theta) is the constant term.

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "caustic/rational.hpp"

namespace caustic {

enum class TrigFn { cos = 0, sin = 1 };

class RationalTrigPoly {
  public:
    using Key = std::pair<int, TrigFn>;  // (harmonic >= 0, fn)

    RationalTrigPoly() = default;

    static RationalTrigPoly constant(const Rat& c) {
        RationalTrigPoly p;
        p.add_term(0, TrigFn::cos, c);
        return p;
    }
    static RationalTrigPoly harmonic(TrigFn fn, int n, const Rat& c) {
        RationalTrigPoly p;
        p.add_term(n, fn, c);
        return p;
    }

    const std::map<Key, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int max_harmonic() const { return terms_.empty() ? 0 : terms_.rbegin()->first.first; }

    Rat coeff(int n, TrigFn fn) const {
        auto it = terms_.find({n, fn});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    // Accumulate c * fn(n theta), folding negative harmonics:
    // cos(-n) = cos(n), sin(-n) = -sin(n), sin(0) = 0.
    void add_term(int n, TrigFn fn, Rat c) {
        if (c == 0) return;
        if (n < 0) {
            n = -n;
            if (fn == TrigFn::sin) c = -c;
        }
        if (n == 0 && fn == TrigFn::sin) return;
        auto [it, inserted] = terms_.emplace(Key{n, fn}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    RationalTrigPoly& operator+=(const RationalTrigPoly& o) {
        for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
        return *this;
    }
    friend RationalTrigPoly operator+(RationalTrigPoly a, const RationalTrigPoly& b) {
        a += b;
        return a;
    }

    RationalTrigPoly operator-() const {
        RationalTrigPoly r;
        for (const auto& [key, c] : terms_) r.terms_.emplace(key, -c);
        return r;
    }

    RationalTrigPoly scaled(const Rat& s) const {
        RationalTrigPoly r;
        if (s == 0) return r;
        for (const auto& [key, c] : terms_) r.terms_.emplace(key, c * s);
        return r;
    }

    // Product-to-sum multiplication.
    friend RationalTrigPoly operator*(const RationalTrigPoly& a, const RationalTrigPoly& b) {
        RationalTrigPoly r;
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                const int m = ka.first, n = kb.first;
                const Rat h = ca * cb / 2;
                const bool as = ka.second == TrigFn::sin, bs = kb.second == TrigFn::sin;
                if (!as && !bs) {  // cos cos
                    r.add_term(m - n, TrigFn::cos, h);
                    r.add_term(m + n, TrigFn::cos, h);
                } else if (as && bs) {  // sin sin
                    r.add_term(m - n, TrigFn::cos, h);
                    r.add_term(m + n, TrigFn::cos, -h);
                } else if (as && !bs) {  // sin cos
                    r.add_term(m + n, TrigFn::sin, h);
                    r.add_term(m - n, TrigFn::sin, h);
                } else {  // cos sin
                    r.add_term(m + n, TrigFn::sin, h);
                    r.add_term(m - n, TrigFn::sin, -h);
                }
            }
        }
        return r;
    }

    RationalTrigPoly derivative() const {
        RationalTrigPoly r;
        for (const auto& [key, c] : terms_) {
            const auto [n, fn] = key;
            if (n == 0) continue;
            if (fn == TrigFn::cos)
                r.add_term(n, TrigFn::sin, -c * n);
            else
                r.add_term(n, TrigFn::cos, c * n);
        }
        return r;
    }

    template <class Real>
    Real eval(const Real& theta) const {
        using std::cos;
        using std::sin;
        Real acc(0);
        for (const auto& [key, c] : terms_) {
            const auto [n, fn] = key;
            Real arg = Real(n) * theta;
            Real basis = (fn == TrigFn::cos) ? Real(cos(arg)) : Real(sin(arg));
            acc += to_real<Real>(c) * basis;
        }
        return acc;
    }

    bool operator==(const RationalTrigPoly& o) const { return terms_ == o.terms_; }

    // true if every term is sin (odd under theta -> -theta), resp. cos (even)
    bool pure_sin() const {
        for (const auto& [key, c] : terms_)
            if (key.second != TrigFn::sin) return false;
        return true;
    }
    bool pure_cos() const {
        for (const auto& [key, c] : terms_)
            if (key.second != TrigFn::cos) return false;
        return true;
    }

  private:
    std::map<Key, Rat> terms_;
};

// Dense polynomial in a formal integer index v; coefficient i belongs to v^i.
class IndexPoly {
  public:
    IndexPoly() = default;
    explicit IndexPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }
    static IndexPoly constant(const Rat& c) { return IndexPoly({c}); }

    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }

    IndexPoly& operator+=(const IndexPoly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    friend IndexPoly operator+(IndexPoly a, const IndexPoly& b) {
        a += b;
        return a;
    }

    IndexPoly scaled(const Rat& s) const {
        if (s == 0) return {};
        IndexPoly r = *this;
        for (auto& c : r.c_) c *= s;
        return r;
    }

    // multiply by (c0 + c1 v)
    IndexPoly times_linear(const Rat& c0, const Rat& c1) const {
        std::vector<Rat> r(c_.size() + 1, Rat(0));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            r[i] += c_[i] * c0;
            r[i + 1] += c_[i] * c1;
        }
        IndexPoly out(std::move(r));
        return out;
    }

    Rat eval(const Rat& v) const {
        Rat acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * v + c_[i];
        return acc;
    }

    bool operator==(const IndexPoly& o) const { return c_ == o.c_; }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

}  // namespace caustic
