#pragma once

// Composition of a single Fourier mode with the caustic-adapted angle change:
// for mu = cos(q phi) or sin(q phi) with a formal mode index q, expanding
// mu(theta + Delta(theta)) in powers of kappa^2 produces trig polynomials in
// the shifted harmonics (q + 2l) theta whose coefficients are polynomials in
// q. Those coefficient polynomials xi_{j,l} drive the linear conditions on
// admissible boundary deformations, so they are computed exactly.

#include <map>
#include <utility>
#include <vector>

#include "caustic/errors.hpp"
#include "caustic/series.hpp"
#include "caustic/trigpoly.hpp"

namespace caustic {

// Trig polynomial in theta with a formal mode index q: terms are
// poly(q) * cos((q + 2l) theta) and poly(q) * sin((q + 2l) theta).
class ModalTrigPoly {
  public:
    using Key = std::pair<int, TrigFn>;  // (offset l, cos/sin)

    static ModalTrigPoly mode(TrigFn fn) {
        ModalTrigPoly p;
        p.add_term(0, fn, IndexPoly::constant(Rat(1)));
        return p;
    }

    void add_term(int l, TrigFn fn, const IndexPoly& poly) { accumulate(Key{l, fn}, poly); }

    ModalTrigPoly& operator+=(const ModalTrigPoly& o) {
        for (const auto& [key, poly] : o.terms_) accumulate(key, poly);
        return *this;
    }

    ModalTrigPoly scaled(const Rat& s) const {
        ModalTrigPoly r;
        if (s == 0) return r;
        for (const auto& [key, poly] : terms_) r.terms_.emplace(key, poly.scaled(s));
        return r;
    }

    // d/dtheta: cos((q+2l)theta) -> -(q+2l) sin(...), sin -> (q+2l) cos(...)
    ModalTrigPoly derivative() const {
        ModalTrigPoly r;
        for (const auto& [key, poly] : terms_) {
            const auto [l, fn] = key;
            IndexPoly factor = poly.times_linear(Rat(2 * l), Rat(1));
            if (fn == TrigFn::cos)
                r.accumulate(Key{l, TrigFn::sin}, factor.scaled(Rat(-1)));
            else
                r.accumulate(Key{l, TrigFn::cos}, factor);
        }
        return r;
    }

    // Product with a plain trig polynomial; requires even plain harmonics so
    // the result stays on the (q + 2l) lattice.
    ModalTrigPoly times_plain(const RationalTrigPoly& p) const {
        ModalTrigPoly r;
        for (const auto& [pkey, pcoeff] : p.terms()) {
            const auto [n, pfn] = pkey;
            if (n % 2 != 0) throw structural_error("modal product needs even plain harmonics");
            const int m = n / 2;
            for (const auto& [key, poly] : terms_) {
                const auto [l, fn] = key;
                IndexPoly half = poly.scaled(pcoeff / 2);
                if (n == 0 && pfn == TrigFn::cos) {
                    r.accumulate(Key{l, fn}, poly.scaled(pcoeff));
                } else if (fn == TrigFn::cos && pfn == TrigFn::cos) {
                    r.accumulate(Key{l + m, TrigFn::cos}, half);
                    r.accumulate(Key{l - m, TrigFn::cos}, half);
                } else if (fn == TrigFn::cos && pfn == TrigFn::sin) {
                    r.accumulate(Key{l + m, TrigFn::sin}, half);
                    r.accumulate(Key{l - m, TrigFn::sin}, half.scaled(Rat(-1)));
                } else if (fn == TrigFn::sin && pfn == TrigFn::cos) {
                    r.accumulate(Key{l + m, TrigFn::sin}, half);
                    r.accumulate(Key{l - m, TrigFn::sin}, half);
                } else {
                    r.accumulate(Key{l - m, TrigFn::cos}, half);
                    r.accumulate(Key{l + m, TrigFn::cos}, half.scaled(Rat(-1)));
                }
            }
        }
        return r;
    }

    // Substitute a concrete integer mode index.
    RationalTrigPoly at_mode(int q) const {
        RationalTrigPoly r;
        for (const auto& [key, poly] : terms_) {
            const auto [l, fn] = key;
            r.add_term(q + 2 * l, fn, poly.eval(Rat(q)));
        }
        return r;
    }

    const std::map<Key, IndexPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool pure(TrigFn fn) const {
        for (const auto& [key, poly] : terms_)
            if (key.second != fn && !poly.is_zero()) return false;
        return true;
    }

  private:
    void accumulate(const Key& key, const IndexPoly& poly) {
        if (poly.is_zero()) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, poly);
            return;
        }
        it->second += poly;
        if (it->second.is_zero()) terms_.erase(it);
    }

    std::map<Key, IndexPoly> terms_;
};

using ModalSeries = std::vector<ModalTrigPoly>;

namespace detail {

// Expansion of mu(theta + Delta) for mu = cos(q phi) or sin(q phi); entry j
// is the coefficient of kappa^{2j}.
inline ModalSeries modal_compose(TrigFn branch, const TrigSeries& Delta, int N) {
    ModalSeries P(N + 1);
    const ModalTrigPoly mu = ModalTrigPoly::mode(branch);
    P[0] = mu;
    ModalTrigPoly d = mu;
    TrigSeries Dpow(N + 1);
    Dpow[0] = RationalTrigPoly::constant(Rat(1));
    Rat factorial(1);
    for (int r = 1; r <= N; ++r) {
        d = d.derivative();
        Dpow = series_mul(Dpow, Delta, N);
        factorial *= r;
        const Rat inv_fact = Rat(1) / factorial;
        for (int i = r; i <= N; ++i) {
            if (Dpow[i].is_zero()) continue;
            P[i] += d.times_plain(Dpow[i]).scaled(inv_fact);
        }
    }
    return P;
}

}  // namespace detail

struct XiPolynomial {
    int j;
    int l;
    IndexPoly poly;
};

// Table of the coefficient polynomials xi_{j,l}(q), |l| <= j <= N: the
// cos branch yields sum_l xi_{j,l}(q) cos((q+2l) theta) at order kappa^{2j}
// and the sin branch the same coefficients on sines. Both are computed and
// must agree.
class XiTable {
  public:
    explicit XiTable(int N) : N_(N) {
        const TrigSeries Delta = detail::action_angle_delta(N);
        const ModalSeries Pc = detail::modal_compose(TrigFn::cos, Delta, N);
        const ModalSeries Ps = detail::modal_compose(TrigFn::sin, Delta, N);
        for (int j = 0; j <= N; ++j) {
            if (!Pc[j].pure(TrigFn::cos) || !Ps[j].pure(TrigFn::sin))
                throw structural_error("mode composition mixed cos/sin branches");
            for (const auto& [key, poly] : Pc[j].terms()) {
                const int l = key.first;
                if (l < -j || l > j || poly.degree() > j)
                    throw structural_error("mode composition exceeded offset/degree bounds");
                auto it = Ps[j].terms().find({l, TrigFn::sin});
                if (it == Ps[j].terms().end() || !(it->second == poly))
                    throw structural_error("cos/sin branch coefficient mismatch");
                xi_.emplace(std::make_pair(j, l), poly);
            }
            if (Ps[j].terms().size() != Pc[j].terms().size())
                throw structural_error("cos/sin branch support mismatch");
        }
    }

    int order() const { return N_; }

    // Zero polynomial for vanishing entries inside the valid range.
    const IndexPoly& xi(int j, int l) const {
        if (j < 0 || j > N_ || l < -j || l > j) throw domain_error("xi index out of range");
        auto it = xi_.find({j, l});
        return it == xi_.end() ? zero_ : it->second;
    }

    std::vector<XiPolynomial> flatten() const {
        std::vector<XiPolynomial> out;
        for (const auto& [key, poly] : xi_) out.push_back({key.first, key.second, poly});
        return out;
    }

  private:
    int N_;
    std::map<std::pair<int, int>, IndexPoly> xi_;
    IndexPoly zero_;
};

inline XiTable xi_polynomials(int N) {
    if (N < 0 || N > 16) throw domain_error("xi table order must be in [0, 16]");
    return XiTable(N);
}

// Expansion of mu(theta + Delta(theta)) for a concrete rational trig
// polynomial mu in phi; entry j is the kappa^{2j} coefficient P_j.
inline TrigSeries compose_mu_expansion(const RationalTrigPoly& mu, int N) {
    if (N < 0 || N > 16) throw domain_error("composition order must be in [0, 16]");
    const TrigSeries Delta = detail::action_angle_delta(N);
    TrigSeries P(N + 1);
    P[0] = mu;
    RationalTrigPoly d = mu;
    TrigSeries Dpow(N + 1);
    Dpow[0] = RationalTrigPoly::constant(Rat(1));
    Rat factorial(1);
    for (int r = 1; r <= N; ++r) {
        d = d.derivative();
        Dpow = detail::series_mul(Dpow, Delta, N);
        factorial *= r;
        const Rat inv_fact = Rat(1) / factorial;
        for (int i = r; i <= N; ++i) {
            if (Dpow[i].is_zero()) continue;
            P[i] += (Dpow[i] * d).scaled(inv_fact);
        }
    }
    return P;
}

}  // namespace caustic
