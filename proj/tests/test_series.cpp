#include <catch2/catch_amalgamated.hpp>

#include <initializer_list>
#include <utility>
#include <vector>

#include "caustic/modal.hpp"
#include "caustic/real.hpp"
#include "caustic/series.hpp"
#include "caustic/special_functions.hpp"

using namespace caustic;

namespace {

xreal X(const char* s) { return xreal(s); }

RationalTrigPoly sin_poly(std::initializer_list<std::pair<int, const char*>> terms) {
    RationalTrigPoly p;
    for (const auto& [n, c] : terms) p.add_term(n, TrigFn::sin, rat_from_string(c));
    return p;
}

IndexPoly kpoly(std::initializer_list<const char*> coeffs) {
    std::vector<Rat> v;
    for (const char* c : coeffs) v.push_back(rat_from_string(c));
    return IndexPoly(v);
}

// Fourier cosine coefficient of cos(q am(2K theta / pi; k)) at harmonic n,
// by periodic trapezoid rule (exponentially accurate for analytic periodic
// integrands; aliasing enters at harmonic M - n, far below working precision).
xreal mode_projection(int q, int n, const xreal& k, int M) {
    const xreal pi = pi_v<xreal>();
    const xreal K = complete_K(k);
    xreal acc(0);
    for (int m = 0; m < M; ++m) {
        const xreal theta = (2 * pi * m) / M;
        const auto j = jacobi_am_sn_cn(2 * K * theta / pi, k);
        acc += cos(q * j.am) * cos(n * theta);
    }
    return acc * 2 / M;
}

}  // namespace

TEST_CASE("angle correction coefficients match the reference table exactly") {
    const ExpansionSeries E = expand_action_angle(6);

    CHECK(E.phi(1) == sin_poly({{2, "1/8"}}));
    CHECK(E.phi(2) == sin_poly({{2, "1/16"}, {4, "1/256"}}));
    CHECK(E.phi(3) == sin_poly({{2, "83/2048"}, {4, "1/256"}, {6, "1/6144"}}));
    CHECK(E.phi(4) == sin_poly({{2, "121/4096"}, {4, "29/8192"}, {6, "1/4096"}, {8, "1/131072"}}));
    CHECK(E.phi(5) == sin_poly({{2, "12071/524288"},
                                {4, "13/4096"},
                                {6, "37/131072"},
                                {8, "1/65536"},
                                {10, "1/2621440"}}));
    CHECK(E.phi(6) == sin_poly({{2, "19651/1048576"},
                                {4, "47955/16777216"},
                                {6, "235/786432"},
                                {8, "45/2097152"},
                                {10, "1/1048576"},
                                {12, "1/50331648"}}));
}

TEST_CASE("angle correction structure: pure even sines up to harmonic 2j") {
    const ExpansionSeries E = expand_action_angle(8);
    for (int j = 1; j <= 8; ++j) {
        const auto& p = E.phi(j);
        CHECK(p.pure_sin());
        CHECK(p.max_harmonic() <= 2 * j);
        for (const auto& [key, c] : p.terms()) {
            CHECK(key.first % 2 == 0);
            CHECK(c != 0);
        }
    }
    CHECK_THROWS_AS(expand_action_angle(0), domain_error);
    CHECK_THROWS_AS(expand_action_angle(17), domain_error);
    CHECK_THROWS_AS(E.phi(0), domain_error);
    CHECK_THROWS_AS(E.phi(9), domain_error);
}

TEST_CASE("partial sums converge to the elliptic amplitude at the series rate") {
    // phi(theta) = am(2 K(k) theta / pi; k) is the function being expanded in
    // powers of k^2; with N terms the remainder is O(k^{2N+2}).
    const int N = 8;
    const ExpansionSeries E = expand_action_angle(N);
    const xreal pi = pi_v<xreal>();

    auto max_err = [&](const xreal& k) {
        const xreal K = complete_K(k);
        xreal worst(0);
        for (int i = 1; i < 24; ++i) {
            const xreal theta = (2 * pi * i) / 24;
            const xreal truth = jacobi_am_sn_cn(2 * K * theta / pi, k).am;
            const xreal approx = E.eval_phi_of_theta(theta, k * k);
            xreal err = truth - approx;
            if (err < 0) err = -err;
            if (err > worst) worst = err;
        }
        return worst;
    };

    const xreal e1 = max_err(X("0.35"));
    const xreal e2 = max_err(X("0.175"));
    const xreal e3 = max_err(X("0.0875"));
    // each halving of k should shrink the error by about 2^{2N+2} = 2^18
    const double r1 = to_double(e1 / e2);
    const double r2 = to_double(e2 / e3);
    CHECK(r1 > 6.0e4);
    CHECK(r1 < 1.1e6);
    CHECK(r2 > 6.0e4);
    CHECK(r2 < 1.1e6);
    CHECK(to_double(e1) < 1.0e-8);
}

TEST_CASE("mode-composition coefficients match the reference table exactly") {
    const XiTable xi = xi_polynomials(6);

    CHECK(xi.xi(1, -1) == kpoly({"0", "-1/16"}));
    CHECK(xi.xi(1, 0).is_zero());
    CHECK(xi.xi(1, 1) == kpoly({"0", "1/16"}));

    CHECK(xi.xi(2, -2) == kpoly({"0", "-1/512", "1/512"}));
    CHECK(xi.xi(2, -1) == kpoly({"0", "-1/32"}));
    CHECK(xi.xi(2, 0) == kpoly({"0", "0", "-1/256"}));
    CHECK(xi.xi(2, 1) == kpoly({"0", "1/32"}));
    CHECK(xi.xi(2, 2) == kpoly({"0", "1/512", "1/512"}));

    CHECK(xi.xi(3, -3) == kpoly({"0", "-1/12288", "1/8192", "-1/24576"}));
    CHECK(xi.xi(3, -2) == kpoly({"0", "-1/512", "1/512"}));
    CHECK(xi.xi(3, -1) == kpoly({"0", "-83/4096", "-1/8192", "1/8192"}));
    CHECK(xi.xi(3, 0) == kpoly({"0", "0", "-1/256"}));
    CHECK(xi.xi(3, 1) == kpoly({"0", "83/4096", "-1/8192", "-1/8192"}));
    CHECK(xi.xi(3, 2) == kpoly({"0", "1/512", "1/512"}));
    CHECK(xi.xi(3, 3) == kpoly({"0", "1/12288", "1/8192", "1/24576"}));

    CHECK(xi.xi(4, 4) == kpoly({"0", "1/262144", "11/1572864", "1/262144", "1/1572864"}));
    CHECK(xi.xi(5, 5) ==
          kpoly({"0", "1/5242880", "5/12582912", "7/25165824", "1/12582912", "1/125829120"}));

    // The q^3 coefficient below is 5/268435456 (= 15/805306368). The
    // projection oracle in the next test pins the full polynomial at two mode
    // indices to well under 0.1% and in particular rules out the nearby
    // candidate 11/805306368.
    CHECK(xi.xi(6, 6) == kpoly({"0", "1/100663296", "137/6039797760", "5/268435456",
                                "17/2415919104", "1/805306368", "1/12079595520"}));

    CHECK_THROWS_AS(xi.xi(7, 0), domain_error);
    CHECK_THROWS_AS(xi.xi(2, 3), domain_error);
    CHECK_THROWS_AS(xi_polynomials(17), domain_error);
}

TEST_CASE("projection oracle certifies the order-6 corner coefficient") {
    const XiTable xi = xi_polynomials(6);
    const xreal k = X("0.01");  // x = k^2 = 1e-4
    const xreal x6 = pow(k, 12);

    const IndexPoly wrong =
        kpoly({"0", "1/100663296", "137/6039797760", "11/805306368", "17/2415919104",
               "1/805306368", "1/12079595520"});

    for (int q : {2, 4}) {
        const xreal numeric = mode_projection(q, q + 12, k, 64) / x6;
        const xreal mine = to_real<xreal>(xi.xi(6, 6).eval(Rat(q)));
        const xreal other = to_real<xreal>(wrong.eval(Rat(q)));
        // truncation correction is O(x) ~ 1e-4 relative
        CHECK(to_double(abs(numeric / mine - 1)) < 2.0e-3);
        CHECK(to_double(abs(numeric / other - 1)) > 3.0e-2);
    }
}

TEST_CASE("projection oracle confirms the full coefficient table at mode 13") {
    const int N = 8;
    const XiTable xi(N);
    const int q = 13;  // keeps every shifted harmonic q + 2l positive, no folding
    const xreal k = X("0.1");
    const xreal x = k * k;

    for (int l = -6; l <= 6; ++l) {
        const xreal numeric = mode_projection(q, q + 2 * l, k, 128);
        xreal partial(0);
        for (int j = N; j >= 0; --j) {
            xreal term(0);
            if (std::abs(l) <= j) term = to_real<xreal>(xi.xi(j, l).eval(Rat(q)));
            partial = partial * x + term;
        }
        // truncation enters at x^{N+1} = 1e-18 with small coefficients
        CHECK(to_double(abs(numeric - partial)) < 1.0e-18);
    }
}

TEST_CASE("composition with a concrete profile matches the derivative formulas") {
    RationalTrigPoly mu;
    mu.add_term(0, TrigFn::cos, Rat(7, 2));
    mu.add_term(3, TrigFn::cos, Rat(1));
    mu.add_term(5, TrigFn::sin, Rat(1, 3));
    mu.add_term(1, TrigFn::sin, Rat(-2, 7));

    const ExpansionSeries E = expand_action_angle(4);
    const TrigSeries P = compose_mu_expansion(mu, 4);
    REQUIRE(P.size() == 5);

    const RationalTrigPoly d1 = mu.derivative();
    const RationalTrigPoly d2 = d1.derivative();

    CHECK(P[0] == mu);
    CHECK(P[1] == d1 * E.phi(1));
    RationalTrigPoly p2 = d1 * E.phi(2);
    p2 += (d2 * (E.phi(1) * E.phi(1))).scaled(Rat(1, 2));
    CHECK(P[2] == p2);

    CHECK_THROWS_AS(compose_mu_expansion(mu, 17), domain_error);
}

TEST_CASE("coefficient table reproduces single-mode compositions with folding") {
    const XiTable xi = xi_polynomials(5);
    for (int q : {1, 2, 4}) {
        for (TrigFn fn : {TrigFn::cos, TrigFn::sin}) {
            const RationalTrigPoly mu = RationalTrigPoly::harmonic(fn, q, Rat(1));
            const TrigSeries P = compose_mu_expansion(mu, 5);
            for (int j = 0; j <= 5; ++j) {
                RationalTrigPoly expected;
                for (int l = -j; l <= j; ++l)
                    expected.add_term(q + 2 * l, fn, xi.xi(j, l).eval(Rat(q)));
                CHECK(P[j] == expected);
            }
        }
    }
}
