#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "gl4lab/hecke.hpp"
#include "support/ssyt.hpp"

using namespace gl4lab;

namespace {

std::array<cplx, 4> ones() { return {cplx(1), cplx(1), cplx(1), cplx(1)}; }

std::array<cplx, 4> random_unitary(rng& r) {
    double t1 = r.uniform(), t2 = r.uniform(), t3 = r.uniform();
    return {e_of(t1), e_of(t2), e_of(t3), e_of(-(t1 + t2 + t3))};
}

} // namespace

TEST_CASE("tableau oracle reproduces classical dimension counts") {
    // Weyl dimension formula values for small highest weights, computed by
    // hand and frozen here.
    CHECK(ssyt::schur(ones(), {1, 0, 0, 0}).real() == 4.0);
    CHECK(ssyt::schur(ones(), {2, 0, 0, 0}).real() == 10.0);
    CHECK(ssyt::schur(ones(), {1, 1, 0, 0}).real() == 6.0);
    CHECK(ssyt::schur(ones(), {2, 2, 0, 0}).real() == 20.0);
    CHECK(ssyt::schur(ones(), {2, 2, 1, 0}).real() == 20.0);
    CHECK(ssyt::schur(ones(), {2, 2, 2, 0}).real() == 10.0);
    CHECK(ssyt::schur(ones(), {3, 2, 1, 0}).real() == 64.0);
}

TEST_CASE("complete homogeneous recurrence at the all-ones point") {
    auto h = detail::complete_homogeneous(ones(), 4);
    CHECK(std::abs(h[1] - cplx(4.0)) < 1e-14);  // h1 = e1
    CHECK(std::abs(h[2] - cplx(10.0)) < 1e-14); // C(5,2)
    CHECK(std::abs(h[3] - cplx(20.0)) < 1e-13); // C(6,3)
    CHECK(std::abs(h[4] - cplx(35.0)) < 1e-13); // C(7,4)
}

TEST_CASE("schur evaluation matches the tableau oracle") {
    rng r(20240811);

    SECTION("well-separated unitary parameters (determinant-ratio path)") {
        for (int draw = 0; draw < 25; ++draw) {
            auto a = random_unitary(r);
            for (int n1 = 0; n1 <= 2; ++n1)
                for (int n2 = 0; n2 <= 2; ++n2)
                    for (int n3 = 0; n3 <= 2; ++n3) {
                        cplx lib = schur_coefficient(a, n1, n2, n3);
                        cplx ora = ssyt::coefficient(a, n1, n2, n3);
                        CAPTURE(draw, n1, n2, n3);
                        CHECK(std::abs(lib - ora) < 1e-10 * (1.0 + std::abs(ora)));
                    }
            // a deeper partition too
            cplx lib = schur_coefficient(a, 4, 0, 0);
            CHECK(std::abs(lib - ssyt::coefficient(a, 4, 0, 0)) < 1e-10);
        }
    }

    SECTION("coincident parameters (Jacobi-Trudi path)") {
        std::array<cplx, 4> conf[] = {
            ones(),
            {cplx(0, 1), cplx(0, 1), cplx(0, -1), cplx(0, -1)},
            {cplx(-1), cplx(-1), cplx(-1), cplx(-1)},
        };
        for (const auto& a : conf)
            for (int n1 = 0; n1 <= 3; ++n1)
                for (int n2 = 0; n2 <= 3; ++n2)
                    for (int n3 = 0; n3 <= 3; ++n3) {
                        cplx lib = schur_coefficient(a, n1, n2, n3);
                        cplx ora = ssyt::coefficient(a, n1, n2, n3);
                        CAPTURE(a[0], n1, n2, n3);
                        CHECK(std::abs(lib - ora) < 1e-9 * (1.0 + std::abs(ora)));
                    }
    }

    SECTION("the two evaluation routes agree on separated draws") {
        for (int draw = 0; draw < 25; ++draw) {
            auto a = random_unitary(r);
            auto h = detail::complete_homogeneous(a, 12); // lam[0] + 3 can reach 11
            // Jacobi-Trudi by hand for lambda = (n1+n2+n3, n2+n3, n3, 0)
            auto jt = [&](int n1, int n2, int n3) {
                int lam[4] = {n1 + n2 + n3, n2 + n3, n3, 0};
                std::array<std::array<cplx, 4>, 4> m{};
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) {
                        int k = lam[i] - i + j;
                        m[i][j] = k < 0 ? cplx(0) : h[static_cast<std::size_t>(k)];
                    }
                return detail::det4(m);
            };
            for (int n1 = 0; n1 <= 3; ++n1)
                for (int n3 = 0; n3 <= 3; ++n3) {
                    cplx lib = schur_coefficient(a, n1, 2, n3);
                    CHECK(std::abs(lib - jt(n1, 2, n3)) < 1e-9);
                }
        }
    }
}

TEST_CASE("negative exponents are hard zeros") {
    auto a = ones();
    CHECK(schur_coefficient(a, -1, 0, 0) == cplx(0.0, 0.0));
    CHECK(schur_coefficient(a, 0, -2, 1) == cplx(0.0, 0.0));
}

TEST_CASE("hecke relation is an identity in the local parameters") {
    SECTION("trivial triple") {
        auto t = coefficient_table::from_unitary_seed(1);
        CHECK(verify_hecke_relation(t, 2, 0, 0, 0) == 0.0);
    }

    SECTION("all-ones parameters, nu = (1,1,1): both sides equal 64") {
        coefficient_table t([](std::int64_t p) {
            satake_set s;
            s.p = p;
            s.alpha = {cplx(1), cplx(1), cplx(1), cplx(1)};
            return s;
        });
        CHECK(std::abs(t.local_coefficient(2, 1, 1, 1) - cplx(64.0)) < 1e-12);
        CHECK(verify_hecke_relation(t, 2, 1, 1, 1) < 1e-12);
    }

    SECTION("property sweep over random unitary tables") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            auto t = coefficient_table::from_unitary_seed(seed);
            for (std::int64_t p : {2, 3}) {
                double worst = worst_hecke_residual(t, p, 3);
                CAPTURE(seed, p);
                CHECK(worst <= 1e-9);
            }
        }
    }

    SECTION("theta-bounded tables satisfy it too") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto t = coefficient_table::from_theta_seed(seed);
            CHECK(worst_hecke_residual(t, 5, 3) <= 1e-9);
        }
    }
}

TEST_CASE("table coefficients: normalization, multiplicativity, duality") {
    auto t = coefficient_table::from_unitary_seed(7);

    CHECK(t.coefficient(1, 1, 1) == cplx(1.0, 0.0));

    SECTION("multiplicativity across coprime splits") {
        cplx lhs = t.coefficient(6, 1, 1);
        cplx rhs = t.coefficient(2, 1, 1) * t.coefficient(3, 1, 1);
        CHECK(std::abs(lhs - rhs) < 1e-12);

        rng r(99);
        for (int trial = 0; trial < 50; ++trial) {
            std::int64_t m1 = 1 + 2 * r.uniform_int(0, 10), m2 = 1 + 2 * r.uniform_int(0, 10);
            std::int64_t n1 = 1LL << r.uniform_int(0, 3), n2 = 1LL << r.uniform_int(0, 3);
            cplx a = t.coefficient(m1 * n1, m2 * n2, 1);
            cplx b = t.coefficient(m1, m2, 1) * t.coefficient(n1, n2, 1);
            CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
        }
    }

    SECTION("duality: index reversal conjugates, product up to 1e4") {
        auto check_table = [](const coefficient_table& tab) {
            double worst = 0.0;
            for (std::int64_t n1 = 1; n1 <= 10000; ++n1)
                for (std::int64_t n2 = 1; n1 * n2 <= 10000; ++n2)
                    for (std::int64_t n3 = 1; n1 * n2 * n3 <= 10000; ++n3) {
                        cplx a = tab.coefficient(n1, n2, n3);
                        cplx b = tab.coefficient(n3, n2, n1);
                        worst = std::max(worst, std::abs(b - std::conj(a)) / (1.0 + std::abs(a)));
                    }
            return worst;
        };
        CHECK(check_table(t) < 1e-10);
        auto tb = coefficient_table::from_theta_seed(3);
        CHECK(check_table(tb) < 1e-10);
    }

    SECTION("index budget is enforced") {
        coefficient_table small([](std::int64_t p) { return random_unitary_satake(p, 1); },
                                1000);
        CHECK_THROWS_AS(small.coefficient(100, 100, 100), resource_error);
        CHECK_THROWS_AS(t.coefficient(0, 1, 1), constraint_error);
    }
}

TEST_CASE("schur positivity on the positive orthant") {
    rng r(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::array<cplx, 4> a;
        for (auto& z : a) z = cplx(std::exp(r.uniform(-1.0, 1.0)), 0.0);
        for (int n1 = 0; n1 <= 3; ++n1)
            for (int n2 = 0; n2 <= 3; ++n2)
                for (int n3 = 0; n3 <= 3; ++n3) {
                    cplx v = schur_coefficient(a, n1, n2, n3);
                    CHECK(v.real() >= 0.0);
                    CHECK(std::abs(v.imag()) < 1e-9 * (1.0 + v.real()));
                }
    }
    // confluent positive draws exercise the determinant-free path
    std::array<cplx, 4> conf = {cplx(2.0), cplx(2.0), cplx(0.5), cplx(0.25)};
    for (int n1 = 0; n1 <= 3; ++n1)
        for (int n2 = 0; n2 <= 3; ++n2) CHECK(schur_coefficient(conf, n1, n2, 1).real() >= 0.0);
}

TEST_CASE("middle coefficients through the exterior square") {
    SECTION("frozen values at the all-ones point") {
        CHECK(std::abs(middle_coefficient_via_ext_square(ones(), 0) - cplx(1.0)) < 1e-14);
        CHECK(std::abs(middle_coefficient_via_ext_square(ones(), 1) - cplx(6.0)) < 1e-13);
        // h2 of six ones is C(7,2) = 21; subtracting h0 gives the Schur value 20.
        CHECK(std::abs(middle_coefficient_via_ext_square(ones(), 2) - cplx(20.0)) < 1e-13);
    }

    SECTION("agrees with the Schur value whenever prod(alpha) = 1") {
        rng r(31);
        for (int trial = 0; trial < 40; ++trial) {
            auto a = random_unitary(r);
            for (int nu = 0; nu <= 6; ++nu) {
                cplx via_ext = middle_coefficient_via_ext_square(a, nu);
                cplx via_schur = schur_coefficient(a, 0, nu, 0);
                CAPTURE(trial, nu);
                CHECK(std::abs(via_ext - via_schur) < 1e-10 * (1.0 + std::abs(via_schur)));
            }
        }
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto s = theta_bounded_satake(7, seed);
            for (int nu = 0; nu <= 6; ++nu) {
                cplx via_ext = middle_coefficient_via_ext_square(s.alpha, nu);
                cplx via_schur = schur_coefficient(s.alpha, 0, nu, 0);
                CHECK(std::abs(via_ext - via_schur) < 1e-9 * (1.0 + std::abs(via_schur)));
            }
        }
    }
}

TEST_CASE("degree-3 symmetric lift") {
    SECTION("boundary and special eigenvalues") {
        gl2_maass g;
        g.t = 1.0;
        g.lambda_p[2] = 2.0;
        g.lambda_p[3] = 0.0;
        auto L = sym3_lift(g);

        CHECK(L.lambda_inf[0] == cplx(0.0, 3.0));
        CHECK(L.lambda_inf[1] == cplx(0.0, 1.0));
        CHECK(L.lambda_inf[2] == cplx(0.0, -1.0));
        CHECK(L.lambda_inf[3] == cplx(0.0, -3.0));
        CHECK(std::abs(L.lambda_inf[0] + L.lambda_inf[1] + L.lambda_inf[2] + L.lambda_inf[3]) ==
              0.0);

        auto s2 = L.local(2); // lambda = 2: beta = 1, all parameters 1
        for (const auto& z : s2.alpha) CHECK(std::abs(z - cplx(1.0)) < 1e-12);
        CHECK(s2.tempered);

        auto s3 = L.local(3); // lambda = 0: beta = i, parameters (-i, i, -i, i)
        CHECK(std::abs(s3.alpha[0] - cplx(0, -1)) < 1e-12);
        CHECK(std::abs(s3.alpha[1] - cplx(0, 1)) < 1e-12);
        CHECK(std::abs(s3.alpha[2] - cplx(0, -1)) < 1e-12);
        CHECK(std::abs(s3.alpha[3] - cplx(0, 1)) < 1e-12);

        CHECK_THROWS_AS(L.local(5), constraint_error);
    }

    SECTION("first coefficient is lambda^3 - 2 lambda, tempered or not") {
        gl2_maass g;
        g.t = 0.5;
        int pi = 0;
        std::vector<std::int64_t> ps = primes_up_to(100);
        std::vector<double> lams;
        for (double lam = -2.5; lam <= 2.5 + 1e-9; lam += 0.25) {
            g.lambda_p[ps[static_cast<std::size_t>(pi)]] = lam;
            lams.push_back(lam);
            ++pi;
        }
        auto L = sym3_lift(g);
        for (std::size_t i = 0; i < lams.size(); ++i) {
            auto s = L.local(ps[i]);
            cplx e1 = s.alpha[0] + s.alpha[1] + s.alpha[2] + s.alpha[3];
            double lam = lams[i];
            double expect = lam * lam * lam - 2.0 * lam;
            CAPTURE(lam);
            CHECK(std::abs(e1 - cplx(expect)) < 1e-10 * (1.0 + std::abs(expect)));
            CHECK(s.tempered == (std::abs(lam) <= 2.0));
            // product of the parameter set is exactly 1
            cplx prod = s.alpha[0] * s.alpha[1] * s.alpha[2] * s.alpha[3];
            CHECK(std::abs(prod - cplx(1.0)) < 1e-12);
        }
    }
}

TEST_CASE("GL(2) eigenvalue recurrence and multiplicativity") {
    gl2_maass g;
    g.t = 9.53;
    g.lambda_p[2] = 1.2;
    g.lambda_p[3] = -0.7;

    CHECK(g.lambda_prime_power(2, 0) == 1.0);
    CHECK(g.lambda_prime_power(2, 1) == 1.2);
    CHECK(g.lambda_prime_power(2, 2) == Catch::Approx(1.2 * 1.2 - 1.0));
    double l3 = 1.2 * (1.2 * 1.2 - 1.0) - 1.2;
    CHECK(g.lambda_prime_power(2, 3) == Catch::Approx(l3));
    CHECK(g.lambda(12) == Catch::Approx(g.lambda_prime_power(2, 2) * (-0.7)));
    CHECK_THROWS_AS(g.lambda(5), constraint_error);
    CHECK_THROWS_AS(g.lambda(0), constraint_error);
}

TEST_CASE("spectral csv ingestion") {
    SECTION("well-formed file with two records") {
        std::string text =
            "t, parity, p, lambda_p\n"
            "9.5336, 0, 2, 1.10\n"
            "9.5336, 0, 3, -0.45\n"
            "12.173, 1, 2, 0.29\n";
        auto recs = parse_spectral_csv(text);
        REQUIRE(recs.size() == 2);
        CHECK(recs[0].t == 9.5336);
        CHECK(recs[0].parity == 0);
        CHECK(recs[0].lambda_p.at(2) == 1.10);
        CHECK(recs[0].lambda_p.at(3) == -0.45);
        CHECK(recs[1].t == 12.173);
        CHECK(recs[1].parity == 1);
    }

    SECTION("rejections carry line numbers") {
        auto line_of = [](const std::string& text) {
            try {
                parse_spectral_csv(text);
            } catch (const parse_error& e) {
                return e.line();
            }
            return -1L;
        };
        CHECK(line_of("wrong, header\n1,0,2,1\n") == 1);
        CHECK(line_of("t, parity, p, lambda_p\n1.0, 0, 2\n") == 2);
        CHECK(line_of("t, parity, p, lambda_p\n1.0, 0, 2, 1.0\n1.0, 2, 3, 0.5\n") == 3);
        CHECK(line_of("t, parity, p, lambda_p\n1.0, 0, 4, 1.0\n") == 2);   // p not prime
        CHECK(line_of("t, parity, p, lambda_p\n1.0, 0, 2, abc\n") == 2);   // bad number
        CHECK(line_of("t, parity, p, lambda_p\n1.0, 0, 2, 1.0\n1.0, 0, 2, 1.1\n") == 3);
        CHECK(line_of("") == 1);
    }
}

TEST_CASE("table export and freeze") {
    auto t = coefficient_table::from_unitary_seed(11);
    cplx v = t.coefficient(2, 3, 5);
    t.coefficient(4, 1, 1);
    t.freeze();

    auto j = t.export_cache();
    REQUIRE(j.contains("2,3,5"));
    CHECK(j["2,3,5"][0].get<double>() == v.real());
    CHECK(j["2,3,5"][1].get<double>() == v.imag());
    CHECK(j.contains("4,1,1"));

    // frozen tables still answer fresh queries, just without caching them
    std::size_t before = t.cache_size();
    cplx w = t.coefficient(7, 1, 1);
    CHECK(std::abs(w) >= 0.0);
    CHECK(t.cache_size() == before);
}
