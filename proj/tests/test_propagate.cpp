#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"

#include "adpol/errors.hpp"
#include "adpol/propagate.hpp"
#include "oracles.hpp"

using namespace adpol;

namespace {

oracle::V3 as_v3(const StokesVector& s) { return {s.s1, s.s2, s.s3}; }

StokesVector random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    const Vec3 v{n(rng), n(rng), n(rng)};
    return StokesVector::from((1.0 / norm(v)) * v);
}

}  // namespace

TEST_CASE("sample indices cover both ends and are strictly increasing") {
    for (std::size_t n : {1u, 7u, 100u, 1000u}) {
        for (std::size_t m : {2u, 3u, 11u}) {
            if (m > n + 1) {
                continue;
            }
            const auto idx = sample_step_indices({Method::rotor, n, m, false});
            REQUIRE(idx.size() == m);
            CHECK(idx.front() == 0);
            CHECK(idx.back() == n);
            for (std::size_t j = 1; j < m; ++j) {
                CHECK(idx[j] > idx[j - 1]);
                CHECK(idx[j] == j * n / (m - 1));
            }
        }
    }
}

TEST_CASE("integrator configuration is validated") {
    CHECK_THROWS_AS(IntegratorConfig({Method::rotor, 0, 2, false}).validate(), ValidationError);
    CHECK_THROWS_AS(IntegratorConfig({Method::rotor, 10, 1, false}).validate(), ValidationError);
    CHECK_THROWS_AS(IntegratorConfig({Method::rotor, 10, 12, false}).validate(), ValidationError);
    CHECK_NOTHROW(IntegratorConfig({Method::rotor, 10, 11, false}).validate());
    CHECK(parse_method("rk4") == Method::rk4);
    CHECK(parse_method("rotor") == Method::rotor);
    CHECK_THROWS_AS((void)parse_method("euler"), ValidationError);
}

TEST_CASE("constant field: both integrators reproduce the rigid rotation") {
    const oracle::V3 w{0.3, -1.1, 2.0};
    const double len = 2.5;
    const double rate = oracle::norm(w);
    const oracle::V3 axis{w[0] / rate, w[1] / rate, w[2] / rate};
    const auto profile = BirefringenceProfile::constant({w[0], w[1], w[2]}, len);
    const StokesVector s0{0.0, 0.6, 0.8};
    const auto expected = oracle::mul(oracle::rotation_matrix(axis, rate * len), as_v3(s0));

    SUBCASE("rotor is exact for a constant field") {
        const auto trace = propagate(profile, s0, {Method::rotor, 7, 2, false});
        CHECK(oracle::max_abs(as_v3(trace.final_state()), expected) < 1e-14);
    }
    SUBCASE("rk4") {
        const auto trace = propagate(profile, s0, {Method::rk4, 2000, 2, false});
        CHECK(oracle::max_abs(as_v3(trace.final_state()), expected) < 1e-11);
    }
}

TEST_CASE("torque right-hand side is the right-handed cross product") {
    const Vec3 d = torque_rhs({0.0, 0.0, 1.0}, {1.0, 0.0, 0.0});
    CHECK(d == Vec3{0.0, 1.0, 0.0});
}

TEST_CASE("gaussian pair: both integrators agree with an independent 3/8-rule integration") {
    const double w0 = 40.0;
    const auto profile = BirefringenceProfile::gaussian_pair(Case::A, w0, 1.0);
    const StokesVector s0{1.0, 0.0, 0.0};
    const auto ref = oracle::integrate_38(oracle::gaussian_pair_field(w0, 1.0, 1), as_v3(s0), 0.0, 1.0, 200000);
    const auto rotor = propagate(profile, s0, {Method::rotor, 200000, 2, false}).final_state();
    const auto rk4 = propagate(profile, s0, {Method::rk4, 20000, 2, false}).final_state();
    CHECK(oracle::max_abs(as_v3(rotor), ref) < 1e-8);
    CHECK(oracle::max_abs(as_v3(rk4), ref) < 1e-9);
}

TEST_CASE("trace layout") {
    const auto profile = BirefringenceProfile::trigonometric(5.0, 2.0);
    const auto trace = propagate(profile, {0.0, 0.0, 1.0}, {Method::rotor, 100, 11, false}, Case::B);
    REQUIRE(trace.size() == 11);
    CHECK(trace.s.size() == 11);
    CHECK(trace.omega.size() == 11);
    CHECK(trace.sigma.size() == 11);
    CHECK(trace.z.front() == 0.0);
    CHECK(trace.z.back() == 2.0);
    CHECK(trace.z[5] == doctest::Approx(1.0));
    CHECK(trace.s.front() == StokesVector{0.0, 0.0, 1.0});
    CHECK(trace.sigma.front() == doctest::Approx(1.0));  // S starts along Omega(0) = (0, 0, omega0)

    const auto plain = propagate(profile, {0.0, 0.0, 1.0}, {Method::rotor, 100, 11, false});
    CHECK(std::isnan(plain.sigma[3]));
    CHECK_FALSE(plain.case_selector.has_value());
}

TEST_CASE("case mismatch is reported when sigma is requested") {
    const auto profile = BirefringenceProfile::trigonometric(5.0, 1.0);
    CHECK_THROWS_AS((void)propagate(profile, {0.0, 0.0, 1.0}, {Method::rotor, 10, 2, false}, Case::A),
                    CaseMismatchError);
}

TEST_CASE("initial state must be unit") {
    const auto profile = BirefringenceProfile::trigonometric(5.0, 1.0);
    CHECK_THROWS_AS((void)propagate(profile, {0.0, 0.0, 1.1}), ValidationError);
    CHECK_THROWS_AS((void)propagate(profile, {0.0, 0.0, 0.0}), ValidationError);
}

TEST_CASE("single steps check their domain") {
    const auto profile = BirefringenceProfile::trigonometric(5.0, 1.0);
    CHECK_THROWS_AS((void)step_rk4(profile, {0.0, 0.0, 1.0}, 0.95, 0.1), DomainError);
    CHECK_THROWS_AS((void)step_rotor(profile, {0.0, 0.0, 1.0}, -0.05, 0.1), DomainError);
    CHECK_NOTHROW((void)step_rotor(profile, {0.0, 0.0, 1.0}, 0.9, 0.1));
    // Backward steps are allowed inside the domain.
    const auto fwd = step_rotor(profile, {0.0, 0.0, 1.0}, 0.2, 0.01);
    const auto back = step_rotor(profile, fwd, 0.21, -0.01);
    CHECK(oracle::max_abs(as_v3(back), {0.0, 0.0, 1.0}) < 1e-15);
}

TEST_CASE("rotor preserves the norm to rounding (property)") {
    std::mt19937_64 rng(11);
    const auto profile = BirefringenceProfile::gaussian_pair(Case::B, 80.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const StokesVector s0 = random_unit(rng);
        const auto trace = propagate(profile, s0, {Method::rotor, 5000, 51, false});
        for (const auto& s : trace.s) {
            CHECK(std::fabs(s.norm() - 1.0) < 1e-13);
        }
    }
}

TEST_CASE("rk4 renormalization keeps unit norm") {
    const auto profile = BirefringenceProfile::trigonometric(300.0, 1.0);
    const auto raw = propagate(profile, {0.0, 0.0, 1.0}, {Method::rk4, 300, 2, false}).final_state();
    const auto fixed = propagate(profile, {0.0, 0.0, 1.0}, {Method::rk4, 300, 2, true}).final_state();
    CHECK(std::fabs(raw.norm() - 1.0) > 1e-6);
    CHECK(std::fabs(fixed.norm() - 1.0) < 1e-14);
}

TEST_CASE("the flow is linear in the initial state (property)") {
    // Propagating e1, e2, e3 and combining must equal propagating the combination.
    std::mt19937_64 rng(5);
    const auto profile = BirefringenceProfile::fractional(60.0, 0.4, 1.0);
    const IntegratorConfig cfg{Method::rk4, 4000, 2, false};
    const auto e1 = propagate(profile, {1.0, 0.0, 0.0}, cfg).final_state().vec();
    const auto e2 = propagate(profile, {0.0, 1.0, 0.0}, cfg).final_state().vec();
    const auto e3 = propagate(profile, {0.0, 0.0, 1.0}, cfg).final_state().vec();
    for (int i = 0; i < 10; ++i) {
        const StokesVector s = random_unit(rng);
        const Vec3 combined = s.s1 * e1 + s.s2 * e2 + s.s3 * e3;
        CHECK(max_abs_diff(propagate(profile, s, cfg).final_state().vec(), combined) < 1e-12);
    }
}

TEST_CASE("fidelity") {
    CHECK(fidelity({1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}) == 1.0);
    CHECK(fidelity({1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}) == 0.0);
    CHECK(fidelity({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}) == doctest::Approx(0.5));
    CHECK_NOTHROW((void)fidelity({1.0 + 5e-6, 0.0, 0.0}, {1.0, 0.0, 0.0}));
    CHECK_THROWS_AS((void)fidelity({1.1, 0.0, 0.0}, {1.0, 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS((void)fidelity({1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}), ValidationError);
}

TEST_CASE("trace CSV") {
    const auto profile = BirefringenceProfile::trigonometric(1.0, 1.0);
    std::ostringstream with_case;
    write_trace_csv(with_case, propagate(profile, {0.0, 0.0, 1.0}, {Method::rotor, 4, 3, false}, Case::B));
    std::istringstream in(with_case.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "z,s1,s2,s3,omega1,omega2,omega3,sigma");
    std::getline(in, line);
    CHECK(line == "0,0,0,1,0,0,1,1");
    int rows = 1;
    while (std::getline(in, line)) {
        ++rows;
    }
    CHECK(rows == 3);

    std::ostringstream without_case;
    write_trace_csv(without_case, propagate(profile, {0.0, 0.0, 1.0}, {Method::rotor, 4, 2, false}));
    std::istringstream in2(without_case.str());
    std::getline(in2, line);
    std::getline(in2, line);
    CHECK(line.back() == ',');
}
