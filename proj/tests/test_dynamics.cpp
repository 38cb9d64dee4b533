#include "decaylab/bounds.hpp"
#include "decaylab/dynamics.hpp"
#include "decaylab/pair.hpp"
#include "decaylab/parallel.hpp"
#include "decaylab/presets.hpp"
#include "decaylab/scalar.hpp"

#include <catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <random>

using namespace decaylab;
using Catch::Matchers::WithinAbs;

namespace {

CMatrix random_density(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    CMatrix a(n);
    for (auto& x : a.entries()) x = Complex(d(rng), d(rng));
    CMatrix rho = a * a.adjoint();
    return rho * (1.0 / rho.trace().real());
}

/// Random CP-basis meson state with no meson-vacuum coherence.
CMatrix random_meson_cp(std::mt19937_64& rng) {
    CMatrix rho = random_density(3, rng);
    for (std::size_t i = 0; i < 2; ++i) rho(i, kVac) = rho(kVac, i) = 0.0;
    return rho * (1.0 / rho.trace().real());
}

CMatrix pure(const CVector& psi) { return outer(psi, psi); }

}  // namespace

TEST_CASE("identity Kraus set is complete and acts trivially") {
    std::mt19937_64 rng(1);
    const CMatrix rho = random_density(3, rng);
    const KrausSet id = identity_kraus(3);
    CHECK(completeness_residual(id) == 0.0);
    CHECK(max_abs_diff(apply_kraus(rho, id), rho) == 0.0);
}

TEST_CASE("Choi matrix of the identity map is the unnormalised Bell projector") {
    const CMatrix c = choi_matrix([](const CMatrix& x) { return x; }, 2);
    CHECK(c(0, 0) == 1.0);
    CHECK(c(0, 3) == 1.0);
    CHECK(c(3, 0) == 1.0);
    CHECK(c(1, 1) == 0.0);
    CHECK_THAT(min_eigenvalue(c), WithinAbs(0.0, 1e-15));
    CHECK_THAT(hermitian_eigenvalues(c).back(), WithinAbs(2.0, 1e-15));
}

TEST_CASE("product map on a product input factorizes") {
    std::mt19937_64 rng(2);
    const ScalarParams p = ScalarParams::make(1.0, 0.7, 0.4, Complex(0.3, 0.1));
    const LinearMap m = scalar_channel_map(p, 0.9);
    const CMatrix a = random_density(2, rng), b = random_density(2, rng);
    CHECK(max_abs_diff(apply_product_map(m, 2, m, 2, kron(a, b)), kron(m(a), m(b))) < 1e-15);
    CHECK_THROWS(apply_product_map(m, 2, m, 2, CMatrix::identity(3)));
}

TEST_CASE("master equation at t = 0 returns the initial state") {
    std::mt19937_64 rng(3);
    const LindbladModel model = scalar_lindblad(ScalarParams::make(2.0, 1.0, 0.5, 0.2));
    const CMatrix rho = random_density(2, rng);
    CHECK(integrate_master(model, rho, 0.0) == rho);
    CHECK_THROWS(integrate_master(model, rho, 1.0, 0));
    CHECK_THROWS(integrate_master(model, random_density(3, rng), 1.0));
}

TEST_CASE("RK4 converges at fourth order") {
    std::mt19937_64 rng(4);
    const ScalarParams p = ScalarParams::make(1.0, 2.0, 0.6, Complex(0.2, -0.1));
    const LindbladModel model = scalar_lindblad(p);
    const ScalarState rho0 = ScalarState::from_matrix(random_density(2, rng));
    const double t = 3.0;
    const CMatrix exact = evolve_scalar_general(rho0, p, t).rho;
    const double coarse = max_abs_diff(integrate_master(model, rho0.rho, t, 20), exact);
    const double fine = max_abs_diff(integrate_master(model, rho0.rho, t, 40), exact);
    CHECK(coarse / fine >= 12.0);
}

TEST_CASE("master-equation trajectories stay positive") {
    const ParticlePreset k = preset_K0();
    MesonParams p = k.meson;
    p.lambda = 0.5 * lambda_max(p).lambda_max;
    const LindbladModel model = meson_lindblad(p, k.epsilon);
    std::mt19937_64 rng(5);
    const double tau = 1.0 / p.gamma_S;
    for (int trial = 0; trial < 3; ++trial) {
        CMatrix rho = random_meson_cp(rng);
        for (int step = 0; step < 5; ++step) {
            rho = integrate_master(model, rho, 0.5 * tau);
            CHECK(min_eigenvalue(rho) >= -1e-9);
            CHECK_THAT(rho.trace().real(), WithinAbs(1.0, 1e-9));
        }
    }
}

TEST_CASE("semigroup residual with a zero first leg vanishes") {
    std::mt19937_64 rng(6);
    const ScalarParams p = ScalarParams::make(1.0, 0.7, 0.4, Complex(0.3, 0.1));
    auto evolve = [&](const ScalarState& s, double t) { return evolve_scalar_general(s, p, t); };
    const ScalarState rho0 = ScalarState::from_matrix(random_density(2, rng));
    CHECK(semigroup_residual(evolve, rho0, 0.0, 1.5) == 0.0);
    CHECK_THROWS(semigroup_residual(evolve, rho0, -1.0, 1.5));
}

TEST_CASE("pair evolution of a product state factorizes") {
    const ParticlePreset k = preset_K0(), b = preset_B0();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix a = random_meson_cp(rng), c = random_meson_cp(rng);
        const double t = (0.2 + trial) / k.meson.gamma_S;
        const CMatrix joint = tensor_evolve_pair(kron(a, c), k.meson, k.meson, k.epsilon, k.epsilon, t);
        const CMatrix separate =
            kron(evolve_meson_cp(a, k.meson, k.epsilon, t), evolve_meson_cp(c, k.meson, k.epsilon, t));
        CHECK(max_abs_diff(joint, separate) <= 1e-11);

        const double tb = (0.2 + trial) / b.meson.gamma_S;
        const CMatrix mixed = tensor_evolve_pair(kron(a, c), k.meson, b.meson, k.epsilon, b.epsilon, tb);
        CHECK(max_abs_diff(mixed, kron(evolve_meson_cp(a, k.meson, k.epsilon, tb),
                                       evolve_meson_cp(c, b.meson, b.epsilon, tb))) <= 1e-11);
    }
}

TEST_CASE("entangled K0 K0bar pair keeps unit trace") {
    const ParticlePreset k = preset_K0();
    const CVector up = kron(k0_cp(), k0bar_cp()), down = kron(k0bar_cp(), k0_cp());
    CVector psi(9);
    for (std::size_t i = 0; i < 9; ++i) psi[i] = (up[i] - down[i]) / std::sqrt(2.0);
    const CMatrix rho = pure(psi);
    for (double f : {0.0, 0.5, 1.0, 5.0, 50.0}) {
        const CMatrix r = tensor_evolve_pair(rho, k.meson, k.meson, k.epsilon, k.epsilon, f / k.meson.gamma_S);
        CHECK_THAT(r.trace().real(), WithinAbs(1.0, 1e-12));
        CHECK(min_eigenvalue(r) >= -1e-12);
    }
}

TEST_CASE("pair evolution agrees with the S/L-coefficient product map") {
    const ParticlePreset k = preset_K0();
    const CVector up = kron(k0_cp(), k0bar_cp()), down = kron(k0bar_cp(), k0_cp());
    CVector psi(9);
    for (std::size_t i = 0; i < 9; ++i) psi[i] = (up[i] - down[i]) / std::sqrt(2.0);
    const CMatrix rho = pure(psi);

    const double t = 5.0 / k.meson.gamma_S;
    const CMatrix v = v_matrix(k.epsilon), vinv = inverse(v);
    const CMatrix vv = kron(v, v), vvinv = kron(vinv, vinv);
    const CMatrix tilde = vvinv * rho * vvinv.adjoint();
    const LinearMap m = tilde_channel_map(k.meson, t);
    const CMatrix via_tilde = vv * apply_product_map(m, 3, m, 3, tilde) * vv.adjoint();
    const CMatrix direct = tensor_evolve_pair(rho, k.meson, k.meson, k.epsilon, k.epsilon, t);
    const std::size_t vac_vac = kVac * 3 + kVac;
    CHECK_THAT(direct(vac_vac, vac_vac).real(), WithinAbs(via_tilde(vac_vac, vac_vac).real(), 1e-10));
    CHECK(max_abs_diff(direct, via_tilde) <= 1e-10);
}

TEST_CASE("pair evolution rejects malformed input") {
    const ParticlePreset k = preset_K0();
    CHECK_THROWS(tensor_evolve_pair(CMatrix::identity(3), k.meson, k.meson, k.epsilon, k.epsilon, 1e-10));
    CMatrix bad = CMatrix::identity(9);
    bad(0, 1) = 1.0;
    CHECK_THROWS(tensor_evolve_pair(bad, k.meson, k.meson, k.epsilon, k.epsilon, 1e-10));
}

TEST_CASE("parallel_for visits every index once") {
    for (std::size_t n : {0u, 1u, 63u, 64u, 1000u}) {
        std::vector<std::atomic<int>> hits(n);
        parallel_for(n, [&](std::size_t i) { hits[i]++; });
        bool all_once = true;
        for (auto& h : hits) all_once = all_once && h.load() == 1;
        CHECK(all_once);
    }
}

TEST_CASE("parallel_for propagates exceptions") {
    CHECK_THROWS_AS(parallel_for(1000,
                                 [](std::size_t i) {
                                     if (i == 777) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("DECAYLAB_THREADS caps the worker count") {
    ::setenv("DECAYLAB_THREADS", "2", 1);
    CHECK(worker_count() == 2);
    ::setenv("DECAYLAB_THREADS", "junk", 1);
    CHECK(worker_count() >= 1);
    ::unsetenv("DECAYLAB_THREADS");
}
