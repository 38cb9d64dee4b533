#include "decaylab/linalg.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <random>

using namespace decaylab;
using Catch::Matchers::WithinAbs;

namespace {

CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = d(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = Complex(d(rng), d(rng));
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    Eigen::MatrixXcd e(m.dim(), m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) e(i, j) = m(i, j);
    return e;
}

}  // namespace

TEST_CASE("basic matrix algebra") {
    const CMatrix a{{1.0, Complex(0, 2)}, {3.0, 4.0}};
    const CMatrix b{{0.0, 1.0}, {1.0, 0.0}};
    CHECK(a.adjoint()(0, 1) == 3.0);
    CHECK(a.adjoint()(1, 0) == Complex(0, -2));
    CHECK(a.transpose()(1, 0) == Complex(0, 2));
    CHECK(a.trace() == Complex(5.0));
    CHECK((a * CMatrix::identity(2)) == a);
    CHECK(commutator(b, b) == CMatrix::zero(2));
    CHECK(anticommutator(b, b) == CMatrix::identity(2) * 2.0);
    CHECK_THAT(frobenius_norm(CMatrix::identity(3)), WithinAbs(std::sqrt(3.0), 1e-15));
    CHECK(max_abs_diff(a, a) == 0.0);
}

TEST_CASE("kron follows the row-major block convention") {
    const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const CMatrix b{{0.0, 1.0}, {1.0, 0.0}};
    const CMatrix k = kron(a, b);
    REQUIRE(k.dim() == 4);
    CHECK(k(0, 1) == 1.0);
    CHECK(k(0, 3) == 2.0);
    CHECK(k(3, 2) == 4.0);
    const CVector u{1.0, 2.0}, v{3.0, Complex(0, 1)};
    const CVector uv = kron(u, v);
    CHECK(uv[3] == Complex(0, 2));
}

TEST_CASE("vector helpers") {
    const CVector u{Complex(1, 1), 0.0}, v{1.0, 1.0};
    CHECK(inner(u, v) == Complex(1, -1));
    const CMatrix o = outer(u, v);
    CHECK(o(0, 1) == Complex(1, 1));
    CHECK(expectation(CMatrix::identity(2), u) == Complex(2.0));
    CHECK(decaylab::apply(CMatrix{{0.0, 1.0}, {1.0, 0.0}}, v) == v);
}

TEST_CASE("inverse matches the identity and rejects singular input") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        CMatrix m = random_hermitian(4, rng);
        for (std::size_t i = 0; i < 4; ++i) m(i, i) += 5.0;
        CHECK(max_abs_diff(m * inverse(m), CMatrix::identity(4)) < 1e-13);
    }
    CHECK_THROWS(inverse(CMatrix{{1.0, 2.0}, {2.0, 4.0}}));
}

TEST_CASE("Hermitian eigensolver agrees with Eigen") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {2u, 3u, 4u, 9u}) {
        for (int trial = 0; trial < 20; ++trial) {
            const CMatrix m = random_hermitian(n, rng);
            const auto mine = hermitian_eigen(m);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
            for (std::size_t i = 0; i < n; ++i)
                CHECK_THAT(mine.values[i], WithinAbs(es.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-12));
            // M V = V diag(values)
            CMatrix d = CMatrix::zero(n);
            for (std::size_t i = 0; i < n; ++i) d(i, i) = mine.values[i];
            CHECK(max_abs_diff(m * mine.vectors, mine.vectors * d) < 1e-12);
            CHECK(max_abs_diff(mine.vectors.adjoint() * mine.vectors, CMatrix::identity(n)) < 1e-12);
        }
    }
}

TEST_CASE("eigenvalues come out sorted ascending") {
    const CMatrix m = CMatrix::diag({3.0, -1.0, 2.0});
    const auto v = hermitian_eigenvalues(m);
    CHECK(std::is_sorted(v.begin(), v.end()));
    CHECK(min_eigenvalue(m) == -1.0);
}

TEST_CASE("PSD test and rank-deficient projectors") {
    const CVector psi{1.0 / std::sqrt(2.0), Complex(0, 1) / std::sqrt(2.0), 0.0};
    const CMatrix proj = outer(psi, psi);
    CHECK(is_psd(proj, 1e-14));
    CHECK_THAT(min_eigenvalue(proj), WithinAbs(0.0, 1e-15));
    CHECK_FALSE(is_psd(CMatrix::diag({1.0, -1e-9}), 1e-12));
}

TEST_CASE("non-Hermitian input is rejected by the eigensolver") {
    const CMatrix m{{1.0, 2.0}, {0.0, 1.0}};
    CHECK_FALSE(is_hermitian(m));
    CHECK_THROWS_AS(hermitian_eigen(m), std::domain_error);
    CHECK(hermiticity_defect(hermitian_part(m)) == 0.0);
}

TEST_CASE("dimension mismatches throw") {
    CHECK_THROWS(CMatrix::identity(2) * CMatrix::identity(3));
    CHECK_THROWS(CMatrix::identity(2) + CMatrix::identity(3));
}
