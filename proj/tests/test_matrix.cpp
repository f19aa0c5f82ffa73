#include <cmath>
#include <random>

#include "doctest.h"

#include "covclone/matrix.hpp"

using namespace covclone;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = complexd{nd(gen), nd(gen)};
    return (g + g.dagger()) * complexd{0.5};
}

// test-only oracle: cofactor determinant, dimensions <= 4
complexd det_oracle(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    complexd det{};
    double sign = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        ComplexMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t jj = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == c) continue;
                minor(i - 1, jj++) = m(i, j);
            }
        }
        det += sign * m(0, c) * det_oracle(minor);
        sign = -sign;
    }
    return det;
}

}  // namespace

TEST_CASE("kron identity and pauli cases") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    const ComplexMatrix i4 = ComplexMatrix::identity(4);
    CHECK((kron(i2, i2) - i4).max_abs() == 0.0);

    const ComplexMatrix zi = kron(pauli_z(), i2);
    const double diag[4] = {1, 1, -1, -1};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(std::abs(zi(i, j) - (i == j ? complexd{diag[i]} : complexd{})) == 0.0);
}

TEST_CASE("kron(X,X) flips both qubits: m -> 3 - m") {
    const ComplexMatrix xx = kron(pauli_x(), pauli_x());
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t r = 0; r < 4; ++r)
            CHECK(std::abs(xx(r, m) - (r == 3 - m ? complexd{1.0} : complexd{})) == 0.0);
}

TEST_CASE("kron associativity is exact") {
    // small-integer entries make every double product exact, so the two
    // association orders must agree bit for bit
    std::mt19937_64 gen(123);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int s = 0; s < 5; ++s) {
        ComplexMatrix a(2, 2), b(2, 2), c(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                a(i, j) = complexd(d(gen), d(gen));
                b(i, j) = complexd(d(gen), d(gen));
                c(i, j) = complexd(d(gen), d(gen));
            }
        CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).max_abs() == 0.0);
    }
}

TEST_CASE("partial trace identity factorization") {
    const ComplexMatrix red = partial_trace(ComplexMatrix::identity(8), {2, 2, 2}, {2});
    CHECK((red - ComplexMatrix::identity(2) * complexd{4.0}).max_abs() == 0.0);
}

TEST_CASE("partial trace of product and Bell states") {
    ComplexMatrix p00(4, 4);
    p00(0, 0) = 1.0;  // |00><00|
    const ComplexMatrix r = partial_trace(p00, {2, 2}, {0});
    CHECK(std::abs(r(0, 0) - complexd{1.0}) == 0.0);
    CHECK(std::abs(r(1, 1)) == 0.0);

    ComplexMatrix bell(4, 4);  // (|00> + |11>)/sqrt(2) projector
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    const ComplexMatrix rb = partial_trace(bell, {2, 2}, {0});
    CHECK((rb - ComplexMatrix::identity(2) * complexd{0.5}).max_abs() <= 1e-15);
}

TEST_CASE("partial trace preserves trace; empty keep gives scalar trace") {
    const ComplexMatrix m = random_hermitian(8, 99);
    const ComplexMatrix r01 = partial_trace(m, {2, 2, 2}, {0, 1});
    CHECK(std::abs(r01.trace() - m.trace()) <= 1e-12);
    const ComplexMatrix scalar = partial_trace(m, {2, 2, 2}, {});
    CHECK(scalar.rows() == 1);
    CHECK(std::abs(scalar(0, 0) - m.trace()) <= 1e-12);
}

TEST_CASE("partial trace rejects bad inputs") {
    CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(8), {2, 2}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(8), {2, 2, 2}, {3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(8), {2, 2, 2}, {1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(ComplexMatrix(2, 3), {2, 3}, {0}), std::invalid_argument);
}

TEST_CASE("eigenvalues of fixed matrices") {
    const auto ez = hermitian_eigenvalues(pauli_z());
    CHECK(ez[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ez[1] == doctest::Approx(1.0).epsilon(1e-14));

    const auto e8 = hermitian_eigenvalues(ComplexMatrix::identity(8));
    for (double v : e8) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    // characteristic polynomial of [[2,1],[1,2]]: (2-l)^2 = 1 -> l = 1, 3
    const auto et = hermitian_eigenvalues(ComplexMatrix{{2.0, 1.0}, {1.0, 2.0}});
    CHECK(et[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(et[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("eigensystem reconstruction and invariants on random Hermitian") {
    for (std::uint64_t s = 0; s < 8; ++s) {
        const std::size_t n = 2 + (s % 4) * 2;  // 2,4,6,8
        const ComplexMatrix m = random_hermitian(n, 500 + s);
        const EigenSystem es = hermitian_eigensystem(m);

        ComplexMatrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = es.values[i];
        const ComplexMatrix rec = es.vectors * d * es.vectors.dagger();
        CHECK((rec - m).max_abs() <= 1e-10);

        double sum = 0;
        for (double v : es.values) sum += v;
        CHECK(std::abs(sum - m.trace().real()) <= 1e-10);

        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(es.values[i] <= es.values[i + 1]);
    }
}

TEST_CASE("eigenvalue product equals determinant (dim <= 4)") {
    for (std::uint64_t s = 0; s < 6; ++s) {
        const std::size_t n = 2 + (s % 3);
        const ComplexMatrix m = random_hermitian(n, 700 + s);
        const auto ev = hermitian_eigenvalues(m);
        double prod = 1;
        for (double v : ev) prod *= v;
        CHECK(std::abs(prod - det_oracle(m).real()) <= 1e-8);
    }
}

TEST_CASE("eigen solver rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigenvalues(m), std::invalid_argument);
}

TEST_CASE("is_psd") {
    CHECK(is_psd(ComplexMatrix::identity(2), 1e-9));
    CHECK_FALSE(is_psd(pauli_z(), 1e-9));
    CHECK(is_psd(ComplexMatrix(2, 2), 1e-9));  // diag(0, 0) boundary
    ComplexMatrix skew(2, 2);
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(is_psd(skew, 1e-9), std::invalid_argument);
}

TEST_CASE("hermiticity check tolerance") {
    ComplexMatrix m = random_hermitian(4, 3);
    CHECK(m.is_hermitian());
    m(1, 2) += complexd{1e-6, 0.0};
    CHECK_FALSE(m.is_hermitian());
}
