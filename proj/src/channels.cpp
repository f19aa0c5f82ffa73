#include "covclone/channels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace covclone {

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexMatrix ketbra(int i, int j, std::size_t d = 8) {
    ComplexMatrix m(d, d);
    m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1.0;
    return m;
}

const ComplexMatrix& yy_conjugator() {
    static const ComplexMatrix u = kron(kron(pauli_y(), pauli_y()), ComplexMatrix::identity(2));
    return u;
}

}  // namespace

Variant variant_from_int(int n) {
    if (n == 1) return Variant::v1;
    if (n == 2) return Variant::v2;
    throw std::invalid_argument("variant must be 1 or 2");
}

PureQubit::PureQubit(double xi_in, double phi_in) : xi(xi_in), phi(0) {
    if (!std::isfinite(xi_in) || !std::isfinite(phi_in))
        throw std::invalid_argument("PureQubit: non-finite angle");
    if (xi < -1e-12 || xi > kPi + 1e-12)
        throw std::invalid_argument("PureQubit: xi must lie in [0, pi]");
    xi = std::min(std::max(xi, 0.0), kPi);
    phi = std::fmod(phi_in, 2.0 * kPi);
    if (phi < 0) phi += 2.0 * kPi;
}

std::array<complexd, 2> PureQubit::ket() const {
    return {std::cos(xi / 2.0), std::polar(std::sin(xi / 2.0), phi)};
}

ComplexMatrix PureQubit::density() const {
    const auto k = ket();
    ComplexMatrix rho(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) rho(i, j) = k[i] * std::conj(k[j]);
    return rho;
}

ComplexMatrix CovariantParams::b1_block() const {
    ComplexMatrix b(3, 3);
    b(0, 0) = c11; b(0, 1) = c12; b(0, 2) = c12;
    b(1, 0) = std::conj(c12); b(1, 1) = c22; b(1, 2) = c24;
    b(2, 0) = std::conj(c12); b(2, 1) = c24; b(2, 2) = c33;
    return b;
}

void CovariantParams::validate(double tol) const {
    if (std::abs(trace_sum() - 1.0) > 1e-10)
        throw std::invalid_argument(
            "CovariantParams: trace-preserving constraint violated (c00+c11+c22+c33 != 1)");
    if (c00 < -tol)
        throw std::invalid_argument("CovariantParams: positivity violated (c00 < 0)");
    if (!is_psd(b1_block(), tol))
        throw std::invalid_argument(
            "CovariantParams: positivity violated (B1 block not positive semidefinite)");
}

std::array<double, 7> CovariantParams::to_array() const {
    return {c00, c11, c22, c33, c24, c12.real(), c12.imag()};
}

CovariantParams CovariantParams::from_array(const std::array<double, 7>& a) {
    CovariantParams p;
    p.c00 = a[0]; p.c11 = a[1]; p.c22 = a[2]; p.c33 = a[3];
    p.c24 = a[4]; p.c12 = complexd{a[5], a[6]};
    return p;
}

ChoiOperator::ChoiOperator(ComplexMatrix r) : r_(std::move(r)) {
    if (r_.rows() != 8 || r_.cols() != 8)
        throw std::invalid_argument("ChoiOperator: matrix must be 8x8");
    if (!r_.is_hermitian()) throw std::invalid_argument("ChoiOperator: matrix not Hermitian");
}

double ChoiOperator::psd_defect() const {
    const double lo = hermitian_eigenvalues(r_).front();
    return lo < 0 ? -lo : 0.0;
}

double ChoiOperator::tp_residual() const {
    const ComplexMatrix red = partial_trace(r_, {2, 2, 2}, {2});
    return (red - ComplexMatrix::identity(2)).max_abs();
}

ComplexMatrix phase_operator(double theta) {
    ComplexMatrix p(2, 2);
    p(0, 0) = 1.0;
    p(1, 1) = std::polar(1.0, theta);
    return p;
}

ComplexMatrix family_generator(int k) {
    switch (k) {
        case 0: return ketbra(0, 0) + ketbra(7, 7);
        case 1: return ketbra(1, 1) + ketbra(6, 6);
        case 2: return ketbra(2, 2) + ketbra(5, 5);
        case 3: return ketbra(3, 3) + ketbra(4, 4);
        case 4: return ketbra(2, 4) + ketbra(4, 2) + ketbra(3, 5) + ketbra(5, 3);
        case 5: {
            const ComplexMatrix x = ketbra(1, 2) + ketbra(1, 4) + ketbra(3, 6) + ketbra(5, 6);
            return x + x.dagger();
        }
        case 6: {
            const ComplexMatrix x = ketbra(1, 2) + ketbra(1, 4) + ketbra(3, 6) + ketbra(5, 6);
            return (x - x.dagger()) * complexd{0.0, 1.0};
        }
        default: throw std::invalid_argument("family_generator: index must be in [0,7)");
    }
}

ComplexMatrix covariant_matrix(const CovariantParams& p) {
    const auto a = p.to_array();
    ComplexMatrix r(8, 8);
    for (int k = 0; k < 7; ++k)
        if (a[static_cast<std::size_t>(k)] != 0.0)
            r = r + family_generator(k) * complexd{a[static_cast<std::size_t>(k)]};
    return r;
}

ChoiOperator build_covariant_choi(const CovariantParams& p) {
    p.validate();
    return ChoiOperator(covariant_matrix(p));
}

ComplexMatrix variant1_conjugate(const ComplexMatrix& m) {
    return yy_conjugator() * m * yy_conjugator();
}

ChoiOperator to_variant1(const ChoiOperator& r) {
    return ChoiOperator(variant1_conjugate(r.matrix()));
}

ComplexMatrix apply_channel(const ChoiOperator& r, const ComplexMatrix& rho_in, Variant v) {
    if (rho_in.rows() != 2 || rho_in.cols() != 2)
        throw std::invalid_argument("apply_channel: input must be 2x2");
    if (!rho_in.is_hermitian()) throw std::invalid_argument("apply_channel: input not Hermitian");
    if (std::abs(rho_in.trace() - complexd{1.0}) > 1e-8)
        throw std::invalid_argument("apply_channel: input trace must be 1");
    if (!is_psd(rho_in, 1e-9)) throw std::invalid_argument("apply_channel: input not positive");

    const ComplexMatrix x = (v == Variant::v1) ? rho_in.transpose() : rho_in;
    const ComplexMatrix prod = kron(ComplexMatrix::identity(4), x) * r.matrix();
    return partial_trace(prod, {2, 2, 2}, {0, 1});
}

ComplexMatrix fidelity_kernel(const PureQubit& q, Variant v, int clone) {
    if (clone != 1 && clone != 2) throw std::invalid_argument("clone index must be 1 or 2");
    const ComplexMatrix a = q.density();
    const ComplexMatrix b = (v == Variant::v1) ? a.transpose() : a;
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    return (clone == 1) ? kron(kron(a, i2), b) : kron(kron(i2, a), b);
}

double single_copy_fidelity(const ChoiOperator& r, const PureQubit& q, Variant v, int clone) {
    return (fidelity_kernel(q, v, clone) * r.matrix()).trace().real();
}

CovarianceReport verify_covariance(const ChoiOperator& r, Variant v,
                                   const std::vector<double>& thetas) {
    CovarianceReport rep;
    for (double th : thetas) {
        ComplexMatrix u;
        if (v == Variant::v2) {
            const ComplexMatrix p = phase_operator(th);
            u = kron(kron(p, p), p);
        } else {
            const ComplexMatrix p = phase_operator(-th);
            u = kron(kron(p, p), p.conjugate());
        }
        rep.max_phase_residual = std::max(rep.max_phase_residual, commutator(r.matrix(), u).max_abs());
    }
    const ComplexMatrix xxx = kron(kron(pauli_x(), pauli_x()), pauli_x());
    rep.bitflip_residual = commutator(r.matrix(), xxx).max_abs();
    rep.bitflip_pair_residual = (xxx * r.matrix().conjugate() * xxx - r.matrix()).max_abs();
    return rep;
}

CovariantParams symmetry_project(const ComplexMatrix& h) {
    if (h.rows() != 8 || h.cols() != 8)
        throw std::invalid_argument("symmetry_project: matrix must be 8x8");
    if (!h.is_hermitian()) throw std::invalid_argument("symmetry_project: matrix not Hermitian");
    CovariantParams p;
    p.c00 = 0.5 * (h(0, 0) + h(7, 7)).real();
    p.c11 = 0.5 * (h(1, 1) + h(6, 6)).real();
    p.c22 = 0.5 * (h(2, 2) + h(5, 5)).real();
    p.c33 = 0.5 * (h(3, 3) + h(4, 4)).real();
    p.c24 = 0.25 * (h(2, 4) + h(4, 2) + h(3, 5) + h(5, 3)).real();
    p.c12 = 0.25 * (h(1, 2) + h(1, 4) + h(3, 6) + h(5, 6));
    return p;
}

ChoiOperator universal_cloner_choi() {
    // Pi_sym = (I + SWAP)/2 on the two clone slots
    ComplexMatrix pi(4, 4);
    pi(0, 0) = 1.0; pi(3, 3) = 1.0;
    pi(1, 1) = 0.5; pi(1, 2) = 0.5; pi(2, 1) = 0.5; pi(2, 2) = 0.5;

    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    ComplexMatrix r(8, 8);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            ComplexMatrix e(2, 2);
            e(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1.0;
            const ComplexMatrix m = (pi * kron(e, i2) * pi) * complexd{2.0 / 3.0};
            r = r + kron(m, e);
        }
    return ChoiOperator(r);
}

CovariantParams universal_cloner_params() {
    CovariantParams p;
    p.c00 = 0.0;
    p.c11 = 2.0 / 3.0;
    p.c22 = 1.0 / 6.0;
    p.c33 = 1.0 / 6.0;
    p.c24 = 1.0 / 6.0;
    p.c12 = -1.0 / 3.0;
    return p;
}

ComplexMatrix conjugation_superop(const ComplexMatrix& u) {
    return kron(u, u.conjugate());
}

ComplexMatrix transpose_superop() {
    ComplexMatrix s(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) s(2 * i + j, 2 * j + i) = 1.0;
    return s;
}

ComplexMatrix random_density(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    ComplexMatrix g(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) g(i, j) = complexd{nd(gen), nd(gen)};
    ComplexMatrix rho = g * g.dagger();
    return rho * (1.0 / rho.trace());
}

TranspositionIdentityReport identity_check_transposition(double theta, int trials) {
    if (trials < 0) throw std::invalid_argument("identity_check_transposition: negative trials");
    const ComplexMatrix p = phase_operator(theta);
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix t = transpose_superop();

    TranspositionIdentityReport rep;
    const ComplexMatrix lhs = conjugation_superop(p) * t * conjugation_superop(x);
    const ComplexMatrix rhs = t * conjugation_superop(x * p);
    rep.superop_residual = (lhs - rhs).max_abs();
    rep.commutator_residual =
        commutator(conjugation_superop(p), t * conjugation_superop(x)).max_abs();

    for (int k = 0; k < trials; ++k) {
        const ComplexMatrix rho = random_density(0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(k));
        const ComplexMatrix l = p * (x * rho * x).transpose() * p.dagger();
        const ComplexMatrix xp = x * p;
        const ComplexMatrix r = (xp * rho * xp.dagger()).transpose();
        rep.state_residual = std::max(rep.state_residual, (l - r).max_abs());
    }
    return rep;
}

double TranspositionIdentityReport::max_residual() const {
    return std::max(superop_residual, std::max(commutator_residual, state_residual));
}

double phase_flip_adjoint_residual(double theta) {
    const ComplexMatrix a = phase_operator(theta) * pauli_x();
    const ComplexMatrix b = pauli_x() * phase_operator(-theta);
    return (conjugation_superop(a) - conjugation_superop(b)).max_abs();
}

double lemma_adjoint_residual(const ComplexMatrix& c_diag) {
    if (c_diag.rows() != 2 || c_diag.cols() != 2)
        throw std::invalid_argument("lemma_adjoint_residual: matrix must be 2x2");
    if (std::abs(c_diag(0, 1)) != 0.0 || std::abs(c_diag(1, 0)) != 0.0)
        throw std::invalid_argument("lemma_adjoint_residual: matrix must be diagonal");
    if (std::abs(std::abs(c_diag(0, 0)) - 1.0) > 1e-12 ||
        std::abs(std::abs(c_diag(1, 1)) - 1.0) > 1e-12)
        throw std::invalid_argument("lemma_adjoint_residual: matrix must be unitary");
    const ComplexMatrix t = transpose_superop();
    const ComplexMatrix lhs = t * conjugation_superop(c_diag * pauli_x());
    const ComplexMatrix rhs = conjugation_superop(pauli_x() * c_diag) * t;
    return (lhs - rhs).max_abs();
}

}  // namespace covclone
