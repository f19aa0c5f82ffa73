#ifndef COVCLONE_CHANNELS_HPP
#define COVCLONE_CHANNELS_HPP

#include <array>
#include <vector>

#include "covclone/matrix.hpp"

namespace covclone {

/// Covariance variant: v1 pairs the phase rotation with a bit flip (real input
/// pair), v2 additionally composes with transposition (general input pair).
/// The Choi relation applies transposition to the input for v1 and nothing
/// for v2.
enum class Variant : int { v1 = 1, v2 = 2 };

Variant variant_from_int(int n);  // throws unless n is 1 or 2

/// Pure qubit cos(xi/2)|0> + e^{i phi} sin(xi/2)|1>, xi in [0,pi], phi wrapped.
struct PureQubit {
    PureQubit(double xi, double phi);
    double xi;
    double phi;

    std::array<complexd, 2> ket() const;
    ComplexMatrix density() const;
};

/// The 7 real degrees of freedom of the covariant operator family.
struct CovariantParams {
    double c00 = 0, c11 = 0, c22 = 0, c33 = 0;
    double c24 = 0;
    complexd c12;

    double trace_sum() const { return c00 + c11 + c22 + c33; }
    /// Block on basis states {1,2,4}: [[c11,c12,c12],[c12*,c22,c24],[c12*,c24,c33]].
    ComplexMatrix b1_block() const;
    /// Throws naming the violated constraint (trace-preserving sum, c00 >= 0,
    /// B1 positive semidefinite).
    void validate(double tol = 1e-9) const;

    std::array<double, 7> to_array() const;  // order c00,c11,c22,c33,c24,Re c12,Im c12
    static CovariantParams from_array(const std::array<double, 7>& a);
};

/// 8x8 Choi operator; basis |m>, m = 4a+2b+c over (clone1, clone2, input) bits.
class ChoiOperator {
public:
    explicit ChoiOperator(ComplexMatrix r);  // requires 8x8 Hermitian
    const ComplexMatrix& matrix() const { return r_; }

    double psd_defect() const;   // max(0, -min eigenvalue)
    double tp_residual() const;  // max|Tr_out R - I2|

private:
    ComplexMatrix r_;
};

/// diag(1, e^{i theta}); the Bloch-sphere form of the little-group phase on
/// the logical basis (takes the already-doubled helicity angle).
ComplexMatrix phase_operator(double theta);

/// Span of the covariant family: k in 0..6 selects the direction multiplying
/// c00, c11, c22, c33, c24, Re c12, Im c12 respectively.
ComplexMatrix family_generator(int k);

/// Linear combination of generators; no constraint checks.
ComplexMatrix covariant_matrix(const CovariantParams& p);

/// Validates params, then assembles the canonical family operator. The result
/// is the physical variant-2 Choi operator; use to_variant1 for variant 1.
ChoiOperator build_covariant_choi(const CovariantParams& p);

/// Conjugation by sigmaY x sigmaY x I (basis permutation m -> m XOR 6 with signs).
ComplexMatrix variant1_conjugate(const ComplexMatrix& m);
ChoiOperator to_variant1(const ChoiOperator& r);

/// M(rho) = Tr_in[(I4 x Gamma^N[rho]) R] for the physical operator of variant v.
ComplexMatrix apply_channel(const ChoiOperator& r, const ComplexMatrix& rho_in, Variant v);

/// Kernel K with F = Re Tr[K R]; clone selects which output slot carries the
/// projector.
ComplexMatrix fidelity_kernel(const PureQubit& q, Variant v, int clone);
double single_copy_fidelity(const ChoiOperator& r, const PureQubit& q, Variant v, int clone);

struct CovarianceReport {
    double max_phase_residual = 0;    // max over thetas of max|[R, U_theta]|
    double bitflip_residual = 0;      // max|[R, X x X x X]|; exact for real c12
    double bitflip_pair_residual = 0; // max|XXX conj(R) XXX - R|; the m <-> 7-m
                                      // pairing, exact for every family member
};
CovarianceReport verify_covariance(const ChoiOperator& r, Variant v,
                                   const std::vector<double>& thetas);

/// Frobenius-orthogonal projection of an 8x8 Hermitian matrix onto the family
/// span. Output params need not satisfy the trace/positivity constraints.
CovariantParams symmetry_project(const ComplexMatrix& h);

/// Standard Choi operator of rho -> (2/3) Pi_sym (rho x I) Pi_sym; physical
/// for variant 1, single-copy fidelity 5/6 on every pure state.
ChoiOperator universal_cloner_choi();
/// Its canonical family coordinates: (0, 2/3, 1/6, 1/6, 1/6, -1/3).
CovariantParams universal_cloner_params();

// --- superoperator identity checks (phase/flip/transposition algebra) ---

/// Row-major vectorization superoperator of rho -> U rho U^dag.
ComplexMatrix conjugation_superop(const ComplexMatrix& u);
/// Superoperator of rho -> rho^T in the logical basis.
ComplexMatrix transpose_superop();

struct TranspositionIdentityReport {
    double superop_residual = 0;     // Ad P . T . Ad X  vs  T . Ad(X P)
    double commutator_residual = 0;  // [Ad P, T . Ad X]
    double state_residual = 0;       // worst difference over random states
    double max_residual() const;
};

/// Checks the transposition covariance identity at angle theta, both as a 4x4
/// superoperator equality and on `trials` pseudo-random density matrices
/// (fixed seed; deterministic).
TranspositionIdentityReport identity_check_transposition(double theta, int trials);

/// Adjoint-representation residual of P_theta sigmaX = sigmaX P_{-theta}.
double phase_flip_adjoint_residual(double theta);

/// Residual of T . Ad(C sigmaX) = Ad(sigmaX C) . T for a diagonal unitary C.
double lemma_adjoint_residual(const ComplexMatrix& c_diag);

/// Deterministic pseudo-random single-qubit density matrix (test/check helper).
ComplexMatrix random_density(std::uint64_t seed);

}  // namespace covclone

#endif
