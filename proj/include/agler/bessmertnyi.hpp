#pragma once

// Long-resolvent (Bessmertnyi) pencils f(z) = A11(z) - A12(z) A22(z)^{-1} A21(z),
// A(z) = A0 + z_1 A1 + ... + z_d Ad.

#include <string>
#include <vector>

#include "agler/core.hpp"
#include "agler/herglotz.hpp"
#include "agler/sampling.hpp"

namespace agler::bessmertnyi {

enum class PencilClass { nonhomogeneous, homogeneous, real_homogeneous };

std::string to_string(PencilClass tag);
PencilClass pencil_class_from_string(const std::string& name);

/// Coefficients A0..Ad of size (n+m) x (n+m); the first n rows/columns form
/// the output block. Class invariants are enforced on construction
/// (violations raise InvalidPencil).
class LongResolventPencil {
public:
    LongResolventPencil() = default;
    LongResolventPencil(int n, std::vector<ComplexMatrix> coefficients, PencilClass tag, const Tolerances& tol = {});

    int d() const { return static_cast<int>(coefficients_.size()) - 1; }
    int n() const { return n_; }
    int m() const { return size() - n_; }
    int size() const { return coefficients_.empty() ? 0 : static_cast<int>(coefficients_.front().rows()); }
    PencilClass tag() const { return tag_; }
    const std::vector<ComplexMatrix>& coefficients() const { return coefficients_; }
    const ComplexMatrix& coefficient(int k) const { return coefficients_.at(static_cast<std::size_t>(k)); }

    /// A(z) = A0 + sum_k z_k A_k.
    ComplexMatrix matrix(const Point& z) const;

    bool operator==(const LongResolventPencil& other) const;

private:
    int n_ = 0;
    std::vector<ComplexMatrix> coefficients_;
    PencilClass tag_ = PencilClass::nonhomogeneous;
};

/// Schur complement A11(z) - A12(z) A22(z)^{-1} A21(z) (A11(z) when m = 0).
ComplexMatrix eval_pencil(const LongResolventPencil& pencil, const Point& z);

/// The pencil as a function on the poly-halfplane.
FunctionHandle pencil_handle(const LongResolventPencil& pencil);

/// psi(z) = [I_n; -A22(z)^{-1} A21(z)].
ComplexMatrix pencil_psi(const LongResolventPencil& pencil, const Point& z);

struct PencilDecomposition {
    /// Y_k with Y_k^* Y_k = A_k (rank factor, or the PSD square root when literal).
    std::vector<ComplexMatrix> factors;
    /// phi_k = Y_k psi, satisfying f(w)^* + f(z) = sum_k (conj(w_k) + z_k) phi_k(w)^* phi_k(z).
    std::vector<FunctionHandle> phis;
};

/// With literal_sqrt the factors are A_k^{1/2} (n+m rows each) instead of the
/// rank-revealing factors.
PencilDecomposition pencil_decomposition(const LongResolventPencil& pencil, bool literal_sqrt = false,
                                         const Tolerances& tol = {});

/// theta_k(zeta) = (1 - zeta_k)^{-1} phi_k(C zeta) (I - F(zeta)), F = double_cayley(f);
/// turns a poly-halfplane decomposition of f into an Agler decomposition of F.
std::vector<FunctionHandle> phi_to_theta(const std::vector<FunctionHandle>& phis, const FunctionHandle& f);

/// Inverse transform: phi_k(z) = (z_k + 1)^{-1} theta_k(C^{-1} z)(f(z) + I).
std::vector<FunctionHandle> theta_to_phi(const std::vector<FunctionHandle>& thetas, const FunctionHandle& f);

/// Smallest admissible angular distance of the spectrum of W0 from 1 after the split.
inline constexpr double kEigenvalueOneGap = 1e-6;

/// Long-resolvent pencil of f(z) = F(C^{-1} z) built from a Herglotz
/// realization through the partial Cayley transform of W. The result is
/// tagged nonhomogeneous and verified against the realization.
LongResolventPencil herglotz_to_pencil(const herglotz::HerglotzRealization& h, const Tolerances& tol = {},
                                       int checks = 20, std::uint64_t seed = 0xb355);

struct NormalizedPencil {
    ComplexMatrix delta;         // r x n
    LongResolventPencil pencil;  // f_+(e) = I_r
};

/// For A0 = 0: f = delta^* f_+ delta with f_+(e) = I_r.
NormalizedPencil normalize_homogeneous(const LongResolventPencil& pencil, const Tolerances& tol = {},
                                       int checks = 20, std::uint64_t seed = 0x70e5);

struct StructureCheck {
    double beta_norm = 0.0;        // (i)   ||beta||
    double w_asymmetry = 0.0;      // (ii)  ||W - W^*||
    double range_defect = 0.0;     // (iii) ||(I - Q_H Q_H^*) V||
    bool beta_zero = false;
    bool w_hermitian = false;
    bool range_in_eigenspace = false;

    bool verdict() const { return beta_zero && w_hermitian && range_in_eigenspace; }
    std::vector<SampleReport> reports(double threshold) const;
};

StructureCheck homogeneous_structure_check(const herglotz::HerglotzRealization& h, const Tolerances& tol = {});

/// phi~_k = Col[(phi_k + phi_k#)/2, (phi_k - phi_k#)/(2i)], phi#(z) = conj(phi(conj z)).
/// The realness of f is checked first at conjugation pairs (NotReal).
std::vector<FunctionHandle> realify_decomposition(const std::vector<FunctionHandle>& phis, const FunctionHandle& f,
                                                  const Tolerances& tol = {}, std::uint64_t seed = 0x4ea1,
                                                  int checks = 20);

}  // namespace agler::bessmertnyi
