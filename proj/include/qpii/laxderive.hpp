#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpii/ncalg.hpp"

namespace qpii::laxderive {

using ncalg::Coefficient;
using ncalg::NCPolynomial;

/// 2×2 matrix over NCPolynomial; products keep entry order.
class Matrix2 {
public:
    explicit Matrix2(ncalg::Alphabet alphabet = ncalg::Alphabet::lax());

    static Matrix2 identity(ncalg::Alphabet alphabet = ncalg::Alphabet::lax());
    static Matrix2 sigma1(ncalg::Alphabet alphabet = ncalg::Alphabet::lax());
    static Matrix2 sigma2(ncalg::Alphabet alphabet = ncalg::Alphabet::lax());
    static Matrix2 sigma3(ncalg::Alphabet alphabet = ncalg::Alphabet::lax());

    /// 1-based (row, col).
    NCPolynomial& operator()(int row, int col) { return e_[index(row, col)]; }
    const NCPolynomial& operator()(int row, int col) const { return e_[index(row, col)]; }

    Matrix2& operator+=(const Matrix2& o);
    Matrix2& operator-=(const Matrix2& o);
    friend Matrix2 operator+(Matrix2 a, const Matrix2& b) { return a += b; }
    friend Matrix2 operator-(Matrix2 a, const Matrix2& b) { return a -= b; }
    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b);
    /// Scalar-polynomial times matrix (left multiplication of each entry).
    friend Matrix2 operator*(const NCPolynomial& s, const Matrix2& m);
    friend Matrix2 operator*(const Coefficient& s, Matrix2 m);
    friend bool operator==(const Matrix2&, const Matrix2&) = default;

    bool is_zero() const;
    const ncalg::Alphabet& alphabet() const { return alphabet_; }
    nlohmann::ordered_json to_json() const;

private:
    static std::size_t index(int row, int col);

    ncalg::Alphabet alphabet_;
    std::array<NCPolynomial, 4> e_;
};

struct LaxOptions {
    /// When false, ħ is set to zero in the Lax pair and in every relation.
    bool quantum = true;
};

struct LaxPair {
    Matrix2 A;
    Matrix2 B;
};

/// A = (8iλ² + i f2² − 2i z)σ3 + f2'σ2 + (¼cλ⁻¹ − 4λ f2)σ1 + iħσ2,
/// B = −2iλσ3 + f2σ1 + f2 I.
LaxPair build_lax(const LaxOptions& options = {});

/// Entry-wise d/dz with the Lax derivation table (z, f2, f2').
Matrix2 derivative_z(const Matrix2& m);
/// Entry-wise formal Laurent derivative in λ.
Matrix2 derivative_lambda(const Matrix2& m);
/// BA − AB in the free algebra.
Matrix2 matrix_commutator(const Matrix2& b, const Matrix2& a);

/// R = A_z − B_λ − (BA − AB), unreduced.  Entries containing χ/φ/Δ
/// generators raise DomainError.
Matrix2 zero_curvature_residual(const Matrix2& A, const Matrix2& B);

/// One named step of a derivation with canonical text before/after.
struct DerivationStep {
    std::string name;
    std::string anchor;
    nlohmann::ordered_json before;
    nlohmann::ordered_json after;
    std::string note;
};

struct DerivationLog {
    std::vector<DerivationStep> steps;

    void add(DerivationStep step) { steps.push_back(std::move(step)); }
    bool has_anchor(const std::string& anchor) const;
    nlohmann::ordered_json to_json() const;
};

/// Outcome of substituting one value for [f2', f2] into the off-diagonal
/// residual entries.
struct CommutatorConvention {
    std::string name;
    Coefficient value;
    /// Entry (1,2) and (2,1) divided by their f2'' coefficient (±i).
    NCPolynomial ode_from_12;
    NCPolynomial ode_from_21;
    /// ode_from_12 − ode_from_21; zero iff the convention is consistent.
    NCPolynomial remainder;
    bool consistent() const { return remainder.is_zero(); }
};

/// Everything the zero-curvature pipeline computes, consistent or not.
struct QpiiAnalysis {
    Matrix2 residual;
    /// Diagonal residual normalised to be monic in z·f2.
    NCPolynomial constraint;
    /// `commutator - k*hbar*f2`, `commutator - k*hbar`, or `commutator`.
    std::string constraint_shape;
    ncalg::GaussianRational constraint_k;
    /// Which printed form of the quantum relation the constraint matches:
    /// "z f2 - f2 z = 1/2 i hbar f2", "[f2, z] = 1/2 i hbar f2" or "none".
    std::string constraint_matches;
    std::vector<CommutatorConvention> conventions;
    std::optional<std::size_t> accepted;
    DerivationLog log;

    nlohmann::ordered_json to_json() const;
};

struct DerivedSystem {
    NCPolynomial ode;
    NCPolynomial constraint;
    std::string convention;
    DerivationLog report;

    nlohmann::ordered_json to_json() const;
};

QpiiAnalysis analyze_qpii(const LaxOptions& options = {});

/// Throws NonVanishingRemainder (details carry the leftover terms and the
/// full log) when no commutator convention makes both off-diagonal entries
/// agree.
DerivedSystem derive_qpii(const LaxOptions& options = {});

/// Canonical form of [f1 − f0, f2] under the symmetric relations.
NCPolynomial verify_symmetric_relations();
/// Canonical form of [f0, f2] under the symmetric relations.
NCPolynomial symmetric_commutator_f0_f2();

struct RiccatiDerivation {
    NCPolynomial result;
    /// Form printed without λ in the linear term, kept for comparison.
    NCPolynomial reference;
    DerivationLog report;

    nlohmann::ordered_json to_json() const;
};

/// Δ' for Δ = χφ⁻¹ expressed in Δ and f2 only.
RiccatiDerivation riccati_derive_report();
NCPolynomial riccati_derive();

/// f2'' − 2 f2³ + 2[z, f2]₊ − c in the Lax alphabet.
NCPolynomial qpii_target_ode();
/// z f2 − f2 z − ½iħ f2 in the Lax alphabet.
NCPolynomial qpii_target_constraint();
/// −4iλΔ + f2 + [f2, Δ] − Δ f2 Δ in the Riccati alphabet.
NCPolynomial riccati_target();

}  // namespace qpii::laxderive
