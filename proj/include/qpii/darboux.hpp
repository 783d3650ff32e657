#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qpii/linalg.hpp"

namespace qpii::darboux {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// d×d complex samples on the uniform grid z_k = z0 + k·h.
struct GridFunction {
    double z0 = 0.0;
    double h = 0.0;
    std::vector<Matrix> samples;

    std::size_t count() const { return samples.size(); }
    Eigen::Index dim() const { return samples.empty() ? 0 : samples.front().rows(); }
    double z(std::size_t k) const { return z0 + static_cast<double>(k) * h; }

    /// count ≥ 2, h > 0, square samples of one dimension, finite entries.
    void validate(const char* where) const;
    bool same_grid(const GridFunction& o) const;

    static GridFunction constant(double z0, double h, std::size_t count, const Matrix& value);
};

struct Eigenpair {
    Complex lambda;
    GridFunction chi;
    GridFunction phi;
};

struct ExecOptions {
    unsigned threads = 1;
    double pivot_tolerance = kPivotTolerance;
};

/// u ≡ 0.
GridFunction vacuum_seed(Eigen::Index d, double z0, double h, std::size_t count);

/// Classical RK4 for χ' = (−2iλ + u)χ + uφ, φ' = uχ + (2iλ + u)φ.  u at
/// half steps comes from cubic interpolation of the samples.  Throws
/// DivergenceError at the first non-finite state.
Eigenpair integrate_linear_system(const GridFunction& u, Complex lambda, const Matrix& chi0, const Matrix& phi0);

/// θ = Φχ⁻¹; SingularEigenfunction if χ fails the pivot cutoff.
Matrix right_quotient(const Matrix& phi, const Matrix& chi, std::size_t index, double tol, const char* where);

/// u[1] = −4λ·Φχ⁻¹ + Φχ⁻¹·u·Φχ⁻¹ pointwise.
GridFunction darboux_once(const GridFunction& u, const Eigenpair& pair, const ExecOptions& exec = {});

/// χ[1] = λφ − λ₁Φ₁χ₁⁻¹χ and Φ[1] = λχ − λ₁χ₁Φ₁⁻¹φ pointwise.
std::pair<GridFunction, GridFunction> dress_eigenfunctions(const GridFunction& chi, const GridFunction& phi,
                                                           Complex lambda, const Eigenpair& pair1,
                                                           const ExecOptions& exec = {});

/// Iterated transformations.  Level k (1-based) consumes eigenpair k dressed
/// by levels 1..k−1 and produces u[k] and the dressed pairs j > k.
class DressingChain {
public:
    DressingChain(GridFunction seed, std::vector<Eigenpair> eigenpairs, ExecOptions exec = {});

    std::size_t depth() const { return pairs_.size(); }
    std::size_t levels_built() const { return u_.size() - 1; }
    const GridFunction& seed() const { return u_.front(); }
    const std::vector<Eigenpair>& eigenpairs() const { return pairs_; }
    const ExecOptions& exec() const { return exec_; }

    /// Builds level k; k must equal levels_built() + 1 (LevelOrderViolation
    /// otherwise).
    void build_level(std::size_t k);
    /// Builds levels up to n in order.
    void build_through(std::size_t n);

    /// u[k], k ≤ levels_built().
    const GridFunction& solution(std::size_t k) const;
    /// Eigenpair j (1-based) dressed by levels 1..k; requires k < j and
    /// k ≤ levels_built().
    const Eigenpair& dressed(std::size_t j, std::size_t k) const;
    /// Θ_k = Φ_k[k−1]·χ_k[k−1]⁻¹ at every grid point.
    const std::vector<Matrix>& theta(std::size_t k) const;

    nlohmann::ordered_json audit() const;

private:
    std::vector<Eigenpair> pairs_;
    ExecOptions exec_;
    std::vector<GridFunction> u_;
    // dressed_[k][j-1] is pair j at level k (only for j > k).
    std::vector<std::vector<std::optional<Eigenpair>>> dressed_;
    std::vector<std::vector<Matrix>> theta_;
};

/// u[N] = L₁·u·R₁ − 4 Σ_k λ_k L_{k+1}·Θ_k·R_{k+1} with L_k = Θ_N⋯Θ_k and
/// R_k = Θ_k⋯Θ_N; the closed form of N iterated one-fold steps.
Matrix assemble_nfold(const std::vector<const Matrix*>& thetas, const Matrix& u, const std::vector<Complex>& lambdas);

/// Θ-product form from the chain's dressed eigenfunctions.  For N = 1 the
/// result equals darboux_once bit for bit.
GridFunction darboux_nfold(DressingChain& chain, std::size_t N);

struct QuasidetForm {
    GridFunction u;
    /// omega_chi[k-1], omega_phi[k-1] for levels k = 1..N.
    std::vector<GridFunction> omega_chi;
    std::vector<GridFunction> omega_phi;
};

/// Ω_k^χ[k] is the bottom-right quasideterminant of the k×k block matrix
/// whose column order is pairs k−1, …, 1, k and whose row m holds
/// λ_j^m·χ_j for even m and λ_j^m·Φ_j for odd m; Ω_k^φ swaps χ and Φ.
/// Θ_k = Ω_k^φ·(Ω_k^χ)⁻¹ and u[N] is assembled as in darboux_nfold.
QuasidetForm quasidet_solution_form(const GridFunction& seed, const std::vector<Eigenpair>& pairs, std::size_t N,
                                    const ExecOptions& exec = {});

/// ‖Δ' − (−4iλΔ + u + [u, Δ] − ΔuΔ)‖_F per grid point with Δ = χφ⁻¹ and
/// Δ' from finite differences of order 2 or 4 (one-sided at the ends).
std::vector<double> riccati_residual_numeric(const Eigenpair& pair, const GridFunction& u, int fd_order = 4,
                                             const ExecOptions& exec = {});

/// ‖u'' − 2u³ + 4zu − c·I‖_F at interior points (second-order u'').
std::vector<double> qpii_residual_numeric(const GridFunction& u, Complex c);

/// First derivative by finite differences (order 2 or 4).
std::vector<Matrix> finite_difference(const GridFunction& f, int order);

// ---------------------------------------------------------------- config

struct PairInit {
    Matrix chi;
    Matrix phi;
};

struct DarbouxConfig {
    Eigen::Index d = 1;
    double z0 = 0.0;
    double h = 1e-3;
    std::size_t count = 1001;
    std::string seed = "vacuum";  // "vacuum" or "file"
    std::filesystem::path seed_file;
    Complex c = 0.0;
    std::vector<Complex> lambdas;
    std::vector<PairInit> initial;  // defaults to χ = φ = I
    std::size_t folds = 0;          // 0 means all eigenpairs
    int fd_order = 4;
    double pivot_tolerance = kPivotTolerance;
    double consistency_tolerance = 1e-8;

    /// Relative seed paths resolve against `base_dir`.  Throws
    /// ConfigurationError / ParseError.
    static DarbouxConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
    nlohmann::ordered_json to_json() const;
    void validate() const;
};

GridFunction load_seed(const DarbouxConfig& config);

/// Integrates the eigenpairs, runs both N-fold paths and the residual
/// diagnostics, and returns the report.  Pure function of the config.
nlohmann::ordered_json run_darboux(const DarbouxConfig& config, unsigned threads = 1);

// ---------------------------------------------------------------- json helpers

nlohmann::ordered_json complex_json(Complex v);
nlohmann::ordered_json matrix_json(const Matrix& m);
Complex parse_complex(const nlohmann::json& j);
Matrix parse_matrix(const nlohmann::json& j, Eigen::Index d);
double frobenius(const Matrix& m);

}  // namespace qpii::darboux
