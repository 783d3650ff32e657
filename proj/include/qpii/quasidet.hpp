#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qpii/errors.hpp"
#include "qpii/linalg.hpp"
#include "qpii/ncalg/coefficient.hpp"

namespace qpii::quasidet {

using ncalg::GaussianRational;

/// Ring with partial inversion.  `invert` returns nullopt for elements it
/// cannot invert; `pivot_score` ranks pivot candidates (larger is better, 0
/// means certainly not invertible); `approx_equal` uses the carrier tolerance
/// (exact carriers compare exactly).
template <class C>
concept DivisionCarrier = requires(const C& c, const typename C::value_type& a) {
    typename C::value_type;
    { c.zero() } -> std::same_as<typename C::value_type>;
    { c.one() } -> std::same_as<typename C::value_type>;
    { c.add(a, a) } -> std::same_as<typename C::value_type>;
    { c.sub(a, a) } -> std::same_as<typename C::value_type>;
    { c.mul(a, a) } -> std::same_as<typename C::value_type>;
    { c.invert(a) } -> std::same_as<std::optional<typename C::value_type>>;
    { c.is_zero(a) } -> std::same_as<bool>;
    { c.approx_equal(a, a) } -> std::same_as<bool>;
    { c.pivot_score(a) } -> std::same_as<double>;
    { c.to_json(a) } -> std::same_as<nlohmann::ordered_json>;
};

// ---------------------------------------------------------------- carriers

/// Exact commutative field of Gaussian rationals.
struct ExactScalarCarrier {
    using value_type = GaussianRational;

    value_type zero() const { return GaussianRational(0); }
    value_type one() const { return GaussianRational(1); }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    std::optional<value_type> invert(const value_type& a) const {
        if (a.is_zero()) return std::nullopt;
        return GaussianRational(1) / a;
    }
    bool is_zero(const value_type& a) const { return a.is_zero(); }
    bool approx_equal(const value_type& a, const value_type& b) const { return a == b; }
    double pivot_score(const value_type& a) const { return a.is_zero() ? 0.0 : 1.0; }
    nlohmann::ordered_json to_json(const value_type& a) const { return a.to_string(); }
};

/// d×d matrix of Gaussian rationals, row-major.
struct ExactMatrix {
    std::size_t d = 0;
    std::vector<GaussianRational> a;

    ExactMatrix() = default;
    explicit ExactMatrix(std::size_t dim) : d(dim), a(dim * dim, GaussianRational(0)) {}
    static ExactMatrix identity(std::size_t dim);

    GaussianRational& operator()(std::size_t r, std::size_t c) { return a[r * d + c]; }
    const GaussianRational& operator()(std::size_t r, std::size_t c) const { return a[r * d + c]; }
    friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;
};

ExactMatrix operator+(const ExactMatrix& x, const ExactMatrix& y);
ExactMatrix operator-(const ExactMatrix& x, const ExactMatrix& y);
ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y);
/// Exact Gauss-Jordan; nullopt if singular.
std::optional<ExactMatrix> exact_inverse(const ExactMatrix& m);
Eigen::MatrixXcd to_complex(const ExactMatrix& m);

/// Noncommutative exact carrier of d×d Gaussian-rational matrices.
struct ExactMatrixCarrier {
    using value_type = ExactMatrix;
    std::size_t d = 1;

    value_type zero() const { return ExactMatrix(d); }
    value_type one() const { return ExactMatrix::identity(d); }
    value_type add(const value_type& x, const value_type& y) const { return x + y; }
    value_type sub(const value_type& x, const value_type& y) const { return x - y; }
    value_type mul(const value_type& x, const value_type& y) const { return x * y; }
    std::optional<value_type> invert(const value_type& x) const { return exact_inverse(x); }
    bool is_zero(const value_type& x) const;
    bool approx_equal(const value_type& x, const value_type& y) const { return x == y; }
    double pivot_score(const value_type& x) const { return is_zero(x) ? 0.0 : 1.0; }
    nlohmann::ordered_json to_json(const value_type& x) const;
};

/// Noncommutative numeric carrier of d×d complex matrices.
struct ComplexMatrixCarrier {
    using value_type = Eigen::MatrixXcd;
    std::size_t d = 1;
    double tolerance = kPivotTolerance;

    value_type zero() const { return Eigen::MatrixXcd::Zero(dim(), dim()); }
    value_type one() const { return Eigen::MatrixXcd::Identity(dim(), dim()); }
    value_type add(const value_type& x, const value_type& y) const { return x + y; }
    value_type sub(const value_type& x, const value_type& y) const { return x - y; }
    value_type mul(const value_type& x, const value_type& y) const { return x * y; }
    std::optional<value_type> invert(const value_type& x) const { return invert_pivoted(x, tolerance); }
    bool is_zero(const value_type& x) const { return max_abs(x) == 0.0; }
    /// Max-norm difference within tolerance·(1 + max-norm of the operands).
    bool approx_equal(const value_type& x, const value_type& y) const;
    double pivot_score(const value_type& x) const { return max_abs(x); }
    nlohmann::ordered_json to_json(const value_type& x) const;

private:
    Eigen::Index dim() const { return static_cast<Eigen::Index>(d); }
};

// ---------------------------------------------------------------- matrices

/// Square n×n matrix over a carrier; all entries share one carrier instance.
template <DivisionCarrier C>
class BlockMatrix {
public:
    using value_type = typename C::value_type;

    BlockMatrix(C carrier, std::size_t n) : carrier_(std::move(carrier)), n_(n) {
        if (n == 0) throw ConfigurationError("quasidet.BlockMatrix", "matrix must be at least 1x1");
        entries_.assign(n * n, carrier_.zero());
    }
    BlockMatrix(C carrier, std::vector<std::vector<value_type>> rows) : BlockMatrix(std::move(carrier), rows.size()) {
        for (std::size_t r = 0; r < n_; ++r) {
            if (rows[r].size() != n_) throw ConfigurationError("quasidet.BlockMatrix", "matrix must be square");
            for (std::size_t c = 0; c < n_; ++c) (*this)(r, c) = std::move(rows[r][c]);
        }
    }

    std::size_t size() const { return n_; }
    const C& carrier() const { return carrier_; }
    /// 0-based.
    value_type& operator()(std::size_t r, std::size_t c) { return entries_[r * n_ + c]; }
    const value_type& operator()(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }

    /// Matrix with row `r` and column `c` removed.
    BlockMatrix minor(std::size_t r, std::size_t c) const {
        BlockMatrix m(carrier_, n_ - 1);
        for (std::size_t i = 0, mi = 0; i < n_; ++i) {
            if (i == r) continue;
            for (std::size_t j = 0, mj = 0; j < n_; ++j) {
                if (j == c) continue;
                m(mi, mj++) = (*this)(i, j);
            }
            ++mi;
        }
        return m;
    }

    /// Rows [r0, r0+nr) and columns [c0, c0+nc); may be rectangular, so it is
    /// stored as nested vectors.
    std::vector<std::vector<value_type>> block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
        std::vector<std::vector<value_type>> b(nr, std::vector<value_type>(nc));
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b[i][j] = (*this)(r0 + i, c0 + j);
        return b;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < n_; ++r) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (std::size_t c = 0; c < n_; ++c) row.push_back(carrier_.to_json((*this)(r, c)));
            rows.push_back(std::move(row));
        }
        return rows;
    }

private:
    C carrier_;
    std::size_t n_;
    std::vector<value_type> entries_;
};

// ---------------------------------------------------------------- elimination

/// Inverse by Gauss-Jordan elimination with left row operations only, so it
/// is valid over noncommutative carriers.  Pivot candidates in the column are
/// tried in decreasing pivot_score order.  Returns nullopt if some column has
/// no invertible candidate.
template <DivisionCarrier C>
std::optional<BlockMatrix<C>> inverse_by_elimination(const BlockMatrix<C>& m) {
    const C& k = m.carrier();
    const std::size_t n = m.size();
    BlockMatrix<C> a = m;
    BlockMatrix<C> inv(k, n);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = k.one();

    for (std::size_t col = 0; col < n; ++col) {
        std::vector<std::size_t> candidates(n - col);
        std::iota(candidates.begin(), candidates.end(), col);
        std::vector<double> score(n);
        for (std::size_t r : candidates) score[r] = k.pivot_score(a(r, col));
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](std::size_t x, std::size_t y) { return score[x] > score[y]; });
        std::optional<typename C::value_type> pinv;
        std::size_t prow = n;
        for (std::size_t r : candidates) {
            if (score[r] == 0.0) break;
            pinv = k.invert(a(r, col));
            if (pinv) {
                prow = r;
                break;
            }
        }
        if (!pinv) return std::nullopt;
        if (prow != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(prow, c), a(col, c));
                std::swap(inv(prow, c), inv(col, c));
            }
        }
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) = k.mul(*pinv, a(col, c));
            inv(col, c) = k.mul(*pinv, inv(col, c));
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || k.is_zero(a(r, col))) continue;
            const auto f = a(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) = k.sub(a(r, c), k.mul(f, a(col, c)));
                inv(r, c) = k.sub(inv(r, c), k.mul(f, inv(col, c)));
            }
        }
    }
    return inv;
}

/// |M|_ij = a_ij − (row i without j)·(M^{ij})⁻¹·(column j without i).
/// 0-based (i, j).  Throws NonInvertibleMinor if the minor cannot be inverted.
template <DivisionCarrier C>
typename C::value_type quasideterminant_expand(const BlockMatrix<C>& m, std::size_t i, std::size_t j) {
    const std::size_t n = m.size();
    if (i >= n || j >= n) throw ConfigurationError("quasidet.expand", "position out of range");
    if (n == 1) return m(0, 0);
    const C& k = m.carrier();
    const auto minv = inverse_by_elimination(m.minor(i, j));
    if (!minv) throw NonInvertibleMinor("quasidet.expand", i, j);

    // Minor rows are the rows p != i; minor columns are the columns q != j.
    std::vector<std::size_t> rows, cols;
    for (std::size_t p = 0; p < n; ++p)
        if (p != i) rows.push_back(p);
    for (std::size_t q = 0; q < n; ++q)
        if (q != j) cols.push_back(q);

    auto acc = m(i, j);
    for (std::size_t a = 0; a < n - 1; ++a) {
        const auto& left = m(i, cols[a]);
        if (k.is_zero(left)) continue;
        for (std::size_t b = 0; b < n - 1; ++b) {
            acc = k.sub(acc, k.mul(k.mul(left, (*minv)(a, b)), m(rows[b], j)));
        }
    }
    return acc;
}

// ---------------------------------------------------------------- block inverse

namespace detail {

template <class C>
using Block = std::vector<std::vector<typename C::value_type>>;

template <class C>
Block<C> bmul(const C& k, const Block<C>& x, const Block<C>& y) {
    const std::size_t r = x.size(), inner = y.size(), c = y.empty() ? 0 : y[0].size();
    Block<C> out(r, std::vector<typename C::value_type>(c, k.zero()));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < inner; ++t) {
            if (k.is_zero(x[i][t])) continue;
            for (std::size_t j = 0; j < c; ++j) out[i][j] = k.add(out[i][j], k.mul(x[i][t], y[t][j]));
        }
    return out;
}

template <class C>
Block<C> bsub(const C& k, const Block<C>& x, const Block<C>& y) {
    Block<C> out = x;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x[i].size(); ++j) out[i][j] = k.sub(x[i][j], y[i][j]);
    return out;
}

template <class C>
Block<C> bneg(const C& k, const Block<C>& x) {
    Block<C> out = x;
    for (auto& row : out)
        for (auto& e : row) e = k.sub(k.zero(), e);
    return out;
}

template <class C>
std::optional<Block<C>> block_inverse(const C& k, const Block<C>& m);

/// Inverse of [[A, B], [C, D]] split after `s` rows/columns, pivoting on the
/// lower-right block D:  S = A − B D⁻¹ C,
/// M⁻¹ = [[S⁻¹, −S⁻¹BD⁻¹], [−D⁻¹CS⁻¹, D⁻¹ + D⁻¹CS⁻¹BD⁻¹]].
template <class C>
std::optional<Block<C>> split_inverse_lower(const C& k, const Block<C>& m, std::size_t s) {
    const std::size_t n = m.size();
    auto sub = [&](std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) {
        Block<C> b(nr, std::vector<typename C::value_type>(nc));
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b[i][j] = m[r0 + i][c0 + j];
        return b;
    };
    const Block<C> A = sub(0, s, 0, s), B = sub(0, s, s, n - s), Cb = sub(s, n - s, 0, s), D = sub(s, n - s, s, n - s);
    const auto Dinv = block_inverse(k, D);
    if (!Dinv) return std::nullopt;
    const Block<C> BDinv = bmul(k, B, *Dinv);
    const Block<C> DinvC = bmul(k, *Dinv, Cb);
    const auto Sinv = block_inverse(k, bsub(k, A, bmul(k, BDinv, Cb)));
    if (!Sinv) return std::nullopt;
    const Block<C> top_right = bneg(k, bmul(k, *Sinv, BDinv));
    const Block<C> bottom_left = bneg(k, bmul(k, DinvC, *Sinv));
    const Block<C> bottom_right = bsub(k, *Dinv, bmul(k, DinvC, top_right));

    Block<C> out(n, std::vector<typename C::value_type>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i < s && j < s) out[i][j] = (*Sinv)[i][j];
            else if (i < s) out[i][j] = top_right[i][j - s];
            else if (j < s) out[i][j] = bottom_left[i - s][j];
            else out[i][j] = bottom_right[i - s][j - s];
        }
    return out;
}

/// Same partition pivoting on the upper-left block A:  T = D − C A⁻¹ B.
template <class C>
std::optional<Block<C>> split_inverse_upper(const C& k, const Block<C>& m, std::size_t s) {
    const std::size_t n = m.size();
    auto sub = [&](std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) {
        Block<C> b(nr, std::vector<typename C::value_type>(nc));
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b[i][j] = m[r0 + i][c0 + j];
        return b;
    };
    const Block<C> A = sub(0, s, 0, s), B = sub(0, s, s, n - s), Cb = sub(s, n - s, 0, s), D = sub(s, n - s, s, n - s);
    const auto Ainv = block_inverse(k, A);
    if (!Ainv) return std::nullopt;
    const Block<C> AinvB = bmul(k, *Ainv, B);
    const Block<C> CAinv = bmul(k, Cb, *Ainv);
    const auto Tinv = block_inverse(k, bsub(k, D, bmul(k, Cb, AinvB)));
    if (!Tinv) return std::nullopt;
    const Block<C> top_right = bneg(k, bmul(k, AinvB, *Tinv));
    const Block<C> bottom_left = bneg(k, bmul(k, *Tinv, CAinv));
    const Block<C> top_left = bsub(k, *Ainv, bmul(k, top_right, CAinv));

    Block<C> out(n, std::vector<typename C::value_type>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i < s && j < s) out[i][j] = top_left[i][j];
            else if (i < s) out[i][j] = top_right[i][j - s];
            else if (j < s) out[i][j] = bottom_left[i - s][j];
            else out[i][j] = (*Tinv)[i - s][j - s];
        }
    return out;
}

template <class C>
std::optional<Block<C>> block_inverse(const C& k, const Block<C>& m) {
    const std::size_t n = m.size();
    if (n == 1) {
        auto inv = k.invert(m[0][0]);
        if (!inv) return std::nullopt;
        return Block<C>{{std::move(*inv)}};
    }
    // Balanced split first, then every other split point.
    std::vector<std::size_t> splits{n / 2};
    for (std::size_t s = 1; s < n; ++s)
        if (s != n / 2) splits.push_back(s);
    for (std::size_t s : splits) {
        if (auto r = split_inverse_lower(k, m, s)) return r;
        if (auto r = split_inverse_upper(k, m, s)) return r;
    }
    return std::nullopt;
}

}  // namespace detail

/// Inverse by recursive 2×2 block partition with Schur complements.
/// Throws NonInvertibleMatrix when no partition succeeds.
/// If no partition of M works, row permutations P are tried and
/// M⁻¹ = (PM)⁻¹P (up to 6×6).
template <DivisionCarrier C>
BlockMatrix<C> block_inverse(const BlockMatrix<C>& m) {
    const std::size_t n = m.size();
    const auto rows = m.block(0, n, 0, n);
    if (auto inv = detail::block_inverse(m.carrier(), rows)) return BlockMatrix<C>(m.carrier(), *inv);
    if (n <= 6) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end())) {
            detail::Block<C> permuted(n);
            for (std::size_t r = 0; r < n; ++r) permuted[r] = rows[perm[r]];
            auto inv = detail::block_inverse(m.carrier(), permuted);
            if (!inv) continue;
            // (PM)⁻¹ P: column r of (PM)⁻¹ becomes column perm[r].
            BlockMatrix<C> out(m.carrier(), n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t r = 0; r < n; ++r) out(i, perm[r]) = (*inv)[i][r];
            return out;
        }
    }
    throw NonInvertibleMatrix("quasidet.block_inverse", "no block partition has invertible pivots");
}

/// ((M⁻¹)_ji)⁻¹, 0-based (i, j).
template <DivisionCarrier C>
typename C::value_type quasideterminant_via_inverse(const BlockMatrix<C>& m, std::size_t i, std::size_t j) {
    if (i >= m.size() || j >= m.size()) throw ConfigurationError("quasidet.via_inverse", "position out of range");
    const BlockMatrix<C> inv = block_inverse(m);
    auto e = m.carrier().invert(inv(j, i));
    if (!e)
        throw NonInvertibleEntry("quasidet.via_inverse", "inverse entry is not invertible",
                                 {{"row", j + 1}, {"col", i + 1}});
    return std::move(*e);
}

// ---------------------------------------------------------------- enumeration

enum class Method { Expand, ViaInverse };

template <DivisionCarrier C>
struct PositionResult {
    std::size_t row = 0;  // 0-based
    std::size_t col = 0;
    std::optional<typename C::value_type> value;
    std::string error;  // error name when value is empty
};

/// All n² positions in row-major order; failures are recorded per position.
template <DivisionCarrier C>
std::vector<PositionResult<C>> all_quasideterminants(const BlockMatrix<C>& m, Method method = Method::Expand) {
    std::vector<PositionResult<C>> out;
    out.reserve(m.size() * m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            PositionResult<C> r{i, j, std::nullopt, {}};
            try {
                r.value = method == Method::Expand ? quasideterminant_expand(m, i, j)
                                                   : quasideterminant_via_inverse(m, i, j);
            } catch (const Error& e) {
                r.error = e.name();
            }
            out.push_back(std::move(r));
        }
    return out;
}

// ---------------------------------------------------------------- commutative check

/// Determinant by cofactor expansion along the first row.
GaussianRational determinant_cofactor(const BlockMatrix<ExactScalarCarrier>& m);

enum class ReductionStatus { Holds, Fails, VacuousSingular };
std::string to_string(ReductionStatus s);

struct ReductionCheck {
    ReductionStatus status = ReductionStatus::Fails;
    std::optional<GaussianRational> quasideterminant;
    std::optional<GaussianRational> cofactor_ratio;
    bool holds() const { return status == ReductionStatus::Holds; }
};

/// Compares |M|_ij with (−1)^{i+j} det M / det M^{ij} exactly (0-based i, j).
ReductionCheck commutative_reduction_check(const BlockMatrix<ExactScalarCarrier>& m, std::size_t i, std::size_t j);

// ---------------------------------------------------------------- input

using ExactScalarMatrix = BlockMatrix<ExactScalarCarrier>;
using ExactBlockMatrix = BlockMatrix<ExactMatrixCarrier>;
using ComplexBlockMatrix = BlockMatrix<ComplexMatrixCarrier>;

/// JSON array of rows; entries are exact strings ("3/4+1/2i") or integers.
ExactScalarMatrix parse_exact_scalar(const nlohmann::json& j);
/// JSON array of rows; entries are square arrays of exact strings/integers.
ExactBlockMatrix parse_exact_blocks(const nlohmann::json& j);
/// JSON array of rows; entries are square arrays of numbers, exact strings, or
/// [re, im] pairs.
ComplexBlockMatrix parse_complex_blocks(const nlohmann::json& j);

}  // namespace qpii::quasidet
