#include "qpii/quasidet.hpp"

#include <cmath>

namespace qpii::quasidet {

using json = nlohmann::ordered_json;

ExactMatrix ExactMatrix::identity(std::size_t dim) {
    ExactMatrix m(dim);
    for (std::size_t k = 0; k < dim; ++k) m(k, k) = GaussianRational(1);
    return m;
}

namespace {

void check_dims(const ExactMatrix& x, const ExactMatrix& y) {
    if (x.d != y.d) throw ConfigurationError("quasidet.ExactMatrix", "block dimensions differ");
}

}  // namespace

ExactMatrix operator+(const ExactMatrix& x, const ExactMatrix& y) {
    check_dims(x, y);
    ExactMatrix out = x;
    for (std::size_t k = 0; k < out.a.size(); ++k) out.a[k] += y.a[k];
    return out;
}

ExactMatrix operator-(const ExactMatrix& x, const ExactMatrix& y) {
    check_dims(x, y);
    ExactMatrix out = x;
    for (std::size_t k = 0; k < out.a.size(); ++k) out.a[k] -= y.a[k];
    return out;
}

ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
    check_dims(x, y);
    ExactMatrix out(x.d);
    for (std::size_t i = 0; i < x.d; ++i)
        for (std::size_t t = 0; t < x.d; ++t) {
            if (x(i, t).is_zero()) continue;
            for (std::size_t j = 0; j < x.d; ++j) out(i, j) += x(i, t) * y(t, j);
        }
    return out;
}

std::optional<ExactMatrix> exact_inverse(const ExactMatrix& m) {
    const std::size_t n = m.d;
    ExactMatrix a = m;
    ExactMatrix inv = ExactMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && a(p, col).is_zero()) ++p;
        if (p == n) return std::nullopt;
        if (p != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(p, c), a(col, c));
                std::swap(inv(p, c), inv(col, c));
            }
        const GaussianRational piv = GaussianRational(1) / a(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) *= piv;
            inv(col, c) *= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col).is_zero()) continue;
            const GaussianRational f = a(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

Eigen::MatrixXcd to_complex(const ExactMatrix& m) {
    const auto d = static_cast<Eigen::Index>(m.d);
    Eigen::MatrixXcd out(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) {
            const auto& v = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            out(r, c) = {v.real_value(), v.imag_value()};
        }
    return out;
}

bool ExactMatrixCarrier::is_zero(const ExactMatrix& x) const {
    for (const auto& v : x.a)
        if (!v.is_zero()) return false;
    return true;
}

json ExactMatrixCarrier::to_json(const ExactMatrix& x) const {
    json rows = json::array();
    for (std::size_t r = 0; r < x.d; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < x.d; ++c) row.push_back(x(r, c).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

bool ComplexMatrixCarrier::approx_equal(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) const {
    const double scale = 1.0 + std::max(max_abs(x), max_abs(y));
    return max_abs(x - y) <= tolerance * scale;
}

json ComplexMatrixCarrier::to_json(const Eigen::MatrixXcd& x) const {
    json rows = json::array();
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < x.cols(); ++c) row.push_back(json::array({x(r, c).real(), x(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------- commutative check

GaussianRational determinant_cofactor(const BlockMatrix<ExactScalarCarrier>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m(0, 0);
    GaussianRational det(0);
    for (std::size_t c = 0; c < n; ++c) {
        if (m(0, c).is_zero()) continue;
        const GaussianRational term = m(0, c) * determinant_cofactor(m.minor(0, c));
        if (c % 2 == 0) det += term;
        else det -= term;
    }
    return det;
}

std::string to_string(ReductionStatus s) {
    switch (s) {
        case ReductionStatus::Holds: return "holds";
        case ReductionStatus::Fails: return "fails";
        case ReductionStatus::VacuousSingular: return "vacuous-singular";
    }
    return "fails";
}

ReductionCheck commutative_reduction_check(const BlockMatrix<ExactScalarCarrier>& m, std::size_t i, std::size_t j) {
    ReductionCheck out;
    if (m.size() == 1) {
        out.quasideterminant = m(0, 0);
        out.cofactor_ratio = m(0, 0);
        out.status = ReductionStatus::Holds;
        return out;
    }
    const GaussianRational minor_det = determinant_cofactor(m.minor(i, j));
    if (minor_det.is_zero()) {
        out.status = ReductionStatus::VacuousSingular;
        return out;
    }
    GaussianRational ratio = determinant_cofactor(m) / minor_det;
    if ((i + j) % 2 == 1) ratio = -ratio;
    out.cofactor_ratio = ratio;
    try {
        out.quasideterminant = quasideterminant_expand(m, i, j);
    } catch (const NonInvertibleMinor&) {
        out.status = ReductionStatus::Fails;
        return out;
    }
    out.status = *out.quasideterminant == ratio ? ReductionStatus::Holds : ReductionStatus::Fails;
    return out;
}

// ---------------------------------------------------------------- input

namespace {

[[noreturn]] void bad_input(const std::string& msg) { throw ParseError("quasidet.parse", msg); }

GaussianRational exact_scalar(const nlohmann::json& e) {
    if (e.is_string()) return GaussianRational::parse(e.get<std::string>());
    if (e.is_number_integer()) return GaussianRational(e.get<long long>());
    bad_input("exact entries must be strings like \"3/4+1/2i\" or integers");
}

std::complex<double> complex_scalar(const nlohmann::json& e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_string()) {
        const GaussianRational g = GaussianRational::parse(e.get<std::string>());
        return {g.real_value(), g.imag_value()};
    }
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    bad_input("complex entries must be numbers, exact strings, or [re, im]");
}

std::size_t check_square(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.empty()) bad_input(std::string(what) + " must be a non-empty array of rows");
    const std::size_t n = j.size();
    for (const auto& row : j)
        if (!row.is_array() || row.size() != n) bad_input(std::string(what) + " must be square");
    return n;
}

}  // namespace

ExactScalarMatrix parse_exact_scalar(const nlohmann::json& j) {
    const std::size_t n = check_square(j, "matrix");
    ExactScalarMatrix m(ExactScalarCarrier{}, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = exact_scalar(j[r][c]);
    return m;
}

ExactBlockMatrix parse_exact_blocks(const nlohmann::json& j) {
    const std::size_t n = check_square(j, "matrix");
    const std::size_t d = check_square(j[0][0], "block");
    ExactBlockMatrix m(ExactMatrixCarrier{d}, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const auto& b = j[r][c];
            if (check_square(b, "block") != d) bad_input("all blocks must share one dimension");
            ExactMatrix e(d);
            for (std::size_t x = 0; x < d; ++x)
                for (std::size_t y = 0; y < d; ++y) e(x, y) = exact_scalar(b[x][y]);
            m(r, c) = std::move(e);
        }
    return m;
}

ComplexBlockMatrix parse_complex_blocks(const nlohmann::json& j) {
    const std::size_t n = check_square(j, "matrix");
    const std::size_t d = check_square(j[0][0], "block");
    ComplexBlockMatrix m(ComplexMatrixCarrier{d}, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const auto& b = j[r][c];
            if (check_square(b, "block") != d) bad_input("all blocks must share one dimension");
            Eigen::MatrixXcd e(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            for (std::size_t x = 0; x < d; ++x)
                for (std::size_t y = 0; y < d; ++y)
                    e(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = complex_scalar(b[x][y]);
            m(r, c) = std::move(e);
        }
    return m;
}

}  // namespace qpii::quasidet
