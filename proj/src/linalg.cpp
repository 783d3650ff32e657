#include "qpii/linalg.hpp"

#include <cmath>

namespace qpii {

double max_abs(const Eigen::MatrixXcd& m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) best = std::max(best, std::abs(m(r, c)));
    return best;
}

std::optional<Eigen::MatrixXcd> invert_pivoted(const Eigen::MatrixXcd& m, double rel_tol) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) return std::nullopt;
    const double scale = max_abs(m);
    if (n == 0) return Eigen::MatrixXcd(0, 0);
    if (scale == 0.0) return std::nullopt;

    Eigen::MatrixXcd a = m;
    Eigen::MatrixXcd inv = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p = k;
        double best = std::abs(a(k, k));
        for (Eigen::Index r = k + 1; r < n; ++r) {
            if (std::abs(a(r, k)) > best) {
                best = std::abs(a(r, k));
                p = r;
            }
        }
        if (!(best > rel_tol * scale)) return std::nullopt;
        if (p != k) {
            a.row(k).swap(a.row(p));
            inv.row(k).swap(inv.row(p));
        }
        const std::complex<double> piv = a(k, k);
        a.row(k) /= piv;
        inv.row(k) /= piv;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == k) continue;
            const std::complex<double> f = a(r, k);
            if (f == 0.0) continue;
            a.row(r) -= f * a.row(k);
            inv.row(r) -= f * inv.row(k);
        }
    }
    return inv;
}

}  // namespace qpii
