#pragma once

#include <array>
#include <optional>

#include "qpii/ncalg/polynomial.hpp"

namespace qpii::ncalg {

/// Images of generators under d/dz.  Central symbols are constants.
class DerivationTable {
public:
    DerivationTable() = default;

    /// z -> 1, f2 -> f2', f2' -> f2'', χ and φ from the linear system,
    /// χ⁻¹ and φ⁻¹ by the inverse rule d(g⁻¹) = -g⁻¹·dg·g⁻¹.
    static DerivationTable standard();
    /// z -> 1, f2 -> f2', f2' -> f2'' only.
    static DerivationTable lax();
    /// χ, φ, χ⁻¹, φ⁻¹ only.
    static DerivationTable riccati();

    void set(Gen g, NCPolynomial image);
    const NCPolynomial* image(Gen g) const;

private:
    std::array<std::optional<NCPolynomial>, kGenCount> images_;
};

/// Leibniz-linear extension of the table.  Throws DerivationError naming the
/// first generator without an entry.
NCPolynomial derive(const NCPolynomial& p, const DerivationTable& table);

}  // namespace qpii::ncalg
