#pragma once

#include <string>
#include <string_view>

#include "qpii/ncalg/polynomial.hpp"

namespace qpii::ncalg {

/// Canonical text form.  Terms are sorted by word order (then central
/// monomial); each term prints as `(a+bi) h^j c^k l^m * g1 g2 ...`, terms are
/// joined by ` + `, and the zero polynomial prints as `0`.
///
///     (0+1/2i) h^1 * f2 + (1+0i) * f2 z
std::string to_text(const NCPolynomial& p);

/// Inverse of to_text.  Throws ParseError on malformed input and
/// ConfigurationError on generators outside `alphabet`.
NCPolynomial parse_polynomial(std::string_view text, Alphabet alphabet = Alphabet::full());

}  // namespace qpii::ncalg
