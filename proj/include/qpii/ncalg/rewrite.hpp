#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpii/ncalg/polynomial.hpp"

namespace qpii::ncalg {

/// Rewrites the adjacent pair `left·right` to `rhs`.
struct RewriteRule {
    Gen left;
    Gen right;
    NCPolynomial rhs;
    std::string label;
};

/// Ordered list of two-generator rules.  Every right-hand side word must be
/// strictly smaller than the left-hand side in the deg-lex word order, which
/// bounds every reduction.
class RewriteSystem {
public:
    RewriteSystem() = default;
    /// Throws RewriteOrderError if a rule does not strictly decrease, and
    /// ConfigurationError on duplicate left-hand sides.
    explicit RewriteSystem(std::vector<RewriteRule> rules);

    /// z·f2 -> f2·z + ½iħ f2 and f2'·f2 -> f2·f2' - 4λħ.  With
    /// `with_z_f2prime` also z·f2' -> f2'·z + ½iħ f2'.
    static RewriteSystem quantum(bool with_z_f2prime = false);
    /// f0·f2 -> f2·f0 - 2λħ and f1·f2 -> f2·f1 + 2λħ.
    static RewriteSystem symmetric();
    /// g·g⁻¹ -> 1 and g⁻¹·g -> 1 for χ and φ.
    static RewriteSystem inverse_pairs();
    /// The single rule f2'·f2 -> f2·f2' + value (value central).
    static RewriteSystem commutator_substitution(const Coefficient& value, const std::string& label);

    const std::vector<RewriteRule>& rules() const { return rules_; }
    const RewriteRule* match(Gen left, Gen right) const;

    /// Union of two systems (left-hand sides must be disjoint).
    RewriteSystem merged(const RewriteSystem& other) const;

private:
    std::vector<RewriteRule> rules_;
};

enum class Strategy { Leftmost, Rightmost };

struct NormalFormStats {
    std::size_t steps = 0;
};

/// Reduces every word to an irreducible one.  The result does not depend on
/// the strategy for confluent systems.
NCPolynomial normal_form(const NCPolynomial& p, const RewriteSystem& rules,
                         Strategy strategy = Strategy::Leftmost, NormalFormStats* stats = nullptr);

bool is_normal(const NCPolynomial& p, const RewriteSystem& rules);

/// Overlap a·b·c of rules (a,b) and (b,c) whose two one-step reductions do
/// not reach the same normal form.
struct CriticalPair {
    Word overlap;
    NCPolynomial via_left;
    NCPolynomial via_right;
};

std::vector<CriticalPair> unresolved_critical_pairs(const RewriteSystem& rules);

}  // namespace qpii::ncalg
