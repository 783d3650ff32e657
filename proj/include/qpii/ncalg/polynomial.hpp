#pragma once

#include <bitset>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpii/ncalg/coefficient.hpp"

namespace qpii::ncalg {

/// Noncommuting generators.  Enumerator order is the ordering rank used by
/// the word order; it orients every shipped rewrite rule.
enum class Gen : std::uint8_t {
    F2 = 0,
    F2p,
    F2pp,
    F0,
    F1,
    Z,
    Chi,
    Phi,
    ChiInv,
    PhiInv,
    Delta,
};
inline constexpr int kGenCount = 11;

inline int rank(Gen g) { return static_cast<int>(g); }
std::string_view gen_name(Gen g);
std::optional<Gen> parse_gen(std::string_view name);
/// χ ↔ χ⁻¹, φ ↔ φ⁻¹; nullopt for generators without a declared inverse.
std::optional<Gen> inverse_of(Gen g);

/// Set of generators a polynomial may use; fixed when the algebra is built.
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(std::initializer_list<Gen> gens);

    static Alphabet full();
    /// {f2, f2', f2'', z}
    static Alphabet lax();
    /// {f0, f1, f2, f2'}
    static Alphabet symmetric();
    /// {f2, chi, phi, chi^-1, phi^-1, Delta}
    static Alphabet riccati();

    bool contains(Gen g) const { return bits_.test(rank(g)); }
    friend bool operator==(const Alphabet&, const Alphabet&) = default;
    std::string to_string() const;

private:
    std::bitset<kGenCount> bits_;
};

using Word = std::vector<Gen>;

/// Deg-lex: shorter words first, then lexicographic by generator rank.
struct WordLess {
    bool operator()(const Word& a, const Word& b) const;
};

std::string word_to_string(const Word& w);

/// Formal sum of words with Coefficient weights.  Multiplication is
/// concatenation and is not commutative.
class NCPolynomial {
public:
    using Terms = std::map<Word, Coefficient, WordLess>;

    explicit NCPolynomial(Alphabet alphabet = Alphabet::full()) : alphabet_(alphabet) {}
    NCPolynomial(Alphabet alphabet, const Coefficient& constant);

    static NCPolynomial gen(Gen g, Alphabet alphabet = Alphabet::full());
    static NCPolynomial word(const Word& w, const Coefficient& c, Alphabet alphabet = Alphabet::full());

    const Alphabet& alphabet() const { return alphabet_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Coefficient of `w` (zero if absent).
    Coefficient coefficient(const Word& w) const;
    bool contains(Gen g) const;
    /// Polynomial with only the empty word (possibly zero).
    bool is_central() const;

    /// Adds c·w, merging with an existing term.  Rejects generators outside
    /// the alphabet.
    void add_term(const Word& w, const Coefficient& c);

    NCPolynomial operator-() const;
    NCPolynomial& operator+=(const NCPolynomial& o);
    NCPolynomial& operator-=(const NCPolynomial& o);
    NCPolynomial& operator*=(const Coefficient& c);

    friend NCPolynomial operator+(NCPolynomial a, const NCPolynomial& b) { return a += b; }
    friend NCPolynomial operator-(NCPolynomial a, const NCPolynomial& b) { return a -= b; }
    friend NCPolynomial operator*(const NCPolynomial& a, const NCPolynomial& b);
    friend NCPolynomial operator*(NCPolynomial a, const Coefficient& c) { return a *= c; }
    friend NCPolynomial operator*(const Coefficient& c, NCPolynomial a) { return a *= c; }
    friend NCPolynomial operator+(NCPolynomial a, const Coefficient& c);
    friend NCPolynomial operator+(const Coefficient& c, NCPolynomial a) { return std::move(a) + c; }
    friend NCPolynomial operator-(NCPolynomial a, const Coefficient& c) { return std::move(a) + (-c); }
    friend NCPolynomial operator-(const Coefficient& c, const NCPolynomial& a) { return (-a) + c; }

    friend bool operator==(const NCPolynomial&, const NCPolynomial&) = default;

    /// Same terms re-homed in another alphabet (checks membership).
    NCPolynomial with_alphabet(Alphabet alphabet) const;

private:
    Alphabet alphabet_;
    Terms terms_;
};

/// Free-algebra product; mismatched alphabets raise ConfigurationError.
NCPolynomial nc_mul(const NCPolynomial& p, const NCPolynomial& q);

NCPolynomial commutator(const NCPolynomial& a, const NCPolynomial& b);
NCPolynomial anticommutator(const NCPolynomial& a, const NCPolynomial& b);

/// Replaces every occurrence of generator `g` by `replacement`.
NCPolynomial substitute(const NCPolynomial& p, Gen g, const NCPolynomial& replacement);
/// Replaces a central symbol by a rational value.
NCPolynomial substitute(const NCPolynomial& p, Central s, const Rational& value);

/// ħ → 0 followed by sorting every word by generator rank (commutative
/// projection).
NCPolynomial classical_limit(const NCPolynomial& p);

/// Divides all coefficients by a nonzero Gaussian rational.
NCPolynomial divide(const NCPolynomial& p, const GaussianRational& s);

}  // namespace qpii::ncalg
