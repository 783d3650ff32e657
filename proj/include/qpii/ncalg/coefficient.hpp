#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace qpii::ncalg {

using Rational = boost::multiprecision::cpp_rational;

/// Exact complex number a + b i with rational parts.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long long re) : re_(re) {}
    GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return {0, 1}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    GaussianRational conj() const { return {re_, -im_}; }
    Rational norm2() const { return re_ * re_ + im_ * im_; }

    GaussianRational operator-() const { return {-re_, -im_}; }
    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    /// Throws std::domain_error on division by zero.
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational&, const GaussianRational&) = default;

    /// `(re+imi)`, e.g. `(0+1/2i)`, `(-3-1i)`.
    std::string to_string() const;
    /// Parses `a`, `a+bi`, `a-bi`, `bi` with optional surrounding parentheses.
    static GaussianRational parse(std::string_view text);

    double real_value() const { return re_.convert_to<double>(); }
    double imag_value() const { return im_.convert_to<double>(); }

private:
    Rational re_{0};
    Rational im_{0};
};

/// Central symbols; all commute with every generator.
enum class Central : int { Hbar = 0, C = 1, Lambda = 2, Alpha0 = 3, Alpha1 = 4 };
inline constexpr int kCentralCount = 5;

std::string_view central_name(Central s);

/// Exponent vector of a Laurent monomial in the central symbols.  Only the
/// λ exponent may be negative.
struct CentralMonomial {
    std::array<int, kCentralCount> exp{};

    int& operator[](Central s) { return exp[static_cast<int>(s)]; }
    int operator[](Central s) const { return exp[static_cast<int>(s)]; }
    bool is_one() const;

    friend CentralMonomial operator*(const CentralMonomial& a, const CentralMonomial& b);
    friend auto operator<=>(const CentralMonomial&, const CentralMonomial&) = default;
};

/// Gaussian-rational combination of central Laurent monomials.  No stored
/// coefficient is ever zero.
class Coefficient {
public:
    using Terms = std::map<CentralMonomial, GaussianRational>;

    Coefficient() = default;
    Coefficient(long long v) : Coefficient(GaussianRational(v)) {}
    Coefficient(const GaussianRational& v);

    static Coefficient i() { return GaussianRational::i(); }
    static Coefficient symbol(Central s, int power = 1);
    static Coefficient monomial(const GaussianRational& v, const CentralMonomial& m);

    static Coefficient hbar() { return symbol(Central::Hbar); }
    static Coefficient c() { return symbol(Central::C); }
    static Coefficient lambda(int power = 1) { return symbol(Central::Lambda, power); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// True when the coefficient has no central symbol dependence.
    bool is_scalar() const;
    /// Scalar part (coefficient of the unit monomial).
    GaussianRational scalar() const;
    bool depends_on(Central s) const;

    Coefficient operator-() const;
    Coefficient& operator+=(const Coefficient& o);
    Coefficient& operator-=(const Coefficient& o);
    Coefficient& operator*=(const Coefficient& o);
    /// Division by a nonzero Gaussian rational scalar.
    Coefficient& operator/=(const GaussianRational& s);

    friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
    friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
    friend Coefficient operator/(Coefficient a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const Coefficient&, const Coefficient&) = default;

    /// Formal Laurent derivative in λ: ∂(λⁿ) = n λⁿ⁻¹.
    Coefficient derivative_lambda() const;
    /// Replaces a central symbol by a rational value.  Substituting zero into a
    /// negative power is a domain error.
    Coefficient substitute(Central s, const Rational& value) const;

    /// One `(a+bi) h^j c^k l^m` group per monomial, joined by ` + `.
    std::string to_string() const;

private:
    void add_monomial(const CentralMonomial& m, const GaussianRational& v);

    Terms terms_;
};

}  // namespace qpii::ncalg
