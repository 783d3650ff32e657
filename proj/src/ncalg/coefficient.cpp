#include "qpii/ncalg/coefficient.hpp"

#include <stdexcept>

#include "qpii/errors.hpp"

namespace qpii::ncalg {

namespace {

Rational parse_rational(std::string_view s) {
    if (s.empty()) throw ParseError("ncalg.parse", "empty rational literal");
    try {
        return Rational(std::string(s));
    } catch (const std::exception&) {
        throw ParseError("ncalg.parse", "invalid rational literal '" + std::string(s) + "'");
    }
}

}  // namespace

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    const Rational n = o.norm2();
    if (n.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
}

std::string GaussianRational::to_string() const {
    std::string out = "(" + re_.str();
    if (im_ < 0) {
        out += "-" + Rational(-im_).str();
    } else {
        out += "+" + im_.str();
    }
    out += "i)";
    return out;
}

GaussianRational GaussianRational::parse(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ' && ch != '\t') s.push_back(ch);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    if (s.empty()) throw ParseError("ncalg.parse", "empty Gaussian rational");

    if (s.back() != 'i') return {parse_rational(s), 0};

    s.pop_back();
    // Split at the last sign that is not the leading one.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if (s[k] == '+' || s[k] == '-') {
            split = k;
            break;
        }
    }
    auto imag_part = [](std::string_view t) -> Rational {
        if (t.empty() || t == "+") return 1;
        if (t == "-") return -1;
        if (t.front() == '+') t.remove_prefix(1);
        return parse_rational(t);
    };
    if (split == std::string::npos) return {0, imag_part(s)};
    return {parse_rational(std::string_view(s).substr(0, split)),
            imag_part(std::string_view(s).substr(split))};
}

std::string_view central_name(Central s) {
    switch (s) {
        case Central::Hbar: return "h";
        case Central::C: return "c";
        case Central::Lambda: return "l";
        case Central::Alpha0: return "a0";
        case Central::Alpha1: return "a1";
    }
    return "?";
}

bool CentralMonomial::is_one() const {
    for (int e : exp)
        if (e != 0) return false;
    return true;
}

CentralMonomial operator*(const CentralMonomial& a, const CentralMonomial& b) {
    CentralMonomial r;
    for (int k = 0; k < kCentralCount; ++k) r.exp[k] = a.exp[k] + b.exp[k];
    return r;
}

Coefficient::Coefficient(const GaussianRational& v) {
    if (!v.is_zero()) terms_.emplace(CentralMonomial{}, v);
}

Coefficient Coefficient::symbol(Central s, int power) {
    CentralMonomial m;
    m[s] = power;
    return monomial(1, m);
}

Coefficient Coefficient::monomial(const GaussianRational& v, const CentralMonomial& m) {
    for (int k = 0; k < kCentralCount; ++k) {
        if (m.exp[k] < 0 && k != static_cast<int>(Central::Lambda))
            throw ConfigurationError("ncalg.coefficient",
                                     "negative exponent for central symbol '" +
                                         std::string(central_name(static_cast<Central>(k))) + "'");
    }
    Coefficient c;
    c.add_monomial(m, v);
    return c;
}

void Coefficient::add_monomial(const CentralMonomial& m, const GaussianRational& v) {
    if (v.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, v);
    if (!inserted) {
        it->second += v;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool Coefficient::is_scalar() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

GaussianRational Coefficient::scalar() const {
    auto it = terms_.find(CentralMonomial{});
    return it == terms_.end() ? GaussianRational{} : it->second;
}

bool Coefficient::depends_on(Central s) const {
    for (const auto& [m, v] : terms_)
        if (m[s] != 0) return true;
    return false;
}

Coefficient Coefficient::operator-() const {
    Coefficient r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
    for (const auto& [m, v] : o.terms_) add_monomial(m, v);
    return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
    for (const auto& [m, v] : o.terms_) add_monomial(m, -v);
    return *this;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) {
    Coefficient r;
    for (const auto& [ma, va] : terms_)
        for (const auto& [mb, vb] : o.terms_) r.add_monomial(ma * mb, va * vb);
    *this = std::move(r);
    return *this;
}

Coefficient& Coefficient::operator/=(const GaussianRational& s) {
    if (s.is_zero()) throw std::domain_error("Coefficient: division by zero");
    for (auto& [m, v] : terms_) v /= s;
    return *this;
}

Coefficient Coefficient::derivative_lambda() const {
    Coefficient r;
    for (const auto& [m, v] : terms_) {
        const int n = m[Central::Lambda];
        if (n == 0) continue;
        CentralMonomial dm = m;
        dm[Central::Lambda] = n - 1;
        r.add_monomial(dm, v * GaussianRational(n));
    }
    return r;
}

Coefficient Coefficient::substitute(Central s, const Rational& value) const {
    Coefficient r;
    for (const auto& [m, v] : terms_) {
        const int n = m[s];
        CentralMonomial rest = m;
        rest[s] = 0;
        if (n == 0) {
            r.add_monomial(rest, v);
            continue;
        }
        if (value.is_zero()) {
            if (n < 0)
                throw DomainError("ncalg.substitute", "substituting zero into a negative power of '" +
                                                          std::string(central_name(s)) + "'");
            continue;
        }
        Rational p = 1;
        for (int k = 0; k < (n < 0 ? -n : n); ++k) p *= value;
        if (n < 0) p = Rational(1) / p;
        r.add_monomial(rest, v * GaussianRational(p));
    }
    return r;
}

std::string Coefficient::to_string() const {
    if (terms_.empty()) return "(0+0i)";
    std::string out;
    for (const auto& [m, v] : terms_) {
        if (!out.empty()) out += " + ";
        out += v.to_string();
        for (int k = 0; k < kCentralCount; ++k) {
            if (m.exp[k] == 0) continue;
            out += " ";
            out += central_name(static_cast<Central>(k));
            out += "^" + std::to_string(m.exp[k]);
        }
    }
    return out;
}

}  // namespace qpii::ncalg
