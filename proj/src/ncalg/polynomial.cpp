#include "qpii/ncalg/polynomial.hpp"

#include <algorithm>
#include <array>

#include "qpii/errors.hpp"

namespace qpii::ncalg {

namespace {

constexpr std::array<std::string_view, kGenCount> kNames = {
    "f2", "f2'", "f2''", "f0", "f1", "z", "chi", "phi", "chi^-1", "phi^-1", "Delta",
};

void check_same(const NCPolynomial& a, const NCPolynomial& b, const char* op) {
    if (!(a.alphabet() == b.alphabet()))
        throw ConfigurationError(std::string("ncalg.") + op,
                                 "mismatched algebras " + a.alphabet().to_string() + " and " +
                                     b.alphabet().to_string());
}

Word concat(const Word& a, const Word& b) {
    Word w;
    w.reserve(a.size() + b.size());
    w.insert(w.end(), a.begin(), a.end());
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

}  // namespace

std::string_view gen_name(Gen g) { return kNames[rank(g)]; }

std::optional<Gen> parse_gen(std::string_view name) {
    for (int k = 0; k < kGenCount; ++k)
        if (kNames[k] == name) return static_cast<Gen>(k);
    return std::nullopt;
}

std::optional<Gen> inverse_of(Gen g) {
    switch (g) {
        case Gen::Chi: return Gen::ChiInv;
        case Gen::ChiInv: return Gen::Chi;
        case Gen::Phi: return Gen::PhiInv;
        case Gen::PhiInv: return Gen::Phi;
        default: return std::nullopt;
    }
}

Alphabet::Alphabet(std::initializer_list<Gen> gens) {
    for (Gen g : gens) bits_.set(rank(g));
}

Alphabet Alphabet::full() {
    Alphabet a;
    a.bits_.set();
    return a;
}

Alphabet Alphabet::lax() { return {Gen::F2, Gen::F2p, Gen::F2pp, Gen::Z}; }
Alphabet Alphabet::symmetric() { return {Gen::F0, Gen::F1, Gen::F2, Gen::F2p}; }
Alphabet Alphabet::riccati() {
    return {Gen::F2, Gen::Chi, Gen::Phi, Gen::ChiInv, Gen::PhiInv, Gen::Delta};
}

std::string Alphabet::to_string() const {
    std::string out = "{";
    for (int k = 0; k < kGenCount; ++k) {
        if (!bits_.test(k)) continue;
        if (out.size() > 1) out += ", ";
        out += kNames[k];
    }
    return out + "}";
}

bool WordLess::operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](Gen x, Gen y) { return rank(x) < rank(y); });
}

std::string word_to_string(const Word& w) {
    std::string out;
    for (Gen g : w) {
        if (!out.empty()) out += " ";
        out += gen_name(g);
    }
    return out;
}

NCPolynomial::NCPolynomial(Alphabet alphabet, const Coefficient& constant) : alphabet_(alphabet) {
    add_term({}, constant);
}

NCPolynomial NCPolynomial::gen(Gen g, Alphabet alphabet) {
    return word({g}, 1, alphabet);
}

NCPolynomial NCPolynomial::word(const Word& w, const Coefficient& c, Alphabet alphabet) {
    NCPolynomial p(alphabet);
    p.add_term(w, c);
    return p;
}

Coefficient NCPolynomial::coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Coefficient{} : it->second;
}

bool NCPolynomial::contains(Gen g) const {
    for (const auto& [w, c] : terms_)
        if (std::find(w.begin(), w.end(), g) != w.end()) return true;
    return false;
}

bool NCPolynomial::is_central() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

void NCPolynomial::add_term(const Word& w, const Coefficient& c) {
    if (c.is_zero()) return;
    for (Gen g : w)
        if (!alphabet_.contains(g))
            throw ConfigurationError("ncalg.add_term", "generator '" + std::string(gen_name(g)) +
                                                           "' is not in algebra " + alphabet_.to_string());
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

NCPolynomial NCPolynomial::operator-() const {
    NCPolynomial r = *this;
    for (auto& [w, c] : r.terms_) c = -c;
    return r;
}

NCPolynomial& NCPolynomial::operator+=(const NCPolynomial& o) {
    check_same(*this, o, "add");
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

NCPolynomial& NCPolynomial::operator-=(const NCPolynomial& o) {
    check_same(*this, o, "sub");
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

NCPolynomial& NCPolynomial::operator*=(const Coefficient& c) {
    Terms out;
    for (auto& [w, v] : terms_) {
        Coefficient prod = v * c;
        if (!prod.is_zero()) out.emplace(w, std::move(prod));
    }
    terms_ = std::move(out);
    return *this;
}

NCPolynomial operator*(const NCPolynomial& a, const NCPolynomial& b) { return nc_mul(a, b); }

NCPolynomial operator+(NCPolynomial a, const Coefficient& c) {
    a.add_term({}, c);
    return a;
}

NCPolynomial NCPolynomial::with_alphabet(Alphabet alphabet) const {
    NCPolynomial r(alphabet);
    for (const auto& [w, c] : terms_) r.add_term(w, c);
    return r;
}

NCPolynomial nc_mul(const NCPolynomial& p, const NCPolynomial& q) {
    check_same(p, q, "nc_mul");
    NCPolynomial r(p.alphabet());
    for (const auto& [wp, cp] : p.terms())
        for (const auto& [wq, cq] : q.terms()) r.add_term(concat(wp, wq), cp * cq);
    return r;
}

NCPolynomial commutator(const NCPolynomial& a, const NCPolynomial& b) { return a * b - b * a; }
NCPolynomial anticommutator(const NCPolynomial& a, const NCPolynomial& b) { return a * b + b * a; }

NCPolynomial substitute(const NCPolynomial& p, Gen g, const NCPolynomial& replacement) {
    check_same(p, replacement, "substitute");
    NCPolynomial r(p.alphabet());
    for (const auto& [w, c] : p.terms()) {
        NCPolynomial acc(p.alphabet(), c);
        for (Gen h : w) acc = acc * (h == g ? replacement : NCPolynomial::gen(h, p.alphabet()));
        r += acc;
    }
    return r;
}

NCPolynomial substitute(const NCPolynomial& p, Central s, const Rational& value) {
    NCPolynomial r(p.alphabet());
    for (const auto& [w, c] : p.terms()) r.add_term(w, c.substitute(s, value));
    return r;
}

NCPolynomial classical_limit(const NCPolynomial& p) {
    NCPolynomial r(p.alphabet());
    for (const auto& [w, c] : p.terms()) {
        Word sorted = w;
        std::sort(sorted.begin(), sorted.end(), [](Gen x, Gen y) { return rank(x) < rank(y); });
        r.add_term(sorted, c.substitute(Central::Hbar, 0));
    }
    return r;
}

NCPolynomial divide(const NCPolynomial& p, const GaussianRational& s) {
    NCPolynomial r(p.alphabet());
    for (const auto& [w, c] : p.terms()) r.add_term(w, c / s);
    return r;
}

}  // namespace qpii::ncalg
