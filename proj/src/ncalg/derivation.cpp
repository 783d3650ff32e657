#include "qpii/ncalg/derivation.hpp"

#include "qpii/errors.hpp"

namespace qpii::ncalg {

namespace {

using P = NCPolynomial;

P g(Gen x) { return P::gen(x); }

Coefficient two_i_lambda() { return Coefficient(GaussianRational(0, 2)) * Coefficient::lambda(); }

P d_chi() { return (g(Gen::F2) - two_i_lambda()) * g(Gen::Chi) + g(Gen::F2) * g(Gen::Phi); }
P d_phi() { return g(Gen::F2) * g(Gen::Chi) + (g(Gen::F2) + two_i_lambda()) * g(Gen::Phi); }

P inverse_rule(Gen x, const P& dx) {
    const P inv = g(*inverse_of(x));
    return -(inv * dx * inv);
}

}  // namespace

DerivationTable DerivationTable::lax() {
    DerivationTable t;
    t.set(Gen::Z, P(Alphabet::full(), 1));
    t.set(Gen::F2, g(Gen::F2p));
    t.set(Gen::F2p, g(Gen::F2pp));
    return t;
}

DerivationTable DerivationTable::riccati() {
    DerivationTable t;
    t.set(Gen::Chi, d_chi());
    t.set(Gen::Phi, d_phi());
    t.set(Gen::ChiInv, inverse_rule(Gen::Chi, d_chi()));
    t.set(Gen::PhiInv, inverse_rule(Gen::Phi, d_phi()));
    return t;
}

DerivationTable DerivationTable::standard() {
    DerivationTable t = riccati();
    const DerivationTable l = lax();
    for (Gen x : {Gen::Z, Gen::F2, Gen::F2p}) t.set(x, *l.image(x));
    return t;
}

void DerivationTable::set(Gen x, NCPolynomial image) {
    images_[rank(x)] = image.with_alphabet(Alphabet::full());
}

const NCPolynomial* DerivationTable::image(Gen x) const {
    const auto& slot = images_[rank(x)];
    return slot ? &*slot : nullptr;
}

NCPolynomial derive(const NCPolynomial& p, const DerivationTable& table) {
    const Alphabet alphabet = p.alphabet();
    NCPolynomial out(alphabet);
    for (const auto& [word, coeff] : p.terms()) {
        for (std::size_t k = 0; k < word.size(); ++k) {
            const NCPolynomial* img = table.image(word[k]);
            if (!img)
                throw DerivationError("ncalg.derive",
                                      "no derivation entry for generator '" + std::string(gen_name(word[k])) + "'",
                                      nlohmann::ordered_json{{"generator", gen_name(word[k])}});
            const Word prefix(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(k));
            const Word suffix(word.begin() + static_cast<std::ptrdiff_t>(k) + 1, word.end());
            for (const auto& [iw, ic] : img->terms()) {
                Word nw = prefix;
                nw.insert(nw.end(), iw.begin(), iw.end());
                nw.insert(nw.end(), suffix.begin(), suffix.end());
                out.add_term(nw, coeff * ic);
            }
        }
    }
    return out;
}

}  // namespace qpii::ncalg
