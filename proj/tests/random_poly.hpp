#pragma once

#include <random>
#include <vector>

#include "qpii/ncalg.hpp"

namespace qpii::testing {

/// Random polynomial over `gens` with up to `max_terms` terms of up to
/// `max_len` generators and small Gaussian-rational / central coefficients.
inline ncalg::NCPolynomial random_polynomial(std::mt19937_64& rng, const std::vector<ncalg::Gen>& gens,
                                             ncalg::Alphabet alphabet, int max_terms = 6, int max_len = 4) {
    using namespace ncalg;
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> cexp(0, 2);
    std::uniform_int_distribution<int> lexp(-1, 2);

    NCPolynomial p(alphabet);
    const int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Word w;
        const int l = len(rng);
        for (int k = 0; k < l; ++k) w.push_back(gens[pick(rng)]);
        CentralMonomial m;
        m[Central::Hbar] = cexp(rng);
        m[Central::C] = cexp(rng) / 2;
        m[Central::Lambda] = lexp(rng);
        GaussianRational v(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        p.add_term(w, Coefficient::monomial(v, m));
    }
    return p;
}

}  // namespace qpii::testing
