#include "qpii/ncalg/rewrite.hpp"

#include "qpii/errors.hpp"

namespace qpii::ncalg {

namespace {

Coefficient half_i_hbar() {
    return Coefficient(GaussianRational(0, Rational(1, 2))) * Coefficient::hbar();
}

NCPolynomial w(std::initializer_list<Gen> gens, const Coefficient& c = 1) {
    return NCPolynomial::word(Word(gens), c);
}

// Applies the rule at position k of `word` and returns the resulting terms.
NCPolynomial rewrite_at(const Word& word, const Coefficient& coeff, std::size_t k, const RewriteRule& rule,
                        Alphabet alphabet) {
    NCPolynomial out(alphabet);
    Word prefix(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(k));
    Word suffix(word.begin() + static_cast<std::ptrdiff_t>(k) + 2, word.end());
    for (const auto& [rw, rc] : rule.rhs.terms()) {
        Word nw = prefix;
        nw.insert(nw.end(), rw.begin(), rw.end());
        nw.insert(nw.end(), suffix.begin(), suffix.end());
        out.add_term(nw, coeff * rc);
    }
    return out;
}

std::optional<std::size_t> find_redex(const Word& word, const RewriteSystem& rules, Strategy strategy) {
    if (word.size() < 2) return std::nullopt;
    const std::size_t last = word.size() - 1;
    for (std::size_t n = 0; n < last; ++n) {
        const std::size_t k = strategy == Strategy::Leftmost ? n : last - 1 - n;
        if (rules.match(word[k], word[k + 1])) return k;
    }
    return std::nullopt;
}

}  // namespace

RewriteSystem::RewriteSystem(std::vector<RewriteRule> rules) : rules_(std::move(rules)) {
    WordLess less;
    for (std::size_t a = 0; a < rules_.size(); ++a) {
        const auto& r = rules_[a];
        const Word lhs{r.left, r.right};
        for (const auto& [word, c] : r.rhs.terms()) {
            if (!less(word, lhs))
                throw RewriteOrderError("ncalg.RewriteSystem",
                                        "rule '" + r.label + "': right-hand side word '" + word_to_string(word) +
                                            "' is not smaller than '" + word_to_string(lhs) + "'");
        }
        for (std::size_t b = 0; b < a; ++b)
            if (rules_[b].left == r.left && rules_[b].right == r.right)
                throw ConfigurationError("ncalg.RewriteSystem",
                                         "duplicate left-hand side '" + word_to_string(lhs) + "'");
    }
}

RewriteSystem RewriteSystem::quantum(bool with_z_f2prime) {
    std::vector<RewriteRule> rules;
    rules.push_back({Gen::Z, Gen::F2, w({Gen::F2, Gen::Z}) + w({Gen::F2}, half_i_hbar()), "z f2"});
    rules.push_back({Gen::F2p, Gen::F2,
                     w({Gen::F2, Gen::F2p}) + w({}, Coefficient(-4) * Coefficient::lambda() * Coefficient::hbar()),
                     "f2' f2"});
    if (with_z_f2prime)
        rules.push_back({Gen::Z, Gen::F2p, w({Gen::F2p, Gen::Z}) + w({Gen::F2p}, half_i_hbar()), "z f2'"});
    return RewriteSystem(std::move(rules));
}

RewriteSystem RewriteSystem::symmetric() {
    const Coefficient two_lh = Coefficient(2) * Coefficient::lambda() * Coefficient::hbar();
    std::vector<RewriteRule> rules;
    rules.push_back({Gen::F0, Gen::F2, w({Gen::F2, Gen::F0}) + w({}, -two_lh), "f0 f2"});
    rules.push_back({Gen::F1, Gen::F2, w({Gen::F2, Gen::F1}) + w({}, two_lh), "f1 f2"});
    return RewriteSystem(std::move(rules));
}

RewriteSystem RewriteSystem::inverse_pairs() {
    std::vector<RewriteRule> rules;
    for (Gen g : {Gen::Chi, Gen::Phi}) {
        const Gen inv = *inverse_of(g);
        rules.push_back({g, inv, w({}), std::string(gen_name(g)) + " " + std::string(gen_name(inv))});
        rules.push_back({inv, g, w({}), std::string(gen_name(inv)) + " " + std::string(gen_name(g))});
    }
    return RewriteSystem(std::move(rules));
}

RewriteSystem RewriteSystem::commutator_substitution(const Coefficient& value, const std::string& label) {
    return RewriteSystem({{Gen::F2p, Gen::F2, w({Gen::F2, Gen::F2p}) + w({}, value), label}});
}

const RewriteRule* RewriteSystem::match(Gen left, Gen right) const {
    for (const auto& r : rules_)
        if (r.left == left && r.right == right) return &r;
    return nullptr;
}

RewriteSystem RewriteSystem::merged(const RewriteSystem& other) const {
    std::vector<RewriteRule> all = rules_;
    all.insert(all.end(), other.rules_.begin(), other.rules_.end());
    return RewriteSystem(std::move(all));
}

NCPolynomial normal_form(const NCPolynomial& p, const RewriteSystem& rules, Strategy strategy,
                         NormalFormStats* stats) {
    // Always expand the largest pending word: rewrites only produce smaller
    // words, so equal words merge before they are reduced again.
    NCPolynomial pending = p;
    NCPolynomial done(p.alphabet());
    std::size_t steps = 0;
    while (!pending.is_zero()) {
        auto last = std::prev(pending.terms().end());
        const Word word = last->first;
        const Coefficient coeff = last->second;
        pending.add_term(word, -coeff);
        if (auto k = find_redex(word, rules, strategy)) {
            pending += rewrite_at(word, coeff, *k, *rules.match(word[*k], word[*k + 1]), p.alphabet());
            ++steps;
        } else {
            done.add_term(word, coeff);
        }
    }
    if (stats) stats->steps = steps;
    return done;
}

bool is_normal(const NCPolynomial& p, const RewriteSystem& rules) {
    for (const auto& [word, c] : p.terms())
        if (find_redex(word, rules, Strategy::Leftmost)) return false;
    return true;
}

std::vector<CriticalPair> unresolved_critical_pairs(const RewriteSystem& rules) {
    std::vector<CriticalPair> out;
    const Alphabet all = Alphabet::full();
    for (const auto& r1 : rules.rules()) {
        for (const auto& r2 : rules.rules()) {
            if (r1.right != r2.left) continue;
            const Word overlap{r1.left, r1.right, r2.right};
            NCPolynomial left = normal_form(rewrite_at(overlap, 1, 0, r1, all), rules);
            NCPolynomial right = normal_form(rewrite_at(overlap, 1, 1, r2, all), rules);
            if (!(left == right)) out.push_back({overlap, std::move(left), std::move(right)});
        }
    }
    return out;
}

}  // namespace qpii::ncalg
