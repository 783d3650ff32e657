#include "qpii/ncalg/text.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "qpii/errors.hpp"

namespace qpii::ncalg {

namespace {

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] void fail(const std::string& msg) { throw ParseError("ncalg.parse_polynomial", msg); }

CentralMonomial parse_central(const std::vector<std::string>& toks, std::size_t from) {
    CentralMonomial m;
    for (std::size_t k = from; k < toks.size(); ++k) {
        const auto& t = toks[k];
        const auto caret = t.find('^');
        if (caret == std::string::npos) fail("expected symbol^exponent, got '" + t + "'");
        const std::string sym = t.substr(0, caret);
        int e = 0;
        const char* first = t.data() + caret + 1;
        const char* last = t.data() + t.size();
        auto [ptr, ec] = std::from_chars(first, last, e);
        if (ec != std::errc() || ptr != last) fail("bad exponent in '" + t + "'");
        bool found = false;
        for (int s = 0; s < kCentralCount; ++s) {
            if (central_name(static_cast<Central>(s)) == sym) {
                m.exp[s] += e;
                found = true;
            }
        }
        if (!found) fail("unknown central symbol '" + sym + "'");
    }
    return m;
}

}  // namespace

std::string to_text(const NCPolynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [word, coeff] : p.terms()) {
        for (const auto& [m, v] : coeff.terms()) {
            if (!out.empty()) out += " + ";
            out += Coefficient::monomial(v, m).to_string();
            if (!word.empty()) out += " * " + word_to_string(word);
        }
    }
    return out;
}

NCPolynomial parse_polynomial(std::string_view text, Alphabet alphabet) {
    NCPolynomial p(alphabet);
    std::string_view rest = text;
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    while (!rest.empty() && rest.back() == ' ') rest.remove_suffix(1);
    if (rest == "0") return p;
    if (rest.empty()) fail("empty polynomial");

    // Terms begin with '('; split at " + (" boundaries outside parentheses.
    std::vector<std::string_view> terms;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < rest.size(); ++k) {
        const char ch = rest[k];
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && rest.substr(k, 4) == " + (") {
            terms.push_back(rest.substr(start, k - start));
            start = k + 3;
        }
    }
    terms.push_back(rest.substr(start));

    for (std::string_view term : terms) {
        if (term.empty() || term.front() != '(') fail("term must start with '(': '" + std::string(term) + "'");
        const auto close = term.find(')');
        if (close == std::string_view::npos) fail("unbalanced parenthesis in '" + std::string(term) + "'");
        const GaussianRational value = GaussianRational::parse(term.substr(0, close + 1));
        std::string_view tail = term.substr(close + 1);
        std::string_view central = tail;
        std::string_view word_part;
        const auto star = tail.find(" * ");
        if (star != std::string_view::npos) {
            central = tail.substr(0, star);
            word_part = tail.substr(star + 3);
        }
        const CentralMonomial m = parse_central(split_ws(central), 0);
        Word word;
        for (const auto& tok : split_ws(word_part)) {
            auto g = parse_gen(tok);
            if (!g) fail("unknown generator '" + tok + "'");
            word.push_back(*g);
        }
        if (star != std::string_view::npos && word.empty()) fail("empty word after '*'");
        p.add_term(word, Coefficient::monomial(value, m));
    }
    return p;
}

}  // namespace qpii::ncalg
