#include "qpii/laxderive.hpp"

#include "qpii/errors.hpp"

namespace qpii::laxderive {

using namespace ncalg;
using json = nlohmann::ordered_json;

namespace {

const Coefficient kI = Coefficient::i();

NCPolynomial constant(const Alphabet& a, const Coefficient& c) { return NCPolynomial(a, c); }

Coefficient drop_hbar(const Coefficient& c) { return c.substitute(Central::Hbar, 0); }

NCPolynomial map_entries_lambda(const NCPolynomial& p) {
    NCPolynomial out(p.alphabet());
    for (const auto& [w, c] : p.terms()) out.add_term(w, c.derivative_lambda());
    return out;
}

bool is_hbar_multiple(const Coefficient& c) {
    return c.terms().size() == 1 && c.terms().begin()->first == Coefficient::hbar().terms().begin()->first;
}

bool has_eigenfunction_gens(const NCPolynomial& p) {
    for (Gen g : {Gen::Chi, Gen::Phi, Gen::ChiInv, Gen::PhiInv, Gen::Delta})
        if (p.contains(g)) return true;
    return false;
}

json matrix_pair_json(const Matrix2& a, const Matrix2& b) {
    json j;
    j["A"] = a.to_json();
    j["B"] = b.to_json();
    return j;
}

}  // namespace

// ---------------------------------------------------------------- Matrix2

Matrix2::Matrix2(Alphabet alphabet)
    : alphabet_(alphabet),
      e_{NCPolynomial(alphabet), NCPolynomial(alphabet), NCPolynomial(alphabet), NCPolynomial(alphabet)} {}

std::size_t Matrix2::index(int row, int col) {
    if (row < 1 || row > 2 || col < 1 || col > 2)
        throw ConfigurationError("laxderive.Matrix2", "index out of range");
    return static_cast<std::size_t>((row - 1) * 2 + (col - 1));
}

Matrix2 Matrix2::identity(Alphabet a) {
    Matrix2 m(a);
    m(1, 1) = constant(a, 1);
    m(2, 2) = constant(a, 1);
    return m;
}

Matrix2 Matrix2::sigma1(Alphabet a) {
    Matrix2 m(a);
    m(1, 2) = constant(a, 1);
    m(2, 1) = constant(a, 1);
    return m;
}

Matrix2 Matrix2::sigma2(Alphabet a) {
    Matrix2 m(a);
    m(1, 2) = constant(a, -kI);
    m(2, 1) = constant(a, kI);
    return m;
}

Matrix2 Matrix2::sigma3(Alphabet a) {
    Matrix2 m(a);
    m(1, 1) = constant(a, 1);
    m(2, 2) = constant(a, -1);
    return m;
}

Matrix2& Matrix2::operator+=(const Matrix2& o) {
    for (std::size_t k = 0; k < 4; ++k) e_[k] += o.e_[k];
    return *this;
}

Matrix2& Matrix2::operator-=(const Matrix2& o) {
    for (std::size_t k = 0; k < 4; ++k) e_[k] -= o.e_[k];
    return *this;
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    Matrix2 m(a.alphabet_);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) m(i, j) = nc_mul(a(i, 1), b(1, j)) + nc_mul(a(i, 2), b(2, j));
    return m;
}

Matrix2 operator*(const NCPolynomial& s, const Matrix2& m) {
    Matrix2 out(m.alphabet_);
    for (std::size_t k = 0; k < 4; ++k) out.e_[k] = nc_mul(s, m.e_[k]);
    return out;
}

Matrix2 operator*(const Coefficient& s, Matrix2 m) {
    for (auto& e : m.e_) e *= s;
    return m;
}

bool Matrix2::is_zero() const {
    for (const auto& e : e_)
        if (!e.is_zero()) return false;
    return true;
}

json Matrix2::to_json() const {
    json rows = json::array();
    for (int i = 1; i <= 2; ++i) rows.push_back(json::array({to_text((*this)(i, 1)), to_text((*this)(i, 2))}));
    return rows;
}

// ---------------------------------------------------------------- Lax pair

LaxPair build_lax(const LaxOptions& options) {
    const Alphabet a = Alphabet::lax();
    const NCPolynomial f2 = NCPolynomial::gen(Gen::F2, a);
    const NCPolynomial f2p = NCPolynomial::gen(Gen::F2p, a);
    const NCPolynomial z = NCPolynomial::gen(Gen::Z, a);
    const Coefficient lambda = Coefficient::lambda();

    const NCPolynomial s3 = kI * Coefficient(8) * lambda * lambda + kI * (f2 * f2) - Coefficient(2) * kI * z;
    const NCPolynomial s1 =
        Coefficient(GaussianRational(Rational(1, 4))) * Coefficient::c() * Coefficient::lambda(-1) -
        Coefficient(4) * lambda * f2;

    LaxPair lp{Matrix2(a), Matrix2(a)};
    lp.A = s3 * Matrix2::sigma3(a) + f2p * Matrix2::sigma2(a) + s1 * Matrix2::sigma1(a);
    if (options.quantum) lp.A += (kI * Coefficient::hbar()) * Matrix2::sigma2(a);

    lp.B = Coefficient(-2) * kI * lambda * Matrix2::sigma3(a) + f2 * Matrix2::sigma1(a) + f2 * Matrix2::identity(a);
    return lp;
}

Matrix2 derivative_z(const Matrix2& m) {
    const DerivationTable table = DerivationTable::lax();
    Matrix2 out(m.alphabet());
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) out(i, j) = derive(m(i, j), table);
    return out;
}

Matrix2 derivative_lambda(const Matrix2& m) {
    Matrix2 out(m.alphabet());
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) out(i, j) = map_entries_lambda(m(i, j));
    return out;
}

Matrix2 matrix_commutator(const Matrix2& b, const Matrix2& a) { return b * a - a * b; }

Matrix2 zero_curvature_residual(const Matrix2& A, const Matrix2& B) {
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            if (has_eigenfunction_gens(A(i, j)) || has_eigenfunction_gens(B(i, j)))
                throw DomainError("laxderive.zero_curvature_residual",
                                  "Lax entries may only use f2, f2', f2'', z",
                                  {{"row", i}, {"col", j}});
        }
    }
    return derivative_z(A) - derivative_lambda(B) - matrix_commutator(B, A);
}

// ---------------------------------------------------------------- logs

bool DerivationLog::has_anchor(const std::string& anchor) const {
    for (const auto& s : steps)
        if (s.anchor == anchor) return true;
    return false;
}

json DerivationLog::to_json() const {
    json arr = json::array();
    for (const auto& s : steps) {
        json j;
        j["step"] = s.name;
        j["anchor"] = s.anchor;
        j["before"] = s.before;
        j["after"] = s.after;
        if (!s.note.empty()) j["note"] = s.note;
        arr.push_back(std::move(j));
    }
    return arr;
}

// ---------------------------------------------------------------- targets

NCPolynomial qpii_target_ode() {
    const Alphabet a = Alphabet::lax();
    const NCPolynomial f2 = NCPolynomial::gen(Gen::F2, a);
    const NCPolynomial z = NCPolynomial::gen(Gen::Z, a);
    return NCPolynomial::gen(Gen::F2pp, a) - Coefficient(2) * (f2 * f2 * f2) +
           Coefficient(2) * anticommutator(z, f2) - Coefficient::c();
}

NCPolynomial qpii_target_constraint() {
    const Alphabet a = Alphabet::lax();
    const NCPolynomial f2 = NCPolynomial::gen(Gen::F2, a);
    const NCPolynomial z = NCPolynomial::gen(Gen::Z, a);
    return commutator(z, f2) - Coefficient(GaussianRational(0, Rational(1, 2))) * Coefficient::hbar() * f2;
}

NCPolynomial riccati_target() {
    const Alphabet a = Alphabet::riccati();
    const NCPolynomial f2 = NCPolynomial::gen(Gen::F2, a);
    const NCPolynomial d = NCPolynomial::gen(Gen::Delta, a);
    return Coefficient(-4) * kI * Coefficient::lambda() * d + f2 + commutator(f2, d) - d * f2 * d;
}

// ---------------------------------------------------------------- symmetric form

NCPolynomial verify_symmetric_relations() {
    const Alphabet a = Alphabet::symmetric();
    const NCPolynomial f0 = NCPolynomial::gen(Gen::F0, a);
    const NCPolynomial f1 = NCPolynomial::gen(Gen::F1, a);
    const NCPolynomial f2 = NCPolynomial::gen(Gen::F2, a);
    return normal_form(commutator(f1 - f0, f2), RewriteSystem::symmetric());
}

NCPolynomial symmetric_commutator_f0_f2() {
    const Alphabet a = Alphabet::symmetric();
    return normal_form(commutator(NCPolynomial::gen(Gen::F0, a), NCPolynomial::gen(Gen::F2, a)),
                       RewriteSystem::symmetric());
}

// ---------------------------------------------------------------- QPII

namespace {

struct Attempt {
    std::string name;
    Coefficient value;
    std::optional<GaussianRational> z_rule;  // κ in z·f2 -> f2·z + κħ f2
};

RewriteSystem attempt_rules(const Attempt& at, bool quantum) {
    const Coefficient v = quantum ? at.value : drop_hbar(at.value);
    RewriteSystem rules = RewriteSystem::commutator_substitution(v, at.name);
    if (at.z_rule) {
        const Alphabet a = Alphabet::full();
        const Coefficient k = quantum ? Coefficient(*at.z_rule) * Coefficient::hbar() : Coefficient(0);
        const NCPolynomial rhs = NCPolynomial::gen(Gen::F2, a) * NCPolynomial::gen(Gen::Z, a) +
                                 k * NCPolynomial::gen(Gen::F2, a);
        rules = rules.merged(RewriteSystem({{Gen::Z, Gen::F2, rhs, "z f2 orientation"}}));
    }
    return rules;
}

NCPolynomial monic_in(const NCPolynomial& p, Gen g, const char* where) {
    const Coefficient lead = p.coefficient({g});
    if (!lead.is_scalar() || lead.is_zero())
        throw DerivationError(where, "leading coefficient is not a nonzero scalar",
                              {{"entry", to_text(p)}, {"generator", std::string(gen_name(g))}});
    return divide(p, lead.scalar());
}

}  // namespace

QpiiAnalysis analyze_qpii(const LaxOptions& options) {
    QpiiAnalysis out;
    const Alphabet lax = Alphabet::lax();
    const auto [A, B] = build_lax(options);

    out.log.add({"Lax pair", "RDTa", nullptr, matrix_pair_json(A, B),
                 options.quantum ? "" : "hbar set to zero"});

    const Matrix2 Az = derivative_z(A);
    out.log.add({"z-derivative of A", "V1", A.to_json(), Az.to_json(), ""});

    const Matrix2 Bl = derivative_lambda(B);
    out.log.add({"lambda-derivative of B", "V2", B.to_json(), Bl.to_json(), ""});

    const Matrix2 BA = matrix_commutator(B, A);
    out.log.add({"commutator BA - AB", "V3", matrix_pair_json(A, B), BA.to_json(), ""});

    out.residual = zero_curvature_residual(A, B);
    out.log.add({"zero-curvature residual A_z - B_lambda - (BA - AB)", "RM1", nullptr, out.residual.to_json(),
                 "free form, no relations applied"});

    // Diagonal: normalise so that z·f2 has coefficient 1.
    const NCPolynomial& r11 = out.residual(1, 1);
    const Coefficient lead = r11.coefficient({Gen::Z, Gen::F2});
    if (!lead.is_scalar() || lead.is_zero())
        throw DerivationError("laxderive.analyze_qpii", "diagonal residual has no z f2 term",
                              {{"entry", to_text(r11)}});
    out.constraint = divide(r11, lead.scalar());
    const NCPolynomial comm = commutator(NCPolynomial::gen(Gen::Z, lax), NCPolynomial::gen(Gen::F2, lax));
    const NCPolynomial rest = out.constraint - comm;
    out.constraint_k = GaussianRational(0);
    if (rest.is_zero()) {
        out.constraint_shape = "commutator";
    } else if (rest.size() == 1 && is_hbar_multiple(rest.coefficient({Gen::F2}))) {
        out.constraint_shape = "commutator - k*hbar*f2";
        out.constraint_k = -rest.coefficient({Gen::F2}).terms().begin()->second;
    } else if (rest.is_central() && is_hbar_multiple(rest.coefficient({}))) {
        out.constraint_shape = "commutator - k*hbar";
        out.constraint_k = -rest.coefficient({}).terms().begin()->second;
    } else {
        out.constraint_shape = "other";
    }
    const GaussianRational half_i(0, Rational(1, 2));
    if (!options.quantum && out.constraint_shape == "commutator")
        out.constraint_matches = "z f2 = f2 z (hbar = 0)";
    else if (out.constraint_shape == "commutator - k*hbar*f2" && out.constraint_k == half_i)
        out.constraint_matches = "z f2 - f2 z = 1/2 i hbar f2";
    else if (out.constraint_shape == "commutator - k*hbar*f2" && out.constraint_k == -half_i)
        out.constraint_matches = "[f2, z] = 1/2 i hbar f2";
    else
        out.constraint_matches = "none";

    json constraint_after;
    constraint_after["constraint"] = to_text(out.constraint);
    constraint_after["shape"] = out.constraint_shape;
    constraint_after["k"] = out.constraint_k.to_string();
    constraint_after["matches"] = out.constraint_matches;
    constraint_after["entry_22_is_negated_11"] = (out.residual(2, 2) == -r11);
    out.log.add({"diagonal constraint extraction", "L4", json::array({to_text(r11), to_text(out.residual(2, 2))}),
                 constraint_after, "normalised to coefficient 1 on z f2"});

    // Off-diagonal: substitute a value for [f2', f2] and compare both entries.
    const Coefficient lambda_hbar = Coefficient::lambda() * Coefficient::hbar();
    const NCPolynomial sym = verify_symmetric_relations();
    out.log.add({"symmetric-form commutator [f1 - f0, f2]", "L6", nullptr, to_text(sym), ""});

    std::vector<Attempt> attempts;
    attempts.push_back({"printed [f2', f2] = -4 lambda hbar", Coefficient(-4) * lambda_hbar, std::nullopt});
    if (sym.is_central() && sym.coefficient({}) != Coefficient(-4) * lambda_hbar)
        attempts.push_back({"[f2', f2] from the symmetric relations", sym.coefficient({}), std::nullopt});
    const std::size_t base = attempts.size();
    for (std::size_t k = 0; k < base; ++k) {
        attempts.push_back({attempts[k].name + ", z f2 - f2 z = 1/2 i hbar f2", attempts[k].value, half_i});
        attempts.push_back({attempts[k].name + ", [f2, z] = 1/2 i hbar f2", attempts[k].value, -half_i});
    }

    for (const auto& at : attempts) {
        const RewriteSystem rules = attempt_rules(at, options.quantum);
        CommutatorConvention conv;
        conv.name = at.name;
        conv.value = options.quantum ? at.value : drop_hbar(at.value);
        const NCPolynomial r12 = normal_form(out.residual(1, 2).with_alphabet(Alphabet::full()), rules)
                                     .with_alphabet(lax);
        const NCPolynomial r21 = normal_form(out.residual(2, 1).with_alphabet(Alphabet::full()), rules)
                                     .with_alphabet(lax);
        conv.ode_from_12 = monic_in(r12, Gen::F2pp, "laxderive.analyze_qpii");
        conv.ode_from_21 = monic_in(r21, Gen::F2pp, "laxderive.analyze_qpii");
        conv.remainder = conv.ode_from_12 - conv.ode_from_21;

        json before = json::array({to_text(out.residual(1, 2)), to_text(out.residual(2, 1))});
        json after;
        after["value"] = conv.value.to_string();
        after["entry_12_over_f2pp_coefficient"] = to_text(conv.ode_from_12);
        after["entry_21_over_f2pp_coefficient"] = to_text(conv.ode_from_21);
        after["remainder"] = to_text(conv.remainder);
        after["consistent"] = conv.consistent();
        out.log.add({"substitute " + conv.name, "L7", before, after, ""});
        if (conv.consistent() && !out.accepted) out.accepted = out.conventions.size();
        out.conventions.push_back(std::move(conv));
    }

    json verdict;
    if (out.accepted) {
        const auto& conv = out.conventions[*out.accepted];
        verdict["convention"] = conv.name;
        verdict["ode"] = to_text(conv.ode_from_21);
        verdict["constraint"] = to_text(out.constraint);
        out.log.add({"result system", "L8", nullptr, verdict, ""});
    } else {
        verdict["convention"] = nullptr;
        verdict["entry_sum_12_plus_21"] = to_text(out.residual(1, 2) + out.residual(2, 1));
        out.log.add({"result system", "L8", nullptr, verdict,
                     "no convention makes the off-diagonal entries agree; entry (1,2) + entry (2,1) is central and "
                     "nonzero, so no relation among f2, f2', f2'', z can remove it"});
    }
    return out;
}

json QpiiAnalysis::to_json() const {
    json j;
    j["residual"] = residual.to_json();
    j["constraint"] = to_text(constraint);
    j["constraint_shape"] = constraint_shape;
    j["constraint_k"] = constraint_k.to_string();
    j["constraint_matches"] = constraint_matches;
    json convs = json::array();
    for (const auto& c : conventions) {
        json cj;
        cj["name"] = c.name;
        cj["value"] = c.value.to_string();
        cj["ode_from_12"] = to_text(c.ode_from_12);
        cj["ode_from_21"] = to_text(c.ode_from_21);
        cj["remainder"] = to_text(c.remainder);
        cj["consistent"] = c.consistent();
        convs.push_back(std::move(cj));
    }
    j["conventions"] = convs;
    j["accepted"] = accepted ? json(conventions[*accepted].name) : json(nullptr);
    j["report"] = log.to_json();
    return j;
}

DerivedSystem derive_qpii(const LaxOptions& options) {
    QpiiAnalysis an = analyze_qpii(options);
    if (!an.accepted) {
        json details;
        json rem = json::array();
        for (const auto& c : an.conventions) rem.push_back({{"convention", c.name}, {"remainder", to_text(c.remainder)}});
        details["remainders"] = rem;
        details["constraint"] = to_text(an.constraint);
        details["constraint_matches"] = an.constraint_matches;
        details["report"] = an.log.to_json();
        throw NonVanishingRemainder("laxderive.derive_qpii",
                                    "off-diagonal residual entries do not reduce to one polynomial", details);
    }
    const auto& conv = an.conventions[*an.accepted];
    return {conv.ode_from_21, an.constraint, conv.name, std::move(an.log)};
}

json DerivedSystem::to_json() const {
    json j;
    j["ode"] = to_text(ode);
    j["constraint"] = to_text(constraint);
    j["convention"] = convention;
    j["report"] = report.to_json();
    return j;
}

// ---------------------------------------------------------------- Riccati

RiccatiDerivation riccati_derive_report() {
    const Alphabet a = Alphabet::riccati();
    const NCPolynomial chi = NCPolynomial::gen(Gen::Chi, a);
    const NCPolynomial phi_inv = NCPolynomial::gen(Gen::PhiInv, a);
    RiccatiDerivation out;

    const NCPolynomial delta = chi * phi_inv;
    out.report.add({"substitute Delta = chi phi^-1", "NCQPIIe", nullptr, to_text(delta), ""});

    const NCPolynomial raw = derive(delta, DerivationTable::riccati());
    out.report.add({"differentiate with the linear system", "NCQPIIc", to_text(delta), to_text(raw),
                    "chi' and phi' from the linear system, (phi^-1)' = -phi^-1 phi' phi^-1"});

    const NCPolynomial cancelled = normal_form(raw, RewriteSystem::inverse_pairs());
    out.report.add({"cancel inverse pairs", "NCQPIId", to_text(raw), to_text(cancelled), ""});

    const RewriteSystem collapse({{Gen::Chi, Gen::PhiInv, NCPolynomial::gen(Gen::Delta, a), "chi phi^-1 -> Delta"}});
    out.result = normal_form(cancelled, collapse);
    for (Gen g : {Gen::Chi, Gen::Phi, Gen::ChiInv, Gen::PhiInv}) {
        if (out.result.contains(g))
            throw DerivationError("laxderive.riccati_derive", "could not eliminate the eigenfunctions",
                                  {{"generator", std::string(gen_name(g))}, {"residual", to_text(out.result)}});
    }
    out.report.add({"collapse chi phi^-1 to Delta", "NCQPIIe", to_text(cancelled), to_text(out.result), ""});

    const NCPolynomial f2 = NCPolynomial::gen(Gen::F2, a);
    const NCPolynomial d = NCPolynomial::gen(Gen::Delta, a);
    out.reference = Coefficient(-4) * kI * d + f2 + commutator(f2, d) - d * f2 * d;
    const NCPolynomial diff = out.result - out.reference;
    json after;
    after["printed"] = to_text(out.reference);
    after["computed"] = to_text(out.result);
    after["computed_minus_printed"] = to_text(diff);
    out.report.add({"compare with the printed Riccati form", "NCQPIIf", nullptr, after,
                    diff.is_zero() ? "" : "printed linear term -4i Delta lacks the factor lambda"});
    return out;
}

NCPolynomial riccati_derive() { return riccati_derive_report().result; }

json RiccatiDerivation::to_json() const {
    json j;
    j["result"] = to_text(result);
    j["printed"] = to_text(reference);
    j["lambda_discrepancy"] = result != reference;
    j["report"] = report.to_json();
    return j;
}

}  // namespace qpii::laxderive
