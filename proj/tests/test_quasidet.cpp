#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "qpii/quasidet.hpp"

using namespace qpii;
using namespace qpii::quasidet;
using G = GaussianRational;
using ncalg::Rational;

namespace {

// Leibniz permutation-sum determinant; independent of the library's cofactor
// expansion and elimination.
G leibniz_det(const ExactScalarMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    G det(0);
    do {
        int inversions = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (perm[a] > perm[b]) ++inversions;
        G term(1);
        for (std::size_t r = 0; r < n; ++r) term *= m(r, perm[r]);
        det += inversions % 2 ? -term : term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

G rand_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
    return G(Rational(num(rng), den(rng)), Rational(0));
}

ExactScalarMatrix random_exact(std::mt19937_64& rng, std::size_t n) {
    ExactScalarMatrix m(ExactScalarCarrier{}, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = rand_rational(rng);
    return m;
}

ExactMatrix random_block(std::mt19937_64& rng, std::size_t d) {
    ExactMatrix b(d);
    for (auto& v : b.a) v = rand_rational(rng);
    return b;
}

ExactBlockMatrix random_exact_blocks(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    ExactBlockMatrix m(ExactMatrixCarrier{d}, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = random_block(rng, d);
    return m;
}

ComplexBlockMatrix random_complex_blocks(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> nd;
    ComplexBlockMatrix m(ComplexMatrixCarrier{d}, n);
    const auto dd = static_cast<Eigen::Index>(d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            Eigen::MatrixXcd b(dd, dd);
            for (Eigen::Index x = 0; x < dd; ++x)
                for (Eigen::Index y = 0; y < dd; ++y) b(x, y) = {nd(rng), nd(rng)};
            m(r, c) = b;
        }
    return m;
}

}  // namespace

TEST_CASE("2x2 expansion over noncommuting blocks") {
    std::mt19937_64 rng(3);
    const ExactBlockMatrix m = random_exact_blocks(rng, 2, 2);
    const auto a22inv = exact_inverse(m(1, 1));
    REQUIRE(a22inv);
    CHECK(quasideterminant_expand(m, 0, 0) == m(0, 0) - m(0, 1) * *a22inv * m(1, 0));
    const auto a11inv = exact_inverse(m(0, 0));
    REQUIRE(a11inv);
    CHECK(quasideterminant_expand(m, 1, 0) == m(1, 0) - m(1, 1) * *exact_inverse(m(0, 1)) * m(0, 0));
    CHECK(quasideterminant_via_inverse(m, 0, 0) == m(0, 0) - m(0, 1) * *a22inv * m(1, 0));
}

TEST_CASE("diagonal and identity matrices") {
    ExactScalarMatrix m(ExactScalarCarrier{}, 4);
    for (std::size_t k = 0; k < 4; ++k) m(k, k) = G(static_cast<long long>(k) + 2);
    for (std::size_t k = 0; k < 4; ++k) CHECK(quasideterminant_expand(m, k, k) == m(k, k));

    ComplexBlockMatrix id(ComplexMatrixCarrier{3}, 3);
    for (std::size_t k = 0; k < 3; ++k) id(k, k) = id.carrier().one();
    for (std::size_t k = 0; k < 3; ++k) CHECK(id.carrier().approx_equal(quasideterminant_via_inverse(id, k, k), id.carrier().one()));
}

TEST_CASE("commutative reduction: worked 2x2") {
    const ExactScalarMatrix m(ExactScalarCarrier{}, {{G(1), G(2)}, {G(3), G(4)}});
    CHECK(quasideterminant_expand(m, 0, 0) == G(Rational(-1, 2)));
    const ReductionCheck rc = commutative_reduction_check(m, 0, 0);
    CHECK(rc.holds());
    CHECK(*rc.cofactor_ratio == G(Rational(-1, 2)));
    CHECK(determinant_cofactor(m) == G(-2));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(commutative_reduction_check(m, i, j).holds());
}

TEST_CASE("commutative reduction: vacuous singular minor") {
    const ExactScalarMatrix m(ExactScalarCarrier{}, {{G(1), G(1)}, {G(1), G(0)}});
    CHECK(commutative_reduction_check(m, 0, 0).status == ReductionStatus::VacuousSingular);
    try {
        quasideterminant_expand(m, 0, 0);
        FAIL("expected NonInvertibleMinor");
    } catch (const NonInvertibleMinor& e) {
        CHECK(e.row() == 0);
        CHECK(e.col() == 0);
    }
}

TEST_CASE("cofactor determinant agrees with the permutation sum") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const ExactScalarMatrix m = random_exact(rng, 2 + t % 3);
        REQUIRE(determinant_cofactor(m) == leibniz_det(m));
    }
}

TEST_CASE("property: quasideterminant equals the signed cofactor ratio") {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + t % 3;
        const ExactScalarMatrix m = random_exact(rng, n);
        const G det = leibniz_det(m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const G minor_det = leibniz_det(m.minor(i, j));
                if (minor_det.is_zero()) continue;
                const G expected = ((i + j) % 2 ? -det : det) / minor_det;
                REQUIRE(quasideterminant_expand(m, i, j) == expected);
                REQUIRE(commutative_reduction_check(m, i, j).holds());
                ++checked;
            }
    }
    CHECK(checked > 500);
}

TEST_CASE("property: expansion and inverse characterization agree exactly over exact blocks") {
    std::mt19937_64 rng(29);
    int checked = 0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + t % 2;
        const ExactBlockMatrix m = random_exact_blocks(rng, n, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                ExactMatrix expanded;
                try {
                    expanded = quasideterminant_expand(m, i, j);
                } catch (const NonInvertibleMinor&) {
                    continue;  // outside the precondition
                }
                REQUIRE(expanded == quasideterminant_via_inverse(m, i, j));
                ++checked;
            }
    }
    CHECK(checked > 100);
}

TEST_CASE("property: expansion and inverse characterization agree over complex blocks") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 2 + t % 3;
        const ComplexBlockMatrix m = random_complex_blocks(rng, n, 3);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto a = quasideterminant_expand(m, i, j);
                const auto b = quasideterminant_via_inverse(m, i, j);
                REQUIRE(max_abs(a - b) <= 1e-9);
            }
    }
}

TEST_CASE("block inverse is a two-sided inverse") {
    std::mt19937_64 rng(37);
    const ExactBlockMatrix m = random_exact_blocks(rng, 3, 2);
    const ExactBlockMatrix inv = block_inverse(m);
    const auto& k = m.carrier();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            ExactMatrix left = k.zero(), right = k.zero();
            for (std::size_t t = 0; t < 3; ++t) {
                left = left + m(i, t) * inv(t, j);
                right = right + inv(i, t) * m(t, j);
            }
            const ExactMatrix expected = i == j ? k.one() : k.zero();
            CHECK(left == expected);
            CHECK(right == expected);
        }
}

TEST_CASE("enumeration covers n squared positions") {
    std::mt19937_64 rng(41);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto all = all_quasideterminants(random_exact(rng, n));
        CHECK(all.size() == n * n);
        for (std::size_t k = 0; k < all.size(); ++k) {
            CHECK(all[k].row == k / n);
            CHECK(all[k].col == k % n);
        }
    }
}

TEST_CASE("property: permutation equivariance") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 3;
        const ExactBlockMatrix m = random_exact_blocks(rng, n, 2);
        std::vector<std::size_t> pi(n), tau(n);
        std::iota(pi.begin(), pi.end(), 0);
        std::iota(tau.begin(), tau.end(), 0);
        std::shuffle(pi.begin(), pi.end(), rng);
        std::shuffle(tau.begin(), tau.end(), rng);
        ExactBlockMatrix p(m.carrier(), n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(pi[i], tau[j]) = m(i, j);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                REQUIRE(quasideterminant_expand(m, i, j) == quasideterminant_expand(p, pi[i], tau[j]));
    }
}

TEST_CASE("errors from the inverse path") {
    const ExactScalarMatrix singular(ExactScalarCarrier{}, {{G(1), G(1)}, {G(1), G(1)}});
    CHECK_THROWS_AS(quasideterminant_via_inverse(singular, 0, 0), NonInvertibleMatrix);
    const ExactScalarMatrix swap(ExactScalarCarrier{}, {{G(0), G(1)}, {G(1), G(0)}});
    CHECK_THROWS_AS(quasideterminant_via_inverse(swap, 0, 0), NonInvertibleEntry);
    CHECK(quasideterminant_via_inverse(swap, 0, 1) == G(1));
    CHECK_THROWS_AS(quasideterminant_expand(swap, 2, 0), ConfigurationError);
}

TEST_CASE("json input") {
    const auto scalar = parse_exact_scalar(nlohmann::json::parse(R"([["1", "2"], [3, "4"]])"));
    CHECK(quasideterminant_expand(scalar, 0, 0) == G(Rational(-1, 2)));
    const auto blocks = parse_exact_blocks(nlohmann::json::parse(R"([[[["1","0"],["0","1"]], [["0","1"],["1","0"]]],
                                                                      [[["2","0"],["0","3"]], [["1","1/2i"],["0","1"]]]])"));
    CHECK(blocks.carrier().d == 2);
    CHECK(blocks(1, 1)(0, 1) == G(Rational(0), Rational(1, 2)));
    const auto cx = parse_complex_blocks(nlohmann::json::parse(R"([[[[1, [0, 2]], ["1/2", 0]]]])"));
    CHECK(cx(0, 0)(0, 1) == std::complex<double>(0, 2));
    CHECK_THROWS_AS(parse_exact_scalar(nlohmann::json::parse(R"([["1", "2"]])")), ParseError);
    CHECK_THROWS_AS(parse_exact_scalar(nlohmann::json::parse(R"([[1.5]])")), ParseError);
}
