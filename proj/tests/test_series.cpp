#include "qgw/series.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace qgw;

namespace {

KClass coeff(int r, std::initializer_list<int> v) {
    KClass x(r);
    std::size_t i = 0;
    for (int c : v) x[i++] = Rational(c);
    return x;
}

} // namespace

TEST_CASE("geometric and binomial expansions") {
    const int r = 1;
    auto one = KClass::unit(r);
    auto H = KClass::h_power(r, 1);

    // (1 - q)^{-2} = 1 + 2q + 3q^2
    auto s = series_geom_power(1, 2, one, 2);
    CHECK(s[0] == one);
    CHECK(s[1] == Rational(2) * one);
    CHECK(s[2] == Rational(3) * one);

    // (1 - q^2 H)^{-1} = 1 + H q^2 + ...
    auto t = series_geom_power(2, 1, H, 2);
    CHECK(t[0] == one);
    CHECK(t[1].is_zero());
    CHECK(t[2] == H);

    // (1 - q H)^{-2} = 1 + 2H q + ...
    auto u = series_geom_power(1, 2, H, 1);
    CHECK(u[0] == one);
    CHECK(u[1] == Rational(2) * H);
}

TEST_CASE("multiplication agrees with a naive convolution up to T = 16") {
    const int r = 2, T = 16;
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-4, 4);

    auto random_series = [&] {
        QSeries<KClass> s(T, KClass(r));
        for (int k = 0; k <= T; ++k)
            for (int a = 0; a <= r; ++a) s[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)] = coef(rng);
        return s;
    };

    for (int it = 0; it < 5; ++it) {
        auto a = random_series(), b = random_series();
        auto prod = a * b;
        for (int k = 0; k <= T; ++k) {
            KClass want(r);
            for (int i = 0; i <= k; ++i)
                want += k_mul(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(k - i)]);
            CHECK(prod[static_cast<std::size_t>(k)] == want);
        }
    }
}

TEST_CASE("operations use the minimum truncation order") {
    const int r = 1;
    QSeries<KClass> a(5, KClass(r)), b(3, KClass(r));
    for (int k = 0; k <= 5; ++k) a[static_cast<std::size_t>(k)] = KClass::unit(r);
    for (int k = 0; k <= 3; ++k) b[static_cast<std::size_t>(k)] = KClass::unit(r);
    CHECK((a + b).order() == 3);
    CHECK((a * b).order() == 3);
    CHECK(coeff(r, {2, 0}) == (a + b)[0]);
}
