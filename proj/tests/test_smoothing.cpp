#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "congcount/smoothing.hpp"
#include "oracles.hpp"

using namespace congcount;
using Catch::Approx;

namespace {

GeneratorCtx make_ctx(uint64_t p) { return find_primitive_root(PrimeField(p)); }

Rational rat(uint64_t n) { return Rational::from_int(static_cast<int64_t>(n)); }

bool brackets(const SandwichCounts& sw, uint64_t count) {
    // integer comparison throughout: J' <= J * divisor <= J''
    const auto cd = static_cast<unsigned __int128>(count) * sw.divisor;
    return sw.j_prime <= cd && cd <= sw.j_dprime;
}

} // namespace

TEST_CASE("exact rationals at full width", "[smoothing]") {
    // numerators past int64: count * p bookkeeping at the modulus limit
    const __int128 big_p = (static_cast<__int128>(1) << 61) - 1;
    const Rational main(static_cast<__int128>(123456789) * 987654321 * 4096, big_p);
    const Rational count = Rational::from_int(216499);
    const Rational err = (count - main).abs();
    // cross-multiplied identity: err * p = |count * p - num|
    CHECK(err.den == main.den);
    CHECK(err.num == (count.num * big_p - main.num < 0 ? main.num - count.num * big_p
                                                       : count.num * big_p - main.num));
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(-6, 4) == Rational(3, -2));
    CHECK(Rational(1, 3) < Rational(2, 5));
    CHECK(detail::i128_str(main.num) == "499436057037354061824");
    CHECK(detail::i128_parse("499436057037354061824") == main.num);
    CHECK(detail::i128_parse("-42") == -42);
    CHECK_THROWS_AS(detail::i128_parse("12x"), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    // products past 2^126 refuse rather than wrap
    const Rational huge(static_cast<__int128>(1) << 100, 1);
    CHECK_THROWS_AS(huge * huge, std::overflow_error);
}

TEST_CASE("choose_params_thm1", "[smoothing]") {
    SECTION("small branch halves") {
        const auto prm = choose_params_thm1(101, 50, 50); // NK = 2500 < 9 * 101^{3/2}
        CHECK(prm.branch == Branch::SMALL);
        CHECK(prm.n1 == 25);
        CHECK(prm.k1 == 25);
        CHECK_FALSE(prm.epsilon.has_value());
    }
    SECTION("large branch uses epsilon") {
        const auto prm = choose_params_thm1(101, 100, 100); // NK = 10^4 > 9135.3
        CHECK(prm.branch == Branch::LARGE);
        REQUIRE(prm.epsilon.has_value());
        CHECK(*prm.epsilon == Approx(0.31859652191).epsilon(1e-9)); // 101^{3/4} / 100
        CHECK(prm.n1 == 32);
        CHECK(prm.k1 == 32);
    }
    SECTION("floor guard") {
        const auto prm = choose_params_thm1(5, 1, 1);
        CHECK(prm.branch == Branch::SMALL);
        CHECK(prm.n1 == 1);
        CHECK(prm.k1 == 1);
    }
    SECTION("large-branch admissibility") {
        std::mt19937_64 rng(404);
        const auto primes = primes_in_range(101, 499);
        int seen = 0;
        while (seen < 50) {
            const uint64_t p = primes[rng() % primes.size()];
            const uint64_t N = 1 + rng() % (p - 1), K = 1 + rng() % (p - 1);
            const auto nk2 = static_cast<unsigned __int128>(N) * K * N * K;
            if (nk2 <= 81 * static_cast<unsigned __int128>(p) * p * p) continue;
            ++seen;
            const auto prm = choose_params_thm1(p, N, K);
            REQUIRE(prm.branch == Branch::LARGE);
            const double eps = *prm.epsilon;
            CHECK(eps >= std::max(1.0 / N, 1.0 / K) - 1e-12);
            CHECK(eps <= 1.0 / 3.0 + 1e-12);
            CHECK(static_cast<double>(prm.n1) >= eps * N - 1e-9);
            CHECK(static_cast<double>(prm.n1) <= 2.0 * eps * N + 1e-9);
            CHECK(static_cast<double>(prm.k1) >= eps * K - 1e-9);
            CHECK(static_cast<double>(prm.k1) <= 2.0 * eps * K + 1e-9);
            CHECK(prm.n1 < N);
            CHECK(prm.k1 < K);
        }
    }
    CHECK_THROWS_AS(choose_params_thm1(101, 0, 5), std::out_of_range);
    CHECK_THROWS_AS(choose_params_thm1(101, 5, 101), std::out_of_range);
    // exact branch arithmetic is capped at 2^32
    CHECK_THROWS_AS(choose_params_thm1((uint64_t{1} << 61) - 1, 100, 100), std::out_of_range);
}

TEST_CASE("choose_params_thm2", "[smoothing]") {
    CHECK(choose_params_thm2(101, 40).branch == Branch::SMALL);
    CHECK(choose_params_thm2(101, 40).n1 == 10);
    // 10 * 1009^{3/4} = 1790.3 > 1000, so still the quartering branch
    CHECK(choose_params_thm2(1009, 1000).branch == Branch::SMALL);
    CHECK(choose_params_thm2(1009, 1000).n1 == 250);
    CHECK(choose_params_thm2(5, 1).n1 == 1);
    CHECK_THROWS_AS(choose_params_thm2(101, 0), std::out_of_range);
}

TEST_CASE("choose_params_thm3", "[smoothing]") {
    SECTION("small branch halves") {
        const auto prm = choose_params_thm3(101, 5, 5, 50);
        CHECK(prm.branch == Branch::SMALL);
        CHECK(prm.t1 == 25);
    }
    SECTION("large branch cube root") {
        const auto prm = choose_params_thm3(101, 100, 100, 101);
        CHECK(prm.branch == Branch::LARGE);
        CHECK(prm.t1 == 22); // ceil(101 * (101/10^4)^{1/3}) = ceil(21.83)
        CHECK(2 * prm.t1 < 101);
    }
    SECTION("floor guard") {
        CHECK(choose_params_thm3(101, 3, 3, 1).t1 == 1);
    }
    CHECK_THROWS_AS(choose_params_thm3(101, 0, 5, 10), std::out_of_range);
    CHECK_THROWS_AS(choose_params_thm3(101, 5, 5, 102), std::out_of_range);
}

TEST_CASE("choose_params_thm5", "[smoothing]") {
    CHECK(choose_params_thm5(101, 50).branch == Branch::LARGE);
    CHECK(choose_params_thm5(101, 50).k == 31); // floor(101^{3/4}) = 31
    CHECK(choose_params_thm5(101, 20).branch == Branch::SMALL);
    CHECK(choose_params_thm5(101, 20).k == 19);
    CHECK(choose_params_thm5(17, 2).k == 1);
    CHECK_THROWS_AS(choose_params_thm5(101, 1), std::out_of_range);
}

TEST_CASE("thm1 sandwich: fixtures and decomposition", "[smoothing]") {
    SECTION("divisor-one window brackets the full box") {
        const auto ctx = make_ctx(7);
        const PowerBoxQuery q(ctx, 0, 6, 0, 6);
        const auto sw = smoothed_counts_thm1(q, Thm1Params{Branch::SMALL, std::nullopt, 1, 1});
        CHECK(sw.divisor == 1);
        CHECK(sw.j_prime == oracle::brute_thm1_j_prime(ctx, 0, 6, 0, 6, 1, 1));
        CHECK(sw.j_dprime == oracle::brute_thm1_j_dprime(ctx, 0, 6, 0, 6, 1, 1));
        CHECK(brackets(sw, count_J(q)));
    }
    SECTION("chosen params bracket the count at p = 101") {
        const auto ctx = make_ctx(101);
        const PowerBoxQuery q(ctx, 0, 50, 0, 50);
        const auto sw = smoothed_counts_thm1(q, choose_params_thm1(101, 50, 50));
        CHECK(brackets(sw, count_J(q)));
        CHECK(rat(count_J(q)) >= sw.lower);
        CHECK(rat(count_J(q)) <= sw.upper);
    }
    SECTION("minimal ranges agree with the quadruple loop") {
        const auto ctx = make_ctx(5);
        const PowerBoxQuery q(ctx, 0, 2, 0, 2);
        const auto sw = smoothed_counts_thm1(q, Thm1Params{Branch::SMALL, std::nullopt, 1, 1});
        CHECK(sw.j_prime == oracle::brute_thm1_j_prime(ctx, 0, 2, 0, 2, 1, 1));
        CHECK(sw.j_dprime == oracle::brute_thm1_j_dprime(ctx, 0, 2, 0, 2, 1, 1));
    }
    SECTION("decomposition equals the quadruple loop exhaustively at small p") {
        for (uint64_t p : {5, 7, 11, 13}) {
            const auto ctx = make_ctx(p);
            for (uint64_t K = 2; K < p; K += 2) {
                for (uint64_t N = 2; N < p; N += 2) {
                    for (uint64_t w = 1; w <= std::min(K, N) / 2; ++w) {
                        const PowerBoxQuery q(ctx, -2, K, 3, N);
                        const Thm1Params prm{Branch::SMALL, std::nullopt, w, w};
                        const auto sw = smoothed_counts_thm1(q, prm);
                        CAPTURE(p, K, N, w);
                        CHECK(sw.j_prime == oracle::brute_thm1_j_prime(ctx, -2, K, 3, N, w, w));
                        CHECK(sw.j_dprime == oracle::brute_thm1_j_dprime(ctx, -2, K, 3, N, w, w));
                        CHECK(brackets(sw, count_J(q)));
                    }
                }
            }
        }
    }
    SECTION("preconditions") {
        const auto ctx = make_ctx(7);
        const PowerBoxQuery q(ctx, 0, 3, 0, 3);
        CHECK_THROWS_AS(smoothed_counts_thm1(q, Thm1Params{Branch::SMALL, std::nullopt, 3, 1}),
                        std::invalid_argument);
        CHECK_THROWS_AS(smoothed_counts_thm1(q, Thm1Params{Branch::SMALL, std::nullopt, 1, 3}),
                        std::invalid_argument);
    }
}

TEST_CASE("thm2 sandwich: fixtures and decomposition", "[smoothing]") {
    SECTION("p = 7 fixture brackets J1 = 5") {
        const auto ctx = make_ctx(7);
        const PowerDiffQuery q(ctx, 1, 6);
        const auto sw = smoothed_counts_thm2(q, Thm2Params{Branch::SMALL, 1});
        CHECK(sw.divisor == 1);
        CHECK(brackets(sw, 5));
        CHECK(sw.j_prime == oracle::brute_thm2_j_prime(ctx, 1, 6, 1));
        CHECK(sw.j_dprime == oracle::brute_thm2_j_dprime(ctx, 1, 6, 1));
    }
    SECTION("N1 = 1 pins the off-by-one range arithmetic") {
        // x runs to N-2 and y to N-1 in J1'; the quadruple loop encodes
        // exactly the quoted conditions
        const auto ctx = make_ctx(11);
        const PowerDiffQuery q(ctx, 1, 4);
        const auto sw = smoothed_counts_thm2(q, Thm2Params{Branch::SMALL, 1});
        CHECK(sw.j_prime == oracle::brute_thm2_j_prime(ctx, 1, 4, 1));
        CHECK(sw.j_dprime == oracle::brute_thm2_j_dprime(ctx, 1, 4, 1));
        CHECK(brackets(sw, count_J1(q)));
    }
    SECTION("decomposition equals the quadruple loop on small cases") {
        for (uint64_t p : {11, 13, 17}) {
            const auto ctx = make_ctx(p);
            for (uint64_t h : {uint64_t{1}, p - 2}) {
                for (uint64_t N = 4; N < p; N += 3) {
                    const uint64_t n1 = std::max<uint64_t>(1, N / 4);
                    const PowerDiffQuery q(ctx, h, N);
                    const auto sw = smoothed_counts_thm2(q, Thm2Params{Branch::SMALL, n1});
                    CAPTURE(p, h, N, n1);
                    CHECK(sw.j_prime == oracle::brute_thm2_j_prime(ctx, h, N, n1));
                    CHECK(sw.j_dprime == oracle::brute_thm2_j_dprime(ctx, h, N, n1));
                    CHECK(brackets(sw, count_J1(q)));
                }
            }
        }
    }
    SECTION("preconditions") {
        const auto ctx = make_ctx(11);
        CHECK_THROWS_AS(smoothed_counts_thm2(PowerDiffQuery(ctx, 1, 7), Thm2Params{Branch::SMALL, 2}),
                        std::invalid_argument);
    }
}

TEST_CASE("thm3 sandwich: fixtures and decomposition", "[smoothing]") {
    const PrimeField f5(5);
    SECTION("p = 5 fixture brackets J2 = 3") {
        const ProductIntervalQuery q(f5, ResidueSet({1, 2}), ResidueSet({1, 3}), {0, 2});
        const auto sw = smoothed_counts_thm3(q, Thm3Params{Branch::SMALL, 1});
        CHECK(brackets(sw, 3));
        CHECK(sw.j_prime == oracle::brute_thm3_j_prime(f5, q.U, q.V, 0, 2, 1));
        CHECK(sw.j_dprime == oracle::brute_thm3_j_dprime(f5, q.U, q.V, 0, 2, 1));
    }
    SECTION("full interval brackets uv") {
        const PrimeField f(13);
        const ProductIntervalQuery q(f, ResidueSet({1, 2, 7}), ResidueSet({3, 5}), {4, 13});
        CHECK(count_J2(q) == 6);
        const auto sw = smoothed_counts_thm3(q, Thm3Params{Branch::SMALL, 6});
        CHECK(brackets(sw, 6));
    }
    SECTION("empty set gives zero everywhere") {
        const ProductIntervalQuery q(f5, ResidueSet{}, ResidueSet({1}), {0, 4});
        const auto sw = smoothed_counts_thm3(q, Thm3Params{Branch::SMALL, 2});
        CHECK(sw.j_prime == 0);
        CHECK(sw.j_dprime == 0);
        CHECK(count_J2(q) == 0);
    }
    SECTION("histogram path equals per-shift counter calls and the brute loop") {
        const PrimeField f(17);
        std::mt19937_64 rng(23);
        for (int i = 0; i < 20; ++i) {
            const auto U = random_residue_set(1 + rng() % 8, f.p, rng);
            const auto V = random_residue_set(1 + rng() % 8, f.p, rng);
            const auto S = static_cast<int64_t>(rng() % 34) - 17;
            const uint64_t T = 2 + rng() % (f.p - 2);
            const uint64_t t1 = 1 + rng() % (T / 2);
            const ProductIntervalQuery q(f, U, V, {S, T});
            const auto sw = smoothed_counts_thm3(q, Thm3Params{Branch::SMALL, t1});
            uint64_t jp_calls = 0;
            for (uint64_t t = 1; t <= t1; ++t) {
                jp_calls +=
                    count_J2(ProductIntervalQuery(f, U, V, {S + static_cast<int64_t>(t), T - t1}));
            }
            CAPTURE(S, T, t1);
            CHECK(sw.j_prime == jp_calls);
            CHECK(sw.j_prime == oracle::brute_thm3_j_prime(f, U, V, S, T, t1));
            CHECK(sw.j_dprime == oracle::brute_thm3_j_dprime(f, U, V, S, T, t1));
            CHECK(brackets(sw, count_J2(q)));
        }
    }
}

TEST_CASE("thm4 sandwich: fixtures and decomposition", "[smoothing]") {
    const PrimeField f7(7);
    SECTION("p = 7 fixture brackets J3 = 2") {
        const SetIntervalQuery q(f7, ResidueSet({1, 3, 5}), {2, 3});
        const auto sw = smoothed_counts_thm4(q, Thm3Params{Branch::SMALL, 1});
        CHECK(brackets(sw, 2));
        CHECK(sw.j_prime == oracle::brute_thm4_j_prime(f7, q.X, 2, 3, 1));
        CHECK(sw.j_dprime == oracle::brute_thm4_j_dprime(f7, q.X, 2, 3, 1));
    }
    SECTION("full interval brackets the set size") {
        const SetIntervalQuery q(f7, ResidueSet({0, 2, 6}), {3, 7});
        const auto sw = smoothed_counts_thm4(q, Thm3Params{Branch::SMALL, 3});
        CHECK(brackets(sw, 3));
    }
    SECTION("full set brackets T") {
        const SetIntervalQuery q(f7, ResidueSet({0, 1, 2, 3, 4, 5, 6}), {1, 4});
        CHECK(count_J3(q) == 4);
        const auto sw = smoothed_counts_thm4(q, Thm3Params{Branch::SMALL, 2});
        CHECK(brackets(sw, 4));
    }
    SECTION("decomposition equals the brute loop") {
        const PrimeField f(19);
        std::mt19937_64 rng(29);
        for (int i = 0; i < 30; ++i) {
            const auto X = random_residue_set(rng() % f.p, f.p, rng);
            const auto S = static_cast<int64_t>(rng() % 38) - 19;
            const uint64_t T = 2 + rng() % (f.p - 2);
            const uint64_t t1 = 1 + rng() % (T / 2);
            const SetIntervalQuery q(f, X, {S, T});
            const auto sw = smoothed_counts_thm4(q, Thm3Params{Branch::SMALL, t1});
            CHECK(sw.j_prime == oracle::brute_thm4_j_prime(f, X, S, T, t1));
            CHECK(sw.j_dprime == oracle::brute_thm4_j_dprime(f, X, S, T, t1));
            CHECK(brackets(sw, count_J3(q)));
        }
    }
}

TEST_CASE("thm5 sandwich: fixtures and decomposition", "[smoothing]") {
    SECTION("p = 7 fixture brackets J4 = 6") {
        const PrimeField f(7);
        const HyperbolaBoxQuery q(f, 1, {0, 6}, {0, 6});
        const auto sw = smoothed_counts_thm5(q, Thm5Params{Branch::SMALL, 1});
        CHECK(sw.divisor == 1);
        CHECK(brackets(sw, 6));
        CHECK(sw.j_prime == oracle::brute_thm5_j_prime(f, 1, 6, 1));
        CHECK(sw.j_dprime == oracle::brute_thm5_j_dprime(f, 1, 6, 1));
    }
    SECTION("N = 2, K = 1 is a single unit rectangle") {
        const PrimeField f(11);
        const HyperbolaBoxQuery q(f, 1, {0, 2}, {0, 2});
        const auto sw = smoothed_counts_thm5(q, Thm5Params{Branch::SMALL, 1});
        CHECK(sw.j_prime == oracle::brute_thm5_j_prime(f, 1, 2, 1));
        CHECK(sw.j_prime == internal::hyperbola_count(f, 1, 1, 1, 1, 1));
        CHECK(brackets(sw, count_J4(q)));
    }
    SECTION("chosen params bracket the count at p = 101") {
        const PrimeField f(101);
        const HyperbolaBoxQuery q(f, 7, {0, 50}, {0, 50});
        const auto sw = smoothed_counts_thm5(q, choose_params_thm5(101, 50));
        CHECK(brackets(sw, count_J4(q)));
    }
    SECTION("decomposition equals the brute loop on small cases") {
        for (uint64_t p : {11, 13}) {
            const PrimeField f(p);
            for (uint64_t h : {uint64_t{1}, p - 1}) {
                for (uint64_t N = 3; N < p; N += 2) {
                    for (uint64_t K = 1; K < std::min<uint64_t>(N, 4); ++K) {
                        const HyperbolaBoxQuery q(f, h, {0, N}, {0, N});
                        const auto sw = smoothed_counts_thm5(q, Thm5Params{Branch::SMALL, K});
                        CAPTURE(p, h, N, K);
                        CHECK(sw.j_prime == oracle::brute_thm5_j_prime(f, h, N, K));
                        CHECK(sw.j_dprime == oracle::brute_thm5_j_dprime(f, h, N, K));
                        CHECK(brackets(sw, count_J4(q)));
                    }
                }
            }
        }
    }
    SECTION("preconditions") {
        const PrimeField f(11);
        CHECK_THROWS_AS(
            smoothed_counts_thm5(HyperbolaBoxQuery(f, 1, {0, 3}, {0, 3}), Thm5Params{Branch::SMALL, 3}),
            std::invalid_argument);
    }
}

TEST_CASE("sandwich soundness on seeded random configurations", "[smoothing]") {
    std::mt19937_64 rng(987);
    const auto primes = primes_in_range(11, 199);
    auto pick_prime = [&] { return primes[rng() % primes.size()]; };
    for (int i = 0; i < 20; ++i) {
        const uint64_t p = pick_prime();
        const auto ctx = make_ctx(p);
        const PrimeField& f = ctx.field;

        { // theorem 1
            const uint64_t K = 2 + rng() % (p - 2), N = 2 + rng() % (p - 2);
            const PowerBoxQuery q(ctx, static_cast<int64_t>(rng() % p), K, static_cast<int64_t>(rng() % p), N);
            const auto sw = smoothed_counts_thm1(q, choose_params_thm1(p, N, K));
            CAPTURE(p, K, N);
            CHECK(brackets(sw, count_J(q)));
        }
        if (p >= 7) { // theorem 2
            const uint64_t N = 4 + rng() % (p - 4);
            const PowerDiffQuery q(ctx, 1 + rng() % (p - 1), N);
            const auto sw = smoothed_counts_thm2(q, choose_params_thm2(p, N));
            CAPTURE(p, q.h, N);
            CHECK(brackets(sw, count_J1(q)));
        }
        { // theorem 3
            const uint64_t T = 2 + rng() % (p - 1);
            const ProductIntervalQuery q(f, random_residue_set(1 + rng() % p, p, rng),
                                         random_residue_set(1 + rng() % p, p, rng),
                                         {static_cast<int64_t>(rng() % p), T});
            const auto sw = smoothed_counts_thm3(q, choose_params_thm3(p, q.U.size(), q.V.size(), T));
            CAPTURE(p, q.U.size(), q.V.size(), T);
            CHECK(brackets(sw, count_J2(q)));
        }
        { // theorem 4 with any admissible window
            const uint64_t T = 2 + rng() % (p - 1);
            const SetIntervalQuery q(f, random_residue_set(1 + rng() % p, p, rng),
                                     {static_cast<int64_t>(rng() % p), T});
            const Thm3Params prm{Branch::SMALL, 1 + rng() % (T / 2)};
            const auto sw = smoothed_counts_thm4(q, prm);
            CAPTURE(p, q.X.size(), T, prm.t1);
            CHECK(brackets(sw, count_J3(q)));
        }
        if (p >= 5) { // theorem 5
            const uint64_t N = 2 + rng() % (p - 3);
            const HyperbolaBoxQuery q(f, 1 + rng() % (p - 1), {0, N}, {0, N});
            const auto sw = smoothed_counts_thm5(q, choose_params_thm5(p, N));
            CAPTURE(p, q.h, N);
            CHECK(brackets(sw, count_J4(q)));
        }
    }
}

TEST_CASE("bracket helpers normalize long intervals", "[smoothing]") {
    SECTION("power box with N > p/2") {
        const auto ctx = make_ctx(101);
        for (uint64_t N : {60, 75, 99}) {
            const PowerBoxQuery q(ctx, 11, 40, -7, N);
            const auto sw = bracket_J(q);
            CAPTURE(N);
            CHECK(brackets(sw, count_J(q)));
        }
    }
    SECTION("product interval with T > p/2") {
        const PrimeField f(101);
        std::mt19937_64 rng(31);
        const auto U = random_residue_set(30, f.p, rng);
        const auto V = random_residue_set(12, f.p, rng);
        for (uint64_t T : {60, 90}) {
            const ProductIntervalQuery q(f, U, V, {-3, T});
            CHECK(brackets(bracket_J2(q), count_J2(q)));
        }
    }
    SECTION("set interval with T > p/2") {
        const PrimeField f(101);
        std::mt19937_64 rng(37);
        const auto X = random_residue_set(40, f.p, rng);
        for (uint64_t T : {52, 70, 100}) {
            const SetIntervalQuery q(f, X, {5, T});
            CHECK(brackets(bracket_J3(q), count_J3(q)));
        }
    }
    SECTION("J1 and J4 brackets") {
        const auto ctx = make_ctx(101);
        CHECK(brackets(bracket_J1(PowerDiffQuery(ctx, 5, 80)), count_J1(PowerDiffQuery(ctx, 5, 80))));
        const HyperbolaBoxQuery q(ctx.field, 7, {0, 80}, {0, 80});
        CHECK(brackets(bracket_J4(q), count_J4(q)));
    }
}

TEST_CASE("bracket_J holds exhaustively at small p", "[smoothing]") {
    // covers both the direct and the complemented path, every box shape
    for (uint64_t p : {11, 13}) {
        const auto ctx = make_ctx(p);
        for (uint64_t K = 2; K < p; ++K) {
            for (uint64_t N = 2; N < p; ++N) {
                for (const auto& [H, M] : {std::pair<int64_t, int64_t>{0, 0}, {-4, 6}}) {
                    const PowerBoxQuery q(ctx, H, K, M, N);
                    CAPTURE(p, K, N, H, M);
                    CHECK(brackets(bracket_J(q), count_J(q)));
                }
            }
        }
    }
    // interval families at one mid-size prime, all lengths
    const PrimeField f(61);
    std::mt19937_64 rng(61);
    const auto X = random_residue_set(24, f.p, rng);
    const auto U = random_residue_set(9, f.p, rng);
    const auto V = random_residue_set(14, f.p, rng);
    for (uint64_t T = 2; T <= f.p; ++T) {
        const SetIntervalQuery q3(f, X, {-8, T});
        CHECK(brackets(bracket_J3(q3), count_J3(q3)));
        const ProductIntervalQuery q2(f, U, V, {17, T});
        CHECK(brackets(bracket_J2(q2), count_J2(q2)));
    }
}

TEST_CASE("nested smoothing windows move the bounds monotonically", "[smoothing]") {
    const auto ctx = make_ctx(101);
    const PowerBoxQuery q(ctx, 3, 50, -7, 33);
    Rational prev_lower(INT64_MAX, 1);
    Rational prev_upper(0, 1);
    uint64_t prev_jd = 0;
    for (uint64_t w = 1; w <= 16; ++w) {
        const auto sw = smoothed_counts_thm1(q, Thm1Params{Branch::SMALL, std::nullopt, w, w});
        CHECK(sw.lower <= prev_lower);
        CHECK(sw.upper >= prev_upper);
        CHECK(sw.j_dprime >= prev_jd); // enlarged windows only add solutions
        prev_lower = sw.lower;
        prev_upper = sw.upper;
        prev_jd = sw.j_dprime;
    }
    const PrimeField f(101);
    std::mt19937_64 rng(41);
    const auto X = random_residue_set(35, f.p, rng);
    const SetIntervalQuery q3(f, X, {9, 44});
    prev_lower = Rational(INT64_MAX, 1);
    prev_upper = Rational(0, 1);
    prev_jd = 0;
    for (uint64_t w = 1; w <= 22; ++w) {
        const auto sw = smoothed_counts_thm4(q3, Thm3Params{Branch::SMALL, w});
        CHECK(sw.lower <= prev_lower);
        CHECK(sw.upper >= prev_upper);
        CHECK(sw.j_dprime >= prev_jd);
        prev_lower = sw.lower;
        prev_upper = sw.upper;
        prev_jd = sw.j_dprime;
    }
}
