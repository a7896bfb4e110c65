#include <doctest.h>

#include <vector>

#include "netrates/errors.hpp"
#include "netrates/metrics.hpp"
#include "netrates/rng.hpp"

using namespace netrates;

TEST_CASE("mae") {
    CHECK(mae(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == doctest::Approx(0.0));
    CHECK(mae(std::vector<double>{0}, std::vector<double>{2}) == doctest::Approx(2.0));
    CHECK(mae(std::vector<double>{1, 3}, std::vector<double>{2, 2}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(mae(std::vector<double>{1}, std::vector<double>{1, 2}), DataError);
    CHECK_THROWS_AS(mae(std::vector<double>{}, std::vector<double>{}), DataError);
}

TEST_CASE("smape") {
    CHECK(smape(std::vector<double>{0}, std::vector<double>{3}) == doctest::Approx(100.0));
    CHECK(smape(std::vector<double>{2.5}, std::vector<double>{2.5}) == doctest::Approx(0.0));
    CHECK(smape(std::vector<double>{1}, std::vector<double>{3}) == doctest::Approx(50.0));
    CHECK(smape(std::vector<double>{0}, std::vector<double>{0}) == doctest::Approx(0.0));
}

TEST_CASE("metric properties on random data") {
    Rng rng(321);
    for (int trial = 0; trial < 40; ++trial) {
        const int len = 1 + static_cast<int>(rng.uniform_int(20));
        std::vector<double> a, b;
        for (int i = 0; i < len; ++i) {
            a.push_back(rng.uniform(-4, 4));
            b.push_back(rng.uniform(-4, 4));
        }
        const double s = smape(a, b);
        CHECK(s >= 0.0);
        CHECK(s <= 100.0);
        CHECK(s == doctest::Approx(smape(b, a))); // symmetry

        const double shift = rng.uniform(-2, 2);
        std::vector<double> a_shift = a, b_shift = b;
        for (int i = 0; i < len; ++i) {
            a_shift[static_cast<std::size_t>(i)] += shift;
            b_shift[static_cast<std::size_t>(i)] += shift;
        }
        CHECK(mae(a_shift, b_shift) == doctest::Approx(mae(a, b))); // translation invariance
    }
}

TEST_CASE("summary aggregates") {
    const std::vector<double> est{1.0, 2.0, 4.0};
    const std::vector<double> truth{1.5, 2.0, 3.0};
    const ErrorSummary s = summarize_errors(est, truth);
    CHECK(s.count == 3);
    CHECK(s.mae == doctest::Approx(0.5));
    CHECK(s.std_abs_err == doctest::Approx(0.5));
    const ErrorSummary single = summarize_errors(std::vector<double>{1.0}, std::vector<double>{2.0});
    CHECK(single.std_abs_err == 0.0);
}
