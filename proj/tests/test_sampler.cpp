#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "binexp/sampler.hpp"
#include "binexp/sweep.hpp"

using namespace binexp;

TEST_CASE("counter block known answers") {
    // Reference vectors for the 10-round 4x32 counter permutation.
    using rng::Philox4x32;
    const auto zeros = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(zeros[0] == 0x6627e8d5u);
    CHECK(zeros[1] == 0xe169c58du);
    CHECK(zeros[2] == 0xbc57ac4cu);
    CHECK(zeros[3] == 0x9b00dbd8u);

    const auto ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);

    const auto pi = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u});
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("uniform01 is deterministic, in range, and stream-separated") {
    for (std::uint64_t index = 0; index < 2000; ++index) {
        const double u = rng::uniform01(7, 0, index);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == rng::uniform01(7, 0, index));
    }
    // different seeds and different streams decorrelate immediately
    int same_seed = 0, same_stream = 0;
    for (std::uint64_t index = 0; index < 1000; ++index) {
        if (rng::uniform01(7, 0, index) == rng::uniform01(8, 0, index)) ++same_seed;
        if (rng::uniform01(7, 0, index) == rng::uniform01(7, 1, index)) ++same_stream;
    }
    CHECK(same_seed == 0);
    CHECK(same_stream == 0);
}

TEST_CASE("uniform01 mean and variance look uniform") {
    double sum = 0.0, sumsq = 0.0;
    const int n = 200000;
    for (int index = 0; index < n; ++index) {
        const double u = rng::uniform01(42, 3, static_cast<std::uint64_t>(index));
        sum += u;
        sumsq += u * u;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 0.005);
    CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
}

TEST_CASE("bits_from_uniform feeds the quantile through the expansion") {
    CHECK(bits_from_uniform(DistributionModel::uniform(), 0.72, 6).to_string() == "101110");
    // beta(2,2): F(0.6) = 3(0.6)^2 - 2(0.6)^3 = 0.648, and 0.6 sits well inside
    // the cell [0.5, 0.625), so the leading bits are stable under the 1e-13
    // inversion tolerance.  (u = 0.5 would map to the cell boundary x = 0.5,
    // where the expansion is discontinuous.)
    CHECK(bits_from_uniform(DistributionModel::beta(2.0, 2.0), 0.648, 3).to_string() == "100");
}

TEST_CASE("draw_bits is reproducible and respects its arguments") {
    const auto m = DistributionModel::trapezoidal(0.2, 0.7);
    const SampleRun a = draw_bits(m, 5, 400, 99, 2);
    const SampleRun b = draw_bits(m, 5, 400, 99, 2);
    CHECK(a.rows == b.rows);
    CHECK(a.n == 5);
    CHECK(a.count == 400);
    CHECK(a.seed == 99);
    CHECK(a.stream == 2);

    const SampleRun c = draw_bits(m, 5, 400, 100, 2);
    CHECK(a.rows != c.rows);

    CHECK_THROWS_AS(draw_bits(m, 0, 10, 1), std::domain_error);
    CHECK_THROWS_AS(draw_bits(m, 5, 0, 1), std::domain_error);
}

TEST_CASE("a run draws the same values regardless of partitioning") {
    // counter-based addressing: rows [0, N) equal the concatenation of any
    // split [0, k) + [k, N) at the same seed and stream
    const auto m = DistributionModel::beta(3.0, 1.5);
    const SampleRun whole = draw_bits(m, 4, 300, 11, 5);

    BitAccumulator acc(4);
    for (std::uint64_t r = 0; r < whole.count; ++r) acc.add_row(whole.rows[r]);
    const BitStatistics direct = acc.finalize(11);

    // same draws, accumulated in two halves and merged
    BitAccumulator left(4), right(4);
    for (std::uint64_t r = 0; r < 120; ++r) left.add_row(whole.rows[r]);
    for (std::uint64_t r = 120; r < 300; ++r) right.add_row(whole.rows[r]);
    left.merge(right);
    const BitStatistics merged = left.finalize(11);

    for (int i = 1; i <= 4; ++i) {
        CHECK(merged.marginal(i) == direct.marginal(i));
        for (int j = i + 1; j <= 4; ++j) CHECK(merged.joint(i, j) == direct.joint(i, j));
    }

    // and sample_statistics (streaming) agrees with the stored-run path
    const BitStatistics streamed = sample_statistics(m, 4, 300, 11, 5);
    for (int i = 1; i <= 4; ++i) CHECK(streamed.marginal(i) == direct.marginal(i));
}

TEST_CASE("merge rejects mismatched widths") {
    BitAccumulator a(4), b(5);
    CHECK_THROWS_AS(a.merge(b), std::domain_error);
}

TEST_CASE("empirical statistics need at least two draws") {
    const auto m = DistributionModel::uniform();
    CHECK_THROWS_AS(sample_statistics(m, 3, 1, 7), std::domain_error);
    const SampleRun one = draw_bits(m, 3, 1, 7);
    CHECK_THROWS_AS(empirical_statistics(one), std::domain_error);
    BitAccumulator acc(3);
    CHECK_THROWS_AS(acc.finalize(7), std::domain_error);
}

TEST_CASE("empirical statistics converge to the exact values") {
    const auto m = DistributionModel::beta(2.0, 2.0);
    const auto exact = statistics(m, 3);
    double err[3];
    const std::uint64_t counts[3] = {1000, 10000, 100000};
    for (int k = 0; k < 3; ++k) {
        const auto emp = sample_statistics(m, 3, counts[k], kDefaultSeed, 0);
        double worst = 0.0;
        for (int i = 1; i <= 3; ++i) {
            worst = std::max(worst, std::abs(emp.marginal(i) - exact.marginal(i)));
            for (int j = i + 1; j <= 3; ++j)
                worst = std::max(worst, std::abs(emp.correlation(i, j) - exact.correlation(i, j)));
        }
        err[k] = worst;
    }
    // errors shrink with sample size in at least two of the three comparisons
    // (Monte Carlo noise can break strict monotonicity)
    const int improvements =
        (err[1] <= err[0] ? 1 : 0) + (err[2] <= err[1] ? 1 : 0) + (err[2] <= err[0] ? 1 : 0);
    CHECK(improvements >= 2);
    CHECK(err[2] < 0.02);
}

TEST_CASE("empirical source records count and seed") {
    const auto emp = sample_statistics(DistributionModel::uniform(), 3, 50, 1234, 0);
    CHECK(emp.source.kind == StatisticsSource::Kind::Empirical);
    CHECK(emp.source.sample_count == 50);
    CHECK(emp.source.seed == 1234);
}

TEST_CASE("raw bit export writes one line of 0/1 per draw") {
    const auto m = DistributionModel::uniform();
    const SampleRun run = draw_bits(m, 3, 4, 5);
    std::ostringstream os;
    write_raw_bits(run, os);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    std::istringstream is(text);
    std::string line;
    std::uint64_t row = 0;
    while (std::getline(is, line)) {
        REQUIRE(line.size() == 3);
        for (int i = 1; i <= 3; ++i) {
            CHECK((line[i - 1] == '0' || line[i - 1] == '1'));
            CHECK(static_cast<int>(line[i - 1] - '0') == run.bit(row, i));
        }
        ++row;
    }
}

TEST_CASE("row bits match a direct expansion of the same uniform draws") {
    const auto m = DistributionModel::beta(0.5, 0.5);
    const SampleRun run = draw_bits(m, 6, 50, 77, 9);
    for (std::uint64_t r = 0; r < run.count; ++r) {
        const double u = rng::uniform01(77, 9, r);
        const BitVector bits = bits_from_uniform(m, u, 6);
        for (int i = 1; i <= 6; ++i) CHECK(run.bit(r, i) == bits.bit(i));
    }
}
