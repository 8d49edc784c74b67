#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "leadlag/detect.hpp"
#include "leadlag/errors.hpp"

using namespace leadlag;

namespace {

// Returns panel over weekday dates with the given per-ticker return rows.
ReturnsPanel make_returns(const Eigen::MatrixXd& returns) {
    ReturnsPanel panel;
    auto calendar = testutil::weekday_calendar(Date(2022, 1, 4), Date(2022, 12, 30));
    panel.dates.assign(calendar.begin(), calendar.begin() + returns.rows());
    for (int j = 0; j < returns.cols(); ++j) panel.tickers.push_back("T" + std::to_string(j));
    panel.returns = returns;
    return panel;
}

// Literal restatement of the detection rule, kept separate from the library
// code so the two can disagree.
bool brute_lead(const Eigen::MatrixXd& returns, Eigen::Index lagger, Eigen::Index leader,
                Eigen::Index start, const DetectionParams& params) {
    for (int k = 0; k < params.window; ++k) {
        const double diff =
            returns(start + k + params.lag, lagger) - returns(start + k, leader);
        if (std::abs(diff) > params.epsilon) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("detect_lead flags a lagger that echoes its leader within epsilon") {
    DetectionParams params;  // lag 1, epsilon 0.01, window 5
    Eigen::VectorXd leader(8);
    leader << 0.02, -0.01, 0.015, 0.0, 0.03, -0.02, 0.01, 0.005;
    Eigen::VectorXd lagger(8);
    lagger << 0.0, 0.021, -0.009, 0.014, 0.001, 0.031, -0.019, 0.011;

    // lagger(t+1) tracks leader(t) to within 0.001 everywhere
    CHECK(detect_lead(leader, lagger, 0, params));
    CHECK(detect_lead(leader, lagger, 2, params));

    SUBCASE("one excursion past epsilon breaks every window that covers it") {
        lagger(3) = leader(2) + 0.011;
        CHECK_FALSE(detect_lead(leader, lagger, 0, params));
        CHECK_FALSE(detect_lead(leader, lagger, 2, params));
    }
    SUBCASE("a deviation of exactly epsilon still counts") {
        leader(2) = 0.0;
        lagger(3) = 0.01;  // |diff| == epsilon, bit for bit
        CHECK(detect_lead(leader, lagger, 0, params));
    }
    SUBCASE("window bounds are enforced") {
        CHECK_THROWS_AS(detect_lead(leader, lagger, 3, params), std::invalid_argument);
        CHECK_THROWS_AS(detect_lead(leader, lagger, -1, params), std::invalid_argument);
    }
    SUBCASE("degenerate parameters are rejected") {
        params.window = 0;
        CHECK_THROWS_AS(detect_lead(leader, lagger, 0, params), std::invalid_argument);
    }
}

TEST_CASE("a series shifted by the lag leads itself perfectly") {
    DetectionParams params;
    params.window = 4;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> step(-0.05, 0.05);
    Eigen::VectorXd base(20);
    for (int t = 0; t < 20; ++t) base(t) = step(rng);

    Eigen::VectorXd echo(20);
    echo(0) = 0.0;
    for (int t = 1; t < 20; ++t) echo(t) = base(t - 1);

    params.epsilon = 0.0;
    for (Eigen::Index start = 0; start + params.window + params.lag <= 20; ++start)
        CHECK(detect_lead(base, echo, start, params));
}

TEST_CASE("build_tensor places one slice per admissible window start") {
    DetectionParams params;
    params.window = 3;
    Eigen::MatrixXd returns = Eigen::MatrixXd::Zero(10, 2);
    ReturnsPanel panel = make_returns(returns);

    SUBCASE("stride one") {
        LeadLagTensor tensor = build_tensor(panel, params);
        // starts s with s + window + lag <= 10 -> s in [0, 6]
        REQUIRE(tensor.num_slices() == 7);
        CHECK(tensor.window_starts.front() == 0);
        CHECK(tensor.window_starts.back() == 6);
        // all-zero returns echo each other exactly
        CHECK(tensor.slices[0].all());
    }
    SUBCASE("stride three") {
        LeadLagTensor tensor = build_tensor(panel, params, 3);
        REQUIRE(tensor.num_slices() == 3);
        CHECK(tensor.window_starts == std::vector<Eigen::Index>{0, 3, 6});
    }
    SUBCASE("too short a series is an error") {
        ReturnsPanel tiny = make_returns(Eigen::MatrixXd::Zero(3, 2));
        CHECK_THROWS_AS(build_tensor(tiny, params), DataError);
    }
}

TEST_CASE("build_tensor agrees with the brute-force restatement") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> step(-0.04, 0.04);
    std::uniform_int_distribution<int> pick_lag(1, 3);
    std::uniform_int_distribution<int> pick_window(1, 4);

    for (int round = 0; round < 25; ++round) {
        const int n_days = 8 + static_cast<int>(rng() % 10);
        const int n_tickers = 2 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd returns(n_days, n_tickers);
        for (int t = 0; t < n_days; ++t)
            for (int j = 0; j < n_tickers; ++j) returns(t, j) = step(rng);

        DetectionParams params;
        params.lag = pick_lag(rng);
        params.window = pick_window(rng);
        params.epsilon = 0.02;
        if (n_days < params.window + params.lag + 1) continue;

        ReturnsPanel panel = make_returns(returns);
        LeadLagTensor tensor = build_tensor(panel, params);
        for (std::size_t w = 0; w < tensor.slices.size(); ++w)
            for (int i = 0; i < n_tickers; ++i)
                for (int j = 0; j < n_tickers; ++j)
                    CHECK(tensor.slices[w](i, j) ==
                          brute_lead(returns, i, j, tensor.window_starts[w], params));
    }
}

TEST_CASE("widening epsilon never erases a detection") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> step(-0.03, 0.03);
    Eigen::MatrixXd returns(15, 3);
    for (int t = 0; t < 15; ++t)
        for (int j = 0; j < 3; ++j) returns(t, j) = step(rng);
    ReturnsPanel panel = make_returns(returns);

    DetectionParams narrow;
    narrow.window = 3;
    narrow.epsilon = 0.01;
    DetectionParams wide = narrow;
    wide.epsilon = 0.03;

    LeadLagTensor t_narrow = build_tensor(panel, narrow);
    LeadLagTensor t_wide = build_tensor(panel, wide);
    REQUIRE(t_narrow.num_slices() == t_wide.num_slices());
    for (std::size_t w = 0; w < t_narrow.slices.size(); ++w)
        CHECK((t_narrow.slices[w] && !t_wide.slices[w]).count() == 0);
}

TEST_CASE("sum_and_mask adds trailing slices and flags the diagonal") {
    LeadLagTensor tensor;
    tensor.tickers = {"A", "B"};
    tensor.window_starts = {0, 1, 2};
    BoolMatrix s0(2, 2), s1(2, 2), s2(2, 2);
    s0 << true, true, false, true;
    s1 << false, true, false, true;
    s2 << true, false, true, true;
    tensor.slices = {s0, s1, s2};

    SUBCASE("full sum") {
        SummedLeadMatrix summed = sum_and_mask(tensor, 3);
        CHECK(summed.diagonal_masked);
        CHECK(summed.counts(0, 0) == 2);  // diagonal values stay in the counts
        CHECK(summed.counts(0, 1) == 2);
        CHECK(summed.counts(1, 0) == 1);
        CHECK(summed.counts(1, 1) == 3);
    }
    SUBCASE("trailing lookback of the first two slices") {
        SummedLeadMatrix summed = sum_and_mask(tensor, 2, 2);
        CHECK(summed.counts(0, 1) == 2);
        CHECK(summed.counts(1, 0) == 0);
    }
    SUBCASE("lookback beyond what exists is an error") {
        CHECK_THROWS_AS(sum_and_mask(tensor, 4), DataError);
        CHECK_THROWS_AS(sum_and_mask(tensor, 2, 1), DataError);
    }
}

TEST_CASE("top_pairs ranks by strength with lexicographic tie-breaks") {
    SummedLeadMatrix summed;
    summed.tickers = {"A", "B", "C"};
    summed.diagonal_masked = true;
    summed.counts.resize(3, 3);
    // rows = laggers, columns = leaders; diagonal huge to prove it is masked
    summed.counts << 99, 5, 2,
                     5, 99, 0,
                     1, 5, 99;

    auto pairs = top_pairs(summed, 10);
    REQUIRE(pairs.size() == 5);
    // three fives tie; (lagger, leader) ascending = (A,B), (B,A), (C,B)
    CHECK(pairs[0].lagger == "A"); CHECK(pairs[0].leader == "B");
    CHECK(pairs[1].lagger == "B"); CHECK(pairs[1].leader == "A");
    CHECK(pairs[2].lagger == "C"); CHECK(pairs[2].leader == "B");
    CHECK(pairs[3].lagger == "A"); CHECK(pairs[3].leader == "C");
    CHECK(pairs[3].strength == 2);
    CHECK(pairs[4].lagger == "C"); CHECK(pairs[4].leader == "A");
    CHECK(pairs[4].strength == 1);

    SUBCASE("count truncates") {
        auto top2 = top_pairs(summed, 2);
        REQUIRE(top2.size() == 2);
        CHECK(top2[1].lagger == "B");
    }
    SUBCASE("zero-strength cells are not edges") {
        for (const auto& pair : top_pairs(summed, 10)) CHECK(pair.strength > 0);
    }
    SUBCASE("an unmasked matrix is refused") {
        summed.diagonal_masked = false;
        CHECK_THROWS_AS(top_pairs(summed, 10), std::invalid_argument);
    }
}

TEST_CASE("out_degree counts distinct laggers, never the self-cell") {
    SummedLeadMatrix summed;
    summed.tickers = {"A", "B", "C", "D"};
    summed.diagonal_masked = true;
    summed.counts.resize(4, 4);
    summed.counts << 9, 1, 0, 0,
                     3, 9, 0, 0,
                     7, 0, 9, 0,
                     2, 0, 0, 9;

    CHECK(out_degree(summed, "A") == 3);
    CHECK(out_degree(summed, "B") == 1);
    CHECK(out_degree(summed, "C") == 0);
    CHECK_THROWS_AS(out_degree(summed, "Z"), DataError);

    SUBCASE("matrix overload agrees and works on boolean slices") {
        CHECK(out_degree(summed.counts, 0) == 3);
        BoolMatrix slice = summed.counts.array() > 0;
        CHECK(out_degree(slice, 0) == 3);
        CHECK_THROWS_AS(out_degree(summed.counts, 9), std::invalid_argument);
    }
}

TEST_CASE("out-degree sums match the off-diagonal support of the matrix") {
    std::mt19937_64 rng(31);
    SummedLeadMatrix summed;
    summed.diagonal_masked = true;
    const int n = 6;
    for (int j = 0; j < n; ++j) summed.tickers.push_back("T" + std::to_string(j));
    summed.counts.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) summed.counts(i, j) = static_cast<int>(rng() % 3);

    int degree_total = 0;
    for (int j = 0; j < n; ++j) degree_total += out_degree(summed.counts, j);
    int support = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && summed.counts(i, j) != 0) ++support;
    CHECK(degree_total == support);
}
