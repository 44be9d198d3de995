#include <doctest.h>

#include <cmath>
#include <memory>

#include "lbp/errors.hpp"
#include "lbp/rate_model.hpp"
#include "lbp/rng.hpp"
#include "test_support.hpp"

using namespace lbp;

namespace {

FecEstParams stock_params(double c_fec, double c_est, int32_t cap = 3) {
    FecEstParams p;
    p.dispersal = Kernel::box(3);
    p.establishment = Kernel::from_weights(1, {0.5, 1.0, 0.5});
    p.fecundity = Kernel::from_weights(1, {0.5, 1.0, 0.5});
    p.c_fec = c_fec;
    p.c_est = c_est;
    p.cap = cap;
    return p;
}

}  // namespace

TEST_CASE("free branching rate is the dispersal-weighted particle count") {
    const FreeBranchingModel model(Kernel::box(3), 3);
    const Configuration single = Configuration::singleton(3);
    CHECK(model.rate(2, single) == 1.0);
    CHECK(model.rate(4, single) == 0.0);

    Configuration two = Configuration::singleton(3);
    two.increment(0);
    CHECK(model.rate(1, two) == 2.0);

    // saturated site has rate zero
    Configuration full = Configuration::singleton(3);
    full.increment(0);
    full.increment(0);
    CHECK(full.occupancy(0) == 3);
    CHECK(model.rate(0, full) == 0.0);
}

TEST_CASE("regulated rate with unit scalars on a lone particle") {
    // establishment factor e^{-1} times dispersal 1 times fecundity e^{-1}
    const FecEstModel model(stock_params(1.0, 1.0));
    const Configuration single = Configuration::singleton(3);
    const double expected = std::exp(-1.0) * 1.0 * std::exp(-1.0);
    CHECK(model.rate(0, single) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(model.rate(0, single) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("regulated rate at a saturated site is zero") {
    const FecEstModel model(stock_params(0.7, 0.3));
    Configuration c = Configuration::singleton(3);
    c.increment(0);
    c.increment(0);
    CHECK(model.rate(0, c) == 0.0);
    CHECK(model.rate(1, c) > 0.0);
}

TEST_CASE("zero scalars reduce the regulated rate to free branching exactly") {
    const FecEstModel reduced(stock_params(0.0, 0.0));
    const FreeBranchingModel free_model(Kernel::box(3), 3);
    CHECK(reduced.range() == free_model.range());
    CHECK(reduced.dependence_range() == free_model.dependence_range());
    Xoshiro256pp rng(1234);
    for (int i = 0; i < 1000; ++i) {
        const Configuration c = test::random_config(rng, 6, 3);
        const int64_t x = static_cast<int64_t>(rng.next() % 13) - 6;
        CHECK(reduced.rate(x, c) == free_model.rate(x, c));
    }
}

TEST_CASE("regulated rate is pointwise monotone decreasing in both scalars") {
    Xoshiro256pp rng(77);
    for (int i = 0; i < 300; ++i) {
        const double lo = rng.uniform();
        const double hi = lo + rng.uniform();
        const FecEstModel base(stock_params(lo, lo));
        const FecEstModel more_fec(stock_params(hi, lo));
        const FecEstModel more_est(stock_params(lo, hi));
        const Configuration c = test::random_nonempty_config(rng, 5, 3);
        const int64_t x = static_cast<int64_t>(rng.next() % 11) - 5;
        const double r = base.rate(x, c);
        CHECK(more_fec.rate(x, c) <= r + 1e-15);
        CHECK(more_est.rate(x, c) <= r + 1e-15);
    }
}

TEST_CASE("composite dependence range covers the parent-centered penalty") {
    const FecEstModel model(stock_params(0.5, 0.5));
    CHECK(model.range() == 3);
    CHECK(model.dependence_range() == 4);

    // Parent at distance 3 from the birth site; one more particle a step
    // beyond it sits at distance 4 from the site yet changes the rate
    // through the parent's fecundity penalty.
    Configuration lone(3);
    lone.increment(4);
    const double before = model.rate(1, lone);
    CHECK(before > 0.0);
    Configuration crowded = lone;
    crowded.increment(5);
    CHECK(model.rate(1, crowded) != before);
    CHECK(model.rate(1, crowded) < before);

    // With the fecundity penalty off the dependence collapses to the radius.
    const FecEstModel no_fec(stock_params(0.0, 0.5));
    CHECK(no_fec.dependence_range() == 3);
}

TEST_CASE("table model reproduces the tabulated rate bit for bit") {
    const FreeBranchingModel free_model(Kernel::box(2), 2);
    const TableModel table = TableModel::tabulate(free_model);
    Xoshiro256pp rng(555);
    for (int i = 0; i < 500; ++i) {
        const Configuration c = test::random_config(rng, 5, 2);
        const int64_t x = static_cast<int64_t>(rng.next() % 11) - 5;
        CHECK(table.rate(x, c) == free_model.rate(x, c));
    }
    CHECK_THROWS_AS(TableModel::tabulate(FreeBranchingModel(Kernel::box(3), 3), 100),
                    BudgetError);
}

TEST_CASE("windowed model zeroes rates outside the window") {
    const auto inner = std::make_shared<FreeBranchingModel>(Kernel::box(1), 1);
    const WindowedModel windowed(inner, -2, 2);
    const Configuration single = Configuration::singleton(1);
    CHECK(windowed.rate(1, single) == inner->rate(1, single));
    Configuration edge = Configuration::singleton(1);
    edge.increment(2);
    CHECK(inner->rate(3, edge) > 0.0);
    CHECK(windowed.rate(3, edge) == 0.0);
}

TEST_CASE("kernel validation") {
    CHECK_THROWS_AS(Kernel::from_weights(1, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(Kernel::from_weights(1, {1.0, -2.0, 1.0}), Error);
    CHECK_THROWS_AS(FreeBranchingModel(Kernel::zero(), 3), Error);
    const Kernel asym = Kernel::from_weights(1, {0.25, 1.0, 0.75});
    const Kernel mirrored = asym.mirrored();
    CHECK(mirrored.at(-1) == 0.75);
    CHECK(mirrored.at(1) == 0.25);
    CHECK(asym.sum() == doctest::Approx(2.0));
}
