#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "uqr/histogram_unbounded.hpp"
#include "uqr/oracle.hpp"

using namespace uqr;

namespace {

struct ChecksOn {
    ChecksOn() { set_checks_enabled(true); }
    ~ChecksOn() { set_checks_enabled(false); }
};

std::vector<UncertainPoint> d2() {
    return {
        make_point(1, HistogramPdf{{0, 1, 3}, {0.5, 0.25}}),
        make_point(2, HistogramPdf{{2, 4}, {0.5}}),
        make_point(3, HistogramPdf{{0, 2, 5, 6}, {0.25, 0.0, 0.5}}),
    };
}

std::vector<UncertainPoint> random_hists(std::mt19937_64& rng, int n) {
    std::vector<UncertainPoint> pts;
    for (int i = 0; i < n; ++i) {
        const int nb = 2 + int(rng() % 5);
        std::vector<double> breaks;
        while (int(breaks.size()) < nb) {
            const double b = -8.0 + 0.5 * double(rng() % 33);
            if (!std::count(breaks.begin(), breaks.end(), b)) breaks.push_back(b);
        }
        std::sort(breaks.begin(), breaks.end());
        std::vector<double> dens(breaks.size() - 1);
        double total = 0.0;
        for (size_t j = 0; j < dens.size(); ++j) {
            dens[j] = (dens.size() > 1 && rng() % 4 == 0) ? 0.0 : double(1 + rng() % 8);
            total += dens[j] * (breaks[j + 1] - breaks[j]);
        }
        if (total == 0.0) {
            dens[0] = 1.0;
            total = breaks[1] - breaks[0];
        }
        for (double& d : dens) d /= total;
        pts.push_back(make_point(i + 1, HistogramPdf{std::move(breaks), std::move(dens)}));
    }
    return pts;
}

QueryInterval random_unbounded(std::mt19937_64& rng) {
    if (rng() % 12 == 0) return make_interval(-kInf, kInf);
    const double c = -10.0 + 0.5 * double(rng() % 41);
    return (rng() & 1) ? make_interval(-kInf, c) : make_interval(c, kInf);
}

}  // namespace

TEST_CASE("frozen d2 answers") {
    ChecksOn on;
    const auto pts = d2();
    HistogramUnboundedIndex idx(pts);

    const QueryInterval L = make_interval(-kInf, 2.5);
    auto t = idx.top1(L);
    CHECK(t.items[0].id == 1);
    CHECK(t.items[0].prob == 0.875);

    for (Engine e : {Engine::heap, Engine::block}) {
        auto k2 = idx.topk(L, 2, e);
        REQUIRE(k2.items.size() == 2);
        CHECK(k2.items[0].id == 1);
        CHECK(k2.items[0].prob == 0.875);
        CHECK(k2.items[1].id == 3);
        CHECK(k2.items[1].prob == 0.5);
        auto k3 = idx.topk(L, 3, e);
        REQUIRE(k3.items.size() == 3);
        CHECK(k3.items[2].id == 2);
        CHECK(k3.items[2].prob == 0.25);
    }

    auto th = idx.threshold(L, 0.3);
    REQUIRE(th.items.size() == 2);
    CHECK(th.items[0].id == 1);
    CHECK(th.items[1].id == 3);

    // cdf exactly equal to tau at the endpoint must be reported
    auto edge = idx.threshold(make_interval(-kInf, 0.4), 0.5 * 0.4);
    REQUIRE(edge.items.size() == 1);
    CHECK(edge.items[0].id == 1);

    const QueryInterval R = make_interval(2.5, kInf);
    auto tr = idx.top1(R);
    CHECK(tr.items[0].id == 2);
    CHECK(tr.items[0].prob == 0.75);
    auto thr = idx.threshold(R, 0.5);
    REQUIRE(thr.items.size() == 2);
    CHECK(thr.items[0].id == 2);
    CHECK(thr.items[0].prob == 0.75);
    CHECK(thr.items[1].id == 3);
    CHECK(thr.items[1].prob == 0.5);

    const QueryInterval all = make_interval(-kInf, kInf);
    CHECK(idx.top1(all).items[0].id == 1);
    CHECK(idx.top1(all).items[0].prob == 1.0);
    auto ka = idx.topk(all, 2);
    REQUIRE(ka.items.size() == 2);
    CHECK(ka.items[0].id == 1);
    CHECK(ka.items[1].id == 2);
    CHECK(idx.threshold(all, 0.9).items.size() == 3);

    auto far = idx.top1(make_interval(-kInf, -5.0));
    CHECK(far.items[0].id == 1);
    CHECK(far.items[0].prob == 0.0);
    CHECK(idx.threshold(make_interval(-kInf, -5.0), 0.1).items.empty());
    CHECK(idx.top1(make_interval(10.0, kInf)).items[0].prob == 0.0);
    auto kfar = idx.topk(make_interval(10.0, kInf), 2);
    REQUIRE(kfar.items.size() == 2);
    CHECK(kfar.items[0].prob == 0.0);
}

TEST_CASE("single histogram point answers every query kind") {
    ChecksOn on;
    std::vector<UncertainPoint> pts = {make_point(7, HistogramPdf{{0, 2}, {0.5}})};
    HistogramUnboundedIndex idx(pts);
    auto t = idx.top1(make_interval(-kInf, 1.0));
    CHECK(t.items[0].id == 7);
    CHECK(t.items[0].prob == 0.5);
    auto k = idx.topk(make_interval(1.0, kInf), 1);
    CHECK(k.items[0].id == 7);
    CHECK(k.items[0].prob == 0.5);
    CHECK(idx.threshold(make_interval(-kInf, 1.0), 0.5).items.size() == 1);
    CHECK(idx.threshold(make_interval(-kInf, 1.0), 0.51).items.empty());
}

TEST_CASE("histogram index agrees with the oracle on random instances") {
    ChecksOn on;
    std::mt19937_64 rng(907);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + int(rng() % 48);
        const auto pts = random_hists(rng, n);
        HistogramUnboundedIndex idx(pts);
        for (int q = 0; q < 20; ++q) {
            const QueryInterval I = random_unbounded(rng);
            CHECK(top1_matches(idx.top1(I).items[0], pts, I));

            const int k = 1 + int(rng() % n);
            auto h = idx.topk(I, k, Engine::heap);
            auto b = idx.topk(I, k, Engine::block);
            CHECK(topk_matches(h.items, pts, I, k));
            REQUIRE(h.items.size() == b.items.size());
            for (size_t i = 0; i < h.items.size(); ++i) {
                CHECK(h.items[i].id == b.items[i].id);
                CHECK(h.items[i].prob == b.items[i].prob);
            }

            double tau;
            switch (rng() % 4) {
                case 0: tau = 0.0; break;
                case 1: tau = 1.0; break;
                case 2:
                    tau = std::clamp(interval_probability(pts[rng() % pts.size()], I), 0.0, 1.0);
                    break;
                default: tau = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            }
            CHECK(threshold_matches(idx.threshold(I, tau).items, pts, I, tau));
        }
    }
}

TEST_CASE("histogram index validation and capability errors") {
    HistogramUnboundedIndex idx(d2());
    CHECK_THROWS_AS((void)idx.top1(make_interval(0.0, 1.0)), Error);
    CHECK_THROWS_AS((void)idx.topk(make_interval(-kInf, 1.0), 0), Error);
    CHECK_THROWS_AS((void)idx.topk(make_interval(-kInf, 1.0), 4), Error);
    CHECK_THROWS_AS((void)idx.threshold(make_interval(-kInf, 1.0), -0.5), Error);
    try {
        (void)idx.top1(make_interval(0.0, 1.0));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::bounded_interval);
    }
    try {
        (void)idx.topk(make_interval(-kInf, 1.0), 2, Engine::select);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::capability_mismatch);
    }
    try {
        HistogramUnboundedIndex bad({make_point(1, UniformPdf{0, 1})});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_pdf);
    }
    CHECK_THROWS_AS(HistogramUnboundedIndex({}), Error);
    ChecksOn on;
    std::vector<UncertainPoint> dup = {make_point(2, HistogramPdf{{0, 1}, {1.0}}),
                                       make_point(2, HistogramPdf{{3, 5}, {0.5}})};
    CHECK_THROWS_AS(HistogramUnboundedIndex(std::move(dup)), CheckFailure);
}
