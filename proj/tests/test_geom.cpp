#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "uqr/envelope.hpp"
#include "uqr/min_id.hpp"

using namespace uqr;

namespace {

struct ChecksOn {
    ChecksOn() { set_checks_enabled(true); }
    ~ChecksOn() { set_checks_enabled(false); }
};

std::vector<Line> random_lines(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    std::vector<Line> ls;
    for (int i = 0; i < n; ++i) ls.push_back({d(rng), d(rng), i + 1, 0});
    return dedup_lines(std::move(ls)).lines;
}

double brute_max(const std::vector<Line>& ls, double x) {
    double best = -1e300;
    for (const Line& l : ls) best = std::max(best, l.eval(x));
    return best;
}

}  // namespace

TEST_CASE("four-line peel matches the worked layering") {
    ChecksOn on;
    std::vector<Line> ls = {
        {0, 0, 1, 0},   // y = 0
        {0, 1, 2, 0},   // y = 1
        {1, 0, 3, 0},   // y = x
        {-1, 0, 4, 0},  // y = -x
    };
    auto layers = peel_layers(ls);
    REQUIRE(layers.size() == 2);
    REQUIRE(layers[0].size() == 3);
    CHECK(layers[0].lines[0].owner == 4);
    CHECK(layers[0].lines[1].owner == 2);
    CHECK(layers[0].lines[2].owner == 3);
    REQUIRE(layers[0].breaks.size() == 2);
    CHECK(layers[0].breaks[0] == -1.0);
    CHECK(layers[0].breaks[1] == 1.0);
    REQUIRE(layers[1].size() == 1);
    CHECK(layers[1].lines[0].owner == 1);

    CHECK(layers[0].eval(0.0) == 1.0);
    CHECK(layers[0].eval(-3.0) == 3.0);
    CHECK(layers[0].eval(2.0) == 2.0);
    CHECK(layers[0].eval(1.0) == 1.0);          // break: right piece
    CHECK(layers[0].top_piece(1.0) == 2);
    CHECK(layers[0].top_piece(-1.0) == 1);
    CHECK(layers[1].eval(5.0) == 0.0);
}

TEST_CASE("dedup keeps the smallest owner and records aliases") {
    std::vector<Line> ls = {
        {1, 2, 7, 0}, {1, 2, 3, 1}, {1, 2, 3, 0}, {0, 5, 9, 0},
    };
    DedupResult r = dedup_lines(ls);
    REQUIRE(r.lines.size() == 2);
    CHECK(r.lines[0].a == 0);
    CHECK(r.lines[0].owner == 9);
    CHECK(r.lines[1].a == 1);
    CHECK(r.lines[1].owner == 3);
    CHECK(r.owners[1] == std::vector<int>{3, 7});
}

TEST_CASE("peeling partitions lines and stacks envelopes pointwise") {
    ChecksOn on;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xs(-6.0, 6.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto ls = random_lines(rng, 40);
        auto layers = peel_layers(ls);
        size_t total = 0;
        for (auto& l : layers) total += l.size();
        CHECK(total == ls.size());

        // layer i is the envelope of everything from layer i down
        std::vector<Line> rest;
        for (size_t i = layers.size(); i-- > 0;) {
            rest.insert(rest.end(), layers[i].lines.begin(), layers[i].lines.end());
            for (int t = 0; t < 12; ++t) {
                double x = xs(rng);
                CHECK(layers[i].eval(x) == doctest::Approx(brute_max(rest, x)).epsilon(1e-12));
            }
        }
        // envelopes only descend
        for (size_t i = 1; i < layers.size(); ++i)
            for (int t = 0; t < 8; ++t) {
                double x = xs(rng);
                CHECK(layers[i - 1].eval(x) >= layers[i].eval(x) - 1e-12);
            }
    }
}

TEST_CASE("cascade walk agrees with per-layer binary search") {
    ChecksOn on;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xs(-8.0, 8.0);
    for (int trial = 0; trial < 10; ++trial) {
        auto ls = random_lines(rng, 64);
        auto layers = peel_layers(ls);
        CascadeBridges cb(layers);
        REQUIRE(cb.layer_count() == int(layers.size()));
        for (int t = 0; t < 50; ++t) {
            double x = xs(rng);
            Counters c;
            auto w = cb.walk_from_top(x, c);
            for (int i = 0;; ++i) {
                CHECK(w.layer() == i);
                CHECK(w.piece() == layers[size_t(i)].top_piece(x));
                if (w.last_layer()) break;
                w.descend(c);
            }
            CHECK(c.binary_searches == 1);
            CHECK(c.bridge_steps <= 2 * uint64_t(layers.size()));
        }
    }
}

TEST_CASE("seeded cascade walk matches the searched one") {
    ChecksOn on;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> xs(-8.0, 8.0);
    auto ls = random_lines(rng, 48);
    auto layers = peel_layers(ls);
    CascadeBridges cb(layers);
    for (int t = 0; t < 40; ++t) {
        double x = xs(rng);
        Counters c;
        auto w = cb.walk_from_top(x, c);
        Counters c2;
        auto w2 = cb.walk_at(w.catalog_pos(), x, c2);
        CHECK(w2.piece() == w.piece());
        CHECK(w2.catalog_pos() == w.catalog_pos());
        CHECK(c2.binary_searches == 0);
    }
}

TEST_CASE("segment envelope of two hand-built curves") {
    ChecksOn on;
    std::vector<Segment> tent = {{0, 2, 1, 0, 1, 0}, {2, 4, -1, 4, 1, 1}};
    std::vector<Segment> flat = {{0, 4, 0, 1, 2, 0}};
    auto env = SegmentEnvelope::build({tent, flat});
    CHECK(env.lo() == 0.0);
    CHECK(env.hi() == 4.0);
    Counters c;
    CHECK(env.locate(0.5, c).owner == 2);
    CHECK(env.locate(1.5, c).owner == 1);
    CHECK(env.locate(2.5, c).owner == 1);
    CHECK(env.locate(3.5, c).owner == 2);
    CHECK(env.locate(1.0, c).owner == 1);  // boundary: right piece
    CHECK(env.locate(1.5, c).eval(1.5) == 1.5);
    CHECK(env.locate(9.0, c).owner == 2);  // clamped into range
    CHECK(c.binary_searches == 7);
}

TEST_CASE("segment envelope prefers the smaller owner on full ties") {
    std::vector<Segment> a = {{0, 3, 0.5, 0, 5, 0}};
    std::vector<Segment> b = {{0, 3, 0.5, 0, 3, 0}};
    auto env = SegmentEnvelope::build({a, b});
    REQUIRE(env.pieces().size() == 1);
    CHECK(env.pieces()[0].owner == 3);
}

TEST_CASE("segment envelope rejects zero-width segments") {
    std::vector<Segment> bad = {{1, 1, 0, 0, 1, 0}};
    CHECK_THROWS_AS((void)SegmentEnvelope::build({bad}), Error);
}

TEST_CASE("segment envelope matches brute evaluation on random curves") {
    ChecksOn on;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> slope(-3.0, 3.0);
    std::uniform_real_distribution<double> icept(-2.0, 2.0);
    std::uniform_real_distribution<double> xs(0.0, 10.0);
    for (int trial = 0; trial < 15; ++trial) {
        int curves_n = 2 + int(rng() % 7);
        std::vector<std::vector<Segment>> curves;
        for (int ci = 0; ci < curves_n; ++ci) {
            int pieces = 1 + int(rng() % 4);
            std::vector<double> cuts = {0.0, 10.0};
            for (int t = 1; t < pieces; ++t) cuts.push_back(xs(rng));
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            std::vector<Segment> cv;
            for (size_t t = 0; t + 1 < cuts.size(); ++t)
                cv.push_back({cuts[t], cuts[t + 1], slope(rng), icept(rng), ci + 1, int(t)});
            curves.push_back(std::move(cv));
        }
        auto env = SegmentEnvelope::build(curves);
        for (int t = 0; t < 60; ++t) {
            double x = xs(rng);
            double best = -1e300;
            for (const auto& cv : curves)
                for (const Segment& s : cv)
                    if (s.x0 <= x && x < s.x1) best = std::max(best, s.eval(x));
            Counters c;
            const Segment& got = env.locate(x, c);
            CHECK(got.eval(x) == doctest::Approx(best).epsilon(1e-9));
        }
        // pieces tile the range
        for (size_t i = 1; i < env.pieces().size(); ++i)
            CHECK(env.pieces()[i - 1].x1 == env.pieces()[i].x0);
    }
}

TEST_CASE("min id by key answers both sides") {
    MinIdByKey m({{1.0, 5}, {2.0, 3}, {2.0, 9}, {4.0, 1}, {7.0, 8}});
    CHECK(m.min_id_key_leq(0.5) == -1);
    CHECK(m.min_id_key_leq(1.0) == 5);
    CHECK(m.min_id_key_leq(2.0) == 3);
    CHECK(m.min_id_key_leq(100.0) == 1);
    CHECK(m.min_id_key_lt(2.0) == 5);
    CHECK(m.min_id_key_geq(2.0) == 1);
    CHECK(m.min_id_key_geq(4.5) == 8);
    CHECK(m.min_id_key_geq(8.0) == -1);
    CHECK(m.min_id_key_gt(4.0) == 8);
}
