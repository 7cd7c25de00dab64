// Acceptance harness: six criteria, one PASS/FAIL line each, nonzero exit on
// any failure. Library invariant checks stay enabled for the whole oracle
// workload, so the structural criterion rides on the same queries.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "uqr/cli.hpp"
#include "uqr/envelope.hpp"
#include "uqr/error.hpp"
#include "uqr/generate.hpp"
#include "uqr/halfplane.hpp"
#include "uqr/histogram_bounded.hpp"
#include "uqr/histogram_unbounded.hpp"
#include "uqr/io.hpp"
#include "uqr/oracle.hpp"
#include "uqr/persistent_envelope.hpp"
#include "uqr/uniform_bounded.hpp"
#include "uqr/uniform_unbounded.hpp"

using namespace uqr;

namespace {

struct Tally {
    bool ok = true;
    std::string detail;
    long checks = 0;

    void fail(const std::string& why) {
        if (ok) detail = why;  // keep the first failure
        ok = false;
    }
};

int ceil_log2(size_t n) {
    int b = 0;
    while ((size_t(1) << b) < n) ++b;
    return b;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

QueryInterval rand_unbounded(std::mt19937_64& rng, double lo, double hi, int salt) {
    if (salt % 17 == 0) return make_interval(-kInf, kInf);
    double x = lo + (hi - lo) * unit_real(rng);
    return (rng() & 1) ? make_interval(-kInf, x) : make_interval(x, kInf);
}

QueryInterval rand_bounded(std::mt19937_64& rng, double lo, double hi, int salt) {
    double a = lo + (hi - lo) * unit_real(rng);
    double b = salt % 13 == 0 ? a : lo + (hi - lo) * unit_real(rng);
    if (a > b) std::swap(a, b);
    return make_interval(a, b);
}

void support_band(const std::vector<UncertainPoint>& pts, double& lo, double& hi) {
    lo = kInf;
    hi = -kInf;
    for (const auto& p : pts) {
        lo = std::min(lo, p.support_lo);
        hi = std::max(hi, p.support_hi);
    }
    double pad = 0.1 * (hi - lo) + 1.0;
    lo -= pad;
    hi += pad;
}

double rand_tau(std::mt19937_64& rng, const std::vector<UncertainPoint>& pts,
                const QueryInterval& I, int salt) {
    switch (salt % 4) {
        case 0: return 0.0;
        case 1: return 1.0;
        case 2: return interval_probability(pts[rng() % pts.size()], I);
        default: return unit_real(rng);
    }
}

// Violations of the merge extraction bound observed while the oracle
// criterion runs; criterion 3 reports them.
struct StructuralNotes {
    long full_extraction_violations = 0;
    std::string check_failure;
};

// ---- criterion 1: oracle equivalence (and the checked workload for 3) ----

template <class Index>
void oracle_family(Tally& t, StructuralNotes& notes, const char* name, bool histogram,
                   bool bounded, const std::vector<std::pair<int, int>>& schedule,
                   std::uint64_t seed0, long& instances, long& queries) {
    int inst = 0;
    for (auto [n, copies] : schedule) {
        for (int r = 0; r < copies; ++r, ++inst) {
            std::uint64_t seed = seed0 + std::uint64_t(inst);
            auto pts = histogram ? gen_histogram_points(n, 2 << (inst % 3), seed)
                                 : gen_uniform_points(n, seed);
            Index idx(pts);
            ++instances;
            double lo, hi;
            support_band(pts, lo, hi);
            std::mt19937_64 rng(seed ^ 0xabcdef);
            int lambda = std::max(1, ceil_log2(pts.size()));
            for (int q = 0; q < 100; ++q) {
                QueryInterval top_i =
                    bounded ? rand_bounded(rng, lo, hi, q) : rand_unbounded(rng, lo, hi, q);
                QueryResult r1 = idx.top1(top_i);
                ++queries;
                if (r1.items.size() != 1 || !top1_matches(r1.items[0], pts, top_i))
                    t.fail(std::string(name) + " top1 mismatch, seed " + std::to_string(seed));

                QueryInterval topk_i =
                    bounded ? rand_bounded(rng, lo, hi, q + 1) : rand_unbounded(rng, lo, hi, q + 1);
                int k = 1 + int(rng() % std::uint64_t(std::min(n, 128)));
                QueryResult rk = idx.topk(topk_i, k);
                ++queries;
                if (!topk_matches(rk.items, pts, topk_i, k))
                    t.fail(std::string(name) + " topk mismatch, seed " + std::to_string(seed) +
                           ", k " + std::to_string(k));
                if (std::string(name) == "hb" &&
                    rk.counters.full_extractions > (k + lambda - 1) / lambda + 1)
                    ++notes.full_extraction_violations;

                QueryInterval th_i =
                    bounded ? rand_bounded(rng, lo, hi, q + 2) : rand_unbounded(rng, lo, hi, q + 2);
                double tau = rand_tau(rng, pts, th_i, q);
                QueryResult rt = idx.threshold(th_i, tau);
                ++queries;
                if (!threshold_matches(rt.items, pts, th_i, tau))
                    t.fail(std::string(name) + " threshold mismatch, seed " + std::to_string(seed) +
                           ", tau " + format_real(tau));
            }
        }
    }
}

Tally criterion_oracle(StructuralNotes& notes) {
    Tally t;
    set_checks_enabled(true);
    long instances = 0, queries = 0;
    std::vector<std::pair<int, int>> common = {{16, 140}, {256, 45}, {2048, 15}};
    std::vector<std::pair<int, int>> hb_sched = {{16, 150}, {256, 40}, {2048, 10}};
    try {
        oracle_family<UniformUnboundedIndex>(t, notes, "uu", false, false, common, 101, instances,
                                             queries);
        oracle_family<UniformBoundedIndex>(t, notes, "ub", false, true, common, 202, instances,
                                           queries);
        oracle_family<HistogramUnboundedIndex>(t, notes, "hu", true, false, common, 303, instances,
                                               queries);
        oracle_family<HistogramBoundedIndex>(t, notes, "hb", true, true, hb_sched, 404, instances,
                                             queries);
    } catch (const CheckFailure& e) {
        notes.check_failure = e.what();
        t.fail(std::string("invariant check tripped: ") + e.what());
    }
    set_checks_enabled(false);
    t.checks = queries;
    if (t.ok)
        t.detail = std::to_string(instances) + " instances, " + std::to_string(queries) +
                   " queries matched";
    return t;
}

// ---- criterion 2: engine agreement ----

bool same_items(const std::vector<Item>& a, const std::vector<Item>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].id != b[i].id || a[i].prob != b[i].prob) return false;
    return true;
}

template <class Index>
long agree_family(Tally& t, const char* name, bool histogram, bool bounded, Engine e1, Engine e2,
                  long triples, std::uint64_t seed0) {
    long done = 0;
    std::mt19937_64 rng(seed0);
    while (done < triples) {
        int n = 4 + int(rng() % 200);
        auto pts = histogram ? gen_histogram_points(n, 1 + int(rng() % 8), rng())
                             : gen_uniform_points(n, rng());
        Index idx(pts);
        double lo, hi;
        support_band(pts, lo, hi);
        for (int q = 0; q < 40 && done < triples; ++q, ++done) {
            QueryInterval I =
                bounded ? rand_bounded(rng, lo, hi, q) : rand_unbounded(rng, lo, hi, q);
            int k = 1 + int(rng() % std::uint64_t(n));
            QueryResult r1 = idx.topk(I, k, e1);
            QueryResult r2 = idx.topk(I, k, e2);
            if (!same_items(r1.items, r2.items))
                t.fail(std::string(name) + " engines disagree, n " + std::to_string(n) + ", k " +
                       std::to_string(k));
        }
    }
    return done;
}

Tally criterion_engines() {
    Tally t;
    long total = 0;
    total += agree_family<UniformUnboundedIndex>(t, "uu", false, false, Engine::heap,
                                                 Engine::select, 3334, 11);
    total += agree_family<UniformBoundedIndex>(t, "ub", false, true, Engine::heap, Engine::block,
                                               3333, 22);
    total += agree_family<HistogramUnboundedIndex>(t, "hu", true, false, Engine::heap,
                                                   Engine::block, 3333, 33);
    t.checks = total;
    if (t.ok) t.detail = std::to_string(total) + " triples agreed exactly";
    return t;
}

// ---- criterion 3: structural invariants ----

std::vector<Line> rand_lines(std::mt19937_64& rng, int n) {
    std::vector<Line> ls;
    ls.reserve(size_t(n));
    for (int i = 0; i < n; ++i) {
        double a = double(int(rng() % 17)) - 8.0;
        double b = double(int(rng() % 33)) - 16.0;
        ls.push_back(Line{a / 4.0, b / 2.0, i + 1, 0, -1});
    }
    return ls;
}

void check_layers_and_cascade(Tally& t, std::mt19937_64& rng) {
    set_checks_enabled(true);
    for (int trial = 0; trial < 60 && t.ok; ++trial) {
        int n = 2 + int(rng() % 120);
        auto lines = rand_lines(rng, n);
        auto reps = dedup_lines(lines);
        auto layers = peel_layers(reps.lines);

        // partition: every representative in exactly one layer
        long placed = 0;
        for (const auto& chain : layers) {
            std::vector<const Line*> distinct;
            for (const Line& l : chain.lines)
                if (distinct.empty() || !same_line(*distinct.back(), l)) distinct.push_back(&l);
            placed += long(distinct.size());
        }
        if (placed != long(reps.lines.size()))
            t.fail("layer peel lost or duplicated a line, n " + std::to_string(n));

        LayeredHalfplaneIndex idx(lines);
        Counters c;
        for (int qi = 0; qi < 25 && t.ok; ++qi) {
            double x = -20.0 + 40.0 * unit_real(rng);
            // cascade walk against an independent binary search per layer
            auto walk = idx.cascade().walk_from_top(x, c);
            for (size_t ell = 0;; ++ell) {
                if (walk.piece() != idx.layers()[ell].top_piece(x)) {
                    t.fail("cascade walk and per-layer search split at layer " +
                           std::to_string(ell));
                    break;
                }
                // layer envelopes stack downward
                if (ell > 0 &&
                    idx.layers()[ell].eval(x) > idx.layers()[ell - 1].eval(x))
                    t.fail("layer " + std::to_string(ell) + " tops its parent");
                if (walk.last_layer()) break;
                walk.descend(c);
            }
            ++t.checks;
            // report_above against a direct scan
            double y = idx.layers()[0].eval(x) - 3.0 * unit_real(rng);
            std::vector<int> got;
            idx.report_above(x, y, got, c);
            std::vector<int> want;
            for (const Line& l : lines)
                if (l.eval(x) >= y) want.push_back(l.owner);
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            got.erase(std::unique(got.begin(), got.end()), got.end());
            want.erase(std::unique(want.begin(), want.end()), want.end());
            if (got != want) t.fail("cascade report missed lines at x " + format_real(x));
        }
    }
    set_checks_enabled(false);
}

void check_versions_against_rebuild(Tally& t, std::mt19937_64& rng) {
    for (int n = 1; n <= 64 && t.ok; ++n) {
        auto lines = rand_lines(rng, n);
        auto suff = PersistentEnvelope::over_suffixes(lines);
        auto pref = PersistentEnvelope::over_prefixes(lines);
        if (suff.versions() != n + 1 || pref.versions() != n + 1) {
            t.fail("unexpected version count at n " + std::to_string(n));
            break;
        }
        Counters c;
        for (int v = 0; v <= n; ++v) {
            for (int s = 0; s < 5; ++s) {
                double x = -12.0 + 24.0 * unit_real(rng);
                auto brute = [&](size_t from, size_t to) {
                    double best = -kInf;
                    for (size_t j = from; j < to; ++j) best = std::max(best, lines[j].eval(x));
                    return best;
                };
                const Line* ts = suff.top(v, x, c);
                double ws = brute(size_t(v), lines.size());
                if ((ts == nullptr) != (v == n) || (ts && ts->eval(x) != ws))
                    t.fail("suffix version " + std::to_string(v) + " of " + std::to_string(n) +
                           " disagrees with a rebuild");
                const Line* tp = pref.top(v, x, c);
                double wp = brute(0, size_t(v));
                if ((tp == nullptr) != (v == 0) || (tp && tp->eval(x) != wp))
                    t.fail("prefix version " + std::to_string(v) + " of " + std::to_string(n) +
                           " disagrees with a rebuild");
                t.checks += 2;
            }
        }
    }
}

Tally criterion_structure(const StructuralNotes& notes) {
    Tally t;
    if (!notes.check_failure.empty())
        t.fail("invariant check tripped during the oracle workload: " + notes.check_failure);
    if (notes.full_extraction_violations > 0)
        t.fail(std::to_string(notes.full_extraction_violations) +
               " merge runs exceeded the extraction budget");
    std::mt19937_64 rng(77);
    check_layers_and_cascade(t, rng);
    check_versions_against_rebuild(t, rng);
    if (t.ok)
        t.detail = "zero check failures on the oracle workload, " + std::to_string(t.checks) +
                   " direct structure probes";
    return t;
}

// ---- criterion 4: counter scaling ----

Tally criterion_scaling() {
    Tally t;
    auto mean_accesses = [&](int n, int k, std::uint64_t seed) {
        auto pts = gen_uniform_points(n, seed);
        UniformUnboundedIndex idx(pts);
        double lo, hi;
        support_band(pts, lo, hi);
        std::mt19937_64 rng(seed * 3 + 1);
        double total = 0.0;
        for (int q = 0; q < 100; ++q) {
            QueryResult r = idx.topk(rand_unbounded(rng, lo, hi, q + 1), k, Engine::select);
            total += double(r.counters.element_accesses);
        }
        ++t.checks;
        return total / 100.0;
    };

    double prev = -1.0;
    for (int e = 10; e <= 16; ++e) {
        double m = mean_accesses(1 << e, 16, 555 + std::uint64_t(e));
        if (prev >= 0.0 && m > prev + 8.0)
            t.fail("mean accesses jumped " + format_real(m - prev) + " on doubling to n 2^" +
                   std::to_string(e));
        prev = m;
    }

    int n14 = 1 << 14;
    std::vector<int> ks = {1, 2, 4, 8, 16, 32, 64, 128};
    double prev_m = -1.0;
    int prev_k = 0;
    for (int k : ks) {
        double m = mean_accesses(n14, k, 919);
        if (prev_m >= 0.0 && m - prev_m > 8.0 * double(k - prev_k))
            t.fail("mean accesses grew " + format_real(m - prev_m) + " from k " +
                   std::to_string(prev_k) + " to " + std::to_string(k));
        prev_m = m;
        prev_k = k;
    }

    for (int e = 10; e <= 16 && t.ok; ++e) {
        int n = 1 << e;
        auto pts = gen_uniform_points(n, 2222 + std::uint64_t(e));
        UniformUnboundedIndex idx(pts);
        double lo, hi;
        support_band(pts, lo, hi);
        std::mt19937_64 rng(31 * std::uint64_t(e));
        for (int q = 0; q < 100; ++q) {
            QueryInterval I = rand_unbounded(rng, lo, hi, q + 1);
            double tau = q % 2 ? 0.05 + 0.9 * unit_real(rng) : 0.5;
            QueryResult r = idx.threshold(I, tau);
            ++t.checks;
            double budget = 8.0 * (double(r.items.size()) + double(e));
            if (double(r.counters.comparisons) > budget) {
                t.fail("threshold used " + std::to_string(r.counters.comparisons) +
                       " comparisons for m " + std::to_string(r.items.size()) + " at n 2^" +
                       std::to_string(e));
                break;
            }
        }
    }
    if (t.ok)
        t.detail = "select accesses grow at most 8 per doubling and 8 per unit k; threshold stays "
                   "under 8(m+log2 n) comparisons";
    return t;
}

// ---- criterion 5: exactness identities ----

Tally criterion_exactness() {
    Tally t;
    std::mt19937_64 rng(4242);
    std::vector<UncertainPoint> pool = gen_uniform_points(60, 91);
    for (int c : {2, 4, 8}) {
        auto more = gen_histogram_points(60, c, 92 + std::uint64_t(c));
        pool.insert(pool.end(), more.begin(), more.end());
    }
    double lo, hi;
    support_band(pool, lo, hi);

    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const UncertainPoint& p = pool[rng() % pool.size()];
        double a = lo + (hi - lo) * unit_real(rng);
        double b = lo + (hi - lo) * unit_real(rng);
        double m = lo + (hi - lo) * unit_real(rng);
        if (i % 9 == 0) a = -kInf;
        if (i % 11 == 0) b = kInf;
        double x[3] = {a, m, b};
        std::sort(x, x + 3);
        double whole = interval_probability(p, make_interval(x[0], x[2]));
        double parts = interval_probability(p, make_interval(x[0], x[1])) +
                       interval_probability(p, make_interval(x[1], x[2]));
        worst = std::max(worst, std::fabs(whole - parts));
        ++t.checks;
    }
    if (worst > 1e-9) t.fail("additivity drift " + format_real(worst));

    // plane heights versus the model, bit for bit
    long plane_checks = 0;
    for (int trial = 0; trial < 30 && t.ok; ++trial) {
        int n = 2 + int(rng() % 60);
        auto pts = gen_histogram_points(n, 2 + int(rng() % 7), 7000 + std::uint64_t(trial));
        HistogramBoundedIndex idx(pts);
        double blo, bhi;
        support_band(pts, blo, bhi);
        for (int q = 0; q < 20 && t.ok; ++q) {
            QueryInterval I = rand_bounded(rng, blo, bhi, q + 1);
            Counters c;
            for (const PlaneSet* set : idx.canonical_sets(I, c)) {
                auto all = set->t_highest(I.lo, I.hi, set->size(), c);
                for (const auto& [z, owner] : all) {
                    const UncertainPoint& p = idx.points()[size_t(owner - 1)];
                    if (z != p.cdf.eval(I.hi) - p.cdf.eval(I.lo))
                        t.fail("plane height is not the cdf difference for point " +
                               std::to_string(owner));
                    ++plane_checks;
                }
            }
        }
    }
    t.checks += plane_checks;

    // clamping may merge probabilities but never reorder them
    long pair_checks = 0;
    for (int trial = 0; trial < 40 && t.ok; ++trial) {
        bool uniform = trial & 1;
        int n = 2 + int(rng() % 40);
        auto pts = uniform ? gen_uniform_points(n, 8100 + std::uint64_t(trial))
                           : gen_histogram_points(n, 2 + int(rng() % 7),
                                                  8200 + std::uint64_t(trial));
        double blo, bhi;
        support_band(pts, blo, bhi);
        for (int q = 0; q < 25 && t.ok; ++q) {
            QueryInterval I = rand_bounded(rng, blo, bhi, q + 1);
            std::vector<double> raw(pts.size()), cl(pts.size());
            for (size_t j = 0; j < pts.size(); ++j) {
                raw[j] = pts[j].cdf.eval(I.hi) - pts[j].cdf.eval(I.lo);
                cl[j] = interval_probability(pts[j], I);
            }
            for (size_t a2 = 0; a2 < pts.size() && t.ok; ++a2)
                for (size_t b2 = a2 + 1; b2 < pts.size(); ++b2) {
                    ++pair_checks;
                    if ((cl[a2] - cl[b2]) * (raw[a2] - raw[b2]) < 0.0) {
                        t.fail("clamping inverted points " + std::to_string(pts[a2].id) + " and " +
                               std::to_string(pts[b2].id));
                        break;
                    }
                }
        }
    }
    t.checks += pair_checks;
    if (t.ok)
        t.detail = "additivity within 1e-9 (worst " + format_real(worst) + "), " +
                   std::to_string(plane_checks) + " plane identities exact, " +
                   std::to_string(pair_checks) + " clamp pairs order-safe";
    return t;
}

// ---- criterion 6: CLI contract ----

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Tally criterion_cli() {
    Tally t;
    for (const char* name : {"/d1_points.txt", "/d2_points.txt"}) {
        std::string path = std::string(UQR_FIXTURE_DIR) + name;
        auto pts = parse_points_file(path);
        std::ostringstream once;
        print_points(pts, once);
        std::istringstream back(once.str());
        std::ostringstream twice;
        print_points(parse_points(back), twice);
        ++t.checks;
        if (once.str() != twice.str()) t.fail(std::string("round trip drifted for ") + name);
    }

    auto run = [&](const std::vector<std::string>& args, std::string* out_text = nullptr) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        if (out_text) *out_text = out.str();
        ++t.checks;
        return code;
    };
    std::string d1 = std::string(UQR_FIXTURE_DIR) + "/d1_points.txt";
    if (run({"validate", "--points", d1, "--queries", "25", "--seed", "5"}) != 0)
        t.fail("validate on a good file must exit 0");
    std::string bad_path = "/tmp/uqr_acceptance_bad.txt";
    {
        std::ofstream f(bad_path);
        f << "1 u 0 2\nbroken line\n";
    }
    if (run({"validate", "--points", bad_path}) != 2)
        t.fail("validate on a corrupt file must exit 2");
    std::remove(bad_path.c_str());

    std::string bench_out;
    if (run({"bench", "--points", "rand-uniform:32", "--seed", "4"}, &bench_out) != 0)
        t.fail("bench on a generator spec must exit 0");
    std::string header = bench_out.substr(0, bench_out.find('\n'));
    if (header != "case,n,param,engine,build_ms,query_us_p50,comparisons,bridge_steps,reported")
        t.fail("bench header drifted: " + header);
    if (t.ok) t.detail = "round trips byte-exact, exit codes and bench header as pinned";
    return t;
}

}  // namespace

int main() {
    struct Row {
        const char* name;
        Tally tally;
        double seconds;
    };
    std::vector<Row> rows;
    StructuralNotes notes;
    auto run = [&](const char* name, auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        Tally t = fn();
        rows.push_back({name, std::move(t), elapsed_s(t0)});
    };
    run("oracle equivalence", [&] { return criterion_oracle(notes); });
    run("engine agreement", [] { return criterion_engines(); });
    run("structural invariants", [&] { return criterion_structure(notes); });
    run("counter scaling", [] { return criterion_scaling(); });
    run("exactness identities", [] { return criterion_exactness(); });
    run("cli contract", [] { return criterion_cli(); });

    bool all_ok = true;
    for (size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        all_ok = all_ok && r.tally.ok;
        std::printf("[%s] criterion %zu: %s (%s; %.1f s)\n", r.tally.ok ? "PASS" : "FAIL", i + 1,
                    r.name, r.tally.detail.c_str(), r.seconds);
    }
    std::printf("acceptance: %zu criteria, %s\n", rows.size(), all_ok ? "all passed" : "FAILED");
    return all_ok ? 0 : 1;
}
