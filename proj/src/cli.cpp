#include "uqr/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <random>
#include <string>

#include "uqr/error.hpp"
#include "uqr/generate.hpp"
#include "uqr/histogram_bounded.hpp"
#include "uqr/histogram_unbounded.hpp"
#include "uqr/io.hpp"
#include "uqr/oracle.hpp"
#include "uqr/uniform_bounded.hpp"
#include "uqr/uniform_unbounded.hpp"

namespace uqr::cli {

namespace {

struct Options {
    std::string cmd;
    std::string points;
    std::string queries;  // query: file path; validate: count
    std::string index = "auto";
    std::string engine = "auto";
    std::uint64_t seed = 42;
    std::string out_path;
};

int usage(std::ostream& err) {
    err << "usage: uqr query    --points FILE --queries FILE [--index auto|uu|ub|hu|hb]\n"
           "                    [--engine auto|heap|select|block] [--out FILE]\n"
           "       uqr validate --points FILE [--queries COUNT] [--seed N]\n"
           "       uqr bench    --points FILE|rand-uniform:N|rand-hist:N:C [--seed N]\n"
           "                    [--out FILE]\n"
           "N may be a doubling sweep A..B. Exit codes: 0 ok, 1 validation mismatch,\n"
           "2 parse or usage error, 3 capability mismatch.\n";
    return 2;
}

bool parse_options(const std::vector<std::string>& args, Options& o, std::ostream& err) {
    if (args.empty()) return false;
    o.cmd = args[0];
    for (size_t i = 1; i < args.size(); i += 2) {
        const std::string& flag = args[i];
        if (i + 1 == args.size()) {
            err << "uqr: flag " << flag << " wants a value\n";
            return false;
        }
        const std::string& val = args[i + 1];
        if (flag == "--points") {
            o.points = val;
        } else if (flag == "--queries") {
            o.queries = val;
        } else if (flag == "--index") {
            o.index = val;
        } else if (flag == "--engine") {
            o.engine = val;
        } else if (flag == "--seed") {
            try {
                o.seed = std::stoull(val);
            } catch (...) {
                err << "uqr: bad seed '" << val << "'\n";
                return false;
            }
        } else if (flag == "--out") {
            o.out_path = val;
        } else {
            err << "uqr: unknown flag " << flag << '\n';
            return false;
        }
    }
    if (o.points.empty()) {
        err << "uqr: --points is required\n";
        return false;
    }
    return true;
}

int exit_code_of(const Error& e) { return e.code() == Errc::parse_error ? 2 : 3; }

bool engine_of(const std::string& name, Engine& out) {
    if (name == "auto") out = Engine::auto_;
    else if (name == "heap") out = Engine::heap;
    else if (name == "select") out = Engine::select;
    else if (name == "block") out = Engine::block;
    else return false;
    return true;
}

bool all_uniform(const std::vector<UncertainPoint>& pts) {
    return std::all_of(pts.begin(), pts.end(), [](const UncertainPoint& p) {
        return p.is_uniform();
    });
}

bool all_histogram(const std::vector<UncertainPoint>& pts) {
    return std::all_of(pts.begin(), pts.end(), [](const UncertainPoint& p) {
        return !p.is_uniform();
    });
}

// Owns the points and builds each of the four indexes on first use. `pinned`
// routes every query to one index; "auto" picks by pdf kind and query
// boundedness.
class IndexPool {
  public:
    IndexPool(std::vector<UncertainPoint> pts, std::string pinned)
        : pts_(std::move(pts)), pinned_(std::move(pinned)) {}

    QueryResult run(const ParsedQuery& q, Engine eng) {
        std::string name = pinned_;
        if (name == "auto") {
            if (all_uniform(pts_)) name = q.interval.bounded() ? "ub" : "uu";
            else if (all_histogram(pts_)) name = q.interval.bounded() ? "hb" : "hu";
            else fail(Errc::capability_mismatch,
                      "points mix uniform and histogram pdfs; pass --index to pick one");
        }
        if (name == "uu") return dispatch(build(uu_), q, eng);
        if (name == "ub") return dispatch(build(ub_), q, eng);
        if (name == "hu") return dispatch(build(hu_), q, eng);
        if (name == "hb") return dispatch(build(hb_), q, eng);
        fail(Errc::parse_error, "unknown index '" + name + "'");
    }

  private:
    template <class Index>
    Index& build(std::unique_ptr<Index>& slot) {
        if (!slot) slot = std::make_unique<Index>(pts_);
        return *slot;
    }

    template <class Index>
    static QueryResult dispatch(const Index& idx, const ParsedQuery& q, Engine eng) {
        switch (q.kind) {
            case QueryKind::top1: return idx.top1(q.interval);
            case QueryKind::topk: return idx.topk(q.interval, q.k, eng);
            case QueryKind::thresh: return idx.threshold(q.interval, q.tau);
        }
        fail(Errc::parse_error, "unhandled query kind");
    }

    std::vector<UncertainPoint> pts_;
    std::string pinned_;
    std::unique_ptr<UniformUnboundedIndex> uu_;
    std::unique_ptr<UniformBoundedIndex> ub_;
    std::unique_ptr<HistogramUnboundedIndex> hu_;
    std::unique_ptr<HistogramBoundedIndex> hb_;
};

// Shared --out plumbing: returns the stream rows should go to.
std::ostream* open_sink(const Options& o, std::ostream& out, std::ofstream& file,
                        std::ostream& err) {
    if (o.out_path.empty()) return &out;
    file.open(o.out_path);
    if (!file) {
        err << "uqr: cannot open output file '" << o.out_path << "'\n";
        return nullptr;
    }
    return &file;
}

void print_result_line(std::ostream& out, int qid, QueryKind kind, const QueryResult& r) {
    out << qid << ' ' << kind_name(kind) << ' ' << r.items.size();
    for (const Item& it : r.items) out << ' ' << it.id << ':' << format_prob(it.prob);
    out << '\n';
}

int cmd_query(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.queries.empty()) {
        err << "uqr: query wants --queries FILE\n";
        return 2;
    }
    Engine eng;
    if (!engine_of(o.engine, eng)) {
        err << "uqr: unknown engine '" << o.engine << "'\n";
        return 2;
    }
    static const char* kIndexNames[] = {"auto", "uu", "ub", "hu", "hb"};
    if (std::find(std::begin(kIndexNames), std::end(kIndexNames), o.index) ==
        std::end(kIndexNames)) {
        err << "uqr: unknown index '" << o.index << "'\n";
        return 2;
    }
    std::ofstream file;
    std::ostream* sink = open_sink(o, out, file, err);
    if (!sink) return 2;
    try {
        IndexPool pool(parse_points_file(o.points), o.index);
        auto queries = parse_queries_file(o.queries);
        for (size_t i = 0; i < queries.size(); ++i) {
            try {
                print_result_line(*sink, int(i) + 1, queries[i].kind,
                                  pool.run(queries[i], eng));
            } catch (const Error& e) {
                err << "uqr: query " << i + 1 << ": " << e.what() << '\n';
                return exit_code_of(e);
            }
        }
    } catch (const Error& e) {
        err << "uqr: " << e.what() << '\n';
        return exit_code_of(e);
    }
    return 0;
}

// ---- validate ----

struct EngineRun {
    const char* index;
    bool bounded;
    std::vector<Engine> engines;
};

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::auto_: return "auto";
        case Engine::heap: return "heap";
        case Engine::select: return "select";
        case Engine::block: return "block";
    }
    return "?";
}

std::string items_text(const std::vector<Item>& items) {
    std::string s;
    for (const Item& it : items) {
        if (!s.empty()) s += ' ';
        s += std::to_string(it.id) + ':' + format_prob(it.prob);
    }
    return s.empty() ? "(none)" : s;
}

struct ValidateCtx {
    const std::vector<UncertainPoint>& pts;
    std::uint64_t seed;
    std::ostream& out;
    long checks = 0;
    long mismatches = 0;

    void report(const char* index, Engine eng, const char* kind, const QueryInterval& I,
                const std::string& param, const std::vector<Item>& got,
                const std::vector<Item>& want) {
        ++mismatches;
        if (mismatches > 25) return;  // keep the report readable
        out << "mismatch: index=" << index << " engine=" << engine_name(eng) << " kind=" << kind
            << " seed=" << seed << " interval=[" << format_real(I.lo) << ',' << format_real(I.hi)
            << ']' << param << "\n  got:  " << items_text(got) << "\n  want: " << items_text(want)
            << '\n';
    }
};

template <class Index>
void validate_index(ValidateCtx& ctx, const Index& idx, const EngineRun& runs, int count,
                    std::mt19937_64& rng, double band_lo, double band_hi) {
    auto coord = [&] { return band_lo + (band_hi - band_lo) * unit_real(rng); };
    auto interval = [&](int salt) {
        if (runs.bounded) {
            double a = coord(), b = coord();
            if (salt % 13 == 0) b = a;  // degenerate
            if (a > b) std::swap(a, b);
            return make_interval(a, b);
        }
        if (salt % 17 == 0) return make_interval(-kInf, kInf);
        double x = coord();
        return (rng() & 1) ? make_interval(-kInf, x) : make_interval(x, kInf);
    };
    int n = int(ctx.pts.size());
    for (int i = 0; i < count; ++i) {
        QueryInterval I = interval(i);
        ++ctx.checks;
        QueryResult r1 = idx.top1(I);
        if (r1.items.size() != 1 || !top1_matches(r1.items[0], ctx.pts, I))
            ctx.report(runs.index, Engine::auto_, "top1", I, "", r1.items,
                       {brute_top1(ctx.pts, I)});
    }
    for (int i = 0; i < count; ++i) {
        QueryInterval I = interval(i + 1);
        int k = 1 + int(rng() % std::uint64_t(std::min(n, 64)));
        for (Engine eng : runs.engines) {
            ++ctx.checks;
            QueryResult r = idx.topk(I, k, eng);
            if (!topk_matches(r.items, ctx.pts, I, k))
                ctx.report(runs.index, eng, "topk", I, " k=" + std::to_string(k), r.items,
                           brute_topk(ctx.pts, I, k));
        }
    }
    for (int i = 0; i < count; ++i) {
        QueryInterval I = interval(i + 2);
        double tau;
        switch (i % 4) {
            case 0: tau = 0.0; break;
            case 1: tau = 1.0; break;
            case 2:
                tau = interval_probability(ctx.pts[rng() % ctx.pts.size()], I);
                break;
            default: tau = unit_real(rng); break;
        }
        ++ctx.checks;
        QueryResult r = idx.threshold(I, tau);
        if (!threshold_matches(r.items, ctx.pts, I, tau))
            ctx.report(runs.index, Engine::auto_, "thresh", I, " tau=" + format_real(tau),
                       r.items, brute_threshold(ctx.pts, I, tau));
    }
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
    int count = 100;
    if (!o.queries.empty()) {
        auto [p, ec] = std::from_chars(o.queries.data(), o.queries.data() + o.queries.size(),
                                       count);
        if (ec != std::errc() || p != o.queries.data() + o.queries.size() || count < 1) {
            err << "uqr: validate wants a positive --queries count\n";
            return 2;
        }
    }
    std::vector<UncertainPoint> pts;
    try {
        pts = parse_points_file(o.points);
    } catch (const Error& e) {
        err << "uqr: " << e.what() << '\n';
        return exit_code_of(e);
    }
    if (pts.empty()) {
        err << "uqr: points file has no records\n";
        return 2;
    }
    std::vector<EngineRun> plan;
    if (all_uniform(pts)) {
        plan = {{"uu", false, {Engine::heap, Engine::select}},
                {"ub", true, {Engine::heap, Engine::block}}};
    } else if (all_histogram(pts)) {
        plan = {{"hu", false, {Engine::heap, Engine::block}},
                {"hb", true, {Engine::auto_}}};
    } else {
        err << "uqr: points mix uniform and histogram pdfs\n";
        return 3;
    }
    double band_lo = kInf, band_hi = -kInf;
    for (const UncertainPoint& p : pts) {
        band_lo = std::min(band_lo, p.support_lo);
        band_hi = std::max(band_hi, p.support_hi);
    }
    double pad = 0.1 * (band_hi - band_lo) + 1.0;
    band_lo -= pad;
    band_hi += pad;

    ValidateCtx ctx{pts, o.seed, out};
    std::mt19937_64 rng(o.seed);
    for (const EngineRun& runs : plan) {
        if (std::string(runs.index) == "uu")
            validate_index(ctx, UniformUnboundedIndex(pts), runs, count, rng, band_lo, band_hi);
        else if (std::string(runs.index) == "ub")
            validate_index(ctx, UniformBoundedIndex(pts), runs, count, rng, band_lo, band_hi);
        else if (std::string(runs.index) == "hu")
            validate_index(ctx, HistogramUnboundedIndex(pts), runs, count, rng, band_lo, band_hi);
        else
            validate_index(ctx, HistogramBoundedIndex(pts), runs, count, rng, band_lo, band_hi);
    }
    out << "validate: points=" << pts.size() << " queries-per-type=" << count
        << " seed=" << o.seed << " checks=" << ctx.checks << " mismatches=" << ctx.mismatches
        << '\n';
    return ctx.mismatches == 0 ? 0 : 1;
}

// ---- bench ----

struct BenchRow {
    std::string case_name;
    int n;
    std::string param;
    const char* engine;
    double build_ms;
    double p50_us;
    std::uint64_t comparisons;
    std::uint64_t bridge_steps;
    std::uint64_t reported;
};

void print_row(std::ostream& out, const BenchRow& r) {
    char num[64];
    out << r.case_name << ',' << r.n << ',' << r.param << ',' << r.engine << ',';
    std::snprintf(num, sizeof num, "%.3f", r.build_ms);
    out << num << ',';
    std::snprintf(num, sizeof num, "%.3f", r.p50_us);
    out << num << ',' << r.comparisons << ',' << r.bridge_steps << ',' << r.reported << '\n';
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Runs one batch of queries through `fn(interval, counters)` and fills the
// timing and counter columns.
template <class Fn>
BenchRow bench_batch(const std::string& case_name, int n, std::string param, const char* engine,
                     double build_ms, bool bounded, std::uint64_t seed, Fn&& fn) {
    constexpr int kBatch = 256;
    std::mt19937_64 rng(seed);
    auto coord = [&] { return -110.0 + 400.0 * unit_real(rng); };
    BenchRow row{case_name, n, std::move(param), engine, build_ms, 0.0, 0, 0, 0};
    std::vector<double> us;
    us.reserve(kBatch);
    for (int i = 0; i < kBatch; ++i) {
        QueryInterval I;
        if (bounded) {
            double a = coord(), b = coord();
            if (a > b) std::swap(a, b);
            I = make_interval(a, b);
        } else {
            double x = coord();
            I = (rng() & 1) ? make_interval(-kInf, x) : make_interval(x, kInf);
        }
        auto t0 = std::chrono::steady_clock::now();
        QueryResult r = fn(I);
        us.push_back(ms_since(t0) * 1000.0);
        row.comparisons += std::uint64_t(r.counters.comparisons);
        row.bridge_steps += std::uint64_t(r.counters.bridge_steps);
        row.reported += std::uint64_t(r.items.size());
    }
    std::nth_element(us.begin(), us.begin() + kBatch / 2, us.end());
    row.p50_us = us[kBatch / 2];
    return row;
}

template <class Index>
void bench_index(std::ostream& out, const char* name, const Index& idx, double build_ms, int n,
                 bool bounded, const std::vector<Engine>& engines, std::uint64_t seed) {
    for (int k : {1, 16, 64}) {
        if (k > n) continue;
        for (Engine eng : engines) {
            auto row = bench_batch(std::string(name) + "_topk", n, std::to_string(k),
                                   engine_name(eng), build_ms, bounded, seed,
                                   [&](const QueryInterval& I) { return idx.topk(I, k, eng); });
            print_row(out, row);
        }
    }
    auto row = bench_batch(std::string(name) + "_thresh", n, format_real(0.25), "auto", build_ms,
                           bounded, seed,
                           [&](const QueryInterval& I) { return idx.threshold(I, 0.25); });
    print_row(out, row);
}

template <class Index>
double timed_build(std::unique_ptr<Index>& slot, const std::vector<UncertainPoint>& pts) {
    auto t0 = std::chrono::steady_clock::now();
    slot = std::make_unique<Index>(pts);
    return ms_since(t0);
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
    GenSpec spec;
    std::vector<UncertainPoint> file_pts;
    try {
        if (looks_like_gen_spec(o.points)) {
            spec = parse_gen_spec(o.points);
        } else {
            file_pts = parse_points_file(o.points);
            if (file_pts.empty()) {
                err << "uqr: points file has no records\n";
                return 2;
            }
            if (!all_uniform(file_pts) && !all_histogram(file_pts)) {
                err << "uqr: points mix uniform and histogram pdfs\n";
                return 3;
            }
            spec.histogram = all_histogram(file_pts);
            spec.sizes = {int(file_pts.size())};
        }
    } catch (const Error& e) {
        err << "uqr: " << e.what() << '\n';
        return exit_code_of(e);
    }
    std::ofstream file;
    std::ostream* sink = open_sink(o, out, file, err);
    if (!sink) return 2;
    *sink << "case,n,param,engine,build_ms,query_us_p50,comparisons,bridge_steps,reported\n";
    for (int n : spec.sizes) {
        std::vector<UncertainPoint> pts =
            !file_pts.empty() ? file_pts
            : spec.histogram  ? gen_histogram_points(n, spec.pieces, o.seed + std::uint64_t(n))
                              : gen_uniform_points(n, o.seed + std::uint64_t(n));
        std::uint64_t qseed = o.seed * 0x9e3779b97f4a7c15ULL + std::uint64_t(n);
        if (spec.histogram) {
            std::unique_ptr<HistogramUnboundedIndex> hu;
            std::unique_ptr<HistogramBoundedIndex> hb;
            double hu_ms = timed_build(hu, pts);
            double hb_ms = timed_build(hb, pts);
            bench_index(*sink, "hu", *hu, hu_ms, n, false, {Engine::heap, Engine::block}, qseed);
            bench_index(*sink, "hb", *hb, hb_ms, n, true, {Engine::auto_}, qseed + 1);
        } else {
            std::unique_ptr<UniformUnboundedIndex> uu;
            std::unique_ptr<UniformBoundedIndex> ub;
            double uu_ms = timed_build(uu, pts);
            double ub_ms = timed_build(ub, pts);
            bench_index(*sink, "uu", *uu, uu_ms, n, false, {Engine::heap, Engine::select}, qseed);
            bench_index(*sink, "ub", *ub, ub_ms, n, true, {Engine::heap, Engine::block}, qseed + 1);
        }
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    if (!parse_options(args, o, err)) return usage(err);
    try {
        if (o.cmd == "query") return cmd_query(o, out, err);
        if (o.cmd == "validate") return cmd_validate(o, out, err);
        if (o.cmd == "bench") return cmd_bench(o, out, err);
    } catch (const Error& e) {
        err << "uqr: " << e.what() << '\n';
        return exit_code_of(e);
    }
    err << "uqr: unknown command '" << o.cmd << "'\n";
    return usage(err);
}

}  // namespace uqr::cli
