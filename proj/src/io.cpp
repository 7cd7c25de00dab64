#include "uqr/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "uqr/error.hpp"

namespace uqr {

namespace {

[[noreturn]] void bad_line(int line, const std::string& why) {
    fail(Errc::parse_error, "line " + std::to_string(line) + ": " + why);
}

double parse_real(const std::string& tok, int line) {
    if (tok == "-inf") return -kInf;
    if (tok == "+inf" || tok == "inf") return kInf;
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        bad_line(line, "bad real '" + tok + "'");
    return v;
}

int parse_int(const std::string& tok, int line, const char* what) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        bad_line(line, std::string("bad ") + what + " '" + tok + "'");
    return v;
}

// One record per line, '#' to end of line is a comment.
std::vector<std::string> tokens_of(std::string raw) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(std::move(t));
    return toks;
}

UncertainPoint parse_point_record(const std::vector<std::string>& toks, int line) {
    int id = parse_int(toks[0], line, "point id");
    const std::string& kind = toks[1];
    try {
        if (kind == "u") {
            if (toks.size() != 4) bad_line(line, "uniform record wants `id u LO HI`");
            return make_point(id, UniformPdf{parse_real(toks[2], line), parse_real(toks[3], line)});
        }
        if (kind == "h") {
            HistogramPdf pdf;
            size_t t = 2;
            for (; t < toks.size() && toks[t] != "|"; ++t)
                pdf.breaks.push_back(parse_real(toks[t], line));
            if (t == toks.size()) bad_line(line, "histogram record has no `|`");
            for (++t; t < toks.size(); ++t) pdf.densities.push_back(parse_real(toks[t], line));
            return make_point(id, std::move(pdf));
        }
    } catch (const Error& e) {
        if (e.code() == Errc::parse_error) throw;
        bad_line(line, e.what());
    }
    bad_line(line, "record kind must be `u` or `h`, got '" + kind + "'");
}

}  // namespace

std::vector<UncertainPoint> parse_points(std::istream& in) {
    std::vector<UncertainPoint> pts;
    std::set<int> seen;
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        auto toks = tokens_of(std::move(raw));
        if (toks.empty()) continue;
        if (toks.size() < 2) bad_line(line, "point record wants at least `id kind`");
        UncertainPoint p = parse_point_record(toks, line);
        if (!seen.insert(p.id).second)
            bad_line(line, "duplicate point id " + std::to_string(p.id));
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<UncertainPoint> parse_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::parse_error, "cannot open points file '" + path + "'");
    return parse_points(in);
}

void print_points(const std::vector<UncertainPoint>& pts, std::ostream& out) {
    for (const UncertainPoint& p : pts) {
        out << p.id;
        if (p.is_uniform()) {
            const auto& u = std::get<UniformPdf>(p.pdf);
            out << " u " << format_real(u.lo) << ' ' << format_real(u.hi);
        } else {
            const auto& h = std::get<HistogramPdf>(p.pdf);
            out << " h";
            for (double b : h.breaks) out << ' ' << format_real(b);
            out << " |";
            for (double d : h.densities) out << ' ' << format_real(d);
        }
        out << '\n';
    }
}

std::vector<ParsedQuery> parse_queries(std::istream& in) {
    std::vector<ParsedQuery> qs;
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        auto toks = tokens_of(std::move(raw));
        if (toks.empty()) continue;
        ParsedQuery q;
        size_t want = 0;
        if (toks[0] == "top1") {
            q.kind = QueryKind::top1;
            want = 3;
        } else if (toks[0] == "topk") {
            q.kind = QueryKind::topk;
            want = 4;
        } else if (toks[0] == "thresh") {
            q.kind = QueryKind::thresh;
            want = 4;
        } else {
            bad_line(line, "query kind must be top1, topk, or thresh, got '" + toks[0] + "'");
        }
        if (toks.size() != want)
            bad_line(line, std::string(kind_name(q.kind)) + " query wants " +
                               std::to_string(want - 1) + " arguments");
        try {
            q.interval = make_interval(parse_real(toks[1], line), parse_real(toks[2], line));
        } catch (const Error& e) {
            if (e.code() == Errc::parse_error) throw;
            bad_line(line, e.what());
        }
        if (q.kind == QueryKind::topk) {
            q.k = parse_int(toks[3], line, "k");
            if (q.k < 1) bad_line(line, "k must be positive, got " + toks[3]);
        } else if (q.kind == QueryKind::thresh) {
            q.tau = parse_real(toks[3], line);
            if (!(q.tau >= 0.0 && q.tau <= 1.0))
                bad_line(line, "tau must lie in [0, 1], got " + toks[3]);
        }
        qs.push_back(q);
    }
    return qs;
}

std::vector<ParsedQuery> parse_queries_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::parse_error, "cannot open query file '" + path + "'");
    return parse_queries(in);
}

const char* kind_name(QueryKind kind) {
    switch (kind) {
        case QueryKind::top1: return "top1";
        case QueryKind::topk: return "topk";
        case QueryKind::thresh: return "thresh";
    }
    return "?";
}

std::string format_real(double v) {
    if (v == kInf) return "+inf";
    if (v == -kInf) return "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string format_prob(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9f", p);
    return buf;
}

}  // namespace uqr
