#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uqr/model.hpp"

namespace uqr {

enum class QueryKind { top1, topk, thresh };

struct ParsedQuery {
    QueryKind kind = QueryKind::top1;
    QueryInterval interval;
    int k = 0;        // topk only
    double tau = 0.0; // thresh only
};

// Line-oriented point records, whitespace separated, `#` starts a comment:
//   id u LO HI
//   id h B0 B1 .. Bc | D1 .. Dc
// Every record goes through make_point, so a file that parses is valid.
// Malformed lines, duplicate ids, and model rejections all surface as
// Errc::parse_error naming the offending line.
std::vector<UncertainPoint> parse_points(std::istream& in);
std::vector<UncertainPoint> parse_points_file(const std::string& path);

// Canonical text for the same format. Reals print in shortest
// round-trip form, so parse(print(pts)) reproduces pts exactly.
void print_points(const std::vector<UncertainPoint>& pts, std::ostream& out);

// One query per line: `top1 LO HI`, `topk LO HI K`, `thresh LO HI TAU`.
// LO and HI accept -inf / +inf.
std::vector<ParsedQuery> parse_queries(std::istream& in);
std::vector<ParsedQuery> parse_queries_file(const std::string& path);

const char* kind_name(QueryKind kind);

std::string format_real(double v);  // shortest round-trip
std::string format_prob(double p);  // fixed, nine decimals

}  // namespace uqr
