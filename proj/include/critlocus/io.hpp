#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "critlocus/construct.hpp"
#include "critlocus/geometry.hpp"

namespace critlocus::io {

/// 17 significant digits, '.' separator, locale-independent: enough to
/// round-trip any double exactly.
std::string fmt17(double v);

/// Fixed formatting for rendered coordinates.
std::string fmt_fixed(double v, int prec = 6);

/// A parsed domain argument. Composite files also carry the construction
/// (base arc, Q, triangles) needed by verify/dimension/render.
struct DomainHandle {
  ConvexDomain domain = ConvexDomain::disc();
  std::optional<CompositeDomain> construction;
  std::string spec;
  std::vector<std::string> warnings;
};

/// Grammar: disc | disc:r=<f> | square | parallelogram:g=<a,b,c,d> |
/// hexagon:regular | hexagon:v=<x1,y1,x2,y2,x3,y3> | lp:p=<f> |
/// affine:g=<a,b,c,d>:base=<spec> | composite:file=<path>.
/// Matrices are row-major: g = [[a, b], [c, d]].
DomainHandle parse_domain_spec(const std::string& spec);

/// Accepts either a domain spec or a path to a composite domain file
/// (anything without ':' that names an existing file).
DomainHandle parse_domain_arg(const std::string& arg);

/// Q grammar: cantor:depth=<n> | gaps:<a>,<b>[;<a>,<b>...] | full
ClosedSet01 parse_q_spec(const std::string& spec, std::vector<std::string>* warnings = nullptr);

/// alpha grammar: sqrt2 | golden | pi | <decimal>
double parse_alpha(const std::string& expr);

double parse_number(const std::string& text);
std::vector<double> parse_number_list(const std::string& text, char sep = ',');

/// Line-oriented composite domain file: "base: <spec>" then one
/// "gap: <a> <b>" line per gap, full precision.
std::string domain_file_text(const std::string& base_spec, const ClosedSet01& q);
void write_domain_file(const std::string& path, const std::string& base_spec,
                       const ClosedSet01& q);
std::pair<std::string, ClosedSet01> read_domain_file(const std::string& path);

}  // namespace critlocus::io
