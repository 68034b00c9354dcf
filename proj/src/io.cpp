#include "critlocus/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace critlocus::io {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool consume_prefix(std::string& s, const std::string& prefix) {
  if (s.rfind(prefix, 0) != 0) return false;
  s.erase(0, prefix.size());
  return true;
}

Mat2<double> parse_matrix(const std::string& text) {
  const auto v = parse_number_list(text);
  if (v.size() != 4) throw InvalidDomainError("matrix needs 4 entries a,b,c,d");
  Mat2<double> g;
  g << v[0], v[1], v[2], v[3];
  return g;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v, int prec) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  // avoid the negative zero artifact so outputs stay byte-identical
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

double parse_number(const std::string& text) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw InvalidDomainError("not a number: '" + text + "'");
  }
  if (pos != text.size()) throw InvalidDomainError("trailing junk in number: '" + text + "'");
  if (!std::isfinite(v)) throw InvalidDomainError("number not finite: '" + text + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text, char sep) {
  std::vector<double> out;
  for (const auto& part : split(text, sep)) out.push_back(parse_number(part));
  return out;
}

DomainHandle parse_domain_spec(const std::string& spec) {
  DomainHandle h;
  h.spec = spec;
  std::string rest = spec;

  if (rest == "disc") {
    h.domain = ConvexDomain::disc();
  } else if (consume_prefix(rest, "disc:r=")) {
    h.domain = ConvexDomain::disc(parse_number(rest));
  } else if (rest == "square") {
    h.domain = ConvexDomain::square();
  } else if (consume_prefix(rest, "parallelogram:g=")) {
    h.domain = ConvexDomain::parallelogram(parse_matrix(rest));
  } else if (rest == "hexagon:regular") {
    h.domain = ConvexDomain::regular_hexagon();
  } else if (consume_prefix(rest, "hexagon:v=")) {
    const auto v = parse_number_list(rest);
    if (v.size() != 6) throw InvalidDomainError("hexagon needs 6 numbers x1,y1,x2,y2,x3,y3");
    h.domain = ConvexDomain::hexagon({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]});
  } else if (consume_prefix(rest, "lp:p=")) {
    h.domain = ConvexDomain::lp_ball(parse_number(rest));
  } else if (consume_prefix(rest, "affine:g=")) {
    const auto base_pos = rest.find(":base=");
    if (base_pos == std::string::npos)
      throw InvalidDomainError("affine spec needs :base=<spec>");
    const Mat2<double> g = parse_matrix(rest.substr(0, base_pos));
    DomainHandle base = parse_domain_spec(rest.substr(base_pos + 6));
    h.domain = ConvexDomain::affine(g, std::move(base.domain));
  } else if (consume_prefix(rest, "composite:file=")) {
    auto [base_spec, q] = read_domain_file(rest);
    DomainHandle base = parse_domain_spec(base_spec);
    CompositeDomain built = build_construction(base.domain, q, &h.warnings);
    h.domain = built.domain;
    h.construction = std::move(built);
  } else {
    throw InvalidDomainError("unknown domain spec '" + spec + "'");
  }
  return h;
}

DomainHandle parse_domain_arg(const std::string& arg) {
  if (arg.find(':') == std::string::npos && std::filesystem::exists(arg))
    return parse_domain_spec("composite:file=" + arg);
  return parse_domain_spec(arg);
}

ClosedSet01 parse_q_spec(const std::string& spec, std::vector<std::string>* warnings) {
  std::string rest = spec;
  if (rest == "full") return ClosedSet01{};
  if (consume_prefix(rest, "cantor:depth=")) {
    const double d = parse_number(rest);
    if (d != std::floor(d)) throw InvalidDomainError("cantor depth must be an integer");
    return cantor_gaps<double>(static_cast<int>(d));
  }
  if (consume_prefix(rest, "gaps:")) {
    std::vector<std::pair<double, double>> raw;
    for (const auto& pair_text : split(rest, ';')) {
      const auto v = parse_number_list(pair_text);
      if (v.size() != 2) throw InvalidDomainError("each gap needs two numbers a,b");
      raw.emplace_back(v[0], v[1]);
    }
    return ClosedSet01::from_gaps(std::move(raw), warnings);
  }
  throw InvalidDomainError("unknown Q spec '" + spec + "'");
}

double parse_alpha(const std::string& expr) {
  if (expr == "sqrt2") return std::sqrt(2.0);
  if (expr == "golden") return (1.0 + std::sqrt(5.0)) / 2.0;
  if (expr == "pi") return pi_v<double>;
  return parse_number(expr);
}

std::string domain_file_text(const std::string& base_spec, const ClosedSet01& q) {
  std::ostringstream out;
  out << "base: " << base_spec << "\n";
  for (const auto& [a, b] : q.gaps) out << "gap: " << fmt17(a) << " " << fmt17(b) << "\n";
  return out.str();
}

void write_domain_file(const std::string& path, const std::string& base_spec,
                       const ClosedSet01& q) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidDomainError("cannot open '" + path + "' for writing");
  f << domain_file_text(base_spec, q);
}

std::pair<std::string, ClosedSet01> read_domain_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidDomainError("cannot open domain file '" + path + "'");
  std::string base_spec;
  std::vector<std::pair<double, double>> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::string rest = line;
    if (consume_prefix(rest, "base: ")) {
      base_spec = rest;
    } else if (consume_prefix(rest, "gap: ")) {
      std::istringstream ss(rest);
      double a = 0, b = 0;
      if (!(ss >> a >> b))
        throw InvalidDomainError("bad gap line " + std::to_string(lineno) + " in " + path);
      raw.emplace_back(a, b);
    } else {
      throw InvalidDomainError("unrecognized line " + std::to_string(lineno) + " in " + path);
    }
  }
  if (base_spec.empty()) throw InvalidDomainError("domain file missing 'base:' line");
  return {base_spec, ClosedSet01::from_gaps(std::move(raw))};
}

}  // namespace critlocus::io
