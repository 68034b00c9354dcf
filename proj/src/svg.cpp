#include "critlocus/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "critlocus/critical.hpp"

namespace critlocus::svg {

namespace {

struct Mapper {
  double view, width, height;
  double px(double x) const { return (x + view) / (2 * view) * width; }
  double py(double y) const { return (view - y) / (2 * view) * height; }  // y up
  std::string at(const Vec2<double>& p) const {
    return io::fmt_fixed(px(p.x()), 2) + "," + io::fmt_fixed(py(p.y()), 2);
  }
};

void boundary_path(std::ostringstream& out, const ConvexDomain& K, const Mapper& m) {
  // sampled polar path with the cap junctions and apexes inserted exactly,
  // so composite corners render sharply
  std::vector<double> thetas;
  const int n = 1440;
  thetas.reserve(n + 16);
  for (int i = 0; i < n; ++i) thetas.push_back(2 * pi_v<double> * i / n);
  if (const auto* comp = std::get_if<ConvexDomain::Composite>(&K.shape)) {
    for (const auto& bulge : comp->bulges) {
      thetas.push_back(bulge.theta_lo);
      thetas.push_back(bulge.theta_apex);
      thetas.push_back(bulge.theta_hi);
    }
  }
  std::sort(thetas.begin(), thetas.end());
  out << "<path fill=\"none\" stroke=\"#1f4db0\" stroke-width=\"2\" d=\"";
  for (std::size_t i = 0; i < thetas.size(); ++i)
    out << (i == 0 ? "M" : " L") << m.at(boundary_point(K, thetas[i]));
  out << " Z\"/>\n";
}

void circle(std::ostringstream& out, const Mapper& m, const Vec2<double>& p, double r,
            const std::string& fill) {
  out << "<circle cx=\"" << io::fmt_fixed(m.px(p.x()), 2) << "\" cy=\""
      << io::fmt_fixed(m.py(p.y()), 2) << "\" r=\"" << io::fmt_fixed(r, 1) << "\" fill=\""
      << fill << "\"/>\n";
}

void line(std::ostringstream& out, const Mapper& m, const Vec2<double>& a,
          const Vec2<double>& b, const std::string& style) {
  out << "<line x1=\"" << io::fmt_fixed(m.px(a.x()), 2) << "\" y1=\""
      << io::fmt_fixed(m.py(a.y()), 2) << "\" x2=\"" << io::fmt_fixed(m.px(b.x()), 2)
      << "\" y2=\"" << io::fmt_fixed(m.py(b.y()), 2) << "\" " << style << "/>\n";
}

void text(std::ostringstream& out, const Mapper& m, const Vec2<double>& p,
          const std::string& s) {
  out << "<text x=\"" << io::fmt_fixed(m.px(p.x()) + 6, 2) << "\" y=\""
      << io::fmt_fixed(m.py(p.y()) - 6, 2)
      << "\" font-family=\"monospace\" font-size=\"16\" fill=\"#333333\">" << s << "</text>\n";
}

}  // namespace

std::string render(const io::DomainHandle& handle, const RenderSpec& spec) {
  const ConvexDomain& K = handle.domain;
  const Mapper m{spec.view, double(spec.width), double(spec.height)};
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << " "
      << spec.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  line(out, m, {-spec.view, 0}, {spec.view, 0}, "stroke=\"#bbbbbb\" stroke-width=\"1\"");
  line(out, m, {0, -spec.view}, {0, spec.view}, "stroke=\"#bbbbbb\" stroke-width=\"1\"");

  boundary_path(out, K, m);

  std::optional<Lattice2> lattice = spec.extra_lattice;
  std::vector<Vec2<double>> marked;
  if (spec.locus_t) {
    const LocusArc arc = handle.construction ? handle.construction->arc : make_locus_arc(K);
    const LocusPoint lp = locus_point(arc, *spec.locus_t);
    lattice = lp.lattice;
    marked = {lp.p, lp.q, Vec2<double>(lp.q - lp.p)};
  }

  if (lattice) {
    const double reach = spec.view * std::sqrt(2.0);
    for (const auto& x : enumerate_nonzero(*lattice, reach))
      circle(out, m, x, 4.0, "#c0392b");
    circle(out, m, Vec2<double>(0, 0), 4.0, "#c0392b");

    if (spec.draw_tangents) {
      const ConvexDomain& C = handle.construction ? handle.construction->base() : K;
      for (const auto& x : enumerate_nonzero(*lattice, reach)) {
        if (classify(C, x) != Region::Boundary) continue;
        try {
          const Vec2<double> t = tangent_dir(C, std::atan2(x.y(), x.x()));
          line(out, m, Vec2<double>(x - 0.35 * t), Vec2<double>(x + 0.35 * t),
               "stroke=\"#7f8c8d\" stroke-width=\"1\" stroke-dasharray=\"4,3\"");
        } catch (const CornerPointError&) {
          // no tangent at corners
        }
      }
    }
    if (spec.draw_labels && !marked.empty()) {
      static const char* names[3] = {"p", "q", "q-p"};
      for (std::size_t i = 0; i < marked.size() && i < 3; ++i)
        text(out, m, marked[i], names[i]);
    }
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace critlocus::svg
