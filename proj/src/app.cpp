#include "critlocus/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "critlocus/analysis.hpp"
#include "critlocus/construct.hpp"
#include "critlocus/critical.hpp"
#include "critlocus/dirichlet.hpp"
#include "critlocus/io.hpp"
#include "critlocus/svg.hpp"

namespace critlocus::app {

namespace {

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InvalidDomainError("cannot open '" + out_path + "' for writing");
  f << payload;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_delta(const std::string& spec, int grid, double tol) {
  const io::DomainHandle h = io::parse_domain_arg(spec);
  print_warnings(h.warnings);
  const CriticalReport report = critical_search(h.domain, grid, tol);
  int members = 0;
  for (const auto& c : report.clusters) members += c.member_count;
  std::cout << "domain: " << h.spec << "\n";
  std::cout << "delta: " << io::fmt17(report.delta_est) << "\n";
  std::cout << "minimizer_clusters: " << report.clusters.size() << "\n";
  std::cout << "minimizer_members: " << members << "\n";
  std::cout << "area: " << io::fmt17(report.domain_area) << "\n";
  std::cout << "minkowski_ratio: " << io::fmt17(report.minkowski_ratio()) << "\n";
  if (report.parallelogram_warning)
    std::cout << "warning: ParallelogramWarning: minimizers form two shear families, "
                 "not listed individually\n";
  return 0;
}

bool is_disc_chain(const ConvexDomain& K) {
  if (std::holds_alternative<ConvexDomain::Disc>(K.shape)) return true;
  if (const auto* a = std::get_if<ConvexDomain::AffineImage>(&K.shape))
    return is_disc_chain(*a->base);
  return false;
}

int cmd_locus(const std::string& spec, int samples, bool assume_irreducible,
              const std::string& out_path) {
  const io::DomainHandle h = io::parse_domain_arg(spec);
  print_warnings(h.warnings);
  const bool known_irreducible = is_disc_chain(h.domain);
  if (is_parallelogram(h.domain))
    throw NotIrreducibleError("the locus of a parallelogram is a wedge of two shear "
                              "families, not a parameterized circle");
  if (!known_irreducible && !assume_irreducible)
    throw NotIrreducibleError("irreducibility of '" + h.spec +
                              "' is not known; pass --assume-irreducible to proceed");
  const auto points = locus_parameterize(h.domain, samples, !known_irreducible);
  std::ostringstream csv;
  csv << "t,p.x,p.y,q.x,q.y,covolume\n";
  for (const auto& lp : points)
    csv << io::fmt17(lp.t) << "," << io::fmt17(lp.p.x()) << "," << io::fmt17(lp.p.y()) << ","
        << io::fmt17(lp.q.x()) << "," << io::fmt17(lp.q.y()) << ","
        << io::fmt17(covolume(lp.lattice)) << "\n";
  emit(csv.str(), out_path);
  return 0;
}

int cmd_construct(const std::string& base_spec, const std::string& q_spec,
                  const std::string& out_path) {
  std::vector<std::string> warnings;
  const ClosedSet01 q = io::parse_q_spec(q_spec, &warnings);
  const io::DomainHandle base = io::parse_domain_arg(base_spec);
  const CompositeDomain built = build_construction(base.domain, q, &warnings);
  print_warnings(warnings);
  io::write_domain_file(out_path, base.spec, built.q);
  std::cout << "wrote " << out_path << " (" << built.triangles.size() << " gaps, base "
            << base.spec << ")\n";
  return 0;
}

int cmd_verify(const std::string& domain_path, int grid) {
  const io::DomainHandle h = io::parse_domain_arg(domain_path);
  print_warnings(h.warnings);
  if (!h.construction)
    throw InvalidDomainError("verify needs a composite domain file");
  const LocusVerification v = verify_locus(*h.construction, grid);
  std::cout << "grid: " << grid << "\n";
  std::cout << "scored: " << v.scored << "\n";
  std::cout << "excluded: " << v.excluded << "\n";
  std::cout << "agreement: " << io::fmt17(v.agreement_fraction) << "\n";
  std::cout << "mismatches: " << v.mismatches.size() << "\n";
  std::size_t shown = 0;
  for (const auto& mm : v.mismatches) {
    if (++shown > 10) {
      std::cout << "  ...\n";
      break;
    }
    std::cout << "  t=" << io::fmt17(mm.t) << " expected "
              << (mm.expected_admissible ? "admissible" : "inadmissible") << ", found "
              << (mm.found_admissible ? "admissible" : "inadmissible") << "\n";
  }
  return 0;
}

int cmd_dimension(const std::string& q_spec, const std::string& domain_path, int samples,
                  int k_max, const std::string& out_path) {
  BoxCountSeries series;
  if (!q_spec.empty()) {
    const ClosedSet01 q = io::parse_q_spec(q_spec);
    series = box_dimension_param(q, k_max == 0 ? 8 : k_max);
  } else {
    const io::DomainHandle h = io::parse_domain_arg(domain_path);
    print_warnings(h.warnings);
    if (!h.construction)
      throw InvalidDomainError("dimension --domain needs a composite domain file");
    series = box_dimension_locus(*h.construction, h.construction->q, samples,
                                 k_max == 0 ? 12 : k_max);
  }
  std::ostringstream csv;
  csv << "epsilon,count\n";
  for (std::size_t i = 0; i < series.scales.size(); ++i)
    csv << io::fmt17(series.scales[i]) << "," << series.counts[i] << "\n";
  csv << "slope," << io::fmt17(series.slope) << ",r2," << io::fmt17(series.r2) << "\n";
  emit(csv.str(), out_path);
  return 0;
}

int cmd_render(const std::string& domain_arg, const std::string& lattice_arg,
               const std::string& out_path, const std::string& points_csv) {
  const io::DomainHandle h = io::parse_domain_arg(domain_arg);
  print_warnings(h.warnings);
  svg::RenderSpec spec;
  std::optional<Lattice2> lattice;
  if (!lattice_arg.empty()) {
    std::string rest = lattice_arg;
    if (rest.rfind("t=", 0) == 0) {
      spec.locus_t = io::parse_number(rest.substr(2));
      const LocusArc arc =
          h.construction ? h.construction->arc : make_locus_arc(h.domain);
      lattice = locus_point(arc, *spec.locus_t).lattice;
    } else if (rest.rfind("lattice:", 0) == 0) {
      const auto v = io::parse_number_list(rest.substr(8));
      if (v.size() != 4) throw InvalidDomainError("lattice literal needs v1x,v1y,v2x,v2y");
      spec.extra_lattice = Lattice2({v[0], v[1]}, {v[2], v[3]});
      lattice = spec.extra_lattice;
    } else {
      throw InvalidDomainError("--lattice expects t=<f> or lattice:<v1x>,<v1y>,<v2x>,<v2y>");
    }
  }
  if (!points_csv.empty()) {
    if (!lattice) throw InvalidDomainError("--points-csv needs a --lattice layer");
    std::ostringstream csv;
    csv << "m,n,x,y\n";
    const double reach = enclosing_radius(h.domain) * 2.5;
    for (const auto& pt : enumerate_nonzero_indexed(*lattice, reach))
      csv << pt.m << "," << pt.n << "," << io::fmt17(pt.x.x()) << "," << io::fmt17(pt.x.y())
          << "\n";
    emit(csv.str(), points_csv);
  }
  const std::string payload = svg::render(h, spec);
  emit(payload, out_path);
  if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_dirichlet(const std::string& alpha_expr, const std::string& psi_family, double c,
                  const std::string& t_range, int count, const std::string& out_path) {
  const double alpha = io::parse_alpha(alpha_expr);
  const auto parts_ok = [&]() {
    return std::count(t_range.begin(), t_range.end(), ':') == 2;
  };
  if (!parts_ok()) throw InvalidDomainError("--t-range expects lo:hi:log or lo:hi:lin");
  const auto c1 = t_range.find(':');
  const auto c2 = t_range.find(':', c1 + 1);
  const double lo = io::parse_number(t_range.substr(0, c1));
  const double hi = io::parse_number(t_range.substr(c1 + 1, c2 - c1 - 1));
  const std::string scale = t_range.substr(c2 + 1);
  if (lo < 1 || hi < lo) throw InvalidDomainError("need 1 <= lo <= hi in --t-range");
  if (scale != "log" && scale != "lin")
    throw InvalidDomainError("--t-range scale must be log or lin");
  auto psi = [&](double T) {
    double v = 1.0;
    if (psi_family == "c/T")
      v = c / T;
    else if (psi_family == "1/(TlogT)")
      v = T > 1 ? 1.0 / (T * std::log(T)) : 1.0;
    else
      throw InvalidDomainError("--psi must be c/T or 1/(TlogT)");
    return std::min(1.0, std::max(v, 1e-300));
  };
  std::ostringstream csv;
  csv << "T,solvable,p,q,min_qdist\n";
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : double(i) / double(count - 1);
    const double T = scale == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    const DirichletResult r = dirichlet_solvable(alpha, psi(T), T);
    csv << io::fmt17(T) << "," << (r.solvable ? 1 : 0) << "," << r.p << "," << r.q << ","
        << io::fmt17(r.min_dist) << "\n";
  }
  emit(csv.str(), out_path);
  return 0;
}

int cmd_flow(const std::string& alpha_expr, double t_max, double dt,
             const std::string& out_path) {
  const double alpha = io::parse_alpha(alpha_expr);
  const auto samples = flow_trajectory(alpha, t_max, dt);
  std::ostringstream csv;
  csv << "t,lambda1_sup,v.x,v.y\n";
  for (const auto& s : samples)
    csv << io::fmt17(s.t) << "," << io::fmt17(s.lambda1_sup) << ","
        << io::fmt17(s.shortest_sup.x()) << "," << io::fmt17(s.shortest_sup.y()) << "\n";
  emit(csv.str(), out_path);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("critlocus");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App cli{"critical determinants and critical loci of planar convex symmetric domains"};
  cli.require_subcommand(1);

  auto* c_delta = cli.add_subcommand("delta", "critical determinant of a domain");
  std::string delta_spec;
  int delta_grid = 720;
  double delta_tol = 1e-9;
  c_delta->add_option("domain", delta_spec, "domain spec or composite file")->required();
  c_delta->add_option("--grid", delta_grid, "angle grid size");
  c_delta->add_option("--tol", delta_tol, "refinement / clustering tolerance");

  auto* c_locus = cli.add_subcommand("locus", "parameterize the critical locus");
  std::string locus_spec, locus_out;
  int locus_samples = 100;
  bool locus_assume = false;
  c_locus->add_option("domain", locus_spec)->required();
  c_locus->add_option("--samples", locus_samples)->required();
  c_locus->add_flag("--assume-irreducible", locus_assume,
                    "run on domains not known to be irreducible");
  c_locus->add_option("--out", locus_out, "CSV path (stdout when omitted)");

  auto* c_construct = cli.add_subcommand("construct", "build a domain with prescribed locus");
  std::string con_base = "disc", con_q, con_out;
  c_construct->add_option("--base", con_base, "strictly convex base domain");
  c_construct->add_option("--q", con_q, "closed parameter set, e.g. cantor:depth=4")
      ->required();
  c_construct->add_option("--out", con_out, "domain file to write")->required();

  auto* c_verify = cli.add_subcommand("verify", "check the locus of a constructed domain");
  std::string ver_domain;
  int ver_grid = 1000;
  c_verify->add_option("--domain", ver_domain)->required();
  c_verify->add_option("--grid", ver_grid);

  auto* c_dim = cli.add_subcommand("dimension", "box-counting dimension estimate");
  std::string dim_q, dim_domain, dim_out;
  int dim_samples = 6561, dim_kmax = 0;
  c_dim->add_option("--q", dim_q, "parameter set spec");
  c_dim->add_option("--domain", dim_domain, "composite domain file");
  c_dim->add_option("--samples", dim_samples);
  c_dim->add_option("--kmax", dim_kmax, "finest scale index");
  c_dim->add_option("--out", dim_out);

  auto* c_render = cli.add_subcommand("render", "SVG figure of a domain");
  std::string ren_domain, ren_lattice, ren_out, ren_points;
  c_render->add_option("--domain", ren_domain)->required();
  c_render->add_option("--lattice", ren_lattice, "t=<f> or lattice:<v1x>,<v1y>,<v2x>,<v2y>");
  c_render->add_option("--out", ren_out);
  c_render->add_option("--points-csv", ren_points, "also write the lattice points as m,n,x,y");

  auto* c_dir = cli.add_subcommand("dirichlet", "psi-Dirichlet solvability scan");
  std::string dir_alpha, dir_psi = "c/T", dir_range = "1:1e6:log", dir_out;
  double dir_c = 1.0;
  int dir_count = 50;
  c_dir->add_option("--alpha", dir_alpha)->required();
  c_dir->add_option("--psi", dir_psi, "c/T or 1/(TlogT)");
  c_dir->add_option("--c", dir_c);
  c_dir->add_option("--t-range", dir_range, "lo:hi:log or lo:hi:lin");
  c_dir->add_option("--count", dir_count);
  c_dir->add_option("--out", dir_out);

  auto* c_flow = cli.add_subcommand("flow", "diagonal flow of the sheared lattice");
  std::string flow_alpha, flow_out;
  double flow_tmax = 20.0, flow_dt = 0.01;
  c_flow->add_option("--alpha", flow_alpha)->required();
  c_flow->add_option("--tmax", flow_tmax);
  c_flow->add_option("--dt", flow_dt);
  c_flow->add_option("--out", flow_out);

  auto* c_selftest = cli.add_subcommand("selftest", "run the built-in invariant suite");

  try {
    cli.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_delta->parsed()) return cmd_delta(delta_spec, delta_grid, delta_tol);
    if (c_locus->parsed()) return cmd_locus(locus_spec, locus_samples, locus_assume, locus_out);
    if (c_construct->parsed()) return cmd_construct(con_base, con_q, con_out);
    if (c_verify->parsed()) return cmd_verify(ver_domain, ver_grid);
    if (c_dim->parsed()) {
      if (dim_q.empty() == dim_domain.empty())
        throw InvalidDomainError("dimension needs exactly one of --q / --domain");
      return cmd_dimension(dim_q, dim_domain, dim_samples, dim_kmax, dim_out);
    }
    if (c_render->parsed()) return cmd_render(ren_domain, ren_lattice, ren_out, ren_points);
    if (c_dir->parsed())
      return cmd_dirichlet(dir_alpha, dir_psi, dir_c, dir_range, dir_count, dir_out);
    if (c_flow->parsed()) return cmd_flow(flow_alpha, flow_tmax, flow_dt, flow_out);
    if (c_selftest->parsed()) return selftest(std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace critlocus::app
