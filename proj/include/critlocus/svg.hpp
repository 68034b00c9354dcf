#pragma once

#include <optional>
#include <string>

#include "critlocus/io.hpp"
#include "critlocus/lattice.hpp"

namespace critlocus::svg {

/// Deterministic figure: boundary, lattice points within the view, tangent
/// lines at the marked boundary points, labels. View box is [-view, view]^2.
struct RenderSpec {
  int width = 800;
  int height = 800;
  double view = 1.6;
  std::optional<double> locus_t;          // draw phi(t) of the domain's base arc
  std::optional<Lattice2> extra_lattice;  // draw an explicit lattice instead
  bool draw_tangents = true;
  bool draw_labels = true;
};

std::string render(const io::DomainHandle& handle, const RenderSpec& spec);

}  // namespace critlocus::svg
