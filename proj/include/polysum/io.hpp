#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "polysum/polyroots.hpp"
#include "polysum/potential.hpp"
#include "polysum/solver.hpp"

namespace polysum::io {

// Shortest decimal that round-trips the double (std::to_chars).
std::string format_double(double x);

// columns: re, im, term_index
void write_root_list_csv(std::ostream& os, std::span<const RootPoly> terms);

// columns: re, im, log_residual
void write_report_csv(std::ostream& os, const RootReport& report);

// columns: re, im, source with source in {term_1, ..., term_m, sum}
void write_combined_roots_csv(std::ostream& os, std::span<const RootPoly> terms,
                              const RootReport* sum_report);

// columns: cell_center_re, cell_center_im, mass
void write_grid_csv(std::ostream& os, const GridMeasure& rho);

// JSON header describing the grid geometry, clipped mass and total
std::string grid_header_json(const GridMeasure& rho);

}  // namespace polysum::io
