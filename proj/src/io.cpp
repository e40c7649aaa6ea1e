#include "polysum/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace polysum::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

void write_complex(std::ostream& os, std::complex<double> z) {
  os << format_double(z.real()) << ',' << format_double(z.imag());
}

}  // namespace

void write_root_list_csv(std::ostream& os, std::span<const RootPoly> terms) {
  os << "re,im,term_index\n";
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (const auto& x : terms[k].roots()) {
      write_complex(os, x.to_complex());
      os << ',' << (k + 1) << '\n';
    }
  }
}

void write_report_csv(std::ostream& os, const RootReport& report) {
  os << "re,im,log_residual\n";
  for (std::size_t i = 0; i < report.roots.size(); ++i) {
    write_complex(os, report.roots[i]);
    os << ',' << format_double(report.log_residuals[i]) << '\n';
  }
}

void write_combined_roots_csv(std::ostream& os, std::span<const RootPoly> terms,
                              const RootReport* sum_report) {
  os << "re,im,source\n";
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (const auto& x : terms[k].roots()) {
      write_complex(os, x.to_complex());
      os << ",term_" << (k + 1) << '\n';
    }
  }
  if (sum_report != nullptr) {
    for (const auto& z : sum_report->roots) {
      write_complex(os, z);
      os << ",sum\n";
    }
  }
}

void write_grid_csv(std::ostream& os, const GridMeasure& rho) {
  os << "cell_center_re,cell_center_im,mass\n";
  const int pps = rho.grid.points_per_side;
  for (int iy = 0; iy < pps; ++iy) {
    for (int ix = 0; ix < pps; ++ix) {
      write_complex(os, rho.grid.node(ix, iy));
      os << ',' << format_double(rho.masses[static_cast<std::size_t>(iy) * pps + ix])
         << '\n';
    }
  }
}

std::string grid_header_json(const GridMeasure& rho) {
  std::ostringstream os;
  os << "{\"center\":[" << format_double(rho.grid.center.real()) << ','
     << format_double(rho.grid.center.imag()) << "],\"half_width\":"
     << format_double(rho.grid.half_width)
     << ",\"points_per_side\":" << rho.grid.points_per_side
     << ",\"spacing\":" << format_double(rho.grid.spacing())
     << ",\"clipped_mass\":" << format_double(rho.clipped_mass)
     << ",\"total\":" << format_double(rho.total()) << "}";
  return os.str();
}

}  // namespace polysum::io
