#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "torharm/errors.hpp"
#include "torharm/grid.hpp"
#include "torharm/rng.hpp"
#include "torharm/spectral.hpp"
#include "torharm/surface.hpp"

namespace torharm {

struct SurfaceFile {
  int n_phi = 0, n_theta = 0;
  std::vector<FourierMode> modes;
};

// text format, one directive per line:
//   grid <n_phi> <n_theta>
//   cos <m> <n> <x> <y> <z>
//   sin <m> <n> <x> <y> <z>
// '#' starts a comment
inline SurfaceFile parse_surface_text(std::istream& in,
                                      const std::string& origin = "<stream>") {
  SurfaceFile sf;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "grid") {
      if (!(ls >> sf.n_phi >> sf.n_theta)) fail("grid needs two integers");
    } else if (tok == "cos" || tok == "sin") {
      int m, n;
      Vec3 a;
      if (!(ls >> m >> n >> a.x >> a.y >> a.z))
        fail(tok + " needs m n x y z");
      bool found = false;
      for (auto& md : sf.modes)
        if (md.m == m && md.n == n) {
          (tok == "cos" ? md.c : md.s) += a;
          found = true;
          break;
        }
      if (!found) {
        FourierMode md;
        md.m = m;
        md.n = n;
        (tok == "cos" ? md.c : md.s) = a;
        sf.modes.push_back(md);
      }
    } else {
      fail("unknown directive '" + tok + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens after '" + tok + "'");
  }
  if (sf.n_phi == 0) fail("missing grid directive");
  if (sf.modes.empty()) fail("no Fourier modes given");
  return sf;
}

inline SurfaceFile load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open surface file " + path);
  return parse_surface_text(in, path);
}

// pseudo-random ambient vector field: each component is a trigonometric
// polynomial in (x, y, z) with wavevectors in {-2..2}^3
inline std::function<Vec3(const Vec3&)> random_ambient_deformation(
    uint64_t seed, int n_modes = 6, double amp = 1.0) {
  struct Term {
    Vec3 a;
    Vec3 k;
    double phase;
  };
  Rng rng(seed);
  auto terms = std::make_shared<std::vector<Term>>();
  for (int q = 0; q < n_modes; ++q) {
    Term t;
    t.a = {rng.normal(), rng.normal(), rng.normal()};
    t.k = {std::floor(rng.uniform(-2.0, 3.0)), std::floor(rng.uniform(-2.0, 3.0)),
           std::floor(rng.uniform(-2.0, 3.0))};
    t.phase = rng.uniform(0.0, kTwoPi);
    t.a = (amp / n_modes) * t.a;
    terms->push_back(t);
  }
  return [terms](const Vec3& p) {
    Vec3 v{};
    for (const auto& t : *terms)
      v += std::cos(t.k.x * p.x + t.k.y * p.y + t.k.z * p.z + t.phase) * t.a;
    return v;
  };
}

// deformation spec, one per line:
//   constant <cx> <cy> <cz>
//   rotation_z <amp>
//   radial_bump <amp> <rho0> <z0> <width>
//   fourier_normal <m> <n> <amp> <R0>
//   random <seed> <n_modes> <amp>
inline std::function<Vec3(const Vec3&)> parse_deformation_line(
    const std::string& line, const std::string& origin = "<arg>") {
  std::istringstream ls(line);
  std::string type;
  if (!(ls >> type)) throw ConfigError(origin + ": empty deformation spec");
  auto fail = [&](const std::string& what) {
    throw ConfigError(origin + ": " + type + ": " + what);
  };
  if (type == "constant") {
    Vec3 c;
    if (!(ls >> c.x >> c.y >> c.z)) fail("needs cx cy cz");
    return [c](const Vec3&) { return c; };
  }
  if (type == "rotation_z") {
    double amp;
    if (!(ls >> amp)) fail("needs amp");
    return [amp](const Vec3& p) { return Vec3{-amp * p.y, amp * p.x, 0.0}; };
  }
  if (type == "radial_bump") {
    double amp, rho0, z0, width;
    if (!(ls >> amp >> rho0 >> z0 >> width)) fail("needs amp rho0 z0 width");
    if (!(width > 0)) fail("width must be positive");
    return [=](const Vec3& p) {
      double rho = std::hypot(p.x, p.y);
      if (rho == 0) return Vec3{};
      double d2 = (rho - rho0) * (rho - rho0) + (p.z - z0) * (p.z - z0);
      double g = amp * std::exp(-d2 / (2.0 * width * width));
      return Vec3{g * p.x / rho, g * p.y / rho, 0.0};
    };
  }
  if (type == "fourier_normal") {
    int m, n;
    double amp, R0;
    if (!(ls >> m >> n >> amp >> R0)) fail("needs m n amp R0");
    return [=](const Vec3& p) {
      double rho = std::hypot(p.x, p.y);
      double phit = std::atan2(p.y, p.x);
      double thetat = std::atan2(p.z, rho - R0);
      double g = amp * std::cos(m * phit + n * thetat);
      double cr = std::cos(thetat), cz = std::sin(thetat);
      if (rho == 0) return Vec3{0.0, 0.0, g * cz};
      return Vec3{g * cr * p.x / rho, g * cr * p.y / rho, g * cz};
    };
  }
  if (type == "random") {
    long seed;
    int n_modes;
    double amp;
    if (!(ls >> seed >> n_modes >> amp)) fail("needs seed n_modes amp");
    if (n_modes < 1) fail("n_modes must be >= 1");
    return random_ambient_deformation(static_cast<uint64_t>(seed), n_modes,
                                      amp);
  }
  throw ConfigError(origin + ": unknown deformation type '" + type + "'");
}

inline std::vector<std::function<Vec3(const Vec3&)>> load_deformation_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open deformation file " + path);
  std::vector<std::function<Vec3(const Vec3&)>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char ch : line)
      if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
    if (blank) continue;
    out.push_back(
        parse_deformation_line(line, path + ":" + std::to_string(lineno)));
  }
  if (out.empty()) throw ConfigError(path + ": no deformations given");
  return out;
}

// fixed %.17g formatting so identical runs produce identical bytes
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path) {
    if (!out_) throw ConfigError("cannot open output file " + path);
    for (size_t i = 0; i < header.size(); ++i)
      out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }
  void row(const std::vector<double>& vals) {
    for (size_t i = 0; i < vals.size(); ++i)
      out_ << (i ? "," : "") << format_double(vals[i]);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

inline void write_grid_csv(const std::string& path, const Grid2& g,
                           const std::string& value_name) {
  CsvWriter w(path, {"phi[turns]", "theta[turns]", value_name});
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      w.row({static_cast<double>(i) / g.n_phi,
             static_cast<double>(j) / g.n_theta, g(i, j)});
}

inline void write_curve_csv(const std::string& path,
                            const std::vector<double>& theta_samples,
                            const std::string& value_name) {
  CsvWriter w(path, {"theta[turns]", value_name});
  int n = static_cast<int>(theta_samples.size());
  for (int j = 0; j < n; ++j)
    w.row({static_cast<double>(j) / n, theta_samples[j]});
}

}  // namespace torharm
