#pragma once

// File emission: field snapshots (CSV, legacy VTK), contour sidecars,
// residual histories, metrics, stability-lab traces and run manifests.

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "shockstab/cases.hpp"
#include "shockstab/euler.hpp"
#include "shockstab/grid.hpp"
#include "shockstab/stability.hpp"

namespace shockstab {

namespace fs = std::filesystem;

class IoError : public Error {
 public:
  IoError(const std::string& what, const fs::path& path)
      : Error(what + ": " + path.string()), path_(path) {}
  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
};

namespace detail {

inline std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory (" + ec.message() + ")", path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  return out;
}

inline void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed", path);
}

/// Primitive view of a cell; NaNs if the stored state is unusable (only
/// possible in blanked cells).
inline PrimitiveState cell_primitive(const ConservedState& U, const GasModel& gas) {
  try {
    return primitive_from_conserved(U, gas);
  } catch (const NonPhysicalState&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan};
  }
}

}  // namespace detail

/// Header i,j,x,y,rho,u,v,p,mach; j outer, i inner; x, y are centroids.
inline void write_field_csv(const StructuredGrid& grid, const Field& field, const fs::path& path,
                            const GasModel& gas = {}) {
  auto out = detail::open_out(path);
  using detail::g17;
  out << "i,j,x,y,rho,u,v,p,mach\n";
  for (int j = 0; j < grid.nj(); ++j) {
    for (int i = 0; i < grid.ni(); ++i) {
      const auto c = grid.centroid(i, j);
      const auto w = detail::cell_primitive(field(i, j), gas);
      out << i << ',' << j << ',' << g17(c.x) << ',' << g17(c.y) << ',' << g17(w.rho) << ','
          << g17(w.u) << ',' << g17(w.v) << ',' << g17(w.p) << ',' << g17(mach_number(w, gas)) << '\n';
    }
  }
  detail::finish(out, path);
}

struct FieldCsvRow {
  int i = 0, j = 0;
  double x = 0, y = 0, rho = 0, u = 0, v = 0, p = 0, mach = 0;
};

inline std::vector<FieldCsvRow> read_field_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading", path);
  std::string line;
  std::getline(in, line);
  if (line != "i,j,x,y,rho,u,v,p,mach") throw IoError("unexpected field CSV header", path);
  std::vector<FieldCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    FieldCsvRow r;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &r.i, &r.j, &r.x, &r.y, &r.rho,
                    &r.u, &r.v, &r.p, &r.mach) != 9) {
      throw IoError("malformed field CSV row", path);
    }
    rows.push_back(r);
  }
  return rows;
}

/// Legacy ASCII structured grid: vertices as points; rho, p, mach and
/// velocity as cell data.
inline void write_field_vtk(const StructuredGrid& grid, const Field& field, const fs::path& path,
                            const GasModel& gas = {}) {
  auto out = detail::open_out(path);
  using detail::g17;
  const std::size_t nc = grid.num_cells();
  out << "# vtk DataFile Version 3.0\n"
      << "shockstab field\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_GRID\n"
      << "DIMENSIONS " << grid.ni() + 1 << ' ' << grid.nj() + 1 << " 1\n"
      << "POINTS " << grid.vertices().size() << " double\n";
  for (const auto& p : grid.vertices()) out << g17(p.x) << ' ' << g17(p.y) << " 0\n";
  std::vector<PrimitiveState> w(nc);
  for (int j = 0; j < grid.nj(); ++j)
    for (int i = 0; i < grid.ni(); ++i) w[grid.cell_index(i, j)] = detail::cell_primitive(field(i, j), gas);
  out << "CELL_DATA " << nc << "\n";
  auto scalar = [&](const char* name, auto get) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const auto& c : w) out << g17(get(c)) << '\n';
  };
  scalar("rho", [](const PrimitiveState& c) { return c.rho; });
  scalar("p", [](const PrimitiveState& c) { return c.p; });
  scalar("mach", [&](const PrimitiveState& c) { return mach_number(c, gas); });
  out << "VECTORS velocity double\n";
  for (const auto& c : w) out << g17(c.u) << ' ' << g17(c.v) << " 0\n";
  detail::finish(out, path);
}

inline void write_text(const fs::path& path, const std::string& text) {
  auto out = detail::open_out(path);
  out << text;
  detail::finish(out, path);
}

inline void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

/// Contour levels for a snapshot, consumed by the plotting scripts.
inline void write_contour_sidecar(const ContourSpec& spec, const std::string& case_name,
                                  const std::string& field_file, const fs::path& path) {
  nlohmann::ordered_json j;
  j["case"] = case_name;
  j["field"] = field_file;
  j["variable"] = spec.variable;
  j["min"] = spec.min;
  j["max"] = spec.max;
  j["levels"] = spec.levels;
  write_json(path, j);
}

struct ResidualEntry {
  long iteration = 0;
  double residual = 0.0;
};

inline void write_residual_csv(const std::vector<ResidualEntry>& history, const fs::path& path) {
  auto out = detail::open_out(path);
  out << "iteration,residual\n";
  for (const auto& e : history) out << e.iteration << ',' << detail::g17(e.residual) << '\n';
  detail::finish(out, path);
}

struct MetricRow {
  std::string case_name;
  std::string scheme;
  long iteration = 0;
  double time = 0.0;
  std::string metric;
  double value = 0.0;
};

inline void write_metrics_csv(const std::vector<MetricRow>& rows, const fs::path& path) {
  auto out = detail::open_out(path);
  out << "case,scheme,iteration,time,metric,value\n";
  for (const auto& r : rows)
    out << r.case_name << ',' << r.scheme << ',' << r.iteration << ',' << detail::g17(r.time) << ','
        << r.metric << ',' << detail::g17(r.value) << '\n';
  detail::finish(out, path);
}

/// One row per step; the family and base state repeat on every row so a
/// trace file is self-describing.
inline void write_trace_csv(const LyapunovTrace& trace, const fs::path& path) {
  auto out = detail::open_out(path);
  using detail::g17;
  const auto& b = trace.base;
  out << "family,nu,rho0,u0,p0,step,rho_hat,rhou_hat,p_hat,V,dV\n";
  for (const auto& e : trace.entries)
    out << to_string(trace.family) << ',' << g17(b.nu) << ',' << g17(b.rho0) << ',' << g17(b.u0) << ','
        << g17(b.p0) << ',' << e.step << ',' << g17(e.state.rho_hat) << ',' << g17(e.state.rhou_hat)
        << ',' << g17(e.state.p_hat) << ',' << g17(e.v) << ',' << g17(e.dv) << '\n';
  detail::finish(out, path);
}

inline void write_sign_map_csv(const std::vector<SignSample>& samples, const fs::path& path) {
  auto out = detail::open_out(path);
  using detail::g17;
  out << "rho_hat,rhou_hat,p_hat,dV,sign\n";
  for (const auto& s : samples)
    out << g17(s.state.rho_hat) << ',' << g17(s.state.rhou_hat) << ',' << g17(s.state.p_hat) << ','
        << g17(s.dv) << ',' << s.sign << '\n';
  detail::finish(out, path);
}

inline void write_eigenvalue_csv(const std::vector<std::complex<double>>& ev, const fs::path& path) {
  auto out = detail::open_out(path);
  out << "index,real,imag,modulus\n";
  for (std::size_t k = 0; k < ev.size(); ++k)
    out << k << ',' << detail::g17(ev[k].real()) << ',' << detail::g17(ev[k].imag()) << ','
        << detail::g17(std::abs(ev[k])) << '\n';
  detail::finish(out, path);
}

/// Lower-case hex SHA-256 of a file's bytes.
inline std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for hashing", path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("sha256 init failed", path);
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string s;
  s.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    s += hex[md[k] >> 4];
    s += hex[md[k] & 15];
  }
  return s;
}

/// manifest.json listing every regular file under dir (except itself),
/// sorted by relative path, with size and SHA-256.
inline fs::path write_manifest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir);
    if (rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  nlohmann::ordered_json j;
  j["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    nlohmann::ordered_json a;
    a["path"] = f.generic_string();
    a["bytes"] = fs::file_size(dir / f);
    a["sha256"] = sha256_file(dir / f);
    j["artifacts"].push_back(a);
  }
  const auto path = dir / "manifest.json";
  write_json(path, j);
  return path;
}

}  // namespace shockstab
