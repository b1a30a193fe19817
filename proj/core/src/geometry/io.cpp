#include "mongeampere/geometry/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ma::geometry {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> read_row(std::istream& in, int count, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (row.empty() && ls.eof()) continue;
    if (!ls.eof() || static_cast<int>(row.size()) != count)
      throw InvalidArgument(std::string("polytope file: malformed ") + what + " row");
    return row;
  }
  throw InvalidArgument(std::string("polytope file: truncated ") + what + " section");
}

}  // namespace

ConvexPolytope read_polytope(std::istream& in) {
  int n = 0;
  std::vector<Vec> verts;
  std::vector<Halfspace> hs;
  bool have_v = false, have_h = false;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    long count = -1;
    if (!(ls >> count) || count < 0) throw InvalidArgument("polytope file: bad header line '" + key + "'");
    if (key == "dimension") {
      require(count >= 1, "polytope file: dimension must be positive");
      n = static_cast<int>(count);
    } else if (key == "vertices") {
      require(n > 0, "polytope file: dimension must come first");
      have_v = true;
      for (long i = 0; i < count; ++i) {
        auto row = read_row(in, n, "vertex");
        verts.push_back(Eigen::Map<Vec>(row.data(), n));
      }
    } else if (key == "halfspaces") {
      require(n > 0, "polytope file: dimension must come first");
      have_h = true;
      for (long i = 0; i < count; ++i) {
        auto row = read_row(in, n + 1, "halfspace");
        hs.push_back({Eigen::Map<Vec>(row.data(), n), row[n]});
      }
    } else {
      throw InvalidArgument("polytope file: unknown section '" + key + "'");
    }
  }
  if (have_v && have_h) return ConvexPolytope::from_both(verts, hs);
  if (have_h) return ConvexPolytope::from_halfspaces(hs);
  if (have_v) return ConvexPolytope::from_vertices(verts);
  throw InvalidArgument("polytope file: no vertices or halfspaces");
}

ConvexPolytope read_polytope_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open polytope file: " + path);
  return read_polytope(in);
}

void write_polytope(std::ostream& out, const ConvexPolytope& p) {
  out << "dimension " << p.dim() << "\n";
  out << "vertices " << p.vertices().size() << "\n";
  for (const auto& v : p.vertices()) {
    for (Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << fmt(v(i));
    out << "\n";
  }
  out << "halfspaces " << p.halfspaces().size() << "\n";
  for (const auto& h : p.halfspaces()) {
    for (Index i = 0; i < h.normal.size(); ++i) out << fmt(h.normal(i)) << " ";
    out << fmt(h.offset) << "\n";
  }
}

std::string volume_json(const ConvexPolytope& p) {
  nlohmann::json j;
  j["dimension"] = p.dim();
  j["volume"] = p.volume();
  j["vertices"] = p.vertices().size();
  j["facets"] = p.halfspaces().size();
  return j.dump();
}

std::string affine_map_json(const AffineMap& map) {
  nlohmann::json j;
  const int n = map.dim();
  nlohmann::json lin = nlohmann::json::array();
  for (int r = 0; r < n; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < n; ++c) row.push_back(map.linear()(r, c));
    lin.push_back(row);
  }
  j["linear"] = lin;
  j["translation"] = std::vector<double>(map.offset().data(), map.offset().data() + n);
  j["det"] = map.det();
  j["spectral_norm"] = map.spectral_norm();
  return j.dump();
}

}  // namespace ma::geometry
