#include "mongeampere/convexfn/io.hpp"

#include "mongeampere/geometry/io.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace ma::convexfn {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PLConvexFunction read_function(std::istream& in) {
  std::string line, head;
  std::stringstream poly;
  long count = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if ((ls >> key) && key == "nodes") {
      if (!(ls >> count) || count <= 0) throw InvalidArgument("function file: bad nodes header");
      break;
    }
    poly << line << "\n";
  }
  if (count < 0) throw InvalidArgument("function file: missing nodes section");
  auto domain = geometry::read_polytope(poly);
  const int n = domain.dim();
  std::vector<Vec> pts;
  std::vector<char> bnd;
  Vec vals(count);
  for (long i = 0; i < count;) {
    if (!std::getline(in, line)) throw InvalidArgument("function file: truncated nodes section");
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string flag;
    if (!(ls >> flag)) continue;
    if (flag != "b" && flag != "i") throw InvalidArgument("function file: node flag must be b or i");
    Vec x(n);
    for (int k = 0; k < n; ++k)
      if (!(ls >> x(k))) throw InvalidArgument("function file: malformed node row");
    double v;
    std::string extra;
    if (!(ls >> v) || (ls >> extra)) throw InvalidArgument("function file: malformed node row");
    pts.push_back(x);
    bnd.push_back(flag == "b");
    vals(i++) = v;
  }
  return {std::move(domain), std::move(pts), std::move(bnd), std::move(vals)};
}

void write_function(std::ostream& out, const PLConvexFunction& u) {
  geometry::write_polytope(out, u.domain());
  out << "nodes " << u.size() << "\n";
  for (Index i = 0; i < u.size(); ++i) {
    out << (u.is_boundary(i) ? "b" : "i");
    for (Index k = 0; k < u.node(i).size(); ++k) out << " " << fmt(u.node(i)(k));
    out << " " << fmt(u.value(i)) << "\n";
  }
}

void write_measure_csv(std::ostream& out, const PLConvexFunction& u, const MAMeasure& m) {
  out << "node,boundary";
  for (int k = 0; k < u.dim(); ++k) out << ",x" << k + 1;
  out << ",mass\n";
  for (Index i = 0; i < u.size(); ++i) {
    out << i << "," << (u.is_boundary(i) ? 1 : 0);
    for (int k = 0; k < u.dim(); ++k) out << "," << fmt(u.node(i)(k));
    out << "," << fmt(m.mass(i)) << "\n";
  }
}

void write_modulus_csv(std::ostream& out, const ModulusCurve& c) {
  out << "delta,omega\n";
  for (std::size_t k = 0; k < c.delta.size(); ++k) out << fmt(c.delta[k]) << "," << fmt(c.omega[k]) << "\n";
}

}  // namespace ma::convexfn
