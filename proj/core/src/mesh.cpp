#include "scenegen/mesh.hpp"

#include <charconv>
#include <sstream>

#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"

namespace scenegen {

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!is_finite(vertices_[i])) {
      throw GeometryError("non-finite vertex " + std::to_string(i));
    }
    bounds_.extend(vertices_[i]);
  }
  normals_.reserve(triangles_.size());
  areas_.reserve(triangles_.size());
  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    const auto& t = triangles_[i];
    for (auto idx : t) {
      if (idx >= vertices_.size()) {
        throw GeometryError("triangle " + std::to_string(i) + " index " + std::to_string(idx) +
                            " out of range");
      }
    }
    const Vec3 n = cross(vertices_[t[1]] - vertices_[t[0]], vertices_[t[2]] - vertices_[t[0]]);
    const double len = length(n);
    const double area = 0.5 * len;
    if (!(area >= kMinTriangleArea)) {
      throw GeometryError("degenerate triangle " + std::to_string(i));
    }
    normals_.push_back(n / len);
    areas_.push_back(area);
  }
}

double TriangleMesh::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

TriangleMesh TriangleMesh::transformed(const Placement& placement) const {
  std::vector<Vec3> out;
  out.reserve(vertices_.size());
  for (const auto& v : vertices_) out.push_back(placement.apply(v));
  return TriangleMesh(std::move(out), triangles_);
}

TriangleMesh TriangleMesh::merge(std::span<const TriangleMesh> parts) {
  std::vector<Vec3> verts;
  std::vector<Triangle> tris;
  for (const auto& part : parts) {
    const auto base = static_cast<std::uint32_t>(verts.size());
    verts.insert(verts.end(), part.vertices().begin(), part.vertices().end());
    for (const auto& t : part.triangles()) tris.push_back({t[0] + base, t[1] + base, t[2] + base});
  }
  return TriangleMesh(std::move(verts), std::move(tris));
}

TriangleMesh make_box(const Vec3& lo, const Vec3& hi) {
  std::vector<Vec3> v = {
      {lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
      {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z},
  };
  std::vector<Triangle> t = {
      {0, 2, 1}, {0, 3, 2},  // bottom (-z)
      {4, 5, 6}, {4, 6, 7},  // top (+z)
      {0, 1, 5}, {0, 5, 4},  // -y
      {2, 3, 7}, {2, 7, 6},  // +y
      {1, 2, 6}, {1, 6, 5},  // +x
      {3, 0, 4}, {3, 4, 7},  // -x
  };
  return TriangleMesh(std::move(v), std::move(t));
}

TriangleMesh make_uv_sphere(const Vec3& center, double radius, int stacks, int slices) {
  std::vector<Vec3> v;
  std::vector<Triangle> t;
  v.push_back(center + Vec3{0, 0, radius});
  for (int i = 1; i < stacks; ++i) {
    const double phi = kPi * i / stacks;
    for (int j = 0; j < slices; ++j) {
      const double theta = kTwoPi * j / slices;
      v.push_back(center + Vec3{radius * std::sin(phi) * std::cos(theta),
                                radius * std::sin(phi) * std::sin(theta), radius * std::cos(phi)});
    }
  }
  v.push_back(center - Vec3{0, 0, radius});
  const auto ring = [&](int i, int j) {
    return static_cast<std::uint32_t>(1 + (i - 1) * slices + (j % slices));
  };
  const auto bottom = static_cast<std::uint32_t>(v.size() - 1);
  for (int j = 0; j < slices; ++j) t.push_back({0, ring(1, j), ring(1, j + 1)});
  for (int i = 1; i + 1 < stacks; ++i) {
    for (int j = 0; j < slices; ++j) {
      t.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
      t.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
    }
  }
  for (int j = 0; j < slices; ++j) t.push_back({bottom, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
  return TriangleMesh(std::move(v), std::move(t));
}

namespace {

double parse_double(std::string_view tok, int line) {
  double value = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw GeometryError("obj line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

TriangleMesh parse_obj(const std::string& text) {
  std::vector<Vec3> verts;
  std::vector<Triangle> tris;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      std::string a, b, c;
      if (!(ls >> a >> b >> c)) throw GeometryError("obj line " + std::to_string(line_no) + ": short vertex");
      verts.push_back({parse_double(a, line_no), parse_double(b, line_no), parse_double(c, line_no)});
    } else if (tag == "f") {
      std::vector<std::uint32_t> idx;
      std::string tok;
      while (ls >> tok) {
        const auto slash = tok.find('/');
        const std::string head = tok.substr(0, slash);
        long value = 0;
        auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
        if (ec != std::errc() || ptr != head.data() + head.size() || value == 0) {
          throw GeometryError("obj line " + std::to_string(line_no) + ": bad face index '" + tok + "'");
        }
        // Negative indices are relative to the current vertex count.
        const long resolved = value > 0 ? value - 1 : static_cast<long>(verts.size()) + value;
        if (resolved < 0) throw GeometryError("obj line " + std::to_string(line_no) + ": index out of range");
        idx.push_back(static_cast<std::uint32_t>(resolved));
      }
      if (idx.size() < 3) throw GeometryError("obj line " + std::to_string(line_no) + ": face needs 3 vertices");
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) tris.push_back({idx[0], idx[k], idx[k + 1]});
    }
  }
  return TriangleMesh(std::move(verts), std::move(tris));
}

TriangleMesh load_obj(const std::filesystem::path& path) { return parse_obj(read_text_file(path)); }

std::string format_obj(const TriangleMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& t : mesh.triangles()) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  return out.str();
}

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  write_file_atomic(path, format_obj(mesh));
}

}  // namespace scenegen
