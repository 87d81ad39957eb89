#include "cblab/io.hpp"

#include <fstream>
#include <sstream>

namespace cblab {

namespace {

Json rows_to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (const auto& q : m.row(i)) row.push_back(to_string(q));
    rows.push_back(std::move(row));
  }
  return rows;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

Json to_json(const ProjPoint& p) {
  Json out = Json::array();
  for (const auto& q : p.coords()) out.push_back(to_string(q));
  return out;
}

Json to_json(const Flat& f) { return rows_to_json(f.basis()); }

Json to_json(const PlaneConfiguration& p) {
  Json out = Json::array();
  for (const auto& f : p.flats) out.push_back(to_json(f));
  return out;
}

Json to_json(const PointSet& x) {
  Json pts = Json::array();
  for (const auto& p : x.points()) pts.push_back(to_json(p));
  return {{"ambient", x.ambient()}, {"points", std::move(pts)}, {"labels", x.labels()}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.dump());
  if (!j.is_string()) throw ParseError("coordinate must be a rational string or integer, got " + j.dump());
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

QVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of coordinates");
  QVector v;
  for (const auto& c : j) v.push_back(rational_from_json(c));
  return v;
}

ProjPoint point_from_json(const Json& j) {
  try {
    return ProjPoint(vector_from_json(j));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Flat flat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("flat must be a nonempty array of rows");
  std::vector<QVector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  const std::size_t width = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != width) throw ParseError("flat rows have different lengths");
  try {
    return Flat::from_rows(QMatrix::from_rows(rows, width));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

PlaneConfiguration config_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("configuration must be an array of flats");
  PlaneConfiguration p;
  for (const auto& f : j) p.flats.push_back(flat_from_json(f));
  return p;
}

PointSet point_set_from_json(const Json& j) {
  const Json& amb = field(j, "ambient");
  if (!amb.is_number_unsigned()) throw ParseError("\"ambient\" must be a nonnegative integer");
  const auto n = amb.get<std::size_t>();
  const Json& pts = field(j, "points");
  if (!pts.is_array()) throw ParseError("\"points\" must be an array");
  std::vector<ProjPoint> points;
  for (const auto& p : pts) {
    points.push_back(point_from_json(p));
    if (points.back().ambient() != n)
      throw ParseError("point " + p.dump() + " does not have " + std::to_string(n + 1) + " coordinates");
  }
  try {
    if (j.contains("labels")) {
      const Json& lab = j.at("labels");
      if (!lab.is_array()) throw ParseError("\"labels\" must be an array");
      std::vector<std::size_t> labels;
      for (const auto& l : lab) {
        if (!l.is_number_unsigned()) throw ParseError("labels must be nonnegative integers");
        labels.push_back(l.get<std::size_t>());
      }
      return PointSet(n, std::move(points), std::move(labels));
    }
    return PointSet(n, std::move(points));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

PointSet read_point_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return point_set_from_json(j);
}

void write_point_set(const std::string& path, const PointSet& x, const Json& metadata) {
  Json j = to_json(x);
  if (metadata.is_object())
    for (const auto& [k, v] : metadata.items()) j[k] = v;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace cblab
