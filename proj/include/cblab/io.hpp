#pragma once

// JSON encoding of point sets, flats and configurations.
//
// Coordinates are written as exact rational strings ("3", "-2/5"). Parsing
// also accepts JSON integers but rejects floats anywhere.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cblab/cover.hpp"
#include "cblab/projective.hpp"

namespace cblab {

using Json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const ProjPoint& p);
Json to_json(const Flat& f);
Json to_json(const PlaneConfiguration& p);
/// {"ambient": n, "points": [[...], ...], "labels": [...]}
Json to_json(const PointSet& x);

Rational rational_from_json(const Json& j);
QVector vector_from_json(const Json& j);
ProjPoint point_from_json(const Json& j);
Flat flat_from_json(const Json& j);
PlaneConfiguration config_from_json(const Json& j);
PointSet point_set_from_json(const Json& j);

/// Reads and parses a point-set file. Throws ParseError on any failure.
PointSet read_point_set(const std::string& path);
void write_point_set(const std::string& path, const PointSet& x, const Json& metadata = {});

}  // namespace cblab
