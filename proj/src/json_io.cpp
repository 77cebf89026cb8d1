#include "demoplan/json_io.hpp"

#include <fstream>

namespace demoplan {

Json to_json(const Quatd& q) { return Json::array({q.w(), q.x(), q.y(), q.z()}); }

Json to_json(const Vec3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json to_json(const Posed& d) {
  return Json{{"r", to_json(d.real)}, {"p", to_json(position(d))}};
}

namespace {

void require_numeric_array(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) {
    throw SchemaError(where + ": expected an array of " + std::to_string(n) + " numbers");
  }
  for (const auto& e : j) {
    if (!e.is_number()) throw SchemaError(where + ": non-numeric entry");
  }
}

}  // namespace

Quatd quat_from_json(const Json& j, const std::string& where) {
  require_numeric_array(j, 4, where);
  return Quatd(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

Vec3d vec3_from_json(const Json& j, const std::string& where) {
  require_numeric_array(j, 3, where);
  return Vec3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Posed pose_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("r") || !j.contains("p")) {
    throw SchemaError(where + ": expected {\"r\": [w,x,y,z], \"p\": [x,y,z]}");
  }
  return pose_from(vec3_from_json(j["p"], where + ".p"), quat_from_json(j["r"], where + ".r"));
}

Json parse_json(const std::string& text, const std::string& where) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError(where + ": malformed JSON");
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json(text, path);
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << j.dump(2) << "\n";
}

double require_number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw SchemaError(where + ": missing numeric field \"" + key + "\"");
  }
  return j[key].get<double>();
}

}  // namespace demoplan
