#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "demoplan/se3.hpp"

namespace demoplan {

using Json = nlohmann::json;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quaternions serialize as [w, x, y, z], vectors as [x, y, z], poses as
/// {"r": [...], "p": [...]} across every file format in this project.
Json to_json(const Quatd& q);
Json to_json(const Vec3d& v);
Json to_json(const Posed& d);

Quatd quat_from_json(const Json& j, const std::string& where);
Vec3d vec3_from_json(const Json& j, const std::string& where);
Posed pose_from_json(const Json& j, const std::string& where);

Json parse_json(const std::string& text, const std::string& where);
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

double require_number(const Json& j, const std::string& key, const std::string& where);

}  // namespace demoplan
