#include "absdyn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace absdyn {

using nlohmann::json;

nlohmann::json to_json(const Measure1D& m) {
  json j;
  if (const auto* a = std::get_if<AtomicMeasure>(&m)) {
    j["type"] = "atomic";
    json atoms = json::array();
    for (const Atom& atom : a->atoms()) atoms.push_back(json::array({atom.x, atom.w}));
    j["atoms"] = std::move(atoms);
  } else if (const auto* g = std::get_if<GridMeasure>(&m)) {
    j["type"] = "grid";
    j["x_max"] = g->x_max();
    j["n"] = g->n();
    j["values"] = g->values();
    j["tail_mass"] = g->tail_mass();
  } else {
    j["type"] = "empirical";
    j["samples"] = std::get<EmpiricalMeasure>(m).samples();
  }
  return j;
}

Measure1D measure_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("type"), Errc::io, "measure JSON must be an object with a 'type'");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "atomic") {
      std::vector<Atom> atoms;
      for (const auto& pair : j.at("atoms")) {
        require(pair.is_array() && pair.size() == 2, Errc::io, "atomic entries must be [x,w] pairs");
        atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
      }
      return AtomicMeasure(std::move(atoms));
    }
    if (type == "grid") {
      auto values = j.at("values").get<std::vector<double>>();
      require(j.at("n").get<int>() == static_cast<int>(values.size()), Errc::io,
              "grid 'n' does not match the number of values");
      return GridMeasure(j.at("x_max").get<double>(), std::move(values),
                         j.value("tail_mass", 0.0));
    }
    if (type == "empirical") {
      return EmpiricalMeasure(j.at("samples").get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    throw Error(Errc::io, std::string("malformed measure JSON: ") + e.what());
  }
  throw Error(Errc::io, "unknown measure type '" + type + "'");
}

Measure1D load_measure(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(Errc::io, path + ": " + e.what());
  }
  return measure_from_json(j);
}

void save_measure(const Measure1D& m, const std::string& path) {
  write_file_atomic(path, to_json(m).dump());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io, "cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), Errc::io, "cannot open output file: " + tmp);
    out << content;
    out.flush();
    require(out.good(), Errc::io, "write failed: " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, Errc::io, "rename failed: " + path);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace absdyn
