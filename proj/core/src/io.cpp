#include "ugen/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ugen {

using nlohmann::json;

std::string system_to_json(const PolySystem& F) {
  json j;
  j["variables"] = F.ring->vars();
  j["groups"] = F.ring->groups();
  json homog = json::array();
  bool any_homog = false;
  for (int g = 0; g < F.ring->ngroups(); ++g) {
    homog.push_back(F.ring->homog_var(g));
    if (F.ring->homog_var(g) >= 0) any_homog = true;
  }
  if (any_homog) j["homogenizing"] = homog;
  json eqs = json::array();
  for (const auto& p : F.polys) eqs.push_back(p.to_string());
  j["equations"] = eqs;
  return j.dump(2) + "\n";
}

PolySystem system_from_json(const std::string& text) {
  const json j = json::parse(text);
  std::vector<std::string> vars = j.at("variables").get<std::vector<std::string>>();
  std::vector<std::vector<int>> groups =
      j.at("groups").get<std::vector<std::vector<int>>>();
  std::vector<int> homog;
  if (j.contains("homogenizing")) homog = j.at("homogenizing").get<std::vector<int>>();
  RingPtr ring = Ring::make(std::move(vars), std::move(groups), std::move(homog));
  std::vector<MPoly> polys;
  for (const auto& s : j.at("equations"))
    polys.push_back(parse_poly(ring, s.get<std::string>()));
  return PolySystem(ring, std::move(polys));
}

void write_system_json(const PolySystem& F, const std::string& path) {
  atomic_write_file(path, system_to_json(F));
}

PolySystem read_system_json(const std::string& path) {
  return system_from_json(read_file(path));
}

std::string solutions_to_json(const std::vector<SolutionEntry>& sols) {
  json arr = json::array();
  for (const auto& s : sols) {
    json point = json::array();
    for (const auto& f : s.point.factors) {
      json fac = json::array();
      for (int i = 0; i < f.size(); ++i)
        fac.push_back(json::array({f[i].real(), f[i].imag()}));
      point.push_back(fac);
    }
    arr.push_back(json{{"status", s.status}, {"point", point}});
  }
  return arr.dump(2) + "\n";
}

std::vector<SolutionEntry> solutions_from_json(const std::string& text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("solutions: expected a JSON array");
  std::vector<SolutionEntry> out;
  for (const auto& e : arr) {
    SolutionEntry s;
    s.status = e.at("status").get<std::string>();
    for (const auto& fac : e.at("point")) {
      Eigen::VectorXcd f(fac.size());
      int i = 0;
      for (const auto& c : fac) f[i++] = Cx(c.at(0).get<double>(), c.at(1).get<double>());
      s.point.factors.push_back(std::move(f));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_solutions_json(const std::vector<SolutionEntry>& sols,
                          const std::string& path) {
  atomic_write_file(path, solutions_to_json(sols));
}

std::vector<SolutionEntry> read_solutions_json(const std::string& path) {
  return solutions_from_json(read_file(path));
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ugen
