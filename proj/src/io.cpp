#include "fisher/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fisher::io {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void emit(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string end = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        emit(os, it.value(), indent, depth + 1);
      }
      os << nl << end << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      os << "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << nl << pad;
        first = false;
        emit(os, v, indent, depth + 1);
      }
      if (!flat) os << nl << end;
      os << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::ostringstream os;
  emit(os, j, indent, 0);
  return os.str();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << dump(j) << "\n";
}

FisherGraph graph_from_json(const json& j) {
  try {
    const int m = j.at("m").get<int>(), n = j.at("n").get<int>();
    const std::string topo = j.value("topology", std::string("torus"));
    WeightMap w;
    if (j.contains("weights"))
      for (const auto& e : j.at("weights")) {
        EdgeKind k = edge_kind_from_string(e.at("kind").get<std::string>());
        int side = e.value("index", 0);
        w[{k, e.at("x").get<int>(), e.at("y").get<int>(), side}] = e.at("value").get<double>();
      }
    if (topo == "torus") return build_torus_fisher(m, n, w);
    if (topo == "cylinder") return build_cylinder_fisher(m, n, w);
    throw std::invalid_argument("topology must be torus or cylinder, got " + topo);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed graph JSON: ") + e.what());
  }
}

json graph_to_json(const FisherGraph& g) {
  json j;
  j["m"] = g.m();
  j["n"] = g.n();
  j["topology"] = g.topology() == Topology::Torus ? "torus" : "cylinder";
  json ws = json::array();
  for (const Edge& e : g.edges()) {
    json w = {{"kind", to_string(e.kind)}, {"x", e.cell_x}, {"y", e.cell_y}, {"value", e.weight}};
    if (e.kind == EdgeKind::Triangle) w["index"] = e.side;
    ws.push_back(w);
  }
  j["weights"] = ws;
  return j;
}

FisherGraph read_graph(const std::string& path) { return graph_from_json(read_json(path)); }

json poly_to_json(const LaurentPoly2& p, const std::string& topology) {
  json t = json::array();
  for (const auto& q : p.terms()) t.push_back({{"i", q.i}, {"j", q.j}, {"c", q.c}});
  return {{"topology", topology}, {"terms", t}};
}

json poly_to_json(const LaurentPoly1& p) {
  json t = json::array();
  for (int i = -p.bound(); i <= p.bound(); ++i)
    if (p.coeff(i) != 0.0) t.push_back({{"i", i}, {"j", 0}, {"c", p.coeff(i)}});
  return {{"topology", "cylinder"}, {"terms", t}};
}

LaurentPoly2 poly_from_json(const json& j) {
  try {
    std::vector<LaurentPoly2::Term> t;
    for (const auto& q : j.at("terms")) t.push_back({q.at("i").get<int>(), q.value("j", 0), q.at("c").get<double>()});
    if (t.empty()) throw std::invalid_argument("coefficient table is empty");
    return LaurentPoly2::from_terms(t);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed coefficient JSON: ") + e.what());
  }
}

LaurentPoly1 poly1_from_json(const json& j) {
  LaurentPoly2 p = poly_from_json(j);
  LaurentPoly1 q(p.mbound());
  for (const auto& t : p.terms()) {
    if (t.j != 0) throw std::invalid_argument("circle and jensen modes need a one-variable polynomial");
    q.set(t.i, t.c);
  }
  return q;
}

IsingSpec couplings_from_json(const json& j) {
  try {
    IsingSpec s = IsingSpec::uniform(j.at("m").get<int>(), j.at("n").get<int>(), 1.0, j.value("beta", 1.0));
    if (j.contains("edges"))
      for (const auto& e : j.at("edges")) s.set_coupling(e.at("x").get<int>(), e.at("y").get<int>(), e.at("dir").get<int>(), e.at("J").get<double>());
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed couplings JSON: ") + e.what());
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << "\n";
  }
}

}  // namespace fisher::io
