#pragma once

// JSON and CSV files: graph fixtures, coefficient tables, Ising couplings
// and reports. Floats are written with 17 significant digits.

#include <string>
#include <vector>

#include <json.hpp>

#include "fisher/ising.hpp"
#include "fisher/laurent.hpp"
#include "fisher/lattice.hpp"

namespace fisher::io {

using json = nlohmann::json;

json read_json(const std::string& path);
std::string dump(const json& j, int indent = 2);
void write_json(const std::string& path, const json& j);
std::string format_double(double v);

// {m, n, topology, weights: [{kind, x, y, value[, index]}]}; "index" picks
// the triangle side. Missing weights default to 1.
FisherGraph graph_from_json(const json& j);
json graph_to_json(const FisherGraph& g);
FisherGraph read_graph(const std::string& path);

// {"topology", "terms": [{i, j, c}]}; cylinder tables have j = 0.
json poly_to_json(const LaurentPoly2& p, const std::string& topology);
json poly_to_json(const LaurentPoly1& p);
LaurentPoly2 poly_from_json(const json& j);
// Throws if any term has j != 0.
LaurentPoly1 poly1_from_json(const json& j);

// {m, n, beta?, edges: [{x, y, dir, J}]}; unlisted bonds get J = 1.
IsingSpec couplings_from_json(const json& j);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace fisher::io
