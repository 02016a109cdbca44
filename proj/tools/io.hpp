#pragma once

// JSON and CSV conversion for the command line tool. Vertex labels are
// 1-based in every file; the library is 0-based.

#include <string>

#include "json.hpp"
#include "magtorus/atlas.hpp"
#include "magtorus/experiments.hpp"
#include "magtorus/oracles.hpp"

namespace mtio {

using json = nlohmann::json;

// Accepts {"n", "edges"} or an object holding it under "graph".
magtorus::Graph graph_from_json(const json& j);
json graph_to_json(const magtorus::Graph& g);

// Accepts {"dim", "re", "im"?} or an object holding it under "matrix". A
// nonzero "im" is rejected: base matrices are real symmetric.
magtorus::RMatrix matrix_from_json(const json& j);
json matrix_to_json(const magtorus::RMatrix& m);

json read_file(const std::string& path);

std::string edge_key(const magtorus::Graph& g, int edge);
json point_to_json(const magtorus::Graph& g, const magtorus::MagneticPoint& p);

json critical_data_to_json(const magtorus::CriticalData& d);
json manifold_to_json(const magtorus::Graph& g, const magtorus::ManifoldReport& r);
std::string manifold_csv_header();
std::string manifold_csv_row(const magtorus::ManifoldReport& r);

json genericity_to_json(const magtorus::GenericityReport& r);
json grid_to_json(const magtorus::Graph& g, const magtorus::GridSearchResult& r);
json sweep_to_json(const magtorus::SweepResult& r);
json ks_to_json(const magtorus::KsReport& r);
json census_to_json(const magtorus::CensusResult& r);
json bands_to_json(const magtorus::Graph& g, const magtorus::BandReport& r);

}  // namespace mtio
