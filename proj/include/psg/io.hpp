#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "psg/active_components.hpp"
#include "psg/forecast.hpp"
#include "psg/graph.hpp"
#include "psg/scsc.hpp"
#include "psg/stationarity.hpp"

namespace psg {

/// Edge list CSV with header `src,dst,weight`. Labels become dense ids in
/// first-seen order.
Graph read_edge_csv(std::istream& in, bool directed);
Graph read_edge_csv(const std::filesystem::path& path, bool directed);

/// `id,label` rows.
void write_labels_csv(const Graph& g, std::ostream& out);

/// One row per vertex: label, then samples. An optional first row whose first
/// cell is `vertex` is a header. Empty, `nan` and `NA` cells are missing and
/// imputed by a centred moving average (width 5). Rows are returned in graph id
/// order; every graph vertex must appear exactly once.
TimeSeries read_series_csv(std::istream& in, const Graph& g);
TimeSeries read_series_csv(const std::filesystem::path& path, const Graph& g);

/// Writes `vertex,<t>,...` header plus one row per entry of `rows`.
void write_series_csv(const TimeSeries& x, const Graph& g, std::span<const VertexId> rows,
                      std::ostream& out);

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out);

std::string hash_hex(std::uint64_t h);

/// Writes to a sibling temporary file, then renames over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

nlohmann::json active_components_to_json(const Graph& g, std::span<const ActiveComponent> acs);
std::vector<ActiveComponent> active_components_from_json(const nlohmann::json& j, const Graph& g);

/// Label list -> vertex set, rejecting unknown labels.
VertexSet vertices_from_labels(const nlohmann::json& labels, const Graph& g);
nlohmann::json labels_of(const Graph& g, const VertexSet& s);

nlohmann::json cluster_model_to_json(const Graph& g, const ClusterModel& m);
ClusterModel cluster_model_from_json(const nlohmann::json& j, const Graph& g);

/// Throws ValidationError when `j["graph_hash"]` does not match g.
void check_graph_hash(const nlohmann::json& j, const Graph& g, const std::string& what);

}  // namespace psg
