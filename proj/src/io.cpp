#include "psg/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

namespace psg {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& s, const std::string& where) {
  if (s.empty() || s == "nan" || s == "NaN" || s == "NA")
    return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(where + ": cannot parse number '" + s + "'");
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

std::unordered_map<std::string, VertexId> label_index(const Graph& g) {
  std::unordered_map<std::string, VertexId> index;
  for (VertexId v = 0; v < g.order(); ++v) index.emplace(g.label(v), v);
  return index;
}

}  // namespace

Graph read_edge_csv(std::istream& in, bool directed) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const auto header = split_csv(line);
  if (header.size() != 3 || header[0] != "src" || header[1] != "dst" || header[2] != "weight")
    throw ValidationError("edge CSV: expected header 'src,dst,weight'");

  std::vector<std::string> labels;
  std::unordered_map<std::string, VertexId> ids;
  auto id_of = [&](const std::string& label) {
    if (label.empty()) throw ValidationError("edge CSV: empty vertex label");
    auto [it, inserted] = ids.try_emplace(label, static_cast<VertexId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = "edge CSV line " + std::to_string(line_no);
    if (cells.size() != 3) throw ValidationError(where + ": expected 3 fields");
    const VertexId s = id_of(cells[0]);
    const VertexId d = id_of(cells[1]);
    edges.push_back({s, d, parse_number(cells[2], where)});
  }
  Graph g = build_graph(static_cast<int>(labels.size()), edges, directed);
  g.set_labels(std::move(labels));
  return g;
}

Graph read_edge_csv(const std::filesystem::path& path, bool directed) {
  auto in = open_input(path);
  return read_edge_csv(in, directed);
}

void write_labels_csv(const Graph& g, std::ostream& out) {
  out << "id,label\n";
  for (VertexId v = 0; v < g.order(); ++v) out << v << ',' << g.label(v) << '\n';
}

TimeSeries read_series_csv(std::istream& in, const Graph& g) {
  const auto index = label_index(g);
  std::vector<std::vector<double>> rows(g.order());
  std::vector<bool> seen(g.order(), false);
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (first && !cells.empty() && cells[0] == "vertex") {
      first = false;
      continue;
    }
    first = false;
    const std::string where = "series CSV line " + std::to_string(line_no);
    if (cells.size() < 2) throw ValidationError(where + ": no samples");
    const auto it = index.find(cells[0]);
    if (it == index.end()) throw ValidationError(where + ": unknown vertex '" + cells[0] + "'");
    if (seen[it->second]) throw ValidationError(where + ": duplicate vertex '" + cells[0] + "'");
    if (width == 0) width = cells.size() - 1;
    if (cells.size() - 1 != width) throw ValidationError(where + ": ragged row");
    seen[it->second] = true;
    auto& row = rows[it->second];
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(parse_number(cells[c], where));
  }
  for (VertexId v = 0; v < g.order(); ++v)
    if (!seen[v]) throw ValidationError("series CSV: no row for vertex '" + g.label(v) + "'");

  TimeSeries x;
  x.values.resize(g.order(), static_cast<Eigen::Index>(width));
  for (VertexId v = 0; v < g.order(); ++v)
    for (std::size_t c = 0; c < width; ++c) x.values(v, static_cast<Eigen::Index>(c)) = rows[v][c];
  return impute_moving_average(std::move(x), 5);
}

TimeSeries read_series_csv(const std::filesystem::path& path, const Graph& g) {
  auto in = open_input(path);
  return read_series_csv(in, g);
}

void write_series_csv(const TimeSeries& x, const Graph& g, std::span<const VertexId> rows,
                      std::ostream& out) {
  if (rows.size() != static_cast<std::size_t>(x.vertices()))
    throw ValidationError("write_series_csv: row labels do not match the series");
  out << "vertex";
  for (Eigen::Index t = 0; t < x.steps(); ++t) out << ',' << x.start + t;
  out << '\n' << std::setprecision(17);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << g.label(rows[r]);
    for (Eigen::Index t = 0; t < x.steps(); ++t)
      out << ',' << x.values(static_cast<Eigen::Index>(r), t);
    out << '\n';
  }
}

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out) {
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw ComputationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json labels_of(const Graph& g, const VertexSet& s) {
  nlohmann::json out = nlohmann::json::array();
  for (VertexId v : s) out.push_back(g.label(v));
  return out;
}

VertexSet vertices_from_labels(const nlohmann::json& labels, const Graph& g) {
  const auto index = label_index(g);
  std::vector<VertexId> ids;
  for (const auto& l : labels) {
    const auto it = index.find(l.get<std::string>());
    if (it == index.end())
      throw ValidationError("unknown vertex label '" + l.get<std::string>() + "'");
    ids.push_back(it->second);
  }
  return VertexSet(std::move(ids));
}

nlohmann::json active_components_to_json(const Graph& g, std::span<const ActiveComponent> acs) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t k = 0; k < acs.size(); ++k)
    arr.push_back({{"id", k},
                   {"vertices", labels_of(g, acs[k].vertices)},
                   {"birth", acs[k].birth},
                   {"death", acs[k].death}});
  return arr;
}

std::vector<ActiveComponent> active_components_from_json(const nlohmann::json& j,
                                                         const Graph& g) {
  if (!j.is_array()) throw ValidationError("active components: expected a JSON array");
  std::vector<ActiveComponent> acs;
  for (const auto& item : j) {
    ActiveComponent ac;
    ac.vertices = vertices_from_labels(item.at("vertices"), g);
    if (ac.vertices.empty()) throw ValidationError("active components: empty vertex list");
    ac.birth = item.at("birth").get<long>();
    ac.death = item.at("death").get<long>();
    acs.push_back(std::move(ac));
  }
  return acs;
}

namespace {

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

Eigen::MatrixXd matrix_from(const nlohmann::json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Eigen::VectorXd row = vector_from(j[r]);
    if (row.size() != cols) throw ValidationError("model JSON: ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

nlohmann::json ar_json(const ArModel& m) {
  return {{"order", m.order()},
          {"intercept", m.intercept},
          {"coefficients", vector_json(m.coefficients)},
          {"noise_scale", m.noise_scale}};
}

ArModel ar_from(const nlohmann::json& j) {
  ArModel m;
  m.intercept = j.at("intercept").get<double>();
  m.coefficients = vector_from(j.at("coefficients"));
  m.noise_scale = j.at("noise_scale").get<double>();
  if (m.order() != j.at("order").get<int>()) throw ValidationError("model JSON: order mismatch");
  return m;
}

}  // namespace

nlohmann::json cluster_model_to_json(const Graph& g, const ClusterModel& m) {
  nlohmann::json freqs = nlohmann::json::array();
  for (const auto& fm : m.models) {
    if (const auto* ar = std::get_if<ArModel>(&fm)) {
      auto j = ar_json(*ar);
      j["kind"] = "ar";
      freqs.push_back(std::move(j));
    } else {
      const auto& tar = std::get<TarModel>(fm);
      nlohmann::json regimes = nlohmann::json::array();
      for (const auto& r : tar.regimes) regimes.push_back(ar_json(r));
      freqs.push_back({{"kind", "tar"},
                       {"thresholds", tar.thresholds},
                       {"exogenous", tar.exogenous_kind},
                       {"regimes", std::move(regimes)}});
    }
  }
  nlohmann::json vertices = nlohmann::json::array();
  for (VertexId v : m.vertices) vertices.push_back(g.label(v));
  return {{"cluster_id", m.cluster_id},
          {"vertices", std::move(vertices)},
          {"model_kind", to_string(m.kind)},
          {"basis",
           {{"shift", to_string(m.basis.shift_kind)},
            {"eigenvalues", vector_json(m.basis.eigenvalues)},
            {"eigenvectors", matrix_json(m.basis.eigenvectors)}}},
          {"frequencies", std::move(freqs)},
          {"preprocessing",
           {{"seasonal_period", m.preprocessing.seasonal_period},
            {"differenced", m.preprocessing.differenced},
            {"phase_means", matrix_json(m.preprocessing.phase_means)}}}};
}

ClusterModel cluster_model_from_json(const nlohmann::json& j, const Graph& g) {
  ClusterModel m;
  m.cluster_id = j.at("cluster_id").get<int>();
  const auto index = label_index(g);
  for (const auto& l : j.at("vertices")) {
    const auto it = index.find(l.get<std::string>());
    if (it == index.end()) throw ValidationError("model JSON: unknown vertex label");
    m.vertices.push_back(it->second);
  }
  const auto k = static_cast<Eigen::Index>(m.vertices.size());
  m.kind = parse_model_kind(j.at("model_kind").get<std::string>());
  const auto& b = j.at("basis");
  m.basis.shift_kind = parse_shift_kind(b.at("shift").get<std::string>());
  m.basis.eigenvalues = vector_from(b.at("eigenvalues"));
  m.basis.eigenvectors = matrix_from(b.at("eigenvectors"), k);
  if (m.basis.eigenvalues.size() != k || m.basis.eigenvectors.rows() != k)
    throw ValidationError("model JSON: basis does not match cluster size");
  for (const auto& f : j.at("frequencies")) {
    const auto kind = f.at("kind").get<std::string>();
    if (kind == "ar") {
      m.models.emplace_back(ar_from(f));
    } else if (kind == "tar") {
      TarModel tar;
      tar.thresholds = f.at("thresholds").get<std::vector<double>>();
      tar.exogenous_kind = f.at("exogenous").get<std::string>();
      for (const auto& r : f.at("regimes")) tar.regimes.push_back(ar_from(r));
      if (tar.regimes.size() != tar.thresholds.size() + 1)
        throw ValidationError("model JSON: regime count does not match thresholds");
      m.models.emplace_back(std::move(tar));
    } else {
      throw ValidationError("model JSON: unknown frequency model '" + kind + "'");
    }
  }
  if (static_cast<Eigen::Index>(m.models.size()) != k)
    throw ValidationError("model JSON: one model per graph frequency expected");
  const auto& p = j.at("preprocessing");
  m.preprocessing.seasonal_period = p.at("seasonal_period").get<int>();
  m.preprocessing.differenced = p.at("differenced").get<bool>();
  m.preprocessing.phase_means =
      matrix_from(p.at("phase_means"), m.preprocessing.seasonal_period);
  if (m.preprocessing.seasonal_period > 0 && m.preprocessing.phase_means.rows() != k)
    throw ValidationError("model JSON: seasonal profile does not match cluster size");
  return m;
}

void check_graph_hash(const nlohmann::json& j, const Graph& g, const std::string& what) {
  if (!j.contains("graph_hash")) throw ValidationError(what + ": missing graph_hash");
  const auto recorded = j.at("graph_hash").get<std::string>();
  if (recorded != hash_hex(graph_hash(g)))
    throw ValidationError(what + " was produced for a different graph (hash " + recorded +
                          ", expected " + hash_hex(graph_hash(g)) + ")");
}

}  // namespace psg
