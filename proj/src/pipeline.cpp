#include "psg/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <iomanip>
#include <map>
#include <sstream>

#include "psg/io.hpp"

namespace psg {

// --- configuration --------------------------------------------------------

namespace {

std::string strip(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ValidationError("config: bad value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ValidationError("config: bad boolean '" + value + "' for " + key);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = strip(item);
    if (!item.empty()) out.push_back(parse_value<int>(key, item));
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (!std::isfinite(alpha)) throw ValidationError("config: alpha must be finite");
  if (!(gamma_th > 0.0 && gamma_th <= 1.0))
    throw ValidationError("config: gamma_th must lie in (0, 1]");
  if (theta < 1) throw ValidationError("config: theta must be at least 1");
  if (min_ac_size < 1) throw ValidationError("config: min_ac_size must be at least 1");
  if (max_lag < 0) throw ValidationError("config: max_lag must be nonnegative");
  if (seasonal_period < 0) throw ValidationError("config: seasonal_period must be nonnegative");
  if (!(diag_loading >= 0.0)) throw ValidationError("config: diag_loading must be nonnegative");
  if (ar_order < 1) throw ValidationError("config: ar_order must be at least 1");
  for (int m : order_candidates)
    if (m < 1) throw ValidationError("config: order_candidates must be positive");
  if (regimes < 1) throw ValidationError("config: regimes must be at least 1");
  if (tar_grid < 2) throw ValidationError("config: tar_grid must be at least 2");
  if (train_fraction <= 0.0 || val_fraction < 0.0 || test_fraction <= 0.0)
    throw ValidationError("config: split fractions out of range");
  if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
    throw ValidationError("config: split fractions must sum to 1");
  if (horizons.empty()) throw ValidationError("config: horizons must not be empty");
  for (int h : horizons)
    if (h < 1) throw ValidationError("config: horizons must be positive");
  if (eval_stride < 1) throw ValidationError("config: eval_stride must be at least 1");
  if (shift == ShiftKind::Adjacency && directed)
    throw ValidationError("config: adjacency shift needs an undirected graph");
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key == "alpha") cfg.alpha = parse_value<double>(key, value);
    else if (key == "gamma_th") cfg.gamma_th = parse_value<double>(key, value);
    else if (key == "theta") cfg.theta = parse_value<int>(key, value);
    else if (key == "min_ac_size") cfg.min_ac_size = parse_value<int>(key, value);
    else if (key == "max_lag") cfg.max_lag = parse_value<int>(key, value);
    else if (key == "shift") cfg.shift = parse_shift_kind(value);
    else if (key == "directed") cfg.directed = parse_bool(key, value);
    else if (key == "seasonal_period") cfg.seasonal_period = parse_value<int>(key, value);
    else if (key == "differencing") cfg.differencing = parse_bool(key, value);
    else if (key == "diag_loading") cfg.diag_loading = parse_value<double>(key, value);
    else if (key == "model") cfg.model = parse_model_kind(value);
    else if (key == "ar_order") cfg.ar_order = parse_value<int>(key, value);
    else if (key == "order_candidates") cfg.order_candidates = parse_int_list(key, value);
    else if (key == "regimes") cfg.regimes = parse_value<int>(key, value);
    else if (key == "tar_grid") cfg.tar_grid = parse_value<int>(key, value);
    else if (key == "train_fraction") cfg.train_fraction = parse_value<double>(key, value);
    else if (key == "val_fraction") cfg.val_fraction = parse_value<double>(key, value);
    else if (key == "test_fraction") cfg.test_fraction = parse_value<double>(key, value);
    else if (key == "horizons") cfg.horizons = parse_int_list(key, value);
    else if (key == "eval_stride") cfg.eval_stride = parse_value<int>(key, value);
    else if (key == "seed") cfg.seed = parse_value<std::uint64_t>(key, value);
    else throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  return parse_config(in);
}

Split split_series(Eigen::Index steps, const PipelineConfig& cfg) {
  Split s;
  s.train = static_cast<Eigen::Index>(std::floor(cfg.train_fraction * static_cast<double>(steps)));
  s.validation = static_cast<Eigen::Index>(std::floor(cfg.val_fraction * static_cast<double>(steps)));
  s.test = steps - s.train - s.validation;
  if (s.train < 2 || s.test < 1)
    throw ValidationError("series of " + std::to_string(steps) + " steps is too short to split");
  return s;
}

// --- synthetic experiment -------------------------------------------------

SimulationReport run_simulation(const SimulationOptions& options) {
  if (options.n < 1) throw ValidationError("simulate: n must be positive");
  if (options.depth < 0) throw ValidationError("simulate: depth must be nonnegative");
  SimulationReport report;
  report.graph = erdos_renyi(options.n, options.p, options.seed);
  const Graph& g = report.graph;
  const Eigen::MatrixXd a = adjacency(g);
  const SpectralBasis basis = eigendecompose(a, ShiftKind::Adjacency);
  report.adjacency_eigenvalues = basis.eigenvalues;

  report.stationary_spectrum.resize(options.n);
  for (int i = 0; i < options.n; ++i) {
    const double k = i + 1.0;
    report.stationary_spectrum(i) = options.quad_scale * k * k + options.quad_offset;
  }
  report.superstationary_spectrum =
      (options.super_a * basis.eigenvalues).array() + options.super_b;
  const Covariance stationary = covariance_from_spectrum(basis, report.stationary_spectrum);
  const Covariance superstationary =
      superstationary_covariance(a, options.super_a, options.super_b);

  // start inside the largest component so the expansion has room to grow
  const auto comps = weakly_connected_components(g);
  const auto largest = std::max_element(comps.begin(), comps.end(),
                                        [](const VertexSet& x, const VertexSet& y) {
                                          return x.size() < y.size();
                                        });
  Rng rng(options.seed ^ 0x9E3779B97F4A7C15ULL);
  report.origin = largest->members()[rng.below(largest->size())];

  auto expand = [&g](const VertexSet& s) {
    std::vector<VertexId> grown(s.begin(), s.end());
    for (VertexId v : s)
      for (VertexId w : g.neighbours(v)) grown.push_back(w);
    return VertexSet(std::move(grown));
  };
  auto measure = [&](int step, const VertexSet& s) {
    const Subgraph sub = induced_subgraph(g, s);
    const SpectralBasis local = graph_basis(sub.graph, ShiftKind::Adjacency);
    SimulationStep row;
    row.step = step;
    row.size = static_cast<int>(s.size());
    row.gamma_stationary = stationarity_ratio(local, slice(stationary, s));
    row.gamma_superstationary = stationarity_ratio(local, slice(superstationary, s));
    row.full_graph = static_cast<int>(s.size()) == g.order();
    return row;
  };

  VertexSet current = expand(VertexSet{report.origin});
  for (int step = 0;; ++step) {
    report.steps.push_back(measure(step, current));
    if (options.depth > 0 && step >= options.depth) break;
    VertexSet next = expand(current);
    if (next == current) break;
    current = std::move(next);
  }
  if (!report.steps.back().full_graph) {
    std::vector<VertexId> all(g.order());
    for (VertexId v = 0; v < g.order(); ++v) all[v] = v;
    report.steps.push_back(measure(report.steps.back().step + 1, VertexSet(std::move(all))));
  }
  for (const auto& s : report.steps)
    report.min_gamma_stationary = std::min(report.min_gamma_stationary, s.gamma_stationary);
  return report;
}

void write_simulation(const SimulationReport& report, const std::filesystem::path& out_dir) {
  std::ostringstream curve;
  curve << std::setprecision(17) << "step,size,gamma_stationary,gamma_superstationary,full_graph\n";
  for (const auto& s : report.steps)
    curve << s.step << ',' << s.size << ',' << s.gamma_stationary << ','
          << s.gamma_superstationary << ',' << (s.full_graph ? 1 : 0) << '\n';
  atomic_write(out_dir / "gamma_curve.csv", curve.str());

  std::ostringstream eig;
  eig << std::setprecision(17) << "index,adjacency,stationary,superstationary\n";
  for (Eigen::Index i = 0; i < report.adjacency_eigenvalues.size(); ++i)
    eig << i + 1 << ',' << report.adjacency_eigenvalues(i) << ','
        << report.stationary_spectrum(i) << ',' << report.superstationary_spectrum(i) << '\n';
  atomic_write(out_dir / "eigenvalues.csv", eig.str());

  std::ostringstream edges;
  edges << "src,dst,weight\n";
  for (const Edge& e : report.graph.edges()) edges << e.src << ',' << e.dst << ',' << e.weight << '\n';
  atomic_write(out_dir / "graph.csv", edges.str());

  const nlohmann::json summary = {{"vertices", report.graph.order()},
                                  {"edges", report.graph.edges().size()},
                                  {"origin", report.origin},
                                  {"steps", report.steps.size()},
                                  {"min_gamma_stationary", report.min_gamma_stationary}};
  atomic_write(out_dir / "summary.json", summary.dump(2) + "\n");
}

// --- pipeline -------------------------------------------------------------

ExtractResult run_extract(const Graph& g, const TimeSeries& tti_series, const PipelineConfig& cfg) {
  const Split split = split_series(tti_series.steps(), cfg);
  ExtractResult r;
  r.extracted = extract_active_components(g, tti_series.window(0, split.train), cfg.alpha);
  r.kept = filter_min_size(r.extracted, static_cast<std::size_t>(cfg.min_ac_size));
  return r;
}

namespace {

TimeSeries preprocess_training(const TimeSeries& x, const PipelineConfig& cfg) {
  const Split split = split_series(x.steps(), cfg);
  TimeSeries work = x.window(0, split.train);
  if (cfg.seasonal_period > 0) work = deseasonalize(work, cfg.seasonal_period).residual;
  if (cfg.differencing) work = difference(work);
  return work;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

std::vector<Covariance> training_covariances(const TimeSeries& x, const PipelineConfig& cfg) {
  const TimeSeries work = preprocess_training(x, cfg);
  std::vector<Covariance> covs;
  for (int l = 0; l <= cfg.max_lag; ++l) covs.push_back(sample_covariance(work, l));
  if (cfg.diag_loading > 0.0) covs[0] = load_diagonal(covs[0], cfg.diag_loading);
  return covs;
}

ClusterResult run_cluster(const Graph& g, const TimeSeries& x,
                          std::span<const ActiveComponent> acs, const PipelineConfig& cfg) {
  if (x.vertices() != g.order()) throw ValidationError("series does not match the graph");
  const std::vector<Covariance> covs = training_covariances(x, cfg);
  ScscOptions options;
  options.gamma_th = cfg.gamma_th;
  options.theta = cfg.theta;
  options.max_lag = cfg.max_lag;
  options.shift = cfg.shift;

  ClusterResult r;
  r.clusters = scsc(g, covs, acs, options);
  r.partition = finalize_partition(g, r.clusters);
  for (const auto& c : r.partition.clusters)
    r.final_gamma.push_back(min_of(subgraph_stationarity(g, covs, c.vertices, cfg.shift)));
  for (const auto& ac : acs)
    r.ac_gamma.push_back(subgraph_stationarity(g, std::span(covs).first(1), ac.vertices, cfg.shift)[0]);
  return r;
}

namespace {

struct RollingErrors {
  std::map<int, std::vector<double>> pred;
  std::map<int, std::vector<double>> truth;
};

void roll(const std::function<TimeSeries(const TimeSeries&, int)>& forecaster, int lags,
          const TimeSeries& rows, Eigen::Index begin, Eigen::Index end,
          const std::vector<int>& horizons, int stride, RollingErrors& acc) {
  const int h_max = *std::max_element(horizons.begin(), horizons.end());
  const Eigen::Index span = lags + 2;
  for (Eigen::Index origin = std::max<Eigen::Index>(begin, span); origin + h_max <= end;
       origin += stride) {
    const TimeSeries history = rows.window(origin - span, span);
    const TimeSeries f = forecaster(history, h_max);
    for (int h : horizons)
      for (Eigen::Index r = 0; r < rows.vertices(); ++r) {
        acc.pred[h].push_back(f.values(r, h - 1));
        acc.truth[h].push_back(rows.values(r, origin + h - 1));
      }
  }
}

std::vector<HorizonMetrics> score(const std::string& name, const RollingErrors& acc,
                                  const std::vector<int>& horizons) {
  std::vector<HorizonMetrics> out;
  for (int h : horizons) {
    const auto p = acc.pred.find(h);
    if (p == acc.pred.end() || p->second.empty())
      throw ValidationError("evaluation window too short for horizon " + std::to_string(h));
    const auto& t = acc.truth.at(h);
    const Eigen::Map<const Eigen::VectorXd> pv(p->second.data(), static_cast<Eigen::Index>(p->second.size()));
    const Eigen::Map<const Eigen::VectorXd> tv(t.data(), static_cast<Eigen::Index>(t.size()));
    out.push_back({name, h, evaluate(pv, tv)});
  }
  return out;
}

std::vector<VertexId> rows_of(const VertexSet& s) { return {s.begin(), s.end()}; }

}  // namespace

std::vector<ClusterModel> run_fit(const Graph& g, const TimeSeries& x,
                                  std::span<const ClusterAssignment> clusters,
                                  const PipelineConfig& cfg) {
  if (x.vertices() != g.order()) throw ValidationError("series does not match the graph");
  const Split split = split_series(x.steps(), cfg);
  std::vector<int> orders = cfg.order_candidates;
  if (orders.empty()) orders.push_back(cfg.ar_order);

  std::vector<ClusterModel> models;
  for (const auto& cluster : clusters) {
    const std::vector<VertexId> rows = rows_of(cluster.vertices);
    const Subgraph sub = induced_subgraph(g, cluster.vertices);
    const SpectralBasis basis = graph_basis(sub.graph, cfg.shift);
    const TimeSeries cluster_series = x.restrict_rows(rows);
    const TimeSeries train = cluster_series.window(0, split.train);

    ModelConfig mc;
    mc.kind = cfg.model;
    mc.regimes = cfg.regimes;
    mc.grid = cfg.tar_grid;
    mc.seasonal_period = cfg.seasonal_period;
    mc.differencing = cfg.differencing;

    std::optional<ClusterModel> best;
    double best_score = std::numeric_limits<double>::infinity();
    for (int m : orders) {
      mc.ar_order = m;
      ClusterModel candidate = fit_cluster_model(train, basis, mc);
      candidate.cluster_id = cluster.cluster_id;
      candidate.vertices = rows;
      if (orders.size() == 1) {
        best = std::move(candidate);
        break;
      }
      RollingErrors acc;
      roll([&candidate](const TimeSeries& h, int n) { return predict(candidate, h, n); },
           candidate.max_lag(), cluster_series, split.train, split.train + split.validation,
           cfg.horizons, cfg.eval_stride, acc);
      if (acc.pred.empty())
        throw ValidationError("validation window too short to select the AR order");
      double total = 0.0;
      for (const auto& hm : score("candidate", acc, cfg.horizons)) total += hm.metrics.mape;
      if (total < best_score) {
        best_score = total;
        best = std::move(candidate);
      }
    }
    models.push_back(std::move(*best));
  }
  return models;
}

std::vector<HorizonMetrics> run_evaluate(const TimeSeries& x,
                                         std::span<const ClusterModel> models,
                                         Eigen::Index begin, Eigen::Index end,
                                         const PipelineConfig& cfg) {
  if (models.empty()) throw ValidationError("evaluate: no cluster models");
  RollingErrors model_acc, naive_acc;
  for (const auto& m : models) {
    const TimeSeries rows = x.restrict_rows(m.vertices);
    roll([&m](const TimeSeries& h, int n) { return predict(m, h, n); }, m.max_lag(), rows, begin,
         end, cfg.horizons, cfg.eval_stride, model_acc);
    roll(persistence_forecast, m.max_lag(), rows, begin, end, cfg.horizons, cfg.eval_stride,
         naive_acc);
  }
  std::vector<HorizonMetrics> out = score(to_string(models.front().kind), model_acc, cfg.horizons);
  for (auto& hm : score("persistence", naive_acc, cfg.horizons)) out.push_back(std::move(hm));
  return out;
}

// --- file drivers ---------------------------------------------------------

namespace {

void require(const std::filesystem::path& p, const char* flag) {
  if (p.empty()) throw ValidationError(std::string("missing required option ") + flag);
}

nlohmann::json load_json(const std::filesystem::path& p) {
  try {
    return nlohmann::json::parse(read_file(p));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("cannot parse " + p.string() + ": " + e.what());
  }
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  std::filesystem::path p = out.parent_path() / out.stem();
  p += suffix;
  return p;
}

std::string format_metrics(const std::vector<HorizonMetrics>& metrics) {
  std::ostringstream os;
  os << std::setprecision(17) << "model,horizon,mae,rmse,mape,samples\n";
  for (const auto& hm : metrics)
    os << hm.model << ',' << hm.horizon << ',' << hm.metrics.mae << ',' << hm.metrics.rmse << ','
       << hm.metrics.mape << ',' << hm.metrics.samples << '\n';
  return os.str();
}

std::vector<ClusterModel> load_models(const std::filesystem::path& p, const Graph& g) {
  const nlohmann::json j = load_json(p);
  check_graph_hash(j, g, "model file");
  std::vector<ClusterModel> models;
  for (const auto& item : j.at("clusters")) models.push_back(cluster_model_from_json(item, g));
  return models;
}

}  // namespace

std::string cmd_extract(const CommandPaths& paths, const PipelineConfig& cfg) {
  require(paths.graph, "--graph");
  require(paths.series, "--series");
  require(paths.out, "--out");
  const Graph g = read_edge_csv(paths.graph, cfg.directed);
  const TimeSeries y = read_series_csv(paths.series, g);
  const ExtractResult r = run_extract(g, y, cfg);

  const nlohmann::json doc = {{"graph_hash", hash_hex(graph_hash(g))},
                              {"alpha", cfg.alpha},
                              {"min_ac_size", cfg.min_ac_size},
                              {"extracted", r.extracted.size()},
                              {"filtered", r.extracted.size() - r.kept.size()},
                              {"active_components", active_components_to_json(g, r.kept)}};
  atomic_write(paths.out, doc.dump(2) + "\n");
  std::ostringstream labels;
  write_labels_csv(g, labels);
  atomic_write(sibling(paths.out, ".labels.csv"), labels.str());
  return "extracted " + std::to_string(r.extracted.size()) + " active components, kept " +
         std::to_string(r.kept.size()) + " (filtered " +
         std::to_string(r.extracted.size() - r.kept.size()) + " below " +
         std::to_string(cfg.min_ac_size) + " vertices)";
}

std::string cmd_cluster(const CommandPaths& paths, const PipelineConfig& cfg) {
  require(paths.graph, "--graph");
  require(paths.series, "--series");
  require(paths.acs, "--acs");
  require(paths.out, "--out");
  const Graph g = read_edge_csv(paths.graph, cfg.directed);
  const TimeSeries x = read_series_csv(paths.series, g);
  const nlohmann::json ac_doc = load_json(paths.acs);
  check_graph_hash(ac_doc, g, "active component file");
  const auto acs = active_components_from_json(ac_doc.at("active_components"), g);
  const ClusterResult r = run_cluster(g, x, acs, cfg);

  nlohmann::json clusters = nlohmann::json::array();
  for (std::size_t k = 0; k < r.partition.clusters.size(); ++k) {
    const auto& c = r.partition.clusters[k];
    clusters.push_back({{"cluster_id", c.id},
                        {"vertices", labels_of(g, c.vertices)},
                        {"gamma", r.final_gamma[k]},
                        {"source_cluster", c.source_id},
                        {"merge_gamma", c.source_gamma}});
  }
  nlohmann::json log = nlohmann::json::array();
  for (const auto& e : r.clusters.log)
    log.push_back({{"left", e.left},
                   {"right", e.right},
                   {"d_min", e.d_min},
                   {"gamma", e.gamma},
                   {"lag_gammas", e.lag_gammas},
                   {"accepted", e.accepted},
                   {"merged", e.merged}});
  nlohmann::json unassigned = nlohmann::json::array();
  for (VertexId v : r.partition.unassigned) unassigned.push_back(g.label(v));
  const nlohmann::json doc = {{"graph_hash", hash_hex(graph_hash(g))},
                              {"gamma_th", cfg.gamma_th},
                              {"theta", cfg.theta},
                              {"max_lag", cfg.max_lag},
                              {"shift", to_string(cfg.shift)},
                              {"clusters", std::move(clusters)},
                              {"unassigned", std::move(unassigned)},
                              {"merge_log", std::move(log)}};
  atomic_write(paths.out, doc.dump(2) + "\n");

  constexpr int bins = 20;
  std::vector<int> ac_hist(bins, 0), cluster_hist(bins, 0);
  auto bin_of = [](double gamma) { return std::clamp(static_cast<int>(gamma * bins), 0, bins - 1); };
  for (double v : r.ac_gamma) ++ac_hist[bin_of(v)];
  for (double v : r.final_gamma) ++cluster_hist[bin_of(v)];
  std::ostringstream hist;
  hist << "bin_lo,bin_hi,active_components,clusters\n";
  for (int b = 0; b < bins; ++b)
    hist << static_cast<double>(b) / bins << ',' << static_cast<double>(b + 1) / bins << ','
         << ac_hist[b] << ',' << cluster_hist[b] << '\n';
  atomic_write(sibling(paths.out, "_gamma_hist.csv"), hist.str());

  const auto accepted = std::count_if(r.clusters.log.begin(), r.clusters.log.end(),
                                      [](const MergeEvent& e) { return e.accepted; });
  return std::to_string(acs.size()) + " active components -> " +
         std::to_string(r.partition.clusters.size()) + " clusters (" + std::to_string(accepted) +
         " merges, " + std::to_string(r.clusters.log.size() - accepted) + " rejections, " +
         std::to_string(r.partition.unassigned.size()) + " unassigned vertices)";
}

std::string cmd_fit(const CommandPaths& paths, const PipelineConfig& cfg) {
  require(paths.graph, "--graph");
  require(paths.series, "--series");
  require(paths.clusters, "--clusters");
  require(paths.out, "--out");
  const Graph g = read_edge_csv(paths.graph, cfg.directed);
  const TimeSeries x = read_series_csv(paths.series, g);
  const nlohmann::json cdoc = load_json(paths.clusters);
  check_graph_hash(cdoc, g, "cluster file");
  std::vector<ClusterAssignment> clusters;
  for (const auto& c : cdoc.at("clusters"))
    clusters.push_back({c.at("cluster_id").get<int>(), vertices_from_labels(c.at("vertices"), g)});
  if (clusters.empty()) throw ValidationError("cluster file has no clusters");

  const auto models = run_fit(g, x, clusters, cfg);
  nlohmann::json items = nlohmann::json::array();
  for (const auto& m : models) items.push_back(cluster_model_to_json(g, m));
  const nlohmann::json doc = {{"graph_hash", hash_hex(graph_hash(g))},
                              {"model_kind", to_string(cfg.model)},
                              {"clusters", std::move(items)}};
  atomic_write(paths.out, doc.dump(2) + "\n");
  return "fitted " + std::to_string(models.size()) + " cluster models (" + to_string(cfg.model) + ")";
}

std::string cmd_predict(const CommandPaths& paths, const PipelineConfig& cfg) {
  require(paths.graph, "--graph");
  require(paths.series, "--series");
  require(paths.model, "--model");
  require(paths.out, "--out");
  const Graph g = read_edge_csv(paths.graph, cfg.directed);
  const TimeSeries x = read_series_csv(paths.series, g);
  const auto models = load_models(paths.model, g);
  const int horizon = *std::max_element(cfg.horizons.begin(), cfg.horizons.end());

  // vertices outside every cluster fall back to persistence
  TimeSeries out = persistence_forecast(x, horizon);
  for (const auto& m : models) {
    const TimeSeries f = predict(m, x.restrict_rows(m.vertices), horizon);
    for (std::size_t r = 0; r < m.vertices.size(); ++r)
      out.values.row(m.vertices[r]) = f.values.row(static_cast<Eigen::Index>(r));
  }
  std::vector<VertexId> rows(g.order());
  for (VertexId v = 0; v < g.order(); ++v) rows[v] = v;
  std::ostringstream csv;
  write_series_csv(out, g, rows, csv);
  atomic_write(paths.out, csv.str());
  return "forecast " + std::to_string(horizon) + " steps for " + std::to_string(g.order()) +
         " vertices";
}

std::string cmd_evaluate(const CommandPaths& paths, const PipelineConfig& cfg) {
  require(paths.graph, "--graph");
  require(paths.series, "--series");
  require(paths.model, "--model");
  require(paths.out, "--out");
  const Graph g = read_edge_csv(paths.graph, cfg.directed);
  const TimeSeries x = read_series_csv(paths.series, g);
  const auto models = load_models(paths.model, g);
  const Split split = split_series(x.steps(), cfg);
  const auto metrics =
      run_evaluate(x, models, split.train + split.validation, x.steps(), cfg);
  const std::string report = format_metrics(metrics);
  atomic_write(paths.out, report);
  return report;
}

}  // namespace psg
