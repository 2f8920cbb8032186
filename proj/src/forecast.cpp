#include "psg/forecast.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace psg {

double tti(double travel_time, double free_flow_time) {
  if (!(free_flow_time > 0.0)) throw ValidationError("tti: free-flow time must be positive");
  if (!(travel_time >= 0.0)) throw ValidationError("tti: travel time must be nonnegative");
  return travel_time / free_flow_time;
}

double ArModel::predict_next(std::span<const double> history) const {
  const int m = order();
  if (static_cast<int>(history.size()) < m)
    throw ValidationError("AR prediction needs " + std::to_string(m) + " lags");
  double out = intercept;
  const std::size_t last = history.size() - 1;
  for (int i = 0; i < m; ++i) out += coefficients(i) * history[last - i];
  return out;
}

namespace {

/// Rows t in `targets` of the AR design (1, y_{t-1}, ..., y_{t-m}).
void ar_design(std::span<const double> y, int m, std::span<const Eigen::Index> targets,
               Eigen::MatrixXd& x, Eigen::VectorXd& rhs) {
  const auto rows = static_cast<Eigen::Index>(targets.size());
  x.resize(rows, m + 1);
  rhs.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index t = targets[r];
    x(r, 0) = 1.0;
    for (int i = 1; i <= m; ++i) x(r, i) = y[t - i];
    rhs(r) = y[t];
  }
}

ArModel solve_ar(const Eigen::MatrixXd& x, const Eigen::VectorXd& rhs, int m) {
  ArModel model;
  model.coefficients = Eigen::VectorXd::Zero(m);
  const Eigen::Index rows = x.rows();
  const bool flat = rows > 0 && (x.array().rowwise() - x.row(0).array()).abs().maxCoeff() == 0.0;
  Eigen::VectorXd residual;
  if (flat || rows == 0) {
    // constant regressors: only the level is identifiable
    model.intercept = rows > 0 ? rhs.mean() : 0.0;
    residual = rhs.array() - model.intercept;
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    Eigen::VectorXd beta;
    if (qr.rank() == x.cols())
      beta = qr.solve(rhs);
    else
      beta = x.completeOrthogonalDecomposition().solve(rhs);
    model.intercept = beta(0);
    model.coefficients = beta.tail(m);
    residual = rhs - x * beta;
  }
  const Eigen::Index dof = std::max<Eigen::Index>(1, rows - (m + 1));
  model.noise_scale = std::sqrt(residual.squaredNorm() / static_cast<double>(dof));
  return model;
}

void check_order(std::size_t length, int m) {
  if (m < 1) throw ValidationError("AR order must be at least 1");
  if (length <= static_cast<std::size_t>(3 * m + 2))
    throw ValidationError("series of length " + std::to_string(length) +
                          " too short for AR order " + std::to_string(m));
}

}  // namespace

ArModel fit_ar(std::span<const double> y, int order) {
  check_order(y.size(), order);
  for (double v : y)
    if (!std::isfinite(v)) throw ValidationError("fit_ar: non-finite sample");
  std::vector<Eigen::Index> targets(y.size() - order);
  std::iota(targets.begin(), targets.end(), Eigen::Index{order});
  Eigen::MatrixXd x;
  Eigen::VectorXd rhs;
  ar_design(y, order, targets, x, rhs);
  return solve_ar(x, rhs, order);
}

int TarModel::regime_of(double z) const {
  const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), z);
  return static_cast<int>(it - thresholds.begin());
}

double TarModel::predict_next(std::span<const double> history, double z) const {
  return regimes.at(regime_of(z)).predict_next(history);
}

TarModel fit_tar(std::span<const double> y, std::span<const double> z, int regimes, int order,
                 int grid) {
  if (y.size() != z.size()) throw ValidationError("fit_tar: y and z are not aligned");
  if (regimes < 1) throw ValidationError("fit_tar: need at least one regime");
  if (grid < 2) throw ValidationError("fit_tar: grid must be at least 2");
  check_order(y.size(), order);
  TarModel model;
  if (regimes == 1) {
    model.regimes.push_back(fit_ar(y, order));
    return model;
  }

  const int m = order;
  const int p = m + 1;
  const auto rows = static_cast<Eigen::Index>(y.size()) - m;
  std::vector<Eigen::Index> by_z(rows);
  std::iota(by_z.begin(), by_z.end(), Eigen::Index{m});
  std::stable_sort(by_z.begin(), by_z.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return z[a] < z[b]; });
  std::vector<double> z_sorted(rows);
  for (Eigen::Index r = 0; r < rows; ++r) z_sorted[r] = z[by_z[r]];

  Eigen::MatrixXd x;
  Eigen::VectorXd rhs;
  ar_design(y, m, by_z, x, rhs);

  // prefix sums of X^T X, X^T y, y^T y in z order
  std::vector<Eigen::MatrixXd> xtx(rows + 1, Eigen::MatrixXd::Zero(p, p));
  std::vector<Eigen::VectorXd> xty(rows + 1, Eigen::VectorXd::Zero(p));
  std::vector<double> yty(rows + 1, 0.0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    xtx[r + 1] = xtx[r] + x.row(r).transpose() * x.row(r);
    xty[r + 1] = xty[r] + x.row(r).transpose() * rhs(r);
    yty[r + 1] = yty[r] + rhs(r) * rhs(r);
  }
  auto block_ssr = [&](Eigen::Index lo, Eigen::Index hi) {
    const Eigen::MatrixXd a = xtx[hi] - xtx[lo];
    const Eigen::VectorXd b = xty[hi] - xty[lo];
    const Eigen::VectorXd beta = a.completeOrthogonalDecomposition().solve(b);
    return std::max(0.0, yty[hi] - yty[lo] - beta.dot(b));
  };

  std::vector<double> candidates;
  // interior quantiles k / grid, k = 1..grid-1
  for (int k = 1; k < grid; ++k) {
    const double q = static_cast<double>(k) / grid;
    const auto pos = static_cast<std::size_t>(std::llround(q * static_cast<double>(rows - 1)));
    candidates.push_back(z_sorted[pos]);
  }
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const Eigen::Index min_occupancy = m + 2;
  auto split_at = [&](double beta) {
    return static_cast<Eigen::Index>(
        std::upper_bound(z_sorted.begin(), z_sorted.end(), beta) - z_sorted.begin());
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_thresholds;
  std::vector<std::size_t> pick(regimes - 1);
  // enumerate ascending threshold tuples from the candidate grid
  auto search = [&](auto&& self, int level, std::size_t from, Eigen::Index lo,
                    double ssr) -> void {
    if (level == regimes - 1) {
      if (rows - lo < min_occupancy) return;
      const double total = ssr + block_ssr(lo, rows);
      if (total < best) {
        best = total;
        best_thresholds.clear();
        for (std::size_t c : pick) best_thresholds.push_back(candidates[c]);
      }
      return;
    }
    for (std::size_t c = from; c < candidates.size(); ++c) {
      const Eigen::Index hi = split_at(candidates[c]);
      if (hi - lo < min_occupancy) continue;
      pick[level] = c;
      self(self, level + 1, c + 1, hi, ssr + block_ssr(lo, hi));
    }
  };
  search(search, 0, 0, 0, 0.0);
  if (best_thresholds.empty())
    throw ValidationError("fit_tar: no threshold grid leaves every regime with " +
                          std::to_string(min_occupancy) + " samples");

  model.thresholds = best_thresholds;
  std::vector<std::vector<Eigen::Index>> members(regimes);
  for (Eigen::Index t = m; t < static_cast<Eigen::Index>(y.size()); ++t)
    members[model.regime_of(z[t])].push_back(t);
  for (int j = 0; j < regimes; ++j) {
    ar_design(y, m, members[j], x, rhs);
    model.regimes.push_back(solve_ar(x, rhs, m));
  }
  return model;
}

std::string to_string(ModelKind kind) { return kind == ModelKind::JcmAr ? "jcm-ar" : "jcm-tar"; }

ModelKind parse_model_kind(const std::string& s) {
  if (s == "jcm-ar") return ModelKind::JcmAr;
  if (s == "jcm-tar") return ModelKind::JcmTar;
  throw ValidationError("unknown model kind '" + s + "'");
}

int ClusterModel::max_lag() const {
  int lag = 0;
  for (const auto& fm : models) {
    if (const auto* ar = std::get_if<ArModel>(&fm)) {
      lag = std::max(lag, ar->order());
    } else {
      for (const auto& r : std::get<TarModel>(fm).regimes) lag = std::max(lag, r.order());
    }
  }
  return lag;
}

TimeSeries apply_preprocessing(const Preprocessing& prep, const TimeSeries& raw) {
  TimeSeries out = raw;
  if (prep.seasonal_period > 0) {
    if (prep.phase_means.rows() != raw.vertices())
      throw ValidationError("seasonal profile does not match the series");
    for (Eigen::Index t = 0; t < raw.steps(); ++t)
      out.values.col(t) -= seasonal_value(prep.phase_means, raw.start + t);
  }
  return prep.differenced ? difference(out) : out;
}

namespace {

std::vector<double> row_of(const Eigen::MatrixXd& m, Eigen::Index r) {
  std::vector<double> out(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) out[c] = m(r, c);
  return out;
}

}  // namespace

ClusterModel fit_cluster_model(const TimeSeries& x, const SpectralBasis& basis,
                               const ModelConfig& cfg) {
  if (x.vertices() != basis.size())
    throw ValidationError("fit_cluster_model: series rows do not match the basis");
  if (!x.values.allFinite()) throw ValidationError("fit_cluster_model: non-finite samples");

  ClusterModel model;
  model.basis = basis;
  model.kind = cfg.kind;
  model.preprocessing.differenced = cfg.differencing;
  TimeSeries work = x;
  if (cfg.seasonal_period > 0) {
    Deseasonalized d = deseasonalize(x, cfg.seasonal_period);
    model.preprocessing.seasonal_period = cfg.seasonal_period;
    model.preprocessing.phase_means = std::move(d.phase_means);
    work = std::move(d.residual);
  }
  if (cfg.differencing) work = difference(work);
  check_order(static_cast<std::size_t>(work.steps()), cfg.ar_order);

  const Eigen::MatrixXd spectral = gft(basis, work.values);
  std::vector<double> z;
  if (cfg.kind == ModelKind::JcmTar) {
    const Eigen::VectorXd total = x.values.colwise().sum().transpose();
    z.resize(work.steps());
    for (Eigen::Index c = 0; c < work.steps(); ++c) {
      const Eigen::Index raw_index = std::max<Eigen::Index>(0, work.start + c - 1 - x.start);
      z[c] = total(raw_index);
    }
  }
  model.models.reserve(basis.size());
  for (Eigen::Index k = 0; k < basis.size(); ++k) {
    const std::vector<double> series = row_of(spectral, k);
    if (cfg.kind == ModelKind::JcmAr)
      model.models.emplace_back(fit_ar(series, cfg.ar_order));
    else
      model.models.emplace_back(fit_tar(series, z, cfg.regimes, cfg.ar_order, cfg.grid));
  }
  return model;
}

TimeSeries predict(const ClusterModel& model, const TimeSeries& history, int horizon) {
  const Eigen::Index k = model.basis.size();
  if (history.vertices() != k)
    throw ValidationError("predict: history rows do not match the model");
  if (horizon < 1) throw ValidationError("predict: horizon must be positive");
  const auto& prep = model.preprocessing;
  const int needed = model.max_lag() + (prep.differenced ? 1 : 0);
  if (history.steps() < std::max(needed, 1))
    throw ValidationError("predict: history shorter than the model's lags");

  TimeSeries level = history;
  if (prep.seasonal_period > 0)
    for (Eigen::Index t = 0; t < history.steps(); ++t)
      level.values.col(t) -= seasonal_value(prep.phase_means, history.start + t);
  const TimeSeries work = prep.differenced ? difference(level) : level;
  const Eigen::MatrixXd spectral = gft(model.basis, work.values);

  std::vector<std::vector<double>> lanes(k);
  for (Eigen::Index f = 0; f < k; ++f) {
    lanes[f] = row_of(spectral, f);
    lanes[f].reserve(lanes[f].size() + horizon);
  }

  const Eigen::Index last = history.steps() - 1;
  Eigen::VectorXd last_level = level.values.col(last);
  double z = history.values.col(last).sum();
  TimeSeries out{Eigen::MatrixXd(k, horizon), history.sample_period,
                 history.start + static_cast<long>(history.steps())};
  Eigen::VectorXd step(k);
  for (int h = 0; h < horizon; ++h) {
    for (Eigen::Index f = 0; f < k; ++f) {
      const auto& fm = model.models[f];
      if (const auto* ar = std::get_if<ArModel>(&fm))
        step(f) = ar->predict_next(lanes[f]);
      else
        step(f) = std::get<TarModel>(fm).predict_next(lanes[f], z);
      lanes[f].push_back(step(f));
    }
    const Eigen::VectorXd vertex = igft(model.basis, step);
    const Eigen::VectorXd now = prep.differenced ? Eigen::VectorXd(last_level + vertex) : vertex;
    Eigen::VectorXd raw = now;
    if (prep.seasonal_period > 0) raw += seasonal_value(prep.phase_means, out.start + h);
    out.values.col(h) = raw;
    last_level = now;
    z = raw.sum();
  }
  return out;
}

TimeSeries persistence_forecast(const TimeSeries& history, int horizon) {
  if (history.steps() < 1) throw ValidationError("persistence_forecast: empty history");
  if (horizon < 1) throw ValidationError("persistence_forecast: horizon must be positive");
  return {history.values.col(history.steps() - 1).replicate(1, horizon), history.sample_period,
          history.start + static_cast<long>(history.steps())};
}

ForecastMetrics evaluate(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth,
                         const std::optional<EntryMask>& mape_exclude) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
    throw ValidationError("evaluate: prediction and truth shapes differ");
  if (pred.size() == 0) throw ValidationError("evaluate: nothing to score");
  if (mape_exclude) {
    if (mape_exclude->rows() != truth.rows() || mape_exclude->cols() != truth.cols())
      throw ValidationError("evaluate: mask shape differs");
    if (mape_exclude->all()) throw ValidationError("evaluate: every entry is masked");
  }
  const Eigen::ArrayXXd err = (pred - truth).array();
  ForecastMetrics m;
  m.samples = err.size();
  m.mae = err.abs().mean();
  m.rmse = std::sqrt(err.square().mean());
  double ape = 0.0;
  for (Eigen::Index c = 0; c < truth.cols(); ++c)
    for (Eigen::Index r = 0; r < truth.rows(); ++r) {
      if (mape_exclude && (*mape_exclude)(r, c)) continue;
      if (std::abs(truth(r, c)) < kMapeFloor) continue;
      ape += std::abs(err(r, c) / truth(r, c));
      ++m.mape_samples;
    }
  m.mape = m.mape_samples > 0 ? 100.0 * ape / static_cast<double>(m.mape_samples) : 0.0;
  return m;
}

}  // namespace psg
