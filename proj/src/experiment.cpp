// SPDX-License-Identifier: Apache-2.0
//
// beamsel: position-aided probabilistic beam selection for mmWave MIMO
// Copyright (C) 2026 The beamsel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamsel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "beamsel/beam_select.hpp"
#include "beamsel/errors.hpp"
#include "beamsel/fingerprint.hpp"
#include "beamsel/metrics.hpp"

namespace beamsel {

std::string method_name(Method m) {
  switch (m) {
    case Method::kPmf: return "pmf";
    case Method::kFingerprint: return "fingerprint";
    case Method::kMlp: return "mlp";
    case Method::kOracle: return "oracle";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "pmf") return Method::kPmf;
  if (name == "fingerprint") return Method::kFingerprint;
  if (name == "mlp") return Method::kMlp;
  if (name == "oracle") return Method::kOracle;
  throw std::invalid_argument("unknown method '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (methods.empty() || nb_sweep.empty()) {
    throw std::invalid_argument("experiment: method list and n_b sweep must be nonempty");
  }
  const int pairs = tx.elements() * rx.elements();
  for (int nb : nb_sweep) {
    if (nb < 1 || nb > pairs) throw std::invalid_argument("experiment: n_b outside [1, I_f * I_w]");
  }
  if (!train_sizes.empty()) {
    if (train_sweep_trials < 1) throw std::invalid_argument("experiment: train sweep trials < 1");
    if (train_sweep_nb < 1 || train_sweep_nb > pairs) {
      throw std::invalid_argument("experiment: train sweep n_b outside [1, I_f * I_w]");
    }
    const auto full = static_cast<int>(
        std::llround(train_fraction * static_cast<double>(dataset.num_samples)));
    for (int s : train_sizes) {
      if (s < 1 || s > full) {
        throw std::invalid_argument("experiment: train size " + std::to_string(s) +
                                    " outside [1, " + std::to_string(full) + "]");
      }
    }
  }
  if (threads < 1) throw std::invalid_argument("experiment: threads must be >= 1");
}

namespace {

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

std::vector<std::string> method_names(const std::vector<Method>& ms) {
  std::vector<std::string> out;
  for (auto m : ms) out.push_back(method_name(m));
  return out;
}

}  // namespace

ExperimentSpec experiment_spec_from_config(const KeyValueConfig& cfg, ExperimentSpec s) {
  s.scene = scene_spec_from_config(cfg, s.scene);
  s.tx.m_x = static_cast<int>(cfg.get_int("tx_mx", s.tx.m_x));
  s.tx.m_y = static_cast<int>(cfg.get_int("tx_my", s.tx.m_y));
  s.rx.m_x = static_cast<int>(cfg.get_int("rx_mx", s.rx.m_x));
  s.rx.m_y = static_cast<int>(cfg.get_int("rx_my", s.rx.m_y));
  if (cfg.contains("transmit_power_dbm")) {
    s.radio.transmit_power = dbm_to_mw(cfg.get_double("transmit_power_dbm", 30.0));
  }
  if (cfg.contains("bandwidth_hz")) {
    s.radio.noise_variance = dbm_to_mw(thermal_noise_dbm(cfg.get_double("bandwidth_hz", 200e6)));
  }
  if (cfg.contains("noise_dbm")) s.radio.noise_variance = dbm_to_mw(cfg.get_double("noise_dbm", 0));
  s.dataset.num_samples = static_cast<std::size_t>(
      cfg.get_int("num_samples", static_cast<long long>(s.dataset.num_samples)));
  s.dataset.bin_size = cfg.get_double("bin_size", s.dataset.bin_size);
  s.dataset.sample_seed = static_cast<std::uint64_t>(
      cfg.get_int("sample_seed", static_cast<long long>(s.dataset.sample_seed)));
  s.train_fraction = cfg.get_double("train_fraction", s.train_fraction);
  s.methods = parse_methods(cfg.get_strings("methods", method_names(s.methods)));
  s.nb_sweep = cfg.get_ints("nb_sweep", s.nb_sweep);
  s.trials = static_cast<int>(cfg.get_int("trials", s.trials));
  s.train_sizes = cfg.get_ints("train_sizes", s.train_sizes);
  s.train_sweep_nb = static_cast<int>(cfg.get_int("train_sweep_nb", s.train_sweep_nb));
  s.train_sweep_trials = static_cast<int>(cfg.get_int("train_sweep_trials", s.train_sweep_trials));
  s.train_sweep_methods =
      parse_methods(cfg.get_strings("train_sweep_methods", method_names(s.train_sweep_methods)));
  s.base_seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(s.base_seed)));
  s.vb.alpha_lambda = cfg.get_double("vb_alpha_lambda", s.vb.alpha_lambda);
  s.vb.alpha_factor = cfg.get_double("vb_alpha_factor", s.vb.alpha_factor);
  s.vb.r_init = static_cast<int>(cfg.get_int("vb_r_init", s.vb.r_init));
  s.vb.max_iters = static_cast<int>(cfg.get_int("vb_max_iters", s.vb.max_iters));
  s.vb.elbo_rel_tol = cfg.get_double("vb_elbo_rel_tol", s.vb.elbo_rel_tol);
  if (cfg.contains("vb_prune_threshold")) {
    s.vb.prune_threshold = cfg.get_double("vb_prune_threshold", 0.0);
  }
  if (cfg.contains("vb_prune_mode")) {
    const auto mode = cfg.get_string("vb_prune_mode", "after");
    if (mode == "after") {
      s.vb.prune_mode = PruneMode::kAfterConvergence;
    } else if (mode == "every") {
      s.vb.prune_mode = PruneMode::kEveryIteration;
    } else {
      throw std::invalid_argument("vb_prune_mode must be 'after' or 'every'");
    }
  }
  s.mlp.hidden = cfg.get_ints("mlp_hidden", s.mlp.hidden);
  s.mlp.learning_rate = cfg.get_double("mlp_learning_rate", s.mlp.learning_rate);
  s.mlp.batch_size = static_cast<int>(cfg.get_int("mlp_batch_size", s.mlp.batch_size));
  s.mlp.epochs = static_cast<int>(cfg.get_int("mlp_epochs", s.mlp.epochs));
  s.threads = static_cast<int>(cfg.get_int("threads", s.threads));
  return s;
}

EvaluationSet make_evaluation_set(const BeamDataset& test, const Codebook& cb_tx,
                                  const Codebook& cb_rx, const RadioConfig& config) {
  if (!test.has_channels()) throw std::invalid_argument("evaluation set needs channels");
  EvaluationSet eval;
  for (std::size_t t = 0; t < test.size(); ++t) {
    eval.positions.push_back(test.samples[t].position);
    eval.rss_tables.push_back(rss_table(test.channels[t], cb_tx, cb_rx, config));
    eval.optimal_rates.push_back(rate_from_rss(eval.rss_tables.back().maxCoeff(), config));
  }
  return eval;
}

std::vector<TrialResult> evaluate_ranker(const Ranker& ranker, const EvaluationSet& eval,
                                         const std::vector<int>& nb_values,
                                         const RadioConfig& config) {
  if (nb_values.empty()) return {};
  const int nb_max = *std::max_element(nb_values.begin(), nb_values.end());
  const std::size_t n = eval.positions.size();
  std::vector<std::vector<BeamPair>> selections(nb_values.size(), std::vector<BeamPair>(n));
  for (std::size_t t = 0; t < n; ++t) {
    const CandidateList full = ranker(eval.positions[t], eval.rss_tables[t], nb_max);
    for (std::size_t k = 0; k < nb_values.size(); ++k) {
      CandidateList prefix;
      const auto len = static_cast<std::size_t>(nb_values[k]);
      prefix.pairs.assign(full.pairs.begin(), full.pairs.begin() + static_cast<long>(len));
      prefix.scores.assign(full.scores.begin(), full.scores.begin() + static_cast<long>(len));
      selections[k][t] = refine_by_rss(prefix, eval.rss_tables[t]);
    }
  }
  double optimal_total = 0.0;
  for (double r : eval.optimal_rates) optimal_total += r;

  std::vector<TrialResult> out;
  for (std::size_t k = 0; k < nb_values.size(); ++k) {
    TrialResult r;
    r.n_b = nb_values[k];
    r.power_loss_0db = power_loss_probability(selections[k], eval.rss_tables, 1.0);
    r.power_loss_3db = power_loss_probability(selections[k], eval.rss_tables, 2.0);
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const auto& sel = selections[k][t];
      total += rate_from_rss(eval.rss_tables[t](sel.f, sel.w), config);
    }
    r.mean_rate = n ? total / static_cast<double>(n) : 0.0;
    r.normalized_rate = optimal_total > 0.0 ? total / optimal_total : 1.0;
    out.push_back(r);
  }
  return out;
}

Ranker train_method(Method method, const BeamDataset& train, const ExperimentSpec& spec,
                    std::uint64_t seed, int* rank_out) {
  if (rank_out) *rank_out = 0;
  const GridSpec grid = train.grid;
  switch (method) {
    case Method::kPmf: {
      VbHyperparams hyper = spec.vb;
      hyper.rng_seed = seed;
      auto fitted = fit(train, hyper);
      if (rank_out) *rank_out = fitted.rank;
      auto model = std::make_shared<const CpdPmfModel>(std::move(fitted.model));
      return [model, grid](const Vec3& p, const Eigen::MatrixXd&, int n_b) {
        const auto bin = grid.bin_of(p.x, p.y);
        if (bin.clamped) {
          std::clog << "warning: position (" << p.x << ", " << p.y
                    << ") outside the trained grid, clamped to the nearest edge bin\n";
        }
        return top_n(*model, bin.x, bin.y, n_b, SelectOptions{true});
      };
    }
    case Method::kFingerprint: {
      auto db = std::make_shared<const FingerprintDatabase>(fingerprint_train(train));
      return [db, grid](const Vec3& p, const Eigen::MatrixXd&, int n_b) {
        const auto bin = grid.bin_of(p.x, p.y);
        return fingerprint_top_n(*db, bin.x, bin.y, n_b);
      };
    }
    case Method::kMlp: {
      MlpHyperparams hyper = spec.mlp;
      hyper.seed = seed;
      auto model = std::make_shared<const MlpModel>(mlp_train(train, hyper).model);
      return [model](const Vec3& p, const Eigen::MatrixXd&, int n_b) {
        return mlp_top_n(*model, p, n_b);
      };
    }
    case Method::kOracle:
      return [](const Vec3&, const Eigen::MatrixXd& table, int n_b) {
        return rank_scores(table, n_b);
      };
  }
  throw std::invalid_argument("train_method: unknown method");
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const BeamDataset* dataset,
                                const ProgressFn& progress) {
  spec.validate();
  const Codebook cb_tx = build_dft_codebook(spec.tx);
  const Codebook cb_rx = build_dft_codebook(spec.rx);
  const Scene scene(spec.scene);

  BeamDataset generated;
  if (!dataset) {
    generated = build_dataset(scene, spec.dataset, cb_tx, cb_rx, spec.radio);
    dataset = &generated;
  }
  // Noiseless RSS tables for every sample, computed once and shared by all trials.
  std::vector<Eigen::MatrixXd> tables(dataset->size());
  for (std::size_t t = 0; t < dataset->size(); ++t) {
    const ChannelMatrix h = dataset->has_channels()
                                ? dataset->channels[t]
                                : scene_channel(scene, spec.tx, spec.rx, dataset->samples[t].position);
    tables[t] = rss_table(h, cb_tx, cb_rx, spec.radio);
  }
  BeamDataset light = *dataset;
  light.channels.clear();

  auto eval_for = [&](const std::vector<std::size_t>& idx) {
    EvaluationSet eval;
    for (auto i : idx) {
      eval.positions.push_back(light.samples[i].position);
      eval.rss_tables.push_back(tables[i]);
      eval.optimal_rates.push_back(rate_from_rss(tables[i].maxCoeff(), spec.radio));
    }
    return eval;
  };

  const int total_trials =
      std::max(spec.trials, spec.train_sizes.empty() ? 0 : spec.train_sweep_trials);
  struct TrialOutput {
    std::vector<TrialResult> nb;
    std::vector<TrialResult> train;
  };
  std::vector<TrialOutput> outputs(static_cast<std::size_t>(total_trials));

  auto run_trial = [&](int trial) {
    const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(trial);
    const auto [train_idx, test_idx] =
        shuffle_split_indices(light.size(), spec.train_fraction, seed);
    const EvaluationSet eval = eval_for(test_idx);
    TrialOutput& out = outputs[static_cast<std::size_t>(trial)];

    auto run_method = [&](Method m, const std::vector<std::size_t>& idx,
                          const std::vector<int>& nbs, std::vector<TrialResult>& sink) {
      int rank = 0;
      const Ranker ranker = train_method(m, light.subset(idx), spec, seed, &rank);
      for (auto r : evaluate_ranker(ranker, eval, nbs, spec.radio)) {
        r.method = m;
        r.trial = trial;
        r.seed = seed;
        r.train_size = static_cast<int>(idx.size());
        r.rank = rank;
        sink.push_back(r);
      }
    };

    if (trial < spec.trials) {
      for (Method m : spec.methods) run_method(m, train_idx, spec.nb_sweep, out.nb);
    }
    if (!spec.train_sizes.empty() && trial < spec.train_sweep_trials) {
      for (int size : spec.train_sizes) {
        const std::vector<std::size_t> sub(train_idx.begin(),
                                           train_idx.begin() + static_cast<long>(size));
        for (Method m : spec.train_sweep_methods) {
          run_method(m, sub, {spec.train_sweep_nb}, out.train);
        }
      }
    }
  };

  std::atomic<int> next{0};
  std::mutex mutex;
  std::exception_ptr failure;
  std::string failure_msg;
  auto worker = [&]() {
    for (;;) {
      const int trial = next.fetch_add(1);
      if (trial >= total_trials) return;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (failure) return;
      }
      try {
        run_trial(trial);
        if (progress) {
          std::lock_guard<std::mutex> lock(mutex);
          progress("trial " + std::to_string(trial + 1) + "/" + std::to_string(total_trials) +
                   " done");
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) {
          failure = std::current_exception();
          failure_msg = "trial " + std::to_string(trial) + " (seed " +
                        std::to_string(spec.base_seed + static_cast<std::uint64_t>(trial)) +
                        ") failed: " + e.what();
        }
      }
    }
  };
  const int workers = std::min(spec.threads, std::max(total_trials, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) throw std::runtime_error(failure_msg);

  ExperimentResult result;
  for (auto& o : outputs) {
    result.nb_sweep.insert(result.nb_sweep.end(), o.nb.begin(), o.nb.end());
    result.train_sweep.insert(result.train_sweep.end(), o.train.begin(), o.train.end());
  }
  return result;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& rows) {
  std::vector<AggregateRow> out;
  std::map<std::tuple<int, int, int>, std::size_t> slot;
  std::vector<std::vector<double>> pl0;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(static_cast<int>(r.method), r.train_size, r.n_b);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, out.size()).first;
      AggregateRow a;
      a.method = r.method;
      a.train_size = r.train_size;
      a.n_b = r.n_b;
      out.push_back(a);
      pl0.emplace_back();
    }
    AggregateRow& a = out[it->second];
    ++a.trials;
    a.power_loss_0db += r.power_loss_0db;
    a.power_loss_3db += r.power_loss_3db;
    a.mean_rate += r.mean_rate;
    a.normalized_rate += r.normalized_rate;
    a.mean_rank += r.rank;
    pl0[it->second].push_back(r.power_loss_0db);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    AggregateRow& a = out[k];
    const double n = a.trials;
    a.power_loss_0db /= n;
    a.power_loss_3db /= n;
    a.mean_rate /= n;
    a.normalized_rate /= n;
    a.mean_rank /= n;
    if (a.trials > 1) {
      double ss = 0.0;
      for (double v : pl0[k]) ss += (v - a.power_loss_0db) * (v - a.power_loss_0db);
      a.power_loss_0db_se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
  }
  return out;
}

namespace {

void write_trial_rows(std::ostream& out, const char* sweep, const std::vector<TrialResult>& rows) {
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%llu,%d,%d,%.17g,%.17g,%.17g,%.17g,%d\n", sweep,
                  method_name(r.method).c_str(), r.trial, static_cast<unsigned long long>(r.seed),
                  r.train_size, r.n_b, r.power_loss_0db, r.power_loss_3db, r.mean_rate,
                  r.normalized_rate, r.rank);
    out << buf;
  }
}

void write_aggregate_rows(std::ostream& out, const char* sweep,
                          const std::vector<TrialResult>& rows) {
  char buf[512];
  for (const auto& a : aggregate(rows)) {
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sweep,
                  method_name(a.method).c_str(), a.train_size, a.n_b, a.trials, a.power_loss_0db,
                  a.power_loss_0db_se, a.power_loss_3db, a.mean_rate, a.normalized_rate,
                  a.mean_rank);
    out << buf;
  }
}

}  // namespace

void write_trials_csv(std::ostream& out, const ExperimentResult& result) {
  out << "sweep,method,trial,seed,train_size,n_b,power_loss_0db,power_loss_3db,mean_rate,"
         "normalized_rate,rank\n";
  write_trial_rows(out, "nb", result.nb_sweep);
  write_trial_rows(out, "train", result.train_sweep);
}

void write_aggregate_csv(std::ostream& out, const ExperimentResult& result) {
  out << "sweep,method,train_size,n_b,trials,power_loss_0db,power_loss_0db_se,power_loss_3db,"
         "mean_rate,normalized_rate,mean_rank\n";
  write_aggregate_rows(out, "nb", result.nb_sweep);
  write_aggregate_rows(out, "train", result.train_sweep);
}

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

void write_svg_panel(const std::string& path, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<Series>& series) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  const double w = 640, h = 420, left = 70, right = 170, top = 40, bottom = 60;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, w - left - right, h - top - bottom);
  out << buf;
  for (int k = 0; k <= 4; ++k) {
    const double yv = y0 + (y1 - y0) * k / 4.0;
    const double xv = x0 + (x1 - x0) * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.3g</text>\n"
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.3g</text>\n",
                  left - 6, py(yv) + 4, yv, px(xv), h - bottom + 18, xv);
    out << buf;
  }
  out << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 15
      << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text transform=\"translate(18," << (top + h - bottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = colors[i % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (const auto& [x, y] : s.points) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
      out << buf;
    }
    out << "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(i);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"%s/>\n",
                  w - right + 10, ly, w - right + 35, ly, color,
                  s.dashed ? " stroke-dasharray=\"6,4\"" : "");
    out << buf << "<text x=\"" << w - right + 40 << "\" y=\"" << ly + 4 << "\">" << s.label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void write_plots_svg(const std::string& prefix, const ExperimentResult& result) {
  const auto nb_rows = aggregate(result.nb_sweep);
  std::map<Method, Series> pl0, pl3, rate;
  std::vector<Method> order;
  for (const auto& a : nb_rows) {
    if (!pl0.count(a.method)) {
      order.push_back(a.method);
      pl0[a.method].label = method_name(a.method) + " 0 dB";
      pl3[a.method].label = method_name(a.method) + " 3 dB";
      pl3[a.method].dashed = true;
      rate[a.method].label = method_name(a.method);
    }
    pl0[a.method].points.emplace_back(a.n_b, a.power_loss_0db);
    pl3[a.method].points.emplace_back(a.n_b, a.power_loss_3db);
    rate[a.method].points.emplace_back(a.n_b, a.normalized_rate);
  }
  std::vector<Series> loss_series, rate_series;
  for (Method m : order) {
    loss_series.push_back(pl0[m]);
    loss_series.push_back(pl3[m]);
    rate_series.push_back(rate[m]);
  }
  write_svg_panel(prefix + "_power_loss.svg", "Power loss probability vs. candidate list size",
                  "N_b", "P_pl", loss_series);
  write_svg_panel(prefix + "_rate.svg", "Normalized achievable rate vs. candidate list size", "N_b",
                  "normalized rate", rate_series);
  if (!result.train_sweep.empty()) {
    std::map<Method, Series> trend;
    std::vector<Method> t_order;
    for (const auto& a : aggregate(result.train_sweep)) {
      if (!trend.count(a.method)) {
        t_order.push_back(a.method);
        trend[a.method].label = method_name(a.method);
      }
      trend[a.method].points.emplace_back(a.train_size, a.power_loss_0db);
    }
    std::vector<Series> s;
    for (Method m : t_order) s.push_back(trend[m]);
    write_svg_panel(prefix + "_train_size.svg", "0 dB power loss vs. training samples",
                    "training samples", "P_pl (0 dB)", s);
  }
}

}  // namespace beamsel
