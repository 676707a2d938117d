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

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "beamsel/beam_select.hpp"
#include "beamsel/codebook.hpp"
#include "beamsel/cpd_pmf.hpp"
#include "beamsel/experiment.hpp"
#include "beamsel/geometry.hpp"
#include "beamsel/mlp.hpp"
#include "beamsel/vb_pmf.hpp"

using namespace beamsel;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += "; over time budget";
  }
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1f s, budget %.0f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Element-by-element DFT beam.
std::complex<double> dft_entry(const ArrayGeometry& g, int beam, int element) {
  const int qx = beam / g.m_y, qy = beam % g.m_y;
  const int ix = element / g.m_y, iy = element % g.m_y;
  const double phase = 2.0 * std::numbers::pi * (double(qx) * ix / g.m_x + double(qy) * iy / g.m_y);
  return std::polar(1.0 / std::sqrt(double(g.elements())), phase);
}

Outcome oracle_equivalence() {
  const ArrayGeometry gt{8, 8, 0.5, 0.5}, gr{2, 2, 0.5, 0.5};
  const Codebook tx = build_dft_codebook(gt), rx = build_dft_codebook(gr);
  const RadioConfig cfg = default_radio_config();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  int pair_ok = 0;
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    std::vector<PathComponent> paths(1 + rng() % 25);
    for (auto& p : paths) {
      p.gain = {1e-5 * n(rng), 1e-5 * n(rng)};
      p.aoa_elevation = std::numbers::pi * u(rng);
      p.aod_elevation = std::numbers::pi * u(rng);
      p.aoa_azimuth = 2 * std::numbers::pi * u(rng) - std::numbers::pi;
      p.aod_azimuth = 2 * std::numbers::pi * u(rng) - std::numbers::pi;
    }
    const ChannelMatrix h = assemble_channel(gt, gr, paths);
    const auto ex = exhaustive_search(h, tx, rx, cfg);
    double best = -1.0;
    BeamPair best_pair;
    for (int f = 0; f < 64; ++f)
      for (int w = 0; w < 4; ++w) {
        std::complex<double> y = 0.0;
        for (int r = 0; r < 4; ++r)
          for (int k = 0; k < 64; ++k) y += std::conj(dft_entry(gr, w, r)) * h(r, k) * dft_entry(gt, f, k);
        const double rss = cfg.transmit_power * std::norm(y);
        worst = std::max(worst, std::abs(rss - ex.rss_table(f, w)) / std::max(rss, 1e-300));
        if (rss > best) {
          best = rss;
          best_pair = {f, w};
        }
      }
    pair_ok += best_pair == ex.best;
  }
  return {pair_ok == 200 && worst <= 1e-10,
          fmt("winning pair agrees on %.0f/200 channels, max relative RSS error %.2e", pair_ok, worst)};
}

CpdPmfModel random_model(std::mt19937_64& rng, const Dims4& dims, int rank) {
  std::gamma_distribution<double> g(0.7, 1.0);
  Eigen::VectorXd lam(rank);
  for (int r = 0; r < rank; ++r) lam[r] = g(rng) + 1e-3;
  std::array<Eigen::MatrixXd, kNumVars> f;
  for (int n = 0; n < kNumVars; ++n) {
    f[n].resize(dims[n], rank);
    for (Eigen::Index i = 0; i < f[n].size(); ++i) f[n].data()[i] = g(rng) + 1e-3;
  }
  return CpdPmfModel(lam, f);
}

Dims4 random_dims(std::mt19937_64& rng) {
  return {1 + int(rng() % 6), 1 + int(rng() % 6), 1 + int(rng() % 8), 1 + int(rng() % 4)};
}

Eigen::MatrixXd dense_slice(const DenseTensor4& t, const Dims4& d, int ix, int iy) {
  Eigen::MatrixXd s(d[2], d[3]);
  for (int f = 0; f < d[2]; ++f)
    for (int w = 0; w < d[3]; ++w) s(f, w) = t({ix, iy, f, w});
  return s;
}

Outcome pmf_normalization() {
  std::mt19937_64 rng(21);
  double worst_sum = 0.0, worst_post = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Dims4 d = random_dims(rng);
    const auto m = random_model(rng, d, 1 + int(rng() % 6));
    const auto t = materialize_full_tensor(m);
    worst_sum = std::max(worst_sum, std::abs(t.sum() - 1.0));
    for (int ix = 0; ix < d[0]; ++ix)
      for (int iy = 0; iy < d[1]; ++iy) {
        const Eigen::MatrixXd s = dense_slice(t, d, ix, iy);
        const Eigen::MatrixXd bayes = s / s.sum();
        worst_post = std::max(worst_post, (posterior_over_beams(m, ix, iy) - bayes).cwiseAbs().maxCoeff());
      }
  }
  return {worst_sum <= 1e-8 && worst_post <= 1e-8,
          fmt("max |sum - 1| %.2e, max posterior deviation %.2e over 100 models", worst_sum, worst_post)};
}

CategoricalData sample_data(std::mt19937_64& rng, const CpdPmfModel& m, int count) {
  const Dims4 d = m.dims();
  std::discrete_distribution<int> comp(m.loading().data(), m.loading().data() + m.rank());
  std::array<std::vector<std::discrete_distribution<int>>, kNumVars> cond;
  for (int n = 0; n < kNumVars; ++n)
    for (int r = 0; r < m.rank(); ++r) {
      const auto col = m.factor(n).col(r);
      cond[n].emplace_back(col.data(), col.data() + col.size());
    }
  CategoricalData data;
  data.dims = d;
  for (int t = 0; t < count; ++t) {
    const int r = comp(rng);
    Index4 i;
    for (int n = 0; n < kNumVars; ++n) i[n] = cond[n][r](rng);
    data.rows.push_back(i);
  }
  return data;
}

Outcome elbo_monotone() {
  const Dims4 d{20, 20, 64, 4};
  int monotone = 0;
  double worst_drop = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::mt19937_64 rng(300 + k);
    const auto truth = random_model(rng, d, 5);
    const auto data = sample_data(rng, truth, 500);
    VbHyperparams h;
    h.r_init = 10;
    h.rng_seed = 1 + k;
    const auto res = fit(data, h);
    bool ok = true;
    for (std::size_t i = 1; i < res.elbo_trace.size(); ++i) {
      const double drop = res.elbo_trace[i - 1] - res.elbo_trace[i];
      worst_drop = std::max(worst_drop, drop);
      if (drop > 1e-8) ok = false;
    }
    monotone += ok;
  }
  return {monotone == 20, fmt("%.0f/20 traces nondecreasing, largest decrease %.2e", monotone, worst_drop)};
}

double component_tv(const CpdPmfModel& m, int a, int b) {
  const Dims4 d = m.dims();
  double tv = 0.0;
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j)
      for (int f = 0; f < d[2]; ++f)
        for (int w = 0; w < d[3]; ++w) {
          auto p = [&](int r) {
            return m.factor(0)(i, r) * m.factor(1)(j, r) * m.factor(2)(f, r) * m.factor(3)(w, r);
          };
          tv += std::abs(p(a) - p(b));
        }
  return 0.5 * tv;
}

// Rank-3 model with Dirichlet(0.3) factor columns and pairwise component TV of at least 0.5.
CpdPmfModel separated_rank3(std::mt19937_64& rng, const Dims4& d) {
  std::gamma_distribution<double> g(0.3, 1.0);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (;;) {
    Eigen::VectorXd lam(3);
    for (int r = 0; r < 3; ++r) lam[r] = u(rng);
    std::array<Eigen::MatrixXd, kNumVars> f;
    for (int n = 0; n < kNumVars; ++n) {
      f[n].resize(d[n], 3);
      for (Eigen::Index i = 0; i < f[n].size(); ++i) f[n].data()[i] = g(rng) + 1e-3;
    }
    CpdPmfModel m(lam, f);
    if (component_tv(m, 0, 1) >= 0.5 && component_tv(m, 0, 2) >= 0.5 && component_tv(m, 1, 2) >= 0.5) {
      return m;
    }
  }
}

Outcome rank_recovery() {
  const Dims4 d{10, 10, 8, 4};
  int hits = 0;
  double tv_sum = 0.0, tv_max = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::mt19937_64 rng(1000 + k);
    const auto truth = separated_rank3(rng, d);
    const auto data = sample_data(rng, truth, 5000);
    VbHyperparams h;
    h.rng_seed = 1 + k;
    const auto res = fit(data, h);
    hits += res.rank == 3;
    const double tv = total_variation(materialize_full_tensor(truth), materialize_full_tensor(res.model));
    tv_sum += tv;
    tv_max = std::max(tv_max, tv);
  }
  const double tv_mean = tv_sum / 20.0;
  return {hits >= 16 && tv_mean < 0.05,
          fmt("rank 3 recovered in %.0f/20 fits, TV mean %.4f, max %.4f", hits, tv_mean, tv_max)};
}

std::vector<BeamPair> enumerate(const Eigen::MatrixXd& s) {
  const int nw = int(s.cols());
  std::vector<int> flat(std::size_t(s.size()));
  for (int k = 0; k < int(flat.size()); ++k) flat[k] = k;
  std::stable_sort(flat.begin(), flat.end(), [&](int a, int b) {
    return s(a / nw, a % nw) > s(b / nw, b % nw);
  });
  std::vector<BeamPair> out;
  for (int k : flat) out.push_back(BeamPair::from_flat(k, nw));
  return out;
}

Outcome map_correctness() {
  std::mt19937_64 rng(51);
  int good = 0;
  long long queries = 0;
  for (int k = 0; k < 100; ++k) {
    const Dims4 d = random_dims(rng);
    const auto m = random_model(rng, d, 1 + int(rng() % 5));
    const auto t = materialize_full_tensor(m);
    bool ok = true;
    for (int ix = 0; ix < d[0]; ++ix)
      for (int iy = 0; iy < d[1]; ++iy) {
        ++queries;
        const Eigen::MatrixXd s = dense_slice(t, d, ix, iy);
        const auto ref = enumerate(s / s.sum());
        const int all = d[2] * d[3];
        ok &= select_map(m, ix, iy) == ref.front();
        const auto top = top_n(m, ix, iy, all);
        ok &= top.pairs == ref;
        for (int n = 1; n < all; ++n) {
          const auto part = top_n(m, ix, iy, n);
          ok &= std::equal(part.pairs.begin(), part.pairs.end(), ref.begin());
        }
      }
    good += ok;
  }
  return {good == 100, fmt("%.0f/100 models match enumeration over %.0f position bins", good, double(queries))};
}

Outcome mlp_gradient() {
  MlpModel m = make_mlp({3, 4, 5}, 5, 1);
  he_uniform_init(m, 3);
  std::mt19937_64 rng(61);
  std::normal_distribution<double> n;
  for (auto& l : m.layers)
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = 0.5 * n(rng);
  Eigen::MatrixXd x(3, 10);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  std::vector<int> y(10);
  for (auto& v : y) v = int(rng() % 5);
  const auto lg = mlp_loss_and_gradient(m, x, y);
  const double h = 1e-5;
  double worst = 0.0;
  auto check = [&](double& p, double analytic) {
    const double keep = p;
    p = keep + h;
    const double up = mlp_loss_and_gradient(m, x, y).loss;
    p = keep - h;
    const double down = mlp_loss_and_gradient(m, x, y).loss;
    p = keep;
    const double numeric = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(numeric - analytic) /
                                std::max(1e-8, std::abs(numeric) + std::abs(analytic)));
  };
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < m.layers[l].weight.size(); ++i)
      check(m.layers[l].weight.data()[i], lg.gradient[l].weight.data()[i]);
    for (Eigen::Index i = 0; i < m.layers[l].bias.size(); ++i)
      check(m.layers[l].bias.data()[i], lg.gradient[l].bias.data()[i]);
  }
  return {worst < 1e-4, fmt("max relative error %.2e on the 3-4-5 network", worst)};
}

const AggregateRow* find_row(const std::vector<AggregateRow>& rows, Method m, int nb, int train = -1) {
  for (const auto& r : rows)
    if (r.method == m && r.n_b == nb && (train < 0 || r.train_size == train)) return &r;
  return nullptr;
}

void log_progress(const std::string& s) { std::cerr << "  " << s << "\n"; }

Outcome end_to_end() {
  ExperimentSpec spec;
  spec.methods = {Method::kPmf, Method::kFingerprint, Method::kMlp};
  spec.nb_sweep = {1, 2, 4, 6, 8, 12, 16, 24, 32, 64, 128, 256};
  spec.trials = 50;
  spec.train_sizes.clear();
  const auto res = run_experiment(spec, nullptr, log_progress);
  const auto agg = aggregate(res.nb_sweep);
  const auto* pmf6 = find_row(agg, Method::kPmf, 6);
  const auto* fp6 = find_row(agg, Method::kFingerprint, 6);
  const auto* mlp6 = find_row(agg, Method::kMlp, 6);
  bool monotone = true;
  double worst_full = 0.0;
  for (Method m : spec.methods) {
    double prev = -1.0;
    for (int nb : spec.nb_sweep) {
      const double v = find_row(agg, m, nb)->normalized_rate;
      monotone &= v >= prev;
      prev = v;
    }
    worst_full = std::max(worst_full, std::abs(prev - 1.0));
  }
  const bool pass = pmf6->normalized_rate >= 0.85 && pmf6->power_loss_0db <= fp6->power_loss_0db &&
                    monotone && worst_full <= 1e-9;
  std::string detail = fmt("N_b=6: pmf rate %.4f PL0 %.4f, fingerprint rate %.4f PL0 %.4f", pmf6->normalized_rate,
                           pmf6->power_loss_0db, fp6->normalized_rate, fp6->power_loss_0db);
  detail += fmt(", mlp rate %.4f PL0 %.4f", mlp6->normalized_rate, mlp6->power_loss_0db);
  detail += monotone ? "; rate nondecreasing in N_b" : "; rate NOT nondecreasing in N_b";
  detail += fmt("; max |rate(256) - 1| %.1e", worst_full);
  return {pass, detail};
}

Outcome train_size_trend() {
  ExperimentSpec spec;
  spec.methods = {Method::kPmf};
  spec.nb_sweep = {16};
  spec.trials = 1;
  spec.train_sweep_nb = 16;
  spec.train_sweep_trials = 100;
  spec.train_sweep_methods = {Method::kPmf};
  const auto res = run_experiment(spec, nullptr, log_progress);
  const auto agg = aggregate(res.train_sweep);
  bool ok = true;
  std::string detail = "PL0 by train size:";
  const AggregateRow* prev = nullptr;
  for (int s : spec.train_sizes) {
    const auto* row = find_row(agg, Method::kPmf, 16, s);
    detail += fmt(" %.0f:%.4f(se %.4f)", s, row->power_loss_0db, row->power_loss_0db_se);
    if (prev) {
      const double pooled = std::sqrt(0.5 * (prev->power_loss_0db_se * prev->power_loss_0db_se +
                                             row->power_loss_0db_se * row->power_loss_0db_se));
      ok &= row->power_loss_0db <= prev->power_loss_0db + pooled;
    }
    prev = row;
  }
  detail += fmt("; %.0f trials", prev ? prev->trials : 0);
  return {ok && prev && prev->trials >= 100, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome sweep_determinism() {
  namespace fs = std::filesystem;
  const fs::path work = fs::temp_directory_path() / ("beamsel_accept_" + std::to_string(::getpid()));
  fs::create_directories(work);
  {
    std::ofstream cfg(work / "sweep.cfg");
    cfg << "num_samples = 400\nmethods = pmf, fingerprint, mlp\nnb_sweep = 1, 6, 16\ntrials = 2\n"
           "train_sizes = 40, 160\ntrain_sweep_trials = 2\ntrain_sweep_methods = pmf, fingerprint\n"
           "mlp_epochs = 5\n";
  }
  std::string detail;
  bool same = true;
  for (int run = 0; run < 2; ++run) {
    const std::string cmd = std::string("\"") + BEAMSEL_CLI + "\" sweep -c \"" + (work / "sweep.cfg").string() +
                            "\" --seed 5 --quiet -o \"" + (work / ("run" + std::to_string(run))).string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "sweep command failed: " + cmd};
  }
  for (const char* name : {"trials.csv", "aggregate.csv"}) {
    const auto a = slurp(work / "run0" / name), b = slurp(work / "run1" / name);
    same &= !a.empty() && a == b;
    detail += std::string(name) + (a == b ? " identical (" : " differs (") + std::to_string(a.size()) + " bytes) ";
  }
  fs::remove_all(work);
  return {same, detail};
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  run(1, "oracle equivalence", 10, oracle_equivalence);
  run(2, "PMF normalization and conditioning", 5, pmf_normalization);
  run(3, "ELBO monotonicity", 120, elbo_monotone);
  run(4, "rank recovery", 300, rank_recovery);
  run(5, "MAP correctness", 60, map_correctness);
  run(6, "MLP gradient check", 60, mlp_gradient);
  run(7, "end-to-end ordering", 1800, end_to_end);
  run(8, "training-size trend", 2700, train_size_trend);
  run(9, "sweep determinism", 600, sweep_determinism);
  std::printf("%d of 9 criteria failed, total %.1f s\n", failures,
              std::chrono::duration<double>(Clock::now() - t0).count());
  return failures == 0 ? 0 : 1;
}
