// Copyright 2026 The NeAF Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion on stdout
// (details go to stderr as they arrive) and exits non-zero if any fails.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "neaf/audio/dataset.hpp"
#include "neaf/audio/synth.hpp"
#include "neaf/bench/config.hpp"
#include "neaf/bench/gradcheck.hpp"
#include "neaf/bench/runner.hpp"
#include "neaf/metrics.hpp"
#include "neaf/models/init.hpp"
#include "neaf/models/mlp.hpp"
#include "neaf/models/model.hpp"
#include "neaf/trainer.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace neaf;
using nlohmann::json;

namespace {

// A pilot of this exact fit reached 153.3 dB (final loss 3.1e-9). The floor
// sits far below that so platform-level rounding differences cannot flip it.
constexpr double kToneSnrThreshold = 30.0;

struct Verdict {
  bool pass = false;
  std::string summary;
};

void note(const std::string& line) {
  std::fprintf(stderr, "  %s\n", line.c_str());
  std::fflush(stderr);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> uniform_points(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sd) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

Verdict parameter_counts() {
  const std::size_t fkan = models::param_count(models::FourierKANConfig{{1, 64, 64, 64, 64, 1}, {1024, 5, 5, 5, 3}});
  models::MLPConfig mlp;
  mlp.widths = {1, 256, 256, 256, 256, 256, 1};
  const std::size_t mlp_count = models::param_count(mlp);
  return {fkan == 254593 && mlp_count == 263937,
          "parameter counts: fourier-kan " + std::to_string(fkan) + ", mlp " + std::to_string(mlp_count)};
}

Verdict oracle_equivalence() {
  double kan_err = 0.0;
  double spline_err = 0.0;
  std::mt19937_64 rng(2024);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const int o1 = std::uniform_int_distribution<int>(1, 16)(rng);
    const int o2 = std::uniform_int_distribution<int>(1, 6)(rng);
    models::FourierKANConfig fk{{1, 2, 1}, {o1, o2}};
    auto p = models::init_params(fk, trial);
    oracle::randomize(p, 100 + trial);
    const auto t = uniform_points(64, -1.5, 1.5, trial);
    const auto y = models::predict(fk, p, t);
    for (std::size_t i = 0; i < t.size(); ++i)
      kan_err = std::max(kan_err, std::abs(y[i] - oracle::fourier_oracle(fk, p, t[i])));

    models::BSplineKANConfig bs;
    bs.widths = {1, 2, 1};
    bs.degree = std::uniform_int_distribution<int>(1, 3)(rng);
    bs.grid_size = std::uniform_int_distribution<int>(2, 8)(rng);
    auto q = models::init_params(bs, trial);
    oracle::randomize(q, 200 + trial);
    const auto ys = models::predict(bs, q, t);
    for (std::size_t i = 0; i < t.size(); ++i)
      spline_err = std::max(spline_err, std::abs(ys[i] - oracle::bspline_oracle(bs, q, t[i])));
  }
  double lsd_err = 0.0;
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    const auto a = gaussian(4096, 10 + trial, 0.3);
    const auto b = gaussian(4096, 20 + trial, 0.3);
    lsd_err = std::max(lsd_err, std::abs(metrics::lsd(a, b) - oracle::naive_lsd(a, b)));
  }
  note("fourier-kan max abs error " + fmt("%.3e", kan_err) + ", b-spline-kan " + fmt("%.3e", spline_err) +
       ", lsd " + fmt("%.3e", lsd_err));
  return {kan_err <= 1e-12 && spline_err <= 1e-12 && lsd_err <= 1e-9,
          "oracle equivalence: kan " + fmt("%.1e", kan_err) + ", spline " + fmt("%.1e", spline_err) + ", lsd " +
              fmt("%.1e", lsd_err)};
}

Verdict gradient_suite() {
  std::vector<bench::GradCheckCase> cases;
  auto append = [&cases](std::vector<bench::GradCheckCase> more) { cases.insert(cases.end(), more.begin(), more.end()); };
  const auto acts = bench::gradcheck_activations(1, 100);
  const auto encs = bench::gradcheck_encodings(1, 100);
  append(acts);
  append(encs);
  std::size_t families = 0;
  for (auto f : {models::ModelFamily::kMlp, models::ModelFamily::kFourierKan, models::ModelFamily::kBsplineKan}) {
    auto more = bench::gradcheck_family(f, 1, 100);
    families += more.empty() ? 0 : 1;
    append(std::move(more));
  }
  double worst = 0.0;
  std::size_t failures = 0;
  for (const auto& c : cases) {
    const bool ok = c.result.checked > 0 && c.result.max_relative_error < 1e-5;
    if (!ok) {
      ++failures;
      note("gradcheck failed: " + c.label + " " + fmt("%.3e", c.result.max_relative_error));
    }
    worst = std::max(worst, c.result.max_relative_error);
  }
  return {failures == 0 && acts.size() == 16 && encs.size() == 3 && families == 3,
          "gradient suite: " + std::to_string(cases.size()) + " cases, worst relative error " + fmt("%.2e", worst)};
}

Verdict init_statistics() {
  const models::FourierKANConfig fk{{1, 64, 64, 64, 64, 1}, {1024, 5, 5, 5, 3}};
  const auto p = models::init_params(fk, 0);
  bool ok = true;
  std::size_t layers_checked = 0;
  double worst = 0.0;
  for (std::size_t l = 0; l + 1 < fk.widths.size(); ++l) {
    const auto v = p.at(models::fourier_kan_coef_name(l)).values();
    if (v.size() < 10000) continue;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
    const double target = 1.0 / (fk.omega_schedule[l] * static_cast<double>(fk.widths[l]));
    const double rel = std::abs(var / target - 1.0);
    worst = std::max(worst, rel);
    ok = ok && rel <= 0.05;
    ++layers_checked;
  }

  models::MLPConfig mlp;  // identity + sine, Sitzmann, omega 30, c 6
  const auto q = models::init_params(mlp, 0);
  std::size_t outside = 0;
  std::size_t hidden = 0;
  for (std::size_t l = 1; l + 1 < mlp.widths.size(); ++l) {
    const double bound = 6.0 / (30.0 * std::sqrt(static_cast<double>(mlp.widths[l])));
    for (double w : q.at(models::mlp_weight_name(l)).values()) {
      ++hidden;
      outside += std::abs(w) <= bound ? 0 : 1;
    }
  }
  note("fals layers checked " + std::to_string(layers_checked) + ", worst variance deviation " +
       fmt("%.4f", worst) + "; sitzmann weights outside bound " + std::to_string(outside) + " of " +
       std::to_string(hidden));
  return {ok && layers_checked == 4 && outside == 0 && hidden > 0,
          "init statistics: fals variance within " + fmt("%.2f%%", 100 * worst) + ", sitzmann " +
              std::to_string(hidden - outside) + "/" + std::to_string(hidden) + " in bound"};
}

Verdict metric_identities() {
  const auto y = gaussian(8192, 1, 0.4);
  const auto e = gaussian(8192, 2, 0.05);
  std::vector<double> a(y.size());
  std::vector<double> b(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    a[i] = y[i] + e[i];
    b[i] = y[i] + e[i] / std::sqrt(2.0);
  }
  const double gain = metrics::snr(b, y) - metrics::snr(a, y);
  const double gain_err = std::abs(gain - 20.0 * std::log10(2.0));
  const double self_lsd = metrics::lsd(y, y);
  const bool inf_ok = metrics::snr(y, y) == metrics::snr_infinity();
  note("snr gain " + fmt("%.12f", gain) + ", lsd(y,y) " + fmt("%.3e", self_lsd));
  return {gain_err <= 1e-9 && std::abs(self_lsd) <= 1e-9 && inf_ok,
          "metric identities: gain error " + fmt("%.1e", gain_err) + ", lsd(y,y) " + fmt("%.1e", self_lsd) +
              (inf_ok ? ", snr(y,y) = inf" : ", snr(y,y) finite")};
}

double fit_snr(const models::ModelSpec& spec, const audio::AudioClip& clip, const trainer::TrainConfig& cfg) {
  const auto fit = trainer::fit(spec, audio::to_dataset(clip), cfg);
  return trainer::evaluate(fit.params, spec, clip).snr_db;
}

Verdict inverted_pyramid() {
  // Three tones well above what Omega = 8 reaches in one layer.
  const auto clip = audio::synth_signal({4096, 1.0, {{0.3, 60, 0.2}, {0.3, 138, 1.0}, {0.3, 246, 2.0}}});
  const models::FourierKANConfig pyramid{{1, 16, 16, 1}, {64, 5, 3}};
  const models::FourierKANConfig uniform{{1, 16, 16, 1}, {8, 8, 8}};
  trainer::TrainConfig cfg;
  cfg.epochs = 300;
  cfg.lr0 = 1e-3;
  cfg.batch_size = 256;
  const double a = fit_snr(pyramid, clip, cfg);
  const double b = fit_snr(uniform, clip, cfg);
  const std::size_t pa = models::param_count(pyramid);
  const std::size_t pb = models::param_count(uniform);
  const double ratio = static_cast<double>(std::max(pa, pb)) / static_cast<double>(std::min(pa, pb));
  note("omega [64,5,3]: " + std::to_string(pa) + " params, " + fmt("%.2f dB", a) + "; omega [8,8,8]: " +
       std::to_string(pb) + " params, " + fmt("%.2f dB", b));
  return {a > b && ratio <= 1.05, "inverted pyramid: " + fmt("%.2f dB", a) + " vs uniform " + fmt("%.2f dB", b)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + NEAF_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

Verdict determinism(const fs::path& work) {
  json tiny = json::parse(R"({
    "input": {"synth": {"sample_rate": 2048, "duration": 1.0,
                        "components": [{"amp": 0.5, "freq": 20, "phase": 0}, {"amp": 0.2, "freq": 70, "phase": 1}]}},
    "model": {"family": "mlp", "activation": "sine", "encoding": {"kind": "rff", "L": 4, "sigma": 5, "seed": 3},
              "hidden": [8, 8]},
    "train": {"epochs": 4, "lr0": 1e-3, "batch_size": 512, "seed": 5}
  })");
  json matrix{{"base", tiny},
              {"grid", {{{"activations", {"sine", "tanh", "prelu"}}, {"encodings", {"identity", "neff", "rff"}}}}},
              {"experiments",
               {{{"model", {{"family", "fourier-kan"}, {"widths", {1, 4, 1}}, {"omega_schedule", {16, 3}}}}},
                {{"model", {{"family", "bspline-kan"}, {"widths", {1, 4, 1}}}}},
                {{"model", {{"activation", "quadratic"}}}, {"train", {{"lr0", 1e4}, {"schedule", "constant"}}}}}}};
  matrix["grid"][0]["model"]["encoding"] = {{"kind", "identity"}, {"L", 3}, {"sigma", 5}, {"seed", 3}};
  json sweep{{"base", tiny}, {"param", "sigma"}, {"values", {1, 5, 20}}};
  std::ofstream(work / "matrix.json") << matrix.dump(2);
  std::ofstream(work / "sweep.json") << sweep.dump(2);

  std::vector<fs::path> dirs;
  bool ran = true;
  for (const char* jobs : {"2", "2", "1"}) {
    const fs::path out = work / ("run" + std::to_string(dirs.size()));
    ran = ran && run_cli("bench \"" + (work / "matrix.json").string() + "\" --jobs " + jobs + " --out \"" +
                             out.string() + "\"",
                         work / "bench.log") == 0;
    ran = ran && run_cli("sweep \"" + (work / "sweep.json").string() + "\" --jobs " + jobs + " --out \"" +
                             out.string() + "\"",
                         work / "sweep.log") == 0;
    dirs.push_back(out);
  }
  std::size_t files = 0;
  bool same = true;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    ++files;
    const std::string first = slurp(entry.path());
    for (std::size_t i = 1; i < dirs.size(); ++i) {
      if (slurp(dirs[i] / entry.path().filename()) != first) {
        same = false;
        note("report differs between runs: " + entry.path().filename().string());
      }
    }
  }
  if (!ran) note("a bench or sweep invocation failed; see " + work.string());
  return {ran && same && files == 6,
          "determinism: " + std::to_string(files) + " report files identical across " + std::to_string(dirs.size()) +
              " runs"};
}

bench::ExperimentConfig desk(std::string name, models::ModelSpec model) {
  bench::ExperimentConfig c;
  c.name = std::move(name);
  c.model = std::move(model);
  bench::apply_desk_scale(c);
  return c;
}

models::MLPConfig sine_mlp(encodings::EncodingKind kind) {
  models::MLPConfig m;
  m.encoding.kind = kind;
  m.encoding.frequencies = encodings::default_neff_frequencies(trainer::TrainConfig{}.batch_size);
  m.widths = models::mlp_widths(m.encoding, 256, 5);
  return m;
}

// Runs every config on a small pool of threads; results keep input order.
std::vector<bench::RunOutcome> run_all(const std::vector<bench::ExperimentConfig>& configs) {
  std::vector<bench::RunOutcome> out(configs.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                                             configs.size()));
  note("running " + std::to_string(configs.size()) + " desk-scale fits on " + std::to_string(workers) + " thread(s)");
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
          out[i] = bench::run_experiment(configs[i]);
          const auto& r = out[i];
          note(configs[i].name + ": " + std::string(bench::to_string(r.row.status)) +
               (r.report ? ", snr " + metrics::format_snr(r.report->snr_db) + " dB, lsd " +
                               fmt("%.3f", r.report->lsd) + ", " + fmt("%.0f s", r.report->train_seconds)
                         : ", " + r.row.message));
        }
      });
    }
  }
  return out;
}

}  // namespace

// With arguments, only the listed criteria run (e.g. `acceptance 1 2 5`).
int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  auto wanted = [&selected](int id) {
    return selected.empty() || std::find(selected.begin(), selected.end(), id) != selected.end();
  };
  std::map<int, Verdict> verdicts;
  auto run = [&verdicts, &wanted](int id, const std::function<Verdict()>& f) {
    if (!wanted(id)) return;
    std::fprintf(stderr, "criterion %d\n", id);
    try {
      verdicts[id] = f();
    } catch (const std::exception& e) {
      verdicts[id] = {false, std::string("threw: ") + e.what()};
    }
    std::fprintf(stderr, "  -> %s\n", verdicts[id].pass ? "pass" : "fail");
  };

  const fs::path work = fs::temp_directory_path() / ("neaf_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);

  run(1, parameter_counts);
  run(2, oracle_equivalence);
  run(3, gradient_suite);
  run(4, init_statistics);
  run(5, metric_identities);
  run(7, inverted_pyramid);
  run(9, [&] { return determinism(work); });

  // The two long criteria share one pool of fits.
  if (wanted(6) || wanted(8)) {
  std::vector<bench::ExperimentConfig> configs;
  configs.push_back(desk("neff+sine", sine_mlp(encodings::EncodingKind::kNeff)));
  configs.push_back(desk("identity+sine", sine_mlp(encodings::EncodingKind::kIdentity)));
  configs.push_back(desk("fourier-kan", models::FourierKANConfig{}));
  configs.push_back(desk("b-spline-kan", models::BSplineKANConfig{}));
  {
    models::MLPConfig relu = sine_mlp(encodings::EncodingKind::kIdentity);
    relu.activation = activations::ActivationSpec::defaults(activations::ActivationKind::kRelu);
    relu.init = models::default_init(relu.activation.kind);
    configs.push_back(desk("identity+relu", relu));
  }
  {
    auto tones = desk("fourier-kan three tones", models::FourierKANConfig{});
    tones.input.kind = bench::InputSource::Kind::kSynth;
    tones.input.synth = {16000, 2.0, {{0.4, 220, 0.0}, {0.3, 330, 0.5}, {0.2, 495, 1.0}}};
    configs.push_back(tones);
  }
  std::fprintf(stderr, "criteria 6 and 8\n");
  const auto outcomes = run_all(configs);

  auto snr_of = [&](std::size_t i) {
    return outcomes[i].report ? outcomes[i].report->snr_db : -std::numeric_limits<double>::infinity();
  };
  auto loss_drops = [&](std::size_t i) {
    const auto& f = outcomes[i].fit;
    return f && f->loss_history.size() >= 2 && f->loss_history.back() < f->loss_history.front();
  };
  {
    const double neff = snr_of(0), ident = snr_of(1), fkan = snr_of(2), spline = snr_of(3), relu = snr_of(4);
    const bool a = neff - ident >= 10.0;
    const bool b = fkan - ident >= 5.0;
    const bool c = fkan - spline >= 10.0;
    const bool d = relu <= 1.0;
    bool drops = true;
    for (std::size_t i = 0; i < 5; ++i) drops = drops && loss_drops(i);
    note(std::string("(a) ") + (a ? "ok" : "no") + " (b) " + (b ? "ok" : "no") + " (c) " + (c ? "ok" : "no") +
         " (d) " + (d ? "ok" : "no") + ", loss decreased in every run: " + (drops ? "yes" : "no"));
    verdicts[6] = {a && b && c && d && drops,
                   "desk-scale ordering: neff+sine " + metrics::format_snr(neff) + ", identity+sine " +
                       metrics::format_snr(ident) + ", fourier-kan " + metrics::format_snr(fkan) +
                       ", b-spline-kan " + metrics::format_snr(spline) + ", identity+relu " +
                       metrics::format_snr(relu) + " dB"};
  }
  {
    const double s = snr_of(5);
    verdicts[8] = {s >= kToneSnrThreshold && loss_drops(5),
                   "three-tone convergence: " + metrics::format_snr(s) + " dB (threshold " +
                       fmt("%.0f", kToneSnrThreshold) + " dB)"};
  }
  }

  std::error_code ec;
  fs::remove_all(work, ec);

  int failures = 0;
  for (const auto& [id, v] : verdicts) {
    std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, v.summary.c_str());
    failures += v.pass ? 0 : 1;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
