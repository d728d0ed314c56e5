#include "qga/benchmark.hpp"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "qga/jsonio.hpp"

namespace qga {

// ---- convergence fit ---------------------------------------------------------

namespace {

double model_sse(const std::vector<double>& y, const std::vector<int>& g, double f, double b,
                 double gamma) {
  double sse = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = f + b * std::pow(gamma, g[i]) - y[i];
    sse += r * r;
  }
  return sse;
}

}  // namespace

FitResult fit_convergence(const std::vector<double>& series, int burn_in) {
  const int len = static_cast<int>(series.size());
  if (burn_in < 0 || len <= burn_in + 2)
    throw ContractViolation("fit_convergence: need at least 3 points after burn-in");

  std::vector<double> y(series.begin() + burn_in, series.end());
  std::vector<int> g(y.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = burn_in + static_cast<int>(i);
  const auto m = y.size();

  bool flat = true;
  for (std::size_t i = 1; i < m && flat; ++i) flat = std::abs(y[i] - y[i - 1]) < 1e-12;
  if (flat) return {y.back(), 0.0, 0.0, 0.0};

  // Initial guess: F_inf from the last point, gamma from the median ratio of
  // successive differences, beta from the conditional linear solve.
  double f = y.back();
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 2 < m; ++i) {
    const double d0 = y[i + 1] - y[i];
    const double d1 = y[i + 2] - y[i + 1];
    if (std::abs(d0) > 1e-14)
      ratios.push_back(std::clamp(std::abs(d1 / d0), 1e-6, 1.0 - 1e-6));
  }
  double gamma = 0.5;
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    gamma = ratios[ratios.size() / 2];
  }
  auto solve_beta = [&](double ff, double gg) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double p = std::pow(gg, g[i]);
      num += p * (y[i] - ff);
      den += p * p;
    }
    return den > 0.0 ? num / den : 0.0;
  };
  double beta = solve_beta(f, gamma);

  // Gauss-Newton with step halving.
  double sse = model_sse(y, g, f, beta, gamma);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::MatrixXd jac(m, 3);
    Eigen::VectorXd res(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double p = std::pow(gamma, g[i]);
      jac(i, 0) = 1.0;
      jac(i, 1) = p;
      jac(i, 2) = g[i] == 0 ? 0.0 : beta * g[i] * std::pow(gamma, g[i] - 1);
      res(i) = f + beta * p - y[i];
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * res;
    const Eigen::Vector3d step = jtj.ldlt().solve(-jtr);
    if (!step.allFinite()) break;

    double scale = 1.0;
    double nf = f, nb = beta, ng = gamma, nsse = sse;
    for (int half = 0; half < 25; ++half) {
      nf = f + scale * step(0);
      nb = beta + scale * step(1);
      ng = std::clamp(gamma + scale * step(2), 0.0, 1.0 - 1e-9);
      nsse = model_sse(y, g, nf, nb, ng);
      if (nsse <= sse) break;
      scale *= 0.5;
    }
    if (nsse > sse) break;
    const double moved = scale * step.norm();
    f = nf;
    beta = nb;
    gamma = ng;
    sse = nsse;
    if (moved < 1e-10) break;
  }
  return {f, beta, gamma, std::sqrt(sse / static_cast<double>(m))};
}

// ---- configuration -----------------------------------------------------------

ExperimentConfig ExperimentConfig::paper_preset() { return {}; }

ExperimentConfig ExperimentConfig::reduced_preset() {
  ExperimentConfig cfg;
  cfg.num_hamiltonians = 50;
  cfg.num_initial_states = 5;
  return cfg;
}

namespace {
// The canonical form (local = false) identifies the experiment itself and
// feeds the config hash; thread count and output location do not change what
// gets computed.
std::string config_json(const ExperimentConfig& c, bool with_local) {
  std::string out = "{\"n\":" + std::to_string(c.n) + ",\"c\":" + std::to_string(c.c) +
                    ",\"num_hamiltonians\":" + std::to_string(c.num_hamiltonians) +
                    ",\"num_initial_states\":" + std::to_string(c.num_initial_states) +
                    ",\"generations\":" + std::to_string(c.generations) +
                    ",\"pm\":" + format_double(c.pm) + ",\"variants\":[";
  for (std::size_t i = 0; i < c.variants.size(); ++i) {
    if (i) out += ",";
    out += "\"" + c.variants[i] + "\"";
  }
  out += "],\"burn_in\":" + std::to_string(c.burn_in) +
         ",\"master_seed\":" + std::to_string(c.master_seed) + ",\"init_mode\":\"" +
         c.init_mode + "\",\"spectral\":" + (c.spectral ? "true" : "false");
  if (with_local)
    out += ",\"threads\":" + std::to_string(c.threads) + ",\"output_dir\":\"" +
           json_escape(c.output_dir) + "\"";
  out += "}";
  return out;
}
}  // namespace

std::string ExperimentConfig::to_json() const { return config_json(*this, true); }

std::string ExperimentConfig::config_hash() const { return fnv1a_hex(config_json(*this, false)); }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.n = j.value("n", cfg.n);
    cfg.c = j.value("c", cfg.c);
    cfg.num_hamiltonians = j.value("num_hamiltonians", cfg.num_hamiltonians);
    cfg.num_initial_states = j.value("num_initial_states", cfg.num_initial_states);
    cfg.generations = j.value("generations", cfg.generations);
    cfg.pm = j.value("pm", cfg.pm);
    if (j.contains("variants")) cfg.variants = j.at("variants").get<std::vector<std::string>>();
    cfg.burn_in = j.value("burn_in", cfg.burn_in);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.init_mode = j.value("init_mode", cfg.init_mode);
    cfg.spectral = j.value("spectral", cfg.spectral);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: bad field type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  return from_json(read_text_file(path));
}

std::vector<Variant> ExperimentConfig::parsed_variants() const {
  std::vector<Variant> out;
  for (const auto& s : variants) {
    Variant v = Variant::parse(s);
    v.pm = v.mutation == MutationMode::Off ? 0.0 : pm;
    out.push_back(v);
  }
  return out;
}

std::vector<Cloner> ExperimentConfig::distinct_cloners() const {
  std::vector<Cloner> out;
  for (const auto& v : parsed_variants())
    if (std::find(out.begin(), out.end(), v.cloner) == out.end()) out.push_back(v.cloner);
  return out;
}

void ExperimentConfig::validate() const {
  PopulationLayout layout(n, c);
  layout.require_qga_shape();
  if (num_hamiltonians < 1) throw ConfigurationError("config: num_hamiltonians must be >= 1");
  if (num_initial_states < 1) throw ConfigurationError("config: num_initial_states must be >= 1");
  if (generations < 1) throw ConfigurationError("config: generations must be >= 1");
  if (burn_in < 0 || burn_in + 2 > generations)
    throw ConfigurationError("config: need burn_in + 2 <= generations for the fits");
  if (pm < 0.0 || pm > 1.0) throw ConfigurationError("config: pm must be in [0,1]");
  if (variants.empty()) throw ConfigurationError("config: variants must be nonempty");
  for (const auto& s : variants) Variant::parse(s);
  parse_init_mode(init_mode);
}

int ExperimentConfig::resolved_threads() const {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("QGA_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// ---- records -----------------------------------------------------------------

namespace {
std::string series_json(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out + "]";
}
}  // namespace

std::string BenchRecord::to_json_line() const {
  std::string out = "{\"ham_index\":" + std::to_string(ham_index) + ",\"ham_hash\":\"" +
                    ham_hash + "\",\"variant\":\"" + variant +
                    "\",\"seed\":" + std::to_string(seed) + ",\"init_mode\":\"" + init_mode +
                    "\",\"fidelity_series\":" + series_json(fidelity_series) +
                    ",\"energy_series\":" + series_json(energy_series) +
                    ",\"F_inf\":" + format_double(fit.f_inf) +
                    ",\"beta\":" + format_double(fit.beta) +
                    ",\"gamma\":" + format_double(fit.gamma) +
                    ",\"rms\":" + format_double(fit.rms);
  if (failed) out += ",\"failed\":true,\"cause\":\"" + json_escape(cause) + "\"";
  return out + "}";
}

BenchRecord BenchRecord::from_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("record: invalid JSON: ") + e.what());
  }
  BenchRecord r;
  r.ham_index = j.value("ham_index", 0);
  r.ham_hash = j.value("ham_hash", "");
  r.variant = j.value("variant", "");
  r.seed = j.value("seed", std::uint64_t{0});
  r.init_mode = j.value("init_mode", "");
  if (j.contains("fidelity_series"))
    r.fidelity_series = j.at("fidelity_series").get<std::vector<double>>();
  if (j.contains("energy_series"))
    r.energy_series = j.at("energy_series").get<std::vector<double>>();
  r.fit.f_inf = j.value("F_inf", 0.0);
  r.fit.beta = j.value("beta", 0.0);
  r.fit.gamma = j.value("gamma", 0.0);
  r.fit.rms = j.value("rms", 0.0);
  r.failed = j.value("failed", false);
  r.cause = j.value("cause", "");
  return r;
}

// ---- experiment --------------------------------------------------------------

namespace {

constexpr std::uint64_t kHamTag = 0x68616D;   // "ham"
constexpr std::uint64_t kInitTag = 0x696E6974;  // "init"
constexpr std::uint64_t kMutTag = 0x6D7574;   // "mut"

HamResult compute_ham(const ExperimentConfig& cfg, int index) {
  HamResult res;
  res.index = index;
  const RngStream base(cfg.master_seed);
  const PopulationLayout layout(cfg.n, cfg.c);
  const InitMode mode = parse_init_mode(cfg.init_mode);
  const auto variants = cfg.parsed_variants();

  RngStream ham_rng = base.substream(kHamTag).substream(index);
  const ProblemHamiltonian h = ProblemHamiltonian::random(cfg.c, ham_rng);
  res.ham_hash = h.content_hash();

  // Initial states are drawn once and shared by all variants.
  std::vector<PopulationState> inits;
  std::vector<std::uint64_t> init_seeds;
  for (int j = 0; j < cfg.num_initial_states; ++j) {
    RngStream s = base.substream(kInitTag).substream(index).substream(j);
    init_seeds.push_back(s.seed());
    inits.push_back(random_initial_state(layout, mode, s));
  }

  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    for (int j = 0; j < cfg.num_initial_states; ++j) {
      RngStream mut = base.substream(kMutTag).substream(index).substream(j).substream(vi);
      Trajectory t = run(inits[j], h, variants[vi], cfg.generations, mut);
      BenchRecord r;
      r.ham_index = index;
      r.ham_hash = res.ham_hash;
      r.variant = variants[vi].name();
      r.seed = init_seeds[j];
      r.init_mode = cfg.init_mode;
      r.fidelity_series = std::move(t.fidelity_series);
      r.energy_series = std::move(t.energy_series);
      r.fit = fit_convergence(r.fidelity_series, cfg.burn_in);
      res.records.push_back(std::move(r));
    }
  }

  if (cfg.spectral) {
    for (Cloner cl : cfg.distinct_cloners()) {
      const Channel gen = generation_channel(layout, h, Variant(cl, MutationMode::Off));
      res.spectral.push_back(predict(gen, h));
    }
  }
  return res;
}

HamResult failed_ham(const ExperimentConfig& cfg, int index, const std::string& cause) {
  HamResult res;
  res.index = index;
  res.failed = true;
  res.cause = cause;
  for (const auto& v : cfg.parsed_variants())
    for (int j = 0; j < cfg.num_initial_states; ++j) {
      BenchRecord r;
      r.ham_index = index;
      r.variant = v.name();
      r.init_mode = cfg.init_mode;
      r.failed = true;
      r.cause = cause;
      res.records.push_back(std::move(r));
    }
  return res;
}

}  // namespace

void run_experiment(const ExperimentConfig& config,
                    const std::function<void(const HamResult&)>& sink, int start_index) {
  config.validate();
  const int total = config.num_hamiltonians;
  if (start_index >= total) return;

  const int workers =
      std::max(1, std::min(config.resolved_threads(), total - start_index));

  std::atomic<int> next{start_index};
  std::mutex mu;
  std::condition_variable cv;
  std::map<int, HamResult> ready;

  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= total) return;
      HamResult res;
      try {
        res = compute_ham(config, i);
      } catch (const std::exception& e) {
        res = failed_ham(config, i, e.what());
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        ready.emplace(i, std::move(res));
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);

  // Deliver in index order so the record stream is deterministic.
  for (int want = start_index; want < total; ++want) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return ready.count(want) > 0; });
    HamResult res = std::move(ready.at(want));
    ready.erase(want);
    lock.unlock();
    sink(res);
  }
  for (auto& t : pool) t.join();
}

// ---- aggregation ---------------------------------------------------------------

namespace {

struct SimPoint {
  double f_inf = 0.0;
  double gamma = 0.0;
  int count = 0;
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0.0;
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return (sxy * sxy) / (sxx * syy);
}

// Per-(hamiltonian, variant) fit parameters averaged over initial states,
// preserving first-seen order of hamiltonians and variants.
struct Grouped {
  std::vector<std::string> ham_order;
  std::vector<std::string> variant_order;
  std::map<std::pair<std::string, std::string>, SimPoint> points;
};

Grouped group_records(const std::vector<BenchRecord>& records) {
  Grouped g;
  for (const auto& r : records) {
    if (r.failed) continue;
    if (std::find(g.ham_order.begin(), g.ham_order.end(), r.ham_hash) == g.ham_order.end())
      g.ham_order.push_back(r.ham_hash);
    if (std::find(g.variant_order.begin(), g.variant_order.end(), r.variant) ==
        g.variant_order.end())
      g.variant_order.push_back(r.variant);
    auto& p = g.points[{r.ham_hash, r.variant}];
    p.f_inf += r.fit.f_inf;
    p.gamma += r.fit.gamma;
    ++p.count;
  }
  for (auto& [key, p] : g.points) {
    (void)key;
    if (p.count > 0) {
      p.f_inf /= p.count;
      p.gamma /= p.count;
    }
  }
  return g;
}

}  // namespace

AggregateStats aggregate(const std::vector<BenchRecord>& records,
                         const std::vector<SpectralReport>& reports) {
  const Grouped g = group_records(records);
  if (g.points.empty()) throw ContractViolation("aggregate: no usable records");

  AggregateStats stats;
  for (const auto& variant : g.variant_order) {
    std::vector<double> fs, gs;
    for (const auto& ham : g.ham_order) {
      auto it = g.points.find({ham, variant});
      if (it == g.points.end()) continue;
      fs.push_back(it->second.f_inf);
      gs.push_back(it->second.gamma);
    }
    VariantStats vs;
    vs.variant = variant;
    vs.num_hamiltonians = static_cast<int>(fs.size());
    vs.mean_f_inf = mean(fs);
    vs.std_f_inf = sample_std(fs);
    vs.mean_gamma = mean(gs);
    vs.std_gamma = sample_std(gs);
    vs.min_gamma = gs.empty() ? 0.0 : *std::min_element(gs.begin(), gs.end());
    vs.max_gamma = gs.empty() ? 0.0 : *std::max_element(gs.begin(), gs.end());
    stats.variants.push_back(vs);
  }

  // BCQO-vs-UQCM convergence comparison on the no-mutation variants.
  int wins = 0, n = 0, ties = 0;
  for (const auto& ham : g.ham_order) {
    const auto b = g.points.find({ham, "bcqo:off"});
    const auto u = g.points.find({ham, "uqcm:off"});
    if (b == g.points.end() || u == g.points.end()) continue;
    const double diff = b->second.gamma - u->second.gamma;
    if (std::abs(diff) < 1e-6) {
      ++ties;
      continue;
    }
    ++n;
    if (diff < 0.0) ++wins;
  }
  stats.win_n = n;
  stats.win_ties = ties;
  if (n > 0) {
    const double p = static_cast<double>(wins) / n;
    stats.win_rate_pct = 100.0 * p;
    if (p == 0.0 || p == 1.0) {
      stats.win_one_sided = true;
      stats.win_ci_pct = 100.0 * 3.0 / n;  // rule-of-three bound
    } else {
      stats.win_ci_pct = 100.0 * 1.96 * std::sqrt(p * (1.0 - p) / n);
    }
  }

  // Simulation fit vs. channel prediction, per cloner (mutation off).
  std::map<std::string, std::string> joins;  // cloner -> report variant name
  for (const auto& rep : reports) {
    if (rep.multiplicity != 1) continue;
    joins[rep.variant.substr(0, rep.variant.find(':'))] = rep.variant;
  }
  for (const auto& [cloner, variant] : joins) {
    std::vector<double> sim_f, pred_f, sim_g, pred_g;
    for (const auto& rep : reports) {
      if (rep.variant != variant || rep.multiplicity != 1) continue;
      const auto it = g.points.find({rep.ham_hash, variant});
      if (it == g.points.end()) continue;
      sim_f.push_back(it->second.f_inf);
      pred_f.push_back(rep.f_inf);
      sim_g.push_back(it->second.gamma);
      pred_g.push_back(rep.gamma);
    }
    ClonerAgreement agr;
    agr.cloner = cloner;
    agr.num_points = static_cast<int>(sim_f.size());
    agr.r2_f_inf = r_squared(sim_f, pred_f);
    agr.r2_gamma = r_squared(sim_g, pred_g);
    stats.agreement.push_back(agr);
  }
  return stats;
}

std::string AggregateStats::to_json() const {
  std::string out = "{\"variants\":[";
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const auto& v = variants[i];
    if (i) out += ",";
    out += "{\"variant\":\"" + v.variant +
           "\",\"num_hamiltonians\":" + std::to_string(v.num_hamiltonians) +
           ",\"mean_F_inf\":" + format_double(v.mean_f_inf) +
           ",\"std_F_inf\":" + format_double(v.std_f_inf) +
           ",\"mean_gamma\":" + format_double(v.mean_gamma) +
           ",\"std_gamma\":" + format_double(v.std_gamma) +
           ",\"min_gamma\":" + format_double(v.min_gamma) +
           ",\"max_gamma\":" + format_double(v.max_gamma) + "}";
  }
  out += "],\"gamma_win\":{\"n\":" + std::to_string(win_n) +
         ",\"ties\":" + std::to_string(win_ties) +
         ",\"bcqo_lower_pct\":" + format_double(win_rate_pct) +
         ",\"ci95_pct\":" + format_double(win_ci_pct) +
         ",\"one_sided\":" + (win_one_sided ? "true" : "false") + "},\"spectral_agreement\":[";
  for (std::size_t i = 0; i < agreement.size(); ++i) {
    const auto& a = agreement[i];
    if (i) out += ",";
    out += "{\"cloner\":\"" + a.cloner + "\",\"num_points\":" + std::to_string(a.num_points) +
           ",\"R2_F_inf\":" + format_double(a.r2_f_inf) +
           ",\"R2_gamma\":" + format_double(a.r2_gamma) + "}";
  }
  return out + "]}";
}

std::string scatter_csv(const std::vector<BenchRecord>& records,
                        const std::vector<SpectralReport>& reports) {
  const Grouped g = group_records(records);
  std::map<std::pair<std::string, std::string>, const SpectralReport*> preds;
  for (const auto& rep : reports) preds[{rep.ham_hash, rep.variant}] = &rep;

  std::string out = "ham_hash,variant,F_inf_sim,F_inf_pred,gamma_sim,gamma_pred\n";
  for (const auto& ham : g.ham_order)
    for (const auto& variant : g.variant_order) {
      const auto it = g.points.find({ham, variant});
      if (it == g.points.end()) continue;
      out += ham + "," + variant + "," + format_double(it->second.f_inf) + ",";
      const auto p = preds.find({ham, variant});
      if (p != preds.end()) out += format_double(p->second->f_inf);
      out += "," + format_double(it->second.gamma) + ",";
      if (p != preds.end()) out += format_double(p->second->gamma);
      out += "\n";
    }
  return out;
}

// ---- file-level runner ---------------------------------------------------------

BenchPaths BenchPaths::in_dir(const std::string& dir) {
  const std::string base = dir.empty() ? "" : dir + "/";
  return {base + "records.jsonl", base + "spectral.jsonl", base + "summary.json",
          base + "scatter.csv", base + "run.meta.json"};
}

namespace {

void truncate_to_lines(const std::string& path, std::size_t lines) {
  std::ifstream in(path);
  if (!in) {
    std::ofstream(path, std::ios::trunc);
    return;
  }
  std::string keep, line;
  std::size_t count = 0;
  while (count < lines && std::getline(in, line)) {
    keep += line;
    keep += '\n';
    ++count;
  }
  in.close();
  write_text_file(path, keep);
}

void write_meta(const std::string& path, const std::string& hash, int completed) {
  write_text_file(path,
                  "{\"config_hash\":\"" + hash + "\",\"completed\":" + std::to_string(completed) +
                      "}\n");
}

std::string spectral_stub_line(const std::string& variant, const std::string& cause) {
  return "{\"ham_hash\":\"\",\"variant\":\"" + variant +
         "\",\"failed\":true,\"cause\":\"" + json_escape(cause) + "\"}";
}

}  // namespace

std::vector<BenchRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open records file: " + path);
  std::vector<BenchRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(BenchRecord::from_json_line(line));
  }
  return out;
}

std::vector<SpectralReport> load_spectral_reports(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spectral file: " + path);
  std::vector<SpectralReport> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("spectral report: invalid JSON: ") + e.what());
    }
    if (j.value("failed", false)) continue;
    SpectralReport rep;
    rep.ham_hash = j.value("ham_hash", "");
    rep.variant = j.value("variant", "");
    if (j.contains("eigenvalues"))
      for (const auto& ev : j.at("eigenvalues"))
        rep.eigenvalues.emplace_back(ev.value("re", 0.0), ev.value("im", 0.0));
    rep.multiplicity = j.value("m", 0);
    rep.f_inf = j.value("F_inf", 0.0);
    rep.gamma = j.value("gamma", 0.0);
    rep.residual = j.value("residual", 0.0);
    rep.oscillatory = j.value("oscillatory", false);
    rep.nonstandard_mutation = j.value("nonstandard_mutation", false);
    out.push_back(std::move(rep));
  }
  return out;
}

AggregateStats run_benchmark_files(const ExperimentConfig& config, const BenchPaths& paths,
                                   bool resume) {
  config.validate();
  const std::string hash = config.config_hash();
  const std::size_t records_per_ham =
      config.variants.size() * static_cast<std::size_t>(config.num_initial_states);
  const std::size_t spectral_per_ham = config.spectral ? config.distinct_cloners().size() : 0;

  int completed = 0;
  if (resume) {
    std::ifstream meta(paths.meta);
    if (meta) {
      nlohmann::json j;
      try {
        std::ostringstream ss;
        ss << meta.rdbuf();
        j = nlohmann::json::parse(ss.str());
      } catch (const nlohmann::json::exception&) {
        throw ResumeConflict("resume: unreadable meta file " + paths.meta);
      }
      if (j.value("config_hash", "") != hash)
        throw ResumeConflict("resume: config hash mismatch (experiment changed mid-run)");
      completed = std::clamp(j.value("completed", 0), 0, config.num_hamiltonians);
    }
  }
  truncate_to_lines(paths.records, completed * records_per_ham);
  truncate_to_lines(paths.spectral, completed * spectral_per_ham);
  write_meta(paths.meta, hash, completed);

  std::ofstream rec(paths.records, std::ios::app);
  std::ofstream spec(paths.spectral, std::ios::app);
  if (!rec || !spec) throw std::invalid_argument("cannot open output files for append");

  run_experiment(
      config,
      [&](const HamResult& res) {
        for (const auto& r : res.records) rec << r.to_json_line() << '\n';
        if (config.spectral) {
          if (res.failed) {
            for (Cloner cl : config.distinct_cloners())
              spec << spectral_stub_line(Variant(cl, MutationMode::Off).name(), res.cause)
                   << '\n';
          } else {
            for (const auto& rep : res.spectral) spec << rep.to_json_line() << '\n';
          }
        }
        rec.flush();
        spec.flush();
        write_meta(paths.meta, hash, res.index + 1);
      },
      completed);
  rec.close();
  spec.close();

  const auto records = load_records(paths.records);
  const auto reports = load_spectral_reports(paths.spectral);
  const AggregateStats stats = aggregate(records, reports);
  write_text_file(paths.summary, "{\"config_hash\":\"" + hash + "\",\"config\":" +
                                     config_json(config, false) + ",\"stats\":" +
                                     stats.to_json() + "}\n");
  write_text_file(paths.scatter, scatter_csv(records, reports));
  return stats;
}

}  // namespace qga
