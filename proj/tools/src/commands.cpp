// Copyright 2026 The ergodic_counts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "ergodic/errors.hpp"
#include "ergodic/kraus.hpp"
#include "ergodic/model_io.hpp"
#include "ergodic/observables.hpp"
#include "ergodic/trajectory.hpp"

namespace ergodic::cli {

using nlohmann::json;

bool RunReport::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

namespace {

std::string join(const std::vector<double>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += format_double(values[i]);
  }
  return out;
}

// Writes result files that share one provenance header.
class Output {
 public:
  Output(const ExperimentConfig& config, std::string label, std::filesystem::path dir)
      : config_(config), label_(std::move(label)), dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::vector<std::string> header() const {
    return {"ergodic_counts " + label_, "seed=" + std::to_string(config_.seed),
            "config=" + config_to_json(config_).dump()};
  }

  void csv(RunReport& report, const std::string& name, const std::string& columns,
           const std::vector<std::string>& rows) const {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    for (const auto& line : header()) out << "# " << line << '\n';
    out << columns << '\n';
    for (const auto& row : rows) out << row << '\n';
    if (!out) throw Error("cannot write " + path.string());
    report.files.push_back(path);
  }

  void verdicts(RunReport& report) const {
    json doc;
    doc["command"] = label_;
    doc["seed"] = config_.seed;
    doc["config"] = config_to_json(config_);
    doc["checks"] = json::array();
    for (const auto& v : report.verdicts) {
      doc["checks"].push_back(
          {{"check", v.check}, {"pass", v.pass}, {"value", v.value}, {"tolerance", v.tolerance}});
    }
    doc["pass"] = report.all_passed();
    const auto path = dir_ / "verdict.json";
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("cannot write " + path.string());
    report.files.push_back(path);
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  const ExperimentConfig& config_;
  std::string label_;
  std::filesystem::path dir_;
};

struct Setup {
  LindbladModel model;
  Unraveling u;
};

Setup lindblad_setup(const ExperimentConfig& c) {
  if (!c.has_lindblad()) throw ConfigError("/model: this command needs \"jump_operators\"");
  LindbladModel model = parse_lindblad_model(c.model, "/model");
  Unraveling u = unravel(model);
  return {std::move(model), std::move(u)};
}

DensityMatrix named_state(const json& value, Index dim, const std::function<DensityMatrix()>& stationary) {
  if (value.is_string()) {
    const auto name = value.get<std::string>();
    if (name == "stationary") return stationary();
    if (name == "ground") return DensityMatrix::basis_state(dim, 0);
    if (name == "excited") return DensityMatrix::basis_state(dim, dim - 1);
    if (name == "maximally_mixed") return DensityMatrix::maximally_mixed(dim);
    throw ConfigError("/initial_state: unknown state name \"" + name + "\"");
  }
  const ComplexOperator op = parse_matrix(value, dim, "/initial_state");
  try {
    return DensityMatrix::normalized(op);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("/initial_state: ") + e.what());
  }
}

DensityMatrix initial_state(const ExperimentConfig& c, const Unraveling& u) {
  return named_state(c.initial_state, u.dim(), [&] { return stationary_state(u.generator); });
}

QuadratureControls quadrature(const ExperimentConfig& c) {
  QuadratureControls q;
  q.nodes = c.quad_nodes;
  q.reference_nodes = 2 * c.quad_nodes;
  q.n_max = c.n_max;
  q.tolerance = c.tolerance("quadrature");
  return q;
}

SamplingOptions sampling(const ExperimentConfig& c) {
  SamplingOptions o;
  o.dt = c.dt;
  return o;
}

TimeAverageOptions averaging(const ExperimentConfig& c, const Unraveling& u) {
  TimeAverageOptions o;
  if (c.dt_int) {
    o.dt_int = *c.dt_int;
  } else {
    const double relax = u.total_jump_norm > 0.0 ? 1.0 / u.total_jump_norm : c.response.scale;
    o.dt_int = 0.01 * std::min(c.response.scale, relax);
  }
  o.bootstrap_seed = c.seed ^ 0x9e3779b97f4a7c15ull;
  return o;
}

double burn_in(const ExperimentConfig& c, const ResponseFunction& gamma) {
  return c.burn_in ? *c.burn_in : minimal_burn_in(gamma);
}

Verdict z_verdict(const std::string& name, double a, double se_a, double b, double se_b, double tol) {
  const double diff = std::abs(a - b);
  const double se = std::hypot(se_a, se_b);
  const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::max());
  return {name, z <= tol, z, tol};
}

std::string row(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string fd(double v) { return format_double(v); }

// --- simulate -------------------------------------------------------------

void simulate(const ExperimentConfig& c, const Output& out, RunReport& report, unsigned threads) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix rho = initial_state(c, s.u);
  const auto records = sample_ensemble(s.u, rho, c.horizon, c.seed, c.n_traj, sampling(c), threads);
  const auto dir = out.dir() / "records";
  std::filesystem::create_directories(dir);
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto path = dir / ("stream_" + std::to_string(i) + ".csv");
    std::ofstream file(path, std::ios::binary);
    write_record_csv(file, records[i], {c.seed, i}, out.header());
    if (!file) throw Error("cannot write " + path.string());
    report.files.push_back(path);
    rows.push_back(row({std::to_string(i), std::to_string(records[i].size()), fd(records[i].horizon())}));
  }
  out.csv(report, "simulate.csv", "stream,clicks,horizon", rows);
}

// --- verify ---------------------------------------------------------------

void verify_normalisation(const ExperimentConfig& c, const Output& out, RunReport& report) {
  const Setup s = lindblad_setup(c);
  std::vector<std::string> rows;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const double tr = std::abs(s.u.generator.apply(random_density(s.u.dim(), c.seed + i)).trace());
    worst = std::max(worst, tr);
    rows.push_back(row({std::to_string(i), fd(tr)}));
  }
  out.csv(report, "normalisation.csv", "state,abs_trace_of_generator_output", rows);
  const double tol = c.tolerance("normalisation");
  report.verdicts.push_back({"normalisation", worst < tol, worst, tol});
  const double residual = s.u.splitting_residual();
  const double utol = c.tolerance("unraveling");
  report.verdicts.push_back({"unraveling", residual < utol, residual, utol});
}

void verify_markov(const ExperimentConfig& c, const Output& out, RunReport& report) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix rho = initial_state(c, s.u);
  std::vector<MarkovPair> pairs = c.markov;
  if (pairs.empty()) {
    MarkovPair p;
    p.e = {{{0.1, 0.3}}, {1}, false};
    p.f = {{{0.2, 0.5}}, {1}, false};
    pairs.push_back(p);
  }
  const double margin = c.tolerance("markov");
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const MarkovPair& p = pairs[i];
    const MarkovReport r =
        check_markov(s.u, p.s, p.t, p.e.build(), p.f.build(), rho, quadrature(c), margin);
    rows.push_back(row({std::to_string(i), fd(p.s), fd(p.t), fd(r.discrepancy), fd(r.error_estimate),
                        r.passed ? "true" : "false"}));
    report.verdicts.push_back({"markov[" + std::to_string(i) + "]", r.passed, r.discrepancy,
                               r.error_estimate + margin});
  }
  out.csv(report, "markov.csv", "pair,s,t,discrepancy,error_estimate,pass", rows);
}

void verify_waiting_time(const ExperimentConfig& c, const Output& out, RunReport& report,
                         unsigned threads) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix rho = initial_state(c, s.u);
  SamplingOptions options = sampling(c);
  options.stop_after_clicks = 1;
  const auto records = sample_ensemble(s.u, rho, c.horizon, c.seed, c.n_traj, options, threads);
  std::vector<double> waits;
  waits.reserve(records.size());
  for (const auto& r : records) {
    waits.push_back(r.empty() ? std::numeric_limits<double>::infinity() : r.clicks()[0].time);
  }
  const auto cdf = [&](double t) {
    return 1.0 - propagate(s.u.no_click, std::min(t, c.horizon)).apply(rho.op()).trace().real();
  };
  const double d = ks_distance(waits, cdf);

  std::vector<double> sorted = waits;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> rows;
  for (int j = 0; j <= 100; ++j) {
    const double t = c.horizon * j / 100.0;
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    rows.push_back(row({fd(t), fd(static_cast<double>(below) / static_cast<double>(sorted.size())), fd(cdf(t))}));
  }
  out.csv(report, "waiting_time.csv", "time,empirical_cdf,model_cdf", rows);
  const auto it = c.tolerances.find("ks");
  const double tol = it != c.tolerances.end() ? it->second : 1.9 / std::sqrt(static_cast<double>(c.n_traj));
  report.verdicts.push_back({"waiting_time_ks", d < tol, d, tol});
}

void verify_subset_sum(const ExperimentConfig& c, const Output& out, RunReport& report,
                       unsigned threads) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix rho = initial_state(c, s.u);
  const double horizon = std::max(c.times.back() + c.epsilon, 2.0 * c.dt);
  const auto records = sample_ensemble(s.u, rho, horizon, c.seed, c.n_traj, sampling(c), threads);
  std::size_t mismatches = 0;
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].size() > 20) continue;
    const SubsetSumCheck r = subset_sum_identity_check(records[i], c.times, c.epsilon);
    if (!r.equal) ++mismatches;
    rows.push_back(row({std::to_string(i), std::to_string(records[i].size()),
                        std::to_string(r.subset_sum), std::to_string(r.count_product),
                        r.equal ? "true" : "false"}));
  }
  out.csv(report, "subset_sum.csv", "stream,clicks,subset_sum,count_product,equal", rows);
  report.verdicts.push_back({"subset_sum", mismatches == 0, static_cast<double>(mismatches), 0.0});
}

void verify_moment_bound(const ExperimentConfig& c, const Output& out, RunReport& report,
                         unsigned threads) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix rho = stationary_state(s.u.generator);
  const ResponseFunction gamma = c.response.build();
  const double burn = burn_in(c, gamma);
  const double t0 = c.times.front();
  const auto records =
      sample_stationary_records(s.u, rho, {t0}, c.n_traj, {c.seed, 1}, burn, sampling(c), threads);
  std::vector<std::string> rows;
  for (int n = 1; n <= 3; ++n) {
    const MeanEstimate m = ensemble_expectation_product(records, gamma, std::vector<double>(n, t0), burn);
    const double bound = moment_bound(n, s.u.total_jump_norm, gamma);
    rows.push_back(row({std::to_string(n), fd(m.mean), fd(m.std_error), fd(bound)}));
    report.verdicts.push_back({"moment_bound[" + std::to_string(n) + "]", m.mean <= bound, m.mean, bound});
  }
  out.csv(report, "moments.csv", "n,moment,std_error,bound", rows);
}

// --- correlate ------------------------------------------------------------

void correlate_current(const ExperimentConfig& c, const Output& out, RunReport& report,
                       unsigned threads) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix theta = initial_state(c, s.u);
  const DensityMatrix rho = stationary_state(s.u.generator);
  const ResponseFunction gamma = c.response.build();
  const DetectionRecord record =
      sample_record(s.u, theta, c.times.back() + c.tau, {c.seed, 0}, c.dt);
  const TimeAverage avg = time_average_current_product(record, gamma, c.times, c.tau, averaging(c, s.u));
  const std::string times = join(c.times, ' ');
  std::vector<std::string> rows;
  rows.push_back(row({"time_average", times, fd(avg.value), fd(avg.std_error), std::to_string(avg.samples)}));

  double reference;
  double reference_se;
  if (c.times.size() == 1) {
    reference = s.u.total_jump().apply(rho.op()).trace().real() * gamma.l1_norm();
    reference_se = 0.0;
    rows.push_back(row({"analytic", times, fd(reference), fd(0.0), "0"}));
  } else {
    const double burn = burn_in(c, gamma);
    const MeanEstimate m = ensemble_expectation_product(s.u, rho, gamma, c.times, c.n_traj,
                                                        {c.seed, 1}, burn, sampling(c), threads);
    reference = m.mean;
    reference_se = m.std_error;
    rows.push_back(row({"ensemble", times, fd(m.mean), fd(m.std_error), std::to_string(m.samples)}));
  }
  out.csv(report, "current.csv", "statistic,times,value,std_error,n_samples", rows);
  report.verdicts.push_back(z_verdict("current_time_average", avg.value, avg.std_error, reference,
                                      reference_se, c.tolerance("z")));
}

void correlate_coincidence(const ExperimentConfig& c, const Output& out, RunReport& report) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix theta = initial_state(c, s.u);
  const DensityMatrix rho = stationary_state(s.u.generator);
  const DetectionRecord record =
      sample_record(s.u, theta, c.times.back() + c.epsilon + c.tau, {c.seed, 0}, c.dt);
  const TimeAverageOptions options = averaging(c, s.u);
  const TimeAverage avg = coincidence_time_average(record, c.times, c.epsilon, c.tau, options);
  const QuadratureValue q = gn_box_integral(s.u, rho, c.times, c.epsilon, c.quad_nodes);
  const TimeAverage equal = equal_time_pair_average(record, c.epsilon, c.tau, options);
  const std::string times = join(c.times, ' ');
  out.csv(report, "coincidence.csv", "statistic,times,value,std_error,n_samples",
          {row({"time_average", times, fd(avg.value), fd(avg.std_error), std::to_string(avg.samples)}),
           row({"gn_box_integral", times, fd(q.value), fd(q.error_estimate), "0"}),
           row({"equal_time_pairs", "0", fd(equal.value), fd(equal.std_error), std::to_string(equal.samples)})});
  report.verdicts.push_back(z_verdict("coincidence_time_average", avg.value, avg.std_error, q.value,
                                      q.error_estimate, c.tolerance("z")));
  if (c.tolerances.contains("antibunching_ratio") && c.times.size() == 2 && avg.value > 0.0) {
    const double ratio = equal.value / avg.value;
    const double tol = c.tolerance("antibunching_ratio");
    report.verdicts.push_back({"antibunching", ratio < tol, ratio, tol});
  }
}

void correlate_spectrum(const ExperimentConfig& c, const Output& out, RunReport& report) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix theta = initial_state(c, s.u);
  std::vector<double> lags = c.lags;
  if (lags.empty()) {
    for (int j = 0; j <= 40; ++j) lags.push_back(0.5 * j);
  }
  const DetectionRecord record = sample_record(s.u, theta, lags.back() + c.tau, {c.seed, 0}, c.dt);
  const AutocorrelationSpectrum acs =
      current_autocorrelation_spectrum(record, c.response.build(), lags, c.tau, averaging(c, s.u));
  std::vector<std::string> rows;
  for (std::size_t j = 0; j < acs.lags.size(); ++j) {
    rows.push_back(row({fd(acs.lags[j]), fd(acs.autocovariance[j])}));
  }
  out.csv(report, "autocorrelation.csv", "lag,autocovariance", rows);
  rows.clear();
  for (std::size_t k = 0; k < acs.frequencies.size(); ++k) {
    rows.push_back(row({fd(acs.frequencies[k]), fd(acs.power[k])}));
  }
  out.csv(report, "spectrum.csv", "frequency,power", rows);
}

// --- gn ---------------------------------------------------------------------

void tabulate_gn(const ExperimentConfig& c, const Output& out, RunReport& report) {
  const Setup s = lindblad_setup(c);
  const DensityMatrix rho = stationary_state(s.u.generator);
  std::vector<std::string> rows;
  for (std::size_t n = 1; n <= c.times.size(); ++n) {
    const std::vector<double> prefix(c.times.begin(), c.times.begin() + static_cast<std::ptrdiff_t>(n));
    rows.push_back(row({std::to_string(n), join(prefix, ' '), fd(nonexclusive_density(s.u, rho, prefix))}));
  }
  out.csv(report, "gn.csv", "n,times,g_n", rows);
  if (!c.lags.empty()) {
    const double g1 = nonexclusive_density(s.u, rho, {0.0});
    rows.clear();
    for (double lag : c.lags) {
      const double g2 = nonexclusive_density(s.u, rho, {0.0, lag});
      rows.push_back(row({fd(lag), fd(g2), g1 > 0.0 ? fd(g2 / (g1 * g1)) : std::string("nan")}));
    }
    out.csv(report, "g2.csv", "lag,g_2,g_2_over_g_1_squared", rows);
  }
}

// --- kraus ------------------------------------------------------------------

std::string outcome_row(const std::vector<int>& seq) {
  std::string out;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    if (j > 0) out += ',';
    out += std::to_string(seq[j]);
  }
  return out;
}

void kraus_suite(const ExperimentConfig& c, const Output& out, RunReport& report, unsigned threads) {
  if (!c.has_kraus()) throw ConfigError("/model: this command needs \"kraus_operators\"");
  const KrausFamily family(parse_kraus_operators(c.model, "/model"));
  const DensityMatrix fixed = kraus_fixed_point(family);
  const DensityMatrix theta = named_state(c.initial_state, family.dim(), [&] { return fixed; });
  const int m = c.kraus.sequence_length;

  const auto cells = enumerate_sequences(family.outcomes(), m);
  const auto observed = outcome_counts(family, theta, m, c.n_traj, c.seed, threads);
  std::vector<double> expected;
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    expected.push_back(sequence_probability(family, theta, cells[i]));
    std::string seq;
    for (int o : cells[i].outcomes) seq += std::to_string(o);
    rows.push_back(row({seq, fd(expected.back()), std::to_string(observed[i])}));
  }
  out.csv(report, "kraus_cells.csv", "sequence,probability,observed", rows);
  const ChiSquareResult chi = chi_square_test(observed, expected);
  const double ptol = c.tolerance("chi2_p");
  report.verdicts.push_back({"chi_square_p", chi.p_value > ptol, chi.p_value, ptol});

  rows.clear();
  const std::size_t shown = std::min<std::size_t>(c.n_traj, 100);
  for (std::size_t i = 0; i < shown; ++i) {
    rows.push_back(outcome_row(sample_outcomes(family, theta, static_cast<std::size_t>(m), {c.seed, i}).outcomes));
  }
  std::string columns;
  for (int j = 1; j <= m; ++j) columns += (j > 1 ? ",i" : "i") + std::to_string(j);
  out.csv(report, "sequences.csv", columns, rows);

  const std::vector<int> pattern = c.kraus.pattern;
  const WindowFunction f = [pattern](std::span<const int> w) {
    return std::equal(pattern.begin(), pattern.end(), w.begin()) ? 1.0 : 0.0;
  };
  const DiscreteAverage avg = discrete_time_average(family, theta, f, static_cast<int>(pattern.size()),
                                                    c.kraus.n_steps, {c.seed, c.n_traj});
  out.csv(report, "kraus_average.csv", "statistic,value,std_error,windows",
          {row({"time_average", fd(avg.time_average), fd(avg.std_error), std::to_string(avg.windows)}),
           row({"stationary_expectation", fd(avg.stationary_expectation), fd(0.0), "0"})});
  report.verdicts.push_back(z_verdict("kraus_time_average", avg.time_average, avg.std_error,
                                      avg.stationary_expectation, 0.0, c.tolerance("z")));
}

}  // namespace

std::vector<std::string> topics(const std::string& command) {
  if (command == "verify") return {"markov", "normalisation", "waiting-time", "subset-sum", "moment-bound"};
  if (command == "correlate") return {"current", "coincidence", "spectrum"};
  return {};
}

RunReport run(const ExperimentConfig& config, const std::string& command, const std::string& topic,
              const std::filesystem::path& out_dir, unsigned threads) {
  const auto valid = topics(command);
  if (!valid.empty() && std::find(valid.begin(), valid.end(), topic) == valid.end()) {
    throw ConfigError("unknown " + command + " topic \"" + topic + "\"");
  }
  const std::string label = valid.empty() ? command : command + " " + topic;
  const Output out(config, label, out_dir);
  RunReport report;
  threads = std::max(1u, threads);
  if (command == "simulate") {
    simulate(config, out, report, threads);
  } else if (command == "verify") {
    if (topic == "normalisation") verify_normalisation(config, out, report);
    if (topic == "markov") verify_markov(config, out, report);
    if (topic == "waiting-time") verify_waiting_time(config, out, report, threads);
    if (topic == "subset-sum") verify_subset_sum(config, out, report, threads);
    if (topic == "moment-bound") verify_moment_bound(config, out, report, threads);
  } else if (command == "correlate") {
    if (topic == "current") correlate_current(config, out, report, threads);
    if (topic == "coincidence") correlate_coincidence(config, out, report);
    if (topic == "spectrum") correlate_spectrum(config, out, report);
  } else if (command == "gn") {
    tabulate_gn(config, out, report);
  } else if (command == "kraus") {
    kraus_suite(config, out, report, threads);
  } else {
    throw ConfigError("unknown command \"" + command + "\"");
  }
  out.verdicts(report);
  return report;
}

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag) return std::max(1u, *flag);
  if (const char* env = std::getenv("ERGODIC_COUNTS_THREADS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    throw ConfigError("ERGODIC_COUNTS_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace ergodic::cli
