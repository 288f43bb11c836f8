#include "starsec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace starsec {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  }
  return text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kPowerDbm: return "power_dbm";
    case SweepAxis::kRisElements: return "ris_elements";
  }
  return "none";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "none") return SweepAxis::kNone;
  if (name == "power_dbm") return SweepAxis::kPowerDbm;
  if (name == "ris_elements") return SweepAxis::kRisElements;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

void ExperimentSpec::validate() const {
  base.validate();
  if (schemes.empty()) throw std::invalid_argument("experiment: at least one scheme required");
  if (n_trials < 1) throw std::invalid_argument("experiment: n_trials must be >= 1");
  if (n_randomizations < 1) throw std::invalid_argument("experiment: n_randomizations must be >= 1");
  if (threads < 1) throw std::invalid_argument("experiment: threads must be >= 1");
  if (axis != SweepAxis::kNone && values.empty()) {
    throw std::invalid_argument("experiment: sweep values required for axis " + to_string(axis));
  }
  for (double v : values) apply_sweep(base, axis, v).validate();
}

ExperimentSpec experiment_spec_from_json_text(const std::string& text,
                                              const std::filesystem::path& base_dir) {
  const json doc = json::parse(text);
  if (!doc.is_object()) throw std::invalid_argument("experiment spec must be a JSON object");
  ExperimentSpec spec;
  for (const auto& [key, val] : doc.items()) {
    if (key == "scenario") {
      if (val.is_string()) {
        std::filesystem::path p = val.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        spec.base = load_config(p);
      } else {
        spec.base = config_from_json_text(val.dump());
      }
    } else if (key == "schemes") {
      spec.schemes.clear();
      for (const auto& s : val) spec.schemes.push_back(parse_scheme(s.get<std::string>()));
    } else if (key == "sweep") {
      for (const auto& [sk, sv] : val.items()) {
        if (sk == "axis") spec.axis = parse_sweep_axis(sv.get<std::string>());
        else if (sk == "values") spec.values = sv.get<std::vector<double>>();
        else throw std::invalid_argument("unknown sweep key: " + sk);
      }
    } else if (key == "n_trials") {
      spec.n_trials = val.get<int>();
    } else if (key == "seed_base") {
      spec.seed_base = val.get<std::uint64_t>();
    } else if (key == "output") {
      spec.output = val.get<std::string>();
    } else if (key == "n_randomizations") {
      spec.n_randomizations = val.get<int>();
    } else if (key == "qcqp_recovery") {
      spec.qcqp_recovery = parse_qcqp_recovery(val.get<std::string>());
    } else if (key == "record_timing") {
      spec.record_timing = val.get<bool>();
    } else if (key == "threads") {
      spec.threads = val.get<int>();
    } else {
      throw std::invalid_argument("unknown experiment key: " + key);
    }
  }
  if (spec.axis == SweepAxis::kNone && spec.values.empty()) spec.values = {0.0};
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment spec: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return experiment_spec_from_json_text(ss.str(), path.parent_path());
}

std::array<int, 2> factor_grid(int n) {
  if (n < 1) throw std::invalid_argument("factor_grid: element count must be >= 1");
  if (n == 1) return {1, 1};
  int lx = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (lx > 1 && n % lx != 0) --lx;
  if (lx == 1) {
    throw std::invalid_argument("factor_grid: " + std::to_string(n) +
                                " elements do not factor into a planar grid");
  }
  return {lx, n / lx};
}

SystemConfig apply_sweep(const SystemConfig& base, SweepAxis axis, double value) {
  SystemConfig c = base;
  switch (axis) {
    case SweepAxis::kNone:
      break;
    case SweepAxis::kPowerDbm:
      c.tx_power_dbm = value;
      break;
    case SweepAxis::kRisElements: {
      const double r = std::round(value);
      if (std::abs(r - value) > 1e-9 || r < 1) {
        throw std::invalid_argument("ris_elements sweep values must be positive integers");
      }
      c.ris_grid = factor_grid(static_cast<int>(r));
      break;
    }
  }
  return c;
}

std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const int n_values = static_cast<int>(spec.values.size());
  const int n_schemes = static_cast<int>(spec.schemes.size());
  const int n_cells = n_values * spec.n_trials;
  std::vector<ResultRecord> records(static_cast<size_t>(n_cells) * n_schemes);

  auto slot = [&](int scheme, int value, int trial) -> ResultRecord& {
    return records[(static_cast<size_t>(scheme) * n_values + value) * spec.n_trials + trial];
  };

  auto run_cell = [&](int cell) {
    const int vi = cell / spec.n_trials;
    const int trial = cell % spec.n_trials;
    const double value = spec.values[vi];
    const std::uint64_t seed = spec.seed_base + static_cast<std::uint64_t>(trial);
    SystemConfig config = apply_sweep(spec.base, spec.axis, value);
    config.rng_seed = seed;

    std::optional<ChannelSet> channels;
    std::string channel_error;
    try {
      channels = generate_channels(config, seed);
    } catch (const std::exception& e) {
      channel_error = e.what();
    }

    for (int si = 0; si < n_schemes; ++si) {
      ResultRecord& rec = slot(si, vi, trial);
      rec.scheme = to_string(spec.schemes[si]);
      rec.sweep_axis = to_string(spec.axis);
      rec.sweep_value = value;
      rec.trial = trial;
      rec.seed = seed;
      if (!channels) {
        rec.status = "failed: " + sanitize(channel_error);
        continue;
      }
      const auto t0 = std::chrono::steady_clock::now();
      try {
        AoOptions opts;
        opts.scheme = spec.schemes[si];
        opts.n_randomizations = spec.n_randomizations;
        opts.qcqp_recovery = spec.qcqp_recovery;
        const AoResult res = run_ao(*channels, config, opts);
        rec.sum_secrecy_bits = res.rates.sum_secrecy_bits();
        rec.secrecy_r_bits = nats_to_bits(res.rates.r_secrecy[Region::kReflect]);
        rec.secrecy_t_bits = nats_to_bits(res.rates.r_secrecy[Region::kTransmit]);
        rec.iterations = res.iterations;
        rec.status = res.aborted ? "failed: " + sanitize(res.diagnostic) : "ok";
      } catch (const std::exception& e) {
        rec.status = "failed: " + sanitize(e.what());
      }
      if (spec.record_timing) {
        rec.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      }
    }
  };

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int cell = next++; cell < n_cells; cell = next++) run_cell(cell);
  };
  const int n_threads = std::min(spec.threads, std::max(1, n_cells));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

void write_records_csv(const std::vector<ResultRecord>& records, std::ostream& out) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.scheme << ',' << r.sweep_axis << ',' << format_double(r.sweep_value) << ',' << r.trial
        << ',' << r.seed << ',' << format_double(r.sum_secrecy_bits) << ','
        << format_double(r.secrecy_r_bits) << ',' << format_double(r.secrecy_t_bits) << ','
        << r.iterations << ',' << format_double(r.wall_ms) << ',' << sanitize(r.status) << '\n';
  }
}

std::vector<ResultRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) throw std::runtime_error("records csv: unexpected header");
  std::vector<ResultRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) {
      throw std::runtime_error("records csv: line " + std::to_string(line_no) + " has " +
                               std::to_string(f.size()) + " fields");
    }
    ResultRecord r;
    r.scheme = f[0];
    r.sweep_axis = f[1];
    r.sweep_value = std::stod(f[2]);
    r.trial = std::stoi(f[3]);
    r.seed = std::stoull(f[4]);
    r.sum_secrecy_bits = std::stod(f[5]);
    r.secrecy_r_bits = std::stod(f[6]);
    r.secrecy_t_bits = std::stod(f[7]);
    r.iterations = std::stoi(f[8]);
    r.wall_ms = std::stod(f[9]);
    r.status = f[10];
    out.push_back(std::move(r));
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

SampleStats sample_stats(const std::vector<double>& values) {
  SampleStats s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

std::array<double, 2> bootstrap_mean_interval(const std::vector<double>& values, std::uint64_t seed,
                                              int n_resamples, double level) {
  if (values.empty()) throw std::invalid_argument("bootstrap: empty sample");
  if (values.size() == 1) return {values[0], values[0]};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, values.size() - 1);
  std::vector<double> means(static_cast<size_t>(n_resamples));
  for (auto& m : means) {
    double s = 0.0;
    for (size_t i = 0; i < values.size(); ++i) s += values[pick(rng)];
    m = s / static_cast<double>(values.size());
  }
  std::sort(means.begin(), means.end());
  const double alpha = 0.5 * (1.0 - level);
  auto at = [&](double q) {
    const double pos = q * (means.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, means.size() - 1);
    return means[lo] + (pos - lo) * (means[hi] - means[lo]);
  };
  return {at(alpha), at(1.0 - alpha)};
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records, std::uint64_t seed,
                                  std::vector<std::string>* warnings) {
  struct Cell {
    std::string scheme;
    std::string axis;
    double value;
    std::vector<double> ok;
  };
  std::vector<Cell> cells;
  std::map<std::tuple<std::string, std::string, double>, size_t> index_of;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.scheme, r.sweep_axis, r.sweep_value);
    auto it = index_of.find(key);
    if (it == index_of.end()) {
      it = index_of.emplace(key, cells.size()).first;
      cells.push_back({r.scheme, r.sweep_axis, r.sweep_value, {}});
    }
    if (r.ok()) cells[it->second].ok.push_back(r.sum_secrecy_bits);
  }
  std::vector<SummaryRow> rows;
  for (size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (c.ok.empty()) {
      if (warnings) {
        warnings->push_back("no successful records for " + c.scheme + " at " + c.axis + "=" +
                            format_double(c.value));
      }
      continue;
    }
    const SampleStats st = sample_stats(c.ok);
    const auto ci = bootstrap_mean_interval(c.ok, mix_seed(seed, i));
    rows.push_back({c.scheme, c.axis, c.value, static_cast<int>(c.ok.size()), st.mean,
                    st.std_error, ci[0], ci[1]});
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.sweep_axis << ',' << format_double(r.sweep_value) << ',' << r.n
        << ',' << format_double(r.mean_bits) << ',' << format_double(r.se_bits) << ','
        << format_double(r.ci_low_bits) << ',' << format_double(r.ci_high_bits) << '\n';
  }
}

bool all_cells_succeeded(const std::vector<ResultRecord>& records) {
  std::map<std::tuple<std::string, std::string, double>, bool> cells;
  for (const auto& r : records) {
    auto& ok = cells[std::make_tuple(r.scheme, r.sweep_axis, r.sweep_value)];
    ok = ok || r.ok();
  }
  for (const auto& [key, ok] : cells) {
    if (!ok) return false;
  }
  return true;
}

}  // namespace starsec
