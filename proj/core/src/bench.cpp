#include "conrap/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace conrap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::string_view kCsvHeader = "problem_id,method,wall_seconds,iterations,status,objective";

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bench csv: bad number '" + s + "'");
  return v;
}

std::string group_of(const std::string& problem_id) {
  const auto pos = problem_id.rfind("-s");
  return pos == std::string::npos ? problem_id : problem_id.substr(0, pos);
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Algorithm1: return "algorithm1";
    case Method::Algorithm2: return "algorithm2";
    case Method::DualBisectionBaseline: return "dual_bisection_baseline";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  for (auto m : {Method::Algorithm1, Method::Algorithm2, Method::DualBisectionBaseline}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

Method primary_method_for(ConstraintKind kind) {
  return kind == ConstraintKind::Inequality ? Method::Algorithm1 : Method::Algorithm2;
}

SolveReport solve_with(Method method, const ProblemInstance& instance, const SolverConfig& config) {
  switch (method) {
    case Method::Algorithm1: return solve_inequality(instance, config);
    case Method::Algorithm2: return solve_equality(instance, config);
    case Method::DualBisectionBaseline: return solve_dual_bisection(instance, config);
  }
  throw std::invalid_argument("solve_with: unknown method");
}

bool BenchRecord::solved() const {
  return status == to_string(SolveStatus::Optimal) ||
         status == to_string(SolveStatus::BoundaryDegenerate);
}

std::vector<BenchRecord> run_bench(const BenchOptions& options) {
  if (options.reps < 1) throw std::invalid_argument("run_bench: reps must be >= 1");
  if (!(options.timeout_s > 0)) throw std::invalid_argument("run_bench: timeout must be positive");

  struct Job {
    GeneratorSpec spec;
    std::size_t first_slot;
  };
  std::vector<Job> jobs;
  std::size_t slots = 0;
  for (auto family : options.families) {
    for (auto n : options.sizes) {
      for (int r = 0; r < options.reps; ++r) {
        jobs.push_back({{family, n, options.seed0 + static_cast<std::uint64_t>(r),
                         options.b_fraction},
                        slots});
        slots += 2;
      }
    }
  }
  std::vector<BenchRecord> records(slots);

  auto run_job = [&](const Job& job) {
    const auto instance = generate(job.spec);
    const std::string id = std::string(to_string(job.spec.family)) + "-n" +
                           std::to_string(job.spec.n) + "-s" + std::to_string(job.spec.seed);
    const Method methods[] = {primary_method_for(instance.constraint_kind()),
                              Method::DualBisectionBaseline};
    for (std::size_t k = 0; k < 2; ++k) {
      BenchRecord rec;
      rec.problem_id = id;
      rec.method = std::string(to_string(methods[k]));
      SolverConfig config = options.solver;
      const auto start = std::chrono::steady_clock::now();
      config.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(options.timeout_s));
      try {
        auto report = solve_with(methods[k], instance, config);
        rec.wall_seconds = report.wall_seconds;
        rec.iterations = report.iterations;
        rec.objective = report.objective;
        rec.status = std::string(to_string(report.status));
        if (report.wall_seconds > options.timeout_s) {
          rec.status = "Timeout";
        } else if (report.status == SolveStatus::Optimal &&
                   !kkt_check(instance, report.x, report.lambda, options.kkt_tol).pass) {
          rec.status = "KktFailed";
        }
      } catch (const SolveTimeout&) {
        rec.status = "Timeout";
        rec.objective = std::numeric_limits<double>::quiet_NaN();
      }
      if (rec.status == "Timeout") rec.wall_seconds = options.timeout_s;
      records[job.first_slot + k] = std::move(rec);
    }
  };

  const unsigned workers = std::max(1u, options.parallel);
  if (workers == 1) {
    for (const auto& job : jobs) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
          try {
            run_job(jobs[j]);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  return records;
}

double geometric_mean(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("geometric_mean: empty input");
  double log_sum = 0.0;
  for (double t : times) {
    if (!(t > 0)) throw std::invalid_argument("geometric_mean: times must be positive");
    log_sum += std::log(t);
  }
  return std::exp(log_sum / static_cast<double>(times.size()));
}

std::vector<TimingRow> timing_table(std::span<const BenchRecord> records, double cap_seconds) {
  std::map<std::pair<std::string, std::string>, std::vector<const BenchRecord*>> groups;
  for (const auto& r : records) groups[{group_of(r.problem_id), r.method}].push_back(&r);
  std::vector<TimingRow> rows;
  for (const auto& [key, recs] : groups) {
    std::vector<double> times;
    int solved = 0;
    for (const auto* r : recs) {
      const bool ok = r->solved();
      solved += ok;
      times.push_back(ok ? std::max(r->wall_seconds, 1e-9) : cap_seconds);
    }
    rows.push_back({key.first, key.second, geometric_mean(times), solved,
                    static_cast<int>(recs.size())});
  }
  return rows;
}

PerformanceProfile performance_profile(std::span<const BenchRecord> records) {
  std::set<std::string> method_set;
  std::map<std::string, std::map<std::string, double>> times;  // problem → method → time
  for (const auto& r : records) {
    method_set.insert(r.method);
    auto& slot = times[r.problem_id];
    const double t = r.solved() ? std::max(r.wall_seconds, 1e-12) : kInf;
    auto [it, inserted] = slot.emplace(r.method, t);
    if (!inserted) it->second = std::min(it->second, t);
  }

  PerformanceProfile profile;
  profile.methods.assign(method_set.begin(), method_set.end());
  const auto n_methods = profile.methods.size();
  const auto n_problems = times.size();
  if (n_problems == 0) return profile;

  // ratios[s] holds r_{p,s} for every problem p.
  std::vector<std::vector<double>> ratios(n_methods);
  std::set<double> taus;
  for (const auto& [problem, by_method] : times) {
    double best = kInf;
    for (const auto& [m, t] : by_method) best = std::min(best, t);
    for (std::size_t s = 0; s < n_methods; ++s) {
      auto it = by_method.find(profile.methods[s]);
      double r = kInf;
      if (it != by_method.end() && std::isfinite(it->second) && std::isfinite(best)) {
        r = it->second / best;
      }
      ratios[s].push_back(r);
      if (std::isfinite(r)) taus.insert(r);
    }
  }
  taus.insert(1.0);
  for (double tau : taus) {
    ProfilePoint point{tau, std::vector<double>(n_methods)};
    for (std::size_t s = 0; s < n_methods; ++s) {
      const auto hits = std::count_if(ratios[s].begin(), ratios[s].end(),
                                      [tau](double r) { return r <= tau; });
      point.rho[s] = static_cast<double>(hits) / static_cast<double>(n_problems);
    }
    profile.points.push_back(std::move(point));
  }
  return profile;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.problem_id << ',' << r.method << ',' << format_real(r.wall_seconds) << ','
        << r.iterations << ',' << r.status << ',' << format_real(r.objective) << '\n';
  }
}

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("bench csv: missing or unexpected header");
  }
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 6) throw std::invalid_argument("bench csv: expected 6 columns: " + line);
    BenchRecord r;
    r.problem_id = cells[0];
    r.method = cells[1];
    r.wall_seconds = parse_real(cells[2]);
    r.iterations = std::stoi(cells[3]);
    r.status = cells[4];
    r.objective = parse_real(cells[5]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string bench_to_json(std::span<const BenchRecord> records, int indent) {
  auto real = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : records) {
    doc.push_back({{"problem_id", r.problem_id},
                   {"method", r.method},
                   {"wall_seconds", real(r.wall_seconds)},
                   {"iterations", r.iterations},
                   {"status", r.status},
                   {"objective", real(r.objective)}});
  }
  return doc.dump(indent);
}

std::vector<BenchRecord> bench_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("bench json: expected an array");
  auto real = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  std::vector<BenchRecord> records;
  for (const auto& row : doc) {
    records.push_back({row.at("problem_id").get<std::string>(), row.at("method").get<std::string>(),
                       real(row.at("wall_seconds")), row.at("iterations").get<int>(),
                       row.at("status").get<std::string>(), real(row.at("objective"))});
  }
  return records;
}

void write_profile_csv(std::ostream& out, const PerformanceProfile& profile) {
  out << "tau";
  for (const auto& m : profile.methods) out << ',' << m;
  out << '\n';
  for (const auto& p : profile.points) {
    out << format_real(p.tau);
    for (double rho : p.rho) out << ',' << format_real(rho);
    out << '\n';
  }
}

std::string profile_to_json(const PerformanceProfile& profile, int indent) {
  nlohmann::json doc;
  doc["methods"] = profile.methods;
  auto& points = doc["points"] = nlohmann::json::array();
  for (const auto& p : profile.points) {
    nlohmann::json row{{"tau", p.tau}};
    for (std::size_t s = 0; s < profile.methods.size(); ++s) row[profile.methods[s]] = p.rho[s];
    points.push_back(std::move(row));
  }
  return doc.dump(indent);
}

}  // namespace conrap
