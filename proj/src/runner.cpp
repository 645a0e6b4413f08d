#include "shellmax/runner.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "shellmax/errors.hpp"
#include "shellmax/geometry.hpp"
#include "shellmax/growth.hpp"
#include "shellmax/harmonic.hpp"
#include "shellmax/maximal.hpp"
#include "shellmax/prng.hpp"

namespace shellmax {

using nlohmann::json;

std::string version_string() { return std::string("shellmax ") + SHELLMAX_VERSION; }

json RunConfig::to_json() const {
  return json{{"group", group},         {"suite", suite},
              {"radius", radius},       {"radius_op", radius_op},
              {"truncation", truncation}, {"ball", ball},
              {"rmax", rmax},           {"d2", d2},
              {"seed", seed},           {"corpus_seed", corpus_seed},
              {"corpus_size", corpus_size}, {"r", r},
              {"b", b},                 {"pairs", pairs},
              {"f", f},                 {"eta_floor", eta_floor},
              {"window", window},       {"out", out},
              {"csv", csv},             {"budget", budget}};
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a flat JSON object");
  RunConfig c;
  const json defaults = c.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    if (value.is_object() || value.is_array()) throw std::invalid_argument("config key '" + key + "' must be a scalar");
  }
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const json::exception&) {
      throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type");
    }
  };
  get("group", c.group);
  get("suite", c.suite);
  get("radius", c.radius);
  get("radius_op", c.radius_op);
  get("truncation", c.truncation);
  get("ball", c.ball);
  get("rmax", c.rmax);
  get("d2", c.d2);
  get("seed", c.seed);
  get("corpus_seed", c.corpus_seed);
  get("corpus_size", c.corpus_size);
  get("r", c.r);
  get("b", c.b);
  get("pairs", c.pairs);
  get("f", c.f);
  get("eta_floor", c.eta_floor);
  get("window", c.window);
  get("out", c.out);
  get("csv", c.csv);
  get("budget", c.budget);
  return c;
}

json SuiteReport::summary() const {
  return json{{"suite", suite},
              {"config", json::parse(config)},
              {"version", version},
              {"cells", reports.size()},
              {"max_ratio", max_ratio},
              {"argmax_cell", argmax_cell},
              {"artifacts", artifacts}};
}

namespace {

// Output target: a file, or stdout when the path is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw std::invalid_argument("cannot open '" + path + "' for writing");
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string cell_name(const InequalityReport& rep) {
  std::string s = rep.id;
  for (const auto& [k, v] : rep.parameters) s += " " + k + "=" + format_double(v);
  return s;
}

// Re-raises a module error with the coordinates of the cell that raised it,
// keeping its category (and therefore the exit code).
template <class F>
auto in_cell(const std::string& cell, F&& fn) {
  try {
    return fn();
  } catch (const ResourceError& e) {
    throw ResourceError(e.radius(), cell + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(cell + ": " + e.what());
  } catch (const PolynomialGrowthError& e) {
    throw PolynomialGrowthError(cell + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(cell + ": " + e.what());
  }
}

// Growth rows compare against a fit, not a bound, and stay out of the maximum.
void record(SuiteReport& report, InequalityReport rep) {
  if (rep.id != "growth" && (report.argmax_cell.empty() || rep.ratio > report.max_ratio)) {
    report.max_ratio = rep.ratio;
    report.argmax_cell = cell_name(rep);
  }
  report.reports.push_back(std::move(rep));
}

void csv_preamble(std::ostream& os, const RunConfig& config) {
  os << "# " << version_string() << "\n# config: " << config.serialize() << "\n";
}

void write_json(std::ostream& os, json body, const RunConfig& config) {
  body["config"] = config.artifact_json();
  body["version"] = version_string();
  os << body.dump(2) << "\n";
  os.flush();
}

void require_positive(int value, const char* name) {
  if (value < 0) throw std::invalid_argument(std::string(name) + " must be >= 0");
}

// ---- growth

void run_growth(const RunConfig& config, const GroupModel& model, SuiteReport& report, std::ostream& os) {
  require_positive(config.radius, "radius");
  const auto ball = in_cell("growth radius=" + std::to_string(config.radius),
                            [&] { return enumerate(model, config.radius, config.budget); });
  const auto sizes = ball.sphere_sizes();
  const auto fit = in_cell("growth fit", [&] { return fit_growth(sizes); });

  csv_preamble(os, config);
  os << "# fit: d=" << fit.d << " q=" << format_double(fit.q) << " c_gr=" << format_double(fit.c_gr);
  if (fit.recurrence) {
    os << " recurrence=";
    for (std::size_t k = 0; k < fit.recurrence->coefficients.size(); ++k) {
      os << (k ? ";" : "") << fit.recurrence->coefficients[k];
    }
    os << " start=" << fit.recurrence->start;
  }
  os << " polynomial_growth=" << (fit.polynomial_growth ? "true" : "false")
     << " nonrational_evidence=" << (fit.nonrational_evidence ? "true" : "false") << "\n";
  os << "n,sphere_size,ball_size,fitted_prediction,ratio\n";
  for (int n = 0; n <= config.radius; ++n) {
    InequalityReport rep;
    rep.id = "growth";
    rep.parameters = {{"n", n}};
    rep.lhs = static_cast<double>(sizes[static_cast<std::size_t>(n)]);
    rep.rhs = fit.predict(n);
    rep.ratio = safe_ratio(rep.lhs, rep.rhs);
    os << n << "," << sizes[static_cast<std::size_t>(n)] << "," << ball.ball_size(n) << ","
       << format_double(rep.rhs) << "," << format_double(rep.ratio) << "\n";
    os.flush();
    record(report, std::move(rep));
  }
}

// ---- norm

json norm_record(const LayeredBall& ball, const RunConfig& config, int r, int truncation, SuiteReport& report) {
  const std::string cell = std::string(config.ball ? "norm ball" : "norm sphere") + " r=" + std::to_string(r) +
                           " R=" + std::to_string(truncation);
  const auto est = in_cell(cell, [&] {
    const auto measure = config.ball ? ball_measure<double>(ball, r) : sphere_measure<double>(ball, r);
    return operator_norm_truncated(ball, measure, truncation);
  });
  json rec{{"r", r},
           {"R", truncation},
           {"kernel", config.ball ? "ball" : "sphere"},
           {"norm", est.norm},
           {"converged", est.converged},
           {"iters", est.iterations},
           {"reference", nullptr}};
  InequalityReport rep;
  rep.id = "norm";
  rep.parameters = {{"r", r}, {"R", truncation}};
  rep.lhs = est.norm;
  if (const auto* free = std::get_if<FreeGroup>(&ball.model().variant()); free && !config.ball && free->rank >= 2) {
    rep.rhs = cohen_pytlik_norm(free->rank, r);
    rec["reference"] = rep.rhs;
  }
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0;
  record(report, std::move(rep));
  return rec;
}

void run_norm(const RunConfig& config, const GroupModel& model, SuiteReport& report, std::ostream& os) {
  require_positive(config.radius_op, "radius-op");
  require_positive(config.truncation, "truncation");
  const int radius = std::max(config.truncation, config.radius_op);
  const auto ball = in_cell("norm enumerate radius=" + std::to_string(radius),
                            [&] { return enumerate(model, radius, config.budget); });
  write_json(os, norm_record(ball, config, config.radius_op, config.truncation, report), config);
}

// ---- coarse median

void run_coarse_median(const RunConfig& config, const GroupModel& model, SuiteReport& report, std::ostream& os,
                       int rmax) {
  require_positive(rmax, "rmax");
  in_cell("coarse-median", [&] {
    require_exponential_growth(model);
    return 0;
  });
  const auto ball = in_cell("coarse-median enumerate radius=" + std::to_string(rmax),
                            [&] { return enumerate(model, rmax, config.budget); });
  const auto scan = in_cell("coarse-median rmax=" + std::to_string(rmax),
                            [&] { return coarse_median_scan(ball, rmax, SamplerConfig{config.seed, -1}, config.d2); });
  csv_preamble(os, config);
  os << "# c0: " << format_double(scan.c0) << "\n";
  os << "j,i,r,m,sizeE,sizeF,lhs,rhs,ratio,family\n";
  for (const auto& rep : scan.reports) {
    os << rep.parameter("j") << "," << rep.parameter("i") << "," << rep.parameter("r") << "," << rep.parameter("m")
       << "," << rep.size_a << "," << rep.size_b << "," << format_double(rep.lhs) << "," << format_double(rep.rhs)
       << "," << format_double(rep.ratio) << "," << rep.id.substr(rep.id.find('/') + 1) << "\n";
    os.flush();
    record(report, rep);
  }
}

// ---- correlation

constexpr int kCorrelationSupport = 3;

void run_correlation(const RunConfig& config, const GroupModel& model, SuiteReport& report, std::ostream& os,
                     int r_max) {
  if (r_max < 1) throw std::invalid_argument("r must be >= 1");
  require_positive(config.pairs, "pairs");
  const int radius = std::max(r_max, kCorrelationSupport);
  const auto ball = in_cell("correlation enumerate radius=" + std::to_string(radius),
                            [&] { return enumerate(model, radius, config.budget); });
  const auto pool = ball.closed_ball(kCorrelationSupport);
  Lcg rng(config.seed);
  csv_preamble(os, config);
  os << "pair,r,sizeA,sizeB,lhs,rhs,ratio\n";
  for (int p = 0; p < config.pairs; ++p) {
    std::vector<Element> a, b;
    for (auto* set : {&a, &b}) {
      const auto k = std::min<std::size_t>(pool.size(), 1 + rng.below(16));
      for (auto idx : sample_indices(rng, pool.size(), k)) set->push_back(pool[idx]);
    }
    for (int r = 1; r <= r_max; ++r) {
      auto rep = in_cell("correlation pair=" + std::to_string(p) + " r=" + std::to_string(r),
                         [&] { return correlation_rd_ratio(ball, a, b, r, config.b); });
      rep.seed = config.seed;
      rep.parameters.emplace_back("pair", p);
      os << p << "," << r << "," << a.size() << "," << b.size() << "," << format_double(rep.lhs) << ","
         << format_double(rep.rhs) << "," << format_double(rep.ratio) << "\n";
      os.flush();
      record(report, std::move(rep));
    }
  }
}

// ---- maximal

using QFunction = FiniteFunction<mpq_class>;

QFunction read_function_file(const GroupModel& model, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read function file '" + path + "'");
  std::vector<QFunction::Entry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string word, value, extra;
    if (!(fields >> word)) continue;
    if (!(fields >> value) || (fields >> extra)) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected '<word> <rational>'");
    }
    try {
      entries.emplace_back(parse_word(model, word), parse_rational(value));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return QFunction(std::move(entries));
}

// Smallest enumeration that certifies `eta_floor` for a function of mass l1.
LayeredBall ball_for_floor(const GroupModel& model, const mpq_class& l1, const mpq_class& eta_floor,
                           std::size_t budget) {
  for (int radius = 2;; radius += 2) {
    auto ball = enumerate(model, radius, budget);
    if (l1 < eta_floor * mpq_class(static_cast<long>(ball.ball_size(radius)))) return ball;
  }
}

json maximal_record(const LayeredBall& ball, const QFunction& f, const mpq_class& eta_floor, const std::string& label,
                    SuiteReport& report, std::ostream* profile_csv) {
  const auto profile = in_cell("maximal " + label, [&] { return maximal_function(ball, f, eta_floor); });
  const auto weak = weak_type_ratio(profile);
  InequalityReport rep;
  rep.id = "maximal/" + label;
  rep.parameters = {{"window", profile.window_radius}, {"eta_floor", eta_floor.get_d()}};
  rep.lhs = weak.ratio;
  rep.rhs = 1;
  rep.ratio = weak.ratio;
  rep.size_a = f.support_size();
  record(report, std::move(rep));

  if (profile_csv) {
    *profile_csv << "x,mf,mf_exact\n";
    for (const auto& [x, v] : profile.values) {
      *profile_csv << format_word(ball.model(), x) << "," << format_double(v.get_d()) << "," << v.get_str() << "\n";
    }
    profile_csv->flush();
  }
  return json{{"function", label},
              {"support_size", f.support_size()},
              {"window", profile.window_radius},
              {"n_max", profile.n_max},
              {"window_points", profile.values.size()},
              {"eta_floor", eta_floor.get_d()},
              {"eta_floor_exact", eta_floor.get_str()},
              {"weak_ratio", weak.ratio},
              {"argmax_eta", weak.argmax_eta.get_d()},
              {"argmax_eta_exact", weak.argmax_eta.get_str()}};
}

void run_maximal(const RunConfig& config, const GroupModel& model, SuiteReport& report, std::ostream& os) {
  if (config.f.empty()) throw std::invalid_argument("maximal needs a function file (--f)");
  const auto f = read_function_file(model, config.f);
  if (!f.is_nonnegative()) throw std::invalid_argument("maximal: function values must be nonnegative");
  LayeredBall ball = [&] {
    if (!config.eta_floor.empty()) {
      const mpq_class eta = parse_rational(config.eta_floor);
      if (eta <= 0) throw std::invalid_argument("eta-floor must be positive");
      return in_cell("maximal enumerate", [&] { return ball_for_floor(model, f.l1(), eta, config.budget); });
    }
    require_positive(config.window, "window");
    return in_cell("maximal enumerate radius=" + std::to_string(config.window + 1),
                   [&] { return enumerate(model, config.window + 1, config.budget); });
  }();
  const mpq_class eta = config.eta_floor.empty() ? (f.empty() ? mpq_class(1) : eta_floor_for_window(ball, f, config.window))
                                                 : parse_rational(config.eta_floor);
  std::optional<Sink> csv;
  std::ostream* csv_os = nullptr;
  if (!config.csv.empty()) {
    csv.emplace(config.csv);
    csv_os = &csv->os();
    csv_preamble(*csv_os, config);
  }
  write_json(os, maximal_record(ball, f, eta, config.f, report, csv_os), config);
}

void run_maximal_family(const RunConfig& config, const GroupModel& model, SuiteReport& report, std::ostream& os,
                        int k_max) {
  json records = json::array();
  for (int k = 0; k <= k_max; ++k) {
    const int window = k + 2;
    const auto ball = in_cell("maximal enumerate radius=" + std::to_string(window + 1),
                              [&] { return enumerate(model, window + 1, config.budget); });
    const auto f = QFunction::indicator(ball.closed_ball(k));
    const std::string label = k == 0 ? "delta_e" : "ball_" + std::to_string(k);
    records.push_back(maximal_record(ball, f, eta_floor_for_window(ball, f, window), label, report, nullptr));
  }
  write_json(os, json{{"records", records}}, config);
}

// ---- dist-check

constexpr int kCorpusSupport = 4;

void run_dist_check(const RunConfig& config, const GroupModel& model, SuiteReport& report, std::ostream& os,
                    int r_max) {
  if (r_max < 1) throw std::invalid_argument("r must be >= 1");
  require_positive(config.corpus_size, "corpus-size");
  const int radius = std::max(r_max, kCorpusSupport);
  const auto ball = in_cell("dist-check enumerate radius=" + std::to_string(radius),
                            [&] { return enumerate(model, radius, config.budget); });
  const auto corpus = dyadic_corpus(ball, config.corpus_seed, config.corpus_size, kCorpusSupport);
  csv_preamble(os, config);
  os << "function,r,eta,lhs,rhs,ratio\n";
  for (int r = 1; r <= r_max; ++r) {
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      auto rep = in_cell("dist-check function=" + std::to_string(k) + " r=" + std::to_string(r),
                         [&] { return distributional_sweep(ball, corpus[k], r, config.b); });
      rep.seed = config.corpus_seed;
      rep.parameters.emplace_back("function", static_cast<double>(k));
      os << k << "," << r << "," << format_double(rep.parameter("eta")) << "," << format_double(rep.lhs) << ","
         << format_double(rep.rhs) << "," << format_double(rep.ratio) << "\n";
      os.flush();
      record(report, std::move(rep));
    }
  }
}

std::string join(const std::filesystem::path& dir, const char* name) { return (dir / name).string(); }

}  // namespace

SuiteReport run_suite(const RunConfig& config) {
  SuiteReport report;
  report.suite = config.suite;
  report.config = config.serialize();
  report.version = version_string();
  const GroupModel model = parse_spec(config.group);

  auto single = [&](auto&& body) {
    Sink sink(config.out);
    body(sink.os());
    if (!config.out.empty()) report.artifacts.push_back(config.out);
  };

  const std::string& s = config.suite;
  if (s == "growth") {
    single([&](std::ostream& os) { run_growth(config, model, report, os); });
  } else if (s == "norm") {
    single([&](std::ostream& os) { run_norm(config, model, report, os); });
  } else if (s == "coarse-median") {
    single([&](std::ostream& os) { run_coarse_median(config, model, report, os, config.rmax); });
  } else if (s == "correlation") {
    single([&](std::ostream& os) { run_correlation(config, model, report, os, config.r); });
  } else if (s == "maximal") {
    single([&](std::ostream& os) { run_maximal(config, model, report, os); });
  } else if (s == "dist-check") {
    single([&](std::ostream& os) { run_dist_check(config, model, report, os, config.r); });
  } else if (s == "all") {
    const std::filesystem::path dir = config.out.empty() ? "." : config.out;
    std::filesystem::create_directories(dir);
    const int cap = config.radius;
    auto artifact = [&](const char* name, auto&& body) {
      const std::string path = join(dir, name);
      Sink sink(path);
      body(sink.os());
      report.artifacts.push_back(name);
    };
    artifact("growth.csv", [&](std::ostream& os) { run_growth(config, model, report, os); });
    artifact("norm.json", [&](std::ostream& os) {
      const int truncation = std::min(config.truncation, cap);
      const auto ball = in_cell("norm enumerate radius=" + std::to_string(truncation),
                                [&] { return enumerate(model, truncation, config.budget); });
      json records = json::array();
      for (int r = 1; r <= std::min(3, truncation); ++r) records.push_back(norm_record(ball, config, r, truncation, report));
      write_json(os, json{{"records", records}}, config);
    });
    if (has_exponential_growth(model)) {
      artifact("coarse_median.csv",
               [&](std::ostream& os) { run_coarse_median(config, model, report, os, std::min(config.rmax, cap)); });
    }
    artifact("correlation.csv",
             [&](std::ostream& os) { run_correlation(config, model, report, os, std::max(1, std::min(config.r, cap))); });
    artifact("maximal.json", [&](std::ostream& os) { run_maximal_family(config, model, report, os, 3); });
    artifact("dist.csv",
             [&](std::ostream& os) { run_dist_check(config, model, report, os, std::max(1, std::min(config.r, cap))); });
    Sink summary(join(dir, "suite.json"));
    summary.os() << report.summary().dump(2) << "\n";
  } else {
    throw std::invalid_argument("unknown suite '" + s + "'");
  }
  return report;
}

}  // namespace shellmax
