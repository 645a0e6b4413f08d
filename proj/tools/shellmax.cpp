#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "shellmax/errors.hpp"
#include "shellmax/geometry.hpp"
#include "shellmax/runner.hpp"
#include "shellmax/scalar.hpp"

using namespace shellmax;

namespace {

enum Exit { kOk = 0, kConfig = 2, kResource = 3, kInvariant = 4 };

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--group", c.group, "group specification");
  sub->add_option("--seed", c.seed, "sampler seed");
  sub->add_option("--out", c.out, "output file, or directory for 'suite'");
  sub->add_option("--budget", c.budget, "enumeration budget in elements");
}

int run_median(RunConfig c, const std::string& xs, const std::string& ys, const std::string& zs) {
  c.suite = "median";
  const auto model = parse_spec(c.group);
  const Element x = parse_word(model, xs), y = parse_word(model, ys), z = parse_word(model, zs);
  const int radius = static_cast<int>(std::max({x.length(), y.length(), z.length(), distance(model, x, y),
                                                distance(model, x, z), distance(model, y, z)}));
  const auto ball = enumerate(model, radius, c.budget);
  nlohmann::json cand = nlohmann::json::array();
  for (const auto& m : median_candidates(ball, x, y, z)) cand.push_back(format_word(model, m));
  nlohmann::json out{{"x", xs}, {"y", ys}, {"z", zs}, {"candidates", cand}, {"singleton", cand.size() == 1},
                     {"config", c.artifact_json()}, {"version", version_string()}};
  if (c.out.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
    if (!f) throw std::invalid_argument("cannot open '" + c.out + "' for writing");
    f << out.dump(2) << "\n";
  }
  return kOk;
}

void print_summary(const SuiteReport& rep) {
  std::cerr << rep.suite << ": " << rep.reports.size() << " cells, max ratio " << format_double(rep.max_ratio);
  if (!rep.argmax_cell.empty()) std::cerr << " at " << rep.argmax_cell;
  std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sphere averages and maximal functions on finitely generated groups"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  RunConfig c;
  std::string config_file, mx = "1", my = "1", mz = "1";

  auto* growth = app.add_subcommand("growth", "sphere sizes and growth fit");
  add_common(growth, c);
  growth->add_option("--radius", c.radius, "enumeration radius");

  auto* norm = app.add_subcommand("norm", "truncated operator norm of a sphere or ball average");
  add_common(norm, c);
  norm->add_option("--radius-op", c.radius_op, "kernel radius");
  norm->add_option("--truncation", c.truncation, "compression radius");
  norm->add_flag("--ball", c.ball, "ball average instead of sphere average");

  auto* median = app.add_subcommand("median", "median candidates of three elements");
  add_common(median, c);
  median->add_option("--x", mx, "word")->required();
  median->add_option("--y", my, "word")->required();
  median->add_option("--z", mz, "word")->required();

  auto* coarse = app.add_subcommand("coarse-median", "coarse-median counting scan");
  add_common(coarse, c);
  coarse->add_option("--rmax", c.rmax, "largest sphere radius");
  coarse->add_option("--d2", c.d2, "polynomial correction exponent");

  auto* corr = app.add_subcommand("correlation", "correlation counts of seeded subset pairs");
  add_common(corr, c);
  corr->add_option("--r", c.r, "largest radius");
  corr->add_option("--b", c.b, "polynomial exponent");
  corr->add_option("--pairs", c.pairs, "number of pairs");

  auto* maximal = app.add_subcommand("maximal", "exact maximal function of a finitely supported function");
  add_common(maximal, c);
  maximal->add_option("--f", c.f, "function file, lines '<word> <rational>'")->required();
  maximal->add_option("--eta-floor", c.eta_floor, "level floor as a rational");
  maximal->add_option("--window", c.window, "window radius when no floor is given");
  maximal->add_option("--csv", c.csv, "profile CSV");

  auto* dist = app.add_subcommand("dist-check", "distributional inequality over a dyadic corpus");
  add_common(dist, c);
  dist->add_option("--r", c.r, "largest radius");
  dist->add_option("--b", c.b, "polynomial exponent");
  dist->add_option("--corpus-seed", c.corpus_seed, "corpus seed");
  dist->add_option("--corpus-size", c.corpus_size, "corpus size");

  auto* suite = app.add_subcommand("suite", "run a configured suite");
  add_common(suite, c);
  suite->add_option("--config", config_file, "JSON config file");
  suite->add_option("--suite", c.suite, "suite name");
  suite->add_option("--radius", c.radius, "growth radius and cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (median->parsed()) return run_median(c, mx, my, mz);

    RunConfig config = c;
    if (suite->parsed()) {
      if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw std::invalid_argument("cannot read config '" + config_file + "'");
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw std::invalid_argument("config '" + config_file + "': " + e.what());
        }
        config = RunConfig::from_json(j);
        // Explicit flags override the file.
        for (const auto* opt : suite->get_options()) {
          if (opt->count() == 0) continue;
          const std::string name = opt->get_name(false, true);
          if (name == "--group") config.group = c.group;
          else if (name == "--seed") config.seed = c.seed;
          else if (name == "--out") config.out = c.out;
          else if (name == "--budget") config.budget = c.budget;
          else if (name == "--suite") config.suite = c.suite;
          else if (name == "--radius") config.radius = c.radius;
        }
      }
    } else {
      config.suite = app.get_subcommands().front()->get_name();
    }
    print_summary(run_suite(config));
    return kOk;
  } catch (const ResourceError& e) {
    std::cerr << "resource budget: " << e.what() << " (required radius " << e.radius() << ")\n";
    return kResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariant;
  }
}
