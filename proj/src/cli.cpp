#include "rankopt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "rankopt/bestx.hpp"
#include "rankopt/fixed_span.hpp"
#include "rankopt/io.hpp"
#include "rankopt/multi_purchase.hpp"
#include "rankopt/oracle.hpp"
#include "rankopt/sim.hpp"
#include "rankopt/special.hpp"

namespace rankopt {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Options {
  std::string instance;
  std::string config;
  std::string out;
  std::string corpus;
  std::string format = "csv";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t span = 0;
  std::size_t capacity = 0;
  std::size_t max_len = 0;
  double alpha = 0.0;
  bool fill = false;
  bool general = false;

  // Which options were given on the command line.
  bool has_seed = false, has_threads = false, has_span = false, has_capacity = false, has_max_len = false;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string cell(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_null()) return "";
  if (v.is_array()) {
    const bool nested = !v.empty() && v.front().is_array();
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) joined += nested ? ";" : " ";
      joined += cell(v[i]);
    }
    return joined;
  }
  return v.dump();
}

std::string to_csv(const ojson& doc) {
  const ojson rows = doc.is_array() ? doc : ojson::array({doc});
  std::ostringstream os;
  if (rows.empty()) return {};
  std::vector<std::string> header;
  for (const auto& [key, value] : rows.front().items()) header.push_back(key);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_escape(header[i]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      os << (i ? "," : "") << (row.contains(header[i]) ? csv_escape(cell(row[header[i]])) : std::string());
    }
    os << '\n';
  }
  return os.str();
}

std::string render(const Options& opt, const ojson& doc) {
  return opt.format == "json" ? doc.dump(2) + "\n" : to_csv(doc);
}

void emit(const Options& opt, const ojson& doc, std::ostream& out) {
  const auto text = render(opt, doc);
  if (opt.out.empty()) {
    out << text;
  } else {
    write_text(opt.out, text);
  }
}

ojson ids(const Ranking& ranking, const Catalog& catalog) { return ranking_ids(ranking, catalog); }

ojson ids(const Ranking& ranking, const GeneralCatalog& catalog) {
  ojson out = ojson::array();
  for (std::size_t i : ranking) out.push_back(catalog[i].id);
  return out;
}

InstanceData require_instance(const Options& opt) {
  if (opt.instance.empty()) throw CLI::RequiredError("--instance");
  return load_instance(opt.instance);
}

std::size_t default_capacity(const Options& opt, const InstanceData& data) {
  if (opt.has_capacity) return opt.capacity;
  if (data.span) return make_span_distribution(*data.span).capacity();
  return data.products.size();
}

void cmd_solve_fixed(const Options& opt, std::ostream& out) {
  const auto data = require_instance(opt);
  if (!opt.has_span) throw CLI::RequiredError("--span");
  const auto catalog = to_catalog(data);
  const auto sol = solve_fixed_span(catalog, opt.span);
  emit(opt, ojson{{"span", opt.span}, {"value", sol.value}, {"ranking", ids(sol.ranking, catalog)}}, out);
}

void cmd_assortopt(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto data = require_instance(opt);
  const auto catalog = to_catalog(data);
  const auto sol = assort_opt(catalog, default_capacity(opt, data));
  if (sol.clamped) {
    err << ojson{{"warning", "capacity exceeds the catalog size; clamped"}, {"capacity", sol.capacity()}}.dump()
        << '\n';
  }
  ojson rows = ojson::array();
  for (std::size_t x = 1; x <= sol.capacity(); ++x) {
    rows.push_back({{"span", x}, {"value", sol.value(x)}, {"ranking", ids(sol.at(x).ranking, catalog)}});
  }
  emit(opt, rows, out);
}

void cmd_bestx(const Options& opt, std::ostream& out) {
  const auto data = require_instance(opt);
  const auto catalog = to_catalog(data);
  const auto dist = to_distribution(data);
  const auto res = best_x(catalog, dist, opt.fill);
  emit(opt,
       ojson{{"chosen_x", res.chosen_x},
             {"ranking", ids(res.ranking, catalog)},
             {"lower_bound", res.lower_bound},
             {"expected_revenue", res.expected_revenue},
             {"clairvoyant", res.clairvoyant},
             {"ratio", res.ratio},
             {"filled", res.filled}},
       out);
}

void cmd_geo(const Options& opt, std::ostream& out) {
  const auto data = require_instance(opt);
  const auto catalog = to_catalog(data);
  const std::size_t m = opt.has_capacity ? opt.capacity : catalog.size();
  const auto res = geometric_rank(catalog, opt.alpha, m);
  emit(opt,
       ojson{{"alpha", opt.alpha},
             {"M", std::min(m, catalog.size())},
             {"value", res.value},
             {"ranking", ids(res.ranking, catalog)},
             {"score_ties", res.score_ties}},
       out);
}

void cmd_prefix(const Options& opt, std::ostream& out) {
  const auto data = require_instance(opt);
  const auto catalog = to_catalog(data);
  const std::size_t m = default_capacity(opt, data);
  const auto res = prefix_condition(catalog, m);
  ojson witness = ojson::array();
  if (res.witness) witness = {catalog[res.witness->first].id, catalog[res.witness->second].id};
  emit(opt,
       ojson{{"M", std::min(m, catalog.size())},
             {"holds", res.holds},
             {"indeterminate", res.indeterminate},
             {"witness", witness},
             {"top", ids(res.top, catalog)}},
       out);
}

void cmd_multi(const Options& opt, std::ostream& out) {
  const auto data = require_instance(opt);
  const auto catalog = to_general(data);
  if (opt.has_span) {
    const auto sol = solve_general_fixed_span(catalog, opt.span);
    emit(opt, ojson{{"span", opt.span}, {"value", sol.value}, {"ranking", ids(sol.ranking, catalog)}}, out);
    return;
  }
  const auto dist = to_distribution(data);
  const auto res = best_x_general(catalog, dist);
  emit(opt,
       ojson{{"chosen_x", res.chosen_x},
             {"ranking", ids(res.ranking, catalog)},
             {"lower_bound", res.lower_bound},
             {"expected_revenue", res.expected_revenue},
             {"clairvoyant", res.clairvoyant},
             {"ratio", res.ratio}},
       out);
}

void cmd_oracle(const Options& opt, std::ostream& out) {
  const auto data = require_instance(opt);
  auto limit = [&](std::size_t natural, std::size_t n) {
    return opt.has_max_len ? opt.max_len : std::min(natural, n);
  };
  ojson doc;
  if (opt.general) {
    if (!opt.has_span) throw CLI::RequiredError("--span");
    const auto catalog = to_general(data);
    const auto res = brute_force_general(catalog, opt.span, limit(opt.span, catalog.size()));
    ojson optima = ojson::array();
    for (const auto& r : res.optima) optima.push_back(ids(r, catalog));
    doc = {{"value", res.value}, {"optima", optima}, {"enumerated", res.enumerated}};
  } else {
    const auto catalog = to_catalog(data);
    OracleResult res;
    if (opt.has_span) {
      res = brute_force_optimal(catalog, opt.span, limit(opt.span, catalog.size()));
    } else {
      const auto dist = to_distribution(data);
      res = brute_force_optimal(catalog, dist, limit(dist.capacity(), catalog.size()));
    }
    ojson optima = ojson::array();
    for (const auto& r : res.optima) optima.push_back(ids(r, catalog));
    doc = {{"value", res.value}, {"optima", optima}, {"enumerated", res.enumerated}};
  }
  emit(opt, doc, out);
}

void cmd_audit(const Options& opt, std::ostream& out) {
  if (opt.corpus.empty()) throw CLI::RequiredError("--corpus");
  if (!fs::is_directory(opt.corpus)) throw IoError(fmt::format("'{}' is not a directory", opt.corpus));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.corpus)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<AuditInstance> instances;
  instances.reserve(files.size());
  for (const auto& f : files) {
    const auto data = load_instance(f);
    instances.push_back({f.stem().string(), to_catalog(data), to_distribution(data)});
  }
  const auto report = ratio_audit(instances, 20, opt.threads);

  ojson rows = ojson::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"instance_id", r.id},
                    {"ratio_bestx", r.ratio_bestx},
                    {"ratio_filled", r.ratio_filled},
                    {"clairvoyant", r.clairvoyant}});
  }
  if (opt.out.empty()) {
    out << render(opt, rows);
    return;
  }
  write_text(opt.out, render(opt, rows));
  out << render(opt, ojson{{"instances", report.rows.size()},
                           {"min_bestx", report.min_bestx},
                           {"mean_bestx", report.mean_bestx},
                           {"min_filled", report.min_filled},
                           {"mean_filled", report.mean_filled},
                           {"below_inverse_e", report.below_inverse_e}});
}

nlohmann::json require_config(const Options& opt) {
  if (opt.config.empty()) throw CLI::RequiredError("--config");
  if (opt.out.empty()) throw CLI::RequiredError("--out");
  return read_json(opt.config);
}

void cmd_bench_offline(const Options& opt, std::ostream& out) {
  auto config = parse_offline_config(require_config(opt));
  if (opt.has_seed) config.seed = opt.seed;
  if (opt.has_threads) config.threads = opt.threads;
  const auto report = run_offline_benchmark(config);
  write_offline_report(report, opt.out);
  ojson rows = ojson::array();
  for (const auto& s : report.summary) {
    rows.push_back({{"heuristic", heuristic_name(s.heuristic)}, {"min", s.min}, {"mean", s.mean}, {"max", s.max}});
  }
  out << render(opt, rows);
}

void cmd_bench_bandit(const Options& opt, std::ostream& out) {
  auto config = parse_bandit_config(require_config(opt));
  if (opt.has_seed) config.seed = opt.seed;
  if (opt.has_threads) config.threads = opt.threads;
  const auto report = run_bandit_experiment(config);
  write_bandit_report(report, opt.out);
  const auto& last = report.rounds.back();
  out << render(opt, ojson{{"rounds", last.round},
                           {"mean", last.mean},
                           {"ub", last.ub},
                           {"lb", last.lb},
                           {"scaled_regret", last.scaled_regret}});
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message, int code) {
  err << ojson{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Product ranking under random attention spans", "rankopt"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--instance", opt.instance, "instance JSON file");
  app.add_option("--config", opt.config, "experiment config JSON file");
  app.add_option("--out", opt.out, "output file or directory");
  auto* seed = app.add_option("--seed", opt.seed, "override the config seed");
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  auto* threads = app.add_option("--threads", opt.threads, "worker threads for harness commands")
                      ->check(CLI::Range(1u, 1024u));

  std::map<std::string, std::function<void()>> actions;
  auto add = [&](const std::string& name, const std::string& help, std::function<void()> fn) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    actions[name] = std::move(fn);
    return sub;
  };
  auto span_flag = [&](CLI::App* sub) { return sub->add_option("--span", opt.span, "fixed attention span"); };
  auto capacity_flag = [&](CLI::App* sub) {
    return sub->add_option("-M,--capacity", opt.capacity, "number of positions");
  };

  CLI::Option* span_opts[3]{};
  CLI::Option* capacity_opts[3]{};
  CLI::Option* max_len = nullptr;

  auto* solve = add("solve-fixed", "optimal ranking for a fixed span", [&] { cmd_solve_fixed(opt, out); });
  span_opts[0] = span_flag(solve);
  auto* assort = add("assortopt", "nested optimal rankings for spans 1..M", [&] { cmd_assortopt(opt, out, err); });
  capacity_opts[0] = capacity_flag(assort);
  auto* bx = add("bestx", "Best-x ranking for the instance span distribution", [&] { cmd_bestx(opt, out); });
  bx->add_flag("--fill", opt.fill, "greedily fill the remaining positions");
  auto* geo = add("geo", "exact ranking under a geometric span", [&] { cmd_geo(opt, out); });
  geo->add_option("--alpha", opt.alpha, "geometric parameter in [0,1)")->required();
  capacity_opts[1] = capacity_flag(geo);
  auto* prefix = add("prefix-check", "check whether the top-M products by lambda*r sit in index order", [&] { cmd_prefix(opt, out); });
  capacity_opts[2] = capacity_flag(prefix);
  auto* multi = add("multi", "multi-purchase model with continuation probabilities", [&] { cmd_multi(opt, out); });
  span_opts[1] = span_flag(multi);
  auto* oracle = add("oracle", "exhaustive search for small instances", [&] { cmd_oracle(opt, out); });
  span_opts[2] = span_flag(oracle);
  oracle->add_flag("--general", opt.general, "use continuation probabilities");
  max_len = oracle->add_option("--max-len", opt.max_len, "longest ranking to enumerate");
  auto* audit = add("audit", "Best-x ratio audit over an instance corpus", [&] { cmd_audit(opt, out); });
  audit->add_option("--corpus", opt.corpus, "directory of instance JSON files");
  add("bench-offline", "offline heuristic benchmark", [&] { cmd_bench_offline(opt, out); });
  add("bench-bandit", "RankUCB learning experiment", [&] { cmd_bench_bandit(opt, out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (args.empty()) {
      err << app.help();
      return kExitUsage;
    }
    report_error(err, "usage", e.what(), kExitUsage);
    return kExitUsage;
  }

  opt.has_seed = seed->count() > 0;
  opt.has_threads = threads->count() > 0;
  for (auto* o : span_opts) opt.has_span = opt.has_span || o->count() > 0;
  for (auto* o : capacity_opts) opt.has_capacity = opt.has_capacity || o->count() > 0;
  opt.has_max_len = max_len->count() > 0;

  try {
    for (const auto* sub : app.get_subcommands()) actions.at(sub->get_name())();
    return kExitOk;
  } catch (const CLI::Error& e) {
    report_error(err, "usage", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const rankopt::ParseError& e) {
    report_error(err, "malformed_input", e.what(), kExitParse);
    return kExitParse;
  } catch (const InvalidInput& e) {
    report_error(err, "invalid_input", e.what(), kExitInvalidInput);
    return kExitInvalidInput;
  } catch (const BudgetExceeded& e) {
    report_error(err, "budget_exceeded", e.what(), kExitBudget);
    return kExitBudget;
  } catch (const IoError& e) {
    report_error(err, "io", e.what(), kExitIo);
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    report_error(err, "io", e.what(), kExitIo);
    return kExitIo;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what(), kExitInternal);
    return kExitInternal;
  }
}

}  // namespace rankopt
