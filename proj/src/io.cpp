#include "rankopt/io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

namespace rankopt {

using nlohmann::json;

namespace {

void require_object(const json& doc, std::string_view what, std::initializer_list<std::string_view> allowed) {
  if (!doc.is_object()) throw ParseError(fmt::format("{} must be a JSON object", what));
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(fmt::format("{}: unknown field '{}'", what, key));
    }
  }
}

double get_number(const json& doc, std::string_view key, std::string_view what) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(fmt::format("{}: missing field '{}'", what, key));
  if (!it->is_number()) throw ParseError(fmt::format("{}: field '{}' must be a number", what, key));
  return it->get<double>();
}

std::size_t get_count(const json& doc, std::string_view key, std::string_view what) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(fmt::format("{}: missing field '{}'", what, key));
  if (!it->is_number_unsigned()) {
    throw ParseError(fmt::format("{}: field '{}' must be a nonnegative integer", what, key));
  }
  return it->get<std::size_t>();
}

template <typename T>
void read_optional(const json& doc, std::string_view key, std::string_view what, T& out) {
  if (!doc.contains(key)) return;
  if constexpr (std::is_same_v<T, bool>) {
    if (!doc.at(key).is_boolean()) throw ParseError(fmt::format("{}: field '{}' must be a boolean", what, key));
    out = doc.at(key).get<bool>();
  } else if constexpr (std::is_floating_point_v<T>) {
    out = get_number(doc, key, what);
  } else {
    out = static_cast<T>(get_count(doc, key, what));
  }
}

SpanSpec parse_span_with_default(const json& doc, std::optional<std::size_t> default_capacity) {
  constexpr std::string_view what = "span";
  require_object(doc, what, {"type", "tail", "alpha", "M", "truncate"});
  const auto it = doc.find("type");
  if (it == doc.end() || !it->is_string()) throw ParseError("span: 'type' must be a string");
  const auto type = it->get<std::string>();

  SpanSpec spec;
  read_optional(doc, "truncate", what, spec.truncate);
  auto capacity = [&] {
    if (doc.contains("M")) return get_count(doc, "M", what);
    if (default_capacity) return *default_capacity;
    throw ParseError("span: missing field 'M'");
  };
  if (type == "explicit") {
    spec.kind = SpanKind::Explicit;
    const auto tail = doc.find("tail");
    if (tail == doc.end() || !tail->is_array()) throw ParseError("span: explicit type needs a 'tail' array");
    for (const auto& v : *tail) {
      if (!v.is_number()) throw ParseError("span: tail entries must be numbers");
      spec.tail.push_back(v.get<double>());
    }
    spec.capacity = spec.tail.size();
    if (doc.contains("M")) {
      const auto m = get_count(doc, "M", what);
      if (m > spec.tail.size()) {
        throw InvalidInput(fmt::format("span: M = {} exceeds the {} tail entries", m, spec.tail.size()));
      }
      spec.tail.resize(m);
      spec.capacity = m;
    }
  } else if (type == "geometric") {
    spec.kind = SpanKind::Geometric;
    spec.alpha = get_number(doc, "alpha", what);
    spec.capacity = capacity();
  } else if (type == "linear_tail") {
    spec.kind = SpanKind::LinearTail;
    spec.capacity = capacity();
  } else {
    throw ParseError(fmt::format("span: unknown type '{}'", type));
  }
  // Validate eagerly so bad specs fail at load time.
  make_span_distribution(spec);
  return spec;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

SpanSpec parse_span(const json& doc) { return parse_span_with_default(doc, std::nullopt); }

InstanceData parse_instance(const json& doc) {
  require_object(doc, "instance", {"products", "span"});
  const auto products = doc.find("products");
  if (products == doc.end() || !products->is_array()) throw ParseError("instance: 'products' must be an array");
  if (products->empty()) throw InvalidInput("instance: catalog is empty");

  InstanceData data;
  std::size_t with_cont = 0;
  for (std::size_t i = 0; i < products->size(); ++i) {
    const auto& p = (*products)[i];
    const auto what = fmt::format("products[{}]", i);
    require_object(p, what, {"id", "price", "lambda", "cont_prob"});
    GeneralProduct gp;
    if (p.contains("id")) {
      if (!p["id"].is_string()) throw ParseError(fmt::format("{}: 'id' must be a string", what));
      gp.id = p["id"].get<std::string>();
    } else {
      gp.id = fmt::format("p{}", i + 1);
    }
    gp.price = get_number(p, "price", what);
    gp.purchase_prob = get_number(p, "lambda", what);
    if (p.contains("cont_prob")) {
      gp.cont_prob = get_number(p, "cont_prob", what);
      ++with_cont;
    } else {
      gp.cont_prob = 1.0 - gp.purchase_prob;
    }
    data.products.push_back(std::move(gp));
  }
  if (with_cont != 0 && with_cont != data.products.size()) {
    throw InvalidInput("instance: cont_prob must be given for every product or for none");
  }
  data.has_cont_prob = with_cont != 0;
  for (std::size_t i = 0; i < data.products.size(); ++i) {
    for (std::size_t j = i + 1; j < data.products.size(); ++j) {
      if (data.products[i].id == data.products[j].id) {
        throw InvalidInput(fmt::format("instance: duplicate product id '{}'", data.products[i].id));
      }
    }
  }
  if (doc.contains("span")) data.span = parse_span(doc["span"]);
  return data;
}

InstanceData load_instance(const std::filesystem::path& path) { return parse_instance(read_json(path)); }

Catalog to_catalog(const InstanceData& data) {
  std::vector<Product> products;
  products.reserve(data.products.size());
  for (const auto& p : data.products) products.push_back({p.id, p.price, p.purchase_prob});
  return Catalog::index(std::move(products));
}

GeneralCatalog to_general(const InstanceData& data) { return GeneralCatalog::order(data.products); }

SpanDistribution to_distribution(const InstanceData& data) {
  if (!data.span) throw InvalidInput("instance has no span distribution");
  return make_span_distribution(*data.span);
}

json span_to_json(const SpanDistribution& dist) {
  return json{{"type", "explicit"},
              {"tail", std::vector<double>(dist.tails().begin(), dist.tails().end())},
              {"M", dist.capacity()}};
}

json instance_to_json(const Catalog& catalog, const SpanDistribution& dist) {
  json products = json::array();
  for (const auto& p : catalog.products()) {
    products.push_back(json{{"id", p.id}, {"price", p.price}, {"lambda", p.purchase_prob}});
  }
  return json{{"products", std::move(products)}, {"span", span_to_json(dist)}};
}

OfflineConfig parse_offline_config(const json& doc) {
  constexpr std::string_view what = "offline config";
  require_object(doc, what, {"instances", "n", "M", "span", "seed", "heuristics", "bins", "threads"});
  OfflineConfig config;
  read_optional(doc, "instances", what, config.instances);
  read_optional(doc, "n", what, config.n);
  read_optional(doc, "seed", what, config.seed);
  read_optional(doc, "bins", what, config.histogram_bins);
  read_optional(doc, "threads", what, config.threads);
  std::optional<std::size_t> m;
  if (doc.contains("M")) m = get_count(doc, "M", what);
  if (doc.contains("span")) {
    config.span = parse_span_with_default(doc["span"], m);
  } else if (m) {
    config.span.capacity = *m;
  }
  if (doc.contains("heuristics")) {
    if (!doc["heuristics"].is_array()) throw ParseError("offline config: 'heuristics' must be an array");
    config.heuristics.clear();
    for (const auto& h : doc["heuristics"]) {
      if (!h.is_string()) throw ParseError("offline config: heuristic names must be strings");
      const auto parsed = parse_heuristic(h.get<std::string>());
      if (!parsed) throw InvalidInput(fmt::format("offline config: unknown heuristic '{}'", h.get<std::string>()));
      config.heuristics.push_back(*parsed);
    }
  }
  return config;
}

BanditConfig parse_bandit_config(const json& doc) {
  constexpr std::string_view what = "bandit config";
  require_object(doc, what,
                 {"n", "M", "d_p", "d_c", "T", "gamma", "D", "seed", "span", "replications", "error_positions",
                  "theta_norm", "nonnegative", "threads"});
  BanditConfig config;
  read_optional(doc, "n", what, config.n);
  read_optional(doc, "M", what, config.capacity);
  read_optional(doc, "d_p", what, config.product_dim);
  read_optional(doc, "d_c", what, config.customer_dim);
  read_optional(doc, "T", what, config.rounds);
  read_optional(doc, "gamma", what, config.gamma);
  read_optional(doc, "D", what, config.norm_bound);
  read_optional(doc, "seed", what, config.seed);
  read_optional(doc, "replications", what, config.replications);
  read_optional(doc, "theta_norm", what, config.theta_norm);
  read_optional(doc, "nonnegative", what, config.nonnegative);
  read_optional(doc, "threads", what, config.threads);
  if (doc.contains("span")) {
    config.span = parse_span_with_default(doc["span"], config.capacity);
  } else {
    config.span.capacity = config.capacity;
  }
  if (doc.contains("error_positions")) {
    if (!doc["error_positions"].is_array()) throw ParseError("bandit config: 'error_positions' must be an array");
    config.error_positions.clear();
    for (const auto& k : doc["error_positions"]) {
      if (!k.is_number_unsigned()) throw ParseError("bandit config: error positions must be positive integers");
      config.error_positions.push_back(k.get<std::size_t>());
    }
  }
  return config;
}

std::string format_number(double v) { return fmt::format("{}", v); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

void write_offline_report(const OfflineReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::ostringstream ratios;
  ratios << "instance,clairvoyant";
  for (auto h : report.heuristics) ratios << ',' << heuristic_name(h);
  ratios << '\n';
  for (std::size_t i = 0; i < report.ratios.size(); ++i) {
    ratios << i << ',' << format_number(report.clairvoyant[i]);
    for (double r : report.ratios[i]) ratios << ',' << format_number(r);
    ratios << '\n';
  }
  write_text(dir / "ratios.csv", ratios.str());

  std::ostringstream hist;
  hist << "heuristic,bin_lo,bin_hi,count\n";
  const double width = 1.0 / static_cast<double>(report.histogram_bins);
  for (const auto& s : report.summary) {
    for (std::size_t b = 0; b < s.histogram.size(); ++b) {
      hist << heuristic_name(s.heuristic) << ',' << format_number(static_cast<double>(b) * width) << ','
           << format_number(static_cast<double>(b + 1) * width) << ',' << s.histogram[b] << '\n';
    }
  }
  write_text(dir / "histogram.csv", hist.str());

  json summary = json::object();
  for (const auto& s : report.summary) {
    summary[std::string(heuristic_name(s.heuristic))] = {{"min", s.min}, {"mean", s.mean}, {"max", s.max}};
  }
  write_text(dir / "summary.json", json{{"instances", report.ratios.size()}, {"heuristics", summary}}.dump(2) + "\n");
}

void write_bandit_report(const BanditReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::ostringstream rounds;
  rounds << "round,mean,ub,lb";
  for (auto k : report.error_positions) rounds << ",h" << k << "_est";
  for (auto k : report.error_positions) rounds << ",h" << k << "_optm";
  rounds << '\n';
  std::ostringstream regret;
  regret << "round,scaled_regret_per_round\n";
  for (const auto& r : report.rounds) {
    rounds << r.round << ',' << format_number(r.mean) << ',' << format_number(r.ub) << ',' << format_number(r.lb);
    for (double e : r.h_est) rounds << ',' << format_number(e);
    for (double e : r.h_optm) rounds << ',' << format_number(e);
    rounds << '\n';
    regret << r.round << ',' << format_number(r.scaled_regret) << '\n';
  }
  write_text(dir / "rounds.csv", rounds.str());
  write_text(dir / "regret.csv", regret.str());

  json summary = {{"rounds", report.rounds.size()}, {"true_failure_rates", report.true_failure_rates}};
  if (!report.rounds.empty()) {
    const auto& last = report.rounds.back();
    summary["final"] = {{"mean", last.mean}, {"ub", last.ub}, {"lb", last.lb}, {"scaled_regret", last.scaled_regret}};
    double lo = report.rounds.front().mean, hi = lo, total = 0.0;
    for (const auto& r : report.rounds) {
      lo = std::min(lo, r.mean);
      hi = std::max(hi, r.mean);
      total += r.mean;
    }
    summary["ratio"] = {{"min", lo}, {"mean", total / static_cast<double>(report.rounds.size())}, {"max", hi}};
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace rankopt
