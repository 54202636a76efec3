// mmcli: closed forms, thresholds, curves and finite-graph validation runs.
//
//   mmcli gamma "poisson 2"
//   mmcli gamma "dirac 3" "poisson 2.85"
//   mmcli curve "pmf 3:3/4 15:1/4" --curve F --points 1024 --format csv
//   mmcli threshold 3
//   mmcli validate "er 2" --sizes 20000 --seeds 5
//
// All output is a deterministic function of the arguments. Errors print one
// line on stderr and exit with status 2.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmatch/mmatch.hpp"

using json = nlohmann::ordered_json;
using namespace mmatch;

namespace {

struct Config {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 1;
  std::size_t points = 256;
  std::size_t depth = 10;
  std::size_t roots = 2000;
  std::size_t pop = 0;
  std::size_t sweeps = 200;
  std::string z_grid = "0.3,0.2,0.1,0.05";
  std::string graph_file;

  // gamma / curve
  std::string spec_a, spec_b;
  std::string curve = "F";

  // threshold
  int k = 3;
  double alpha_min = 0.5, alpha_max = 1.0;
  std::size_t alpha_points = 51;

  // validate
  std::string model;
  std::string sizes = "20000";
  std::size_t seeds = 5;
  std::size_t exact_cap = 100'000;
  std::size_t exact_cap_bipartite = 1'000'000;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InvalidParameter(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidParameter(std::string("empty ") + what);
  return out;
}

json records_json(const RecordSet& r) {
  json arr = json::array();
  for (const auto& rec : r.records) arr.push_back({{"location", rec.location}, {"F", rec.F}, {"residual", rec.residual}});
  return arr;
}

json fixed_points_json(const RecordSet& r) {
  json arr = json::array();
  for (const auto& rec : r.fixed_points) arr.push_back({{"location", rec.location}, {"F", rec.F}});
  return arr;
}

// Writes the json document or the csv text, to --out or stdout.
void emit(const Config& cfg, const json& doc, const std::string& csv) {
  std::string text = cfg.format == "json" ? doc.dump(2) + "\n" : csv;
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
  f << text;
}

std::vector<std::pair<double, double>> curve_of(const std::string& name, const DegreeDistribution& a,
                                                const DegreeDistribution& b, std::size_t points) {
  if (name == "F") return sample_curve([&](double t) { return eval_F_two_type(a, b, t); }, points);
  if (name == "Fa") return sample_curve([&](double t) { return eval_F_two_type(a, b, t); }, points);
  if (name == "Fb") return sample_curve([&](double t) { return eval_F_two_type(b, a, t); }, points);
  if (name == "g") return sample_curve([&](double x) { return eval_g(a, x); }, points);
  throw InvalidParameter("unknown curve '" + name + "' (expected F, Fa, Fb or g)");
}

std::string curve_csv(const std::vector<std::pair<double, double>>& c) {
  std::string s = "t,value\n";
  for (auto [t, v] : c) s += num(t) + "," + num(v) + "\n";
  return s;
}

json curve_json(const std::vector<std::pair<double, double>>& c) {
  json arr = json::array();
  for (auto [t, v] : c) arr.push_back({{"t", t}, {"value", v}});
  return arr;
}

void cmd_gamma(const Config& cfg) {
  const auto a = parse_distribution(cfg.spec_a);
  json doc{{"command", "gamma"}, {"distribution", a.describe()}};
  std::vector<std::pair<std::string, std::string>> rows;
  json flags = json::array(), warnings = json::array();

  if (cfg.spec_b.empty()) {
    auto r = gamma_ugw(a);
    doc["gamma"] = r.gamma;
    doc["max_F"] = r.max_F;
    doc["t_c"] = r.argmax;
    doc["record_count"] = r.records.records.size();
    doc["records"] = records_json(r.records);
    doc["fixed_points"] = fixed_points_json(r.records);
    if (r.records.records.size() >= 2) flags.push_back("no correlation decay");
    for (const auto& w : r.records.warnings) warnings.push_back(w);
    rows = {{"gamma", num(r.gamma)}, {"max_F", num(r.max_F)}, {"t_c", num(r.argmax)},
            {"record_count", std::to_string(r.records.records.size())}};
  } else {
    const auto b = parse_distribution(cfg.spec_b);
    auto r = gamma_uhgw(a, b);
    doc["distribution_b"] = b.describe();
    doc["gamma"] = r.gamma;
    doc["gamma_symmetric"] = r.gamma_symmetric;
    doc["agreement"] = std::abs(r.gamma - r.gamma_symmetric);
    doc["lambda"] = r.lambda;
    doc["max_F"] = r.max_Fa.value;
    doc["t_c"] = r.max_Fa.argmax;
    doc["max_Fb"] = r.max_Fb.value;
    doc["matched_fraction_a"] = r.matched_fraction_a();
    doc["record_count"] = r.records_a.records.size();
    doc["records"] = records_json(r.records_a);
    doc["fixed_points"] = fixed_points_json(r.records_a);
    doc["records_b"] = records_json(r.records_b);
    if (r.records_a.records.size() >= 2) flags.push_back("no correlation decay");
    for (const auto& w : r.records_a.warnings) warnings.push_back(w);
    rows = {{"gamma", num(r.gamma)},         {"gamma_symmetric", num(r.gamma_symmetric)},
            {"lambda", num(r.lambda)},       {"max_F", num(r.max_Fa.value)},
            {"t_c", num(r.max_Fa.argmax)},   {"max_Fb", num(r.max_Fb.value)},
            {"record_count", std::to_string(r.records_a.records.size())}};
  }
  const auto b = cfg.spec_b.empty() ? a : parse_distribution(cfg.spec_b);
  doc["flags"] = flags;
  doc["warnings"] = warnings;
  doc["curve"] = curve_json(curve_of("F", a, b, cfg.points));

  std::string csv = "key,value\n";
  for (auto& [k, v] : rows) csv += k + "," + v + "\n";
  emit(cfg, doc, csv);
}

void cmd_curve(const Config& cfg) {
  const auto a = parse_distribution(cfg.spec_a);
  const auto b = cfg.spec_b.empty() ? a : parse_distribution(cfg.spec_b);
  if (cfg.curve == "g" && !cfg.spec_b.empty()) throw InvalidParameter("curve g is single-type only");
  auto c = curve_of(cfg.curve, a, b, cfg.points);
  json doc{{"command", "curve"}, {"distribution", a.describe()}};
  if (!cfg.spec_b.empty()) doc["distribution_b"] = b.describe();
  doc["curve"] = cfg.curve;
  doc["points"] = curve_json(c);
  emit(cfg, doc, curve_csv(c));
}

void cmd_threshold(const Config& cfg) {
  const auto th = cuckoo_threshold(cfg.k);
  const auto sec = cuckoo_threshold_secant(cfg.k);
  if (!(cfg.alpha_min > 0.0) || !(cfg.alpha_max >= cfg.alpha_min)) throw InvalidParameter("bad alpha range");
  if (cfg.alpha_points < 2) throw InvalidParameter("--points must be >= 2");
  json doc{{"command", "threshold"},  {"k", cfg.k},          {"xi", th.xi},
           {"alpha_c", th.alpha_c},   {"xi_secant", sec.xi}, {"alpha_c_secant", sec.alpha_c}};
  json curve = json::array();
  std::string csv = "alpha,matched_fraction,x_star\n";
  for (std::size_t i = 0; i < cfg.alpha_points; ++i) {
    double alpha = cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * static_cast<double>(i) /
                                       static_cast<double>(cfg.alpha_points - 1);
    auto f = cuckoo_matched_fraction(cfg.k, alpha);
    curve.push_back({{"alpha", alpha}, {"matched_fraction", f.fraction}, {"x_star", f.x_star}});
    csv += num(alpha) + "," + num(f.fraction) + "," + num(f.x_star) + "\n";
  }
  doc["curve"] = curve;
  emit(cfg, doc, csv);
}

// ---------------------------------------------------------------- validate

struct Model {
  std::string kind;  // er, config, cuckoo, file
  double c = 0;
  std::optional<DegreeDistribution> law;
  int k = 0;
  double alpha = 0;
};

Model parse_model(const std::string& text) {
  std::stringstream ss(text);
  Model m;
  ss >> m.kind;
  if (m.kind == "er") {
    std::string c;
    ss >> c;
    m.c = parse_list(c, "mean degree")[0];
    if (m.c < 0) throw InvalidParameter("er mean degree must be >= 0");
  } else if (m.kind == "config") {
    std::string rest;
    std::getline(ss, rest);
    m.law = parse_distribution(rest);
  } else if (m.kind == "cuckoo") {
    std::string k, a;
    ss >> k >> a;
    m.k = static_cast<int>(parse_list(k, "k")[0]);
    m.alpha = parse_list(a, "alpha")[0];
    if (m.k < 3) throw UnsupportedParameter("cuckoo validation needs k >= 3");
  } else {
    throw InvalidParameter("unknown model '" + m.kind + "' (expected 'er C', 'config SPEC' or 'cuckoo K ALPHA')");
  }
  return m;
}

void cmd_validate(const Config& cfg) {
  const bool from_file = !cfg.graph_file.empty();
  if (from_file == !cfg.model.empty()) throw InvalidParameter("give exactly one of MODEL or --graph");
  Model model;
  if (from_file) model.kind = "file";
  else model = parse_model(cfg.model);
  const auto zs = parse_list(cfg.z_grid, "z grid");
  const auto size_list = parse_list(cfg.sizes, "size list");
  if (cfg.seeds == 0) throw InvalidParameter("--seeds must be >= 1");

  json doc{{"command", "validate"}, {"model", from_file ? "file " + cfg.graph_file : cfg.model}};
  json params{{"depth", cfg.depth}, {"roots", cfg.roots},         {"z_grid", zs},
              {"exact_cap", cfg.exact_cap}, {"pop", cfg.pop}, {"sweeps", cfg.sweeps}};
  doc["parameters"] = params;
  json warnings = json::array();

  // Closed-form limit, per vertex.
  std::optional<double> gamma, fraction_a;
  if (model.kind == "er") gamma = gamma_ugw(DegreeDistribution::poisson(model.c)).gamma;
  if (model.kind == "config") gamma = gamma_ugw(*model.law).gamma;
  if (model.kind == "cuckoo") {
    auto r = gamma_uhgw(DegreeDistribution::dirac(static_cast<std::size_t>(model.k)),
                        DegreeDistribution::poisson(model.k * model.alpha));
    gamma = r.gamma;
    fraction_a = cuckoo_matched_fraction(model.k, model.alpha).fraction;
  }
  doc["gamma"] = gamma ? json(*gamma) : json(nullptr);
  if (fraction_a) doc["matched_fraction_a_limit"] = *fraction_a;

  std::vector<std::pair<std::size_t, std::uint64_t>> runs;
  if (from_file) {
    runs.emplace_back(0, cfg.seed);
  } else {
    for (double s : size_list) {
      if (!(s >= 1) || s != std::floor(s)) throw InvalidParameter("sizes must be positive integers");
      for (std::size_t i = 0; i < cfg.seeds; ++i) runs.emplace_back(static_cast<std::size_t>(s), cfg.seed + i);
    }
  }
  doc["seeds"] = json::array();
  for (std::size_t i = 0; i < (from_file ? 1 : cfg.seeds); ++i) doc["seeds"].push_back(cfg.seed + i);

  json rows = json::array();
  std::string csv = "size,seed,vertices,edges,nu_ratio,karp_sipser_ratio,sandwich_nu_lower,sandwich_nu_upper,gamma\n";
  double gap_sum = 0, nu_sum = 0, ks_sum = 0;
  std::size_t nu_count = 0;
  for (auto [size, seed] : runs) {
    Graph g;
    if (model.kind == "file") {
      std::ifstream f(cfg.graph_file, std::ios::binary);
      if (!f) throw std::runtime_error("cannot read graph file '" + cfg.graph_file + "'");
      std::stringstream buf;
      buf << f.rdbuf();
      g = read_edge_list(buf.str());
    } else if (model.kind == "er") {
      g = gen_erdos_renyi(size, model.c, seed);
    } else if (model.kind == "config") {
      g = gen_configuration(size, *model.law, seed);
    } else {
      g = gen_left_regular(size, model.alpha, static_cast<std::size_t>(model.k), seed);
    }
    const double n = static_cast<double>(g.vertex_count());
    json row{{"size", size}, {"seed", seed}, {"vertices", g.vertex_count()}, {"edges", g.edge_count()}};

    std::optional<double> nu_ratio;
    const bool bip = g.is_bipartite_tagged();
    const std::size_t cap = bip ? cfg.exact_cap_bipartite : cfg.exact_cap;
    if (g.vertex_count() <= cap) {
      auto m = maximum_matching(g);
      nu_ratio = static_cast<double>(m.size()) / n;
      row["matcher"] = bip ? "hopcroft-karp" : "blossom";
      if (bip) row["matched_fraction_a"] = static_cast<double>(m.size()) / static_cast<double>(g.count_side(Side::a));
    } else {
      row["matcher"] = "none";
      warnings.push_back("size " + std::to_string(g.vertex_count()) +
                         " above the exact matcher cap; reporting Karp-Sipser and sandwich only");
    }
    row["nu_ratio"] = nu_ratio ? json(*nu_ratio) : json(nullptr);

    auto ks = karp_sipser(g, seed);
    const double ks_ratio = static_cast<double>(ks.matching.size()) / n;
    row["karp_sipser_ratio"] = ks_ratio;
    row["leaf_phase_edges"] = ks.leaf_phase_edges;
    row["core_vertices"] = ks.core_vertex_count;
    row["core_exposed"] = ks.core_exposed_count;

    std::string sw_lo = "", sw_hi = "";
    try {
      SandwichOptions so;
      so.depth = cfg.depth;
      so.roots = cfg.roots;
      so.seed = seed;
      auto s = estimate_mean_rep_star(g, zs, so);
      json srows = json::array();
      for (const auto& r : s.rows)
        srows.push_back({{"z", r.z}, {"mean_rep", r.mean_rep}, {"std_error", r.std_error}, {"lower", r.lower}});
      row["sandwich"] = {{"lower", s.lower},
                         {"upper", s.upper},
                         {"nu_ratio_lower", s.matching_ratio_lower()},
                         {"nu_ratio_upper", s.matching_ratio_upper()},
                         {"exact", s.exact},
                         {"roots", s.roots},
                         {"rows", srows}};
      sw_lo = num(s.matching_ratio_lower());
      sw_hi = num(s.matching_ratio_upper());
    } catch (const BudgetExceeded& e) {
      row["sandwich"] = nullptr;
      warnings.push_back(std::string("sandwich skipped: ") + e.what());
    }

    if (nu_ratio) {
      nu_sum += *nu_ratio;
      ++nu_count;
      if (gamma) gap_sum += std::abs(*nu_ratio - *gamma);
    }
    ks_sum += ks_ratio;
    rows.push_back(row);
    csv += std::to_string(size) + "," + std::to_string(seed) + "," + std::to_string(g.vertex_count()) + "," +
           std::to_string(g.edge_count()) + "," + (nu_ratio ? num(*nu_ratio) : "") + "," + num(ks_ratio) + "," +
           sw_lo + "," + sw_hi + "," + (gamma ? num(*gamma) : "") + "\n";
  }
  doc["rows"] = rows;
  json summary{{"runs", runs.size()}, {"mean_karp_sipser_ratio", ks_sum / static_cast<double>(runs.size())}};
  summary["mean_nu_ratio"] = nu_count ? json(nu_sum / static_cast<double>(nu_count)) : json(nullptr);
  summary["mean_abs_gap"] = (nu_count && gamma) ? json(gap_sum / static_cast<double>(nu_count)) : json(nullptr);
  doc["summary"] = summary;

  if (cfg.pop > 0 && model.kind != "file") {
    PopulationOptions po;
    po.pop_size = cfg.pop;
    po.sweeps = cfg.sweeps;
    po.seed = cfg.seed;
    DegreeDistribution a = model.kind == "er"     ? DegreeDistribution::poisson(model.c)
                           : model.kind == "cuckoo" ? DegreeDistribution::dirac(static_cast<std::size_t>(model.k))
                                                    : *model.law;
    DegreeDistribution b = model.kind == "cuckoo" ? DegreeDistribution::poisson(model.k * model.alpha) : a;
    auto r = population_dynamics_zero(a, b, std::nullopt, po);
    doc["rde"] = {{"p_init", r.p_init},
                  {"root_mean", r.run.root_mean},
                  {"root_std_error", r.run.root_std_error},
                  {"positive_mass", r.positive_mass},
                  {"sweeps_run", r.run.sweeps_run},
                  {"converged", r.run.converged}};
  }
  doc["warnings"] = warnings;
  emit(cfg, doc, csv);
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Matching numbers of sparse random graphs: closed forms, estimators and checks"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sc->add_option("--out", cfg.out, "Write output to PATH instead of stdout");
    sc->add_option("--seed", cfg.seed, "Master seed");
  };

  auto* gamma = app.add_subcommand("gamma", "Closed-form matching ratio and historical records");
  gamma->add_option("spec", cfg.spec_a, "Degree law, e.g. 'poisson 2'")->required();
  gamma->add_option("spec_b", cfg.spec_b, "Second degree law (two-type limit)");
  gamma->add_option("--points", cfg.points, "Points of the F curve");
  add_common(gamma);

  auto* curve = app.add_subcommand("curve", "Sample F, Fa, Fb or g on [0,1]");
  curve->add_option("spec", cfg.spec_a, "Degree law")->required();
  curve->add_option("spec_b", cfg.spec_b, "Second degree law (two-type curves)");
  curve->add_option("--curve", cfg.curve, "F, Fa, Fb or g");
  curve->add_option("--points", cfg.points, "Number of curve points");
  add_common(curve);

  auto* threshold = app.add_subcommand("threshold", "Cuckoo hashing load threshold");
  threshold->add_option("k", cfg.k, "Choices per item (>= 3)")->required();
  threshold->add_option("--alpha-min", cfg.alpha_min, "Smallest load on the curve");
  threshold->add_option("--alpha-max", cfg.alpha_max, "Largest load on the curve");
  threshold->add_option("--points", cfg.alpha_points, "Points of the matched-fraction curve");
  add_common(threshold);

  auto* validate = app.add_subcommand("validate", "Compare exact, heuristic, local and closed-form values");
  validate->add_option("model", cfg.model, "'er C', 'config SPEC' or 'cuckoo K ALPHA'");
  validate->add_option("--graph", cfg.graph_file, "Edge-list file instead of a generated model");
  validate->add_option("--sizes", cfg.sizes, "Comma-separated sizes (n, or m locations for cuckoo)");
  validate->add_option("--seeds", cfg.seeds, "Seeds per size: seed, seed+1, ...");
  validate->add_option("--depth", cfg.depth, "Path-tree depth for the sandwich (even)");
  validate->add_option("--roots", cfg.roots, "Sampled roots for the sandwich");
  validate->add_option("--z-grid", cfg.z_grid, "Temperatures in (0,1), comma separated");
  validate->add_option("--exact-cap", cfg.exact_cap, "Largest general graph given to the blossom matcher");
  validate->add_option("--pop", cfg.pop, "Population size for the zero-temperature RDE (0: skip)");
  validate->add_option("--sweeps", cfg.sweeps, "Population sweeps");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "mmcli: error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*gamma) cmd_gamma(cfg);
    else if (*curve) cmd_curve(cfg);
    else if (*threshold) cmd_threshold(cfg);
    else cmd_validate(cfg);
  } catch (const ParseError& e) {
    std::cerr << "mmcli: parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mmcli: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
