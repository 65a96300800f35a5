// pfm: verification suites, single-map evaluation and simplex plot data.
//
// Exit codes: 0 success, 1 domain error or invariant failure, 2 usage or parse error.

#include "pfm/io.hpp"
#include "pfm/plot.hpp"
#include "pfm/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using pfm::io::json;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

const std::vector<std::string> kMaps{
    "canonicalize",        "pf_membership",    "retract_to_dirac",    "fiber_homotopy",
    "deformation_homotopy", "functor_map",     "omega_half_membership", "pair_decompose",
    "retract_to_pf",       "mass_transfer_into", "transfer_retract",  "wasserstein1",
    "openness_witness"};

struct Loaded {
  pfm::SpacePtr space;
  json measure;
};

/// A bundle file {"space": ..., "measure": ...}, or a bare measure plus --space.
Loaded load_measure_input(const std::string& measure_path, const std::string& space_path) {
  const json doc = pfm::io::read_json_file(measure_path);
  if (doc.is_object() && doc.contains("space") && doc.contains("measure")) {
    if (!space_path.empty()) throw pfm::io::ParseError("--space given but the measure file already bundles a space");
    return {pfm::io::space_from_json(doc.at("space")), doc.at("measure")};
  }
  if (space_path.empty()) throw pfm::io::ParseError("measure file has no bundled space and --space is missing");
  return {pfm::io::space_from_json(pfm::io::read_json_file(space_path)), doc};
}

pfm::PointSet parse_point_list(const std::string& csv, const pfm::FiniteSpace& space) {
  pfm::PointSet out;
  std::stringstream in(csv);
  std::string name;
  while (std::getline(in, name, ','))
    if (!name.empty()) out.push_back(space.index_of(name));
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pfm::io::ParseError("cannot write '" + path + "'");
  out << text;
}

struct EvalArgs {
  std::string map;
  std::string measure_path;
  std::string space_path;
  std::string set;
  std::string t;
  std::string point;
  std::string map_path;
  std::string embedding_path;
  std::string measure2_path;
};

json evaluate(const EvalArgs& a) {
  if (a.map == "transfer_retract") {
    if (a.embedding_path.empty()) throw pfm::io::ParseError("transfer_retract needs --embedding");
    const auto emb = pfm::io::embedding_from_json(pfm::io::read_json_file(a.embedding_path));
    const json doc = pfm::io::read_json_file(a.measure_path);
    const json& mj = doc.contains("measure") ? doc.at("measure") : doc;
    return pfm::io::to_json(pfm::transfer_retract(pfm::io::measure_from_json(mj, emb.ambient()), emb));
  }

  const auto in = load_measure_input(a.measure_path, a.space_path);
  const auto mu = pfm::io::measure_from_json(in.measure, in.space);
  auto need = [](const std::string& v, const char* flag) -> const std::string& {
    if (v.empty()) throw pfm::io::ParseError(std::string("this map needs ") + flag);
    return v;
  };
  auto parameter = [&] {
    try {
      return pfm::parse_rational(need(a.t, "--t"));
    } catch (const pfm::Error&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw pfm::io::ParseError(std::string("--t: ") + e.what());
    }
  };

  if (a.map == "canonicalize") return pfm::io::to_json(mu);
  if (a.map == "pf_membership") {
    const auto m = pfm::pf_membership(mu);
    if (const auto* c = std::get_if<pfm::PfCertificate>(&m))
      return {{"member", true}, {"certificate", pfm::io::to_json(*c, *in.space)}};
    const auto& nm = std::get<pfm::NotMember>(m);
    return {{"member", false}, {"max_mass", pfm::io::to_json(nm.max_mass)}, {"threshold", pfm::io::to_json(nm.threshold)}};
  }
  if (a.map == "retract_to_dirac") return pfm::io::to_json(pfm::retract_to_dirac(mu));
  if (a.map == "fiber_homotopy") return pfm::io::to_json(pfm::fiber_homotopy(mu, parameter()));
  if (a.map == "deformation_homotopy") return pfm::io::to_json(pfm::deformation_homotopy(mu, parameter()));
  if (a.map == "functor_map") {
    const auto f = pfm::io::point_map_from_json(pfm::io::read_json_file(need(a.map_path, "--point-map")), in.space);
    const auto img = pfm::functor_map(mu, f);
    return {{"measure", pfm::io::to_json(img.measure)}, {"certificate", pfm::io::to_json(img.certificate, *f.target())}};
  }
  if (a.map == "omega_half_membership") return {{"member", pfm::omega_half_membership(mu)}};
  if (a.map == "pair_decompose") {
    const auto res = pfm::pair_decompose(mu);
    if (const auto* d = std::get_if<pfm::PairDecomposition>(&res)) {
      json j = pfm::io::to_json(*d);
      j["feasible"] = true;
      return j;
    }
    const auto& bad = std::get<pfm::Infeasible>(res);
    return {{"feasible", false}, {"point", in.space->name(bad.point)}, {"mass", pfm::io::to_json(bad.mass)}};
  }
  if (a.map == "retract_to_pf") return pfm::io::to_json(pfm::retract_to_pf(mu));
  if (a.map == "mass_transfer_into")
    return pfm::io::to_json(pfm::mass_transfer_into(mu, parse_point_list(need(a.set, "--set"), *in.space)));
  if (a.map == "wasserstein1") {
    const json doc = pfm::io::read_json_file(need(a.measure2_path, "--measure2"));
    const auto nu = pfm::io::measure_from_json(doc.contains("measure") ? doc.at("measure") : doc, in.space);
    const auto plan = pfm::optimal_transport(mu, nu);
    json flows = json::array();
    for (const auto& f : plan.flows)
      flows.push_back({{"from", in.space->name(f.from)}, {"to", in.space->name(f.to)}, {"mass", pfm::io::to_json(f.mass)}});
    return {{"distance", pfm::io::to_json(plan.cost)}, {"plan", std::move(flows)}};
  }
  if (a.map == "openness_witness") {
    const auto v = parse_point_list(need(a.set, "--set"), *in.space);
    return pfm::io::to_json(pfm::openness_witness(mu, in.space->index_of(need(a.point, "--point")), v));
  }
  throw pfm::io::ParseError("unknown map '" + a.map + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finitely supported probability measures: retractions, homotopies and probes"};
  app.require_subcommand(1);

  pfm::SuiteConfig suite_cfg;
  std::string suite_space, suite_out, suite_format = "json";
  auto* verify = app.add_subcommand("verify", "Run an invariant suite and write its report");
  verify->add_option("--suite", suite_cfg.suite, "Suite to run")
      ->check(CLI::IsMember(std::vector<std::string>(pfm::kSuiteNames.begin(), pfm::kSuiteNames.end())))
      ->capture_default_str();
  verify->add_option("--space", suite_space, "Space JSON file")->required();
  verify->add_option("--samples", suite_cfg.samples, "Samples per randomized check")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  verify->add_option("--seed", suite_cfg.seed, "RNG seed")->capture_default_str();
  verify->add_option("--out", suite_out, "Report path (stdout if omitted)");
  verify->add_option("--format", suite_format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate one map on a measure and print the result");
  eval->add_option("map", ev.map, "Map name")->required()->check(CLI::IsMember(kMaps));
  eval->add_option("--measure", ev.measure_path, "Measure JSON (or {space, measure} bundle)")->required();
  eval->add_option("--space", ev.space_path, "Space JSON, when the measure file is not a bundle");
  eval->add_option("--set", ev.set, "Comma-separated point names (U or V)");
  eval->add_option("--t", ev.t, "Homotopy parameter as p/q");
  eval->add_option("--point", ev.point, "Point name (openness_witness)");
  eval->add_option("--point-map", ev.map_path, "Point map JSON (functor_map)");
  eval->add_option("--embedding", ev.embedding_path, "Embedded subspace JSON (transfer_retract)");
  eval->add_option("--measure2", ev.measure2_path, "Second measure (wasserstein1)");

  std::string plot_kind, plot_space, plot_point, plot_out;
  unsigned plot_grid = 10;
  auto* plot = app.add_subcommand("plot", "Emit barycentric CSV for a 3- or 4-point simplex");
  plot->add_option("kind", plot_kind, "Plot kind")
      ->required()
      ->check(CLI::IsMember({"pf-region", "omega-half-region", "fiber", "homotopy-path"}));
  plot->add_option("--space", plot_space, "Space JSON file")->required();
  plot->add_option("--grid", plot_grid, "Grid resolution (masses are multiples of 1/grid)")->capture_default_str();
  plot->add_option("--point", plot_point, "Anchor point for the fiber plot (default: first point)");
  plot->add_option("--out", plot_out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) {
      suite_cfg.space = pfm::io::space_from_json(pfm::io::read_json_file(suite_space));
      const auto result = pfm::run_suite(suite_cfg);
      write_output(suite_out, suite_format == "json" ? pfm::io::to_json(result).dump(2) + "\n" : pfm::io::to_csv(result));
      for (const auto& c : result.checks)
        if (c.failures != 0) std::cerr << "FAIL " << c.name << ": " << c.failures << "/" << c.cases << "\n";
      for (const auto& r : result.reports)
        if (r.verdict != pfm::Verdict::Pass)
          std::cerr << pfm::verdict_name(r.verdict) << ' ' << pfm::probe_kind_name(r.kind) << ' ' << r.subject << ' '
                    << r.scheme << "\n";
      return result.failed() ? kFailure : kOk;
    }
    if (*eval) {
      std::cout << evaluate(ev).dump(2) << "\n";
      return kOk;
    }
    if (*plot) {
      const auto space = pfm::io::space_from_json(pfm::io::read_json_file(plot_space));
      const pfm::PointId anchor = plot_point.empty() ? 0 : space->index_of(plot_point);
      write_output(plot_out, pfm::plot_data(pfm::parse_plot_kind(plot_kind), space, plot_grid, anchor));
      return kOk;
    }
  } catch (const pfm::io::ParseError& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return kUsage;
  } catch (const pfm::Error& e) {
    // A space file that fails validation is malformed input for verify and plot.
    if (e.kind() == pfm::ErrorKind::InvalidSpace && !*eval) {
      std::cerr << e.what() << "\n";
      return kUsage;
    }
    std::cerr << e.what() << "\n";
    return kFailure;
  } catch (const pfm::InvariantViolation& e) {
    std::cerr << "InvariantViolation: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
