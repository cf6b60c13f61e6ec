// torsion: batch front end for the torsion solver.
//
//   torsion solve     --input system.json [--cap N] [--probe N] [--budget B] [--jobs J]
//   torsion enumerate --input system.json --cap N
//   torsion certify   --input system.json (--point N:a1,a2,... | --cap N)
//   torsion decompose --point N:a1,a2,...
//   torsion bound     --input system.json
//
// Exit codes: 0 success, 2 parse/validation error, 3 budget exceeded.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "torsion/io.hpp"
#include "torsion/solver.hpp"

namespace {

using torsion::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

struct JobConfig {
  std::string input = "-";
  std::optional<std::int64_t> cap;
  std::optional<std::int64_t> probe;
  std::uint64_t budget = torsion::SolveOptions{}.budget;
  std::string format = "json";
  unsigned jobs = 1;
  std::string point;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw torsion::io::ParseError(path, "cannot open input file");
  return {std::istreambuf_iterator<char>(in), {}};
}

torsion::TorsionPoint parse_point(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw torsion::io::ParseError("--point", "expected N:a1,a2,...");
  try {
    const std::int64_t order = std::stoll(text.substr(0, colon));
    if (order < 1) throw torsion::io::ParseError("--point", "order must be positive");
    torsion::ExponentVector a;
    std::stringstream ss(text.substr(colon + 1));
    for (std::string item; std::getline(ss, item, ',');) a.push_back(std::stoll(item));
    if (a.empty()) throw torsion::io::ParseError("--point", "no exponents given");
    return torsion::canonicalize(order, a);
  } catch (const std::logic_error&) {
    throw torsion::io::ParseError("--point", "malformed integer in \"" + text + "\"");
  }
}

void emit(const Json& doc, const std::string& text, const std::string& format) {
  if (format == "text")
    std::cout << text;
  else
    std::cout << torsion::io::dump(doc);
}

std::string points_text(const std::vector<torsion::TorsionPoint>& pts) {
  std::ostringstream os;
  os << "torsion points: " << pts.size() << '\n';
  for (const auto& pt : pts) os << "  " << pt << '\n';
  return os.str();
}

int run_solve(const JobConfig& cfg) {
  const auto system = torsion::io::parse_system(read_input(cfg.input));
  torsion::SolveOptions opts;
  opts.cap_override = cfg.cap;
  opts.probe_limit = cfg.probe;
  opts.budget = cfg.budget;
  opts.jobs = cfg.jobs;
  const auto report = torsion::solve(system, opts);
  emit(torsion::io::report_to_json(report), torsion::io::report_to_text(report), cfg.format);
  return report.budget_exceeded ? kExitBudget : kExitOk;
}

int run_enumerate(const JobConfig& cfg) {
  const auto system = torsion::io::parse_system(read_input(cfg.input));
  if (!cfg.cap) throw torsion::io::ParseError("--cap", "enumerate needs an explicit cap");
  const auto points = torsion::brute_force_torsion(system, *cfg.cap);
  Json pts = Json::array();
  for (const auto& pt : points) pts.push_back(torsion::io::point_to_json(pt));
  emit(Json{{"cap", *cfg.cap}, {"points", std::move(pts)}}, points_text(points), cfg.format);
  return kExitOk;
}

int run_certify(const JobConfig& cfg) {
  const auto system = torsion::io::parse_system(read_input(cfg.input));
  std::vector<torsion::TorsionPoint> targets;
  if (!cfg.point.empty()) {
    targets.push_back(parse_point(cfg.point));
  } else if (cfg.cap) {
    for (std::int64_t order = 1; order <= *cfg.cap; ++order)
      for (auto& rep : torsion::orbit_representatives(order, system.dimension())) {
        torsion::TorsionPoint pt{order, std::move(rep)};
        bool on = true;
        for (const auto& p : system.polys()) on = on && torsion::evaluate_at_torsion(p, pt).is_zero();
        if (on) targets.push_back(std::move(pt));
      }
  } else {
    throw torsion::io::ParseError("--point", "certify needs --point or --cap");
  }

  Json out = Json::array();
  std::ostringstream text;
  for (const auto& pt : targets) {
    std::optional<torsion::TorsionCoset> coset;
    try {
      coset = torsion::coset_certificate(system, pt);
    } catch (const torsion::PreconditionError& e) {
      throw torsion::io::ParseError("--point", e.what());
    }
    out.push_back(Json{{"point", torsion::io::point_to_json(pt)},
                       {"coset", coset ? torsion::io::coset_to_json(*coset) : Json(nullptr)}});
    text << pt << ": " << (coset ? "on a certified coset" : "no certificate") << '\n';
  }
  emit(Json{{"certificates", std::move(out)}}, text.str(), cfg.format);
  return kExitOk;
}

int run_decompose(const JobConfig& cfg) {
  if (cfg.point.empty()) throw torsion::io::ParseError("--point", "decompose needs --point N:a1,...");
  const auto pt = parse_point(cfg.point);
  if (pt.order < 2) throw torsion::io::ParseError("--point", "the identity point has no decomposition");
  const auto dec = torsion::decompose(pt.exponents, pt.order);
  const auto sm = torsion::short_multiple(pt.exponents, pt.order);
  Json doc = torsion::io::decomposition_to_json(dec);
  doc["short_multiple"] = Json{{"k", sm.k}, {"b", sm.b}, {"bound_met", sm.bound_met}};
  doc["verified"] = torsion::verify_decomposition(dec, pt.exponents);
  std::ostringstream text;
  text << "point " << pt << "\n  e = " << dec.e << ", f = " << dec.f << ", k = " << dec.k << '\n';
  for (std::size_t i = 0; i < dec.c.size(); ++i)
    text << "  a_" << i + 1 << " = " << dec.f << "*" << dec.c[i] << " + " << pt.order / dec.e << "*" << dec.t[i]
         << " (mod " << pt.order << ")\n";
  emit(doc, text.str(), cfg.format);
  return kExitOk;
}

int run_bound(const JobConfig& cfg) {
  const auto system = torsion::io::parse_system(read_input(cfg.input));
  const auto bound = torsion::order_bound(system);
  const std::int64_t cutoff = torsion::bound_scan_cutoff(system.max_degree(), system.dimension());
  Json doc{{"n", system.dimension()},
           {"max_degree", system.max_degree()},
           {"scan_cutoff", cutoff},
           {"certified_bound", bound ? Json(*bound) : Json(nullptr)}};
  std::ostringstream text;
  text << "n = " << system.dimension() << ", max degree = " << system.max_degree() << "\ncertified bound: "
       << (bound ? std::to_string(*bound) : std::string("none (scan limit exceeded)")) << '\n';
  emit(doc, text.str(), cfg.format);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torsion points and torsion cosets on subvarieties of the multiplicative torus"};
  app.require_subcommand(1, 1);
  JobConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "System JSON file ('-' or omitted reads stdin)");
  };
  auto add_cap = [&](CLI::App* sub) { sub->add_option("--cap", cfg.cap, "Largest order scanned")->check(CLI::PositiveNumber); };

  auto* solve = app.add_subcommand("solve", "Torsion points and certified cosets on V");
  add_input(solve);
  add_cap(solve);
  solve->add_option("--probe", cfg.probe, "Look for extra cosets up to this order")->check(CLI::PositiveNumber);
  solve->add_option("--budget", cfg.budget, "Maximum number of orbit representatives examined")
      ->check(CLI::PositiveNumber);
  solve->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_common(solve);

  auto* enumerate = app.add_subcommand("enumerate", "All torsion points up to --cap by direct evaluation");
  add_input(enumerate);
  add_cap(enumerate);
  add_common(enumerate);

  auto* certify = app.add_subcommand("certify", "Coset certificates for a point or for every point up to --cap");
  add_input(certify);
  add_cap(certify);
  certify->add_option("--point", cfg.point, "Torsion point as N:a1,a2,...");
  add_common(certify);

  auto* decompose = app.add_subcommand("decompose", "Short-exponent decomposition of a torsion point");
  decompose->add_option("--point", cfg.point, "Torsion point as N:a1,a2,...")->required();
  add_common(decompose);

  auto* bound = app.add_subcommand("bound", "Order beyond which every torsion point lies on a certified coset");
  add_input(bound);
  add_common(bound);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*solve) return run_solve(cfg);
    if (*enumerate) return run_enumerate(cfg);
    if (*certify) return run_certify(cfg);
    if (*decompose) return run_decompose(cfg);
    return run_bound(cfg);
  } catch (const torsion::io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 1;
  }
}
