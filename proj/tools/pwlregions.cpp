// pwlregions: bounds, witness construction and exact region enumeration for
// piecewise-linear networks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwl/acceptance.hpp"
#include "pwl/bounds.hpp"
#include "pwl/constructions.hpp"
#include "pwl/linmap.hpp"
#include "pwl/network_io.hpp"
#include "pwl/region_io.hpp"
#include "pwl/regions.hpp"

using namespace pwl;

namespace {

enum Exit { kOk = 0, kExpectation = 1, kUsage = 2, kCap = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Network read_network(const std::string& path) {
  if (path.empty() || path == "-") return network_from_json(read_all(std::cin));
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return network_from_json(read_all(in));
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Vector parse_point(const std::string& s, int dim) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad coordinate '" + item + "' in point '" + s + "'");
    }
  }
  if (static_cast<int>(v.size()) != dim)
    throw UsageError("point '" + s + "' has " + std::to_string(v.size()) + " coordinates, expected " +
                     std::to_string(dim));
  return Eigen::Map<Vector>(v.data(), dim);
}

struct BoxArgs {
  double halfwidth = 1e3;
  std::vector<double> lower, upper;

  Box resolve(int dim) const {
    if (lower.empty() && upper.empty()) return Box::symmetric(dim, halfwidth);
    if (static_cast<int>(lower.size()) != dim || static_cast<int>(upper.size()) != dim)
      throw UsageError("--lower/--upper need " + std::to_string(dim) + " values each");
    return Box{Eigen::Map<const Vector>(lower.data(), dim), Eigen::Map<const Vector>(upper.data(), dim)};
  }
};

void add_box_options(CLI::App* cmd, BoxArgs& b) {
  cmd->add_option("--box", b.halfwidth, "Half-width B of the box [-B, B]^n0")->capture_default_str();
  cmd->add_option("--lower", b.lower, "Box lower corner (comma separated)")->delimiter(',');
  cmd->add_option("--upper", b.upper, "Box upper corner (comma separated)")->delimiter(',');
}

struct FeasArgs {
  FeasibilityConfig cfg;
  BoxArgs box;
};

void add_feasibility_options(CLI::App* cmd, FeasArgs& f) {
  add_box_options(cmd, f.box);
  cmd->add_option("--eps", f.cfg.eps_feas, "Chebyshev radius a cell needs to count")->capture_default_str();
  cmd->add_flag("--exact", f.cfg.exact_rational, "Re-decide borderline cells in rational arithmetic");
  cmd->add_option("--cap", f.cfg.region_cap, "Cell budget; exceeding it exits with 3")->capture_default_str();
  cmd->add_option("--workers", f.cfg.workers, "Threads (0: runtime default)")->capture_default_str();
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
  int n0 = 0;
  std::vector<int> widths;
  int rank = 1;
  std::string format = "json";
};

int run_bounds(const BoundsArgs& a) {
  NetworkStructure s;
  try {
    s = a.rank > 1 ? NetworkStructure::maxout(a.n0, a.widths, a.rank)
                   : NetworkStructure::rectifier(a.n0, a.widths);
    s.validate();
  } catch (const StructureError& e) {
    throw UsageError(e.what());
  }
  const auto report = bound_report(s);
  std::cout << (a.format == "text" ? bound_report_text(report) : bound_report_json(report));
  return kOk;
}

struct ConstructArgs {
  std::string kind;
  int p = 3;
  bool threshold = false;
  int n0 = 2;
  std::vector<int> widths;
  bool unrefined = false;
  int n = 3, m = 0, k = 2, L = 2;
  double delta = 1e-2;
  std::uint64_t seed = 0;
  std::string out, witness_out;
};

int run_construct(const ConstructArgs& a) {
  Witness w;
  const std::string& kind = a.kind;
  if (kind == "sawtooth") {
    w = build_sawtooth_witness(a.p, a.threshold);
  } else if (kind == "folding") {
    if (a.widths.empty()) throw UsageError("folding needs --widths");
    FoldingOptions opt;
    opt.refined = !a.unrefined;
    opt.seed = a.seed;
    w = build_folding_rectifier_net(a.n0, a.widths, opt);
  } else if (kind == "abs") {
    w = build_abs_net();
  } else if (kind == "maxout-parallel") {
    w = build_maxout_parallel(a.n, a.m > 0 ? a.m : a.n, a.k);
  } else if (kind == "maxout-cones") {
    w = build_maxout_cones(a.n0, a.L, a.k, {a.delta, true});
  } else if (kind == "rank2-maxout") {
    w = build_rank2_folding_maxout(a.n0, a.L);
  } else if (kind == "rank2-rectifier") {
    w = build_rank2_folding_maxout(a.n0, a.L);
    const auto sim = rank2_maxout_as_rectifier(w.net, Box::symmetric(a.n0, 1e3), 1000, a.seed);
    w.net = sim.net;
    w.spec.widths = w.net.structure().widths();
    w.spec.basis += "; rectifier simulation, certificate " + format_double(sim.certificate);
  } else if (kind == "shi") {
    w = build_shi_layer(a.n);
  } else if (kind == "catalan") {
    w = build_catalan_layer(a.n);
  } else {
    throw UsageError("unknown kind '" + kind + "'");
  }
  w.spec.seed = a.seed;
  write_text(a.out, network_to_json(w.net));
  if (!a.witness_out.empty()) write_text(a.witness_out, witness_spec_json(w.spec));
  return kOk;
}

struct EnumerateArgs {
  std::string input;
  FeasArgs feas;
  long long expect = -1;
  bool cells = false;
  bool summary = false;
  std::string format = "json";
  std::string out;
};

int run_enumerate(const EnumerateArgs& a) {
  const Network net = read_network(a.input);
  const Box box = a.feas.box.resolve(net.input_dim);
  const auto rs = enumerate_regions(net, box, a.feas.cfg);
  if (a.format == "text") {
    std::ostringstream t;
    t << "linear regions " << rs.count() << "\ncells " << rs.cell_count() << "\n";
    if (!a.summary)
      for (std::size_t i = 0; i < rs.regions.size(); ++i)
        t << pattern_code(rs.regions[i].pattern) << "  region " << rs.linear_region_of[i] << "\n";
    write_text(a.out, t.str());
  } else {
    write_text(a.out, region_report_json(rs, !a.summary));
  }
  if (a.expect >= 0) {
    const std::size_t got = a.cells ? rs.cell_count() : rs.count();
    const char* what = a.cells ? "cells" : "linear regions";
    if (got != static_cast<std::size_t>(a.expect)) {
      std::cerr << "expectation failed: expected " << a.expect << " " << what << ", enumerated "
                << got << "\n";
      return kExpectation;
    }
  }
  return kOk;
}

struct OracleArgs {
  std::string input;
  BoxArgs box;
  std::size_t resolution = 401;
  bool patterns = false;
  int workers = 0;
};

int run_oracle(const OracleArgs& a) {
  const Network net = read_network(a.input);
  if (net.input_dim > 2) throw UsageError("the grid oracle needs n0 <= 2");
  const Box box = a.box.resolve(net.input_dim);
  const std::size_t c = a.patterns ? oracle_count_patterns_by_grid(net, box, a.resolution, a.workers)
                                   : oracle_count_by_grid(net, box, a.resolution, a.workers);
  std::cout << c << "\n";
  return kOk;
}

struct Regions2dArgs {
  std::string input;
  FeasArgs feas;
  std::string csv = "regions.csv", svg = "regions.svg";
};

int run_regions2d(const Regions2dArgs& a) {
  const Network net = read_network(a.input);
  if (net.input_dim != 2) throw UsageError("regions2d needs a two-input network");
  const auto rs = enumerate_regions(net, a.feas.box.resolve(2), a.feas.cfg);
  std::vector<std::string> warnings;
  const auto polys = region_polygons_2d(rs, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  write_text(a.csv, polygons_csv(polys));
  write_text(a.svg, polygons_svg(polys, rs));
  std::cerr << polys.size() << " polygons, " << rs.count() << " linear regions\n";
  return kOk;
}

struct UnitArgs {
  std::string input;
  int layer = 1, unit = 1;
};

void check_unit_args(const Network& net, const UnitArgs& u) {
  if (u.layer < 1 || u.layer > net.depth())
    throw UsageError("--layer must be in 1.." + std::to_string(net.depth()));
  if (u.unit < 1 || u.unit > net.layers[u.layer - 1].width)
    throw UsageError("--unit must be in 1.." + std::to_string(net.layers[u.layer - 1].width));
}

nlohmann::ordered_json map_json(const AffineMap& m) {
  std::vector<double> u(m.matrix.data(), m.matrix.data() + m.matrix.size());
  return {{"u", u}, {"c", m.offset[0]}};
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

struct LinmapArgs {
  UnitArgs unit;
  std::string points;
  std::size_t max_pieces = 0;
};

int run_linmap(const LinmapArgs& a) {
  const Network net = read_network(a.unit.input);
  check_unit_args(net, a.unit);
  std::ifstream in(a.points);
  if (!in) throw UsageError("cannot open points file " + a.points);
  std::vector<Vector> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    samples.push_back(parse_point(line, net.input_dim));
  }
  if (samples.empty()) throw UsageError("points file is empty");
  auto pieces = enumerate_unit_pieces(net, a.unit.layer - 1, a.unit.unit - 1, samples);
  if (a.max_pieces > 0 && pieces.size() > a.max_pieces) pieces.resize(a.max_pieces);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& p : pieces)
    out.push_back({{"map", map_json(p.map)},
                   {"representative", to_std(p.representative)},
                   {"activation", p.activation}});
  std::cout << out.dump(2) << "\n";
  return kOk;
}

struct IdentifyArgs {
  UnitArgs unit;
  std::string x1, x2;
  double tol = 1e-10;
};

int run_identify(const IdentifyArgs& a) {
  const Network net = read_network(a.unit.input);
  check_unit_args(net, a.unit);
  const auto pair = find_identified_pair(net, a.unit.layer - 1, a.unit.unit - 1,
                                         parse_point(a.x1, net.input_dim),
                                         parse_point(a.x2, net.input_dim), a.tol);
  nlohmann::ordered_json out{{"x1", to_std(pair.x1)},
                             {"x2_adjusted", to_std(pair.x2)},
                             {"map1", map_json(pair.map1)},
                             {"map2", map_json(pair.map2)},
                             {"gap", pair.gap},
                             {"same_region", pair.same_region}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

struct VerifyArgs {
  AcceptanceOptions opt;
};

int run_verify(const VerifyArgs& a) {
  const auto report = run_acceptance(a.opt);
  std::cout << acceptance_text(report);
  return report.all_passed() ? kOk : kExpectation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear regions of rectifier and maxout networks: bounds, witness networks, "
               "exact enumeration."};
  app.require_subcommand(1);
  std::function<int()> action;

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand(
      "bounds",
      "Region bounds for a structure. Exercises the shallow count sum_{j<=n0} C(n1,j), the "
      "2^N pattern bound, the deep folding lower bound prod floor(n_l/n0)^n0 * sum C(n_L,j) "
      "and its remainder refinement, the single-layer maxout bounds and k^(L-1+n0).");
  c_bounds->add_option("--n0", bounds.n0, "Input dimension")->required();
  c_bounds->add_option("--widths", bounds.widths, "Hidden widths, comma separated")
      ->required()->delimiter(',');
  c_bounds->add_option("--maxout-rank", bounds.rank, "Maxout rank k (1: rectifier)")->capture_default_str();
  c_bounds->add_option("--format", bounds.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  c_bounds->callback([&] { action = [&] { return run_bounds(bounds); }; });

  ConstructArgs cons;
  auto* c_cons = app.add_subcommand(
      "construct",
      "Build a witness network (JSON on stdout). Exercises the sawtooth fold "
      "h(x) = x + 2 sum (-1)^i (x - i), the layer-wise folding construction, the (|x1|,|x2|) "
      "quadrant net, parallel and Shi/Catalan maxout arrangements, rotated maxout cones and the "
      "rank-2 maxout to rectifier simulation.");
  c_cons->add_option("--kind", cons.kind,
                     "sawtooth | folding | abs | maxout-parallel | maxout-cones | rank2-maxout | "
                     "rank2-rectifier | shi | catalan")
      ->required()
      ->check(CLI::IsMember({"sawtooth", "folding", "abs", "maxout-parallel", "maxout-cones",
                             "rank2-maxout", "rank2-rectifier", "shi", "catalan"}));
  c_cons->add_option("--p", cons.p, "Sawtooth folds")->capture_default_str();
  c_cons->add_flag("--threshold", cons.threshold, "Sawtooth: read out max(0, h - 1/2)");
  c_cons->add_option("--n0", cons.n0, "Input dimension")->capture_default_str();
  c_cons->add_option("--widths", cons.widths, "Folding widths")->delimiter(',');
  c_cons->add_flag("--unrefined", cons.unrefined, "Folding: zero the remainder units");
  c_cons->add_option("--n", cons.n, "Maxout input dimension")->capture_default_str();
  c_cons->add_option("--m", cons.m, "Maxout units (default n)");
  c_cons->add_option("--k", cons.k, "Maxout rank")->capture_default_str();
  c_cons->add_option("--L", cons.L, "Layers")->capture_default_str();
  c_cons->add_option("--delta", cons.delta, "Cones rotation angle (radians)")->capture_default_str();
  c_cons->add_option("--seed", cons.seed, "Seed")->capture_default_str();
  c_cons->add_option("-o,--out", cons.out, "Network file (default stdout)");
  c_cons->add_option("--witness-out", cons.witness_out, "Write the witness description here");
  c_cons->callback([&] { action = [&] { return run_construct(cons); }; });

  EnumerateArgs en;
  auto* c_en = app.add_subcommand(
      "enumerate",
      "Exact linear regions over a box by layer-wise subdivision with max-slack LPs. Exercises "
      "the counting recursion over pattern cells and the 2^N pattern bound; --expect makes the "
      "count a check (exit 1 on mismatch).");
  c_en->add_option("network", en.input, "Network JSON (default or '-': stdin)");
  add_feasibility_options(c_en, en.feas);
  c_en->add_option("--expect", en.expect, "Required count");
  c_en->add_flag("--cells", en.cells, "--expect counts pattern cells, not linear regions");
  c_en->add_flag("--summary", en.summary, "Counts only, no geometry");
  c_en->add_option("--format", en.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  c_en->add_option("-o,--out", en.out, "Report file (default stdout)");
  c_en->callback([&] { action = [&] { return run_enumerate(en); }; });

  OracleArgs orc;
  auto* c_orc = app.add_subcommand(
      "oracle",
      "Grid brute force for n0 <= 2, independent of the LP path: connected grid components of "
      "equal local affine map (or distinct patterns with --patterns).");
  c_orc->add_option("network", orc.input, "Network JSON (default or '-': stdin)");
  add_box_options(c_orc, orc.box);
  c_orc->add_option("--resolution", orc.resolution, "Samples per axis")->capture_default_str();
  c_orc->add_flag("--patterns", orc.patterns, "Count distinct activation patterns");
  c_orc->add_option("--workers", orc.workers, "Threads")->capture_default_str();
  c_orc->callback([&] { action = [&] { return run_oracle(orc); }; });

  Regions2dArgs r2;
  auto* c_r2 = app.add_subcommand(
      "regions2d",
      "Polygons of every cell of a two-input network as CSV (region_id,vertex_index,x,y) and "
      "SVG, to draw the arrangement a net induces on the plane.");
  c_r2->add_option("network", r2.input, "Network JSON (default or '-': stdin)");
  add_feasibility_options(c_r2, r2.feas);
  c_r2->add_option("--csv", r2.csv, "CSV output")->capture_default_str();
  c_r2->add_option("--svg", r2.svg, "SVG output")->capture_default_str();
  c_r2->callback([&] { action = [&] { return run_regions2d(r2); }; });

  LinmapArgs lm;
  auto* c_lm = app.add_subcommand(
      "linmap",
      "Distinct affine responses u.x + c of one unit over sample points where it is positive; "
      "u is the unit's weight row times the indicator-masked weights below it.");
  c_lm->add_option("network", lm.unit.input, "Network JSON")->required();
  c_lm->add_option("--layer", lm.unit.layer, "Layer, 1-based")->required();
  c_lm->add_option("--unit", lm.unit.unit, "Unit, 1-based")->required();
  c_lm->add_option("--points", lm.points, "CSV file, one point per row")->required();
  c_lm->add_option("--max-pieces", lm.max_pieces, "Keep at most this many maps (0: all)");
  c_lm->callback([&] { action = [&] { return run_linmap(lm); }; });

  IdentifyArgs id;
  auto* c_id = app.add_subcommand(
      "identify",
      "Move x2 inside its region until the unit's activation equals the one at x1, giving two "
      "inputs from different regions that the unit maps to the same value.");
  c_id->add_option("network", id.unit.input, "Network JSON")->required();
  c_id->add_option("--layer", id.unit.layer, "Layer, 1-based")->required();
  c_id->add_option("--unit", id.unit.unit, "Unit, 1-based")->required();
  c_id->add_option("--x1", id.x1, "First point, comma separated")->required();
  c_id->add_option("--x2", id.x2, "Point to move, comma separated")->required();
  c_id->add_option("--tol", id.tol, "Activation tolerance")->capture_default_str();
  c_id->callback([&] { action = [&] { return run_identify(id); }; });

  VerifyArgs va;
  auto* c_va = app.add_subcommand(
      "verify-all",
      "Run the acceptance criteria (shallow attainment, 2^N bound, folding witnesses, remainder "
      "refinement, maxout counts, cones, rank-2 simulation, linear maps, identification, "
      "perturbation stability, determinism) and print a pass/fail table.");
  c_va->add_option("--seed", va.opt.seed, "Seed")->capture_default_str();
  c_va->add_option("--workers", va.opt.workers, "Threads for the parallel comparison")
      ->capture_default_str();
  c_va->callback([&] { action = [&] { return run_verify(va); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const RegionBudgetExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExpectation;
  }
}
