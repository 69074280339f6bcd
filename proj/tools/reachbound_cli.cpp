// reachbound: command-line front end for the reachbound library.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "reachbound/reachbound.hpp"

using namespace reachbound;

namespace {

void emit_json(const nlohmann::json& j, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(output, j);
  }
}

struct GenArgs {
  std::string kind = "arc";
  ShapeSpec spec;
  std::string output, svg;
};

struct ProfileArgs {
  std::string input, mesh, output, svg;
  double beta_max = kInfinity;
  std::vector<double> fit;
};

struct ReachArgs {
  std::string input, output, svg;
  double epsilon = 0.0;
};

struct RconvArgs {
  std::string input, output, svg;
  double epsilon = 0.0;
  double r_max = 4.0;
  double r = 0.0;
};

struct ConvergenceArgs {
  std::string set = "set_U";
  ConvergenceConfig cfg;
  std::string output, svg;
  bool runtime = false;
};

void run_gen(const GenArgs& a) {
  ShapeSpec spec = a.spec;
  spec.kind = parse_shape_kind(a.kind);
  const auto sample = generate(spec);
  if (sample.is_grid()) {
    const auto& g = sample.grid();
    if (a.output.empty() || a.output == "-") write_grid(std::cout, g);
    else save_grid(a.output, g);
    if (!a.svg.empty()) save_points_svg(a.svg, g.phi, g.inside, std::string(to_string(spec.kind)));
    std::cerr << "epsilon " << format_number(g.epsilon) << '\n';
  } else {
    const auto& c = sample.cloud();
    if (a.output.empty() || a.output == "-") write_cloud(std::cout, c);
    else save_cloud(a.output, c);
    if (!a.svg.empty()) save_points_svg(a.svg, c, {}, std::string(to_string(spec.kind)));
    std::cerr << "hausdorff_bound " << format_number(sample.truth.hausdorff_bound) << '\n';
  }
}

void run_profile(const ProfileArgs& a) {
  const PointCloud cloud = load_cloud(a.input);
  const ProfileOptions opts{a.beta_max, true};
  BetaReachProfile p;
  if (!a.mesh.empty()) {
    const TriangleMesh mesh = load_off(a.mesh);
    p = profile(cloud, MeshOracle(mesh), opts);
  } else {
    p = profile(cloud, CloudOracle(cloud), opts);
  }
  if (a.output.empty() || a.output == "-") write_profile_csv(std::cout, p);
  else save_profile_csv(a.output, p);
  if (!a.svg.empty()) save_profile_svg(a.svg, p);
  if (!a.fit.empty()) {
    if (a.fit.size() != 2) throw PreconditionError("--fit takes two values: beta_lo beta_hi");
    std::cerr << to_json(fit_profile(p, a.fit[0], a.fit[1])).dump(2) << '\n';
  }
}

void run_reach(const ReachArgs& a) {
  const PointCloud cloud = load_cloud(a.input);
  const auto r = reach_upper_bound(cloud, a.epsilon);
  emit_json(to_json(r), a.output);
  if (!a.svg.empty()) {
    std::vector<std::uint8_t> hot(cloud.size(), 0);
    if (r.witness) hot[r.witness->i] = hot[r.witness->j] = 1;
    save_points_svg(a.svg, cloud, hot, "reach bound witness");
  }
}

void run_rconv(const RconvArgs& a) {
  const LabeledGrid grid = load_grid(a.input, a.epsilon);
  const auto r = rconv_upper_bound(grid, a.epsilon, a.r_max);
  emit_json(to_json(r), a.output);
  if (!a.svg.empty()) {
    std::vector<std::uint8_t> hot(grid.size(), 0);
    if (r.witness) hot[*r.witness] = 1;
    save_points_svg(a.svg, grid.phi, hot, "rconv bound witness");
  }
}

void run_flag(const RconvArgs& a) {
  const LabeledGrid grid = load_grid(a.input, a.epsilon);
  const auto v = closing_violations(grid, a.r, a.epsilon);
  if (a.output.empty() || a.output == "-") write_cloud(std::cout, grid.phi.select(v.points));
  else save_xyz(a.output, grid.phi, v.points);
  if (!a.svg.empty()) {
    std::vector<std::uint8_t> hot(grid.size(), 0);
    for (auto q : v.points) hot[q] = 1;
    save_points_svg(a.svg, grid.phi, hot, "closing violations");
  }
  std::cerr << v.points.size() << " flagged\n";
}

void run_conv(ConvergenceArgs a) {
  a.cfg.set_kind = parse_shape_kind(a.set);
  const auto table = run_convergence(a.cfg);
  if (a.output.empty() || a.output == "-") {
    write_experiment_csv(std::cout, table, a.runtime);
  } else {
    std::ofstream out(a.output);
    if (!out) throw std::runtime_error("cannot write '" + a.output + "'");
    write_experiment_csv(out, table, a.runtime);
  }
  nlohmann::json fits;
  std::vector<ErrorSeries> series;
  for (auto [col, name] : {std::pair{BoundColumn::rconv, "rconv"}, std::pair{BoundColumn::reach, "reach"}}) {
    ErrorSeries s{name, {}, {}, {}, {}};
    for (const auto& c : summarize(table, col)) {
      s.x.push_back(c.n);
      s.y.push_back(c.mean);
      s.lo.push_back(c.ci_lo);
      s.hi.push_back(c.ci_hi);
    }
    series.push_back(s);
    try {
      const auto f = rate_fit(table, col, a.cfg.truth);
      fits[name] = {{"coefficient", f.coefficient}, {"exponent", f.exponent}, {"points", f.points}};
    } catch (const PreconditionError& e) {
      fits[name] = {{"error", e.what()}};
    }
  }
  std::cerr << fits.dump(2) << '\n';
  if (!a.svg.empty()) save_errorbar_svg(a.svg, series, a.set, "n", "mean bound");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upper bounds on reach and r-convexity from samples; beta-reach profiles."};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic cloud or labeled grid");
  g->add_option("--kind", gen.kind, "two_rays|arc|c2_graph|paraboloid|two_spheres|disk|set_U|set_W")
      ->required();
  g->add_option("-n,--count", gen.spec.n, "Sample count (points per ray for two_rays)");
  g->add_option("--seed", gen.spec.seed);
  g->add_option("--angle", gen.spec.angle);
  g->add_option("--radius", gen.spec.radius);
  g->add_option("--length", gen.spec.length);
  g->add_option("--focal", gen.spec.focal);
  g->add_option("--extent", gen.spec.extent);
  g->add_option("--h1", gen.spec.h1);
  g->add_option("--h2", gen.spec.h2);
  g->add_option("--center-gap", gen.spec.center_gap);
  g->add_option("--ambient-dim", gen.spec.ambient_dim);
  g->add_option("--manifold-dim", gen.spec.manifold_dim);
  g->add_option("--spacing", gen.spec.spacing, "Lattice spacing for grid kinds");
  g->add_option("--window", gen.spec.window);
  g->add_option("--margin", gen.spec.margin);
  g->add_option("-o,--output", gen.output, "Cloud or grid file (default stdout)");
  g->add_option("--svg", gen.svg);

  ProfileArgs prof;
  auto* p = app.add_subcommand("profile", "Beta-reach profile of a cloud, as CSV");
  p->add_option("-i,--input", prof.input)->required();
  p->add_option("--mesh", prof.mesh, "OFF mesh used as the reference set");
  p->add_option("--beta-max", prof.beta_max, "Compute the profile only on [0, beta-max]");
  p->add_option("--fit", prof.fit, "Fit a line on [lo, hi]; printed as JSON on stderr")->expected(2);
  p->add_option("-o,--output", prof.output);
  p->add_option("--svg", prof.svg);

  ReachArgs reach;
  auto* r = app.add_subcommand("reach-bound", "Upper bound on the reach from a cloud");
  r->add_option("-i,--input", reach.input)->required();
  r->add_option("-e,--epsilon", reach.epsilon, "Hausdorff distance to the sampled set")->required();
  r->add_option("-o,--output", reach.output, "JSON file (default stdout)");
  r->add_option("--svg", reach.svg);

  RconvArgs rconv;
  auto* rc = app.add_subcommand("rconv-bound", "Upper bound on r-convexity from a labeled grid");
  rc->add_option("-i,--input", rconv.input)->required();
  rc->add_option("-e,--epsilon", rconv.epsilon, "Covering radius of the grid")->required();
  rc->add_option("--r-max", rconv.r_max);
  rc->add_option("-o,--output", rconv.output, "JSON file (default stdout)");
  rc->add_option("--svg", rconv.svg);

  RconvArgs flag;
  auto* f = app.add_subcommand("rconv-flag", "Export outside points recaptured by the closing at radius r");
  f->add_option("-i,--input", flag.input)->required();
  f->add_option("-e,--epsilon", flag.epsilon)->required();
  f->add_option("-r,--radius", flag.r)->required();
  f->add_option("-o,--output", flag.output, "XYZ file of flagged points (default stdout)");
  f->add_option("--svg", flag.svg);

  ConvergenceArgs conv;
  auto* c = app.add_subcommand("convergence", "Seeded convergence experiment on set_U or set_W");
  c->add_option("--set", conv.set, "set_U or set_W");
  c->add_option("--n-list", conv.cfg.n_list)->delimiter(',');
  c->add_option("--reps", conv.cfg.reps);
  c->add_option("--seed", conv.cfg.base_seed, "Row k uses seed + k");
  c->add_option("--window", conv.cfg.window);
  c->add_option("--margin", conv.cfg.margin);
  c->add_option("--r-max", conv.cfg.r_max);
  c->add_option("--epsilon-scale", conv.cfg.epsilon_scale, "Reach epsilon as a multiple of the spacing");
  c->add_flag("--runtime", conv.runtime, "Add a wall-clock runtime column");
  c->add_option("-o,--output", conv.output, "CSV file (default stdout)");
  c->add_option("--svg", conv.svg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*g) run_gen(gen);
    else if (*p) run_profile(prof);
    else if (*r) run_reach(reach);
    else if (*rc) run_rconv(rconv);
    else if (*f) run_flag(flag);
    else if (*c) run_conv(conv);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
