#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hhs/asdim.hpp"
#include "hhs/cusped.hpp"
#include "hhs/errors.hpp"
#include "hhs/factored.hpp"
#include "hhs/free_group.hpp"
#include "hhs/hull.hpp"
#include "hhs/instances.hpp"
#include "hhs/realization.hpp"
#include "hhs/rotating.hpp"
#include "hhs/version.hpp"

using namespace hhs;
using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct Outcome {
  json result;
  bool pass = true;
};

struct Globals {
  std::uint64_t seed = 1;
  std::string report = "-";
  std::string csv;
  std::size_t pair_budget = 250000;
  std::size_t samples = 20000;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  CheckOptions check() const {
    CheckOptions o;
    o.seed = seed;
    o.pair_budget = pair_budget;
    o.sample_pairs = samples;
    return o;
  }
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ParseError((path == "-" ? std::string("<stdin>") : path) + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

HierarchicalStructure load_structure(const std::string& path) {
  HierarchicalStructure h = structure_from_json(read_json(path));
  if (auto bad = validate_structure(h)) throw StructuralError(*bad);
  return h;
}

// A graph file, a structure (its ambient), or a cusped graph.
FiniteMetricGraph load_space(const std::string& path) {
  json j = read_json(path);
  if (j.contains("ambient")) return graph_from_json(j.at("ambient"));
  if (j.contains("graph")) return graph_from_json(j.at("graph"));
  return graph_from_json(j);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
  if (path.empty()) return;
  std::string text;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) text += (i ? "," : "") + r[i];
    text += "\n";
  }
  write_text(path, text);
}

std::vector<int> ints(const std::string& csv) {
  std::vector<int> v;
  std::stringstream ss(csv);
  std::string t;
  while (std::getline(ss, t, ',')) {
    try {
      v.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw ParseError("expected integers, got '" + csv + "'");
    }
  }
  return v;
}

std::vector<std::string> words(const std::string& csv) {
  std::vector<std::string> v;
  std::stringstream ss(csv);
  std::string t;
  while (std::getline(ss, t, ','))
    if (!t.empty()) v.push_back(fg::word_of(t));
  return v;
}

json config_of(const CLI::App* app) {
  json c = json::object();
  for (const CLI::App* a = app; a; a = a->get_parent())
    for (const CLI::Option* o : a->get_options()) {
      const std::string name = o->get_name(false, false);
      if (name.empty() || o == a->get_help_ptr() || name == "--version" || name == "--config") continue;
      if (c.contains(name)) continue;
      if (o->get_expected_max() == 0) {
        c[name] = o->count() > 0;
        continue;
      }
      auto res = o->results();
      if (res.empty()) c[name] = o->get_default_str();
      else if (res.size() == 1) c[name] = res.front();
      else c[name] = res;
    }
  return c;
}

std::string command_of(const CLI::App* app) {
  std::string s;
  for (const CLI::App* a = app; a && a->get_parent(); a = a->get_parent()) s = a->get_name() + (s.empty() ? "" : " " + s);
  return s;
}

VertexSet id_set(const FiniteMetricGraph& g, const json& j) {
  VertexSet s;
  for (const auto& x : j) s.push_back(g.at(x.is_string() ? x.get<std::string>() : x.dump()));
  return normalized(s);
}

Cover cover_of(const FiniteMetricGraph& g, const json& j) { return cover_from_json(g, j); }

json multiplicity_json(const FiniteMetricGraph& g, const Multiplicity& m, Length r) {
  return {{"radius", r}, {"m", m.m}, {"center", m.center >= 0 ? json(g.id(m.center)) : json()}};
}

std::vector<std::vector<std::string>> multiplicity_rows(const FiniteMetricGraph& g, const Cover& c, Length upto) {
  std::vector<std::vector<std::string>> rows{{"r", "multiplicity"}};
  for (std::int64_t r = 0; r <= std::max<std::int64_t>(upto.ceil_units(), 0); ++r)
    rows.push_back({std::to_string(r), std::to_string(multiplicity(g, c, Length::units(r)).m)});
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical structures on finite metric graphs"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config");
  app.require_subcommand(1);
  app.fallthrough();
  Globals G;
  app.add_option("--seed", G.seed, "random seed")->capture_default_str();
  app.add_option("--report", G.report, "report path (- for stdout)")->capture_default_str();
  app.add_option("--csv", G.csv, "CSV table path");
  app.add_option("--pair-budget", G.pair_budget, "pairs scanned exhaustively")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--samples", G.samples, "sampled pairs above the budget")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--workers", G.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  std::map<const CLI::App*, std::function<Outcome()>> run;
  // build writes the structure itself rather than a report
  std::map<const CLI::App*, std::function<HierarchicalStructure()>> builders;

  // build
  auto* build = app.add_subcommand("build", "construct an instance")->require_subcommand(1);
  std::string dims = "10,10";
  auto* b_grid = build->add_subcommand("grid");
  b_grid->add_option("--dims", dims)->capture_default_str();
  builders[b_grid] = [&] { return grid_instance({ints(dims)}); };
  int tree_n = 100;
  auto* b_tree = build->add_subcommand("tree");
  b_tree->add_option("--n", tree_n)->capture_default_str()->check(CLI::PositiveNumber);
  builders[b_tree] = [&] { return tree_instance(random_tree(tree_n, G.seed)); };
  int depth = 6, spacing = 1;
  auto* b_bin = build->add_subcommand("binary");
  b_bin->add_option("--depth", depth)->capture_default_str();
  b_bin->add_option("--spacing", spacing)->capture_default_str();
  builders[b_bin] = [&] { return tree_instance(binary_tree(depth, spacing)); };
  std::string left, right;
  auto* b_prod = build->add_subcommand("product");
  b_prod->add_option("--left", left)->required();
  b_prod->add_option("--right", right)->required();
  builders[b_prod] = [&] { return product_instance(load_structure(left), load_structure(right)); };
  std::string rel_spec;
  auto* b_rel = build->add_subcommand("relative");
  b_rel->add_option("--spec", rel_spec);
  builders[b_rel] = [&] {
    return relative_instance(rel_spec.empty() ? default_relative_spec() : relative_spec_from_json(read_json(rel_spec)));
  };
  CayleyBallSpec ball{2, 10, "a", -1};
  auto ball_opts = [&](CLI::App* a) {
    a->add_option("--rank", ball.rank)->capture_default_str();
    a->add_option("--radius", ball.radius)->capture_default_str();
    a->add_option("--subgroup", ball.subgroup)->capture_default_str();
    a->add_option("--coset-depth", ball.coset_depth)->capture_default_str();
  };
  auto* b_ball = build->add_subcommand("freeball");
  ball_opts(b_ball);
  builders[b_ball] = [&] {
    FreeBall fb = free_ball(ball);
    HierarchicalStructure h = tree_instance(fb.graph);
    json cosets = json::array();
    for (const auto& c : fb.cosets) {
      json m = json::array();
      for (Vertex v : c.members) m.push_back(fb.graph.id(v));
      cosets.push_back({{"rep", fg::id_of(c.rep)}, {"members", m}});
    }
    h.meta = {{"kind", "freeball"}, {"rank", ball.rank}, {"radius", ball.radius}, {"subgroup", ball.subgroup},
              {"coset_depth", fb.spec.coset_depth}, {"cosets", cosets}};
    return h;
  };

  // check
  std::string input, axiom = "all";
  auto* check = app.add_subcommand("check", "run the axiom checkers");
  check->add_option("structure", input, "structure JSON or -")->required();
  check->add_option("--axiom", axiom)
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "relations", "proj", "consistency", "bgi", "links", "realization", "uniqueness"}));
  run[check] = [&] {
    auto h = load_structure(input);
    auto reports = run_axiom_suite(h, axiom, G.check());
    json r = json::array();
    for (const auto& x : reports) r.push_back(to_json(x));
    return Outcome{{{"structure", h.name}, {"checks", r}}, all_pass(reports)};
  };

  // factor
  std::string domains;
  bool minimal = false, all_prop = false, cone_pr = false;
  auto* fac = app.add_subcommand("factor", "cone off parallel copies");
  fac->add_option("structure", input)->required();
  auto* o_dom = fac->add_option("--domains", domains);
  fac->add_flag("--minimal", minimal)->excludes(o_dom);
  fac->add_flag("--all-proper", all_prop)->excludes(o_dom);
  fac->add_flag("--cone-product-regions", cone_pr);
  run[fac] = [&] {
    auto h = load_structure(input);
    std::vector<Domain> U;
    if (minimal) U = h.index.minimal_elements();
    else if (all_prop) U = all_proper(h);
    else if (!domains.empty()) U = domains_from_names(h, domains);
    else throw CLI::ValidationError("factor", "one of --domains, --minimal, --all-proper is required");
    FactoredSpace f = factor(h, U, cone_pr);
    json names = json::array();
    for (Domain u : f.factored) names.push_back(h.index.name(u));
    bool exhaustive = true;
    auto pairs = scan_pairs(h.ambient.size(), G.check(), exhaustive);
    std::vector<std::vector<std::string>> rows{{"x", "y", "d", "dhat"}};
    for (auto [x, y] : pairs)
      rows.push_back({h.ambient.id(x), h.ambient.id(y), h.ambient.d(x, y).str(), f.graph.d(x, y).str()});
    write_csv(G.csv, rows);
    return Outcome{{{"factored", names},
                    {"cone_edges", f.cone_edges},
                    {"pairs", pairs.size()},
                    {"exhaustive", exhaustive},
                    {"structure", structure_to_json(f.induced)}},
                   true};
  };

  // realize / gate / dformula / hull
  std::string tuple_path, set_path, point, kappa = "0", threshold = "1", center, radius = "1", qD = "1";
  auto* rea = app.add_subcommand("realize", "realize a consistent tuple");
  rea->add_option("structure", input)->required();
  rea->add_option("--tuple", tuple_path)->required();
  rea->add_option("--kappa", kappa)->capture_default_str();
  run[rea] = [&] {
    auto h = load_structure(input);
    Tuple t = tuple_from_json(h, read_json(tuple_path));
    Length k = Length::parse(kappa);
    auto c = is_consistent(h, t, k);
    auto r = realize(h, t, k);
    return Outcome{{{"consistent", c.consistent}, {"consistency", c.witness}, {"realization", to_json(h, r)}},
                   c.consistent && r.within_contract};
  };
  auto* gat = app.add_subcommand("gate", "gate of a point into a set");
  gat->add_option("structure", input)->required();
  gat->add_option("--set", set_path)->required();
  gat->add_option("--point", point)->required();
  run[gat] = [&] {
    auto h = load_structure(input);
    VertexSet Y = id_set(h.ambient, read_json(set_path));
    if (Y.empty()) throw ParseError("gate: empty set");
    auto g = gate(h, Y, h.ambient.at(point));
    return Outcome{{{"gate", h.ambient.id(g.point)}, {"error", g.error}, {"target", tuple_to_json(h, g.target)}}, true};
  };
  auto* dfo = app.add_subcommand("dformula", "fit the distance formula");
  dfo->add_option("structure", input)->required();
  dfo->add_option("--threshold", threshold)->capture_default_str();
  run[dfo] = [&] {
    auto h = load_structure(input);
    DistanceFormulaOptions o;
    o.check = G.check();
    auto f = distance_formula(h, Length::parse(threshold), o);
    std::vector<std::vector<std::string>> rows{{"s", "K", "C"}};
    for (const auto& [s, q] : f.sweep) rows.push_back({s.str(), q.lambda.str(), q.epsilon.str()});
    write_csv(G.csv, rows);
    return Outcome{to_json(f), f.violations == 0};
  };
  auto* hul = app.add_subcommand("hull", "hierarchically quasiconvex hull of a factored ball");
  hul->add_option("structure", input)->required();
  hul->add_option("--center", center)->required();
  hul->add_option("--radius", radius)->capture_default_str();
  hul->add_option("--D", qD)->capture_default_str();
  run[hul] = [&] {
    auto h = load_structure(input);
    HullOptions o;
    o.D = Length::parse(qD);
    auto hl = build_hull(h, h.ambient.at(center), Length::parse(radius), o);
    return Outcome{to_json(h, hl), hl.claims && hl.ball_contained};
  };

  // cover
  auto* cov = app.add_subcommand("cover", "asymptotic-dimension covers")->require_subcommand(1);
  std::string cover_path, cD, cr = "4", cl = "10", cC = "0", root, kind = "interval", cR = "1", deltas;
  std::int64_t pn = 1;
  auto* c_ver = cov->add_subcommand("verify");
  c_ver->add_option("space", input)->required();
  c_ver->add_option("--cover", cover_path)->required();
  c_ver->add_option("--D", cD);
  run[c_ver] = [&] {
    auto g = load_space(input);
    Cover c = cover_of(g, read_json(cover_path));
    Length D = cD.empty() ? c.D : Length::parse(cD);
    auto v = verify_cover(g, c, D);
    write_csv(G.csv, multiplicity_rows(g, c, D));
    Length half = Length::from_ticks(D.ticks() / 2);
    return Outcome{{{"ok", v.ok}, {"B", v.B}, {"violations", v.violations}, {"families", c.families.size()},
                    {"r_multiplicity", multiplicity_json(g, multiplicity(g, c, half), half)}},
                   v.ok};
  };
  auto* c_brick = cov->add_subcommand("brick");
  c_brick->add_option("--dims", dims)->capture_default_str();
  c_brick->add_option("--D", cD)->required();
  run[c_brick] = [&] {
    auto g = grid_instance({ints(dims)}).ambient;
    Length D = Length::parse(cD);
    Cover c = brick_cover(g, D);
    auto v = verify_cover(g, c, D);
    c.B = v.B;
    Length half = Length::from_ticks(D.ticks() / 2);
    auto m = multiplicity(g, c, half);
    write_csv(G.csv, multiplicity_rows(g, c, D));
    json j = cover_to_json(g, c);
    j["r_multiplicity"] = multiplicity_json(g, m, half);
    return Outcome{{{"certificate", j}, {"ok", v.ok}, {"violations", v.violations}},
                   v.ok && m.m <= c.families.size()};
  };
  auto* c_tight = cov->add_subcommand("tight");
  c_tight->add_option("space", input, "graph JSON; default a binary tree")->default_str("");
  c_tight->add_option("--depth", depth)->capture_default_str();
  c_tight->add_option("--spacing", spacing)->capture_default_str();
  c_tight->add_option("--root", root);
  c_tight->add_option("--r", cr)->capture_default_str();
  c_tight->add_option("--l", cl)->capture_default_str();
  c_tight->add_option("--C", cC)->capture_default_str();
  c_tight->add_option("--beta", kind)->capture_default_str()->check(CLI::IsMember({"interval", "geodesic", "whole"}));
  run[c_tight] = [&] {
    auto g = input.empty() ? binary_tree(depth, spacing) : load_space(input);
    TightnessData T{kind, Length::parse(cC), std::nullopt};
    Length r = Length::parse(cr);
    auto tc = check_tight(g, T, r, Length(), 6000, G.seed);
    T.K = tc.K;
    Vertex x0 = root.empty() ? 0 : g.at(root);
    auto cert = tight_cover(g, T, x0, r, Length::parse(cl));
    write_csv(G.csv, multiplicity_rows(g, cert.cover, r));
    json j = certificate_to_json(g, cert);
    j["tightness"] = {{"pass", tc.pass}, {"exhaustive", tc.exhaustive}, {"hausdorff", tc.hausdorff}, {"K", tc.K},
                      {"triples", tc.triples}, {"witness", tc.witness}};
    return Outcome{j, tc.pass && cert.extra["multiplicity_ok"].get<bool>() && cert.extra["diameter_ok"].get<bool>()};
  };
  auto* c_union = cov->add_subcommand("union", "input {space, pieces:[{set, cover}], Y:{set, cover}, R}");
  c_union->add_option("input", input)->required();
  run[c_union] = [&] {
    json in = read_json(input);
    auto g = graph_from_json(in.at("space"));
    auto piece = [&](const json& p) { return Piece{id_set(g, p.at("set")), cover_of(g, p.at("cover"))}; };
    std::vector<Piece> ps;
    for (const auto& p : in.at("pieces")) ps.push_back(piece(p));
    auto r = union_combine(g, ps, piece(in.at("Y")), in.at("R").get<Length>());
    json j = {{"ok", r.ok}, {"reason", r.reason}, {"witness", r.witness}};
    if (r.ok) {
      j["certificate"] = cover_to_json(g, r.cover);
      write_csv(G.csv, multiplicity_rows(g, r.cover, r.cover.D));
    }
    return Outcome{j, r.ok};
  };
  auto* c_fib = cov->add_subcommand("fibration",
                                    "input {space, base, psi:{x: y}, ycover, fibers:[cover per Y set], lipschitz}");
  c_fib->add_option("input", input)->required();
  run[c_fib] = [&] {
    json in = read_json(input);
    auto X = graph_from_json(in.at("space")), Y = graph_from_json(in.at("base"));
    std::vector<Vertex> psi(X.size(), -1);
    for (const auto& [x, y] : in.at("psi").items()) psi[static_cast<std::size_t>(X.at(x))] = Y.at(y.get<std::string>());
    for (std::size_t v = 0; v < psi.size(); ++v)
      if (psi[v] < 0) throw ParseError("psi misses vertex '" + X.id(static_cast<Vertex>(v)) + "'");
    std::vector<Cover> fibers;
    for (const auto& f : in.at("fibers")) fibers.push_back(cover_of(X, f));
    auto r = fibration_combine(X, Y, psi, cover_of(Y, in.at("ycover")), fibers,
                               in.value("lipschitz", Length::units(1)));
    json j = {{"ok", r.ok}, {"reason", r.reason}, {"witness", r.witness}};
    if (r.ok) {
      j["certificate"] = cover_to_json(X, r.cover);
      write_csv(G.csv, multiplicity_rows(X, r.cover, r.cover.D));
    }
    return Outcome{j, r.ok};
  };
  auto* c_pipe = cov->add_subcommand("pipeline");
  c_pipe->add_option("structure", input)->required();
  c_pipe->add_option("--D", cR)->capture_default_str();
  c_pipe->add_option("--n", pn)->capture_default_str();
  c_pipe->add_option("--delta", deltas, "level:value,...");
  run[c_pipe] = [&] {
    auto h = load_structure(input);
    PipelineOptions o;
    o.D = Length::parse(cR);
    o.n = pn;
    std::stringstream ss(deltas);
    std::string t;
    while (std::getline(ss, t, ',')) {
      auto colon = t.find(':');
      if (colon == std::string::npos) throw ParseError("--delta expects level:value pairs");
      o.Delta[std::stoi(t.substr(0, colon))] = std::stoll(t.substr(colon + 1));
    }
    auto r = asdim_pipeline(h, o);
    write_csv(G.csv, multiplicity_rows(h.ambient, r.cover, o.D));
    Length half = Length::from_ticks(o.D.ticks() / 2);
    return Outcome{{{"ok", r.ok},
                    {"failed_stage", r.failed_stage},
                    {"profile", to_json(r.profile, h.index)},
                    {"bound", r.bound},
                    {"stages", r.stages},
                    {"certificate", cover_to_json(h.ambient, r.cover)},
                    {"violations", r.verdict.violations},
                    {"r_multiplicity", multiplicity_json(h.ambient, r.half, half)}},
                   r.ok};
  };

  // cusp
  auto* cusp = app.add_subcommand("cusp", "horoballs, cones, pyramids")->require_subcommand(1);
  int cpath = 0, ccycle = 0, hdepth = -1, cone_r = 3;
  bool with_graph = false;
  auto base_opts = [&](CLI::App* a) {
    a->add_option("base", input, "graph JSON")->default_str("");
    a->add_option("--path", cpath, "use path(n) as the base");
    a->add_option("--cycle", ccycle, "use the n-cycle as the base");
  };
  auto base_graph = [&] {
    if (cpath > 0) return path_graph(cpath);
    if (ccycle > 2) {
      GraphBuilder b;
      for (int i = 0; i < ccycle; ++i) b.add_vertex(std::to_string(i));
      for (int i = 0; i < ccycle; ++i) b.add_edge(i, (i + 1) % ccycle);
      return b.build();
    }
    if (input.empty()) throw ParseError("cusp: give a base graph, --path or --cycle");
    return load_space(input);
  };
  auto* k_hor = cusp->add_subcommand("horoball");
  base_opts(k_hor);
  k_hor->add_option("--depth", hdepth)->capture_default_str();
  run[k_hor] = [&] { return Outcome{to_json(horoball(base_graph(), hdepth)), true}; };
  auto* k_cone = cusp->add_subcommand("cone");
  base_opts(k_cone);
  k_cone->add_option("--r", cone_r)->capture_default_str();
  run[k_cone] = [&] { return Outcome{to_json(hyperbolic_cone(base_graph(), cone_r)), true}; };
  auto* k_pyr = cusp->add_subcommand("pyramid", "pyramid over a free-group ball");
  ball_opts(k_pyr);
  k_pyr->add_option("--r", cone_r)->capture_default_str();
  k_pyr->add_flag("--with-graph", with_graph);
  run[k_pyr] = [&] { return Outcome{to_json(pyramid_over(free_ball(ball), cone_r), with_graph), true}; };
  std::string cosets_path;
  bool aux_check = false;
  auto* k_aux = cusp->add_subcommand("aux", "auxiliary structure over cosets");
  k_aux->add_option("--base", input, "structure JSON with one domain")->required();
  k_aux->add_option("--cosets", cosets_path, "[[ids...], ...]; default the cosets recorded by build freeball");
  k_aux->add_option("--r", cone_r)->capture_default_str();
  k_aux->add_flag("--check", aux_check, "run the axiom suite on the result");
  run[k_aux] = [&] {
    auto h = load_structure(input);
    json cj = cosets_path.empty() ? h.meta.at("cosets") : read_json(cosets_path);
    std::vector<ConeBase> cs;
    for (const auto& c : cj) cs.push_back({id_set(h.ambient, c.is_object() ? c.at("members") : c), {}});
    auto aux = aux_structure(h, cs, cone_r, G.check());
    json j = {{"structure", structure_to_json(aux)}};
    bool pass = true;
    if (aux_check) {
      auto reports = run_axiom_suite(aux, "all", G.check());
      json r = json::array();
      for (const auto& x : reports) r.push_back(to_json(x));
      j["checks"] = r;
      pass = all_pass(reports);
    }
    return Outcome{j, pass};
  };

  // rot
  auto* rot = app.add_subcommand("rot", "rotating families on pyramids")->require_subcommand(1);
  std::string Nwords = "aaaaaaaaa", window = "1,2", defect = "0", apex_radius, rx = "b", ry = "aaaaaaaaab", rn = "aaaaaaaaa", rp = "1";
  int rot_r = 2, foldL = 4;
  bool index = false;
  auto rot_opts = [&](CLI::App* a) {
    ball_opts(a);
    a->add_option("--r", rot_r)->capture_default_str();
    a->add_option("--N", Nwords, "normal generators, comma separated")->capture_default_str();
    a->add_option("--window", window)->capture_default_str();
    a->add_option("--defect", defect)->capture_default_str();
    a->add_option("--apex-radius", apex_radius);
  };
  auto context = [&] {
    RotatingOptions o;
    auto w = window.find(',');
    if (w == std::string::npos) throw ParseError("--window expects w1,w2");
    o.w1 = Length::parse(window.substr(0, w));
    o.w2 = Length::parse(window.substr(w + 1));
    o.d_weak = Length::parse(defect);
    if (!apex_radius.empty()) o.apex_radius = Length::parse(apex_radius);
    return rotating_context(free_ball(ball), rot_r, words(Nwords), o);
  };
  auto* r_ful = rot->add_subcommand("fulcrum");
  rot_opts(r_ful);
  r_ful->add_option("--x", rx)->capture_default_str();
  r_ful->add_option("--y", ry)->capture_default_str();
  run[r_ful] = [&] {
    auto c = context();
    auto ws = detect_fulcrum(c, c.ball.vertex_of(fg::word_of(rx)), c.ball.vertex_of(fg::word_of(ry)), Length::parse(defect));
    json a = json::array();
    for (const auto& w : ws) a.push_back(to_json(c, w));
    return Outcome{{{"witnesses", a}}, !ws.empty()};
  };
  auto* r_lnk = rot->add_subcommand("linked");
  rot_opts(r_lnk);
  r_lnk->add_option("--x", rx)->capture_default_str();
  r_lnk->add_option("--y", ry)->capture_default_str();
  run[r_lnk] = [&] {
    auto c = context();
    Vertex x = c.ball.vertex_of(fg::word_of(rx)), y = c.ball.vertex_of(fg::word_of(ry));
    return Outcome{{{"linked", is_linked(c, x, y)}, {"weakly_linked", is_weakly_linked(c, x, y)}}, true};
  };
  auto* r_gre = rot->add_subcommand("greendlinger");
  rot_opts(r_gre);
  r_gre->add_option("--n", rn)->capture_default_str();
  r_gre->add_option("--p", rp)->capture_default_str();
  run[r_gre] = [&] {
    auto c = context();
    auto g = greendlinger_check(c, fg::word_of(rn), c.ball.vertex_of(fg::word_of(rp)));
    json f = json::array();
    for (const auto& w : g.fulcra) f.push_back(to_json(c, w));
    json j = {{"branch", std::string(1, g.branch)}, {"fulcra", f}};
    if (g.coset) j["coset"] = fg::id_of(c.P.names[*g.coset]), j["apex_distance"] = g.apex_distance;
    return Outcome{j, g.branch != '-'};
  };
  auto* r_quo = rot->add_subcommand("quotient");
  rot_opts(r_quo);
  r_quo->add_option("--L", foldL)->capture_default_str();
  r_quo->add_flag("--index", index, "also report the quotient index set");
  run[r_quo] = [&] {
    auto c = context();
    DeltaOptions d;
    d.seed = G.seed;
    d.exhaustive_limit = 300;
    auto q = quotient_pyramid(c, foldL, d);
    json j = to_json(c, q);
    if (index) j["index"] = to_json(c, quotient_index_set(c, foldL));
    return Outcome{j, true};
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const CLI::App* leaf = &app;
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  const json config = config_of(leaf);
  try {
    if (auto b = builders.find(leaf); b != builders.end()) {
      HierarchicalStructure h = b->second();
      h.meta["generator"] = {{"tool", "hhs"}, {"version", kVersion}, {"command", command_of(leaf)}, {"config", config}};
      write_text(G.report, structure_to_json(h).dump() + "\n");
      return kPass;
    }
    Outcome o = run.at(leaf)();
    json report = {{"tool", "hhs"},      {"version", kVersion}, {"command", command_of(leaf)},
                   {"config", config},   {"seed", G.seed},      {"pass", o.pass},
                   {"result", o.result}};
    write_text(G.report, report.dump(2) + "\n");
    return o.pass ? kPass : kFail;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const CLI::Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnreachableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
