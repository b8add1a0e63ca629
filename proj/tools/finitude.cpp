// finitude: command-line front end. Every subcommand reads JSON, runs the
// exact checks and prints a JSON report on stdout.
//
// Exit codes: 0 success, 2 bad input or violated precondition, 1 a
// verification identity failed.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "finitude/algebra.hpp"
#include "finitude/catalog.hpp"
#include "finitude/errors.hpp"
#include "finitude/groupoid.hpp"
#include "finitude/json_io.hpp"
#include "finitude/leavitt.hpp"
#include "finitude/mean_trace.hpp"
#include "finitude/schutz.hpp"
#include "finitude/semigroup.hpp"

namespace fs = std::filesystem;
using namespace finitude;
using io::json;

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::size_t max_size = kDefaultMaxSemigroupSize;
  std::size_t max_arrows = kDefaultMaxEll1Arrows;
  std::size_t max_len = 6;
  bool timing = false;
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

/// Collects every byte read so the report can carry one input digest.
class Inputs {
 public:
  json load(const std::string& path) {
    std::string text = io::read_text(path);
    bytes_ += text;
    return io::parse_text(text, path == "-" ? "stdin" : path);
  }
  std::string digest() const { return sha256_hex(bytes_); }

 private:
  std::string bytes_;
};

std::vector<std::string> labels_of(const FiniteSemigroup& s, const std::vector<Index>& xs) {
  std::vector<std::string> out;
  for (Index x : xs) out.push_back(s.label(x));
  return out;
}

json counts(const std::vector<std::size_t>& xs) {
  json out = json::array();
  for (auto x : xs) out.push_back(x);
  return out;
}

// ---------------------------------------------------------------------------
// semigroup

json semigroup_analyze(const FiniteSemigroup& s) {
  json r;
  r["size"] = s.size();
  r["labels"] = s.labels();
  std::vector<Index> idem;
  for (Index a = 0; a < s.size(); ++a)
    if (s.is_idempotent(a)) idem.push_back(a);
  r["idempotents"] = labels_of(s, idem);
  const auto g = green(s);
  r["green"] = {{"R", g.R.count()}, {"L", g.L.count()}, {"J", g.J.count()}, {"H", g.H.count()}, {"D", g.D.count()}};

  json jc = json::array();
  for (const auto& info : j_class_classify(s, g))
    jc.push_back({{"elements", labels_of(s, g.J.classes[info.j_class])},
                  {"type", info.regular ? "regular" : "null"},
                  {"r_classes", info.r_classes},
                  {"l_classes", info.l_classes}});
  r["j_classes"] = jc;

  auto st = is_stable(s, g);
  json stable{{"stable", st.stable}, {"pairs_checked", s.size() * s.size()}};
  if (st.counterexample) {
    auto [a, t, side] = *st.counterexample;
    stable["counterexample"] = {{"s", s.label(a)}, {"t", s.label(t)}, {"side", std::string(1, side)}};
  }
  r["stability"] = stable;

  try {
    auto inv = validate_inverse(s);
    r["inverse"] = true;
    auto rep = d_class_report(inv);
    json classes = json::array();
    for (const auto& c : rep.classes)
      classes.push_back({{"elements", labels_of(s, c.elements)},
                         {"idempotents", c.idempotents.size()},
                         {"r_classes", c.r_classes},
                         {"l_classes", c.l_classes},
                         {"subgroup_order", c.subgroup_order}});
    r["d_classes"] = classes;
    r["subgroup_orders"] = counts(rep.subgroup_orders());
    r["reduction"] = "KS stably finite iff KG stably finite for every listed maximal subgroup G";
    r["stably_finite"] = rep.stably_finite;
    r["basis"] = "exhaustive Green computation; finite groups have finite-dimensional algebras (characteristic 0)";
  } catch (const precondition_error& e) {
    r["inverse"] = false;
    r["inverse_failure"] = e.what();
  }
  return r;
}

json semigroup_groupoid(const FiniteSemigroup& s) {
  auto inv = validate_inverse(s);
  auto g = universal_groupoid(inv);
  json r = io::groupoid_json(g);
  json sem = json::array();
  for (Index a = 0; a < g.arrow_count(); ++a) sem.push_back(s.label(a));
  r["semigroup_element"] = sem;
  auto dec = orbits_and_isotropy(g);
  json orbits = json::array();
  for (const auto& o : dec.orbits) {
    json objs = json::array();
    for (Index x : o.objects) objs.push_back(g.object_label(x));
    orbits.push_back({{"objects", objs}, {"isotropy_order", o.isotropy_arrows.size()}});
  }
  r["orbits"] = orbits;
  return r;
}

json semigroup_verify_iso(const FiniteSemigroup& s) {
  auto inv = validate_inverse(s);
  auto iso = iso_semigroup_to_groupoid(inv);
  json images = json::array();
  for (Index a = 0; a < inv.size(); ++a)
    images.push_back({{"element", s.label(a)}, {"image", io::coeffs_json(iso.forward_images[a])}});
  return {{"isomorphism", true},
          {"dim_KS", iso.ks->dim()},
          {"dim_KG", iso.kg->dim()},
          {"objects", iso.groupoid.object_count()},
          {"multiplicative_pairs_checked", iso.pairs_checked},
          {"round_trip", "exhaustive on the basis"},
          {"forward", images}};
}

// ---------------------------------------------------------------------------
// graph

json path_json(const DirectedGraph& g, const Path& p) { return path_string(g, p); }

json graph_analyze(const io::GraphInput& in) {
  const auto& g = in.graph;
  auto verdict = graph_verdict(g);
  json r;
  r["no_exit"] = verdict.no_exit.no_exit;
  r["stably_finite"] = verdict.stably_finite;
  json reg = json::array();
  for (Index v : regular_vertices(g)) reg.push_back(g.vertex(v));
  r["regular_vertices"] = reg;
  auto on = cycle_vertices(g);
  json cyc = json::array();
  for (Index v = 0; v < g.vertex_count(); ++v)
    if (on[v]) cyc.push_back(g.vertex(v));
  r["cycle_vertices"] = cyc;
  if (verdict.witness) {
    const auto& w = *verdict.witness;
    r["witness"] = {{"vertex", g.vertex(w.vertex)},
                    {"cycle", path_json(g, w.cycle)},
                    {"exit_edge", g.edge(w.exit_edge).name},
                    {"e", io::cohn_json(*w.e)},
                    {"a", io::cohn_json(*w.a)},
                    {"b", io::cohn_json(*w.b)},
                    {"ab_is_e", w.report.ab_is_e},
                    {"ba_is_e", w.report.ba_is_e},
                    {"pp_star_kills_exit", w.pp_star_kills_exit},
                    {"valid", w.report.valid()}};
  } else {
    r["certificate"] = "every cycle vertex has out-degree 1";
  }
  return r;
}

json graph_cohn(const io::GraphInput& in, std::size_t max_len) {
  auto ctx = CohnContext::make(in.graph, in.x);
  const auto& g = ctx->graph();
  json r;
  json xs = json::array(), gamma = json::object();
  for (Index v : ctx->x()) {
    xs.push_back(g.vertex(v));
    gamma[g.vertex(v)] = g.edge(ctx->gamma(v)).name;
  }
  r["X"] = xs;
  r["special_edges"] = gamma;
  r["max_len"] = max_len;
  auto monos = normal_monomials(*ctx, max_len);
  std::vector<std::size_t> by_len(max_len + 1, 0);
  json ms = json::array();
  for (const auto& m : monos) {
    ++by_len[m.length()];
    ms.push_back(monomial_string(g, m));
  }
  r["normal_monomials"] = monos.size();
  r["by_length"] = counts(by_len);
  r["monomials"] = ms;
  // v - sum ee* must reduce to zero for every v in X.
  json rel = json::array();
  for (Index v : ctx->x()) {
    auto x = CohnElement::vertex(ctx, v);
    for (Index e : g.out_edges(v)) x -= CohnElement::edge(ctx, e) * CohnElement::edge_star(ctx, e);
    ensure(x.is_zero(), "X-relation at " + g.vertex(v) + " does not reduce to zero");
    rel.push_back(g.vertex(v));
  }
  r["x_relations_reduce_to_zero"] = rel;
  return r;
}

json graph_groupoid(const io::GraphInput& in) {
  auto ctx = CohnContext::make(in.graph, in.x);
  auto pg = PathGroupoid::make(ctx);
  json units = json::array();
  for (Index i = 0; i < pg.units().size(); ++i) {
    json u{{"unit", pg.unit_string(i)}, {"kind", pg.units()[i].periodic ? "periodic" : "finite_path"}};
    if (pg.units()[i].periodic) u["height"] = pg.height(i);
    units.push_back(u);
  }
  json orbits = json::array();
  for (const auto& o : pg.orbits()) {
    json members = json::array();
    for (Index i : o.units) members.push_back(pg.unit_string(i));
    json iso = o.periodic ? json{{"group", "Z"}, {"generator_winding", o.cycle_length}} : json{{"group", "trivial"}};
    orbits.push_back({{"units", members}, {"isotropy", iso}});
  }
  return {{"units", units}, {"orbits", orbits}};
}

json graph_verify_iso(const io::GraphInput& in, std::size_t max_len) {
  auto ctx = CohnContext::make(in.graph, in.x);
  auto rep = verify_cohn_groupoid_iso(ctx, max_len);
  json r{{"isomorphism", rep.ok},
         {"max_len", max_len},
         {"units", rep.units},
         {"relations_checked", rep.relations_checked},
         {"vertex_images_nonzero", rep.vertex_images_nonzero},
         {"normal_monomials", rep.monomials},
         {"image_rank", rep.image_rank},
         {"arrows_touched", rep.arrows_touched},
         {"products_checked", rep.products_checked}};
  if (rep.dimension_match)
    r["dimension_match"] = {{"cohn", rep.dimension_match->first}, {"groupoid_arrows", rep.dimension_match->second}};
  return r;
}

// ---------------------------------------------------------------------------
// trace / norm

json invariance_json(const InvarianceReport& inv, const FiniteGroupoid& g) {
  json r{{"by_orbits", inv.by_orbits}};
  r["by_bisections"] = inv.by_bisections ? json(*inv.by_bisections) : json(nullptr);
  r["bisections_checked"] = inv.bisections_checked;
  if (inv.arrow_certificate) r["arrow_certificate"] = g.arrow_label(*inv.arrow_certificate);
  if (inv.bisection_certificate) {
    json u = json::array();
    for (Index a : *inv.bisection_certificate) u.push_back(g.arrow_label(a));
    r["bisection_certificate"] = u;
  }
  return r;
}

json trace_report(const InvariantMean& mu, const FiniteGroupoid& g, const Options& opt) {
  json r;
  r["weights"] = io::weights_json(mu, g);
  auto inv = is_invariant_mean(mu, g, opt.max_arrows);
  r["invariant"] = inv.invariant();
  r["invariance"] = invariance_json(inv, g);
  r["faithful"] = mu.faithful();
  auto kg = groupoid_algebra(g);
  auto t = functional_from_weights(mu, g, kg);
  auto rep = verify_trace(t, &g, opt.seed);
  r["trace"] = {{"T1", rep.t1},       {"T2", rep.t2},         {"T3", rep.t3},
                {"T4", rep.t4},       {"ff_star_formula", rep.formula}, {"support_identity", rep.support},
                {"samples", rep.samples}, {"failures", rep.failures}};
  if (rep.t1 && rep.t2 && rep.t3) {
    auto c = contractivity_check(t, g, opt.seed, 50, opt.max_arrows);
    json cr{{"right", c.right}, {"left", c.left}, {"spanning_elements", c.spanning_elements},
            {"tested_elements", c.tested_elements}};
    if (c.certificate) cr["certificate"] = {{"a", c.certificate->first}, {"s", c.certificate->second}};
    r["contractivity"] = cr;
  }
  return r;
}

json norm_ell1(const json& elem, const fs::path& base, Inputs& inputs, const Options& opt) {
  const json& alg = elem.at("algebra");
  json gj = alg;
  if (alg.is_string()) {
    fs::path p(alg.get<std::string>());
    if (p.is_relative()) p = base / p;
    gj = inputs.load(p.string());
  }
  auto g = io::parse_groupoid(gj, opt.max_size);
  auto kg = groupoid_algebra(g);
  auto f = io::parse_coeffs(elem.at("coeffs"), kg);
  Ell1Context l1(g, opt.max_arrows);
  json r;
  r["sup_norm_sq"] = io::rational(sup_norm_sq(f));
  r["bisections"] = l1.bisections().size();
  if (f.is_real()) {
    auto res = l1.seminorm(f);
    r["exact"] = true;
    r["ell1"] = io::rational(res.value);
    json rep = json::array();
    for (const auto& [u, c] : res.representation) {
      json arrows = json::array();
      for (Index a : u) arrows.push_back(g.arrow_label(a));
      rep.push_back({{"bisection", arrows}, {"coefficient", io::rational(c)}});
    }
    r["representation"] = rep;
    r["certified"] = res.certified;
    r["sup_le_ell1"] = sup_norm_sq(f) <= res.value * res.value;
  } else {
    auto [lo, hi] = l1.bounds(f);
    r["exact"] = false;
    r["ell1_bounds"] = {io::rational(lo), io::rational(hi)};
    r["sup_le_ell1"] = sup_norm_sq(f) <= hi * hi;
  }
  return r;
}

// ---------------------------------------------------------------------------
// schutz / algebra

json schutz_report(const FiniteSemigroup& s, const std::optional<std::string>& idem, const Options& opt) {
  if (!idem) {
    auto v = appendix_verdict(s);
    json classes = json::array();
    for (const auto& e : v.regular)
      classes.push_back({{"elements", labels_of(s, e.elements)},
                         {"r_classes", e.r_classes},
                         {"l_classes", e.l_classes},
                         {"idempotent", s.label(e.idempotent)},
                         {"subgroup_order", e.subgroup_order},
                         {"opposite", e.opposite},
                         {"rep_dimension", e.rep_dimension},
                         {"multiplicative_pairs_checked", e.pairs_checked},
                         {"ideal_complement_size", e.ideal_complement_size}});
    json nulls = json::array();
    const auto g = green(s);
    for (Index c : v.null_classes) nulls.push_back(labels_of(s, g.J.classes[c]));
    return {{"regular_j_classes", classes},
            {"null_j_classes", nulls},
            {"subgroup_orders", counts(v.subgroup_orders())},
            {"reduction", v.reduction()},
            {"note", AppendixVerdict::kBootstrapNote}};
  }
  auto f = s.find(*idem);
  require(f.has_value(), "unknown element '" + *idem + "'");
  auto rep = schutzenberger_rep(s, *f);
  const auto& sem = rep.semigroup;
  json rho = json::object();
  for (Index a = 0; a < sem.size(); ++a) {
    json cols = json::array();
    for (const auto& c : rep.rho[a].column)
      cols.push_back(c ? json::array({c->first + 1, rep.hf.group.label(c->second)}) : json(nullptr));
    rho[sem.label(a)] = cols;
  }
  std::size_t agree = 0, total = 0;
  for (Index a = 0; a < sem.size(); ++a) {
    agree += rep_kernel_check(rep, AlgebraElement::basis(rep.ks, a)).agree();
    ++total;
  }
  detail::Sampler rng(opt.seed);
  for (int k = 0; k < 100; ++k) {
    agree += rep_kernel_check(rep, random_element(rep.ks, rng, 3, true)).agree();
    ++total;
  }
  ensure(agree == total, "rho(x) = 0 and annihilation of L_f disagree");
  return {{"idempotent", *idem},
          {"opposite", rep.opposite},
          {"n", rep.n()},
          {"r_classes", rep.r_classes},
          {"l_classes", rep.l_classes},
          {"transversal", labels_of(sem, rep.transversal)},
          {"subgroup", rep.hf.group.labels()},
          {"multiplicative_pairs_checked", rep.pairs_checked},
          {"kernel_checks_agree", total},
          {"rho", rho}};
}

json algebra_witness(const json& w, const Options& opt) {
  const json& alg = w.at("algebra");
  const std::size_t msize = w.contains("matrix_size") ? w.at("matrix_size").get<std::size_t>() : 1;
  require(msize >= 1, "matrix_size must be positive");
  WitnessReport rep;
  std::string name;
  if (alg.contains("graph")) {
    require(msize == 1, "matrix amplification is not available for path algebras");
    auto in = io::parse_graph(alg.at("graph"));
    auto ctx = CohnContext::make(in.graph, in.x);
    name = "Cohn algebra";
    rep = witness_check(io::parse_cohn(w.at("e"), ctx), io::parse_cohn(w.at("a"), ctx), io::parse_cohn(w.at("b"), ctx));
  } else {
    AlgebraPtr a;
    if (alg.contains("semigroup")) a = semigroup_algebra(io::parse_semigroup(alg.at("semigroup"), opt.max_size));
    else if (alg.contains("groupoid")) a = groupoid_algebra(io::parse_groupoid(alg.at("groupoid"), opt.max_size));
    else throw precondition_error("witness algebra must name a semigroup, groupoid or graph");
    if (msize > 1) a = matrix_algebra(a, msize);
    name = a->name();
    rep = witness_check(io::parse_coeffs(w.at("e"), a), io::parse_coeffs(w.at("a"), a), io::parse_coeffs(w.at("b"), a));
  }
  auto failures = rep.failures();
  if (!failures.empty()) {
    std::string msg = "witness preconditions fail:";
    for (const auto& f : failures) msg += " [" + f + "]";
    throw precondition_error(msg);
  }
  return {{"algebra", name},
          {"e_idempotent", rep.e_idempotent},
          {"a_in_corner", rep.a_in_corner},
          {"b_in_corner", rep.b_in_corner},
          {"ab_is_e", rep.ab_is_e},
          {"ba_is_e", rep.ba_is_e},
          {"verdict", rep.valid() ? "valid infiniteness witness" : "not a witness (ba = e)"}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for inverse semigroups, groupoid algebras and Leavitt path algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--seed", opt.seed, "Seed for all sampled checks")->capture_default_str();
  app.add_option("--max-size", opt.max_size, "Semigroup size limit")->capture_default_str();
  app.add_option("--max-arrows", opt.max_arrows, "Arrow limit for bisection enumeration and the l1 LP")->capture_default_str();
  app.add_option("--max-len", opt.max_len, "Monomial length bound for path algebras")->capture_default_str();
  app.add_flag("--timing", opt.timing, "Include wall-clock time in the report");

  std::string file, file2, mean = "canonical";
  std::optional<std::string> idem;
  std::string command;
  std::function<json(Inputs&)> run;

  auto with_file = [&](CLI::App* sub, const std::string& help) {
    sub->add_option("file", file, help)->required();
  };

  auto* sg = app.add_subcommand("semigroup", "Finite (inverse) semigroups");
  sg->require_subcommand(1);
  auto add_sg = [&](const std::string& name, const std::string& help, json (*fn)(const FiniteSemigroup&)) {
    auto* c = sg->add_subcommand(name, help);
    with_file(c, "Semigroup JSON (or - for stdin)");
    c->callback([&, name, fn] {
      command = "semigroup " + name;
      run = [&, fn](Inputs& in) { return fn(io::parse_semigroup(in.load(file), opt.max_size)); };
    });
  };
  add_sg("analyze", "Green structure, stability and the D-class verdict", semigroup_analyze);
  add_sg("groupoid", "Universal groupoid", semigroup_groupoid);
  add_sg("verify-iso", "Check KS = KG(S) exhaustively", semigroup_verify_iso);

  auto* gr = app.add_subcommand("graph", "Directed graphs and path algebras");
  gr->require_subcommand(1);
  auto add_gr = [&](const std::string& name, const std::string& help, std::function<json(const io::GraphInput&)> fn) {
    auto* c = gr->add_subcommand(name, help);
    with_file(c, "Graph JSON (or - for stdin)");
    c->add_option("--max-len", opt.max_len, "Monomial length bound");
    c->callback([&, name, fn] {
      command = "graph " + name;
      run = [&, fn](Inputs& in) { return fn(io::parse_graph(in.load(file))); };
    });
  };
  add_gr("analyze", "No-exit decision with witness", graph_analyze);
  add_gr("cohn", "Normal-form monomials", [&](const io::GraphInput& g) { return graph_cohn(g, opt.max_len); });
  add_gr("groupoid", "Units, orbits and isotropy of the path groupoid", graph_groupoid);
  add_gr("verify-iso", "Check the Cohn algebra against the path groupoid algebra",
         [&](const io::GraphInput& g) { return graph_verify_iso(g, opt.max_len); });

  auto* tr = app.add_subcommand("trace", "Invariant means and traces");
  tr->require_subcommand(1);
  auto* tb = tr->add_subcommand("build", "Trace from a mean, with the full check suite");
  with_file(tb, "Groupoid JSON");
  tb->add_option("--mean", mean, "canonical, or a weights JSON file")->capture_default_str();
  tb->callback([&] {
    command = "trace build";
    run = [&](Inputs& in) {
      auto g = io::parse_groupoid(in.load(file), opt.max_size);
      InvariantMean mu = mean == "canonical" ? canonical_mean(g) : io::parse_weights(in.load(mean), g);
      json r{{"mean", mean == "canonical" ? "canonical" : "file"}};
      r.update(trace_report(mu, g, opt));
      return r;
    };
  });
  auto* tv = tr->add_subcommand("verify", "Check a weights file as a trace");
  with_file(tv, "Groupoid JSON");
  tv->add_option("trace", file2, "Trace JSON {\"weights\": ...}")->required();
  tv->callback([&] {
    command = "trace verify";
    run = [&](Inputs& in) {
      auto g = io::parse_groupoid(in.load(file), opt.max_size);
      return trace_report(io::parse_weights(in.load(file2), g), g, opt);
    };
  });

  auto* nm = app.add_subcommand("norm", "Seminorms");
  nm->require_subcommand(1);
  auto* l1 = nm->add_subcommand("ell1", "l1 seminorm by exact linear programming");
  with_file(l1, "Element JSON");
  l1->callback([&] {
    command = "norm ell1";
    run = [&](Inputs& in) {
      json e = in.load(file);
      fs::path base = file == "-" ? fs::current_path() : fs::path(file).parent_path();
      return norm_ell1(e, base, in, opt);
    };
  });

  auto* sz = app.add_subcommand("schutz", "Schutzenberger representations");
  with_file(sz, "Semigroup JSON");
  sz->add_option("--idempotent", idem, "Label of the idempotent f");
  sz->callback([&] {
    command = "schutz";
    run = [&](Inputs& in) { return schutz_report(io::parse_semigroup(in.load(file), opt.max_size), idem, opt); };
  });

  auto* al = app.add_subcommand("algebra", "Algebra-level checks");
  al->require_subcommand(1);
  auto* aw = al->add_subcommand("witness", "Check a Dedekind-infiniteness witness (e, a, b)");
  with_file(aw, "Witness JSON");
  aw->callback([&] {
    command = "algebra witness";
    run = [&](Inputs& in) { return algebra_witness(in.load(file), opt); };
  });
  auto* av = al->add_subcommand("verify-iso", "Check KS = KG(S) exhaustively");
  with_file(av, "Semigroup JSON");
  av->callback([&] {
    command = "algebra verify-iso";
    run = [&](Inputs& in) { return semigroup_verify_iso(io::parse_semigroup(in.load(file), opt.max_size)); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Inputs inputs;
  try {
    auto start = std::chrono::steady_clock::now();
    json result = run(inputs);
    json report;
    report["command"] = command;
    report["input_sha256"] = inputs.digest();
    report["seed"] = opt.seed;
    report["result"] = std::move(result);
    if (opt.timing)
      report["timing_ms"] =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cout << report.dump(2) << "\n";
    return 0;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const verification_error& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
