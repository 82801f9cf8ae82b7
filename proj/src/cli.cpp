#include "tauttwist/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tauttwist/genus1_relations.hpp"
#include "tauttwist/json_io.hpp"
#include "tauttwist/pixton.hpp"
#include "tauttwist/registry.hpp"
#include "tauttwist/twist_loci.hpp"

namespace tauttwist {

namespace {

struct Options {
  int g = 0;
  int k = 1;
  std::vector<int> mu;
  std::vector<int> k_list;
  int degree = -1;
  int depth = 8;
  int r_start = 0;
  int r_count = 0;
  int guard_count = 2;
  std::string registry_path;
  std::string graph_path;
  std::string format = "json";
  std::string mode = "A";
};

ClassRegistry load_registry(const Options& opt) {
  std::string path = opt.registry_path;
  if (path.empty()) {
    if (const char* env = std::getenv("TAUTTWIST_REGISTRY")) path = env;
  }
  if (path.empty()) return ClassRegistry{};
  return ClassRegistry::load_file(path);
}

std::string render_opaque(const OpaqueGen& gen) {
  std::ostringstream os;
  const bool fundamental_like =
      gen.kind == OpaqueKind::Hbar &&
      (gen.g == 0 || (gen.g == 1 && std::all_of(gen.sig.begin(), gen.sig.end(),
                                                [](int m) { return m == 0; })));
  if (fundamental_like) {
    os << "[Mbar_{" << gen.g << "," << gen.sig.size() << "}]";
    return os.str();
  }
  os << "[" << opaque_kind_name(gen.kind) << "^" << gen.k << "_" << gen.g
     << "(";
  for (std::size_t i = 0; i < gen.sig.size(); ++i) {
    if (i) os << ",";
    os << gen.sig[i];
  }
  os << ")]";
  return os.str();
}

std::string render_vertex(const StableGraph& g, int v,
                          const std::vector<int>& mu) {
  std::ostringstream os;
  os << "g" << g.genus[v];
  std::vector<int> weights;
  for (const auto& [m, w] : g.legs)
    if (w == v) weights.push_back(mu[m - 1]);
  if (!weights.empty()) {
    os << "(";
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (i) os << ",";
      os << weights[i];
    }
    os << ")";
  }
  return os.str();
}

std::string render_star_row(const StarGraph& star, const Twist& tw,
                            const Signature& sig) {
  const StableGraph& g = star.graph;
  std::ostringstream os;
  os << "center " << render_vertex(g, star.center, sig.mu);
  if (g.num_edges() == 0) {
    os << " [trivial]";
  } else {
    for (int e = 0; e < g.num_edges(); ++e) {
      const int out = g.edges[e][0] == star.center ? g.edges[e][1]
                                                   : g.edges[e][0];
      os << (e == 0 ? "  " : ", ") << "-(" << tw.I[e] << ")-> v" << out << ":"
         << render_vertex(g, out, sig.mu);
    }
  }
  return os.str();
}

std::string render_contribution(const SymbolicClass& c, int center_hint) {
  // single-term contributions: labels in vertex order, center first
  std::ostringstream os;
  for (const auto& [key, tv] : c.terms()) {
    std::vector<std::string> parts;
    const auto& term = tv.first;
    std::vector<int> order;
    for (int v = 0; v < term.graph.num_vertices(); ++v) order.push_back(v);
    if (center_hint >= 0)
      std::stable_partition(order.begin(), order.end(),
                            [&](int v) { return v == center_hint; });
    for (int v : order) {
      if (term.labels.vert[v].opaque) {
        parts.push_back(render_opaque(term.opaque_at(v)));
      } else {
        std::ostringstream fs;
        fs << "[Mbar_{" << term.graph.genus[v] << ","
           << term.graph.valence(v) << "}]";
        parts.push_back(fs.str());
      }
    }
    for (std::size_t i = 0; i < parts.size(); ++i)
      os << (i ? " * " : "") << parts[i];
  }
  return os.str();
}

std::string render_term_text(const LabeledTerm& term, const Rat& coeff) {
  std::ostringstream os;
  os << "coeff " << rat_str(coeff) << " | vertices [";
  for (int v = 0; v < term.graph.num_vertices(); ++v)
    os << (v ? " " : "") << "g" << term.graph.genus[v];
  os << "] legs [";
  for (int i = 0; i < term.graph.num_legs(); ++i)
    os << (i ? " " : "") << term.graph.legs[i].first << "@"
       << term.graph.legs[i].second;
  os << "] edges [";
  for (int e = 0; e < term.graph.num_edges(); ++e)
    os << (e ? " " : "") << "(" << term.graph.edges[e][0] << "-"
       << term.graph.edges[e][1] << ")";
  os << "]";
  if (term.dec.total_exponent() > 0) {
    os << " kappa1 [";
    for (int v = 0; v < term.graph.num_vertices(); ++v)
      os << (v ? " " : "") << term.dec.kappa1[v];
    os << "] leg_psi [";
    for (int i = 0; i < term.graph.num_legs(); ++i)
      os << (i ? " " : "") << term.dec.leg_psi[i];
    os << "] he_psi [";
    for (int e = 0; e < term.graph.num_edges(); ++e)
      os << (e ? " " : "") << term.dec.edge_psi[e][0] << ","
         << term.dec.edge_psi[e][1];
    os << "]";
  }
  os << " | ";
  for (int v = 0; v < term.graph.num_vertices(); ++v) {
    os << (v ? " * " : "");
    if (term.labels.vert[v].opaque)
      os << render_opaque(term.opaque_at(v));
    else
      os << "[Mbar_{" << term.graph.genus[v] << "," << term.graph.valence(v)
         << "}]";
  }
  return os.str();
}

std::string render_class_text(const SymbolicClass& c) {
  std::ostringstream os;
  os << "class on (g=" << c.genus() << ", n=" << c.markings() << "), "
     << c.size() << " term(s)\n";
  for (const auto& [key, tv] : c.terms())
    os << "  " << render_term_text(tv.first, tv.second) << "\n";
  return os.str();
}

Json interpolation_report_to_json(const InterpolationReport& rep) {
  Json j;
  j["degree_bound"] = rep.degree_bound;
  j["samples"] = rep.samples;
  j["guards"] = rep.guards;
  j["coefficients"] = Json::array();
  for (const auto& c : rep.coefficients) {
    Json cj;
    cj["graph"] = graph_to_json(c.term.graph);
    Json dj;
    dj["kappa1"] = c.term.dec.kappa1;
    dj["leg_psi"] = c.term.dec.leg_psi;
    dj["halfedge_psi"] = Json::array();
    for (const auto& e : c.term.dec.edge_psi)
      dj["halfedge_psi"].push_back(Json::array({e[0], e[1]}));
    cj["decoration"] = dj;
    cj["polynomial"] = Json::array();
    for (const auto& p : c.polynomial) cj["polynomial"].push_back(rat_str(p));
    cj["samples"] = Json::array();
    for (const auto& v : c.sample_values) cj["samples"].push_back(rat_str(v));
    cj["guard_residuals"] = Json::array();
    for (const auto& v : c.guard_residuals)
      cj["guard_residuals"].push_back(rat_str(v));
    j["coefficients"].push_back(cj);
  }
  return j;
}

int cmd_stargraphs(const Options& opt, std::ostream& out) {
  Signature sig{opt.k, opt.mu};
  const auto stars = star_graphs(opt.g, sig);
  if (opt.format == "text") {
    out << "star graphs for g=" << opt.g << ", k=" << opt.k << ", mu=(";
    for (std::size_t i = 0; i < opt.mu.size(); ++i)
      out << (i ? "," : "") << opt.mu[i];
    out << ")\n";
    // the trivial graph first, then one table row per nontrivial (graph,
    // twist) pair
    for (const auto& star : stars) {
      if (star.graph.num_vertices() > 1) continue;
      const SymbolicClass c = contribution(star, twists(star, sig)[0], sig);
      out << "trivial graph: " << render_contribution(c, star.center)
          << " | coeff 1/1\n";
    }
    for (const auto& star : stars) {
      if (star.graph.num_vertices() == 1) continue;
      for (const Twist& tw : twists(star, sig)) {
        const SymbolicClass c = contribution(star, tw, sig);
        out << "  " << render_star_row(star, tw, sig) << " | coeff "
            << rat_str(twisted_coefficient(star, tw, sig)) << " | "
            << render_contribution(c, star.center) << "\n";
      }
    }
    return 0;
  }
  Json j;
  j["g"] = opt.g;
  j["k"] = opt.k;
  j["mu"] = opt.mu;
  j["entries"] = Json::array();
  for (const auto& star : stars) {
    for (const Twist& tw : twists(star, sig)) {
      const SymbolicClass c = contribution(star, tw, sig);
      Json e;
      e["graph"] = graph_to_json(star.graph);
      e["center"] = star.center;
      e["twists"] = tw.I;
      e["coefficient"] = rat_str(twisted_coefficient(star, tw, sig));
      e["labels"] = Json::array();
      for (const auto& [key, tv] : c.terms())
        for (int v = 0; v < tv.first.graph.num_vertices(); ++v)
          e["labels"].push_back(
              tv.first.labels.vert[v].opaque
                  ? Json{{"kind",
                          opaque_kind_name(tv.first.opaque_at(v).kind)},
                         {"g", tv.first.opaque_at(v).g},
                         {"k", tv.first.opaque_at(v).k},
                         {"sig", tv.first.opaque_at(v).sig}}
                  : Json("fundamental"));
      j["entries"].push_back(e);
    }
  }
  out << dump(j);
  return 0;
}

int cmd_twists(const Options& opt, std::ostream& out) {
  Signature sig{opt.k, opt.mu};
  std::ifstream in(opt.graph_path);
  if (!in)
    throw std::runtime_error("cannot open graph file: " + opt.graph_path);
  Json gj;
  in >> gj;
  StarGraph star;
  star.graph = graph_from_json(gj.contains("graph") ? gj.at("graph") : gj);
  star.center = gj.contains("center") ? gj.at("center").get<int>() : 0;
  const auto tws = twists(star, sig);
  if (opt.format == "text") {
    out << tws.size() << " twist(s)\n";
    for (const auto& tw : tws) {
      out << "  (";
      for (std::size_t i = 0; i < tw.I.size(); ++i)
        out << (i ? "," : "") << tw.I[i];
      out << ") coeff " << rat_str(twisted_coefficient(star, tw, sig)) << "\n";
    }
    return 0;
  }
  Json j;
  j["twists"] = Json::array();
  for (const auto& tw : tws) {
    Json e;
    e["I"] = tw.I;
    e["coefficient"] = rat_str(twisted_coefficient(star, tw, sig));
    j["twists"].push_back(e);
  }
  out << dump(j);
  return 0;
}

int cmd_hclass(const Options& opt, std::ostream& out) {
  Signature sig{opt.k, opt.mu};
  const SymbolicClass h = weighted_class_H(opt.g, sig, load_registry(opt));
  if (opt.format == "text")
    out << render_class_text(h);
  else
    out << dump(class_to_json(h));
  return 0;
}

int cmd_pixton(const Options& opt, std::ostream& out) {
  const int degree = opt.degree < 0 ? opt.g : opt.degree;
  const PixtonInput in = make_pixton_input(opt.g, opt.k, opt.mu, degree);
  RSamplePlan plan = RSamplePlan::defaults(in);
  if (opt.r_start > 0) {
    plan.samples.clear();
    plan.guards.clear();
    const int count =
        opt.r_count > 0 ? opt.r_count : 2 * in.degree + 2;
    for (int i = 0; i < count; ++i) plan.samples.push_back(opt.r_start + i);
    for (int i = 0; i < opt.guard_count; ++i)
      plan.guards.push_back(opt.r_start + count + i);
  }
  InterpolationReport rep;
  const TautClass p = pixton_class(in, plan, &rep);
  if (opt.format == "text") {
    out << render_class_text(to_symbolic(p));
    return 0;
  }
  Json j;
  j["class"] = class_to_json(p);
  j["interpolation"] = interpolation_report_to_json(rep);
  out << dump(j);
  return 0;
}

int cmd_verify_g1(const Options& opt, std::ostream& out) {
  const VerificationReport rep =
      verify_genus1(opt.mu, opt.k_list, load_registry(opt));
  if (opt.format == "text")
    out << report_to_text(rep);
  else
    out << dump(report_to_json(rep));
  return rep.all_pass() ? 0 : 1;
}

int cmd_verify_g0(const Options& opt, std::ostream& out) {
  const VerificationReport rep = genus0_check(opt.mu, opt.k);
  if (opt.format == "text")
    out << report_to_text(rep);
  else
    out << dump(report_to_json(rep));
  return rep.all_pass() ? 0 : 1;
}

int cmd_gap(const Options& opt, std::ostream& out) {
  Signature sig{opt.k, opt.mu};
  const ConjectureMode mode =
      opt.mode == "A" ? ConjectureMode::A : ConjectureMode::APrime;
  const SymbolicClass gap = conjecture_gap(opt.g, sig, mode, load_registry(opt));

  const auto taut = to_tautological(gap);
  std::string status = "symbolic";
  Json reduced;
  bool fail = false;
  if (taut) {
    if (opt.g == 0) {
      status = taut->empty() ? "pass" : "fail";
      fail = !taut->empty();
    } else if (opt.g == 1) {
      const Genus1Vector v = reduce_genus1(*taut);
      reduced = genus1_vector_to_json(v);
      status = v.is_zero() ? "pass" : "fail";
      fail = !v.is_zero();
    }
  }
  if (opt.format == "text") {
    out << "gap status: " << status << "\n" << render_class_text(gap);
    if (!reduced.is_null())
      out << "reduced: " << reduced.dump() << "\n";
  } else {
    Json j;
    j["gap"] = class_to_json(gap);
    j["fully_tautological"] = taut.has_value();
    j["reduced"] = reduced.is_null() ? Json() : reduced;
    j["status"] = status;
    out << dump(j);
  }
  return fail ? 1 : 0;
}

int cmd_recursion(const Options& opt, std::ostream& out) {
  Signature sig{opt.k, opt.mu};
  const SymbolicClass h =
      recursion_expand(opt.g, sig, load_registry(opt), opt.depth);
  if (opt.format == "text")
    out << render_class_text(h);
  else
    out << dump(class_to_json(h));
  return 0;
}

int cmd_registry_validate(const Options& opt, std::ostream& out) {
  std::string path = opt.registry_path;
  if (path.empty()) {
    if (const char* env = std::getenv("TAUTTWIST_REGISTRY")) path = env;
  }
  if (path.empty())
    throw std::invalid_argument("registry-validate needs --registry or "
                                "TAUTTWIST_REGISTRY");
  const ClassRegistry reg = ClassRegistry::load_file(path);
  if (opt.format == "text") {
    out << "ok: " << reg.size() << " entr"
        << (reg.size() == 1 ? "y" : "ies") << "\n";
  } else {
    Json j;
    j["status"] = "ok";
    j["entries"] = static_cast<int>(reg.size());
    out << dump(j);
  }
  return 0;
}

int cmd_probe(const Options& opt, std::ostream& out) {
  const DeltaIrrProbe probe = delta_irr_probe(opt.mu, opt.k);
  if (opt.format == "text") {
    out << "delta_irr probe for k=" << opt.k << ", mu=(";
    for (std::size_t i = 0; i < opt.mu.size(); ++i)
      out << (i ? "," : "") << opt.mu[i];
    out << ")\n";
    for (const auto& line : probe.pinned_form.trace) out << "  " << line << "\n";
    out << "  stratum coefficient: " << rat_str(probe.stratum_coefficient)
        << "\n  delta_irr (halved normalization), first form: "
        << rat_str(probe.first_form_delta_irr)
        << "\n  delta_irr (halved normalization), after the relations: "
        << rat_str(probe.pinned_form_delta_irr)
        << "\n  internally consistent: "
        << (probe.internally_consistent ? "yes" : "no") << "\n";
  } else {
    out << dump(probe_to_json(probe));
  }
  return probe.internally_consistent ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact computations with twisted k-differential loci"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_g, bool needs_k,
                        bool needs_mu) {
    if (needs_g) cmd->add_option("--g", opt.g, "genus")->required();
    if (needs_k) cmd->add_option("--k", opt.k, "differential power k");
    if (needs_mu)
      cmd->add_option("--mu", opt.mu, "signature, comma separated")
          ->required()
          ->delimiter(',');
    cmd->add_option("--format", opt.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--registry", opt.registry_path,
                    "registry JSON (default: TAUTTWIST_REGISTRY)");
  };

  auto* sg = app.add_subcommand("stargraphs", "star graphs, twists and "
                                              "contributions");
  add_common(sg, true, true, true);
  auto* tw = app.add_subcommand("twists", "twists of one star graph");
  add_common(tw, true, true, true);
  tw->add_option("--graph", opt.graph_path, "graph JSON file")->required();
  auto* hc = app.add_subcommand("hclass", "weighted fundamental class");
  add_common(hc, true, true, true);
  auto* px = app.add_subcommand("pixton", "Pixton class by interpolation");
  add_common(px, true, true, true);
  px->add_option("--degree", opt.degree, "truncation degree (default g)");
  px->add_option("--r-start", opt.r_start, "first sample modulus");
  px->add_option("--r-count", opt.r_count, "number of sample moduli");
  px->add_option("--guard-count", opt.guard_count, "number of guard moduli");
  auto* v1 = app.add_subcommand("verify-g1", "genus-1 k-independence checks");
  add_common(v1, false, false, true);
  v1->add_option("--k-list", opt.k_list, "k values, comma separated")
      ->required()
      ->delimiter(',');
  auto* v0 = app.add_subcommand("verify-g0", "genus-0 check");
  add_common(v0, false, true, true);
  auto* cg = app.add_subcommand("conjecture-gap", "2^-g P minus the weighted "
                                                  "class");
  add_common(cg, true, true, true);
  cg->add_option("--mode", opt.mode, "A or Aprime")
      ->check(CLI::IsMember({"A", "Aprime"}));
  auto* rc = app.add_subcommand("recursion", "solve for the trivial-graph "
                                             "class");
  add_common(rc, true, true, true);
  rc->add_option("--depth", opt.depth, "recursion depth");
  auto* rv = app.add_subcommand("registry-validate", "validate a registry "
                                                     "file");
  add_common(rv, false, false, false);
  auto* pr = app.add_subcommand("probe-delta-irr",
                                "genus-1 delta_irr reduction probe");
  add_common(pr, false, true, true);

  std::vector<const char*> argv;
  argv.push_back("tauttwist");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::ostringstream os;
      os << app.help();
      out << os.str();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sg->parsed()) return cmd_stargraphs(opt, out);
    if (tw->parsed()) return cmd_twists(opt, out);
    if (hc->parsed()) return cmd_hclass(opt, out);
    if (px->parsed()) return cmd_pixton(opt, out);
    if (v1->parsed()) return cmd_verify_g1(opt, out);
    if (v0->parsed()) return cmd_verify_g0(opt, out);
    if (cg->parsed()) return cmd_gap(opt, out);
    if (rc->parsed()) return cmd_recursion(opt, out);
    if (rv->parsed()) return cmd_registry_validate(opt, out);
    if (pr->parsed()) return cmd_probe(opt, out);
  } catch (const std::invalid_argument& e) {
    Json j;
    j["error"] = e.what();
    out << dump(j);
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    Json j;
    j["error"] = e.what();
    out << dump(j);
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tauttwist
