#include "tauttwist/genus1_relations.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tauttwist/pixton.hpp"
#include "tauttwist/twist_loci.hpp"

namespace tauttwist {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

bool Genus1Vector::is_zero() const {
  if (delta_irr != 0) return false;
  for (const auto& [I, c] : delta)
    if (c != 0) return false;
  return true;
}

Genus1Vector& Genus1Vector::operator-=(const Genus1Vector& o) {
  require(n == o.n, "basis mismatch");
  delta_irr -= o.delta_irr;
  delta_irr.canonicalize();
  for (const auto& [I, c] : o.delta) {
    auto it = delta.find(I);
    if (it == delta.end()) {
      delta.emplace(I, -c);
    } else {
      it->second -= c;
      it->second.canonicalize();
      if (it->second == 0) delta.erase(it);
    }
  }
  return *this;
}

bool Genus1Vector::operator==(const Genus1Vector& o) const {
  Genus1Vector diff = *this;
  diff -= o;
  return diff.is_zero();
}

Json genus1_vector_to_json(const Genus1Vector& v) {
  Json j;
  j["delta_irr"] = rat_str(v.delta_irr);
  j["delta"] = Json::array();
  for (const auto& [I, c] : v.delta)
    j["delta"].push_back(Json{{"I", I}, {"coeff", rat_str(c)}});
  return j;
}

StableGraph nonsep_stratum_graph(int n) {
  StableGraph g;
  g.genus = {0};
  for (int i = 1; i <= n; ++i) g.legs.emplace_back(i, 0);
  g.edges.push_back({0, 0});
  g.validate();
  return g;
}

StableGraph sep_stratum_graph(int n, const std::vector<int>& I) {
  require(static_cast<int>(I.size()) <= n - 2,
          "separating divisor needs |I| <= n-2");
  const std::set<int> inside(I.begin(), I.end());
  StableGraph g;
  g.genus = {1, 0};
  for (int i = 1; i <= n; ++i)
    g.legs.emplace_back(i, inside.count(i) ? 0 : 1);
  g.edges.push_back({0, 1});
  g.validate();
  return g;
}

std::vector<std::vector<int>> genus1_subsets(int n) {
  require(n >= 1 && n <= 16, "marking count out of range");
  std::set<std::vector<int>> subsets;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> I;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) I.push_back(i + 1);
    if (static_cast<int>(I.size()) <= n - 2) subsets.insert(I);
  }
  return {subsets.begin(), subsets.end()};
}

namespace {

// Coefficients of a degree-1 class on (1,n) over the supported spanning
// set, before any relation is applied.
struct RawGenus1 {
  int n = 0;
  Rat kappa = 0;
  std::vector<Rat> psi;
  Rat stratum_irr = 0;  // coefficient of the unhalved stratum
  std::map<std::vector<int>, Rat> delta;
};

RawGenus1 classify_genus1(const TautClass& x) {
  require(x.genus() == 1, "reduction is for genus 1");
  RawGenus1 raw;
  raw.n = x.markings();
  raw.psi.assign(raw.n, Rat(0));
  for (const auto& [key, tv] : x.terms()) {
    const StableGraph& g = tv.first.graph;
    const Decoration& dec = tv.first.dec;
    const int exps = dec.total_exponent();
    if (g.num_vertices() == 1 && g.num_edges() == 0) {
      if (dec.kappa1[0] == 1 && exps == 1) {
        raw.kappa += tv.second;
        continue;
      }
      if (exps == 1 && dec.kappa1[0] == 0) {
        for (int i = 0; i < g.num_legs(); ++i)
          if (dec.leg_psi[i] == 1) raw.psi[g.legs[i].first - 1] += tv.second;
        continue;
      }
    }
    if (g.num_vertices() == 1 && g.num_edges() == 1 && g.genus[0] == 0 &&
        exps == 0) {
      raw.stratum_irr += tv.second;
      continue;
    }
    if (g.num_vertices() == 2 && g.num_edges() == 1 &&
        g.edges[0][0] != g.edges[0][1] && exps == 0) {
      const int one = g.genus[0] == 1 ? 0 : 1;
      if (g.genus[one] == 1 && g.genus[1 - one] == 0) {
        std::vector<int> I;
        for (const auto& [m, v] : g.legs)
          if (v == one) I.push_back(m);
        std::sort(I.begin(), I.end());
        raw.delta[I] += tv.second;
        continue;
      }
    }
    throw std::invalid_argument(
        "unsupported term in genus-1 reduction (need kappa_1, psi, "
        "delta_irr or delta_I)");
  }
  return raw;
}

void add_delta(std::map<std::vector<int>, Rat>& delta,
               const std::vector<int>& I, const Rat& c) {
  auto it = delta.find(I);
  if (it == delta.end()) {
    if (c != 0) delta.emplace(I, c);
    return;
  }
  it->second += c;
  it->second.canonicalize();
  if (it->second == 0) delta.erase(it);
}

}  // namespace

Genus1Vector reduce_genus1(const TautClass& x) {
  const RawGenus1 raw = classify_genus1(x);
  const auto subsets = genus1_subsets(raw.n);

  Genus1Vector out;
  out.n = raw.n;
  out.delta_irr = 2 * raw.stratum_irr;  // stratum = 2 delta_irr (halved)
  for (const auto& [I, c] : raw.delta) add_delta(out.delta, I, c);

  // kappa_1 = sum psi_i - sum delta_I
  std::vector<Rat> psi = raw.psi;
  if (raw.kappa != 0) {
    for (int i = 0; i < raw.n; ++i) psi[i] += raw.kappa;
    for (const auto& I : subsets) add_delta(out.delta, I, -raw.kappa);
  }
  // psi_i = 1/12 delta_irr + sum_{I not containing i} delta_I
  for (int i = 0; i < raw.n; ++i) {
    if (psi[i] == 0) continue;
    out.delta_irr += psi[i] / 12;
    out.delta_irr.canonicalize();
    for (const auto& I : subsets)
      if (!std::binary_search(I.begin(), I.end(), i + 1))
        add_delta(out.delta, I, psi[i]);
  }
  return out;
}

namespace {

std::string subset_str(const std::vector<int>& I) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (i) os << ",";
    os << I[i];
  }
  os << "}";
  return os.str();
}

}  // namespace

PinnedPsiFormGenus1 genus1_pinned_psi_form(const TautClass& x,
                                  const std::vector<Rat>& target_psi) {
  const RawGenus1 raw = classify_genus1(x);
  require(static_cast<int>(target_psi.size()) == raw.n,
          "one target psi coefficient per marking required");
  const auto subsets = genus1_subsets(raw.n);

  PinnedPsiFormGenus1 out;
  out.n = raw.n;
  out.psi = raw.psi;
  out.delta_irr = 2 * raw.stratum_irr;
  for (const auto& [I, c] : raw.delta) add_delta(out.delta, I, c);

  {
    std::ostringstream os;
    os << "input: kappa_1 coeff " << rat_str(raw.kappa)
       << ", nonseparating stratum coeff " << rat_str(raw.stratum_irr)
       << " (delta_irr = " << rat_str(out.delta_irr)
       << " in the halved normalization)";
    out.trace.push_back(os.str());
  }

  if (raw.kappa != 0) {
    std::ostringstream os;
    os << "substitute " << rat_str(raw.kappa)
       << " * kappa_1 = " << rat_str(raw.kappa)
       << " * (sum_i psi_i - sum_I delta_I)";
    out.trace.push_back(os.str());
    for (int i = 0; i < raw.n; ++i) {
      out.psi[i] += raw.kappa;
      out.psi[i].canonicalize();
    }
    for (const auto& I : subsets) add_delta(out.delta, I, -raw.kappa);
  }

  for (int i = 0; i < raw.n; ++i) {
    Rat rho = out.psi[i] - target_psi[i];
    rho.canonicalize();
    if (rho == 0) continue;
    std::ostringstream os;
    os << "substitute " << rat_str(rho) << " * psi_" << (i + 1) << " = "
       << rat_str(rho) << " * (1/12 delta_irr + sum_{I not containing "
       << (i + 1) << "} delta_I); delta_irr gains " << rat_str(rho / 12);
    out.trace.push_back(os.str());
    out.delta_irr += rho / 12;
    out.delta_irr.canonicalize();
    for (const auto& I : subsets)
      if (!std::binary_search(I.begin(), I.end(), i + 1))
        add_delta(out.delta, I, rho);
    out.psi[i] = target_psi[i];
  }

  {
    std::ostringstream os;
    os << "normal form: sum_i (target) psi_i + " << rat_str(out.delta_irr)
       << " * delta_irr";
    for (const auto& [I, c] : out.delta)
      os << " + " << rat_str(c) << " * delta_" << subset_str(I);
    out.trace.push_back(os.str());
  }
  return out;
}

DeltaIrrProbe delta_irr_probe(const std::vector<int>& mu, int k) {
  DeltaIrrProbe probe;
  probe.mu = mu;
  probe.k = k;
  const int n = static_cast<int>(mu.size());
  const TautClass p = pixton_class(make_pixton_input(1, k, mu, 1));

  probe.stratum_coefficient =
      p.coefficient(nonsep_stratum_graph(n),
                    Decoration::trivial(nonsep_stratum_graph(n)));
  probe.first_form_delta_irr = 2 * probe.stratum_coefficient;

  std::vector<Rat> target(n);
  for (int i = 0; i < n; ++i) target[i] = Rat(mu[i]) * mu[i];
  probe.pinned_form = genus1_pinned_psi_form(p, target);
  probe.pinned_form_delta_irr = probe.pinned_form.delta_irr;
  probe.full_reduction = reduce_genus1(p);

  // reassemble the normal form and check it reduces to the same vector
  std::vector<std::pair<Rat, TautClass>> parts;
  for (int i = 0; i < n; ++i)
    parts.emplace_back(probe.pinned_form.psi[i], psi_class(1, n, i + 1));
  parts.emplace_back(probe.pinned_form.delta_irr / 2,
                     stratum_class(nonsep_stratum_graph(n)));
  for (const auto& [I, c] : probe.pinned_form.delta)
    parts.emplace_back(c, stratum_class(sep_stratum_graph(n, I)));
  const TautClass reassembled = linear_combine(parts);
  probe.internally_consistent =
      reduce_genus1(reassembled) == probe.full_reduction;
  return probe;
}

Json probe_to_json(const DeltaIrrProbe& p) {
  Json j;
  j["mu"] = p.mu;
  j["k"] = p.k;
  j["stratum_coefficient"] = rat_str(p.stratum_coefficient);
  j["first_form_delta_irr"] = rat_str(p.first_form_delta_irr);
  j["pinned_form_delta_irr"] = rat_str(p.pinned_form_delta_irr);
  j["pinned_form"] = Json::object();
  j["pinned_form"]["psi"] = Json::array();
  for (const auto& c : p.pinned_form.psi)
    j["pinned_form"]["psi"].push_back(rat_str(c));
  j["pinned_form"]["delta_irr"] = rat_str(p.pinned_form.delta_irr);
  j["pinned_form"]["delta"] = Json::array();
  for (const auto& [I, c] : p.pinned_form.delta)
    j["pinned_form"]["delta"].push_back(Json{{"I", I}, {"coeff", rat_str(c)}});
  j["trace"] = p.pinned_form.trace;
  j["full_reduction"] = genus1_vector_to_json(p.full_reduction);
  j["internally_consistent"] = p.internally_consistent;
  return j;
}

bool VerificationReport::all_pass() const {
  return std::all_of(claims.begin(), claims.end(),
                     [](const Claim& c) { return c.pass; });
}

Json report_to_json(const VerificationReport& r) {
  Json j;
  j["claims"] = Json::array();
  for (const auto& c : r.claims) {
    Json cj;
    cj["name"] = c.name;
    cj["status"] = c.pass ? "pass" : "fail";
    cj["difference"] = c.difference.is_null() ? Json::object() : c.difference;
    j["claims"].push_back(cj);
  }
  j["status"] = r.all_pass() ? "pass" : "fail";
  return j;
}

std::string report_to_text(const VerificationReport& r) {
  std::ostringstream os;
  for (const auto& c : r.claims) {
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name << "\n";
    if (!c.pass) os << "      difference: " << c.difference.dump() << "\n";
  }
  os << (r.all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
  return os.str();
}

VerificationReport verify_genus1(const std::vector<int>& mu,
                                 const std::vector<int>& k_list,
                                 const ClassRegistry& reg) {
  const int n = static_cast<int>(mu.size());
  require(n >= 1, "empty signature");
  require(!k_list.empty(), "empty k list");
  int sum = 0;
  for (int m : mu) sum += m;
  require(sum == 0, "genus-1 signatures sum to 0");

  auto half_p = [&](int k) {
    TautClass p = pixton_class(make_pixton_input(1, k, mu, 1));
    p *= make_frac(1, 2);
    return p;
  };
  auto cont = [&](int k) {
    const SymbolicClass c =
        nontrivial_contribution_sum(1, Signature{k, mu}, reg);
    const auto t = to_tautological(c);
    require(t.has_value(), "genus-1 contributions must be tautological");
    return *t;
  };

  const TautClass p1 = half_p(1);
  const Genus1Vector red1 = reduce_genus1(p1);
  const SymbolicClass h1 = weighted_class_H(1, Signature{1, mu}, reg);
  const Genus1Vector d1 = reduce_genus1(p1 - cont(1));

  VerificationReport rep;
  for (int k : k_list) {
    require(k >= 1, "k must be >= 1");
    const TautClass pk = half_p(k);

    VerificationReport::Claim c1;
    c1.name = "reduce(2^-1 P^{1," + std::to_string(k) + "}) == reduce(2^-1 P^{1,1})";
    Genus1Vector dr = reduce_genus1(pk);
    dr -= red1;
    c1.pass = dr.is_zero();
    if (!c1.pass) c1.difference = genus1_vector_to_json(dr);
    rep.claims.push_back(std::move(c1));

    VerificationReport::Claim c2;
    c2.name = "H^{" + std::to_string(k) + "} == H^{1} after normalization";
    const SymbolicClass hk = weighted_class_H(1, Signature{k, mu}, reg);
    c2.pass = hk == h1;
    if (!c2.pass) {
      SymbolicClass diff = hk;
      diff -= h1;
      c2.difference = class_to_json(diff);
    }
    rep.claims.push_back(std::move(c2));

    VerificationReport::Claim c3;
    c3.name = "D(" + std::to_string(k) + ") == D(1)";
    Genus1Vector dk = reduce_genus1(pk - cont(k));
    dk -= d1;
    c3.pass = dk.is_zero();
    if (!c3.pass) c3.difference = genus1_vector_to_json(dk);
    rep.claims.push_back(std::move(c3));
  }
  return rep;
}

VerificationReport genus0_check(const std::vector<int>& mu, int k) {
  Signature sig{k, mu};
  sig.validate(0);
  const int n = sig.n();

  VerificationReport rep;
  const TautClass p = pixton_class(make_pixton_input(0, k, mu, 0));
  const TautClass fund = fundamental_class(0, n);

  VerificationReport::Claim c1;
  c1.name = "degree-0 Pixton part is the fundamental class";
  c1.pass = p == fund;
  if (!c1.pass) c1.difference = class_to_json(p - fund);
  rep.claims.push_back(std::move(c1));

  const SymbolicClass h = weighted_class_H(0, sig);
  const auto ht = to_tautological(h);

  VerificationReport::Claim c2;
  c2.name = "H is the fundamental class";
  c2.pass = ht.has_value() && *ht == fund;
  if (!c2.pass && ht) c2.difference = class_to_json(*ht - fund);
  rep.claims.push_back(std::move(c2));

  VerificationReport::Claim c3;
  c3.name = "conjecture gap vanishes identically";
  c3.pass = ht.has_value() && (p - *ht).empty();
  if (!c3.pass && ht) c3.difference = class_to_json(p - *ht);
  rep.claims.push_back(std::move(c3));
  return rep;
}

}  // namespace tauttwist
