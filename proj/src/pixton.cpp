#include "tauttwist/pixton.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace tauttwist {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

int mod(long long a, int r) {
  const long long m = a % r;
  return static_cast<int>(m < 0 ? m + r : m);
}

const std::vector<StableGraph>& cached_graphs(int g, int n, int max_edges) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::vector<StableGraph>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({g, n, max_edges});
  if (it == cache.end())
    it = cache.emplace(std::make_tuple(g, n, max_edges),
                       enumerate_stable_graphs(g, n, max_edges))
             .first;
  return it->second;
}

}  // namespace

std::vector<int> PixtonInput::shifted() const {
  std::vector<int> out(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] = mu[i] + k;
  return out;
}

void PixtonInput::validate() const {
  require(k >= 1, "k must be >= 1");
  require(g >= 0 && g <= kMaxGenus, "genus out of supported range");
  require(n == static_cast<int>(mu.size()) && n >= 1,
          "marking count disagrees with mu");
  require(2 * g - 2 + n > 0, "unstable (g,n)");
  int sum = 0;
  for (int m : mu) sum += m;
  require(sum == k * (2 * g - 2), "mu must sum to k(2g-2)");
  require(degree >= 0 && degree <= kMaxPixtonDegree,
          "degree out of supported range");
}

PixtonInput make_pixton_input(int g, int k, std::vector<int> mu, int degree) {
  PixtonInput in;
  in.g = g;
  in.n = static_cast<int>(mu.size());
  in.k = k;
  in.mu = std::move(mu);
  in.degree = degree < 0 ? g : degree;
  in.validate();
  return in;
}

std::vector<Weighting> enumerate_weightings(const StableGraph& gamma,
                                            const PixtonInput& in) {
  require(in.r >= 2, "modulus r must be >= 2");
  require(gamma.total_genus() == in.g && gamma.num_legs() == in.n,
          "graph does not match the input space");
  const int r = in.r;
  const int V = gamma.num_vertices();
  const int E = gamma.num_edges();

  // fixed leg contributions and per-vertex targets, all mod r
  std::vector<int> target(V);
  for (int v = 0; v < V; ++v)
    target[v] = mod(static_cast<long long>(in.k) *
                        (2 * gamma.genus[v] - 2 + gamma.valence(v)),
                    r);
  std::vector<int> base(V, 0);
  const auto mt = in.shifted();
  for (const auto& [m, v] : gamma.legs)
    base[v] = mod(base[v] + mod(mt[m - 1], r), r);

  std::vector<Weighting> out;
  std::vector<int> w(E, 0);
  while (true) {
    std::vector<int> sum = base;
    for (int e = 0; e < E; ++e) {
      sum[gamma.edges[e][0]] = mod(sum[gamma.edges[e][0]] + w[e], r);
      sum[gamma.edges[e][1]] = mod(sum[gamma.edges[e][1]] + (r - w[e]) % r, r);
    }
    if (sum == target) {
      Weighting W;
      W.w.resize(E);
      for (int e = 0; e < E; ++e) W.w[e] = {w[e], (r - w[e]) % r};
      out.push_back(std::move(W));
    }
    int i = 0;
    for (; i < E; ++i) {
      if (++w[i] < r) break;
      w[i] = 0;
    }
    if (i == E) break;
  }
  return out;
}

namespace {

// Enumerates exponent assignments over kappa/leg/edge slots summing to rem
// and emits the decorated terms for one weighting.
struct TermEmitter {
  const StableGraph& G;
  const PixtonInput& in;
  const std::vector<Int>& x;  // per-edge half-edge weight products
  Rat pref;
  TautClass& out;

  std::vector<int> expo;  // V kappa, L leg psi, E edge extras

  void emit() {
    const int V = G.num_vertices();
    const int L = G.num_legs();
    const int E = G.num_edges();
    const Int k2 = Int(in.k) * in.k;
    const auto mt = in.shifted();

    Rat c = pref;
    for (int v = 0; v < V; ++v) {
      const int a = expo[v];
      if (a == 0) continue;
      Rat f = make_frac(int_pow(k2, a), factorial(a));
      if (a % 2 == 1) f = -f;
      c *= f;
    }
    for (int i = 0; i < L; ++i) {
      const int b = expo[V + i];
      if (b == 0) continue;
      const Int m2 = Int(mt[i]) * mt[i];
      c *= make_frac(int_pow(m2, b), factorial(b));
    }
    for (int e = 0; e < E; ++e) {
      const int j = expo[V + L + e];
      Rat f = make_frac(int_pow(x[e], j + 1), factorial(j + 1));
      if (j % 2 == 1) f = -f;
      c *= f;
    }
    if (c == 0) return;

    Decoration dec = Decoration::trivial(G);
    for (int v = 0; v < V; ++v) dec.kappa1[v] = expo[v];
    for (int i = 0; i < L; ++i) dec.leg_psi[i] = expo[V + i];
    split_edges(dec, 0, c);
  }

  // binomial split of (psi + psi')^{j_e} across the two ends
  void split_edges(Decoration& dec, int e, const Rat& c) {
    const int V = G.num_vertices();
    const int L = G.num_legs();
    if (e == G.num_edges()) {
      out.add_term(G, dec, c);
      return;
    }
    const int j = expo[V + L + e];
    for (int p = 0; p <= j; ++p) {
      dec.edge_psi[e] = {p, j - p};
      split_edges(dec, e + 1, c * Rat(binomial(j, p)));
    }
    dec.edge_psi[e] = {0, 0};
  }

  void distribute(int idx, int left) {
    const int total = static_cast<int>(expo.size());
    if (idx == total - 1 || total == 0) {
      if (total == 0) {
        if (left == 0) emit();
        return;
      }
      expo[idx] = left;
      emit();
      expo[idx] = 0;
      return;
    }
    for (int a = 0; a <= left; ++a) {
      expo[idx] = a;
      distribute(idx + 1, left - a);
    }
    expo[idx] = 0;
  }

  void run(int rem) {
    const int slots =
        G.num_vertices() + G.num_legs() + G.num_edges();
    expo.assign(slots, 0);
    if (slots == 0) {
      if (rem == 0) emit();
      return;
    }
    distribute(0, rem);
  }
};

}  // namespace

TautClass pixton_class_at_r(const PixtonInput& in) {
  in.validate();
  require(in.r >= 2, "modulus r must be >= 2");
  TautClass out(in.g, in.n);
  for (const StableGraph& G : cached_graphs(in.g, in.n, in.degree)) {
    const int E = G.num_edges();
    const long long aut = automorphism_count(G);
    const Rat pref =
        make_frac(1, int_pow(Int(in.r), G.h1()) * Int(static_cast<long>(aut)));
    const int rem = in.degree - E;
    for (const Weighting& W : enumerate_weightings(G, in)) {
      std::vector<Int> x(E);
      bool zero = false;
      for (int e = 0; e < E; ++e) {
        x[e] = Int(W.w[e][0]) * W.w[e][1];
        if (x[e] == 0) {
          zero = true;  // (1 - exp(0))/t vanishes identically
          break;
        }
      }
      if (zero) continue;
      TermEmitter emitter{G, in, x, pref, out, {}};
      emitter.run(rem);
    }
  }
  return out;
}

RSamplePlan RSamplePlan::defaults(const PixtonInput& in) {
  in.validate();
  int maxm = 0;
  for (int m : in.shifted()) maxm = std::max(maxm, std::abs(m));
  const int start = 2 * in.degree * (maxm + in.k) + 3;
  RSamplePlan plan;
  for (int i = 0; i < 2 * in.degree + 2; ++i)
    plan.samples.push_back(start + i);
  plan.guards = {start + 2 * in.degree + 2, start + 2 * in.degree + 3};
  return plan;
}

namespace {

// Newton interpolation through (xs, ys), returned in ascending monomial
// coefficients.
std::vector<Rat> newton_fit(const std::vector<int>& xs,
                            const std::vector<Rat>& ys) {
  const std::size_t m = xs.size();
  std::vector<Rat> dd = ys;  // divided differences, in place
  for (std::size_t level = 1; level < m; ++level)
    for (std::size_t i = m - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / Rat(xs[i] - xs[i - level]);
      dd[i].canonicalize();
      if (i == level) break;
    }
  std::vector<Rat> poly{dd.empty() ? Rat(0) : dd[0]};
  std::vector<Rat> basis{Rat(1)};
  for (std::size_t j = 1; j < m; ++j) {
    // basis *= (x - xs[j-1])
    std::vector<Rat> nb(basis.size() + 1, Rat(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      nb[i] += basis[i] * Rat(-xs[j - 1]);
      nb[i + 1] += basis[i];
    }
    basis = std::move(nb);
    if (poly.size() < basis.size()) poly.resize(basis.size(), Rat(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      poly[i] += dd[j] * basis[i];
      poly[i].canonicalize();
    }
  }
  while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
  return poly;
}

Rat eval_poly(const std::vector<Rat>& poly, int x) {
  Rat v(0);
  for (std::size_t i = poly.size(); i-- > 0;) {
    v = v * Rat(x) + poly[i];
    v.canonicalize();
  }
  return v;
}

}  // namespace

TautClass pixton_class(const PixtonInput& in, const RSamplePlan& plan,
                       InterpolationReport* report) {
  in.validate();
  const int bound = 2 * in.degree;
  const int need = bound + 1;
  require(static_cast<int>(plan.samples.size()) >= need,
          "not enough sample moduli for the degree bound");
  require(!plan.guards.empty(), "at least one guard modulus is required");
  {
    std::vector<int> all = plan.samples;
    all.insert(all.end(), plan.guards.begin(), plan.guards.end());
    std::vector<int> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "sample/guard moduli must be distinct");
    for (int r : all) require(r >= 2, "moduli must be >= 2");
  }

  std::vector<TautClass> sample_classes, guard_classes;
  for (int r : plan.samples) {
    PixtonInput at = in;
    at.r = r;
    sample_classes.push_back(pixton_class_at_r(at));
  }
  for (int r : plan.guards) {
    PixtonInput at = in;
    at.r = r;
    guard_classes.push_back(pixton_class_at_r(at));
  }

  // union of decorated-term keys across all evaluations
  std::map<CanonicalKey, TautClass::Term> keys;
  for (const auto& cls : sample_classes)
    for (const auto& [key, tv] : cls.terms()) keys.emplace(key, tv.first);
  for (const auto& cls : guard_classes)
    for (const auto& [key, tv] : cls.terms()) keys.emplace(key, tv.first);

  if (report) {
    report->degree_bound = bound;
    report->samples = plan.samples;
    report->guards = plan.guards;
    report->coefficients.clear();
  }

  TautClass out(in.g, in.n);
  for (const auto& [key, term] : keys) {
    std::vector<Rat> values;
    for (const auto& cls : sample_classes) {
      auto it = cls.terms().find(key);
      values.push_back(it == cls.terms().end() ? Rat(0) : it->second.second);
    }
    const std::vector<int> fit_x(plan.samples.begin(),
                                 plan.samples.begin() + need);
    const std::vector<Rat> fit_y(values.begin(), values.begin() + need);
    const std::vector<Rat> poly = newton_fit(fit_x, fit_y);

    auto mismatch = [&](int r, const Rat& got) {
      std::ostringstream os;
      os << "interpolation inconsistent at r=" << r
         << " (sample set below the polynomiality threshold)";
      throw std::runtime_error(os.str());
      (void)got;
    };
    for (std::size_t i = need; i < plan.samples.size(); ++i)
      if (eval_poly(poly, plan.samples[i]) != values[i])
        mismatch(plan.samples[i], values[i]);
    std::vector<Rat> residuals;
    for (std::size_t i = 0; i < plan.guards.size(); ++i) {
      auto it = guard_classes[i].terms().find(key);
      const Rat got =
          it == guard_classes[i].terms().end() ? Rat(0) : it->second.second;
      const Rat res = got - eval_poly(poly, plan.guards[i]);
      if (res != 0) mismatch(plan.guards[i], got);
      residuals.push_back(res);
    }

    if (poly[0] != 0) out.add_term(term.graph, term.dec, poly[0]);
    if (report)
      report->coefficients.push_back(
          {term, poly, values, std::move(residuals)});
  }
  return out;
}

TautClass pixton_class(const PixtonInput& in, InterpolationReport* report) {
  return pixton_class(in, RSamplePlan::defaults(in), report);
}

}  // namespace tauttwist
