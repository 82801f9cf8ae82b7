#pragma once

#include <map>
#include <string>
#include <vector>

#include "tauttwist/json_io.hpp"
#include "tauttwist/registry.hpp"
#include "tauttwist/taut_class.hpp"

namespace tauttwist {

// Degree-1 classes on (1,n) reduced to the basis {delta_irr} u {delta_I},
// delta_irr in the halved normalization (half the pushforward of the
// nonseparating stratum) so that the printed relations hold:
//   kappa_1 = sum psi_i - sum delta_I
//   psi_i   = 1/12 delta_irr + sum_{I not containing i} delta_I
// with I over subsets of {1..n}, |I| <= n-2, indexing the divisor whose
// genus-1 component carries the markings in I.
struct Genus1Vector {
  int n = 0;
  Rat delta_irr = 0;
  std::map<std::vector<int>, Rat> delta;  // zero entries dropped

  bool is_zero() const;
  Genus1Vector& operator-=(const Genus1Vector& o);
  friend Genus1Vector operator-(Genus1Vector a, const Genus1Vector& b) {
    return a -= b;
  }
  bool operator==(const Genus1Vector& o) const;
};

Json genus1_vector_to_json(const Genus1Vector& v);

// Ambient (1,n) strata underlying the reduction basis.
StableGraph nonsep_stratum_graph(int n);
StableGraph sep_stratum_graph(int n, const std::vector<int>& I);
// Subsets I of {1..n} with |I| <= n-2, in map order.
std::vector<std::vector<int>> genus1_subsets(int n);

// Substitutes the two relation families; input must be degree-1 and
// supported on kappa_1, psi_i, the nonseparating stratum and separating
// strata. Throws on any unsupported term.
Genus1Vector reduce_genus1(const TautClass& x);

// Normal form used for the delta_irr probe: eliminate kappa_1, pin the psi
// coefficients to target_psi (the squares of the weights, in the probe)
// and push the residual psi part into the delta basis. Records the full
// substitution trace.
struct PinnedPsiFormGenus1 {
  int n = 0;
  std::vector<Rat> psi;
  Rat delta_irr = 0;
  std::map<std::vector<int>, Rat> delta;
  std::vector<std::string> trace;
};

PinnedPsiFormGenus1 genus1_pinned_psi_form(const TautClass& x,
                                  const std::vector<Rat>& target_psi);

// Probe output for the printed-constant question: computes P^{1,k}, runs
// both reductions and reports which delta_irr constant the relations
// produce in the pinned-psi normal form.
struct DeltaIrrProbe {
  std::vector<int> mu;
  int k = 1;
  Rat stratum_coefficient;    // coefficient of the unhalved stratum in P
  Rat first_form_delta_irr;   // same value in the halved normalization
  Rat pinned_form_delta_irr;   // after eliminating kappa_1 and the psi residue
  PinnedPsiFormGenus1 pinned_form;
  Genus1Vector full_reduction;
  bool internally_consistent = false;
};

DeltaIrrProbe delta_irr_probe(const std::vector<int>& mu, int k);
Json probe_to_json(const DeltaIrrProbe& p);

struct VerificationReport {
  struct Claim {
    std::string name;
    bool pass = true;
    Json difference;  // empty object when passing
  };
  std::vector<Claim> claims;
  bool all_pass() const;
};

Json report_to_json(const VerificationReport& r);
std::string report_to_text(const VerificationReport& r);

// Genus-1 k-independence battery: reduced 2^{-1}P, normalized H and the
// residual gap D(k) all agree with the k=1 case.
VerificationReport verify_genus1(const std::vector<int>& mu,
                                 const std::vector<int>& k_list,
                                 const ClassRegistry& reg = ClassRegistry{});

// Genus 0: degree-0 Pixton part, H and their gap are all the fundamental
// class story; the gap must vanish identically.
VerificationReport genus0_check(const std::vector<int>& mu, int k);

}  // namespace tauttwist
