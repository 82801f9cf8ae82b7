#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tauttwist/taut_class.hpp"

namespace tauttwist {

struct RegistryEntry {
  OpaqueGen key;
  TautClass expansion;
  std::string provenance;
};

// Persistent map from opaque-generator keys to tautological expansions.
// An expansion must live on (key.g, |key.sig|) and be homogeneous of the
// key's declared codimension. Read-mostly; mutate only between
// computations.
class ClassRegistry {
 public:
  ClassRegistry() = default;

  void add(RegistryEntry entry);  // validates shape, throws on mismatch
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, RegistryEntry>& entries() const {
    return entries_;
  }

  struct Match {
    const RegistryEntry* entry;
    // slot i of the queried generator corresponds to marking perm[i]+1 of
    // the stored expansion
    std::vector<int> perm;
  };
  // Finds an entry whose signature matches up to an entry-preserving
  // permutation of the markings.
  std::optional<Match> lookup(const OpaqueGen& gen) const;

  static ClassRegistry load_file(const std::string& path);
  void save_file(const std::string& path) const;

 private:
  std::map<std::string, RegistryEntry> entries_;
};

// Replaces every opaque generator that has a built-in rule or a registry
// entry; unexpandable opaques survive verbatim. Idempotent on a fixed
// registry. Built-in rules:
//   Hbar in genus 0            -> fundamental class
//   Hbar(1, k, mu)             -> Hbar(1, 1, mu)
//   Hbar(1, 1, (0,...,0))      -> fundamental class
//   HbarPrime(1, k, (0,...,0)) -> 0
SymbolicClass expand(const SymbolicClass& s, const ClassRegistry& reg);

}  // namespace tauttwist
