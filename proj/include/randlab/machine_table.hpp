#pragma once

#include <vector>

#include "randlab/bitstring.hpp"

namespace randlab {

// A finite, extension-monotone halting predicate: machine n counts as
// halted at oracle prefix y iff one of its trigger prefixes is a prefix of
// y. Tables are explicit data, never simulations; loaders accept either
// trigger form or explicit (machine, y, halted) entries whose monotone
// closure is applied and verified.
class MachineTable {
 public:
  struct Entry {
    int machine = 0;  // 1-based
    Bits y;
    bool halted = false;
  };

  static MachineTable empty(int machine_count = 0);
  static MachineTable from_triggers(int machine_count,
                                    const std::vector<std::pair<int, Bits>>& triggers);
  static MachineTable from_entries(int machine_count, const std::vector<Entry>& entries);

  int machine_count() const { return static_cast<int>(triggers_.size()); }
  bool halted(int machine, const Bits& y) const;

  // Minimal halting nodes per machine (index 0 = machine 1), each an
  // antichain after prefix-minimal reduction.
  const std::vector<std::vector<Bits>>& triggers() const { return triggers_; }

 private:
  std::vector<std::vector<Bits>> triggers_;
};

}  // namespace randlab
