#include "randlab/machine_table.hpp"

#include <algorithm>

namespace randlab {

MachineTable MachineTable::empty(int machine_count) {
  if (machine_count < 0) {
    throw precondition_error("parameter-out-of-range", "machine_count must be >= 0");
  }
  MachineTable t;
  t.triggers_.resize(static_cast<std::size_t>(machine_count));
  return t;
}

MachineTable MachineTable::from_triggers(int machine_count,
                                         const std::vector<std::pair<int, Bits>>& triggers) {
  MachineTable t = empty(machine_count);
  for (const auto& [n, y] : triggers) {
    if (n < 1 || n > machine_count) {
      throw precondition_error("parameter-out-of-range",
                               "trigger names machine " + std::to_string(n) + " of " +
                                   std::to_string(machine_count));
    }
    if (!valid_bits(y)) throw parse_error("trigger prefix '" + y + "' is not a bitstring");
    t.triggers_[static_cast<std::size_t>(n - 1)].push_back(y);
  }
  for (auto& list : t.triggers_) list = reduce_prefix_set(std::move(list));
  return t;
}

MachineTable MachineTable::from_entries(int machine_count, const std::vector<Entry>& entries) {
  // Monotone closure of the halted entries is the trigger form; an
  // explicitly un-halted entry under a halted ancestor contradicts
  // monotonicity and is rejected.
  std::vector<std::pair<int, Bits>> halted;
  for (const Entry& e : entries) {
    if (!valid_bits(e.y)) throw parse_error("entry prefix '" + e.y + "' is not a bitstring");
    if (e.halted) halted.emplace_back(e.machine, e.y);
  }
  MachineTable t = from_triggers(machine_count, halted);
  for (const Entry& e : entries) {
    if (!e.halted && t.halted(e.machine, e.y)) {
      throw precondition_error("non-monotone-table",
                               "machine " + std::to_string(e.machine) + " is marked un-halted at '" +
                                   e.y + "' under a halted ancestor");
    }
  }
  return t;
}

bool MachineTable::halted(int machine, const Bits& y) const {
  if (machine < 1 || machine > machine_count()) {
    throw precondition_error("parameter-out-of-range",
                             "machine index " + std::to_string(machine) + " out of range");
  }
  const auto& list = triggers_[static_cast<std::size_t>(machine - 1)];
  return std::any_of(list.begin(), list.end(), [&](const Bits& t) { return is_prefix(t, y); });
}

}  // namespace randlab
