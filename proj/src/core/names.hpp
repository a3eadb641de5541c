#pragma once

#include <set>
#include <string>

namespace hcspver {

// Fresh-name source for one verification run: boundary time variables
// (t1, t2, ...) in the program-variable namespace, and binder names in the
// bound-variable namespace. Binder names contain '?' so they can never
// collide with parsed identifiers.
class FreshNames {
 public:
  void reserve(const std::set<std::string>& taken) {
    taken_.insert(taken.begin(), taken.end());
  }

  std::string fresh_time() {
    while (true) {
      std::string name = "t" + std::to_string(++time_counter_);
      if (!taken_.count(name)) {
        taken_.insert(name);
        return name;
      }
    }
  }

  std::string fresh_bound(const char* base) {
    return std::string("?") + base + std::to_string(++bound_counter_);
  }

  // program-variable namespace, e.g. saved pre-substitution values
  std::string fresh_var(const std::string& base) {
    while (true) {
      std::string name = base + std::to_string(++var_counter_);
      if (!taken_.count(name)) {
        taken_.insert(name);
        return name;
      }
    }
  }

 private:
  std::set<std::string> taken_;
  int time_counter_ = 0;
  int bound_counter_ = 0;
  int var_counter_ = 0;
};

// Canonical name of the path time parameter.
inline const std::string kPathTime = "t";

} // namespace hcspver
