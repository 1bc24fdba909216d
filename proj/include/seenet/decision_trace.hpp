#pragma once

#include <cstdint>

namespace seenet {

// Fingerprint of every discrete branch taken by piecewise ops (ReLU sign tests,
// threshold comparisons, argmax picks) while a trace is installed on the
// current thread. Two evaluations with equal fingerprints lie on the same
// smooth piece, which is how the gradient checker detects nearby kinks.
class DecisionTrace {
 public:
  DecisionTrace() : previous_(current()) { current() = this; }
  ~DecisionTrace() { current() = previous_; }
  DecisionTrace(const DecisionTrace&) = delete;
  DecisionTrace& operator=(const DecisionTrace&) = delete;

  std::uint64_t fingerprint() const { return hash_; }

  static DecisionTrace* active() { return current(); }

  void record(std::uint64_t decision) {
    hash_ ^= decision + 0x9e3779b97f4a7c15ULL + (hash_ << 6) + (hash_ >> 2);
    hash_ *= 0xff51afd7ed558ccdULL;
  }

 private:
  static DecisionTrace*& current() {
    thread_local DecisionTrace* trace = nullptr;
    return trace;
  }

  DecisionTrace* previous_;
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

inline void record_decision(std::uint64_t decision) {
  if (auto* t = DecisionTrace::active()) t->record(decision);
}

}  // namespace seenet
