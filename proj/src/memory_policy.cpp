#include "flexkrylov/memory_policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace flexkrylov {

MemoryPolicy MemoryPolicy::psd() { return MemoryPolicy(Kind::psd, 0, {}); }
MemoryPolicy MemoryPolicy::pcg() { return MemoryPolicy(Kind::truncated, 1, {}); }
MemoryPolicy MemoryPolicy::full() { return MemoryPolicy(Kind::full, 0, {}); }

MemoryPolicy MemoryPolicy::truncated(int depth) {
  if (depth < 0) throw std::invalid_argument("MemoryPolicy::truncated: negative depth");
  return MemoryPolicy(Kind::truncated, depth, {});
}

MemoryPolicy MemoryPolicy::explicit_sequence(std::vector<int> m) {
  if (m.empty()) throw std::invalid_argument("MemoryPolicy::explicit_sequence: empty sequence");
  return MemoryPolicy(Kind::explicit_sequence, 0, std::move(m));
}

int MemoryPolicy::window(int k) const {
  if (k < 0) throw std::invalid_argument("MemoryPolicy::window: negative index");
  switch (kind_) {
    case Kind::psd:
      return 0;
    case Kind::truncated:
      return std::min(k, depth_);
    case Kind::full:
      return k;
    case Kind::explicit_sequence:
      if (k >= static_cast<int>(seq_.size()))
        throw std::invalid_argument("MemoryPolicy::window: index past the explicit sequence");
      return seq_[k];
  }
  throw std::logic_error("MemoryPolicy::window: unknown kind");
}

std::string MemoryPolicy::name() const {
  switch (kind_) {
    case Kind::psd:
      return "psd";
    case Kind::truncated:
      return depth_ == 1 ? "pcg" : "truncated(" + std::to_string(depth_) + ")";
    case Kind::full:
      return "full";
    case Kind::explicit_sequence:
      return "explicit";
  }
  return "?";
}

PolicyValidation validate_policy(const MemoryPolicy& policy, int horizon) {
  PolicyValidation v;
  if (horizon < 1) throw std::invalid_argument("validate_policy: horizon must be >= 1");
  int prev = 0;
  for (int k = 0; k < horizon; ++k) {
    int m = 0;
    try {
      m = policy.window(k);
    } catch (const std::invalid_argument&) {
      v.ok = false;
      v.first_violation = k;
      v.message = "sequence shorter than the horizon at k = " + std::to_string(k);
      return v;
    }
    if (m < 0 || m > k) {
      v.ok = false;
      v.first_violation = k;
      v.message = "m(" + std::to_string(k) + ") = " + std::to_string(m) + " violates 0 <= m_k <= k";
      return v;
    }
    if (k > 0 && m > prev + 1) {
      v.ok = false;
      v.first_violation = k;
      v.message = "m(" + std::to_string(k) + ") = " + std::to_string(m) + " violates m_{k+1} <= m_k + 1 (m(" +
                  std::to_string(k - 1) + ") = " + std::to_string(prev) + ")";
      return v;
    }
    prev = m;
  }
  return v;
}

}  // namespace flexkrylov
