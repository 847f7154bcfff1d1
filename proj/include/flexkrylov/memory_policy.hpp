#pragma once

#include <string>
#include <vector>

namespace flexkrylov {

/// The sequence {m_k} that controls how many previous search directions the
/// flexible iteration A-orthogonalizes against. Admissible sequences satisfy
/// 0 <= m_k <= k and m_{k+1} <= m_k + 1.
class MemoryPolicy {
 public:
  enum class Kind { psd, truncated, full, explicit_sequence };

  static MemoryPolicy psd();                   // m_k = 0
  static MemoryPolicy pcg();                   // m_k = min(k, 1)
  static MemoryPolicy full();                  // m_k = k
  static MemoryPolicy truncated(int depth);    // m_k = min(k, depth)
  static MemoryPolicy explicit_sequence(std::vector<int> m);

  /// m_k; throws std::invalid_argument for k < 0 or past an explicit sequence.
  int window(int k) const;

  Kind kind() const { return kind_; }
  std::string name() const;

 private:
  MemoryPolicy(Kind kind, int depth, std::vector<int> seq)
      : kind_(kind), depth_(depth), seq_(std::move(seq)) {}
  Kind kind_;
  int depth_ = 0;
  std::vector<int> seq_;
};

struct PolicyValidation {
  bool ok = true;
  int first_violation = -1;
  std::string message;
};

/// Checks both admissibility inequalities for k < horizon and reports the
/// first violating index.
PolicyValidation validate_policy(const MemoryPolicy& policy, int horizon);

}  // namespace flexkrylov
