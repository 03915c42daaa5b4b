#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace uninorm {

/// Real-valued function on V^s, |V| = vertex_count, stored row-major
/// (coordinate i has stride |V|^{s-1-i}).
class TensorFunction {
 public:
  TensorFunction(std::int64_t vertex_count, int arity, std::vector<double> values);

  static TensorFunction constant(std::int64_t vertex_count, int arity, double c);
  static TensorFunction from(std::int64_t vertex_count, int arity,
                             const std::function<double(std::span<const std::int64_t>)>& fn);

  std::int64_t vertex_count() const noexcept { return vertex_count_; }
  int arity() const noexcept { return arity_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t flat) const noexcept { return values_[flat]; }
  double at(std::span<const std::int64_t> index) const;
  std::size_t flat_index(std::span<const std::int64_t> index) const;

  bool same_shape(const TensorFunction& other) const noexcept {
    return vertex_count_ == other.vertex_count_ && arity_ == other.arity_;
  }

  double max_abs() const noexcept;

  TensorFunction operator+(const TensorFunction& other) const;
  TensorFunction operator-(const TensorFunction& other) const;
  TensorFunction operator*(const TensorFunction& other) const;
  TensorFunction operator*(double c) const;
  TensorFunction map(const std::function<double(double)>& fn) const;

 private:
  std::int64_t vertex_count_;
  int arity_;
  std::vector<double> values_;
};

inline TensorFunction operator*(double c, const TensorFunction& f) { return f * c; }

double average(const TensorFunction& f);

/// Family <H_omega : omega in [2]^s \ {1^s}> of [-1,1]-valued tensors.
///
/// omega is encoded as a bitmask whose bit i is set iff omega_i = 2 (the
/// second column); mask 0 is 1^s and is not a member. members()[m - 1]
/// is H for mask m.
class DualFamily {
 public:
  DualFamily(int arity, std::vector<TensorFunction> members);

  /// All members identically `c` (|c| <= 1).
  static DualFamily constant(std::int64_t vertex_count, int arity, double c);

  int arity() const noexcept { return arity_; }
  std::int64_t vertex_count() const noexcept { return members_.front().vertex_count(); }
  const TensorFunction& member(unsigned mask) const { return members_.at(mask - 1); }
  std::span<const TensorFunction> members() const noexcept { return members_; }

 private:
  int arity_;
  std::vector<TensorFunction> members_;
};

}  // namespace uninorm
