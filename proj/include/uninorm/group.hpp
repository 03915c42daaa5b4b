#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace uninorm {

/// Element code: an integer in [0, order) (mixed radix, last factor fastest).
using Element = std::int64_t;

/// Finite abelian group Z_{n_1} x ... x Z_{n_d}.
class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<std::int64_t> factors);

  static FiniteAbelianGroup cyclic(std::int64_t n) { return FiniteAbelianGroup({n}); }

  std::span<const std::int64_t> factors() const noexcept { return factors_; }
  std::int64_t order() const noexcept { return order_; }
  std::size_t rank() const noexcept { return factors_.size(); }
  bool is_cyclic() const noexcept { return factors_.size() == 1; }

  bool contains(Element a) const noexcept { return a >= 0 && a < order_; }

  /// Unchecked arithmetic on valid codes.
  Element add(Element a, Element b) const noexcept;
  Element negate(Element a) const noexcept;
  Element subtract(Element a, Element b) const noexcept { return add(a, negate(b)); }

  std::vector<std::int64_t> decode(Element a) const;
  Element encode(std::span<const std::int64_t> digits) const;

  /// Dense table with table[a * order + b] = a + b. Built on demand; the
  /// kernels take one per call.
  std::vector<std::int32_t> addition_table() const;

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<std::int64_t> factors_;
  std::vector<std::int64_t> strides_;
  std::int64_t order_ = 1;
};

/// Checked addition: throws invalid-element on out-of-range codes.
Element group_add(const FiniteAbelianGroup& g, Element a, Element b);

/// Real-valued function on a finite abelian group, stored densely by code.
class GroupFunction {
 public:
  GroupFunction(FiniteAbelianGroup group, std::vector<double> values);

  static GroupFunction constant(const FiniteAbelianGroup& group, double c);
  static GroupFunction zero(const FiniteAbelianGroup& group) { return constant(group, 0.0); }
  static GroupFunction indicator(const FiniteAbelianGroup& group, std::span<const Element> set);
  static GroupFunction from(const FiniteAbelianGroup& group,
                            const std::function<double(Element)>& fn);

  const FiniteAbelianGroup& group() const noexcept { return group_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](Element a) const noexcept { return values_[static_cast<std::size_t>(a)]; }

  double max_abs() const noexcept;

  GroupFunction operator+(const GroupFunction& other) const;
  GroupFunction operator-(const GroupFunction& other) const;
  /// Pointwise product.
  GroupFunction operator*(const GroupFunction& other) const;
  GroupFunction operator*(double c) const;
  GroupFunction operator-() const { return *this * -1.0; }

  GroupFunction map(const std::function<double(double)>& fn) const;

 private:
  FiniteAbelianGroup group_;
  std::vector<double> values_;
};

inline GroupFunction operator*(double c, const GroupFunction& f) { return f * c; }

/// Uniform average (1/|Z|) sum f(v), pairwise accumulated.
double average(const GroupFunction& f);

/// L_p norm under the uniform probability measure; p in (1, inf].
double lp_norm(const GroupFunction& f, double p);

/// Same, for a raw value array (used for tensors as well).
double lp_norm(std::span<const double> values, double p);

}  // namespace uninorm
