#include "uninorm/tensor.hpp"

#include "uninorm/budget.hpp"
#include "uninorm/error.hpp"
#include "uninorm/summation.hpp"

#include <cmath>
#include <string>

namespace uninorm {

TensorFunction::TensorFunction(std::int64_t vertex_count, int arity, std::vector<double> values)
    : vertex_count_(vertex_count), arity_(arity), values_(std::move(values)) {
  if (vertex_count_ < 1) throw Error(ErrorKind::invalid_input, "vertex_count must be >= 1");
  if (arity_ < 1) throw Error(ErrorKind::invalid_input, "arity must be >= 1");
  const auto expected = checked_pow(static_cast<std::uint64_t>(vertex_count_), static_cast<std::uint64_t>(arity_));
  if (values_.size() != expected) {
    throw Error(ErrorKind::invalid_input, "expected |V|^s = " + std::to_string(expected) +
                                              " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "non-finite tensor value");
  }
}

TensorFunction TensorFunction::constant(std::int64_t vertex_count, int arity, double c) {
  const auto n = checked_pow(static_cast<std::uint64_t>(vertex_count), static_cast<std::uint64_t>(arity));
  return TensorFunction(vertex_count, arity, std::vector<double>(n, c));
}

TensorFunction TensorFunction::from(std::int64_t vertex_count, int arity,
                                    const std::function<double(std::span<const std::int64_t>)>& fn) {
  const auto n = checked_pow(static_cast<std::uint64_t>(vertex_count), static_cast<std::uint64_t>(arity));
  std::vector<double> values(n);
  std::vector<std::int64_t> index(static_cast<std::size_t>(arity), 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    values[flat] = fn(index);
    for (std::size_t i = index.size(); i-- > 0;) {
      if (++index[i] < vertex_count) break;
      index[i] = 0;
    }
  }
  return TensorFunction(vertex_count, arity, std::move(values));
}

std::size_t TensorFunction::flat_index(std::span<const std::int64_t> index) const {
  if (index.size() != static_cast<std::size_t>(arity_)) {
    throw Error(ErrorKind::invalid_input, "index arity mismatch");
  }
  std::size_t flat = 0;
  for (std::int64_t v : index) {
    if (v < 0 || v >= vertex_count_) throw Error(ErrorKind::invalid_input, "vertex out of range");
    flat = flat * static_cast<std::size_t>(vertex_count_) + static_cast<std::size_t>(v);
  }
  return flat;
}

double TensorFunction::at(std::span<const std::int64_t> index) const { return values_[flat_index(index)]; }

double TensorFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

template <class Op>
TensorFunction zip(const TensorFunction& a, const TensorFunction& b, Op op) {
  if (!a.same_shape(b)) throw Error(ErrorKind::invalid_input, "tensor shape mismatch");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return TensorFunction(a.vertex_count(), a.arity(), std::move(v));
}

}  // namespace

TensorFunction TensorFunction::operator+(const TensorFunction& other) const {
  return zip(*this, other, [](double x, double y) { return x + y; });
}

TensorFunction TensorFunction::operator-(const TensorFunction& other) const {
  return zip(*this, other, [](double x, double y) { return x - y; });
}

TensorFunction TensorFunction::operator*(const TensorFunction& other) const {
  return zip(*this, other, [](double x, double y) { return x * y; });
}

TensorFunction TensorFunction::operator*(double c) const {
  return map([c](double x) { return c * x; });
}

TensorFunction TensorFunction::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(values_[i]);
  return TensorFunction(vertex_count_, arity_, std::move(v));
}

double average(const TensorFunction& f) { return pairwise_mean(f.values()); }

DualFamily::DualFamily(int arity, std::vector<TensorFunction> members)
    : arity_(arity), members_(std::move(members)) {
  if (arity_ < 1 || arity_ > 16) throw Error(ErrorKind::invalid_input, "dual family arity out of range");
  const std::size_t expected = (std::size_t{1} << arity_) - 1;
  if (members_.size() != expected) {
    throw Error(ErrorKind::invalid_input, "dual family needs 2^s - 1 = " + std::to_string(expected) +
                                              " members, got " + std::to_string(members_.size()));
  }
  for (const auto& m : members_) {
    if (m.arity() != arity_ || !m.same_shape(members_.front())) {
      throw Error(ErrorKind::invalid_input, "dual family members must share shape and arity");
    }
    if (m.max_abs() > 1.0 + 1e-12) throw Error(ErrorKind::invalid_input, "dual family entries must lie in [-1,1]");
  }
}

DualFamily DualFamily::constant(std::int64_t vertex_count, int arity, double c) {
  std::vector<TensorFunction> members((std::size_t{1} << arity) - 1,
                                      TensorFunction::constant(vertex_count, arity, c));
  return DualFamily(arity, std::move(members));
}

}  // namespace uninorm
