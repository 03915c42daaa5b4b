#include "uninorm/group.hpp"

#include "uninorm/error.hpp"
#include "uninorm/summation.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace uninorm {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) factors_.push_back(1);
  strides_.assign(factors_.size(), 1);
  order_ = 1;
  for (std::size_t i = factors_.size(); i-- > 0;) {
    if (factors_[i] < 1) {
      throw Error(ErrorKind::invalid_parameter,
                  "cyclic factor must be >= 1, got " + std::to_string(factors_[i]));
    }
    strides_[i] = order_;
    if (order_ > std::numeric_limits<std::int32_t>::max() / factors_[i]) {
      throw Error(ErrorKind::invalid_parameter, "group order too large");
    }
    order_ *= factors_[i];
  }
}

Element FiniteAbelianGroup::add(Element a, Element b) const noexcept {
  if (factors_.size() == 1) {
    const Element s = a + b;
    return s >= order_ ? s - order_ : s;
  }
  Element result = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::int64_t n = factors_[i];
    const std::int64_t da = (a / strides_[i]) % n;
    const std::int64_t db = (b / strides_[i]) % n;
    std::int64_t d = da + db;
    if (d >= n) d -= n;
    result += d * strides_[i];
  }
  return result;
}

Element FiniteAbelianGroup::negate(Element a) const noexcept {
  Element result = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::int64_t n = factors_[i];
    const std::int64_t d = (a / strides_[i]) % n;
    result += ((n - d) % n) * strides_[i];
  }
  return result;
}

std::vector<std::int64_t> FiniteAbelianGroup::decode(Element a) const {
  if (!contains(a)) throw Error(ErrorKind::invalid_element, "element code " + std::to_string(a));
  std::vector<std::int64_t> digits(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) digits[i] = (a / strides_[i]) % factors_[i];
  return digits;
}

Element FiniteAbelianGroup::encode(std::span<const std::int64_t> digits) const {
  if (digits.size() != factors_.size()) {
    throw Error(ErrorKind::invalid_element, "digit count does not match group rank");
  }
  Element code = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::int64_t n = factors_[i];
    code += (((digits[i] % n) + n) % n) * strides_[i];
  }
  return code;
}

std::vector<std::int32_t> FiniteAbelianGroup::addition_table() const {
  const auto n = static_cast<std::size_t>(order_);
  std::vector<std::int32_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      table[a * n + b] = static_cast<std::int32_t>(add(static_cast<Element>(a), static_cast<Element>(b)));
    }
  }
  return table;
}

Element group_add(const FiniteAbelianGroup& g, Element a, Element b) {
  if (!g.contains(a) || !g.contains(b)) {
    throw Error(ErrorKind::invalid_element,
                "element code out of range [0, " + std::to_string(g.order()) + ")");
  }
  return g.add(a, b);
}

GroupFunction::GroupFunction(FiniteAbelianGroup group, std::vector<double> values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(group_.order())) {
    throw Error(ErrorKind::invalid_input, "expected " + std::to_string(group_.order()) +
                                              " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "non-finite function value");
  }
}

GroupFunction GroupFunction::constant(const FiniteAbelianGroup& group, double c) {
  return GroupFunction(group, std::vector<double>(static_cast<std::size_t>(group.order()), c));
}

GroupFunction GroupFunction::indicator(const FiniteAbelianGroup& group, std::span<const Element> set) {
  std::vector<double> v(static_cast<std::size_t>(group.order()), 0.0);
  for (Element a : set) {
    if (!group.contains(a)) throw Error(ErrorKind::invalid_element, "indicator element out of range");
    v[static_cast<std::size_t>(a)] = 1.0;
  }
  return GroupFunction(group, std::move(v));
}

GroupFunction GroupFunction::from(const FiniteAbelianGroup& group,
                                  const std::function<double(Element)>& fn) {
  std::vector<double> v(static_cast<std::size_t>(group.order()));
  for (std::size_t a = 0; a < v.size(); ++a) v[a] = fn(static_cast<Element>(a));
  return GroupFunction(group, std::move(v));
}

double GroupFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

template <class Op>
GroupFunction zip(const GroupFunction& a, const GroupFunction& b, Op op) {
  if (!(a.group() == b.group())) throw Error(ErrorKind::invalid_input, "group mismatch");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a.values()[i], b.values()[i]);
  return GroupFunction(a.group(), std::move(v));
}

}  // namespace

GroupFunction GroupFunction::operator+(const GroupFunction& other) const {
  return zip(*this, other, [](double x, double y) { return x + y; });
}

GroupFunction GroupFunction::operator-(const GroupFunction& other) const {
  return zip(*this, other, [](double x, double y) { return x - y; });
}

GroupFunction GroupFunction::operator*(const GroupFunction& other) const {
  return zip(*this, other, [](double x, double y) { return x * y; });
}

GroupFunction GroupFunction::operator*(double c) const {
  return map([c](double x) { return c * x; });
}

GroupFunction GroupFunction::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(values_[i]);
  return GroupFunction(group_, std::move(v));
}

double average(const GroupFunction& f) { return pairwise_mean(f.values()); }

double lp_norm(std::span<const double> values, double p) {
  if (!(p > 1.0)) throw Error(ErrorKind::invalid_parameter, "L_p norm needs p > 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> powered(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) powered[i] = std::pow(std::abs(values[i]), p);
  return std::pow(pairwise_mean(powered), 1.0 / p);
}

double lp_norm(const GroupFunction& f, double p) { return lp_norm(f.values(), p); }

}  // namespace uninorm
