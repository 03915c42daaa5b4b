#include "uninorm/io.hpp"

#include "uninorm/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace uninorm {

namespace {

Json values_of(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::invalid_input, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("field \"") + key + "\": " + e.what());
  }
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json trace_of(const std::vector<IterationRecord>& trace) {
  Json out = Json::array();
  for (const auto& r : trace) out.push_back({{"step", r.step}, {"correlation", r.correlation}, {"step_size", r.step_size}});
  return out;
}

template <class Function>
Json decomposition_of(const Decomposition<Function>& d) {
  Json j;
  j["model"] = serialize(d.model);
  j["residual_cut"] = d.residual_cut;
  j["residual_cut_exact"] = d.residual_cut_exact;
  j["residual_norm"] = optional_number(d.residual_norm);
  j["converged"] = d.converged;
  j["iterations"] = d.iterations;
  j["max_iterations"] = d.max_iterations;
  j["gap_lower_bound"] = optional_number(d.gap_lower_bound);
  j["residual_cut_bound"] = optional_number(d.residual_cut_bound);
  j["majorant_check"] = d.majorant_check ? Json(*d.majorant_check) : Json(nullptr);
  j["trace"] = trace_of(d.trace);
  return j;
}

}  // namespace

Json serialize(const GroupFunction& f) {
  const auto factors = f.group().factors();
  return {{"group", {{"factors", std::vector<std::int64_t>(factors.begin(), factors.end())}}},
          {"values", values_of(f.values())}};
}

Json serialize(const TensorFunction& F) {
  return {{"vertex_count", F.vertex_count()}, {"arity", F.arity()}, {"values", values_of(F.values())}};
}

Json serialize(const IntervalFunction& f) { return {{"n", f.length()}, {"values", values_of(f.values())}}; }

Json serialize(const DualFamily& family) {
  Json members = Json::array();
  for (const auto& m : family.members()) members.push_back(serialize(m));
  return {{"arity", family.arity()}, {"members", std::move(members)}};
}

Json serialize(const NormResult& r) {
  return {{"value", r.value}, {"method", std::string(to_string(r.method))}, {"cost", r.cost}};
}

Json serialize(const WeakNormEstimate& r) {
  Json j;
  j["value"] = r.lower_bound;
  j["exact"] = r.exact;
  j["evaluations"] = r.evaluations;
  if (!r.group_members.empty()) {
    Json members = Json::array();
    for (const auto& m : r.group_members) members.push_back(serialize(m));
    j["witness"] = {{"members", std::move(members)}};
  } else {
    j["witness"] = serialize(r.witness);
  }
  if (!r.factors.empty()) {
    Json factors = Json::array();
    for (const auto& g : r.factors) factors.push_back(serialize(g));
    j["factors"] = std::move(factors);
  }
  return j;
}

Json serialize(const MajorantCertificate& c) {
  Json j;
  j["s"] = c.s;
  j["mean"] = c.mean;
  for (const auto& [name, value] : c.deviations()) j[name] = optional_number(value);
  Json unavailable = Json::object();
  for (const auto& [name, reason] : c.unavailable) unavailable[name] = reason;
  j["unavailable"] = std::move(unavailable);
  return j;
}

Json serialize(const Decomposition<GroupFunction>& d) { return decomposition_of(d); }
Json serialize(const Decomposition<TensorFunction>& d) { return decomposition_of(d); }

Json serialize(const CutoffProfile& p) {
  return {{"n", p.n},         {"C", p.c},     {"epsilon", p.epsilon}, {"s", p.s},
          {"alpha", p.alpha}, {"n_zero", p.n_zero}, {"n_prime", p.n_prime}, {"l", p.l},
          {"L", p.big_l}};
}

Json serialize(const TransferResult& r) {
  Json j;
  j["profile"] = serialize(r.profile);
  j["h"] = serialize(r.h);
  j["residual_group"] = r.residual_group;
  j["fourier_term"] = r.fourier_term;
  j["truncation_term"] = r.truncation_term;
  j["normalizer"] = r.normalizer;
  j["assembled_bound"] = r.assembled_bound;
  j["measured"] = r.measured;
  j["identity_residual"] = r.identity_residual;
  j["bound_holds"] = r.bound_holds;
  j["decomposition"] = serialize(r.decomposition);
  return j;
}

GroupFunction parse_group_function(const Json& j) {
  if (!j.is_object() || !j.contains("group")) throw Error(ErrorKind::invalid_input, "missing field \"group\"");
  const auto factors = field<std::vector<std::int64_t>>(j.at("group"), "factors");
  return GroupFunction(FiniteAbelianGroup(factors), field<std::vector<double>>(j, "values"));
}

TensorFunction parse_tensor(const Json& j) {
  return TensorFunction(field<std::int64_t>(j, "vertex_count"), field<int>(j, "arity"),
                        field<std::vector<double>>(j, "values"));
}

IntervalFunction parse_interval(const Json& j) {
  auto values = field<std::vector<double>>(j, "values");
  if (j.contains("n") && field<std::int64_t>(j, "n") != static_cast<std::int64_t>(values.size())) {
    throw Error(ErrorKind::invalid_input, "\"n\" does not match the number of values");
  }
  return IntervalFunction(std::move(values));
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_failure, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::invalid_input, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_failure, "cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw Error(ErrorKind::io_failure, "write to " + path.string() + " failed");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace uninorm
