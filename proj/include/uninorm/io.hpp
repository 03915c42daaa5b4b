#pragma once

#include "uninorm/decompose.hpp"
#include "uninorm/group.hpp"
#include "uninorm/interval.hpp"
#include "uninorm/pseudorandom.hpp"
#include "uninorm/tensor.hpp"
#include "uninorm/uniformity.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace uninorm {

using Json = nlohmann::ordered_json;

/// {"group": {"factors": [...]}, "values": [...]}
Json serialize(const GroupFunction& f);
/// {"vertex_count": n, "arity": s, "values": [...]}
Json serialize(const TensorFunction& F);
/// {"n": N, "values": [f(1), ..., f(N)]}
Json serialize(const IntervalFunction& f);
Json serialize(const DualFamily& family);
Json serialize(const NormResult& r);
Json serialize(const WeakNormEstimate& r);
Json serialize(const MajorantCertificate& c);
Json serialize(const Decomposition<GroupFunction>& d);
Json serialize(const Decomposition<TensorFunction>& d);
Json serialize(const CutoffProfile& p);
Json serialize(const TransferResult& r);

/// Throw invalid-input on malformed documents.
GroupFunction parse_group_function(const Json& j);
TensorFunction parse_tensor(const Json& j);
IntervalFunction parse_interval(const Json& j);

/// Whole-file helpers; failures raise io-failure naming the path.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal that reads back to the same double; "nan", "inf" and
/// "-inf" for non-finite values.
std::string format_double(double x);

}  // namespace uninorm
