#include "bitret/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace bitret {

using nlohmann::json;

InstanceFormatError::InstanceFormatError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

// Line of the first occurrence of "key" in the text, 0 if absent.
int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw InstanceFormatError(line_of_key(text_, key), message);
  }

  const json& require(const json& obj, const std::string& key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(key, "missing field '" + key + "'");
    return *it;
  }

  std::int64_t integer(const json& v, const std::string& key) const {
    if (!v.is_number_integer()) fail(key, "field '" + key + "' must be an integer");
    return v.get<std::int64_t>();
  }

  double real(const json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "field '" + key + "' must be a number");
    return v.get<double>();
  }

  std::string string(const json& v, const std::string& key) const {
    if (!v.is_string()) fail(key, "field '" + key + "' must be a string");
    return v.get<std::string>();
  }

  const json& array(const json& v, const std::string& key, std::size_t expected) const {
    if (!v.is_array()) fail(key, "field '" + key + "' must be an array");
    if (v.size() != expected)
      fail(key, "field '" + key + "' has length " + std::to_string(v.size()) + ", expected " + std::to_string(expected));
    return v;
  }

 private:
  const std::string& text_;
};

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string instance_to_json(const Instance& instance) {
  json j;
  j["version"] = kInstanceFileVersion;
  j["n"] = instance.n;
  j["kind"] = to_string(instance.kind);
  if (instance.kind == InstanceKind::FixedPrecision) {
    j["sq_magnitudes"] = std::vector<double>(instance.sq_magnitudes.begin(), instance.sq_magnitudes.end());
    j["eta"] = instance.eta;
  } else {
    j["autocorrelation"] = std::vector<std::int64_t>(instance.autocorrelation.begin(), instance.autocorrelation.end());
  }
  if (instance.planted) {
    const auto& v = instance.planted->values();
    j["solution"] = std::vector<int>(v.begin(), v.end());
  }
  const auto& m = instance.meta;
  j["meta"] = {{"generator", m.generator}, {"seed", m.seed},        {"hardness", optional_number(m.hardness)},
               {"delta", optional_number(m.delta)}, {"mu", optional_number(m.mu)}, {"rng_id", m.rng_id},
               {"raw", m.raw}};
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceFormatError(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
  if (!j.is_object()) throw InstanceFormatError(1, "top level must be an object");
  Reader r(text);
  const auto version = r.integer(r.require(j, "version"), "version");
  if (version != kInstanceFileVersion) r.fail("version", "unsupported version " + std::to_string(version));
  const auto n64 = r.integer(r.require(j, "n"), "n");
  if (n64 < 1 || n64 > (1 << 24)) r.fail("n", "field 'n' out of range");
  const int n = static_cast<int>(n64);

  InstanceKind kind;
  try {
    kind = parse_instance_kind(r.string(r.require(j, "kind"), "kind"));
  } catch (const std::invalid_argument& e) {
    r.fail("kind", e.what());
  }

  InstanceMeta meta;
  if (const auto it = j.find("meta"); it != j.end()) {
    if (!it->is_object()) r.fail("meta", "field 'meta' must be an object");
    const json& mj = *it;
    if (auto f = mj.find("generator"); f != mj.end()) meta.generator = r.string(*f, "generator");
    if (auto f = mj.find("seed"); f != mj.end()) {
      if (!f->is_number_unsigned() && !(f->is_number_integer() && f->get<std::int64_t>() >= 0))
        r.fail("seed", "field 'seed' must be a non-negative integer");
      meta.seed = f->get<std::uint64_t>();
    }
    for (const char* key : {"hardness", "delta", "mu"}) {
      auto f = mj.find(key);
      if (f == mj.end() || f->is_null()) continue;
      const double v = r.real(*f, key);
      if (std::string(key) == "hardness") meta.hardness = v;
      else if (std::string(key) == "delta") meta.delta = v;
      else meta.mu = v;
    }
    if (auto f = mj.find("rng_id"); f != mj.end()) meta.rng_id = r.string(*f, "rng_id");
    if (auto f = mj.find("raw"); f != mj.end()) {
      if (!f->is_boolean()) r.fail("raw", "field 'raw' must be a boolean");
      meta.raw = f->get<bool>();
    }
  }

  Instance inst;
  inst.kind = kind;
  inst.n = n;
  inst.meta = meta;
  std::string context;
  if (kind == InstanceKind::FixedPrecision) {
    const auto it = j.find("eta");
    if (it == j.end()) r.fail("kind", "kind=fixed_precision requires field 'eta'");
    inst.eta = r.real(*it, "eta");
    const json& arr = r.array(r.require(j, "sq_magnitudes"), "sq_magnitudes", static_cast<std::size_t>(n / 2 + 1));
    inst.sq_magnitudes.resize(n / 2 + 1);
    for (int q = 0; q <= n / 2; ++q) inst.sq_magnitudes[q] = r.real(arr[q], "sq_magnitudes");
    context = "sq_magnitudes";
  } else {
    const json& arr = r.array(r.require(j, "autocorrelation"), "autocorrelation", static_cast<std::size_t>(n));
    inst.autocorrelation.resize(n);
    for (int k = 0; k < n; ++k) inst.autocorrelation[k] = r.integer(arr[k], "autocorrelation");
    context = "autocorrelation";
  }
  if (const auto it = j.find("solution"); it != j.end() && !it->is_null()) {
    const json& arr = r.array(*it, "solution", static_cast<std::size_t>(n));
    Eigen::VectorXi v(n);
    for (int k = 0; k < n; ++k) {
      const auto x = r.integer(arr[k], "solution");
      if (x != 1 && x != -1) r.fail("solution", "field 'solution' must hold +1/-1 entries");
      v[k] = static_cast<int>(x);
    }
    inst.planted = SignSequence(std::move(v));
  }
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(context, e.what());
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceFormatError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

void save_instance(const Instance& instance, const std::string& path) {
  instance.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << instance_to_json(instance);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv_row(const BenchRecord& r) {
  std::string row = std::to_string(r.n) + ',' + r.instance_id + ',' + r.algo + ',' + std::to_string(r.seed) + ',';
  row += (r.beta ? format_double(*r.beta) : std::string()) + ',';
  row += (r.p_bits ? std::to_string(*r.p_bits) : std::string()) + ',';
  row += std::to_string(r.iterations_or_nodes) + ',' + (r.solved ? "true" : "false") + ',';
  row += r.wall_ms ? format_double(*r.wall_ms) : std::string();
  return row;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kBenchHeader << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

}  // namespace bitret
