#include "iclt/cli/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace iclt::cli {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

const std::map<std::string, Command, std::less<>> kCommands = {
    {"verify", Command::Verify},   {"clt", Command::Clt},
    {"tails", Command::Tails},     {"blocks", Command::Blocks},
    {"clark", Command::Clark},     {"correlations", Command::Correlations},
    {"optimality", Command::Optimality},
};

// Line of every value in an already well-formed JSON text, keyed by JSON pointer.
std::map<std::string, int> index_lines(std::string_view text) {
  struct Frame {
    bool object;
    std::string key;
    int index = 0;
    bool expect_key = true;
  };
  std::map<std::string, int> out;
  std::vector<Frame> stack;
  int line = 1;
  auto pointer = [&] {
    std::string p;
    for (const Frame& f : stack) p += "/" + (f.object ? f.key : std::to_string(f.index));
    return p;
  };
  auto record = [&] { out.emplace(pointer(), line); };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (c == '"') {
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\') ++i;
        if (i < text.size()) s += text[i];
      }
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().key = s;
        stack.back().expect_key = false;
      } else {
        record();
      }
    } else if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object)
          stack.back().expect_key = true;
        else
          ++stack.back().index;
      }
    } else if (c == '{' || c == '[') {
      record();
      stack.push_back({c == '{', {}, 0, true});
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
    } else if (c == '-' || c == 't' || c == 'f' || c == 'n' || (c >= '0' && c <= '9')) {
      record();
      while (i + 1 < text.size() && std::string_view(",}] \t\r\n").find(text[i + 1]) == std::string_view::npos) ++i;
    }
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const std::map<std::string, int>& lines) : lines_(lines) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    std::string p = ptr;
    auto it = lines_.find(p);
    while (it == lines_.end() && !p.empty()) {
      p.erase(p.rfind('/'));
      it = lines_.find(p);
    }
    const int line = it == lines_.end() ? 1 : it->second;
    throw ConfigError("config line " + std::to_string(line) + ": " + (ptr.empty() ? "/" : ptr) + ": " + msg);
  }

  void keys(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
      if (!ok.count(k)) fail(ptr + "/" + k, "unknown key '" + k + "'");
  }

  double number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ptr, "expected a finite number");
    return v;
  }

  std::int64_t integer(const json& j, const std::string& ptr, std::int64_t lo, std::int64_t hi) const {
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(hi))
      fail(ptr, "must be <= " + std::to_string(hi));
    const std::int64_t v = j.get<std::int64_t>();
    if (v < lo || v > hi) fail(ptr, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  std::uint64_t unsigned64(const json& j, const std::string& ptr) const {
    if (!j.is_number_unsigned()) fail(ptr, "expected a non-negative integer");
    return j.get<std::uint64_t>();
  }

  bool boolean(const json& j, const std::string& ptr) const {
    if (!j.is_boolean()) fail(ptr, "expected true or false");
    return j.get<bool>();
  }

  std::string string(const json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  // A real number or a [re, im] pair.
  cplx complex(const json& j, const std::string& ptr) const {
    if (j.is_number()) return number(j, ptr);
    if (!j.is_array() || j.size() != 2) fail(ptr, "expected a number or [re, im]");
    return {number(j[0], ptr + "/0"), number(j[1], ptr + "/1")};
  }

  const json& array(const json& j, const std::string& ptr, bool nonempty) const {
    if (!j.is_array()) fail(ptr, "expected an array");
    if (nonempty && j.empty()) fail(ptr, "must not be empty");
    return j;
  }

 private:
  const std::map<std::string, int>& lines_;
};

std::string fmt_real(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

TestProduct parse_inner(const Reader& r, const json& j, const std::string& ptr) {
  r.keys(j, ptr, {"phase_angle", "zeros", "label"});
  const double angle = j.contains("phase_angle") ? r.number(j["phase_angle"], ptr + "/phase_angle") : 0.0;
  if (!j.contains("zeros")) r.fail(ptr, "missing 'zeros'");
  const json& zs = r.array(j["zeros"], ptr + "/zeros", true);
  std::vector<cplx> zeros;
  std::string label = "zeros[";
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const std::string zp = ptr + "/zeros/" + std::to_string(k);
    const cplx z = r.complex(zs[k], zp);
    if (!(std::abs(z) < 1.0)) r.fail(zp, "zero outside open disk (|a| = " + fmt_real(std::abs(z)) + ")");
    zeros.push_back(z);
    label += (k ? "," : "") + fmt_real(z.real()) + (z.imag() != 0 ? (z.imag() > 0 ? "+" : "") + fmt_real(z.imag()) + "i" : "");
  }
  label += "]";
  if (angle != 0) label += " phase " + fmt_real(angle);
  if (j.contains("label")) label = r.string(j["label"], ptr + "/label");
  try {
    return {label, BlaschkeProduct::from_angle(angle, std::move(zeros))};
  } catch (const DomainError& e) {
    r.fail(ptr + "/zeros", e.what());
  }
}

CoefficientSequence parse_sequence(const Reader& r, const json& j, const std::string& ptr, std::uint64_t seed) {
  r.keys(j, ptr, {"kind", "params"});
  if (!j.contains("kind")) r.fail(ptr, "missing 'kind'");
  const std::string kind = r.string(j["kind"], ptr + "/kind");
  const json params = j.contains("params") ? j["params"] : json::object();
  const std::string pp = ptr + "/params";
  auto need = [&](const char* key) -> const json& {
    if (!params.contains(key)) r.fail(pp, std::string("missing '") + key + "' for kind " + kind);
    return params[key];
  };
  try {
    if (kind == "constant") {
      r.keys(params, pp, {"c"});
      return CoefficientSequence::constant(params.contains("c") ? r.complex(params["c"], pp + "/c") : cplx{1.0});
    }
    if (kind == "power") {
      r.keys(params, pp, {"p"});
      return CoefficientSequence::power(r.number(need("p"), pp + "/p"));
    }
    if (kind == "geometric") {
      r.keys(params, pp, {"r"});
      return CoefficientSequence::geometric(r.number(need("r"), pp + "/r"));
    }
    if (kind == "explicit") {
      r.keys(params, pp, {"values"});
      const json& vs = r.array(need("values"), pp + "/values", true);
      std::vector<cplx> values;
      for (std::size_t k = 0; k < vs.size(); ++k) values.push_back(r.complex(vs[k], pp + "/values/" + std::to_string(k)));
      return CoefficientSequence::explicit_values(std::move(values));
    }
    if (kind == "random_phase") {
      r.keys(params, pp, {"moduli", "seed"});
      const json& ms = r.array(need("moduli"), pp + "/moduli", true);
      std::vector<double> moduli;
      for (std::size_t k = 0; k < ms.size(); ++k) moduli.push_back(r.number(ms[k], pp + "/moduli/" + std::to_string(k)));
      const std::uint64_t s = params.contains("seed") ? r.unsigned64(params["seed"], pp + "/seed") : seed;
      return CoefficientSequence::random_phase(std::move(moduli), s);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    r.fail(pp, e.what());
  }
  r.fail(ptr + "/kind", "unknown sequence kind '" + kind + "'");
}

void parse_thresholds(const Reader& r, const json& j, const std::string& ptr, GaussianThresholds& t) {
  r.keys(j, ptr, {"cf_gap", "cf_radius", "ks_p"});
  if (j.contains("cf_gap")) t.cf_gap = r.number(j["cf_gap"], ptr + "/cf_gap");
  if (j.contains("cf_radius")) t.cf_radius = r.number(j["cf_radius"], ptr + "/cf_radius");
  if (j.contains("ks_p")) t.ks_p = r.number(j["ks_p"], ptr + "/ks_p");
  if (!(t.cf_gap > 0) || !(t.cf_radius > 0) || !(t.ks_p > 0 && t.ks_p < 1))
    r.fail(ptr, "thresholds need cf_gap > 0, cf_radius > 0, 0 < ks_p < 1");
}

int small_int(const Reader& r, const json& j, const std::string& key, const std::string& ptr, int lo, int hi) {
  return static_cast<int>(r.integer(j[key], ptr + "/" + key, lo, hi));
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  auto it = kCommands.find(name);
  if (it == kCommands.end()) return std::nullopt;
  return it->second;
}

const char* command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name.c_str();
  return "?";
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  c.lines = index_lines(text);
  const Reader r(c.lines);
  r.keys(j, "",
         {"schema_version", "seed", "threads", "format", "inner", "products", "sequence", "N", "mode", "sampling",
          "tail", "thresholds", "verify", "correlations", "clark", "blocks", "quadrature"});
  if (!j.contains("schema_version")) r.fail("", "missing 'schema_version'");
  c.schema_version = static_cast<int>(r.integer(j["schema_version"], "/schema_version", 0, 1 << 20));
  if (c.schema_version != kSchemaVersion)
    r.fail("/schema_version", "unsupported schema version " + std::to_string(c.schema_version) + " (expected " +
                                  std::to_string(kSchemaVersion) + ")");
  if (j.contains("seed")) c.seed = r.unsigned64(j["seed"], "/seed");
  if (j.contains("threads")) c.threads = static_cast<int>(r.integer(j["threads"], "/threads", 1, 1024));
  if (j.contains("format")) {
    const std::string f = r.string(j["format"], "/format");
    if (f != "csv" && f != "json") r.fail("/format", "format must be csv or json");
    c.format = f == "csv" ? Format::Csv : Format::Json;
  }
  if (j.contains("inner")) c.inner = parse_inner(r, j["inner"], "/inner");
  if (j.contains("products")) {
    const json& ps = r.array(j["products"], "/products", true);
    for (std::size_t k = 0; k < ps.size(); ++k) c.products.push_back(parse_inner(r, ps[k], "/products/" + std::to_string(k)));
  }
  if (j.contains("sequence")) c.sequence = parse_sequence(r, j["sequence"], "/sequence", c.seed);
  if (j.contains("N")) {
    const json& ns = r.array(j["N"], "/N", true);
    for (std::size_t k = 0; k < ns.size(); ++k)
      c.N.push_back(r.integer(ns[k], "/N/" + std::to_string(k), 1, std::int64_t{1} << 40));
  }
  if (j.contains("mode")) {
    const std::string m = r.string(j["mode"], "/mode");
    if (m != "partial" && m != "tail") r.fail("/mode", "mode must be partial or tail");
    c.mode = m == "tail" ? SumMode::Tail : SumMode::Partial;
  }
  if (j.contains("sampling")) {
    const json& s = j["sampling"];
    r.keys(s, "/sampling", {"kind", "count", "offset"});
    if (s.contains("kind")) {
      const std::string k = r.string(s["kind"], "/sampling/kind");
      if (k != "grid" && k != "mc") r.fail("/sampling/kind", "sampling kind must be grid or mc");
      c.sampling.kind = k == "grid" ? SamplingSpec::Kind::Grid : SamplingSpec::Kind::MonteCarlo;
    }
    if (s.contains("count"))
      c.sampling.count = static_cast<std::size_t>(r.integer(s["count"], "/sampling/count", 1, std::int64_t{1} << 32));
    if (s.contains("offset")) c.sampling.offset = r.number(s["offset"], "/sampling/offset");
  }
  if (j.contains("tail")) {
    const json& t = j["tail"];
    r.keys(t, "/tail", {"cutoff", "rel_tol"});
    if (t.contains("cutoff")) c.tail_cutoff = r.integer(t["cutoff"], "/tail/cutoff", 0, std::int64_t{1} << 40);
    if (t.contains("rel_tol")) {
      c.tail_rel_tol = r.number(t["rel_tol"], "/tail/rel_tol");
      if (!(c.tail_rel_tol > 0 && c.tail_rel_tol < 1)) r.fail("/tail/rel_tol", "rel_tol must be in (0, 1)");
    }
  }
  if (j.contains("thresholds")) parse_thresholds(r, j["thresholds"], "/thresholds", c.thresholds);
  if (j.contains("verify")) {
    const json& v = j["verify"];
    const std::string p = "/verify";
    r.keys(v, p, {"n_max", "max_pairs", "sequences", "alpha_count", "l_max", "m_max"});
    if (v.contains("n_max")) c.verify.n_max = small_int(r, v, "n_max", p, 4, 16);
    if (v.contains("max_pairs")) c.verify.max_pairs = small_int(r, v, "max_pairs", p, 1, 16);
    if (v.contains("sequences")) c.verify.sequences = small_int(r, v, "sequences", p, 0, 64);
    if (v.contains("alpha_count")) c.verify.alpha_count = small_int(r, v, "alpha_count", p, 1, 4096);
    if (v.contains("l_max")) c.verify.l_max = small_int(r, v, "l_max", p, 1, 16);
    if (v.contains("m_max")) c.verify.m_max = small_int(r, v, "m_max", p, 0, 32);
    if (c.verify.alpha_count < 2 * c.verify.m_max + 1) r.fail(p, "alpha_count must be >= 2*m_max+1");
  }
  if (j.contains("correlations")) {
    const json& v = j["correlations"];
    const std::string p = "/correlations";
    r.keys(v, p, {"n_max", "max_pairs", "sequences", "decay", "q_values"});
    if (v.contains("n_max")) c.correlations.n_max = small_int(r, v, "n_max", p, 4, 16);
    if (v.contains("max_pairs")) c.correlations.max_pairs = small_int(r, v, "max_pairs", p, 1, 16);
    if (v.contains("sequences")) c.correlations.sequences = small_int(r, v, "sequences", p, 0, 64);
    if (v.contains("decay")) c.correlations.decay = r.boolean(v["decay"], p + "/decay");
    if (v.contains("q_values")) {
      const json& qs = r.array(v["q_values"], p + "/q_values", true);
      c.correlations.q_values.clear();
      for (std::size_t k = 0; k < qs.size(); ++k)
        c.correlations.q_values.push_back(static_cast<int>(r.integer(qs[k], p + "/q_values/" + std::to_string(k), 1, 64)));
      if (qs.size() < 2) r.fail(p + "/q_values", "a slope fit needs at least 2 q values");
    }
  }
  if (j.contains("clark")) {
    const json& v = j["clark"];
    r.keys(v, "/clark", {"alphas", "alpha_count"});
    if (v.contains("alpha_count")) c.clark.alpha_count = small_int(r, v, "alpha_count", "/clark", 1, 1 << 16);
    if (v.contains("alphas")) {
      const json& as = r.array(v["alphas"], "/clark/alphas", true);
      for (std::size_t k = 0; k < as.size(); ++k) {
        const std::string ap = "/clark/alphas/" + std::to_string(k);
        const cplx a = r.complex(as[k], ap);
        if (std::abs(std::abs(a) - 1.0) > 1e-12) r.fail(ap, "alpha must lie on the unit circle");
        c.clark.alphas.push_back(a / std::abs(a));
      }
    }
  }
  if (j.contains("blocks")) {
    const json& v = j["blocks"];
    r.keys(v, "/blocks", {"phi", "variance_ratio"});
    if (v.contains("phi")) {
      c.blocks.phi = r.number(v["phi"], "/blocks/phi");
      if (!(*c.blocks.phi > 0 && *c.blocks.phi < 1)) r.fail("/blocks/phi", "phi must be in (0, 1)");
    }
    if (v.contains("variance_ratio")) c.blocks.variance_ratio = r.boolean(v["variance_ratio"], "/blocks/variance_ratio");
  }
  if (j.contains("quadrature")) {
    const json& v = j["quadrature"];
    r.keys(v, "/quadrature", {"max_points"});
    if (v.contains("max_points"))
      c.quadrature_max_points =
          static_cast<std::size_t>(r.integer(v["max_points"], "/quadrature/max_points", 64, std::int64_t{1} << 24));
  }
  c.canonical = j.dump();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.grid && o.mc_samples) throw ConfigError("--grid and --mc-samples are mutually exclusive");
  if (o.seed) c.seed = *o.seed;
  if (o.threads) {
    if (*o.threads < 1) throw ConfigError("--threads must be >= 1");
    c.threads = *o.threads;
  }
  if (o.format) c.format = *o.format;
  if (o.grid) {
    if (*o.grid < 1) throw ConfigError("--grid must be >= 1");
    c.sampling.kind = SamplingSpec::Kind::Grid;
    c.sampling.count = *o.grid;
    c.quadrature_max_points = *o.grid;
  }
  if (o.mc_samples) {
    if (*o.mc_samples < 1) throw ConfigError("--mc-samples must be >= 1");
    c.sampling.kind = SamplingSpec::Kind::MonteCarlo;
    c.sampling.count = *o.mc_samples;
  }
}

RunConfig resolved(const RunConfig& config, Command cmd) {
  RunConfig c = config;
  if (cmd == Command::Tails) c.mode = SumMode::Tail;
  if (!c.sequence) {
    if (cmd == Command::Optimality)
      c.sequence = CoefficientSequence::geometric(2.0);
    else
      c.sequence = c.mode == SumMode::Tail ? CoefficientSequence::power(-1.0) : CoefficientSequence::constant(1.0);
  }
  if (c.N.empty()) {
    switch (cmd) {
      case Command::Clt: c.N = {c.mode == SumMode::Tail ? 50 : 400}; break;
      case Command::Tails: c.N = {50}; break;
      case Command::Blocks: c.N = {10000}; break;
      case Command::Optimality: c.N = {20, 30}; break;
      default: break;
    }
  }
  return c;
}

void validate_for(const RunConfig& config, Command cmd) {
  const RunConfig c = resolved(config, cmd);
  const Reader r(c.lines);
  const bool sampled = cmd == Command::Clt || cmd == Command::Tails || cmd == Command::Optimality;
  if (sampled || cmd == Command::Blocks) {
    if (c.inner.f.is_rotation()) r.fail("/inner", "f is a rotation; the limit theorem needs a non-rotation");
  }
  if (c.mode == SumMode::Tail && sampled && !c.sequence->summable())
    r.fail("/sequence", "divergent sequence for tail mode");
  if (cmd == Command::Optimality && c.sequence->kind() != CoefficientSequence::Kind::Geometric)
    r.fail("/sequence", "optimality demo uses a geometric sequence");
  if (sampled && c.sampling.count < 1000) r.fail("/sampling/count", "Gaussian tests need at least 1000 samples");
  if (cmd == Command::Tails && c.tail_cutoff != 0)
    for (std::int64_t N : c.N)
      if (c.tail_cutoff < N) r.fail("/tail/cutoff", "cutoff must be >= every N");
  if (cmd == Command::Correlations && c.inner.f.is_rotation())
    r.fail("/inner", "correlation identities need a non-rotation");
}

std::string config_digest(const RunConfig& config) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(config.canonical.data(), config.canonical.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalFailure("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace iclt::cli
