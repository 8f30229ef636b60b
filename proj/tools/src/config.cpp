#include "config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace hypercross::cli {

namespace {

template <class T>
T convert(const toml::node& n, const std::string& field) {
  if constexpr (std::is_same_v<T, bool>) {
    if (const auto v = n.value_exact<bool>()) return *v;
    throw ConfigError(field, "expected a boolean");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (const auto v = n.value_exact<std::string>()) return *v;
    throw ConfigError(field, "expected a string");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (const auto v = n.value_exact<double>()) return *v;
    if (const auto v = n.value_exact<std::int64_t>()) return static_cast<double>(*v);
    throw ConfigError(field, "expected a number");
  } else {
    if (const auto v = n.value_exact<std::int64_t>()) return static_cast<T>(*v);
    throw ConfigError(field, "expected an integer");
  }
}

/// Reads typed values from one TOML table and rejects keys nobody asked for.
class TableReader {
 public:
  TableReader(const toml::table* table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

  std::string field(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  template <class T>
  std::optional<T> get(const std::string& key) {
    const toml::node* n = lookup(key);
    if (n == nullptr) return std::nullopt;
    return convert<T>(*n, field(key));
  }

  template <class T>
  void read(const std::string& key, T& out) {
    if (auto v = get<T>(key)) out = *v;
  }
  template <class T>
  void read(const std::string& key, std::optional<T>& out) {
    if (auto v = get<T>(key)) out = *v;
  }

  /// Arrays, or a scalar taken as a one-element list.
  template <class T>
  void read_list(const std::string& key, std::vector<T>& out) {
    const toml::node* n = lookup(key);
    if (n == nullptr) return;
    out.clear();
    if (const toml::array* arr = n->as_array()) {
      for (const toml::node& item : *arr) out.push_back(convert<T>(item, field(key)));
    } else {
      out.push_back(convert<T>(*n, field(key)));
    }
  }

  void finish() const {
    if (table_ == nullptr) return;
    for (const auto& [k, v] : *table_) {
      const std::string key(k.str());
      if (!used_.contains(key) && !v.is_table()) throw ConfigError(field(key), "unknown key");
    }
  }

 private:
  const toml::node* lookup(const std::string& key) {
    used_.insert(key);
    return table_ == nullptr ? nullptr : table_->get(key);
  }

  const toml::table* table_;
  std::string prefix_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

void check_exponent(double v, const std::string& field) { require(v >= 1.0, field, "must lie in [1, inf]"); }

const std::set<std::string> kNamedOps{"I", "V", "K", "Kstar", "K*"};
const std::set<std::string> kKernels{"dlvp", "dirichlet", "modified_dirichlet", "shifted_dirichlet", "modified_dlvp"};
const std::set<std::string> kAveragers{"char", "delta", "delta_combination"};
const std::set<std::string> kFunctions{"korobov", "step_signal", "f_lower", "phi_j", "random_poly", "monomial", "constant"};

void read_operator(TableReader t, OperatorConfig& op) {
  t.read("name", op.name);
  t.read("kernel", op.kernel);
  t.read("rho", op.rho);
  t.read("support", op.support);
  t.read("sigma", op.sigma);
  t.read_list("a", op.a);
  t.read("averager", op.averager);
  t.read("averager_sigma", op.averager_sigma);
  t.read("averager_scale", op.averager_scale);
  t.read_list("shifts", op.shifts);
  t.read_list("weights", op.weights);
  t.read("mode", op.mode);
  t.read("path", op.path);
  t.finish();
  if (!op.name.empty()) require(kNamedOps.contains(op.name), t.field("name"), "expected one of I, V, K, Kstar");
  require(kKernels.contains(op.kernel), t.field("kernel"), "unknown kernel '" + op.kernel + "'");
  require(kAveragers.contains(op.averager), t.field("averager"), "unknown averager '" + op.averager + "'");
  require(op.mode == "sampling" || op.mode == "convolution", t.field("mode"), "expected sampling or convolution");
  require(op.path == "sampled" || op.path == "aliasing", t.field("path"), "expected sampled or aliasing");
  require(op.sigma >= 1, t.field("sigma"), "must be >= 1");
  require(op.averager_sigma >= 1, t.field("averager_sigma"), "must be >= 1");
  if (op.kernel == "shifted_dirichlet") require(!op.a.empty(), t.field("a"), "needs at least one coefficient");
  if (op.averager == "delta_combination") {
    require(!op.shifts.empty() && op.shifts.size() == op.weights.size(), t.field("weights"),
            "needs as many weights as shifts");
  }
}

void read_function(TableReader t, FunctionConfig& f, int dim) {
  t.read("kind", f.kind);
  t.read("a", f.a);
  t.read("bandwidth", f.bandwidth);
  t.read("n", f.n);
  t.read("xi", f.xi);
  t.read_list("levels", f.levels);
  t.read("terms", f.terms);
  t.read("max_freq", f.max_freq);
  t.read_list("k", f.k);
  t.read("alpha", f.alpha);
  t.finish();
  require(kFunctions.contains(f.kind), t.field("kind"), "unknown test function '" + f.kind + "'");
  require(f.bandwidth >= 0 && f.bandwidth <= (std::int64_t{1} << 22), t.field("bandwidth"), "must lie in [0, 2^22]");
  if (f.kind == "korobov") require(f.a > 0.5, t.field("a"), "must exceed 1/2");
  if (f.kind == "f_lower") require(f.n >= dim, t.field("n"), "must be >= dim");
  if (f.xi) require(*f.xi >= 0, t.field("xi"), "must be >= 0");
  if (f.kind == "phi_j") {
    require(static_cast<int>(f.levels.size()) == dim, t.field("levels"), "needs one level per dimension");
    for (int l : f.levels) require(l >= 0 && l <= 20, t.field("levels"), "levels must lie in [0, 20]");
  }
  if (f.kind == "monomial") require(static_cast<int>(f.k.size()) == dim, t.field("k"), "needs one frequency per dimension");
  if (f.kind == "random_poly") {
    require(f.terms >= 1, t.field("terms"), "must be >= 1");
    require(f.max_freq >= 0 && f.max_freq <= 1 << 20, t.field("max_freq"), "must lie in [0, 2^20]");
  }
}

void read_rates(TableReader t, RatesConfig& r) {
  t.read("n_min", r.n_min);
  t.read("n_max", r.n_max);
  t.read_list("q", r.q);
  t.read("p", r.p);
  t.read("theta", r.theta);
  t.read("r", r.r);
  t.read("drop", r.drop);
  t.read("rate_tolerance", r.rate_tolerance);
  t.read("timing", r.timing);
  t.finish();
  require(r.n_min >= 1 && r.n_min <= r.n_max && r.n_max <= 20, t.field("n_max"), "needs 1 <= n_min <= n_max <= 20");
  require(!r.q.empty(), t.field("q"), "needs at least one exponent");
  for (double q : r.q) check_exponent(q, t.field("q"));
  if (r.p) check_exponent(*r.p, t.field("p"));
  if (r.theta) check_exponent(*r.theta, t.field("theta"));
  if (r.r) require(std::isfinite(*r.r) && *r.r > 0.0, t.field("r"), "must be positive and finite");
  require(r.drop >= 0, t.field("drop"), "must be >= 0");
  require(r.n_max - r.n_min + 1 >= r.drop + 4, t.field("n_min"), "the fit needs at least 4 levels after dropping");
  if (r.rate_tolerance) require(*r.rate_tolerance > 0.0, t.field("rate_tolerance"), "must be positive");
}

void read_conditions(TableReader t, ConditionsConfig& c) {
  t.read("jmax", c.jmax);
  t.read("umax", c.umax);
  t.read("delta", c.delta);
  t.read_list("s", c.s);
  t.read_list("q", c.q);
  t.finish();
  require(c.jmax >= 2 && c.jmax <= 16, t.field("jmax"), "must lie in [2, 16]");
  require(c.umax >= 1 && c.umax <= 40, t.field("umax"), "must lie in [1, 40]");
  require(c.delta > 0.0, t.field("delta"), "must be positive");
  for (double s : c.s) require(s > 0.0, t.field("s"), "entries must be positive");
  for (double q : c.q) check_exponent(q, t.field("q"));
}

void read_lp_check(TableReader t, LpCheckConfig& l) {
  std::string family = to_string(l.spec.family);
  t.read("family", family);
  t.read("p", l.spec.p);
  t.read("theta", l.spec.theta);
  t.read("r", l.spec.r);
  t.read("jmax", l.jmax);
  t.read("corpus_levels", l.corpus_levels);
  t.read("include_function", l.include_function);
  t.read("include_constant", l.include_constant);
  t.read("max_spread", l.max_spread);
  t.finish();
  require(family == "B" || family == "F", t.field("family"), "expected B or F");
  l.spec.family = family == "B" ? NormFamily::B : NormFamily::F;
  check_exponent(l.spec.p, t.field("p"));
  check_exponent(l.spec.theta, t.field("theta"));
  require(std::isfinite(l.spec.r), t.field("r"), "must be finite");
  require(!(l.spec.family == NormFamily::F && std::isinf(l.spec.p)), t.field("p"), "F-norms need p < inf");
  require(l.jmax >= 0 && l.jmax <= 16, t.field("jmax"), "must lie in [0, 16]");
  require(l.corpus_levels >= 0 && l.corpus_levels <= 12, t.field("corpus_levels"), "must lie in [0, 12]");
  if (l.max_spread) require(*l.max_spread >= 1.0, t.field("max_spread"), "must be >= 1");
}

void read_sharpness(TableReader t, SharpnessConfig& s, int dim) {
  t.read("n_min", s.n_min);
  t.read("n_max", s.n_max);
  t.read("xi", s.xi);
  t.read("alpha", s.alpha);
  t.read("tol", s.tol);
  t.finish();
  require(s.n_min >= dim && s.n_min <= s.n_max && s.n_max <= 20, t.field("n_max"), "needs dim <= n_min <= n_max <= 20");
  if (s.xi) require(*s.xi >= 0, t.field("xi"), "must be >= 0");
  require(s.tol > 0.0, t.field("tol"), "must be positive");
  require(std::isfinite(s.alpha), t.field("alpha"), "must be finite");
}

void read_grid_info(TableReader t, GridInfoConfig& g) {
  t.read("n_max", g.n_max);
  t.read("brute_force_max", g.brute_force_max);
  t.finish();
  require(g.n_max >= 0 && g.n_max <= 30, t.field("n_max"), "must lie in [0, 30]");
  require(g.brute_force_max >= 0 && g.brute_force_max <= 8, t.field("brute_force_max"), "must lie in [0, 8]");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError("syntax", os.str());
  }
  ExperimentConfig cfg;
  cfg.source = source;
  TableReader top(&root, "");
  const auto version = top.get<std::int64_t>("schema_version");
  require(version.has_value(), "schema_version", "missing");
  require(*version == kSchemaVersion, "schema_version", "unsupported version " + std::to_string(*version));
  cfg.schema_version = *version;
  std::int64_t seed = 1;
  top.read("seed", seed);
  require(seed >= 0, "seed", "must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  top.read("dim", cfg.dim);
  require(cfg.dim >= 1 && cfg.dim <= 6, "dim", "must lie in [1, 6]");
  std::string phi = "smooth";
  top.read("phi_kind", phi);
  require(phi == "smooth" || phi == "piecewise_linear", "phi_kind", "expected smooth or piecewise_linear");
  cfg.phi_kind = phi == "smooth" ? PhiKind::smooth : PhiKind::piecewise_linear;
  top.finish();

  read_operator(TableReader(root["operator"].as_table(), "operator"), cfg.op);
  read_function(TableReader(root["function"].as_table(), "function"), cfg.function, cfg.dim);
  read_rates(TableReader(root["rates"].as_table(), "rates"), cfg.rates);
  read_conditions(TableReader(root["conditions"].as_table(), "conditions"), cfg.conditions);
  read_lp_check(TableReader(root["lp_check"].as_table(), "lp_check"), cfg.lp_check);
  read_sharpness(TableReader(root["sharpness"].as_table(), "sharpness"), cfg.sharpness, cfg.dim);
  read_grid_info(TableReader(root["grid_info"].as_table(), "grid_info"), cfg.grid_info);
  for (const auto& [k, v] : root) {
    static const std::set<std::string> sections{"operator", "function", "rates", "conditions", "lp_check", "sharpness", "grid_info"};
    if (v.is_table()) require(sections.contains(std::string(k.str())), std::string(k.str()), "unknown section");
  }

  // Operator and function preconditions are checked here, before any command runs.
  try {
    (void)build_operator(cfg);
  } catch (const InvalidArgument& e) {
    throw ConfigError("operator", e.what());
  }
  try {
    (void)build_function(cfg);
  } catch (const InvalidArgument& e) {
    throw ConfigError("function", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

QuasiInterpOp build_operator(const ExperimentConfig& cfg) {
  const OperatorConfig& o = cfg.op;
  if (!o.name.empty()) {
    return named_operator(o.name, NamedOpParams{o.rho, o.support, o.sigma, cfg.dim});
  }
  const auto complex_list = [](const std::vector<double>& v) { return std::vector<Complex>(v.begin(), v.end()); };
  KernelFamily kern = [&] {
    if (o.kernel == "dlvp") return dlvp_kernel(o.rho, o.support);
    if (o.kernel == "dirichlet") return dirichlet_kernel();
    if (o.kernel == "modified_dirichlet") return modified_dirichlet_kernel(o.sigma);
    if (o.kernel == "shifted_dirichlet") return shifted_dirichlet_combo(o.sigma, complex_list(o.a));
    return modified_dlvp_kernel(o.rho, o.support, o.sigma);
  }();
  AveragerFamily avg = [&] {
    if (o.averager == "char") return char_averager(o.averager_sigma, o.averager_scale);
    if (o.averager == "delta") return delta_averager();
    return delta_combination(o.averager_sigma, o.shifts, complex_list(o.weights));
  }();
  std::optional<QuadratureRule> rule;
  if (avg.kind() == AveragerKind::function) rule = QuadratureRule{};
  const OpMode mode = o.mode == "sampling" ? OpMode::sampling : OpMode::convolution;
  const std::string label = kern.name() + "/" + avg.name();
  return QuasiInterpOp(std::move(kern), std::move(avg), cfg.dim, mode, rule, label);
}

EvalPath eval_path(const ExperimentConfig& cfg) {
  if (!cfg.op.name.empty() && cfg.op.name == "V") return EvalPath::aliasing;
  if (cfg.op.mode == "convolution") return EvalPath::aliasing;
  return cfg.op.path == "aliasing" ? EvalPath::aliasing : EvalPath::sampled;
}

TestFunction build_function(const ExperimentConfig& cfg) {
  const FunctionConfig& f = cfg.function;
  const int d = cfg.dim;
  TestFunction out = [&]() -> TestFunction {
    if (f.kind == "korobov") return korobov(f.a, d, f.bandwidth);
    if (f.kind == "step_signal") return step_signal(d, f.bandwidth);
    if (f.kind == "f_lower") return f_lower(f.n, f.xi.value_or(1), d);
    if (f.kind == "phi_j") return phi_j(LevelVec(f.levels), ResolutionOfUnity(cfg.phi_kind));
    if (f.kind == "monomial") return {TrigPoly::monomial(f.k), "monomial", std::nullopt};
    if (f.kind == "constant") return {TrigPoly::constant(d, 1.0), "constant", std::nullopt};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> freq(-f.max_freq, f.max_freq);
    std::normal_distribution<double> coef;
    std::vector<std::pair<FreqIndex, Complex>> terms;
    for (int t = 0; t < f.terms; ++t) {
      FreqIndex k(static_cast<std::size_t>(d));
      for (auto& v : k) v = freq(rng);
      const double re = coef(rng);
      const double im = coef(rng);
      terms.emplace_back(std::move(k), Complex(re, im));
    }
    return {TrigPoly::from_terms(d, std::move(terms)), "random_poly(seed=" + std::to_string(cfg.seed) + ")", std::nullopt};
  }();
  if (f.alpha != 1.0) {
    std::visit(
        [&](auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, TrigPoly>) {
            m *= Complex(f.alpha);
          } else if constexpr (std::is_same_v<M, SeparableModel>) {
            m.scale *= f.alpha;
          }
        },
        out.model);
    out.label = format_real(f.alpha) + "*" + out.label;
  }
  return out;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace hypercross::cli
