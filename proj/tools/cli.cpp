#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "levy/error.hpp"
#include "levy/laplace.hpp"
#include "levy/specfun.hpp"
#include "levy/subord.hpp"
#include "levy/transform.hpp"

namespace levy::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(std::string_view s, const std::string& expr) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("grid '" + expr + "': '" + std::string(s) + "' is not a finite number");
  return v;
}

StableIndex parse_index(const std::string& s) {
  try {
    return StableIndex::parse(s);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) +
                      " (an index is l/k with 0 < l < k and gcd(l, k) = 1)");
  }
}

fs::path cache_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("LEVY_CACHE_DIR"); env && *env) return env;
  return "levy-cache";
}

std::vector<fs::path> cache_files(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string chain_str(const std::vector<StableIndex>& chain) {
  std::string s;
  for (std::size_t i = 0; i < chain.size(); ++i) s += (i ? " " : "") + chain[i].str();
  return s;
}

// Closed form if there is one, otherwise the first cache entry with this index.
DensityHandle resolve(const StableIndex& a, const fs::path& dir, std::ostream& err) {
  if (has_closed_form(a)) return DensityHandle::closed(a);
  for (const auto& f : cache_files(dir)) {
    try {
      auto d = cache_load(f);
      if (d.index() == a) return d;
    } catch (const CacheError& e) {
      err << "warning: skipping " << f.string() << ": " << e.what() << "\n";
    }
  }
  throw UnsupportedIndex("no closed form for alpha = " + a.str() + " and no cached table in " +
                         dir.string() + "; build one with `levy cache build`");
}

class Output {
 public:
  Output(std::ostream& out, std::string path) : out_(out), path_(std::move(path)) {}
  std::ostream& stream() { return buf_; }
  void flush() {
    if (path_.empty()) {
      out_ << buf_.str();
      return;
    }
    std::ofstream f(path_, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write output file " + path_);
    f << buf_.str();
  }

 private:
  std::ostream& out_;
  std::string path_;
  std::ostringstream buf_;
};

void write_csv(std::ostream& os, const std::vector<std::string>& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  os << "# levy " << kVersion << "\n";
  for (const auto& m : meta) os << "# " << m << "\n";
  os << "# columns: ";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << num(r[i]);
    os << "\n";
  }
}

json json_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(std::isfinite(x) ? json(x) : json());
  return a;
}

void check_format(const std::string& f) {
  if (f != "csv" && f != "json") throw ConfigError("format must be csv or json, got '" + f + "'");
}

struct Common {
  std::string format = "csv";
  std::string output;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "csv or json");
  sub->add_option("-o,--output", c.output, "write to a file instead of stdout");
}

// ---- eval ------------------------------------------------------------------

struct EvalOpts {
  std::string alpha, x;
  Common common;
};

int do_eval(const EvalOpts& o, const fs::path& dir, std::ostream& out, std::ostream& err) {
  check_format(o.common.format);
  const StableIndex a = parse_index(o.alpha);
  const auto xs = parse_grid(o.x);
  const DensityHandle d = resolve(a, dir, err);
  std::vector<double> gs;
  for (double x : xs) gs.push_back(d(x));
  Output sink(out, o.common.output);
  const std::string src = d.is_closed() ? "closed" : "cached chain " + chain_str(d.chain());
  if (o.common.format == "json") {
    sink.stream() << json{{"alpha", a.str()}, {"source", src}, {"x", json_array(xs)},
                          {"g", json_array(gs)}}
                         .dump(2)
                  << "\n";
  } else {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < xs.size(); ++i) rows.push_back({xs[i], gs[i]});
    write_csv(sink.stream(), {"command=eval", "alpha=" + a.str(), "source=" + src}, {"x", "g"},
              rows);
  }
  sink.flush();
  return 0;
}

// ---- compose ---------------------------------------------------------------

struct ComposeOpts {
  std::string alpha, beta, x = "0.05:20:40log", orientation = "auto", check;
  double tol = 1e-7;
  bool tabulate = false;
  Common common;
};

int do_compose(const ComposeOpts& o, const fs::path& dir, std::ostream& out, std::ostream& err) {
  check_format(o.common.format);
  const StableIndex a = parse_index(o.alpha), b = parse_index(o.beta);
  if (o.orientation != "auto" && o.orientation != "as-written")
    throw ConfigError("orientation must be auto or as-written");
  if (!(o.tol > 0.0)) throw ConfigError("tolerance must be positive");
  const auto xs = parse_grid(o.x);
  const DensityHandle beta_d = resolve(b, dir, err);
  const DensityHandle c = compose(
      a, beta_d,
      {o.orientation == "auto" ? Orientation::Auto : Orientation::AsWritten, o.tabulate});
  std::optional<DensityHandle> ref;
  if (!o.check.empty()) {
    const StableIndex r = parse_index(o.check);
    if (r != c.index())
      throw ConfigError("--check-against " + r.str() + " differs from alpha * beta = " +
                        c.index().str());
    ref = resolve(r, dir, err);
  }
  std::vector<double> gs, refs, rels;
  double worst = 0.0;
  for (double x : xs) {
    gs.push_back(c(x));
    if (ref) {
      refs.push_back((*ref)(x));
      rels.push_back(std::abs(gs.back() / refs.back() - 1.0));
      worst = std::max(worst, rels.back());
    }
  }
  const bool passed = !ref || worst <= o.tol;
  Output sink(out, o.common.output);
  std::vector<std::string> meta = {"command=compose", "alpha=" + a.str(), "beta=" + b.str(),
                                   "result=" + c.index().str(), "orientation=" + o.orientation};
  if (o.common.format == "json") {
    json j{{"alpha", a.str()}, {"beta", b.str()}, {"result", c.index().str()},
           {"x", json_array(xs)}, {"g", json_array(gs)}};
    if (ref) {
      j["reference"] = json_array(refs);
      j["rel_err"] = json_array(rels);
      j["max_rel_err"] = worst;
      j["tol"] = o.tol;
      j["passed"] = passed;
    }
    sink.stream() << j.dump(2) << "\n";
  } else {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < xs.size(); ++i)
      rows.push_back(ref ? std::vector<double>{xs[i], gs[i], refs[i], rels[i]}
                         : std::vector<double>{xs[i], gs[i]});
    if (ref) {
      meta.push_back("check_against=" + ref->index().str() + " tol=" + num(o.tol) +
                     " max_rel_err=" + num(worst));
    }
    write_csv(sink.stream(), meta,
              ref ? std::vector<std::string>{"x", "g", "reference", "rel_err"}
                  : std::vector<std::string>{"x", "g"},
              rows);
  }
  sink.flush();
  if (!passed) {
    err << "check failed: max relative error " << num(worst) << " exceeds " << num(o.tol) << "\n";
    return 2;
  }
  return 0;
}

// ---- laplace ---------------------------------------------------------------

struct LaplaceOpts {
  std::string alpha, p = "0.1,0.5,1,2,5,10";
  double t = 1.0;
  std::optional<double> tol;
  Common common;
};

int do_laplace(const LaplaceOpts& o, const fs::path& dir, std::ostream& out, std::ostream& err) {
  check_format(o.common.format);
  const StableIndex a = parse_index(o.alpha);
  const auto ps = parse_grid(o.p);
  if (!(o.t > 0.0)) throw ConfigError("--t must be positive");
  if (o.tol && !(*o.tol > 0.0)) throw ConfigError("tolerance must be positive");
  const DensityHandle d = resolve(a, dir, err);
  const double stretch = std::pow(o.t, a.inverse());
  std::vector<double> vals, refs, errs;
  double worst = 0.0;
  for (double p : ps) {
    QuadPlan plan = plan_for_density(d, p);
    if (o.t != 1.0) {
      plan.split_scale *= stretch;
      if (plan.origin_hint) plan.origin_hint->c *= std::pow(stretch, plan.origin_hint->rho);
    }
    vals.push_back(laplace_numeric(
        [&](double x) { return o.t == 1.0 ? d(x) : kernel_kappa(d, o.t, x); }, p, plan));
    refs.push_back(std::exp(-o.t * std::pow(p, a.value())));
    errs.push_back(std::abs(vals.back() - refs.back()));
    worst = std::max(worst, errs.back());
  }
  const bool passed = !o.tol || worst <= *o.tol;
  Output sink(out, o.common.output);
  if (o.common.format == "json") {
    json j{{"alpha", a.str()},           {"t", o.t},
           {"p", json_array(ps)},        {"laplace", json_array(vals)},
           {"reference", json_array(refs)}, {"abs_err", json_array(errs)}};
    if (o.tol) {
      j["tol"] = *o.tol;
      j["passed"] = passed;
    }
    sink.stream() << j.dump(2) << "\n";
  } else {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < ps.size(); ++i) rows.push_back({ps[i], vals[i], refs[i], errs[i]});
    std::vector<std::string> meta = {"command=laplace", "alpha=" + a.str(), "t=" + num(o.t)};
    if (o.tol) meta.push_back("tol=" + num(*o.tol));
    write_csv(sink.stream(), meta, {"p", "laplace", "reference", "abs_err"}, rows);
  }
  sink.flush();
  if (!passed) {
    err << "check failed: max abs error " << num(worst) << " exceeds " << num(*o.tol) << "\n";
    return 2;
  }
  return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyOpts {
  std::string suite, alpha, beta, p, x, tau, pair = "k0";
  std::optional<double> tol;
  bool no_controls = false;
  std::string output;
};

struct Battery {
  std::vector<VerifyReport> reports;
  std::vector<VerifyReport> controls;
};

const std::vector<StableIndex> kClosed = {StableIndex(1, 2), StableIndex(1, 3), StableIndex(2, 3),
                                          StableIndex(1, 4), StableIndex(1, 6)};

std::vector<double> log_grid(double lo, double hi, int n) {
  return parse_grid(num(lo) + ":" + num(hi) + ":" + std::to_string(n) + "log");
}

void suite_char(Battery& b, const VerifyOpts& o, const fs::path& dir, std::ostream& err,
                bool all) {
  const auto ps = o.p.empty() || all ? std::vector<double>{0.1, 0.5, 1, 2, 5, 10} : parse_grid(o.p);
  const double tol = all ? 1e-8 : o.tol.value_or(1e-8);
  std::vector<StableIndex> as = kClosed;
  if (!all && !o.alpha.empty()) as = {parse_index(o.alpha)};
  for (const auto& a : as) b.reports.push_back(verify_char(resolve(a, dir, err), ps, tol));
  if (all) {
    for (auto a : {StableIndex(1, 2), StableIndex(1, 3), StableIndex(2, 3)})
      for (double t : {0.5, 2.0})
        b.reports.push_back(verify_char(DensityHandle::closed(a), {1.0, 4.0}, 1e-8, {t, {}}));
  }
  const StableIndex a0 = as.front();
  const StableIndex wrong = a0 == StableIndex(1, 2) ? StableIndex(1, 3) : StableIndex(1, 2);
  b.controls.push_back(verify_char(resolve(a0, dir, err), ps, tol, {1.0, wrong}));
}

// "scaling[alpha=1/2]" -> "scaling[alpha=1/2,pair=k0]"
void label_pair(VerifyReport& r, const std::string& pair) {
  const auto close = r.identity_id.find(']');
  if (close != std::string::npos) r.identity_id.insert(close, ",pair=" + pair);
}

void suite_scaling(Battery& b, const VerifyOpts& o, bool all) {
  auto k0 = [](double t) { return sf::bessel_k(0.0, t); };
  auto arc = [](double w) { return sf::arc_ratio(w); };
  auto ex = [](double t) { return std::exp(-t); };
  auto ex_image = [](double p) { return 1.0 / (1.0 + p); };
  if (all) {
    b.reports.push_back(verify_scaling(StableIndex(1, 2), k0, arc, {0.25, 0.5, 1, 2, 4}, 1e-5));
    b.reports.push_back(verify_scaling(StableIndex(1, 3), k0, arc, {0.2, 0.5, 0.8}, 1e-5));
    b.reports.push_back(verify_scaling(StableIndex(1, 2), ex, ex_image, {1, 2}, 1e-6));
    b.controls.push_back(verify_scaling(StableIndex(1, 2), k0, arc, {0.25, 0.5, 2, 4}, 1e-5,
                                        Reference::Falsified));
    const std::size_t n = b.reports.size();
    label_pair(b.reports[n - 3], "k0");
    label_pair(b.reports[n - 2], "k0");
    label_pair(b.reports[n - 1], "exp");
    label_pair(b.controls.back(), "k0");
    return;
  }
  const StableIndex a = o.alpha.empty() ? StableIndex(1, 2) : parse_index(o.alpha);
  const bool is_k0 = o.pair == "k0";
  if (!is_k0 && o.pair != "exp") throw ConfigError("--pair must be k0 or exp");
  const auto ps = !o.p.empty() ? parse_grid(o.p)
                  : is_k0      ? std::vector<double>{0.25, 0.5, 1, 2, 4}
                               : std::vector<double>{1, 2};
  const double tol = o.tol.value_or(is_k0 ? 1e-5 : 1e-6);
  const Integrand f = is_k0 ? Integrand(k0) : Integrand(ex);
  const Integrand img = is_k0 ? Integrand(arc) : Integrand(ex_image);
  b.reports.push_back(verify_scaling(a, f, img, ps, tol));
  b.controls.push_back(verify_scaling(a, f, img, ps, tol, Reference::Falsified));
  label_pair(b.reports.back(), o.pair);
  label_pair(b.controls.back(), o.pair);
}

void suite_commute(Battery& b, const VerifyOpts& o, bool all) {
  const auto xs = o.x.empty() || all ? log_grid(0.1, 20.0, 20) : parse_grid(o.x);
  const StableIndex h(1, 2), t(1, 3), tt(2, 3);
  if (all) {
    b.reports.push_back(verify_commute(h, t, xs, 1e-6));
    b.reports.push_back(verify_commute(h, tt, xs, 1e-6));
    b.reports.push_back(verify_commute(h, h, xs, 1e-9));
    b.controls.push_back(verify_commute(h, t, xs, 1e-6, Reference::Falsified));
    return;
  }
  const StableIndex a = o.alpha.empty() ? h : parse_index(o.alpha);
  const StableIndex be = o.beta.empty() ? t : parse_index(o.beta);
  const double tol = o.tol.value_or(1e-6);
  b.reports.push_back(verify_commute(a, be, xs, tol));
  if (a != be) b.controls.push_back(verify_commute(a, be, xs, tol, Reference::Falsified));
}

void suite_efros(Battery& b, const VerifyOpts& o, bool all) {
  const auto ps = o.p.empty() || all ? std::vector<double>{0.5, 1, 2} : parse_grid(o.p);
  const StableIndex h(1, 2), t(1, 3), tt(2, 3);
  if (all) {
    for (auto [a, be] : {std::pair{h, h}, {h, t}, {t, tt}})
      b.reports.push_back(verify_efros(a, be, ps, 1e-6));
    b.controls.push_back(verify_efros(h, h, ps, 1e-6, Reference::Falsified));
    return;
  }
  const StableIndex a = o.alpha.empty() ? h : parse_index(o.alpha);
  const StableIndex be = o.beta.empty() ? t : parse_index(o.beta);
  const double tol = o.tol.value_or(1e-6);
  b.reports.push_back(verify_efros(a, be, ps, tol));
  b.controls.push_back(verify_efros(a, be, ps, tol, Reference::Falsified));
}

void suite_subord(Battery& b, const VerifyOpts& o, bool all) {
  std::vector<StableIndex> as = {StableIndex(1, 2), StableIndex(1, 3)};
  if (!all && !o.alpha.empty()) as = {parse_index(o.alpha)};
  const auto taus = o.tau.empty() || all ? std::vector<double>{0.5, 2.0} : parse_grid(o.tau);
  for (const auto& a : as) {
    b.reports.push_back(verify_kernel_norm(a, taus, all ? 1e-8 : o.tol.value_or(1e-8)));
    b.reports.push_back(verify_x_norm(a, {1.0}, 1e-6));
  }
}

int do_verify(const VerifyOpts& o, const fs::path& dir, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> suites = {"char",  "scaling", "commute",
                                                  "efros", "subord",  "all"};
  if (std::find(suites.begin(), suites.end(), o.suite) == suites.end())
    throw ConfigError("unknown suite '" + o.suite +
                      "'; expected char, scaling, commute, efros, subord or all");
  if (o.tol && !(*o.tol > 0.0)) throw ConfigError("tolerance must be positive");
  const bool all = o.suite == "all";
  Battery b;
  if (all || o.suite == "char") suite_char(b, o, dir, err, all);
  if (all || o.suite == "scaling") suite_scaling(b, o, all);
  if (all || o.suite == "commute") suite_commute(b, o, all);
  if (all || o.suite == "efros") suite_efros(b, o, all);
  if (all || o.suite == "subord") suite_subord(b, o, all);
  if (o.no_controls) b.controls.clear();

  json failures = json::array(), reports = json::array(), controls = json::array();
  for (const auto& r : b.reports) {
    reports.push_back(to_json(r));
    if (!r.passed) failures.push_back(r.identity_id);
  }
  for (const auto& r : b.controls) {
    json j = to_json(r);
    j["expected"] = "fail";
    controls.push_back(j);
    // A falsified reference that passes means the check is vacuous.
    if (r.passed) failures.push_back("control " + r.identity_id + " passed");
  }
  const bool passed = failures.empty();
  Output sink(out, o.output);
  sink.stream() << json{{"suite", o.suite},    {"passed", passed},     {"failures", failures},
                        {"reports", reports},  {"controls", controls}}
                       .dump(2)
                << "\n";
  sink.flush();
  if (!passed) {
    err << "verification failed:";
    for (const auto& f : failures) err << " " << f.get<std::string>() << ";";
    err << "\n";
    return 2;
  }
  return 0;
}

// ---- subordinate -----------------------------------------------------------

struct SubordOpts {
  std::string alpha, x = "-5:5:101";
  double tau = 1.0;
  Common common;
};

int do_subordinate(const SubordOpts& o, std::ostream& out, std::ostream& err) {
  check_format(o.common.format);
  const StableIndex a = parse_index(o.alpha);
  const auto xs = parse_grid(o.x);
  const auto pts = subordinate_free_diffusion({a, o.tau, xs, std::nullopt});
  const QuadPlan plan = subord_plan(a, o.tau);
  Output sink(out, o.common.output);
  std::vector<double> ps;
  std::vector<double> bad;
  for (const auto& p : pts) {
    ps.push_back(p.converged ? p.p_alpha : NAN);
    if (!p.converged) bad.push_back(p.x);
  }
  if (o.common.format == "json") {
    json conv = json::array();
    for (const auto& p : pts) conv.push_back(p.converged);
    sink.stream() << json{{"alpha", a.str()},
                          {"tau", o.tau},
                          {"abs_tol", plan.abs_tol},
                          {"rel_tol", plan.rel_tol},
                          {"x", json_array(xs)},
                          {"p_alpha", json_array(ps)},
                          {"converged", conv}}
                         .dump(2)
                  << "\n";
  } else {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < xs.size(); ++i) rows.push_back({xs[i], ps[i]});
    write_csv(sink.stream(),
              {"command=subordinate", "alpha=" + a.str(), "tau=" + num(o.tau),
               "abs_tol=" + num(plan.abs_tol) + " rel_tol=" + num(plan.rel_tol)},
              {"x", "p_alpha"}, rows);
  }
  sink.flush();
  if (!bad.empty()) {
    err << "error: quadrature not certified at x =";
    for (double x : bad) err << " " << num(x);
    err << "\n";
    return 1;
  }
  return 0;
}

// ---- cache -----------------------------------------------------------------

struct CacheOpts {
  std::string alpha, chain;
  int power = 0, nodes = 128;
  bool deep = false;
};

fs::path cache_name(const fs::path& dir, const std::vector<StableIndex>& chain) {
  std::string s = "chain";
  for (const auto& a : chain) s += "_" + std::to_string(a.num()) + "-" + std::to_string(a.den());
  return dir / (s + ".json");
}

int do_cache_build(const CacheOpts& o, const fs::path& dir, std::ostream& out) {
  TabulateOptions topt;
  topt.nodes = o.nodes;
  DensityHandle d = DensityHandle::closed(StableIndex(1, 2));
  if (!o.chain.empty()) {
    if (o.power) throw ConfigError("use either --chain or --alpha with --power");
    std::vector<StableIndex> chain;
    std::stringstream ss(o.chain);
    for (std::string part; std::getline(ss, part, ',');) chain.push_back(parse_index(part));
    if (chain.size() < 2) throw ConfigError("--chain needs at least two indices");
    if (chain.size() > 4 && !o.deep)
      throw ConfigError("chains longer than 4 need --deep; interpolation error compounds");
    d = DensityHandle::closed(chain.front());
    for (std::size_t i = 1; i < chain.size(); ++i) {
      if (i > 1) d = tabulated(d, topt);
      d = compose(chain[i], d);
    }
    d = tabulated(d, topt);
  } else {
    if (o.alpha.empty() || o.power < 2)
      throw ConfigError("cache build needs --chain l/k,l/k,... or --alpha with --power >= 2");
    d = power_chain(parse_index(o.alpha), o.power, o.deep, false);
    d = tabulated(d, topt);
  }
  fs::create_directories(dir);
  const fs::path path = cache_name(dir, d.chain());
  cache_save(d, path);
  out << "wrote " << path.string() << " alpha=" << d.index().str() << " chain=" << chain_str(d.chain())
      << "\n";
  return 0;
}

int do_cache_list(const fs::path& dir, std::ostream& out) {
  out << "# levy " << kVersion << "\n# cache_dir=" << dir.string()
      << "\n# columns: file,alpha,chain,status\n";
  for (const auto& f : cache_files(dir)) {
    out << f.filename().string() << ",";
    try {
      auto d = cache_load(f);
      out << d.index().str() << "," << chain_str(d.chain()) << ",ok\n";
    } catch (const CacheError& e) {
      out << ",,invalid: " << e.what() << "\n";
    }
  }
  return 0;
}

int do_cache_clear(const fs::path& dir, std::ostream& out) {
  std::size_t n = 0;
  for (const auto& f : cache_files(dir)) n += fs::remove(f) ? 1 : 0;
  out << "removed " << n << " cache file(s) from " << dir.string() << "\n";
  return 0;
}

}  // namespace

std::vector<double> parse_grid(const std::string& expr) {
  if (expr.empty()) throw ConfigError("empty grid expression");
  std::vector<double> out;
  if (expr.find(':') == std::string::npos) {
    std::stringstream ss(expr);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_double(part, expr));
    if (out.empty()) throw ConfigError("grid '" + expr + "' has no points");
    return out;
  }
  std::vector<std::string> parts;
  std::stringstream ss(expr);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw ConfigError("grid '" + expr + "': expected lo:hi:n or lo:hi:nlog");
  const double lo = parse_double(parts[0], expr), hi = parse_double(parts[1], expr);
  std::string count = parts[2];
  const bool log = count.size() > 3 && count.compare(count.size() - 3, 3, "log") == 0;
  if (log) count.resize(count.size() - 3);
  int n = 0;
  auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
  if (count.empty() || ec != std::errc{} || ptr != count.data() + count.size() || n < 1)
    throw ConfigError("grid '" + expr + "': point count must be a positive integer");
  if (log && !(lo > 0.0 && hi > 0.0))
    throw ConfigError("grid '" + expr + "': log spacing needs lo > 0 and hi > 0");
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    double v = log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                   : lo + f * (hi - lo);
    if (i == 0) v = lo;
    if (i == n - 1) v = hi;
    out.push_back(v);
  }
  return out;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-sided Levy stable densities: evaluation, composition, identity checks"};
  app.name("levy");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("levy ") + kVersion);
  std::string cache_flag;
  app.add_option("--cache-dir", cache_flag, "interpolant cache (default $LEVY_CACHE_DIR)");

  EvalOpts eval;
  auto* s_eval = app.add_subcommand("eval", "evaluate g_alpha on an x grid");
  s_eval->add_option("--alpha", eval.alpha, "index l/k")->required();
  s_eval->add_option("--x", eval.x, "grid lo:hi:n[log], a number, or a list")->required();
  add_common(s_eval, eval.common);

  ComposeOpts comp;
  auto* s_comp = app.add_subcommand("compose", "g_{alpha beta} = L_alpha[g_beta]");
  s_comp->add_option("--alpha", comp.alpha, "kernel index")->required();
  s_comp->add_option("--beta", comp.beta, "operand index")->required();
  s_comp->add_option("--x", comp.x, "x grid");
  s_comp->add_option("--orientation", comp.orientation, "auto or as-written");
  s_comp->add_flag("--tabulate", comp.tabulate, "tabulate before evaluating");
  s_comp->add_option("--check-against", comp.check, "reference index, normally alpha*beta");
  s_comp->add_option("--tol", comp.tol, "relative tolerance for --check-against");
  add_common(s_comp, comp.common);

  LaplaceOpts lap;
  auto* s_lap = app.add_subcommand("laplace", "numerical Laplace transform of g_alpha");
  s_lap->add_option("--alpha", lap.alpha, "index")->required();
  s_lap->add_option("--p", lap.p, "p grid");
  s_lap->add_option("--t", lap.t, "kernel scale: transform kappa_alpha(t, x)");
  s_lap->add_option("--tol", lap.tol, "fail (exit 2) above this absolute error");
  add_common(s_lap, lap.common);

  VerifyOpts ver;
  auto* s_ver = app.add_subcommand("verify", "run identity checks, JSON report");
  s_ver->add_option("--suite", ver.suite, "char, scaling, commute, efros, subord or all")
      ->required();
  s_ver->add_option("--alpha", ver.alpha, "index");
  s_ver->add_option("--beta", ver.beta, "second index (commute, efros)");
  s_ver->add_option("--p", ver.p, "p grid");
  s_ver->add_option("--x", ver.x, "x grid (commute)");
  s_ver->add_option("--tau", ver.tau, "tau grid (subord)");
  s_ver->add_option("--pair", ver.pair, "scaling pair: k0 or exp");
  s_ver->add_option("--tol", ver.tol, "tolerance");
  s_ver->add_flag("--no-controls", ver.no_controls, "skip the falsified-reference controls");
  s_ver->add_option("-o,--output", ver.output, "write the report to a file");

  SubordOpts sub;
  auto* s_sub = app.add_subcommand("subordinate", "subordinated free diffusion P_alpha(x, tau)");
  s_sub->add_option("--alpha", sub.alpha, "index")->required();
  s_sub->add_option("--tau", sub.tau, "physical time");
  s_sub->add_option("--x", sub.x, "x grid");
  add_common(s_sub, sub.common);

  CacheOpts cache;
  auto* s_cache = app.add_subcommand("cache", "manage tabulated densities");
  s_cache->require_subcommand(1);
  auto* c_build = s_cache->add_subcommand("build", "tabulate a chain and store it");
  c_build->add_option("--alpha", cache.alpha, "index for --power");
  c_build->add_option("--power", cache.power, "g_{alpha^power}");
  c_build->add_option("--chain", cache.chain, "comma-separated indices, composed left to right");
  c_build->add_option("--nodes", cache.nodes, "Chebyshev nodes");
  c_build->add_flag("--deep", cache.deep, "allow more than 4 stages");
  auto* c_list = s_cache->add_subcommand("list", "list cached tables");
  auto* c_clear = s_cache->add_subcommand("clear", "delete cached tables");

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  if (cargv.empty()) cargv.push_back("levy");
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "levy " << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const fs::path dir = cache_dir(cache_flag);
    if (s_eval->parsed()) return do_eval(eval, dir, out, err);
    if (s_comp->parsed()) return do_compose(comp, dir, out, err);
    if (s_lap->parsed()) return do_laplace(lap, dir, out, err);
    if (s_ver->parsed()) return do_verify(ver, dir, out, err);
    if (s_sub->parsed()) return do_subordinate(sub, out, err);
    if (c_build->parsed()) return do_cache_build(cache, dir, out);
    if (c_list->parsed()) return do_cache_list(dir, out);
    if (c_clear->parsed()) return do_cache_clear(dir, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace levy::cli
