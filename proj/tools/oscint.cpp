// oscint command line: transform, invert, convolve, kernel, corpus, verify.
//
// Exit codes: 0 success, 1 usage or config error (JSON on stderr),
// 2 numerically inconclusive or a failed property suite.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oscint/conv.hpp"
#include "oscint/corpus.hpp"
#include "oscint/fourier.hpp"
#include "oscint/function_json.hpp"
#include "oscint/invert.hpp"
#include "oscint/verify.hpp"

using nlohmann::json;
using namespace oscint;

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 1;
constexpr int kInconclusive = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int fail(const std::string& kind, const std::string& msg) {
  std::cerr << json{{"error", kind}, {"message", msg}}.dump() << '\n';
  return kConfig;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\n");
  auto e = s.find_last_not_of(" \t\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_number(const std::string& t) {
  std::string s = trim(t);
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + t + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + t + "'");
  return v;
}

// "start:stop:count" or "a,b,c"
std::vector<double> parse_grid(const std::string& spec) {
  std::string s = trim(spec);
  if (s.empty()) throw ConfigError("empty grid");
  std::vector<double> g;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("grid range must be start:stop:count");
    double a = parse_number(parts[0]), b = parse_number(parts[1]);
    double c = parse_number(parts[2]);
    if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("grid endpoints must be finite");
    if (c < 1 || c != std::floor(c)) throw ConfigError("grid count must be a positive integer");
    int n = static_cast<int>(c);
    for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return g;
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) {
    if (trim(p).empty()) continue;
    g.push_back(parse_number(p));
  }
  if (g.empty()) throw ConfigError("empty grid");
  return g;
}

// a path to a JSON file, inline JSON, or a corpus name
json load_doc(const std::string& arg) {
  std::string s = trim(arg);
  if (s.empty()) throw ConfigError("empty document");
  if (s.front() == '{' || s.front() == '[' || s.front() == '"') return json::parse(s);
  std::ifstream in(s);
  if (in) return json::parse(in);
  return json(s);
}

FunctionSpec load_function(const std::string& corpus, const std::string& doc) {
  if (!corpus.empty() && !doc.empty()) throw ConfigError("give either --corpus or --function, not both");
  if (!corpus.empty()) return corpus_lookup(corpus).f;
  if (!doc.empty()) return function_from_json(load_doc(doc));
  throw ConfigError("a function is required (--corpus or --function)");
}

int default_jobs() {
  const char* e = std::getenv("OSCINT_JOBS");
  if (!e || !*e) return 0;
  char* end = nullptr;
  long v = std::strtol(e, &end, 10);
  if (*end != '\0' || v < 0) throw ConfigError("OSCINT_JOBS must be a non-negative integer");
  return static_cast<int>(v);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write " + out);
  f << text;
}

std::string pick_format(const std::string& fmt, const std::string& out) {
  if (!fmt.empty()) return fmt;
  if (out.size() > 5 && out.substr(out.size() - 5) == ".json") return "json";
  return "csv";
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TailStrategy parse_strategy(const std::string& s) {
  if (s == "auto") return TailStrategy::Auto;
  if (s == "absolute") return TailStrategy::AbsoluteTail;
  if (s == "bv") return TailStrategy::BVTail;
  if (s == "zero-partition") return TailStrategy::ZeroPartitionExtrapolation;
  if (s == "parts") return TailStrategy::PartsTransform;
  return strategy_from_name(s);
}

// converged, or a divergence the classifier proved or the corpus lists
bool point_expected(const CorpusEntry* e, double s, Status st, const std::string& note) {
  if (st == Status::Converged) return true;
  if (st == Status::Inconclusive) return false;
  if (note.rfind("ExistenceRefuted", 0) == 0) return true;
  if (e) {
    for (double d : e->divergence_set) {
      if (std::abs(d - s) <= 1e-12 * std::max(1.0, std::abs(d))) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

struct TransformOpts {
  std::string corpus, function, grid, out, format, strategy = "auto", direction = "forward";
  double tol = 1e-8;
  int jobs = -1;
};

int cmd_transform(const TransformOpts& o) {
  if (!(o.tol > 0.0)) throw ConfigError("tol must be positive");
  FunctionSpec f = load_function(o.corpus, o.function);
  const CorpusEntry* entry = o.corpus.empty() ? nullptr : &corpus_lookup(o.corpus);
  auto grid = parse_grid(o.grid);
  Direction dir;
  if (o.direction == "forward") dir = Direction::Forward;
  else if (o.direction == "inverse") dir = Direction::Inverse;
  else throw ConfigError("direction must be forward or inverse");
  TailStrategy strat = parse_strategy(o.strategy);
  int jobs = o.jobs >= 0 ? o.jobs : default_jobs();
  auto fmt = pick_format(o.format, o.out);
  if (fmt != "csv" && fmt != "json") throw ConfigError("format must be csv or json");

  TransformTable t = sweep(f, grid, dir, o.tol, jobs, strat);
  int code = kOk;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!point_expected(entry, t.s_grid[i], t.statuses[i], t.notes[i])) code = kInconclusive;
  }
  if (fmt == "csv") {
    emit(t.to_csv(), o.out);
  } else {
    json j = t.to_json();
    j["command"] = "transform";
    j["function"] = entry ? json(o.corpus) : function_to_json(f);
    j["direction"] = o.direction;
    j["tol"] = o.tol;
    j["strategy"] = o.strategy;
    emit(j.dump(2) + "\n", o.out);
  }
  return code;
}

struct InvertOpts {
  std::string corpus, function, kernel = "gauss", x0, out;
  double aperture = 0.0, tol = 1e-8;
  int steps = 14;
  bool spectral = false;
};

int cmd_invert(const InvertOpts& o) {
  if (!(o.tol > 0.0)) throw ConfigError("tol must be positive");
  if (o.steps < 2) throw ConfigError("steps must be at least 2");
  FunctionSpec f = load_function(o.corpus, o.function);
  auto x0s = parse_grid(o.x0);
  Kernel k = kernel_from_json(load_doc(o.kernel));
  if (!k.validated) k = validated(k, o.tol);
  if (!k.validation.all()) {
    std::string bad;
    for (const auto& c : k.validation.failed()) bad += (bad.empty() ? "" : ", ") + c;
    throw KernelInvalid("kernel '" + k.name + "' fails Definition: " + bad);
  }

  std::optional<FunctionSpec> fhat;
  if (o.spectral) {
    const CorpusEntry* e = o.corpus.empty() ? nullptr : &corpus_lookup(o.corpus);
    fhat = e && e->fhat_closed_form ? *e->fhat_closed_form : transformed_spec(f, o.tol * 1e-2);
  }

  json rows = json::array();
  int code = kOk;
  for (double x0 : x0s) {
    auto path = NonTangentialPath::standard(x0, o.aperture, o.steps);
    InversionResult r = fhat ? invert_spectral(*fhat, k, path, o.tol) : invert_at(f, k, path, o.tol);
    if (r.status != Status::Converged) code = kInconclusive;
    json j = r.to_json();
    j["x0"] = x0;
    rows.push_back(j);
  }
  json doc = {{"schema", "oscint.invert/1"},
              {"command", "invert"},
              {"kernel", k.name},
              {"function", o.corpus.empty() ? function_to_json(f) : json(o.corpus)},
              {"aperture", o.aperture},
              {"steps", o.steps},
              {"route", o.spectral ? "spectral" : "direct"},
              {"tol", o.tol},
              {"results", rows}};
  emit(doc.dump(2) + "\n", o.out);
  return code;
}

struct ConvolveOpts {
  std::string f, g, grid, route = "direct", out, format;
  double tol = 1e-8;
  int jobs = -1;
  bool norm = false;
};

int cmd_convolve(const ConvolveOpts& o) {
  if (!(o.tol > 0.0)) throw ConfigError("tol must be positive");
  ConvRequest req;
  req.f = function_from_json(load_doc(o.f));
  req.g = function_from_json(load_doc(o.g));
  req.route = route_from_name(o.route);
  req.tol = o.tol;
  auto xs = parse_grid(o.grid);
  int jobs = o.jobs >= 0 ? o.jobs : default_jobs();
  auto fmt = pick_format(o.format, o.out);
  if (fmt != "csv" && fmt != "json") throw ConfigError("format must be csv or json");

  auto res = convolve_grid(req, xs, jobs);
  int code = kOk;
  for (const auto& r : res) {
    if (r.result.status != Status::Converged) code = kInconclusive;
  }
  if (fmt == "csv") {
    std::ostringstream os;
    os << "x,re,im,status,err_est,evals\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& q = res[i].result;
      os << num(xs[i]) << ',' << (q.value_set ? num(q.value.real()) : "") << ','
         << (q.value_set ? num(q.value.imag()) : "") << ',' << status_name(q.status) << ',' << num(q.abs_error_estimate) << ','
         << q.evaluations << '\n';
    }
    emit(os.str(), o.out);
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      json r = to_json(res[i].result);
      r["x"] = xs[i];
      if (res[i].bound) r["bound"] = *res[i].bound;
      rows.push_back(r);
    }
    json doc = {{"schema", "oscint.convolve/1"}, {"route", o.route}, {"tol", o.tol}, {"rows", rows}};
    if (o.norm) {
      auto nb = conv_norm_bound(req.f, req.g, true, 0.0, 41, o.tol);
      doc["norm"] = {{"alexiewicz_bound", nb.alexiewicz_bound},
                     {"norm_f", nb.norm_f},
                     {"l1_g", nb.l1_g},
                     {"radius", nb.radius},
                     {"empirical", nb.empirical ? json(*nb.empirical) : json(nullptr)}};
    }
    emit(doc.dump(2) + "\n", o.out);
  }
  return code;
}

struct KernelOpts {
  std::string kernel, out;
  double tol = 1e-8;
};

int cmd_kernel(const KernelOpts& o) {
  Kernel k = kernel_from_json(load_doc(o.kernel));
  KernelValidation v = k.validated ? k.validation : validate_kernel(k, o.tol);
  json doc = {{"schema", "oscint.kernel/1"}, {"kernel", k.name}, {"validation", v.to_json()}};
  emit(doc.dump(2) + "\n", o.out);
  if (!v.all()) {
    std::string bad;
    for (const auto& c : v.failed()) bad += (bad.empty() ? "" : ", ") + c;
    return fail("KernelInvalid", "kernel '" + k.name + "' fails Definition: " + bad);
  }
  return kOk;
}

struct CorpusOpts {
  std::string name, out;
  bool list = false;
};

int cmd_corpus(const CorpusOpts& o) {
  if (o.list) {
    std::string s;
    for (const auto& n : corpus_names()) s += n + "\n";
    emit(s, o.out);
    return kOk;
  }
  json all = corpus_dump();
  if (o.name.empty()) {
    emit(all.dump(2) + "\n", o.out);
    return kOk;
  }
  corpus_lookup(o.name);  // UnknownEntry for bad names
  for (const auto& e : all["entries"]) {
    if (e.value("name", "") == o.name) {
      emit(e.dump(2) + "\n", o.out);
      return kOk;
    }
  }
  return fail("UnknownEntry", "corpus entry '" + o.name + "' has no dump");
}

struct VerifyOpts {
  std::vector<std::string> suites;
  std::uint64_t seed = 1;
  int n = 0;
  std::string out;
  bool list = false;
};

int cmd_verify(const VerifyOpts& o) {
  if (o.list) {
    std::string s;
    for (const auto& n : suite_names()) s += n + "\n";
    emit(s, o.out);
    return kOk;
  }
  if (o.n < 0) throw ConfigError("n must be non-negative");
  std::vector<std::string> names;
  for (const auto& s : o.suites) {
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) {
      p = trim(p);
      if (p.empty()) continue;
      bool known = false;
      for (const auto& k : suite_names()) known = known || k == p;
      if (!known) throw UnknownEntry("unknown suite '" + p + "'");
      names.push_back(p);
    }
  }
  VerifySummary sum = run_verify(names, o.seed, o.n);
  json j = sum.to_json();
  j["command"] = "verify";
  emit(j.dump(2) + "\n", o.out);
  return sum.ok() ? kOk : kInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oscint: conditionally convergent Fourier transforms, convolutions and kernel inversion"};
  app.require_subcommand(1);

  TransformOpts to;
  auto* tr = app.add_subcommand("transform", "tabulate f^ over a grid");
  tr->add_option("--corpus", to.corpus, "corpus entry name");
  tr->add_option("--function", to.function, "function document: JSON file, inline JSON or corpus name");
  tr->add_option("--grid", to.grid, "start:stop:count or a comma list")->required();
  tr->add_option("--tol", to.tol, "absolute tolerance");
  tr->add_option("--out", to.out, "output path (stdout when omitted)");
  tr->add_option("--format", to.format, "csv or json (default from --out extension, else csv)");
  tr->add_option("--jobs", to.jobs, "worker threads, 0 = all (default OSCINT_JOBS)");
  tr->add_option("--strategy", to.strategy, "auto, absolute, bv, zero-partition or parts");
  tr->add_option("--direction", to.direction, "forward or inverse");

  InvertOpts io;
  auto* iv = app.add_subcommand("invert", "recover f(x0) through a summability kernel");
  iv->add_option("--corpus", io.corpus, "corpus entry name");
  iv->add_option("--function", io.function, "function document");
  iv->add_option("--kernel", io.kernel, "gauss, abel, cesaro, or a kernel document");
  iv->add_option("--x0", io.x0, "point(s): a comma list or start:stop:count")->required();
  iv->add_option("--aperture", io.aperture, "non-tangential aperture C >= 0");
  iv->add_option("--steps", io.steps, "path length, y_k = 2^-k");
  iv->add_option("--tol", io.tol, "absolute tolerance");
  iv->add_flag("--spectral", io.spectral, "integrate Theta(ys) f^(s) e^{isx} instead of the kernel against f");
  iv->add_option("--out", io.out, "output path");

  ConvolveOpts co;
  auto* cv = app.add_subcommand("convolve", "evaluate f*g over a grid");
  cv->add_option("--f", co.f, "function document for f")->required();
  cv->add_option("--g", co.g, "function document for g")->required();
  cv->add_option("--grid", co.grid, "start:stop:count or a comma list")->required();
  cv->add_option("--route", co.route, "direct, hk_bv or compact_bv");
  cv->add_option("--tol", co.tol, "absolute tolerance");
  cv->add_option("--jobs", co.jobs, "worker threads");
  cv->add_flag("--norm", co.norm, "attach ||f|| ||g||_1 and the empirical ||f*g|| (json only)");
  cv->add_option("--out", co.out, "output path");
  cv->add_option("--format", co.format, "csv or json");

  KernelOpts ko;
  auto* kn = app.add_subcommand("kernel", "check a kernel against the seven clauses");
  kn->add_option("--kernel", ko.kernel, "gauss, abel, cesaro, or a kernel document")->required();
  kn->add_option("--tol", ko.tol, "tolerance for the integral clauses");
  kn->add_option("--out", ko.out, "output path");

  CorpusOpts cpo;
  auto* cp = app.add_subcommand("corpus", "dump the corpus registry");
  cp->add_option("--name", cpo.name, "single entry");
  cp->add_flag("--list", cpo.list, "names only");
  cp->add_option("--out", cpo.out, "output path");

  VerifyOpts vo;
  auto* vf = app.add_subcommand("verify", "run the property suites");
  vf->add_option("--suite", vo.suites, "suite name(s), comma separated or repeated (default: all)");
  vf->add_option("--seed", vo.seed, "seed for the randomized suites");
  vf->add_option("--n", vo.n, "instances for randomized suites (0: suite default)");
  vf->add_flag("--list", vo.list, "list suite names");
  vf->add_option("--out", vo.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("Usage", e.what());
  }

  try {
    if (*tr) return cmd_transform(to);
    if (*iv) return cmd_invert(io);
    if (*cv) return cmd_convolve(co);
    if (*kn) return cmd_kernel(ko);
    if (*cp) return cmd_corpus(cpo);
    if (*vf) return cmd_verify(vo);
  } catch (const ConfigError& e) {
    return fail("Config", e.what());
  } catch (const KernelInvalid& e) {
    return fail("KernelInvalid", e.what());
  } catch (const UnknownEntry& e) {
    return fail("UnknownEntry", e.what());
  } catch (const PreconditionError& e) {
    return fail("PreconditionError", e.what());
  } catch (const DomainError& e) {
    return fail("DomainError", e.what());
  } catch (const RouteHypothesisFailed& e) {
    return fail("RouteHypothesisFailed", e.what());
  } catch (const json::exception& e) {
    return fail("Json", e.what());
  } catch (const Error& e) {
    return fail("Error", e.what());
  } catch (const std::exception& e) {
    return fail("Internal", e.what());
  }
  return kConfig;
}
