#pragma once

// Command implementations for the `cospectral` executable. Kept in a header
// so the test suite can drive them in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cospectral/cospectral.hpp"

namespace cospectral::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInputError = 2,
  kNotCograph = 3,
  kNumericFailure = 4,
};

struct Hooks {
  /// Bytes allocated so far; bench reports deltas. Empty: reported as 0.
  std::function<std::size_t()> allocated_bytes;
  std::istream* in = &std::cin;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotCographError : public std::runtime_error {
 public:
  explicit NotCographError(const NotCograph& r)
      : std::runtime_error("not a cograph: induced P4 " + std::to_string(r.witness[0]) + "-" +
                           std::to_string(r.witness[1]) + "-" + std::to_string(r.witness[2]) + "-" +
                           std::to_string(r.witness[3])),
        witness(r.witness) {}
  std::array<std::int32_t, 4> witness;
};

struct SourceOptions {
  std::string cotree;
  std::string edges;
  std::string family;
  std::string stdin_format;

  void attach(CLI::App* cmd) {
    auto* a = cmd->add_option("--cotree", cotree, "cotree text, or a file containing it");
    auto* b = cmd->add_option("--edges", edges, "edge-list file (runs cograph recognition)");
    auto* c = cmd->add_option("--family", family, "complete:N | empty:N | gr:R | random:N[:SEED[:BIAS]]");
    auto* d = cmd->add_option("--stdin", stdin_format, "read input from stdin: cotree | edges")
                  ->check(CLI::IsMember({"cotree", "edges"}));
    a->excludes(b, c, d);
    b->excludes(c, d);
    c->excludes(d);
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline Cotree from_edges(const std::string& text) {
  EdgeListGraph g = [&] {
    try {
      return parse_edge_list(text);
    } catch (const EdgeListError& e) {
      throw InputError(e.what());
    }
  }();
  auto result = recognize(g);
  if (auto* rejected = std::get_if<NotCograph>(&result)) throw NotCographError(*rejected);
  return std::get<Cotree>(std::move(result));
}

inline Cotree from_cotree_text(const std::string& text) {
  try {
    return parse_cotree(text);
  } catch (const CotreeError& e) {
    throw InputError(e.what());
  }
}

inline Cotree load_source(const SourceOptions& s, const Hooks& hooks) {
  if (!s.cotree.empty()) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(s.cotree, ec)) return from_cotree_text(read_file(s.cotree));
    return from_cotree_text(s.cotree);
  }
  if (!s.edges.empty()) return from_edges(read_file(s.edges));
  if (!s.family.empty()) {
    try {
      return build(parse_family(s.family));
    } catch (const FamilyError& e) {
      throw InputError(e.what());
    }
  }
  if (!s.stdin_format.empty()) {
    std::string text{std::istreambuf_iterator<char>(*hooks.in), std::istreambuf_iterator<char>()};
    return s.stdin_format == "edges" ? from_edges(text) : from_cotree_text(text);
  }
  throw UsageError("no input: give one of --cotree, --edges, --family, --stdin");
}

inline Rational literal(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const RationalParseError& e) {
    throw InputError(e.what());
  }
}

inline std::string decimal(const Rational& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v.get_d());
  return buf;
}

inline nlohmann::json counts_json(const SignCounts& c) {
  return {{"positive", c.positives}, {"zero", c.zeros}, {"negative", c.negatives}};
}

inline nlohmann::json inertia_json(const Inertia& i) {
  return {{"n_plus", i.n_plus}, {"n_zero", i.n_zero}, {"n_minus", i.n_minus}};
}

template <typename T>
void emit_diag(const DiagonalReport<T>& r, std::size_t n, const char* mode, bool json, std::ostream& out) {
  if (json) {
    nlohmann::json j{{"command", "diag"},
                     {"n", n},
                     {"mode", mode},
                     {"shift", ScalarTraits<T>::format(r.shift)},
                     {"counts", counts_json(r.counts)}};
    auto& values = j["values"] = nlohmann::json::array();
    for (const auto& v : r.values) values.push_back(ScalarTraits<T>::format(v));
    if (r.trace) {
      auto& trace = j["trace"] = nlohmann::json::array();
      for (const auto& it : *r.trace)
        trace.push_back({{"k", it.k},
                         {"l", it.l},
                         {"parent", std::string(1, kind_letter(it.parent_kind))},
                         {"subcase", subcase_name(it.subcase)},
                         {"alpha", ScalarTraits<T>::format(it.alpha)},
                         {"beta", ScalarTraits<T>::format(it.beta)},
                         {"dk", ScalarTraits<T>::format(it.new_dk)},
                         {"dl", ScalarTraits<T>::format(it.new_dl)},
                         {"l_finalized", it.l_finalized}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << "n " << n << '\n' << "mode " << mode << '\n' << "shift " << ScalarTraits<T>::format(r.shift) << '\n';
  out << "values";
  for (const auto& v : r.values) out << ' ' << ScalarTraits<T>::format(v);
  out << '\n' << "counts " << r.counts << '\n';
  if (r.trace) {
    out << "# iter\tk\tl\tparent\tsubcase\talpha\tbeta\tdk\tdl\n";
    write_trace(out, *r.trace);
  }
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline std::size_t parse_size(const std::string& text) {
  // Accepts plain integers and scientific shorthand such as 1e6 or 2.5e5.
  const Rational r = literal(text);
  if (r.get_den() != 1 || sgn(r) <= 0) throw InputError("size must be a positive integer: '" + text + "'");
  return r.get_num().get_ui();
}

inline std::size_t oracle_cap() {
  if (const char* env = std::getenv("COSPECTRAL_ORACLE_CAP")) {
    try {
      return parse_size(env);
    } catch (const InputError&) {
      throw InputError("COSPECTRAL_ORACLE_CAP must be a positive integer");
    }
  }
  return oracle::kDefaultCap;
}

/// Runs one invocation. Output goes to `out` only on success; diagnostics go
/// to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {}) {
  CLI::App app{"Eigenvalue location, inertia and energy of cographs via cotree diagonalization", "cospectral"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "output format for query commands")
      ->check(CLI::IsMember({"text", "json"}));

  // diag
  SourceOptions diag_src;
  std::string diag_x = "0", diag_mode = "exact";
  bool diag_trace = false;
  double zero_tol = 0.0;
  auto* diag = app.add_subcommand("diag", "diagonal congruent to A + xI");
  diag_src.attach(diag);
  diag->add_option("-x,--shift", diag_x, "shift x (rational literal)");
  diag->add_flag("--trace", diag_trace, "print one line per elimination step");
  diag->add_option("--mode", diag_mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
  diag->add_option("--zero-tol", zero_tol, "float mode: |d| <= tol counts as zero");

  // count
  SourceOptions count_src;
  std::string interval_text;
  auto* count = app.add_subcommand("count", "number of eigenvalues in an interval");
  count_src.attach(count);
  count->add_option("interval", interval_text, "(a,b], [a,b), (a,b) or [a,b]")->required();

  // eigs
  SourceOptions eigs_src;
  std::vector<std::size_t> indices;
  bool all = false;
  std::string eigs_tol = "1e-6";
  auto* eigs = app.add_subcommand("eigs", "bracket eigenvalues by bisection");
  eigs_src.attach(eigs);
  auto* index_opt = eigs->add_option("--index", indices, "1-based index in descending order (repeatable)");
  eigs->add_flag("--all", all, "all n eigenvalues")->excludes(index_opt);
  eigs->add_option("--tol", eigs_tol, "bracket width (rational literal)");

  // inertia
  SourceOptions inertia_src;
  std::string method = "algorithm";
  auto* inertia = app.add_subcommand("inertia", "inertia (n+, n0, n-)");
  inertia_src.attach(inertia);
  inertia->add_option("--method", method, "algorithm | closed-form | both")
      ->check(CLI::IsMember({"algorithm", "closed-form", "both"}));

  // energy
  SourceOptions energy_src;
  std::string energy_tol = "1e-6";
  unsigned jobs = 1;
  auto* energy_cmd = app.add_subcommand("energy", "graph energy (sum of |eigenvalue|)");
  energy_src.attach(energy_cmd);
  energy_cmd->add_option("--tol", energy_tol, "per-eigenvalue bracket width");
  energy_cmd->add_option("--jobs", jobs, "worker threads for bisection")->check(CLI::Range(1u, 256u));

  // generate
  SourceOptions gen_src;
  std::string out_path;
  auto* generate = app.add_subcommand("generate", "write a cotree in text form");
  gen_src.attach(generate);
  generate->add_option("--out", out_path, "output file (default stdout)");

  // oracle
  SourceOptions oracle_src;
  auto* oracle_cmd = app.add_subcommand("oracle", "dense Jacobi spectrum (small n)");
  oracle_src.attach(oracle_cmd);

  // bench
  std::vector<std::string> sizes;
  std::string bench_mode = "float", bench_x = "0";
  std::size_t repeats = 5;
  std::uint64_t seed = 1;
  auto* bench = app.add_subcommand("bench", "time diagonalize on random cotrees (CSV)");
  bench->add_option("--sizes", sizes, "comma-separated leaf counts, e.g. 1e5,1e6")->delimiter(',')->required();
  bench->add_option("--mode", bench_mode, "float | exact")->check(CLI::IsMember({"exact", "float"}));
  bench->add_option("--repeats", repeats, "timed runs per size")->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  bench->add_option("--seed", seed, "random cotree seed");
  bench->add_option("-x,--shift", bench_x, "shift x");

  std::vector<std::string> argv_storage{"cospectral"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const bool json = format == "json";
  std::ostringstream buf;
  try {
    if (*diag) {
      const Cotree t = load_source(diag_src, hooks);
      const Rational x = literal(diag_x);
      DiagonalizeOptions opts;
      opts.trace = diag_trace;
      opts.zero_tolerance = zero_tol;
      if (diag_mode == "exact")
        emit_diag(diagonalize(t, x, opts), t.order(), "exact", json, buf);
      else
        emit_diag(diagonalize(t, x.get_d(), opts), t.order(), "float", json, buf);
    } else if (*count) {
      const Cotree t = load_source(count_src, hooks);
      const Interval iv = [&] {
        try {
          return Interval::parse(interval_text);
        } catch (const std::invalid_argument& e) {
          throw InputError(e.what());
        }
      }();
      const std::size_t c = count_in_interval(t, iv);
      std::ostringstream ivs;
      ivs << iv;
      if (json)
        buf << nlohmann::json{{"command", "count"}, {"interval", ivs.str()}, {"count", c}}.dump(2) << '\n';
      else
        buf << "count " << ivs.str() << ' ' << c << '\n';
    } else if (*eigs) {
      const Cotree t = load_source(eigs_src, hooks);
      const Rational tol = literal(eigs_tol);
      if (sgn(tol) <= 0) throw InputError("--tol must be positive");
      if (all || indices.empty()) {
        indices.clear();
        for (std::size_t i = 1; i <= t.order(); ++i) indices.push_back(i);
      }
      for (std::size_t i : indices)
        if (i < 1 || i > t.order())
          throw InputError("--index " + std::to_string(i) + " out of range 1.." + std::to_string(t.order()));
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i : indices) {
        const EigenvalueEstimate e = approximate_eigenvalue(t, i, tol);
        if (json) {
          rows.push_back({{"index", i},
                          {"lo", e.lo.get_str()},
                          {"hi", e.hi.get_str()},
                          {"width", e.width.get_str()},
                          {"exact", e.exact ? nlohmann::json(e.exact->get_str()) : nlohmann::json(nullptr)},
                          {"value", e.midpoint().get_d()}});
        } else if (e.exact) {
          buf << "lambda[" << i << "] = " << e.exact->get_str() << " (exact)\n";
        } else {
          buf << "lambda[" << i << "] in (" << decimal(e.lo) << ", " << decimal(e.hi) << "] width "
              << decimal(e.width) << " ~ " << decimal(e.midpoint()) << '\n';
        }
      }
      if (json) buf << nlohmann::json{{"command", "eigs"}, {"n", t.order()}, {"eigenvalues", rows}}.dump(2) << '\n';
    } else if (*inertia) {
      const Cotree t = load_source(inertia_src, hooks);
      std::optional<Inertia> by_algorithm, by_formula;
      if (method != "closed-form") by_algorithm = inertia_by_algorithm(t);
      if (method != "algorithm") by_formula = inertia_closed_form(t);
      if (json) {
        nlohmann::json j{{"command", "inertia"}, {"n", t.order()}};
        if (by_algorithm) j["algorithm"] = inertia_json(*by_algorithm);
        if (by_formula) j["closed_form"] = inertia_json(*by_formula);
        if (by_algorithm && by_formula) j["agree"] = *by_algorithm == *by_formula;
        buf << j.dump(2) << '\n';
      } else {
        if (by_algorithm) buf << "algorithm " << *by_algorithm << '\n';
        if (by_formula) buf << "closed-form " << *by_formula << '\n';
        if (by_algorithm && by_formula) buf << (*by_algorithm == *by_formula ? "AGREE" : "DISAGREE") << '\n';
      }
    } else if (*energy_cmd) {
      const Cotree t = load_source(energy_src, hooks);
      const Rational tol = literal(energy_tol);
      if (sgn(tol) <= 0) throw InputError("--tol must be positive");
      const EnergyEstimate e = energy(t, tol, jobs);
      if (json)
        buf << nlohmann::json{{"command", "energy"},
                              {"n", t.order()},
                              {"value", e.value.get_str()},
                              {"value_decimal", e.value.get_d()},
                              {"error_bound", e.error_bound.get_str()},
                              {"exact_eigenvalues", e.exact_eigenvalues}}
                   .dump(2)
            << '\n';
      else
        buf << "energy " << (e.value.get_den() == 1 ? e.value.get_str() : decimal(e.value)) << " +- "
            << decimal(e.error_bound) << '\n';
    } else if (*generate) {
      const Cotree t = load_source(gen_src, hooks);
      const std::string text = serialize_cotree(t) + "\n";
      if (out_path.empty()) {
        buf << text;
      } else {
        std::ofstream f(out_path);
        if (!f || !(f << text)) throw InputError("cannot write '" + out_path + "'");
      }
    } else if (*oracle_cmd) {
      const Cotree t = load_source(oracle_src, hooks);
      const std::size_t cap = oracle_cap();
      if (t.order() > cap)
        throw InputError("n = " + std::to_string(t.order()) + " exceeds the oracle cap " + std::to_string(cap) +
                         " (set COSPECTRAL_ORACLE_CAP)");
      const auto evs = oracle::eigenvalues_dense(oracle::adjacency_from_cotree(t, cap), cap);
      if (json) {
        buf << nlohmann::json{{"command", "oracle"}, {"n", t.order()}, {"eigenvalues", evs}}.dump(2) << '\n';
      } else {
        char line[64];
        for (double ev : evs) {
          std::snprintf(line, sizeof line, "%.12f\n", ev == 0.0 ? 0.0 : ev);
          buf << line;
        }
      }
    } else if (*bench) {
      const Rational x = literal(bench_x);
      buf << "n,mode,repeats,median_ms,bytes_allocated,bytes_per_leaf,ratio_to_prev\n";
      double prev_ms = 0.0;
      for (const std::string& s : sizes) {
        const std::size_t n = parse_size(s);
        const Cotree t = build(RandomCotree{n, seed, 0.5});
        std::vector<double> times;
        std::size_t bytes = 0;
        for (std::size_t rep = 0; rep < repeats; ++rep) {
          const std::size_t before = hooks.allocated_bytes ? hooks.allocated_bytes() : 0;
          const auto start = std::chrono::steady_clock::now();
          std::size_t sink;
          if (bench_mode == "float")
            sink = diagonalize(t, x.get_d()).counts.total();
          else
            sink = diagonalize(t, x).counts.total();
          const auto stop = std::chrono::steady_clock::now();
          if (sink != n) throw std::logic_error("bench: count mismatch");
          if (rep == 0) bytes = (hooks.allocated_bytes ? hooks.allocated_bytes() : 0) - before;
          times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        }
        const double ms = median(times);
        char row[256];
        std::snprintf(row, sizeof row, "%zu,%s,%zu,%.6f,%zu,%.2f,", n, bench_mode.c_str(), repeats, ms, bytes,
                      static_cast<double>(bytes) / static_cast<double>(n));
        buf << row;
        if (prev_ms > 0.0) {
          std::snprintf(row, sizeof row, "%.3f", ms / prev_ms);
          buf << row;
        }
        buf << '\n';
        prev_ms = ms;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NotCographError& e) {
    err << "error: " << e.what() << '\n';
    return kNotCograph;
  } catch (const NumericFailure& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const oracle::OracleError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  out << buf.str();
  return kOk;
}

}  // namespace cospectral::cli
