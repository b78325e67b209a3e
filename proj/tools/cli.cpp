#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellvol/analytic.hpp"
#include "bellvol/inequalities.hpp"
#include "bellvol/montecarlo.hpp"
#include "bellvol/quantum.hpp"

namespace bellvol::cli {

namespace {

using ordered_json = nlohmann::ordered_json;
using Value = std::variant<std::string, double, std::uint64_t, bool>;
using Fields = std::vector<std::pair<std::string, Value>>;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv, text };

struct Record {
  std::string command;
  Fields parameters;
  Fields results;
};

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json to_json(const Value& v) {
  return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

std::string to_text(const Value& v, bool csv) {
  return std::visit(
      [csv](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) return x;
        else if constexpr (std::is_same_v<T, double>) return csv ? format_g17(x) : format_shortest(x);
        else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else return std::to_string(x);
      },
      v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void emit(const Record& rec, Format format, std::ostream& out) {
  const std::string stamp = timestamp_utc();
  switch (format) {
    case Format::json: {
      ordered_json j;
      j["command"] = rec.command;
      ordered_json params = ordered_json::object();
      for (const auto& [k, v] : rec.parameters) params[k] = to_json(v);
      j["parameters"] = params;
      ordered_json results = ordered_json::object();
      for (const auto& [k, v] : rec.results) results[k] = to_json(v);
      j["results"] = results;
      j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
      j["timestamp"] = stamp;
      out << j.dump() << '\n';
      break;
    }
    case Format::csv: {
      std::string header = "command", row = csv_escape(rec.command);
      // Parameters carry an arg_ prefix so they never collide with result columns.
      for (const auto& [k, v] : rec.parameters) {
        header += ",arg_" + k;
        row += "," + csv_escape(to_text(v, true));
      }
      for (const auto& [k, v] : rec.results) {
        header += "," + k;
        row += "," + csv_escape(to_text(v, true));
      }
      out << header << ",version,timestamp\n" << row << "," << kToolVersion << "," << stamp << '\n';
      break;
    }
    case Format::text: {
      out << kToolName << ' ' << rec.command << '\n';
      for (const auto& [k, v] : rec.parameters) out << "  " << k << " = " << to_text(v, false) << '\n';
      for (const auto& [k, v] : rec.results) out << k << " = " << to_text(v, false) << '\n';
      break;
    }
  }
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  return Format::text;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError("invalid " + what + ": '" + s + "'");
  return v;
}

TwoQubitState parse_state(const std::string& spec) {
  if (spec == "singlet") return singlet();
  if (spec.rfind("werner:", 0) == 0) return werner(parse_double(spec.substr(7), "werner weight"));
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    if (path.empty()) throw UsageError("--state file: needs a path");
    return load_state_file(path);
  }
  throw UsageError("--state must be singlet, werner:<p> or file:<path>, got '" + spec + "'");
}

unsigned resolve_threads(const std::optional<unsigned>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("BELLVOL_THREADS"); env && *env) {
    unsigned v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("BELLVOL_THREADS must be a non-negative integer, got '" + s + "'");
    }
    return v;
  }
  return 0;
}

Fields estimate_fields(const ViolationEstimate& e) {
  return {{"fraction", e.fraction},
          {"n_violating", e.n_violating},
          {"n_samples", e.n_samples},
          {"stderr", e.std_error},
          {"ci_low", e.ci_low},
          {"ci_high", e.ci_high},
          {"confidence", e.confidence_level},
          {"inequality", std::string(to_string(e.inequality_id))},
          {"state", e.state_label},
          {"mode", std::string(to_string(e.mode))},
          {"seed", e.seed},
          {"fix_a", e.fix_first_direction},
          {"rng", std::string(PhiloxStream::kRngName)}};
}

Fields volume_fields(const VolumeResult& r) {
  Fields f{{"method", std::string(to_string(r.method))},
           {"volume", r.volume},
           {"total", r.total},
           {"relative", r.relative}};
  for (const auto& [k, v] : r.diagnostics) f.emplace_back("diag_" + k, v);
  return f;
}

// Flags shared by mc and sweep.
struct McFlags {
  std::string inequality = "bell1";
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunk = std::uint64_t{1} << 16;
  bool fix_a = false;
  std::string chsh_mode = "fixed";
  double confidence = 0.99;
  std::optional<unsigned> threads;
  std::string format;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--inequality", inequality, "Bell functional")
        ->check(CLI::IsMember({"bell1", "chsh"}))
        ->capture_default_str();
    cmd.add_option("--samples", samples, "Number of sampled configurations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--seed", seed, "64-bit seed")->capture_default_str();
    cmd.add_option("--chunk", chunk, "Samples per substream chunk")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_flag("--fix-a", fix_a, "Pin a = (0,0,1); rotationally invariant states only");
    cmd.add_option("--chsh-mode", chsh_mode, "CHSH minus-sign placement")
        ->check(CLI::IsMember({"fixed", "max"}))
        ->capture_default_str();
    cmd.add_option("--confidence", confidence, "Wilson interval confidence level")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--threads", threads, "Worker threads (default: BELLVOL_THREADS or all cores)");
  }

  BellFunctional functional() const {
    return inequality == "chsh" ? BellFunctional::chsh() : BellFunctional::bell1964();
  }
  ChshMode mode() const { return chsh_mode == "max" ? ChshMode::max_over_sign_position : ChshMode::fixed; }
  SamplingPlan plan() const {
    if (!(confidence > 0 && confidence < 1)) throw UsageError("--confidence must lie in (0, 1)");
    SamplingPlan p;
    p.n_samples = samples;
    p.seed = seed;
    p.chunk_size = chunk;
    p.fix_first_direction = fix_a;
    p.confidence_level = confidence;
    return p;
  }
};

}  // namespace

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_g17(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volume of violation of Bell inequalities for two-qubit states", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  const auto add_format = [](CLI::App* cmd, std::string& target, const std::string& fallback) {
    target = fallback;
    cmd->add_option("--format", target, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
  };

  // analytic
  auto* analytic = app.add_subcommand("analytic", "Singlet Bell-1964 volume from the exact derivation");
  std::string method = "exact";
  double tol = 1e-10;
  std::size_t terms = 10000;
  std::string analytic_format;
  analytic->add_option("--method", method, "exact | quadrature | series")
      ->check(CLI::IsMember({"exact", "quadrature", "series"}))
      ->capture_default_str();
  analytic->add_option("--tol", tol, "Absolute tolerance for quadrature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analytic->add_option("--terms", terms, "Number of gamma-series terms")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_format(analytic, analytic_format, "text");

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the relative volume of violation");
  McFlags mc_flags;
  std::string state_spec = "singlet";
  mc_flags.add_to(*mc);
  mc->add_option("--state", state_spec, "singlet | werner:<p> | file:<path>")->capture_default_str();
  add_format(mc, mc_flags.format, "text");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Monte Carlo scan over a state family");
  McFlags sweep_flags;
  std::string family = "werner";
  double from = 0, to = 1;
  int steps = 11;
  sweep_flags.add_to(*sw);
  sw->add_option("--family", family, "State family")->check(CLI::IsMember({"werner"}))->capture_default_str();
  sw->add_option("--from", from, "First family parameter")->capture_default_str();
  sw->add_option("--to", to, "Last family parameter")->capture_default_str();
  sw->add_option("--steps", steps, "Number of grid points")->capture_default_str();
  add_format(sw, sweep_flags.format, "csv");

  // boundary
  auto* boundary = app.add_subcommand("boundary", "Tabulate the violation boundary y(x) and area A(z)");
  std::optional<double> z_single;
  std::optional<int> z_grid;
  int x_grid = 11;
  std::string boundary_format;
  auto* z_opt = boundary->add_option("--z", z_single, "Single z = cos^2(phi) in [0, 1]")
                    ->check(CLI::Range(0.0, 1.0));
  auto* zg_opt = boundary->add_option("--z-grid", z_grid, "Number of evenly spaced z in [0, 1]")
                     ->check(CLI::Range(2, 1'000'000));
  z_opt->excludes(zg_opt);
  boundary->add_option("--x-grid", x_grid, "Number of evenly spaced x in [-1, 1]")
      ->check(CLI::Range(2, 1'000'000))
      ->capture_default_str();
  add_format(boundary, boundary_format, "csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (analytic->parsed()) {
      Record rec{"analytic", {{"method", method}}, {}};
      VolumeResult result;
      if (method == "exact") {
        result = exact_volume();
      } else if (method == "quadrature") {
        rec.parameters.emplace_back("tol", tol);
        result = volume_quadrature(tol);
      } else {
        rec.parameters.emplace_back("terms", static_cast<std::uint64_t>(terms));
        result.volume = volume_series_partial(terms);
        result.total = bell1964_total_volume();
        result.relative = result.volume / result.total;
        result.method = VolumeMethod::series;
        result.diagnostics["terms"] = static_cast<double>(terms);
        result.diagnostics["gap_to_exact"] = exact_volume().volume - result.volume;
      }
      rec.results = volume_fields(result);
      emit(rec, parse_format(analytic_format), out);
      return kOk;
    }

    if (mc->parsed()) {
      const TwoQubitState state = parse_state(state_spec);
      const SamplingPlan plan = mc_flags.plan();
      const ExecutionOptions exec{resolve_threads(mc_flags.threads)};
      const auto est = estimate_volume(state, mc_flags.functional(), plan, mc_flags.mode(), exec);
      Record rec{"mc",
                 {{"inequality", mc_flags.inequality},
                  {"state", state_spec},
                  {"samples", mc_flags.samples},
                  {"seed", mc_flags.seed},
                  {"chunk", mc_flags.chunk},
                  {"fix_a", mc_flags.fix_a},
                  {"chsh_mode", mc_flags.chsh_mode},
                  {"confidence", mc_flags.confidence}},
                 estimate_fields(est)};
      emit(rec, parse_format(mc_flags.format), out);
      return kOk;
    }

    if (sw->parsed()) {
      if (steps < 1) throw UsageError("--steps must be >= 1");
      if (from > to) throw UsageError("--from must not exceed --to");
      if (steps == 1 && from != to) throw UsageError("a single step needs --from equal to --to");
      std::vector<double> grid;
      std::vector<TwoQubitState> states;
      for (int k = 0; k < steps; ++k) {
        const double p = steps == 1 ? from : from + (to - from) * k / (steps - 1);
        grid.push_back(p);
        states.push_back(werner(p));
      }
      const ExecutionOptions exec{resolve_threads(sweep_flags.threads)};
      const auto rows = sweep(states, sweep_flags.functional(), sweep_flags.plan(), sweep_flags.mode(), exec);
      if (parse_format(sweep_flags.format) == Format::json) {
        ordered_json j;
        j["command"] = "sweep";
        j["parameters"] = {{"inequality", sweep_flags.inequality}, {"family", family},
                           {"from", from}, {"to", to}, {"steps", steps},
                           {"samples", sweep_flags.samples}, {"seed", sweep_flags.seed},
                           {"chunk", sweep_flags.chunk}, {"fix_a", sweep_flags.fix_a},
                           {"chsh_mode", sweep_flags.chsh_mode}, {"confidence", sweep_flags.confidence}};
        ordered_json list = ordered_json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
          ordered_json row = {{"p", grid[i]}};
          for (const auto& [k, v] : estimate_fields(rows[i])) row[k] = to_json(v);
          list.push_back(row);
        }
        j["results"] = {{"rows", list}};
        j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
        j["timestamp"] = timestamp_utc();
        out << j.dump() << '\n';
      } else {
        out << "p,fraction,stderr,ci_low,ci_high,n\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
          out << format_g17(grid[i]) << ',' << format_g17(rows[i].fraction) << ','
              << format_g17(rows[i].std_error) << ',' << format_g17(rows[i].ci_low) << ','
              << format_g17(rows[i].ci_high) << ',' << rows[i].n_samples << '\n';
        }
      }
      return kOk;
    }

    if (boundary->parsed()) {
      if (!z_single && !z_grid) throw UsageError("boundary needs --z or --z-grid");
      std::vector<double> zs;
      if (z_single) {
        zs.push_back(*z_single);
      } else {
        for (int k = 0; k < *z_grid; ++k) zs.push_back(static_cast<double>(k) / (*z_grid - 1));
      }
      const bool as_json = parse_format(boundary_format) == Format::json;
      ordered_json list = ordered_json::array();
      if (!as_json) out << "z,x,y_boundary,area\n";
      for (double z : zs) {
        const double a = area(z);
        for (int i = 0; i < x_grid; ++i) {
          const double x = i == x_grid - 1 ? 1.0 : -1.0 + 2.0 * i / (x_grid - 1);
          // At z = 0 the whole curve is y = 1; keep that limit at the 0/0 corner x = -1.
          const double y = (z == 0) ? 1.0 : y_boundary(x, z);
          if (as_json) {
            list.push_back({{"z", z}, {"x", x}, {"y_boundary", y}, {"area", a}});
          } else {
            out << format_g17(z) << ',' << format_g17(x) << ',' << format_g17(y) << ','
                << format_g17(a) << '\n';
          }
        }
      }
      if (as_json) {
        ordered_json j;
        j["command"] = "boundary";
        j["parameters"] = {{"x_grid", x_grid}};
        if (z_single) j["parameters"]["z"] = *z_single;
        else j["parameters"]["z_grid"] = *z_grid;
        j["results"] = {{"rows", list}};
        j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
        j["timestamp"] = timestamp_utc();
        out << j.dump() << '\n';
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace bellvol::cli
