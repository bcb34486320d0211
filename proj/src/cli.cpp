#include "sunlayer/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <variant>

#include "sunlayer/analysis.hpp"
#include "sunlayer/denoise.hpp"
#include "sunlayer/error.hpp"
#include "sunlayer/frames.hpp"
#include "sunlayer/quadrature.hpp"

namespace sunlayer::cli {
namespace {

using Cell = std::variant<std::monostate, std::string, long long, double, bool>;

struct RowTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else {
          return v ? "true" : "false";
        }
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const RowTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
    os << '\n';
  }
}

void write_json(std::ostream& os, const RowTable& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& key = table.columns[i];
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              obj[key] = nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
              // Round through the 9-digit text form so both encodings agree.
              obj[key] = std::isfinite(v) ? nlohmann::ordered_json(std::stod(format_number(v)))
                                          : nlohmann::ordered_json(nullptr);
            } else {
              obj[key] = v;
            }
          },
          row[i]);
    }
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << '\n';
}

struct Config {
  std::vector<std::string> acts;
  std::vector<int> dims;
  std::optional<int> max_degree;
  std::optional<int> nodes;
  std::optional<int> grid;
  std::uint64_t seed = 0;
  std::optional<int> trials;
  std::vector<double> noise_grid;
  std::vector<std::string> designs;
  std::string out = "-";
  std::string format = "csv";
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw PreconditionError(msg);
}

void validate(const Config& cfg) {
  for (const auto& a : cfg.acts) find_activation(a);
  for (int n : cfg.dims) require(n >= 1, "--n values must be >= 1 (got " + std::to_string(n) + ")");
  if (cfg.max_degree) require(*cfg.max_degree >= 0, "--K must be >= 0");
  if (cfg.nodes) {
    const int k = cfg.max_degree.value_or(0);
    require(*cfg.nodes >= 2 * k + 8, "--Q must be >= 2K+8");
  }
  if (cfg.grid) require(*cfg.grid >= 2, "--grid must be >= 2");
  if (cfg.trials) require(*cfg.trials >= 1, "--trials must be >= 1");
  for (double v : cfg.noise_grid) require(v >= 0.0 && std::isfinite(v), "--noise-grid values must be >= 0");
  require(cfg.format == "csv" || cfg.format == "json", "--format must be csv or json");
}

std::vector<std::string> ids_or(const Config& cfg, std::span<const std::string_view> fallback) {
  if (!cfg.acts.empty()) return cfg.acts;
  return {fallback.begin(), fallback.end()};
}

std::vector<int> dims_or(const Config& cfg, std::vector<int> fallback) {
  return cfg.dims.empty() ? fallback : cfg.dims;
}

int node_count(const Config& cfg, int max_degree) {
  return cfg.nodes.value_or(default_node_count(max_degree));
}

RowTable cmd_table(const Config& cfg, std::ostream& err) {
  TableOptions opts;
  opts.max_degree = cfg.max_degree.value_or(10);
  opts.node_count = node_count(cfg, opts.max_degree);
  if (cfg.grid) {
    require(*cfg.grid >= 1000, "table: --grid must be >= 1000");
    opts.grid_size = *cfg.grid;
  }
  const auto acts = ids_or(cfg, table_activation_ids());
  const auto dims = dims_or(cfg, {2, 10});
  RowTable table{{"activation", "n", "K", "T_empirical", "T_certified", "g_at_1", "ratio"}, {}};
  for (const auto& row : table_report(acts, dims, opts)) {
    if (!row.T_certified)
      err << "warning: " << row.act << " is not C^4; no certified bound for n=" << row.n << '\n';
    if (row.vacuous)
      err << "warning: g' changes sign for " << row.act << " n=" << row.n
          << "; denoising guarantee vacuous\n";
    table.rows.push_back({row.act, static_cast<long long>(row.n), static_cast<long long>(row.max_degree),
                          row.T_empirical,
                          row.T_certified ? Cell(*row.T_certified) : Cell(std::monostate{}),
                          row.g_at_1, row.ratio});
  }
  return table;
}

RowTable cmd_decompose(const Config& cfg) {
  const int K = cfg.max_degree.value_or(10);
  RowTable table{{"activation", "n", "k", "a_k", "residual"}, {}};
  for (const auto& id : ids_or(cfg, activation_ids())) {
    for (int n : dims_or(cfg, {2, 10})) {
      const Decomposition dec = decompose(find_activation(id), n, K, node_count(cfg, K));
      for (int k = 0; k <= K; ++k)
        table.rows.push_back({id, static_cast<long long>(n), static_cast<long long>(k), dec.coeffs[k],
                              dec.residual});
    }
  }
  return table;
}

RowTable cmd_plot_data(const Config& cfg) {
  const int K = cfg.max_degree.value_or(30);
  const int grid = cfg.grid.value_or(401);
  RowTable table{{"activation", "n", "t", "theta", "approx", "g", "gprime"}, {}};
  for (const auto& id : ids_or(cfg, activation_ids())) {
    for (int n : dims_or(cfg, {2, 10})) {
      const PlotData d = plot_data(find_activation(id), n, K, grid, node_count(cfg, K));
      for (std::size_t i = 0; i < d.t.size(); ++i)
        table.rows.push_back({id, static_cast<long long>(n), d.t[i], d.theta[i], d.approx[i], d.g[i],
                              d.gprime[i]});
    }
  }
  return table;
}

DesignSet design_by_name(const std::string& name) {
  if (name.rfind("circle", 0) == 0) {
    int count = 0;
    const char* first = name.data() + 6;
    const char* last = name.data() + name.size();
    auto res = std::from_chars(first, last, count);
    require(res.ec == std::errc() && res.ptr == last && count >= 1, "bad circle design '" + name + "'");
    return design_circle(count);
  }
  if (name.rfind("file:", 0) == 0) {
    std::ifstream in(name.substr(5));
    require(static_cast<bool>(in), "cannot open design file " + name.substr(5));
    return read_design(in, name);
  }
  return design_registry(name);
}

RowTable cmd_frame_check(const Config& cfg) {
  std::vector<std::string> names = cfg.designs;
  if (names.empty()) {
    names = {"circle4", "circle8", "circle16"};
    for (auto n : design_registry_names()) names.emplace_back(n);
  }
  RowTable table{{"design", "k", "residual", "frame_constant", "pass"}, {}};
  for (const auto& name : names) {
    const DesignSet d = design_by_name(name);
    const int kmax = cfg.max_degree ? std::min(*cfg.max_degree, d.exactness_degree / 2)
                                    : d.exactness_degree / 2;
    for (int k = 0; k <= kmax; ++k) {
      const FrameReport r = tight_frame_residual(d, k);
      table.rows.push_back({d.name, static_cast<long long>(k), r.residual, r.frame_constant, r.tight});
    }
  }
  return table;
}

RowTable cmd_verify_theorem(const Config& cfg, bool& all_passed) {
  TheoremSuiteOptions suite;
  if (!cfg.acts.empty()) suite.acts = cfg.acts;
  if (!cfg.dims.empty()) suite.dims = cfg.dims;
  suite.max_degree = cfg.max_degree.value_or(10);
  require(suite.max_degree >= 1, "verify-theorem: --K must be >= 1");
  for (const auto& a : suite.acts)
    require(find_activation(a).is_smooth(), "verify-theorem: " + a + " is not smooth");
  const int instances = cfg.trials.value_or(50);
  RowTable table{{"instance", "activation", "n", "T", "eps_bound", "eps_exact_sup", "guaranteed_corr",
                  "min_found_corr", "pass"},
                 {}};
  all_passed = true;
  for (int i = 0; i < instances; ++i) {
    const TheoremInstance inst = random_theorem_instance(suite, cfg.seed, i);
    TheoremOptions opts;
    opts.seed = cfg.seed + static_cast<std::uint64_t>(i);
    const TheoremReport r = verify_theorem(inst.objective, inst.T, opts);
    all_passed = all_passed && r.passed;
    table.rows.push_back({static_cast<long long>(i), inst.act, static_cast<long long>(inst.n), r.T,
                          r.eps_bound, r.eps_exact_sup, r.guaranteed_correlation,
                          r.min_found_correlation, r.passed});
  }
  return table;
}

RowTable cmd_synthetic(const Config& cfg) {
  SyntheticConfig sc;
  if (!cfg.acts.empty()) sc.acts = cfg.acts;
  if (!cfg.dims.empty()) sc.n = cfg.dims.front();
  if (cfg.trials) sc.trials = *cfg.trials;
  if (!cfg.noise_grid.empty()) sc.noise_levels = cfg.noise_grid;
  sc.seed = cfg.seed;
  RowTable table{{"act", "noise_level", "mean_dist", "std_dist", "mean_corr", "std_corr"}, {}};
  for (const auto& row : synthetic_experiment(sc).rows)
    table.rows.push_back({row.act, row.noise_level, row.mean_dist, row.std_dist, row.mean_corr, row.std_corr});
  return table;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spherical-harmonic analysis of activation functions for generative denoising"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");

  Config cfg;
  app.add_option("--acts", cfg.acts, "activation ids")->delimiter(',');
  app.add_option("--n", cfg.dims, "sphere dimensions")->delimiter(',');
  app.add_option("--K", cfg.max_degree, "truncation degree");
  app.add_option("--Q", cfg.nodes, "quadrature node count");
  app.add_option("--grid", cfg.grid, "grid size");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--trials", cfg.trials, "trials / instances");
  app.add_option("--noise-grid", cfg.noise_grid, "noise levels")->delimiter(',');
  app.add_option("--designs", cfg.designs, "designs for frame-check")->delimiter(',');
  app.add_option("--out", cfg.out, "output path ('-' for stdout)");
  app.add_option("--format", cfg.format, "csv or json");

  const std::vector<std::string> commands = {"table", "decompose", "plot-data", "frame-check",
                                             "verify-theorem", "synthetic"};
  for (const auto& c : commands) app.add_subcommand(c)->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    validate(cfg);
    RowTable table;
    bool passed = true;
    if (command == "table") {
      table = cmd_table(cfg, err);
    } else if (command == "decompose") {
      table = cmd_decompose(cfg);
    } else if (command == "plot-data") {
      table = cmd_plot_data(cfg);
    } else if (command == "frame-check") {
      table = cmd_frame_check(cfg);
    } else if (command == "verify-theorem") {
      table = cmd_verify_theorem(cfg, passed);
    } else {
      table = cmd_synthetic(cfg);
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (cfg.out != "-") {
      file.open(cfg.out, std::ios::binary);
      if (!file) {
        err << "error: cannot open " << cfg.out << " for writing\n";
        return kUsageError;
      }
      sink = &file;
    }
    if (cfg.format == "json") {
      write_json(*sink, table);
    } else {
      write_csv(*sink, table);
    }
    if (!passed) {
      err << "error: theorem verification found violations\n";
      return kNumericalFailure;
    }
    return kSuccess;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace sunlayer::cli
