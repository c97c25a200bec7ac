#include "latsim/cli.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "latsim/analysis.hpp"
#include "latsim/errors.hpp"

namespace latsim {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip decimal representation.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Footer lines; each is a list of cells emitted as "# a,b,c" in CSV and
  // mirrored under "footer" in JSON.
  std::vector<std::vector<std::string>> footer;
};

std::string render(const ResultTable& table, const std::string& command,
                   const std::string& format) {
  if (format == "csv") {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
    for (const auto& f : table.footer) {
      out << "#";
      for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : " ") << f[i];
      out << "\n";
    }
    return out.str();
  }
  if (format == "json") {
    ordered_json j;
    j["command"] = command;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    j["footer"] = table.footer;
    return j.dump(2) + "\n";
  }
  throw ConfigError("format must be 'csv' or 'json', got '" + format + "'");
}

void validate_common(const ExperimentConfig& c) {
  if (c.m < 1) throw ConfigError("--m must be >= 1");
  if (c.n < c.m) throw ConfigError("--n must be >= --m (the modeled regime is M <= N)");
  if (c.t < 1) throw ConfigError("--t must be >= 1");
  if (c.trials < 1) throw ConfigError("--trials must be >= 1");
  if (c.format != "csv" && c.format != "json")
    throw ConfigError("--format must be 'csv' or 'json'");
}

SpaceTimeCode make_code(const ExperimentConfig& c, double power) {
  if (c.code == "vblast") return vblast_code(c.m, c.t, c.qam, power);
  if (c.code == "golden") {
    if (c.m != 2 || c.t != 2)
      throw ConfigError("--code golden requires --m 2 --t 2");
    return golden_code(c.qam, power);
  }
  throw ConfigError("unknown code id '" + c.code + "' (valid: vblast, golden)");
}

McPolicy policy_for(const ExperimentConfig& c) {
  McPolicy p;
  p.threads = c.threads;
  return p;
}

ResultTable cmd_short_vector_scaling(const ExperimentConfig& c) {
  if (c.eps_list.empty()) throw ConfigError("--eps: epsilon list must not be empty");

  // Unit-volume code lattice: Z[i]^(MT) for vblast, the Golden generator
  // otherwise (power scaling plays no role here).
  const SpaceTimeCode code = make_code(c, 1.0);
  const LatticeBasis lattice(code.generator());

  std::cerr << "short-vector-scaling: " << c.eps_list.size() << " epsilon points, " << c.trials
            << " trials\n";
  const auto ests = estimate_short_vector_probs(c.m, c.n, c.t, lattice, c.eps_list, c.trials,
                                                c.seed, policy_for(c));

  ResultTable table;
  table.columns = {"epsilon", "prob", "ci_low", "ci_high", "trials"};
  std::vector<std::pair<double, double>> fit_pts;
  for (std::size_t i = 0; i < ests.size(); ++i) {
    const auto& e = ests[i];
    table.rows.push_back({fmt(c.eps_list[i]), fmt(e.value), fmt(e.ci_low), fmt(e.ci_high),
                          fmt(e.trials)});
    if (e.successes > 0 && !e.starved) fit_pts.emplace_back(c.eps_list[i], e.value);
  }
  if (fit_pts.size() >= 3) {
    const SlopeFit fit = fit_loglog_slope(fit_pts);
    table.footer.push_back({"slope", fmt(fit.slope)});
    table.footer.push_back({"residual", fmt(fit.residual)});
  } else {
    table.footer.push_back({"slope", "insufficient-data"});
    table.footer.push_back({"residual", "insufficient-data"});
  }
  table.footer.push_back({"ref_exponent_full", fmt(static_cast<double>(2 * c.m * (c.n - c.m + 1)))});
  table.footer.push_back({"ref_exponent_ball", fmt(static_cast<double>(2 * c.m))});
  return table;
}

ResultTable cmd_ser_sweep(const ExperimentConfig& c) {
  if (c.snr_db.empty()) throw ConfigError("--snr-db: SNR list must not be empty");
  if (c.decoders.empty()) throw ConfigError("--decoders: decoder list must not be empty");
  std::vector<DecoderId> ids;
  for (const auto& name : c.decoders) {
    try {
      ids.push_back(decoder_from_name(name));
    } catch (const InvalidArgumentError& e) {
      throw ConfigError(e.what());
    }
  }

  const SpaceTimeCode code = make_code(c, 1.0);
  std::cerr << "ser-sweep: " << c.snr_db.size() << " SNR points x " << ids.size()
            << " decoders, " << c.trials << " trials per point\n";
  const auto curves =
      estimate_ser_multi(code, c.n, ids, c.snr_db, c.trials, c.seed, policy_for(c));

  ResultTable table;
  table.columns = {"snr_db", "decoder", "ser", "ci_low", "ci_high", "trials"};
  for (std::size_t p = 0; p < c.snr_db.size(); ++p) {
    for (std::size_t d = 0; d < curves.size(); ++d) {
      const auto& e = curves[d].est[p];
      table.rows.push_back({fmt(c.snr_db[p]), decoder_name(curves[d].decoder), fmt(e.value),
                            fmt(e.ci_low), fmt(e.ci_high), fmt(e.trials)});
    }
  }
  for (const auto& curve : curves) {
    try {
      const SlopeFit fit = diversity_slope(curve.snr, curve.est);
      table.footer.push_back(
          {"slope", decoder_name(curve.decoder), fmt(fit.slope), fmt(fit.residual)});
    } catch (const InsufficientDataError&) {
      table.footer.push_back(
          {"slope", decoder_name(curve.decoder), "insufficient-data", "insufficient-data"});
    }
  }
  return table;
}

ResultTable cmd_dmt_curves(const ExperimentConfig& c) {
  std::vector<double> grid = c.r_grid;
  if (grid.empty())
    for (int i = 0; i <= 10 * c.m; ++i) grid.push_back(0.1 * i);

  const auto optimal = dmt_reference(c.m, c.n, DmtKind::optimal, grid);
  const auto nld = dmt_reference(c.m, c.n, DmtKind::nld_bound, grid);
  const auto vblast = dmt_reference(c.m, c.n, DmtKind::vblast, grid);

  ResultTable table;
  table.columns = {"r", "optimal", "nld_bound", "vblast"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.rows.push_back({fmt(grid[i]), fmt(optimal.points[i].second),
                          fmt(nld.points[i].second), fmt(vblast.points[i].second)});
  }
  return table;
}

ResultTable cmd_primitive_count(const ExperimentConfig& c) {
  if (c.k_max < 1) throw ConfigError("--kmax must be >= 1");
  const int dim = 2 * c.m;

  ResultTable table;
  table.columns = {"k", "count", "bound", "pass"};
  for (int k = 1; k <= c.k_max; ++k) {
    const std::uint64_t count = count_primitive_vectors(dim, k);
    const std::uint64_t bound = 1ull << (2 * k * c.m);
    std::string pass = "na";  // the 2^(2kM) bound is only claimed for M >= 2
    if (c.m >= 2) pass = count >= bound ? "true" : "false";
    table.rows.push_back({fmt(static_cast<std::uint64_t>(k)), fmt(count), fmt(bound), pass});
  }
  return table;
}

}  // namespace

std::string run_command(const ExperimentConfig& config) {
  validate_common(config);
  ResultTable table;
  if (config.command == "short-vector-scaling")
    table = cmd_short_vector_scaling(config);
  else if (config.command == "ser-sweep")
    table = cmd_ser_sweep(config);
  else if (config.command == "dmt-curves")
    table = cmd_dmt_curves(config);
  else if (config.command == "primitive-count")
    table = cmd_primitive_count(config);
  else
    throw ConfigError("unknown command '" + config.command +
                      "' (valid: short-vector-scaling, ser-sweep, dmt-curves, primitive-count)");
  return render(table, config.command, config.format);
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError&) {
    return 2;
  } catch (const InvalidArgumentError&) {
    return 2;
  } catch (const BudgetExceededError&) {
    return 3;
  } catch (...) {
    return 1;
  }
}

}  // namespace latsim
