#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "latsim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lattice decoding and MIMO space-time simulation toolkit"};
  app.set_config("--config", "", "Read options from a config file (flags override)");

  latsim::ExperimentConfig cfg;
  app.add_option("--command", cfg.command,
                 "short-vector-scaling | ser-sweep | dmt-curves | primitive-count")
      ->required();
  app.add_option("--m", cfg.m, "Transmit antennas M");
  app.add_option("--n", cfg.n, "Receive antennas N");
  app.add_option("--t", cfg.t, "Channel uses per block T");
  app.add_option("--code", cfg.code, "Code id: vblast | golden");
  app.add_option("--qam", cfg.qam, "QAM order (4, 16, 64)");
  app.add_option("--decoders", cfg.decoders, "Decoder ids: ml, nld, lll")->delimiter(',');
  app.add_option("--snr-db", cfg.snr_db, "SNR points in dB")->delimiter(',');
  app.add_option("--eps", cfg.eps_list, "Epsilon values for short-vector scaling")->delimiter(',');
  app.add_option("--r-grid", cfg.r_grid, "Multiplexing-gain grid for dmt-curves")->delimiter(',');
  app.add_option("--kmax", cfg.k_max, "Largest shell index for primitive-count");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials (per point)");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = hardware)");
  app.add_option("--out", cfg.out_path, "Output path (default: stdout)");
  app.add_option("--format", cfg.format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string output = latsim::run_command(cfg);
    if (cfg.out_path.empty()) {
      std::cout << output;
    } else {
      std::ofstream out(cfg.out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot open output file '" << cfg.out_path << "'\n";
        return 2;
      }
      out << output;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return latsim::exit_code_for_current_exception();
  }
}
