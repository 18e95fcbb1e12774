#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ultra/combinatorics.hpp"
#include "ultra/decider.hpp"
#include "ultra/io.hpp"
#include "ultra/numtheory.hpp"

namespace {

int default_threads() {
  if (const char* env = std::getenv("ULTRARIGID_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

ultra::Model pick_model(const std::string& flag,
                        const std::optional<ultra::Model>& from_file) {
  if (flag == "flexible") return ultra::Model::FlexibleLattice;
  if (flag == "fixed-lattice") return ultra::Model::FixedLattice;
  if (flag == "fixed-volume") return ultra::Model::FixedVolume;
  if (flag.empty() && from_file) return *from_file;
  throw ultra::ParseError(
      "no model given: pass --model or set \"model\" in the input file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact ultrarigidity decisions for d-periodic frameworks"};
  app.require_subcommand(1);

  // decide
  std::string decide_path, decide_model;
  std::uint64_t decide_seed = 0;
  int decide_threads = default_threads();
  std::string decide_max_bound = "1000000";
  bool decide_unreduced = false, decide_no_modp = false;
  std::string decide_scan_limit;
  auto* cmd_decide =
      app.add_subcommand("decide", "Decide infinitesimal ultrarigidity");
  cmd_decide->add_option("path", decide_path, "framework file")->required();
  cmd_decide->add_option("--model", decide_model,
                         "flexible | fixed-lattice | fixed-volume");
  cmd_decide->add_option("--max-bound", decide_max_bound,
                         "abort when N0 exceeds this ceiling");
  cmd_decide->add_option("--threads", decide_threads, "scan worker count");
  cmd_decide->add_option("--seed", decide_seed, "seed for mod-p primes");
  cmd_decide->add_flag("--unreduced", decide_unreduced,
                       "disable the Galois divisor restriction");
  cmd_decide->add_flag("--no-modp", decide_no_modp,
                       "exact ranks at every point (slow)");
  cmd_decide->add_option("--scan-limit", decide_scan_limit,
                         "truncate the scan (testing only)");

  // rum
  std::string rum_path, rum_out;
  std::uint64_t rum_max_order = 1;
  std::uint64_t rum_seed = 0;
  auto* cmd_rum =
      app.add_subcommand("rum", "Rational RUM spectrum up to an order");
  cmd_rum->add_option("path", rum_path, "framework file")->required();
  cmd_rum->add_option("--max-order", rum_max_order, "largest torsion order")
      ->required();
  cmd_rum->add_option("--out", rum_out, "write the table here (else stdout)");
  cmd_rum->add_option("--seed", rum_seed, "seed for mod-p primes");

  // comb
  std::string comb_path, comb_theorem;
  std::uint64_t comb_seed = 1;
  int comb_threads = default_threads();
  auto* cmd_comb = app.add_subcommand(
      "comb", "Combinatorial characterization checkers (d = 2)");
  cmd_comb->add_option("path", comb_path, "framework file")->required();
  cmd_comb->add_option("--theorem", comb_theorem, "flexible | fixed")
      ->required();
  cmd_comb->add_option("--seed", comb_seed, "seed for rank certificates");
  cmd_comb->add_option("--threads", comb_threads, "epimorphism loop workers");

  // bound
  int bound_dim = 2;
  std::string bound_weight = "0";
  auto* cmd_bound =
      app.add_subcommand("bound", "Print C_d, C_hat and N0 for a weight");
  cmd_bound->add_option("--dim", bound_dim, "dimension d >= 2")->required();
  cmd_bound->add_option("--weight", bound_weight, "total color weight D")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_decide->parsed()) {
      ultra::FrameworkFile file = ultra::load_framework(decide_path);
      ultra::Model model = pick_model(decide_model, file.model);
      ultra::DecideOptions opts;
      opts.seed = decide_seed;
      opts.threads = decide_threads;
      opts.bound_ceiling = ultra::Int(decide_max_bound);
      opts.galois_reduced = !decide_unreduced;
      opts.use_modp = !decide_no_modp;
      if (!decide_scan_limit.empty())
        opts.scan_limit = ultra::Int(decide_scan_limit);
      auto t0 = std::chrono::steady_clock::now();
      ultra::Verdict verdict = ultra::decide(file.framework, model, opts);
      std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      std::cout << ultra::decide_report(file.framework, model, verdict, opts);
      std::cerr << "verdict: " << ultra::verdict_name(verdict.kind)
                << "  (wall " << dt.count() << " s)\n";
      return verdict.kind == ultra::VerdictKind::Ultrarigid ? 0 : 1;
    }
    if (cmd_rum->parsed()) {
      ultra::FrameworkFile file = ultra::load_framework(rum_path);
      ultra::DecideOptions opts;
      opts.seed = rum_seed;
      auto spectrum =
          ultra::rum_rational_spectrum(file.framework, rum_max_order, opts);
      std::string table = ultra::rum_table(spectrum, file.framework.graph.d);
      if (rum_out.empty()) {
        std::cout << table;
      } else {
        std::ofstream out(rum_out);
        if (!out) throw ultra::ParseError("cannot write '" + rum_out + "'");
        out << table;
      }
      return 0;
    }
    if (cmd_comb->parsed()) {
      ultra::FrameworkFile file = ultra::load_framework(comb_path);
      ultra::CombOptions opts;
      opts.seed = comb_seed;
      opts.threads = comb_threads;
      ultra::CombResult res;
      if (comb_theorem == "flexible")
        res = ultra::check_thm_flexible(file.framework.graph, opts);
      else if (comb_theorem == "fixed")
        res = ultra::check_thm_fixed(file.framework.graph, opts);
      else
        throw ultra::ParseError("--theorem must be 'flexible' or 'fixed'");
      std::cout << "{\n  \"theorem\": \"" << comb_theorem << "\",\n"
                << "  \"holds\": " << (res.holds ? "true" : "false") << ",\n"
                << "  \"certificate_type\": \"" << res.certificate_type
                << "\"";
      if (res.certificate) {
        std::cout << ",\n  \"reason\": \"" << res.certificate->reason << "\"";
        if (res.certificate->epimorphism) {
          auto [N, ab] = *res.certificate->epimorphism;
          std::cout << ",\n  \"epimorphism\": {\"N\": " << N << ", \"psi\": ["
                    << ab.first << ", " << ab.second << "]}";
        }
        if (!res.certificate->edges.empty()) {
          std::cout << ",\n  \"edges\": [";
          for (std::size_t i = 0; i < res.certificate->edges.size(); ++i)
            std::cout << (i ? ", " : "") << res.certificate->edges[i];
          std::cout << "]";
        }
        if (res.certificate->edge_pair) {
          std::cout << ",\n  \"pair\": [" << res.certificate->edge_pair->first
                    << ", " << res.certificate->edge_pair->second << "]";
        }
      }
      std::cout << "\n}\n";
      return res.holds ? 0 : 1;
    }
    if (cmd_bound->parsed()) {
      ultra::Int D(bound_weight);
      ultra::Bound b = ultra::bound_N0(bound_dim, D);
      ultra::Rat cd = ultra::constant_Cd(bound_dim);
      std::cout << "C_" << bound_dim << "  = " << ultra::rat_to_decimal(cd, 50)
                << "  (upper bound, rounded up)\n";
      std::cout << "C_hat = " << ultra::rat_to_decimal(b.C_hat, 50)
                << "  (C_d * D, rounded up)\n";
      std::cout << "N0    = " << b.N0.get_str()
                << "  (max of the floor and ceil((C_hat ln C_hat)^d))\n";
      if (b.N0 > ultra::Int(1000000))
        std::cout << "note: N0 exceeds the default scan ceiling (10^6); "
                     "decide would abort\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
