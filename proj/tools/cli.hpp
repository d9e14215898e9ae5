#pragma once

// Command-line front end. dispatch() is kept separate from main() so the
// tests can drive it with in-memory streams.
//
// Exit status: 0 success, 1 domain or parse error, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "revdyn/revdyn.hpp"

namespace revdyn::cli {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("file not found: '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Configuration parse_config(const std::string& s) {
  const auto parts = text::split(s, ',');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
    throw DomainError("expected <state>,<symbol>, got '" + s + "'");
  return {parts[0], parts[1]};
}

inline std::vector<double> parse_doubles(const std::string& s, std::size_t expected) {
  std::vector<double> out;
  for (const auto& p : text::split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DomainError("not a number: '" + p + "'");
    }
  }
  if (expected && out.size() != expected)
    throw DomainError("expected " + std::to_string(expected) + " comma-separated values in '" +
                      s + "'");
  return out;
}

inline std::string join(const std::vector<std::string>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? sep : "") + v[k];
  return out;
}

inline std::string format_set(const Automaton& a, const CandidateSet& c) {
  std::string out = "{";
  for (std::size_t k = 0; k < c.size(); ++k) out += (k ? " " : "") + to_string(a.input_config(c[k]));
  return out + "}";
}

inline void print_trajectory(std::ostream& out, const Trajectory& t) {
  out << std::setw(6) << "step" << std::setw(12) << "state" << std::setw(12) << "symbol" << '\n';
  for (std::size_t k = 0; k < t.steps.size(); ++k)
    out << std::setw(6) << k << std::setw(12) << t.steps[k].state << std::setw(12)
        << t.steps[k].symbol << '\n';
}

}  // namespace detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;

  CLI::App app{"Reversible automata, coarse-grained observers and information accounting",
               "revdyn"};
  app.require_subcommand(1);

  std::string aut_path, ifc_path, file_path, start, question, obs, dist, sphere, patches,
      density, state, agent, inputs;
  std::size_t steps = 0, ticks = 1, horizon = 0;
  bool undo = false, matrix = false, cycles = false;
  std::uint32_t k = 0;
  std::uint64_t trials = 0, seed = 0;

  auto* validate_cmd = app.add_subcommand("validate", "Parse an automaton and check reversibility");
  validate_cmd->add_option("automaton", aut_path)->required();

  auto* run_cmd = app.add_subcommand("run", "Run an automaton");
  run_cmd->add_option("automaton", aut_path)->required();
  run_cmd->add_option("--start", start, "<state>,<symbol> (or <state> with --inputs)")->required();
  auto* steps_opt = run_cmd->add_option("--steps", steps, "closed-loop step count");
  auto* inputs_opt = run_cmd->add_option("--inputs", inputs, "open-loop input stream a,b,c");
  steps_opt->excludes(inputs_opt);
  run_cmd->add_flag("--undo", undo, "run the inverse machine back to the start");

  auto* perm_cmd = app.add_subcommand("perm", "Combined map as a permutation");
  perm_cmd->add_option("automaton", aut_path)->required();
  auto* matrix_flag = perm_cmd->add_flag("--matrix", matrix, "print the 0/1 matrix");
  perm_cmd->add_flag("--cycles", cycles, "print the cycle decomposition")->excludes(matrix_flag);

  auto* coarse_cmd = app.add_subcommand("coarse", "Macro sequence seen through an interface");
  coarse_cmd->add_option("automaton", aut_path)->required();
  coarse_cmd->add_option("interface", ifc_path)->required();
  coarse_cmd->add_option("--question", question)->required();
  coarse_cmd->add_option("--start", start)->required();
  coarse_cmd->add_option("--steps", steps)->required();

  auto* estimate_cmd = app.add_subcommand("estimate", "Filter micro candidates from observations");
  estimate_cmd->add_option("automaton", aut_path)->required();
  estimate_cmd->add_option("interface", ifc_path)->required();
  estimate_cmd->add_option("--question", question)->required();
  auto* obs_opt = estimate_cmd->add_option("--obs", obs, "observed answers a,b,c");
  auto* horizon_opt =
      estimate_cmd->add_option("--horizon", horizon, "reconstructibility over all starts");
  obs_opt->excludes(horizon_opt);

  auto* entropy_cmd = app.add_subcommand("entropy", "Shannon entropy of a distribution");
  entropy_cmd->add_option("--dist", dist, "p1,p2,...")->required();

  auto* flux_cmd = app.add_subcommand("flux", "Information flow");
  auto* sphere_opt = flux_cmd->add_option("--sphere", sphere, "x,c,i");
  auto* patches_opt = flux_cmd->add_option("--patches", patches, "patch document");
  auto* density_opt = flux_cmd->add_option("--density", density, "N,v,i");
  sphere_opt->excludes(patches_opt)->excludes(density_opt);
  patches_opt->excludes(density_opt);
  flux_cmd->require_option(1);

  auto* lattice_cmd = app.add_subcommand("lattice", "Run a lattice flow and audit continuity");
  lattice_cmd->add_option("lattice", file_path)->required();
  lattice_cmd->add_option("--ticks", ticks);

  auto* eraser_cmd = app.add_subcommand("eraser", "Measure, then undo the measurement");
  eraser_cmd->add_option("--k", k)->required();
  eraser_cmd->add_option("--state", state, "object,register")->required();
  eraser_cmd->add_option("--seed", seed);

  auto* transcend_cmd = app.add_subcommand("transcend", "Four-step recall protocol");
  transcend_cmd->add_option("--k", k)->required();
  transcend_cmd->add_option("--agent", agent, "immanent|transcendent")->required();
  transcend_cmd->add_option("--trials", trials)->required();
  transcend_cmd->add_option("--seed", seed)->required();

  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz flow diagram");
  dot_cmd->add_option("automaton", aut_path)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (validate_cmd->parsed()) {
      const auto a = parse_automaton(read_file(aut_path));
      const auto rep = check_reversible(a);
      out << "states=" << a.states().size() << " inputs=" << a.inputs().size()
          << " outputs=" << a.outputs().size() << " configurations=" << a.config_count()
          << " reversible=" << (rep.reversible ? "true" : "false") << '\n';
      for (const auto& g : rep.collisions) {
        out << "collision:";
        for (const auto& c : g) out << ' ' << to_string(c);
        out << '\n';
      }
    } else if (run_cmd->parsed()) {
      const auto a = parse_automaton(read_file(aut_path));
      Trajectory t;
      if (inputs_opt->count()) {
        const auto parts = text::split(start, ',');
        t = run_open(a, parts.front(), text::split(inputs, ','));
      } else {
        t = run_closed(a, parse_config(start), steps);
      }
      print_trajectory(out, t);
      out << "mode=" << (t.closed_loop() ? "closed" : "open") << " steps=" << t.steps.size() - 1
          << " final=" << to_string(t.steps.back()) << '\n';
      if (undo) out << "undo=" << to_string(undo_trajectory(a, t)) << '\n';
    } else if (perm_cmd->parsed()) {
      const auto a = parse_automaton(read_file(aut_path));
      const auto p = to_permutation(a);
      if (matrix) {
        out << format_matrix(permutation_matrix(p));
      } else if (cycles) {
        out << format_cycles(cycle_decomposition(p)) << '\n';
      } else {
        out << "image=";
        for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << p(j);
        out << '\n';
      }
    } else if (coarse_cmd->parsed()) {
      const auto a = parse_automaton(read_file(aut_path));
      const auto m = parse_interface(read_file(ifc_path), a);
      const auto t = run_closed(a, parse_config(start), steps);
      const auto macro = coarse_grain(a, t, m, question);
      out << std::setw(6) << "step" << std::setw(16) << "micro" << std::setw(12) << "macro"
          << '\n';
      for (std::size_t j = 0; j < t.steps.size(); ++j)
        out << std::setw(6) << j << std::setw(16) << to_string(t.steps[j]) << std::setw(12)
            << macro[j] << '\n';
      out << "macro=" << join(macro, ",") << '\n';
    } else if (estimate_cmd->parsed()) {
      const auto a = parse_automaton(read_file(aut_path));
      const auto m = parse_interface(read_file(ifc_path), a);
      if (horizon_opt->count()) {
        const auto rep = reconstructibility_report(a, m, question, horizon);
        out << std::setw(16) << "start" << std::setw(12) << "final_size" << '\n';
        for (std::size_t x = 0; x < rep.final_sizes.size(); ++x)
          out << std::setw(16) << to_string(a.input_config(x)) << std::setw(12)
              << rep.final_sizes[x] << '\n';
        out << "horizon=" << rep.horizon << " fraction_identified="
            << text::sig(rep.fraction_identified)
            << " mean_final_size=" << text::sig(rep.mean_final_size) << '\n';
      } else {
        if (obs.empty()) throw DomainError("--obs or --horizon is required");
        const auto o = text::split(obs, ',');
        const auto sets = candidate_filter(a, m, question, o);
        out << std::setw(6) << "step" << std::setw(10) << "observed" << std::setw(6) << "size"
            << "  candidates\n";
        for (std::size_t j = 0; j < sets.size(); ++j)
          out << std::setw(6) << j << std::setw(10) << o[j] << std::setw(6) << sets[j].size()
              << "  " << format_set(a, sets[j]) << '\n';
        const auto init = initial_candidates(to_permutation(a), sets.back(), sets.size() - 1);
        const bool unique = sets.back().size() == 1;
        out << "final_size=" << sets.back().size()
            << " reconstructed=" << (unique ? "true" : "false")
            << " initial=" << format_set(a, init) << '\n';
      }
    } else if (entropy_cmd->parsed()) {
      const Distribution d(parse_doubles(dist, 0));
      out << "entropy_bits=" << text::sig(entropy(d)) << '\n';
    } else if (flux_cmd->parsed()) {
      double flow = 0.0;
      if (!sphere.empty()) {
        const auto v = parse_doubles(sphere, 3);
        flow = sphere_flow(v[0], v[1], v[2]);
        out << "sphere radius=" << text::sig(v[0]) << " m speed=" << text::sig(v[1])
            << " m/s bits=" << text::sig(v[2]) << '\n';
      } else if (!patches.empty()) {
        const auto ps = parse_patches(read_file(patches));
        flow = surface_flow(ps);
        out << "patches=" << ps.size() << '\n';
      } else {
        const auto v = parse_doubles(density, 3);
        out << "flux_density=" << text::sig(flux_density(v[0], v[1], v[2]))
            << " bits/m^2/s\n";
        return 0;
      }
      out << "flow=" << text::sig(flow) << " bits/s\n";
    } else if (lattice_cmd->parsed()) {
      auto l = parse_lattice(read_file(file_path));
      const auto initial_total = l.total();
      std::int64_t worst = 0;
      ContinuityReport last;
      for (std::size_t t = 0; t < ticks; ++t) {
        try {
          auto [next, rep] = lattice_tick(std::move(l));
          worst = std::max(worst, rep.residual_max());
          l = std::move(next);
          last = std::move(rep);
        } catch (const DomainError& e) {
          throw DomainError("tick " + std::to_string(t) + ": " + e.what());
        }
      }
      if (ticks > 0) out << format_continuity(l, last);
      out << "ticks=" << ticks << " initial_bits=" << initial_total
          << " final_bits=" << l.total() << " residual_max_all=" << worst << '\n';
    } else if (eraser_cmd->parsed()) {
      const auto v = text::split(state, ',');
      if (v.size() != 2) throw DomainError("expected --state object,register");
      const auto to_u = [](const std::string& s) {
        std::size_t used = 0;
        unsigned long x = 0;
        try {
          x = std::stoul(s, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != s.size()) throw DomainError("not an integer: '" + s + "'");
        return static_cast<std::uint32_t>(x);
      };
      const CompositeSystem c{k, to_u(v[0]), to_u(v[1])};
      out << format_eraser(eraser_experiment(k, c, seed));
    } else if (transcend_cmd->parsed()) {
      out << format_transcendence(transcendence_experiment(k, parse_agent(agent), trials, seed));
    } else if (dot_cmd->parsed()) {
      out << export_dot(parse_automaton(read_file(aut_path)));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace revdyn::cli
