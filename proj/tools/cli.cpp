#include "cli.hpp"

#include "qcap/c11.hpp"
#include "qcap/c1inf.hpp"
#include "qcap/channels.hpp"
#include "qcap/ea.hpp"
#include "qcap/info.hpp"
#include "qcap/io.hpp"
#include "qcap/oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#ifndef QCAP_VERSION
#define QCAP_VERSION "0.0.0"
#endif
#ifndef QCAP_DATA_DIR
#define QCAP_DATA_DIR ""
#endif

namespace qcap::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string channel;
  double tol = 1e-7;
  std::uint64_t seed = 1;
  int starts = 6;
  int restarts = 8;
  int max_rounds = 200;
  std::string out;
  std::string format = "text";
  // command specific
  double budget = 0.0;
  std::vector<double> probs;
  std::string kind = "accinfo";
  std::string objective = "mutual-information";
  double step = 1e-3;
  std::string curve;
  int steps = 64;
};

struct Outcome {
  io::Report report;
  int exit_code = 0;
  std::optional<std::pair<io::CsvRow, std::vector<io::CsvRow>>> table;
};

// Looks next to the working directory first, then in the channel library.
fs::path resolve(const std::string& name) {
  if (name.empty()) throw Error("--channel is required");
  if (fs::exists(name)) return name;
  const char* env = std::getenv("QCAP_DATA_DIR");
  for (const char* dir : {env, QCAP_DATA_DIR}) {
    if (dir != nullptr && *dir != '\0' && fs::exists(fs::path(dir) / name)) {
      return fs::path(dir) / name;
    }
  }
  throw io::ChannelFileError("cannot open " + name, 0, 0);
}

io::ChannelFile load(const Flags& f) { return io::parse_channel(resolve(f.channel)); }

std::string vector_text(const Vector& v) {
  std::string s = "[";
  for (Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + io::format_complex(v(i));
  return s + "]";
}

std::string matrix_text(const Matrix& m) {
  std::string s = "[";
  for (Index r = 0; r < m.rows(); ++r) {
    s += r ? ", [" : "[";
    for (Index c = 0; c < m.cols(); ++c) s += (c ? ", " : "") + io::format_complex(m(r, c));
    s += "]";
  }
  return s + "]";
}

void dump(io::Report& r, const std::string& prefix, const PureEnsemble& e) {
  r.add(prefix + ".size", std::to_string(e.size()));
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string k = prefix + "." + std::to_string(i);
    r.add_exact(k + ".p", e.probabilities()[i]);
    r.add(k + ".state", vector_text(e.states()[i].amplitudes()));
  }
}

void dump(io::Report& r, const std::string& prefix, const Ensemble& e) {
  r.add(prefix + ".size", std::to_string(e.size()));
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string k = prefix + "." + std::to_string(i);
    r.add_exact(k + ".p", e.probabilities()[i]);
    r.add(k + ".rho", matrix_text(e.states()[i].matrix()));
  }
}

void dump(io::Report& r, const Povm& m) {
  r.add("povm.size", std::to_string(m.size()));
  for (std::size_t j = 0; j < m.size(); ++j) {
    const std::string k = "povm." + std::to_string(j);
    r.add_exact(k + ".q", m.weights()[j]);
    r.add(k + ".w", vector_text(m.directions()[j].amplitudes()));
  }
}

const std::vector<PureState>& require_signals(const io::ChannelFile& cf) {
  if (!cf.signals) throw Error(cf.name + ": this command needs a signal set in the channel file");
  return *cf.signals;
}

std::vector<double> probabilities(const Flags& f, std::size_t n) {
  if (f.probs.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (f.probs.size() != n) throw Error("--probs needs one value per signal");
  return f.probs;
}

Ensemble output_ensemble(const QuantumChannel& ch, const std::vector<PureState>& s,
                         const std::vector<double>& p) {
  std::vector<DensityMatrix> out;
  for (const auto& v : s) out.push_back(apply_channel(ch, DensityMatrix(v)));
  return Ensemble(p, std::move(out));
}

void header(io::Report& r, const std::string& command, const std::string& channel) {
  r.add("command", command);
  if (!channel.empty()) r.add("channel", channel);
}

Outcome cmd_chi(const Flags& f) {
  const io::ChannelFile cf = load(f);
  const auto& s = require_signals(cf);
  Outcome o;
  header(o.report, "chi", cf.name);
  const std::vector<double> p = probabilities(f, s.size());
  const Ensemble out = output_ensemble(cf.channel, s, p);
  o.report.add_exact("value", holevo_chi(out));
  dump(o.report, "input", PureEnsemble(p, s));
  return o;
}

Outcome cmd_accinfo(const Flags& f) {
  const io::ChannelFile cf = load(f);
  const auto& s = require_signals(cf);
  Outcome o;
  header(o.report, "accinfo", cf.name);
  const std::vector<double> p = probabilities(f, s.size());
  const Ensemble out = output_ensemble(cf.channel, s, p);
  c11::MeasurementOptions mo;
  mo.tol = f.tol;
  mo.starts = f.starts;
  mo.seed = f.seed;
  mo.max_rounds = f.max_rounds;
  const c11::MeasurementResult m = c11::optimize_measurement(out, mo);
  o.report.add_exact("value", m.value);
  o.report.add("holevo_chi", holevo_chi(out));
  o.report.add("pricing_residual", m.pricing_residual);
  o.report.add("rounds", std::to_string(m.rounds));
  o.report.add("status", m.converged ? "converged" : "round-limit");
  if (cf.channel.kraus().size() == 1) {
    // Outputs stay pure; compare with the square-root measurement.
    std::vector<PureState> pure;
    for (const auto& v : s) {
      pure.emplace_back(cf.channel.kraus()[0] * v.amplitudes());
    }
    o.report.add("srm_value", accessible_information_given(out, square_root_measurement(pure)));
  }
  dump(o.report, "input", PureEnsemble(p, s));
  dump(o.report, m.povm);
  o.exit_code = m.converged ? 0 : 2;
  return o;
}

Outcome cmd_c11(const Flags& f) {
  const io::ChannelFile cf = load(f);
  Outcome o;
  header(o.report, "c11", cf.name);
  c11::Options opts;
  opts.restarts = f.restarts;
  opts.seed = f.seed;
  opts.tol = f.tol;
  opts.starts = f.starts;
  opts.max_alternations = f.max_rounds;
  const c11::Result r = c11::c11(cf.channel, cf.signals, opts);
  o.report.add_exact("value", r.value);
  o.report.add("status", c11::to_string(r.status));
  o.report.add("pricing_residual", r.pricing_residual);
  o.report.add("restarts", std::to_string(r.restarts_used));
  o.report.add("best_restart", std::to_string(r.best_restart));
  double lo = r.restarts.front().value;
  double hi = lo;
  double gap_min = r.restarts.front().holevo_gap_min;
  std::string values;
  for (const auto& rs : r.restarts) {
    lo = std::min(lo, rs.value);
    hi = std::max(hi, rs.value);
    gap_min = std::min(gap_min, rs.holevo_gap_min);
    values += (values.empty() ? "" : " ") + io::format_number(rs.value);
  }
  o.report.add("restart_values", values);
  o.report.add("restart_spread", hi - lo);
  o.report.add("holevo_gap_min", gap_min);
  dump(o.report, "input", r.inputs);
  dump(o.report, r.povm);
  o.exit_code = r.status == c11::Status::Converged ? 0 : 2;
  return o;
}

Outcome cmd_c1inf(const Flags& f) {
  const io::ChannelFile cf = load(f);
  Outcome o;
  header(o.report, "c1inf", cf.name);
  c1inf::Problem pb{cf.channel, cf.signals, std::nullopt, {}};
  pb.options.tol = f.tol;
  pb.options.pricing_tol = f.tol;
  pb.options.starts = f.starts;
  pb.options.seed = f.seed;
  pb.options.max_rounds = f.max_rounds;
  const c1inf::Result r = c1inf::c1inf(pb);
  o.report.add_exact("value", r.value);
  o.report.add("status", c1inf::to_string(r.status));
  o.report.add("dual_gap", r.dual_gap);
  o.report.add("pricing_residual", r.pricing_residual);
  o.report.add("rounds", std::to_string(r.rounds));
  dump(o.report, "input", r.ensemble);
  o.report.add("rho", matrix_text(r.rho.matrix()));
  o.exit_code = r.status == c1inf::Status::Converged ? 0 : 2;
  return o;
}

Outcome cmd_cea(const Flags& f) {
  const io::ChannelFile cf = load(f);
  Outcome o;
  header(o.report, "cea", cf.name);
  ea::Options opts;
  opts.tol = f.tol;
  opts.max_iterations = std::max(f.max_rounds, 1) * 25;
  const ea::CEResult r = ea::c_ea(cf.channel, opts);
  o.report.add_exact("value", r.value);
  o.report.add("status", r.converged ? "converged" : "round-limit");
  o.report.add("fw_gap", r.fw_gap);
  o.report.add("gradient_residual", r.gradient_residual);
  o.report.add("iterations", std::to_string(r.iterations));
  o.report.add("entanglement_rate", r.entanglement_rate);
  o.report.add("rho", matrix_text(r.rho_star.matrix()));
  o.exit_code = r.converged ? 0 : 2;
  return o;
}

Outcome cmd_coherent(const Flags& f) {
  const io::ChannelFile cf = load(f);
  Outcome o;
  header(o.report, "coherent", cf.name);
  ea::CoherentOptions opts;
  opts.random_starts = f.starts;
  opts.seed = f.seed;
  const ea::QResult r = ea::coherent_info_max(cf.channel, opts);
  o.report.add_exact("value", r.value);
  o.report.add("local_maxima", std::to_string(r.maxima.size()));
  for (std::size_t i = 0; i < r.maxima.size(); ++i) {
    const std::string k = "maximum." + std::to_string(i);
    o.report.add(k + ".value", r.maxima[i].value);
    o.report.add(k + ".residual", r.maxima[i].residual);
  }
  o.report.add("rho", matrix_text(r.rho_star.matrix()));
  return o;
}

Outcome cmd_limited(const Flags& f) {
  const io::ChannelFile cf = load(f);
  Outcome o;
  header(o.report, "limited-ea", cf.name);
  ea::LimitedOptions opts;
  opts.tol = f.tol;
  opts.starts = f.starts;
  opts.seed = f.seed;
  opts.max_rounds = std::min(f.max_rounds, 40);
  const ea::LimitedResult r = ea::limited_ea(cf.channel, f.budget, opts);
  o.report.add("experimental", "true");
  o.report.add_exact("budget", f.budget);
  o.report.add_exact("value", r.value);
  o.report.add("status", r.converged                      ? "converged"
                         : r.rounds < opts.max_rounds ? "stalled"
                                                      : "round-limit");
  o.report.add("avg_entropy", r.avg_entropy);
  o.report.add("multiplier", r.multiplier);
  o.report.add("rounds", std::to_string(r.rounds));
  dump(o.report, "input", r.ensemble);
  o.exit_code = r.converged ? 0 : 2;
  return o;
}

Outcome cmd_arimoto(const Flags& f) {
  const io::ChannelFile cf = load(f);
  Outcome o;
  header(o.report, "arimoto-blahut", cf.name);
  // Classical restriction: basis inputs, basis measurement.
  const QuantumChannel& ch = cf.channel;
  RealMatrix w(ch.dim_in(), ch.dim_out());
  for (Index x = 0; x < ch.dim_in(); ++x) {
    const Matrix out = apply_channel(ch, PureState::basis(ch.dim_in(), x).projector());
    for (Index y = 0; y < ch.dim_out(); ++y) w(x, y) = std::max(0.0, out(y, y).real());
  }
  const ArimotoBlahutResult r = arimoto_blahut(ClassicalChannel(w), f.tol);
  o.report.add_exact("value", r.capacity);
  o.report.add("lower_bound", r.lower_bound);
  o.report.add("upper_bound", r.upper_bound);
  o.report.add("iterations", std::to_string(r.iterations));
  std::string input;
  for (double p : r.input) input += (input.empty() ? "" : " ") + io::format_exact(p);
  o.report.add("input", input);
  return o;
}

Outcome cmd_oracle(const Flags& f) {
  const io::ChannelFile cf = load(f);
  Outcome o;
  header(o.report, "oracle", cf.name);
  o.report.add("kind", f.kind);
  o.report.add("step", f.step);
  if (f.kind == "accinfo") {
    const auto& s = require_signals(cf);
    const Ensemble out = output_ensemble(cf.channel, s, probabilities(f, s.size()));
    const auto r = oracles::grid_accessible_info_2d(out, f.step);
    o.report.add_exact("value", r.value);
    o.report.add("family", r.trine_family ? "trine" : "projective");
  } else if (f.kind == "density") {
    const auto obj = oracles::parse_density_objective(f.objective);
    const auto r = oracles::grid_density_objective(cf.channel, obj, f.step);
    o.report.add("objective", oracles::to_string(obj));
    o.report.add_exact("value", r.value);
    o.report.add("rho", matrix_text(r.rho.matrix()));
  } else if (f.kind == "simplex") {
    const auto r = oracles::simplex_enumerate_chi(cf.channel, require_signals(cf), f.step);
    o.report.add_exact("value", r.value);
    std::string p;
    for (double x : r.p) p += (p.empty() ? "" : " ") + io::format_number(x);
    o.report.add("p", p);
  } else {
    throw Error("unknown oracle kind: " + f.kind);
  }
  return o;
}

Outcome cmd_sweep(const Flags& f) {
  if (f.curve != "fig1") throw Error("unknown curve: " + f.curve + " (available: fig1)");
  if (f.steps < 2) throw Error("--steps must be at least 2");
  Outcome o;
  header(o.report, "sweep", "");
  o.report.add("curve", f.curve);
  o.report.add("steps", std::to_string(f.steps));
  std::vector<io::CsvRow> rows;
  bool ordered = true;
  bool converged = true;
  for (int k = 0; k < f.steps; ++k) {
    const double theta = k * (std::numbers::pi / 2.0) / (f.steps - 1);
    const Ensemble ens = channels::uniform_ensemble(channels::two_states(theta));
    c11::MeasurementOptions mo;
    mo.tol = f.tol;
    mo.starts = f.starts;
    mo.seed = mix_seed(f.seed, static_cast<std::uint64_t>(k));
    mo.max_rounds = f.max_rounds;
    const c11::MeasurementResult m = c11::optimize_measurement(ens, mo);
    const double h = von_neumann_entropy(DensityMatrix(ens.average()));
    ordered = ordered && m.value <= h + 1e-12;
    converged = converged && m.converged;
    rows.push_back({io::format_number(theta), io::format_number(m.value), io::format_number(h)});
  }
  o.report.add("rows", std::to_string(rows.size()));
  o.report.add("holevo_bound_holds", ordered ? "true" : "false");
  o.table = std::make_pair(io::CsvRow{"theta", "i_acc", "h_vn"}, std::move(rows));
  o.exit_code = converged ? 0 : 2;
  return o;
}

void add_common(CLI::App* sub, Flags& f, bool channel = true) {
  if (channel) sub->add_option("--channel", f.channel, "channel file (.qch)");
  sub->add_option("--tol", f.tol, "convergence tolerance");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--starts", f.starts, "random starts per search");
  sub->add_option("--restarts", f.restarts, "restarts (c11)");
  sub->add_option("--max-rounds", f.max_rounds, "iteration limit");
  sub->add_option("--out", f.out, "write output to a file");
  sub->add_option("--format", f.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacities of finite-dimensional quantum channels", "qcap"};
  app.set_version_flag("--version", QCAP_VERSION);
  app.require_subcommand(1);
  Flags f;
  struct Entry {
    const char* name;
    const char* help;
    Outcome (*fn)(const Flags&);
  };
  const std::vector<Entry> entries = {
      {"chi", "Holevo chi of the channel's signal ensemble", cmd_chi},
      {"accinfo", "accessible information of the signal ensemble", cmd_accinfo},
      {"c11", "C_{1,1}: product inputs, single-use measurements", cmd_c11},
      {"c1inf", "C_{1,inf}: Holevo capacity", cmd_c1inf},
      {"cea", "entanglement-assisted capacity", cmd_cea},
      {"coherent", "single-letter coherent information", cmd_coherent},
      {"limited-ea", "limited-entanglement formula (experimental)", cmd_limited},
      {"arimoto-blahut", "capacity of the basis-restricted classical channel", cmd_arimoto},
      {"oracle", "brute-force grid references", cmd_oracle},
      {"sweep", "parameter sweeps written as CSV", cmd_sweep},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, f, std::string(e.name) != "sweep");
    const std::string name = e.name;
    if (name == "chi" || name == "accinfo" || name == "oracle") {
      sub->add_option("--probs", f.probs, "signal probabilities (default uniform)");
    }
    if (name == "limited-ea") sub->add_option("--B", f.budget, "entanglement budget in bits")->required();
    if (name == "oracle") {
      sub->add_option("--kind", f.kind, "accinfo, density or simplex")
          ->check(CLI::IsMember({"accinfo", "density", "simplex"}));
      sub->add_option("--objective", f.objective,
                      "mutual-information or coherent-information (density)");
      sub->add_option("--step", f.step, "grid step");
    }
    if (name == "sweep") {
      sub->add_option("--curve", f.curve, "fig1")->required();
      sub->add_option("--steps", f.steps, "number of points");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    for (const auto& e : entries) {
      if (chosen->get_name() == e.name) o = e.fn(f);
    }
  } catch (const InvariantError& e) {
    const std::string what = e.what();
    err << "error: " << what;
    if (what.find("(defect ") == std::string::npos) {
      err << " (defect " << io::format_number(e.defect()) << ")";
    }
    err << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream body;
  std::ostringstream summary;
  const bool csv = f.format == "csv";
  if (o.table) {
    io::emit_csv(body, o.table->first, o.table->second);
    o.report.add("seed", std::to_string(f.seed));
    o.report.add("wall_time_s", secs);
    o.report.add("version", QCAP_VERSION);
    if (!f.out.empty()) io::write_report(summary, o.report);
  } else if (csv) {
    // Machine output omits the wall time so that reruns are byte-identical.
    o.report.add("seed", std::to_string(f.seed));
    o.report.add("version", QCAP_VERSION);
    std::vector<io::CsvRow> rows;
    for (const auto& [k, v] : o.report.fields()) rows.push_back({k, v});
    io::emit_csv(body, {"key", "value"}, rows);
  } else {
    o.report.add("seed", std::to_string(f.seed));
    o.report.add("wall_time_s", secs);
    o.report.add("version", QCAP_VERSION);
    io::write_report(body, o.report);
  }

  if (f.out.empty()) {
    out << body.str();
  } else {
    std::ofstream file(f.out, std::ios::binary);
    if (!(file << body.str())) {
      err << "error: cannot write " << f.out << "\n";
      return 1;
    }
    out << summary.str();
  }
  return o.exit_code;
}

}  // namespace qcap::cli
