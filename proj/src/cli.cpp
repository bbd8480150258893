#include "heisenclone/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <new>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "heisenclone/io.hpp"
#include "heisenclone/qcore.hpp"
#include "heisenclone/random.hpp"
#include "heisenclone/replication.hpp"
#include "heisenclone/scaling.hpp"

namespace heisenclone::cli {

namespace {

using io::json;
using io::number;

struct Config {
  std::string spectrum_path;
  std::string system_path;
  std::string format;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> support_cap;
};

Spectrum default_qubit() { return normalize_spectrum(std::vector<RawLevel>{{"0", 0.5}, {"1", 0.5}}); }

Spectrum load_spectrum(const Config& cfg) {
  return cfg.spectrum_path.empty() ? default_qubit() : io::read_spectrum(cfg.spectrum_path);
}

qcore::QuantumSystem load_system(const Config& cfg) {
  if (!cfg.system_path.empty()) return io::read_system(cfg.system_path);
  return qcore::system_from_spectrum(load_spectrum(cfg));
}

Limits limits_of(const Config& cfg) {
  Limits limits;
  if (const char* env = std::getenv("HEISENCLONE_CAP"); env != nullptr && *env != '\0') {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::string(env).size() || v == 0) throw ValidationError("HEISENCLONE_CAP must be a positive integer");
    limits.support_cap = static_cast<std::size_t>(v);
  }
  if (cfg.support_cap) {
    if (*cfg.support_cap == 0) throw ValidationError("--support-cap must be positive");
    limits.support_cap = static_cast<std::size_t>(*cfg.support_cap);
  }
  return limits;
}

std::string format_of(const Config& cfg, const char* fallback) {
  std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "json" && f != "csv") throw ValidationError("--format must be json or csv");
  return f;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

FilterPolicy policy_of(const std::string& kind, double f, double xi) {
  FilterPolicy p;
  p.kind = filter_kind_from_string(kind);
  p.f_value = f;
  p.xi = xi;
  return p;
}

// Builds the policy filter for (N, M) and reports its fidelity.
ReplicationResult replicate(const Spectrum& s, int n, int m, const FilterPolicy& p, const Limits& limits) {
  switch (p.kind) {
    case FilterKind::super:
      return exact_fidelity(s, n, m, build_super_filter(s, n, m, limits), limits);
    case FilterKind::windowed: {
      double f = p.f_value > 0.0 ? p.f_value : default_window_function(n);
      double xi = p.xi > 0.0 ? p.xi : window_xi(s, 2.0);
      return exact_fidelity(s, n, m, build_windowed_filter(s, n, m, f, xi, limits), limits);
    }
    case FilterKind::identity:
      return exact_fidelity(s, n, m, identity_filter(s, n, limits), limits);
  }
  throw ValidationError("unknown filter policy");
}

struct ReplicateArgs {
  int n = 0, m = 0;
  std::string filter = "super";
  double f = 0.0, xi = 0.0;
};

int cmd_replicate(const Config& cfg, const ReplicateArgs& a, std::ostream& out) {
  const auto s = load_spectrum(cfg);
  const auto r = replicate(s, a.n, a.m, policy_of(a.filter, a.f, a.xi), limits_of(cfg));
  if (format_of(cfg, "json") == "csv") {
    out << "n,m,fidelity,p_yes,filter_kind,delta_e0\n"
        << r.n << ',' << r.m << ',' << io::format_number(r.fidelity) << ',' << io::format_number(r.p_yes) << ','
        << to_string(r.filter_kind) << ',' << r.delta_e0 << '\n';
  } else {
    emit(out, io::to_json(r));
  }
  return kExitOk;
}

struct SweepArgs {
  double alpha = 1.5, c = 1.0;
  std::vector<int> n_values;
  std::vector<int> m_values;
  bool fig2 = false;
  std::string filter = "super";
  double f = 0.0, xi = 0.0;
  std::string fit;
  std::string transform;
  std::string bound = "lemma1";
};

int cmd_sweep(const Config& cfg, const SweepArgs& a, std::ostream& out) {
  if (a.bound != "lemma1") throw ValidationError("--bound supports only lemma1");
  auto s = load_spectrum(cfg);
  SweepSpec spec = a.fig2 ? fig2_spec(std::move(s)) : SweepSpec(std::move(s));
  if (!a.fig2) {
    spec.alpha = a.alpha;
    spec.c = a.c;
    spec.n_values = a.n_values;
    if (spec.n_values.empty())
      for (int n = 20; n <= 120; n += 10) spec.n_values.push_back(n);
    spec.m_values = a.m_values;
  }
  spec.policy = policy_of(a.filter, a.f, a.xi);
  spec.limits = limits_of(cfg);
  const auto rows = run_sweep(spec);

  std::optional<FitResult> fit;
  FitColumn column{};
  FitTransform transform{};
  if (!a.fit.empty()) {
    column = fit_column_from_string(a.fit);
    transform = !a.transform.empty()                       ? fit_transform_from_string(a.transform)
                : column == FitColumn::neg_log_pyes ? FitTransform::vs_n
                                                           : FitTransform::vs_log_n;
    fit = fit_exponent(rows, column, transform);
  }

  if (format_of(cfg, "csv") == "csv") {
    io::write_sweep_csv(out, rows);
    if (fit)
      out << "# fit column=" << to_string(column) << " transform=" << to_string(transform)
          << " slope=" << io::format_number(fit->slope) << " intercept=" << io::format_number(fit->intercept)
          << " r2=" << io::format_number(fit->r2) << '\n';
  } else {
    json j = io::sweep_dataset(spec, rows);
    if (fit) {
      j["fit"] = io::to_json(*fit);
      j["fit"]["column"] = to_string(column);
      j["fit"]["transform"] = to_string(transform);
    }
    emit(out, j);
  }
  return kExitOk;
}

struct BoundsArgs {
  int n = 0, m = 0;
  std::optional<double> p_yes;
  std::optional<double> e_delta;
};

int cmd_bounds(const Config& cfg, const BoundsArgs& a, std::ostream& out) {
  const auto s = load_spectrum(cfg);
  const auto limits = limits_of(cfg);
  const auto exact = exact_fidelity(s, a.n, a.m, build_super_filter(s, a.n, a.m, limits), limits);
  const double p_yes = a.p_yes.value_or(exact.p_yes);
  const double e_delta = a.e_delta.value_or(max_e_delta(s, a.n));
  auto report = lemma1_upper_bound(s, a.n, a.m, p_yes, e_delta, limits);
  if (!a.p_yes) report.exact = exact.fidelity;
  json j = io::to_json(report);
  j["n"] = a.n;
  j["m"] = a.m;
  j["max_e_delta"] = number(max_e_delta(s, a.n));
  j["lower_admissible"] = static_cast<double>(a.n) * s.p_min() >= 1.0 - 1e-12;
  emit(out, j);
  return kExitOk;
}

struct MetrologyArgs {
  double t = 0.0;
  double epsilon = 0.01;
  int samples = 1000;
  int n = 1;
  double sigma = 1.0;
  int dim = 3;
  int quadrature = 64;
};

double period_of(const Spectrum& s) { return 2.0 * std::numbers::pi / s.unit(); }

int cmd_qfi(const Config& cfg, const MetrologyArgs& a, std::ostream& out) {
  const auto sys = load_system(cfg);
  const double q = qcore::qfi(sys, a.t);
  emit(out, {{"t", number(a.t)}, {"qfi", number(q)}, {"crb", number(qcore::prob_crb(q))}});
  return kExitOk;
}

int cmd_prob_qfi(const Config& cfg, const MetrologyArgs& a, std::ostream& out) {
  const auto sys = load_system(cfg);
  const auto flt = qcore::epsilon_filter(sys, a.t, a.epsilon);
  const double q = qcore::qfi(sys, a.t);
  const double qp = qcore::prob_qfi(sys, flt, a.t);
  const double expected = q / (a.epsilon * a.epsilon);
  const double p_yes = (flt.matrix() * qcore::clock_state(sys, a.t)).squaredNorm();
  emit(out, {{"t0", number(a.t)},
             {"epsilon", number(a.epsilon)},
             {"qfi", number(q)},
             {"prob_qfi", number(qp)},
             {"expected", number(expected)},
             {"relative_error", number(std::abs(qp - expected) / expected)},
             {"prob_crb", number(qcore::prob_crb(qp))},
             {"p_yes", number(p_yes)}});
  return kExitOk;
}

int cmd_avg_bound(const Config& cfg, const MetrologyArgs& a, std::ostream& out) {
  if (a.samples < 1) throw ValidationError("--samples must be positive");
  if (!cfg.system_path.empty()) throw ValidationError("avg-bound works on a spectrum, not a system file");
  const auto s = load_spectrum(cfg);
  const auto sys = qcore::system_from_spectrum(s);
  const double period = period_of(s);
  const double bound = s.energy_span() * s.energy_span();
  random::Rng rng(cfg.seed);
  double max_seen = 0.0;
  int skipped = 0;
  for (int i = 0; i < a.samples; ++i) {
    const auto flt = random::diagonal_filter(rng, sys);
    try {
      max_seen = std::max(max_seen, qcore::avg_qfi_uniform(sys, flt, period, a.quadrature));
    } catch (const NumericError&) {
      ++skipped;  // filter (numerically) annihilates the probe
    }
  }
  const double noon = qcore::avg_qfi_uniform(sys, qcore::noon_filter(sys), period, a.quadrature);
  emit(out, {{"samples", a.samples},
             {"seed", cfg.seed},
             {"skipped", skipped},
             {"bound", number(bound)},
             {"max_observed", number(max_seen)},
             {"noon", number(noon)},
             {"holds", max_seen <= bound + 1e-9}});
  return kExitOk;
}

int cmd_hl(const Config& cfg, const MetrologyArgs& a, std::ostream& out) {
  const auto s = load_spectrum(cfg);
  emit(out, {{"n", a.n}, {"span", number(s.energy_span())}, {"bound", number(qcore::hl_variance_bound(s, a.n))}});
  return kExitOk;
}

int cmd_twirl(const Config& cfg, const MetrologyArgs& a, std::ostream& out) {
  const auto sys = load_system(cfg);
  random::Rng rng(cfg.seed);
  const auto p = random::psd(rng, sys.dim());
  const auto t = qcore::gaussian_twirl(p, sys, a.sigma);
  const auto d = qcore::energy_diagonal(p, sys);
  // scaling check in the eigenbasis
  const auto& v = sys.eigenvectors();
  const qcore::Matrix pe = v.adjoint() * p * v, te = v.adjoint() * t * v;
  double worst = 0.0;
  for (int i = 0; i < sys.dim(); ++i)
    for (int j = 0; j < sys.dim(); ++j) {
      double gap = sys.eigenvalues()(i) - sys.eigenvalues()(j);
      if (std::abs(gap) < 1e-10) gap = 0.0;
      const auto expected = pe(i, j) * std::exp(-a.sigma * a.sigma * gap * gap / 2.0);
      worst = std::max(worst, std::abs(te(i, j) - expected));
    }
  emit(out, {{"sigma", number(a.sigma)},
             {"seed", cfg.seed},
             {"max_scaling_error", number(worst)},
             {"distance_to_diag", number((t - d).cwiseAbs().maxCoeff())}});
  return kExitOk;
}

int cmd_decompose(const Config& cfg, const MetrologyArgs& a, std::ostream& out) {
  if (a.samples < 1) throw ValidationError("--samples must be positive");
  if (a.dim < 1 || a.dim > qcore::kMaxDim) throw ValidationError("--dim out of range");
  random::Rng rng(cfg.seed);
  std::uniform_int_distribution<int> count(1, 4);
  double choi_err = 0.0, tp_err = 0.0;
  for (int i = 0; i < a.samples; ++i) {
    const auto kraus = random::instrument(rng, a.dim, a.dim, count(rng));
    const auto dec = qcore::decompose_instrument(kraus);
    const auto rebuilt = qcore::recompose(dec);
    choi_err = std::max(choi_err, (qcore::choi_matrix(kraus) - qcore::choi_matrix(rebuilt)).cwiseAbs().maxCoeff());
    tp_err = std::max(tp_err, qcore::trace_preservation_error(dec.channel_kraus));
  }
  emit(out, {{"samples", a.samples},
             {"dim", a.dim},
             {"seed", cfg.seed},
             {"max_choi_error", number(choi_err)},
             {"max_trace_preservation_error", number(tp_err)}});
  return kExitOk;
}

int cmd_validate(const Config& cfg, std::ostream& out) {
  if (!cfg.system_path.empty()) {
    const auto sys = io::read_system(cfg.system_path);
    emit(out, {{"valid", true}, {"system", io::to_json(sys)}});
    return kExitOk;
  }
  if (cfg.spectrum_path.empty()) throw ValidationError("validate needs --spectrum or --system");
  const auto s = io::read_spectrum(cfg.spectrum_path);
  emit(out, {{"valid", true}, {"spectrum", io::to_json(s)}});
  return kExitOk;
}

int report(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  err << io::error_json(kind, message).dump() << '\n';
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"heisenclone: probabilistic super-replication of clock states"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--spectrum", cfg.spectrum_path, "spectrum JSON file (default: 1/2-1/2 qubit on {0,1})");
  app.add_option("--system", cfg.system_path, "quantum system JSON file (metrology, validate)");
  app.add_option("--format", cfg.format, "json or csv");
  app.add_option("--seed", cfg.seed, "seed for randomized checks");
  app.add_option("--support-cap", cfg.support_cap, "maximum grid size of any energy distribution");

  ReplicateArgs rep;
  auto* replicate = app.add_subcommand("replicate", "fidelity and p_yes of a filter + shift replicator");
  replicate->add_option("--n", rep.n)->required();
  replicate->add_option("--m", rep.m)->required();
  replicate->add_option("--filter", rep.filter, "super, windowed or identity");
  replicate->add_option("--f", rep.f, "window function value (windowed; default ln(N+1))");
  replicate->add_option("--xi", rep.xi, "window constant (windowed; default 2 p_min / K)");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "fidelity/probability dataset over N with M = ceil(c N^alpha)");
  sweep->add_option("--alpha", sw.alpha);
  sweep->add_option("--c", sw.c);
  sweep->add_option("--n-values", sw.n_values, "comma-separated N list")->delimiter(',');
  sweep->add_option("--m-values", sw.m_values, "fixed-N mode: comma-separated M list")->delimiter(',');
  sweep->add_flag("--fig2", sw.fig2, "N = 20, M = 20..400");
  sweep->add_option("--filter", sw.filter);
  sweep->add_option("--f", sw.f);
  sweep->add_option("--xi", sw.xi);
  sweep->add_option("--fit", sw.fit, "fidelity or pyes: append an exponent fit");
  sweep->add_option("--fit-transform", sw.transform, "vs_log_n or vs_n");
  sweep->add_option("--bound", sw.bound, "upper-bound column (lemma1)");

  BoundsArgs bd;
  auto* bounds = app.add_subcommand("bounds", "lower/upper fidelity bounds at (N, M)");
  bounds->add_option("--n", bd.n)->required();
  bounds->add_option("--m", bd.m)->required();
  bounds->add_option("--p-yes", bd.p_yes, "success probability (default: the super filter's)");
  bounds->add_option("--e-delta", bd.e_delta, "energy window half-width in grid units (default: maximal)");

  MetrologyArgs me;
  auto* metrology = app.add_subcommand("metrology", "QFI, Cramer-Rao and instrument checks");
  metrology->require_subcommand(1);
  metrology->fallthrough();
  auto* m_qfi = metrology->add_subcommand("qfi");
  m_qfi->add_option("--t", me.t);
  auto* m_prob = metrology->add_subcommand("prob-qfi", "epsilon-filter demo at its anchor time");
  m_prob->add_option("--epsilon", me.epsilon);
  m_prob->add_option("--t0", me.t);
  auto* m_avg = metrology->add_subcommand("avg-bound", "random diagonal filters against (E_max - E_min)^2");
  m_avg->add_option("--samples", me.samples);
  m_avg->add_option("--quadrature", me.quadrature);
  auto* m_hl = metrology->add_subcommand("hl", "1 / (N^2 (E_max - E_min)^2)");
  m_hl->add_option("--n", me.n)->required();
  auto* m_twirl = metrology->add_subcommand("twirl", "Gaussian twirl of a random positive operator");
  m_twirl->add_option("--sigma", me.sigma);
  auto* m_dec = metrology->add_subcommand("decompose", "filter + channel decomposition of random instruments");
  m_dec->add_option("--samples", me.samples);
  m_dec->add_option("--dim", me.dim);

  auto* validate_cmd = app.add_subcommand("validate", "check a spectrum or system file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report(err, kExitValidation, "usage", e.what());
  }

  try {
    if (*replicate) return cmd_replicate(cfg, rep, out);
    if (*sweep) return cmd_sweep(cfg, sw, out);
    if (*bounds) return cmd_bounds(cfg, bd, out);
    if (*validate_cmd) return cmd_validate(cfg, out);
    if (*m_qfi) return cmd_qfi(cfg, me, out);
    if (*m_prob) return cmd_prob_qfi(cfg, me, out);
    if (*m_avg) return cmd_avg_bound(cfg, me, out);
    if (*m_hl) return cmd_hl(cfg, me, out);
    if (*m_twirl) return cmd_twirl(cfg, me, out);
    if (*m_dec) return cmd_decompose(cfg, me, out);
    return report(err, kExitValidation, "usage", "no subcommand");
  } catch (const ResourceError& e) {
    json j = io::error_json(to_string(e.kind()), e.what());
    j["error"]["requested"] = number(e.requested());
    err << j.dump() << '\n';
    return kExitResource;
  } catch (const NumericError& e) {
    return report(err, kExitNumeric, to_string(e.kind()), e.what());
  } catch (const Error& e) {
    return report(err, kExitValidation, to_string(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return report(err, kExitResource, "resource", "out of memory");
  } catch (const std::exception& e) {
    return report(err, kExitNumeric, "internal", e.what());
  }
}

}  // namespace heisenclone::cli
