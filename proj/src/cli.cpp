#include "fermsea/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fermsea/config.hpp"
#include "fermsea/geometry.hpp"
#include "fermsea/jw.hpp"
#include "fermsea/parallel.hpp"
#include "fermsea/scaling.hpp"
#include "fermsea/selftest.hpp"

namespace fermsea::cli {

namespace {

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw config_error("cannot parse integer list for " + what + ": '" + s +
                         "'");
    }
  }
  if (out.empty()) throw config_error(what + " list is empty");
  return out;
}

void require_increasing(const std::vector<int>& v, const std::string& what) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1])
      throw config_error(what + " list must be strictly increasing");
}

/// Output is buffered and written only after the computation succeeded, so
/// failed runs leave no partial files behind.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file '" + path + "'");
  out << text;
}

struct SeaFlags {
  std::string inline_spec;
  std::string config_path;
  int d = 0;
};

void add_sea_flags(CLI::App* cmd, SeaFlags& flags) {
  cmd->add_option("--sea", flags.inline_spec,
                  "inline sea spec, e.g. interval:kf=1.5707963");
  cmd->add_option("--config", flags.config_path, "sea/model config file");
  cmd->add_option("--d", flags.d, "spatial dimension (with --sea)");
}

SeaDefinition resolve_sea(const SeaFlags& flags) {
  const bool have_inline = !flags.inline_spec.empty();
  const bool have_file = !flags.config_path.empty();
  if (have_inline == have_file)
    throw config_error("exactly one sea source required: --sea or --config");
  if (have_file) return sea_from_file(flags.config_path);
  if (flags.d < 1) throw config_error("--sea needs --d");
  return sea_from_inline(flags.inline_spec, flags.d);
}

EvalMode parse_mode(const std::string& s) {
  if (s.empty() || s == "auto") return EvalMode::automatic;
  if (s == "analytic") return EvalMode::analytic;
  if (s == "quadrature") return EvalMode::quadrature;
  if (s == "fft") return EvalMode::fft_grid;
  throw config_error("unknown --mode '" + s + "' (auto|analytic|quadrature|fft)");
}

/// q component: plain number, or pi / l with an optional numeric prefix
/// (l is the checkerboard cell edge).
Real parse_q_component(const std::string& tok, const FermiSea& sea) {
  auto unit_value = [&](const std::string& unit) -> Real {
    if (unit == "pi") return kPi;
    if (unit == "l") {
      const auto* cb = sea.get_if<CheckerboardSea>();
      if (!cb) throw config_error("'l' in --q needs a checkerboard sea");
      return kPi / cb->m;
    }
    throw config_error("cannot parse q component '" + tok + "'");
  };
  try {
    std::size_t pos = 0;
    const Real v = std::stod(tok, &pos);
    if (pos == tok.size()) return v;
    return v * unit_value(tok.substr(pos));
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    return unit_value(tok);
  }
}

// ---- subcommand bodies ----------------------------------------------------

struct CommonFlags {
  int threads = 0;
  std::uint64_t seed = 12345;
  std::string out;
};

int cmd_kernel_entry(const SeaFlags& sf, const CommonFlags& cf,
                     const std::vector<std::string>& offsets, int xmax,
                     const std::string& mode, int grid) {
  SeaDefinition def = resolve_sea(sf);
  const int d = def.sea.dimension();
  QuadratureOptions qopts;
  qopts.grid_points = grid;
  CorrelationKernel kernel(def.sea, parse_mode(mode), qopts);
  std::vector<VectorI> xs;
  if (!offsets.empty()) {
    for (const auto& s : offsets) {
      const std::vector<int> comps = parse_int_list(s, "--x");
      if (static_cast<int>(comps.size()) != d)
        throw config_error("--x needs " + std::to_string(d) + " components");
      VectorI x(d);
      for (int i = 0; i < d; ++i) x[i] = comps[i];
      xs.push_back(x);
    }
  } else {
    if (xmax < 0) throw config_error("give --x offsets or --xmax radius");
    VectorI x = VectorI::Constant(d, -xmax);
    for (;;) {
      xs.push_back(x);
      int axis = d - 1;
      while (axis >= 0 && ++x[axis] > xmax) x[axis--] = -xmax;
      if (axis < 0) break;
    }
  }
  std::ostringstream out;
  out << "# fermsea csv v1 kernel-entry\n";
  for (int i = 0; i < d; ++i) out << "x" << i + 1 << ',';
  out << "re,im\n";
  for (const auto& x : xs) {
    const Complex g = kernel.gamma_entry(x);
    for (int i = 0; i < d; ++i) out << x[i] << ',';
    out << format_real(g.real()) << ',' << format_real(g.imag()) << '\n';
  }
  write_output(cf.out, out.str());
  return 0;
}

int cmd_entropy_sweep(const SeaFlags& sf, const CommonFlags& cf,
                      const std::string& L_spec, Real base,
                      const std::string& mode, int grid, bool fourier,
                      const std::string& shape) {
  SeaDefinition def = resolve_sea(sf);
  SweepOptions opts;
  opts.base = base;
  opts.mode = parse_mode(mode);
  opts.quadrature.grid_points = grid;
  opts.fourier_check = fourier;
  opts.threads = cf.threads;
  if (shape == "cube")
    opts.shape = RegionShape::cube;
  else if (shape == "ball")
    opts.shape = RegionShape::ball;
  else
    throw config_error("--shape must be cube or ball");
  const std::vector<int> L_list = parse_int_list(L_spec, "--L");
  require_increasing(L_list, "--L");
  const std::vector<SweepRow> rows = sweep(def.sea, L_list, opts);
  write_output(cf.out, sweep_csv(rows, fourier));
  return 0;
}

int cmd_xi_map(const SeaFlags& sf, const CommonFlags& cf,
               const std::vector<std::string>& q_specs, Real cone_eps,
               int dirs, int radii, int xi_grid) {
  SeaDefinition def = resolve_sea(sf);
  const int d = def.sea.dimension();
  XiOptions xopts;
  xopts.grid_points = xi_grid;
  std::ostringstream out;
  out << "# fermsea csv v1 xi-map\n";
  for (int i = 0; i < d; ++i) out << "q" << i + 1 << ',';
  out << "xi,cone_lower,cone_upper\n";

  auto emit = [&](const VectorR& q, Real value, Real lo, Real hi) {
    for (int i = 0; i < d; ++i) out << format_real(q[i]) << ',';
    out << format_real(value) << ',' << format_real(lo) << ','
        << format_real(hi) << '\n';
  };

  if (!q_specs.empty()) {
    // Cone bounds per row when the sea has an analytic surface projection.
    bool have_s = def.sea.get_if<BallUnionSea>() || def.sea.get_if<IntervalProductSea>();
    Real s_minus = 0.0, s_plus = 0.0;
    if (have_s) {
      const SurfaceProjection sp =
          sample_surface_projection(def.sea, dirs, cf.seed);
      s_minus = sp.s_minus;
      s_plus = sp.s_plus;
    }
    for (const auto& spec : q_specs) {
      std::istringstream ss(spec);
      std::string tok;
      std::vector<Real> comps;
      while (std::getline(ss, tok, ','))
        comps.push_back(parse_q_component(tok, def.sea));
      if (static_cast<int>(comps.size()) != d)
        throw config_error("--q needs " + std::to_string(d) + " components");
      VectorR q(d);
      for (int i = 0; i < d; ++i) q[i] = comps[i];
      const Real v = xi(def.sea, q, xopts);
      const Real norm = q.norm();
      emit(q, v, have_s ? s_minus * norm : std::nan(""),
           have_s ? s_plus * norm : std::nan(""));
    }
  }
  if (cone_eps > 0.0) {
    const ConeReport report =
        cone_check(def.sea, cone_eps, dirs, radii, cf.seed, xopts);
    for (const auto& s : report.samples)
      emit(s.q, s.xi_value, s.lower, s.upper);
    out << "# cone: s_minus=" << format_real(report.s_minus)
        << " s_plus=" << format_real(report.s_plus)
        << " empirical=" << (report.empirical_slopes ? 1 : 0)
        << " violations=" << report.violations << '\n';
  }
  if (q_specs.empty() && !(cone_eps > 0.0))
    throw config_error("xi-map needs --q samples and/or --cone radius");
  write_output(cf.out, out.str());
  return 0;
}

int cmd_purity_check(const SeaFlags& sf, const CommonFlags& cf,
                     const std::string& L_spec, const std::string& mode,
                     int grid) {
  SeaDefinition def = resolve_sea(sf);
  const std::vector<int> L_list = parse_int_list(L_spec, "--L");
  require_increasing(L_list, "--L");
  QuadratureOptions qopts;
  qopts.grid_points = grid;
  CorrelationKernel kernel(def.sea, parse_mode(mode), qopts);
  std::ostringstream out;
  out << "# fermsea csv v1 purity-check\n";
  out << "d,L,purity_fourier,purity_matrix,rel_diff\n";
  for (int L : L_list) {
    const Real pf = purity_via_fourier(def.sea, L);
    const RegionMatrix m =
        build_region_matrix(kernel, Region::cube(def.sea.dimension(), L));
    const Real pm = purity_lower_bound(m);
    const Real rel = std::abs(pf - pm) / std::max(std::abs(pm), 1e-300);
    out << def.sea.dimension() << ',' << L << ',' << format_real(pf) << ','
        << format_real(pm) << ',' << format_real(rel) << '\n';
  }
  write_output(cf.out, out.str());
  return 0;
}

int cmd_fejer_sum(const CommonFlags& cf, const std::string& L_spec) {
  const std::vector<int> L_list = parse_int_list(L_spec, "--L");
  std::ostringstream out;
  out << "# fermsea csv v1 fejer-sum\n";
  out << "L,quadrature,digamma_formula,abs_diff,ratio_2lnL\n";
  for (int L : L_list) {
    const FejerLinearSum s = fejer_linear_sum(L);
    const Real ratio =
        L > 1 ? s.quadrature / (2.0 * std::log(static_cast<Real>(L)))
              : std::nan("");
    out << L << ',' << format_real(s.quadrature) << ','
        << format_real(s.digamma_formula) << ','
        << format_real(std::abs(s.quadrature - s.digamma_formula)) << ','
        << format_real(ratio) << '\n';
  }
  write_output(cf.out, out.str());
  return 0;
}

int cmd_fit_scaling(const CommonFlags& cf, const std::string& in_path, int d,
                    int min_L) {
  std::ifstream in(in_path);
  if (!in) throw config_error("cannot open sweep CSV '" + in_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::vector<EntropyReport> rows = entropy_reports_from_csv(buffer.str());
  if (rows.empty()) throw config_error("sweep CSV has no data rows");
  for (const auto& r : rows)
    if (r.d != d)
      throw config_error("CSV rows have d=" + std::to_string(r.d) +
                         " but --d is " + std::to_string(d));
  const ScalingFit fit = fit_scaling(rows, d, min_L);
  const SandwichReport sandwich = sandwich_report(rows, d);
  write_output(cf.out, scaling_fit_json(fit, &sandwich));
  return 0;
}

int cmd_jw_check(const CommonFlags& cf, const std::string& N_spec, Real T0,
                 const std::string& T1_spec, int m_flag, Real base) {
  const std::vector<int> Ns = parse_int_list(N_spec, "--N");
  std::vector<Real> t1 = {1.0, 0.0};
  {
    std::istringstream ss(T1_spec);
    std::string tok;
    std::vector<Real> vals;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw config_error("cannot parse --T1 '" + T1_spec + "'");
      }
    }
    if (vals.empty() || vals.size() > 2)
      throw config_error("--T1 must be 're' or 're,im'");
    t1[0] = vals[0];
    t1[1] = vals.size() == 2 ? vals[1] : 0.0;
  }
  const Complex T1(t1[0], t1[1]);
  std::ostringstream out;
  out << "# fermsea csv v1 jw-check\n";
  out << "N,m,block,spin_entropy,fermion_entropy,abs_diff\n";
  Real max_diff = 0.0;
  for (int N : Ns) {
    const int m = m_flag >= 0 ? m_flag : N / 2;
    if (m > N) throw config_error("--m exceeds N");
    const JwCouplings h = couplings_from_hopping(T0, T1);
    const SpinChainSpec spec{N, h.h0, h.h1, h.h2};
    const MatrixC T = open_chain_single_particle(N, T0, T1);
    for (int block = 1; block <= N / 2; ++block) {
      const Real s_spin = spin_ground_entropy(spec, block, base);
      const Real s_ferm = fermion_chain_entropy(T, m, block, base);
      const Real diff = std::abs(s_spin - s_ferm);
      max_diff = std::max(max_diff, diff);
      out << N << ',' << m << ',' << block << ',' << format_real(s_spin) << ','
          << format_real(s_ferm) << ',' << format_real(diff) << '\n';
    }
  }
  out << "# max_abs_diff = " << format_real(max_diff) << '\n';
  write_output(cf.out, out.str());
  return 0;
}

int cmd_selftest(const CommonFlags& cf) {
  const std::vector<CheckResult> results = run_selftest(cf.threads, cf.seed);
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << '\n';
    if (!r.pass) ++failures;
  }
  std::cout << results.size() - failures << "/" << results.size()
            << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"free-fermion entanglement scaling toolkit"};
  app.require_subcommand(1);

  CommonFlags cf;
  app.add_option("--threads", cf.threads, "worker pool size")
      ->envname("FERMSEA_THREADS");
  app.add_option("--seed", cf.seed, "seed for randomized sampling");

  SeaFlags sf_kernel, sf_sweep, sf_xi, sf_purity;
  std::vector<std::string> kernel_x, xi_q;
  int kernel_xmax = -1, grid = 0, xi_grid = 0, dirs = 32, radii = 5;
  int fit_d = 1, fit_minL = 8, jw_m = -1;
  std::string L_spec, mode, shape = "cube", fit_in, jw_N, jw_T1 = "1";
  Real base = 2.0, cone_eps = 0.0, jw_T0 = 0.0;
  bool fourier = false;

  CLI::App* c_kernel = app.add_subcommand("kernel-entry",
                                          "correlation kernel entries");
  add_sea_flags(c_kernel, sf_kernel);
  c_kernel->add_option("--x", kernel_x, "offset, comma-separated components");
  c_kernel->add_option("--xmax", kernel_xmax, "dump the box [-R, R]^d");
  c_kernel->add_option("--mode", mode, "auto|analytic|quadrature|fft");
  c_kernel->add_option("--grid", grid, "quadrature nodes per axis");
  c_kernel->add_option("-o,--out", cf.out, "output CSV (default stdout)");

  CLI::App* c_sweep = app.add_subcommand("entropy-sweep",
                                         "block entropies over a list of L");
  add_sea_flags(c_sweep, sf_sweep);
  c_sweep->add_option("--L", L_spec, "L list, e.g. 1,2,4")->required();
  c_sweep->add_option("--base", base, "entropy log base (default 2)");
  c_sweep->add_option("--mode", mode, "auto|analytic|quadrature|fft");
  c_sweep->add_option("--grid", grid, "quadrature nodes per axis");
  c_sweep->add_flag("--fourier-check", fourier,
                    "also compute purity via the Fourier route");
  c_sweep->add_option("--shape", shape, "cube|ball (default cube)");
  c_sweep->add_option("-o,--out", cf.out, "output CSV");

  CLI::App* c_xi = app.add_subcommand("xi-map", "Xi(q) samples / cone check");
  add_sea_flags(c_xi, sf_xi);
  c_xi->add_option("--q", xi_q, "q vector; components may use pi and l units");
  c_xi->add_option("--cone", cone_eps, "cone check within ||q|| <= eps");
  c_xi->add_option("--dirs", dirs, "sampled directions (default 32)");
  c_xi->add_option("--radii", radii, "radii per direction (default 5)");
  c_xi->add_option("--xi-grid", xi_grid, "grid override for dispersion seas");
  c_xi->add_option("-o,--out", cf.out, "output CSV");

  CLI::App* c_purity = app.add_subcommand(
      "purity-check", "tr(1-gamma~^2): Fourier route vs matrix route");
  add_sea_flags(c_purity, sf_purity);
  c_purity->add_option("--L", L_spec, "L list")->required();
  c_purity->add_option("--mode", mode, "kernel mode");
  c_purity->add_option("--grid", grid, "quadrature nodes per axis");
  c_purity->add_option("-o,--out", cf.out, "output CSV");

  CLI::App* c_fejer = app.add_subcommand("fejer-sum",
                                         "Fejer linear sum vs digamma formula");
  c_fejer->add_option("--L", L_spec, "L list")->required();
  c_fejer->add_option("-o,--out", cf.out, "output CSV");

  CLI::App* c_fit = app.add_subcommand("fit-scaling",
                                       "fit S ~ c L^{d-1} ln L + ... from CSV");
  c_fit->add_option("--in", fit_in, "sweep CSV path")->required();
  c_fit->add_option("--d", fit_d, "dimension of the sweep")->required();
  c_fit->add_option("--min-L", fit_minL, "smallest L used in the fit");
  c_fit->add_option("-o,--out", cf.out, "output JSON");

  CLI::App* c_jw = app.add_subcommand(
      "jw-check", "spin-chain oracle vs fermionic block entropies");
  c_jw->add_option("--N", jw_N, "chain lengths, e.g. 6,8,10")->required();
  c_jw->add_option("--T0", jw_T0, "on-site amplitude (incl. mu)");
  c_jw->add_option("--T1", jw_T1, "hopping amplitude 're[,im]'");
  c_jw->add_option("--m", jw_m, "filled modes (default N/2)");
  c_jw->add_option("--base", base, "entropy log base");
  c_jw->add_option("-o,--out", cf.out, "output CSV");

  app.add_subcommand("selftest", "run the module invariant suite");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));  // CLI11 consumes a reversed vector
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  }

  try {
    if (c_kernel->parsed())
      return cmd_kernel_entry(sf_kernel, cf, kernel_x, kernel_xmax, mode, grid);
    if (c_sweep->parsed())
      return cmd_entropy_sweep(sf_sweep, cf, L_spec, base, mode, grid, fourier,
                               shape);
    if (c_xi->parsed())
      return cmd_xi_map(sf_xi, cf, xi_q, cone_eps, dirs, radii, xi_grid);
    if (c_purity->parsed())
      return cmd_purity_check(sf_purity, cf, L_spec, mode, grid);
    if (c_fejer->parsed()) return cmd_fejer_sum(cf, L_spec);
    if (c_fit->parsed()) return cmd_fit_scaling(cf, fit_in, fit_d, fit_minL);
    if (c_jw->parsed())
      return cmd_jw_check(cf, jw_N, jw_T0, jw_T1, jw_m, base);
    return cmd_selftest(cf);
  } catch (const config_error& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const capability_error& e) {
    std::cerr << "error: capability: " << e.what() << '\n';
    return 4;
  } catch (const numeric_error& e) {
    std::cerr << "error: numeric: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 3;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace fermsea::cli
