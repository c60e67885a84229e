#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance_suite.hpp"
#include "nibm/version.hpp"

using json = nlohmann::ordered_json;
using namespace nibm;

namespace {

struct arg_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scalars go in `record`; grids go in `columns` / `rows`.
struct Output {
  json record = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string scalar_csv(const json& v) {
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string render(const Output& o, const std::string& format) {
  std::ostringstream s;
  if (format == "csv") {
    if (o.columns.empty()) {
      s << "key,value\n";
      for (const auto& [k, v] : o.record.items()) s << k << "," << scalar_csv(v) << "\n";
    } else {
      for (std::size_t j = 0; j < o.columns.size(); ++j) s << (j ? "," : "") << o.columns[j];
      s << "\n";
      for (const auto& r : o.rows) {
        for (std::size_t j = 0; j < r.size(); ++j) s << (j ? "," : "") << num(r[j]);
        s << "\n";
      }
    }
    return s.str();
  }
  json j = o.record;
  if (!o.columns.empty()) {
    json rows = json::array();
    for (const auto& r : o.rows) {
      json row = json::object();
      for (std::size_t k = 0; k < r.size(); ++k) row[o.columns[k]] = r[k];
      rows.push_back(row);
    }
    j["rows"] = rows;
  }
  return j.dump(2) + "\n";
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

json params_of(const CLI::App* app) {
  json p = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h" || opt->get_expected_max() == 0) continue;
    while (!name.empty() && name.front() == '-') name.erase(0, 1);
    auto res = opt->results();
    if (res.empty()) {
      p[name] = opt->get_default_str();
    } else if (res.size() == 1) {
      p[name] = res[0];
    } else {
      p[name] = res;
    }
  }
  return p;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

const HMSolution& hm_solution() {
  static const HMSolution s = hastings_mcleod(12.0, 6000);
  return s;
}

double hm_at(double s) {
  if (!hm_solution().contains(s)) throw arg_error("sigma outside the Hastings-McLeod grid [-12, 12]");
  return hm_solution()(s);
}

Output run_phase(double T) {
  auto pd = phase_data(T);
  Output o;
  o.record["T"] = pd.T;
  o.record["regime"] = to_string(pd.regime);
  o.record["k"] = pd.k;
  o.record["k_tilde"] = pd.kt;
  o.record["alpha"] = pd.alpha;
  o.record["beta"] = pd.beta;
  o.record["K"] = pd.K;
  o.record["E"] = pd.E;
  o.record["K_tilde"] = pd.Kt;
  o.record["E_tilde"] = pd.Et;
  o.record["nome"] = pd.q;
  o.record["lagrange_l"] = pd.lagrange_l;
  if (pd.regime == Regime::supercritical) {
    o.record["t_c"] = pd.t_c;
    o.record["pearcey_d"] = pearcey_d(pd);
  }
  return o;
}

Output run_recurrence(int n, double T, double tau, unsigned digits) {
  Output o;
  o.columns = {"k", "beta", "gamma_sq", "log_h"};
  auto fill = [&](const auto& rt) {
    for (int k = 0; k <= n; ++k)
      o.rows.push_back({double(k), k < int(rt.beta.size()) ? static_cast<double>(rt.beta[k]) : std::nan(""),
                        static_cast<double>(rt.gamma_sq[k]), static_cast<double>(rt.log_h[k])});
    o.record["gamma_sq_nn"] = static_cast<double>(rt.gamma_sq[n]);
  };
  if (digits > 16) {
    mpfr_real::default_precision(digits);
    fill(stieltjes(build_lattice<mpfr_real>(n, tau, T), n, false));
  } else {
    fill(stieltjes(build_lattice<double>(n, tau, T), n, false));
  }
  double qs = in_critical_window(T, n) ? hm_at(sigma_of(n, T)) : std::nan("");
  o.record["regime"] = in_critical_window(T, n) ? "critical" : to_string(phase_data(T).regime);
  o.record["gamma_sq_asymptotic"] = gamma_sq_asymptotic(n, T, tau, qs);
  return o;
}

Output run_winding(int n, double T, int omega_max, int quad) {
  auto wd = winding_distribution(n, T, omega_max, quad);
  Output o;
  o.columns = {"omega", "probability"};
  for (int w = -omega_max; w <= omega_max; ++w) o.rows.push_back({double(w), wd.prob(w)});
  o.record["n"] = n;
  o.record["T"] = T;
  o.record["mass_residual"] = wd.residual;
  o.record["max_imag"] = wd.max_imag;
  return o;
}

Output run_painleve(double L, int N, double s_min, double s_max, int points) {
  auto hm = hastings_mcleod(L, N);
  if (!hm.contains(s_min) || !hm.contains(s_max) || points < 2) throw arg_error("painleve: sample range outside [-L, L]");
  Output o;
  o.columns = {"s", "q", "q_prime"};
  for (int i = 0; i < points; ++i) {
    double s = s_min + (s_max - s_min) * i / (points - 1);
    auto v = hm.eval(s);
    o.rows.push_back({s, v[0], v[1]});
  }
  o.record["q0"] = hm(0.0);
  o.record["residual"] = hm.residual;
  o.record["newton_iterations"] = hm.newton_iterations;
  return o;
}

Output run_psi(cplx zeta, double s) {
  Mat2c P = psi_solve(zeta, s, hm_solution());
  Output o;
  o.record["zeta"] = cplx_json(zeta);
  o.record["s"] = s;
  o.record["psi"] = json::array({json::array({cplx_json(P(0, 0)), cplx_json(P(0, 1))}),
                                 json::array({cplx_json(P(1, 0)), cplx_json(P(1, 1))})});
  o.record["det_minus_one"] = std::abs(P.determinant() - 1.0);
  return o;
}

Output kernel_record(cplx value, double estimate) {
  Output o;
  o.record["value"] = value.real();
  o.record["imag"] = value.imag();
  o.record["error_estimate"] = estimate;
  return o;
}

Output run_density(int n, double T, double tau, double t, int points, unsigned digits) {
  Output o;
  o.columns = {"x", "density"};
  auto fill = [&](const auto& c) {
    auto d = density_grid(c, t, points);
    for (int i = 0; i < points; ++i) o.rows.push_back({-pi + 2 * pi * i / points, d[i]});
  };
  if (digits > 16)
    fill(correlation_context<mpfr_real>(n, T, tau, digits));
  else
    fill(correlation_context(n, T, tau));
  return o;
}

Output probe_output(const std::vector<ProbePoint>& pts) {
  Output o;
  o.columns = {"n", "value", "target", "error", "cancellation_digits", "digits"};
  for (const auto& p : pts) o.rows.push_back({double(p.n), p.value, p.target, p.error, p.cancellation_digits, double(p.digits)});
  return o;
}

Output run_oracle(int M, int N, std::vector<int> starts, std::vector<int> ends, bool winding) {
  Output o;
  if (winding) {
    auto h = dp_winding_histogram(M, N, starts);
    o.columns = {"offset", "probability"};
    for (const auto& [w, p] : h) o.rows.push_back({double(w), p});
    o.record["brownian_time"] = brownian_time(int(starts.size()), M, N);
    return o;
  }
  if (ends.empty()) ends = starts;
  auto r = km_discrete_check({M, N, starts, ends});
  o.columns = {"offset", "count"};
  for (const auto& [w, c] : r.offsets.by_offset) o.rows.push_back({double(w), static_cast<double>(c)});
  o.record["lgv_equal"] = r.equal;
  o.record["cyclic_pairing"] = r.offsets.cyclic_pairing;
  o.record["total"] = r.offsets.total().str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonintersecting Brownian motions on the circle: phase diagram, asymptotics, kernels and oracles"};
  app.set_version_flag("--version", std::string(nibm::version));
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json", out_path, manifest_path;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", out_path, "Write output to this file instead of stdout");
  app.add_option("--manifest", manifest_path, "Write a run manifest (parameters, version, wall time, digest)");

  std::function<Output()> action;
  int n = 40, points = 101, omega_max = 3, quad = 256, N = 4000, M = 12, steps = 12;
  unsigned digits = 0;
  double T = 16.0, tau = 0.5, t = 5.0, L = 8.0, s_min = -8.0, s_max = 8.0, s = 0.0, zr = 0.5, zi = 0.5, sigma = 0.0;
  double ti = 5.0, tj = 5.0, x = 0.0, y = 0.0, xi = 0.0, eta = 0.0;
  std::vector<int> ns, starts{0, 2}, ends;
  bool tau_given = false, winding_mode = false, parity_tau = true;
  std::vector<int> only;
  std::string suite = "primary";

  auto add_tau = [&](CLI::App* c) {
    c->add_option("--tau", tau, "Lattice shift tau (defaults to eps(n))")->each([&](const std::string&) { tau_given = true; });
  };
  auto lattice_tau = [&] { return tau_given ? tau : half_parity(n); };

  auto* ph = app.add_subcommand("phase", "Phase data of the equilibrium problem at T");
  ph->add_option("--T", T, "Total time")->required();
  ph->callback([&] { action = [&] { return run_phase(T); }; });

  auto* rc = app.add_subcommand("recurrence", "Recurrence coefficients of the discrete Gaussian polynomials");
  rc->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  rc->add_option("--T", T)->required()->check(CLI::PositiveNumber);
  add_tau(rc);
  rc->add_option("--digits", digits, "Working precision in decimal digits (0 = double)");
  rc->callback([&] { action = [&] { return run_recurrence(n, T, lattice_tau(), digits); }; });

  auto* wd = app.add_subcommand("winding", "Distribution of the total winding number");
  wd->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  wd->add_option("--T", T)->required()->check(CLI::PositiveNumber);
  wd->add_option("--omega-max", omega_max)->capture_default_str()->check(CLI::NonNegativeNumber);
  wd->add_option("--quad-points", quad)->capture_default_str()->check(CLI::PositiveNumber);
  wd->callback([&] { action = [&] { return run_winding(n, T, omega_max, quad); }; });

  auto* pl = app.add_subcommand("painleve", "Hastings-McLeod solution of Painleve II");
  pl->add_option("--L", L, "Half-width of the solution interval")->capture_default_str();
  pl->add_option("--N", N, "Grid intervals")->capture_default_str();
  pl->add_option("--s-min", s_min)->capture_default_str();
  pl->add_option("--s-max", s_max)->capture_default_str();
  pl->add_option("--points", points)->capture_default_str();
  pl->callback([&] { action = [&] { return run_painleve(L, N, s_min, s_max, points); }; });

  auto* ps = app.add_subcommand("psi", "Lax-pair solution Psi(zeta; s)");
  ps->add_option("--zeta-re", zr)->capture_default_str();
  ps->add_option("--zeta-im", zi)->capture_default_str();
  ps->add_option("--s", s)->capture_default_str();
  ps->callback([&] { action = [&] { return run_psi(cplx(zr, zi), s); }; });

  auto* kn = app.add_subcommand("kernel", "Correlation kernels");
  kn->require_subcommand(1)->fallthrough();
  auto* kp = kn->add_subcommand("pearcey", "Extended Pearcey kernel K^P_{s,t}(xi, eta)");
  kp->add_option("--s", ti)->required();
  kp->add_option("--t", tj)->required();
  kp->add_option("--xi", xi)->required();
  kp->add_option("--eta", eta)->required();
  kp->callback([&] {
    action = [&] {
      auto v = pearcey_kernel(ti, tj, xi, eta);
      return kernel_record(v.value, v.quad_estimate);
    };
  });
  auto* kt = kn->add_subcommand("tacnode", "Extended tacnode kernel K^tac_{tau_i,tau_j}(xi, eta; sigma)");
  kt->add_option("--tau-i", ti)->required();
  kt->add_option("--tau-j", tj)->required();
  kt->add_option("--xi", xi)->required();
  kt->add_option("--eta", eta)->required();
  kt->add_option("--sigma", sigma)->capture_default_str();
  kt->callback([&] {
    action = [&] {
      hm_at(sigma);
      auto v = tacnode_kernel(ti, tj, xi, eta, sigma, hm_solution());
      return kernel_record(v.value, v.quad_estimate);
    };
  });
  auto* kf = kn->add_subcommand("finite", "Finite-n correlation kernel K_{t_i,t_j}(x, y)");
  kf->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  kf->add_option("--T", T)->required()->check(CLI::PositiveNumber);
  add_tau(kf);
  kf->add_option("--ti", ti)->required();
  kf->add_option("--tj", tj)->required();
  kf->add_option("--x", x)->required();
  kf->add_option("--y", y)->required();
  kf->callback([&] {
    action = [&] {
      unsigned used = 0;
      auto v = detail::adaptive_kernel(n, T, lattice_tau(), ti, tj, x, y, used);
      Output o = kernel_record(v.value, 0.0);
      o.record.erase("error_estimate");
      o.record["tilde"] = cplx_json(v.tilde);
      o.record["w_circ"] = cplx_json(v.w_circ);
      o.record["cancellation_digits"] = v.cancellation_digits;
      o.record["digits"] = used;
      return o;
    };
  });

  auto* dn = app.add_subcommand("density", "One-point density K_{t,t}(x, x) on a uniform grid");
  dn->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  dn->add_option("--T", T)->required()->check(CLI::PositiveNumber);
  add_tau(dn);
  dn->add_option("--t", t)->required();
  dn->add_option("--points", points)->capture_default_str()->check(CLI::PositiveNumber);
  dn->callback([&] {
    action = [&] { return run_density(n, T, lattice_tau(), t, points, kernel_digits(n, T, t, t)); };
  });

  auto* pr = app.add_subcommand("probe", "Convergence of the finite kernel to its scaling limit");
  pr->require_subcommand(1)->fallthrough();
  ProbeArgs pa;
  auto add_probe_args = [&](CLI::App* c) {
    c->add_option("--ns", ns, "Sizes n")->required()->delimiter(',');
    c->add_option("--tau-i", pa.tau_i)->capture_default_str();
    c->add_option("--tau-j", pa.tau_j)->capture_default_str();
    c->add_option("--xi", pa.xi)->capture_default_str();
    c->add_option("--eta", pa.eta)->capture_default_str();
    c->add_option("--tau", pa.tau, "Lattice shift (defaults to eps(n))")->each([&](const std::string&) { parity_tau = false; });
  };
  auto* pp = pr->add_subcommand("pearcey", "Cusp scaling around t^c");
  add_probe_args(pp);
  pp->add_option("--T", T)->required();
  pp->callback([&] {
    action = [&] {
      pa.half_parity_tau = parity_tau;
      return probe_output(pearcey_probe(ns, T, pa));
    };
  });
  auto* pt = pr->add_subcommand("tacnode", "Critical scaling around T/2");
  add_probe_args(pt);
  pt->add_option("--sigma", sigma)->capture_default_str();
  pt->callback([&] {
    action = [&] {
      hm_at(sigma);
      pa.half_parity_tau = parity_tau;
      return probe_output(tacnode_probe(ns, sigma, hm_solution(), pa));
    };
  });

  auto* orc = app.add_subcommand("oracle", "Exact nonintersecting walkers on the discrete cylinder");
  orc->add_option("--M", M, "Circumference")->capture_default_str();
  orc->add_option("--N", steps, "Number of steps")->capture_default_str();
  orc->add_option("--starts", starts, "Start sites")->delimiter(',')->capture_default_str();
  orc->add_option("--ends", ends, "End sites (defaults to starts)")->delimiter(',');
  orc->add_flag("--winding", winding_mode, "Winding histogram of closed configurations instead of the LGV check");
  orc->callback([&] { action = [&] { return run_oracle(M, steps, starts, ends, winding_mode); }; });

  auto* vf = app.add_subcommand("verify", "Run the acceptance suite");
  vf->add_option("--suite", suite)->check(CLI::IsMember({"primary"}))->capture_default_str();
  vf->add_option("--only", only, "Criterion ids")->delimiter(',');
  int verify_failures = 0;
  vf->callback([&] {
    action = [&] {
      Output o;
      o.columns = {"criterion", "pass", "seconds"};
      json details = json::object();
      auto res = acceptance::run(only, [](const acceptance::Result& r) { std::cerr << acceptance::format_line(r) << std::endl; });
      for (const auto& r : res) {
        o.rows.push_back({double(r.id), r.pass ? 1.0 : 0.0, r.seconds});
        details[std::to_string(r.id)] = r.detail;
        verify_failures += !r.pass;
      }
      o.record["suite"] = suite;
      o.record["failed"] = verify_failures;
      o.record["details"] = details;
      return o;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const CLI::App* leaf = app.get_subcommands().front();
  std::string name = leaf->get_name();
  while (!leaf->get_subcommands().empty()) {
    leaf = leaf->get_subcommands().front();
    name += " " + leaf->get_name();
  }

  auto t0 = std::chrono::steady_clock::now();
  std::string text;
  try {
    text = render(action(), format);
  } catch (const arg_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const regime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!(f << text)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
  }
  if (!manifest_path.empty()) {
    json m = json::object();
    m["subcommand"] = name;
    json params = params_of(&app);
    for (const CLI::App* c = app.get_subcommands().front();; c = c->get_subcommands().front()) {
      params.update(params_of(c));
      if (c->get_subcommands().empty()) break;
    }
    m["params"] = params;
    m["version"] = nibm::version;
    m["wall_time_s"] = wall;
    std::ostringstream d;
    d << std::hex << std::setw(16) << std::setfill('0') << fnv1a(text);
    m["digest"] = "fnv1a64:" + d.str();
    std::ofstream f(manifest_path);
    if (!(f << m.dump(2) << "\n")) {
      std::cerr << "error: cannot write " << manifest_path << "\n";
      return 2;
    }
  }
  return verify_failures ? 1 : 0;
}
