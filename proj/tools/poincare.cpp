// Command-line front end: evaluation and verification of the elliptic and
// degree-2 Poincare series machinery. JSON is the canonical output format;
// CSV is available for the scan tables; the SL2 module diagrams render as
// monospaced text.

#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "poincare/elliptic.hpp"
#include "poincare/exact_terms.hpp"
#include "poincare/gk_support.hpp"
#include "poincare/p2.hpp"
#include "poincare/run_config.hpp"
#include "poincare/siegel.hpp"
#include "poincare/sp2.hpp"
#include "poincare/verify.hpp"

namespace {

using nlohmann::json;
using poincare::cli::RunConfig;
using cplx = std::complex<double>;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitAdvisory = 2;
constexpr int kExitUsage = 64;

json cplx_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

poincare::siegel::SymMat2 parse_sym(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw CLI::ValidationError(std::string(what) + " needs m11,m12,m22");
  return {v[0], v[1], v[2]};
}

poincare::siegel::SiegelPoint parse_point(const std::vector<double>& v) {
  if (v.size() != 6)
    throw CLI::ValidationError("Z needs x11,x12,x22,y11,y12,y22");
  return poincare::siegel::SiegelPoint({v[0], v[1], v[2]}, {v[3], v[4], v[5]});
}

poincare::exact::WeightedFunction parse_seed(const std::string& kind, int k, int d, int n) {
  using namespace poincare::exact;
  if (kind == "phi") return make_phi(k, d, n);
  if (kind == "psi") return make_psi(k, n);
  if (kind == "psi-tilde") return make_psi_tilde(k, n);
  if (kind == "phi-tilde") return make_phi_tilde(k, n);
  throw CLI::ValidationError("seed kind must be phi | psi | psi-tilde | phi-tilde");
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"elliptic and degree-2 Siegel Poincare series toolkit"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::string format;
  unsigned workers = 0;
  bool emit_plot_data = false;
  app.add_option("--config", config_path, "JSON config file (or POINCARE_CONFIG)");
  app.add_option("--format", format, "output format: json | csv | text");
  app.add_option("--workers", workers, "worker thread count");
  app.add_flag("--emit-plot-data", emit_plot_data, "dump plain (x, y) rows for plotting");

  // ---- elliptic ----------------------------------------------------------
  auto* elliptic = app.add_subcommand("elliptic", "elliptic Poincare series");
  auto* el_eval = elliptic->add_subcommand("eval", "truncated series evaluation");
  std::string kind1 = "phi", kind2 = "phi";
  int k1 = 10, d1 = 0, n1 = 1, k2 = 4, d2 = 0, n2 = 1;
  std::vector<double> tau_v = {0.0, 2.0};
  long el_height = 0;
  double selberg_re = 0.0, selberg_im = 0.0;
  bool selberg = false;
  el_eval->add_option("--kind1", kind1, "first factor: phi | psi | psi-tilde | phi-tilde");
  el_eval->add_option("--k1", k1);
  el_eval->add_option("--d1", d1);
  el_eval->add_option("--n1", n1);
  el_eval->add_option("--kind2", kind2, "second factor");
  el_eval->add_option("--k2", k2);
  el_eval->add_option("--d2", d2);
  el_eval->add_option("--n2", n2);
  el_eval->add_option("--tau", tau_v, "x y")->expected(2);
  el_eval->add_option("--height", el_height);
  el_eval->add_flag("--selberg", selberg, "numeric seed y^s e^{2 pi i n1 tau} (s = sre + i sim)");
  el_eval->add_option("--sre", selberg_re);
  el_eval->add_option("--sim", selberg_im);

  auto* el_spec = elliptic->add_subcommand("spectral-check", "pairing integral vs gamma product");
  int sp_k = -2, sp_l = 8, sp_n = 1, sp_m = 2;
  double sp_s = 0.75;
  el_spec->add_option("-k,--k", sp_k);
  el_spec->add_option("-l,--l", sp_l);
  el_spec->add_option("-s,--s", sp_s);
  el_spec->add_option("-n,--n", sp_n);
  el_spec->add_option("-m,--m", sp_m);

  // ---- sl2 ---------------------------------------------------------------
  auto* sl2 = app.add_subcommand("sl2", "graded module supports");
  auto* sl2_diag = sl2->add_subcommand("diagram", "render a canonical support");
  std::string diag_kind = "phi";
  int diag_k = 10, diag_d = 0, diag_radius = 8;
  sl2_diag->add_option("--kind", diag_kind, "phi | psi | phi-tilde | psi-tilde");
  sl2_diag->add_option("--k", diag_k);
  sl2_diag->add_option("--d", diag_d);
  sl2_diag->add_option("--radius", diag_radius);

  // ---- ktype -------------------------------------------------------------
  auto* ktype = app.add_subcommand("ktype", "U(2) K-type combinatorics");
  auto* kt_tensor = ktype->add_subcommand("tensor", "Clebsch-Gordan decomposition");
  int kt_a = 1, kt_b = 0, kt_a2 = 1, kt_b2 = 0;
  bool kt_grid = false;
  kt_tensor->add_option("-a", kt_a);
  kt_tensor->add_option("-b", kt_b);
  kt_tensor->add_option("-A", kt_a2);
  kt_tensor->add_option("-B", kt_b2);
  kt_tensor->add_flag("--grid", kt_grid, "render the occupied half-grid");

  // ---- siegel ------------------------------------------------------------
  auto* siegel_cmd = app.add_subcommand("siegel", "degree-2 kernel quantities");
  auto* sg_h = siegel_cmd->add_subcommand("h-integral", "confluent cone integral");
  double h_alpha = 5.0, h_beta = 1.0;
  std::vector<double> h_t = {1, 0, 1}, h_y = {1, 0, 1};
  sg_h->add_option("--alpha", h_alpha);
  sg_h->add_option("--beta", h_beta);
  sg_h->add_option("--t", h_t, "m11,m12,m22")->expected(3);
  sg_h->add_option("--y", h_y, "m11,m12,m22")->expected(3);

  auto* sg_psi = siegel_cmd->add_subcommand("psi", "harmonic Fourier term");
  int psi_k = 4;
  std::vector<double> psi_t = {1, 0, 1}, psi_z = {0, 0, 0, 1, 0, 1};
  sg_psi->add_option("--k", psi_k);
  sg_psi->add_option("--t", psi_t)->expected(3);
  sg_psi->add_option("--z", psi_z, "x11,x12,x22,y11,y12,y22")->expected(6);

  auto* sg_om = siegel_cmd->add_subcommand("omega-check", "laplacian annihilation residual");
  int om_k = 4;
  std::vector<double> om_z = {0, 0, 0, 1, 0, 1};
  sg_om->add_option("--k", om_k);
  sg_om->add_option("--z", om_z)->expected(6);

  // ---- sp2 ---------------------------------------------------------------
  auto* sp2_cmd = app.add_subcommand("sp2", "symplectic coset enumeration");
  auto* sp2_cosets = sp2_cmd->add_subcommand("cosets", "Delta \\ Sp2(Z) representatives");
  long sp2_height = 1;
  sp2_cosets->add_option("--height", sp2_height);

  // ---- p2 ----------------------------------------------------------------
  auto* p2_cmd = app.add_subcommand("p2", "degree-2 Poincare series");
  auto* p2_eval = p2_cmd->add_subcommand("eval", "truncated series value");
  int p2k = 4, p2l = 16;
  std::vector<double> p2_t = {1, 0, 1}, p2_tp = {1, 0, 1}, p2_z = {0, 0, 0, 2, 0, 2};
  long p2_height = 0;
  p2_eval->add_option("--k", p2k);
  p2_eval->add_option("--l", p2l);
  p2_eval->add_option("--t", p2_t)->expected(3);
  p2_eval->add_option("--tp", p2_tp)->expected(3);
  p2_eval->add_option("--z", p2_z)->expected(6);
  p2_eval->add_option("--height", p2_height);

  auto* p2_kst = p2_cmd->add_subcommand("kst-search", "certificate |det(C i y0 + D)| > 1");
  long kst_height = 3;
  std::vector<double> kst_grid = {1.1, 1.5, 2.0, 3.0};
  p2_kst->add_option("--height", kst_height);
  p2_kst->add_option("--grid", kst_grid)->expected(-1);

  auto* p2_scan = p2_cmd->add_subcommand("nonvanishing", "scan over l at Z = i y0 I");
  int scan_k = 4;
  double scan_y0 = 2.0;
  long scan_height = 0;
  std::vector<int> scan_ells = {8, 10, 12, 14, 16, 18, 20, 22, 24};
  std::vector<double> scan_t = {1, 0, 1}, scan_tp = {1, 0, 1};
  p2_scan->add_option("--k", scan_k);
  p2_scan->add_option("--y0", scan_y0);
  p2_scan->add_option("--height", scan_height);
  p2_scan->add_option("--ells", scan_ells)->expected(-1);
  p2_scan->add_option("--t", scan_t)->expected(3);
  p2_scan->add_option("--tp", scan_tp)->expected(3);

  auto* p2_probe = p2_cmd->add_subcommand("depth-probe", "iterated lowering ratios");
  int probe_k = 4, probe_l = 16, probe_dmax = 4;
  long probe_height = 0;
  double probe_y0 = 2.0, probe_step = 0.02, probe_prune = 1e-10;
  bool probe_bare = false;
  p2_probe->add_option("--k", probe_k);
  p2_probe->add_option("--l", probe_l);
  p2_probe->add_option("--height", probe_height);
  p2_probe->add_option("--y0", probe_y0);
  p2_probe->add_option("--dmax", probe_dmax);
  p2_probe->add_option("--step", probe_step);
  p2_probe->add_option("--prune", probe_prune);
  p2_probe->add_flag("--bare", probe_bare, "probe the bare product instead of the series");

  // ---- verify-all --------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify-all", "run the acceptance criteria");
  bool verify_quick = false;
  verify_cmd->add_flag("--quick", verify_quick, "exact symbolic subset only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  int exit_code = kExitOk;
  try {
    RunConfig cfg = RunConfig::load(config_path);
    if (!format.empty()) cfg.format = format;
    if (workers > 0) cfg.workers = workers;

    if (el_eval->parsed()) {
      const cplx tau{tau_v[0], tau_v[1]};
      const long H = el_height > 0 ? el_height : cfg.elliptic_height;
      json out;
      if (selberg) {
        const auto v = poincare::elliptic::eval_elliptic_poincare_numeric(
            poincare::elliptic::selberg_seed({selberg_re, selberg_im}, n1), k1 + k2, tau, H);
        out = {{"value", cplx_json(v.value)},
               {"tail", nullptr},
               {"params", {{"mode", "selberg"}, {"s", {selberg_re, selberg_im}}, {"n", n1},
                           {"weight", k1 + k2}, {"height", H}}}};
      } else {
        const auto f = poincare::exact::multiply(parse_seed(kind1, k1, d1, n1),
                                                 parse_seed(kind2, k2, d2, n2));
        const double margin = poincare::elliptic::convergence_margin(f);
        if (margin <= 0) exit_code = kExitAdvisory;
        const auto v = poincare::elliptic::eval_elliptic_poincare(f, tau, H, false);
        out = {{"value", cplx_json(v.value)},
               {"tail", v.tail_estimate},
               {"params",
                {{"kind1", kind1}, {"k1", k1}, {"d1", d1}, {"n1", n1},
                 {"kind2", kind2}, {"k2", k2}, {"d2", d2}, {"n2", n2},
                 {"weight", f.weight}, {"height", H},
                 {"convergence_margin", margin}}}};
        out["tail_note"] = "integral-comparison heuristic, reported only";
      }
      emit(out);
    } else if (el_spec->parsed()) {
      const auto r = poincare::elliptic::spectral_pairing_check(sp_k, sp_l, sp_s, sp_n, sp_m,
                                                                cfg.precision);
      emit({{"lhs", r.lhs},
            {"rhs", r.rhs},
            {"rel_err", r.rel_err},
            {"params", {{"k", sp_k}, {"l", sp_l}, {"s", sp_s}, {"n", sp_n}, {"m", sp_m}}}});
    } else if (sl2_diag->parsed()) {
      using namespace poincare::gk;
      Sl2Kind kind = Sl2Kind::phi_kd;
      if (diag_kind == "psi") kind = Sl2Kind::psi;
      else if (diag_kind == "phi-tilde") kind = Sl2Kind::phi_tilde;
      else if (diag_kind == "psi-tilde") kind = Sl2Kind::psi_tilde;
      else if (diag_kind != "phi") throw CLI::ValidationError("unknown diagram kind");
      const auto s = canonical_sl2_support(kind, diag_k, diag_d, diag_radius);
      if (cfg.format == "json")
        emit(sl2_support_to_json(s));
      else
        std::cout << render_sl2_diagram(s, diag_k);
    } else if (kt_tensor->parsed()) {
      using namespace poincare::gk;
      const KType t1(kt_a, kt_b), t2(kt_a2, kt_b2);
      const auto dec = clebsch_gordan(t1, t2);
      json arr = json::array();
      KTypeSupport sup;
      for (const auto& t : dec) {
        arr.push_back({{"a", t.a}, {"b", t.b}});
        sup.insert(t);
      }
      emit({{"factors", {{{"a", t1.a}, {"b", t1.b}}, {{"a", t2.a}, {"b", t2.b}}}},
            {"decomposition", arr},
            {"contains_scalar", contains_scalar_ktype(sup)}});
      if (kt_grid)
        std::cout << render_ktype_grid(sup, std::min(t1.b + t2.b, 0),
                                       std::max(t1.a + t2.a, 1));
    } else if (sg_h->parsed()) {
      const auto r = poincare::siegel::h_integral(h_alpha, h_beta, parse_sym(h_t, "T"),
                                                  parse_sym(h_y, "Y"), cfg.quadrature);
      emit({{"value", r.value},
            {"est_error", r.est_error},
            {"params",
             {{"alpha", h_alpha}, {"beta", h_beta}, {"t", h_t}, {"y", h_y},
              {"nodes", {r.nodes_u, r.nodes_theta}}}}});
    } else if (sg_psi->parsed()) {
      const auto v = poincare::siegel::psi(psi_k, parse_sym(psi_t, "T"), parse_point(psi_z),
                                           cfg.quadrature);
      emit({{"value", cplx_json(v)}, {"params", {{"k", psi_k}, {"t", psi_t}, {"z", psi_z}}}});
    } else if (sg_om->parsed()) {
      using poincare::siegel::SiegelPoint;
      const SiegelPoint Z = parse_point(om_z);
      const auto T = poincare::siegel::SymMat2::identity();

      const auto probe = poincare::siegel::h_integral(om_k + 1.0, 1.0, T, Z.Y, cfg.quadrature);
      const double umax = std::sqrt(46.0 / (2.0 * M_PI * 0.7 * Z.Y.eigenvalues()[0]));
      auto field = [&](const SiegelPoint& W) -> cplx {
        const double h = poincare::siegel::h_integral(om_k + 1.0, 1.0, T, W.Y, cfg.quadrature,
                                                      probe.nodes_u, probe.nodes_theta, umax)
                             .value;
        return std::pow(W.Y.det(), om_k - 0.5) * W.Y.det() * h *
               std::exp(cplx(0, 2 * M_PI * poincare::siegel::tr_product(T, W.X)));
      };
      const auto om = poincare::siegel::apply_omega(0.5, 0.5 - om_k, field, Z, 1e-4, 2.5e-4);
      const double rel = om.frobenius() / std::abs(field(Z));
      emit({{"value", rel},
            {"est_error", 1e-4},
            {"params", {{"k", om_k}, {"z", om_z}, {"t", "identity"}}}});
    } else if (sp2_cosets->parsed()) {
      const auto reps = poincare::sp2::enumerate_delta_cosets(
          sp2_height > 0 ? sp2_height : cfg.sp2_height);
      json arr = json::array();
      for (const auto& M : reps) arr.push_back(poincare::sp2::rep_to_json(M));
      emit(arr);
    } else if (p2_eval->parsed()) {
      poincare::p2::P2Params p;
      p.k = p2k;
      p.ell = p2l;
      p.T = parse_sym(p2_t, "T");
      p.Tp = parse_sym(p2_tp, "T'");
      p.height = p2_height > 0 ? p2_height : cfg.sp2_height;
      p.quadrature = cfg.quadrature;
      const auto Z = parse_point(p2_z);
      const auto reps = poincare::sp2::enumerate_delta_cosets(p.height);
      poincare::p2::HSource hs;
      hs.quadrature = cfg.quadrature;
      poincare::quad::QuadratureSpec qf;
      const auto fit = poincare::siegel::shimura_fit(p.k, p.T, qf, 5, 5e-2, 4.0);
      const auto v = poincare::p2::eval_p2(p, Z, hs, fit.b, cfg.workers, &reps);
      if (v.convergence_advisory) exit_code = kExitAdvisory;
      emit({{"value", cplx_json(v.total)},
            {"c0_subtotal", cplx_json(v.c0_subtotal)},
            {"cneq0_subtotal", cplx_json(v.cneq0_subtotal)},
            {"tail", v.tail_estimate},
            {"tail_note", "majorant continuation heuristic, reported only"},
            {"n_cosets", v.n_cosets},
            {"convergence_advisory", v.convergence_advisory},
            {"params",
             {{"k", p.k}, {"l", p.ell}, {"t", p2_t}, {"tp", p2_tp}, {"height", p.height},
              {"fitted_b", fit.b}}}});
    } else if (p2_kst->parsed()) {
      const auto reps = poincare::sp2::enumerate_delta_cosets(kst_height);
      const auto r = poincare::p2::kst_y0_search(reps, kst_grid);
      if (!r.found) {
        json rej = json::array();
        for (auto [y, m] : r.rejected) rej.push_back({{"y", y}, {"margin", m}});
        emit({{"found", false}, {"rejected", rej},
              {"worst", poincare::sp2::rep_to_json(r.worst)}});
        return kExitNumerical;
      }
      emit({{"found", true},
            {"y0", r.y0},
            {"margin", r.margin},
            {"worst", poincare::sp2::rep_to_json(r.worst)},
            {"params", {{"height", kst_height}, {"grid", kst_grid}}}});
    } else if (p2_scan->parsed()) {
      const long H = scan_height > 0 ? scan_height : cfg.sp2_height;
      const auto reps = poincare::sp2::enumerate_delta_cosets(H);
      const auto T = parse_sym(scan_t, "T");
      const auto Tp = parse_sym(scan_tp, "T'");
      poincare::quad::QuadratureSpec qf;
      const auto fit = poincare::siegel::shimura_fit(scan_k, T, qf, 5, 5e-2, 4.0);
      poincare::p2::HSource hs;
      hs.quadrature = cfg.quadrature;
      poincare::p2::HSurrogate table;
      const bool t_ident = scan_t == std::vector<double>{1, 0, 1};
      if (t_ident) {
        const auto z0 = poincare::siegel::SiegelPoint::scaled_i(scan_y0);
        const auto [lo, hi] = poincare::p2::eigen_range_over_cosets(reps, z0);
        table = poincare::p2::HSurrogate::build(scan_k, lo * 0.6, hi * 1.6, 80, cfg.workers);
        hs.table = &table;
      }
      const auto scan = poincare::p2::nonvanishing_scan(scan_k, T, Tp, scan_y0, scan_ells, reps,
                                                        hs, fit.b, cfg.workers);
      bool advisory = false;
      for (const auto& row : scan.rows) advisory = advisory || row.advisory;
      if (cfg.format == "csv") {
        std::printf("l,c0,cneq0_abs,total,positive,advisory\n");
        for (const auto& r : scan.rows)
          std::printf("%d,%.17g,%.17g,%.17g,%d,%d\n", r.ell, r.c0, r.cneq0_abs, r.total,
                      r.positive ? 1 : 0, r.advisory ? 1 : 0);
      } else {
        json rows = json::array();
        for (const auto& r : scan.rows)
          rows.push_back({{"l", r.ell}, {"c0", r.c0}, {"cneq0_abs", r.cneq0_abs},
                          {"total", r.total}, {"positive", r.positive},
                          {"advisory", r.advisory}});
        emit({{"rows", rows},
              {"crossover_l",
               scan.crossover_ell ? json(*scan.crossover_ell) : json(nullptr)},
              {"params",
               {{"k", scan_k}, {"y0", scan_y0}, {"height", H}, {"fitted_b", fit.b}}}});
      }
      if (emit_plot_data)
        for (const auto& r : scan.rows) std::printf("%d %.17g\n", r.ell, r.cneq0_abs);
      if (advisory) exit_code = kExitAdvisory;
    } else if (p2_probe->parsed()) {
      poincare::p2::P2Params p;
      p.k = probe_k;
      p.ell = probe_l;
      p.height = probe_height > 0 ? probe_height : cfg.sp2_height;
      p.quadrature = cfg.quadrature;
      const auto z0 = poincare::siegel::SiegelPoint::scaled_i(probe_y0);
      poincare::p2::DepthProbeResult r;
      if (probe_bare) {
        r = poincare::p2::depth_probe_field(poincare::p2::bare_product_field(p, z0), {z0},
                                            probe_dmax, probe_step, 0.0);
      } else {
        const auto reps = poincare::sp2::enumerate_delta_cosets(p.height);
        poincare::quad::QuadratureSpec qf;
        const auto fit = poincare::siegel::shimura_fit(p.k, p.T, qf, 5, 5e-2, 4.0);
        const auto [lo, hi] = poincare::p2::eigen_range_over_cosets(reps, z0);
        const auto table =
            poincare::p2::HSurrogate::build(p.k, lo * 0.6, hi * 1.6, 80, cfg.workers);
        poincare::p2::HSource hs;
        hs.table = &table;
        hs.quadrature = cfg.quadrature;
        r = poincare::p2::lowering_depth_probe(p, {z0}, probe_dmax, reps, hs, fit.b, probe_step,
                                               probe_prune, cfg.workers);
      }
      if (cfg.format == "csv") {
        std::printf("d,ratio\n");
        for (std::size_t d = 0; d < r.ratios.size(); ++d)
          std::printf("%zu,%.17g\n", d + 1, r.ratios[d]);
      } else {
        emit({{"ratios", r.ratios},
              {"noise_floor", r.noise_floor},
              {"tail_rel", r.tail_rel},
              {"diff_err_est", r.diff_err_est},
              {"assumption", r.assumption},
              {"params",
               {{"k", p.k}, {"l", p.ell}, {"height", p.height}, {"y0", probe_y0},
                {"step", probe_step}, {"bare", probe_bare}}}});
      }
      if (emit_plot_data)
        for (std::size_t d = 0; d < r.ratios.size(); ++d)
          std::printf("%zu %.17g\n", d + 1, r.ratios[d]);
    } else if (verify_cmd->parsed()) {
      poincare::verify::Options opt;
      opt.workers = cfg.workers;
      opt.seed = cfg.seed;
      const auto results = poincare::verify::run_all(opt, verify_quick);
      int failures = 0;
      for (const auto& r : results) {
        std::printf("criterion %2d  %-36s  %s  (%.1fs)\n      %s\n", r.id, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        if (!r.pass) ++failures;
      }
      if (failures > 0) exit_code = kExitNumerical;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "precondition violated: %s\n", e.what());
    return kExitAdvisory;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return exit_code;
}
