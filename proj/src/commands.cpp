#include "commands.hpp"

#include "ptscatter/ptscatter.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace ptscatter::app {

using nlohmann::json;

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

// nlohmann serialises non-finite doubles as null; keep that explicit.
json real_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string spacing_name(Spacing s) { return s == Spacing::log ? "log" : "linear"; }

std::string range_text(const Range& r) {
  return format_real(r.min) + ".." + format_real(r.max) + " count=" + std::to_string(r.count) + " " +
         spacing_name(r.spacing);
}

void write_csv_row(std::ostream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    out << c;
    first = false;
  }
  out << '\n';
}

std::string fr(double x) { return format_real(x); }

} // namespace

int cmd_cell(const SweepConfig& cfg, std::ostream& out) {
  const WaveNumber<double> k(cfg.k);
  const auto p = unit_cell_elements(k, cfg.v, cfg.b);
  const auto m = unit_cell_matrix(p);
  const double det_err = determinant_error(m);

  if (cfg.format == Format::json) {
    json j = {{"command", "cell"},
              {"k", cfg.k},
              {"v", cfg.v},
              {"b", cfg.b},
              {"rho", p.rho},
              {"phi", p.phi},
              {"alpha", p.alpha},
              {"beta", p.beta},
              {"u_plus", p.u_plus},
              {"u_minus", p.u_minus},
              {"xi", p.xi},
              {"chi", p.chi},
              {"eta", p.eta},
              {"tau", p.tau},
              {"m11", complex_json(m.m11())},
              {"m12", complex_json(m.m12())},
              {"m21", complex_json(m.m21())},
              {"m22", complex_json(m.m22())},
              {"absdet_err", det_err}};
    out << j.dump(2) << '\n';
    return exit_ok;
  }
  if (cfg.format == Format::csv) {
    write_csv_row(out, {"quantity", "re", "im"});
    for (const auto& [name, val] : std::initializer_list<std::pair<const char*, double>>{
             {"rho", p.rho}, {"phi", p.phi}, {"alpha", p.alpha}, {"beta", p.beta},
             {"u_plus", p.u_plus}, {"u_minus", p.u_minus}, {"xi", p.xi}, {"chi", p.chi},
             {"eta", p.eta}, {"tau", p.tau}, {"absdet_err", det_err}})
      write_csv_row(out, {name, fr(val), "0"});
    for (const auto& [name, z] : std::initializer_list<std::pair<const char*, std::complex<double>>>{
             {"m11", m.m11()}, {"m12", m.m12()}, {"m21", m.m21()}, {"m22", m.m22()}})
      write_csv_row(out, {name, fr(z.real()), fr(z.imag())});
    return exit_ok;
  }
  out << "k = " << fr(cfg.k) << "\nV = " << fr(cfg.v) << "\nb = " << fr(cfg.b) << '\n'
      << "rho = " << fr(p.rho) << "\nphi = " << fr(p.phi) << '\n'
      << "alpha = " << fr(p.alpha) << "\nbeta = " << fr(p.beta) << '\n'
      << "u_plus = " << fr(p.u_plus) << "\nu_minus = " << fr(p.u_minus) << '\n'
      << "xi = " << fr(p.xi) << "\nchi = " << fr(p.chi) << '\n'
      << "eta = " << fr(p.eta) << "\ntau = " << fr(p.tau) << '\n';
  auto entry = [&](const char* name, std::complex<double> z) {
    out << name << " = (" << fr(z.real()) << ", " << fr(z.imag()) << ")\n";
  };
  entry("m11", m.m11());
  entry("m12", m.m12());
  entry("m21", m.m21());
  entry("m22", m.m22());
  out << "absdet_err = " << fr(det_err) << '\n';
  return exit_ok;
}

int cmd_sweep(const SweepConfig& cfg, bool fig3, std::ostream& out) {
  const auto ns = integer_grid(cfg.n_range);
  validate_range(cfg.k_range, "k");
  if (!(cfg.k_range.min > 0)) throw InvalidArgument("k range needs k-min > 0");
  const auto ks = real_grid(cfg.k_range);
  const auto rows = transmission_surface(cfg.v, cfg.total_length, ns, ks);
  const std::string k_note = fig3 ? "default k grid for the T(N,k) surface; the axis range is a chosen default"
                                  : "user-selected k grid";

  if (cfg.format == Format::json) {
    json j;
    j["command"] = "sweep";
    j["metadata"] = {{"v", cfg.v},
                     {"length", cfg.total_length},
                     {"n_range", range_text(cfg.n_range)},
                     {"k_range", range_text(cfg.k_range)},
                     {"k_grid_note", k_note},
                     {"preset", fig3 ? "fig3" : "none"}};
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"N", r.n},
                     {"k", r.k},
                     {"T", real_json(r.big_t)},
                     {"R_left", real_json(r.big_r_left)},
                     {"R_right", real_json(r.big_r_right)},
                     {"absdet_err", real_json(r.absdet_err)}});
    j["rows"] = std::move(arr);
    out << j.dump(2) << '\n';
    return exit_ok;
  }
  out << "# ptscatter sweep\n"
      << "# v=" << fr(cfg.v) << " length=" << fr(cfg.total_length) << '\n'
      << "# n_range=" << range_text(cfg.n_range) << '\n'
      << "# k_range=" << range_text(cfg.k_range) << '\n'
      << "# k_grid_note=" << k_note << '\n';
  if (fig3) out << "# preset=fig3\n";
  write_csv_row(out, {"N", "k", "T", "R_left", "R_right", "absdet_err"});
  for (const auto& r : rows)
    write_csv_row(out, {std::to_string(r.n), fr(r.k), fr(r.big_t), fr(r.big_r_left), fr(r.big_r_right),
                        fr(r.absdet_err)});
  return exit_ok;
}

int cmd_converge(const SweepConfig& cfg, std::ostream& out) {
  const WaveNumber<double> k(cfg.k);
  const auto ns = integer_grid(cfg.n_range);
  const auto records = convergence_study(k, cfg.v, cfg.total_length, ns);

  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = slope;
  const bool fittable = records.size() >= 2 && std::all_of(records.begin(), records.end(), [](const auto& r) {
                          return r.deviation_inf > 0;
                        });
  if (fittable) {
    const auto fit = fit_log_log(records);
    slope = fit.slope;
    intercept = fit.intercept;
  }
  auto ratio_of = [](const ConvergenceRecord<double>& r) {
    return r.offdiag_predicted > 0 ? r.offdiag_measured / r.offdiag_predicted
                                   : std::numeric_limits<double>::quiet_NaN();
  };
  double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = -ratio_min;
  for (const auto& r : records)
    if (r.n >= 1000 && std::isfinite(ratio_of(r))) {
      ratio_min = std::min(ratio_min, ratio_of(r));
      ratio_max = std::max(ratio_max, ratio_of(r));
    }
  if (!std::isfinite(ratio_min)) ratio_min = ratio_max = std::numeric_limits<double>::quiet_NaN();

  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& r : records)
      arr.push_back({{"N", r.n},
                     {"k", r.k},
                     {"deviation_inf", r.deviation_inf},
                     {"offdiag_measured", r.offdiag_measured},
                     {"offdiag_predicted", r.offdiag_predicted},
                     {"predictor_ratio", real_json(ratio_of(r))},
                     {"diag_measured_err", r.diag_measured_err}});
    json j = {{"command", "converge"},
              {"k", cfg.k},
              {"v", cfg.v},
              {"length", cfg.total_length},
              {"records", arr},
              {"slope", real_json(slope)},
              {"intercept", real_json(intercept)},
              {"predictor_ratio_min", real_json(ratio_min)},
              {"predictor_ratio_max", real_json(ratio_max)}};
    out << j.dump(2) << '\n';
    return exit_ok;
  }
  out << "# ptscatter converge\n"
      << "# k=" << fr(cfg.k) << " v=" << fr(cfg.v) << " length=" << fr(cfg.total_length) << '\n'
      << "# n_range=" << range_text(cfg.n_range) << '\n';
  write_csv_row(out, {"N", "k", "deviation_inf", "offdiag_measured", "offdiag_predicted", "predictor_ratio",
                      "diag_measured_err"});
  for (const auto& r : records)
    write_csv_row(out, {std::to_string(r.n), fr(r.k), fr(r.deviation_inf), fr(r.offdiag_measured),
                        fr(r.offdiag_predicted), fr(ratio_of(r)), fr(r.diag_measured_err)});
  out << "# slope=" << fr(slope) << " intercept=" << fr(intercept) << " predictor_ratio_min=" << fr(ratio_min)
      << " predictor_ratio_max=" << fr(ratio_max) << " (ratio over N>=1000)\n";
  return exit_ok;
}

int cmd_general(const SweepConfig& cfg, std::ostream& out) {
  const WaveNumber<double> k(cfg.k);
  const auto ns = integer_grid(cfg.n_range);
  const auto res = generalized_limit_study(cfg.v1, cfg.v2, cfg.eps, cfg.total_length, ns, k);
  const double d_full = std::abs(res.effective_height - res.full_imbalance_height);
  const double d_avg = std::abs(res.effective_height - res.slab_average_height);

  if (cfg.format == Format::json) {
    json rows = json::array();
    for (std::size_t i = 0; i < res.records.size(); ++i) {
      const auto& r = res.records[i];
      rows.push_back({{"N", r.n},
                      {"k", r.k},
                      {"height", complex_json(res.fitted_heights[i])},
                      {"deviation_inf", r.deviation_inf},
                      {"offdiag_measured", r.offdiag_measured},
                      {"diag_measured_err", r.diag_measured_err}});
    }
    json j = {{"command", "general"},
              {"v1", cfg.v1},
              {"v2", cfg.v2},
              {"eps", cfg.eps},
              {"length", cfg.total_length},
              {"k", cfg.k},
              {"effective_height", complex_json(res.effective_height)},
              {"fit_residual", res.fit_residual},
              {"candidates",
               {{"full_imbalance",
                 {{"height", complex_json(res.full_imbalance_height)},
                  {"matrix_residual", res.full_imbalance_residual},
                  {"distance", d_full}}},
                {"slab_average",
                 {{"height", complex_json(res.slab_average_height)},
                  {"matrix_residual", res.slab_average_residual},
                  {"distance", d_avg}}}}},
              {"match", to_string(res.match)},
              {"converged", res.converged},
              {"records", rows}};
    out << j.dump(2) << '\n';
  } else {
    out << "# ptscatter general\n"
        << "# v1=" << fr(cfg.v1) << " v2=" << fr(cfg.v2) << " eps=" << fr(cfg.eps)
        << " length=" << fr(cfg.total_length) << " k=" << fr(cfg.k) << '\n'
        << "# effective_height_re=" << fr(res.effective_height.real())
        << " effective_height_im=" << fr(res.effective_height.imag()) << " fit_residual=" << fr(res.fit_residual)
        << '\n'
        << "# candidate=full_imbalance height_re=" << fr(res.full_imbalance_height.real())
        << " height_im=" << fr(res.full_imbalance_height.imag())
        << " matrix_residual=" << fr(res.full_imbalance_residual) << " distance=" << fr(d_full) << '\n'
        << "# candidate=slab_average height_re=" << fr(res.slab_average_height.real())
        << " height_im=" << fr(res.slab_average_height.imag())
        << " matrix_residual=" << fr(res.slab_average_residual) << " distance=" << fr(d_avg) << '\n'
        << "# match=" << to_string(res.match) << " converged=" << (res.converged ? "true" : "false") << '\n';
    write_csv_row(out, {"N", "k", "height_re", "height_im", "deviation_inf", "offdiag_measured",
                        "diag_measured_err"});
    for (std::size_t i = 0; i < res.records.size(); ++i) {
      const auto& r = res.records[i];
      write_csv_row(out, {std::to_string(r.n), fr(r.k), fr(res.fitted_heights[i].real()),
                          fr(res.fitted_heights[i].imag()), fr(r.deviation_inf), fr(r.offdiag_measured),
                          fr(r.diag_measured_err)});
    }
  }
  return res.converged ? exit_ok : exit_not_converged;
}

int cmd_oracle_check(const SweepConfig& cfg, std::ostream& out) {
  IntegrationSettings<double> settings;
  settings.rel_tol = 1e-12;
  settings.abs_tol = 1e-14;
  double worst = 0;
  json rows = json::array();
  const bool as_json = cfg.format == Format::json;
  if (!as_json) {
    out << "# ptscatter oracle-check: ODE integration and slab propagation vs closed form, length="
        << fr(cfg.total_length) << '\n';
    write_csv_row(out, {"k", "v", "N", "ode_vs_closed", "slab_vs_closed", "ode_vs_slab"});
  }
  for (double kv : {0.5, 1.0, 2.0, 5.0, 10.0})
    for (double v : {1.0, 40.0})
      for (std::int64_t n : {1, 4, 16, 64}) {
        const WaveNumber<double> k(kv);
        const PeriodicSpec<double> spec(v, n, cfg.total_length);
        const auto closed = periodic_matrix(spec, k);
        const auto stack = build_periodic(spec);
        const auto ode = integrate_transfer_matrix(stack, k, settings);
        const auto slab = propagate_slabs(stack, k);
        const double a = max_relative_difference(ode, closed);
        const double b = max_relative_difference(slab, closed);
        const double c = max_relative_difference(ode, slab);
        worst = std::max({worst, a, b});
        if (as_json)
          rows.push_back({{"k", kv}, {"v", v}, {"N", n}, {"ode_vs_closed", a}, {"slab_vs_closed", b},
                          {"ode_vs_slab", c}});
        else
          write_csv_row(out, {fr(kv), fr(v), std::to_string(n), fr(a), fr(b), fr(c)});
      }
  const bool pass = worst <= cfg.tolerance;
  if (as_json) {
    json j = {{"command", "oracle-check"},
              {"rows", rows},
              {"max_deviation", worst},
              {"tolerance", cfg.tolerance},
              {"status", pass ? "pass" : "fail"}};
    out << j.dump(2) << '\n';
  } else {
    out << "# max_deviation=" << fr(worst) << " tolerance=" << fr(cfg.tolerance)
        << " status=" << (pass ? "pass" : "fail") << '\n';
  }
  return pass ? exit_ok : exit_numerical_failure;
}

} // namespace ptscatter::app
