#include "fraclap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double small_c(double s) { return frac_constant_1d(s) / (s * (1 - s)); }

struct Reference {
  double value = 0.0;
  double error = 0.0;
};

Reference reference_value(const TestFunction& phi, const Vec& x, double s, AverageKind kind, const CoreSpec& core) {
  switch (kind) {
    case AverageKind::midpoint: return {lap_inf_local(phi, x, core.gradient_zero_tol), 0.0};
    case AverageKind::ball_mean:
      if (!phi.has_hessian()) throw PreconditionError("ball mean sweep needs a Hessian");
      return {trace(phi.hessian(x)), 0.0};
    default: {
      const auto v = lap_frac(phi, x, s, core);
      return {v.value, v.quad_error};
    }
  }
}

std::optional<double> default_order(AverageKind kind, const TestFunction& phi, double s) {
  const bool holder = phi.holder_seminorm && !phi.lipschitz;
  switch (kind) {
    case AverageKind::mvp1:
    case AverageKind::mvp3: return holder ? thm1_order_holder(s, phi.holder_alpha) : thm1_order(s);
    case AverageKind::mvp2: return holder ? thm1_order_holder(s, phi.holder_alpha) : thm2_order(s);
    default: return std::nullopt;
  }
}

void check_grid(const std::vector<double>& eps, double eta) {
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0 && eps[i] < eta)) throw DomainError("every eps must lie in (0, eta_x)");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw DomainError("eps grid must be strictly decreasing");
  }
}

SweepRow sweep_row(const TestFunction& phi, const Vec& x, double s, double eps, const Reference& ref,
                   const SweepConfig& cfg) {
  SweepRow r;
  r.s = s;
  r.eps = eps;
  const CoreSpec& core = cfg.core;
  const double e2s = std::pow(eps, 2 * s);
  double value_err = 0.0, pred_err = 0.0;
  std::optional<BoundInputs> in;
  auto inputs = [&](bool hess) -> const BoundInputs& {
    if (!in) in = bound_inputs(phi, x, s, eps, hess);
    return *in;
  };
  auto try_bound = [&](const char* name, const std::function<double()>& f) {
    try {
      r.bound = f();
      r.bound_name = name;
    } catch (const OutOfRegime&) {
    } catch (const BranchError&) {
    }
  };
  switch (cfg.average) {
    case AverageKind::mvp1: {
      const auto e = eps_parts(phi, x, s, eps, core);
      r.phi_x = e.phi_x;
      r.value = e.average_o();
      value_err = e.quad_error / e.mass;
      r.quad_error = e.quad_error;
      r.predicted = e2s * ref.value / (small_c(s) * (1 - s));
      pred_err = e2s * ref.error / (small_c(s) * (1 - s));
      try_bound("expansion_o", [&] { return thm1_bound(inputs(false)); });
      break;
    }
    case AverageKind::mvp2: {
      const auto e = eps_parts(phi, x, s, eps, core);
      const auto mid = midpoint_parts(phi, x, eps, core.opt);
      const MixedParts m{s, e.average_o(), mid.value()};
      r.phi_x = e.phi_x;
      r.value = m.value();
      value_err = (1 - s) * e.quad_error / e.mass;
      r.quad_error = e.quad_error;
      r.predicted = e2s * ref.value / small_c(s);
      pred_err = e2s * ref.error / small_c(s);
      try_bound("expansion_mixed", [&] { return thm2_bound(inputs(true)); });
      break;
    }
    case AverageKind::mvp3: {
      double R = cfg.prism_R, alpha = cfg.prism_alpha;
      if (cfg.prism_schedule) {
        const auto sch = cor52_schedule(eps, s);
        R = sch.R, alpha = sch.alpha;
      }
      r.phi_x = phi(x);
      r.value = average_prism_o(phi, x, eps, R, alpha, s, core);
      value_err = core.quad.rel_tol * std::abs(r.value - r.phi_x) + core.quad.abs_tol;
      r.predicted = e2s * ref.value / (small_c(s) * (1 - s));
      pred_err = e2s * ref.error / (small_c(s) * (1 - s));
      if (cfg.prism_schedule)
        try_bound("expansion_prism", [&] { return cor52_bound(inputs(false)); });
      else
        try_bound("expansion_o+prism_vs_line",
                  [&] { return thm1_bound(inputs(false)) + lemma51_bound(inputs(false), R, alpha); });
      break;
    }
    case AverageKind::midpoint: {
      r.phi_x = phi(x);
      r.value = midpoint_local(phi, x, eps, core.opt);
      value_err = core.opt.tol;
      r.predicted = 0.5 * eps * eps * ref.value;
      try_bound("midpoint_local", [&] { return 0.5 * midpoint_local_bound(inputs(true)); });
      break;
    }
    case AverageKind::ball_mean: {
      r.phi_x = phi(x);
      r.value = ball_mean_local(phi, x, eps);
      r.predicted = eps * eps * ref.value / (2.0 * (x.n + 2));
      break;
    }
  }
  r.deviation = r.value - r.phi_x;
  r.residual = r.deviation - r.predicted;
  r.noise = value_err + pred_err +
            64 * std::numeric_limits<double>::epsilon() * (std::abs(r.value) + std::abs(r.phi_x) + std::abs(r.predicted));
  if (!r.bound_name.empty()) {
    r.allowance = cfg.quad_allowance * (value_err + pred_err);
    r.margin = r.bound + r.allowance - std::abs(r.residual);
    r.pass = r.margin >= 0;
  } else {
    r.bound = r.allowance = r.margin = kNaN;
  }
  return r;
}

std::string fmt_or_empty(double v) { return std::isnan(v) ? std::string() : format_double(v); }

nlohmann::ordered_json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

const char* to_string(AverageKind k) {
  switch (k) {
    case AverageKind::mvp1: return "mvp1";
    case AverageKind::mvp2: return "mvp2";
    case AverageKind::mvp3: return "mvp3";
    case AverageKind::midpoint: return "midpoint";
    case AverageKind::ball_mean: return "ball-mean";
  }
  return "?";
}

AverageKind parse_average(const std::string& name) {
  for (auto k : {AverageKind::mvp1, AverageKind::mvp2, AverageKind::mvp3, AverageKind::midpoint, AverageKind::ball_mean})
    if (name == to_string(k)) return k;
  throw DomainError("unknown average '" + name + "' (mvp1, mvp2, mvp3, midpoint, ball-mean)");
}

std::vector<double> default_eps_grid(double eta, int n) {
  if (!(eta > 0)) throw DomainError("eta_x must be positive");
  if (n < 1) throw DomainError("eps grid needs at least one point");
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(0.25 * eta * std::pow(2.0, -0.5 * k));
  return out;
}

OrderFit fit_order(const std::vector<double>& eps, const std::vector<double>& residuals) {
  if (eps.size() != residuals.size()) throw DomainError("fit needs matching eps and residual lists");
  if (eps.size() < 3) throw DomainError("fit needs at least 3 points");
  OrderFit f;
  f.points = static_cast<int>(eps.size());
  if (std::all_of(residuals.begin(), residuals.end(), [](double r) { return r == 0.0; })) {
    f.infinite = true;
    f.order = std::numeric_limits<double>::infinity();
    f.r_squared = 1.0;
    return f;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0)) throw DomainError("fit needs positive eps");
    if (residuals[i] == 0.0) continue;  // exact zeros carry no slope information
    lx.push_back(std::log(eps[i]));
    ly.push_back(std::log(std::abs(residuals[i])));
  }
  if (lx.size() < 2) {
    f.infinite = true;
    f.order = std::numeric_limits<double>::infinity();
    return f;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= n, my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  f.order = sxy / sxx;
  f.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FRACLAP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

ExpansionReport run_sweep(const SweepConfig& cfg) {
  const TestFunction phi = make_entry(cfg.entry);
  ExpansionReport rep;
  rep.entry = cfg.entry;
  rep.x = cfg.x.value_or(phi.point);
  rep.average = cfg.average;
  if (rep.x.n != phi.dim) throw DomainError("point dimension does not match the entry");
  const double eta = phi.eta(rep.x);
  const auto eps = cfg.eps.empty() ? default_eps_grid(eta, cfg.n_eps) : cfg.eps;
  check_grid(eps, eta);
  for (double s : cfg.s_values) check_order(s);

  std::vector<Reference> refs;
  for (double s : cfg.s_values) refs.push_back(reference_value(phi, rep.x, s, cfg.average, cfg.core));

  const int ne = static_cast<int>(eps.size());
  rep.rows.resize(cfg.s_values.size() * eps.size());
  parallel_for(static_cast<int>(rep.rows.size()), resolve_threads(cfg.threads), [&](int i) {
    const std::size_t si = i / ne;
    const double s = cfg.s_values[si], e = eps[i % ne];
    try {
      rep.rows[i] = sweep_row(phi, rep.x, s, e, refs[si], cfg);
    } catch (const std::exception& ex) {
      SweepRow r;
      r.s = s;
      r.eps = e;
      r.value = r.deviation = r.predicted = r.residual = r.bound = r.allowance = r.margin = kNaN;
      r.pass = false;
      r.error = ex.what();
      rep.rows[i] = r;
    }
  });

  for (std::size_t si = 0; si < cfg.s_values.size(); ++si) {
    SeriesSummary sum;
    sum.s = cfg.s_values[si];
    sum.reference = refs[si].value;
    sum.expected_order = cfg.expected_order ? cfg.expected_order : default_order(cfg.average, phi, sum.s);
    std::vector<const SweepRow*> window;
    for (int k = 0; k < ne; ++k) {
      const auto& r = rep.rows[si * ne + k];
      if (r.error.empty()) window.push_back(&r);
    }
    std::sort(window.begin(), window.end(), [](const SweepRow* a, const SweepRow* b) { return a->eps < b->eps; });
    if (static_cast<int>(window.size()) > cfg.fit_window) window.resize(cfg.fit_window);
    std::vector<double> xs, ys;
    for (const auto* r : window) {
      if (std::abs(r->residual) > r->noise) {
        xs.push_back(r->eps);
        ys.push_back(r->residual);
      } else {
        ++sum.unresolved;
      }
    }
    if (xs.size() >= 3) {
      sum.fit = fit_order(xs, ys);
    } else if (window.size() >= 3) {
      // Residuals indistinguishable from zero: the expansion is exact to working precision.
      sum.fit.infinite = true;
      sum.fit.order = std::numeric_limits<double>::infinity();
      sum.fit.r_squared = kNaN;
      sum.fit.points = static_cast<int>(window.size());
    } else {
      sum.fit.order = kNaN;
      sum.fit.points = static_cast<int>(window.size());
    }
    if (sum.expected_order)
      sum.order_pass = sum.fit.infinite || sum.fit.order >= *sum.expected_order - cfg.order_tolerance;
    rep.series.push_back(sum);
  }
  for (const auto& r : rep.rows) {
    if (!r.error.empty()) rep.numerical_failure = true;
    if (!r.pass) rep.pass = false;
  }
  for (const auto& s : rep.series)
    if (!s.order_pass) rep.pass = false;
  return rep;
}

AuditReport audit_bounds(const AuditConfig& cfg) {
  std::vector<TestFunction> entries;
  if (cfg.entries.empty())
    entries = catalog();
  else
    for (const auto& e : cfg.entries) entries.push_back(make_entry(e));
  for (double s : cfg.s_values) check_order(s);

  struct Task {
    std::size_t entry;
    std::size_t s;
    double eps;
  };
  std::vector<Task> tasks;
  std::vector<std::vector<Reference>> refs(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& phi = entries[i];
    for (double s : cfg.s_values) {
      const auto v = lap_frac(phi, phi.point, s, cfg.core);
      refs[i].push_back({v.value, v.quad_error});
    }
    for (std::size_t j = 0; j < cfg.s_values.size(); ++j)
      for (double e : default_eps_grid(phi.eta(phi.point), cfg.n_eps)) tasks.push_back({i, j, e});
  }

  std::vector<std::vector<AuditRow>> out(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), resolve_threads(cfg.threads), [&](int t) {
    const auto& task = tasks[t];
    const auto& phi = entries[task.entry];
    const Vec& x = phi.point;
    const double s = cfg.s_values[task.s], eps = task.eps, e2s = std::pow(eps, 2 * s), cs = small_c(s);
    const Reference& ref = refs[task.entry][task.s];
    auto& rows = out[t];
    auto row = [&](const std::string& bound) {
      AuditRow r;
      r.entry = phi.name;
      r.s = s;
      r.eps = eps;
      r.bound = bound;
      return r;
    };
    auto settle = [&](AuditRow r, double lhs, const std::function<double()>& rhs, double allowance) {
      r.lhs = lhs;
      r.allowance = cfg.quad_allowance * allowance;
      try {
        r.rhs = rhs();
        r.pass = lhs <= r.rhs + r.allowance;
      } catch (const OutOfRegime& e) {
        r.rhs = kNaN;
        r.note = std::string("skipped: ") + e.what();
      } catch (const BranchError& e) {
        r.rhs = kNaN;
        r.note = std::string("skipped: ") + e.what();
      }
      rows.push_back(r);
    };
    try {
      if (cfg.theorems) {
        const auto in = bound_inputs(phi, x, s, eps, phi.has_hessian());
        const auto e = eps_parts(phi, x, s, eps, cfg.core);
        const double qa = e.quad_error / e.mass;
        settle(row(in.critical() ? "operator_gap_critical" : "operator_gap"), std::abs(e.lap_frac_eps() - ref.value),
               [&] { return lap_eps_gap_bound(in); }, 2 * e.quad_error + ref.error);
        settle(row("expansion_o"), std::abs(e.average_o() - e.phi_x - e2s * ref.value / (cs * (1 - s))),
               [&] { return thm1_bound(in); }, qa + e2s * ref.error / (cs * (1 - s)));
        if (in.critical()) {
          auto r = row("expansion_mixed");
          r.rhs = kNaN;
          r.note = "skipped: zero gradient";
          rows.push_back(r);
        } else {
          // Only pay for the ball search when the mixed bound applies.
          double rhs = kNaN;
          std::string why;
          try {
            rhs = thm2_bound(in);
          } catch (const OutOfRegime& ex) {
            why = ex.what();
          } catch (const PreconditionError& ex) {
            why = ex.what();
          }
          if (why.empty()) {
            const auto mid = midpoint_parts(phi, x, eps, cfg.core.opt);
            const MixedParts m{s, e.average_o(), mid.value()};
            settle(row("expansion_mixed"), std::abs(m.value() - e.phi_x - e2s * ref.value / cs), [&] { return rhs; },
                   (1 - s) * qa + e2s * ref.error / cs + s * cfg.core.opt.tol);
          } else {
            auto r = row("expansion_mixed");
            r.rhs = kNaN;
            r.note = "skipped: " + why;
            rows.push_back(r);
          }
        }
      }
      if (cfg.prism && phi.lipschitz) {
        const auto in = bound_inputs(phi, x, s, eps, false);
        PrismSchedule sch;
        std::string why;
        try {
          sch = cor52_schedule(eps, s);
          cor52_bound(in);
        } catch (const OutOfRegime& ex) {
          why = ex.what();
        }
        if (why.empty()) {
          const double v = average_prism_o(phi, x, eps, sch.R, sch.alpha, s, cfg.core);
          settle(row("expansion_prism"), std::abs(v - phi(x) - e2s * ref.value / (cs * (1 - s))),
                 [&] { return cor52_bound(in); },
                 cfg.core.quad.rel_tol * std::abs(v - phi(x)) + e2s * ref.error / (cs * (1 - s)));
        } else {
          auto r = row("expansion_prism");
          r.rhs = kNaN;
          r.note = "skipped: " + why;
          rows.push_back(r);
        }
      }
    } catch (const std::exception& ex) {
      auto r = row("evaluation");
      r.rhs = r.lhs = kNaN;
      r.pass = false;
      r.note = std::string("failed: ") + ex.what();
      rows.push_back(r);
    }
  });

  AuditReport rep;
  for (auto& v : out)
    for (auto& r : v) {
      if (r.bound == "evaluation")
        ++rep.failures;
      else if (!r.note.empty())
        ++rep.skipped;
      else if (!r.pass)
        ++rep.violations;
      rep.rows.push_back(std::move(r));
    }
  return rep;
}

ProbeReport s_uniformity_probe(const TestFunction& phi, const Vec& x, double eps, const std::vector<double>& s_values,
                               const CoreSpec& core) {
  if (!phi.has_gradient() || norm(phi.gradient(x)) <= core.gradient_zero_tol)
    throw PreconditionError("the s-uniformity probe needs a nonzero gradient");
  ProbeReport rep;
  rep.entry = phi.name;
  rep.eps = eps;
  const auto mid = midpoint_parts(phi, x, eps, core.opt);
  for (double s : s_values) {
    const double L = lap_frac(phi, x, s, core).value;
    const auto e = eps_parts(phi, x, s, eps, core);
    const double cs = small_c(s), e2s = std::pow(eps, 2 * s);
    ProbeRow r;
    r.s = s;
    r.residual_o = e.average_o() - e.phi_x - e2s * L / (cs * (1 - s));
    const MixedParts m{s, e.average_o(), mid.value()};
    r.residual_mixed = m.value() - e.phi_x - e2s * L / cs;
    r.limit_expression = thm2_limit_expression(bound_inputs(phi, x, s, eps, true));
    r.mixed_within_limit = std::abs(r.residual_mixed) <= 1.1 * r.limit_expression;
    rep.rows.push_back(r);
  }
  if (!rep.rows.empty()) {
    rep.o_grows = std::abs(rep.rows.back().residual_o) > std::abs(rep.rows.front().residual_o);
    rep.mixed_bounded = rep.rows.back().mixed_within_limit;
  }
  return rep;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const ExpansionReport& r) {
  os << "entry,average,s,eps,value,phi_x,deviation,predicted,residual,bound_name,bound,allowance,margin,quad_error,"
        "noise,pass,error\r\n";
  for (const auto& row : r.rows) {
    os << csv_field(r.entry) << ',' << to_string(r.average) << ',' << format_double(row.s) << ','
       << format_double(row.eps) << ',' << fmt_or_empty(row.value) << ',' << fmt_or_empty(row.phi_x) << ','
       << fmt_or_empty(row.deviation) << ',' << fmt_or_empty(row.predicted) << ',' << fmt_or_empty(row.residual)
       << ',' << csv_field(row.bound_name) << ',' << fmt_or_empty(row.bound) << ',' << fmt_or_empty(row.allowance)
       << ',' << fmt_or_empty(row.margin) << ',' << format_double(row.quad_error) << ','
       << format_double(row.noise) << ',' << (row.pass ? "true" : "false") << ',' << csv_field(row.error) << "\r\n";
  }
}

void write_csv(std::ostream& os, const AuditReport& r) {
  os << "entry,s,eps,bound,lhs,rhs,allowance,pass,note\r\n";
  for (const auto& row : r.rows)
    os << csv_field(row.entry) << ',' << format_double(row.s) << ',' << format_double(row.eps) << ','
       << csv_field(row.bound) << ',' << fmt_or_empty(row.lhs) << ',' << fmt_or_empty(row.rhs) << ','
       << format_double(row.allowance) << ',' << (row.pass ? "true" : "false") << ',' << csv_field(row.note)
       << "\r\n";
}

void write_csv(std::ostream& os, const ProbeReport& r) {
  os << "entry,eps,s,residual_o,residual_mixed,limit_expression,mixed_within_limit\r\n";
  for (const auto& row : r.rows)
    os << csv_field(r.entry) << ',' << format_double(r.eps) << ',' << format_double(row.s) << ','
       << format_double(row.residual_o) << ',' << format_double(row.residual_mixed) << ','
       << format_double(row.limit_expression) << ',' << (row.mixed_within_limit ? "true" : "false") << "\r\n";
}

nlohmann::ordered_json to_json(const ExpansionReport& r) {
  nlohmann::ordered_json j;
  j["entry"] = r.entry;
  j["x"] = std::vector<double>(r.x.c.begin(), r.x.c.begin() + r.x.n);
  j["average"] = to_string(r.average);
  j["pass"] = r.pass;
  j["numerical_failure"] = r.numerical_failure;
  j["series"] = nlohmann::ordered_json::array();
  for (const auto& s : r.series) {
    nlohmann::ordered_json o;
    o["s"] = s.s;
    o["reference"] = s.reference;
    o["fitted_order"] = num(s.fit.order);
    o["r_squared"] = num(s.fit.r_squared);
    o["fit_points"] = s.fit.points;
    o["order_infinite"] = s.fit.infinite;
    o["expected_order"] = s.expected_order ? num(*s.expected_order) : nullptr;
    o["order_pass"] = s.order_pass;
    o["unresolved"] = s.unresolved;
    j["series"].push_back(o);
  }
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["s"] = row.s;
    o["eps"] = row.eps;
    o["value"] = num(row.value);
    o["phi_x"] = num(row.phi_x);
    o["deviation"] = num(row.deviation);
    o["predicted"] = num(row.predicted);
    o["residual"] = num(row.residual);
    o["bound_name"] = row.bound_name;
    o["bound"] = num(row.bound);
    o["allowance"] = num(row.allowance);
    o["margin"] = num(row.margin);
    o["quad_error"] = row.quad_error;
    o["noise"] = row.noise;
    o["pass"] = row.pass;
    if (!row.error.empty()) o["error"] = row.error;
    j["rows"].push_back(o);
  }
  return j;
}

nlohmann::ordered_json to_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["violations"] = r.violations;
  j["failures"] = r.failures;
  j["skipped"] = r.skipped;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["entry"] = row.entry;
    o["s"] = row.s;
    o["eps"] = row.eps;
    o["bound"] = row.bound;
    o["lhs"] = num(row.lhs);
    o["rhs"] = num(row.rhs);
    o["allowance"] = row.allowance;
    o["pass"] = row.pass;
    if (!row.note.empty()) o["note"] = row.note;
    j["rows"].push_back(o);
  }
  return j;
}

nlohmann::ordered_json to_json(const ProbeReport& r) {
  nlohmann::ordered_json j;
  j["entry"] = r.entry;
  j["eps"] = r.eps;
  j["o_grows"] = r.o_grows;
  j["mixed_bounded"] = r.mixed_bounded;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["s"] = row.s;
    o["residual_o"] = row.residual_o;
    o["residual_mixed"] = row.residual_mixed;
    o["limit_expression"] = row.limit_expression;
    o["mixed_within_limit"] = row.mixed_within_limit;
    j["rows"].push_back(o);
  }
  return j;
}

}  // namespace fraclap
