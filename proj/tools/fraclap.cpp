// fraclap: command-line front end for operator evaluation, sweeps, audits and constants.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/harness.hpp"
#include "json.hpp"

using namespace fraclap;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kViolation = 3 };

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every option also accepts its value from the config file under the same
// name without dashes; flags given on the command line win.
struct Options {
  std::map<std::string, std::function<void(const ojson&)>> setters;
  std::map<std::string, CLI::Option*> opts;

  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& var, const std::string& desc) {
    auto* o = app->add_option("--" + name, var, desc);
    if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<std::string>>)
      o->delimiter(',');
    const auto key = app->get_name() + "/" + name;
    setters[key] = [&var](const ojson& j) { var = j.get<T>(); };
    opts[key] = o;
    return o;
  }
  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& desc) {
    auto* o = app->add_flag("--" + name, var, desc);
    const auto key = app->get_name() + "/" + name;
    setters[key] = [&var](const ojson& j) { var = j.get<bool>(); };
    opts[key] = o;
    return o;
  }

  void apply(const ojson& cfg, const std::string& command) {
    for (const auto& [key, value] : cfg.items()) {
      if (key == "schema" || key == "command") continue;
      auto it = setters.find(command + "/" + key);
      if (it == setters.end()) throw UsageError("unknown config key '" + key + "' for " + command);
      if (opts[it->first]->count() > 0) continue;
      try {
        it->second(value);
      } catch (const nlohmann::json::exception&) {
        throw UsageError("config key '" + key + "' has the wrong type");
      }
    }
  }
};

ojson load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  if (!j.contains("schema") || j["schema"] != 1) throw UsageError("config file needs \"schema\": 1");
  return j;
}

TestFunction entry_or_usage(const std::string& spec) {
  try {
    return make_entry(spec);
  } catch (const DomainError& e) {
    std::string names;
    for (const auto& n : catalog_names()) names += (names.empty() ? "" : ", ") + n;
    throw UsageError(std::string(e.what()) + "; catalog: " + names);
  }
}

Vec point_for(const TestFunction& phi, const std::vector<double>& x) {
  if (x.empty()) return phi.point;
  if (x.size() == 1 && phi.dim > 1) {
    Vec v(phi.dim);
    for (int i = 0; i < phi.dim; ++i) v[i] = x[0];
    return v;
  }
  if (static_cast<int>(x.size()) != phi.dim)
    throw UsageError("--x needs " + std::to_string(phi.dim) + " coordinates for entry '" + phi.name + "'");
  Vec v(phi.dim);
  for (int i = 0; i < phi.dim; ++i) v[i] = x[i];
  return v;
}

ojson vec_json(const Vec& v) {
  ojson a = ojson::array();
  for (int i = 0; i < v.n; ++i) a.push_back(v[i]);
  return a;
}

// Key/value pairs rendered either as a two-column CSV or a JSON object.
struct Record {
  std::vector<std::pair<std::string, ojson>> items;
  void put(const std::string& k, ojson v) { items.emplace_back(k, std::move(v)); }
};

std::string scalar_text(const ojson& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional infinity-Laplacian evaluation, expansion sweeps and bound audits"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all");

  std::string config_path, out_path, format = "csv";
  unsigned long seed = 1;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file (\"schema\": 1)");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "random seed (recorded; every current command is deterministic)");
  app.add_option("--threads", threads, "worker threads (default FRACLAP_THREADS or all cores)");

  Options opt;

  auto* c_const = app.add_subcommand("constants", "C_s by both formulas, c_s, its interval check and C(N,s)");
  std::vector<double> const_s{0.6, 0.75, 0.9};
  opt.add(c_const, "s", const_s, "orders, comma separated");

  auto* c_eval = app.add_subcommand("eval", "evaluate one operator or average at a point");
  std::string ev_entry = "cosine", ev_op = "lap";
  std::vector<double> ev_x;
  double ev_s = 0.75, ev_eps = 0.01, ev_R = 2.0, ev_alpha = 0.1;
  opt.add(c_eval, "entry", ev_entry, "catalog entry, e.g. cosine:xi=1,0");
  opt.add(c_eval, "x", ev_x, "point (default: the entry's catalog point)");
  opt.add(c_eval, "s", ev_s, "order in (1/2,1)");
  opt.add(c_eval, "op", ev_op, "lap, lap-eps, mvp1, mvp2, mvp3, midpoint")
      ->check(CLI::IsMember({"lap", "lap-eps", "mvp1", "mvp2", "mvp3", "midpoint"}));
  opt.add(c_eval, "eps", ev_eps, "inner radius");
  opt.add(c_eval, "R", ev_R, "prism outer radius (mvp3)");
  opt.add(c_eval, "alpha", ev_alpha, "prism opening (mvp3)");

  auto* c_sweep = app.add_subcommand("sweep", "eps sweep of an average with residual order fit");
  std::string sw_entry = "cosine", sw_avg = "mvp1";
  std::vector<double> sw_x, sw_s{0.75}, sw_eps;
  int sw_n = 12;
  double sw_R = 0, sw_alpha = 0, sw_order = 0;
  opt.add(c_sweep, "entry", sw_entry, "catalog entry");
  opt.add(c_sweep, "x", sw_x, "point");
  opt.add(c_sweep, "s", sw_s, "orders, comma separated");
  opt.add(c_sweep, "avg", sw_avg, "mvp1, mvp2, mvp3, midpoint, ball-mean");
  opt.add(c_sweep, "eps", sw_eps, "explicit decreasing eps grid");
  opt.add(c_sweep, "n-eps", sw_n, "points in the default eps grid");
  opt.add(c_sweep, "R", sw_R, "fixed prism outer radius (mvp3; default: schedule)");
  opt.add(c_sweep, "alpha", sw_alpha, "fixed prism opening (mvp3)");
  opt.add(c_sweep, "expected-order", sw_order, "override the expected residual order");

  auto* c_audit = app.add_subcommand("audit", "check measured errors against the theoretical bounds");
  std::string au_suite = "theorems";
  std::vector<std::string> au_entries;
  std::vector<double> au_s{0.55, 0.6, 0.75, 0.9, 0.99};
  int au_n = 12;
  opt.add(c_audit, "suite", au_suite, "theorems, prism or all")->check(CLI::IsMember({"theorems", "prism", "all"}));
  opt.add(c_audit, "entries", au_entries, "entries (default: the full catalog)");
  opt.add(c_audit, "s", au_s, "orders");
  opt.add(c_audit, "n-eps", au_n, "eps grid points per entry");

  auto* c_probe = app.add_subcommand("probe", "MVP1 and MVP2 residuals as s approaches 1");
  bool pr_limit = false;
  std::string pr_entry = "cosine";
  std::vector<double> pr_x, pr_s{0.9, 0.95, 0.99};
  double pr_eps = 0.01;
  opt.flag(c_probe, "s-limit", pr_limit, "tabulate residuals across s -> 1 (the only probe)");
  opt.add(c_probe, "entry", pr_entry, "catalog entry with nonzero gradient");
  opt.add(c_probe, "x", pr_x, "point");
  opt.add(c_probe, "s", pr_s, "orders");
  opt.add(c_probe, "eps", pr_eps, "fixed eps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  std::ostringstream body;
  int rc = kOk;
  ojson meta;
  try {
    if (!config_path.empty()) {
      const auto cfg = load_config(config_path);
      if (cfg.contains("command") && cfg["command"] != command)
        throw UsageError("config file is for command '" + cfg["command"].get<std::string>() + "'");
      opt.apply(cfg, command);
    }
    meta["schema"] = 1;
    meta["command"] = command;
    meta["seed"] = seed;
    const bool json = format == "json";

    if (command == "constants") {
      for (double s : const_s) {
        try {
          check_order(s);
        } catch (const DomainError& e) {
          throw UsageError(e.what());
        }
      }
      ojson rows = ojson::array();
      if (!json) body << "s,C_s,C_s_integral,rel_diff,c_s,interval_check,C_1,C_2,C_3\r\n";
      const double lo = std::pow(12.0 / 13.0, 2), hi = std::pow(12.0 / 5.0, 2);
      for (double s : const_s) {
        const double cg = frac_constant_1d(s), ci = frac_constant_1d_by_integral(s);
        const double rel = std::abs(cg - ci) / cg, small = cg / (s * (1 - s));
        const bool ok = small > lo && small < hi && rel <= 1e-8;
        if (!ok) rc = kViolation;
        const double c1 = frac_constant_nd(1, s), c2 = frac_constant_nd(2, s), c3 = frac_constant_nd(3, s);
        if (json) {
          ojson r;
          r["s"] = s;
          r["C_s"] = cg;
          r["C_s_integral"] = ci;
          r["rel_diff"] = rel;
          r["c_s"] = small;
          r["interval_check"] = ok ? "PASS" : "FAIL";
          r["C_1"] = c1;
          r["C_2"] = c2;
          r["C_3"] = c3;
          rows.push_back(r);
        } else {
          body << format_double(s) << ',' << format_double(cg) << ',' << format_double(ci) << ','
               << format_double(rel) << ',' << format_double(small) << ',' << (ok ? "PASS" : "FAIL") << ','
               << format_double(c1) << ',' << format_double(c2) << ',' << format_double(c3) << "\r\n";
        }
      }
      if (json) {
        meta["interval"] = {lo, hi};
        meta["rows"] = rows;
      }
    } else if (command == "eval") {
      const auto phi = entry_or_usage(ev_entry);
      const Vec x = point_for(phi, ev_x);
      try {
        check_order(ev_s);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      CoreSpec core;
      Record rec;
      rec.put("entry", phi.name);
      rec.put("x", vec_json(x));
      rec.put("s", ev_s);
      rec.put("op", ev_op);
      auto put_value = [&](const OperatorValue& v) {
        rec.put("value", v.value);
        rec.put("branch", to_string(v.branch));
        rec.put("quad_error", v.quad_error);
        rec.put("evaluations", v.evaluations);
        rec.put("opt_tol", v.opt_tol);
        rec.put("sup_direction", vec_json(v.sup_direction));
        rec.put("inf_direction", vec_json(v.inf_direction));
      };
      auto put_parts = [&](const EpsParts& e) {
        rec.put("quad_error", e.quad_error);
        rec.put("evaluations", e.evaluations);
        rec.put("opt_tol", e.opt_tol);
        rec.put("sup_direction", vec_json(e.sup_direction));
        rec.put("inf_direction", vec_json(e.inf_direction));
      };
      if (ev_op == "lap") {
        put_value(lap_frac(phi, x, ev_s, core));
      } else if (ev_op == "lap-eps") {
        rec.put("eps", ev_eps);
        put_value(lap_frac_eps(phi, x, ev_s, ev_eps, core));
      } else if (ev_op == "mvp1") {
        rec.put("eps", ev_eps);
        const auto e = eps_parts(phi, x, ev_s, ev_eps, core);
        rec.put("value", e.average_o());
        rec.put("branch", "eps_extremal");
        put_parts(e);
      } else if (ev_op == "mvp2") {
        rec.put("eps", ev_eps);
        const auto e = eps_parts(phi, x, ev_s, ev_eps, core);
        const auto mid = midpoint_parts(phi, x, ev_eps, core.opt);
        const MixedParts m{ev_s, e.average_o(), mid.value()};
        rec.put("value", m.value());
        rec.put("branch", "eps_extremal");
        rec.put("mvp1", m.average_o);
        rec.put("midpoint", m.midpoint);
        put_parts(e);
      } else if (ev_op == "mvp3") {
        rec.put("eps", ev_eps);
        rec.put("R", ev_R);
        rec.put("alpha", ev_alpha);
        rec.put("value", average_prism_o(phi, x, ev_eps, ev_R, ev_alpha, ev_s, core));
        rec.put("branch", "prism_extremal");
      } else {
        rec.put("eps", ev_eps);
        const auto mid = midpoint_parts(phi, x, ev_eps, core.opt);
        rec.put("value", mid.value());
        rec.put("branch", "ball_extremal");
        rec.put("sup", mid.sup);
        rec.put("inf", mid.inf);
      }
      if (json) {
        ojson r;
        for (auto& [k, v] : rec.items) r[k] = v;
        meta["result"] = r;
      } else {
        body << "key,value\r\n";
        for (auto& [k, v] : rec.items) {
          std::string text;
          if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) text += (i ? " " : "") + scalar_text(v[i]);
          } else {
            text = scalar_text(v);
          }
          body << k << ',' << csv_field(text) << "\r\n";
        }
      }
    } else if (command == "sweep") {
      SweepConfig cfg;
      const auto phi = entry_or_usage(sw_entry);
      cfg.entry = sw_entry;
      if (!sw_x.empty()) cfg.x = point_for(phi, sw_x);
      cfg.s_values = sw_s;
      cfg.eps = sw_eps;
      cfg.n_eps = sw_n;
      try {
        cfg.average = parse_average(sw_avg);
        for (double s : sw_s) check_order(s);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      if (sw_R > 0 || sw_alpha > 0) {
        cfg.prism_schedule = false;
        if (sw_R > 0) cfg.prism_R = sw_R;
        if (sw_alpha > 0) cfg.prism_alpha = sw_alpha;
      }
      if (sw_order > 0) cfg.expected_order = sw_order;
      if (cfg.average == AverageKind::mvp3) cfg.order_tolerance = 0.2;
      cfg.threads = threads;
      const auto rep = run_sweep(cfg);
      if (json) {
        meta["report"] = to_json(rep);
      } else {
        write_csv(body, rep);
      }
      rc = rep.numerical_failure ? kNumerical : rep.pass ? kOk : kViolation;
    } else if (command == "audit") {
      AuditConfig cfg;
      cfg.entries = au_entries;
      for (const auto& e : au_entries) entry_or_usage(e);
      cfg.s_values = au_s;
      try {
        for (double s : au_s) check_order(s);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      cfg.n_eps = au_n;
      cfg.theorems = au_suite != "prism";
      cfg.prism = au_suite != "theorems";
      cfg.threads = threads;
      const auto rep = audit_bounds(cfg);
      if (json) {
        meta["suite"] = au_suite;
        meta["report"] = to_json(rep);
      } else {
        write_csv(body, rep);
      }
      rc = rep.failures ? kNumerical : rep.violations ? kViolation : kOk;
      std::cerr << "audit: " << rep.rows.size() << " rows, " << rep.violations << " violations, " << rep.failures
                << " failures, " << rep.skipped << " skipped\n";
    } else if (command == "probe") {
      if (!pr_limit) throw UsageError("probe needs --s-limit");
      const auto phi = entry_or_usage(pr_entry);
      const Vec x = point_for(phi, pr_x);
      try {
        for (double s : pr_s) check_order(s);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      const auto rep = s_uniformity_probe(phi, x, pr_eps, pr_s);
      if (json) {
        meta["report"] = to_json(rep);
      } else {
        write_csv(body, rep);
      }
      rc = rep.mixed_bounded && rep.o_grows ? kOk : kViolation;
    }
    if (json) body << meta.dump(2) << '\n';
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedDimension& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return kUsage;
    }
    f << body.str();
  }
  return rc;
}
