// ellex: evaluate and verify the elliptic exchange functions from the shell.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or domain error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ellex/cli.hpp"
#include "ellex/errors.hpp"
#include "ellex/report.hpp"

namespace {

struct Flags {
  ellex::RunConfig cfg;
  std::string p, q, a;
  int m = 0, k = 0;
  std::vector<std::string> xs;
  std::vector<std::string> pairs;
  std::string out;
  int max_terms = 0;
  double tail_tol = 0.0;
  bool list = false;
  CLI::Option* p_opt = nullptr;
  CLI::Option* q_opt = nullptr;
  CLI::Option* a_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* terms_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
};

// Options shared by every subcommand; all of them land in one Flags.
void add_common(CLI::App* sub, Flags& f) {
  f.p_opt = sub->add_option("--p", f.p, "elliptic nome p (complex, or q^N for an exact power)");
  f.q_opt = sub->add_option("--q", f.q, "deformation parameter q, 0 < |q| < 1");
  f.m_opt = sub->add_option("--m", f.m, "level m (nonzero integer)");
  f.k_opt = sub->add_option("--k", f.k, "commuting-point label k, p = q^{2k}");
  sub->add_option("--x", f.xs, "evaluation point (repeatable), e.g. 1.3 or 0.2+0.9i");
  sub->add_option("--format", f.cfg.format, "json, csv or text")->capture_default_str();
  sub->add_option("--out", f.out, "write the report here instead of stdout");
  f.terms_opt = sub->add_option("--max-terms", f.max_terms, "truncation depth cap");
  f.tol_opt = sub->add_option("--tail-tol", f.tail_tol,
                              "bound on dropped product factors (env ELLEX_DEFAULT_TOL)");
}

// Folds the raw flag values into the RunConfig.
void finish(Flags& f) {
  ellex::RunConfig& c = f.cfg;
  c.policy = ellex::TruncationPolicy::from_environment();
  if (f.terms_opt->count()) c.policy.max_terms = f.max_terms;
  if (f.tol_opt->count()) c.policy.tail_tol = f.tail_tol;
  if (f.p_opt->count()) c.p_text = f.p;
  if (f.q_opt->count()) c.q_text = f.q;
  if (f.a_opt && f.a_opt->count()) c.a_text = f.a;
  if (f.m_opt->count()) c.m = f.m;
  if (f.k_opt->count()) c.k = f.k;
  for (const auto& x : f.xs) c.xs.push_back(ellex::parse_complex(x));
  for (const auto& pr : f.pairs) {
    const auto comma = pr.find(',');
    if (comma == std::string::npos) throw ellex::DomainError("--pair expects n,m");
    c.pairs.emplace_back(std::stoi(pr.substr(0, comma)), std::stoi(pr.substr(comma + 1)));
  }
}

int emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream os(f.out, std::ios::binary);
  os << text;
  if (!os) {
    std::cerr << "error: cannot write " << f.out << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elliptic exchange algebra: evaluation and identity verification"};
  app.require_subcommand(1);

  Flags eval_f, verify_f, limit_f, modes_f;

  CLI::App* eval = app.add_subcommand("eval", "evaluate one function at one or more points");
  add_common(eval, eval_f);
  eval->add_option("--fn", eval_f.cfg.fn,
                   "theta, logderiv, tau, F, Y, Yratio, g, structure or ps1")
      ->required();
  eval_f.a_opt = eval->add_option("--a", eval_f.a, "theta base (defaults to p)");

  CLI::App* verify = app.add_subcommand("verify", "run identity suites and report");
  add_common(verify, verify_f);
  verify->add_option("--suite", verify_f.cfg.suite, "suite name or all")->capture_default_str();
  verify->add_flag("--list", verify_f.list, "print suites and their identities");
  verify->add_option("--points", verify_f.cfg.points, "grid points per check (0: defaults)");
  verify->add_option("--seed", verify_f.cfg.seed, "grid seed")->capture_default_str();
  verify->add_option("--jobs", verify_f.cfg.jobs, "worker threads")->capture_default_str();
  verify->add_option("--beta", verify_f.cfg.betas, "beta for the theorem7 suite");
  verify->add_flag("--timings", verify_f.cfg.timings, "include wall times in JSON");

  CLI::App* limit = app.add_subcommand("limit", "beta -> 0 convergence table");
  add_common(limit, limit_f);
  limit->add_option("--beta", limit_f.cfg.betas, "beta ladder (default 1e-1 .. 1e-4)");

  CLI::App* modes = app.add_subcommand("modes", "Laurent mode table and brackets");
  add_common(modes, modes_f);
  modes->add_option("--fn", modes_f.cfg.fn, "theorem7 or ps1");
  modes->add_option("--annulus", modes_f.cfg.annulus, "annulus label n: |q|^n < |x| < |q|^{n-1}");
  modes->add_option("--l-min", modes_f.cfg.l_min)->capture_default_str();
  modes->add_option("--l-max", modes_f.cfg.l_max)->capture_default_str();
  modes->add_option("--nodes", modes_f.cfg.nodes, "quadrature nodes (0: automatic)");
  modes->add_option("--cutoff", modes_f.cfg.cutoff, "|l| cutoff in brackets")
      ->capture_default_str();
  modes->add_option("--pair", modes_f.pairs, "bracket {t_n,t_m} as n,m (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) {
      if (verify_f.list) {
        std::string text;
        for (const auto& s : ellex::suite_catalog()) text += s.name + "  " + s.identity + "\n";
        return emit(verify_f, text);
      }
      finish(verify_f);
      verify_f.cfg.command = "verify";
      const ellex::VerificationReport report = ellex::run_verify(verify_f.cfg);
      if (const int rc = emit(verify_f, report.render(verify_f.cfg.format, verify_f.cfg.timings)))
        return rc;
      return report.pass() ? 0 : 1;
    }
    if (limit->parsed()) {
      finish(limit_f);
      limit_f.cfg.command = "limit";
      const ellex::VerificationReport report = ellex::run_limit(limit_f.cfg);
      if (const int rc = emit(limit_f, report.render(limit_f.cfg.format))) return rc;
      return report.pass() ? 0 : 1;
    }
    if (eval->parsed()) {
      finish(eval_f);
      eval_f.cfg.command = "eval";
      return emit(eval_f, ellex::run_eval(eval_f.cfg));
    }
    finish(modes_f);
    modes_f.cfg.command = "modes";
    return emit(modes_f, ellex::run_modes(modes_f.cfg));
  } catch (const ellex::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: malformed number (" << e.what() << ")\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: number out of range (" << e.what() << ")\n";
    return 2;
  }
}
