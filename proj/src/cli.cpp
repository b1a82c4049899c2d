#include "ellex/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "ellex/elliptic.hpp"
#include "ellex/errors.hpp"
#include "ellex/exchange.hpp"
#include "ellex/poisson.hpp"
#include "ellex/rmatrix.hpp"

namespace ellex {

// ---------------------------------------------------------------- config

Complex resolve_nome_text(const std::string& text, Complex q) {
  if (text.size() > 2 && text[0] == 'q' && text[1] == '^') {
    std::string power = text.substr(2);
    if (const auto dash = power.find("-exact"); dash != std::string::npos && dash > 0 &&
                                                dash + 6 == power.size()) {
      power.resize(dash);
    }
    std::size_t used = 0;
    long long n = 0;
    try {
      n = std::stoll(power, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != power.size()) {
      throw DomainError("nome '" + text + "' must read q^N with integer N");
    }
    return ipow(q, n);
  }
  return parse_complex(text);
}

Complex RunConfig::q() const { return q_text ? parse_complex(*q_text) : Complex{0.5, 0.0}; }

Complex RunConfig::p() const {
  return p_text ? resolve_nome_text(*p_text, q()) : Complex{0.2, 0.0};
}

Complex RunConfig::a() const { return a_text ? resolve_nome_text(*a_text, q()) : p(); }

void RunConfig::validate() const {
  policy.validate();
  if (jobs < 1) throw DomainError("--jobs must be >= 1");
  if (points < 0) throw DomainError("--points must be >= 0");
  if (m && *m == 0) throw DomainError("level m = 0 is excluded");
  if (k && *k == 0) throw DomainError("k = 0 is excluded (p = 1)");
  if (format != "json" && format != "csv" && format != "text") {
    throw DomainError("--format must be json, csv or text");
  }
  if (cutoff < 0) throw DomainError("--cutoff must be >= 0");
  if (l_min > l_max) throw DomainError("--l-min exceeds --l-max");
  for (Complex x : xs) require_finite(x, "x");
  // resolve eagerly so malformed nome text is a usage error before any work
  (void)q();
  (void)p();
  (void)a();
}

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  if (command == "verify") j["suite"] = suite;
  if (!fn.empty()) j["fn"] = fn;
  j["q"] = format_complex(q());
  j["p"] = p_text ? *p_text : format_complex(p());
  j["p_value"] = format_complex(p());
  j["m"] = m ? Json(*m) : Json();
  j["k"] = k ? Json(*k) : Json();
  if (!xs.empty()) {
    Json arr = Json::array();
    for (Complex x : xs) arr.push_back(format_complex(x));
    j["x"] = arr;
  }
  if (!betas.empty()) j["beta"] = betas;
  j["points"] = points;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["max_terms"] = policy.max_terms;
  j["tail_tol"] = policy.tail_tol;
  return j;
}

// ---------------------------------------------------------------- grids

namespace {

// Engine plus a hand-written mapping to [0, 1): library distributions are
// not specified bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::seed_seq& seq) : eng_(seq) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  Complex polar(double modulus) {
    return std::polar(modulus, uniform(-std::numbers::pi, std::numbers::pi));
  }

 private:
  std::mt19937_64 eng_;
};

std::uint32_t fnv1a(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 16777619u;
  }
  return h;
}

// The point stream depends on (seed, suite, index) only, never on scheduling.
Rng point_rng(std::uint64_t seed, const std::string& suite, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    fnv1a(suite), static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

template <class T, class F>
std::vector<T> parallel_map(int n, int jobs, F&& f) {
  std::vector<T> out(static_cast<std::size_t>(n));
  const int workers = std::clamp(jobs, 1, std::max(n, 1));
  std::atomic<int> next{0};
  auto run = [&] {
    for (int i = next++; i < n; i = next++) out[static_cast<std::size_t>(i)] = f(i);
  };
  if (workers == 1) {
    run();
    return out;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  pool.clear();
  return out;
}

constexpr int kMaxDraws = 200;

// Draws points until `eval` returns without hitting a singular point.
double retry(Rng& rng, const std::function<double(Rng&)>& eval) {
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    try {
      return eval(rng);
    } catch (const NearSingularity&) {
    } catch (const SingularMatrix&) {
    }
  }
  throw Error("no regular grid point after " + std::to_string(kMaxDraws) + " draws");
}

// Raised inside a point evaluation to request a fresh draw.
struct Reject : NearSingularity {
  Reject() : NearSingularity("grid point rejected") {}
};

double rel(Complex got, Complex want) { return std::abs(got - want) / std::abs(want); }

struct PointValue {
  double value = 0.0;
  std::string error;
  std::exception_ptr domain;  // invalid input is not a check failure
};

enum class Fold { max, furthest_from_ten };

struct GridSpec {
  std::string suite;
  std::string id;
  Json params = Json::object();
  double tolerance = 0.0;
  double lower_bound = -std::numeric_limits<double>::infinity();
  std::string metric = "rel";
  int points = 1;
  Fold fold = Fold::max;
};

class SuiteRunner {
 public:
  explicit SuiteRunner(const RunConfig& cfg) : cfg_(cfg) {}

  int points_or(int fallback) const { return cfg_.points > 0 ? cfg_.points : fallback; }
  const RunConfig& config() const { return cfg_; }

  void grid(const GridSpec& spec, const std::function<double(Rng&)>& eval) {
    const auto t0 = std::chrono::steady_clock::now();
    auto values = parallel_map<PointValue>(spec.points, cfg_.jobs, [&](int i) {
      Rng rng = point_rng(cfg_.seed, spec.suite + "/" + spec.id, i);
      PointValue pv;
      try {
        pv.value = retry(rng, eval);
      } catch (const DomainError&) {
        pv.domain = std::current_exception();
      } catch (const std::exception& e) {
        pv.value = std::nan("");
        pv.error = "point " + std::to_string(i) + ": " + e.what();
      }
      return pv;
    });
    for (const PointValue& pv : values) {
      if (pv.domain) std::rethrow_exception(pv.domain);
    }
    CheckResult r;
    r.suite = spec.suite;
    r.id = spec.id;
    r.params = spec.params;
    r.tolerance = spec.tolerance;
    r.lower_bound = spec.lower_bound;
    r.metric = spec.metric;
    r.points = spec.points;
    r.max_error = spec.fold == Fold::max ? 0.0 : 10.0;
    for (const PointValue& pv : values) {
      if (!pv.error.empty() && r.note.empty()) r.note = pv.error;
      if (std::isnan(r.max_error) || std::isnan(pv.value)) {
        r.max_error = std::nan("");
      } else if (spec.fold == Fold::max) {
        r.max_error = std::max(r.max_error, pv.value);
      } else if (std::abs(std::log(pv.value / 10.0)) > std::abs(std::log(r.max_error / 10.0))) {
        r.max_error = pv.value;
      }
    }
    r.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.decide();
    checks_.push_back(std::move(r));
  }

  void add(CheckResult r) { checks_.push_back(std::move(r)); }
  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  const RunConfig& cfg_;
  std::vector<CheckResult> checks_;
};

std::vector<int> level_list(const RunConfig& cfg, std::vector<int> fallback) {
  return cfg.m ? std::vector<int>{*cfg.m} : fallback;
}

std::vector<int> k_list(const RunConfig& cfg, std::vector<int> fallback) {
  return cfg.k ? std::vector<int>{*cfg.k} : fallback;
}

Json nome_params(const NomeParams& n) {
  return Json{{"p", format_complex(n.p)}, {"q", format_complex(n.q)}};
}

// Identity residuals of R come out near 2e-15 times the condition of R, so grid
// points where R is close to singular are redrawn.
constexpr double kMaxCondition = 1e5;
constexpr double kLimitClearance = 0.4;

// x with log-uniform modulus in [lo, hi] and uniform phase
Complex draw_x(Rng& rng, double lo, double hi) { return rng.polar(rng.log_uniform(lo, hi)); }

constexpr double kGridClearance = 1e-6;

void require_clear(int m, Complex x, const NomeParams& nome) {
  if (exchange_singular_distance(m, x, nome) < kGridClearance) throw Reject();
}

void require_conditioned(const RMatrix4& r) {
  if (invert(r).condition > kMaxCondition) throw Reject();
}

// ---------------------------------------------------------------- suites

void suite_theta(SuiteRunner& s) {
  const int n = s.points_or(100);
  const Json params{{"a_modulus", {0.05, 0.9}}, {"x_modulus", {0.1, 10.0}}};
  const TruncationPolicy pol = s.config().policy;
  auto draw = [](Rng& rng) {
    const Complex a = rng.polar(rng.uniform(0.05, 0.9));
    const Complex x = draw_x(rng, 0.1, 10.0);
    if (theta_zero_distance(a, x) < 1e-3) throw Reject();
    return std::pair{a, x};
  };
  s.grid({"theta", "theta(ax)=theta(1/x)", params, 1e-10, -INFINITY, "rel", n},
         [&](Rng& rng) {
           auto [a, x] = draw(rng);
           return rel(theta(a, a * x, pol), theta(a, 1.0 / x, pol));
         });
  s.grid({"theta", "theta(1/x)=-theta(x)/x", params, 1e-10, -INFINITY, "rel", n},
         [&](Rng& rng) {
           auto [a, x] = draw(rng);
           return rel(theta(a, 1.0 / x, pol), -theta(a, x, pol) / x);
         });
  s.grid({"theta", "shift law |s|<=3", params, 1e-10, -INFINITY, "rel", n}, [&](Rng& rng) {
    auto [a, x] = draw(rng);
    const Complex base = theta(a, x, pol);
    double worst = 0.0;
    for (int sh = -3; sh <= 3; ++sh) {
      worst = std::max(worst, rel(theta(a, ipow(a, sh) * x, pol),
                                  theta_shift_factor(a, sh, x) * base));
    }
    return worst;
  });
}

void suite_tau(SuiteRunner& s) {
  const TruncationPolicy pol = s.config().policy;
  s.grid({"tau", "theta quotient=Pochhammer ratio",
          Json{{"q_modulus", {0.1, 0.7}}, {"x_modulus", {0.3, 3.0}}}, 1e-11, -INFINITY, "rel",
          s.points_or(50)},
         [&](Rng& rng) {
           const Complex q = rng.polar(rng.uniform(0.1, 0.7));
           const Complex x = draw_x(rng, 0.3, 3.0);
           return rel(tau_fn(x, q, pol), tau_fn_pochhammer(x, q, pol));
         });
}

void suite_rmatrix(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const bool fixed = cfg.p_text || cfg.q_text;
  Json params = fixed ? nome_params({cfg.p(), cfg.q()})
                      : Json{{"p", {0.05, 0.7}}, {"q_modulus", {0.1, 0.7}}};
  params["x_modulus"] = {0.5, 2.0};
  auto draw_nome = [&](Rng& rng) {
    if (fixed) return NomeParams{cfg.p(), cfg.q()};
    const double p = rng.uniform(0.05, 0.7);
    return NomeParams{p, rng.polar(rng.uniform(0.1, 0.7))};
  };
  s.grid({"rmatrix", "crossing", params, 1e-9, -INFINITY, "rel", s.points_or(50)},
         [&](Rng& rng) {
           const NomeParams nome = draw_nome(rng);
           const Complex x = draw_x(rng, 0.5, 2.0);
           require_conditioned(swap_slots(r_plus(x, nome, pol)));
           require_conditioned(partial_transpose(
               swap_slots(r_plus(x / (nome.q * nome.q), nome, pol)), Slot::first));
           return check_crossing(x, nome, pol).max_error;
         });
  s.grid({"rmatrix", "p-shift", params, 1e-9, -INFINITY, "rel", s.points_or(50)},
         [&](Rng& rng) {
           const NomeParams nome = draw_nome(rng);
           return check_pshift(draw_x(rng, 0.5, 2.0), nome, pol).max_error;
         });
  s.grid({"rmatrix", "Yang-Baxter", params, 1e-9, -INFINITY, "rel", s.points_or(20)},
         [&](Rng& rng) {
           const NomeParams nome = draw_nome(rng);
           const Complex x = draw_x(rng, 0.5, 2.0);
           const Complex y = draw_x(rng, 0.5, 2.0);
           for (Complex z : {x, y, x * y}) require_conditioned(r_plus(z, nome, pol));
           return check_ybe(x, y, nome, pol).max_error;
         });
}

void suite_theorem4(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const NomeParams nome{cfg.p(), cfg.q()};
  for (int m : level_list(cfg, {-3, -2, -1, 1, 2, 3})) {
    const LevelParams level = LevelParams::make(m, nome);
    Json params = nome_params(nome);
    params["m"] = m;
    params["x_modulus"] = {0.5, 2.0};
    s.grid({"theorem4", "F closed=iterated m=" + std::to_string(m), params, 1e-10, -INFINITY,
            "rel", s.points_or(20)},
           [&](Rng& rng) {
             const Complex x = draw_x(rng, 0.5, 2.0);
             require_clear(m, x, nome);
             return rel(exchange_F(level, x, pol), exchange_F_iterated(level, x, pol));
           });
  }
}

void suite_theorem5(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const NomeParams nome{cfg.p(), cfg.q()};
  for (int m : level_list(cfg, {-3, -2, -1, 1, 2, 3})) {
    const LevelParams level = LevelParams::make(m, nome);
    const Complex qc = std::exp(level.c.value * std::log(nome.q));
    Json params = nome_params(nome);
    params["m"] = m;
    params["c"] = format_complex(level.c.value);
    params["x_modulus"] = {0.5, 2.0};
    s.grid({"theorem5", "Y closed=F ratio m=" + std::to_string(m), params, 1e-9, -INFINITY,
            "rel", s.points_or(20)},
           [&](Rng& rng) {
             const Complex x = draw_x(rng, 0.5, 2.0);
             require_clear(m, x, nome);
             require_clear(m, qc * x, nome);
             require_clear(m, std::sqrt(nome.p) * x, nome);
             return rel(exchange_Y(level, x, pol), exchange_Y_ratio(level, x, pol));
           });
  }
}

void suite_feigin_frenkel(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const NomeParams nome{cfg.p(), cfg.q()};
  const Complex q = nome.q;
  for (int m : level_list(cfg, {-3, -2, -1, 1, 2, 3})) {
    const LevelParams level = LevelParams::make(m, nome);
    Json params = nome_params(nome);
    params["m"] = m;
    params["x_modulus"] = {0.5, 2.0};
    const std::string tag = " m=" + std::to_string(m);
    auto scaled = [](Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    s.grid({"feigin-frenkel", "Y(xq^2)=Y(x)" + tag, params, 1e-10, -INFINITY, "abs/max(1,|Y|)",
            s.points_or(50)},
           [&](Rng& rng) {
             const Complex x = draw_x(rng, 0.5, 2.0);
             require_clear(m, x, nome);
             return scaled(exchange_Y(level, x * q * q, pol), exchange_Y(level, x, pol));
           });
    s.grid({"feigin-frenkel", "Y(xq)=Y(1/x)" + tag, params, 1e-10, -INFINITY, "abs/max(1,|Y|)",
            s.points_or(50)},
           [&](Rng& rng) {
             const Complex x = draw_x(rng, 0.5, 2.0);
             require_clear(m, x, nome);
             require_clear(m, x * q, nome);
             return scaled(exchange_Y(level, x * q, pol), exchange_Y(level, 1.0 / x, pol));
           });
  }
}

void suite_theorem6(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const Complex q = cfg.q();
  const std::vector<int> levels = level_list(cfg, {-3, -2, -1, 1, 2, 3});
  for (int k : k_list(cfg, {-3, -2, -1, 1, 2, 3})) {
    const CommutingPoint cp{k};
    const NomeParams nome = cp.nome(q);
    Json params = nome_params(nome);
    params["p"] = "q^" + std::to_string(2 * k);
    params["q"] = format_complex(q);
    params["k"] = k;
    params["m"] = levels;
    params["x_modulus"] = {0.5, 2.0};
    const int per_level = s.points_or(20);
    const int n = per_level * static_cast<int>(levels.size());
    const std::string tag = " k=" + std::to_string(k);
    // each point draws its level first from its own stream
    auto level_of = [&](Rng& rng) {
      const int slot = static_cast<int>(rng.uniform() * static_cast<double>(levels.size()));
      return levels[static_cast<std::size_t>(std::min<int>(slot, levels.size() - 1))];
    };
    s.grid({"theorem6", (cp.odd() ? "F=1" : "F=even closed form") + tag, params, 1e-10,
            -INFINITY, "abs/max(1,|target|)", n},
           [&](Rng& rng) {
             const int m = level_of(rng);
             const Complex x = draw_x(rng, 0.5, 2.0);
             require_clear(m, x, nome);
             const Complex f = exchange_F(LevelParams::make(m, nome), x, pol);
             const Complex target = commuting_F(m, cp, x, q, pol);
             return std::abs(f - target) / std::max(1.0, std::abs(target));
           });
    s.grid({"theorem6", "Y=1" + tag, params, 1e-10, -INFINITY, "abs", n}, [&](Rng& rng) {
      const int m = level_of(rng);
      const Complex x = draw_x(rng, 0.5, 2.0);
      require_clear(m, x, nome);
      return std::abs(exchange_Y(LevelParams::make(m, nome), x, pol) - 1.0);
    });
  }
}

void suite_periodicity(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const NomeParams nome{cfg.p(), cfg.q()};
  const NomeParams shifted{nome.p * ipow(nome.q, 4), nome.q};
  for (int m : level_list(cfg, {-3, -2, -1, 1, 2, 3})) {
    for (ExchangeFunction which : {ExchangeFunction::F, ExchangeFunction::Y}) {
      const LevelParams level = LevelParams::make(m, nome);
      const CheckResult probe = check_p_periodicity(level, 1.0, which, pol);
      Json params = nome_params(nome);
      params["m"] = m;
      params["x_modulus"] = {0.5, 2.0};
      GridSpec spec{"periodicity", probe.id + " m=" + std::to_string(m), params, 1e-10,
                    -INFINITY, "rel", s.points_or(20)};
      if (probe.skipped) {
        CheckResult r = probe;
        r.id = spec.id;
        r.params = params;
        r.points = 0;
        s.add(r);
        continue;
      }
      s.grid(spec, [&](Rng& rng) {
        const Complex x = draw_x(rng, 0.5, 2.0);
        require_clear(m, x, nome);
        require_clear(m, x, shifted);
        return check_p_periodicity(level, x, which, pol).max_error;
      });
    }
  }
}

void suite_theorem7(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const Complex q = cfg.q();
  const double beta = cfg.betas.empty() ? 1e-2 : cfg.betas.front();
  for (int k : k_list(cfg, {1, 2})) {
    for (int m : level_list(cfg, {1, 2})) {
      const BetaLimitRequest req{m, k, beta, q};
      req.validate();
      Json params{{"m", m}, {"k", k}, {"q", format_complex(q)}, {"beta", beta},
                  {"beta_fine", beta / 10.0}, {"x_modulus", {0.6, 1.6}}};
      s.grid({"theorem7", "error ratio beta/(beta/10) m=" + std::to_string(m) +
                              " k=" + std::to_string(k),
              params, 20.0, 5.0, "ratio", s.points_or(4), Fold::furthest_from_ten},
             [&](Rng& rng) {
               const Complex x = draw_x(rng, 0.6, 1.6);
               // the beta^2 term carries one more pole order than the beta term, so
               // the first-order window closes near x^2 = q^{2j}
               if (theta_zero_distance(q * q, x * x) < kLimitClearance) throw Reject();
               return beta_limit_check(req, x, pol).max_error;
             });
    }
  }
}

void suite_coincidence(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const Complex q = cfg.q();
  const Complex x0{1.2, 0.3};
  const Complex norm = ps1_structure(x0, q, pol) / poisson_series_g(x0, q, pol);
  Json params{{"q", format_complex(q)},
              {"reference_x", format_complex(x0)},
              {"normalization", format_complex(norm)},
              {"normalization_over_2lnq", format_complex(norm / (2.0 * std::log(q)))},
              {"x_modulus", {0.3, 3.0}}};
  s.grid({"coincidence", "ps1/N=g", params, 1e-8, -INFINITY, "abs/max(1,|g|)",
          s.points_or(50)},
         [&](Rng& rng) {
           const Complex x = draw_x(rng, 0.3, 3.0);
           if (theta_zero_distance(q * q, x * x) < 1e-3) throw Reject();
           return rel_diff(ps1_structure(x, q, pol) / norm, poisson_series_g(x, q, pol));
         });
}

CheckResult table_check(const std::string& id, double tol, Json params, int points,
                        double worst, double ms) {
  CheckResult r;
  r.suite = "modes";
  r.id = id;
  r.params = std::move(params);
  r.tolerance = tol;
  r.metric = "abs/max(1,|ref|)";
  r.points = points;
  r.max_error = worst;
  r.wall_time_ms = ms;
  r.decide();
  return r;
}

void suite_modes(SuiteRunner& s) {
  const RunConfig& cfg = s.config();
  const TruncationPolicy pol = cfg.policy;
  const Complex q = cfg.q();
  const int lo = cfg.l_min;
  const int hi = cfg.l_max;
  const std::vector<int> annuli{-1, 0, 1, 2};
  const auto t0 = std::chrono::steady_clock::now();
  auto tables = parallel_map<ModeBracketTable>(2 * static_cast<int>(annuli.size()), cfg.jobs,
                                               [&](int i) {
    const StructureKind kind = i % 2 == 0 ? StructureKind::theorem7 : StructureKind::ps1;
    return laurent_modes(kind, q, {annuli[static_cast<std::size_t>(i / 2)]}, lo, hi, cfg.nodes,
                         pol);
  });
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  auto g_table = [&](int n) -> const ModeBracketTable& {
    const auto idx = std::find(annuli.begin(), annuli.end(), n) - annuli.begin();
    return tables[static_cast<std::size_t>(2 * idx)];
  };
  auto scaled = [](Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  const Complex two_log_q = 2.0 * std::log(q);
  Json params{{"q", format_complex(q)}, {"annuli", annuli}, {"l", {lo, hi}},
              {"nodes", tables.front().nodes}};

  double worst_g = 0.0;
  double worst_ps1 = 0.0;
  int count = 0;
  for (std::size_t a = 0; a < annuli.size(); ++a) {
    for (int l = lo; l <= hi; ++l) {
      const Complex ref = series_laurent_coefficient(q, {annuli[a]}, l);
      worst_g = std::max(worst_g, scaled(tables[2 * a].coefficients.at(l), ref));
      worst_ps1 = std::max(worst_ps1, scaled(tables[2 * a + 1].coefficients.at(l), two_log_q * ref));
      ++count;
    }
  }
  s.add(table_check("contour=geometric expansion (g)", 1e-8, params, count, worst_g, ms));
  s.add(table_check("contour=2 ln q x expansion (ps1)", 1e-8, params, count, worst_ps1, 0.0));

  double worst_jump = 0.0;
  int jumps = 0;
  for (std::size_t a = 0; a + 1 < annuli.size(); ++a) {
    const int n = annuli[a];
    for (int l = lo; l <= hi; ++l) {
      const Complex diff = g_table(n).coefficients.at(l) - g_table(n + 1).coefficients.at(l);
      worst_jump = std::max(worst_jump, scaled(diff, annulus_crossing_jump(q, n, l)));
      ++jumps;
    }
  }
  s.add(table_check("annulus crossing=pole residues", 1e-8, params, jumps, worst_jump, 0.0));

  double worst_reflect = 0.0;
  int reflections = 0;
  for (int n : annuli) {
    const int partner = 1 - n;
    if (std::find(annuli.begin(), annuli.end(), partner) == annuli.end()) continue;
    for (int l = std::max(lo, -hi); l <= std::min(hi, -lo); ++l) {
      worst_reflect = std::max(worst_reflect, scaled(-g_table(partner).coefficients.at(-l),
                                                     g_table(n).coefficients.at(l)));
      ++reflections;
    }
  }
  s.add(table_check("g(n)_l=-g(1-n)_-l", 1e-10, params, reflections, worst_reflect, 0.0));
}

using SuiteFn = void (*)(SuiteRunner&);

struct SuiteEntry {
  SuiteInfo info;
  SuiteFn run;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> entries{
      {{"theta", "theta_a(ax) = theta_a(1/x) = -theta_a(x)/x and the integer shift law"},
       suite_theta},
      {{"tau", "tau as a theta quotient equals its Pochhammer ratio"}, suite_tau},
      {{"rmatrix", "R^+ crossing symmetry, p-shift covariance and Yang-Baxter"}, suite_rmatrix},
      {{"theorem4", "closed theta form of F(m,x) equals the iterated shift product"},
       suite_theorem4},
      {{"theorem5", "closed form of Y equals F(m,q^c x)/F(m,-p^{1/2} x)"}, suite_theorem5},
      {{"feigin-frenkel", "Y(xq^2) = Y(x) and Y(xq) = Y(1/x)"}, suite_feigin_frenkel},
      {{"theorem6", "at p = q^{2k}: F = 1 (k odd), F = even closed form (k even), Y = 1"},
       suite_theorem6},
      {{"periodicity", "F and Y invariant under p -> p q^4"}, suite_periodicity},
      {{"theorem7", "ln Y / beta reaches the k-labelled Poisson structure at first order"},
       suite_theorem7},
      {{"coincidence", "center Poisson bracket is a constant multiple of the series g"},
       suite_coincidence},
      {{"modes", "contour Laurent coefficients vs geometric expansion, pole residues, reflection"},
       suite_modes},
  };
  return entries;
}

}  // namespace

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

VerificationReport run_verify(const RunConfig& config) {
  config.validate();
  VerificationReport report;
  report.version = version();
  report.suite = config.suite;
  report.config = config.to_json();
  bool matched = false;
  SuiteRunner runner(config);
  for (const auto& e : registry()) {
    if (config.suite != "all" && config.suite != e.info.name) continue;
    matched = true;
    e.run(runner);
  }
  if (!matched) throw DomainError("unknown suite '" + config.suite + "' (see verify --list)");
  report.checks = runner.take();
  return report;
}

// ---------------------------------------------------------------- limit

VerificationReport run_limit(const RunConfig& config) {
  config.validate();
  const Complex q = config.q();
  const int m = config.m.value_or(1);
  const int k = config.k.value_or(1);
  std::vector<double> betas = config.betas;
  if (betas.empty()) betas = {1e-1, 1e-2, 1e-3, 1e-4};
  std::sort(betas.begin(), betas.end(), std::greater<>());
  if (betas.size() < 2) throw DomainError("limit needs at least two beta values");
  const std::vector<Complex> xs = config.xs.empty() ? std::vector<Complex>{1.4} : config.xs;

  VerificationReport report;
  report.version = version();
  report.suite = "limit";
  report.config = config.to_json();
  const double lo = std::log(5.0) / std::log(10.0);
  const double hi = std::log(20.0) / std::log(10.0);
  for (Complex x : xs) {
    std::vector<BetaLimitPoint> pts;
    Json table = Json::array();
    for (double b : betas) {
      pts.push_back(beta_limit_point({m, k, b, q}, x, config.policy));
      table.push_back(Json{{"beta", b},
                           {"estimate", format_complex(pts.back().estimate)},
                           {"error", pts.back().error}});
    }
    const Json base{{"m", m}, {"k", k}, {"q", format_complex(q)}, {"x", format_complex(x)}};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      CheckResult r;
      r.suite = "limit";
      r.id = "local order " + format_double(betas[i]) + "->" + format_double(betas[i + 1]) +
             " x=" + format_complex(x);
      r.params = base;
      r.params["errors"] = {pts[i].error, pts[i + 1].error};
      r.metric = "order";
      r.lower_bound = lo;
      r.tolerance = hi;
      r.max_error = std::log(pts[i].error / pts[i + 1].error) / std::log(betas[i] / betas[i + 1]);
      r.decide();
      report.checks.push_back(r);
    }
    // least-squares slope of ln error against ln beta
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double lx = std::log(betas[i]);
      const double ly = std::log(pts[i].error);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    CheckResult fit;
    fit.suite = "limit";
    fit.id = "fitted order x=" + format_complex(x);
    fit.params = base;
    fit.params["table"] = table;
    fit.metric = "order";
    fit.lower_bound = lo;
    fit.tolerance = hi;
    fit.points = static_cast<int>(pts.size());
    fit.max_error = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.decide();
    report.checks.push_back(fit);
  }
  return report;
}

// ---------------------------------------------------------------- eval

namespace {

Complex eval_once(const RunConfig& cfg, Complex x, const TruncationPolicy& pol) {
  const std::string& fn = cfg.fn;
  const Complex q = cfg.q();
  if (fn == "theta") return theta(cfg.a(), x, pol);
  if (fn == "logderiv") return log_deriv_theta(cfg.a(), x, pol);
  if (fn == "tau") return tau_fn(x, q, pol);
  if (fn == "g") return poisson_series_g(x, q, pol);
  if (fn == "ps1") return ps1_structure(x, q, pol);
  if (fn == "structure") return poisson_structure(cfg.m.value_or(1), cfg.k.value_or(1), x, q, pol);
  if (fn == "F" || fn == "Y" || fn == "Yratio") {
    const LevelParams level = LevelParams::make(cfg.m.value_or(1), {cfg.p(), q});
    if (fn == "F") return exchange_F(level, x, pol);
    if (fn == "Y") return exchange_Y(level, x, pol);
    return exchange_Y_ratio(level, x, pol);
  }
  throw DomainError("unknown function '" + fn +
                    "' (theta, logderiv, tau, F, Y, Yratio, g, structure, ps1)");
}

}  // namespace

std::string run_eval(const RunConfig& config) {
  config.validate();
  if (config.xs.empty()) throw DomainError("eval needs at least one --x");
  struct Row {
    Complex x, value;
    double bound;
  };
  std::vector<Row> rows;
  for (Complex x : config.xs) {
    const Complex v = eval_once(config, x, config.policy);
    const Complex tight = eval_once(config, x, config.policy.tightened(1e3));
    rows.push_back({x, v, std::max(std::abs(v - tight), config.policy.tail_tol * std::abs(v))});
  }
  std::ostringstream os;
  if (config.format == "json") {
    Json j;
    j["schema"] = VerificationReport::kSchema;
    j["tool"] = "ellex";
    j["version"] = version();
    j["config"] = config.to_json();
    Json arr = Json::array();
    for (const Row& r : rows) {
      arr.push_back(Json{{"x", format_complex(r.x)},
                         {"value", format_complex(r.value)},
                         {"re", r.value.real()},
                         {"im", r.value.imag()},
                         {"error_bound", r.bound}});
    }
    j["values"] = arr;
    os << j.dump(2) << '\n';
  } else if (config.format == "csv") {
    os << "fn,x,re,im,error_bound\n";
    for (const Row& r : rows) {
      os << config.fn << ',' << format_complex(r.x) << ',' << format_double(r.value.real()) << ','
         << format_double(r.value.imag()) << ',' << format_double(r.bound) << '\n';
    }
  } else {
    for (const Row& r : rows) {
      os << config.fn << "(" << format_complex(r.x) << ") = " << format_complex(r.value)
         << "  +- " << format_double(r.bound) << '\n';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- modes

std::string run_modes(const RunConfig& config) {
  config.validate();
  const StructureKind kind = parse_structure_kind(config.fn.empty() ? "theorem7" : config.fn);
  const Complex q = config.q();
  const ModeBracketTable table =
      laurent_modes(kind, q, {config.annulus}, config.l_min, config.l_max, config.nodes,
                    config.policy);
  std::vector<std::pair<int, int>> pairs = config.pairs;
  if (pairs.empty()) pairs = {{1, -1}, {1, 1}, {2, 0}};
  std::ostringstream os;
  if (config.format == "json") {
    Json j;
    j["schema"] = VerificationReport::kSchema;
    j["tool"] = "ellex";
    j["version"] = version();
    j["config"] = config.to_json();
    j["config"]["annulus"] = config.annulus;
    Json coeffs = Json::array();
    for (const auto& [l, g] : table.coefficients) {
      coeffs.push_back(Json{{"l", l}, {"re", g.real()}, {"im", g.imag()}});
    }
    j["table"] = Json{{"kind", to_string(kind)},
                      {"q", format_complex(q)},
                      {"annulus", config.annulus},
                      {"radius", AnnulusLabel{config.annulus}.radius(q)},
                      {"nodes", table.nodes},
                      {"coefficients", coeffs}};
    Json brackets = Json::array();
    for (auto [n, m] : pairs) brackets.push_back(mode_bracket_json(table, n, m, config.cutoff));
    j["brackets"] = brackets;
    os << j.dump(2) << '\n';
  } else if (config.format == "csv") {
    os << "l,re,im\n";
    for (const auto& [l, g] : table.coefficients) {
      os << l << ',' << format_double(g.real()) << ',' << format_double(g.imag()) << '\n';
    }
  } else {
    os << to_string(kind) << " q=" << format_complex(q) << " annulus=" << config.annulus
       << " radius=" << format_double(AnnulusLabel{config.annulus}.radius(q))
       << " nodes=" << table.nodes << '\n';
    for (const auto& [l, g] : table.coefficients) {
      os << "g_" << l << " = " << format_complex(g) << '\n';
    }
    for (auto [n, m] : pairs) os << format_mode_bracket(table, n, m, config.cutoff) << '\n';
  }
  return os.str();
}

}  // namespace ellex
