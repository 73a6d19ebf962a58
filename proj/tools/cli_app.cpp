#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <new>

#include "mexp/errors.hpp"

namespace mexp::cli {

namespace {

using nlohmann::json;

std::string variant_name(GammaVariant v) { return v == GammaVariant::exact ? "exact" : "literal"; }

GammaVariant parse_variant(const std::string& s) {
  if (s == "exact") return GammaVariant::exact;
  if (s == "literal") return GammaVariant::literal;
  throw ConfigError("--gamma-variant must be exact or literal, got '" + s + "'");
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

constexpr auto kMaxU64 = std::numeric_limits<std::uint64_t>::max();

}  // namespace

json RunConfig::to_json() const {
  json j = json::object();
  j["command"] = command;
  j["alpha"] = alpha;
  j["x"] = xs;
  j["x_range"] = x_range ? json(*x_range) : json(nullptr);
  j["tau"] = tau ? json(tau->str()) : json(nullptr);
  j["M"] = M ? json(*M) : json(nullptr);
  j["N"] = N ? json(*N) : json(nullptr);
  j["epsilon"] = epsilon.str();
  j["sieve_limit"] = sieve_limit;
  j["frac_bits"] = frac_bits;
  j["seed"] = seed;
  j["format"] = format;
  j["output"] = output;
  j["count"] = count;
  j["gamma_variant"] = variant_name(gamma_variant);
  j["seq"] = to_string(seq);
  j["workers"] = workers;
  j["lemmas"] = lemmas;
  j["emit_plot_data"] = plot_data;
  j["memory_budget"] = memory_budget;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.alpha = j.at("alpha").get<std::string>();
  c.xs = j.at("x").get<std::vector<std::uint64_t>>();
  if (!j.at("x_range").is_null()) c.x_range = j["x_range"].get<std::string>();
  if (!j.at("tau").is_null()) c.tau = Ratio::parse(j["tau"].get<std::string>());
  if (!j.at("M").is_null()) c.M = j["M"].get<std::uint64_t>();
  if (!j.at("N").is_null()) c.N = j["N"].get<std::uint64_t>();
  c.epsilon = Ratio::parse(j.at("epsilon").get<std::string>());
  c.sieve_limit = j.at("sieve_limit").get<std::uint64_t>();
  c.frac_bits = j.at("frac_bits").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.format = j.at("format").get<std::string>();
  c.output = j.at("output").get<std::string>();
  c.count = j.at("count").get<std::size_t>();
  c.gamma_variant = parse_variant(j.at("gamma_variant").get<std::string>());
  c.seq = parse_sequence_choice(j.at("seq").get<std::string>());
  c.workers = j.at("workers").get<int>();
  c.lemmas = j.at("lemmas").get<bool>();
  c.plot_data = j.at("emit_plot_data").get<std::string>();
  c.memory_budget = j.at("memory_budget").get<std::uint64_t>();
  return c;
}

std::uint64_t parse_count(const std::string& text) {
  const auto e = text.find_first_of("eE");
  const std::string mant = text.substr(0, e);
  const std::string exp = e == std::string::npos ? "0" : text.substr(e + 1);
  if (!all_digits(mant) || !all_digits(exp)) throw ConfigError("expected an integer like 1000 or 1e3, got '" + text + "'");
  if (exp.size() > 2 || mant.size() > 20) throw ConfigError("'" + text + "' does not fit in 64 bits");
  std::uint64_t m = 0;
  if (std::from_chars(mant.data(), mant.data() + mant.size(), m).ec != std::errc())
    throw ConfigError("'" + text + "' does not fit in 64 bits");
  unsigned __int128 v = m;
  for (int k = std::stoi(exp); k > 0; --k) {
    v *= 10;
    if (v > kMaxU64) throw ConfigError("'" + text + "' does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_x_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.size() <= c2 + 1 || text[c2 + 1] != 'x')
    throw ConfigError("--x-range must look like start:stop:xK, got '" + text + "'");
  const auto start = parse_count(text.substr(0, c1));
  const auto stop = parse_count(text.substr(c1 + 1, c2 - c1 - 1));
  const auto factor = parse_count(text.substr(c2 + 2));
  if (start == 0 || stop < start) throw ConfigError("--x-range needs 0 < start <= stop");
  if (factor < 2) throw ConfigError("--x-range factor must be at least 2");
  std::vector<std::uint64_t> xs;
  for (unsigned __int128 x = start; x <= stop; x *= factor) xs.push_back(static_cast<std::uint64_t>(x));
  return xs;
}

std::vector<Column> columns_for(const std::string& command) {
  using K = CellKind;
  if (command == "sum")
    return {{"x", K::unsigned_integer}, {"re", K::real},          {"im", K::real},
            {"abs", K::real},           {"err_bound", K::real},   {"terms", K::unsigned_integer}};
  if (command == "decompose")
    return {{"x", K::unsigned_integer}, {"M", K::unsigned_integer}, {"N", K::unsigned_integer},
            {"gamma_variant", K::text}, {"s_re", K::real},          {"s_im", K::real},
            {"t1_re", K::real},         {"t1_im", K::real},         {"t2_re", K::real},
            {"t2_im", K::real},         {"s_M_re", K::real},        {"s_M_im", K::real},
            {"s_N_re", K::real},        {"s_N_im", K::real},        {"residual", K::real},
            {"err_budget", K::real}};
  if (command == "convergents")
    return {{"i", K::unsigned_integer}, {"a", K::text}, {"p", K::text}, {"q", K::text}};
  if (command == "select-q")
    return {{"x", K::unsigned_integer}, {"tau", K::text},       {"i", K::unsigned_integer},
            {"q", K::text},             {"p", K::text},         {"q_prev", K::text},
            {"p_prev", K::text},        {"lower_ok", K::boolean}, {"upper_ok", K::boolean},
            {"xrange_ok", K::boolean},  {"approx_ok", K::boolean}, {"approx_decided", K::boolean},
            {"xq_range_ok", K::boolean}};
  if (command == "sweep")
    return {{"x", K::unsigned_integer},   {"M", K::unsigned_integer}, {"eta", K::text},
            {"tau", K::text},             {"q", K::text},             {"abs_sum", K::real},
            {"err_bound", K::real},       {"emp_exponent", K::real},  {"pred_exponent", K::real},
            {"xrange_ok", K::boolean},    {"approx_ok", K::boolean},  {"t1_bound", K::real},
            {"t2_bound", K::real},        {"lemma1_ratio", K::real},  {"lemma2_ratio", K::real},
            {"error", K::text}};
  if (command == "lemma1")
    return {{"x", K::unsigned_integer}, {"M", K::unsigned_integer}, {"q", K::text},      {"lhs", K::real},
            {"lhs_err", K::real},       {"rhs", K::real},           {"ratio", K::real}};
  if (command == "lemma2")
    return {{"x", K::unsigned_integer}, {"M", K::unsigned_integer}, {"N", K::unsigned_integer},
            {"seq", K::text},           {"seed", K::unsigned_integer}, {"q", K::text},
            {"lhs", K::real},           {"lhs_err", K::real},       {"rhs", K::real},
            {"ratio", K::real}};
  throw ConfigError("unknown command '" + command + "'");
}

namespace {

std::uint64_t default_M(const RunConfig& c, std::uint64_t x) { return c.M.value_or(ceil_x_two_fifths(x)); }
std::uint64_t default_N(const RunConfig& c, std::uint64_t x) { return c.N.value_or(ceil_x_two_fifths(x)); }

// every kernel touches the tables only up to x (T_I stops at min(MN, x))
std::uint64_t needed_sieve(const RunConfig& c) { return std::max<std::uint64_t>(1, *std::max_element(c.xs.begin(), c.xs.end())); }

Ratio tau_for(const RunConfig& c, const IrrationalSpec& spec) { return c.tau.value_or(default_tau(sweep_eta(spec))); }

Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

}  // namespace

Table build_table(const RunConfig& cfg, int& status) {
  status = 0;
  Table table(columns_for(cfg.command));
  const auto spec = IrrationalSpec::parse(cfg.alpha);
  if (cfg.command == "convergents") {
    const auto terms = cf_terms(spec, cfg.count);
    const auto convs = convergents(spec, cfg.count);
    for (std::size_t i = 0; i < convs.size(); ++i)
      table.add_row({Cell(std::uint64_t{i}), big_str(terms[i]), big_str(convs[i].p), big_str(convs[i].q)});
    return table;
  }
  if (cfg.xs.empty()) throw ConfigError(cfg.command + " needs --x or --x-range");
  if (cfg.command == "select-q") {
    const auto tau = tau_for(cfg, spec);
    for (auto x : cfg.xs) {
      const auto s = select_q(spec, x, tau, cfg.frac_bits);
      table.add_row({Cell(x), tau.str(), Cell(std::uint64_t{s.index}), big_str(s.q), big_str(s.p), big_str(s.q_prev),
                     big_str(s.p_prev), s.lower_ok, s.upper_ok, s.xrange_ok, s.approx_ok, s.approx_decided,
                     xq_range_holds(s.q, x, tau)});
    }
    return table;
  }

  const std::uint64_t limit = cfg.sieve_limit ? cfg.sieve_limit : needed_sieve(cfg);
  const auto tables = build_tables(limit, cfg.memory_budget);
  const auto alpha = alpha_fixed_point(spec, cfg.frac_bits);
  ExecConfig exec;
  exec.workers = cfg.workers;

  if (cfg.command == "sum") {
    for (auto x : cfg.xs) {
      const auto s = mobius_sum(x, alpha, tables, exec);
      table.add_row({Cell(x), s.re, s.im, s.abs(), s.err_bound, Cell(s.terms)});
    }
  } else if (cfg.command == "decompose") {
    for (auto x : cfg.xs) {
      const auto d = vaughan_decompose(x, default_M(cfg, x), default_N(cfg, x), alpha, tables, cfg.gamma_variant, exec);
      table.add_row({Cell(x), Cell(d.M), Cell(d.N), variant_name(d.variant), d.s_total.re, d.s_total.im, d.t1.re,
                     d.t1.im, d.t2.re, d.t2.im, d.s_M.re, d.s_M.im, d.s_N.re, d.s_N.im, d.residual, d.err_budget});
      // the literal variant is expected to break the identity
      if (d.variant == GammaVariant::exact && !(d.residual <= d.err_budget)) status = 4;
    }
  } else if (cfg.command == "sweep") {
    SweepOptions opt;
    opt.tau = cfg.tau;
    opt.epsilon = cfg.epsilon;
    opt.with_lemmas = cfg.lemmas;
    opt.frac_bits = cfg.frac_bits;
    opt.exec = exec;
    for (const auto& r : theorem_sweep(spec, cfg.xs, tables, opt)) {
      table.add_row({Cell(r.x), Cell(r.M), r.eta.str(), r.tau.str(), r.q ? Cell(big_str(*r.q)) : Cell(),
                     r.abs_sum, r.err_bound, r.emp_exponent, r.pred_exponent, r.xrange_ok, r.approx_ok, r.t1_bound,
                     r.t2_bound, opt_cell(r.lemma1_ratio), opt_cell(r.lemma2_ratio),
                     r.error.empty() ? Cell() : Cell(r.error)});
    }
  } else if (cfg.command == "lemma1") {
    const auto tau = tau_for(cfg, spec);
    for (auto x : cfg.xs) {
      const auto r = lemma1_check(x, default_M(cfg, x), alpha, select_q(spec, x, tau, cfg.frac_bits));
      table.add_row({Cell(x), Cell(r.M), big_str(r.q), r.lhs, r.lhs_err, r.rhs, r.ratio});
    }
  } else if (cfg.command == "lemma2") {
    const auto tau = tau_for(cfg, spec);
    for (auto x : cfg.xs) {
      const auto r = lemma2_check(x, default_M(cfg, x), default_N(cfg, x), alpha,
                                  select_q(spec, x, tau, cfg.frac_bits), cfg.seq, tables, cfg.seed, exec);
      table.add_row({Cell(x), Cell(r.M), Cell(*r.N), to_string(cfg.seq), Cell(cfg.seed), big_str(r.q), r.lhs,
                     r.lhs_err, r.rhs, r.ratio});
    }
  }
  return table;
}

namespace {

void write_to(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

// (log10 x, log10 |S|, pred_exponent * log10 x) for sum and sweep output
std::string plot_triples(const RunConfig& cfg, const Table& t) {
  const auto& cols = t.columns();
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i].name == name) return i;
    throw ConfigError("--emit-plot-data is only available for sum and sweep");
  };
  const auto ix = col("x");
  const auto is = cfg.command == "sum" ? col("abs") : col("abs_sum");
  const double pred = (theorem_exponent(sweep_eta(IrrationalSpec::parse(cfg.alpha))) + cfg.epsilon).value();
  std::string out = "log10_x,log10_abs_s,pred_log10_bound\n";
  for (const auto& row : t.rows()) {
    const double lx = std::log10(static_cast<double>(std::get<std::uint64_t>(row[ix])));
    const double ls = std::log10(std::get<double>(row[is]));
    out += format_double(lx) + "," + format_double(ls) + "," + format_double(pred * lx) + "\n";
  }
  return out;
}

const char* kColumnsHelp =
    "CSV columns (after the '# moebius-expsum v1' line):\n"
    "  sum          x,re,im,abs,err_bound,terms\n"
    "  decompose    x,M,N,gamma_variant,s_re,s_im,t1_re,t1_im,t2_re,t2_im,s_M_re,s_M_im,s_N_re,s_N_im,\n"
    "               residual,err_budget\n"
    "  convergents  i,a,p,q\n"
    "  select-q     x,tau,i,q,p,q_prev,p_prev,lower_ok,upper_ok,xrange_ok,approx_ok,approx_decided,xq_range_ok\n"
    "  sweep        x,M,eta,tau,q,abs_sum,err_bound,emp_exponent,pred_exponent,xrange_ok,approx_ok,\n"
    "               t1_bound,t2_bound,lemma1_ratio,lemma2_ratio,error\n"
    "  lemma1       x,M,q,lhs,lhs_err,rhs,ratio\n"
    "  lemma2       x,M,N,seq,seed,q,lhs,lhs_err,rhs,ratio\n"
    "Exit codes: 0 ok, 2 usage/config, 3 capacity/precision/range, 4 invariant violation.\n";

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moebius-twisted exponential sums: evaluation, Vaughan decomposition and bound checks"};
  app.footer(kColumnsHelp);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string x_text, x_range, tau_text, eps_text = "1/20", sieve_text, variant_text = "exact", seq_text = "mobius";
  std::string budget_text;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"sum", "S(x) = sum mu(n) e(alpha n)"},
      {"decompose", "Vaughan decomposition and its exact residual"},
      {"convergents", "continued fraction terms and convergents"},
      {"select-q", "convergent denominator q chosen for x"},
      {"sweep", "empirical exponent of |S(x)| against the predicted bound"},
      {"lemma1", "type I lemma: observed sum against its bound"},
      {"lemma2", "bilinear lemma: observed sum against its bound"}};
  for (const auto& [name, about] : commands) {
    auto* sub = app.add_subcommand(name, about);
    sub->add_option("--alpha", cfg.alpha, "quad:D | quad:P,D,Q | cf:a0,a1,... | liouville:ETA | golden")
        ->capture_default_str();
    if (name == "convergents") {
      sub->add_option("--count", cfg.count, "number of convergents")->capture_default_str();
    } else {
      sub->add_option("--x", x_text, "single x (1e6 notation accepted)");
      sub->add_option("--x-range", x_range, "geometric range start:stop:xK");
      sub->add_option("--tau", tau_text, "rational tau > 2 (default max(eta + 1/10, 5/2))");
    }
    if (name == "convergents" || name == "select-q") {
      sub->add_option("--frac-bits", cfg.frac_bits, "fixed point precision of alpha")->capture_default_str();
      continue;
    }
    if (name != "sweep") sub->add_option("--M", cfg.M, "M (default ceil(x^(2/5)))");
    if (name == "decompose" || name == "lemma2") sub->add_option("--N", cfg.N, "N (default ceil(x^(2/5)))");
    if (name == "sweep") {
      sub->add_option("--epsilon", eps_text, "epsilon added to the predicted exponent")->capture_default_str();
      sub->add_flag("--lemmas", cfg.lemmas, "also record lemma ratios per row");
    }
    if (name == "sum" || name == "sweep")
      sub->add_option("--emit-plot-data", cfg.plot_data, "write (log10 x, log10 |S|, pred*log10 x) to this file");
    if (name == "decompose") sub->add_option("--gamma-variant", variant_text, "exact | literal")->capture_default_str();
    if (name == "lemma2") {
      sub->add_option("--seq", seq_text, "mobius | ones | random")->capture_default_str();
      sub->add_option("--seed", cfg.seed, "seed for --seq random")->capture_default_str();
    }
    sub->add_option("--sieve-limit", sieve_text, "sieve size (default: what the command needs)");
    sub->add_option("--memory-budget", budget_text, "sieve memory budget in bytes");
    sub->add_option("--frac-bits", cfg.frac_bits, "fixed point precision of alpha")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "worker threads (0: all)")->capture_default_str();
  }
  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--format", cfg.format, "csv | json")->capture_default_str();
    sub->add_option("--output", cfg.output, "output file (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  int status = 0;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("--format must be csv or json");
    if (!x_text.empty() && !x_range.empty()) throw ConfigError("give either --x or --x-range, not both");
    if (!x_text.empty()) cfg.xs = {parse_count(x_text)};
    if (!x_range.empty()) {
      cfg.x_range = x_range;
      cfg.xs = parse_x_range(x_range);
    }
    if (!tau_text.empty()) cfg.tau = Ratio::parse(tau_text);
    cfg.epsilon = Ratio::parse(eps_text);
    if (cfg.epsilon < Ratio(0)) throw ConfigError("--epsilon must be nonnegative");
    if (!sieve_text.empty()) cfg.sieve_limit = parse_count(sieve_text);
    if (!budget_text.empty()) cfg.memory_budget = parse_count(budget_text);
    if (cfg.workers < 0) throw ConfigError("--workers must be nonnegative");
    cfg.gamma_variant = parse_variant(variant_text);
    cfg.seq = parse_sequence_choice(seq_text);
    if (cfg.M && *cfg.M == 0) throw ConfigError("--M must be positive");
    if (cfg.N && *cfg.N == 0) throw ConfigError("--N must be positive");

    const Table table = build_table(cfg, status);
    write_to(cfg.output, cfg.format == "csv" ? table.to_csv() : table.to_json(cfg.to_json()).dump(2) + "\n", out);
    if (!cfg.plot_data.empty()) write_to(cfg.plot_data, plot_triples(cfg, table), out);
    if (status == 4) err << "error: Vaughan residual exceeds its floating error budget\n";
    return status;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return 3;
  } catch (const InvariantError& e) {
    err << "error: internal invariant violated: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace mexp::cli
