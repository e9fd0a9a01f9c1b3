#include "upl/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "upl/mltt.hpp"
#include "upl/nbhd.hpp"
#include "upl/oracle.hpp"
#include "upl/parser.hpp"
#include "upl/reduction.hpp"
#include "upl/semantics.hpp"
#include "upl/serialize.hpp"
#include "upl/stdlib.hpp"
#include "upl/typing.hpp"

namespace upl::cli {

namespace {

struct Config {
  std::string sig = "std";
  std::size_t fuel = 100000;
  int depth = 3;
  bool json = false;
  std::uint64_t seed = 1;
  std::string ctx;
  bool no_prelude = false;
};

class BadInput : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// "x : U, y : V"
TypingContext parse_ctx(const std::string& text, const Signature& sig) {
  TypingContext g;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (trim(part).empty()) continue;
    auto colon = part.find(':');
    if (colon == std::string::npos) throw BadInput("context entry '" + trim(part) + "' needs 'x : U'");
    g.push(trim(part.substr(0, colon)), parse_nbhd(part.substr(colon + 1), sig));
  }
  return g;
}

class Runner {
 public:
  Runner(const Config& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  const Signature& sig() {
    if (cfg_.sig == "std") return standard_signature();
    if (!own_) {
      Signature loaded = parse_signature(read_file(cfg_.sig));
      auto rep = validate_signature(loaded);
      if (!rep.ok())
        throw BadInput(cfg_.sig + ": " + violation_name(rep.violations[0].kind) + ": " + rep.violations[0].message);
      own_ = std::move(loaded);
    }
    return *own_;
  }

  TypingOptions opts() const {
    TypingOptions o;
    o.depth = cfg_.depth;
    return o;
  }

  TypingContext context(const Term& m) {
    TypingContext g = parse_ctx(cfg_.ctx, sig());
    for (const auto& x : free_vars(m))
      if (!g.lookup(x)) g.push(x, NbhdNF::nabla());
    return g;
  }

  int emit(const json& j, const std::string& text, int code) {
    if (cfg_.json)
      out_ << j.dump(2) << "\n";
    else
      out_ << text;
    return code;
  }

  int parse(const std::string& text) {
    Term m = parse_term(text, sig());
    return emit({{"term", print_term(m)}, {"size", m.size()}}, print_term(m) + "\n", Positive);
  }

  int normalize_cmd(const std::string& text) {
    Term m = parse_term(text, sig());
    auto r = normalize(m, sig(), cfg_.fuel);
    if (auto* n = std::get_if<NormalForm>(&r))
      return emit({{"normal_form", print_term(n->term)}, {"steps", n->steps}},
                  print_term(n->term) + "\n", Positive);
    const auto& f = std::get<FuelExhausted>(r);
    return emit({{"fuel_exhausted", true}, {"last", print_term(f.last)}},
                "fuel exhausted; last term " + print_term(f.last) + "\n", Undetermined);
  }

  int reducts_cmd(const std::string& text) {
    Term m = parse_term(text, sig());
    json a = json::array();
    std::string s;
    for (const auto& r : reducts(m, sig())) {
      a.push_back(print_term(r));
      s += print_term(r) + "\n";
    }
    return emit(a, s, Positive);
  }

  int sn(const std::string& text) {
    Term m = parse_term(text, sig());
    SnVerdict v = check_sn(m, sig(), cfg_.fuel);
    std::string s;
    int code = Undetermined;
    if (auto* y = std::get_if<SN>(&v)) {
      s = "SN (longest reduction " + std::to_string(y->longest_path) + ")\n";
      for (const auto& n : y->normal_forms) s += "  normal form " + print_term(n) + "\n";
      code = Positive;
    } else if (auto* c = std::get_if<NotSN>(&v)) {
      s = "NotSN, cycle of length " + std::to_string(c->cycle.size() - 1) + ":\n";
      for (const auto& t : c->cycle) s += "  " + print_term(t) + "\n";
      code = Negative;
    } else {
      s = "Unknown after " + std::to_string(std::get<Unknown>(v).fuel_spent) + " terms\n";
    }
    return emit(to_json(v), s, code);
  }

  int leq_cmd(const std::string& a, const std::string& b) {
    bool r = leq(parse_nbhd(a, sig()), parse_nbhd(b, sig()));
    return emit({{"leq", r}}, std::string(r ? "true" : "false") + "\n", r ? Positive : Negative);
  }

  int meet_cmd(const std::string& a, const std::string& b) {
    NbhdNF r = meet(parse_nbhd(a, sig()), parse_nbhd(b, sig()));
    return emit({{"meet", print_nbhd(r)}}, print_nbhd(r) + "\n", Positive);
  }

  int classify_cmd(const std::string& a) {
    NbhdNF u = parse_nbhd(a, sig());
    std::string c = class_name(classify(u));
    return emit({{"class", c}, {"normal_form", print_nbhd(u)}, {"complexity", u.complexity()}}, c + "\n", Positive);
  }

  int check(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos) throw BadInput("expected 'TERM : U'");
    Term m = parse_term(text.substr(0, colon), sig());
    NbhdNF u = parse_nbhd(text.substr(colon + 1), sig());
    CheckOutcome r = check_type(sig(), context(m), m, u, opts());
    json j{{"outcome", outcome_name(r.outcome)}};
    std::string s = outcome_name(r.outcome);
    if (r.derivation) j["derivation"] = to_json(*r.derivation);
    if (!r.reason.empty()) {
      j["reason"] = r.reason;
      s += ": " + r.reason;
    }
    return emit(j, s + "\n", code_of(r.outcome));
  }

  int infer_cmd(const std::string& text) {
    Term m = parse_term(text, sig());
    InferResult r = infer(sig(), context(m), m, opts());
    json j{{"outcome", outcome_name(r.outcome)}};
    std::string s = outcome_name(r.outcome);
    if (r.best) {
      j["type"] = print_nbhd(r.best->type);
      j["derivation"] = to_json(*r.best->derivation);
      json all = json::array();
      for (const auto& t : r.types) all.push_back(print_nbhd(t.type));
      j["types"] = all;
      s = print_nbhd(r.best->type);
    }
    return emit(j, s + "\n", code_of(r.outcome));
  }

  int sem(const std::string& text) {
    Term m = parse_term(text, sig());
    Env rho;
    for (const auto& [x, u] : context(m).bindings()) rho[x] = SemApprox::up(u);
    SemApprox a = sem_approx(sig(), m, rho, opts());
    auto p = a.principal();
    json gens = json::array();
    for (const auto& u : a.generators) gens.push_back(print_nbhd(u));
    std::string s = p ? "up(" + print_nbhd(*p) + ")" : "bottom";
    return emit({{"bottom", !p}, {"principal", p ? json(print_nbhd(*p)) : json()}, {"generators", gens}}, s + "\n",
                p ? Positive : Negative);
  }

  int certify(const std::string& text) {
    Term m = parse_term(text, sig());
    Certificate c = certify_sn(sig(), m, opts());
    std::string s = c.certified ? "certified SN with type " + print_nbhd(c.type)
                                : std::string("no certificate (") + outcome_name(c.search) + ")";
    if (!c.certified && !c.reason.empty()) s += ": " + c.reason;
    // No certificate is never evidence of non-termination.
    return emit(to_json(c), s + "\n", c.certified ? Positive : Undetermined);
  }

  int model_report(const std::string& path) {
    std::vector<Term> corpus;
    for (const auto& l : lines_of(read_file(path))) corpus.push_back(parse_term(l, sig()));
    ModelReport r = model_equation_report(sig(), corpus, cfg_.depth);
    std::string s;
    for (const auto& e : r.entries) {
      s += std::string(entry_status_name(e.status)) + "  " + print_term(e.term) + "\n";
      if (e.status != EntryStatus::Holds)
        for (const auto& c : e.checks)
          if (!c.passed) s += "    " + c.name + ": " + c.detail + "\n";
    }
    s += std::to_string(r.count(EntryStatus::Holds)) + "/" + std::to_string(r.entries.size()) + " hold\n";
    int code = r.count(EntryStatus::Violated)            ? Negative
               : r.count(EntryStatus::DepthInsufficient) ? Undetermined
                                                         : Positive;
    return emit(to_json(r), s, code);
  }

  int validate(const std::string& path) {
    Signature s = path == "std" ? standard_signature() : parse_signature(read_file(path));
    auto rep = validate_signature(s);
    json a = json::array();
    std::string text = rep.ok() ? "valid\n" : "";
    for (const auto& v : rep.violations) {
      a.push_back({{"kind", violation_name(v.kind)}, {"message", v.message}, {"rules", v.rules}});
      text += std::string(violation_name(v.kind)) + ": " + v.message + "\n";
    }
    return emit({{"valid", rep.ok()}, {"violations", a}}, text, rep.ok() ? Positive : Negative);
  }

  int oracle(const std::string& path);
  int mltt(const std::string& path);

 private:
  static int code_of(Outcome o) {
    return o == Outcome::Valid ? Positive : o == Outcome::Refuted ? Negative : Undetermined;
  }

  const Config& cfg_;
  std::ostream& out_;
  std::optional<Signature> own_;
};

// Probe files:
//   seed TERM | pool TERM | layers N | fuel N | probe x : U, y : V |- TERM : W
int Runner::oracle(const std::string& path) {
  std::vector<Term> seeds, pool;
  int layers = 2;
  std::size_t fuel = 20000;
  struct Probe {
    TypingContext g;
    Term m;
    NbhdNF u;
    std::string text;
  };
  std::vector<Probe> probes;
  for (const auto& l : lines_of(read_file(path))) {
    auto sp = l.find(' ');
    std::string kw = l.substr(0, sp), rest = sp == std::string::npos ? "" : trim(l.substr(sp));
    if (kw == "seed") {
      seeds.push_back(parse_term(rest, sig()));
    } else if (kw == "pool") {
      pool.push_back(parse_term(rest, sig()));
    } else if (kw == "layers") {
      layers = std::stoi(rest);
    } else if (kw == "fuel") {
      fuel = std::stoul(rest);
    } else if (kw == "probe") {
      auto turn = rest.find("|-");
      auto colon = rest.rfind(':');
      if (turn == std::string::npos || colon == std::string::npos || colon < turn)
        throw BadInput("expected 'probe CTX |- TERM : U'");
      probes.push_back({parse_ctx(rest.substr(0, turn), sig()), parse_term(rest.substr(turn + 2, colon - turn - 2), sig()),
                        parse_nbhd(rest.substr(colon + 1), sig()), rest});
    } else {
      throw BadInput("unknown probe directive '" + kw + "'");
    }
  }
  TermUniverse u = TermUniverse::build_layered(sig(), seeds, pool, layers, fuel);
  RedSets reds(u);
  json results = json::array();
  std::string s = "universe of " + std::to_string(u.size()) + " terms, " + std::to_string(u.max_level()) + " layers\n";
  int code = Positive;
  for (const auto& p : probes) {
    json j{{"probe", p.text}};
    CheckOutcome typed = check_type(sig(), p.g, p.m, p.u, opts());
    if (typed.outcome != Outcome::Valid) {
      j["skipped"] = std::string("judgement not derivable: ") + outcome_name(typed.outcome);
      s += "skipped  " + p.text + "\n";
      if (code == Positive) code = Undetermined;
      results.push_back(j);
      continue;
    }
    try {
      ProbeResult r = soundness_probe(p.g, p.m, p.u, reds);
      j["result"] = to_json(r);
      s += std::string(r.ok ? "ok       " : "VIOLATED ") + p.text + " (" + std::to_string(r.instances) + " instances)\n";
      for (const auto& v : r.violations) s += "    " + v + "\n";
      if (!r.ok) code = Negative;
    } catch (const OracleError& e) {
      j["error"] = e.what();
      s += "coverage " + p.text + ": " + e.what() + "\n";
      if (code == Positive) code = Undetermined;
    }
    results.push_back(j);
  }
  return emit({{"universe_size", u.size()}, {"probes", results}}, s, code);
}

int Runner::mltt(const std::string& path) {
  MlttEnv env(sig(), cfg_.fuel);
  std::vector<Directive> script;
  if (cfg_.sig == "std" && !cfg_.no_prelude) script = parse_script(standard_declarations_text(), sig());
  for (auto& d : parse_script(read_file(path), sig())) script.push_back(std::move(d));
  ScriptReport r = run_script(script, env);
  std::string s;
  for (const auto& e : r.entries) {
    if (e.directive.kind == Directive::Kind::Constant && e.passed) continue;
    s += std::string(e.passed ? "pass  " : "FAIL  ") + e.directive.text;
    if (!e.result.ok()) s += "\n      " + std::string(verdict_name(e.result.verdict)) + ": " + e.result.reason;
    s += "\n";
  }
  s += std::to_string(r.entries.size() - r.failures()) + "/" + std::to_string(r.entries.size()) + " directives pass\n";
  return emit(to_json(r), s, r.ok() ? Positive : Negative);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"upl: untyped programs, neighbourhood types and dependent type checking"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--sig", cfg.sig, "signature file, or 'std'")->capture_default_str();
  app.add_option("--fuel", cfg.fuel, "reduction fuel")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--depth", cfg.depth, "typing search depth")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--json", cfg.json, "print JSON");
  app.add_option("--seed", cfg.seed, "seed for randomised commands")->capture_default_str();

  std::vector<std::string> words;
  std::string a, b;
  std::function<int()> action;
  Runner runner(cfg, out);
  auto term_cmd = [&](const char* name, const char* help, int (Runner::*f)(const std::string&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("text", words, "term (may be split over several arguments)")->required();
    sub->callback([&, f] { action = [&, f] { return (runner.*f)(join(words)); }; });
    return sub;
  };
  term_cmd("parse", "parse and print a term", &Runner::parse);
  term_cmd("normalize", "normal form by leftmost-outermost reduction", &Runner::normalize_cmd);
  term_cmd("reducts", "all one-step reducts", &Runner::reducts_cmd);
  term_cmd("sn", "decide strong normalisation within the fuel", &Runner::sn);
  term_cmd("check", "check 'TERM : U' in the intersection type system", &Runner::check)
      ->add_option("--ctx", cfg.ctx, "context 'x : U, y : V'");
  term_cmd("infer", "best neighbourhood type of a term", &Runner::infer_cmd)
      ->add_option("--ctx", cfg.ctx, "context 'x : U, y : V'");
  term_cmd("sem", "finite approximation of the denotation", &Runner::sem)
      ->add_option("--ctx", cfg.ctx, "environment 'x : U, y : V'");
  term_cmd("certify", "semantic strong normalisation certificate", &Runner::certify);

  auto* nbhd = app.add_subcommand("nbhd", "neighbourhood algebra");
  nbhd->require_subcommand(1);
  auto* leq_sub = nbhd->add_subcommand("leq", "U <= V in the formal inclusion order");
  leq_sub->add_option("U", a)->required();
  leq_sub->add_option("V", b)->required();
  leq_sub->callback([&] { action = [&] { return runner.leq_cmd(a, b); }; });
  auto* meet_sub = nbhd->add_subcommand("meet", "normal form of U & V");
  meet_sub->add_option("U", a)->required();
  meet_sub->add_option("V", b)->required();
  meet_sub->callback([&] { action = [&] { return runner.meet_cmd(a, b); }; });
  auto* cls_sub = nbhd->add_subcommand("classify", "nabla, constructor or arrows");
  cls_sub->add_option("U", a)->required();
  cls_sub->callback([&] { action = [&] { return runner.classify_cmd(a); }; });

  auto file_cmd = [&](const char* name, const char* help, int (Runner::*f)(const std::string&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", a)->required();
    sub->callback([&, f] { action = [&, f] { return (runner.*f)(a); }; });
    return sub;
  };
  file_cmd("model-report", "check the model equations on a corpus file", &Runner::model_report);
  file_cmd("validate", "check a signature file ('std' for the built-in one)", &Runner::validate);
  file_cmd("oracle", "run soundness probes from a probe file", &Runner::oracle);
  file_cmd("mltt", "run a dependent type checking script", &Runner::mltt)
      ->add_flag("--no-prelude", cfg.no_prelude, "do not load the standard declarations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return InputError;
  }
  try {
    return action();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const OracleError& e) {
    err << "oracle: " << e.what() << "\n";
    return Undetermined;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return InputError;
}

}  // namespace upl::cli
