#include "dictapp/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "dictapp/coherence.h"
#include "dictapp/errors.h"
#include "dictapp/systemf.h"

namespace dictapp {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("FileError", fmt::format("cannot read {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string diagnostic(const std::string &file, const Error &e) {
  if (e.span().known())
    return fmt::format("{}:{}:{}: {}: {}", file, e.span().line, e.span().column, e.kind(),
                       e.message());
  return fmt::format("{}: {}: {}", file, e.kind(), e.message());
}

json error_json(const std::string &file, const Error &e) {
  json j;
  j["file"] = file;
  j["status"] = "error";
  j["error"] = {{"kind", e.kind()},
                {"message", e.message()},
                {"line", e.span().line},
                {"column", e.span().column},
                {"exit_code", e.exit_code()}};
  return j;
}

struct CommonFlags {
  bool json = false;
  bool explain = false;
  bool unsafe = false;
  int closure_depth = kDefaultClosureDepth;
};

TypecheckOptions typecheck_options(const CommonFlags &flags) {
  TypecheckOptions options;
  options.guard = !flags.unsafe;
  options.closure_depth = flags.closure_depth;
  return options;
}

int cmd_check(const std::string &path, const CommonFlags &flags, std::ostream &out,
              std::ostream &err) {
  Program program = parse_program(read_file(path), path);
  ProgramResult result = check_program(program, typecheck_options(flags));
  if (flags.json) {
    json j;
    j["file"] = path;
    j["status"] = "ok";
    j["items"] = json::array();
    for (const auto &item : result.items) {
      json i;
      i["kind"] = item.kind == ItemResult::Kind::kDef ? "def" : "check";
      i["name"] = item.name;
      i["scheme"] = pretty(item.derivation.scheme);
      if (flags.explain) {
        i["term"] = pretty(item.derivation.term);
        i["trace"] = item.derivation.trace;
      }
      j["items"].push_back(std::move(i));
    }
    out << j.dump(2) << "\n";
    return 0;
  }
  (void)err;
  for (const auto &item : result.items) {
    out << (item.kind == ItemResult::Kind::kDef ? "def " : "check ") << item.name << " : "
        << pretty(item.derivation.scheme) << "\n";
    if (flags.explain) {
      out << "  term: " << pretty(item.derivation.term) << "\n";
      for (const auto &line : item.derivation.trace) out << "  trace: " << line << "\n";
    }
  }
  return 0;
}

int cmd_elaborate(const std::string &path, const std::string &out_path,
                  const CommonFlags &flags, std::ostream &out) {
  Program program = parse_program(read_file(path), path);
  ProgramResult result = check_program(program, typecheck_options(flags));
  std::string text = pretty(to_sysf(program, result));
  if (out_path.empty()) {
    out << text;
    return 0;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ValidationError("FileError", fmt::format("cannot write {}", out_path));
  file << text;
  file.close();
  if (!file) throw ValidationError("FileError", fmt::format("cannot write {}", out_path));
  return 0;
}

void typecheck_module(const SysfModule &m) {
  if (!m.has_declarations()) return;
  TargetEnv env;
  for (const auto &v : m.vals) env.push(v.name, v.type);
  for (const auto &d : m.defs) {
    TargetType t = tc_target(env, d.term);
    if (!alpha_eq(t, d.type))
      throw TypeError("Mismatch", fmt::format("definition {} has type {}, declared {}", d.name,
                                              pretty(t), pretty(d.type)));
    env.push(d.name, d.type);
  }
  if (m.main) tc_target(env, *m.main);
}

int cmd_equiv(const std::string &path_a, const std::string &path_b, long fuel,
              std::string &current, std::ostream &out) {
  current = path_a;
  SysfModule a = parse_sysf(read_file(path_a));
  typecheck_module(a);
  current = path_b;
  SysfModule b = parse_sysf(read_file(path_b));
  typecheck_module(b);
  current = path_a;

  std::vector<std::pair<std::string, std::pair<TargetTerm, TargetTerm>>> pairs;
  if (a.main && b.main) {
    pairs.push_back({"main", {*a.main, *b.main}});
  } else if (!a.main && !b.main) {
    if (a.defs.size() != b.defs.size())
      throw ValidationError("ModuleMismatch", "the modules define different names");
    for (const auto &d : a.defs) {
      const auto *other = b.find_def(d.name);
      if (!other)
        throw ValidationError("ModuleMismatch", fmt::format("{} is not defined in both", d.name));
      pairs.push_back({d.name, {d.term, other->term}});
    }
  } else {
    throw ValidationError("ModuleMismatch", "only one module has a main term");
  }

  bool all_equal = true;
  for (const auto &[name, terms] : pairs) {
    UntypedTerm na = normalize(erase(terms.first), fuel);
    UntypedTerm nb = normalize(erase(terms.second), fuel);
    if (na == nb) continue;
    all_equal = false;
    out << name << ": not equivalent\n";
    out << "  " << path_a << ": " << pretty(na) << "\n";
    out << "  " << path_b << ": " << pretty(nb) << "\n";
  }
  if (all_equal) out << "equivalent\n";
  return all_equal ? 0 : 1;
}

int cmd_coherence(const std::string &path, std::size_t limit, long fuel, std::uint64_t seed,
                  const CommonFlags &flags, std::ostream &out) {
  Program program = parse_program(read_file(path), path);
  EnumerateOptions options;
  options.unsafe = flags.unsafe;
  options.seed = seed;
  options.closure_depth = flags.closure_depth;
  std::vector<CoherenceReport> reports = coherence_check(program, limit, fuel, options);

  bool incoherent = false;
  for (const auto &r : reports) {
    if (r.verdict == CoherenceReport::Verdict::kIncoherent) incoherent = true;
    if (flags.json) {
      json j;
      j["id"] = r.id;
      j["verdict"] = to_string(r.verdict);
      j["variants"] = r.variants;
      j["pairs_checked"] = r.pairs_checked;
      j["limit_exceeded"] = r.limit_exceeded;
      if (!r.reason.empty()) j["reason"] = r.reason;
      if (r.witness)
        j["witness"] = {{"first", r.witness->first},
                        {"second", r.witness->second},
                        {"first_normal", pretty(r.witness->first_normal)},
                        {"second_normal", pretty(r.witness->second_normal)}};
      out << j.dump() << "\n";
      continue;
    }
    out << fmt::format("{}: {} (variants {}, pairs {}{})", r.id, to_string(r.verdict),
                       r.variants, r.pairs_checked,
                       r.limit_exceeded ? ", limit exceeded" : "");
    if (!r.reason.empty()) out << ": " << r.reason;
    out << "\n";
    if (r.witness) {
      out << "  " << r.witness->first << ": " << pretty(r.witness->first_normal) << "\n";
      out << "  " << r.witness->second << ": " << pretty(r.witness->second_normal) << "\n";
    }
  }
  return incoherent ? 1 : 0;
}

}  // namespace

SysfModule to_sysf(const Program &program, const ProgramResult &result) {
  SysfModule m;
  m.tycons = program.tycons;
  for (const auto &a : program.axioms.axioms) m.vals.push_back({a.name, elab_axiom(a)});
  for (const auto &p : program.prims) m.vals.push_back({p.name, elab_type(p.scheme)});
  for (const auto &item : result.items)
    m.defs.push_back(
        {item.name, elab_type(item.derivation.scheme), item.derivation.term});
  return m;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Typechecker and elaborator for explicit dictionary application", "dictc"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string path, path_b, out_path;
  long fuel = kDefaultFuel;
  std::size_t limit = kDefaultVariantLimit;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_flag("--json", flags.json, "Structured output");
    cmd->add_option("--closure-depth", flags.closure_depth,
                    "Depth bound of the safety closure")
        ->check(CLI::Range(0, 1000));
    cmd->add_flag("--unsafe", flags.unsafe, "Disable the dictionary-application guard");
  };

  auto *check = app.add_subcommand("check", "Typecheck every definition and check item");
  check->add_option("path", path, "Program (.dict)")->required();
  check->add_flag("--explain", flags.explain, "Print elaborations and resolution steps");
  add_common(check);

  auto *elaborate = app.add_subcommand("elaborate", "Write the System F elaboration");
  elaborate->add_option("path", path, "Program (.dict)")->required();
  elaborate->add_option("--out", out_path, "Output file (.sysf); stdout when omitted");
  add_common(elaborate);

  auto *equiv_cmd = app.add_subcommand("equiv", "Compare two System F files up to erasure");
  equiv_cmd->add_option("a", path, "First file (.sysf)")->required();
  equiv_cmd->add_option("b", path_b, "Second file (.sysf)")->required();
  equiv_cmd->add_option("--fuel", fuel, "Normalization fuel")->check(CLI::PositiveNumber);

  auto *coherence = app.add_subcommand("coherence", "Compare alternative derivations");
  coherence->add_option("path", path, "Program (.dict)")->required();
  coherence->add_option("--limit", limit, "Variants per check item")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  coherence->add_option("--fuel", fuel, "Normalization fuel")->check(CLI::PositiveNumber);
  coherence->add_option("--seed", seed, "Seed of the quantifier permutations");
  add_common(coherence);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string diag_file = path;
  try {
    if (*check) return cmd_check(path, flags, out, err);
    if (*elaborate) return cmd_elaborate(path, out_path, flags, out);
    if (*equiv_cmd) return cmd_equiv(path, path_b, fuel, diag_file, out);
    if (*coherence) return cmd_coherence(path, limit, fuel, seed, flags, out);
  } catch (const Error &e) {
    err << diagnostic(diag_file, e) << "\n";
    if (flags.json) out << error_json(diag_file, e).dump(2) << "\n";
    return e.exit_code();
  }
  return 2;
}

}  // namespace dictapp
