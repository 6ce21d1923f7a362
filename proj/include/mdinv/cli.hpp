#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mdinv/bmodel.hpp"
#include "mdinv/errors.hpp"
#include "mdinv/io.hpp"
#include "mdinv/thickening.hpp"

namespace mdinv {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitDomain = 3,
  kExitConsistency = 4,
};

struct CliOptions {
  std::string command;
  std::string input = "-";
  std::string format = "text";
  bool check = false;
  long max_degree = 3;
  bool quiet = false;
  std::string b;
  std::string b_query;
  long degree = 1;
  std::vector<std::string> points;
  long sample = 0;
  std::uint64_t seed = 0;
};

namespace cli_detail {

inline std::string pass(bool ok) { return ok ? "pass" : "fail"; }

inline std::string join_rationals(const RVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

inline std::string join_ids(const std::vector<std::size_t>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "}";
}

inline Json homology_json(const std::vector<AbelianGroup>& groups) {
  Json out = Json::array();
  for (std::size_t n = 0; n < groups.size(); ++n) {
    Json g = to_json(groups[n]);
    g["degree"] = n;
    out.push_back(std::move(g));
  }
  return out;
}

/// Results of --check for one level.
struct LevelChecks {
  bool hurewicz = true;
  bool d2 = true;
  bool constancy = true;
  std::vector<std::string> messages;

  bool ok() const { return hurewicz && d2 && constancy; }
  std::string text() const {
    return "hurewicz:" + pass(hurewicz) + " d2:" + pass(d2) + " constancy:" + pass(constancy);
  }
  Json json() const { return {{"hurewicz", pass(hurewicz)}, {"d2", pass(d2)}, {"constancy", pass(constancy)}}; }
};

inline LevelChecks run_checks(const RatedGraph& g, const BModel& m, const LevelInvariants& inv, long max_degree) {
  LevelChecks c;
  c.messages = hurewicz_check(m);
  c.hurewicz = c.messages.empty();
  for (const ComplexDefect& d : verify_complex(m.complex)) {
    c.d2 = false;
    c.messages.push_back("b=" + to_string(m.b) + ": " + d.message);
  }
  if (!m.b.is_infinite()) {
    const std::vector<Rate> jumps = jump_set(g);
    Rate lo = jumps.front();
    std::optional<Rate> hi;
    for (std::size_t k = 0; k < jumps.size(); ++k)
      if (jumps[k] <= m.b) {
        lo = jumps[k];
        hi = k + 1 < jumps.size() ? std::optional<Rate>(jumps[k + 1]) : std::nullopt;
      }
    for (const Rate& s : interior_samples(lo, hi)) {
      if (invariants(build_model(g, s), max_degree).key() != inv.key()) {
        c.constancy = false;
        c.messages.push_back("b=" + to_string(m.b) + ": invariants differ at " + to_string(s));
      }
    }
  }
  return c;
}

inline std::string row(const std::string& b, const LevelInvariants& inv, const std::string& checks) {
  std::string out = b + " | " + to_string(inv.pi1);
  for (const AbelianGroup& h : inv.homology) out += " | " + to_string(h);
  return out + " | " + checks;
}

inline std::string header(long max_degree) {
  std::string out = "b | pi1";
  for (long n = 0; n <= max_degree; ++n) out += " | H" + std::to_string(n);
  return out + " | checks";
}

inline std::string hom_text(const GroupHom& h, const Presentation& from, const Presentation& to) {
  std::string out;
  for (std::size_t i = 0; i < h.source_generators(); ++i) {
    if (i) out += ", ";
    out += from.generators()[i] + " -> " + to_string(h.image(i), to.generators());
  }
  return out.empty() ? "(no generators)" : out;
}

inline Json hom_json(const GroupHom& h, const Presentation& from, const Presentation& to) {
  Json out = Json::object();
  for (std::size_t i = 0; i < h.source_generators(); ++i)
    out[from.generators()[i]] = to_string(h.image(i), to.generators());
  return out;
}

inline int cmd_jumps(const InputDocument& doc, const CliOptions& opt, std::ostream& out) {
  const RatedGraph g = doc.graph();
  const std::vector<Rate> jumps = jump_set(g);
  if (opt.quiet) return kExitOk;
  if (opt.format == "json") {
    Json arr = Json::array();
    for (const Rate& r : jumps) arr.push_back(to_string(r));
    out << Json{{"jumps", arr}}.dump(2) << "\n";
  } else {
    for (const Rate& r : jumps) out << to_string(r) << "\n";
  }
  return kExitOk;
}

inline int cmd_invariants(const InputDocument& doc, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  const RatedGraph g = doc.graph();
  if (opt.b.empty()) throw InputError("--b", "required: a rational, \"inf\" or \"all\"");
  Json jumps = Json::array();
  for (const Rate& r : jump_set(g)) jumps.push_back(to_string(r));

  struct Row {
    Rate b;
    std::optional<Rate> upper;
    const BModel* model;
    LevelInvariants inv;
  };
  std::vector<Row> rows;
  std::optional<BFiltration> filt;
  std::optional<BModel> single;
  if (opt.b == "all") {
    filt = filtration(g, opt.max_degree);
    for (const Level& l : filt->levels) rows.push_back({l.b, l.upper, &l.model, l.invariants});
  } else {
    Rate b;
    try {
      b = Rate::parse(opt.b);
    } catch (const ValidationError& e) {
      throw InputError("--b", e.what());
    }
    if (b < Rate(1)) throw InputError("--b", "b must be >= 1");
    single = build_model(g, b);
    rows.push_back({b, std::nullopt, &*single, invariants(*single, opt.max_degree)});
  }

  bool all_ok = true;
  std::vector<std::optional<LevelChecks>> checks;
  for (const Row& r : rows) {
    if (!opt.check) {
      checks.emplace_back();
      continue;
    }
    checks.push_back(run_checks(g, *r.model, r.inv, opt.max_degree));
    all_ok = all_ok && checks.back()->ok();
    for (const std::string& m : checks.back()->messages) err << "check failed: " << m << "\n";
  }

  if (!opt.quiet) {
    if (opt.format == "json") {
      Json levels = Json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        Json level = {{"b", to_string(r.b)},
                      {"pi1", to_json(r.inv.pi1)},
                      {"abelianization", to_json(r.inv.abelianization)},
                      {"homology", homology_json(r.inv.homology)}};
        if (r.upper) level["upper"] = to_string(*r.upper);
        if (checks[i]) level["checks"] = checks[i]->json();
        levels.push_back(std::move(level));
      }
      Json doc_out = {{"jumps", jumps}, {"levels", levels}};
      if (filt) {
        Json maps = Json::array();
        for (std::size_t k = 0; k < filt->maps.size(); ++k) {
          const StructureMap& m = filt->maps[k];
          Json homs = Json::array();
          for (long n = 0; n <= opt.max_degree; ++n) homs.push_back(to_json(m.homology(n)));
          maps.push_back({{"from", to_string(m.from)},
                          {"to", to_string(m.to)},
                          {"homology", homs},
                          {"pi1", hom_json(m.pi1_simplified, filt->levels[k + 1].invariants.pi1,
                                           filt->levels[k].invariants.pi1)}});
        }
        doc_out["structure_maps"] = maps;
      }
      out << doc_out.dump(2) << "\n";
    } else {
      out << header(opt.max_degree) << "\n";
      for (std::size_t i = 0; i < rows.size(); ++i)
        out << row(to_string(rows[i].b), rows[i].inv, checks[i] ? checks[i]->text() : "-") << "\n";
      if (filt) {
        for (std::size_t k = 0; k < filt->maps.size(); ++k) {
          const StructureMap& m = filt->maps[k];
          out << "\neta(" << to_string(m.from) << " -> " << to_string(m.to) << ")\n";
          for (long n = 0; n <= opt.max_degree; ++n)
            out << "  H" << n << ": " << to_string(m.homology(n)) << "\n";
          out << "  pi1: "
              << hom_text(m.pi1_simplified, filt->levels[k + 1].invariants.pi1, filt->levels[k].invariants.pi1)
              << "\n";
        }
      }
    }
  }
  return all_ok ? kExitOk : kExitConsistency;
}

inline int cmd_bcone(const InputDocument& doc, const CliOptions& opt, std::ostream& out) {
  if (!doc.link) throw InputError("$.link_complex", "required by the bcone command");
  auto rate = [](const std::string& flag, const std::string& text) {
    if (text.empty()) throw InputError(flag, "required");
    try {
      return Rate::parse(text);
    } catch (const ValidationError& e) {
      throw InputError(flag, e.what());
    }
  };
  const Rate b = rate("--b", opt.b);
  const Rate q = rate("--b-query", opt.b_query);
  if (b < Rate(1)) throw InputError("--b", "b must be >= 1");
  if (q < Rate(1)) throw InputError("--b-query", "b-query must be >= 1");
  if (opt.degree < 0) throw InputError("--degree", "must be nonnegative");
  const BConeResult r = bcone(*doc.link, b, q, opt.degree);
  if (opt.quiet) return kExitOk;
  if (opt.format == "json") {
    Json j = {{"b", to_string(b)},
              {"b_query", to_string(q)},
              {"degree", opt.degree},
              {"trivial", r.trivial},
              {"homology", to_json(r.group)}};
    if (r.pi1) j["pi1"] = to_json(*r.pi1);
    out << j.dump(2) << "\n";
  } else {
    out << "b-cone b=" << to_string(b) << " b_query=" << to_string(q) << " degree=" << opt.degree << ": "
        << (r.trivial ? "trivial" : "nontrivial") << "\n";
    if (r.pi1) out << "pi1: " << to_string(*r.pi1) << "\n";
    out << "H" << opt.degree << ": " << to_string(r.group) << "\n";
  }
  return kExitOk;
}

inline RVector parse_point(const std::string& text) {
  RVector out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(parse_rational(part));
    } catch (const ValidationError& e) {
      throw InputError("--point", e.what());
    }
  }
  return out;
}

/// Reproducible rational point: a random simplex and random integer
/// weights in 0..1000 normalized to barycentric coordinates.
inline RVector sample_point(const SimplicialComplex& k, std::mt19937_64& rng) {
  const std::size_t s = static_cast<std::size_t>(rng() % k.simplices().size());
  RVector bary(k.dimension() + 1);
  Rational total = 0;
  while (total == 0) {
    total = 0;
    for (Rational& b : bary) {
      b = Rational(static_cast<long long>(rng() % 1001));
      total += b;
    }
  }
  for (Rational& b : bary) b /= total;
  return k.point(s, bary);
}

inline int cmd_thicken(const InputDocument& doc, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  if (!doc.thickening) throw InputError("$.thickening", "required by the thicken command");
  const SimplicialComplex& k = doc.thickening->complex;
  const std::vector<ThickeningPiece> pieces = decompose(k);

  std::vector<RVector> points;
  for (const std::string& p : opt.points) {
    points.push_back(parse_point(p));
    if (points.back().size() != k.ambient_dimension())
      throw InputError("--point", "expected " + std::to_string(k.ambient_dimension()) + " coordinates");
  }
  if (opt.sample < 0) throw InputError("--sample", "must be nonnegative");
  std::mt19937_64 rng(opt.seed);
  for (long i = 0; i < opt.sample; ++i) points.push_back(sample_point(k, rng));

  const bool has_values = doc.thickening->samples.has_value();
  SimplexFunction g;
  if (has_values) g = std::cref(*doc.thickening->samples);

  bool ok = true;
  if (opt.check) {
    for (std::size_t s = 0; s < k.simplices().size(); ++s) {
      Rational total = 0;
      for (const ThickeningPiece& p : pieces)
        if (p.simplex == s) total += p.relative_volume;
      if (total != 1) {
        ok = false;
        err << "check failed: piece volumes of simplex " << s << " sum to " << to_string(total) << "\n";
      }
    }
  }

  Json jpoints = Json::array();
  std::string tpoints;
  for (const RVector& x : points) {
    Json jp = {{"point", to_json(x)}};
    std::string line = "point " + join_rationals(x) + ": ";
    Location loc;
    std::optional<Extension> ext;
    if (has_values) {
      ext = extend(k, g, x);
      loc = ext->location;
    } else {
      loc = locate(k, x);
    }
    Json jl = {{"piece", loc.piece},
               {"kind", to_string(loc.kind)},
               {"simplex", loc.simplex},
               {"face", loc.face},
               {"barycentric", to_json(loc.barycentric)}};
    line += to_string(loc.kind) + " of simplex " + std::to_string(loc.simplex);
    if (loc.coords) {
      jl["base_point"] = to_json(loc.coords->base_point);
      jl["cube_vertices"] = loc.coords->cube_vertices;
      jl["u"] = to_json(loc.coords->u);
      line += " face " + join_ids(loc.face) + " u=" + join_rationals(loc.coords->u);
    }
    jp["location"] = jl;
    if (ext) {
      Rational sum = 0;
      Json terms = Json::array();
      std::string wtext;
      for (const ExtensionTerm& t : ext->terms) {
        if (t.weight < 0) ok = false;
        sum += t.weight;
        terms.push_back({{"simplex", t.simplex},
                         {"point", to_json(t.point)},
                         {"weight", to_string(t.weight)},
                         {"value", to_json(t.value)}});
        wtext += (wtext.empty() ? "" : " ") + std::to_string(t.simplex) + ":" + to_string(t.weight);
      }
      if (opt.check && sum != 1) {
        ok = false;
        err << "check failed: weights at " << join_rationals(x) << " sum to " << to_string(sum) << "\n";
      }
      jp["value"] = to_json(ext->value);
      jp["terms"] = terms;
      jp["weight_sum"] = to_string(sum);
      line += " value=" + join_rationals(ext->value) + " weights=[" + wtext + "] sum=" + to_string(sum);
    }
    jpoints.push_back(std::move(jp));
    tpoints += line + "\n";
  }

  if (!opt.quiet) {
    if (opt.format == "json") {
      Json jpieces = Json::array();
      for (const ThickeningPiece& p : pieces) {
        Json verts = Json::array();
        for (const RVector& v : p.vertices) verts.push_back(to_json(v));
        Json jpiece = {{"kind", to_string(p.kind)},
                       {"simplex", p.simplex},
                       {"face", p.face},
                       {"vertices", verts},
                       {"relative_volume", to_string(p.relative_volume)}};
        if (p.volume) jpiece["volume"] = to_string(*p.volume);
        jpieces.push_back(std::move(jpiece));
      }
      out << Json{{"pieces", jpieces}, {"points", jpoints}}.dump(2) << "\n";
    } else {
      out << "pieces: " << pieces.size() << "\n";
      for (const ThickeningPiece& p : pieces) {
        out << "  simplex " << p.simplex << " " << to_string(p.kind) << " " << join_ids(p.face) << ":";
        for (const RVector& v : p.vertices) out << " " << join_rationals(v);
        out << " relative_volume=" << to_string(p.relative_volume);
        if (p.volume) out << " volume=" << to_string(*p.volume);
        out << "\n";
      }
      out << tpoints;
    }
  }
  return ok ? kExitOk : kExitConsistency;
}

}  // namespace cli_detail

/// Runs the command-line tool. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CliOptions opt;
  CLI::App app{"Moderately discontinuous invariants of rated surface decompositions"};
  app.require_subcommand(1);
  auto common = [&opt](CLI::App* sub) {
    sub->add_option("--input", opt.input, "input JSON file, or - for stdin");
    sub->add_option("--format", opt.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--check", opt.check, "run consistency checks; exit 4 on failure");
    sub->add_option("--max-degree", opt.max_degree, "highest homology degree reported")->check(CLI::Range(0L, 16L));
    sub->add_flag("--quiet", opt.quiet, "print nothing on success; rely on the exit code");
  };
  CLI::App* jumps = app.add_subcommand("jumps", "list the jump set");
  common(jumps);
  CLI::App* inv = app.add_subcommand("invariants", "pi1 and homology at one b, at inf, or at every level");
  common(inv);
  inv->add_option("--b", opt.b, "rational p/q, inf, or all")->required();
  CLI::App* cone = app.add_subcommand("bcone", "invariants of the b-cone over the link");
  common(cone);
  cone->add_option("--b", opt.b, "cone rate")->required();
  cone->add_option("--b-query", opt.b_query, "query rate")->required();
  cone->add_option("--degree", opt.degree, "degree k");
  CLI::App* thick = app.add_subcommand("thicken", "skeleton thickening and convex interpolation");
  common(thick);
  thick->add_option("--point", opt.points, "query point as comma-separated rationals");
  thick->add_option("--sample", opt.sample, "number of random query points");
  thick->add_option("--seed", opt.seed, "seed for --sample");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  for (CLI::App* sub : {jumps, inv, cone, thick})
    if (sub->parsed()) opt.command = sub->get_name();

  try {
    InputDocument doc;
    if (opt.input == "-") {
      doc = parse_input(in);
    } else {
      std::ifstream file(opt.input);
      if (!file) throw InputError("--input", "cannot open " + opt.input);
      doc = parse_input(file);
    }
    if (opt.command == "jumps") return cli_detail::cmd_jumps(doc, opt, out);
    if (opt.command == "invariants") return cli_detail::cmd_invariants(doc, opt, out, err);
    if (opt.command == "bcone") return cli_detail::cmd_bcone(doc, opt, out);
    return cli_detail::cmd_thicken(doc, opt, out, err);
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << "\n";
    return kExitConsistency;
  }
}

}  // namespace mdinv
