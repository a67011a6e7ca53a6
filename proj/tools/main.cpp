// Batch driver: one experiment per invocation, JSON config in, JSON artifact
// out.  Exit 0 on success, 1 on contract failure, 2 on usage/schema problems.

#include <CLI11.hpp>

#include "massred/json_io.hpp"
#include "massred/reduction.hpp"
#include "massred/witness.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace massred;

namespace {

struct Ctx {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool verbose = false;
};

const Json& jfield(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::SchemaInvalid, std::string("missing field ") + key);
  return j.at(key);
}

std::size_t jsize(const Json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_string()) return nat_from_json(j).convert_to<std::size_t>();
  fail(Errc::SchemaInvalid, std::string(what) + " must be a nonnegative integer");
}

std::string jstring(const Json& j, const char* what) {
  if (!j.is_string()) fail(Errc::SchemaInvalid, std::string(what) + " must be a string");
  return j.get<std::string>();
}

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::SchemaInvalid, "cannot read config " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(Errc::SchemaInvalid, "config is not valid JSON");
  return j;
}

void write_artifact(const Ctx& ctx, const std::string& name, const Json& artifact) {
  std::filesystem::create_directories(ctx.out_dir);
  std::string path = ctx.out_dir + "/" + name;
  std::ofstream out(path);
  out << artifact.dump(2) << "\n";
  if (!out) fail(Errc::MissingArtifact, "cannot write " + path);
  if (ctx.verbose) std::cerr << "wrote " << path << "\n";
}

Horizon horizon_from(const Json& j) {
  return Horizon(jsize(jfield(j, "N"), "N"), jsize(jfield(j, "tail"), "tail"),
                 jsize(jfield(j, "hits"), "hits"));
}

PipelineConfig pipeline_config_from(const Json& j) {
  return make_pipeline_config(rat_from_json(jfield(j, "p")), nat_from_json(jfield(j, "c")),
                              jsize(jfield(j, "j"), "j"), jsize(jfield(j, "L"), "L"),
                              rat_from_json(jfield(j, "rate")), horizon_from(jfield(j, "horizon")));
}

Json stages_of(const PipelineTrace& trace) {
  Json out = Json::array();
  for (const auto& s : trace.stages) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// verbs

Json run_codec(const Ctx&, const Json& cfg) {
  BlockProfile profile = profile_from_json(jfield(cfg, "profile"));
  Json out{{"verb", "codec"}, {"profile", profile_to_json(profile)}};
  if (cfg.contains("values")) {
    std::vector<Nat> vals;
    for (const auto& v : jfield(cfg, "values")) vals.push_back(nat_from_json(v));
    BlockFunc x(profile, std::move(vals));
    out["bits"] = bits_to_json(concat_blocks(x));
    out["values"] = cfg.at("values");
  } else {
    BitString z = bits_from_json(jfield(cfg, "bits"));
    BlockFunc x = split_blocks(profile, z);
    Json vals = Json::array();
    for (const auto& v : x.values) vals.push_back(v.str());
    out["bits"] = bits_to_json(z);
    out["values"] = std::move(vals);
  }
  return out;
}

Json run_code_build(const Ctx& ctx, const Json& cfg) {
  std::string strat = jstring(jfield(cfg, "strategy"), "strategy");
  BuildStrategy s;
  if (strat == "lex_greedy")
    s = BuildStrategy::lex_greedy;
  else if (strat == "random_greedy")
    s = BuildStrategy::random_greedy;
  else if (strat == "exhaustive")
    s = BuildStrategy::exhaustive;
  else
    fail(Errc::SchemaInvalid, "unknown strategy " + strat);
  ListCode code = build_code(jsize(jfield(cfg, "r"), "r"), rat_from_json(jfield(cfg, "q")),
                             jsize(jfield(cfg, "L"), "L"),
                             jsize(jfield(cfg, "target_size"), "target_size"), s, ctx.seed);
  return Json{{"verb", "code-build"},
              {"code", code_to_json(code)},
              {"cert", code_cert_to_json(code)},
              {"achieved_size", code.words.size()}};
}

Json run_code_verify(const Ctx&, const Json& cfg) {
  ListCode code = code_from_json(jfield(cfg, "code"));
  std::size_t max_list = verify_list_max(code, code.q);
  return Json{{"verb", "code-verify"},
              {"max_list", max_list},
              {"within_L", max_list <= code.L}};
}

Json run_pipeline_d(const Ctx&, const Json& cfg) {
  PipelineConfig pc = pipeline_config_from(cfg);
  BitString y = bits_from_json(jfield(cfg, "bits"));
  PipelineDResult res = pipeline_D(y, pc);
  Json cands = Json::array();
  for (const auto& c : res.candidates) cands.push_back(finfunc_to_json(c));
  return Json{{"verb", "pipeline-d"}, {"stages", stages_of(res.trace)}, {"candidates", cands}};
}

Json run_pipeline_b(const Ctx&, const Json& cfg) {
  PipelineConfig pc = pipeline_config_from(cfg);
  FinFunc y = finfunc_from_json(jfield(cfg, "values"));
  PipelineBResult res = pipeline_B(y, pc);
  bool replay = replay_pipeline_B(res.trace) == res.z;
  return Json{{"verb", "pipeline-b"},
              {"stages", stages_of(res.trace)},
              {"z", bits_to_json(res.z)},
              {"replay_matches", replay}};
}

Json run_gamma(const Ctx&, const Json& cfg) {
  BitString A = bits_from_json(jfield(cfg, "A"));
  std::vector<BitString> family;
  for (const auto& f : jfield(cfg, "family")) family.push_back(bits_from_json(f));
  GammaDelta gd = estimate_gamma_delta(A, family, jsize(jfield(cfg, "from"), "from"));
  return Json{{"verb", "gamma"},
              {"gamma_hat", rat_to_json(gd.gamma_hat)},
              {"delta_hat", rat_to_json(gd.delta_hat)}};
}

RelationSpec relation_from(const Json& j) {
  std::string kind = jstring(jfield(j, "kind"), "relation kind");
  RelationSpec rel;
  rel.negated = j.value("negated", false);
  if (kind == "always-different") {
    AlwaysDifferent ad;
    if (j.contains("bound")) ad.value_bound = order_from_json(j.at("bound"));
    rel.kind = std::move(ad);
  } else if (kind == "agreement-above") {
    rel.kind = AgreementAbove{rat_from_json(jfield(j, "p"))};
  } else if (kind == "blockwise-far") {
    std::vector<std::size_t> lens;
    for (const auto& e : jfield(j, "lens")) lens.push_back(jsize(e, "block length"));
    rel.kind = BlockwiseFar{std::move(lens), rat_from_json(jfield(j, "q"))};
  } else if (kind == "slalom-avoids") {
    SlalomAvoids sa;
    sa.L = jsize(jfield(j, "L"), "L");
    if (j.contains("bound")) sa.value_bound = order_from_json(j.at("bound"));
    rel.kind = std::move(sa);
  } else {
    fail(Errc::SchemaInvalid, "unknown relation kind " + kind);
  }
  return rel;
}

Json relation_to_json(const RelationSpec& rel) {
  Json out;
  if (std::holds_alternative<AlwaysDifferent>(rel.kind)) {
    out["kind"] = "always-different";
  } else if (const auto* a = std::get_if<AgreementAbove>(&rel.kind)) {
    out["kind"] = "agreement-above";
    out["p"] = rat_to_json(a->p);
  } else if (const auto* b = std::get_if<BlockwiseFar>(&rel.kind)) {
    out["kind"] = "blockwise-far";
    out["lens"] = b->block_lens;
    out["q"] = rat_to_json(b->q);
  } else {
    out["kind"] = "slalom-avoids";
    out["L"] = std::get<SlalomAvoids>(rel.kind).L;
  }
  out["negated"] = rel.negated;
  return out;
}

RelationOperand member_from(const Json& j) {
  std::string type = jstring(jfield(j, "type"), "member type");
  if (type == "bits") return bits_from_json(jfield(j, "bits"));
  if (type == "func") return finfunc_from_json(jfield(j, "values"));
  if (type == "slalom") return slalom_from_json(jfield(j, "slalom"));
  fail(Errc::SchemaInvalid, "unknown member type " + type);
}

Json member_to_json(const RelationOperand& op) {
  if (const auto* b = std::get_if<BitString>(&op))
    return Json{{"type", "bits"}, {"bits", bits_to_json(*b)}};
  if (const auto* f = std::get_if<FinFunc>(&op))
    return Json{{"type", "func"}, {"values", finfunc_to_json(*f)}};
  return Json{{"type", "slalom"}, {"slalom", slalom_to_json(std::get<Slalom>(op))}};
}

Universe universe_from(const Json& j) {
  std::string type = jstring(jfield(j, "type"), "universe type");
  std::size_t N = jsize(jfield(j, "N"), "N");
  if (type == "bitstrings") return all_bitstrings(N);
  if (type == "funcs") return all_finfuncs(N, order_from_json(jfield(j, "bound")));
  if (type == "slaloms")
    return all_slaloms(N, order_from_json(jfield(j, "bound")), jsize(jfield(j, "L"), "L"));
  fail(Errc::SchemaInvalid, "unknown universe type " + type);
}

WitnessFamily family_from(const Json& cfg) {
  WitnessFamily fam;
  std::string role = jstring(jfield(cfg, "role"), "role");
  if (role == "d")
    fam.role = Role::d_witness;
  else if (role == "b")
    fam.role = Role::b_witness;
  else
    fail(Errc::SchemaInvalid, "role must be d or b");
  fam.rel = relation_from(jfield(cfg, "relation"));
  for (const auto& m : jfield(cfg, "members")) fam.members.push_back(member_from(m));
  return fam;
}

Json run_witness_check(const Ctx&, const Json& cfg) {
  WitnessFamily fam = family_from(cfg);
  Universe uni = universe_from(jfield(cfg, "universe"));
  bool ok = is_witness(fam, uni, horizon_from(jfield(cfg, "horizon")));
  return Json{{"verb", "witness-check"}, {"witness", ok}, {"universe_size", uni.size()}};
}

StepId step_from(const std::string& name) {
  if (name == "interleave-pairs") return StepId::interleave_pairs;
  if (name == "even-odd-project") return StepId::even_odd_project;
  if (name == "duplicate") return StepId::duplicate_step;
  if (name == "split-blocks") return StepId::split_blocks_step;
  if (name == "complement-concat") return StepId::complement_concat;
  if (name == "complement-split") return StepId::complement_split;
  if (name == "encode-words") return StepId::encode_words;
  if (name == "ball-trace") return StepId::ball_trace_step;
  if (name == "slalom-interleave") return StepId::slalom_interleave;
  if (name == "slalom-project") return StepId::slalom_project;
  if (name == "block-join") return StepId::block_join_tuples;
  if (name == "block-split") return StepId::block_split;
  fail(Errc::SchemaInvalid, "unknown step " + name);
}

Json run_witness_transform(const Ctx&, const Json& cfg) {
  WitnessFamily fam = family_from(cfg);
  StepId step = step_from(jstring(jfield(cfg, "step"), "step"));
  StepParams params;
  CodeFamily codes;
  if (cfg.contains("params")) {
    const Json& pj = cfg.at("params");
    if (pj.contains("profile")) params.profile = profile_from_json(pj.at("profile"));
    if (pj.contains("q")) params.q = rat_from_json(pj.at("q"));
    if (pj.contains("L")) params.L = jsize(pj.at("L"), "L");
    if (pj.contains("target")) params.target = relation_from(pj.at("target"));
    if (pj.contains("codes")) {
      const Json& cj = pj.at("codes");
      codes = code_family(profile_from_json(jfield(cj, "profile")), rat_from_json(jfield(cj, "q")),
                          jsize(jfield(cj, "L"), "L"), rat_from_json(jfield(cj, "rate")));
      params.codes = &codes;
    }
  }
  std::string dir = jstring(jfield(cfg, "direction"), "direction");
  WitnessFamily out;
  if (dir == "d")
    out = transform_witness_d(step, fam, params);
  else if (dir == "b")
    out = transform_witness_b(step, fam, params);
  else
    fail(Errc::SchemaInvalid, "direction must be d or b");
  Json members = Json::array();
  for (const auto& m : out.members) members.push_back(member_to_json(m));
  return Json{{"verb", "witness-transform"},
              {"relation", relation_to_json(out.rel)},
              {"members", members}};
}

Json ledger_to_json(const std::vector<HalvingRecord>& ledger) {
  Json out = Json::array();
  for (const auto& rec : ledger)
    out.push_back(Json{{"tau", rec.tau}, {"height", rec.height}, {"case", rec.case_id},
                       {"arg", rec.arg}});
  return out;
}

Json cert_to_json(const FatnessCert& cert) {
  Json ladders = Json::array();
  for (const auto& [leaf, ms] : cert.ladders)
    ladders.push_back(Json{{"leaf", leaf}, {"ms", ms}});
  return Json{{"ns", cert.ns}, {"ladders", ladders}};
}

Json run_force_run(const Ctx&, const Json& cfg) {
  OrderFunc F = order_from_json(jfield(cfg, "F"));
  OrderFunc G = order_from_json(jfield(cfg, "G"));
  Functional Phi = Functional::from_table(functional_table_from_json(jfield(cfg, "functional")));
  ForcingResult res =
      run_forcing(F, G, Phi, jsize(jfield(cfg, "steps"), "steps"),
                  jsize(jfield(cfg, "depth"), "depth"), jsize(jfield(cfg, "fuel"), "fuel"));
  Json g = Json::object();
  for (const auto& [t, v] : res.g) g[std::to_string(t)] = v.str();
  return Json{{"verb", "force-run"}, {"ns", res.ns},       {"g", g},
              {"ledger", ledger_to_json(res.ledger)},      {"cert", cert_to_json(res.cert)},
              {"tree", tree_dump(res.tree)}};
}

Json run_fat_check(const Ctx&, const Json& cfg) {
  OrderFunc F = order_from_json(jfield(cfg, "F"));
  PrunedTree T = tree_parse(jstring(jfield(cfg, "tree"), "tree"), F);
  std::vector<std::size_t> ns;
  for (const auto& n : jfield(cfg, "ns")) ns.push_back(jsize(n, "n"));
  FatnessCert cert = fat_check(T, order_from_json(jfield(cfg, "G")), ns);
  return Json{{"verb", "fat-check"}, {"cert", cert_to_json(cert)}};
}

Json run_thin(const Ctx&, const Json& cfg) {
  OrderFunc F = order_from_json(jfield(cfg, "F"));
  PrunedTree T = tree_parse(jstring(jfield(cfg, "tree"), "tree"), F);
  TreeNode sigma;
  for (const auto& v : jfield(cfg, "sigma")) sigma.push_back(jsize(v, "sigma entry"));
  auto leafset = [&](const char* key) {
    std::set<TreeNode> out;
    for (const auto& row : jfield(cfg, key)) {
      TreeNode node;
      for (const auto& v : row) node.push_back(jsize(v, "leaf entry"));
      out.insert(std::move(node));
    }
    return out;
  };
  ThinResult r =
      thin_partition(T, sigma, jsize(jfield(cfg, "n"), "n"), leafset("C1"), leafset("C2"));
  return Json{{"verb", "thin"}, {"case", r.case_id}, {"tau", r.tau}, {"tree", tree_dump(r.tree)}};
}

Json run_report(const Ctx& ctx, const Json& cfg) {
  std::map<std::string, Json> sections;
  for (const auto& pj : jfield(cfg, "artifacts")) {
    std::string path = jstring(pj, "artifact path");
    std::ifstream in(path);
    if (!in) fail(Errc::MissingArtifact, "cannot read artifact " + path);
    Json art = Json::parse(in, nullptr, false);
    if (art.is_discarded()) fail(Errc::MissingArtifact, "artifact is not valid JSON: " + path);
    std::string verb = jstring(jfield(art, "verb"), "verb");
    if (!sections.count(verb)) sections[verb] = Json::array();
    sections[verb].push_back(std::move(art));
  }

  std::ostringstream csv;
  Json out{{"verb", "report"}, {"sections", Json::object()}};
  for (const auto& [verb, arts] : sections) {
    out["sections"][verb] = arts;
    if (verb == "pipeline-d" || verb == "pipeline-b") {
      csv << "stage table (" << verb << ")\nindex,stage\n";
      for (const auto& art : arts) {
        std::size_t i = 0;
        for (const auto& s : art.at("stages")) csv << i++ << "," << s.get<std::string>() << "\n";
      }
    } else if (verb == "code-build") {
      csv << "code rate table\nr,q,L,achieved,log2_achieved\n";
      for (const auto& art : arts) {
        const Json& code = art.at("code");
        std::size_t size = art.at("achieved_size").get<std::size_t>();
        std::size_t log2 = 0;
        while ((std::size_t(1) << (log2 + 1)) <= size) ++log2;
        csv << code.at("r") << "," << code.at("q").at("num").get<std::string>() << "/"
            << code.at("q").at("den").get<std::string>() << "," << code.at("L") << "," << size
            << "," << log2 << "\n";
      }
    } else if (verb == "gamma") {
      csv << "density estimates\ngamma_num,gamma_den,delta_num,delta_den\n";
      for (const auto& art : arts)
        csv << art.at("gamma_hat").at("num").get<std::string>() << ","
            << art.at("gamma_hat").at("den").get<std::string>() << ","
            << art.at("delta_hat").at("num").get<std::string>() << ","
            << art.at("delta_hat").at("den").get<std::string>() << "\n";
    }
  }
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream csvf(ctx.out_dir + "/report.csv");
  csvf << csv.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-scale reduction laboratory"};
  app.require_subcommand(1);

  Ctx ctx;
  const char* verbs[] = {"codec",         "code-build",        "code-verify", "pipeline-d",
                         "pipeline-b",    "gamma",             "witness-check",
                         "witness-transform", "force-run",     "fat-check",   "thin",
                         "report"};
  for (const char* v : verbs) {
    CLI::App* sub = app.add_subcommand(v);
    sub->add_option("--config", ctx.config_path, "experiment config JSON")->required();
    sub->add_option("--out", ctx.out_dir, "output directory");
    sub->add_option("--seed", ctx.seed, "seed for randomized strategies");
    sub->add_flag("--verbose", ctx.verbose, "log artifact paths");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << Json{{"error", "Usage"}, {"detail", e.what()}}.dump() << "\n";
    return 2;
  }

  std::string verb = app.get_subcommands().front()->get_name();
  using Handler = Json (*)(const Ctx&, const Json&);
  std::map<std::string, Handler> handlers = {
      {"codec", run_codec},          {"code-build", run_code_build},
      {"code-verify", run_code_verify}, {"pipeline-d", run_pipeline_d},
      {"pipeline-b", run_pipeline_b},   {"gamma", run_gamma},
      {"witness-check", run_witness_check}, {"witness-transform", run_witness_transform},
      {"force-run", run_force_run},     {"fat-check", run_fat_check},
      {"thin", run_thin},               {"report", run_report}};

  try {
    Json cfg = read_config(ctx.config_path);
    Json artifact = handlers.at(verb)(ctx, cfg);
    write_artifact(ctx, verb + ".json", artifact);
    std::cout << artifact.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << error_to_json(e).dump() << "\n";
    return e.code == Errc::SchemaInvalid ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "Internal"}, {"detail", e.what()}}.dump() << "\n";
    return 1;
  }
}
