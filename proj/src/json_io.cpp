#include "massred/json_io.hpp"

#include <sstream>

namespace massred {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(Errc::SchemaInvalid, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field ") + key);
  return j.at(key);
}

std::size_t size_from_json(const Json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_string()) {
    Nat v = nat_from_json(j);
    if (v > (Nat(1) << 62)) bad(std::string(what) + " out of range");
    return v.convert_to<std::size_t>();
  }
  bad(std::string(what) + " must be a nonnegative integer");
}

}  // namespace

Json nat_to_json(const Nat& v) { return v.str(); }

Nat nat_from_json(const Json& j) {
  if (!j.is_string()) bad("numeral must be a decimal string");
  const std::string& s = j.get_ref<const std::string&>();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    bad("numeral must be a decimal string");
  return Nat(s);
}

Json rat_to_json(const Rat& r) {
  return Json{{"num", rat_num(r).str()}, {"den", rat_den(r).str()}};
}

Rat rat_from_json(const Json& j) {
  Nat num = nat_from_json(field(j, "num"));
  Nat den = nat_from_json(field(j, "den"));
  if (den == 0) bad("rational with zero denominator");
  return Rat(num, den);
}

Json bits_to_json(const BitString& b) { return b.str(); }

BitString bits_from_json(const Json& j) {
  if (!j.is_string()) bad("bit string must be a string of 0/1");
  return BitString::parse(j.get_ref<const std::string&>());
}

Json finfunc_to_json(const FinFunc& f) {
  Json out = Json::array();
  for (const auto& v : f.values) out.push_back(v.str());
  return out;
}

FinFunc finfunc_from_json(const Json& j) {
  if (!j.is_array()) bad("function table must be an array");
  std::vector<Nat> vals;
  for (const auto& e : j) vals.push_back(nat_from_json(e));
  return FinFunc(std::move(vals));
}

Json order_to_json(const OrderFunc& e) {
  OrderFuncView v = inspect_order(e);
  Json out{{"kind", v.kind}};
  if (v.kind == "const" || v.kind == "power") out["a"] = v.a.str();
  if (v.kind == "root_pow2" || v.kind == "floor_div") out["k"] = v.k;
  if (v.kind == "exp2" || v.kind == "rescale") out["arg"] = order_to_json(v.children.at(0));
  if (v.kind == "product" || v.kind == "sum" || v.kind == "compose") {
    out["lhs"] = order_to_json(v.children.at(0));
    out["rhs"] = order_to_json(v.children.at(1));
  }
  return out;
}

OrderFunc order_from_json(const Json& j) {
  const Json& kj = field(j, "kind");
  if (!kj.is_string()) bad("expression kind must be a string");
  const std::string& kind = kj.get_ref<const std::string&>();
  if (kind == "const") return OrderFunc::constant(nat_from_json(field(j, "a")));
  if (kind == "arg") return OrderFunc::arg();
  if (kind == "power") return OrderFunc::power(nat_from_json(field(j, "a")));
  if (kind == "exp2") return OrderFunc::exp2(order_from_json(field(j, "arg")));
  if (kind == "root_pow2") return OrderFunc::root_pow2(size_from_json(field(j, "k"), "k"));
  if (kind == "floor_div") return OrderFunc::floor_div(size_from_json(field(j, "k"), "k"));
  if (kind == "rescale") return OrderFunc::rescale(order_from_json(field(j, "arg")));
  if (kind == "product")
    return OrderFunc::product(order_from_json(field(j, "lhs")), order_from_json(field(j, "rhs")));
  if (kind == "sum")
    return OrderFunc::sum(order_from_json(field(j, "lhs")), order_from_json(field(j, "rhs")));
  if (kind == "compose")
    return OrderFunc::compose(order_from_json(field(j, "lhs")), order_from_json(field(j, "rhs")));
  bad("unknown expression kind " + kind);
}

Json profile_to_json(const BlockProfile& p) {
  const char* kind = p.kind == ProfileKind::geometric    ? "geometric"
                     : p.kind == ProfileKind::superexp   ? "superexp"
                                                         : "explicit";
  return Json{{"kind", kind}, {"k", p.k}, {"lens", p.lens}};
}

BlockProfile profile_from_json(const Json& j) {
  const Json& kj = field(j, "kind");
  if (!kj.is_string()) bad("profile kind must be a string");
  const std::string& ks = kj.get_ref<const std::string&>();
  ProfileKind kind;
  if (ks == "geometric")
    kind = ProfileKind::geometric;
  else if (ks == "superexp")
    kind = ProfileKind::superexp;
  else if (ks == "explicit")
    kind = ProfileKind::explicit_;
  else
    bad("unknown profile kind " + ks);
  std::size_t k = size_from_json(field(j, "k"), "k");
  const Json& lj = field(j, "lens");
  if (!lj.is_array()) bad("lens must be an array");
  std::vector<std::size_t> lens;
  for (const auto& e : lj) lens.push_back(size_from_json(e, "block length"));
  return BlockProfile(kind, k, std::move(lens));
}

Json slalom_to_json(const Slalom& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    Json row = Json::array();
    for (const auto& v : e) row.push_back(v.str());
    entries.push_back(std::move(row));
  }
  return Json{{"L", s.L}, {"entries", entries}};
}

Slalom slalom_from_json(const Json& j) {
  Slalom s;
  s.L = size_from_json(field(j, "L"), "L");
  const Json& ej = field(j, "entries");
  if (!ej.is_array()) bad("entries must be an array");
  for (const auto& row : ej) {
    if (!row.is_array()) bad("slalom entry must be an array");
    std::vector<Nat> e;
    for (const auto& v : row) e.push_back(nat_from_json(v));
    s.entries.push_back(std::move(e));
  }
  s.validate();
  return s;
}

Json code_to_json(const ListCode& c) {
  Json words = Json::array();
  for (const auto& w : c.words) words.push_back(w.str());
  return Json{{"r", c.r}, {"q", rat_to_json(c.q)}, {"L", c.L}, {"words", words}};
}

ListCode code_from_json(const Json& j) {
  ListCode c;
  c.r = size_from_json(field(j, "r"), "r");
  c.q = rat_from_json(field(j, "q"));
  c.L = size_from_json(field(j, "L"), "L");
  const Json& wj = field(j, "words");
  if (!wj.is_array()) bad("words must be an array");
  for (const auto& w : wj) c.words.push_back(bits_from_json(w));
  return c;
}

Json code_cert_to_json(const ListCode& c) {
  if (!c.verified_max_list) fail(Errc::UncertifiedCode, "code has no certificate to export");
  return Json{{"verified_max_list", *c.verified_max_list}, {"verifier", "exhaustive-ball-v1"}};
}

void apply_code_cert(ListCode& c, const Json& cert) {
  const Json& vj = field(cert, "verifier");
  if (!vj.is_string() || vj.get_ref<const std::string&>() != "exhaustive-ball-v1")
    bad("unknown certificate verifier");
  std::size_t claimed = size_from_json(field(cert, "verified_max_list"), "verified_max_list");
  if (verify_list_max(c, c.q) != claimed) bad("certificate does not match the code");
  c.verified_max_list = claimed;
}

std::string tree_dump(const PrunedTree& T) {
  std::ostringstream os;
  for (const auto& node : T.nodes) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (i) os << ' ';
      os << node[i];
    }
    os << '\n';
  }
  return os.str();
}

PrunedTree tree_parse(const std::string& text, const OrderFunc& F) {
  PrunedTree T;
  T.F = F;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    TreeNode node;
    std::istringstream ls(line);
    unsigned long v;
    while (ls >> v) node.push_back(static_cast<std::uint32_t>(v));
    if (!ls.eof()) bad("tree node line must hold space-separated integers");
    T.nodes.insert(std::move(node));
  }
  T.validate();
  return T;
}

Json functional_table_to_json(const std::vector<Functional::TableEntry>& entries) {
  Json rows = Json::array();
  for (const auto& e : entries) {
    std::ostringstream os;
    for (std::size_t i = 0; i < e.sigma.size(); ++i) {
      if (i) os << ',';
      os << e.sigma[i];
    }
    rows.push_back(Json::array({os.str(), e.t, e.value.str()}));
  }
  return Json{{"entries", rows}};
}

std::vector<Functional::TableEntry> functional_table_from_json(const Json& j) {
  const Json& rows = field(j, "entries");
  if (!rows.is_array()) bad("entries must be an array");
  std::vector<Functional::TableEntry> out;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 3) bad("table entry must be [sigma, t, value]");
    Functional::TableEntry e;
    if (!row[0].is_string()) bad("sigma must be a comma-separated string");
    const std::string& s = row[0].get_ref<const std::string&>();
    if (!s.empty()) {
      std::istringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
          bad("sigma entries must be decimal");
        e.sigma.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
      }
    }
    e.t = size_from_json(row[1], "argument");
    e.value = nat_from_json(row[2]);
    out.push_back(std::move(e));
  }
  return out;
}

Json error_to_json(const Error& e) {
  return Json{{"error", errc_name(e.code)}, {"detail", e.what()}};
}

}  // namespace massred
