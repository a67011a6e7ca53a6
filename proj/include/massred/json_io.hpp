#pragma once

#include "massred/codec.hpp"
#include "massred/core.hpp"
#include "massred/forcing.hpp"
#include "massred/listcode.hpp"

#include <json.hpp>

namespace massred {

using Json = nlohmann::json;

// All numerals travel as decimal strings; values like 2^(2^n) do not fit
// fixed-width integers.

Json nat_to_json(const Nat& v);
Nat nat_from_json(const Json& j);

Json rat_to_json(const Rat& r);   // {"num","den"}
Rat rat_from_json(const Json& j);

Json bits_to_json(const BitString& b);  // "0"/"1" string
BitString bits_from_json(const Json& j);

Json finfunc_to_json(const FinFunc& f);  // array of decimal strings
FinFunc finfunc_from_json(const Json& j);

Json order_to_json(const OrderFunc& e);  // nested tagged objects
OrderFunc order_from_json(const Json& j);

Json profile_to_json(const BlockProfile& p);  // {"kind","k","lens"}
BlockProfile profile_from_json(const Json& j);

Json slalom_to_json(const Slalom& s);  // {"L","entries"}
Slalom slalom_from_json(const Json& j);

Json code_to_json(const ListCode& c);  // {"r","q","L","words"}, words lex-sorted
ListCode code_from_json(const Json& j);
Json code_cert_to_json(const ListCode& c);  // detached certificate
void apply_code_cert(ListCode& c, const Json& cert);

// tree dump: one node per line, values space-separated; the empty node is an
// empty line (always the first)
std::string tree_dump(const PrunedTree& T);
PrunedTree tree_parse(const std::string& text, const OrderFunc& F);

Json functional_table_to_json(const std::vector<Functional::TableEntry>& entries);
std::vector<Functional::TableEntry> functional_table_from_json(const Json& j);

Json error_to_json(const Error& e);

}  // namespace massred
