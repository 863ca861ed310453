#pragma once

// JSON schemas for groups, modules, and the `compute` command.
//
// Group spec: {"kind":"permutation","generators":[[...],...]}
//           | {"kind":"matrix","modulus":m,"generators":[[[...],...],...]}
//           | {"builder":"cyclic","m":6} | {"builder":"U3"|"B3"|"T3","p":3}
//           | {"builder":"GLn_mod","n":2,"p":3}
//
// Module spec: {"builder":"trivial","modulus":n,"rank":k}
//            | {"builder":"gl_conj"} | {"builder":"bn_conj"}
//            | {"modulus":n,"rank":k,"action_on_generators":[[[...],...],...]}
//
// Compute spec: {"group":...,"module":...,"tasks":[...],"strategy":...,
//                "membership":[{"extension":"gln_p2"|"bn_p2"|"cyclic_kummer"}
//                              |{"coeffs":[...]}]}

#include <string>

#include <json.hpp>

#include "coh2/group.hpp"
#include "coh2/hmodule.hpp"
#include "coh2/negligible.hpp"

namespace coh2 {

GroupPtr group_from_json(const nlohmann::json& spec, const Caps& caps);
ModulePtr module_from_json(const nlohmann::json& spec, GroupPtr group);

nlohmann::json run_compute(const nlohmann::json& spec, const Caps& caps);

nlohmann::json negligible_report_json(const NegligibleBasis& basis);

}  // namespace coh2
