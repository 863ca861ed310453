#include "coh2/json_io.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "coh2/cochain.hpp"
#include "coh2/extensions.hpp"

namespace coh2 {

namespace {

using nlohmann::json;

ZnMatrix matrix_from_json(const json& rows, u32 modulus) {
  std::vector<std::vector<i64>> data;
  for (const auto& row : rows) data.push_back(row.get<std::vector<i64>>());
  return ZnMatrix::from_rows(modulus, data);
}

}  // namespace

GroupPtr group_from_json(const nlohmann::json& spec, const Caps& caps) {
  GenerateOptions opt;
  opt.max_order = caps.max_group_order;
  if (spec.contains("builder")) {
    std::string b = spec.at("builder").get<std::string>();
    if (b == "cyclic") return cyclic_group(spec.at("m").get<int>());
    u32 p = spec.value("p", 3u);
    if (b == "U3") return u3_group(p);
    if (b == "B3") return b3_group(p);
    if (b == "T3") return t3_group(p);
    if (b == "GLn_mod") return gln_group(spec.at("n").get<int>(), p, opt);
    throw std::invalid_argument("unknown group builder: " + b);
  }
  std::string kind = spec.at("kind").get<std::string>();
  std::vector<Label> gens;
  if (kind == "permutation") {
    for (const auto& g : spec.at("generators")) gens.emplace_back(Perm{g.get<std::vector<int>>()});
  } else if (kind == "matrix") {
    u32 m = spec.at("modulus").get<u32>();
    for (const auto& g : spec.at("generators")) gens.emplace_back(matrix_from_json(g, m));
  } else {
    throw std::invalid_argument("unknown group kind: " + kind);
  }
  return FiniteGroup::generate(gens, opt);
}

ModulePtr module_from_json(const nlohmann::json& spec, GroupPtr group) {
  if (spec.contains("builder")) {
    std::string b = spec.at("builder").get<std::string>();
    if (b == "trivial")
      return HModule::trivial(group, spec.at("modulus").get<u32>(), spec.at("rank").get<std::size_t>());
    if (b == "gl_conj" || b == "bn_conj") {
      if (!group->has_labels() || !std::holds_alternative<ZnMatrix>(group->label(0)))
        throw std::invalid_argument("gl_conj/bn_conj need a matrix group");
      const ZnMatrix& l = std::get<ZnMatrix>(group->label(0));
      int n = static_cast<int>(l.rows());
      return b == "gl_conj" ? HModule::gl_conjugation(group, n, l.modulus())
                            : HModule::bn_conjugation(group, n, l.modulus());
    }
    throw std::invalid_argument("unknown module builder: " + b);
  }
  u32 n = spec.at("modulus").get<u32>();
  std::vector<ZnMatrix> acts;
  for (const auto& m : spec.at("action_on_generators")) acts.push_back(matrix_from_json(m, n));
  return HModule::from_generator_actions(group, n, acts);
}

nlohmann::json negligible_report_json(const NegligibleBasis& basis) {
  json gens = json::array();
  for (const auto& g : basis.generators) {
    if (!g.grew) continue;
    gens.push_back({{"subgroup", g.subgroup_members},
                    {"invariant", g.invariant},
                    {"character", g.character.values},
                    {"character_modulus", g.character.modulus}});
  }
  return json{{"strategy",
               basis.strategy == Strategy::AllSubgroups ? "all_subgroups" : "centralizers"},
              {"generator_count", basis.attempted},
              {"b2_rank", basis.b2_rank},
              {"span_dim_over_b2", basis.span_dim_over_b2()},
              {"certificate", gens},
              {"interpretation", basis.roots_of_unity_label()}};
}

nlohmann::json run_compute(const nlohmann::json& spec, const Caps& caps) {
  auto start = std::chrono::steady_clock::now();
  GroupPtr group = group_from_json(spec.at("group"), caps);
  ModulePtr module = module_from_json(spec.at("module"), group);

  json report;
  report["group"] = {{"order", group->order()}, {"exponent", group->exponent()}};
  report["module"] = {{"modulus", module->modulus()},
                      {"rank", module->rank()},
                      {"size", module->element_count()}};

  std::vector<std::string> tasks = spec.value("tasks", std::vector<std::string>{"negligible"});
  Strategy strategy = spec.value("strategy", std::string("all_subgroups")) == "centralizers"
                          ? Strategy::Centralizers
                          : Strategy::AllSubgroups;

  auto has_task = [&](const std::string& t) {
    return std::find(tasks.begin(), tasks.end(), t) != tasks.end();
  };

  std::shared_ptr<CohomologyContext> ctx;
  auto need_ctx = [&]() {
    if (!ctx) {
      std::size_t dim =
          static_cast<std::size_t>(group->order()) * group->order() * module->rank();
      if (dim > caps.max_ambient_dim)
        throw std::runtime_error("compute: C^2 dimension exceeds --max-ambient-dim");
      ctx = std::make_shared<CohomologyContext>(group, module);
    }
    return ctx;
  };

  if (has_task("h2_structure"))
    report["h2_structure"] = {{"invariant_factors", need_ctx()->h2_invariant_factors(caps.max_h2_dim)}};

  std::optional<NegligibleBasis> basis;
  if (has_task("negligible") || has_task("membership")) {
    basis = build_negligible_basis(group, module, strategy, caps, need_ctx());
    report["negligible"] = negligible_report_json(*basis);
  }

  if (has_task("membership")) {
    json verdicts = json::array();
    for (const auto& q : spec.value("membership", json::array())) {
      Cochain c = Cochain::zero(2, group, module);
      std::string source;
      if (q.contains("extension")) {
        source = q.at("extension").get<std::string>();
        if (source == "gln_p2" || source == "bn_p2") {
          if (!group->has_labels() || !std::holds_alternative<ZnMatrix>(group->label(0)))
            throw std::invalid_argument(source + " membership needs a matrix group");
          const ZnMatrix& l = std::get<ZnMatrix>(group->label(0));
          ExtensionSpec ext = source == "gln_p2"
                                  ? glnp2_factor_set(static_cast<int>(l.rows()), l.modulus(), group)
                                  : bnp2_factor_set(static_cast<int>(l.rows()), l.modulus(), group);
          if (ext.kernel->rank() != module->rank() ||
              ext.kernel->modulus() != module->modulus())
            throw std::invalid_argument(source + " membership: module is not the matching "
                                                 "conjugation module");
          for (int g = 0; g < group->order(); ++g)
            if (ext.kernel->action(g) != module->action(g))
              throw std::invalid_argument(source + " membership: module action mismatch");
          c.coeffs = ext.factor_set.coeffs;
        } else if (source == "cyclic_kummer") {
          // Needs the index = exponent identification of the cyclic builder
          // and a rank-1 trivial module.
          const int m = group->order();
          bool cyclic_indexed = m == 1 || group->element_order(1) == m;
          for (int k = 0; cyclic_indexed && k < m; ++k)
            cyclic_indexed = group->pow(1, k) == k;
          if (!cyclic_indexed || module->rank() != 1)
            throw std::invalid_argument("cyclic_kummer membership needs builder-indexed cyclic "
                                        "group and a rank-1 trivial module");
          Character chi{static_cast<u32>(m), {}};
          chi.values.resize(m);
          for (int k = 0; k < m; ++k) chi.values[k] = static_cast<u32>(k);
          std::vector<u32> one{1 % module->modulus()};
          c = cup_with_character(one, chi, group, module);
        } else {
          throw std::invalid_argument("unknown membership extension: " + source);
        }
      } else {
        source = "explicit";
        c.coeffs = q.at("coeffs").get<std::vector<u32>>();
        if (c.coeffs.size() != Cochain::zero(2, group, module).coeffs.size())
          throw std::invalid_argument("membership coeffs: wrong length");
        for (auto& v : c.coeffs) v %= module->modulus();
      }
      bool cocycle = is_cocycle(c);
      json entry{{"source", source}, {"is_cocycle", cocycle}};
      if (cocycle) entry["negligible"] = is_negligible(*basis, c);
      verdicts.push_back(std::move(entry));
    }
    report["membership"] = std::move(verdicts);
  }

  report["seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace coh2
