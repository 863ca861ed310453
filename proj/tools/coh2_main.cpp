// coh2: exact degree-2 group cohomology computations over Z/nZ.
//
// Exit codes: 0 = computation ran (verdicts live in the payload),
// 1 = verification pipeline failure, 2 = usage/parse/cap errors.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coh2/extensions.hpp"
#include "coh2/json_io.hpp"
#include "coh2/verify.hpp"

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);  // parse errors carry byte positions
}

json parse_inline_or_file(const std::string& text) {
  if (!text.empty() && (text[0] == '{' || text[0] == '[')) return json::parse(text);
  return load_json_file(text);
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << report.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact degree-2 cohomology of finite groups over Z/nZ"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  coh2::Caps caps;
  app.add_option("--max-group-order", caps.max_group_order, "closure cap for generated groups");
  app.add_option("--max-module-size", caps.max_module_size, "cap on |A| for module enumeration");
  app.add_option("--max-ambient-dim", caps.max_ambient_dim, "cap on dim C^2 for span tracking");
  app.add_option("--max-h2-dim", caps.max_h2_dim, "cap on dim C^2 for structure reports");

  std::string out_path;
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");

  auto* compute = app.add_subcommand("compute", "run computations from a JSON spec file");
  std::string spec_path;
  compute->add_option("spec", spec_path, "spec file (JSON)")->required();

  auto* verify = app.add_subcommand("verify-paper", "run the verification pipeline");
  coh2::VerifyOptions vopt;
  verify->add_option("--p", vopt.p, "prime for the unitriangular family (default 3)");
  verify->add_option("--stage", vopt.stages, "stage letters to run, e.g. 'abc' (default all)");

  auto* lift = app.add_subcommand("lift-check", "decide whether a homomorphism lifts");
  std::string lift_group, lift_hom = "{\"kind\":\"identity\"}", lift_ext;
  lift->add_option("--group", lift_group, "group spec (JSON text or file)")->required();
  lift->add_option("--hom", lift_hom,
                   "hom spec: {\"kind\":\"identity\"|\"trivial\"|\"explicit\",...}");
  lift->add_option("--extension", lift_ext,
                   "extension: {\"name\":\"gln_p2\"|\"bn_p2\"|\"cyclic_kummer\",...}")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compute) {
      emit(coh2::run_compute(load_json_file(spec_path), caps), out_path);
      return 0;
    }

    if (*verify) {
      vopt.caps = caps;
      auto results = coh2::run_verify_paper(vopt);
      json stages = json::array();
      bool all_pass = true;
      for (const auto& r : results) {
        std::cout << "stage " << r.id << (r.pass ? "  PASS  " : "  FAIL  ") << r.name << "  ("
                  << r.seconds << "s)\n";
        if (!r.pass) std::cerr << "stage " << r.id << " details: " << r.details.dump(2) << "\n";
        all_pass &= r.pass;
        stages.push_back({{"stage", std::string(1, r.id)},
                          {"name", r.name},
                          {"pass", r.pass},
                          {"seconds", r.seconds},
                          {"details", r.details}});
      }
      json report{{"p", vopt.p}, {"all_pass", all_pass}, {"stages", stages}};
      if (!out_path.empty()) emit(report, out_path);
      return all_pass ? 0 : 1;
    }

    if (*lift) {
      json gspec = parse_inline_or_file(lift_group);
      json hspec = parse_inline_or_file(lift_hom);
      json espec = parse_inline_or_file(lift_ext);
      coh2::GroupPtr gamma = coh2::group_from_json(gspec, caps);

      std::string ext_name = espec.at("name").get<std::string>();
      coh2::ExtensionSpec ext = [&] {
        if (ext_name == "cyclic_kummer")
          return coh2::cyclic_kummer_extension(espec.at("m").get<int>(), espec.at("n").get<int>());
        coh2::GroupPtr h = espec.contains("group")
                               ? coh2::group_from_json(espec.at("group"), caps)
                               : gamma;
        const auto& l = std::get<coh2::ZnMatrix>(h->label(0));
        int n = static_cast<int>(l.rows());
        if (ext_name == "gln_p2") return coh2::glnp2_factor_set(n, l.modulus(), h);
        if (ext_name == "bn_p2") return coh2::bnp2_factor_set(n, l.modulus(), h);
        throw std::invalid_argument("unknown extension name: " + ext_name);
      }();

      std::string hom_kind = hspec.at("kind").get<std::string>();
      coh2::GroupHom rho = [&] {
        if (hom_kind == "identity") {
          if (gamma != ext.quotient && gamma->order() != ext.quotient->order())
            throw std::invalid_argument("identity hom needs group == extension quotient");
          return coh2::GroupHom::identity(ext.quotient);
        }
        if (hom_kind == "trivial")
          return coh2::GroupHom::validated(gamma, ext.quotient,
                                           std::vector<int>(gamma->order(), 0));
        if (hom_kind == "explicit")
          return coh2::GroupHom::validated(gamma, ext.quotient,
                                           hspec.at("images").get<std::vector<int>>());
        throw std::invalid_argument("unknown hom kind: " + hom_kind);
      }();

      coh2::LiftResult lr = coh2::lift_decision(rho, ext);
      json report{{"verdict", lr.lifts ? "lifts" : "does not lift"},
                  {"extension", ext.provenance}};
      if (lr.lifts && lr.witness) {
        report["witness_cochain"] = lr.witness->coeffs;
        if (lr.matrix_lift) {
          json mats = json::array();
          for (const auto& m : *lr.matrix_lift) {
            json rows = json::array();
            for (std::size_t i = 0; i < m.rows(); ++i) {
              json row = json::array();
              for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
              rows.push_back(row);
            }
            mats.push_back(rows);
          }
          report["matrix_lift"] = mats;
          report["lift_modulus"] = (*lr.matrix_lift)[0].modulus();
        }
      }
      emit(report, out_path);
      return 0;
    }
  } catch (const json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
