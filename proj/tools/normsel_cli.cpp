// Command-line surface: sequence generation, selection, normality
// analysis, arithmetic coding, and the experiment harness.
//
// Exit codes: 0 success / verdict PASS, 1 verdict FAIL, 2 hypothesis or
// config rejection (bad specs, length mismatches, off-support inputs),
// 3 I/O or file-format errors. Failures print one machine-readable JSON
// object on stderr.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "normsel/normsel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int fail(int code, const std::string& kind, const std::string& message) {
  json err = {{"error", kind}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return code;
}

void write_report_files(const normsel::ExperimentReport& rep, const std::string& out) {
  if (out.empty()) return;
  fs::path jpath(out);
  normsel::write_text_file(jpath, rep.doc.dump(2) + "\n");
  fs::path cpath = jpath;
  cpath.replace_extension(".csv");
  normsel::write_text_file(cpath, rep.csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subsequence selection, normality statistics and exact coding over binary sequences"};
  app.require_subcommand(1);

  // generate <spec> <n> <out>
  std::string gen_spec, gen_out;
  uint64_t gen_n = 0;
  auto* gen = app.add_subcommand("generate", "write the first n bits of a generator to a bitfile");
  gen->add_option("spec", gen_spec, "generator spec (champernowne | sturmian:a,b,c,d:beta | periodic:PATTERN | prng:SEED)")->required();
  gen->add_option("n", gen_n, "prefix length in bits")->required();
  gen->add_option("out", gen_out, "output bitfile")->required();

  // select <x> <y> <out>
  std::string sel_x, sel_y, sel_out;
  auto* sel = app.add_subcommand("select", "write x/y, the subsequence of x at the ones of y");
  sel->add_option("x", sel_x, "bitfile with x")->required();
  sel->add_option("y", sel_y, "bitfile with the selection mask y")->required();
  sel->add_option("out", sel_out, "output bitfile")->required();

  // analyze <file> [--k-max] [--kt-order ...] [--lz78] [--out base.json]
  std::string an_file, an_out;
  unsigned an_kmax = 8;
  std::vector<unsigned> an_orders;
  bool an_lz78 = false;
  auto* an = app.add_subcommand("analyze", "normality report (and optional complexity proxies) for a bitfile");
  an->add_option("file", an_file, "input bitfile")->required();
  an->add_option("--k-max", an_kmax, "largest block length (default 8)");
  an->add_option("--kt-order", an_orders, "also report the KT rate at these context orders");
  an->add_flag("--lz78", an_lz78, "also report the LZ78 estimate");
  an->add_option("--out", an_out, "write JSON here and CSV alongside");

  // encode <measure> <in> <out>
  std::string enc_measure, enc_in, enc_out, enc_engine = "auto";
  auto* enc = app.add_subcommand("encode", "arithmetic-code a bitfile under a measure");
  enc->add_option("measure", enc_measure, "measure id (uniform | bernoulli:p/q | markov:a/b,c/d:e/f | pointmass:<spec>)")->required();
  enc->add_option("in", enc_in, "input bitfile")->required();
  enc->add_option("out", enc_out, "output code file")->required();
  enc->add_option("--engine", enc_engine, "reference | streaming | auto")->check(CLI::IsMember({"reference", "streaming", "auto"}));

  // decode <in> <out> [--measure id]
  std::string dec_in, dec_out, dec_measure;
  auto* dec = app.add_subcommand("decode", "decode a code file back to the source bitfile");
  dec->add_option("in", dec_in, "input code file")->required();
  dec->add_option("out", dec_out, "output bitfile")->required();
  dec->add_option("--measure", dec_measure, "expected measure id (must match the file)");

  // experiment <scenario> [flags] [--config file] --out base.json
  std::string ex_scenario, ex_config, ex_out;
  std::vector<std::string> ex_set;
  auto* ex = app.add_subcommand("experiment", "run a scenario and write its report");
  ex->add_option("scenario", ex_scenario, "forward | converse | counterexample | weakrand")->required();
  ex->add_option("--config", ex_config, "JSON config file mirroring the flags");
  ex->add_option("--set", ex_set, "override config entries as key=value (JSON values)");
  ex->add_option("--out", ex_out, "write report JSON here and CSV alongside");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    return fail(2, "usage", e.what());
  }

  try {
    if (*gen) {
      const auto spec = normsel::GeneratorSpec::parse(gen_spec);
      normsel::write_bitfile(gen_out, normsel::generate_prefix(spec, gen_n));
      return 0;
    }
    if (*sel) {
      const auto x = normsel::read_bitfile(sel_x);
      const normsel::SelectionMask y(normsel::read_bitfile(sel_y));
      normsel::write_bitfile(sel_out, normsel::select(x, y));
      return 0;
    }
    if (*an) {
      const auto x = normsel::read_bitfile(an_file);
      const auto rep = normsel::normality_defect(x, an_kmax);
      json doc = {{"file", an_file}, {"normality", normsel::to_json(rep)}};
      json cx = json::array();
      for (unsigned o : an_orders) cx.push_back(normsel::to_json(normsel::kt_compress_rate(x, o)));
      if (an_lz78) cx.push_back(normsel::to_json(normsel::lz78_estimate(x)));
      if (!cx.empty()) doc["complexity"] = cx;
      std::cout << doc.dump(2) << "\n";
      if (!an_out.empty()) {
        normsel::write_text_file(an_out, doc.dump(2) + "\n");
        fs::path cpath(an_out);
        cpath.replace_extension(".csv");
        normsel::write_text_file(cpath, normsel::normality_csv(rep));
      }
      return 0;
    }
    if (*enc) {
      const auto P = normsel::make_measure(enc_measure);
      const auto y = normsel::read_bitfile(enc_in);
      auto engine = normsel::CoderEngine::automatic;
      if (enc_engine == "reference") engine = normsel::CoderEngine::reference;
      if (enc_engine == "streaming") engine = normsel::CoderEngine::streaming;
      const auto code = normsel::encode(*P, y, engine);
      normsel::write_codefile(enc_out, code);
      json info = {{"measure", code.measure_id},
                   {"n", code.n},
                   {"f_n", code.f_n},
                   {"code_bits", code.z.size()}};
      std::cout << info.dump() << "\n";
      return 0;
    }
    if (*dec) {
      const auto f = normsel::read_codefile(dec_in);
      if (!dec_measure.empty() && dec_measure != f.measure_id)
        throw normsel::domain_error("measure mismatch: file says " + f.measure_id);
      const auto P = normsel::make_measure(f.measure_id);
      normsel::write_bitfile(dec_out, normsel::decode(*P, f.z, f.n));
      return 0;
    }
    if (*ex) {
      json cfg_json;
      if (!ex_config.empty()) {
        std::ifstream in(ex_config);
        if (!in) throw normsel::io_error("cannot open config: " + ex_config);
        try {
          in >> cfg_json;
        } catch (const json::exception& e) {
          throw normsel::config_error("bad config JSON: " + std::string(e.what()));
        }
      }
      cfg_json["scenario"] = ex_scenario;
      for (const auto& kv : ex_set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw normsel::config_error("--set expects key=value");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        try {
          cfg_json[key] = json::parse(val);
        } catch (const json::exception&) {
          cfg_json[key] = val;  // bare strings allowed
        }
      }
      const auto cfg = normsel::ExperimentConfig::from_json(cfg_json);
      const auto rep = normsel::run_experiment(cfg);
      write_report_files(rep, ex_out);
      std::cout << rep.doc.dump(2) << "\n";
      return rep.pass ? 0 : 1;
    }
  } catch (const normsel::config_error& e) {
    return fail(2, "config", e.what());
  } catch (const normsel::off_support_error& e) {
    return fail(2, "off_support", e.what());
  } catch (const normsel::domain_error& e) {
    return fail(2, "domain", e.what());
  } catch (const normsel::parse_error& e) {
    return fail(2, "parse", e.what());
  } catch (const normsel::decode_error& e) {
    return fail(3, "decode", e.what());
  } catch (const normsel::io_error& e) {
    return fail(3, "io", e.what());
  } catch (const std::exception& e) {
    return fail(3, "internal", e.what());
  }
  return 0;
}
