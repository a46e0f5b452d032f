// qslopes: slopes of overconvergent quaternionic forms from the command line.
//
// Settings come from defaults, then --config FILE, then QS_* variables, then
// flags. Exit codes: 0 success, 1 invalid input or failed verification,
// 2 results that could not be certified.

#include <qs/workbench.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace qs::wb;

namespace {

struct Flags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
};

void add_run_flags(CLI::App* app, Flags& f) {
  const std::map<std::string, std::string> help{
      {"p", "odd prime p"},
      {"k", "weight"},
      {"k0", "family centre weight"},
      {"scale-m", "family scale exponent m (disc radius)"},
      {"width", "terms kept in the family coordinate"},
      {"weights", "comma-separated weights to specialise the family at"},
      {"trunc-M", "truncation degree M of the coefficient module"},
      {"prec-N", "working p-adic precision N"},
      {"v", "radius index v (0 or 1)"},
      {"h", "slope bound, inclusive (e.g. 2.9 or 5/2)"},
      {"ops", "Hecke operators, e.g. T5,T7"},
      {"out", "write the document here instead of stdout"},
      {"seed", "witness search order seed"},
      {"splitting", "choice of splitting at p"}};
  for (const auto& key : config_keys()) f.options[key] = app->add_option("--" + key, f.values[key], help.at(key));
  app->add_option("--config", f.config_file, "flat key = value settings file")->check(CLI::ExistingFile);
}

Settings settings(const Flags& f) {
  Settings layers = f.config_file.empty() ? Settings{} : read_config_file(f.config_file);
  Settings flags;
  for (const auto& [key, opt] : f.options)
    if (opt->count() > 0) flags[key] = f.values.at(key);
  return merge({layers, read_environment(), flags});
}

int emit(const CommandResult& r, const std::string& out) {
  if (out.empty())
    std::cout << serialize(r.document);
  else
    write_document(r.document, out);
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slopes of overconvergent quaternionic automorphic forms"};
  // --h is the slope bound, so help has no short form.
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  // One set per subcommand; map nodes keep the bound strings in place.
  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> about{
      {"slopes", "slopes <= h at a fixed weight, with stabilisation and classical cross-checks"},
      {"family", "slope <= h chart over a weight disc and degree checks at given weights"},
      {"charpoly", "U_p char series and classical Hecke polynomials"},
      {"bgg-check", "check that the differential operator intertwines U_p"}};
  for (const auto& [name, text] : about) {
    subs[name] = app.add_subcommand(name, text);
    add_run_flags(subs[name], flags[name]);
  }
  std::string doc_path, verify_out;
  CLI::App* verify = app.add_subcommand("verify", "re-check a document's invariants from its own data");
  verify->add_option("document", doc_path, "document written by this tool")->required();
  verify->add_option("--out", verify_out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInvalid;
  }

  try {
    if (verify->parsed()) return emit(cmd_verify(read_document(doc_path)), verify_out);
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      const RunConfig c = make_config(settings(flags.at(name)), name);
      if (name == "slopes") return emit(cmd_slopes(c), c.out);
      if (name == "family") return emit(cmd_family(c), c.out);
      if (name == "charpoly") return emit(cmd_charpoly(c), c.out);
      return emit(cmd_bgg_check(c), c.out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const qs::PrecisionError& e) {
    std::cerr << "precision: " << e.what() << "\n";
    return kUncertified;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
