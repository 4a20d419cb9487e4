#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ccm/acceptance.hpp"
#include "ccm/errors.hpp"
#include "ccm/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ccm::IoError("cannot open spec file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ccm::IoError("cannot open output file: " + path);
  out << text;
  if (!out) throw ccm::IoError("failed writing output file: " + path);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ccm::UnsupportedForClass*>(&e)) return 3;
  if (dynamic_cast<const ccm::QuotientTooLarge*>(&e)) return 3;
  if (dynamic_cast<const ccm::IoError*>(&e)) return 4;
  if (dynamic_cast<const ccm::ParseError*>(&e)) return 2;
  if (dynamic_cast<const ccm::SchemaError*>(&e)) return 2;
  if (dynamic_cast<const ccm::MixedGroups*>(&e)) return 2;
  if (dynamic_cast<const ccm::NotAPartition*>(&e)) return 2;
  if (dynamic_cast<const ccm::AtomTooSmall*>(&e)) return 2;
  if (dynamic_cast<const ccm::NotNormal*>(&e)) return 2;
  if (dynamic_cast<const ccm::HypothesisFails*>(&e)) return 2;
  if (dynamic_cast<const ccm::InvalidTable*>(&e)) return 2;
  if (dynamic_cast<const ccm::InvalidAction*>(&e)) return 2;
  if (dynamic_cast<const ccm::InvalidPairing*>(&e)) return 2;
  // EnumerationExhausted and internal invariant violations
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccm-lab: exact coset-correct means, commuting degrees and witness sets"};
  app.require_subcommand(1);

  static const char* kCommands[] = {"dc",      "dc-strata", "dc-rf",     "strata",
                                    "neumann-check", "witness",   "folner",    "defect",
                                    "smooth",  "kmu",       "transversal", "faf-witness",
                                    "verify-all"};

  std::string spec_path, out_path, format = "json";
  long long cap = 10000;
  for (const char* name : kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    if (std::string(name) != "verify-all")
      sub->add_option("--spec", spec_path, "batch specification file")->required();
    else
      sub->add_option("--spec", spec_path, "ignored for verify-all");
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--format", format, "json | csv");
    sub->add_option("--cap", cap, "quotient-order cap");
  }

  CLI11_PARSE(app, argc, argv);
  std::string command = app.get_subcommands().front()->get_name();

  try {
    if (command == "verify-all") {
      auto results = ccm::run_acceptance();
      bool all = true;
      for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion-" << r.id << "  " << r.name
                  << "  (" << (long long)r.wall_ms << " ms)";
        if (!r.detail.empty()) std::cout << "  -- " << r.detail;
        std::cout << "\n";
        all = all && r.pass;
      }
      std::cout << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
      return all ? 0 : 1;
    }

    ccm::RunRequest req;
    req.command = command;
    req.spec = ccm::parse_spec_text(read_file(spec_path));
    req.out_path = out_path;
    req.format = format;
    req.cap = cap;
    ccm::RunReport rep = ccm::dispatch(req);
    write_output(out_path, ccm::emit(rep, format));
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
