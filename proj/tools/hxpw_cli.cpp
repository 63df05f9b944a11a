// hxpw: build relation tables, certify the HX/PW isomorphism, export graphs.
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hxpw/certify.hpp"
#include "hxpw/io.hpp"

namespace {

using namespace hxpw;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  int h = 0;
  std::string family = "hx";
  std::string depth = "full";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out;
  std::string format;
  std::vector<int> classes;
};

void require_table_h(int h) {
  if (h < 1 || h > Field::kMaxH) throw UsageError("--h must be in 1.." + std::to_string(Field::kMaxH));
  if (h >= 4) throw UsageError("h >= 4 requires --depth sampled; full relation tables are built for h <= 3");
}

struct BuiltTable {
  RelationTable table;
  std::string route;
};

BuiltTable build_table(const Options& o) {
  const HxScheme hx(make_field(o.h));
  if (o.family == "hx") return {hx.hx_table(o.threads), "rho-hat"};
  if (o.family == "fine") return {hx.fine_table(o.threads), "rho-hat fine labels"};
  const PwScheme pw(hx);
  if (o.h <= 2) {
    const auto lines = pw.hemisystem_lines();
    return {pw.geometric_table(lines, pw.spreads(lines, o.threads), o.threads), "geometric"};
  }
  return {pw.klein_table(o.threads), "klein"};
}

Json table_header(const Options& o, const BuiltTable& b) {
  const auto f = make_field(o.h);
  Json h;
  h["h"] = o.h;
  h["q"] = f->q();
  h["n"] = b.table.n();
  h["modulus_hex"] = f->modulus_hex();
  h["family"] = o.family;
  h["route"] = b.route;
  h["classes"] = b.table.d();
  const auto counts = b.table.class_pair_counts();
  Json val = Json::array();
  for (std::size_t c = 1; c < counts.size(); ++c) val.push_back(2 * counts[c] / b.table.n());
  h["valencies"] = val;
  h["flags"] = {{"h", o.h}, {"family", o.family}, {"format", o.format}};
  if (!o.classes.empty()) h["flags"]["classes"] = o.classes;
  return h;
}

int cmd_build(Options o) {
  require_table_h(o.h);
  if (o.format.empty()) o.format = "json";
  if (o.format != "json" && o.format != "csv") throw UsageError("build writes json or csv");
  const auto b = build_table(o);
  const Json header = table_header(o, b);
  std::ostringstream os;
  if (o.format == "json") {
    os << table_json(b.table, header).dump() << '\n';
  } else {
    write_table_csv(os, b.table, header);
  }
  write_file(o.out, os.str());
  std::cout << "h=" << o.h << " family=" << o.family << " n=" << b.table.n() << " valencies="
            << header["valencies"].dump() << " -> " << o.out << '\n';
  return 0;
}

int cmd_certify(const Options& o) {
  CertifyConfig c;
  c.h = o.h;
  c.depth = o.depth == "sampled" ? Depth::sampled : Depth::full;
  c.seed = o.seed;
  c.threads = o.threads;
  try {
    validate_config(c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto cert = certify(c);
  write_file(o.out, cert.doc.dump(2) + "\n");
  const Json& v = cert.doc["verdict"];
  std::cout << "h=" << o.h << " verdict=" << (cert.pass ? "PASS" : "FAIL") << " sha256=" << cert.hash << " -> "
            << o.out << '\n';
  if (!cert.pass) std::cout << "failed blocks: " << v["failed_blocks"].dump() << '\n';
  return cert.pass ? 0 : 1;
}

int cmd_export(Options o) {
  require_table_h(o.h);
  if (o.format != "graph6" && o.format != "csv" && o.format != "json") {
    throw UsageError("export writes graph6, csv or json");
  }
  if (o.format == "graph6" && o.classes.empty()) throw UsageError("graph6 export needs --classes");
  const auto b = build_table(o);
  for (int c : o.classes)
    if (c < 1 || c > b.table.d()) throw UsageError("class " + std::to_string(c) + " out of range");
  if (o.format == "graph6") {
    if (union_pair_count(b.table, o.classes) == 0) {
      std::cerr << "hxpw: the selected classes are empty at h=" << o.h << "; nothing to export\n";
      return 1;
    }
    write_file(o.out, graph6(b.table, o.classes));
    std::cout << "graph6 n=" << b.table.n() << " -> " << o.out << '\n';
    return 0;
  }
  if (o.format == "json") {
    write_file(o.out, table_json(b.table, table_header(o, b)).dump() + "\n");
    return 0;
  }
  const auto a = verify_scheme(b.table, o.threads);
  const auto e = eigenmatrix(a);
  const auto kr = krein_and_qpoly(e, a);
  for (const auto& p : write_analytics_csv(o.out, a, e, kr)) std::cout << p << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian/conic association schemes: build, certify, export"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  app.set_help_flag("--help", "print help");
  auto common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--h", o.h, "field exponent, q = 2^h")->required();
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--out", o.out, "output path (prefix for csv export)")->required();
  };
  auto* build = app.add_subcommand("build", "write a relation table");
  common(build);
  build->add_option("--family", o.family)->check(CLI::IsMember({"hx", "pw", "fine"}));
  build->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

  auto* cert = app.add_subcommand("certify", "run every check and write a certificate");
  common(cert);
  cert->add_option("--depth", o.depth)->check(CLI::IsMember({"full", "sampled"}));
  auto* seed_opt = cert->add_option("--seed", seed, "seed for sampled checks");

  auto* exp = app.add_subcommand("export", "export graphs or scheme parameters");
  common(exp);
  exp->add_option("--family", o.family)->check(CLI::IsMember({"hx", "pw", "fine"}));
  exp->add_option("--format", o.format)->required()->check(CLI::IsMember({"graph6", "csv", "json"}));
  exp->add_option("--classes", o.classes, "classes whose union forms the graph")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (seed_opt->count()) o.seed = seed;

  try {
    if (*build) return cmd_build(o);
    if (*cert) return cmd_certify(o);
    return cmd_export(o);
  } catch (const UsageError& e) {
    std::cerr << "hxpw: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hxpw: " << e.what() << '\n';
    return 1;
  }
}
