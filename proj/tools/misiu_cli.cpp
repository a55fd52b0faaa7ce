// misiu: compute, verify, and certify Misiurewicz polynomials of the family
// phi_a(z) = a z / (z^d + d - 1) in the coordinate a = (b+1)d.
//
// Exit codes: 0 success, 1 check failure, 2 usage, 3 size cap, 4 identity violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "misiu/misiu.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitIdentity = 4;

struct RunConfig {
  std::uint64_t d = 3;
  std::uint64_t index = 1;  // m or n
  std::uint64_t p = 0;      // 0: use d
  std::vector<std::uint64_t> aux_primes;
  std::size_t precision = 20;
  std::uint64_t max_degree = misiu::SizeLimits{}.max_degree;
  std::uint64_t size_cap_bits = misiu::SizeLimits{}.max_degree_bits;
  std::string format = "json";
  std::string out_path;
  std::string manifest_path;
  std::string route = "direct";
  std::string name = "G";
  bool full_polygon = false;
  unsigned jobs = 1;
  std::optional<std::size_t> inject_fault;
  std::string command;

  std::uint64_t polygon_prime() const { return p == 0 ? d : p; }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void check_prime_d(std::uint64_t d) {
  if (d < 3 || !misiu::is_prime(d)) throw std::invalid_argument("--d must be a prime >= 3");
}

void check_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (cfg.format == a) return;
  }
  throw std::invalid_argument("--format " + cfg.format + " is not supported by " + cfg.command);
}

const misiu::IntPoly& named_poly(misiu::Family& fam, const RunConfig& cfg) {
  const std::string& n = cfg.name;
  if (n == "r") return fam.r(cfg.index);
  if (n == "s") return fam.s(cfg.index);
  if (n == "sigma") return fam.sigma(cfg.index);
  if (n == "tau") return fam.tau(cfg.index);
  if (n == "G") return fam.misiurewicz(cfg.index);
  throw std::invalid_argument("unknown polynomial name " + n + " (r, s, sigma, tau, G, F<k>)");
}

misiu::IntPoly resolve_poly(misiu::Family& fam, const RunConfig& cfg) {
  if (cfg.name.size() >= 2 && cfg.name[0] == 'F') {
    std::size_t k = 0;
    try {
      k = std::stoul(cfg.name.substr(1));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed term name " + cfg.name);
    }
    if (k >= fam.d()) throw std::invalid_argument("F_k requires k < d");
    return fam.decomposition_terms(cfg.index).terms[k];
  }
  return named_poly(fam, cfg);
}

int cmd_orbit(const RunConfig& cfg, std::ostream& os) {
  check_prime_d(cfg.d);
  check_format(cfg, {"json", "pretty"});
  misiu::Family fam(cfg.d);
  const misiu::OrbitTable table = fam.table(cfg.index);
  if (cfg.format == "pretty") {
    for (std::size_t n = 0; n < table.entries.size(); ++n) {
      os << "r_" << n << " = " << table.entries[n].r << "\n";
      os << "s_" << n << " = " << table.entries[n].s << "\n";
    }
    return kExitOk;
  }
  ordered_json j;
  j["d"] = cfg.d;
  auto entries = ordered_json::array();
  for (std::size_t n = 0; n < table.entries.size(); ++n) {
    entries.push_back(ordered_json{{"n", n},
                                   {"r", misiu::to_json(table.entries[n].r)},
                                   {"s", misiu::to_json(table.entries[n].s)}});
  }
  j["entries"] = std::move(entries);
  os << j.dump() << "\n";
  return kExitOk;
}

int cmd_misiurewicz(const RunConfig& cfg, std::ostream& os) {
  check_prime_d(cfg.d);
  check_format(cfg, {"json", "pretty"});
  if (cfg.index < 1) throw std::invalid_argument("--m must be >= 1");
  misiu::Family fam(cfg.d);
  const std::uint64_t p = cfg.polygon_prime();
  if (!misiu::is_prime(p)) throw std::invalid_argument("--p must be prime");
  misiu::Route route = misiu::Route::direct;
  bool both = false;
  if (cfg.route == "via_tau") {
    route = misiu::Route::via_tau;
  } else if (cfg.route == "literal") {
    route = misiu::Route::literal;
  } else if (cfg.route == "both") {
    both = true;
  } else if (cfg.route != "direct") {
    throw std::invalid_argument("--route must be direct, via_tau, literal or both");
  }
  const misiu::IntPoly& g = fam.misiurewicz(cfg.index, route);
  std::optional<bool> routes_agree;
  if (both) routes_agree = fam.misiurewicz(cfg.index, misiu::Route::via_tau) == g;
  const misiu::PrincipalPolygon poly = misiu::principal_polygon(g, p);
  const misiu::FactorDegreeBound bound = misiu::qp_factor_degree_bound(g, p);

  if (cfg.format == "pretty") {
    os << "G_" << cfg.index << " (d=" << cfg.d << ") = " << g << "\n";
    os << "degree " << g.degree() << "\n";
    os << "N_" << p << "^- = " << poly.to_string() << "\n";
    os << "forced Q_" << p << " factor degree >= " << bound.bound << "\n";
  } else {
    ordered_json j;
    j["d"] = cfg.d;
    j["m"] = cfg.index;
    j["route"] = both ? "both" : misiu::to_string(route);
    j["degree"] = g.degree().value();
    j["poly"] = misiu::to_json(g);
    j["polygon"] = misiu::to_json(poly, p);
    j["polygon_bound"] = bound.bound;
    if (routes_agree) j["routes_agree"] = *routes_agree;
    os << j.dump() << "\n";
  }
  if (routes_agree) {
    os << (*routes_agree ? "routes agree: direct == via_tau" : "ROUTES DISAGREE: direct != via_tau") << "\n";
    if (!*routes_agree) return kExitIdentity;
  }
  return kExitOk;
}

int cmd_dump(const RunConfig& cfg, std::ostream& os) {
  check_prime_d(cfg.d);
  check_format(cfg, {"json", "pretty"});
  misiu::Family fam(cfg.d);
  const misiu::IntPoly f = resolve_poly(fam, cfg);
  if (cfg.format == "pretty") {
    os << f << "\n";
  } else {
    os << misiu::to_json(f).dump() << "\n";
  }
  return kExitOk;
}

int cmd_polygon(const RunConfig& cfg, std::ostream& os) {
  check_prime_d(cfg.d);
  check_format(cfg, {"json", "csv", "pretty"});
  const std::uint64_t p = cfg.polygon_prime();
  if (!misiu::is_prime(p)) throw std::invalid_argument("--p must be prime");
  misiu::Family fam(cfg.d);
  const misiu::IntPoly f = resolve_poly(fam, cfg);
  const misiu::NewtonPolygon full = misiu::newton_polygon(f, p);
  const misiu::PrincipalPolygon principal = misiu::principal_part(full);
  const auto& vertices = cfg.full_polygon ? full.vertices() : principal.vertices();
  if (cfg.format == "csv") {
    os << misiu::to_csv(vertices);
  } else if (cfg.format == "pretty") {
    os << (cfg.full_polygon ? full.to_string() : principal.to_string()) << "\n";
  } else {
    os << (cfg.full_polygon ? misiu::to_json(full, p) : misiu::to_json(principal, p)).dump() << "\n";
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
  check_prime_d(cfg.d);
  check_format(cfg, {"json", "pretty"});
  if (cfg.index < 1) throw std::invalid_argument("--max-m must be >= 1");
  misiu::FaultInjection fault;
  fault.corrupt_s = cfg.inject_fault;
  misiu::Family fam(cfg.d, fault);
  misiu::SuiteOptions options;
  options.max_m = cfg.index;
  options.jobs = cfg.jobs;
  options.certify.primes = cfg.aux_primes;
  options.certify.precision = cfg.precision;
  std::vector<misiu::CheckReport> reports;
  try {
    reports = misiu::run_suite(fam, options);
  } catch (const misiu::NotDivisible& e) {
    std::cerr << "identity violation: " << e.what() << "\n";
    return kExitIdentity;
  }
  const misiu::SuiteSummary summary = misiu::summarize(reports);
  for (const auto& r : reports) {
    if (cfg.format == "pretty") {
      os << (r.passed ? "PASS " : "FAIL ") << r.check_id << " d=" << r.d << " i=" << r.index
         << " expected " << r.expected << " actual " << r.actual << "\n";
    } else {
      os << misiu::to_json(r).dump() << "\n";
    }
  }
  ordered_json s{{"summary", ordered_json{{"d", cfg.d},
                                          {"max_m", cfg.index},
                                          {"total", summary.total},
                                          {"passed", summary.passed},
                                          {"failed", summary.total - summary.passed}}}};
  os << s.dump() << "\n";
  return summary.all_passed() ? kExitOk : kExitCheckFailed;
}

int cmd_certify(const RunConfig& cfg, std::ostream& os) {
  check_prime_d(cfg.d);
  check_format(cfg, {"json", "pretty"});
  if (cfg.index < 1) throw std::invalid_argument("--m must be >= 1");
  misiu::CertifyOptions options;
  options.primes = cfg.aux_primes;
  options.precision = cfg.precision;
  misiu::Family fam(cfg.d);
  const misiu::IrreducibilityCertificate cert = misiu::certify(fam, cfg.index, options);
  const auto problems = misiu::audit(cert, fam.misiurewicz(cfg.index));
  if (cfg.format == "pretty") {
    os << "G_" << cfg.index << " (d=" << cfg.d << "): " << misiu::to_string(cert.verdict) << "\n";
    for (const auto& line : cert.narrative) os << "  " << line << "\n";
  } else {
    os << misiu::to_json(cert).dump() << "\n";
  }
  for (const auto& p : problems) std::cerr << "audit: " << p << "\n";
  return problems.empty() ? kExitOk : kExitCheckFailed;
}

void write_manifest(const RunConfig& cfg) {
  if (cfg.manifest_path.empty()) return;
  ordered_json j;
  j["program"] = "misiu";
  j["version"] = "0.1.0";
  j["gmp_version"] = gmp_version;
  j["command"] = cfg.command;
  j["config"] = ordered_json{{"d", cfg.d},
                             {"index", cfg.index},
                             {"p", cfg.polygon_prime()},
                             {"aux_primes", cfg.aux_primes},
                             {"precision", cfg.precision},
                             {"max_degree", cfg.max_degree},
                             {"size_cap_bits", cfg.size_cap_bits},
                             {"format", cfg.format},
                             {"route", cfg.route},
                             {"name", cfg.name},
                             {"full", cfg.full_polygon},
                             {"jobs", cfg.jobs}};
  std::ofstream out(cfg.manifest_path);
  if (!out) throw std::invalid_argument("cannot open manifest file " + cfg.manifest_path);
  out << j.dump(2) << "\n";
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--d", cfg.d, "prime degree d >= 3")->required();
  sub->add_option("--p", cfg.p, "polygon prime (default d)");
  sub->add_option("--format", cfg.format, "json, pretty (csv for polygon)");
  sub->add_option("--out", cfg.out_path, "write output to this file");
  sub->add_option("--manifest", cfg.manifest_path, "write a reproduction manifest");
  sub->add_option("--max-degree", cfg.max_degree, "size cap: largest degree");
  sub->add_option("--size-cap", cfg.size_cap_bits, "size cap: (degree+1) * coefficient bits");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Misiurewicz polynomials: orbits, Newton polygons, verification, certificates"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML/INI config file (flags take precedence)");
  RunConfig cfg;

  auto* orbit = app.add_subcommand("orbit", "orbit table r_0..r_n, s_0..s_n");
  add_common(orbit, cfg);
  orbit->add_option("--n", cfg.index, "last orbit index")->required();

  auto* mis = app.add_subcommand("misiurewicz", "G_m with its polygon and degree");
  add_common(mis, cfg);
  mis->add_option("--m", cfg.index, "portrait length m")->required();
  mis->add_option("--route", cfg.route, "direct, via_tau, literal or both");

  auto* dump = app.add_subcommand("dump", "dump a named polynomial (r, s, sigma, tau, G, F<k>)");
  add_common(dump, cfg);
  auto* dm = dump->add_option("--m,--n", cfg.index, "index m or n")->required();
  (void)dm;
  dump->add_option("--name", cfg.name, "r, s, sigma, tau, G or F<k>")->required();

  auto* polygon = app.add_subcommand("polygon", "Newton polygon export of a named polynomial");
  add_common(polygon, cfg);
  polygon->add_option("--m,--n", cfg.index, "index m or n")->required();
  polygon->add_option("--name", cfg.name, "r, s, sigma, tau, G or F<k>");
  polygon->add_flag("--full", cfg.full_polygon, "export the full polygon instead of the principal part");

  auto* verify = app.add_subcommand("verify", "run every instance check up to max-m");
  add_common(verify, cfg);
  verify->add_option("--max-m", cfg.index, "largest m checked")->required();
  verify->add_option("--jobs", cfg.jobs, "parallel check groups");
  verify->add_option("--primes", cfg.aux_primes, "auxiliary primes for certificates")->delimiter(',');
  verify->add_option("--inject-fault", cfg.inject_fault, "test hook: corrupt s_n");

  auto* cert = app.add_subcommand("certify", "irreducibility certificate for G_m");
  add_common(cert, cfg);
  cert->add_option("--m", cfg.index, "portrait length m")->required();
  cert->add_option("--primes", cfg.aux_primes, "auxiliary primes (default: scan)")->delimiter(',');
  cert->add_option("--precision", cfg.precision, "p-adic lifting precision");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    misiu::set_size_limits({cfg.max_degree, cfg.size_cap_bits});
    write_manifest(cfg);
    Output out(cfg.out_path);
    std::ostream& os = out.stream();
    if (cfg.command == "orbit") return cmd_orbit(cfg, os);
    if (cfg.command == "misiurewicz") return cmd_misiurewicz(cfg, os);
    if (cfg.command == "dump") return cmd_dump(cfg, os);
    if (cfg.command == "polygon") return cmd_polygon(cfg, os);
    if (cfg.command == "verify") return cmd_verify(cfg, os);
    if (cfg.command == "certify") return cmd_certify(cfg, os);
    throw std::invalid_argument("unknown command");
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const misiu::ResourceGuardError& e) {
    std::cerr << "size cap: " << e.what() << "\n";
    return kExitResource;
  } catch (const misiu::NotDivisible& e) {
    std::cerr << "identity violation: " << e.what() << "\n";
    return kExitIdentity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
