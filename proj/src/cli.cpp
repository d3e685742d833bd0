#include "tzeta/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tzeta/ehrhart.hpp"
#include "tzeta/error.hpp"
#include "tzeta/mero.hpp"
#include "tzeta/zeta.hpp"

namespace tzeta {

Fan parse_fan_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("fan file is not valid JSON: ") + e.what());
  }
  Fan fan;
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(name)) throw Error(ErrorKind::Parse, std::string("fan file lacks field \"") + name + "\"");
    return j.at(name);
  };
  try {
    fan.dim = field("dim").get<std::size_t>();
    const auto& rays = field("rays");
    for (std::size_t i = 0; i < rays.size(); ++i) {
      try {
        fan.rays.push_back(rays.at(i).get<std::vector<long>>());
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::Parse, "field \"rays\": entry " + std::to_string(i) + " is not an integer array");
      }
    }
    if (j.contains("max_cones")) {
      const auto& cones = j.at("max_cones");
      for (std::size_t i = 0; i < cones.size(); ++i) {
        try {
          fan.max_cones.push_back(cones.at(i).get<std::vector<std::size_t>>());
        } catch (const nlohmann::json::exception&) {
          throw Error(ErrorKind::Parse, "field \"max_cones\": entry " + std::to_string(i) + " is not an index array");
        }
      }
    }
    fan.complete = field("complete").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed fan field: ") + e.what());
  }
  return validate_fan(std::move(fan));
}

Fan parse_fan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open fan file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fan_json(ss.str());
}

std::string fan_to_json(const Fan& fan) {
  nlohmann::json j;
  j["dim"] = fan.dim;
  j["rays"] = fan.rays;
  j["max_cones"] = fan.max_cones;
  j["complete"] = fan.complete;
  return j.dump();
}

namespace {

struct Config {
  std::string variety;
  std::string fan_file;
  std::string grading;
  std::string divisor;
  std::string poly;
  std::string degrees;
  std::string t = "1";
  long q = 2;
  long p = 0;
  long dmax = 10;
  long prec = 8;
  std::string out = "text";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '(' && c != ')' && c != '[' && c != ']') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<long> parse_longs(const std::string& s, const char* what) {
  std::vector<long> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, std::string("bad integer '") + item + "' in " + what);
    }
  }
  return out;
}

long smallest_prime_factor(long q) {
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) return d;
  return q;
}

void finish_config(Config& c) {
  if (c.q < 2) throw Error(ErrorKind::InvalidArgument, "--q must be at least 2");
  if (c.p == 0) c.p = smallest_prime_factor(c.q);
  (void)prime_power_exponent(c.q, c.p);
  if (c.dmax < 1) throw Error(ErrorKind::InvalidArgument, "--dmax must be at least 1");
  if (c.prec < 1) throw Error(ErrorKind::InvalidArgument, "--prec must be at least 1");
  if (c.out != "text" && c.out != "csv") throw Error(ErrorKind::InvalidArgument, "--out must be csv or text");
}

ToricVarietyModel load_model(const Config& c) {
  if (c.variety.empty() == c.fan_file.empty())
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --variety and --fan-file");
  Fan fan;
  IntVector grading;
  if (!c.variety.empty()) {
    auto b = builtin_variety(c.variety);
    fan = std::move(b.fan);
    grading = std::move(b.grading);
  } else {
    fan = parse_fan_file(c.fan_file);
    grading.assign(divisor_class_group(fan).rank, Integer(1));
  }
  if (!c.grading.empty()) grading = to_integers(parse_longs(c.grading, "--grading"));
  return make_model(fan, grading);
}

std::string coords_str(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

void cmd_class_group(const Config& c, std::ostream& out) {
  const auto model = load_model(c);
  const auto& g = model.class_group;
  if (c.out == "csv") {
    out << "ray,class\n";
    for (std::size_t i = 0; i < model.fan.rays.size(); ++i)
      out << i << ',' << coords_str(g.classify_unit(i)) << '\n';
    return;
  }
  out << "rank=" << g.rank << '\n';
  out << "torsion=[";
  for (std::size_t i = 0; i < g.invariant_factors.size(); ++i) out << (i ? "," : "") << g.invariant_factors[i].get_str();
  out << "]\n";
  out << "torsion_trivial=" << (g.invariant_factors.empty() ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < model.fan.rays.size(); ++i)
    out << "class[D" << i + 1 << "]=" << coords_str(g.classify_unit(i)) << '\n';
}

TorusDivisor divisor_arg(const Config& c, const ToricVarietyModel& model) {
  if (c.divisor.empty()) throw Error(ErrorKind::InvalidArgument, "--divisor is required");
  TorusDivisor d{to_integers(parse_longs(c.divisor, "--divisor"))};
  if (d.coeffs.size() != model.fan.rays.size())
    throw Error(ErrorKind::InvalidArgument, "--divisor needs one coefficient per ray");
  return d;
}

void cmd_sections(const Config& c, std::ostream& out) {
  const auto model = load_model(c);
  const TorusDivisor d = divisor_arg(c, model);
  const Integer l = sections_dim(model.fan, d);
  if (c.out == "csv") out << "divisor,class,l\n" << '"' << coords_str(d.coeffs) << "\",\"" << coords_str(model.class_group.classify(d.coeffs)) << "\"," << l.get_str() << '\n';
  else out << "class=" << coords_str(model.class_group.classify(d.coeffs)) << "\nl=" << l.get_str() << '\n';
}

void cmd_ehrhart(const Config& c, std::ostream& out) {
  const auto model = load_model(c);
  TorusDivisor dir;
  if (c.divisor.empty()) dir = {minimal_generators(model).front().representative};
  else dir = divisor_arg(c, model);
  const TorusDivisor zero{IntVector(model.fan.rays.size(), Integer(0))};
  const long upto = std::max(50L, c.dmax);
  const QuasiPolynomial qp = fit_toric_family(model.fan, zero, dir, 12, upto);
  if (c.out == "csv") {
    out << "residue,power,coefficient\n";
    for (std::size_t r = 0; r < qp.components.size(); ++r)
      for (std::size_t k = 0; k < qp.components[r].size(); ++k)
        out << r << ',' << k << ',' << rational_str(qp.components[r][k]) << '\n';
    return;
  }
  out << "direction=" << coords_str(dir.coeffs) << '\n';
  out << "period=" << qp.period << '\n';
  out << "degree=" << qp.degree() << '\n';
  for (std::size_t r = 0; r < qp.components.size(); ++r) {
    Polynomial poly(1);
    for (std::size_t k = 0; k < qp.components[r].size(); ++k)
      poly += Polynomial::monomial({static_cast<int>(k)}, qp.components[r][k]);
    out << "component[" << r << "]=" << poly.str("n") << '\n';
  }
  out << "validated_upto=" << upto << '\n';
  out << "json=" << qp.to_json() << '\n';
}

void cmd_zeta(const Config& c, std::ostream& out) {
  const auto model = load_model(c);
  const ZetaTruncation z = zeta_coefficients(model, c.q, c.dmax);
  if (c.out == "csv") {
    out << zeta_csv(z, c.p);
    return;
  }
  out << "q=" << c.q << "\ndmax=" << c.dmax << '\n';
  for (std::size_t d = 0; d < z.coeffs.size(); ++d) out << "M_" << d << "=" << z.coeffs[d].get_str() << '\n';
}

void cmd_pole(const Config& c, std::ostream& out) {
  const auto model = load_model(c);
  const PoleReport r = pole_analysis(model, c.q, c.p, c.dmax, c.prec);
  if (c.out == "csv") {
    const std::string s = r.str();
    out << s.substr(s.find("d,(1-T)"));
    return;
  }
  out << r.str();
}

void cmd_mero(const Config& c, std::ostream& out) {
  if (c.poly.empty()) throw Error(ErrorKind::InvalidArgument, "--poly is required");
  const Polynomial f = Polynomial::parse(c.poly);
  std::vector<long> degrees = c.degrees.empty() ? std::vector<long>(f.nvars(), 1) : parse_longs(c.degrees, "--degrees");
  const IncreasingPolynomial inc = check_increasing(f);
  MeroOptions opt;
  opt.q = c.q;
  opt.p = c.p;
  opt.truncation = c.dmax;
  opt.precision = c.prec;
  MeromorphicPart part = reduce_to_mero_parts(inc, degrees, opt);
  const Rational t = parse_rational(c.t);
  const PadicScalar tp = PadicScalar::from_rational(c.p, t, 4 * c.prec + 256);
  const PadicScalar value = evaluate_meromorphic_auto(part, tp, c.prec);
  if (c.out == "csv") {
    out << "term,multiplicity,t_shift,description\n";
    for (std::size_t i = 0; i < part.terms.size(); ++i)
      out << i << ',' << part.terms[i].multiplicity.get_str() << ',' << part.terms[i].t_shift << ",\""
          << part.terms[i].describe() << "\"\n";
    out << "value," << (value.is_zero() ? std::string("0") : value.lift().get_str()) << ",," << '"' << value.str() << "\"\n";
    return;
  }
  out << "f=" << f.str() << '\n';
  out << "terms=" << part.terms.size() << '\n';
  for (std::size_t i = 0; i < part.terms.size(); ++i) {
    const auto& t = part.terms[i];
    out << "term[" << i << "]=" << t.describe() << '\n';
    if (t.numerator && t.numerator->bound)
      out << "  numerator_bound c=" << rational_str(t.numerator->bound->c) << " d=" << rational_str(t.numerator->bound->d)
          << '\n';
    if (t.denominator && t.denominator->bound)
      out << "  denominator_bound c=" << rational_str(t.denominator->bound->c)
          << " d=" << rational_str(t.denominator->bound->d) << " factors_below_precision=" << t.denominator_factors
          << '\n';
  }
  out << "t=" << rational_str(t) << '\n';
  out << "value=" << value.str() << '\n';
}

void cmd_fan(const Config& c, std::ostream& out) { out << fan_to_json(load_model(c).fan) << '\n'; }

void print_error(std::ostream& out, const std::string& kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  out << j.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Zeta functions of divisors on toric varieties"};
  app.require_subcommand(1);
  Config cfg;
  struct Command {
    const char* name;
    const char* help;
    void (*fn)(const Config&, std::ostream&);
  };
  const Command commands[] = {
      {"class-group", "divisor class group rank and torsion", cmd_class_group},
      {"sections", "l(D) for a torus-invariant divisor", cmd_sections},
      {"ehrhart", "quasi-polynomial fit of l(nD) with validation", cmd_ehrhart},
      {"zeta-coeffs", "truncated zeta function of divisors", cmd_zeta},
      {"pole", "pole order and special value at T = 1", cmd_pole},
      {"mero-eval", "decompose sum q^f(x) T^(d.x) and evaluate it at t", cmd_mero},
      {"fan", "dump the fan as JSON", cmd_fan},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    auto* variety = sub->add_option("--variety", cfg.variety, "builtin: p1, p2, p1xp1, hirzebruch:a, wp112");
    sub->add_option("--fan-file", cfg.fan_file, "fan JSON file")->excludes(variety);
    sub->add_option("--grading", cfg.grading, "grading weights, comma separated");
    sub->add_option("--q", cfg.q, "field size q = p^e");
    sub->add_option("--p", cfg.p, "prime p (default: the prime dividing q)");
    sub->add_option("--dmax", cfg.dmax, "truncation degree");
    sub->add_option("--prec", cfg.prec, "p-adic precision N");
    sub->add_option("--out", cfg.out, "csv or text");
    sub->add_option("--divisor", cfg.divisor, "ray coefficients, comma separated");
    sub->add_option("--poly", cfg.poly, "polynomial in x1..xn");
    sub->add_option("--degrees", cfg.degrees, "T-degrees of x1..xn, comma separated");
    sub->add_option("--t", cfg.t, "evaluation point, a rational");
    subs.emplace_back(sub, &cmd);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(out, "usage", e.what());
    return 2;
  }
  try {
    finish_config(cfg);
    for (const auto& [sub, cmd] : subs)
      if (sub->parsed()) cmd->fn(cfg, out);
  } catch (const Error& e) {
    print_error(out, std::string(to_string(e.kind())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(out, "internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace tzeta
