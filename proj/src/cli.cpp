#include "crr/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "crr/binary.hpp"
#include "crr/candidates.hpp"
#include "crr/classify.hpp"
#include "crr/errors.hpp"
#include "crr/format.hpp"
#include "crr/gacs_korner.hpp"
#include "crr/pmf_io.hpp"
#include "crr/pruning.hpp"
#include "crr/region_search.hpp"
#include "crr/report.hpp"

#ifndef CRR_VERSION_STRING
#define CRR_VERSION_STRING "0.0.0"
#endif

namespace crr::cli {

namespace {

struct Options {
  std::string input;
  std::string method;
  std::string d_list;
  double rho = 0.0;
  double delta = -1.0;
  double eta = 0.0;
  double grid = 0.05;
  int restarts = 64;
  std::uint64_t seed = 42;
  std::string out;
  std::string left;
  std::string right;
  double tol = kInfoTol;
  std::size_t k = 0;
  unsigned threads = 1;
  std::string channels;
  std::string keep;
  std::string deltas = "0.01,0.001,0.0001";
};

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_numbers(const std::string &s, const char *what) {
  std::vector<double> out;
  for (const auto &tok : split(s, ',')) out.push_back(parse_mass_literal(tok));
  if (out.empty()) throw ParseError(std::string(what) + " list is empty");
  return out;
}

void merge_into(ojson &j, const ojson &extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
}

void require(bool ok, const std::string &what) {
  if (!ok) throw ParseError(what);
}

void write_file(const std::string &path, const std::string &bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + path);
  f << bytes;
}

std::string sha256_bytes(const std::string &bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char *hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string read_bytes(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Writes `<out>.manifest.json` describing the run that produced `out`.
void write_manifest(const std::string &command, const ojson &params,
                    const Options &o, const std::string &out_bytes) {
  ojson m;
  m["command"] = command;
  m["parameters"] = params;
  m["seed"] = o.seed;
  m["version"] = CRR_VERSION_STRING;
  if (o.input.empty())
    m["input_sha256"] = nullptr;
  else
    m["input_sha256"] = sha256_file(o.input);
  m["output_sha256"] = sha256_bytes(out_bytes);
  write_file(o.out + ".manifest.json", m.dump(2) + "\n");
}

SourceSpec load_source(const std::string &path, double target) {
  require(!path.empty(), "--input is required");
  const auto doc = read_json_file(path);
  JointPmf pmf = pmf_from_json(doc);
  if (pmf.rank() != 3 || !pmf.has_variable("S") || !pmf.has_variable("U") ||
      !pmf.has_variable("V"))
    throw PreconditionError("source pmf must be over exactly S, U, V");
  auto d = distortion_from_json(doc, pmf.variable("S"));
  if (!d) d = DistortionMeasure::hamming(pmf.variable("S"));
  return SourceSpec(std::move(pmf), std::move(*d), target);
}

Channel channel_from_json(const nlohmann::json &j, std::vector<Alphabet> from,
                          const std::string &name) {
  try {
    std::vector<std::string> symbols;
    for (const auto &s : j.at("symbols")) symbols.push_back(s.get<std::string>());
    std::vector<double> rows;
    for (const auto &row : j.at("rows"))
      for (const auto &x : row)
        rows.push_back(x.is_string() ? parse_mass_literal(x.get<std::string>())
                                     : x.get<double>());
    return Channel(std::move(from), Alphabet(name, std::move(symbols)),
                   std::move(rows));
  } catch (const nlohmann::json::exception &e) {
    throw ParseError("channel '" + name + "': " + e.what());
  }
}

ojson search_params(const Options &o) {
  ojson p;
  p["grid"] = o.grid;
  p["restarts"] = o.restarts;
  p["seed"] = o.seed;
  p["k"] = o.k;
  return p;
}

int cmd_gk(const Options &o, std::ostream &out) {
  require(!o.input.empty(), "--input is required");
  const JointPmf p = pmf_from_json(read_json_file(o.input));
  VarList left = split(o.left, ','), right = split(o.right, ',');
  if (left.empty() && right.empty() && p.rank() == 2) {
    left = {p.names()[0]};
    right = {p.names()[1]};
  }
  require(!left.empty() && !right.empty(), "--left and --right are required");
  ojson j;
  j["command"] = "gk";
  merge_into(j, gk_json(gk_partition(p, left, right)));
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_region(const Options &o, std::ostream &out) {
  require(!o.d_list.empty(), "--D is required");
  const auto targets = parse_numbers(o.d_list, "--D");
  SearchConfig cfg;
  cfg.grid = o.grid;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.threads = o.threads;

  ojson params;
  params["method"] = o.method;
  params["D"] = ojson::array();
  for (double d : targets) params["D"].push_back(round9(d));

  std::vector<RegionFrontier> frontiers;
  ojson extra;
  if (o.method == "binary") {
    require(o.delta >= 0.0, "--rho and --delta are required");
    params["rho"] = o.rho;
    params["delta"] = o.delta;
    for (double d : targets) frontiers.push_back(binary_region(o.rho, o.delta, d));
  } else if (o.method == "star" || o.method == "qb") {
    params["search"] = search_params(o);
    for (double d : targets) {
      const SourceSpec src = load_source(o.input, d);
      RegionFrontier f = o.method == "star" ? optimize_star_region(src, o.k, cfg)
                                            : qb_region(src, cfg);
      if (f.infeasible)
        throw InfeasibleError("D = " + format9(d) +
                                  " is below the minimum achievable distortion "
                                  "D_min = " + format9(f.d_min),
                              f.d_min);
      frontiers.push_back(std::move(f));
    }
  } else if (o.method == "triple-eval") {
    require(targets.size() == 1, "triple-eval takes a single --D");
    require(!o.channels.empty(), "--channels is required for triple-eval");
    const SourceSpec src = load_source(o.input, targets[0]);
    const auto doc = read_json_file(o.channels);
    const Alphabet &s = src.source_alphabet();
    if (!doc.contains("A") || !doc.contains("B") || !doc.contains("C"))
      throw ParseError("channels document needs A, B and C");
    const Channel qa = channel_from_json(doc["A"], {s}, "A");
    const Channel qb = channel_from_json(doc["B"], {qa.to(), s}, "B");
    const Channel qc = channel_from_json(doc["C"], {qa.to(), s}, "C");
    const auto ev = eval_triple_candidate(src, qa, qb, qc);
    RegionFrontier f;
    f.D = targets[0];
    f.d_min = underline_distortion(src);
    f.points.push_back({ev.ddag, {}});
    frontiers.push_back(std::move(f));
    extra = triple_json(ev);
  } else {
    throw ParseError("unknown --method '" + o.method + "'");
  }

  const std::string csv = frontier_csv(frontiers);
  if (!o.out.empty()) {
    write_file(o.out, csv);
    write_manifest("region", params, o, csv);
  }
  for (const auto &f : frontiers) {
    double min_a = 0.0, min_b = 0.0;
    if (!f.points.empty()) {
      min_a = f.points.front().corner.a;
      min_b = f.points.back().corner.b;
    }
    out << "region method=" << o.method << " D=" << format9(f.D)
        << " corners=" << f.points.size() << " min_r_uv=" << format9(min_a)
        << " min_sum_rate=" << format9(min_b) << "\n";
  }
  if (!extra.is_null()) out << extra.dump(2) << "\n";
  if (o.out.empty()) out << csv;
  return kOk;
}

int cmd_classify(const Options &o, std::ostream &out) {
  const SourceSpec src = load_source(o.input, 0.0);
  ojson j;
  j["command"] = "classify";
  j["tol"] = o.tol;
  merge_into(j, case_report_json(classify_source(src, o.tol)));
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_prune(const Options &o, std::ostream &out) {
  require(!o.input.empty(), "--input is required");
  const MarkovFiveTuple t(pmf_from_json(read_json_file(o.input)));
  ojson params;
  params["method"] = o.method;
  params["eta"] = o.eta;
  PruneReport rep;
  if (o.method == "a") {
    const auto &a1 = t.joint().variable("A1");
    const auto &a2 = t.joint().variable("A2");
    std::vector<bool> keep(a1.size() * a2.size(), o.keep.empty());
    for (const auto &pair : split(o.keep, ',')) {
      const auto parts = split(pair, ':');
      require(parts.size() == 2, "--keep entries look like a1:a2");
      try {
        keep[a1.index_of(parts[0]) * a2.size() + a2.index_of(parts[1])] = true;
      } catch (const Error &) {
        throw ParseError("unknown symbol in --keep entry '" + pair + "'");
      }
    }
    params["keep"] = o.keep;
    rep = prune_a(t, keep, o.eta).report;
  } else if (o.method == "b") {
    require(o.delta >= 0.0, "--delta is required for method b");
    params["delta"] = o.delta;
    rep = prune_b(t, o.delta, o.eta).report;
  } else {
    throw ParseError("unknown --method '" + o.method + "'");
  }
  ojson j;
  j["command"] = "prune";
  merge_into(j, prune_report_json(rep));
  const std::string text = j.dump(2) + "\n";
  if (!o.out.empty()) {
    write_file(o.out, text);
    write_manifest("prune", params, o, text);
  }
  out << text;
  return kOk;
}

int cmd_demo(const Options &o, std::ostream &out) {
  require(!o.d_list.empty(), "--D is required");
  const auto d = parse_numbers(o.d_list, "--D");
  require(d.size() == 1, "demo takes a single --D");
  const auto deltas = parse_numbers(o.deltas, "--deltas");
  const DemoReport rep = discontinuity_demo(o.rho, d[0], deltas);
  ojson j;
  j["command"] = "demo-discontinuity";
  merge_into(j, demo_report_json(rep));
  const std::string csv = demo_csv(rep);
  if (!o.out.empty()) {
    ojson params;
    params["rho"] = o.rho;
    params["D"] = d[0];
    params["deltas"] = deltas;
    write_file(o.out, csv);
    write_manifest("demo-discontinuity", params, o, csv);
  }
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_gen(const Options &o, std::ostream &out) {
  require(o.delta >= 0.0, "--delta is required");
  const std::string text = pmf_to_json(binary_family_pmf(o.rho, o.delta)).dump(2) + "\n";
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
  return kOk;
}

} // namespace

std::string sha256_file(const std::filesystem::path &path) {
  return sha256_bytes(read_bytes(path));
}

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Rate regions with common receiver reconstructions", "crr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CRR_VERSION_STRING);
  Options o;

  auto *gk = app.add_subcommand("gk", "Common-randomness partition of a pmf");
  gk->add_option("--input", o.input, "pmf JSON file");
  gk->add_option("--left", o.left, "comma-separated left variables");
  gk->add_option("--right", o.right, "comma-separated right variables");

  auto *region = app.add_subcommand("region", "Rate-region frontier as CSV");
  region->add_option("--method", o.method, "star | qb | binary | triple-eval")
      ->required();
  region->add_option("--input", o.input, "source pmf JSON (S, U, V)");
  region->add_option("--D", o.d_list, "target distortion(s), comma-separated");
  region->add_option("--rho", o.rho);
  region->add_option("--delta", o.delta);
  region->add_option("--grid", o.grid);
  region->add_option("--restarts", o.restarts);
  region->add_option("--seed", o.seed);
  region->add_option("--k", o.k, "auxiliary alphabet size (0: |S|+2)");
  region->add_option("--threads", o.threads);
  region->add_option("--channels", o.channels, "triple-eval channel JSON");
  region->add_option("--out", o.out, "CSV output path");

  auto *classify = app.add_subcommand("classify", "Solved-case conditions");
  classify->add_option("--input", o.input)->required();
  classify->add_option("--tol", o.tol);

  auto *prune = app.add_subcommand("prune", "Prune a Markov five-tuple");
  prune->add_option("--input", o.input)->required();
  prune->add_option("--method", o.method, "a | b")->required();
  prune->add_option("--eta", o.eta)->required();
  prune->add_option("--delta", o.delta);
  prune->add_option("--keep", o.keep, "kept pairs a1:a2,... (method a)");
  prune->add_option("--out", o.out);

  auto *demo = app.add_subcommand("demo-discontinuity",
                                  "Region jump of the binary family at delta 0");
  demo->add_option("--rho", o.rho)->required();
  demo->add_option("--D", o.d_list)->required();
  demo->add_option("--deltas", o.deltas);
  demo->add_option("--out", o.out);

  auto *gen = app.add_subcommand("gen", "Doubly symmetric binary source pmf");
  gen->add_option("--rho", o.rho)->required();
  gen->add_option("--delta", o.delta)->required();
  gen->add_option("--out", o.out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kParse;
  }

  try {
    if (gk->parsed()) return cmd_gk(o, out);
    if (region->parsed()) return cmd_region(o, out);
    if (classify->parsed()) return cmd_classify(o, out);
    if (prune->parsed()) return cmd_prune(o, out);
    if (demo->parsed()) return cmd_demo(o, out);
    if (gen->parsed()) return cmd_gen(o, out);
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const DegenerateError &e) {
    err << "degenerate input: " << e.what() << "\n";
    return kDegenerate;
  } catch (const InfeasibleError &e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const PreconditionError &e) {
    err << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

} // namespace crr::cli
