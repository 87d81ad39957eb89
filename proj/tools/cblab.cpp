// Command-line front end.
//
// Exit codes: 0 ok or true, 1 false, 2 parse or usage error, 3 internal
// error, 4 inexhaustive.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cblab/cbp.hpp"
#include "cblab/cover.hpp"
#include "cblab/harness.hpp"
#include "cblab/hilbert.hpp"
#include "cblab/io.hpp"

using namespace cblab;

namespace {

enum Exit { kOk = 0, kFalse = 1, kParse = 2, kInternal = 3, kInexhaustive = 4 };

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

void print_matrix(const QMatrix& m, const char* indent) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::cout << indent << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) std::cout << (c ? " " : "") << to_string(m(r, c));
    std::cout << "]\n";
  }
}

void print_cover(const CoverResult& c) {
  for (std::size_t k = 0; k < c.config.flats.size(); ++k) {
    const Flat& f = c.config.flats[k];
    std::cout << "flat " << k << " (dim " << f.proj_dim() << "), labels " << join(c.blocks[k]) << ":\n";
    print_matrix(f.basis(), "  ");
  }
  std::cout << "total dim: " << c.total_dim << "\noptimal: " << (c.optimal ? "true" : "false") << '\n';
}

const char* verdict(const std::optional<bool>& b) { return !b ? "skipped" : *b ? "true" : "false"; }

int cmd_hf(const std::string& file) {
  const auto x = read_point_set(file);
  if (x.empty()) throw ParseError("empty point set");
  const auto h = hf_full(x);
  // HF is constant from rX on; print up to rX.
  auto upto = [&](std::vector<std::size_t> v) {
    v.resize(h.reg_index + 1);
    return join(v);
  };
  std::cout << "HF: " << upto(h.values) << "; rX=" << h.reg_index << '\n';
  std::cout << "dHF: " << upto(delta_hf(h)) << '\n';
  return kOk;
}

int cmd_cbp(const std::string& file, int r, bool fast) {
  const auto x = read_point_set(file);
  if (x.empty()) throw ParseError("empty point set");
  CBPReport rep;
  try {
    rep = cbp(x, r, fast);
  } catch (const CbpDisagreement& e) {
    rep = e.report();
    std::cout << "disagreement: " << e.what() << '\n';
    std::cout << "  hf: " << verdict(rep.by_hf) << "\n  alpha: " << verdict(rep.by_alpha)
              << "\n  divisibility: " << verdict(rep.by_divisibility) << "\n  dual: " << verdict(rep.by_dual)
              << '\n';
    return kInternal;
  }
  std::cout << "CBP(" << r << "): " << (rep.verdict ? "true" : "false") << '\n';
  std::cout << "  hf: " << verdict(rep.by_hf) << "\n  alpha: " << verdict(rep.by_alpha)
            << "\n  divisibility: " << verdict(rep.by_divisibility) << "\n  dual: " << verdict(rep.by_dual)
            << '\n';
  if (rep.failing_label) std::cout << "failing point label: " << *rep.failing_label << '\n';
  if (rep.witness) {
    std::cout << "dual witness (degree " << rep.witness->degree << "):";
    for (const auto& c : rep.witness->entries) std::cout << ' ' << to_string(c);
    std::cout << '\n';
  }
  return rep.verdict ? kOk : kFalse;
}

int cmd_cover(const std::string& file, std::size_t budget, const CoverOptions& options) {
  const auto x = read_point_set(file);
  try {
    const auto c = min_cover(x, budget, options);
    if (!c) {
      std::cout << "no configuration of dimension <= " << budget << '\n';
      return kFalse;
    }
    print_cover(*c);
    return kOk;
  } catch (const InexhaustiveError& e) {
    std::cout << "inexhaustive: " << e.what() << "\ngreedy upper bound:\n";
    print_cover(e.greedy());
    return kInexhaustive;
  }
}

std::size_t arg_size(const std::vector<std::string>& spec, std::size_t i) {
  if (i >= spec.size()) throw ParseError("generate: missing argument for " + spec[0]);
  try {
    std::size_t used = 0;
    const long v = std::stol(spec[i], &used);
    if (used != spec[i].size() || v < 0) throw ParseError("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParseError("generate: not a nonnegative integer: " + spec[i]);
  }
}

Instance generate(const std::vector<std::string>& spec, std::uint64_t seed) {
  const std::string& kind = spec.at(0);
  auto need = [&](std::size_t n) {
    if (spec.size() != n + 1) throw ParseError("generate: " + kind + " takes " + std::to_string(n) + " arguments");
  };
  if (kind == "grid") {
    need(2);
    return gen_grid(arg_size(spec, 1), arg_size(spec, 2));
  }
  if (kind == "collinear") {
    need(2);
    return gen_collinear(arg_size(spec, 1), arg_size(spec, 2), seed);
  }
  if (kind == "rnc") {
    need(2);
    return gen_rnc(arg_size(spec, 1), arg_size(spec, 2), seed);
  }
  if (kind == "random") {
    if (spec.size() != 3 && spec.size() != 4) throw ParseError("generate: random takes 2 or 3 arguments");
    const long h = spec.size() == 4 ? static_cast<long>(arg_size(spec, 3)) : kDefaultHeight;
    return gen_random(arg_size(spec, 1), arg_size(spec, 2), h, seed);
  }
  if (kind == "corpus") {
    if (spec.size() != 3) throw ParseError("generate: corpus takes a kind and an index");
    const std::size_t i = arg_size(spec, 2);
    try {
      return std::move(corpus(spec[1], i + 1, seed)[i]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("generate: ") + e.what());
    }
  }
  throw ParseError("generate: unknown generator " + kind);
}

int cmd_generate(const std::vector<std::string>& spec, std::uint64_t seed, const std::string& out) {
  const Instance inst = generate(spec, seed);
  if (out.empty() || out == "-") {
    Json j = to_json(inst.point_set);
    j["provenance"] = inst.provenance;
    std::cout << j.dump(2) << '\n';
  } else {
    write_point_set(out, inst.point_set, {{"provenance", inst.provenance}});
  }
  return kOk;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

int cmd_verify(const std::string& file, std::optional<std::size_t> threads, std::optional<std::size_t> limit,
               const std::string& report) {
  Json config = read_json(file);
  if (!config.is_object()) throw ParseError("suite: configuration must be an object");
  if (threads) config["threads"] = *threads;
  if (limit) config["limit"] = *limit;
  const auto r = run_suite(config);
  if (!report.empty()) {
    std::ofstream out(report);
    if (!out) throw ParseError("cannot write " + report);
    out << report_lines(r);
  }
  std::cout << summary_table(r);
  if (r.failed) return kFalse;
  return r.inconclusive ? kInexhaustive : kOk;
}

int cmd_search(std::size_t d, std::size_t r, std::size_t trials, std::uint64_t seed, const CoverOptions& options,
               const std::string& out) {
  const auto res = counterexample_search(d, r, trials, seed, options);
  std::ostringstream lines;
  for (const auto& h : res.hits)
    lines << Json{{"candidate", {{"provenance", h.provenance}, {"points", to_json(h.point_set)}}}}.dump() << '\n';
  lines << to_json(res, d, r, seed).dump() << '\n';
  if (out.empty() || out == "-") {
    std::cout << lines.str();
  } else {
    std::ofstream f(out);
    if (!f) throw ParseError("cannot write " + out);
    f << lines.str();
    std::cout << res.trials << " trials, " << res.candidates << " candidates, " << res.hits.size() << " hits, "
              << res.inconclusive.size() << " inconclusive\n";
  }
  if (!res.hits.empty()) return kFalse;
  return res.inconclusive.empty() ? kOk : kInexhaustive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert functions, Cayley-Bacharach properties and plane-configuration covers"};
  app.require_subcommand(1);

  std::string file, out, report;
  int r = 0;
  bool fast = false;
  std::size_t budget = 0, d = 0, rr = 0, trials = 1000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> limit, threads;
  std::vector<std::string> spec;

  auto* hf = app.add_subcommand("hf", "Hilbert function, its differences and rX");
  hf->add_option("file", file, "point-set JSON")->required();

  auto* cb = app.add_subcommand("cbp", "Cayley-Bacharach property in degree r, by all four methods");
  cb->add_option("file", file, "point-set JSON")->required();
  cb->add_option("--r", r, "degree")->required()->check(CLI::NonNegativeNumber);
  cb->add_flag("--fast", fast, "Hilbert-function method only");

  auto* cv = app.add_subcommand("cover", "minimal plane configuration of dimension at most the budget");
  cv->add_option("file", file, "point-set JSON")->required();
  cv->add_option("--budget", budget, "largest total dimension")->required();
  cv->add_option("--limit", limit, "exhaustive search size limit");

  auto* gen = app.add_subcommand("generate", "write a generated instance");
  gen->add_option("spec", spec,
                  "grid D E | collinear S N | rnc S N | random N SIZE [HEIGHT] | corpus KIND INDEX")
      ->required();
  gen->add_option("--seed", seed, "seed");
  gen->add_option("-o,--output", out, "output file (stdout by default)");

  auto* ver = app.add_subcommand("verify", "run a suite configuration");
  ver->add_option("config", file, "suite-config JSON")->required();
  ver->add_option("--threads", threads, "worker threads");
  ver->add_option("--limit", limit, "exhaustive search size limit");
  ver->add_option("--report", report, "write JSON lines here");

  auto* se = app.add_subcommand("search", "look for counterexamples to the dimension-d statement");
  se->add_option("d", d, "configuration dimension")->required();
  se->add_option("r", rr, "CBP degree")->required();
  se->add_option("--trials", trials, "number of candidates");
  se->add_option("--seed", seed, "seed");
  se->add_option("--limit", limit, "exhaustive search size limit");
  se->add_option("-o,--output", out, "write JSON lines here (stdout by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  CoverOptions options;
  if (limit) options.exhaustive_limit = *limit;

  try {
    if (*hf) return cmd_hf(file);
    if (*cb) return cmd_cbp(file, r, fast);
    if (*cv) return cmd_cover(file, budget, options);
    if (*gen) return cmd_generate(spec, seed, out);
    if (*ver) return cmd_verify(file, threads, limit, report);
    if (*se) return cmd_search(d, rr, trials, seed, options, out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
