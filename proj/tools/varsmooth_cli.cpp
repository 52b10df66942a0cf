// Batch experiment runner: norms, equivalence sweeps, decomposition round
// trips, weight-class diagnostics, trace experiments, embedding checks.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "varsmooth/atomic.hpp"
#include "varsmooth/norms.hpp"
#include "varsmooth/seqspace.hpp"
#include "varsmooth/suite.hpp"
#include "varsmooth/testfamilies.hpp"
#include "varsmooth/traceext.hpp"

namespace {

using namespace vs;

double parse_exponent(const std::string& s) {
  if (s == "inf") return kInf;
  return std::stod(s);
}

// weight spec: const:s=..., power:s=...,beta=...,d=..., prodpow:exp=...,l=...,
// or file:path
MultiSeq parse_weights(const std::string& spec, int n, double p, int K) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::istringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) kv[item] = "";
      else kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto get = [&](const std::string& key, double dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : std::stod(it->second);
  };
  if (kind == "const") return weight_constant(n, p, K, get("s", 1.0));
  if (kind == "power")
    return weight_power_generated(n, static_cast<int>(get("d", 1)), p, K, get("s", 1.0),
                                  get("beta", 1.0));
  if (kind == "prodpow") {
    MultiSeq gh = generate_from_weight(gamma_p_product_power(get("exp", -0.8)), n,
                                       static_cast<int>(get("d", 1)), p, K, 4, 32);
    int l = static_cast<int>(get("l", 2));
    for (int k = 0; k <= gh.K; ++k) {
      double f = std::pow(2.0, k * l);
      for (double& v : gh.level[k]) v *= f;
    }
    return gh;
  }
  if (kind == "file") return read_multiseq(spec.substr(colon + 1));
  throw CLI::ValidationError("weights", "unknown weight spec: " + spec);
}

void write_breakdown_csv(std::ostream& os, const std::vector<NormBreakdown>& nbs) {
  os << "variant,k,term,total\n";
  for (const auto& nb : nbs) {
    os << nb.variant << ",-1," << format_g17(nb.zero_term) << ',' << format_g17(nb.total) << "\n";
    for (size_t k = 0; k < nb.level_terms.size(); ++k)
      os << nb.variant << ',' << k << ',' << format_g17(nb.level_terms[k]) << ','
         << format_g17(nb.total) << "\n";
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-smoothness function space toolkit"};
  app.set_config("--config");

  int threads = 0;
  app.add_option("--threads", threads, "worker thread bound (default: VARSMOOTH_THREADS or all)");

  std::string in_path, out_path = "-", weights = "const:s=1.0";
  int l = 2, Kwork = 3, Kmax = 6, n = 1, seed = 7;
  std::string p_s = "2", q_s = "2", r_s = "2";
  double cdil = 2.0;

  auto add_common = [&](CLI::App* sub, bool needs_in) {
    if (needs_in) sub->add_option("--in", in_path, "input file")->required();
    sub->add_option("--out", out_path, "output file (- for stdout)");
    sub->add_option("--weights", weights, "weight spec (const:s=..., power:..., prodpow:..., file:path)");
    sub->add_option("--l", l, "difference/spline order");
    sub->add_option("--p", p_s, "integrability exponent (or inf)");
    sub->add_option("--q", q_s, "summability exponent (or inf)");
    sub->add_option("--r", r_s, "local metric exponent (or inf)");
    sub->add_option("--K", Kwork, "working level count");
    sub->add_option("--Kmax", Kmax, "sample resolution level");
    sub->add_option("--c", cdil, "cube dilation for variant norms");
    sub->add_option("--seed", seed, "random seed");
  };

  auto* cmd_norm = app.add_subcommand("norm", "norm breakdowns for a sampled function");
  add_common(cmd_norm, true);

  auto* cmd_equiv = app.add_subcommand("equiv", "pairwise ratio table across a random family");
  add_common(cmd_equiv, false);
  int family = 20;
  cmd_equiv->add_option("--family", family, "family size");

  auto* cmd_decomp = app.add_subcommand("decompose", "atomic decomposition of a sampled function");
  add_common(cmd_decomp, true);
  std::string series_out = "series.vsss";
  cmd_decomp->add_option("--series", series_out, "output series file");

  auto* cmd_recon = app.add_subcommand("reconstruct", "partial-sum reconstruction of a series");
  cmd_recon->add_option("--in", in_path, "input series")->required();
  cmd_recon->add_option("--out", out_path, "output grid file");
  int Jtrunc = 99;
  cmd_recon->add_option("--J", Jtrunc, "truncation level");
  cmd_recon->add_option("--Kmax", Kmax, "sample resolution");

  auto* cmd_snum = app.add_subcommand("snumbers", "spline approximation numbers");
  add_common(cmd_snum, true);

  auto* cmd_wc = app.add_subcommand("weightclass", "growth/oscillation class diagnostics");
  add_common(cmd_wc, false);
  std::string sigma1_s = "inf", sigma2_s = "2";
  cmd_wc->add_option("--sigma1", sigma1_s, "first moment exponent (or inf)");
  cmd_wc->add_option("--sigma2", sigma2_s, "second moment exponent (or inf)");
  cmd_wc->add_option("--n", n, "dimension");

  auto* cmd_deltas = app.add_subcommand("deltas", "decay exponents of a generated sequence");
  add_common(cmd_deltas, false);
  std::string gamma_spec = "ones";
  int annulus_d = 1;
  cmd_deltas->add_option("--gamma", gamma_spec, "ones | firstpow:beta=... | prodpow:exp=...");
  cmd_deltas->add_option("--d", annulus_d, "annulus dimension");
  cmd_deltas->add_option("--n", n, "in-plane dimension");

  auto* cmd_hardy = app.add_subcommand("hardy", "weighted sequence inequality sweep");
  std::string branch = "tail";
  double beta = 1.0, mu = 1.0, lambda = 2.0;
  int trials = 1000;
  cmd_hardy->add_option("--branch", branch, "tail | head");
  cmd_hardy->add_option("--beta", beta);
  cmd_hardy->add_option("--mu", mu);
  cmd_hardy->add_option("--q", q_s);
  cmd_hardy->add_option("--lambda", lambda);
  cmd_hardy->add_option("--trials", trials);
  cmd_hardy->add_option("--seed", seed);
  cmd_hardy->add_option("--out", out_path);

  auto* cmd_embed = app.add_subcommand("embed", "sequence-space embedding check");
  std::string space1, space2;
  cmd_embed->add_option("--space1", space1, "first space file")->required();
  cmd_embed->add_option("--space2", space2, "second space file")->required();
  cmd_embed->add_option("--trials", trials);
  cmd_embed->add_option("--seed", seed);
  cmd_embed->add_option("--out", out_path);

  auto* cmd_trace = app.add_subcommand("trace", "restrict a series to the plane x''=0");
  cmd_trace->add_option("--in", in_path, "input series")->required();
  int nprime = 1;
  cmd_trace->add_option("--nprime", nprime, "retained dimensions");
  cmd_trace->add_option("--out", out_path, "output series file");
  cmd_trace->add_option("--weights", weights);
  cmd_trace->add_option("--p", p_s);
  cmd_trace->add_option("--q", q_s);

  auto* cmd_ext = app.add_subcommand("extend", "extend a plane series into the ambient space");
  cmd_ext->add_option("--in", in_path, "input series")->required();
  cmd_ext->add_option("--n", n, "ambient dimension");
  cmd_ext->add_option("--out", out_path, "output series file");

  auto* cmd_sob = app.add_subcommand("sobolev-ext", "extend a plane function into the slab");
  cmd_sob->add_option("--in", in_path, "input grid function")->required();
  cmd_sob->add_option("--l", l, "operator order");
  cmd_sob->add_option("--K", Kwork, "number of dyadic scales");
  int Ky = 5;
  cmd_sob->add_option("--Ky", Ky, "slab resolution in the normal direction");
  cmd_sob->add_option("--out", out_path, "output slab file");

  auto* cmd_gen = app.add_subcommand("gen", "sample a named field into a grid file");
  std::string field = "smooth";
  cmd_gen->add_option("--field", field, "smooth | piecewise | poly:<degree> | bump");
  cmd_gen->add_option("--n", n, "dimension");
  cmd_gen->add_option("--Kmax", Kmax, "resolution level");
  cmd_gen->add_option("--seed", seed);
  cmd_gen->add_option("--out", out_path)->required();

  auto* cmd_suite = app.add_subcommand("suite", "run the verification suite (pinned seeds)");
  bool quick = false;
  cmd_suite->add_flag("--quick", quick, "reduced family sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit cleanly, bad config exits 1
  }

  if (threads > 0) {
    setenv("VARSMOOTH_THREADS", std::to_string(threads).c_str(), 1);
  }

  try {
    double p = parse_exponent(p_s), q = parse_exponent(q_s), r = parse_exponent(r_s);
    BesovParams bp;
    bp.l = l;
    bp.p = p;
    bp.q = q;
    bp.r = r;
    bp.c = cdil;

    std::ofstream file_out;
    std::ostream* osp = &std::cout;
    auto select_out = [&]() -> std::ostream& {
      if (out_path != "-") {
        file_out = open_out(out_path);
        osp = &file_out;
      }
      return *osp;
    };

    if (*cmd_norm) {
      GridFunction g = read_gridfn(in_path);
      MultiSeq ms = parse_weights(weights, g.n, p, Kwork);
      WeightSequence ws = bar_sequence(ms, g.K);
      std::vector<NormBreakdown> nbs;
      nbs.push_back(norm_bbar(g, ws, bp));
      nbs.push_back(norm_btilde(g, ws, bp));
      nbs.push_back(norm_seq(g, ms, bp));
      nbs.push_back(norm_variant(g, ms, bp, NormVariant::V2));
      nbs.push_back(norm_variant(g, ms, bp, NormVariant::V3));
      nbs.push_back(norm_variant(g, ms, bp, NormVariant::V4));
      write_breakdown_csv(select_out(), nbs);
    } else if (*cmd_equiv) {
      MultiSeq ms = parse_weights(weights, n, p, Kwork);
      Rng rng(seed);
      auto& os = select_out();
      os << "fn,seq,v2,v3,v4\n";
      for (int f = 0; f < family; ++f) {
        GridFunction g = sample(random_piecewise_smooth_field(rng, n), n, Kmax);
        os << f << ',' << format_g17(norm_seq(g, ms, bp).total) << ','
           << format_g17(norm_variant(g, ms, bp, NormVariant::V2).total) << ','
           << format_g17(norm_variant(g, ms, bp, NormVariant::V3).total) << ','
           << format_g17(norm_variant(g, ms, bp, NormVariant::V4).total) << "\n";
      }
    } else if (*cmd_decomp) {
      GridFunction g = read_gridfn(in_path);
      MultiSeq ms = parse_weights(weights, g.n, p, Kwork);
      DecomposeReport rep = decompose(g, ms, bp);
      write_series(rep.series, series_out);
      auto& os = select_out();
      os << "k,mass\n";
      for (size_t k = 0; k < rep.level_masses.size(); ++k)
        os << k << ',' << format_g17(rep.level_masses[k]) << "\n";
      os << "recon_error," << format_g17(rep.recon_error) << "\n";
      if (!rep.gate_ok) os << "warning," << rep.gate_message << "\n";
    } else if (*cmd_recon) {
      SplineSeries s = read_series(in_path);
      GridFunction g = reconstruct(s, Jtrunc, Kmax);
      if (out_path == "-") out_path = "recon.vsgf";
      write_gridfn(g, out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (*cmd_snum) {
      GridFunction g = read_gridfn(in_path);
      MultiSeq ms = parse_weights(weights, g.n, p, Kwork);
      SNumbers sn = spline_approx_numbers(g, ms, bp);
      auto& os = select_out();
      os << "k,s,exact\n";
      for (int k = -1; k <= ms.K; ++k)
        os << k << ',' << format_g17(sn.value(k)) << ',' << (sn.exact ? 1 : 0) << "\n";
    } else if (*cmd_wc) {
      MultiSeq ms = parse_weights(weights, n, p, Kwork);
      ClassReport rep = check_X_class(ms, p, parse_exponent(sigma1_s), parse_exponent(sigma2_s));
      auto& os = select_out();
      os << "alpha1,alpha2,alpha3,C1,C2,verdict\n";
      os << format_g17(rep.alpha1) << ',' << format_g17(rep.alpha2) << ','
         << format_g17(rep.alpha3) << ',' << format_g17(rep.C1) << ',' << format_g17(rep.C2)
         << ',' << (rep.verdict ? 1 : 0) << "\n";
    } else if (*cmd_deltas) {
      FieldNd gp = gamma_p_ones();
      if (gamma_spec.rfind("firstpow", 0) == 0) {
        double b = std::stod(gamma_spec.substr(gamma_spec.find('=') + 1));
        gp = gamma_p_first_axis_power(b);
      } else if (gamma_spec.rfind("prodpow", 0) == 0) {
        double e = std::stod(gamma_spec.substr(gamma_spec.find('=') + 1));
        gp = gamma_p_product_power(e);
      }
      MultiSeq gh = generate_from_weight(gp, n, annulus_d, p, Kwork);
      DeltaExponents de = estimate_deltas(gh, p, annulus_d);
      auto& os = select_out();
      os << "delta1,delta1_ambient,delta2,delta3,residual1,residual2\n";
      os << format_g17(de.delta1) << ',' << format_g17(de.delta1_ambient) << ','
         << format_g17(de.delta2) << ',' << format_g17(de.delta3) << ','
         << format_g17(de.residual1) << ',' << format_g17(de.residual2) << "\n";
    } else if (*cmd_hardy) {
      HardyBranch br = branch == "head" ? HardyBranch::Head : HardyBranch::Tail;
      Rng rng(seed);
      double q = parse_exponent(q_s);
      double worst = 0;
      for (int t = 0; t < trials; ++t) {
        std::vector<double> a(40);
        double decay = rng.uniform(0.2, 1.5);
        for (size_t k = 0; k < a.size(); ++k)
          a[k] = rng.uniform(-1, 1) * std::pow(2.0, -decay * k);
        HardyResult hr = hardy_check(a, q, mu, beta, lambda, br);
        worst = std::max(worst, hr.ratio);
      }
      auto& os = select_out();
      os << "branch,beta,mu,q,lambda,fitted_C,verdict\n";
      os << branch << ',' << format_g17(beta) << ',' << format_g17(mu) << ',' << q_s << ','
         << format_g17(lambda) << ',' << format_g17(worst) << ','
         << (std::isfinite(worst) ? 1 : 0) << "\n";
    } else if (*cmd_embed) {
      SeqSpace s1 = read_seqspace(space1), s2 = read_seqspace(space2);
      EmbeddingReport rep = embedding_criterion(s1, s2);
      double bf = brute_force_operator_norm(s1, s2, trials, seed);
      auto& os = select_out();
      os << "continuous,compact,criterion,brute_force,asymptotic_inferred\n";
      os << rep.continuous << ',' << rep.compact << ',' << format_g17(rep.criterion) << ','
         << format_g17(bf) << ',' << rep.asymptotic_inferred << "\n";
    } else if (*cmd_trace) {
      SplineSeries s = read_series(in_path);
      PlaneSpec ps{s.n, nprime};
      SplineSeries tr = besov_trace(s, ps);
      if (out_path == "-") out_path = "trace.vsss";
      write_series(tr, out_path);
      MultiSeq ms = parse_weights(weights, s.n, p, s.K());
      MultiSeq msp = trace_multiseq(ms, nprime);
      std::vector<double> full, traced;
      for (int k = 0; k <= s.K(); ++k) {
        full.push_back(level_coefficient_mass(s.levels[k], ms, k, p));
        traced.push_back(level_coefficient_mass(tr.levels[k], msp, k, p));
      }
      double mf = lp_aggregate(full, q), mt = lp_aggregate(traced, q);
      std::cout << "wrote " << out_path << "\n";
      std::cout << "mass_full," << format_g17(mf) << "\n";
      std::cout << "mass_trace," << format_g17(mt) << "\n";
      std::cout << "ratio," << format_g17(mf > 0 ? mt / mf : 0) << "\n";
    } else if (*cmd_ext) {
      SplineSeries s = read_series(in_path);
      PlaneSpec ps{n, s.n};
      SplineSeries ex = besov_extend(s, ps);
      if (out_path == "-") out_path = "extend.vsss";
      write_series(ex, out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (*cmd_sob) {
      GridFunction g = read_gridfn(in_path);
      AveragingOp ao = make_averaging_op(l);
      SlabFn f = sobolev_extend(g, l, Kwork, ao, Ky);
      if (out_path == "-") out_path = "slab.vsgf";
      write_slab(f, out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (*cmd_gen) {
      Rng rng(seed);
      Field f;
      if (field == "smooth") f = random_smooth_field(rng, n);
      else if (field == "piecewise") f = random_piecewise_smooth_field(rng, n);
      else if (field.rfind("poly:", 0) == 0)
        f = random_polynomial_field(rng, n, std::stoi(field.substr(5)));
      else if (field == "bump")
        f = [](const RVec& x) { return std::exp(-30 * (x[0] - 0.5) * (x[0] - 0.5)); };
      else throw std::runtime_error("unknown field spec: " + field);
      write_gridfn(sample(f, n, Kmax), out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (*cmd_suite) {
      SuiteOptions opt;
      opt.quick = quick;
      int fails = run_acceptance_suite(std::cout, opt);
      return fails == 0 ? 0 : 2;
    } else {
      std::cout << app.help();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
