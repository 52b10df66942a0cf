#include "varsmooth/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vs {

void SeqSpace::validate() const {
  if (w.size() != beta.size()) throw std::runtime_error("SeqSpace: level count mismatch");
  for (double b : beta)
    if (!(b > 0)) throw std::runtime_error("SeqSpace: non-positive outer weight");
  for (const auto& row : w)
    for (double x : row)
      if (!(x > 0)) throw std::runtime_error("SeqSpace: non-positive inner weight");
}

double seq_norm(const CoeffBundle& a, const SeqSpace& sp) {
  if (a.size() != sp.w.size()) throw std::invalid_argument("seq_norm: index mismatch");
  std::vector<double> outer;
  for (size_t j = 0; j < a.size(); ++j) {
    if (a[j].size() != sp.w[j].size()) throw std::invalid_argument("seq_norm: index mismatch");
    double inner;
    if (is_inf(sp.p)) {
      inner = 0;
      for (size_t m = 0; m < a[j].size(); ++m)
        inner = std::max(inner, sp.w[j][m] * std::fabs(a[j][m]));
    } else {
      double s = 0;
      for (size_t m = 0; m < a[j].size(); ++m)
        s += std::pow(sp.w[j][m] * std::fabs(a[j][m]), sp.p);
      inner = std::pow(s, 1.0 / sp.p);
    }
    outer.push_back(sp.beta[j] * inner);
  }
  return lp_aggregate(outer, sp.q);
}

EmbeddingReport embedding_criterion(const SeqSpace& s1, const SeqSpace& s2) {
  if (s1.J() != s2.J()) throw std::invalid_argument("embedding_criterion: level mismatch");
  EmbeddingReport rep;
  double inv_p = std::max(0.0, (is_inf(s2.p) ? 0.0 : 1.0 / s2.p) - (is_inf(s1.p) ? 0.0 : 1.0 / s1.p));
  double inv_q = std::max(0.0, (is_inf(s2.q) ? 0.0 : 1.0 / s2.q) - (is_inf(s1.q) ? 0.0 : 1.0 / s1.q));
  rep.p_star = inv_p > 0 ? 1.0 / inv_p : kInf;
  rep.q_star = inv_q > 0 ? 1.0 / inv_q : kInf;

  int J = s1.J();
  std::vector<double> per_level(J);
  for (int j = 0; j < J; ++j) {
    double inner;
    if (is_inf(rep.p_star)) {
      inner = 0;
      for (size_t m = 0; m < s1.w[j].size(); ++m)
        inner = std::max(inner, s2.w[j][m] / s1.w[j][m]);
    } else {
      double s = 0;
      for (size_t m = 0; m < s1.w[j].size(); ++m)
        s += std::pow(s2.w[j][m] / s1.w[j][m], rep.p_star);
      inner = std::pow(s, 1.0 / rep.p_star);
    }
    per_level[j] = (s2.beta[j] / s1.beta[j]) * inner;
  }
  rep.criterion = is_inf(rep.q_star) ? *std::max_element(per_level.begin(), per_level.end())
                                     : lp_aggregate(per_level, rep.q_star);

  // finiteness on a truncation is judged by the per-level trend: the last
  // quartile must not carry growing mass
  bool finite;
  {
    int q1 = std::max(1, J / 4);
    if (is_inf(rep.q_star)) {
      // the sup form is finite iff the level ratios stay bounded
      double head = 0, tail = 0;
      for (int j = 0; j < q1; ++j) head = std::max(head, per_level[j]);
      for (int j = J - q1; j < J; ++j) tail = std::max(tail, per_level[j]);
      finite = tail <= head * (1 + 1e-9) + 1e-300;
      rep.limit_head = head;
      rep.limit_tail = tail;
    } else {
      double head = 0, tail = 0;
      for (int j = 0; j < q1; ++j) head += std::pow(per_level[j], rep.q_star);
      for (int j = J - q1; j < J; ++j) tail += std::pow(per_level[j], rep.q_star);
      finite = tail <= 0.5 * head + 1e-300;
      rep.limit_head = head;
      rep.limit_tail = tail;
    }
    rep.asymptotic_inferred = true;
  }
  rep.continuous = finite;

  bool compact = finite;
  if (is_inf(rep.q_star)) {
    // per-level values must decay to zero
    int q1 = std::max(1, J / 4);
    double head = 0, tail = 0;
    for (int j = 0; j < q1; ++j) head = std::max(head, per_level[j]);
    for (int j = J - q1; j < J; ++j) tail = std::max(tail, per_level[j]);
    compact = compact && tail <= 0.5 * head;
    rep.asymptotic_inferred = true;
    rep.limit_head = head;
    rep.limit_tail = tail;
  }
  if (is_inf(rep.p_star)) {
    // inner weight ratios must diverge along every level
    for (int j = 0; j < J && compact; ++j) {
      size_t M = s1.w[j].size();
      size_t q1 = std::max<size_t>(1, M / 4);
      double head = 0, tail = kInf;
      for (size_t m = 0; m < q1; ++m) head = std::max(head, s1.w[j][m] / s2.w[j][m]);
      for (size_t m = M - q1; m < M; ++m) tail = std::min(tail, s1.w[j][m] / s2.w[j][m]);
      if (!(tail >= 2.0 * head)) compact = false;
    }
    rep.asymptotic_inferred = true;
  }
  rep.compact = compact;
  return rep;
}

double brute_force_operator_norm(const SeqSpace& s1, const SeqSpace& s2, int trials,
                                 uint64_t seed) {
  int J = s1.J();
  double best = 0;
  // single-coordinate extremizers
  for (int j = 0; j < J; ++j) {
    for (size_t m = 0; m < s1.w[j].size(); ++m) {
      double n1 = s1.beta[j] * s1.w[j][m];
      double n2 = s2.beta[j] * s2.w[j][m];
      best = std::max(best, n2 / n1);
    }
  }
  // random bundles, deterministically partitioned
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    CoeffBundle a(J);
    int mode = rng.uniform_int(0, 2);
    for (int j = 0; j < J; ++j) {
      a[j].resize(s1.w[j].size());
      for (size_t m = 0; m < a[j].size(); ++m) {
        double g = rng.normal();
        if (mode == 1) g /= s1.w[j][m];                    // flatten inner weights
        if (mode == 2) g /= (s1.beta[j] * s1.w[j][m]);     // flatten both
        a[j][m] = g;
      }
    }
    double n1 = seq_norm(a, s1);
    if (n1 > 0) best = std::max(best, seq_norm(a, s2) / n1);
  }
  return best;
}

void write_seqspace(const SeqSpace& sp, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_seqspace: cannot open " + path);
  f << "VSQS1\n";
  auto num = [](double x) { return is_inf(x) ? std::string("inf") : format_g17(x); };
  f << sp.J() << ' ' << num(sp.p) << ' ' << num(sp.q) << "\n";
  for (int j = 0; j < sp.J(); ++j) f << (j + 1) << ' ' << format_g17(sp.beta[j]) << "\n";
  for (int j = 0; j < sp.J(); ++j)
    for (size_t m = 0; m < sp.w[j].size(); ++m)
      f << (j + 1) << ' ' << m << ' ' << format_g17(sp.w[j][m]) << "\n";
}

SeqSpace read_seqspace(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_seqspace: cannot open " + path);
  std::string magic;
  std::getline(f, magic);
  if (magic != "VSQS1") throw std::runtime_error("read_seqspace: bad magic");
  int J;
  std::string ps, qs;
  f >> J >> ps >> qs;
  SeqSpace sp;
  sp.p = (ps == "inf") ? kInf : std::stod(ps);
  sp.q = (qs == "inf") ? kInf : std::stod(qs);
  sp.beta.assign(J, 0.0);
  sp.w.assign(J, {});
  for (int i = 0; i < J; ++i) {
    int j;
    double b;
    f >> j >> b;
    sp.beta[j - 1] = b;
  }
  int j, m;
  double v;
  while (f >> j >> m >> v) {
    if (static_cast<int>(sp.w[j - 1].size()) <= m) sp.w[j - 1].resize(m + 1);
    sp.w[j - 1][m] = v;
  }
  sp.validate();
  return sp;
}

}  // namespace vs
