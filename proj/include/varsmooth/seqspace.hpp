#pragma once

#include <string>

#include "varsmooth/util.hpp"

namespace vs {

// Nested weighted sequence space on a finite truncation: outer levels j=1..J
// with weights beta_j, inner index sets of size M_j with weights w_{j,m}.
struct SeqSpace {
  double p = 2, q = 2;
  std::vector<double> beta;              // size J
  std::vector<std::vector<double>> w;    // w[j] has M_j entries

  int J() const { return static_cast<int>(beta.size()); }
  void validate() const;
};

using CoeffBundle = std::vector<std::vector<double>>;  // a[j][m]

double seq_norm(const CoeffBundle& a, const SeqSpace& sp);

struct EmbeddingReport {
  double p_star = kInf, q_star = kInf;
  double criterion = 0;          // the double-sum value (or sup form)
  bool continuous = false;
  bool compact = false;
  bool asymptotic_inferred = false;  // limit conditions judged by trend
  double limit_head = 0, limit_tail = 0;
};
EmbeddingReport embedding_criterion(const SeqSpace& s1, const SeqSpace& s2);

double brute_force_operator_norm(const SeqSpace& s1, const SeqSpace& s2, int trials,
                                 uint64_t seed);

void write_seqspace(const SeqSpace& sp, const std::string& path);
SeqSpace read_seqspace(const std::string& path);

}  // namespace vs
