#pragma once

#include <span>
#include <vector>

#include "hss/rate_engine.hpp"

namespace hss {

/// One (SU, CU) entry of a feature vector, both terms already weighted
/// by 1/N'_s and 1/N'_c respectively.
struct FeatureBlock {
  double su_gain_term = 0.0;
  double cu_gain_term = 0.0;
  bool interference_infeasible = false;  // max interference-safe power is below the QoS power
};

/// Direct evaluation of one block for SU u served by satellite j, against CU `cu`.
///
/// SU term: rate gain over the QoS baseline at the largest power that keeps
/// the CU at the interference threshold (capped at P_su; zero when that
/// power is below the QoS power). CU term: rate gain over the threshold
/// baseline when the SU transmits at its QoS power.
FeatureBlock feature_block(const RateEngine& engine, int u, int j, int cu);

/// Unweighted rate deltas for every (SU, satellite, CU) triple, computed
/// once per rate engine and reused by every feature query.
class PairwiseDeltas {
 public:
  ///
  /// SU terms do not depend on the BS transmit power; passing deltas built
  /// for another BS power on the same channel realisation skips recomputing them.
  static PairwiseDeltas compute(const RateEngine& engine, int threads = 1,
                                const PairwiseDeltas* reuse_su_terms = nullptr);

  int sus() const { return sus_; }
  int satellites() const { return satellites_; }
  int cus() const { return cus_; }

  double su_delta(int u, int j, int cu) const { return su_[index(u, j, cu)]; }
  double cu_delta(int u, int j, int cu) const { return cu_[index(u, j, cu)]; }
  bool infeasible(int u, int j, int cu) const { return infeasible_[index(u, j, cu)] != 0; }

 private:
  std::size_t index(int u, int j, int cu) const {
    return (static_cast<std::size_t>(u) * static_cast<std::size_t>(satellites_) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(cus_) +
           static_cast<std::size_t>(cu);
  }
  int sus_ = 0;
  int satellites_ = 0;
  int cus_ = 0;
  std::vector<double> su_;
  std::vector<double> cu_;
  std::vector<unsigned char> infeasible_;
};

/// Feature vector of one SU-satellite link: F sub-vectors, each holding the
/// blocks of the I_cl * N_c CUs of colour r in (i, v) order, flattened as
/// [su_term, cu_term] pairs (or cu_term only for the reduced variant).
struct FeatureVector {
  int reuse_factor = 1;
  int scalars_per_sub = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::span<const double> sub(int r) const {
    return {values.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(scalars_per_sub),
            static_cast<std::size_t>(scalars_per_sub)};
  }
};

/// Weighted view of PairwiseDeltas for a given topology labelling.
class FeatureTable {
 public:
  FeatureTable(const Scenario& scenario, const PairwiseDeltas& deltas);

  const Scenario& scenario() const { return *scenario_; }
  const PairwiseDeltas& deltas() const { return *deltas_; }

  FeatureBlock block(int u, int j, int cu) const;

  /// Full feature vector of SU u on satellite j.
  FeatureVector vector(int u, int j) const;
  /// Sub-vector r of SU u on satellite j, flattened.
  std::vector<double> sub_vector(int u, int j, int r) const;
  /// Reduced sub-vector holding only CU terms.
  std::vector<double> partial_sub_vector(int u, int j, int r) const;

  /// Sum over the CUs of colour r of (w1 * su_term + cu_term).
  double group_value(int u, int j, int r, double w1) const;

 private:
  const Scenario* scenario_;
  const PairwiseDeltas* deltas_;
};

/// Reduced feature vector with CU terms only, for SU u on satellite j.
FeatureVector partial_feature_vector(const FeatureTable& table, int u, int j);

/// Sum of absolute differences; throws std::invalid_argument on length mismatch.
double l1_distance(std::span<const double> a, std::span<const double> b);

/// Product of L1 distances from `candidate` to every chosen vector.
double compound_distance(std::span<const double> candidate, const std::vector<std::span<const double>>& chosen);

}  // namespace hss
