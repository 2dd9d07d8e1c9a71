#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elkbc/trainer.hpp"

namespace elkbc {

/// The protein-function ontology: {GO1} ⊓ {GO2} ⊑ ⊥, A ⊓ B ⊑ ⊥,
/// ∃has_function.{GO1} ⊑ B, ∃has_function.{GO2} ⊑ A, plus (optionally)
/// {P_i} ⊑ ∃has_function.{GO1} and {Q_i} ⊑ ∃has_function.{GO2} for
/// i = 1..5.
Theory toy_protein_theory(bool with_proteins = true);

/// One geometric condition of the intended model, read as lhs ≤ rhs.
struct GeometryCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Conditions checked on a trained toy model, each with slack `tol`:
///  - the {GO1} and {GO2} regions are disjoint,
///  - every {Q_i} translated by has_function lies inside {GO2},
///  - {GO2} translated back by has_function meets A.
/// For ELEm these are ‖c_GO1 − c_GO2‖ ≥ r_GO1 + r_GO2 − tol,
/// ‖c_Qi + v − c_GO2‖ + r_Qi ≤ r_GO2 + tol and
/// ‖c_GO2 − v − c_A‖ ≤ r_GO2 + r_A + tol. Box models use the matching box
/// conditions (Box²EL via head/tail boxes and bumps).
std::vector<GeometryCheck> toy_assertions(const GeometricModel& m, const Theory& toy, double tol = 0.05);

bool all_pass(const std::vector<GeometryCheck>& checks);

struct ToyRegime {
  NegativeScope scope;
  SamplerMode sampling;
  std::string name() const;  // e.g. "all-forms_filtered"
};

/// The training setup used for the toy runs: n = 2, learning rate 0.01,
/// ε = 0.1, 3000 epochs, plateau patience 300 without early stopping, one
/// negative per positive.
TrainConfig toy_train_config(ModelKind kind, const ToyRegime& regime, std::uint64_t seed);

struct ToyRun {
  ToyRegime regime;
  GeometricModel model;
  TrainLog log;
  double final_positive_loss = 0.0;
  std::vector<GeometryCheck> checks;
};

/// Trains the toy ontology under one regime.
ToyRun run_toy_regime(ModelKind kind, const ToyRegime& regime, std::uint64_t seed);

/// The four regimes: {gci2-only, all-forms} × {random, filtered}.
std::vector<ToyRegime> toy_regimes();

/// Plot-ready CSV, one row per concept: name, kind, center coordinates,
/// radius (ELEm) or offsets (boxes).
std::string concepts_csv(const GeometricModel& m, const Signature& sig);
/// One row per role: name then the role vector (ELEm/ELBE) or the head and
/// tail box coordinates (Box²EL).
std::string roles_csv(const GeometricModel& m, const Signature& sig);

}  // namespace elkbc
