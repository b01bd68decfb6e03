#pragma once

#include <vector>

#include "analyze.hpp"

namespace laxquad {

// One built-in verification fixture: a system with pinned parameters, a
// domain that avoids its singular set, expected classification, and the
// reference closed forms its computed objects must match.
struct CorpusFixture {
  std::string name;
  SystemSpec spec;
  CaseTag expected_case = CaseTag::NoQuadraticIntegral;
  std::string a_reference;        // closed form for A
  std::string b_reference;        // closed form for B (up to additive const)
  std::string u_squared_reference;  // = b_reference
  // Perturbed sibling for negative-control runs (same params/domain).
  std::string control_f;
  std::string control_g;
};

const std::vector<CorpusFixture>& corpus();

// Runs analyze on every fixture and asserts the expected case tag plus
// reference-form agreement at sampled points; throws on the first fixture
// that fails.  Returns one AnalysisResult per fixture.
std::vector<AnalysisResult> run_corpus(uint64_t seed);

// Combined machine-readable output of run_corpus (stable key order, byte
// identical for a fixed seed).
std::string corpus_json(uint64_t seed);

// Max relative deviation between a fixture's computed A (or B, up to the
// anchor constant) and its reference form over admissible sample points.
double reference_deviation_A(const CorpusFixture& fx,
                             const AnalysisResult& r, int points = 20);
double reference_deviation_B(const CorpusFixture& fx,
                             const AnalysisResult& r, int points = 20);

}  // namespace laxquad
