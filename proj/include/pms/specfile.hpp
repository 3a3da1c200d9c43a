#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pms/model.hpp"

namespace pms {

/// Evaluation options carried by a system spec file; command-line flags
/// override individual fields.
struct RunOptions {
  bool relax_exponential = false;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int grid_points = 101;
  int threads = 1;
};

struct ParsedSpec {
  PhasedSystem system;
  RunOptions options;
};

/**
 * Parses the textual system format (see README for the grammar):
 *
 *   type NAME phase_hazard RATE...           # or global exponential/weibull,
 *   type NAME phase_conditional LAW...       # or per-phase conditional laws
 *   component NAME TYPE
 *   boundaries T0 T1 ... TN
 *   phase I components NAME... structure EXPR
 *   option KEY VALUE
 *
 * Structure expressions are prefix-notation: comp NAME, and(...), or(...),
 * koutofn(K, comp A, comp B, ...).  Syntax errors carry line/column and the
 * offending token (ParseError).
 */
ParsedSpec parse_spec(std::istream& in);
ParsedSpec parse_spec_file(const std::string& path);

/// Canonical re-emission; parsing the result reproduces an identical model.
std::string canonical_spec(const ParsedSpec& spec);

}  // namespace pms
