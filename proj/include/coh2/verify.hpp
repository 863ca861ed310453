#pragma once

// The end-to-end verification pipeline behind `coh2 verify-paper`:
// eight stages over the unitriangular/Borel family at a prime p,
// each returning pass/fail, timing, and a JSON detail blob.

#include <string>
#include <vector>

#include <json.hpp>

#include "coh2/negligible.hpp"

namespace coh2 {

struct StageResult {
  char id = '?';
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  nlohmann::json details;
};

struct VerifyOptions {
  u32 p = 3;
  std::string stages = "abcdefgh";  // subset of stage letters to run
  Caps caps;
};

// Stage letters:
//   a  order-p lifting obstruction for p in {5,7}, n <= 3
//   b  inconsistency of the two-generator lifting system at p=3
//   c  res_N of the matrix-family class: non-coboundary, torus-invariant
//   d  image inclusions between rank-1 and rank-2 subgroup contributions
//   e  restricted span containment (U-, N-, and center-generated parts)
//   f  torus-fixed part of the restricted span is trivial, plus the
//      S-norm character identities
//   g  flagship non-membership under both generator strategies
//   h  Borel-to-GL reduction chain consistency (p=3)
std::vector<StageResult> run_verify_paper(const VerifyOptions& opt);

}  // namespace coh2
