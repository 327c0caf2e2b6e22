#pragma once

#include <string>
#include <vector>

#include "zyg/field.hpp"
#include "zyg/geometry.hpp"
#include "zyg/report.hpp"

namespace zyg {

// Family of Zygmund rectangles over which suprema (maximal function, A_p
// characteristic, bmo norm) are taken. Every member satisfies the side
// constraint.
struct RectangleFamily {
  std::vector<ZygmundRectangle> rectangles;
  std::string descriptor;
};

// All dyadic Zygmund rectangles of the box with sides (L1 2^-p, L2 2^-q,
// L3 2^-(p+q)) down to the 2-cell floor, plus (optionally) their half-step
// translates, capped in size. Requires L3 == L1*L2 so the dyadic scales stay
// Zygmund.
RectangleFamily dyadic_family(const Grid3& grid, bool translated, std::size_t cap = 1000000);

// Family from an explicit list (validated).
RectangleFamily explicit_family(std::vector<ZygmundRectangle> rects);

// At each node, sup over family members containing it of the mean of |f|;
// uncovered nodes keep |f|.
ScalarField3 maximal_zygmund(const ScalarField3& f, const RectangleFamily& family);

struct ApChar {
  double p = 2.0;
  double value = 1.0;
  ZygmundRectangle argmax;
};

// sup over the family of (mean w)(mean w^(-1/(p-1)))^(p-1).
ApChar ap_z_characteristic(const ScalarField3& w, double p, const RectangleFamily& family);

struct BmoNorm {
  double value = 0.0;
  ZygmundRectangle argmax;
};

// sup over the family of the mean oscillation (1/|R|) int_R |b - b_R|.
BmoNorm bmo_z_norm(const ScalarField3& b, const RectangleFamily& family);

// Median over the nodes of R (node-count measure); even counts take the
// midpoint of the two middle order statistics.
double median(const ScalarField3& b, const ZygmundRectangle& R);

struct JnTailResult {
  std::vector<double> thresholds;
  std::vector<double> sup_fraction;  // sup over B of mu(|b-b_B|>t)/mu(B)
  LineFit fit;                       // log sup-fraction vs t, on the fit window
  double bmo = 0.0;
  ExperimentReport report;
};

// Distribution tails of |b - b_B| over the family; thresholds may be empty to
// request an automatic grid spanning [1,8] x bmo norm. The fit window drops
// the top and bottom 10% of usable thresholds.
JnTailResult jn_tail(const ScalarField3& b, const RectangleFamily& family,
                     std::vector<double> thresholds = {});

struct ExpLogResult {
  double ap_char = 0.0;        // [w]_{A_p} of the input or of e^(delta b)
  double bmo_log = 0.0;        // direction (i): bmo of log w
  double majorant = 0.0;       // direction (i): [w] max([w], (p-1)[w]^(1/(p-1)))
  double delta = 0.0;          // direction (ii): found exponent
  bool found = false;          // direction (ii)
  ExperimentReport report;
};

// Direction (i): check bmo(log w) against the explicit majorant from the A_p
// characteristic.
ExpLogResult exp_log_weight_to_bmo(const ScalarField3& w, double p,
                                   const RectangleFamily& family);

// Direction (ii): halve delta from gamma/||b|| until [e^(delta b)]_{A_2} <= 4.
ExpLogResult exp_log_bmo_to_weight(const ScalarField3& b, const RectangleFamily& family,
                                   double char_target = 4.0, int max_halvings = 20);

}  // namespace zyg
