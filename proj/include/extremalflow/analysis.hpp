#pragma once

// Intersection counting, ordered sign words, the semi-order between pinned
// curves, and the Lyapunov / energy monitors evaluated along trajectories.

#include "extremalflow/geometry.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace extremalflow {

enum class Sign : char { Plus = '+', Minus = '-' };

/// Signs of c1 - c2 on the arcs between consecutive intersections, P to Q.
class SgnWord {
public:
  SgnWord() = default;
  explicit SgnWord(std::vector<Sign> letters) : letters_(std::move(letters)) {}

  /// Parses "-+-"; spaces and brackets are ignored, so "[- + -]" also works.
  static SgnWord parse(std::string_view text);

  const std::vector<Sign>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  /// Number of intersections including both endpoints.
  int z() const { return static_cast<int>(letters_.size()) + 1; }
  bool contains(Sign s) const;
  /// The word with every letter flipped (arguments swapped).
  SgnWord flipped() const;
  std::string str() const;

  friend bool operator==(const SgnWord&, const SgnWord&) = default;

private:
  std::vector<Sign> letters_;
};

/// True iff `sub` is a subsequence of `word` (word |> sub).
bool subword(const SgnWord& word, const SgnWord& sub);

enum class Parameterization { Polar, Graph, SignedDistance };

/// Oriented gap c1 - c2 along a common parameter, ordered from P to Q.
struct GapProfile {
  Parameterization kind = Parameterization::Graph;
  std::vector<double> param;
  std::vector<double> gap;
};

struct IntersectionOptions {
  /// Gaps with |gap| <= tol are treated as contact.
  double tol = 1e-6;
  /// A contact run longer than this fraction of the parameter span means the
  /// curves coincide on a sub-arc and the count is rejected.
  double coincide_fraction = 0.1;
};

/// Polar angle when both curves are star-shaped about the origin in {y >= 0},
/// else x when both are graphs, else signed distance along c1.
GapProfile gap_profile(const SampledCurve& c1, const SampledCurve& c2);

bool is_polar_chartable(const SampledCurve& c);
bool is_graph_chartable(const SampledCurve& c);

SgnWord sgn_word(const SampledCurve& c1, const SampledCurve& c2, IntersectionOptions opt = {});
int intersection_count(const SampledCurve& c1, const SampledCurve& c2, IntersectionOptions opt = {});
SgnWord word_from_gap(const GapProfile& g, IntersectionOptions opt = {});

enum class Order { Above, Below, Crossing, Touching };
std::string_view to_string(Order o);

/// Semi-order of c1 relative to c2. Endpoint tangents closer than
/// `angle_tol` radians count as tangential contact.
Order semi_order(const SampledCurve& c1, const SampledCurve& c2, double tol = 1e-6,
                 double angle_tol = 1e-6);

struct LyapunovValue {
  double J = 0.0;        // integral of sqrt(1 + u_x^2)
  double integral_u = 0.0;
  double monitor = 0.0;  // J - A * integral_u
};

LyapunovValue lyapunov_graph(const GraphProfile& g);

struct EnergyRecord {
  double t = 0.0;
  double L = 0.0;
  double S = 0.0;
  double E = 0.0;       // L - A S
  double J_graph = 0.0; // NaN outside the graph chart
  double dissipation = 0.0;
};

/// L, S, E = L - A S and the dissipation rate. Throws DomainError below the axis.
EnergyRecord energy(const SampledCurve& c, double A);
/// Quadrature of (kappa - A)^2 over arc length.
double dissipation_estimate(const SampledCurve& c, double A);
/// One-sided curvature estimates at P and Q.
std::pair<double, double> endpoint_curvature(const SampledCurve& c);
/// |kappa(P) - A| and |kappa(Q) - A|.
std::pair<double, double> endpoint_curvature_deviation(const SampledCurve& c, double A);

} // namespace extremalflow
